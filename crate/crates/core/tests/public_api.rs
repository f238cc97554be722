use qam_core::{
    c2c1_compare, compare_index, join, make_grid, meet, qa_mean, Catalog, Error, Generator, Interval, Verdict,
};

fn power(p: f64, iv: Interval) -> Generator {
    Generator::catalog(Catalog::Power(p), iv).unwrap()
}

#[test]
fn join_of_powers_sits_between_operands_and_larger_power() {
    let iv = Interval::with_margin(0.2, 5.0, 0.0).unwrap();
    let fam = [power(-1.0, iv), power(0.5, iv), Generator::catalog(Catalog::Log, iv).unwrap()];
    let j = join(&fam, &iv).unwrap();
    let grid = make_grid(&iv, 256).unwrap();
    for f in &fam {
        assert!(c2c1_compare(f, &j.generator, &grid, 1e-9).unwrap());
    }
    let above = power(1.0, iv);
    assert_eq!(compare_index(&j.generator, &above, &grid, 1e-9).unwrap().verdict, Verdict::Less);
    let v = [0.3, 1.7, 4.2];
    // join of these indices is the p = 0.5 power mean
    let want = ((0.3f64.sqrt() + 1.7f64.sqrt() + 4.2f64.sqrt()) / 3.0).powi(2);
    assert!((qa_mean(&j.generator, &v).unwrap() - want).abs() < 1e-9);
    let m = meet(&fam, &iv).unwrap();
    let harmonic = 3.0 / (1.0 / 0.3 + 1.0 / 1.7 + 1.0 / 4.2);
    assert!((qa_mean(&m.generator, &v).unwrap() - harmonic).abs() < 1e-9);
}

#[test]
fn errors_are_typed() {
    let iv = Interval::with_margin(-1.0, 1.0, 0.0).unwrap();
    assert!(matches!(Generator::catalog(Catalog::Log, iv), Err(Error::Domain(_))));
    let cube = Generator::catalog(Catalog::Cube, iv).unwrap();
    assert!(matches!(cube.arrow_pratt(), Err(Error::Capability(_))));
    let id = Generator::catalog(Catalog::Identity, iv).unwrap();
    assert!(matches!(qa_mean(&id, &[0.0, 2.0]), Err(Error::Domain(_))));
    assert!(matches!(join(&[], &iv), Err(Error::Precondition(_))));
}
