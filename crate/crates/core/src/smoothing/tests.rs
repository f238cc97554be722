use super::*;
use crate::generator::Catalog;
use crate::lattice::join;
use crate::mean::qa_mean;
use crate::order::pales_distance;
use alloc::vec;
use core::f64::consts::FRAC_PI_2;

fn unit() -> Interval {
    Interval::with_margin(-1.0, 1.0, 0.0).unwrap()
}

fn line(slope: f64) -> Generator {
    Generator::catalog(Catalog::Identity, Interval::with_margin(-2.0, 2.0, 0.0).unwrap())
        .unwrap()
        .affine(slope, 0.0)
        .unwrap()
}

#[test]
fn single_kink_becomes_linear() {
    let s = PiecewiseGenerator::new(unit(), vec![0.0], vec![line(1.0), line(2.0)]).unwrap();
    assert_eq!(s.pending(), vec![0]);
    let s2 = smooth_step(&s, 0).unwrap();
    assert!(s2.pending().is_empty());
    for i in 0..=40 {
        let x = -1.0 + i as f64 * 0.05;
        // plugging r = 2 into the rescaling gives 2x on both sides
        assert_eq!(s2.value(x), 2.0 * x);
        assert!(s2.value(x) <= s.value(x));
    }
}

#[test]
fn unit_ratio_leaves_s_unchanged() {
    let s = PiecewiseGenerator::new(unit(), vec![0.0], vec![line(3.0), line(3.0)]).unwrap();
    assert!(s.pending().is_empty());
    let s2 = smooth_step(&s, 0).unwrap();
    for x in [-0.9, -0.2, 0.0, 0.6] {
        assert_eq!(s2.value(x), s.value(x));
    }
}

#[test]
fn resolving_a_right_kink_rescales_the_left_region() {
    let s = PiecewiseGenerator::new(unit(), vec![-0.5, 0.5], vec![line(1.0), line(2.0), line(6.0)]).unwrap();
    let s2 = smooth_step(&s, 1).unwrap();
    let k = s2.kinks();
    // r = 3: left slopes 1, 2 become 3, 6; the left ratio stays 2
    assert_eq!((k[0].left_slope, k[0].right_slope), (3.0, 6.0));
    assert_eq!(k[0].ratio(), 2.0);
    assert!(k[1].is_smooth());
    // by hand: s(0.5) = -0.5 + 2 = 1.5, s2(x) = 3(s(x) - 1.5) + 1.5 left of 0.5
    for x in [-0.9, -0.5, 0.0, 0.3] {
        assert!((s2.value(x) - (3.0 * (s.value(x) - 1.5) + 1.5)).abs() < 1e-15);
    }
    assert_eq!(s2.value(0.8), s.value(0.8));
}

#[test]
fn step_rejects_bad_index_and_downward_kinks() {
    let s = PiecewiseGenerator::new(unit(), vec![0.0], vec![line(1.0), line(2.0)]).unwrap();
    assert!(smooth_step(&s, 3).is_err());
    assert!(PiecewiseGenerator::new(unit(), vec![0.0], vec![line(2.0), line(1.0)]).is_err());
}

#[test]
fn smooth_all_without_kinks_is_identity() {
    let id = Generator::catalog(Catalog::Identity, unit()).unwrap();
    let s = PiecewiseGenerator::new(unit(), vec![], vec![line(1.0)]).unwrap();
    let out = smooth_all(&s, &id, &id, 10).unwrap();
    assert!(out.steps.is_empty());
    for x in [-0.7, 0.1, 0.9] {
        assert_eq!(out.generator.value(x).unwrap(), x);
    }
}

#[test]
fn smooth_all_single_kink_example() {
    let id = Generator::catalog(Catalog::Identity, unit()).unwrap();
    let s = PiecewiseGenerator::new(unit(), vec![0.0], vec![line(1.0), line(2.0)]).unwrap();
    let out = smooth_all(&s, &id, &id, 10).unwrap();
    assert_eq!(out.steps.len(), 1);
    assert_eq!(out.steps[0].ratio, 2.0);
    assert!(out.piecewise.pending().is_empty());
    for x in [-0.7, 0.0, 0.9] {
        assert_eq!(out.generator.value(x).unwrap(), 2.0 * x);
    }
    let v = [-0.4, 0.1, 0.9];
    assert!((qa_mean(&out.generator, &v).unwrap() - 0.2).abs() < 1e-15);
}

#[test]
fn sin_tan_glue_is_already_smooth() {
    let iv = Interval::with_margin(-FRAC_PI_2, FRAC_PI_2, 0.01).unwrap();
    let wide = Interval::new(-FRAC_PI_2, FRAC_PI_2).unwrap();
    let sin = Generator::catalog(Catalog::Sin, wide).unwrap();
    let tan = Generator::catalog(Catalog::Tan, wide).unwrap();
    let s = PiecewiseGenerator::new(iv, vec![0.0], vec![sin.clone(), tan.clone()]).unwrap();
    assert!(s.pending().is_empty());
    let out = smooth_all(&s, &sin, &tan, 10).unwrap();
    assert!(out.steps.is_empty());
    let j = join(&[sin, tan], &iv).unwrap();
    let grid = make_grid(&iv, 512).unwrap();
    assert!(pales_distance(&out.generator, &j.generator, &grid).unwrap() <= 1e-6);
}

#[test]
fn membership_examples() {
    let iv = Interval::with_margin(-FRAC_PI_2, FRAC_PI_2, 0.01).unwrap();
    let wide = Interval::new(-FRAC_PI_2, FRAC_PI_2).unwrap();
    let sin = Generator::catalog(Catalog::Sin, wide).unwrap();
    let tan = Generator::catalog(Catalog::Tan, wide).unwrap();
    let j = join(&[sin.clone(), tan.clone()], &iv).unwrap();
    let s = PiecewiseGenerator::new(iv, vec![], vec![j.generator.clone()]).unwrap();
    assert!(membership_check(&s, &sin).unwrap());
    assert!(membership_check(&s, &tan).unwrap());

    let right = Interval::with_margin(0.01, FRAC_PI_2 - 0.01, 0.0).unwrap();
    let s = PiecewiseGenerator::new(right, vec![], vec![sin.clone()]).unwrap();
    assert!(!membership_check(&s, &tan).unwrap());
    assert!(membership_check(&s, &sin).unwrap());
}

#[test]
fn smooth_all_rejects_non_dominating_bounds() {
    let right = Interval::with_margin(0.01, FRAC_PI_2 - 0.01, 0.0).unwrap();
    let wide = Interval::new(-FRAC_PI_2, FRAC_PI_2).unwrap();
    let sin = Generator::catalog(Catalog::Sin, wide).unwrap();
    let tan = Generator::catalog(Catalog::Tan, wide).unwrap();
    let s = PiecewiseGenerator::new(right, vec![], vec![sin.clone()]).unwrap();
    match smooth_all(&s, &sin, &tan, 10) {
        Err(Error::Precondition(msg)) => assert!(msg.contains("does not dominate g")),
        other => panic!("expected precondition error, got {other:?}"),
    }
}

#[test]
fn downward_kink_violates_membership() {
    let id = Generator::catalog(Catalog::Identity, unit()).unwrap();
    // built by hand: concave kink in s∘id⁻¹
    let mut s = PiecewiseGenerator::new(unit(), vec![0.0], vec![line(1.0), line(1.0)]).unwrap();
    s.scales[1] = 0.5;
    s.shifts[1] = 0.0;
    assert!(!membership_check(&s, &id).unwrap());
}

#[test]
fn kink_next_to_a_grid_point() {
    let iv = Interval::with_margin(0.5, 4.0, 0.0).unwrap();
    let log = Generator::catalog(Catalog::Log, Interval::with_margin(0.25, 8.0, 0.0).unwrap()).unwrap();
    let near = 0.5 + 130.0 * 3.5 / 511.0 - 2e-5;
    let kinks = vec![near, 1.7006975548432888, 2.6311991382240985];
    let pieces = vec![
        log.clone(),
        log.affine(1.9, 0.0).unwrap(),
        log.affine(2.4, 0.0).unwrap(),
        log.affine(6.1, 0.0).unwrap(),
    ];
    let s = PiecewiseGenerator::new(iv, kinks, pieces).unwrap();
    let f = log.restrict(iv).unwrap();
    let out = smooth_all(&s, &f, &f, 8).unwrap();
    assert_eq!(out.steps.len(), 3);
    assert!(out.piecewise.pending().is_empty());
}
