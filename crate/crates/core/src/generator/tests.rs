use super::*;
use crate::interval::make_grid;
use alloc::vec;
use core::f64::consts::{FRAC_PI_2, FRAC_PI_3, FRAC_PI_4, FRAC_PI_6};

fn half_pi(margin: f64) -> Interval {
    Interval::with_margin(-FRAC_PI_2, FRAC_PI_2, margin).unwrap()
}

fn sin() -> Generator {
    Generator::catalog(Catalog::Sin, half_pi(0.01)).unwrap()
}

fn tan() -> Generator {
    Generator::catalog(Catalog::Tan, half_pi(0.01)).unwrap()
}

fn minus_tan() -> ArrowPrattIndex {
    ArrowPrattIndex::new(|x| -libm::tan(x), vec![])
}

#[test]
fn catalog_values_and_derivatives() {
    assert!((sin().value(FRAC_PI_6).unwrap() - 0.5).abs() < 1e-15);
    assert_eq!(tan().deriv1(0.0).unwrap(), 1.0);
    let p2 = Generator::catalog(Catalog::Power(2.0), Interval::new(1e-6, 100.0).unwrap()).unwrap();
    assert_eq!(p2.deriv2(3.0).unwrap(), 2.0);
}

#[test]
fn catalog_rejects_bad_domains() {
    let iv = Interval::with_margin(-1.0, 1.0, 0.0).unwrap();
    assert!(Generator::catalog(Catalog::Log, iv).is_err());
    assert!(Generator::catalog(Catalog::Power(0.0), Interval::new(1.0, 2.0).unwrap()).is_err());
    assert!(Generator::catalog(Catalog::Tan, half_pi(0.0)).is_err());
}

#[test]
fn arrow_pratt_of_sin_and_tan() {
    let a = sin().arrow_pratt().unwrap();
    let b = tan().arrow_pratt().unwrap();
    assert!((a.at(FRAC_PI_4) + 1.0).abs() < 1e-15);
    assert!((b.at(FRAC_PI_4) - 2.0).abs() < 1e-15);
}

#[test]
fn arrow_pratt_of_power_matches_hand_derivation() {
    // (x^p)'' / (x^p)' = p(p-1)x^{p-2} / (p x^{p-1}) = (p-1)/x
    let iv = Interval::new(0.1, 10.0).unwrap();
    for p in [-1.0, 0.5, 2.0, 3.0] {
        let g = Generator::catalog(Catalog::Power(p), iv).unwrap();
        let a = g.arrow_pratt().unwrap();
        for x in [0.2, 1.0, 3.7, 9.0] {
            let ratio = g.deriv2(x).unwrap() / g.deriv1(x).unwrap();
            assert!((a.at(x) - (p - 1.0) / x).abs() < 1e-14);
            assert!((ratio - (p - 1.0) / x).abs() < 1e-12);
        }
    }
}

#[test]
fn cube_through_zero_is_not_sm() {
    let iv = Interval::with_margin(-0.99, 0.99, 0.0).unwrap();
    let cube = Generator::catalog(Catalog::Cube, iv).unwrap();
    assert!(!cube.smoothness().nonvanishing);
    assert!(matches!(cube.arrow_pratt(), Err(crate::Error::Capability(_))));
    let pos = cube.restrict(Interval::new(0.1, 0.9).unwrap()).unwrap();
    assert!(pos.smoothness().is_sm());
}

#[test]
fn reconstruct_zero_index_is_identity() {
    let iv = Interval::with_margin(-2.0, 2.0, 0.0).unwrap();
    let h = Generator::from_index(ArrowPrattIndex::constant(0.0), iv, 0.0).unwrap();
    assert!((h.value(1.7).unwrap() - 1.7).abs() < 1e-14);
    assert!((h.value(-0.3).unwrap() + 0.3).abs() < 1e-14);
}

#[test]
fn reconstruct_minus_tan_gives_sine() {
    // exp(∫_0^x -tan) = cos x, ∫_0^x cos = sin x
    let h = Generator::from_index(minus_tan(), half_pi(0.01), 0.0).unwrap();
    assert!((h.value(FRAC_PI_6).unwrap() - 0.5).abs() < 1e-8);
    assert!((h.deriv1(FRAC_PI_3).unwrap() - 0.5).abs() < 1e-8);
    let grid = make_grid(h.interval(), 301).unwrap();
    for &x in grid.points() {
        assert!((h.value(x).unwrap() - libm::sin(x)).abs() < 1e-8, "x = {x}");
    }
}

#[test]
fn reconstruct_constant_index_gives_exponential() {
    // h'' = h', h(0) = 0, h'(0) = 1  =>  h = e^x - 1
    let iv = Interval::with_margin(-1.0, 2.0, 0.0).unwrap();
    let h = Generator::from_index(ArrowPrattIndex::constant(1.0), iv, 0.0).unwrap();
    let grid = make_grid(&iv, 97).unwrap();
    for &x in grid.points() {
        assert!((h.value(x).unwrap() - (libm::exp(x) - 1.0)).abs() < 1e-8, "x = {x}");
    }
}

#[test]
fn reconstruct_rejects_non_finite_index() {
    let iv = Interval::with_margin(-1.0, 1.0, 0.0).unwrap();
    let bad = ArrowPrattIndex::new(|x| 1.0 / x, vec![]);
    assert!(matches!(Generator::from_index(bad, iv, 0.5), Err(crate::Error::Domain(_))));
}

#[test]
fn reflection() {
    let id = Generator::catalog(Catalog::Identity, Interval::with_margin(0.0, 1.0, 0.0).unwrap()).unwrap();
    let r = id.reflect();
    assert_eq!((r.interval().lo(), r.interval().hi()), (-1.0, 0.0));
    assert!(!r.is_increasing());
    assert_eq!(r.value(-0.25).unwrap(), 0.25);

    let s = sin();
    let rs = s.reflect();
    let a = s.arrow_pratt().unwrap();
    let ra = rs.arrow_pratt().unwrap();
    let grid = make_grid(rs.interval(), 129).unwrap();
    for &x in grid.points() {
        assert!((rs.value(x).unwrap() + libm::sin(x)).abs() < 1e-15);
        // index of the reflection is -A(-x); from derivatives directly:
        let direct = -s.deriv2(-x).unwrap() / s.deriv1(-x).unwrap();
        assert!((ra.at(x) - direct).abs() < 1e-8);
        assert!((ra.at(x) + a.at(-x)).abs() <= 1e-8);
    }
    let back = rs.reflect();
    for &x in grid.points() {
        assert_eq!(back.value(x).unwrap(), s.value(x).unwrap());
    }
}

#[test]
fn affine_transforms() {
    let iv = Interval::with_margin(-5.0, 5.0, 0.0).unwrap();
    let id = Generator::catalog(Catalog::Identity, iv).unwrap();
    assert_eq!(id.affine(2.0, 3.0).unwrap().value(1.0).unwrap(), 5.0);
    assert!(id.affine(0.0, 1.0).is_err());

    let s = sin().affine(-7.0, 1.0).unwrap();
    assert!(!s.is_increasing());
    assert!((s.arrow_pratt().unwrap().at(FRAC_PI_4) + 1.0).abs() < 1e-15);

    let same = sin().affine(1.0, 0.0).unwrap();
    for x in [-1.2, 0.0, 0.4] {
        assert_eq!(same.value(x).unwrap(), sin().value(x).unwrap());
    }
}

#[test]
fn affine_invariance_of_index_is_exact() {
    let g = tan();
    let a = g.arrow_pratt().unwrap();
    let grid = make_grid(g.interval(), 64).unwrap();
    for (alpha, beta) in [(-3.0, -1.0), (0.5, 0.0), (10.0, 7.0)] {
        let b = g.affine(alpha, beta).unwrap().arrow_pratt().unwrap();
        for &x in grid.points() {
            assert_eq!(a.at(x), b.at(x));
        }
    }
}

fn sm_catalog() -> Vec<Generator> {
    let pos = Interval::new(0.1, 10.0).unwrap();
    let sym = Interval::new(-2.0, 2.0).unwrap();
    vec![
        Generator::catalog(Catalog::Identity, sym).unwrap(),
        Generator::catalog(Catalog::Power(-1.0), pos).unwrap(),
        Generator::catalog(Catalog::Power(0.5), pos).unwrap(),
        Generator::catalog(Catalog::Power(2.0), pos).unwrap(),
        Generator::catalog(Catalog::Power(3.0), pos).unwrap(),
        Generator::catalog(Catalog::Log, pos).unwrap(),
        Generator::catalog(Catalog::ExpScaled(1.0), sym).unwrap(),
        Generator::catalog(Catalog::ExpScaled(-2.5), sym).unwrap(),
        Generator::catalog(Catalog::Sin, Interval::new(-FRAC_PI_2, FRAC_PI_2).unwrap()).unwrap(),
        Generator::catalog(Catalog::Tan, half_pi(0.01)).unwrap(),
        Generator::catalog(Catalog::Cube, Interval::new(0.1, 2.0).unwrap()).unwrap(),
    ]
}

#[test]
fn first_and_second_derivatives_match_finite_differences() {
    for g in sm_catalog() {
        let grid = make_grid(g.interval(), 41).unwrap();
        let pts = grid.points();
        for &x in &pts[1..pts.len() - 1] {
            let h = 1e-5 * (1.0 + x.abs());
            let fd1 = (g.eval(x + h) - g.eval(x - h)) / (2.0 * h);
            let fd2 = (g.eval_d1(x + h, Side::Right) - g.eval_d1(x - h, Side::Right)) / (2.0 * h);
            let d1 = g.deriv1(x).unwrap();
            let d2 = g.deriv2(x).unwrap();
            assert!((fd1 - d1).abs() <= 1e-5 * d1.abs().max(1.0), "{g:?} at {x}");
            assert!((fd2 - d2).abs() <= 1e-5 * d2.abs().max(1.0), "{g:?} at {x}");
        }
    }
}

#[test]
fn index_defined_derivatives_match_finite_differences() {
    let h = Generator::from_index(minus_tan().plus(&ArrowPrattIndex::constant(0.3)), half_pi(0.05), 0.2).unwrap();
    let grid = make_grid(h.interval(), 21).unwrap();
    let pts = grid.points();
    for &x in &pts[1..pts.len() - 1] {
        let e = 1e-5;
        let fd1 = (h.eval(x + e) - h.eval(x - e)) / (2.0 * e);
        let fd2 = (h.eval_d1(x + e, Side::Right) - h.eval_d1(x - e, Side::Right)) / (2.0 * e);
        let d1 = h.deriv1(x).unwrap();
        let d2 = h.deriv2(x).unwrap();
        assert!((fd1 - d1).abs() <= 1e-5 * d1.abs().max(1.0));
        assert!((fd2 - d2).abs() <= 1e-5 * d2.abs().max(1.0));
    }
}

#[test]
fn piecewise_glue_of_sin_and_tan_is_c2() {
    let iv = half_pi(0.01);
    let g = Generator::piecewise(iv, vec![0.0], vec![sin(), tan()]).unwrap();
    assert!(g.smoothness().is_sm());
    assert_eq!(g.breakpoints(), vec![0.0]);
    assert!((g.value(-0.5).unwrap() - libm::sin(-0.5)).abs() < 1e-15);
    assert!((g.value(0.5).unwrap() - libm::tan(0.5)).abs() < 1e-15);
    let a = g.arrow_pratt().unwrap();
    assert_eq!(a.kinks(), &[0.0]);
    assert_eq!(a.at(-0.5), -libm::tan(-0.5));
    assert_eq!(a.at(0.5), 2.0 * libm::tan(0.5));
}

#[test]
fn piecewise_glue_enforces_continuity_and_direction() {
    let iv = Interval::with_margin(-1.0, 1.0, 0.0).unwrap();
    let id = Generator::catalog(Catalog::Identity, iv).unwrap();
    let shifted = id.affine(2.0, 5.0).unwrap();
    let g = Generator::piecewise(iv, vec![0.0], vec![id.clone(), shifted]).unwrap();
    assert!((g.value(0.5).unwrap() - 1.0).abs() < 1e-15);
    assert!(!g.smoothness().c1);
    assert_eq!(g.deriv1_side(0.0, Side::Left).unwrap(), 1.0);
    assert_eq!(g.deriv1_side(0.0, Side::Right).unwrap(), 2.0);
    assert!(g.deriv1(0.2).is_err());

    let down = id.affine(-1.0, 0.0).unwrap();
    assert!(Generator::piecewise(iv, vec![0.0], vec![id, down]).is_err());
}
