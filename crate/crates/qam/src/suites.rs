//! Property suites behind `qam verify`.

use std::f64::consts::FRAC_PI_2;
use std::io::Write;

use qam_core::generator::reconstruct;
use qam_core::{
    c2c1_compare, compare_convexity, compare_index, compare_ratio, join, make_grid, meet, membership_check, qa_mean,
    smooth_all, Catalog, Error, Generator, Interval, PiecewiseGenerator, Side, Verdict,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cli::{CmdResult, Failure, Opts};
use crate::report::sample_vectors;
use crate::spec::GenSpec;

type Outcome = Result<usize, String>;
type Suite = fn(&mut Ctx) -> Result<Outcome, Error>;

struct Ctx {
    rng: ChaCha8Rng,
    grid: usize,
    tol: f64,
}

pub fn run_all(o: &Opts, out: &mut dyn Write) -> CmdResult {
    let suites: [(&str, Suite); 7] = [
        ("interval", interval),
        ("generator", generator),
        ("mean", mean),
        ("order", order),
        ("lattice", lattice),
        ("smoothing", smoothing),
        ("spec", spec_round_trip),
    ];
    writeln!(out, "{}", o.header("verify"))?;
    let mut first_failure = None;
    for (name, suite) in suites {
        let mut ctx = Ctx { rng: ChaCha8Rng::seed_from_u64(o.seed), grid: o.grid_size(), tol: o.tol };
        let outcome = suite(&mut ctx).unwrap_or_else(|e| Err(format!("error: {e}")));
        match outcome {
            Ok(n) => writeln!(out, "suite {name}: pass ({n} checks)")?,
            Err(why) => {
                writeln!(out, "suite {name}: FAIL: {why}")?;
                first_failure.get_or_insert(format!("suite {name}: {why}"));
            }
        }
    }
    match first_failure {
        None => Ok(()),
        Some(why) => Err(Failure::Verify(format!("first counterexample: {why}"))),
    }
}

fn check(count: &mut usize, ok: bool, why: impl FnOnce() -> String) -> Result<(), String> {
    *count += 1;
    if ok {
        Ok(())
    } else {
        Err(why())
    }
}

fn positive() -> Result<Interval, Error> {
    Interval::with_margin(0.1, 1.5, 0.0)
}

fn family(iv: Interval) -> Result<Vec<Generator>, Error> {
    [
        Catalog::Identity,
        Catalog::Power(2.0),
        Catalog::Power(3.0),
        Catalog::Log,
        Catalog::ExpScaled(1.0),
        Catalog::Sin,
        Catalog::Tan,
    ]
    .into_iter()
    .map(|c| Generator::catalog(c, iv))
    .collect()
}

fn interval(ctx: &mut Ctx) -> Result<Outcome, Error> {
    let mut n = 0;
    for _ in 0..50 {
        let a: f64 = ctx.rng.gen_range(-10.0..10.0);
        let w: f64 = ctx.rng.gen_range(0.01..10.0);
        let sym = ctx.rng.gen_bool(0.3);
        let (lo, hi) = if sym { (-w, w) } else { (a, a + w) };
        let iv = Interval::new(lo, hi)?;
        let g = make_grid(&iv, ctx.grid)?;
        let p = g.points();
        if let Err(e) = check(&mut n, p.len() == ctx.grid && p.windows(2).all(|w| w[0] < w[1]), || {
            format!("grid on [{lo}, {hi}] is not {} increasing points", ctx.grid)
        }) {
            return Ok(Err(e));
        }
        if let Err(e) = check(&mut n, p[0] == iv.start() && p[p.len() - 1] == iv.end(), || {
            format!("grid on [{lo}, {hi}] misses the working endpoints")
        }) {
            return Ok(Err(e));
        }
        if sym {
            let mirrored = p.iter().zip(p.iter().rev()).all(|(x, y)| *x == -*y);
            if let Err(e) = check(&mut n, mirrored, || format!("grid on [{lo}, {hi}] is not mirrored")) {
                return Ok(Err(e));
            }
        }
    }
    Ok(Ok(n))
}

fn generator(ctx: &mut Ctx) -> Result<Outcome, Error> {
    let mut n = 0;
    let iv = positive()?;
    let fam = family(iv)?;
    let xs: Vec<f64> = (0..40).map(|_| ctx.rng.gen_range(iv.start()..=iv.end())).collect();
    for f in &fam {
        let a = f.arrow_pratt()?;
        let fr = f.reflect();
        let ar = fr.arrow_pratt()?;
        let g = f.affine(ctx.rng.gen_range(-3.0..3.0) + 3.5, ctx.rng.gen_range(-5.0..5.0))?;
        let ag = g.arrow_pratt()?;
        for &x in &xs {
            let r = check(&mut n, (ar.at(-x) + a.at(x)).abs() <= 1e-12 * (1.0 + a.at(x).abs()), || {
                format!("reflected index identity fails at {x}")
            })
            .and_then(|_| check(&mut n, ag.at(x) == a.at(x), || format!("affine index differs at {x}")));
            if let Err(e) = r {
                return Ok(Err(e));
            }
        }
    }
    for f in [&fam[1], &fam[5]] {
        let x0 = iv.midpoint();
        let h = reconstruct(&f.arrow_pratt()?, &iv, Some(x0))?;
        let (f0, d0) = (f.value(x0)?, f.deriv1(x0)?);
        for x in make_grid(&iv, ctx.grid)?.points() {
            let want = (f.value(*x)? - f0) / d0;
            if let Err(e) = check(&mut n, (h.value(*x)? - want).abs() <= 1e-6, || {
                format!("reconstruction of {:?} is off at {x}", f.view_name())
            }) {
                return Ok(Err(e));
            }
        }
    }
    Ok(Ok(n))
}

trait Named {
    fn view_name(&self) -> String;
}

impl Named for Generator {
    fn view_name(&self) -> String {
        match self.view() {
            qam_core::generator::View::Catalog(c) => format!("{c:?}"),
            _ => "generator".into(),
        }
    }
}

fn mean(ctx: &mut Ctx) -> Result<Outcome, Error> {
    let mut n = 0;
    let iv = positive()?;
    let fam = family(iv)?;
    let vs = sample_vectors(&mut ctx.rng, &iv, 60);
    for f in &fam {
        let fa = f.affine(-2.0, 1.0)?;
        let fr = f.reflect();
        for v in &vs {
            let m = qa_mean(f, v)?;
            let lo = v.iter().copied().fold(f64::INFINITY, f64::min);
            let hi = v.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            let mut rev = v.clone();
            rev.reverse();
            let neg: Vec<f64> = v.iter().map(|x| -x).collect();
            let r = check(&mut n, lo <= m && m <= hi, || format!("{v:?}: mean {m} is not internal"))
                .and_then(|_| {
                    let mr = qa_mean(f, &rev).unwrap();
                    check(&mut n, (mr - m).abs() <= 1e-12 * hi, || format!("{v:?}: not symmetric"))
                })
                .and_then(|_| {
                    let ma = qa_mean(&fa, v).unwrap();
                    check(&mut n, (ma - m).abs() <= 1e-10, || format!("{v:?}: affine image changes the mean"))
                })
                .and_then(|_| {
                    let mn = qa_mean(&fr, &neg).unwrap();
                    check(&mut n, (mn + m).abs() <= 1e-10, || format!("{v:?}: reflection duality fails"))
                });
            if let Err(e) = r {
                return Ok(Err(e));
            }
        }
    }
    Ok(Ok(n))
}

fn order(ctx: &mut Ctx) -> Result<Outcome, Error> {
    let mut n = 0;
    let iv = positive()?;
    let fam = family(iv)?;
    let grid = make_grid(&iv, ctx.grid)?;
    let vs = sample_vectors(&mut ctx.rng, &iv, 40);
    for (i, f) in fam.iter().enumerate() {
        for g in &fam[i..] {
            let by_index = compare_index(f, g, &grid, ctx.tol)?.verdict;
            let by_convexity = compare_convexity(f, g, &grid, ctx.tol)?.verdict;
            let by_ratio = compare_ratio(f, g, &grid, ctx.tol)?.verdict;
            if let Err(e) = check(&mut n, by_index == by_convexity && by_index == by_ratio, || {
                format!(
                    "{} vs {}: index {}, convexity {}, ratio {}",
                    f.view_name(),
                    g.view_name(),
                    by_index.name(),
                    by_convexity.name(),
                    by_ratio.name()
                )
            }) {
                return Ok(Err(e));
            }
            if by_index != Verdict::Less {
                continue;
            }
            for v in &vs {
                let (mf, mg) = (qa_mean(f, v)?, qa_mean(g, v)?);
                if let Err(e) = check(&mut n, mf <= mg + 1e-10, || {
                    format!("{} ≺ {} but means {mf} > {mg} at {v:?}", f.view_name(), g.view_name())
                }) {
                    return Ok(Err(e));
                }
            }
        }
    }
    Ok(Ok(n))
}

fn lattice(ctx: &mut Ctx) -> Result<Outcome, Error> {
    let mut n = 0;
    let wide = Interval::new(-FRAC_PI_2, FRAC_PI_2)?;
    let iv = Interval::with_margin(-FRAC_PI_2, FRAC_PI_2, 0.01)?;
    let ops = [Generator::catalog(Catalog::Sin, wide)?, Generator::catalog(Catalog::Tan, wide)?];
    let j = join(&ops, &iv)?;
    let m = meet(&ops, &iv)?;
    let refl = join(&[ops[0].reflect(), ops[1].reflect()], &iv.reflected())?;
    for v in sample_vectors(&mut ctx.rng, &iv, 100) {
        let (mj, mm) = (qa_mean(&j.generator, &v)?, qa_mean(&m.generator, &v)?);
        let (ms, mt) = (qa_mean(&ops[0], &v)?, qa_mean(&ops[1], &v)?);
        let neg: Vec<f64> = v.iter().map(|x| -x).collect();
        let mr = qa_mean(&refl.generator, &neg)?;
        let r = check(&mut n, mj >= ms.max(mt) - 1e-9, || format!("{v:?}: join below an operand"))
            .and_then(|_| check(&mut n, mm <= ms.min(mt) + 1e-9, || format!("{v:?}: meet above an operand")))
            .and_then(|_| check(&mut n, (mm + mr).abs() <= 1e-8, || format!("{v:?}: meet/join duality fails")));
        if let Err(e) = r {
            return Ok(Err(e));
        }
    }
    let grid = make_grid(&iv, ctx.grid)?;
    for f in &ops {
        let r = check(&mut n, c2c1_compare(f, &j.generator, &grid, ctx.tol)?, || "operand not below join".into())
            .and_then(|_| {
                let v = f.restrict(iv).and_then(|f| compare_index(&m.generator, &f, &grid, ctx.tol)).map(|r| r.verdict);
                check(&mut n, matches!(v, Ok(Verdict::Less | Verdict::Equal)), || "meet not below operand".into())
            });
        if let Err(e) = r {
            return Ok(Err(e));
        }
    }
    Ok(Ok(n))
}

fn smoothing(ctx: &mut Ctx) -> Result<Outcome, Error> {
    let mut n = 0;
    let iv = Interval::with_margin(0.5, 4.0, 0.0)?;
    let log = Generator::catalog(Catalog::Log, Interval::with_margin(0.25, 8.0, 0.0)?)?;
    let mut kinks: Vec<f64> = (0..3).map(|_| ctx.rng.gen_range(0.7..3.8)).collect();
    kinks.sort_by(f64::total_cmp);
    kinks.dedup_by(|a, b| (*a - *b).abs() < 0.05);
    let mut slope = 1.0;
    let mut pieces = vec![log.clone()];
    for _ in &kinks {
        slope *= ctx.rng.gen_range(1.2..3.0);
        pieces.push(log.affine(slope, 0.0)?);
    }
    let s = PiecewiseGenerator::new(iv, kinks.clone(), pieces)?;
    let f = log.restrict(iv)?;
    let res = smooth_all(&s, &f, &f, 16)?;
    let grid = make_grid(&iv, ctx.grid)?.with_points(&iv, &kinks);
    let r = check(&mut n, res.steps.len() == kinks.len(), || format!("{} steps for {} kinks", res.steps.len(), kinks.len()))
        .and_then(|_| check(&mut n, res.piecewise.pending().is_empty(), || "kinks remain".into()))
        .and_then(|_| check(&mut n, membership_check(&res.piecewise, &f).unwrap_or(false), || "membership lost".into()))
        .and_then(|_| {
            let drop = grid.points().iter().all(|&x| res.piecewise.value(x) <= s.value(x) + 1e-12 * s.value(x).abs().max(1.0));
            check(&mut n, drop, || "smoothed bound exceeds the original".into())
        })
        .and_then(|_| {
            let smooth = res.piecewise.kinks().iter().all(|k| {
                let (l, r) = (res.piecewise.slope(k.at, Side::Left), res.piecewise.slope(k.at, Side::Right));
                (l - r).abs() <= 1e-12 * r.abs() && r > 0.0
            });
            check(&mut n, smooth, || "derivative still jumps or vanishes".into())
        });
    Ok(r.map(|_| n))
}

fn spec_round_trip(ctx: &mut Ctx) -> Result<Outcome, Error> {
    let mut n = 0;
    let half = FRAC_PI_2;
    let spec = GenSpec::Join {
        operands: vec![GenSpec::catalog("sin", [-half, half], None), GenSpec::catalog("tan", [-half, half], None)],
        interval: Some([-half, half]),
        margin: Some(0.01),
    };
    let back: GenSpec = serde_json::from_str(&spec.to_json()).map_err(|e| Error::Domain(e.to_string()))?;
    let (a, b) = (spec.build_lattice()?, back.build_lattice()?);
    for x in make_grid(a.interval(), ctx.grid)?.points() {
        if let Err(e) = check(&mut n, a.index.at(*x) == b.index.at(*x), || format!("index differs at {x}")) {
            return Ok(Err(e));
        }
    }
    Ok(Ok(n))
}
