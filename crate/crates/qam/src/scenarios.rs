use std::f64::consts::FRAC_PI_2;
use std::io::Write;

use qam_core::{
    compare_convexity, join, l1_index_distance, make_grid, meet, qa_mean, Catalog, Error, Generator, Interval,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cli::{index_csv, lattice_csv, write_comparison, write_lattice, CmdResult, ExampleName, Failure, Opts};
use crate::report::{aligned_error, sample_vectors, write_csv};

pub fn run(name: ExampleName, o: &Opts, out: &mut dyn Write) -> CmdResult {
    match name {
        ExampleName::SinTanJoin => sin_tan(o, out, true),
        ExampleName::SinTanMeet => sin_tan(o, out, false),
        ExampleName::CubeIncomparable => cube(o, out),
        ExampleName::L1Convergence => l1_convergence(o, out),
    }
}

fn trig() -> Result<(Generator, Generator, Interval), Error> {
    let wide = Interval::new(-FRAC_PI_2, FRAC_PI_2)?;
    let iv = Interval::with_margin(-FRAC_PI_2, FRAC_PI_2, 0.01)?;
    Ok((Generator::catalog(Catalog::Sin, wide)?, Generator::catalog(Catalog::Tan, wide)?, iv))
}

fn sin_tan(o: &Opts, out: &mut dyn Write, is_join: bool) -> CmdResult {
    let (sin, tan, iv) = trig()?;
    let ops = [sin.clone(), tan.clone()];
    let r = if is_join { join(&ops, &iv)? } else { meet(&ops, &iv)? };
    let grid = make_grid(&iv, o.grid_size())?;
    let (first, second) = if is_join { (&sin, &tan) } else { (&tan, &sin) };
    let reference = |x: f64| if x <= 0.0 { first.value(x).unwrap() } else { second.value(x).unwrap() };
    let err = aligned_error(&r.generator, reference, grid.points(), (-0.5, 0.5))?;
    let exact = grid
        .points()
        .iter()
        .filter(|&&x| {
            let (a, b) = (-libm::tan(x), 2.0 * libm::tan(x));
            r.index.at(x) == if is_join { a.max(b) } else { a.min(b) }
        })
        .count();

    let name = if is_join { "sin-tan-join" } else { "sin-tan-meet" };
    writeln!(out, "{} example={name}", o.header("example"))?;
    write_lattice(out, &r)?;
    writeln!(out, "closed form: {} on x <= 0, {} on x > 0", first.view_name(), second.view_name())?;
    writeln!(out, "max aligned deviation: {err:.3e}")?;
    writeln!(out, "index exact at {exact}/{} grid points", grid.count())?;
    if !is_join {
        let mut rng = ChaCha8Rng::seed_from_u64(o.seed);
        let reflected = join(&[sin.reflect(), tan.reflect()], &iv.reflected())?;
        let mut worst = 0.0f64;
        for v in sample_vectors(&mut rng, &iv, 200) {
            let neg: Vec<f64> = v.iter().map(|x| -x).collect();
            worst = worst.max((qa_mean(&r.generator, &v)? + qa_mean(&reflected.generator, &neg)?).abs());
        }
        writeln!(out, "duality residual over 200 vectors: {worst:.3e}")?;
    }
    if let Some(p) = &o.out_csv {
        lattice_csv(p, &r, &grid.with_points(&iv, r.index.kinks()))?;
    }
    Ok(())
}

trait ViewName {
    fn view_name(&self) -> &'static str;
}

impl ViewName for Generator {
    fn view_name(&self) -> &'static str {
        match self.view() {
            qam_core::generator::View::Catalog(c) => c.name(),
            _ => "generator",
        }
    }
}

/// Two vectors on which the means of `f` and `g` are ordered oppositely.
pub fn opposite_vectors(
    f: &Generator,
    g: &Generator,
    rng: &mut ChaCha8Rng,
    tries: usize,
) -> Result<Option<[Vec<f64>; 2]>, Error> {
    let iv = *f.interval();
    let (mut below, mut above) = (None, None);
    for _ in 0..tries {
        let v: Vec<f64> = (0..2).map(|_| rng.gen_range(iv.start()..=iv.end())).collect();
        let d = qa_mean(f, &v)? - qa_mean(g, &v)?;
        if d < -1e-6 && below.is_none() {
            below = Some(v);
        } else if d > 1e-6 && above.is_none() {
            above = Some(v);
        }
        if let (Some(a), Some(b)) = (&below, &above) {
            return Ok(Some([a.clone(), b.clone()]));
        }
    }
    Ok(None)
}

fn cube(o: &Opts, out: &mut dyn Write) -> CmdResult {
    let iv = Interval::with_margin(-0.99, 0.99, 0.0)?;
    let id = Generator::catalog(Catalog::Identity, iv)?;
    let cube = Generator::catalog(Catalog::Cube, iv)?;
    writeln!(out, "{} example=cube-incomparable", o.header("example"))?;
    match join(&[id.clone(), cube.clone()], &iv) {
        Err(e @ Error::Capability(_)) => writeln!(out, "join: {e}")?,
        Err(e) => return Err(e.into()),
        Ok(_) => return Err(Failure::Verify("join of identity and cube unexpectedly succeeded".into())),
    }
    let grid = make_grid(&iv, o.grid_size())?;
    let r = compare_convexity(&id, &cube, &grid, o.tol)?;
    write_comparison(out, &r)?;
    let mut rng = ChaCha8Rng::seed_from_u64(o.seed);
    match opposite_vectors(&id, &cube, &mut rng, 10_000)? {
        Some([a, b]) => {
            for (label, v) in [("M_id < M_cube", &a), ("M_id > M_cube", &b)] {
                writeln!(
                    out,
                    "{label}: v = [{:.6}, {:.6}], means {:.9} vs {:.9}",
                    v[0],
                    v[1],
                    qa_mean(&id, v)?,
                    qa_mean(&cube, v)?
                )?;
            }
        }
        None => return Err(Failure::Verify("no pair of oppositely ordered vectors found".into())),
    }
    if let Some(p) = &o.out_csv {
        index_csv(p, &[&id, &cube], &grid)?;
    }
    Ok(())
}

pub struct ConvergenceRow {
    pub n: usize,
    pub l1: f64,
    pub gap: f64,
}

/// `f_n = x^(1+1/n)` against the identity on (0.5, 2).
pub fn convergence_table(seed: u64, vectors: usize, max_n: usize) -> Result<Vec<ConvergenceRow>, Error> {
    let iv = Interval::with_margin(0.5, 2.0, 0.0)?;
    let id = Generator::catalog(Catalog::Identity, iv)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let vs = sample_vectors(&mut rng, &iv, vectors);
    let base: Vec<f64> = vs.iter().map(|v| qa_mean(&id, v)).collect::<Result<_, _>>()?;
    (1..=max_n)
        .map(|n| {
            let fnn = Generator::catalog(Catalog::Power(1.0 + 1.0 / n as f64), iv)?;
            let l1 = l1_index_distance(&fnn, &id)?;
            let mut gap = 0.0f64;
            for (v, m) in vs.iter().zip(&base) {
                gap = gap.max((qa_mean(&fnn, v)? - m).abs());
            }
            Ok(ConvergenceRow { n, l1, gap })
        })
        .collect()
}

fn l1_convergence(o: &Opts, out: &mut dyn Write) -> CmdResult {
    let rows = convergence_table(o.seed, 500, 20)?;
    let c = rows.iter().map(|r| r.gap / r.l1).fold(0.0, f64::max);
    writeln!(out, "{} example=l1-convergence", o.header("example"))?;
    writeln!(out, "f_n = x^(1+1/n), f = x on [0.5, 2], 500 vectors")?;
    writeln!(out, "{:>3} {:>14} {:>14} {:>10}", "n", "l1", "gap", "gap/l1")?;
    for r in &rows {
        writeln!(out, "{:>3} {:>14.9} {:>14.9} {:>10.6}", r.n, r.l1, r.gap, r.gap / r.l1)?;
    }
    writeln!(out, "fitted C: {c:.6}")?;
    if let Some(p) = &o.out_csv {
        let data: Vec<Vec<f64>> = rows.iter().map(|r| vec![r.n as f64, r.l1, r.gap]).collect();
        write_csv(p, &["n", "l1", "gap"].map(String::from), &data)?;
    }
    Ok(())
}
