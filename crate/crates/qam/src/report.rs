//! Shared numeric helpers for reports, scenarios and suites.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use qam_core::{Error, Generator, Interval};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// Max deviation between `a·h + b` and `reference` on `xs`, with `a, b`
/// fixed by matching at the two calibration points.
pub fn aligned_error(h: &Generator, reference: impl Fn(f64) -> f64, xs: &[f64], cal: (f64, f64)) -> Result<f64, Error> {
    let (h0, h1) = (h.value(cal.0)?, h.value(cal.1)?);
    let (r0, r1) = (reference(cal.0), reference(cal.1));
    let a = (r1 - r0) / (h1 - h0);
    let b = r0 - a * h0;
    let mut worst = 0.0f64;
    for &x in xs {
        worst = worst.max((a * h.value(x)? + b - reference(x)).abs());
    }
    Ok(worst)
}

/// `count` vectors of length 2..=6 drawn uniformly from the working interval.
pub fn sample_vectors(rng: &mut ChaCha8Rng, iv: &Interval, count: usize) -> Vec<Vec<f64>> {
    (0..count)
        .map(|_| {
            let n = rng.gen_range(2..=6);
            (0..n).map(|_| rng.gen_range(iv.start()..=iv.end())).collect()
        })
        .collect()
}

pub fn write_csv(path: &Path, header: &[String], rows: &[Vec<f64>]) -> Result<(), Error> {
    let io = |e: std::io::Error| Error::Domain(format!("cannot write {}: {e}", path.display()));
    let mut w = BufWriter::new(File::create(path).map_err(io)?);
    writeln!(w, "{}", header.join(",")).map_err(io)?;
    for row in rows {
        let cells: Vec<String> = row.iter().map(|v| format!("{v:e}")).collect();
        writeln!(w, "{}", cells.join(",")).map_err(io)?;
    }
    w.flush().map_err(io)
}

pub fn fmt_list(xs: &[f64]) -> String {
    let parts: Vec<String> = xs.iter().map(|x| format!("{x:.6}")).collect();
    format!("[{}]", parts.join(", "))
}
