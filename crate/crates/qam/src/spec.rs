//! JSON generator specs.
//!
//! ```json
//! {"kind":"catalog","name":"power","p":2.0,"interval":[1e-6,100.0],"margin":1e-3}
//! {"kind":"affine","alpha":2.0,"beta":3.0,"base":{...}}
//! {"kind":"piecewise","breakpoints":[0.0],"pieces":[{...},{...}]}
//! {"kind":"reflect","base":{...}}
//! {"kind":"join","operands":[{...},{...}],"interval":[-1.5,1.5],"margin":0.01}
//! ```
//!
//! Index-defined generators are never tabulated; a join or meet is stored
//! as the operation plus its operands and rebuilt on load.

use std::fs;
use std::path::Path;

use qam_core::{join, meet, Catalog, Error, Generator, Interval, LatticeResult, PiecewiseGenerator};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum GenSpec {
    Catalog {
        name: String,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        p: Option<f64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        alpha: Option<f64>,
        interval: [f64; 2],
        #[serde(default, skip_serializing_if = "Option::is_none")]
        margin: Option<f64>,
    },
    Affine {
        alpha: f64,
        beta: f64,
        base: Box<GenSpec>,
    },
    Piecewise {
        breakpoints: Vec<f64>,
        pieces: Vec<GenSpec>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        interval: Option<[f64; 2]>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        margin: Option<f64>,
    },
    Reflect {
        base: Box<GenSpec>,
    },
    Join {
        operands: Vec<GenSpec>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        interval: Option<[f64; 2]>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        margin: Option<f64>,
    },
    Meet {
        operands: Vec<GenSpec>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        interval: Option<[f64; 2]>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        margin: Option<f64>,
    },
}

pub fn interval(bounds: [f64; 2], margin: Option<f64>) -> Result<Interval, Error> {
    match margin {
        Some(m) => Interval::with_margin(bounds[0], bounds[1], m),
        None => Interval::new(bounds[0], bounds[1]),
    }
}

pub fn catalog_entry(name: &str, p: Option<f64>, alpha: Option<f64>) -> Result<Catalog, Error> {
    let need = |v: Option<f64>, field: &str| {
        v.ok_or_else(|| Error::Domain(format!("catalog entry '{name}' needs field '{field}'")))
    };
    Ok(match name {
        "identity" => Catalog::Identity,
        "power" => Catalog::Power(need(p, "p")?),
        "log" => Catalog::Log,
        "exp-scaled" | "exp" => Catalog::ExpScaled(need(alpha, "alpha")?),
        "sin" => Catalog::Sin,
        "tan" => Catalog::Tan,
        "cube" => Catalog::Cube,
        other => return Err(Error::Domain(format!("unknown catalog entry '{other}'"))),
    })
}

/// Smallest interval shared by all generators; margins are taken from the
/// first one.
pub fn common_interval(gs: &[Generator]) -> Result<Interval, Error> {
    let first = gs.first().ok_or_else(|| Error::Precondition("no generators given".into()))?;
    let lo = gs.iter().map(|g| g.interval().lo()).fold(f64::NEG_INFINITY, f64::max);
    let hi = gs.iter().map(|g| g.interval().hi()).fold(f64::INFINITY, f64::min);
    if lo >= hi || lo.is_nan() || hi.is_nan() {
        return Err(Error::Domain(format!("generator intervals do not overlap (max lo {lo}, min hi {hi})")));
    }
    Interval::with_margin(lo, hi, first.interval().margin())
}

impl GenSpec {
    pub fn catalog(name: &str, interval: [f64; 2], margin: Option<f64>) -> Self {
        GenSpec::Catalog { name: name.into(), p: None, alpha: None, interval, margin }
    }

    pub fn power(p: f64, interval: [f64; 2], margin: Option<f64>) -> Self {
        GenSpec::Catalog { name: "power".into(), p: Some(p), alpha: None, interval, margin }
    }

    pub fn load(path: &Path) -> Result<Self, Error> {
        let text = fs::read_to_string(path)
            .map_err(|e| Error::Domain(format!("cannot read {}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| Error::Domain(format!("{}: {e}", path.display())))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("specs always serialize")
    }

    pub fn save(&self, path: &Path) -> Result<(), Error> {
        fs::write(path, self.to_json() + "\n")
            .map_err(|e| Error::Domain(format!("cannot write {}: {e}", path.display())))
    }

    pub fn build(&self) -> Result<Generator, Error> {
        match self {
            GenSpec::Join { .. } | GenSpec::Meet { .. } => Ok(self.build_lattice()?.generator),
            _ => self.build_plain(),
        }
    }

    fn build_plain(&self) -> Result<Generator, Error> {
        match self {
            GenSpec::Catalog { name, p, alpha, interval: bounds, margin } => {
                Generator::catalog(catalog_entry(name, *p, *alpha)?, interval(*bounds, *margin)?)
            }
            GenSpec::Affine { alpha, beta, base } => base.build()?.affine(*alpha, *beta),
            GenSpec::Reflect { base } => Ok(base.build()?.reflect()),
            GenSpec::Piecewise { breakpoints, pieces, .. } => {
                let built = pieces.iter().map(GenSpec::build).collect::<Result<Vec<_>, _>>()?;
                let iv = self.piecewise_interval(&built)?;
                Generator::piecewise(iv, breakpoints.clone(), built)
            }
            GenSpec::Join { .. } | GenSpec::Meet { .. } => unreachable!(),
        }
    }

    fn piecewise_interval(&self, built: &[Generator]) -> Result<Interval, Error> {
        let GenSpec::Piecewise { interval: bounds, margin, .. } = self else { unreachable!() };
        match bounds {
            Some(b) => interval(*b, *margin),
            None => {
                let (first, last) = match (built.first(), built.last()) {
                    (Some(a), Some(b)) => (a.interval(), b.interval()),
                    _ => return Err(Error::Domain("piecewise spec has no pieces".into())),
                };
                Interval::with_margin(first.lo(), last.hi(), margin.unwrap_or(first.margin()))
            }
        }
    }

    /// Builds a join or meet, keeping operand data for reports.
    pub fn build_lattice(&self) -> Result<LatticeResult, Error> {
        let (operands, bounds, margin, is_join) = match self {
            GenSpec::Join { operands, interval, margin } => (operands, interval, margin, true),
            GenSpec::Meet { operands, interval, margin } => (operands, interval, margin, false),
            _ => return Err(Error::Domain("spec is not a join or meet".into())),
        };
        let gs = operands.iter().map(GenSpec::build).collect::<Result<Vec<_>, _>>()?;
        let iv = match bounds {
            Some(b) => interval(*b, *margin)?,
            None => common_interval(&gs)?,
        };
        if is_join {
            join(&gs, &iv)
        } else {
            meet(&gs, &iv)
        }
    }

    /// Reads the spec as a kinked upper bound for smoothing.
    pub fn build_piecewise(&self) -> Result<PiecewiseGenerator, Error> {
        match self {
            GenSpec::Piecewise { breakpoints, pieces, .. } => {
                let built = pieces.iter().map(GenSpec::build).collect::<Result<Vec<_>, _>>()?;
                let iv = self.piecewise_interval(&built)?;
                PiecewiseGenerator::new(iv, breakpoints.clone(), built)
            }
            other => {
                let g = other.build()?;
                PiecewiseGenerator::new(*g.interval(), vec![], vec![g])
            }
        }
    }

    /// Spec of a smoothed bound: each base piece wrapped in its final affine map.
    pub fn smoothed(&self, result: &PiecewiseGenerator) -> GenSpec {
        let bases: Vec<GenSpec> = match self {
            GenSpec::Piecewise { pieces, .. } => pieces.clone(),
            other => vec![other.clone()],
        };
        let pieces = bases
            .into_iter()
            .zip(result.scales().iter().zip(result.shifts()))
            .map(|(b, (a, c))| GenSpec::Affine { alpha: *a, beta: *c, base: Box::new(b) })
            .collect();
        let iv = result.interval();
        GenSpec::Piecewise {
            breakpoints: result.breakpoints().to_vec(),
            pieces,
            interval: Some([iv.lo(), iv.hi()]),
            margin: Some(iv.margin()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_documented_forms() {
        let p: GenSpec = serde_json::from_str(
            r#"{"kind":"catalog","name":"power","p":2.0,"interval":[1e-6,100.0],"margin":1e-3}"#,
        )
        .unwrap();
        assert_eq!(p, GenSpec::power(2.0, [1e-6, 100.0], Some(1e-3)));
        let a: GenSpec =
            serde_json::from_str(&format!(r#"{{"kind":"affine","alpha":2.0,"beta":3.0,"base":{}}}"#, p.to_json()))
                .unwrap();
        let g = a.build().unwrap();
        assert_eq!(g.value(3.0).unwrap(), 21.0);
    }

    #[test]
    fn rejects_unknown_fields_and_entries() {
        assert!(serde_json::from_str::<GenSpec>(r#"{"kind":"catalog","name":"log","interval":[1,2],"q":1}"#).is_err());
        let s: GenSpec = serde_json::from_str(r#"{"kind":"catalog","name":"sqrt","interval":[1,2]}"#).unwrap();
        assert!(s.build().is_err());
        let s: GenSpec = serde_json::from_str(r#"{"kind":"catalog","name":"power","interval":[1,2]}"#).unwrap();
        assert!(s.build().unwrap_err().to_string().contains("'p'"));
    }

    #[test]
    fn piecewise_interval_defaults_to_outer_pieces() {
        let half = std::f64::consts::FRAC_PI_2;
        let s = GenSpec::Piecewise {
            breakpoints: vec![0.0],
            pieces: vec![GenSpec::catalog("sin", [-half, half], None), GenSpec::catalog("tan", [-half, half], None)],
            interval: None,
            margin: Some(0.01),
        };
        let g = s.build().unwrap();
        assert_eq!(g.interval().start(), -half + 0.01);
        assert!((g.value(0.5).unwrap() - 0.5f64.tan()).abs() < 1e-15);
    }
}
