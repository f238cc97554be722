use core::f64::consts::FRAC_PI_2;

use crate::error::{domain, Result};

/// Closed-form generators.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Catalog {
    Identity,
    /// `x^p` on the positive half-line, `p != 0`.
    Power(f64),
    /// `ln x` on the positive half-line.
    Log,
    /// `exp(αx)`, `α != 0`.
    ExpScaled(f64),
    /// `sin x` on `(-π/2, π/2)`.
    Sin,
    /// `tan x` on `(-π/2, π/2)`.
    Tan,
    /// `x³`. Its derivative vanishes at 0.
    Cube,
}

impl Catalog {
    pub fn name(&self) -> &'static str {
        match self {
            Catalog::Identity => "identity",
            Catalog::Power(_) => "power",
            Catalog::Log => "log",
            Catalog::ExpScaled(_) => "exp-scaled",
            Catalog::Sin => "sin",
            Catalog::Tan => "tan",
            Catalog::Cube => "cube",
        }
    }

    pub(crate) fn validate(&self) -> Result<()> {
        match *self {
            Catalog::Power(p) if p == 0.0 || !p.is_finite() => {
                Err(domain!("power exponent must be finite and nonzero (use log for p = 0), got {p}"))
            }
            Catalog::ExpScaled(a) if a == 0.0 || !a.is_finite() => {
                Err(domain!("exp-scaled rate must be finite and nonzero, got {a}"))
            }
            _ => Ok(()),
        }
    }

    /// Open interval on which the closed form is finite and strictly monotone.
    pub fn natural_domain(&self) -> (f64, f64) {
        match self {
            Catalog::Power(_) | Catalog::Log => (0.0, f64::INFINITY),
            Catalog::Sin | Catalog::Tan => (-FRAC_PI_2, FRAC_PI_2),
            Catalog::Identity | Catalog::ExpScaled(_) | Catalog::Cube => {
                (f64::NEG_INFINITY, f64::INFINITY)
            }
        }
    }

    pub(crate) fn value(&self, x: f64) -> f64 {
        match *self {
            Catalog::Identity => x,
            Catalog::Power(p) => libm::pow(x, p),
            Catalog::Log => libm::log(x),
            Catalog::ExpScaled(a) => libm::exp(a * x),
            Catalog::Sin => libm::sin(x),
            Catalog::Tan => libm::tan(x),
            Catalog::Cube => x * x * x,
        }
    }

    pub(crate) fn deriv1(&self, x: f64) -> f64 {
        match *self {
            Catalog::Identity => 1.0,
            Catalog::Power(p) => p * libm::pow(x, p - 1.0),
            Catalog::Log => 1.0 / x,
            Catalog::ExpScaled(a) => a * libm::exp(a * x),
            Catalog::Sin => libm::cos(x),
            Catalog::Tan => {
                let c = libm::cos(x);
                1.0 / (c * c)
            }
            Catalog::Cube => 3.0 * x * x,
        }
    }

    pub(crate) fn deriv2(&self, x: f64) -> f64 {
        match *self {
            Catalog::Identity => 0.0,
            Catalog::Power(p) => p * (p - 1.0) * libm::pow(x, p - 2.0),
            Catalog::Log => -1.0 / (x * x),
            Catalog::ExpScaled(a) => a * a * libm::exp(a * x),
            Catalog::Sin => -libm::sin(x),
            Catalog::Tan => {
                let c = libm::cos(x);
                2.0 * libm::tan(x) / (c * c)
            }
            Catalog::Cube => 6.0 * x,
        }
    }

    /// `f''/f'` in simplified closed form.
    pub(crate) fn index(&self, x: f64) -> f64 {
        match *self {
            Catalog::Identity => 0.0,
            Catalog::Power(p) => (p - 1.0) / x,
            Catalog::Log => -1.0 / x,
            Catalog::ExpScaled(a) => a,
            Catalog::Sin => -libm::tan(x),
            Catalog::Tan => 2.0 * libm::tan(x),
            Catalog::Cube => 2.0 / x,
        }
    }
}
