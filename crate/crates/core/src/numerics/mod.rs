//! Numerical substrate: scalars, exact rationals, theta functions, nilpotent
//! matrix calculus, Fourier expansion and dense complex linear algebra.

pub mod fourier;
pub mod linalg;
pub mod nilpotent;
pub mod theta;

use crate::error::Error;
use crate::Result;
use num_complex::Complex64;
use num_rational::Ratio;
use serde::{Deserialize, Serialize};

pub use fourier::{fourier_coefficients, FourierSpec};
pub use linalg::{cokernel_representatives, kernel_basis, solve_linear, CMat};
pub use nilpotent::{nilpotent_exp, NilpotentDatum};
pub use theta::{default_cutoff, theta, theta_deriv, theta_nilpotent, theta_scaled};

/// Complex scalar used throughout.
pub type C64 = Complex64;

/// Exact rational scalar. Denominators stay small (bounded by the slope and
/// degree bounds of the model), so `i64` numerators never get near overflow.
pub type Rat = Ratio<i64>;

/// `p/q` as a rational, panicking on `q == 0`.
pub fn rat(p: i64, q: i64) -> Rat {
    Ratio::new(p, q)
}

/// Fractional part in `[0, 1)`.
pub fn frac(x: Rat) -> Rat {
    let f = x - x.floor();
    debug_assert!(f >= Rat::from_integer(0) && f < Rat::from_integer(1));
    f
}

pub fn rat_f64(x: Rat) -> f64 {
    *x.numer() as f64 / *x.denom() as f64
}

/// Shared modulus τ = B + iA of the mirror pair, A > 0.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UpperHalfParam {
    /// B-field component (real part).
    pub b: f64,
    /// Area component (imaginary part), strictly positive.
    pub a: f64,
}

impl UpperHalfParam {
    pub fn new(b: f64, a: f64) -> Result<Self> {
        if !(a > 0.0) || !a.is_finite() || !b.is_finite() {
            return Err(Error::domain(format!(
                "tau = {b} + {a}i is not in the upper half plane"
            )));
        }
        Ok(UpperHalfParam { b, a })
    }

    pub fn as_complex(&self) -> C64 {
        C64::new(self.b, self.a)
    }

    /// The modulus rτ of a degree-r cover.
    pub fn scale(&self, r: i64) -> Self {
        UpperHalfParam {
            b: self.b * r as f64,
            a: self.a * r as f64,
        }
    }

    /// Evaluate aτ + b for exact rational a, b.
    pub fn point(&self, a: Rat, b: Rat) -> C64 {
        self.as_complex() * rat_f64(a) + rat_f64(b)
    }
}

/// A complex value `mantissa · exp(log_scale)` with the magnitude kept in a
/// separate real exponent. Theta sections on shifted horizontal lines reach
/// magnitudes far beyond f64 range; carrying the exponent separately keeps
/// every intermediate product representable.
#[derive(Debug, Clone, Copy)]
pub struct Scaled {
    pub val: C64,
    pub log: f64,
}

impl Scaled {
    pub const ZERO: Scaled = Scaled {
        val: C64::new(0.0, 0.0),
        log: 0.0,
    };

    pub fn new(val: C64, log: f64) -> Self {
        Scaled { val, log }
    }

    pub fn from_c64(val: C64) -> Self {
        Scaled { val, log: 0.0 }
    }

    /// exp of a complex exponent, stored without evaluating the real part.
    pub fn exp(exponent: C64) -> Self {
        Scaled {
            val: C64::from_polar(1.0, exponent.im),
            log: exponent.re,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.val.norm() == 0.0
    }

    pub fn mul(&self, other: &Scaled) -> Scaled {
        Scaled {
            val: self.val * other.val,
            log: self.log + other.log,
        }
    }

    pub fn scale_c64(&self, c: C64) -> Scaled {
        Scaled {
            val: self.val * c,
            log: self.log,
        }
    }

    /// Collapse to a plain complex number. Overflows to ±inf honestly if the
    /// exponent is out of range; callers that expect tame values check first.
    pub fn collapse(&self) -> C64 {
        self.val * self.log.exp()
    }

    /// Rescale the mantissa so that `log` becomes `target_log`.
    pub fn with_log(&self, target_log: f64) -> Scaled {
        Scaled {
            val: self.val * (self.log - target_log).exp(),
            log: target_log,
        }
    }

    pub fn add(&self, other: &Scaled) -> Scaled {
        if self.is_zero() {
            return *other;
        }
        if other.is_zero() {
            return *self;
        }
        let log = self.log.max(other.log);
        Scaled {
            val: self.with_log(log).val + other.with_log(log).val,
            log,
        }
    }

    /// Natural logarithm of the magnitude.
    pub fn log_norm(&self) -> f64 {
        self.log + self.val.norm().ln()
    }
}
