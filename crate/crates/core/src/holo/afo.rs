//! Analytic Fourier objects: matrix-valued 1-periodic entire functions kept
//! as sparse frequency-coefficient maps.
//!
//! Products of theta sections have Fourier coefficients with exactly known
//! exponents of the shape exp(πiτ·u + 2πi·v) with rational u, v, so products
//! of sections are convolutions in coefficient space and translations by
//! rational multiples of τ are coefficient-wise exponential factors. All
//! magnitudes ride in a separate log scale; nothing here overflows even on
//! large covers.

use crate::numerics::linalg::CMat;
use crate::numerics::{rat, rat_f64, Rat, Scaled, UpperHalfParam, C64};
use std::collections::BTreeMap;
use std::f64::consts::PI;

/// exp(πiτ·u + 2πi·v) with exact rational data.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExpVal {
    pub u: Rat,
    pub v: Rat,
}

impl ExpVal {
    pub fn one() -> Self {
        ExpVal {
            u: rat(0, 1),
            v: rat(0, 1),
        }
    }

    pub fn mul(&self, other: &ExpVal) -> ExpVal {
        ExpVal {
            u: self.u + other.u,
            v: self.v + other.v,
        }
    }

    pub fn inv(&self) -> ExpVal {
        ExpVal {
            u: -self.u,
            v: -self.v,
        }
    }

    /// Collapse against a concrete modulus. log = −πA·u; the phase reduces
    /// v mod 1 exactly so large windings cost no precision.
    pub fn scaled(&self, tau: &UpperHalfParam) -> Scaled {
        let u = rat_f64(self.u);
        let vfrac = rat_f64(crate::numerics::frac(self.v));
        let phase = PI * tau.b * u + 2.0 * PI * vfrac;
        Scaled::new(C64::from_polar(1.0, phase), -PI * tau.a * u)
    }
}

/// The exponential function w ↦ exp(πiτ·u + 2πi·v + 2πi·freq·w).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExpFactor {
    pub u: Rat,
    pub v: Rat,
    pub freq: i64,
}

impl ExpFactor {
    pub fn one() -> Self {
        ExpFactor {
            u: rat(0, 1),
            v: rat(0, 1),
            freq: 0,
        }
    }

    /// The (n, x)-factor of automorphy at modulus mτ with x = a·(mτ) + b:
    /// exp(−πin·mτ − 2πix − 2πinz).
    pub fn automorphy(n: i64, m: i64, a: Rat, b: Rat) -> Self {
        ExpFactor {
            u: rat(-n * m, 1) - rat(2 * m, 1) * a,
            v: -b,
            freq: -n,
        }
    }

    pub fn mul(&self, other: &ExpFactor) -> ExpFactor {
        ExpFactor {
            u: self.u + other.u,
            v: self.v + other.v,
            freq: self.freq + other.freq,
        }
    }

    pub fn inv(&self) -> ExpFactor {
        ExpFactor {
            u: -self.u,
            v: -self.v,
            freq: -self.freq,
        }
    }

    /// The factor as a function of w + δ·τ.
    pub fn translated_tau(&self, delta: Rat) -> ExpFactor {
        ExpFactor {
            u: self.u + rat(2 * self.freq, 1) * delta,
            v: self.v,
            freq: self.freq,
        }
    }

    /// Value at the rational point z = aτ + b.
    pub fn value_at(&self, a: Rat, b: Rat) -> ExpVal {
        ExpVal {
            u: self.u + rat(2 * self.freq, 1) * a,
            v: self.v + rat(self.freq, 1) * b,
        }
    }
}

/// A matrix with a common log scale for its magnitude.
#[derive(Debug, Clone)]
pub struct ScaledMat {
    pub mat: CMat,
    pub log: f64,
}

impl ScaledMat {
    pub fn zero(rows: usize, cols: usize) -> Self {
        ScaledMat {
            mat: CMat::zeros(rows, cols),
            log: 0.0,
        }
    }

    pub fn log_norm(&self) -> f64 {
        let n = self.mat.max_norm();
        if n == 0.0 {
            f64::NEG_INFINITY
        } else {
            self.log + n.ln()
        }
    }

    pub fn rebalance(self) -> ScaledMat {
        let n = self.mat.max_norm();
        if n == 0.0 || (0.1..10.0).contains(&n) {
            return self;
        }
        let shift = n.ln();
        ScaledMat {
            mat: self.mat.scale(C64::new((-shift).exp(), 0.0)),
            log: self.log + shift,
        }
    }

    pub fn add(&self, other: &ScaledMat) -> ScaledMat {
        if self.mat.max_norm() == 0.0 {
            return other.clone();
        }
        if other.mat.max_norm() == 0.0 {
            return self.clone();
        }
        let log = self.log.max(other.log);
        let a = self.mat.scale(C64::new((self.log - log).exp(), 0.0));
        let b = other.mat.scale(C64::new((other.log - log).exp(), 0.0));
        ScaledMat {
            mat: a.add(&b),
            log,
        }
        .rebalance()
    }

    pub fn mul(&self, other: &ScaledMat) -> ScaledMat {
        ScaledMat {
            mat: self.mat.mul(&other.mat),
            log: self.log + other.log,
        }
        .rebalance()
    }

    pub fn scale(&self, s: &Scaled) -> ScaledMat {
        ScaledMat {
            mat: self.mat.scale(s.val),
            log: self.log + s.log,
        }
        .rebalance()
    }

    /// Collapse to a plain matrix; callers check magnitudes first.
    pub fn collapse(&self) -> CMat {
        self.mat.scale(C64::new(self.log.exp(), 0.0))
    }
}

/// Sparse matrix-valued Fourier series Σ_l c_l·exp(2πi·l·w).
#[derive(Debug, Clone)]
pub struct Afo {
    pub rows: usize,
    pub cols: usize,
    pub coeffs: BTreeMap<i64, ScaledMat>,
}

impl Afo {
    pub fn zero(rows: usize, cols: usize) -> Self {
        Afo {
            rows,
            cols,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn constant(mat: CMat) -> Self {
        let (rows, cols) = (mat.rows, mat.cols);
        let mut coeffs = BTreeMap::new();
        if mat.max_norm() > 0.0 {
            coeffs.insert(0, ScaledMat { mat, log: 0.0 }.rebalance());
        }
        Afo { rows, cols, coeffs }
    }

    pub fn insert_add(&mut self, l: i64, term: ScaledMat) {
        if term.mat.max_norm() == 0.0 {
            return;
        }
        match self.coeffs.get(&l) {
            None => {
                self.coeffs.insert(l, term.rebalance());
            }
            Some(prev) => {
                let sum = prev.add(&term);
                self.coeffs.insert(l, sum);
            }
        }
    }

    pub fn add(&self, other: &Afo) -> Afo {
        let mut out = self.clone();
        for (l, c) in &other.coeffs {
            out.insert_add(*l, c.clone());
        }
        out
    }

    /// Pointwise product (self·other as matrix-valued functions), i.e.
    /// convolution of coefficients.
    pub fn mul(&self, other: &Afo) -> Afo {
        let mut out = Afo::zero(self.rows, other.cols);
        for (l1, c1) in &self.coeffs {
            for (l2, c2) in &other.coeffs {
                out.insert_add(l1 + l2, c1.mul(c2));
            }
        }
        out.pruned()
    }

    /// The function w ↦ f(w + δτ).
    pub fn translated_tau(&self, tau: &UpperHalfParam, delta: Rat) -> Afo {
        let mut out = Afo::zero(self.rows, self.cols);
        for (l, c) in &self.coeffs {
            let tilt = ExpVal {
                u: rat(2 * l, 1) * delta,
                v: rat(0, 1),
            };
            out.insert_add(*l, c.scale(&tilt.scaled(tau)));
        }
        out
    }

    /// Multiply by an exponential factor: shifts frequencies.
    pub fn apply_factor(&self, tau: &UpperHalfParam, f: &ExpFactor) -> Afo {
        let val = ExpVal { u: f.u, v: f.v }.scaled(tau);
        let mut out = Afo::zero(self.rows, self.cols);
        for (l, c) in &self.coeffs {
            out.insert_add(l + f.freq, c.scale(&val));
        }
        out
    }

    pub fn lmul(&self, m: &CMat) -> Afo {
        let mut out = Afo::zero(m.rows, self.cols);
        for (l, c) in &self.coeffs {
            out.insert_add(
                *l,
                ScaledMat {
                    mat: m.mul(&c.mat),
                    log: c.log,
                },
            );
        }
        out
    }

    pub fn rmul(&self, m: &CMat) -> Afo {
        let mut out = Afo::zero(self.rows, m.cols);
        for (l, c) in &self.coeffs {
            out.insert_add(
                *l,
                ScaledMat {
                    mat: c.mat.mul(m),
                    log: c.log,
                },
            );
        }
        out
    }

    /// Drop coefficients more than ~78 decades below the largest.
    pub fn pruned(mut self) -> Afo {
        let max = self
            .coeffs
            .values()
            .map(|c| c.log_norm())
            .fold(f64::NEG_INFINITY, f64::max);
        if max.is_finite() {
            self.coeffs.retain(|_, c| c.log_norm() > max - 180.0);
        }
        self
    }

    /// Taylor coefficients T_0..T_{order−1} at the rational point aτ + b:
    /// T_t = Σ_l c_l·exp(2πil(aτ+b))·(2πil)^t / t!.
    pub fn taylor_at(
        &self,
        tau: &UpperHalfParam,
        a: Rat,
        b: Rat,
        order: usize,
    ) -> Vec<ScaledMat> {
        let mut out = vec![ScaledMat::zero(self.rows, self.cols); order];
        for (l, c) in &self.coeffs {
            let point = ExpVal {
                u: rat(2 * l, 1) * a,
                v: rat(*l, 1) * b,
            }
            .scaled(tau);
            let base = c.scale(&point);
            let mut fact = 1.0;
            let two_pi_il = C64::i() * 2.0 * PI * (*l as f64);
            let mut pow = C64::new(1.0, 0.0);
            for (t, slot) in out.iter_mut().enumerate() {
                if t > 0 {
                    fact *= t as f64;
                    pow *= two_pi_il;
                }
                let term = ScaledMat {
                    mat: base.mat.scale(pow / fact),
                    log: base.log,
                };
                *slot = slot.add(&term);
            }
        }
        out
    }

    /// Largest coefficient log-magnitude.
    pub fn max_log_norm(&self) -> f64 {
        self.coeffs
            .values()
            .map(|c| c.log_norm())
            .fold(f64::NEG_INFINITY, f64::max)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn automorphy_factor_translation_rule() {
        // φ(z + τ) picks up exp(−2πinτ): check via the symbolic translate.
        let f = ExpFactor::automorphy(2, 1, rat(1, 3), rat(1, 4));
        let g = f.translated_tau(rat(1, 1));
        assert_eq!(g.u - f.u, rat(-4, 1));
        assert_eq!(g.freq, f.freq);
    }

    #[test]
    fn product_is_convolution() {
        let tau = UpperHalfParam::new(0.2, 0.9).unwrap();
        let mut a = Afo::zero(1, 1);
        a.insert_add(
            1,
            ScaledMat {
                mat: CMat::identity(1).scale(C64::new(2.0, 0.0)),
                log: 0.0,
            },
        );
        let mut b = Afo::zero(1, 1);
        b.insert_add(
            -3,
            ScaledMat {
                mat: CMat::identity(1).scale(C64::new(0.0, 1.0)),
                log: 0.0,
            },
        );
        let p = a.mul(&b);
        let c = p.coeffs.get(&-2).unwrap().collapse();
        assert!((c[(0, 0)] - C64::new(0.0, 2.0)).norm() < 1e-14);
        // Evaluate both sides at a point.
        let z = (rat(1, 5), rat(2, 7));
        let pa = a.taylor_at(&tau, z.0, z.1, 1)[0].collapse();
        let pb = b.taylor_at(&tau, z.0, z.1, 1)[0].collapse();
        let pp = p.taylor_at(&tau, z.0, z.1, 1)[0].collapse();
        assert!((pa[(0, 0)] * pb[(0, 0)] - pp[(0, 0)]).norm() < 1e-13);
    }
}
