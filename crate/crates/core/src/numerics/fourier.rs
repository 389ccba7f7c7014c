//! Fourier expansion of 1-periodic sections by trapezoid quadrature.
//!
//! On one period the trapezoid rule is a plain DFT, which is spectrally
//! accurate for entire integrands; that is exactly the class of functions the
//! categories produce (theta sections and their products).

use crate::error::Error;
use crate::numerics::C64;
use crate::Result;
use std::collections::BTreeMap;
use std::f64::consts::PI;

/// Sampling plan for [`fourier_coefficients`].
#[derive(Debug, Clone, Copy)]
pub struct FourierSpec {
    /// Largest frequency retained in the output map.
    pub max_freq: i64,
    /// Number of equispaced samples; defaults to max(64, 8·max_freq).
    pub samples: Option<usize>,
    /// Imaginary part of the sampling line Im z = line_im.
    pub line_im: f64,
}

impl FourierSpec {
    pub fn new(max_freq: i64) -> Self {
        FourierSpec {
            max_freq,
            samples: None,
            line_im: 0.0,
        }
    }

    pub fn sample_count(&self) -> usize {
        self.samples
            .unwrap_or_else(|| (8 * self.max_freq.unsigned_abs() as usize).max(64))
    }
}

/// Coefficients c_m of f(z) = Σ c_m exp(2πimz) for |m| ≤ max_freq, sampled on
/// the horizontal line Im z = line_im.
///
/// Fails with a resolution error when energy is detected in the Nyquist band,
/// i.e. when the sample count cannot separate the requested frequencies.
pub fn fourier_coefficients(
    f: impl Fn(C64) -> C64,
    spec: &FourierSpec,
) -> Result<BTreeMap<i64, C64>> {
    let s = spec.sample_count();
    if s < 4 * spec.max_freq.unsigned_abs() as usize {
        return Err(Error::Resolution(format!(
            "{s} samples cannot resolve frequencies up to {}",
            spec.max_freq
        )));
    }
    let values: Vec<C64> = (0..s)
        .map(|j| f(C64::new(j as f64 / s as f64, spec.line_im)))
        .collect();
    let scale = values.iter().map(|z| z.norm()).fold(1.0, f64::max);

    let dft = |m: i64| -> C64 {
        let mut acc = C64::new(0.0, 0.0);
        for (j, v) in values.iter().enumerate() {
            let phase = -2.0 * PI * m as f64 * j as f64 / s as f64;
            acc += v * C64::from_polar(1.0, phase);
        }
        acc / s as f64
    };

    // Aliasing guard: the band next to the Nyquist frequency must be empty.
    let nyquist = (s / 2) as i64;
    for m in [nyquist, nyquist - 1, -(nyquist - 1)] {
        let mag = dft(m).norm();
        if mag > 1e-10 * scale {
            return Err(Error::Resolution(format!(
                "aliasing detected: |c_{m}| = {mag:.3e} at the Nyquist band"
            )));
        }
    }

    let mut out = BTreeMap::new();
    for m in -spec.max_freq..=spec.max_freq {
        // Undo the exponential tilt of the sampling line.
        let tilt = (2.0 * PI * m as f64 * spec.line_im).exp();
        out.insert(m, dft(m) * tilt);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::theta::theta;
    use crate::numerics::UpperHalfParam;

    #[test]
    fn pure_exponential() {
        let spec = FourierSpec::new(4);
        let c = fourier_coefficients(|z| (C64::i() * 2.0 * PI * z).exp(), &spec).unwrap();
        assert!((c[&1] - C64::new(1.0, 0.0)).norm() < 1e-14);
        for (m, v) in &c {
            if *m != 1 {
                assert!(v.norm() < 1e-14, "stray coefficient at {m}");
            }
        }
    }

    #[test]
    fn theta_coefficients_match_series() {
        // Reading the defining series as a Fourier series in z gives
        // c_m = exp(πiτ m²).
        let tau = UpperHalfParam::new(0.2, 0.9).unwrap();
        let spec = FourierSpec::new(3);
        let c = fourier_coefficients(|z| theta(&tau, z, 0.0, 0.0, None), &spec).unwrap();
        for m in -3i64..=3 {
            let expect = (C64::i() * PI * tau.as_complex() * (m * m) as f64).exp();
            assert!((c[&m] - expect).norm() < 1e-12);
        }
    }

    #[test]
    fn theta_product_satisfies_quasi_periodicity_recursion() {
        // f = θ(τ,z)² is a section of a degree-two bundle: f(z+τ) = φ(z)f(z)
        // with φ(z) = exp(−2πiτ − 4πiz) forces c_{m+2} = c_m·exp(2πi(m+1)τ).
        let tau = UpperHalfParam::new(-0.5, 1.3).unwrap();
        let t = tau.as_complex();
        let spec = FourierSpec::new(5);
        let f = |z: C64| {
            let v = theta(&tau, z, 0.0, 0.0, None);
            v * v
        };
        let c = fourier_coefficients(f, &spec).unwrap();
        for m in -3i64..=3 {
            // Compare in the direction where the multiplier does not blow up
            // quadrature noise: |exp(2πi(m+1)τ)| = exp(−2π(m+1)A).
            let mult = (C64::i() * 2.0 * PI * t * (m as f64 + 1.0)).exp();
            let (lhs, rhs) = if m + 1 >= 0 {
                (c[&(m + 2)], c[&m] * mult)
            } else {
                (c[&m], c[&(m + 2)] / mult)
            };
            assert!(
                (lhs - rhs).norm() < 1e-12 * lhs.norm().max(1.0),
                "recursion fails at m={m}: {:e}",
                (lhs - rhs).norm()
            );
        }
    }

    #[test]
    fn trigonometric_polynomials_are_exact() {
        let spec = FourierSpec {
            max_freq: 6,
            samples: Some(64),
            line_im: 0.0,
        };
        let f = |z: C64| {
            (C64::i() * 2.0 * PI * z * 5.0).exp() * C64::new(0.3, -1.2)
                + (C64::i() * 2.0 * PI * z * -6.0).exp() * C64::new(2.0, 0.1)
                + C64::new(0.25, 0.0)
        };
        let c = fourier_coefficients(f, &spec).unwrap();
        assert!((c[&5] - C64::new(0.3, -1.2)).norm() < 1e-12);
        assert!((c[&-6] - C64::new(2.0, 0.1)).norm() < 1e-12);
        assert!((c[&0] - C64::new(0.25, 0.0)).norm() < 1e-12);
        assert!(c[&3].norm() < 1e-12);
    }

    #[test]
    fn aliasing_is_reported() {
        // A frequency right at the Nyquist band of a deliberately small grid.
        let spec = FourierSpec {
            max_freq: 4,
            samples: Some(16),
            line_im: 0.0,
        };
        let f = |z: C64| (C64::i() * 2.0 * PI * z * 7.0).exp();
        assert!(matches!(
            fourier_coefficients(f, &spec),
            Err(Error::Resolution(_))
        ));
    }
}
