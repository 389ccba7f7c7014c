//! Log-form monodromy data and its exact one-parameter group.

use crate::error::Error;
use crate::numerics::linalg::CMat;
use crate::numerics::C64;
use crate::Result;
use std::f64::consts::PI;

/// A nilpotent endomorphism with its dimension, validated on construction.
#[derive(Debug, Clone, PartialEq)]
pub struct NilpotentDatum {
    pub dim: usize,
    pub n: CMat,
}

impl NilpotentDatum {
    pub fn new(n: CMat) -> Result<Self> {
        if !n.is_square() || n.rows == 0 {
            return Err(Error::domain("nilpotent datum must be square and nonempty"));
        }
        if !n.is_nilpotent(1e-12) {
            return Err(Error::domain("endomorphism is not nilpotent"));
        }
        Ok(NilpotentDatum { dim: n.rows, n })
    }

    pub fn zero(dim: usize) -> Self {
        NilpotentDatum {
            dim,
            n: CMat::zeros(dim, dim),
        }
    }

    /// Jordan block of the given size with zeros on the diagonal.
    pub fn jordan(dim: usize) -> Self {
        let mut n = CMat::zeros(dim, dim);
        for i in 0..dim.saturating_sub(1) {
            n[(i, i + 1)] = C64::new(1.0, 0.0);
        }
        NilpotentDatum { dim, n }
    }

    /// Cyclic ⇔ the kernel is one-dimensional ⇔ rank = dim − 1.
    pub fn is_cyclic(&self) -> bool {
        self.n.rank() == self.dim - 1 || self.dim == 1
    }
}

/// exp(s·(−2πib·Id + N)) = exp(−2πibs) · Σ_{j<dim} (sN)^j / j!, exact as a
/// finite sum.
pub fn nilpotent_exp(s: C64, b: f64, n: &CMat) -> CMat {
    let dim = n.rows;
    let scalar = (-C64::i() * 2.0 * PI * b * s).exp();
    let mut out = CMat::identity(dim);
    let mut term = CMat::identity(dim);
    for j in 1..dim as u32 {
        term = term.mul(n).scale(s / C64::new(j as f64, 0.0));
        out = out.add(&term);
    }
    out.scale(scalar)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn zero_parameter_gives_identity() {
        let n = NilpotentDatum::jordan(3);
        let m = nilpotent_exp(C64::new(0.0, 0.0), 0.37, &n.n);
        assert!(m.sub(&CMat::identity(3)).max_norm() < 1e-15);
    }

    #[test]
    fn trivial_data_give_identity() {
        let m = nilpotent_exp(C64::new(1.0, 0.0), 0.0, &CMat::zeros(2, 2));
        assert!(m.sub(&CMat::identity(2)).max_norm() < 1e-15);
    }

    #[test]
    fn jordan_block_with_quarter_character() {
        // Closed form exp(−πi/2)·[[1,1],[0,1]], cross-checked against a
        // scaling-and-squaring oracle computed in the test.
        let n = NilpotentDatum::jordan(2);
        let got = nilpotent_exp(C64::new(1.0, 0.0), 0.25, &n.n);

        // Oracle: exp(M) with M = −2πi/4·Id + N via 2^k-fold squaring of the
        // truncated series at small argument.
        let m_full = CMat::from_rows(vec![
            vec![-C64::i() * PI / 2.0, C64::new(1.0, 0.0)],
            vec![C64::new(0.0, 0.0), -C64::i() * PI / 2.0],
        ])
        .unwrap();
        let k = 10u32;
        let small = m_full.scale(C64::new(1.0 / 1024.0, 0.0));
        let mut acc = CMat::identity(2);
        let mut pow = CMat::identity(2);
        let mut fact = 1.0;
        for j in 1..=12 {
            fact *= j as f64;
            pow = pow.mul(&small);
            acc = acc.add(&pow.scale(C64::new(1.0 / fact, 0.0)));
        }
        for _ in 0..k {
            acc = acc.mul(&acc);
        }
        assert!(got.sub(&acc).max_norm() < 1e-10);

        let phase = (-C64::i() * PI / 2.0).exp();
        assert!((got[(0, 0)] - phase).norm() < 1e-12);
        assert!((got[(0, 1)] - phase).norm() < 1e-12);
        assert!((got[(1, 1)] - phase).norm() < 1e-12);
        assert!(got[(1, 0)].norm() < 1e-15);
    }

    #[test]
    fn cyclic_detection() {
        assert!(NilpotentDatum::jordan(3).is_cyclic());
        assert!(!NilpotentDatum::zero(2).is_cyclic());
        assert!(NilpotentDatum::zero(1).is_cyclic());
    }

    proptest! {
        #[test]
        fn one_parameter_group_law(
            s1 in -2.0f64..2.0, s2 in -2.0f64..2.0, b in -0.5f64..0.5
        ) {
            let n = NilpotentDatum::jordan(3);
            let lhs = nilpotent_exp(C64::new(s1 + s2, 0.0), b, &n.n);
            let rhs = nilpotent_exp(C64::new(s1, 0.0), b, &n.n)
                .mul(&nilpotent_exp(C64::new(s2, 0.0), b, &n.n));
            prop_assert!(lhs.sub(&rhs).max_norm() < 1e-12);
        }
    }
}
