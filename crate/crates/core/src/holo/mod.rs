//! Coherent sheaves on the elliptic curve ℂ/(ℤ ⊕ τℤ), as formal direct sums
//! of shifted indecomposables in normal form.
//!
//! An indecomposable is either a vector bundle — the direct image under the
//! degree-r isogeny of a line bundle tensored with a unipotent flat bundle on
//! the r-fold cover — or a torsion sheaf supported at one point with a cyclic
//! nilpotent module structure. Line bundles are encoded by a factor of
//! automorphy: the pair (n, x) with x = aτ′ + b stands for the function
//!
//! ```text
//!   φ(z) = exp(−πinτ′ − 2πix − 2πinz)
//! ```
//!
//! on the cover of modulus τ′ = rτ, whose sections for n > 0 are spanned by
//! the theta translates t*_{x/n} θ[k/n, 0](nτ′, nz), 0 ≤ k < n.

pub mod afo;
pub mod compose;
pub mod functors;
pub mod hom;

use crate::error::Error;
use crate::numerics::linalg::CMat;
use crate::numerics::theta::theta;
use crate::numerics::{frac, rat, rat_f64, Rat, UpperHalfParam, C64};
use crate::Result;

pub use compose::{compose_db, hom_dim_db, HoloBlock, HoloDeg0, HoloMorphism};
pub use hom::{hom_structure, serre_dual_basis, HomStructure};

/// Normal-form datum of an indecomposable vector bundle: the direct image
/// under π_r of L(φ) ⊗ F(V, exp N) with φ the (n, x)-factor, x = a·(rτ) + b.
#[derive(Debug, Clone, PartialEq)]
pub struct BundleDatum {
    /// Isogeny degree r ≥ 1.
    pub r: i64,
    /// Degree of the line-bundle part on the cover; coprime to r.
    pub n: i64,
    /// τ′-coefficient of the twist point, reduced to [0, 1/r).
    pub a: Rat,
    /// Constant part of the twist point, in [0, 1).
    pub b: Rat,
    /// Cyclic nilpotent part of the unipotent bundle.
    pub nil: CMat,
}

impl BundleDatum {
    pub fn new(r: i64, n: i64, a: Rat, b: Rat, nil: CMat) -> Result<Self> {
        if r < 1 {
            return Err(Error::domain("isogeny degree must be positive"));
        }
        if r > 1 && num_integer::Integer::gcd(&n, &r) != 1 {
            return Err(Error::domain(
                "pushforward normal form requires gcd(n, r) = 1",
            ));
        }
        if !nil.is_square() || nil.rows == 0 || !nil.is_nilpotent(1e-12) {
            return Err(Error::domain("unipotent part: N must be nilpotent"));
        }
        let dim = nil.rows;
        if dim > 1 && nil.rank() != dim - 1 {
            return Err(Error::domain("unipotent part: N must be cyclic"));
        }
        let a = frac(a * rat(r, 1)) / rat(r, 1);
        Ok(BundleDatum {
            r,
            n,
            a,
            b: frac(b),
            nil,
        })
    }

    /// Trivial line bundle O.
    pub fn structure_sheaf() -> Self {
        BundleDatum {
            r: 1,
            n: 0,
            a: rat(0, 1),
            b: rat(0, 1),
            nil: CMat::zeros(1, 1),
        }
    }

    pub fn dim_v(&self) -> usize {
        self.nil.rows
    }

    /// Rank over the base curve.
    pub fn rank(&self) -> i64 {
        self.r * self.dim_v() as i64
    }

    /// Degree of the direct image (preserved by π_{r∗}).
    pub fn degree(&self) -> i64 {
        self.n * self.dim_v() as i64
    }
}

/// Torsion sheaf S(x, V, N) supported at x = aτ + b.
#[derive(Debug, Clone, PartialEq)]
pub struct TorsionDatum {
    pub a: Rat,
    pub b: Rat,
    pub nil: CMat,
}

impl TorsionDatum {
    pub fn new(a: Rat, b: Rat, nil: CMat) -> Result<Self> {
        if !nil.is_square() || nil.rows == 0 || !nil.is_nilpotent(1e-12) {
            return Err(Error::domain("torsion module: N must be nilpotent"));
        }
        let dim = nil.rows;
        if dim > 1 && nil.rank() != dim - 1 {
            return Err(Error::domain("torsion module: N must be cyclic"));
        }
        Ok(TorsionDatum {
            a: frac(a),
            b: frac(b),
            nil,
        })
    }

    pub fn dim_v(&self) -> usize {
        self.nil.rows
    }
}

/// An indecomposable coherent sheaf in normal form.
#[derive(Debug, Clone, PartialEq)]
pub enum Sheaf {
    Bundle(BundleDatum),
    Torsion(TorsionDatum),
}

impl Sheaf {
    pub fn dim_v(&self) -> usize {
        match self {
            Sheaf::Bundle(b) => b.dim_v(),
            Sheaf::Torsion(t) => t.dim_v(),
        }
    }

    pub fn nil(&self) -> &CMat {
        match self {
            Sheaf::Bundle(b) => &b.nil,
            Sheaf::Torsion(t) => &t.nil,
        }
    }
}

/// An object of the derived category: a formal direct sum of shifted
/// indecomposables. The empty sum is the zero object.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct DbObject {
    pub summands: Vec<(Sheaf, i64)>,
}

impl DbObject {
    pub fn zero() -> Self {
        DbObject { summands: vec![] }
    }

    pub fn single(sheaf: Sheaf, shift: i64) -> Self {
        DbObject {
            summands: vec![(sheaf, shift)],
        }
    }

    pub fn bundle(b: BundleDatum) -> Self {
        DbObject::single(Sheaf::Bundle(b), 0)
    }

    pub fn torsion(t: TorsionDatum) -> Self {
        DbObject::single(Sheaf::Torsion(t), 0)
    }

    pub fn direct_sum(parts: Vec<DbObject>) -> Self {
        DbObject {
            summands: parts.into_iter().flat_map(|p| p.summands).collect(),
        }
    }

    pub fn shifted(&self, k: i64) -> DbObject {
        DbObject {
            summands: self
                .summands
                .iter()
                .map(|(s, sh)| (s.clone(), sh + k))
                .collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.summands.is_empty()
    }
}

/// The basis of global sections of the line bundle with factor (n, x) on the
/// curve of modulus τ′, as callbacks z ↦ t*_{x/n} θ[k/n, 0](nτ′, nz). Empty
/// for n ≤ 0 (the trivial bundle's constants are handled by the Hom spaces,
/// not here).
pub fn section_basis(
    tau_prime: &UpperHalfParam,
    n: i64,
    a: Rat,
    b: Rat,
) -> Vec<Box<dyn Fn(C64) -> C64>> {
    if n <= 0 {
        return Vec::new();
    }
    let x = tau_prime.as_complex() * rat_f64(a) + rat_f64(b);
    let tp = *tau_prime;
    (0..n)
        .map(|k| {
            let f: Box<dyn Fn(C64) -> C64> = Box::new(move |z: C64| {
                let scaled = UpperHalfParam::new(tp.b * n as f64, tp.a * n as f64).unwrap();
                theta(&scaled, z * n as f64 + x, k as f64 / n as f64, 0.0, None)
            });
            f
        })
        .collect()
}
