//! The additive category of graded Lagrangian lines with local systems on the
//! symplectic torus.
//!
//! Objects are finite tuples of summands (Λ, α, M): a closed line of rational
//! slope, a grading α (a logarithm of the slope, stored as an integer shift of
//! the canonical branch β ∈ (−1/2, 1/2]), and a local system whose monodromy
//! is kept in log form ⊕ exp(−2πib_j·Id + N_j) with rational b_j and nilpotent
//! N_j. Morphisms live on intersection points (transversal case) or in
//! kernel/cokernel spaces of the monodromy action (same-line case), and
//! compose through weighted counts of lifted triangles.

pub mod compose;
pub mod functors;
pub mod hom;
pub mod triangles;

use crate::error::Error;
use crate::geometry::{Dir, LagrangianLine, TorusPoint};
use crate::numerics::linalg::CMat;
use crate::numerics::{frac, rat, rat_f64, C64, Rat};
use crate::Result;
use std::cmp::Ordering;

pub use compose::{compose_symp, SympBlock, SympMorphism};
pub use hom::{hom_space_symp, serre_dual_symp, SympHomSpace};
pub use triangles::triangle_sum;

/// One log-form block of a monodromy operator: exp(−2πib·Id + N).
#[derive(Debug, Clone, PartialEq)]
pub struct LogBlock {
    /// Character exponent, reduced to [0, 1).
    pub b: Rat,
    /// Nilpotent part.
    pub nil: CMat,
}

impl LogBlock {
    pub fn new(b: Rat, nil: CMat) -> Result<Self> {
        if !nil.is_square() || nil.rows == 0 {
            return Err(Error::domain("nilpotent block must be square and nonempty"));
        }
        if !nil.is_nilpotent(1e-12) {
            return Err(Error::domain("monodromy block: N is not nilpotent"));
        }
        Ok(LogBlock { b: frac(b), nil })
    }

    pub fn dim(&self) -> usize {
        self.nil.rows
    }

    /// Sizes of the Jordan blocks of the nilpotent part, descending.
    pub fn jordan_partition(&self) -> Vec<usize> {
        jordan_partition(&self.nil)
    }
}

/// Jordan partition of a nilpotent matrix from its rank sequence: the number
/// of blocks of size ≥ j equals rank(N^{j−1}) − rank(N^j).
pub fn jordan_partition(n: &CMat) -> Vec<usize> {
    let dim = n.rows;
    let mut ranks = vec![dim];
    let mut p = CMat::identity(dim);
    for _ in 0..dim {
        p = p.mul(n);
        ranks.push(p.rank());
    }
    let blocks_total = ranks[0] - ranks[1];
    let mut sizes = Vec::new();
    for i in 0..blocks_total {
        let size = (1..=dim).filter(|&j| ranks[j - 1] - ranks[j] > i).count();
        sizes.push(size);
    }
    sizes.sort_unstable_by(|a, b| b.cmp(a));
    sizes
}

/// Local system monodromy as a direct sum of log blocks.
#[derive(Debug, Clone, PartialEq)]
pub struct Monodromy {
    pub blocks: Vec<LogBlock>,
}

impl Monodromy {
    pub fn single(b: Rat, nil: CMat) -> Result<Self> {
        Ok(Monodromy {
            blocks: vec![LogBlock::new(b, nil)?],
        })
    }

    pub fn trivial(dim: usize) -> Self {
        Monodromy {
            blocks: vec![LogBlock {
                b: rat(0, 1),
                nil: CMat::zeros(dim, dim),
            }],
        }
    }

    pub fn dim(&self) -> usize {
        self.blocks.iter().map(|b| b.dim()).sum()
    }

    /// The monodromy matrix M = ⊕ exp(−2πib_j)·exp(N_j).
    pub fn mat(&self) -> CMat {
        self.power(1)
    }

    /// Integer power M^m, exact per block: the character contributes the
    /// reduced phase exp(−2πi·frac(m·b)) and the unipotent part a finite sum.
    pub fn power(&self, m: i64) -> CMat {
        let dim = self.dim();
        let mut out = CMat::zeros(dim, dim);
        let mut off = 0;
        for blk in &self.blocks {
            let d = blk.dim();
            let phase_arg = rat_f64(frac(blk.b * rat(m, 1)));
            let phase = C64::from_polar(1.0, -2.0 * std::f64::consts::PI * phase_arg);
            let mut unip = CMat::identity(d);
            let mut term = CMat::identity(d);
            for j in 1..d as i64 {
                term = term.mul(&blk.nil).scale(C64::new(m as f64 / j as f64, 0.0));
                unip = unip.add(&term);
            }
            let block_mat = unip.scale(phase);
            for i in 0..d {
                for j in 0..d {
                    out[(off + i, off + j)] = block_mat[(i, j)];
                }
            }
            off += d;
        }
        out
    }

    /// Indecomposable ⇔ a single block with cyclic nilpotent part.
    pub fn is_indecomposable(&self) -> bool {
        self.blocks.len() == 1 && {
            let blk = &self.blocks[0];
            blk.dim() == 1 || blk.nil.rank() == blk.dim() - 1
        }
    }

    /// Conjugacy invariant: multiset of (character, Jordan partition).
    pub fn conjugacy_key(&self) -> Vec<(Rat, Vec<usize>)> {
        let mut key: Vec<_> = self
            .blocks
            .iter()
            .map(|b| (frac(b.b), b.jordan_partition()))
            .collect();
        key.sort();
        key
    }
}

/// A single graded Lagrangian summand (Λ, α, M); α = β(Λ) + shift.
#[derive(Debug, Clone, PartialEq)]
pub struct FKSummand {
    pub line: LagrangianLine,
    /// Integer part of the grading relative to the canonical branch β.
    pub shift: i64,
    pub sys: Monodromy,
}

impl FKSummand {
    pub fn alpha_f64(&self) -> f64 {
        self.line.dir.beta_f64() + self.shift as f64
    }

    pub fn shifted(&self, k: i64) -> FKSummand {
        FKSummand {
            line: self.line,
            shift: self.shift + k,
            sys: self.sys.clone(),
        }
    }

    /// Exact comparison of gradings. α values lie in disjoint intervals
    /// (k − 1/2, k + 1/2], so the integer shift dominates and β breaks ties.
    pub fn alpha_cmp(&self, other: &FKSummand) -> Ordering {
        self.shift
            .cmp(&other.shift)
            .then(self.line.dir.beta_cmp(&other.line.dir))
    }

    /// Is α_other − α_self ∈ [0, 1)? Exact.
    pub fn alpha_diff_in_01(&self, other: &FKSummand) -> bool {
        match self.line.dir.beta_cmp(&other.line.dir) {
            Ordering::Equal => other.shift == self.shift,
            Ordering::Less => other.shift == self.shift,
            Ordering::Greater => other.shift == self.shift + 1,
        }
    }

    /// α_other − α_self when the underlying directions agree (then the
    /// difference is an integer).
    pub fn alpha_diff_integer(&self, other: &FKSummand) -> Option<i64> {
        (self.line.dir == other.line.dir).then(|| other.shift - self.shift)
    }
}

/// An object: an ordered tuple of summands; the empty tuple is the zero
/// object.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct FKObject {
    pub summands: Vec<FKSummand>,
}

impl FKObject {
    pub fn zero() -> Self {
        FKObject { summands: vec![] }
    }

    pub fn single(line: LagrangianLine, shift: i64, sys: Monodromy) -> Self {
        FKObject {
            summands: vec![FKSummand { line, shift, sys }],
        }
    }

    pub fn direct_sum(parts: Vec<FKObject>) -> Self {
        FKObject {
            summands: parts.into_iter().flat_map(|p| p.summands).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.summands.is_empty()
    }
}

/// The shift functor: adds k to every grading.
pub fn shift_symp(x: &FKObject, k: i64) -> FKObject {
    FKObject {
        summands: x.summands.iter().map(|s| s.shifted(k)).collect(),
    }
}

/// Move the object by (dx, dy): each line's basepoint (and with it the
/// anchor) is translated; local systems and gradings are untouched.
pub fn translate_symp(dx: Rat, dy: Rat, x: &FKObject) -> FKObject {
    FKObject {
        summands: x
            .summands
            .iter()
            .map(|s| FKSummand {
                line: LagrangianLine::new(s.line.dir, s.line.base.translate(dx, dy)),
                shift: s.shift,
                sys: s.sys.clone(),
            })
            .collect(),
    }
}

/// Winding number picked up by the system anchored on `sys_line` when a flat
/// section is continued from `from` to `to` along the canonical path running
/// inside `path_line`'s anchor interval. Both lines must present the same
/// subset of the torus.
pub fn flat_transport_winding(
    path_line: &LagrangianLine,
    sys_line: &LagrangianLine,
    from: &TorusPoint,
    to: &TorusPoint,
) -> Result<i64> {
    debug_assert!(path_line.same_subset(sys_line));
    let from_lift = path_line.anchor_lift(from)?;
    let to_lift = path_line.anchor_lift(to)?;
    sys_line.transport_winding(from, &from_lift, to, &to_lift)
}

/// Convenience constructor for a line.
pub fn line(q: i64, p: i64, base: TorusPoint) -> Result<LagrangianLine> {
    Ok(LagrangianLine::new(Dir::new(q, p)?, base))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn jordan_partition_reads_block_sizes() {
        let mut n = CMat::zeros(5, 5);
        // blocks of sizes 3 and 2
        n[(0, 1)] = C64::new(1.0, 0.0);
        n[(1, 2)] = C64::new(1.0, 0.0);
        n[(3, 4)] = C64::new(1.0, 0.0);
        assert_eq!(jordan_partition(&n), vec![3, 2]);
        assert_eq!(jordan_partition(&CMat::zeros(3, 3)), vec![1, 1, 1]);
    }

    #[test]
    fn monodromy_power_reduces_characters_exactly() {
        let m = Monodromy::single(rat(1, 3), CMat::zeros(1, 1)).unwrap();
        let p = m.power(3);
        assert!((p[(0, 0)] - C64::new(1.0, 0.0)).norm() < 1e-15);
        let q = m.power(-1);
        let expect = C64::from_polar(1.0, 2.0 * std::f64::consts::PI / 3.0);
        assert!((q[(0, 0)] - expect).norm() < 1e-15);
    }

    #[test]
    fn alpha_predicates() {
        let l1 = line(1, 0, TorusPoint::origin()).unwrap();
        let l2 = line(1, 1, TorusPoint::origin()).unwrap();
        let s = |l: LagrangianLine, k: i64| FKSummand {
            line: l,
            shift: k,
            sys: Monodromy::trivial(1),
        };
        // β(1,0) = 0 < β(1,1) = 1/4.
        assert!(s(l1, 0).alpha_diff_in_01(&s(l2, 0)));
        assert!(!s(l2, 0).alpha_diff_in_01(&s(l1, 0)));
        assert!(s(l2, 0).alpha_diff_in_01(&s(l1, 1)));
        assert!(!s(l1, 0).alpha_diff_in_01(&s(l2, 1)));
        assert_eq!(s(l1, 0).alpha_cmp(&s(l2, 0)), Ordering::Less);
    }
}
