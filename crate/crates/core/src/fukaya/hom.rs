//! Hom spaces between graded Lagrangian summands and the symplectic Serre
//! duality pairing.

use crate::error::Error;
use crate::fukaya::{flat_transport_winding, FKSummand};
use crate::geometry::{intersection_points, TorusPoint};
use crate::numerics::linalg::{
    cokernel_representatives, express_in_orthonormal_basis, kernel_basis, mat_of_vec, vec_of_mat,
    CMat,
};
use crate::numerics::C64;
use crate::Result;

/// The Hom space between two summands, with enough data to index a canonical
/// basis.
#[derive(Debug, Clone)]
pub enum SympHomSpace {
    Zero,
    /// Distinct lines, α-difference in [0, 1): one block Hom(V1, V2) per
    /// intersection point, points sorted lexicographically.
    Transversal {
        points: Vec<TorusPoint>,
        d1: usize,
        d2: usize,
    },
    /// Same line, equal α: flat homs {f : M2·f·M1⁻¹ = f}, kept as an
    /// orthonormal basis of vectorized matrices.
    SameLineH0 {
        ker: Vec<Vec<C64>>,
        d1: usize,
        d2: usize,
    },
    /// Same line, α difference 1: cokernel classes of f ↦ M2·f·M1⁻¹ − f,
    /// kept as orthonormal representatives spanning im(S)^⊥.
    SameLineH1 {
        coker: Vec<Vec<C64>>,
        d1: usize,
        d2: usize,
    },
}

impl SympHomSpace {
    pub fn dim(&self) -> usize {
        match self {
            SympHomSpace::Zero => 0,
            SympHomSpace::Transversal { points, d1, d2 } => points.len() * d1 * d2,
            SympHomSpace::SameLineH0 { ker, .. } => ker.len(),
            SympHomSpace::SameLineH1 { coker, .. } => coker.len(),
        }
    }
}

/// The monodromy action f ↦ M2·f·M1⁻¹ − f on Hom(V1, V2), vectorized.
///
/// Built block pair by block pair with the character phase reduced as an
/// exact rational first: when the two characters agree the phase is exactly
/// one, so forced-zero operators are exactly zero and rank decisions stay
/// sharp.
pub(crate) fn same_line_operator(x: &FKSummand, y: &FKSummand) -> CMat {
    use crate::numerics::{frac, rat_f64};
    let (d1, d2) = (x.sys.dim(), y.sys.dim());
    let dim = d1 * d2;
    let mut op = CMat::zeros(dim, dim);
    let mut yoff = 0usize;
    for yblk in &y.sys.blocks {
        let mut xoff = 0usize;
        for xblk in &x.sys.blocks {
            let phase_arg = rat_f64(frac(yblk.b - xblk.b));
            let phase = C64::from_polar(1.0, -2.0 * std::f64::consts::PI * phase_arg);
            let u2 = yblk.nil.exp_nilpotent();
            let u1_inv = xblk.nil.scale(C64::new(-1.0, 0.0)).exp_nilpotent();
            // Component action on f-block (rows in yblk, cols in xblk):
            // f ↦ phase·U2·f·U1⁻¹ − f.
            for p in 0..yblk.dim() {
                for q in 0..xblk.dim() {
                    let row = (yoff + p) * d1 + (xoff + q);
                    for k in 0..yblk.dim() {
                        for l in 0..xblk.dim() {
                            let col = (yoff + k) * d1 + (xoff + l);
                            op[(row, col)] += phase * u2[(p, k)] * u1_inv[(l, q)];
                        }
                    }
                    op[(row, row)] -= C64::new(1.0, 0.0);
                }
            }
            xoff += xblk.dim();
        }
        yoff += yblk.dim();
    }
    op
}

/// Hom(X, Y) for single summands, by the case table. `hom_space_symp`
/// shifts Y to compute a graded Hom.
pub fn hom_space_between(x: &FKSummand, y: &FKSummand) -> Result<SympHomSpace> {
    if x.line.same_subset(&y.line) {
        let diff = x
            .alpha_diff_integer(y)
            .expect("same subset forces parallel directions");
        let op = same_line_operator(x, y);
        return Ok(match diff {
            0 => SympHomSpace::SameLineH0 {
                ker: kernel_basis(&op),
                d1: x.sys.dim(),
                d2: y.sys.dim(),
            },
            1 => SympHomSpace::SameLineH1 {
                coker: cokernel_representatives(&op),
                d1: x.sys.dim(),
                d2: y.sys.dim(),
            },
            _ => SympHomSpace::Zero,
        });
    }
    if !x.alpha_diff_in_01(y) {
        return Ok(SympHomSpace::Zero);
    }
    let points = intersection_points(&x.line, &y.line)?;
    if points.is_empty() {
        // Parallel but distinct: no intersection points, the sum is empty.
        return Ok(SympHomSpace::Zero);
    }
    Ok(SympHomSpace::Transversal {
        points,
        d1: x.sys.dim(),
        d2: y.sys.dim(),
    })
}

/// Hom(X, Y[degree]) for single summands.
pub fn hom_space_symp(x: &FKSummand, y: &FKSummand, degree: i64) -> Result<SympHomSpace> {
    hom_space_between(x, &y.shifted(degree))
}

/// Flat value of a same-line morphism at a point: the stored matrix is the
/// value at the source's anchor basepoint; continuation along the source's
/// anchor interval multiplies by an integer monodromy power of the target.
pub fn flat_value_at(
    x: &FKSummand,
    y: &FKSummand,
    stored: &CMat,
    at: &TorusPoint,
) -> Result<CMat> {
    let w = flat_transport_winding(&x.line, &y.line, &x.line.base, at)?;
    Ok(y.sys.power(w).mul(stored))
}

/// Canonical representative of a cokernel class: the orthogonal projection of
/// the representative onto im(S)^⊥, in the fixed orthonormal representatives.
pub fn canonical_h1_rep(x: &FKSummand, y: &FKSummand, rep: &CMat) -> CMat {
    let op = same_line_operator(x, y);
    let coker = cokernel_representatives(&op);
    let v = vec_of_mat(rep);
    let (coords, _) = express_in_orthonormal_basis(&coker, &v);
    let mut out = vec![C64::new(0.0, 0.0); v.len()];
    for (c, b) in coords.iter().zip(&coker) {
        for (o, bi) in out.iter_mut().zip(b) {
            *o += c * bi;
        }
    }
    mat_of_vec(y.sys.dim(), x.sys.dim(), &out)
}

/// The Serre pairing matrix between Hom(X, Y[1]) and Hom(Y, X), in the
/// canonical coefficient bases of the two spaces. The identification
/// Hom(X, Y[1]) ≅ Hom(Y, X)* is ⟨u, g⟩ = coeffs(u)ᵀ · P · coeffs(g).
pub fn serre_dual_symp(x: &FKSummand, y: &FKSummand) -> Result<CMat> {
    let h_ext = hom_space_symp(x, y, 1)?;
    let h_rev = hom_space_between(y, x)?;
    let (n1, n2) = (h_ext.dim(), h_rev.dim());
    if n1 != n2 {
        return Err(Error::domain(format!(
            "Serre duality dimension mismatch: {n1} vs {n2}"
        )));
    }
    let mut p = CMat::zeros(n1, n2);
    match (&h_ext, &h_rev) {
        (SympHomSpace::Zero, _) | (_, SympHomSpace::Zero) => {}
        (
            SympHomSpace::Transversal { points, d1, d2 },
            SympHomSpace::Transversal { points: pts2, .. },
        ) => {
            // Pointwise trace pairing: ⟨e_pq at x, e_qp at x⟩ = 1.
            debug_assert_eq!(points, pts2);
            for (xi, _) in points.iter().enumerate() {
                for pp in 0..*d2 {
                    for qq in 0..*d1 {
                        let row = (xi * d2 + pp) * d1 + qq;
                        let col = (xi * d1 + qq) * d2 + pp;
                        p[(row, col)] = C64::new(1.0, 0.0);
                    }
                }
            }
        }
        (SympHomSpace::SameLineH1 { coker, d1, d2 }, SympHomSpace::SameLineH0 { ker, .. }) => {
            // ⟨[c], g⟩ = tr(ĝ(base_X)·c) with ĝ the flat value of g at X's
            // anchor basepoint.
            for (i, cvec) in coker.iter().enumerate() {
                let c = mat_of_vec(*d2, *d1, cvec);
                for (j, gvec) in ker.iter().enumerate() {
                    let g0 = mat_of_vec(*d1, *d2, gvec);
                    let ghat = flat_value_at(y, x, &g0, &x.line.base)?;
                    let prod = ghat.mul(&c);
                    let tr: C64 = (0..prod.rows).map(|k| prod[(k, k)]).sum();
                    p[(i, j)] = tr;
                }
            }
        }
        (SympHomSpace::SameLineH0 { ker, d1, d2 }, SympHomSpace::SameLineH1 { coker, .. }) => {
            // ⟨u, [c]⟩ = tr(û(base_Y)·c) with û the flat value of u at Y's
            // anchor basepoint.
            for (i, uvec) in ker.iter().enumerate() {
                let u0 = mat_of_vec(*d2, *d1, uvec);
                let uhat = flat_value_at(x, y, &u0, &y.line.base)?;
                for (j, cvec) in coker.iter().enumerate() {
                    let c = mat_of_vec(*d1, *d2, cvec);
                    let prod = uhat.mul(&c);
                    let tr: C64 = (0..prod.rows).map(|k| prod[(k, k)]).sum();
                    p[(i, j)] = tr;
                }
            }
        }
        _ => {
            return Err(Error::domain(
                "Serre duality pairing: incompatible space shapes",
            ))
        }
    }
    Ok(p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fukaya::{line, Monodromy};
    use crate::numerics::linalg::solve_linear;
    use crate::numerics::rat;

    fn summand(q: i64, p: i64, shift: i64, sys: Monodromy) -> FKSummand {
        FKSummand {
            line: line(q, p, TorusPoint::origin()).unwrap(),
            shift,
            sys,
        }
    }

    #[test]
    fn grading_gap_beyond_unit_interval_gives_zero() {
        // α₂ − α₁ = 1.5-ish: slope 0 at shift 0 against slope 1 at shift 1
        // has difference 5/4 ∉ [0, 1).
        let x = summand(1, 0, 0, Monodromy::trivial(1));
        let y = summand(1, 1, 1, Monodromy::trivial(1));
        assert!(matches!(
            hom_space_between(&x, &y).unwrap(),
            SympHomSpace::Zero
        ));
    }

    #[test]
    fn same_line_scalar_systems_have_dimension_one_in_each_degree() {
        let x = summand(1, 2, 0, Monodromy::trivial(1));
        let y = summand(1, 2, 0, Monodromy::trivial(1));
        assert_eq!(hom_space_symp(&x, &y, 0).unwrap().dim(), 1);
        assert_eq!(hom_space_symp(&x, &y, 1).unwrap().dim(), 1);
    }

    #[test]
    fn different_characters_share_no_eigenvalue() {
        let x = summand(1, 2, 0, Monodromy::single(rat(1, 3), CMat::zeros(1, 1)).unwrap());
        let y = summand(1, 2, 0, Monodromy::single(rat(1, 2), CMat::zeros(1, 1)).unwrap());
        assert_eq!(hom_space_symp(&x, &y, 0).unwrap().dim(), 0);
        assert_eq!(hom_space_symp(&x, &y, 1).unwrap().dim(), 0);
    }

    #[test]
    fn serre_dims_agree_and_scalar_pairing_is_unit() {
        let x = summand(1, 1, 0, Monodromy::trivial(1));
        let y = summand(1, 1, 0, Monodromy::trivial(1));
        let p = serre_dual_symp(&x, &y).unwrap();
        assert_eq!((p.rows, p.cols), (1, 1));
        assert!((p[(0, 0)] - C64::new(1.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn jordan_block_pairing_is_nondegenerate() {
        let mut n = CMat::zeros(2, 2);
        n[(0, 1)] = C64::new(1.0, 0.0);
        let sys = Monodromy::single(rat(1, 5), n).unwrap();
        let x = summand(2, 1, 0, sys.clone());
        let y = summand(2, 1, 0, sys);
        let p = serre_dual_symp(&x, &y).unwrap();
        assert_eq!(p.rows, p.cols);
        assert!(p.rows > 0);
        // Nondegenerate: the pairing matrix is invertible.
        assert!(solve_linear(&p, &CMat::identity(p.rows)).is_ok());
    }

    #[test]
    fn transversal_dimension_counts_points() {
        let x = summand(1, 0, 0, Monodromy::trivial(2));
        let y = summand(1, 3, 0, Monodromy::trivial(1));
        let h = hom_space_between(&x, &y).unwrap();
        assert_eq!(h.dim(), 3 * 2);
    }
}
