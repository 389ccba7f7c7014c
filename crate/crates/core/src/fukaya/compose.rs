//! Morphisms of the additive category and their composition.
//!
//! A morphism is a matrix of blocks over summand pairs. Block shapes follow
//! the case table: transversal blocks carry one stalk matrix per intersection
//! point, same-line blocks are flat homs (degree 0) or cokernel classes
//! (degree 1). Same-line matrices are stored as values at the source's anchor
//! basepoint; moving a flat value along the line multiplies by integer
//! monodromy powers, and those windings are computed exactly, so objects with
//! different anchors on one line compose correctly.

use crate::error::Error;
use crate::fukaya::hom::{canonical_h1_rep, flat_value_at, hom_space_between, SympHomSpace};
use crate::fukaya::triangles::triangle_sum;
use crate::fukaya::{flat_transport_winding, FKObject, FKSummand};
use crate::numerics::linalg::{express_in_orthonormal_basis, mat_of_vec, vec_of_mat, CMat};
use crate::numerics::{C64, UpperHalfParam};
use crate::Result;

/// One block of a morphism between single summands.
#[derive(Debug, Clone, PartialEq)]
pub enum SympBlock {
    /// Stalk maps at the intersection points, in the canonical point order.
    Transversal { mats: Vec<CMat> },
    /// Flat hom, value at the source's anchor basepoint.
    FlatH0 { mat: CMat },
    /// Degree-one same-line class, canonical cokernel representative.
    FlatH1 { mat: CMat },
}

impl SympBlock {
    fn add(&self, other: &SympBlock) -> Result<SympBlock> {
        match (self, other) {
            (SympBlock::Transversal { mats: a }, SympBlock::Transversal { mats: b }) => {
                if a.len() != b.len() {
                    return Err(Error::composition("transversal block length mismatch"));
                }
                Ok(SympBlock::Transversal {
                    mats: a.iter().zip(b).map(|(x, y)| x.add(y)).collect(),
                })
            }
            (SympBlock::FlatH0 { mat: a }, SympBlock::FlatH0 { mat: b }) => {
                Ok(SympBlock::FlatH0 { mat: a.add(b) })
            }
            (SympBlock::FlatH1 { mat: a }, SympBlock::FlatH1 { mat: b }) => {
                Ok(SympBlock::FlatH1 { mat: a.add(b) })
            }
            _ => Err(Error::composition("incompatible block kinds in sum")),
        }
    }

    fn scale(&self, c: C64) -> SympBlock {
        match self {
            SympBlock::Transversal { mats } => SympBlock::Transversal {
                mats: mats.iter().map(|m| m.scale(c)).collect(),
            },
            SympBlock::FlatH0 { mat } => SympBlock::FlatH0 { mat: mat.scale(c) },
            SympBlock::FlatH1 { mat } => SympBlock::FlatH1 { mat: mat.scale(c) },
        }
    }
}

/// A morphism of the additive category: a block matrix over summand pairs.
#[derive(Debug, Clone)]
pub struct SympMorphism {
    pub source: FKObject,
    pub target: FKObject,
    /// blocks[i][j]: component from source summand i into target summand j.
    pub blocks: Vec<Vec<Option<SympBlock>>>,
}

impl SympMorphism {
    pub fn zero(source: FKObject, target: FKObject) -> Self {
        let blocks = vec![vec![None; target.summands.len()]; source.summands.len()];
        SympMorphism {
            source,
            target,
            blocks,
        }
    }

    pub fn identity(x: &FKObject) -> Self {
        let mut m = SympMorphism::zero(x.clone(), x.clone());
        for (i, s) in x.summands.iter().enumerate() {
            m.blocks[i][i] = Some(SympBlock::FlatH0 {
                mat: CMat::identity(s.sys.dim()),
            });
        }
        m
    }

    pub fn set_block(&mut self, i: usize, j: usize, block: SympBlock) {
        self.blocks[i][j] = Some(block);
    }

    pub fn scale(&self, c: C64) -> SympMorphism {
        SympMorphism {
            source: self.source.clone(),
            target: self.target.clone(),
            blocks: self
                .blocks
                .iter()
                .map(|row| row.iter().map(|b| b.as_ref().map(|x| x.scale(c))).collect())
                .collect(),
        }
    }

    pub fn add(&self, other: &SympMorphism) -> Result<SympMorphism> {
        if self.source != other.source || self.target != other.target {
            return Err(Error::composition("sum of morphisms with different ends"));
        }
        let mut out = SympMorphism::zero(self.source.clone(), self.target.clone());
        for i in 0..self.blocks.len() {
            for j in 0..self.blocks[i].len() {
                out.blocks[i][j] = match (&self.blocks[i][j], &other.blocks[i][j]) {
                    (None, None) => None,
                    (Some(a), None) => Some(a.clone()),
                    (None, Some(b)) => Some(b.clone()),
                    (Some(a), Some(b)) => Some(a.add(b)?),
                };
            }
        }
        Ok(out)
    }

    /// Flat coefficient vector over all blocks in the canonical basis order:
    /// blocks (i, j) lexicographic; within a transversal block point-major,
    /// then row-major matrix entries; within same-line blocks, coordinates in
    /// the fixed kernel/cokernel bases.
    pub fn to_coeffs(&self) -> Result<Vec<C64>> {
        let mut out = Vec::new();
        for (i, si) in self.source.summands.iter().enumerate() {
            for (j, tj) in self.target.summands.iter().enumerate() {
                let space = hom_space_between(si, tj)?;
                let block = self.blocks[i][j].as_ref();
                append_block_coeffs(&space, block, si, tj, &mut out)?;
            }
        }
        Ok(out)
    }

    /// Largest coefficient magnitude of the difference with `other`.
    pub fn max_deviation(&self, other: &SympMorphism) -> Result<f64> {
        let a = self.to_coeffs()?;
        let b = other.to_coeffs()?;
        if a.len() != b.len() {
            return Err(Error::composition("coefficient length mismatch"));
        }
        Ok(a.iter()
            .zip(&b)
            .map(|(x, y)| (x - y).norm())
            .fold(0.0, f64::max))
    }

    pub fn max_norm(&self) -> Result<f64> {
        Ok(self
            .to_coeffs()?
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max))
    }
}

fn append_block_coeffs(
    space: &SympHomSpace,
    block: Option<&SympBlock>,
    si: &FKSummand,
    tj: &FKSummand,
    out: &mut Vec<C64>,
) -> Result<()> {
    match space {
        SympHomSpace::Zero => {
            if block.is_some() {
                return Err(Error::composition("block present in a zero Hom space"));
            }
        }
        SympHomSpace::Transversal { points, d1, d2 } => match block {
            None => out.extend(std::iter::repeat(C64::new(0.0, 0.0)).take(points.len() * d1 * d2)),
            Some(SympBlock::Transversal { mats }) => {
                for m in mats {
                    out.extend(m.entries().iter().copied());
                }
            }
            Some(_) => return Err(Error::composition("wrong block kind for transversal Hom")),
        },
        SympHomSpace::SameLineH0 { ker, d1, d2 } => match block {
            None => out.extend(std::iter::repeat(C64::new(0.0, 0.0)).take(ker.len())),
            Some(SympBlock::FlatH0 { mat }) => {
                let (coords, res) = express_in_orthonormal_basis(&ker, &vec_of_mat(mat));
                if res > 1e-8 * mat.max_norm().max(1.0) {
                    return Err(Error::composition(format!(
                        "flat block outside the kernel space (residual {res:.2e})"
                    )));
                }
                debug_assert_eq!(mat.rows * mat.cols, d1 * d2);
                out.extend(coords);
            }
            Some(_) => return Err(Error::composition("wrong block kind for same-line H0")),
        },
        SympHomSpace::SameLineH1 { coker, d1, d2 } => match block {
            None => out.extend(std::iter::repeat(C64::new(0.0, 0.0)).take(coker.len())),
            Some(SympBlock::FlatH1 { mat }) => {
                let can = canonical_h1_rep(si, tj, mat);
                let (coords, _) = express_in_orthonormal_basis(&coker, &vec_of_mat(&can));
                debug_assert_eq!(mat.rows * mat.cols, d1 * d2);
                out.extend(coords);
            }
            Some(_) => return Err(Error::composition("wrong block kind for same-line H1")),
        },
    }
    Ok(())
}

/// Compose two morphisms: v ∘ u with u: X → Y and v: Y → Z.
pub fn compose_symp(
    tau: &UpperHalfParam,
    u: &SympMorphism,
    v: &SympMorphism,
) -> Result<SympMorphism> {
    compose_symp_scaled(tau, u, v, 1.0)
}

/// Same as [`compose_symp`] with an adjustable triangle-sum cutoff, used by
/// the convergence checks.
pub fn compose_symp_scaled(
    tau: &UpperHalfParam,
    u: &SympMorphism,
    v: &SympMorphism,
    cutoff_scale: f64,
) -> Result<SympMorphism> {
    if u.target != v.source {
        return Err(Error::composition("target of u differs from source of v"));
    }
    let mut out = SympMorphism::zero(u.source.clone(), v.target.clone());
    for (i, s1) in u.source.summands.iter().enumerate() {
        for (k, s3) in v.target.summands.iter().enumerate() {
            let mut acc: Option<SympBlock> = None;
            for (j, s2) in u.target.summands.iter().enumerate() {
                let (Some(ub), Some(vb)) = (&u.blocks[i][j], &v.blocks[j][k]) else {
                    continue;
                };
                if let Some(piece) = compose_block(tau, s1, s2, s3, ub, vb, cutoff_scale)? {
                    acc = Some(match acc {
                        None => piece,
                        Some(prev) => prev.add(&piece)?,
                    });
                }
            }
            out.blocks[i][k] = acc;
        }
    }
    Ok(out)
}

/// Composition of single blocks, dispatching on the case table.
fn compose_block(
    tau: &UpperHalfParam,
    s1: &FKSummand,
    s2: &FKSummand,
    s3: &FKSummand,
    ub: &SympBlock,
    vb: &SympBlock,
    cutoff_scale: f64,
) -> Result<Option<SympBlock>> {
    let target = hom_space_between(s1, s3)?;
    if matches!(target, SympHomSpace::Zero) {
        return Ok(None);
    }
    match (ub, vb) {
        // Degree reasons force these to vanish.
        (SympBlock::FlatH1 { .. }, SympBlock::FlatH1 { .. })
        | (SympBlock::FlatH1 { .. }, SympBlock::Transversal { .. })
        | (SympBlock::Transversal { .. }, SympBlock::FlatH1 { .. }) => Ok(None),

        (SympBlock::Transversal { mats: umats }, SympBlock::Transversal { mats: vmats }) => {
            let pts12 = match hom_space_between(s1, s2)? {
                SympHomSpace::Transversal { points, .. } => points,
                _ => return Err(Error::composition("transversal block on non-transversal pair")),
            };
            let pts23 = match hom_space_between(s2, s3)? {
                SympHomSpace::Transversal { points, .. } => points,
                _ => return Err(Error::composition("transversal block on non-transversal pair")),
            };
            match target {
                SympHomSpace::Transversal { points: pts13, d1, d2: d3 } => {
                    // Case (i): three distinct lines, triangle counting.
                    let mut mats = vec![CMat::zeros(d3, d1); pts13.len()];
                    for (xi, x1) in pts12.iter().enumerate() {
                        if umats[xi].max_norm() == 0.0 {
                            continue;
                        }
                        for (yi, x2) in pts23.iter().enumerate() {
                            if vmats[yi].max_norm() == 0.0 {
                                continue;
                            }
                            let parts = triangle_sum(
                                tau,
                                s1,
                                s2,
                                s3,
                                x1,
                                &umats[xi],
                                x2,
                                &vmats[yi],
                                &pts13,
                                cutoff_scale,
                            )?;
                            for (m, p) in mats.iter_mut().zip(parts) {
                                *m = m.add(&p);
                            }
                        }
                    }
                    Ok(Some(SympBlock::Transversal { mats }))
                }
                SympHomSpace::SameLineH1 { .. } => {
                    // Λ₃ = Λ₁ with α₃ = α₁ + 1: reduce through Serre duality;
                    // the class representative is
                    //   (Σ_x v_x·u_x·M₁^{w(x)}) · M₁^{−w(base₁)}
                    // with w(x) the winding of the dual test morphism's flat
                    // continuation from Λ₃'s anchor.
                    debug_assert_eq!(pts12, pts23);
                    let d1 = s1.sys.dim();
                    let d3 = s3.sys.dim();
                    let mut acc = CMat::zeros(d3, d1);
                    for ((x, um), vm) in pts12.iter().zip(umats).zip(vmats) {
                        let w = flat_transport_winding(&s3.line, &s1.line, &s3.line.base, x)?;
                        acc = acc.add(&vm.mul(um).mul(&s1.sys.power(w)));
                    }
                    let wb =
                        flat_transport_winding(&s3.line, &s1.line, &s3.line.base, &s1.line.base)?;
                    let rep = acc.mul(&s1.sys.power(-wb));
                    Ok(Some(SympBlock::FlatH1 {
                        mat: canonical_h1_rep(s1, s3, &rep),
                    }))
                }
                _ => Err(Error::composition(
                    "unexpected target space for transversal·transversal",
                )),
            }
        }

        (SympBlock::FlatH0 { mat: phi }, SympBlock::Transversal { mats: vmats }) => {
            // Λ₁ = Λ₂: stalkwise composition with the flat continuation of φ.
            let pts23 = match hom_space_between(s2, s3)? {
                SympHomSpace::Transversal { points, .. } => points,
                _ => return Err(Error::composition("transversal block on non-transversal pair")),
            };
            let mut mats = Vec::with_capacity(pts23.len());
            for (x, vm) in pts23.iter().zip(vmats) {
                let phix = flat_value_at(s1, s2, phi, x)?;
                mats.push(vm.mul(&phix));
            }
            Ok(Some(SympBlock::Transversal { mats }))
        }

        (SympBlock::Transversal { mats: umats }, SympBlock::FlatH0 { mat: psi }) => {
            // Λ₂ = Λ₃: mirror-symmetric flavor of case (iii).
            let pts12 = match hom_space_between(s1, s2)? {
                SympHomSpace::Transversal { points, .. } => points,
                _ => return Err(Error::composition("transversal block on non-transversal pair")),
            };
            let mut mats = Vec::with_capacity(pts12.len());
            for (x, um) in pts12.iter().zip(umats) {
                let psix = flat_value_at(s2, s3, psi, x)?;
                mats.push(psix.mul(um));
            }
            Ok(Some(SympBlock::Transversal { mats }))
        }

        (SympBlock::FlatH0 { mat: phi }, SympBlock::FlatH0 { mat: psi }) => {
            // Case (iv): all on one line, composition of flat homs at base₁.
            let psihat = flat_value_at(s2, s3, psi, &s1.line.base)?;
            Ok(Some(SympBlock::FlatH0 {
                mat: psihat.mul(phi),
            }))
        }

        (SympBlock::FlatH1 { mat: u0 }, SympBlock::FlatH0 { mat: psi }) => {
            // α₂ = α₁ + 1, α₃ = α₂, one line: class ψ̂(base₁)·u₀.
            let psihat = flat_value_at(s2, s3, psi, &s1.line.base)?;
            let rep = psihat.mul(u0);
            Ok(Some(SympBlock::FlatH1 {
                mat: canonical_h1_rep(s1, s3, &rep),
            }))
        }

        (SympBlock::FlatH0 { mat: phi }, SympBlock::FlatH1 { mat: v0 }) => {
            // α₂ = α₁, α₃ = α₂ + 1, one line. Through the duality reduction:
            //   rep = v₀ · M₂^{a} · φ̂(base₃) · M₁^{−w}
            // with a the winding of a flat section of the middle system from
            // base₃ to base₂ and w the winding of the dual test morphism from
            // base₃ to base₁.
            let a = flat_transport_winding(&s3.line, &s2.line, &s3.line.base, &s2.line.base)?;
            let w = flat_transport_winding(&s3.line, &s1.line, &s3.line.base, &s1.line.base)?;
            let phihat = flat_value_at(s1, s2, phi, &s3.line.base)?;
            let rep = v0
                .mul(&s2.sys.power(a))
                .mul(&phihat)
                .mul(&s1.sys.power(-w));
            Ok(Some(SympBlock::FlatH1 {
                mat: canonical_h1_rep(s1, s3, &rep),
            }))
        }
    }
}

/// Build a morphism from a flat coefficient vector in the canonical order
/// (inverse of [`SympMorphism::to_coeffs`]).
pub fn from_coeffs(source: &FKObject, target: &FKObject, coeffs: &[C64]) -> Result<SympMorphism> {
    let mut m = SympMorphism::zero(source.clone(), target.clone());
    let mut pos = 0usize;
    for (i, si) in source.summands.iter().enumerate() {
        for (j, tj) in target.summands.iter().enumerate() {
            let space = hom_space_between(si, tj)?;
            let dim = space.dim();
            let chunk = coeffs
                .get(pos..pos + dim)
                .ok_or_else(|| Error::composition("coefficient vector too short"))?;
            pos += dim;
            if dim == 0 || chunk.iter().all(|z| z.norm() == 0.0) {
                continue;
            }
            let block = match &space {
                SympHomSpace::Zero => unreachable!(),
                SympHomSpace::Transversal { points, d1, d2 } => {
                    let mats = (0..points.len())
                        .map(|pi| {
                            CMat::from_fn(*d2, *d1, |p, q| chunk[(pi * d2 + p) * d1 + q])
                        })
                        .collect();
                    SympBlock::Transversal { mats }
                }
                SympHomSpace::SameLineH0 { ker, d1, d2 } => {
                    let mut v = vec![C64::new(0.0, 0.0); d1 * d2];
                    for (c, b) in chunk.iter().zip(ker) {
                        for (vi, bi) in v.iter_mut().zip(b) {
                            *vi += c * bi;
                        }
                    }
                    SympBlock::FlatH0 {
                        mat: mat_of_vec(*d2, *d1, &v),
                    }
                }
                SympHomSpace::SameLineH1 { coker, d1, d2 } => {
                    let mut v = vec![C64::new(0.0, 0.0); d1 * d2];
                    for (c, b) in chunk.iter().zip(coker) {
                        for (vi, bi) in v.iter_mut().zip(b) {
                            *vi += c * bi;
                        }
                    }
                    SympBlock::FlatH1 {
                        mat: mat_of_vec(*d2, *d1, &v),
                    }
                }
            };
            m.blocks[i][j] = Some(block);
        }
    }
    if pos != coeffs.len() {
        return Err(Error::composition("coefficient vector too long"));
    }
    Ok(m)
}

/// Total Hom dimension between two objects (sum over summand pairs).
pub fn hom_dim(source: &FKObject, target: &FKObject) -> Result<usize> {
    let mut dim = 0;
    for si in &source.summands {
        for tj in &target.summands {
            dim += hom_space_between(si, tj)?.dim();
        }
    }
    Ok(dim)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fukaya::{line, Monodromy};
    use crate::geometry::TorusPoint;
    use crate::numerics::rat;

    fn tau() -> UpperHalfParam {
        UpperHalfParam::new(0.2, 0.9).unwrap()
    }

    fn summand(q: i64, p: i64, shift: i64, sys: Monodromy) -> FKSummand {
        FKSummand {
            line: line(q, p, TorusPoint::origin()).unwrap(),
            shift,
            sys,
        }
    }

    #[test]
    fn identity_composes_trivially_case_iv() {
        let x = FKObject::single(
            line(1, 2, TorusPoint::origin()).unwrap(),
            0,
            Monodromy::single(rat(1, 3), CMat::zeros(2, 2)).unwrap(),
        );
        let id = SympMorphism::identity(&x);
        let mut f = SympMorphism::zero(x.clone(), x.clone());
        let m = CMat::from_fn(2, 2, |i, j| C64::new((i + j) as f64, 1.0));
        // Flat homs for equal systems with N = 0: every matrix commutes with
        // the scalar monodromy, so any matrix is a valid flat block.
        f.set_block(0, 0, SympBlock::FlatH0 { mat: m });
        let lhs = compose_symp(&tau(), &f, &id).unwrap();
        let rhs = compose_symp(&tau(), &id, &f).unwrap();
        assert!(lhs.max_deviation(&f).unwrap() < 1e-14);
        assert!(rhs.max_deviation(&f).unwrap() < 1e-14);
    }

    #[test]
    fn flat_identity_acts_trivially_on_transversal_case_iii() {
        // φ = identity section: v∘u = u componentwise.
        let x = FKObject::single(
            line(1, 0, TorusPoint::origin()).unwrap(),
            0,
            Monodromy::trivial(1),
        );
        let y = FKObject::single(
            line(1, 2, TorusPoint::origin()).unwrap(),
            0,
            Monodromy::trivial(1),
        );
        let id = SympMorphism::identity(&x);
        let mut u = SympMorphism::zero(x.clone(), y.clone());
        u.set_block(
            0,
            0,
            SympBlock::Transversal {
                mats: vec![
                    CMat::from_fn(1, 1, |_, _| C64::new(1.5, -0.25)),
                    CMat::from_fn(1, 1, |_, _| C64::new(0.0, 2.0)),
                ],
            },
        );
        let got = compose_symp(&tau(), &id, &u).unwrap();
        assert!(got.max_deviation(&u).unwrap() < 1e-14);
    }

    #[test]
    fn alpha_gap_composes_to_zero_case_ii() {
        // u: X → Y transversal, v: Y → Z[1] transversal with α₃ > α₁ + 1:
        // the target Hom is zero, so the composite must be the zero morphism.
        let x = FKObject::single(
            line(1, 0, TorusPoint::origin()).unwrap(),
            0,
            Monodromy::trivial(1),
        );
        let y = FKObject::single(
            line(1, 1, TorusPoint::origin()).unwrap(),
            0,
            Monodromy::trivial(1),
        );
        let z = FKObject::single(
            line(2, 1, TorusPoint::new(rat(1, 3), rat(0, 1))).unwrap(),
            1,
            Monodromy::trivial(1),
        );
        let mut u = SympMorphism::zero(x.clone(), y.clone());
        u.set_block(
            0,
            0,
            SympBlock::Transversal {
                mats: vec![CMat::identity(1)],
            },
        );
        let mut v = SympMorphism::zero(y.clone(), z.clone());
        v.set_block(
            0,
            0,
            SympBlock::Transversal {
                mats: vec![CMat::identity(1), CMat::identity(1)],
            },
        );
        let got = compose_symp(&tau(), &u, &v).unwrap();
        assert!(got.max_norm().unwrap() == 0.0);
    }

    #[test]
    fn coeff_roundtrip() {
        let x = FKObject::single(
            line(1, 0, TorusPoint::origin()).unwrap(),
            0,
            Monodromy::trivial(2),
        );
        let y = FKObject::single(
            line(1, 1, TorusPoint::origin()).unwrap(),
            0,
            Monodromy::trivial(1),
        );
        let dim = hom_dim(&x, &y).unwrap();
        assert_eq!(dim, 2);
        let coeffs: Vec<C64> = (0..dim).map(|k| C64::new(k as f64 + 0.5, -(k as f64))).collect();
        let m = from_coeffs(&x, &y, &coeffs).unwrap();
        let back = m.to_coeffs().unwrap();
        for (a, b) in coeffs.iter().zip(&back) {
            assert!((a - b).norm() < 1e-14);
        }
    }
}
