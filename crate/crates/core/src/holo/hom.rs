//! Hom spaces between indecomposable sheaves.
//!
//! Morphisms between direct images are computed through their kernel
//! presentation: a map π_{r₁∗}E₁ → π_{r₂∗}E₂ acts on equivariant functions by
//!
//! ```text
//!   t(w) = Σ_{j<r₁} K_j(w)·s(w + jτ),
//! ```
//!
//! and equivariance of t ties the K_j along orbits of j ↦ j − r₂ (mod r₁).
//! Each of the gcd(r₁, r₂) orbits carries one independent section K_ν of a
//! line-bundle ⊗ hom-of-unipotents structure on the common cover of modulus
//! Rτ, R = r₁r₂/gcd: the (Δn, X_ν) data below, derived by accumulating the
//! step factors symbolically in exact rationals. For Δn > 0 the canonical
//! basis is the dressed theta basis
//!
//! ```text
//!   h_{ν,k}(w)(f) = θ[k/Δn, 0](Δn·Rτ, Δn·w + X_ν  −  N_W/(2πi)) · f,
//! ```
//!
//! whose Fourier coefficients at frequency l ≡ k (mod Δn) are the exact
//! exponentials c_l · exp(−(l/Δn)N_W) with N_W f = s₂N₂f − f·s₁N₁.

use crate::error::Error;
use crate::holo::afo::{Afo, ExpFactor, ExpVal, ScaledMat};
use crate::holo::{BundleDatum, Sheaf, TorsionDatum};
use crate::geometry::TorusPoint;
use crate::numerics::linalg::{kernel_basis, sylvester_operator, CMat};
use crate::numerics::{frac, rat, Rat, UpperHalfParam, C64};
use crate::Result;
use num_integer::Integer;

/// One orbit block of a bundle-bundle Hom space: X_ν = a_x·(Rτ) + b_x.
#[derive(Debug, Clone, PartialEq)]
pub struct ThetaBlock {
    pub a_x: Rat,
    pub b_x: Rat,
}

/// Bundle→bundle Hom with positive relative degree on the common cover.
#[derive(Debug, Clone)]
pub struct ThetaHom {
    pub src: BundleDatum,
    pub dst: BundleDatum,
    /// gcd(r₁, r₂): the number of orbit blocks.
    pub d: i64,
    /// Common cover multiplier R = r₁r₂/d.
    pub big_r: i64,
    pub s1: i64,
    pub s2: i64,
    /// Theta degree Δn = (n₂r₁ − n₁r₂)/d, positive here.
    pub delta_n: i64,
    pub blocks: Vec<ThetaBlock>,
}

impl ThetaHom {
    pub fn d1(&self) -> usize {
        self.src.dim_v()
    }
    pub fn d2(&self) -> usize {
        self.dst.dim_v()
    }

    pub fn dim(&self) -> usize {
        self.d as usize * self.delta_n as usize * self.d1() * self.d2()
    }

    /// Scalar Fourier coefficient of the undressed basis element k at
    /// frequency l ≡ k (mod Δn).
    pub fn scalar_coeff(&self, nu: usize, l: i64) -> ExpVal {
        let blk = &self.blocks[nu];
        ExpVal {
            u: rat(self.big_r, self.delta_n) * (rat(l * l, 1) + rat(2 * l, 1) * blk.a_x),
            v: rat(l, self.delta_n) * blk.b_x,
        }
    }

    /// The dressing operator at frequency l applied to a matrix:
    /// exp(−(l/Δn)N_W)(f) = e^{−c·s₂N₂}·f·e^{c·s₁N₁}, c = l/Δn.
    pub fn dress(&self, l: i64, f: &CMat, invert: bool) -> CMat {
        let sign = if invert { 1.0 } else { -1.0 };
        let c = sign * l as f64 / self.delta_n as f64;
        let left = self
            .dst
            .nil
            .scale(C64::new(c * self.s2 as f64, 0.0))
            .exp_nilpotent();
        let right = self
            .src
            .nil
            .scale(C64::new(-c * self.s1 as f64, 0.0))
            .exp_nilpotent();
        left.mul(f).mul(&right)
    }

    /// Frequency window capturing all coefficients within ~78 decades of the
    /// peak for this block.
    pub fn freq_window(&self, nu: usize, tau: &UpperHalfParam) -> (i64, i64) {
        let a_x = crate::numerics::rat_f64(self.blocks[nu].a_x);
        let ratio = self.big_r as f64 / self.delta_n as f64;
        let w = (180.0 / (std::f64::consts::PI * tau.a * ratio)).sqrt().ceil() as i64 + 2;
        let center = (-a_x).round() as i64;
        (center - w, center + w)
    }

    /// Analytic Fourier object of the basis element (ν, k) with matrix part f.
    pub fn basis_afo(&self, tau: &UpperHalfParam, nu: usize, k: i64, f: &CMat) -> Afo {
        let mut out = Afo::zero(self.d2(), self.d1());
        let (lo, hi) = self.freq_window(nu, tau);
        let mut l = k.rem_euclid(self.delta_n) + (lo.div_euclid(self.delta_n)) * self.delta_n;
        while l <= hi {
            if l >= lo {
                let c = self.scalar_coeff(nu, l).scaled(tau);
                let mat = self.dress(l, f, false);
                out.insert_add(
                    l,
                    ScaledMat {
                        mat: mat.scale(c.val),
                        log: c.log,
                    },
                );
            }
            l += self.delta_n;
        }
        out
    }

    /// The intersection point on the base torus assigned to (ν, k): the image
    /// under the degree-R cover map of the cover-level point e_k.
    pub fn epoint(&self, nu: usize, k: i64) -> TorusPoint {
        let blk = &self.blocks[nu];
        let dn = rat(self.delta_n, 1);
        let n1c = rat(self.src.n * self.s1, 1);
        let n2c = rat(self.dst.n * self.s2, 1);
        let ex = (blk.a_x + rat(k, 1)) / dn;
        let ey = -self.dst.a + (n2c * blk.a_x + n1c * rat(k, 1)) / dn;
        TorusPoint::new(ex * rat(self.big_r, 1), ey)
    }
}

/// Same-slope bundle pair with equal twist data: flat homs.
#[derive(Debug, Clone)]
pub struct FlatHom {
    pub ker: Vec<Vec<C64>>,
    pub d1: usize,
    pub d2: usize,
}

/// Bundle → torsion: one full Hom(V₁, V₂) block per preimage of the support.
#[derive(Debug, Clone)]
pub struct JetHom {
    pub src: BundleDatum,
    pub dst: TorsionDatum,
}

impl JetHom {
    pub fn r1(&self) -> i64 {
        self.src.r
    }
    pub fn dim(&self) -> usize {
        self.src.r as usize * self.src.dim_v() * self.dst.dim_v()
    }

    /// Cover-level twist of the pulled-back support point for block j:
    /// x₂ + jτ = ((a₂+j)/r₁)·(r₁τ) + b₂.
    pub fn cover_a2(&self, j: i64) -> Rat {
        (self.dst.a + rat(j, 1)) / rat(self.src.r, 1)
    }

    /// Mirror intersection point assigned to block j.
    pub fn epoint(&self, j: i64) -> TorusPoint {
        let a2 = self.cover_a2(j);
        TorusPoint::new(
            -self.dst.a,
            -rat(self.src.n, 1) * a2 - self.src.a,
        )
    }
}

/// Torsion → torsion with equal support: module homomorphisms.
#[derive(Debug, Clone)]
pub struct TorsionHom {
    pub ker: Vec<Vec<C64>>,
    pub d1: usize,
    pub d2: usize,
}

/// The Hom space between two indecomposables, with basis bookkeeping.
#[derive(Debug, Clone)]
pub enum HomStructure {
    Zero,
    Theta(ThetaHom),
    Flat(FlatHom),
    Jet(JetHom),
    Torsion(TorsionHom),
}

impl HomStructure {
    pub fn dim(&self) -> usize {
        match self {
            HomStructure::Zero => 0,
            HomStructure::Theta(t) => t.dim(),
            HomStructure::Flat(f) => f.ker.len(),
            HomStructure::Jet(j) => j.dim(),
            HomStructure::Torsion(t) => t.ker.len(),
        }
    }
}

/// Step data of the kernel recursion j ↦ (j − r₂) mod r₁.
pub(crate) fn orbit_step(r1: i64, r2: i64, j: i64) -> (i64, i64) {
    let j_next = (j - r2).rem_euclid(r1);
    let m = (r2 + j_next - j) / r1;
    (j_next, m)
}

/// Π_{c<m} φ₁(z + c·r₁τ) as an exponential factor.
pub(crate) fn phi1_power(b1: &BundleDatum, m: i64) -> ExpFactor {
    let phi1 = ExpFactor::automorphy(b1.n, b1.r, b1.a, b1.b);
    let mut out = ExpFactor::one();
    for c in 0..m {
        out = out.mul(&phi1.translated_tau(rat(c * b1.r, 1)));
    }
    out
}

/// Accumulated quasi-period factor of the kernel orbit through ν, giving the
/// exact (Δn, X_ν) data of its section space on the common cover.
fn orbit_quasi_period(b1: &BundleDatum, b2: &BundleDatum, nu: i64) -> ExpFactor {
    let (r1, r2) = (b1.r, b2.r);
    let d = r1.gcd(&r2);
    let steps = r1 / d;
    let phi2 = ExpFactor::automorphy(b2.n, b2.r, b2.a, b2.b);
    let mut total = ExpFactor::one();
    let mut j = nu;
    for c in 0..steps {
        let (j_next, m) = orbit_step(r1, r2, j);
        let step = phi2
            .translated_tau(rat(c * r2, 1))
            .mul(&phi1_power(b1, m).translated_tau(rat(c * r2 + j, 1)).inv());
        total = total.mul(&step);
        j = j_next;
    }
    debug_assert_eq!(j, nu, "orbit did not close");
    // K_ν(w + Rτ) = TotalFactor(w)·e^{s₂N₂}·K_ν(w)·e^{−s₁N₁}.
    total
}

/// Hom space between indecomposables by the case table.
pub fn hom_structure(a: &Sheaf, b: &Sheaf) -> Result<HomStructure> {
    match (a, b) {
        (Sheaf::Bundle(b1), Sheaf::Bundle(b2)) => bundle_bundle(b1, b2),
        (Sheaf::Bundle(b1), Sheaf::Torsion(t2)) => Ok(HomStructure::Jet(JetHom {
            src: b1.clone(),
            dst: t2.clone(),
        })),
        (Sheaf::Torsion(_), Sheaf::Bundle(_)) => Ok(HomStructure::Zero),
        (Sheaf::Torsion(t1), Sheaf::Torsion(t2)) => {
            if t1.a == t2.a && t1.b == t2.b {
                let op = sylvester_operator(&t2.nil, &t1.nil);
                Ok(HomStructure::Torsion(TorsionHom {
                    ker: kernel_basis(&op),
                    d1: t1.dim_v(),
                    d2: t2.dim_v(),
                }))
            } else {
                Ok(HomStructure::Zero)
            }
        }
    }
}

fn bundle_bundle(b1: &BundleDatum, b2: &BundleDatum) -> Result<HomStructure> {
    let d = b1.r.gcd(&b2.r);
    let big_r = b1.r * b2.r / d;
    let (s1, s2) = (big_r / b1.r, big_r / b2.r);
    let delta_n = (b2.n * b1.r - b1.n * b2.r) / d;
    if delta_n < 0 {
        return Ok(HomStructure::Zero);
    }
    if delta_n == 0 {
        // Same slope forces r₁ = r₂, n₁ = n₂ in normal form; the Hom is
        // nonzero only when the twist data agree exactly.
        if b1.a == b2.a && b1.b == b2.b {
            let op = sylvester_operator(&b2.nil, &b1.nil);
            return Ok(HomStructure::Flat(FlatHom {
                ker: kernel_basis(&op),
                d1: b1.dim_v(),
                d2: b2.dim_v(),
            }));
        }
        return Ok(HomStructure::Zero);
    }
    let mut blocks = Vec::with_capacity(d as usize);
    for nu in 0..d {
        let psi = orbit_quasi_period(b1, b2, nu);
        if -psi.freq != delta_n {
            return Err(Error::domain(format!(
                "orbit degree {} disagrees with Δn = {delta_n}",
                -psi.freq
            )));
        }
        // a_x must be kept unreduced: shifting X by Rτ changes the factor of
        // automorphy, not just the bundle, and the kernels live in the exact
        // section space the orbit produces. b_x is defined mod 1.
        let a_x = (-psi.u - rat(delta_n * big_r, 1)) / rat(2 * big_r, 1);
        let b_x = frac(-psi.v);
        blocks.push(ThetaBlock { a_x, b_x });
    }
    Ok(HomStructure::Theta(ThetaHom {
        src: b1.clone(),
        dst: b2.clone(),
        d,
        big_r,
        s1,
        s2,
        delta_n,
        blocks,
    }))
}

/// Kernels K_j, j = 0..r₁, of the morphism with the given coefficient tensor
/// in the canonical (ν, k, p, q) basis order.
pub fn theta_kernels(
    tau: &UpperHalfParam,
    th: &ThetaHom,
    coeffs: &[C64],
) -> Result<Vec<Afo>> {
    let (r1, r2) = (th.src.r, th.dst.r);
    let (d1, d2) = (th.d1(), th.d2());
    let mut kernels = vec![Afo::zero(d2, d1); r1 as usize];
    let exp_n2 = th.dst.nil.exp_nilpotent();
    for nu in 0..th.d as usize {
        // Assemble the orbit representative from the stored coefficients.
        let mut rep = Afo::zero(d2, d1);
        for k in 0..th.delta_n {
            let mut mat = CMat::zeros(d2, d1);
            let mut nonzero = false;
            for p in 0..d2 {
                for q in 0..d1 {
                    let idx = ((nu * th.delta_n as usize + k as usize) * d2 + p) * d1 + q;
                    let c = coeffs[idx];
                    if c.norm() > 0.0 {
                        nonzero = true;
                    }
                    mat[(p, q)] = c;
                }
            }
            if nonzero {
                rep = rep.add(&th.basis_afo(tau, nu, k, &mat));
            }
        }
        kernels[nu] = rep.clone();
        // Propagate around the orbit.
        let steps = r1 / th.d;
        let mut j = nu as i64;
        let mut cur = rep;
        for _ in 1..steps {
            let (j_next, m) = orbit_step(r1, r2, j);
            let phi2_shift = ExpFactor::automorphy(th.dst.n, th.dst.r, th.dst.a, th.dst.b)
                .translated_tau(rat(-r2, 1));
            let phi1_inv = phi1_power(&th.src, m)
                .translated_tau(rat(j - r2, 1))
                .inv();
            let exp_mn1 = th.src.nil.scale(C64::new(-m as f64, 0.0)).exp_nilpotent();
            cur = cur
                .translated_tau(tau, rat(-r2, 1))
                .lmul(&exp_n2)
                .rmul(&exp_mn1)
                .apply_factor(tau, &phi2_shift.mul(&phi1_inv));
            kernels[j_next as usize] = cur.clone();
            j = j_next;
        }
    }
    Ok(kernels)
}

/// Expand an analytic Fourier object in the dressed theta basis of block ν.
/// Returns the (k, p, q)-ordered coefficients and a relative residual.
pub fn expand_theta_block(
    tau: &UpperHalfParam,
    th: &ThetaHom,
    nu: usize,
    afo: &Afo,
) -> Result<(Vec<C64>, f64)> {
    let (d1, d2) = (th.d1(), th.d2());
    let dn = th.delta_n;
    let mut coeffs = vec![C64::new(0.0, 0.0); dn as usize * d1 * d2];
    let mut residual = 0.0f64;
    let afo_scale = afo.max_log_norm();
    for k in 0..dn {
        // Candidate frequencies in this residue class, best basis-coefficient
        // magnitude first.
        let (lo, hi) = th.freq_window(nu, tau);
        let mut cands: Vec<i64> = (lo..=hi).filter(|l| (l - k).rem_euclid(dn) == 0).collect();
        cands.sort_by(|a, b| {
            let na = th.scalar_coeff(nu, *a).scaled(tau).log;
            let nb = th.scalar_coeff(nu, *b).scaled(tau).log;
            nb.partial_cmp(&na).unwrap()
        });
        let Some(&l0) = cands.first() else { continue };
        let c0 = th.scalar_coeff(nu, l0).scaled(tau);
        let mat = match afo.coeffs.get(&l0) {
            Some(sm) => {
                let ratio_log = sm.log - c0.log;
                if ratio_log.abs() > 600.0 {
                    return Err(Error::Resolution(
                        "theta expansion: coefficient magnitude out of range".into(),
                    ));
                }
                sm.mat
                    .scale((C64::new(1.0, 0.0) / c0.val) * C64::new(ratio_log.exp(), 0.0))
            }
            None => CMat::zeros(d2, d1),
        };
        let c_mat = th.dress(l0, &mat, true);
        for p in 0..d2 {
            for q in 0..d1 {
                coeffs[(k as usize * d2 + p) * d1 + q] = c_mat[(p, q)];
            }
        }
        // Residual check at the next frequency of this class.
        if let Some(&l1) = cands.get(1) {
            let c1 = th.scalar_coeff(nu, l1).scaled(tau);
            let predicted = th.dress(l1, &c_mat, false);
            let pred = ScaledMat {
                mat: predicted.scale(c1.val),
                log: c1.log,
            };
            let actual = afo
                .coeffs
                .get(&l1)
                .cloned()
                .unwrap_or_else(|| ScaledMat::zero(d2, d1));
            let diff = pred.add(&ScaledMat {
                mat: actual.mat.scale(C64::new(-1.0, 0.0)),
                log: actual.log,
            });
            let rel = (diff.log_norm() - afo_scale).exp();
            if rel.is_finite() {
                residual = residual.max(rel);
            }
        }
    }
    Ok((coeffs, residual))
}

/// Basis descriptor realizing Ext¹(A, B) as the dual of Hom(B, A): returns
/// the reverse Hom structure whose canonical basis indexes the stored dual
/// coefficient vectors. Definitional on this representation; the pairing
/// matrix between the two is the identity.
pub fn serre_dual_basis(a: &Sheaf, b: &Sheaf) -> Result<HomStructure> {
    hom_structure(b, a)
}
