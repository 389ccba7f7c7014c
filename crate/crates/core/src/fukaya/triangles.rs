//! Weighted sums over lifted holomorphic triangles.
//!
//! For three pairwise distinct lines with gradings α₁ < α₂ < α₃ < α₁ + 1 the
//! composition of stalk maps u at x₁ ∈ Λ₁∩Λ₂ and v at x₂ ∈ Λ₂∩Λ₃ has, at each
//! x₃ ∈ Λ₁∩Λ₃, the component
//!
//! ```text
//!   Σ_triangles exp(2πiτ·Area) · P(M₃) ∘ v ∘ P(M₂) ∘ u ∘ P(M₁)
//! ```
//!
//! Triangles are enumerated on the universal cover: fix the lift x̃₃ of x₃ on
//! the anchor line of Λ₁, run over the lifts x̃₁ = x̃₁⁰ + k·λ₁ of x₁ on that
//! line, draw Λ̃₂ through x̃₁ and intersect with Λ̃₃ through x̃₃; keep the
//! configurations whose boundary cycle x₃ → x₂ → x₁ (alongΛ₃, Λ₂, Λ₁) runs
//! counterclockwise, i.e. whose signed area ordered (x̃₃, x̃₂, x̃₁) is
//! non-negative. Degenerate triangles (all lifts equal) count with area zero.
//! Parallel transports between anchor-identified stalks are integer monodromy
//! powers; the winding of each edge is computed exactly.

use crate::error::Error;
use crate::fukaya::FKSummand;
use crate::geometry::{signed_area, PlanePoint, TorusPoint};
use crate::numerics::linalg::CMat;
use crate::numerics::{rat, rat_f64, Rat, Scaled, UpperHalfParam, C64};
use crate::Result;
use std::cmp::Ordering;

/// ln(1e16): contributions with exp(−2πA·Area) below 1e−16 are dropped.
const LN_TAIL: f64 = 36.841_361_487_904_73;

/// Case (i) precondition: pairwise distinct lines, α₁ < α₂ < α₃ < α₁ + 1.
fn check_grading(s1: &FKSummand, s2: &FKSummand, s3: &FKSummand) -> Result<()> {
    let distinct = !s1.line.same_subset(&s2.line)
        && !s2.line.same_subset(&s3.line)
        && !s1.line.same_subset(&s3.line);
    let ordered = s1.alpha_cmp(s2) == Ordering::Less
        && s2.alpha_cmp(s3) == Ordering::Less
        && s1.alpha_diff_in_01(s3);
    if !(distinct && ordered) {
        return Err(Error::case(
            "triangle sum requires three distinct lines with α₁ < α₂ < α₃ < α₁+1",
        ));
    }
    Ok(())
}

/// All components of the triangle-weighted composition of `u` at `x1` with
/// `v` at `x2`, listed against `x3_points` (the intersection points of Λ₁ and
/// Λ₃ in canonical order). `cutoff_scale` widens the area cutoff; 1.0 is the
/// production value and 2.0 is used by convergence checks.
pub fn triangle_sum(
    tau: &UpperHalfParam,
    s1: &FKSummand,
    s2: &FKSummand,
    s3: &FKSummand,
    x1: &TorusPoint,
    u: &CMat,
    x2: &TorusPoint,
    v: &CMat,
    x3_points: &[TorusPoint],
    cutoff_scale: f64,
) -> Result<Vec<CMat>> {
    check_grading(s1, s2, s3)?;
    let (d1, d3) = (s1.sys.dim(), s3.sys.dim());
    let mut out = vec![CMat::zeros(d3, d1); x3_points.len()];
    let area_max = Rat::approximate_float((LN_TAIL / (2.0 * std::f64::consts::PI * tau.a)) * cutoff_scale)
        .unwrap_or_else(|| rat(64, 1));

    let lam1 = s1.line.dir;
    let lam2 = s2.line.dir;
    let lam3 = s3.line.dir;
    let det23 = lam2.cross(&lam3);
    if det23 == 0 {
        return Err(Error::case("middle and target lines are parallel"));
    }

    for (idx, x3) in x3_points.iter().enumerate() {
        let x3_lift = s1.line.anchor_lift(x3)?;
        let x1_base = s1.line.anchor_lift(x1)?;

        // x̃₂ as a function of k: intersection of x̃₁(k) + ℝλ₂ with
        // x̃₃ + ℝλ₃. Affine in k, so three sample values determine the
        // area quadratic exactly.
        let x2_lift_at = |k: i64| -> PlanePoint {
            let x1k = PlanePoint::new(
                x1_base.x + rat(k * lam1.q, 1),
                x1_base.y + rat(k * lam1.p, 1),
            );
            // Solve x1k + s·λ₂ = x̃₃ + t·λ₃: crossing with λ₃ eliminates t.
            let rx = x3_lift.x - x1k.x;
            let ry = x3_lift.y - x1k.y;
            let s = (rx * rat(lam3.p, 1) - ry * rat(lam3.q, 1)) / rat(det23, 1);
            PlanePoint::new(x1k.x + s * rat(lam2.q, 1), x1k.y + s * rat(lam2.p, 1))
        };
        let x1_lift_at = |k: i64| -> PlanePoint {
            PlanePoint::new(
                x1_base.x + rat(k * lam1.q, 1),
                x1_base.y + rat(k * lam1.p, 1),
            )
        };
        let area_at = |k: i64| signed_area(&x3_lift, &x2_lift_at(k), &x1_lift_at(k));

        // area(k) = a·k² + b·k + c exactly.
        let (a0, a1, am1) = (area_at(0), area_at(1), area_at(-1));
        let qa = (a1 + am1 - a0 - a0) / rat(2, 1);
        let qb = (a1 - am1) / rat(2, 1);
        let qc = a0;
        if qa <= rat(0, 1) {
            return Err(Error::case(
                "area quadratic is not positive definite; grading convention violated",
            ));
        }
        // k-window where area(k) ≤ area_max.
        let (qa_f, qb_f, qc_f) = (rat_f64(qa), rat_f64(qb), rat_f64(qc));
        let vertex = -qb_f / (2.0 * qa_f);
        let disc = (qb_f * qb_f - 4.0 * qa_f * (qc_f - rat_f64(area_max))).max(0.0);
        let half_width = disc.sqrt() / (2.0 * qa_f) + 1.0;
        let k_lo = (vertex - half_width).floor() as i64;
        let k_hi = (vertex + half_width).ceil() as i64;

        let mut acc: Vec<Scaled> = vec![Scaled::ZERO; d3 * d1];
        for k in k_lo..=k_hi {
            let area = qa * rat(k, 1) * rat(k, 1) + qb * rat(k, 1) + qc;
            if area < rat(0, 1) || area > area_max {
                continue;
            }
            let x1l = x1_lift_at(k);
            let x2l = x2_lift_at(k);
            // The lift x̃₂ must project to x₂.
            if !((x2l.x - x2.x).is_integer() && (x2l.y - x2.y).is_integer()) {
                continue;
            }
            let w1 = s1.line.transport_winding(x3, &x3_lift, x1, &x1l)?;
            let w2 = s2.line.transport_winding(x1, &x1l, x2, &x2l)?;
            let w3 = s3.line.transport_winding(x2, &x2l, x3, &x3_lift)?;
            let t1 = s1.sys.power(w1);
            let t2 = s2.sys.power(w2);
            let t3 = s3.sys.power(w3);
            let term = t3.mul(v).mul(&t2).mul(u).mul(&t1);
            // weight exp(2πiτ·area): modulus exp(−2πA·area).
            let area_f = rat_f64(area);
            let weight = Scaled::exp(C64::i() * 2.0 * std::f64::consts::PI * tau.as_complex() * area_f);
            for i in 0..d3 {
                for j in 0..d1 {
                    let contrib = weight.scale_c64(term[(i, j)]);
                    acc[i * d1 + j] = acc[i * d1 + j].add(&contrib);
                }
            }
        }
        out[idx] = CMat::from_fn(d3, d1, |i, j| acc[i * d1 + j].collapse());
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fukaya::{line, Monodromy};
    use crate::geometry::intersection_points;
    use crate::numerics::theta::theta;

    fn trivial_summand(q: i64, p: i64) -> FKSummand {
        FKSummand {
            line: line(q, p, TorusPoint::origin()).unwrap(),
            shift: 0,
            sys: Monodromy::trivial(1),
        }
    }

    /// Mirror triple of the degree 0 → 1 → 2 line bundles: the two output
    /// components are the theta constants θ[0,0](2τ,0) and θ[1/2,0](2τ,0).
    #[test]
    fn addition_formula_anchor() {
        for (b, a) in [(0.2, 0.9), (-0.5, 1.3), (0.0, 0.5)] {
            let tau = UpperHalfParam::new(b, a).unwrap();
            let s1 = trivial_summand(1, 0);
            let s2 = trivial_summand(1, 1);
            let s3 = trivial_summand(1, 2);
            let x1 = TorusPoint::origin();
            let x2 = TorusPoint::origin();
            let x3s = intersection_points(&s1.line, &s3.line).unwrap();
            let one = CMat::identity(1);
            let got = triangle_sum(&tau, &s1, &s2, &s3, &x1, &one, &x2, &one, &x3s, 1.0).unwrap();
            let t2 = UpperHalfParam::new(2.0 * b, 2.0 * a).unwrap();
            let z0 = C64::new(0.0, 0.0);
            // x3s is sorted: (0,0) then (1/2,0) ↔ characteristics 0, 1/2.
            let expect = [theta(&t2, z0, 0.0, 0.0, None), theta(&t2, z0, 0.5, 0.0, None)];
            for (g, e) in got.iter().zip(expect.iter()) {
                assert!(
                    (g[(0, 0)] - e).norm() < 1e-9,
                    "triangle sum {} vs theta constant {} at tau={b}+{a}i",
                    g[(0, 0)],
                    e
                );
            }
        }
    }

    #[test]
    fn zero_input_gives_zero() {
        let tau = UpperHalfParam::new(0.2, 0.9).unwrap();
        let s1 = trivial_summand(1, 0);
        let s2 = trivial_summand(1, 1);
        let s3 = trivial_summand(1, 2);
        let x3s = intersection_points(&s1.line, &s3.line).unwrap();
        let zero = CMat::zeros(1, 1);
        let one = CMat::identity(1);
        let got = triangle_sum(
            &tau,
            &s1,
            &s2,
            &s3,
            &TorusPoint::origin(),
            &zero,
            &TorusPoint::origin(),
            &one,
            &x3s,
            1.0,
        )
        .unwrap();
        assert!(got.iter().all(|m| m.max_norm() == 0.0));
    }

    #[test]
    fn cutoff_doubling_is_stable() {
        let tau = UpperHalfParam::new(0.0, 0.5).unwrap();
        let s1 = trivial_summand(1, 0);
        let s2 = trivial_summand(1, 1);
        let s3 = trivial_summand(1, 2);
        let x3s = intersection_points(&s1.line, &s3.line).unwrap();
        let one = CMat::identity(1);
        let run = |scale: f64| {
            triangle_sum(
                &tau,
                &s1,
                &s2,
                &s3,
                &TorusPoint::origin(),
                &one,
                &TorusPoint::origin(),
                &one,
                &x3s,
                scale,
            )
            .unwrap()
        };
        let v1 = run(1.0);
        let v2 = run(2.0);
        for (a, b) in v1.iter().zip(v2.iter()) {
            assert!(a.sub(b).max_norm() < 1e-12);
        }
    }

    #[test]
    fn grading_violation_is_a_case_error() {
        let tau = UpperHalfParam::new(0.2, 0.9).unwrap();
        let s1 = trivial_summand(1, 2);
        let s2 = trivial_summand(1, 1); // α₂ < α₁: not case (i)
        let s3 = trivial_summand(1, 0);
        let one = CMat::identity(1);
        let err = triangle_sum(
            &tau,
            &s1,
            &s2,
            &s3,
            &TorusPoint::origin(),
            &one,
            &TorusPoint::origin(),
            &one,
            &[TorusPoint::origin()],
            1.0,
        );
        assert!(matches!(err, Err(Error::Case(_))));
    }
}
