use torus_mirror::holo::afo::*;
use torus_mirror::holo::hom::*;
use torus_mirror::holo::*;
use torus_mirror::numerics::linalg::CMat;
use torus_mirror::numerics::*;

fn eval(afo: &Afo, tau: &UpperHalfParam, z: C64) -> C64 {
    let mut acc = Scaled::ZERO;
    for (l, c) in &afo.coeffs {
        let phase = C64::i() * 2.0 * std::f64::consts::PI * (*l as f64) * z;
        acc = acc.add(&Scaled::new(c.mat[(0, 0)] * phase.exp(), c.log));
    }
    acc.collapse()
}

fn main() {
    let tau = UpperHalfParam::new(0.2, 0.9).unwrap();
    let tc = tau.as_complex();
    let b1 = BundleDatum::new(2, 1, rat(1, 4), rat(1, 3), CMat::zeros(1, 1)).unwrap();
    let b2 = BundleDatum::new(3, 2, rat(1, 6), rat(1, 2), CMat::zeros(1, 1)).unwrap();
    let HomStructure::Theta(th) = hom_structure(
        &Sheaf::Bundle(b1.clone()),
        &Sheaf::Bundle(b2.clone()),
    )
    .unwrap() else {
        panic!()
    };
    println!("d={} R={} dn={} s1={} s2={}", th.d, th.big_r, th.delta_n, th.s1, th.s2);
    for blk in &th.blocks {
        println!("a_x={} b_x={}", blk.a_x, blk.b_x);
    }
    let coeffs = vec![C64::new(1.0, 0.0)];
    let ks = theta_kernels(&tau, &th, &coeffs).unwrap();

    // 1. rep quasi-periodicity: K0(w + R tau) = Psi(w) K0(w)
    let w = C64::new(0.11, 0.02);
    let lhs = eval(&ks[0], &tau, w + tc * th.big_r as f64);
    // Psi(w) = exp(-pi i dn R tau - 2 pi i X - 2 pi i dn w)
    let x = tc * th.big_r as f64 * rat_f64(th.blocks[0].a_x) + rat_f64(th.blocks[0].b_x);
    let psi = (-C64::i()
        * std::f64::consts::PI
        * (tc * (th.delta_n * th.big_r) as f64 + 2.0 * x + 2.0 * w * th.delta_n as f64))
        .exp();
    let rhs = psi * eval(&ks[0], &tau, w);
    println!("rep quasi-periodicity: rel err {}", (lhs - rhs).norm() / rhs.norm());

    // 2. single-step relation: K_{(j-r2)%r1}(w + r2 tau) * Phi1^{(m)}(w + j tau) = phi2(w) K_j(w)
    for j in 0..b1.r {
        let (jn, m) = {
            let jn = (j - b2.r).rem_euclid(b1.r);
            (jn, (b2.r + jn - j) / b1.r)
        };
        let lhs = eval(&ks[jn as usize], &tau, w + tc * b2.r as f64);
        let phi1m = {
            // product of phi1(z + c r1 tau) at z = w + j tau
            let mut acc = C64::new(1.0, 0.0);
            let x1 = tc * b1.r as f64 * rat_f64(b1.a) + rat_f64(b1.b);
            for c in 0..m {
                let z = w + tc * (j + c * b1.r) as f64;
                acc *= (-C64::i()
                    * std::f64::consts::PI
                    * (tc * (b1.n * b1.r) as f64 + 2.0 * x1 + 2.0 * z * b1.n as f64))
                    .exp();
            }
            acc
        };
        let x2 = tc * b2.r as f64 * rat_f64(b2.a) + rat_f64(b2.b);
        let phi2 = (-C64::i()
            * std::f64::consts::PI
            * (tc * (b2.n * b2.r) as f64 + 2.0 * x2 + 2.0 * w * b2.n as f64))
            .exp();
        let l = lhs * phi1m;
        let r = phi2 * eval(&ks[j as usize], &tau, w);
        println!("step j={j}: rel err {}  |l|={:.3e} |r|={:.3e}", (l - r).norm() / r.norm().max(1e-300), l.norm(), r.norm());
    }

    // Propagation identity: K1(w) = phi2(w-3t) Phi1^(2)(w-3t)^-1 K0(w-3t)
    let x1 = tc * b1.r as f64 * rat_f64(b1.a) + rat_f64(b1.b);
    let x2b = tc * b2.r as f64 * rat_f64(b2.a) + rat_f64(b2.b);
    let phi1_at = |z: C64| (-C64::i() * std::f64::consts::PI * (tc * (b1.n*b1.r) as f64 + 2.0*x1 + 2.0*z*b1.n as f64)).exp();
    let phi2_at = |z: C64| (-C64::i() * std::f64::consts::PI * (tc * (b2.n*b2.r) as f64 + 2.0*x2b + 2.0*z*b2.n as f64)).exp();
    let v = w - tc * 3.0;
    let k1 = eval(&ks[1], &tau, w);
    let pred = phi2_at(v) / (phi1_at(v) * phi1_at(v + tc * 2.0)) * eval(&ks[0], &tau, v);
    println!("propagation identity rel err: {}", (k1 - pred).norm() / pred.norm());
}

#[allow(dead_code)]
fn extra() {}
