use modcheck::quadspace::QuadSpace;
use modcheck::rng::Sampler;
use modcheck::schmid::*;
use modcheck::special::bessel_k;
use modcheck::Error;
use nalgebra::DMatrix;
use num_complex::Complex64;
use proptest::prelude::*;

fn sample_points(space: &QuadSpace, seed: u64, count: usize) -> Vec<MPoint> {
    let mut rng = Sampler::new(seed);
    (0..count)
        .map(|_| {
            let sign = if rng.uniform(0.0, 1.0) < 0.5 { -1.0 } else { 1.0 };
            let t = sign * rng.uniform(0.4, 1.6);
            MPoint::new(space, t, space.random_isometry(&mut rng, 0.5)).unwrap()
        })
        .collect()
}

#[test]
fn whittaker_on_v1_direction() {
    let s = QuadSpace::standard(2);
    for &r in &[0.3, 1.0, 2.5] {
        let eta = [r, 0.0, 0.0, 0.0];
        let w = whittaker_w(&s, &eta, &MPoint::identity(&s, 1.0), 3).unwrap();
        for v in -3i64..=3 {
            let sign = if v % 2 == 0 { 1.0 } else { -1.0 };
            let want = sign * bessel_k(v as i32, 2f64.sqrt() * r).unwrap();
            assert!((w.get(v) - Complex64::new(want, 0.0)).norm() < 1e-13 * want.abs());
        }
    }
}

#[test]
fn whittaker_parity_and_eps_prime() {
    let s = QuadSpace::standard(2);
    let eta = [0.8, -0.3, 0.4, 0.1];
    let ell = 3;
    let ep = eps_prime(&s);
    for p in sample_points(&s, 11, 10) {
        let w = whittaker_w(&s, &eta, &p, ell).unwrap();
        let wneg = whittaker_w(&s, &eta, &MPoint { t: -p.t, m: p.m.clone() }, ell).unwrap();
        let weps = whittaker_w(&s, &eta, &MPoint { t: p.t, m: &p.m * &ep }, ell).unwrap();
        for v in -3i64..=3 {
            let sign = if (3 + v) % 2 == 0 { 1.0 } else { -1.0 };
            assert!((wneg.get(v) - w.get(v) * sign).norm() <= 1e-12 * w.max_abs());
            assert!((weps.get(v) - w.get(-v)).norm() <= 1e-12 * w.max_abs());
        }
    }
}

#[test]
fn whittaker_rejects_inadmissible_eta() {
    let s = QuadSpace::standard(2);
    let p = MPoint::identity(&s, 1.0);
    assert_eq!(whittaker_w(&s, &[0.0, 0.0, 1.0, 0.0], &p, 2), Err(Error::EtaNotAdmissible));
    assert_eq!(whittaker_w(&s, &[0.0; 4], &p, 2), Err(Error::EtaNotAdmissible));
    assert!(matches!(whittaker_w(&s, &[1.0; 3], &p, 2), Err(Error::DimensionMismatch { .. })));
}

#[test]
fn difference_differential_equations() {
    let s = QuadSpace::standard(2);
    let pts = sample_points(&s, 5, 50);
    let r = whittaker_residuals(&s, &[1.0, 0.0, 0.0, 0.0], 2, &pts).unwrap();
    assert!(r <= 1e-6, "rank two residual {r:e}");
    let r = whittaker_residuals(&s, &[1.0, 0.0, 1.0, 0.0], 2, &pts).unwrap();
    assert!(r <= 1e-6, "rank one residual {r:e}");
}

#[test]
fn perturbed_whittaker_is_detected() {
    let s = QuadSpace::standard(2);
    let eta = [1.0, 0.0, 0.0, 0.0];
    let bumped = |_: &[f64], t: f64, m: &DMatrix<f64>| {
        let mut w = whittaker_w(&s, &eta, &MPoint { t, m: m.clone() }, 2)?;
        w.set(1, w.get(1) * 1.01);
        Ok(w)
    };
    let r = residuals_of(&s, &bumped, &eta, 2, &sample_points(&s, 5, 10)).unwrap();
    assert!(r > 1e-3, "detector residual {r:e}");
}

#[test]
fn schmid_operator_kills_whittaker_functions() {
    let s = QuadSpace::standard(2);
    let mut rng = Sampler::new(21);
    for eta in [[1.0, 0.0, 0.0, 0.0], [1.0, 0.0, 1.0, 0.0], [0.7, -0.4, 0.3, 0.2]] {
        let f = whittaker_function(&s, &eta, 2);
        for p in sample_points(&s, 3, 8) {
            let x: Vec<f64> = (0..4).map(|_| rng.uniform(-1.0, 1.0)).collect();
            let out = schmid_apply(&s, &f, 2, &x, &p, 1e-4).unwrap();
            assert!(out.residual() <= 1e-6, "eta {eta:?}: {:e}", out.residual());
        }
    }
}

#[test]
fn schmid_of_f1_gives_s_minus_ell_minus_one() {
    let s = QuadSpace::standard(2);
    for ell in 1..=4usize {
        for &sv in &[0.5, 3.0, ell as f64 + 1.0, 7.25] {
            let f1 = move |_: &[f64], t: f64, _: &DMatrix<f64>| {
                let mut w = VlVector::zeros(ell);
                w.set(0, Complex64::new(t.abs().powf(sv), 0.0));
                Ok(w)
            };
            for p in sample_points(&s, 9, 3) {
                let t = p.t.abs();
                let p = MPoint { t, m: p.m };
                let out = schmid_apply(&s, &f1, ell, &[0.0; 4], &p, 1e-4).unwrap();
                let ts = t.powf(sv);
                let r2 = 2f64.sqrt();
                let i1 = out.index(1);
                let i0 = out.index(0);
                // √2 D_ℓ f¹ = (s − ℓ − 1) f²: coefficient +1 on ⊗y at v = 1, −1 on ⊗x at v = 0
                let c_y = out.y_um[i1] / (r2 * ts);
                let c_x = out.x_um[i0] / (r2 * ts);
                let want = sv - ell as f64 - 1.0;
                assert!((c_y - want).norm() < 1e-8, "ell {ell} s {sv}: {c_y}");
                assert!((c_x + want).norm() < 1e-8);
                let mut rest = 0.0f64;
                for (k, c) in out.y_um.iter().enumerate() {
                    if k != i1 {
                        rest = rest.max(c.norm());
                    }
                }
                for (k, c) in out.x_um.iter().enumerate() {
                    if k != i0 {
                        rest = rest.max(c.norm());
                    }
                }
                for c in out.y_uj.iter().chain(&out.x_uj).flatten() {
                    rest = rest.max(c.norm());
                }
                assert!(rest < 1e-8 * ts.max(1.0));
            }
        }
    }
}

fn probes(space: &QuadSpace) -> Vec<DMatrix<f64>> {
    sample_points(space, 77, 6).into_iter().map(|p| p.m).collect()
}

#[test]
fn constant_term_template_cases() {
    let s = QuadSpace::standard(2);
    let pr = probes(&s);
    let zero = constant_term_template(&s, 2, Complex64::new(0.0, 0.0), |_| Complex64::new(0.0, 0.0), &pr).unwrap();
    for p in sample_points(&s, 1, 4) {
        assert_eq!(zero.eval(p.t, &p.m).max_abs(), 0.0);
    }
    let only0 = constant_term_template(&s, 3, Complex64::new(1.0, 0.0), |_| Complex64::new(0.0, 0.0), &pr).unwrap();
    for p in sample_points(&s, 2, 4) {
        let w = only0.eval(p.t, &p.m);
        for v in -3i64..=3 {
            let want = if v == 0 { p.t.powi(3) * p.t.abs() } else { 0.0 };
            assert_eq!(w.get(v), Complex64::new(want, 0.0));
        }
    }
}

#[test]
fn holomorphic_constant_term_is_annihilated() {
    let s = QuadSpace::standard(2);
    let b0 = [1.0, 0.0, 1.0, 0.0];
    let pr = probes(&s);
    for ell in [2usize, 3] {
        let ct = constant_term_template(&s, ell, Complex64::new(0.6, -1.3), holomorphic_section(&s, &b0, ell), &pr).unwrap();
        let f = ct.as_function();
        for p in sample_points(&s, 31, 6) {
            let out = schmid_apply(&s, &f, ell, &[0.2, -0.1, 0.3, 0.0], &p, 1e-4).unwrap();
            assert!(out.residual() <= 1e-6, "ell {ell}: {:e}", out.residual());
        }
    }
}

#[test]
fn wrong_weight_section_is_rejected() {
    let s = QuadSpace::standard(2);
    let b0 = [1.0, 0.0, 1.0, 0.0];
    let r = constant_term_template(&s, 2, Complex64::new(1.0, 0.0), antiholomorphic_section(&s, &b0, 2), &probes(&s));
    assert!(matches!(r, Err(Error::EquivarianceViolation(_))));
}

#[test]
fn schmid_output_is_km_equivariant() {
    // a non-solution with the right K∩M equivariance
    let s = QuadSpace::standard(2);
    let eta = [0.9, 0.2, 0.3, -0.1];
    let ell = 2usize;
    let f = |x: &[f64], t: f64, m: &DMatrix<f64>| {
        let mut w = whittaker_function(&s, &eta, ell)(x, t, m)?;
        for v in -2i64..=2 {
            w.set(v, w.get(v) * (1.0 + 0.1 * (v * v) as f64));
        }
        Ok(w)
    };
    let x = [0.1, 0.2, -0.3, 0.05];
    for p in sample_points(&s, 8, 4) {
        let base = schmid_apply(&s, &f, ell, &x, &p, 1e-4).unwrap();
        assert!(base.residual() > 1e-3);
        let tol = 1e-7 * base.scale;
        let (k, z) = so2_element(&s, 0.83);
        let rot = schmid_apply(&s, &f, ell, &x, &MPoint { t: p.t, m: &p.m * &k }, 1e-4).unwrap();
        let neg = schmid_apply(&s, &f, ell, &x, &MPoint { t: -p.t, m: p.m.clone() }, 1e-4).unwrap();
        for v in (1 - ell as i64)..=(ell as i64) {
            let i = base.index(v);
            let sy = z.powi(-(v as i32 - 1));
            let sx = z.powi(-(v as i32));
            assert!((rot.y_um[i] - base.y_um[i] * sy).norm() < tol);
            assert!((rot.x_um[i] - base.x_um[i] * sx).norm() < tol);
            for j in 0..2 {
                assert!((rot.y_uj[j][i] - base.y_uj[j][i] * sy).norm() < tol);
                assert!((rot.x_uj[j][i] - base.x_uj[j][i] * sx).norm() < tol);
            }
            // ε acts on S^{2k}(Y₂) by x^a y^b ↦ (−1)^k i^{a−b} x^a y^b (so εx² = x²,
            // ε on 𝕍_ℓ is (−1)^{ℓ+v}), on u₋ by −1 and on u_j trivially
            let e = if (ell as i64 - v) % 2 == 0 { 1.0 } else { -1.0 };
            assert!((neg.y_um[i] + base.y_um[i] * e).norm() < tol);
            assert!((neg.x_um[i] - base.x_um[i] * e).norm() < tol);
            for j in 0..2 {
                assert!((neg.y_uj[j][i] - base.y_uj[j][i] * e).norm() < tol);
                assert!((neg.x_uj[j][i] + base.x_uj[j][i] * e).norm() < tol);
            }
        }
    }
}

#[test]
fn whittaker_components_solve_bessel_ode() {
    let s = QuadSpace::standard(2);
    let eta = [1.1, 0.3, 0.2, 0.4];
    let ell = 2usize;
    for p in sample_points(&s, 13, 6) {
        let t = p.t.abs();
        let u = u_eta(&s, &eta, &MPoint { t, m: p.m.clone() }).norm();
        for v in -2i64..=2 {
            let g = |l: f64| {
                let tt = t * l.exp();
                whittaker_w(&s, &eta, &MPoint { t: tt, m: p.m.clone() }, ell).unwrap().get(v) / tt.powi(ell as i32 + 1)
            };
            let h = 1e-3;
            let c = |h: f64| (g(h) - 2.0 * g(0.0) + g(-h)) / (h * h);
            let second = (4.0 * c(h / 2.0) - c(h)) / 3.0;
            let res = (second - g(0.0) * ((v * v) as f64 + u * u)).norm() / g(0.0).norm();
            assert!(res <= 1e-5, "v {v}: {res:e}");
        }
    }
}

#[test]
fn whittaker_decays_in_t() {
    let s = QuadSpace::standard(2);
    let eta = [1.0, 0.0, 0.5, 0.0];
    let m = DMatrix::identity(4, 4);
    let mut last = f64::INFINITY;
    for k in 1..16 {
        let t = 2.0 * k as f64;
        let w = whittaker_w(&s, &eta, &MPoint { t, m: m.clone() }, 2).unwrap().max_abs();
        assert!(w < last);
        last = w;
    }
    assert!(last < 1e-8);
}

#[test]
fn schmid_is_linear() {
    let s = QuadSpace::standard(2);
    let e1 = [1.0, 0.0, 0.0, 0.0];
    let e2 = [0.5, 0.5, 0.2, 0.1];
    let (a, b) = (Complex64::new(0.3, 1.2), Complex64::new(-2.0, 0.5));
    let f = whittaker_function(&s, &e1, 2);
    let g = |x: &[f64], t: f64, m: &DMatrix<f64>| {
        let mut w = whittaker_function(&s, &e2, 2)(x, t, m)?;
        w.set(2, w.get(2) * 3.0);
        Ok(w)
    };
    let fg = |x: &[f64], t: f64, m: &DMatrix<f64>| Ok(f(x, t, m)?.scale(a).add(&g(x, t, m)?.scale(b)));
    let x = [0.3, 0.0, 0.1, -0.2];
    for p in sample_points(&s, 4, 4) {
        let (of, og, ofg) = (
            schmid_apply(&s, &f, 2, &x, &p, 1e-4).unwrap(),
            schmid_apply(&s, &g, 2, &x, &p, 1e-4).unwrap(),
            schmid_apply(&s, &fg, 2, &x, &p, 1e-4).unwrap(),
        );
        let scale = ofg.scale.max(1.0);
        for i in 0..of.y_um.len() {
            assert!((ofg.y_um[i] - (of.y_um[i] * a + og.y_um[i] * b)).norm() <= 1e-9 * scale);
            assert!((ofg.x_um[i] - (of.x_um[i] * a + og.x_um[i] * b)).norm() <= 1e-9 * scale);
            for j in 0..2 {
                assert!((ofg.x_uj[j][i] - (of.x_uj[j][i] * a + og.x_uj[j][i] * b)).norm() <= 1e-9 * scale);
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn admissible_eta_never_degenerates(
        a in -2.0f64..2.0, b in -2.0f64..2.0, c in -1.0f64..1.0, seed in 0u64..1000
    ) {
        // η = (a, b, c·r, 0) with r ≤ √(a²+b²) keeps q′(η) ≥ 0
        let s = QuadSpace::standard(2);
        let r = (a * a + b * b).sqrt();
        prop_assume!(r > 0.05);
        let eta = [a, b, c * r, 0.0];
        let mut rng = Sampler::new(seed);
        let m = s.random_isometry(&mut rng, 0.7);
        let p = MPoint::new(&s, 1.0, m).unwrap();
        prop_assert!(u_eta(&s, &eta, &p).norm() > 0.0);
        prop_assert!(whittaker_w(&s, &eta, &p, 1).is_ok());
    }
}
