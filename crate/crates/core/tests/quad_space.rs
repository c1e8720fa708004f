use modcheck::quadspace::*;
use modcheck::rng::Sampler;
use modcheck::{q, qi, Q};
use num_complex::Complex64;
use num_traits::Zero;
use proptest::prelude::*;

fn rat_vec(len: usize) -> impl Strategy<Value = Vec<Q>> {
    prop::collection::vec((-30i64..30, 1i64..7), len).prop_map(|v| v.into_iter().map(|(n, d)| q(n, d)).collect())
}

fn matmul(a: &[Vec<Q>], b: &[Vec<Q>]) -> Vec<Vec<Q>> {
    let n = a.len();
    (0..n)
        .map(|i| (0..n).map(|j| (0..n).fold(Q::zero(), |s, k| s + &a[i][k] * &b[k][j])).collect())
        .collect()
}

fn apply(m: &[Vec<Q>], v: &[Q]) -> Vec<Q> {
    m.iter().map(|r| r.iter().zip(v).fold(Q::zero(), |s, (a, b)| s + a * b)).collect()
}

fn skewed_space() -> QuadSpace {
    let g2 = vec![vec![qi(2), q(1, 2)], vec![q(1, 2), qi(1)]];
    let gn = vec![vec![qi(3), qi(1), qi(0)], vec![qi(1), qi(2), qi(0)], vec![qi(0), qi(0), q(1, 3)]];
    QuadSpace::with_bilinear_grams(g2, gn).unwrap()
}

#[test]
fn spec_examples() {
    let s = QuadSpace::standard(2);
    assert_eq!(s.norm2(&s.e()).unwrap(), qi(1));
    let t = QuadSpace::with_q_grams(vec![vec![qi(1), qi(0)], vec![qi(0), qi(1)]], vec![vec![qi(1), qi(0)], vec![qi(0), qi(1)]])
        .unwrap();
    assert_eq!(t.pair(&t.basis(1), &t.basis(2)).unwrap(), qi(0));
    assert_eq!(t.pair(&t.basis(1), &t.basis(1)).unwrap(), qi(2));
    assert_eq!(s.tau_sq(&[qi(0), qi(0)], &[qi(0), qi(0)]).unwrap(), qi(1));
    let xn = [qi(2), q(1, 3)];
    let t1 = qi(1) + s.norm2_vn(&xn) / qi(4);
    assert_eq!(s.tau_sq(&xn, &[qi(0), qi(0)]).unwrap(), &t1 * &t1);
    assert!(s.pair(&s.e(), &[qi(1)]).is_err());
}

#[test]
fn proj_v3_of_lift_of_v1() {
    // w = v₁: v = e + v₁ − f/2, (v, u₊) = 1/2, w₂ = v₁
    let s = QuadSpace::standard(2);
    let mut w = vec![qi(0); 4];
    w[0] = qi(1);
    let v = s.lift(&w).unwrap();
    let p = s.proj_v3(&v).unwrap();
    let r2 = 2f64.sqrt();
    // −(1/(2√2))(√2 v₁, iv₁ + v₂) = −i/2 for x², −(1/(2√2))(√2 v₁, iv₁ − v₂) = −i/2 for y²
    assert!((p[0] - Complex64::new(0.0, -0.5)).norm() < 1e-15);
    assert!((p[2] - Complex64::new(0.0, -0.5)).norm() < 1e-15);
    // (1/√2)(1 − q′(w)) · u₊/√2 coefficient: (1 − 1/2)/√2
    assert!((p[1] - Complex64::new(0.5 / r2, 0.0)).norm() < 1e-15);
}

#[test]
fn classify_examples() {
    let s = QuadSpace::standard(1);
    assert_eq!(s.classify_eta(&[qi(1), qi(0), qi(0)]).unwrap(), EtaClass::Rank2);
    assert_eq!(s.classify_eta(&[qi(0), qi(0), qi(1)]).unwrap(), EtaClass::NegativeNorm);
    assert_eq!(s.classify_eta(&[qi(1), qi(0), qi(1)]).unwrap(), EtaClass::Rank1);
    assert_eq!(s.classify_eta(&[qi(0), qi(0), qi(0)]).unwrap(), EtaClass::Zero);
}

#[test]
fn nx_identity_at_zero() {
    let s = QuadSpace::standard(3);
    let m = s.nx_matrix(&vec![qi(0); 5]).unwrap();
    for (i, r) in m.iter().enumerate() {
        for (j, x) in r.iter().enumerate() {
            assert_eq!(*x, qi(i64::from(i == j)));
        }
    }
}

/// Rational rotation by the Pythagorean angle (3/5, 4/5) in the coordinate
/// plane (i, j) of V′, valid when that plane is orthonormal and definite.
fn givens(d: usize, i: usize, j: usize, sign: i64) -> Vec<Vec<Q>> {
    let mut m: Vec<Vec<Q>> = (0..d).map(|a| (0..d).map(|b| qi(i64::from(a == b))).collect()).collect();
    m[i][i] = q(3, 5);
    m[j][j] = q(3, 5);
    m[i][j] = q(-4 * sign, 5);
    m[j][i] = q(4 * sign, 5);
    m
}

/// Hyperbolic boost with (cosh, sinh) = (5/4, 3/4) in a mixed plane.
fn boost(d: usize, i: usize, j: usize) -> Vec<Vec<Q>> {
    let mut m: Vec<Vec<Q>> = (0..d).map(|a| (0..d).map(|b| qi(i64::from(a == b))).collect()).collect();
    m[i][i] = q(5, 4);
    m[j][j] = q(5, 4);
    m[i][j] = q(3, 4);
    m[j][i] = q(3, 4);
    m
}

proptest! {
    #[test]
    fn norm2_of_lift_is_tau_squared(w in rat_vec(5)) {
        let s = QuadSpace::standard(3);
        let v = s.lift(&w).unwrap();
        let two = qi(2);
        let wn: Vec<Q> = w[2..].iter().map(|x| x * &two).collect();
        let w2: Vec<Q> = w[..2].iter().map(|x| x * &two).collect();
        // ‖√2 x‖² = ‖2x‖²/2 keeps everything rational
        let half = q(1, 2);
        let tn = s.norm2_vn(&wn) * &half;
        let t2 = s.norm2_v2(&w2) * &half;
        let a = qi(1) + (&tn - &t2) / qi(4);
        prop_assert_eq!(s.norm2(&v).unwrap(), &a * &a + t2);
    }

    #[test]
    fn norm2_positive_definite(v in rat_vec(7)) {
        let s = skewed_space();
        let n = s.norm2(&v).unwrap();
        prop_assert!(n >= qi(0));
        prop_assert_eq!(n == qi(0), v.iter().all(|c| c.is_zero()));
    }

    #[test]
    fn iota_involution_and_isometry(v in rat_vec(7), w in rat_vec(7)) {
        let s = skewed_space();
        let iv = s.iota(&v).unwrap();
        prop_assert_eq!(s.iota(&iv).unwrap(), v.clone());
        let iw = s.iota(&w).unwrap();
        prop_assert_eq!(s.pair(&iv, &iw).unwrap(), s.pair(&v, &w).unwrap());
        prop_assert_eq!(s.q(&iv).unwrap(), s.q(&v).unwrap());
    }

    #[test]
    fn bilinear_is_polarization(v in rat_vec(7), w in rat_vec(7)) {
        let s = skewed_space();
        let sum: Vec<Q> = v.iter().zip(&w).map(|(a, b)| a + b).collect();
        prop_assert_eq!(s.pair(&v, &w).unwrap(), s.q(&sum).unwrap() - s.q(&v).unwrap() - s.q(&w).unwrap());
    }

    #[test]
    fn nx_is_abelian_isometry(x in rat_vec(5), y in rat_vec(5), v in rat_vec(7)) {
        let s = skewed_space();
        let nx = s.nx_matrix(&x).unwrap();
        let ny = s.nx_matrix(&y).unwrap();
        let xy: Vec<Q> = x.iter().zip(&y).map(|(a, b)| a + b).collect();
        prop_assert_eq!(matmul(&nx, &ny), s.nx_matrix(&xy).unwrap());
        prop_assert_eq!(s.q(&apply(&nx, &v)).unwrap(), s.q(&v).unwrap());
    }

    #[test]
    fn classify_invariant_under_isometries(eta in rat_vec(5), picks in prop::collection::vec(0usize..4, 1..6)) {
        let s = QuadSpace::standard(3);
        let mut e = eta.clone();
        for p in picks {
            let m = match p {
                0 => givens(5, 0, 1, 1),
                1 => givens(5, 2, 3, -1),
                2 => givens(5, 3, 4, 1),
                _ => boost(5, 1, 4),
            };
            e = apply(&m, &e);
        }
        prop_assert_eq!(s.q_prime(&e).unwrap(), s.q_prime(&eta).unwrap());
        prop_assert_eq!(s.classify_eta(&e).unwrap(), s.classify_eta(&eta).unwrap());
    }

    #[test]
    fn proj_v3_linear_and_iota_stable(v in rat_vec(6), w in rat_vec(6), a in -5i64..5) {
        let s = QuadSpace::standard(2);
        let comb: Vec<Q> = v.iter().zip(&w).map(|(x, y)| x * qi(a) + y).collect();
        let (pv, pw, pc) = (s.proj_v3(&v).unwrap(), s.proj_v3(&w).unwrap(), s.proj_v3(&comb).unwrap());
        for k in 0..3 {
            prop_assert!((pc[k] - (pv[k] * a as f64 + pw[k])).norm() < 1e-9);
        }
        let pi = s.proj_v3(&s.iota(&v).unwrap()).unwrap();
        for k in 0..3 {
            prop_assert!((pi[k] - pv[k]).norm() < 1e-12);
        }
    }
}

#[test]
fn sampled_isometries_preserve_form() {
    let s = skewed_space();
    let g = s.gram_prime_f64();
    let mut rng = Sampler::new(7);
    for _ in 0..20 {
        let m = s.random_isometry(&mut rng, 0.8);
        assert!(isometry_defect(&g, &m) < 1e-10);
    }
}
