//! Real special functions: Γ, ζ, K- and J-Bessel, Gauss ₂F₁ and partial
//! sums of Appell's F₄.

use std::f64::consts::PI;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::quad;
use crate::{Error, Result, Q};

// ---------------------------------------------------------------------------
// Gamma

const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

fn is_nonpositive_integer(x: f64) -> bool {
    x <= 0.0 && x == x.floor()
}

/// ln Γ(x) for x ≥ 0.5.
fn ln_gamma_pos(x: f64) -> f64 {
    let x = x - 1.0;
    let mut a = LANCZOS[0];
    let t = x + LANCZOS_G + 0.5;
    for (i, c) in LANCZOS.iter().enumerate().skip(1) {
        a += c / (x + i as f64);
    }
    0.5 * (2.0 * PI).ln() + (x + 0.5) * t.ln() - t + a.ln()
}

/// Sign and natural log of |Γ(x)|.
pub fn ln_gamma_signed(x: f64) -> Result<(f64, f64)> {
    if is_nonpositive_integer(x) {
        return Err(Error::Pole(x));
    }
    if x >= 0.5 {
        return Ok((1.0, ln_gamma_pos(x)));
    }
    // Γ(x)Γ(1−x) = π / sin(πx)
    let s = sin_pi(x);
    let sign = if s > 0.0 { 1.0 } else { -1.0 };
    Ok((sign, PI.ln() - s.abs().ln() - ln_gamma_pos(1.0 - x)))
}

/// sin(πx) with exact reduction of the integer part.
pub fn sin_pi(x: f64) -> f64 {
    let r = x - 2.0 * (x / 2.0).floor();
    if r == 0.0 || r == 1.0 {
        return 0.0;
    }
    if r == 0.5 {
        return 1.0;
    }
    if r == 1.5 {
        return -1.0;
    }
    (PI * r).sin()
}

pub fn gamma_real(x: f64) -> Result<f64> {
    if is_nonpositive_integer(x) {
        return Err(Error::Pole(x));
    }
    if x == x.floor() && x <= 21.0 {
        let mut p = 1.0;
        let mut k = 2.0;
        while k < x {
            p *= k;
            k += 1.0;
        }
        return Ok(p);
    }
    let (s, l) = ln_gamma_signed(x)?;
    Ok(s * l.exp())
}

/// Rising factorial (z)_k as a product.
pub fn pochhammer_num(z: f64, k: u32) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (z + i as f64))
}

// ---------------------------------------------------------------------------
// Bernoulli numbers and zeta

/// B_0..B_{2*60} exact (B_1 = −1/2 convention).
pub fn bernoulli(n: usize) -> Q {
    static TABLE: OnceLock<Vec<Q>> = OnceLock::new();
    let t = TABLE.get_or_init(|| {
        let m = 121;
        let mut b: Vec<Q> = Vec::with_capacity(m);
        b.push(Q::one());
        for k in 1..m {
            // Σ_{j<k+1} C(k+1, j) B_j = 0
            let mut acc = Q::zero();
            let mut binom = BigInt::one();
            for (j, bj) in b.iter().enumerate() {
                acc += BigRational::from_integer(binom.clone()) * bj;
                binom = binom * BigInt::from(k + 1 - j) / BigInt::from(j + 1);
            }
            b.push(-acc / BigRational::from_integer(BigInt::from(k + 1)));
        }
        b
    });
    t[n].clone()
}

fn bernoulli_f64(n: usize) -> f64 {
    bernoulli(n).to_f64().unwrap()
}

/// ζ(x) by Euler–Maclaurin, valid for real x ≥ 0.5, x ≠ 1.
fn zeta_em(x: f64) -> f64 {
    if x >= 30.0 {
        let mut s = 0.0;
        for n in (1..=30).rev() {
            s += (n as f64).powf(-x);
        }
        return s + 31f64.powf(1.0 - x) / (x - 1.0);
    }
    let n = 20usize;
    let nf = n as f64;
    let mut s = 0.0;
    for k in (1..n).rev() {
        s += (k as f64).powf(-x);
    }
    s += nf.powf(1.0 - x) / (x - 1.0) + 0.5 * nf.powf(-x);
    // Σ B_{2k}/(2k)! · x(x+1)…(x+2k−2) · N^{−x−2k+1}
    let mut rising = x; // x(x+1)...(x+2k-2) for k=1
    let mut fact = 2.0; // (2k)!
    let mut npow = nf.powf(-x - 1.0);
    for k in 1..=14usize {
        let term = bernoulli_f64(2 * k) / fact * rising * npow;
        s += term;
        if term.abs() < 1e-18 * s.abs() {
            break;
        }
        rising *= (x + 2.0 * k as f64 - 1.0) * (x + 2.0 * k as f64);
        fact *= (2 * k + 1) as f64 * (2 * k + 2) as f64;
        npow /= nf * nf;
    }
    s
}

/// Sign and log|ζ(x)| for real x not a pole or trivial zero.
pub fn zeta_signed_log(x: f64) -> Result<(f64, f64)> {
    if x == 1.0 {
        return Err(Error::Domain("zeta pole at 1".into()));
    }
    if x == 0.0 {
        return Ok((-1.0, 0.5f64.ln()));
    }
    if x >= 0.5 {
        let z = zeta_em(x);
        return Ok((z.signum(), z.abs().ln()));
    }
    // ζ(x) = 2^x π^{x−1} sin(πx/2) Γ(1−x) ζ(1−x)
    let sn = sin_pi(x / 2.0);
    if sn == 0.0 {
        return Err(Error::Domain(format!("trivial zero of zeta at {x}")));
    }
    let (gs, gl) = ln_gamma_signed(1.0 - x)?;
    let (zs, zl) = zeta_signed_log(1.0 - x)?;
    let l = x * 2f64.ln() + (x - 1.0) * PI.ln() + sn.abs().ln() + gl + zl;
    Ok((sn.signum() * gs * zs, l))
}

/// Riemann ζ on the real line (0 at trivial zeros, error at 1).
pub fn zeta(x: f64) -> Result<f64> {
    if x < 0.0 && x == x.floor() && (x / 2.0) == (x / 2.0).floor() {
        return Ok(0.0);
    }
    let (s, l) = zeta_signed_log(x)?;
    Ok(s * l.exp())
}

// ---------------------------------------------------------------------------
// Bessel functions

/// K_v(y) = ∫_0^∞ e^{−y cosh u} cosh(vu) du, by the trapezoidal rule on the
/// whole line (exponentially convergent for this analytic integrand).
pub fn bessel_k(v: i32, y: f64) -> Result<f64> {
    let (s, l) = bessel_k_log(v, y)?;
    let _ = s;
    let out = l.exp();
    if !out.is_finite() {
        return Err(Error::EvaluationOverflow);
    }
    Ok(out)
}

/// ln K_v(y), useful when K_v itself over- or underflows.
pub fn bessel_k_log(v: i32, y: f64) -> Result<(f64, f64)> {
    if !(y > 0.0) {
        return Err(Error::Domain(format!("bessel_k needs y > 0, got {y}")));
    }
    let v = (v as f64).abs();
    let ustar = (v / y).asinh();
    let gmax = v * ustar - y * ustar.cosh();
    let expo = |u: f64, sgn: f64| (sgn * v * u - y * u.cosh() - gmax).exp();
    let f = |u: f64| 0.5 * (expo(u, 1.0) + expo(u, -1.0));
    // cut where the leading exponent is below e^{-45}
    let mut upper: f64 = ustar + 1.0;
    while v * upper - y * upper.cosh() - gmax > -45.0 {
        upper += 0.5;
    }
    let mut nodes = 32usize;
    let mut h = upper / nodes as f64;
    let mut sum = 0.5 * f(0.0) + (1..=nodes).map(|k| f(k as f64 * h)).sum::<f64>();
    let mut est = h * sum;
    for _ in 0..16 {
        let odd: f64 = (0..nodes).map(|k| f((2 * k + 1) as f64 * h / 2.0)).sum();
        sum += odd;
        nodes *= 2;
        h /= 2.0;
        let next = h * sum;
        let done = (next - est).abs() <= 1e-15 * next.abs();
        est = next;
        if done && nodes >= 128 {
            break;
        }
    }
    Ok((1.0, est.ln() + gmax))
}

/// J_ν(y) for real ν ≥ 0, y ≥ 0.
pub fn bessel_j(nu: f64, y: f64) -> Result<f64> {
    if y < 0.0 || nu < 0.0 {
        return Err(Error::Domain(format!("bessel_j needs nu, y >= 0 (nu={nu}, y={y})")));
    }
    if y == 0.0 {
        return Ok(if nu == 0.0 { 1.0 } else { 0.0 });
    }
    if y <= 12.0 {
        return Ok(bessel_j_series(nu, y));
    }
    if nu.fract() == 0.0 && nu < 1e4 {
        return Ok(bessel_j_int_miller(nu as usize, y));
    }
    // Schläfli's integral
    let a = quad::integrate(|t| (nu * t - y * t.sin()).cos(), 0.0, PI, 1e-15, 1e-15);
    let mut val = a.value / PI;
    let s = sin_pi(nu);
    if s != 0.0 {
        let mut upper: f64 = 1.0;
        while y * upper.sinh() + nu * upper < 50.0 {
            upper += 1.0;
        }
        let b = quad::integrate(|t| (-y * t.sinh() - nu * t).exp(), 0.0, upper, 1e-16, 1e-15);
        val -= s / PI * b.value;
    }
    Ok(val)
}

/// Miller's backward recurrence for integer order, normalized by
/// J₀ + 2ΣJ_{2k} = 1.
fn bessel_j_int_miller(n: usize, y: f64) -> f64 {
    let top = n.max(y as usize) + 40 + (40.0 * (n.max(y as usize) as f64)).sqrt() as usize;
    let top = top + top % 2;
    let (mut jp1, mut j) = (0.0f64, 1e-300f64);
    let (mut sum, mut res) = (0.0f64, 0.0f64);
    for k in (1..=top).rev() {
        let jm1 = 2.0 * k as f64 / y * j - jp1;
        jp1 = j;
        j = jm1;
        if j.abs() > 1e250 {
            j *= 1e-250;
            jp1 *= 1e-250;
            sum *= 1e-250;
            res *= 1e-250;
        }
        // j now holds J_{k−1}
        if k - 1 == n {
            res = j;
        }
        if (k - 1) % 2 == 0 && k > 1 {
            sum += 2.0 * j;
        }
    }
    res / (sum + j)
}

fn bessel_j_series(nu: f64, y: f64) -> f64 {
    let half = 0.5 * y;
    let (gs, gl) = ln_gamma_signed(nu + 1.0).expect("nu >= 0");
    let mut term = gs * (nu * half.ln() - gl).exp();
    let mut sum = term;
    let h2 = half * half;
    let mut k = 0.0;
    loop {
        k += 1.0;
        term *= -h2 / (k * (k + nu));
        sum += term;
        if term.abs() < 1e-17 * sum.abs().max(1e-300) && k > h2.sqrt() {
            break;
        }
        if k > 500.0 {
            break;
        }
    }
    sum
}

// ---------------------------------------------------------------------------
// Hypergeometric functions

fn nonpos_int(x: f64) -> Option<u64> {
    if is_nonpositive_integer(x) {
        Some((-x) as u64)
    } else {
        None
    }
}

fn terminating_sum(a: f64, b: f64, c: f64, z: f64, n: u64) -> Result<f64> {
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 0..n {
        let kf = k as f64;
        if c + kf == 0.0 {
            return Err(Error::Domain("c is a non-positive integer reached before termination".into()));
        }
        term *= (a + kf) * (b + kf) / ((c + kf) * (kf + 1.0)) * z;
        sum += term;
    }
    Ok(sum)
}

/// Gauss ₂F₁(a, b; c; z) for real arguments.
///
/// Terminating series are summed directly. When c−a or c−b is a
/// non-positive integer the Pfaff transformation reduces to a finite sum
/// for any z < 1. Otherwise the power series is used for |z| < 1.
pub fn hyp2f1(a: f64, b: f64, c: f64, z: f64) -> Result<f64> {
    if let Some(n) = nonpos_int(a) {
        return terminating_sum(a, b, c, z, n);
    }
    if let Some(n) = nonpos_int(b) {
        return terminating_sum(b, a, c, z, n);
    }
    if nonpos_int(c).is_some() {
        return Err(Error::Domain("c is a non-positive integer".into()));
    }
    if z == 0.0 {
        return Ok(1.0);
    }
    if z < 1.0 {
        if let Some(n) = nonpos_int(c - b) {
            let w = z / (z - 1.0);
            return Ok((1.0 - z).powf(-a) * terminating_sum(c - b, a, c, w, n)?);
        }
        if let Some(n) = nonpos_int(c - a) {
            let w = z / (z - 1.0);
            return Ok((1.0 - z).powf(-b) * terminating_sum(c - a, b, c, w, n)?);
        }
    }
    if z.abs() >= 1.0 {
        return Err(Error::Convergence(format!("2F1 series at |z| = {} >= 1", z.abs())));
    }
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 0..2_000_000u64 {
        let kf = k as f64;
        term *= (a + kf) * (b + kf) / ((c + kf) * (kf + 1.0)) * z;
        sum += term;
        if term.abs() <= 1e-17 * sum.abs() && k > 4 {
            return Ok(sum);
        }
    }
    Err(Error::Convergence("2F1 series exceeded iteration limit".into()))
}

/// Exact terminating ₂F₁ over ℚ; requires a or b in {0, −1, −2, ...}.
pub fn hyp2f1_exact(a: &Q, b: &Q, c: &Q, z: &Q) -> Result<Q> {
    let nonpos = |x: &Q| x.is_integer() && !x.is_positive();
    let (a, b) = if nonpos(a) {
        (a, b)
    } else if nonpos(b) {
        (b, a)
    } else {
        return Err(Error::Domain("exact 2F1 requires a terminating parameter".into()));
    };
    let n = (-a.to_integer()).to_u64().unwrap();
    let mut term = Q::one();
    let mut sum = Q::one();
    for k in 0..n {
        let kq = Q::from_integer(BigInt::from(k));
        let ck = c + &kq;
        if ck.is_zero() {
            return Err(Error::Domain("c is a non-positive integer reached before termination".into()));
        }
        term = term * (a + &kq) * (b + &kq) / (ck * (&kq + Q::one())) * z;
        sum += &term;
    }
    Ok(sum)
}

/// Truncated Appell F₄ with a geometric tail estimate.
#[derive(Debug, Clone, Copy)]
pub struct F4Partial {
    pub value: f64,
    pub tail_bound: f64,
}

/// Σ_{m+n ≤ N} (a)_{m+n}(b)_{m+n} / ((c)_m (d)_n m! n!) x^m y^n.
pub fn appell_f4_partial(a: f64, b: f64, c: f64, d: f64, x: f64, y: f64, order: usize) -> Result<F4Partial> {
    let rho = x.abs().sqrt() + y.abs().sqrt();
    if rho >= 1.0 {
        return Err(Error::Convergence(format!("F4 needs sqrt|x|+sqrt|y| < 1, got {rho}")));
    }
    if nonpos_int(c).is_some() || nonpos_int(d).is_some() {
        return Err(Error::Domain("F4 lower parameter is a non-positive integer".into()));
    }
    // first-column terms t(m, 0)
    let mut col = vec![1.0f64; order + 1];
    for m in 1..=order {
        let mf = (m - 1) as f64;
        col[m] = col[m - 1] * (a + mf) * (b + mf) / ((c + mf) * (mf + 1.0)) * x;
    }
    let mut shells = vec![0.0f64; order + 1];
    let mut value = 0.0;
    for m in 0..=order {
        let mut t = col[m];
        value += t;
        shells[m] += t.abs();
        for n in 1..=(order - m) {
            let s = (m + n - 1) as f64;
            let nf = (n - 1) as f64;
            t *= (a + s) * (b + s) / ((d + nf) * (nf + 1.0)) * y;
            value += t;
            shells[m + n] += t.abs();
        }
    }
    let mut r = rho * rho;
    for k in order.saturating_sub(2)..order {
        if k >= 1 && shells[k] > 0.0 {
            r = r.max(shells[k + 1] / shells[k]);
        }
    }
    let tail_bound = if r >= 1.0 { f64::INFINITY } else { shells[order] * r / (1.0 - r) };
    Ok(F4Partial { value, tail_bound })
}
