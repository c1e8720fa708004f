//! Archimedean rank-two Fourier transform of the degenerate section
//! x ↦ p_{V₃}((1,x,−q(x)))^ℓ / ‖(1,x,−q(x))‖^{s+ℓ} on V′(ℝ) = V₂ ⊕ V_n,
//! with the standard orthonormal coordinates of [`QuadSpace::standard`].
//!
//! Polynomials in x, y are kept in the monomial basis x^{ℓ+v}y^{ℓ−v}.
//! Write c₊ = (x₂, iv₁+v₂), a₁ = √2c₊, B = 1 + (‖x_n‖² − ‖x₂‖²)/2 and
//! τ² = B² + 2‖x₂‖², so that τ = τ(√2x_n, √2x₂) = ‖(1,x,−q(x))‖.

use std::f64::consts::{PI, SQRT_2};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::Serialize;

use crate::quad::integrate_with_breaks;
use crate::quadspace::QuadSpace;
use crate::schmid::{whittaker_w, MPoint};
use crate::special::{appell_f4_partial, bessel_j, bessel_k, gamma_real, hyp2f1, hyp2f1_exact};
use crate::{Error, Result, Q};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct XPoint {
    pub x2: [f64; 2],
    pub xn: Vec<f64>,
}

impl XPoint {
    pub fn new(x2: [f64; 2], xn: Vec<f64>) -> Self {
        XPoint { x2, xn }
    }

    pub fn zero(n: usize) -> Self {
        XPoint { x2: [0.0; 2], xn: vec![0.0; n] }
    }

    pub fn n(&self) -> usize {
        self.xn.len()
    }

    pub fn norm2_x2(&self) -> f64 {
        self.x2[0] * self.x2[0] + self.x2[1] * self.x2[1]
    }

    pub fn norm2_xn(&self) -> f64 {
        self.xn.iter().map(|c| c * c).sum()
    }

    /// (x₂, iv₁ + v₂)
    pub fn c_plus(&self) -> Complex64 {
        Complex64::new(self.x2[1], self.x2[0])
    }

    /// (x₂, iv₁ − v₂)
    pub fn c_minus(&self) -> Complex64 {
        Complex64::new(-self.x2[1], self.x2[0])
    }

    /// x₂ with its v₂ coordinate negated.
    pub fn mirrored(&self) -> Self {
        XPoint { x2: [self.x2[0], -self.x2[1]], xn: self.xn.clone() }
    }

    pub fn b(&self) -> f64 {
        1.0 + (self.norm2_xn() - self.norm2_x2()) / 2.0
    }

    pub fn tau_sq(&self) -> f64 {
        let b = self.b();
        b * b + 2.0 * self.norm2_x2()
    }

    pub fn tau(&self) -> f64 {
        self.tau_sq().sqrt()
    }

    /// Coordinates (v₁, v₂, u₁..u_n) on V′.
    pub fn coords(&self) -> Vec<f64> {
        let mut c = self.x2.to_vec();
        c.extend_from_slice(&self.xn);
        c
    }

    pub fn is_x2_zero(&self) -> bool {
        self.x2 == [0.0, 0.0]
    }
}

/// τ(√2x_n, √2x₂)² = (1 + (‖x_n‖² − ‖x₂‖²)/2)² + 2‖x₂‖² over ℚ.
pub fn lift_norm2_exact(space: &QuadSpace, x2: &[Q], xn: &[Q]) -> Q {
    let (a, b) = (space.norm2_vn(xn), space.norm2_v2(x2));
    let t = crate::qi(1) + (&a - &b) / crate::qi(2);
    &t * &t + crate::qi(2) * b
}

/// Homogeneous polynomial of degree 2ℓ; `coeffs[ℓ+v]` multiplies x^{ℓ+v}y^{ℓ−v}.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PolyXY {
    pub ell: usize,
    pub coeffs: Vec<Complex64>,
}

impl PolyXY {
    pub fn zeros(ell: usize) -> Self {
        PolyXY { ell, coeffs: vec![Complex64::new(0.0, 0.0); 2 * ell + 1] }
    }

    pub fn get(&self, v: i64) -> Complex64 {
        self.coeffs[(self.ell as i64 + v) as usize]
    }

    pub fn set(&mut self, v: i64, c: Complex64) {
        self.coeffs[(self.ell as i64 + v) as usize] = c;
    }

    /// (c_xx x² + c_xy xy + c_yy y²)^ℓ
    pub fn quadratic_power(q: [Complex64; 3], ell: usize) -> Self {
        let mut cur = vec![Complex64::new(1.0, 0.0)];
        for _ in 0..ell {
            let mut next = vec![Complex64::new(0.0, 0.0); cur.len() + 2];
            for (k, c) in cur.iter().enumerate() {
                // k is the power of x
                next[k + 2] += c * q[0];
                next[k + 1] += c * q[1];
                next[k] += c * q[2];
            }
            cur = next;
        }
        PolyXY { ell, coeffs: cur }
    }

    pub fn scale(&self, c: Complex64) -> Self {
        PolyXY { ell: self.ell, coeffs: self.coeffs.iter().map(|z| z * c).collect() }
    }

    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn max_diff(&self, other: &PolyXY) -> f64 {
        self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
    }
}

/// The degenerate section at n(x): p_{V₃}(lift)^ℓ / τ^{s+ℓ}.
pub fn inducing_section(x: &XPoint, ell: usize, s: f64) -> PolyXY {
    let x2n = x.norm2_x2();
    let xnn = x.norm2_xn();
    let k = -1.0 / (2.0 * SQRT_2);
    let q = [k * SQRT_2 * x.c_plus(), Complex64::new(k * (x2n - xnn - 2.0), 0.0), k * SQRT_2 * x.c_minus()];
    PolyXY::quadratic_power(q, ell).scale(Complex64::new(x.tau().powf(-(s + ell as f64)), 0.0))
}

fn factorial(k: usize) -> f64 {
    (1..=k).map(|i| i as f64).product()
}

fn binom(n: usize, k: usize) -> f64 {
    factorial(n) / (factorial(k) * factorial(n - k))
}

fn check_ell_n(ell: usize, n: usize) -> Result<()> {
    if n == 0 || 2 * ell < n {
        return Err(Error::Domain(format!("need n ≥ 1 and ℓ ≥ n/2, got ℓ = {ell}, n = {n}")));
    }
    Ok(())
}

fn check_v(v: i64, ell: usize) -> Result<()> {
    if v.unsigned_abs() as usize > ell {
        return Err(Error::Domain(format!("|v| = {} exceeds ℓ = {ell}", v.abs())));
    }
    Ok(())
}

/// τ^{ℓ−v}₂F₁((v−ℓ)/2, (v+ℓ+1)/2; v+1; 2‖x₂‖²/τ²) for 0 ≤ v ≤ ℓ.
///
/// Taken literally for B > 0. For B ≤ 0 the polynomial form
/// B^{ℓ−v}₂F₁((v−ℓ)/2, (v−ℓ+1)/2; v+1; −|a₁|²/B²) is summed term by term,
/// which is the continuation that stays analytic in x.
fn radial_factor(x: &XPoint, ell: usize, v: usize) -> Result<f64> {
    let (l, vf) = (ell as f64, v as f64);
    let b = x.b();
    let a2 = 2.0 * x.norm2_x2();
    if b > 0.0 {
        let t2 = x.tau_sq();
        return Ok(t2.powf((l - vf) / 2.0) * hyp2f1((vf - l) / 2.0, (vf + l + 1.0) / 2.0, vf + 1.0, a2 / t2)?);
    }
    let (p, q, c) = ((vf - l) / 2.0, (vf - l + 1.0) / 2.0, vf + 1.0);
    let top = (ell - v) / 2;
    let mut coef = 1.0;
    let mut sum = 0.0;
    for m in 0..=top {
        if m > 0 {
            let mf = (m - 1) as f64;
            coef *= (p + mf) * (q + mf) / ((c + mf) * (mf + 1.0));
        }
        sum += coef * (-a2).powi(m as i32) * b.powi((ell - v - 2 * m) as i32);
    }
    Ok(sum)
}

/// J_v with J_v = 0 for v ≠ 0 at x₂ = 0.
fn jv_continuous(v: i64, x: &XPoint, ell: usize) -> Result<Complex64> {
    let k = v.unsigned_abs() as usize;
    let a1 = SQRT_2 * x.c_plus();
    if k != 0 && x.is_x2_zero() {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let base = 2f64.powi((ell - k) as i32) * binom(ell, k) * radial_factor(x, ell, k)?;
    let jk = (-a1).powi(k as i32) * base;
    if v >= 0 {
        Ok(jk)
    } else {
        Ok((-a1.conj() / a1).powi(k as i32) * jk)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct IvValue {
    /// normalized transform J_v(x;ℓ)
    pub j: Complex64,
    /// I_v(x;ℓ)
    pub i: Complex64,
}

/// Γ(ℓ+1)/Γ(ℓ−n/2+1) · π^{−(n+2)/2} · τ^{2ℓ+1}/((ℓ+v)!(ℓ−v)!), the factor taking I_v to J_v.
pub fn j_over_i(v: i64, x: &XPoint, ell: usize, n: usize) -> Result<f64> {
    let l = ell as f64;
    let k = v.unsigned_abs() as usize;
    let g = gamma_real(l + 1.0)? / gamma_real(l - n as f64 / 2.0 + 1.0)?;
    Ok(g * PI.powf(-(n as f64 + 2.0) / 2.0) * x.tau().powi(2 * ell as i32 + 1)
        / (factorial(ell + k) * factorial(ell - k)))
}

/// Closed form of J_v(x;ℓ) and I_v(x;ℓ).
pub fn iv_closed(v: i64, x: &XPoint, ell: usize, n: usize) -> Result<IvValue> {
    check_v(v, ell)?;
    check_dim(x, n)?;
    if v != 0 && x.is_x2_zero() {
        return Err(Error::PhaseUndefined);
    }
    let j = jv_continuous(v, x, ell)?;
    Ok(IvValue { j, i: j / j_over_i(v, x, ell, n)? })
}

fn check_dim(x: &XPoint, n: usize) -> Result<()> {
    if x.n() != n {
        return Err(Error::DimensionMismatch { expected: n, got: x.n() });
    }
    Ok(())
}

/// J_ℓ(rt)/r^ℓ, continuous at r = 0.
fn scaled_bessel_j(ell: usize, r: f64, t: f64) -> Result<f64> {
    let z = r * t;
    if z < 1e-3 {
        let h = z * z / 4.0;
        let mut term = (t / 2.0).powi(ell as i32) / factorial(ell);
        let mut sum = term;
        for k in 1..6 {
            term *= -h / (k as f64 * (ell + k) as f64);
            sum += term;
        }
        return Ok(sum);
    }
    Ok(bessel_j(ell as f64, z)? / r.powi(ell as i32))
}

/// I_v(x;ℓ) by adaptive quadrature of the reduced radial integral
/// ∫₀^∞ t^{ℓ+1} J_ℓ(‖x_n‖t) J_{|v|}(‖x₂‖t) K_{|v|}(√2t) dt.
pub fn iv_quadrature(v: i64, x: &XPoint, ell: usize, n: usize, tol: f64) -> Result<Complex64> {
    check_ell_n(ell, n)?;
    check_v(v, ell)?;
    check_dim(x, n)?;
    if v != 0 && x.is_x2_zero() {
        return Err(Error::PhaseUndefined);
    }
    let k = v.unsigned_abs() as usize;
    let (rn, r2) = (x.norm2_xn().sqrt(), x.norm2_x2().sqrt());
    let f = |t: f64| -> f64 {
        if t == 0.0 {
            return 0.0;
        }
        let jl = scaled_bessel_j(ell, rn, t).unwrap_or(f64::NAN);
        let jv = bessel_j(k as f64, r2 * t).unwrap_or(f64::NAN);
        let kv = bessel_k(k as i32, SQRT_2 * t).unwrap_or(f64::NAN);
        t.powi(ell as i32 + 1) * jl * jv * kv
    };
    let upper = 45.0 + 4.0 * ell as f64;
    let breaks: Vec<f64> = (0..=(upper as usize)).map(|i| i as f64).collect();
    let r = integrate_with_breaks(f, &breaks, 1e-300, tol);
    if !r.converged || !r.value.is_finite() {
        return Err(Error::Convergence(format!("radial integral error estimate {:e}", r.error)));
    }
    // sphere integral over V₂: (|c|/c)^{|v|} with c = c₋ for v ≥ 0, c₊ for v < 0
    let phase = if k == 0 {
        Complex64::new(1.0, 0.0)
    } else {
        let c = if v > 0 { x.c_minus() } else { x.c_plus() };
        (c.norm() / c).powi(k as i32)
    };
    let a = ell as f64 - n as f64 / 2.0;
    let pre = (2.0 * PI).powf((n as f64 + 2.0) / 2.0) * 2f64.powf(a) * gamma_real(a + 1.0)?;
    Ok(phase * (pre * r.value))
}

/// I_v from the Appell F₄ partial sums; requires ‖x₂‖ + ‖x_n‖ < √2 and v ≥ 0.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct IvSeries {
    pub value: Complex64,
    pub tail_bound: f64,
}

pub fn iv_f4(v: i64, x: &XPoint, ell: usize, n: usize, order: usize) -> Result<IvSeries> {
    check_ell_n(ell, n)?;
    check_v(v, ell)?;
    check_dim(x, n)?;
    if v < 0 {
        return Err(Error::Domain("F4 route takes v ≥ 0".into()));
    }
    let (l, vf, nf) = (ell as f64, v as f64, n as f64);
    let f4 = appell_f4_partial(l + 1.0, l + 1.0 + vf, l + 1.0, vf + 1.0, -x.norm2_xn() / 2.0, -x.norm2_x2() / 2.0, order)?;
    let pre = (2.0 * PI).powf((nf + 2.0) / 2.0)
        * 2f64.powf(l - (nf + vf + 2.0) / 2.0)
        * gamma_real(l + vf + 1.0)?
        * gamma_real(l - nf / 2.0 + 1.0)?
        / gamma_real(vf + 1.0)?;
    let ph = (-x.c_plus()).powi(v as i32) * pre;
    Ok(IvSeries { value: ph * f4.value, tail_bound: ph.norm() * f4.tail_bound })
}

/// F₄(ℓ+1, ℓ+1+v; ℓ+1, v+1; −r_n²/2, −r₂²/2) against
/// τ^{−(ℓ+v+1)}₂F₁((v−ℓ)/2, (v+ℓ+1)/2; v+1; 2r₂²/τ²).
#[derive(Clone, Copy, Debug, Serialize)]
pub struct F4Reduction {
    pub f4: f64,
    pub tail_bound: f64,
    pub reduced: f64,
    pub diff: f64,
}

impl F4Reduction {
    pub fn within_tail(&self) -> bool {
        self.diff <= self.tail_bound + 1e-12 * self.f4.abs().max(1.0)
    }
}

pub fn f4_reduction(ell: usize, v: usize, rn: f64, r2: f64, order: usize) -> Result<F4Reduction> {
    let (l, vf) = (ell as f64, v as f64);
    let f4 = appell_f4_partial(l + 1.0, l + 1.0 + vf, l + 1.0, vf + 1.0, -rn * rn / 2.0, -r2 * r2 / 2.0, order)?;
    let b = 1.0 + (rn * rn - r2 * r2) / 2.0;
    let t2 = b * b + 2.0 * r2 * r2;
    let reduced = t2.powf(-(l + vf + 1.0) / 2.0) * hyp2f1((vf - l) / 2.0, (vf + l + 1.0) / 2.0, vf + 1.0, 2.0 * r2 * r2 / t2)?;
    Ok(F4Reduction { f4: f4.value, tail_bound: f4.tail_bound, reduced, diff: (f4.value - reduced).abs() })
}

fn to_q(x: f64) -> Result<Q> {
    BigRational::from_float(x).ok_or_else(|| Error::Domain(format!("{x} is not finite")))
}

/// ₂F₁(α, β; γ; z) with α or γ−β a non-positive integer, summed exactly.
fn hyp2f1_terminating(alpha: &Q, beta: &Q, gamma: &Q, z: &Q) -> Result<f64> {
    let nonpos = |t: &Q| t.is_integer() && t <= &crate::qi(0);
    if nonpos(alpha) || nonpos(beta) {
        return Ok(hyp2f1_exact(alpha, beta, gamma, z)?.to_f64().unwrap());
    }
    let gb = gamma - beta;
    if !nonpos(&gb) {
        return Err(Error::Domain("2F1 does not terminate".into()));
    }
    let one = crate::qi(1);
    let w = z / (z - &one);
    let pre = (&one - z).to_f64().unwrap().powf(-alpha.to_f64().unwrap());
    Ok(pre * hyp2f1_exact(alpha, &gb, gamma, &w)?.to_f64().unwrap())
}

#[derive(Clone, Debug, Serialize)]
pub struct PolyIdentity {
    pub lhs: PolyXY,
    pub rhs: PolyXY,
    pub abs_residual: f64,
    /// abs_residual / max |LHS coefficient|
    pub residual: f64,
}

/// (ax² + 2bxy − a*y²)^ℓ against the two ₂F₁ sums.
pub fn poly_identity_2f1sum(ell: usize, a: Complex64, b: f64) -> Result<PolyIdentity> {
    if b <= 0.0 || !b.is_finite() {
        return Err(Error::Domain(format!("need b > 0, got {b}")));
    }
    if ell % 2 != 0 {
        return Err(Error::Domain(format!("ℓ must be even, got {ell}")));
    }
    let lhs = PolyXY::quadratic_power([a, Complex64::new(2.0 * b, 0.0), -a.conj()], ell);
    let abs2 = to_q(a.re)? * to_q(a.re)? + to_q(a.im)? * to_q(a.im)?;
    let bq = to_q(b)?;
    let z = &abs2 / (&abs2 + &bq * &bq);
    let big = (a.norm_sqr() + b * b).sqrt();
    let mut rhs = PolyXY::zeros(ell);
    for v in 0..=ell {
        let (vq, lq) = (crate::qi(v as i64), crate::qi(ell as i64));
        let two = crate::qi(2);
        let f = hyp2f1_terminating(&((&vq - &lq) / &two), &((&vq + &lq + crate::qi(1)) / &two), &(&vq + crate::qi(1)), &z)?;
        let delta = if v == 0 { 0.5 } else { 1.0 };
        let c = binom(ell, v) * 2f64.powi((ell - v) as i32) * delta * big.powi((ell - v) as i32) * f;
        // (xy)^{ℓ−v}x^{2v} = x^{ℓ+v}y^{ℓ−v}; (xy)^{ℓ−v}y^{2v} = x^{ℓ−v}y^{ℓ+v}
        let vi = v as i64;
        rhs.set(vi, rhs.get(vi) + a.powi(v as i32) * c);
        rhs.set(-vi, rhs.get(-vi) + (-a.conj()).powi(v as i32) * c);
    }
    let abs_residual = lhs.max_diff(&rhs);
    let scale = lhs.max_abs().max(f64::MIN_POSITIVE);
    Ok(PolyIdentity { lhs, rhs, abs_residual, residual: abs_residual / scale })
}

/// Least-squares c with lhs ≈ c·rhs, and the normalized residual.
fn fit_scalar(lhs: &PolyXY, rhs: &PolyXY) -> (Complex64, f64) {
    let num: Complex64 = rhs.coeffs.iter().zip(&lhs.coeffs).map(|(r, l)| r.conj() * l).sum();
    let den: f64 = rhs.coeffs.iter().map(|r| r.norm_sqr()).sum();
    let c = if den == 0.0 { Complex64::new(0.0, 0.0) } else { num / den };
    let res = lhs.max_diff(&rhs.scale(c)) / lhs.max_abs().max(f64::MIN_POSITIVE);
    (c, res)
}

#[derive(Clone, Debug, Serialize)]
pub struct Ftrank2Report {
    pub scalar: Complex64,
    pub residual: f64,
}

/// Γ(ℓ+1)/Γ(ℓ−n/2+1) π^{−(n+2)/2} Σ_v I_v x^{ℓ+v}y^{ℓ−v}/((ℓ+v)!(ℓ−v)!) against the
/// inducing section at s = ℓ+1, up to a fitted scalar.
pub fn ftrank2_identity(x: &XPoint, ell: usize, n: usize) -> Result<Ftrank2Report> {
    check_ell_n(ell, n)?;
    check_dim(x, n)?;
    let l = ell as f64;
    let g = gamma_real(l + 1.0)? / gamma_real(l - n as f64 / 2.0 + 1.0)? * PI.powf(-(n as f64 + 2.0) / 2.0);
    let mut lhs = PolyXY::zeros(ell);
    for v in -(ell as i64)..=ell as i64 {
        let k = v.unsigned_abs() as usize;
        let iv = jv_continuous(v, x, ell)? / j_over_i(v, x, ell, n)?;
        lhs.set(v, iv * g / (factorial(ell + k) * factorial(ell - k)));
    }
    let rhs = inducing_section(x, ell, l + 1.0);
    let (scalar, residual) = fit_scalar(&lhs, &rhs);
    Ok(Ftrank2Report { scalar, residual })
}

/// 1(Q(ω) > 0) Q(ω)^{ℓ−n/2} (−|c|/c)^v K_v(√2|c|), c = (ω, v₁+iv₂), Q(ω) = ‖ω₂‖² − ‖ω_n‖².
pub fn transform_density(v: i64, omega: &XPoint, ell: usize, n: usize) -> Result<Complex64> {
    check_dim(omega, n)?;
    let qv = omega.norm2_x2() - omega.norm2_xn();
    if qv <= 0.0 {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let c = Complex64::new(omega.x2[0], omega.x2[1]);
    let k = v.unsigned_abs() as i32;
    let ph = if v >= 0 { -c.norm() / c } else { -c / c.norm() };
    Ok(ph.powi(k) * qv.powf(ell as f64 - n as f64 / 2.0) * bessel_k(k, SQRT_2 * c.norm())?)
}

/// κ with Σ I_v x^{ℓ+v}y^{ℓ−v}/((ℓ+v)!(ℓ−v)!) = κ·f_ℓ(wn(x), ℓ+1), fitted at x.
pub fn kappa_at(x: &XPoint, ell: usize, n: usize) -> Result<Complex64> {
    // undo the Γ(ℓ+1)/Γ(ℓ−n/2+1) π^{−(n+2)/2} normalization of the fit
    let a = ell as f64 - n as f64 / 2.0;
    let norm = PI.powf((n as f64 + 2.0) / 2.0) * gamma_real(a + 1.0)? / gamma_real(ell as f64 + 1.0)?;
    Ok(ftrank2_identity(x, ell, n)?.scalar * norm)
}

/// Components of ∫ e^{−2πi(ω,x)} f_ℓ(wn(x), ℓ+1) dx in the basis [x^{ℓ+v}][y^{ℓ−v}],
/// given the scalar κ with Σ I_v x^{ℓ+v}y^{ℓ−v}/((ℓ+v)!(ℓ−v)!) = κ·f_ℓ.
pub fn fourier_transform(omega: &XPoint, ell: usize, n: usize, kappa: Complex64) -> Result<Vec<Complex64>> {
    let d = (n + 2) as i32;
    let tw = XPoint {
        x2: [2.0 * PI * omega.x2[0], 2.0 * PI * omega.x2[1]],
        xn: omega.xn.iter().map(|c| 2.0 * PI * c).collect(),
    };
    (-(ell as i64)..=ell as i64)
        .map(|v| Ok(transform_density(v, &tw, ell, n)? * (2.0 * PI).powi(d) / kappa))
        .collect()
}

/// First continued-fraction convergent within `rel_tol` of `x` whose
/// denominator is at most `max_den`.
pub fn rationalize(x: f64, max_den: i64, rel_tol: f64) -> Result<Q> {
    if !x.is_finite() {
        return Err(Error::RationalizationFailed(x));
    }
    let (mut h0, mut h1, mut k0, mut k1) = (0i128, 1i128, 1i128, 0i128);
    let mut r = x;
    let mut best: Option<(i128, i128)> = None;
    for _ in 0..64 {
        let a = r.floor();
        if a.abs() > 1e15 {
            break;
        }
        let ai = a as i128;
        let (h2, k2) = (ai * h1 + h0, ai * k1 + k0);
        if k2 > max_den as i128 {
            break;
        }
        best = Some((h2, k2));
        if (x - h2 as f64 / k2 as f64).abs() <= rel_tol * x.abs().max(1.0) {
            break;
        }
        (h0, h1, k0, k1) = (h1, h2, k1, k2);
        let frac = r - a;
        if frac.abs() < 1e-15 {
            break;
        }
        r = 1.0 / frac;
    }
    match best {
        Some((h, k)) if (x - h as f64 / k as f64).abs() <= rel_tol * x.abs().max(1.0) => {
            Ok(BigRational::new(BigInt::from(h), BigInt::from(k)))
        }
        _ => Err(Error::RationalizationFailed(x)),
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ClnReport {
    pub ell: usize,
    pub n: usize,
    /// ratio at each ω
    pub ratios: Vec<f64>,
    pub spread: f64,
    pub value: f64,
    #[serde(serialize_with = "crate::fourier::ser_q")]
    pub rational: Q,
}

pub(crate) fn ser_q<S: serde::Serializer>(q: &Q, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&q.to_string())
}

/// Default sample of ω with Q(ω) > 0 and ω₂ ≠ 0, including a doubled pair.
pub fn default_omegas(n: usize) -> Vec<XPoint> {
    let mk = |a: f64, b: f64, c: f64| {
        let mut xn = vec![0.0; n];
        if n > 0 {
            xn[0] = c;
        }
        if n > 1 {
            xn[1] = c / 2.0;
        }
        XPoint::new([a, b], xn)
    };
    vec![mk(1.0, 0.0, 0.0), mk(0.6, 0.3, 0.2), mk(0.3, 0.5, 0.1), mk(0.6, 0.6, 0.4), mk(1.2, 1.2, 0.8)]
}

/// C_{ℓ,n} from the transform at each ω divided by
/// (2π)^{2ℓ+2−(n+2)/2} Q(ω)^{ℓ−n/2} 𝒲_{2πω}(1).
///
/// κ is fitted afresh at an x tied to each ω, so the spread also reflects
/// the x-independence of the rank-two identity.
pub fn extract_cln(ell: usize, n: usize, omegas: &[XPoint], tol: f64) -> Result<ClnReport> {
    check_ell_n(ell, n)?;
    if omegas.is_empty() {
        return Err(Error::Domain("no ω supplied".into()));
    }
    let space = QuadSpace::standard(n);
    let ratios: Vec<f64> = omegas
        .par_iter()
        .map(|om| -> Result<f64> {
            check_dim(om, n)?;
            let qv = om.norm2_x2() - om.norm2_xn();
            if qv <= 0.0 || om.is_x2_zero() {
                return Err(Error::Domain("ω needs Q(ω) > 0 and ω₂ ≠ 0".into()));
            }
            let probe = XPoint::new([0.3 * om.x2[1] + 0.1, 0.2 - 0.4 * om.x2[0]], om.xn.iter().map(|c| 0.5 * c + 0.05).collect());
            let kappa = kappa_at(&probe, ell, n)?;
            let ft = fourier_transform(om, ell, n, kappa)?;
            let eta: Vec<f64> = om.coords().iter().map(|c| 2.0 * PI * c).collect();
            let w = whittaker_w(&space, &eta, &MPoint::identity(&space, 1.0), ell)?;
            let scale = (2.0 * PI).powf(2.0 * ell as f64 + 2.0 - (n as f64 + 2.0) / 2.0) * qv.powf(ell as f64 - n as f64 / 2.0);
            // the component where 𝒲 is largest carries the most digits
            let v = (-(ell as i64)..=ell as i64).max_by(|a, b| w.get(*a).norm().total_cmp(&w.get(*b).norm())).unwrap();
            let r = ft[(ell as i64 + v) as usize] / (w.get(v) * scale);
            if r.im.abs() > tol * r.norm().max(1.0) {
                return Err(Error::NotConstant(r.im.abs()));
            }
            Ok(r.re)
        })
        .collect::<Result<_>>()?;
    let value = ratios[0];
    let spread = ratios.iter().map(|r| (r - value).abs()).fold(0.0, f64::max) / value.abs().max(f64::MIN_POSITIVE);
    if spread > tol || value == 0.0 {
        return Err(Error::NotConstant(spread));
    }
    let rational = rationalize(value, 1_000_000, 1e-9)?;
    Ok(ClnReport { ell, n, ratios, spread, value, rational })
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct BetaCheck {
    pub quadrature: f64,
    pub closed: f64,
    pub residual: f64,
}

/// ∫₀^∞ u^{d/2}(1+u)^{−s} du/u against Γ(d/2)Γ(s−d/2)/Γ(s).
pub fn beta_check(dim_u: usize, s: f64) -> Result<BetaCheck> {
    if dim_u == 0 {
        return Err(Error::Domain("dim U must be at least 1".into()));
    }
    let h = dim_u as f64 / 2.0;
    if !(s > h) {
        return Err(Error::Convergence(format!("integral diverges at s = {s} ≤ dim U/2 = {h}")));
    }
    // u = e^y: the integrand decays like e^{hy} and e^{−(s−h)y}
    let lo = -40.0 / h;
    let hi = (40.0 / (s - h)).min(1e5);
    let f = |y: f64| (h * y - s * y.exp().ln_1p()).exp();
    let breaks: Vec<f64> = (0..=64).map(|i| lo + (hi - lo) * i as f64 / 64.0).collect();
    let r = integrate_with_breaks(f, &breaks, 1e-300, 1e-13);
    if !r.converged {
        return Err(Error::Convergence(format!("error estimate {:e}", r.error)));
    }
    let closed = gamma_real(h)? * gamma_real(s - h)? / gamma_real(s)?;
    Ok(BetaCheck { quadrature: r.value, closed, residual: (r.value - closed).abs() / closed.abs() })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quadratic_power_small() {
        let one = Complex64::new(1.0, 0.0);
        let p = PolyXY::quadratic_power([one, 2.0 * one, one], 1);
        assert_eq!(p.coeffs, vec![one, 2.0 * one, one]);
        assert_eq!(PolyXY::quadratic_power([one, one, one], 0).coeffs, vec![one]);
    }

    #[test]
    fn rationalize_basic() {
        assert_eq!(rationalize(1.5, 1000, 1e-12).unwrap(), crate::q(3, 2));
        assert_eq!(rationalize(-105.0, 10, 1e-12).unwrap(), crate::qi(-105));
        assert!(rationalize(std::f64::consts::PI, 100, 1e-12).is_err());
    }

    #[test]
    fn radial_factor_continuations_agree_at_b_positive() {
        let x = XPoint::new([0.3, -0.2], vec![0.4, 0.1]);
        assert!(x.b() > 0.0);
        for v in 0..=4 {
            let lit = radial_factor(&x, 4, v).unwrap();
            let poly = {
                let mut y = x.clone();
                // same B and |a|² evaluated through the summed branch
                let (l, vf) = (4.0, v as f64);
                let b = y.b();
                let a2 = 2.0 * y.norm2_x2();
                y.xn.clear();
                b.powf(l - vf) * hyp2f1((vf - l) / 2.0, (vf - l + 1.0) / 2.0, vf + 1.0, -a2 / (b * b)).unwrap()
            };
            assert!((lit - poly).abs() < 1e-12 * lit.abs().max(1.0), "v = {v}: {lit} vs {poly}");
        }
    }
}
