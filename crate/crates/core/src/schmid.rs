//! The representation 𝕍_ℓ = S^{2ℓ}(Y₂) in the divided-power basis
//! [x^{ℓ+v}][y^{ℓ−v}], the K∩M action on it, the Schmid operator D_ℓ in
//! (x, t, m) coordinates by finite differences, and the K-Bessel Whittaker
//! functions 𝒲_η.
//!
//! Functions on P(ℝ) are sampled as F(x, t, m) = F(n(x) diag(t, m, t⁻¹))
//! with x ∈ V′ in coordinates (v₁, v₂, u₁..u_n) and m a matrix on the same
//! coordinates. Derivatives:
//!   D^{V′}_w F = d/dλ F(x + λw, t, m),
//!   t∂_t F    = d/dλ F(x, te^λ, m),
//!   D^M_X F   = d/dλ F(x, t, m·exp(λX)),
//! with (a∧b)w = (b, w)a − (a, w)b and complex directions split into real
//! and imaginary parts.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::quadspace::QuadSpace;
use crate::special::bessel_k;
use crate::{Error, Result};

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

#[derive(Clone, Debug, PartialEq)]
pub struct VlVector {
    pub ell: usize,
    /// coeffs[v + ℓ] = F_v
    pub coeffs: Vec<Complex64>,
}

impl VlVector {
    pub fn zeros(ell: usize) -> Self {
        VlVector { ell, coeffs: vec![Complex64::new(0.0, 0.0); 2 * ell + 1] }
    }

    pub fn get(&self, v: i64) -> Complex64 {
        self.coeffs[(v + self.ell as i64) as usize]
    }

    pub fn set(&mut self, v: i64, c: Complex64) {
        let l = self.ell as i64;
        self.coeffs[(v + l) as usize] = c;
    }

    pub fn scale(&self, c: Complex64) -> Self {
        VlVector { ell: self.ell, coeffs: self.coeffs.iter().map(|x| x * c).collect() }
    }

    pub fn add(&self, other: &VlVector) -> Self {
        VlVector { ell: self.ell, coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect() }
    }

    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum KmGenerator {
    /// diag(−1, 1, −1)
    Eps,
    /// k ∈ SO(2) with k(v₁ + iv₂) = z(v₁ + iv₂)
    Rot(Complex64),
    /// v₂ ↦ −v₂ together with a reflection of V_n
    EpsPrime,
}

/// Action of a K∩M generator on 𝕍_ℓ.
pub fn km_action(g: KmGenerator, w: &VlVector) -> VlVector {
    let l = w.ell as i64;
    let mut out = VlVector::zeros(w.ell);
    for v in -l..=l {
        let c = w.get(v);
        match g {
            KmGenerator::Eps => out.set(v, if (l + v) % 2 == 0 { c } else { -c }),
            KmGenerator::Rot(z) => out.set(v, c * z.powi(v as i32)),
            KmGenerator::EpsPrime => out.set(-v, c),
        }
    }
    out
}

#[derive(Clone, Debug)]
pub struct MPoint {
    pub t: f64,
    pub m: DMatrix<f64>,
}

impl MPoint {
    pub fn new(space: &QuadSpace, t: f64, m: DMatrix<f64>) -> Result<Self> {
        let d = space.dim_prime();
        if m.nrows() != d || m.ncols() != d {
            return Err(Error::DimensionMismatch { expected: d, got: m.nrows() });
        }
        if t == 0.0 || !t.is_finite() {
            return Err(Error::Domain("t must be a nonzero real".into()));
        }
        let defect = crate::quadspace::isometry_defect(&space.gram_prime_f64(), &m);
        if defect > 1e-10 {
            return Err(Error::Domain(format!("m is not an isometry (defect {defect:e})")));
        }
        Ok(MPoint { t, m })
    }

    pub fn identity(space: &QuadSpace, t: f64) -> Self {
        let d = space.dim_prime();
        MPoint { t, m: DMatrix::identity(d, d) }
    }
}

/// (a, b) on V′ in f64.
pub fn pair_f64(space: &QuadSpace, a: &[f64], b: &[f64]) -> f64 {
    let g = space.gram_prime_f64();
    let av = DVector::from_column_slice(a);
    let bv = DVector::from_column_slice(b);
    av.dot(&(g * bv))
}

fn unit(d: usize, i: usize) -> Vec<f64> {
    let mut v = vec![0.0; d];
    v[i] = 1.0;
    v
}

/// (η, m v₁) and (η, m v₂).
fn eta_m_v(space: &QuadSpace, eta: &[f64], m: &DMatrix<f64>) -> (f64, f64) {
    let d = space.dim_prime();
    let mv1 = m * DVector::from_column_slice(&unit(d, 0));
    let mv2 = m * DVector::from_column_slice(&unit(d, 1));
    (pair_f64(space, eta, mv1.as_slice()), pair_f64(space, eta, mv2.as_slice()))
}

/// u_η(t, m) = √2 t i (η, m(iv₁ − v₂)).
pub fn u_eta(space: &QuadSpace, eta: &[f64], p: &MPoint) -> Complex64 {
    let (a, b) = eta_m_v(space, eta, &p.m);
    I * (2f64.sqrt() * p.t) * Complex64::new(-b, a)
}

fn check_eta(space: &QuadSpace, eta: &[f64]) -> Result<()> {
    if eta.len() != space.dim_prime() {
        return Err(Error::DimensionMismatch { expected: space.dim_prime(), got: eta.len() });
    }
    let scale: f64 = eta.iter().map(|x| x * x).sum();
    if scale == 0.0 {
        return Err(Error::EtaNotAdmissible);
    }
    if pair_f64(space, eta, eta) < -1e-12 * scale {
        return Err(Error::EtaNotAdmissible);
    }
    Ok(())
}

/// 𝒲_η(t, m) with F_v = t^ℓ|t| (|u|/u)^v K_v(|u|).
pub fn whittaker_w(space: &QuadSpace, eta: &[f64], p: &MPoint, ell: usize) -> Result<VlVector> {
    check_eta(space, eta)?;
    let u = u_eta(space, eta, p);
    let scale = eta.iter().map(|x| x.abs()).fold(0.0, f64::max) * p.t.abs();
    if u.norm() <= 1e-13 * scale {
        return Err(Error::DegeneratePoint);
    }
    let r = u.norm();
    let phase = r / u;
    let pre = p.t.powi(ell as i32) * p.t.abs();
    let l = ell as i64;
    let mut out = VlVector::zeros(ell);
    for v in -l..=l {
        let k = bessel_k(v as i32, r)?;
        out.set(v, phase.powi(v as i32) * (pre * k));
    }
    Ok(out)
}

/// x ↦ e^{i(η,x)} 𝒲_η(t, m), the full Whittaker function on P(ℝ).
pub fn whittaker_function<'a>(
    space: &'a QuadSpace,
    eta: &'a [f64],
    ell: usize,
) -> impl Fn(&[f64], f64, &DMatrix<f64>) -> Result<VlVector> + 'a {
    move |x, t, m| {
        let w = whittaker_w(space, eta, &MPoint { t, m: m.clone() }, ell)?;
        Ok(w.scale((I * pair_f64(space, eta, x)).exp()))
    }
}

/// Coefficients of 2D_ℓF on the four families of basis vectors
/// [x^{ℓ+v−1}][y^{ℓ−v}] ⊗ {y, x} ⊗ {u₋^∨, u_j^∨}, v = 1−ℓ..ℓ.
#[derive(Clone, Debug)]
pub struct SchmidOutput {
    pub ell: usize,
    /// ⊗ y ⊗ u₋^∨, indexed by v − (1 − ℓ)
    pub y_um: Vec<Complex64>,
    /// ⊗ x ⊗ u₋^∨
    pub x_um: Vec<Complex64>,
    /// ⊗ y ⊗ u_j^∨, [j][v]
    pub y_uj: Vec<Vec<Complex64>>,
    /// ⊗ x ⊗ u_j^∨
    pub x_uj: Vec<Vec<Complex64>>,
    /// max |F_v| seen on the stencil
    pub scale: f64,
}

impl SchmidOutput {
    pub fn index(&self, v: i64) -> usize {
        (v - 1 + self.ell as i64) as usize
    }

    pub fn max_abs(&self) -> f64 {
        let mut m = 0.0f64;
        for c in self.y_um.iter().chain(&self.x_um).chain(self.y_uj.iter().flatten()).chain(self.x_uj.iter().flatten()) {
            m = m.max(c.norm());
        }
        m
    }

    /// max_abs divided by the stencil scale.
    pub fn residual(&self) -> f64 {
        if self.scale == 0.0 {
            self.max_abs()
        } else {
            self.max_abs() / self.scale
        }
    }
}

/// Central difference at step h and h/2 combined by Richardson extrapolation.
fn richardson<G>(g: G, h: f64, scale: &mut f64) -> Result<Vec<Complex64>>
where
    G: Fn(f64) -> Result<VlVector>,
{
    let mut eval = |l: f64| -> Result<VlVector> {
        let v = g(l).map_err(|e| Error::StencilFailure(e.to_string()))?;
        *scale = scale.max(v.max_abs());
        Ok(v)
    };
    let (p1, m1, p2, m2) = (eval(h)?, eval(-h)?, eval(h / 2.0)?, eval(-h / 2.0)?);
    Ok((0..p1.coeffs.len())
        .map(|k| {
            let d1 = (p1.coeffs[k] - m1.coeffs[k]) / (2.0 * h);
            let d2 = (p2.coeffs[k] - m2.coeffs[k]) / h;
            (4.0 * d2 - d1) / 3.0
        })
        .collect())
}

fn combine(a: &[Complex64], ca: Complex64, b: &[Complex64], cb: Complex64) -> Vec<Complex64> {
    a.iter().zip(b).map(|(x, y)| x * ca + y * cb).collect()
}

/// The so(V′) generators v₁∧u_j and v₂∧u_j.
fn m_generators(space: &QuadSpace) -> Vec<(DMatrix<f64>, DMatrix<f64>)> {
    let d = space.dim_prime();
    (0..space.n())
        .map(|j| {
            let uj = unit(d, 2 + j);
            (space.wedge(&unit(d, 0), &uj), space.wedge(&unit(d, 1), &uj))
        })
        .collect()
}

/// Derivatives of F at (x, t, m) needed by the coordinate formulas.
struct Jet {
    f: Vec<Complex64>,
    tdt: Vec<Complex64>,
    /// D^{V′}_{tm(iv₁−v₂)}, D^{V′}_{tm(iv₁+v₂)}
    dv_minus: Vec<Complex64>,
    dv_plus: Vec<Complex64>,
    /// D^{V′}_{tm u_j}
    dv_u: Vec<Vec<Complex64>>,
    /// D^M_{iv₁−v₂,u_j}, D^M_{iv₁+v₂,u_j}
    dm_minus: Vec<Vec<Complex64>>,
    dm_plus: Vec<Vec<Complex64>>,
    scale: f64,
}

fn jet<F>(space: &QuadSpace, f: &F, x: &[f64], p: &MPoint, h: f64, with_x: bool) -> Result<Jet>
where
    F: Fn(&[f64], f64, &DMatrix<f64>) -> Result<VlVector>,
{
    let d = space.dim_prime();
    if x.len() != d {
        return Err(Error::DimensionMismatch { expected: d, got: x.len() });
    }
    let (t, m) = (p.t, &p.m);
    let base = f(x, t, m).map_err(|e| Error::StencilFailure(e.to_string()))?;
    let mut scale = base.max_abs();
    let zero = vec![Complex64::new(0.0, 0.0); base.coeffs.len()];

    let tdt = richardson(|l| f(x, t * l.exp(), m), h, &mut scale)?;

    let dir_x = |w: &[f64], scale: &mut f64| -> Result<Vec<Complex64>> {
        if !with_x {
            return Ok(zero.clone());
        }
        let tmw = (m * DVector::from_column_slice(w)) * t;
        richardson(
            |l| {
                let xs: Vec<f64> = x.iter().zip(tmw.iter()).map(|(a, b)| a + l * b).collect();
                f(&xs, t, m)
            },
            h,
            scale,
        )
    };
    let d1 = dir_x(&unit(d, 0), &mut scale)?;
    let d2 = dir_x(&unit(d, 1), &mut scale)?;
    let dv_minus = combine(&d1, I, &d2, Complex64::new(-1.0, 0.0));
    let dv_plus = combine(&d1, I, &d2, Complex64::new(1.0, 0.0));
    let mut dv_u = Vec::new();
    for j in 0..space.n() {
        dv_u.push(dir_x(&unit(d, 2 + j), &mut scale)?);
    }

    let mut dm_minus = Vec::new();
    let mut dm_plus = Vec::new();
    for (x1, x2) in m_generators(space) {
        let a = richardson(|l| f(x, t, &(m * (&x1 * l).exp())), h, &mut scale)?;
        let b = richardson(|l| f(x, t, &(m * (&x2 * l).exp())), h, &mut scale)?;
        dm_minus.push(combine(&a, I, &b, Complex64::new(-1.0, 0.0)));
        dm_plus.push(combine(&a, I, &b, Complex64::new(1.0, 0.0)));
    }
    Ok(Jet { f: base.coeffs, tdt, dv_minus, dv_plus, dv_u, dm_minus, dm_plus, scale })
}

/// 2D_ℓF at (x, p) from finite differences of F.
pub fn schmid_apply<F>(space: &QuadSpace, f: &F, ell: usize, x: &[f64], p: &MPoint, h: f64) -> Result<SchmidOutput>
where
    F: Fn(&[f64], f64, &DMatrix<f64>) -> Result<VlVector>,
{
    if h <= 0.0 {
        return Err(Error::Domain("step must be positive".into()));
    }
    let j = jet(space, f, x, p, h, true)?;
    let l = ell as i64;
    let r2 = 2f64.sqrt();
    let ix = |v: i64| (v + l) as usize;
    let mut out = SchmidOutput {
        ell,
        y_um: Vec::new(),
        x_um: Vec::new(),
        y_uj: vec![Vec::new(); space.n()],
        x_uj: vec![Vec::new(); space.n()],
        scale: j.scale,
    };
    for v in (1 - l)..=l {
        let (a, b) = (ix(v), ix(v - 1));
        let vf = v as f64;
        let lf = l as f64;
        out.y_um.push(2.0 * j.dv_minus[a] - r2 * (lf + vf) * j.f[b] + r2 * j.tdt[b]);
        out.x_um.push(-r2 * j.tdt[a] - 2.0 * j.dv_plus[b] + r2 * (lf - vf + 1.0) * j.f[a]);
        for k in 0..space.n() {
            out.y_uj[k].push(-j.dm_minus[k][a] - r2 * j.dv_u[k][b]);
            out.x_uj[k].push(r2 * j.dv_u[k][a] + j.dm_plus[k][b]);
        }
    }
    Ok(out)
}

/// Max over sample points of the four difference-differential equations
/// satisfied by 𝒲_η, normalized by the largest |F_v| on the stencil:
///   (t∂_t − (ℓ+v))F_{v−1} + u F_v,
///   (t∂_t − (ℓ−v+1))F_v + ū F_{v−1},
///   D^M_{iv₁−v₂,u_j}F_v + i√2 t(η, m u_j) F_{v−1},
///   D^M_{iv₁+v₂,u_j}F_{v−1} + i√2 t(η, m u_j) F_v.
pub fn whittaker_residuals(space: &QuadSpace, eta: &[f64], ell: usize, points: &[MPoint]) -> Result<f64> {
    check_eta(space, eta)?;
    let w = |_: &[f64], t: f64, m: &DMatrix<f64>| whittaker_w(space, eta, &MPoint { t, m: m.clone() }, ell);
    residuals_of(space, &w, eta, ell, points)
}

/// As [`whittaker_residuals`] for an arbitrary function of (t, m).
pub fn residuals_of<F>(space: &QuadSpace, f: &F, eta: &[f64], ell: usize, points: &[MPoint]) -> Result<f64>
where
    F: Fn(&[f64], f64, &DMatrix<f64>) -> Result<VlVector>,
{
    let d = space.dim_prime();
    let x0 = vec![0.0; d];
    let l = ell as i64;
    let r2 = 2f64.sqrt();
    let mut worst = 0.0f64;
    for p in points {
        let j = jet(space, f, &x0, p, 1e-4, false)?;
        let u = u_eta(space, eta, p);
        let eta_mu: Vec<f64> = (0..space.n())
            .map(|k| {
                let mu = &p.m * DVector::from_column_slice(&unit(d, 2 + k));
                pair_f64(space, eta, mu.as_slice())
            })
            .collect();
        let ix = |v: i64| (v + l) as usize;
        let mut r = 0.0f64;
        for v in (1 - l)..=l {
            let (a, b) = (ix(v), ix(v - 1));
            let vf = v as f64;
            let lf = l as f64;
            r = r.max((j.tdt[b] - (lf + vf) * j.f[b] + u * j.f[a]).norm());
            r = r.max((j.tdt[a] - (lf - vf + 1.0) * j.f[a] + u.conj() * j.f[b]).norm());
            for k in 0..space.n() {
                let c = I * r2 * p.t * eta_mu[k];
                r = r.max((j.dm_minus[k][a] + c * j.f[b]).norm());
                r = r.max((j.dm_plus[k][b] + c * j.f[a]).norm());
            }
        }
        worst = worst.max(if j.scale > 0.0 { r / j.scale } else { r });
    }
    Ok(worst)
}

/// ε′ on V′ for orthonormal coordinates: v₂ ↦ −v₂, u₁ ↦ −u₁.
pub fn eps_prime(space: &QuadSpace) -> DMatrix<f64> {
    let d = space.dim_prime();
    let mut m = DMatrix::identity(d, d);
    m[(1, 1)] = -1.0;
    m[(2, 2)] = -1.0;
    m
}

/// Rotation k of V₂ by angle θ, together with z(k) defined by
/// k(v₁ + iv₂) = z(k)(v₁ + iv₂). Assumes v₁, v₂ orthonormal.
pub fn so2_element(space: &QuadSpace, theta: f64) -> (DMatrix<f64>, Complex64) {
    let d = space.dim_prime();
    let x = space.wedge(&unit(d, 1), &unit(d, 0)) * theta;
    (x.exp(), Complex64::from_polar(1.0, -theta))
}

/// The η = 0 solution with F₀ = β t^ℓ|t|, F_ℓ = |t| F′_ℓ(m),
/// F_{−ℓ}(t, m) = F_ℓ(t, mε′), all other F_v = 0.
pub struct ConstantTerm<'a> {
    pub ell: usize,
    pub beta: Complex64,
    fl: Box<dyn Fn(&DMatrix<f64>) -> Complex64 + 'a>,
    eps: DMatrix<f64>,
}

impl<'a> ConstantTerm<'a> {
    pub fn eval(&self, t: f64, m: &DMatrix<f64>) -> VlVector {
        let l = self.ell as i64;
        let mut out = VlVector::zeros(self.ell);
        let at = t.abs();
        out.set(0, self.beta * (t.powi(self.ell as i32) * at));
        let plus = (self.fl)(m) * at;
        let minus = (self.fl)(&(m * &self.eps)) * at;
        // v = 0 and v = ±ℓ never collide since ℓ ≥ 1
        out.set(l, plus);
        out.set(-l, minus);
        out
    }

    pub fn as_function(&self) -> impl Fn(&[f64], f64, &DMatrix<f64>) -> Result<VlVector> + '_ {
        move |_, t, m| Ok(self.eval(t, m))
    }
}

/// Builds the template after checking F′_ℓ(mk) = z(k)^{−ℓ}F′_ℓ(m) at the
/// probe points for a few k ∈ SO(2) and, when n ≥ 2, k ∈ SO(n).
pub fn constant_term_template<'a, G>(
    space: &QuadSpace,
    ell: usize,
    beta: Complex64,
    fl: G,
    probes: &[DMatrix<f64>],
) -> Result<ConstantTerm<'a>>
where
    G: Fn(&DMatrix<f64>) -> Complex64 + 'a,
{
    if ell == 0 {
        return Err(Error::Domain("ell must be at least 1".into()));
    }
    let d = space.dim_prime();
    let mut ks: Vec<(DMatrix<f64>, Complex64)> = [0.7, -1.9, 2.4].iter().map(|&th| so2_element(space, th)).collect();
    if space.n() >= 2 {
        let r = (space.wedge(&unit(d, 2), &unit(d, 3)) * 0.9).exp();
        ks.push((r, Complex64::new(1.0, 0.0)));
    }
    let mut worst = 0.0f64;
    for m in probes {
        let base = fl(m);
        for (k, z) in &ks {
            let moved = fl(&(m * k));
            let want = base * z.powi(-(ell as i32));
            let dev = (moved - want).norm() / base.norm().max(1e-300);
            worst = worst.max(if base.norm() == 0.0 { moved.norm() } else { dev });
        }
    }
    if worst > 1e-8 {
        return Err(Error::EquivarianceViolation(worst));
    }
    Ok(ConstantTerm { ell, beta, fl: Box::new(fl), eps: eps_prime(space) })
}

/// m ↦ (b₀, m(v₁ − iv₂))^ℓ / ‖m⁻¹b₀‖^{2ℓ} for b₀ ∈ V′, with ‖w‖² the
/// majorant (w₂, w₂) + (w_n, w_n).
pub fn holomorphic_section(space: &QuadSpace, b0: &[f64], ell: usize) -> impl Fn(&DMatrix<f64>) -> Complex64 {
    section_with(space, b0, ell, -1.0)
}

/// The same with v₁ + iv₂, which transforms by z(k)^{+ℓ} instead.
pub fn antiholomorphic_section(space: &QuadSpace, b0: &[f64], ell: usize) -> impl Fn(&DMatrix<f64>) -> Complex64 {
    section_with(space, b0, ell, 1.0)
}

fn section_with(space: &QuadSpace, b0: &[f64], ell: usize, sign: f64) -> impl Fn(&DMatrix<f64>) -> Complex64 {
    let g = space.gram_prime_f64();
    let b = DVector::from_column_slice(b0);
    let d = space.dim_prime();
    let mut iota = DMatrix::<f64>::identity(d, d);
    for k in 2..d {
        iota[(k, k)] = -1.0;
    }
    move |m: &DMatrix<f64>| {
        let gb = &g * &b;
        let p1 = gb.dot(&m.column(0));
        let p2 = gb.dot(&m.column(1));
        let num = Complex64::new(p1, sign * p2).powi(ell as i32);
        // m⁻¹ = G⁻¹mᵀG for an isometry
        let w = m.clone().try_inverse().expect("isometry is invertible") * &b;
        let n2 = w.dot(&(&g * &iota * &w));
        num / n2.powi(ell as i32)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn km_generators() {
        let mut w = VlVector::zeros(2);
        for v in -2..=2 {
            w.set(v, Complex64::new(v as f64 + 0.5, 1.0));
        }
        let z = Complex64::from_polar(1.0, 0.4);
        let twice = km_action(KmGenerator::Rot(z), &km_action(KmGenerator::Rot(z), &w));
        let once = km_action(KmGenerator::Rot(z * z), &w);
        for v in -2..=2 {
            assert!((twice.get(v) - once.get(v)).norm() < 1e-14);
        }
        assert_eq!(km_action(KmGenerator::EpsPrime, &km_action(KmGenerator::EpsPrime, &w)), w);
        assert_eq!(km_action(KmGenerator::Eps, &w).get(0), w.get(0));
    }
}
