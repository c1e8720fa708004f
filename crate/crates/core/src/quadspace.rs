//! The split model V = ℚe ⊕ V′ ⊕ ℚf, V′ = V₂ ⊕ V_n, with
//! q(αe + v′ + βf) = αβ + q₂(x) − q_n(y).
//!
//! Vectors are coordinate arrays on the ordered basis (e, v₁, v₂, u₁..u_n, f).
//! The space is specified by the Gram matrices of the polarized form
//! (x, y) = q(x+y) − q(x) − q(y) on V₂ and V_n. [`QuadSpace::standard`] takes
//! both to be the identity, so (v_i, v_j) = δ_ij and q₂(v_i) = 1/2; this is
//! the normalization under which the x², xy, y² identification and the
//! norm ‖v‖² = (v, ιv) behave as stated for an orthonormal basis.
//! [`QuadSpace::with_q_grams`] instead takes the Gram matrices of q itself,
//! giving (v_i, v_i) = 2 for identity input.

use nalgebra::DMatrix;
use num_complex::Complex64;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::rng::Sampler;
use crate::{Error, Result, Q};

#[derive(Clone, Debug, PartialEq)]
pub struct QuadSpace {
    n: usize,
    gram2: Vec<Vec<Q>>,
    gram_n: Vec<Vec<Q>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EtaClass {
    Zero,
    NegativeNorm,
    /// q′(η) = 0, η ≠ 0
    Rank1,
    /// q′(η) > 0
    Rank2,
}

fn identity(n: usize) -> Vec<Vec<Q>> {
    (0..n).map(|i| (0..n).map(|j| crate::qi(i64::from(i == j))).collect()).collect()
}

/// Sylvester's criterion on leading minors, exact.
fn positive_definite(m: &[Vec<Q>]) -> bool {
    let n = m.len();
    if m.iter().any(|r| r.len() != n) {
        return false;
    }
    for i in 0..n {
        for j in 0..n {
            if m[i][j] != m[j][i] {
                return false;
            }
        }
    }
    let mut a: Vec<Vec<Q>> = m.to_vec();
    for k in 0..n {
        if !a[k][k].is_positive() {
            return false;
        }
        for i in k + 1..n {
            let f = &a[i][k] / &a[k][k];
            for j in k..n {
                let t = &f * &a[k][j];
                a[i][j] -= t;
            }
        }
    }
    true
}

fn quad_form(g: &[Vec<Q>], x: &[Q], y: &[Q]) -> Q {
    let mut s = Q::zero();
    for i in 0..g.len() {
        for j in 0..g.len() {
            s += &g[i][j] * &x[i] * &y[j];
        }
    }
    s
}

impl QuadSpace {
    /// Identity Gram matrices for the polarized form.
    pub fn standard(n: usize) -> Self {
        assert!(n >= 1);
        QuadSpace { n, gram2: identity(2), gram_n: identity(n) }
    }

    /// Gram matrices of the polarized form on V₂ and V_n (positive definite).
    pub fn with_bilinear_grams(gram2: Vec<Vec<Q>>, gram_n: Vec<Vec<Q>>) -> Result<Self> {
        if gram2.len() != 2 {
            return Err(Error::DimensionMismatch { expected: 2, got: gram2.len() });
        }
        if gram_n.is_empty() || !positive_definite(&gram2) || !positive_definite(&gram_n) {
            return Err(Error::Domain("Gram matrices must be symmetric positive definite".into()));
        }
        Ok(QuadSpace { n: gram_n.len(), gram2, gram_n })
    }

    /// Gram matrices of q₂ and q_n themselves: q₂(x) = xᵀ G₂ x.
    pub fn with_q_grams(q2: Vec<Vec<Q>>, qn: Vec<Vec<Q>>) -> Result<Self> {
        let two = crate::qi(2);
        let dbl = |m: Vec<Vec<Q>>| m.into_iter().map(|r| r.into_iter().map(|x| x * &two).collect()).collect();
        QuadSpace::with_bilinear_grams(dbl(q2), dbl(qn))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// n + 4
    pub fn dim(&self) -> usize {
        self.n + 4
    }

    /// n + 2
    pub fn dim_prime(&self) -> usize {
        self.n + 2
    }

    fn check(&self, v: &[Q], len: usize) -> Result<()> {
        if v.len() != len {
            return Err(Error::DimensionMismatch { expected: len, got: v.len() });
        }
        Ok(())
    }

    /// Basis vector with index into (e, v₁, v₂, u₁..u_n, f).
    pub fn basis(&self, i: usize) -> Vec<Q> {
        let mut v = vec![Q::zero(); self.dim()];
        v[i] = crate::qi(1);
        v
    }

    pub fn e(&self) -> Vec<Q> {
        self.basis(0)
    }

    pub fn f(&self) -> Vec<Q> {
        self.basis(self.n + 3)
    }

    /// Polarized form on V′ (coordinates v₁, v₂, u₁..u_n).
    pub fn pair_prime(&self, x: &[Q], y: &[Q]) -> Result<Q> {
        self.check(x, self.dim_prime())?;
        self.check(y, self.dim_prime())?;
        Ok(quad_form(&self.gram2, &x[..2], &y[..2]) - quad_form(&self.gram_n, &x[2..], &y[2..]))
    }

    pub fn q_prime(&self, x: &[Q]) -> Result<Q> {
        Ok(self.pair_prime(x, x)? / crate::qi(2))
    }

    /// Polarized form on V.
    pub fn pair(&self, x: &[Q], y: &[Q]) -> Result<Q> {
        self.check(x, self.dim())?;
        self.check(y, self.dim())?;
        let l = self.dim() - 1;
        Ok(&x[0] * &y[l] + &x[l] * &y[0] + self.pair_prime(&x[1..l], &y[1..l])?)
    }

    pub fn q(&self, x: &[Q]) -> Result<Q> {
        Ok(self.pair(x, x)? / crate::qi(2))
    }

    /// ι(αe + x + y + βf) = βe + x − y + αf
    pub fn iota(&self, v: &[Q]) -> Result<Vec<Q>> {
        self.check(v, self.dim())?;
        let l = self.dim() - 1;
        let mut out = v.to_vec();
        out.swap(0, l);
        for c in out.iter_mut().take(l).skip(3) {
            *c = -c.clone();
        }
        Ok(out)
    }

    /// ‖v‖² = (v, ιv)
    pub fn norm2(&self, v: &[Q]) -> Result<Q> {
        self.pair(v, &self.iota(v)?)
    }

    /// (1, w, −q′(w)) ∈ V for w ∈ V′.
    pub fn lift(&self, w: &[Q]) -> Result<Vec<Q>> {
        let qw = self.q_prime(w)?;
        let mut v = vec![crate::qi(1)];
        v.extend_from_slice(w);
        v.push(-qw);
        Ok(v)
    }

    pub fn norm2_v2(&self, x2: &[Q]) -> Q {
        quad_form(&self.gram2, x2, x2)
    }

    pub fn norm2_vn(&self, xn: &[Q]) -> Q {
        quad_form(&self.gram_n, xn, xn)
    }

    /// τ(x_n, x₂)² = (1 + (‖x_n‖² − ‖x₂‖²)/4)² + ‖x₂‖²
    pub fn tau_sq(&self, xn: &[Q], x2: &[Q]) -> Result<Q> {
        self.check(xn, self.n)?;
        self.check(x2, 2)?;
        let (a, b) = (self.norm2_vn(xn), self.norm2_v2(x2));
        let t = crate::qi(1) + (&a - &b) / crate::qi(4);
        Ok(&t * &t + b)
    }

    pub fn tau(&self, xn: &[Q], x2: &[Q]) -> Result<f64> {
        Ok(self.tau_sq(xn, x2)?.to_f64().unwrap().sqrt())
    }

    /// Coefficients (c_xx, c_xy, c_yy) of the V₃ = V₂ ⊕ ℝu₊ projection of v,
    /// under x² ↔ iv₁ − v₂, xy ↔ u₊/√2, y² ↔ iv₁ + v₂.
    pub fn proj_v3(&self, v: &[Q]) -> Result<[Complex64; 3]> {
        self.check(v, self.dim())?;
        let a = v[1].to_f64().unwrap();
        let b = v[2].to_f64().unwrap();
        let l = self.dim() - 1;
        // (v, u₊) = v_e + v_f ; (u₊, u₊) = 2
        let up = (&v[0] + &v[l]).to_f64().unwrap();
        let cxx = Complex64::new(-b, -a) / 2.0;
        let cyy = Complex64::new(b, -a) / 2.0;
        let cxy = Complex64::new(up / 2f64.sqrt(), 0.0);
        Ok([cxx, cxy, cyy])
    }

    pub fn classify_eta(&self, eta: &[Q]) -> Result<EtaClass> {
        if eta.iter().all(|c| c.is_zero()) {
            self.check(eta, self.dim_prime())?;
            return Ok(EtaClass::Zero);
        }
        let qv = self.q_prime(eta)?;
        Ok(if qv.is_negative() {
            EtaClass::NegativeNorm
        } else if qv.is_zero() {
            EtaClass::Rank1
        } else {
            EtaClass::Rank2
        })
    }

    /// Matrix of n(x) on column coordinates (e, V′, f):
    /// e ↦ e, w ↦ w + (x, w)e, f ↦ f − x − q′(x)e.
    pub fn nx_matrix(&self, x: &[Q]) -> Result<Vec<Vec<Q>>> {
        self.check(x, self.dim_prime())?;
        let d = self.dim();
        let mut m = identity(d);
        for j in 0..self.dim_prime() {
            let mut ej = vec![Q::zero(); self.dim_prime()];
            ej[j] = crate::qi(1);
            m[0][j + 1] = self.pair_prime(x, &ej)?;
            m[j + 1][d - 1] = -x[j].clone();
        }
        m[0][d - 1] = -self.q_prime(x)?;
        Ok(m)
    }

    // Floating-point views for the analytic modules.

    /// Gram matrix of the polarized form on V′.
    pub fn gram_prime_f64(&self) -> DMatrix<f64> {
        let d = self.dim_prime();
        DMatrix::from_fn(d, d, |i, j| match (i < 2, j < 2) {
            (true, true) => self.gram2[i][j].to_f64().unwrap(),
            (false, false) => -self.gram_n[i - 2][j - 2].to_f64().unwrap(),
            _ => 0.0,
        })
    }

    /// Matrix of a∧b on V′: w ↦ (b, w)a − (a, w)b.
    pub fn wedge(&self, a: &[f64], b: &[f64]) -> DMatrix<f64> {
        let g = self.gram_prime_f64();
        let d = self.dim_prime();
        let av = nalgebra::DVector::from_column_slice(a);
        let bv = nalgebra::DVector::from_column_slice(b);
        let ga = &g * &av;
        let gb = &g * &bv;
        let mut m = DMatrix::zeros(d, d);
        for i in 0..d {
            for j in 0..d {
                m[(i, j)] = a[i] * gb[j] - b[i] * ga[j];
            }
        }
        m
    }

    /// Random element of SO(V′)° as a product of rotations in (v₁,v₂),
    /// (u_i,u_j) and boosts in (v_i,u_j), angles in ±`spread`.
    pub fn random_isometry(&self, rng: &mut Sampler, spread: f64) -> DMatrix<f64> {
        let d = self.dim_prime();
        let unit = |i: usize| {
            let mut v = vec![0.0; d];
            v[i] = 1.0;
            v
        };
        let mut m = DMatrix::<f64>::identity(d, d);
        for i in 0..d {
            for j in i + 1..d {
                let theta = rng.uniform(-spread, spread);
                let x = self.wedge(&unit(i), &unit(j)) * theta;
                m = m * x.exp();
            }
        }
        m
    }
}

/// Max deviation of mᵀ G m from G.
pub fn isometry_defect(g: &DMatrix<f64>, m: &DMatrix<f64>) -> f64 {
    (m.transpose() * g * m - g).abs().max()
}

/// Rational point of V′ as f64.
pub fn to_f64(v: &[Q]) -> Vec<f64> {
    v.iter().map(|x| x.to_f64().unwrap()).collect()
}
