//! Finite-place character sums on the split space U_n, computed by exhaustive
//! enumeration with exact cyclotomic arithmetic.
//!
//! Coordinates are ordered (x₁,…,x_n,y_n,…,y₁), so q_n = Σ x_i y_i pairs
//! coordinate i with 2n−1−i and η = (1,0,…,0,1) has q_n(η) = 1.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::{Error, Result, Q};

pub const DEFAULT_BUDGET: u128 = 100_000_000;

pub fn is_prime(p: u64) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| p % d != 0)
}

/// U_n over ℤ/p^r.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct FiniteSplitSpace {
    pub n: usize,
    pub p: u64,
    pub r: u32,
}

impl FiniteSplitSpace {
    pub fn new(n: usize, p: u64, r: u32) -> Result<Self> {
        if n == 0 || r == 0 {
            return Err(Error::Domain("need n ≥ 1 and r ≥ 1".into()));
        }
        if !is_prime(p) {
            return Err(Error::Domain(format!("{p} is not prime")));
        }
        Ok(FiniteSplitSpace { n, p, r })
    }

    pub fn dim(&self) -> usize {
        2 * self.n
    }

    pub fn modulus(&self) -> u64 {
        self.p.pow(self.r)
    }

    /// p^{2nr}
    pub fn size(&self) -> u128 {
        (self.modulus() as u128).pow(self.dim() as u32)
    }

    pub fn q(&self, v: &[u64]) -> u64 {
        let m = self.modulus() as u128;
        let d = self.dim();
        ((0..self.n).map(|i| v[i] as u128 * v[d - 1 - i] as u128 % m).sum::<u128>() % m) as u64
    }

    /// (a, b) = q(a+b) − q(a) − q(b)
    pub fn pair(&self, a: &[u64], b: &[u64]) -> u64 {
        let m = self.modulus() as u128;
        let d = self.dim();
        let s: u128 = (0..self.n)
            .map(|i| (a[i] as u128 * b[d - 1 - i] as u128 + a[d - 1 - i] as u128 * b[i] as u128) % m)
            .sum();
        (s % m) as u64
    }

    fn reduce_vec(&self, v: &[i64]) -> Result<Vec<u64>> {
        if v.len() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), got: v.len() });
        }
        let m = self.modulus() as i64;
        Ok(v.iter().map(|x| x.rem_euclid(m) as u64).collect())
    }
}

/// η = (1,0,…,0,1)
pub fn standard_eta(n: usize) -> Vec<i64> {
    let mut e = vec![0; 2 * n];
    e[0] = 1;
    e[2 * n - 1] = 1;
    e
}

fn check_budget(needed: u128, budget: u128) -> Result<()> {
    if needed > budget {
        return Err(Error::BudgetExceeded { needed, budget });
    }
    Ok(())
}

/// Element Σ c_k ζ^k of ℤ[ζ_{p^r}], kept reduced modulo Φ_{p^r} so that the
/// coefficient vector (length φ(p^r)) is canonical.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Cyclotomic {
    pub p: u64,
    pub r: u32,
    pub coeffs: Vec<i64>,
}

impl Cyclotomic {
    /// Σ_a counts[a] ζ^a for a ∈ ℤ/p^r.
    pub fn from_counts(p: u64, r: u32, counts: &[i64]) -> Self {
        let n = p.pow(r) as usize;
        let m = n / p as usize;
        let phi = n - m;
        let mut c = counts.to_vec();
        c.resize(n, 0);
        // ζ^{(p−1)m + t} = −Σ_{j<p−1} ζ^{jm + t}
        for k in (phi..n).rev() {
            let v = c[k];
            if v != 0 {
                c[k] = 0;
                let t = k - phi;
                for j in 0..(p as usize - 1) {
                    c[j * m + t] -= v;
                }
            }
        }
        c.truncate(phi);
        Cyclotomic { p, r, coeffs: c }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    /// Some(c) when the element is the rational integer c.
    pub fn as_integer(&self) -> Option<i64> {
        self.coeffs[1..].iter().all(|&c| c == 0).then(|| self.coeffs[0])
    }

    pub fn to_complex(&self) -> Complex64 {
        let n = self.p.pow(self.r) as f64;
        self.coeffs
            .iter()
            .enumerate()
            .map(|(k, &c)| Complex64::from_polar(c as f64, 2.0 * std::f64::consts::PI * k as f64 / n))
            .sum()
    }
}

/// a ↦ exp(2πi a/p^r) on ℤ/p^r.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LocalCharacter {
    pub p: u64,
    pub r: u32,
}

impl LocalCharacter {
    pub fn value(&self, a: i64) -> Complex64 {
        let n = self.p.pow(self.r) as i64;
        let k = a.rem_euclid(n) as f64;
        Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * k / n as f64)
    }

    pub fn exact(&self, a: i64) -> Cyclotomic {
        let n = self.p.pow(self.r) as i64;
        let mut counts = vec![0; n as usize];
        counts[a.rem_euclid(n) as usize] = 1;
        Cyclotomic::from_counts(self.p, self.r, &counts)
    }
}

/// Histogram over a ∈ ℤ/p^r of f(v) for isotropic v (q(v) ≡ 0 mod p^r).
/// Parallel over the first two coordinates; the result does not depend on
/// the schedule.
fn isotropic_histogram<F>(sp: &FiniteSplitSpace, budget: u128, f: F) -> Result<Vec<i64>>
where
    F: Fn(&[u64]) -> u64 + Sync,
{
    check_budget(sp.size(), budget)?;
    let m = sp.modulus();
    let d = sp.dim();
    let prefixes: Vec<(u64, u64)> = (0..m).flat_map(|a| (0..m).map(move |b| (a, b))).collect();
    let hist = prefixes
        .par_iter()
        .map(|&(a, b)| {
            let mut h = vec![0i64; m as usize];
            let mut v = vec![0u64; d];
            v[0] = a;
            v[1] = b;
            loop {
                if sp.q(&v) == 0 {
                    h[f(&v) as usize] += 1;
                }
                // odometer over coordinates 2..d
                let mut i = 2;
                while i < d {
                    v[i] += 1;
                    if v[i] < m {
                        break;
                    }
                    v[i] = 0;
                    i += 1;
                }
                if i >= d {
                    break;
                }
            }
            h
        })
        .reduce(
            || vec![0i64; m as usize],
            |mut x, y| {
                for (a, b) in x.iter_mut().zip(y) {
                    *a += b;
                }
                x
            },
        );
    Ok(hist)
}

/// C(n) = #{u ∈ U_n(𝔽_p) : q_n(u) = 0} by enumeration.
pub fn count_isotropic(n: usize, p: u64, budget: u128) -> Result<u64> {
    let sp = FiniteSplitSpace::new(n, p, 1)?;
    let h = isotropic_histogram(&sp, budget, |_| 0)?;
    Ok(h[0] as u64)
}

/// C(1) = 2p − 1, C(n+1) = pC(n) + (p−1)p^{2n}
pub fn count_isotropic_recurrence(n: usize, p: u64) -> u128 {
    let p = p as u128;
    let mut c = 2 * p - 1;
    for k in 1..n {
        c = p * c + (p - 1) * p.pow(2 * k as u32);
    }
    c
}

/// Σ_{v ∈ U_n(ℤ/p^r), q(v) ≡ 0} ψ((η,v)/p^r), exactly.
pub fn isotropic_char_sum(sp: &FiniteSplitSpace, eta: &[i64], budget: u128) -> Result<Cyclotomic> {
    let e = sp.reduce_vec(eta)?;
    let h = isotropic_histogram(sp, budget, |v| sp.pair(&e, v))?;
    Ok(Cyclotomic::from_counts(sp.p, sp.r, &h))
}

/// S_n = Σ_{v ∈ U_n(𝔽_p), q(v) = 0} ψ((η,v)/p)
pub fn char_sum_s(n: usize, p: u64, eta: &[i64], budget: u128) -> Result<Cyclotomic> {
    isotropic_char_sum(&FiniteSplitSpace::new(n, p, 1)?, eta, budget)
}

fn require_unramified(sp: &FiniteSplitSpace, eta: &[i64]) -> Result<()> {
    if sp.p == 2 {
        return Err(Error::Domain("p = 2 is only supported for counting and S_n".into()));
    }
    let unit = FiniteSplitSpace { r: 1, ..*sp };
    let e = unit.reduce_vec(eta)?;
    if unit.q(&e) == 0 {
        return Err(Error::Domain("η is not unramified: q(η) ≡ 0 mod p".into()));
    }
    Ok(())
}

/// The r ≥ 2 sum for unramified η; it vanishes.
pub fn r2_vanishing(n: usize, p: u64, r: u32, eta: &[i64], budget: u128) -> Result<Cyclotomic> {
    if r < 2 {
        return Err(Error::Domain("r must be ≥ 2".into()));
    }
    let sp = FiniteSplitSpace::new(n, p, r)?;
    require_unramified(&sp, eta)?;
    isotropic_char_sum(&sp, eta, budget)
}

#[derive(Clone, Debug, Serialize)]
pub struct JLocal {
    pub s: String,
    /// T_r for r = 0..=r_max
    pub terms: Vec<Cyclotomic>,
    /// Σ p^{−rs} T_r when s is an integer and every T_r is rational
    pub exact: Option<String>,
    #[serde(skip)]
    pub exact_q: Option<Q>,
    pub approx: f64,
}

/// J(s,η,Φ_p) = Σ_{r ≤ r_max} p^{−rs} Σ_{y ∈ V′(ℤ/p^r), q(y) ≡ 0} ψ((η,y)/p^r),
/// each coset of V′(𝒪) in p^{−r}V′(𝒪) weighted 1.
pub fn j_local(s: &Q, n: usize, p: u64, eta: &[i64], r_max: u32, budget: u128) -> Result<JLocal> {
    let base = FiniteSplitSpace::new(n, p, 1)?;
    require_unramified(&base, eta)?;
    let needed: u128 = (1..=r_max).map(|r| (p as u128).pow(2 * n as u32 * r)).sum();
    check_budget(needed, budget)?;
    // r = 0: the unit coset contributes 1
    let mut terms = vec![Cyclotomic::from_counts(p, 1, &[1])];
    for r in 1..=r_max {
        terms.push(isotropic_char_sum(&FiniteSplitSpace::new(n, p, r)?, eta, budget)?);
    }
    let sf = num_traits::ToPrimitive::to_f64(s).unwrap_or(f64::NAN);
    let approx = terms.iter().enumerate().map(|(r, t)| (p as f64).powf(-(r as f64) * sf) * t.to_complex().re).sum();
    let exact_q = if s.is_integer() && terms.iter().all(|t| t.as_integer().is_some()) {
        let mut acc = Q::zero();
        for (r, t) in terms.iter().enumerate() {
            let e = s.to_integer() * BigInt::from(r as u64);
            acc += Q::from_integer(BigInt::from(t.as_integer().unwrap())) * p_pow(p, -e);
        }
        Some(acc)
    } else {
        None
    };
    Ok(JLocal { s: s.to_string(), terms, exact: exact_q.as_ref().map(|q| q.to_string()), exact_q, approx })
}

fn p_pow(p: u64, e: BigInt) -> Q {
    let k: i64 = num_traits::ToPrimitive::to_i64(&e).expect("exponent fits");
    let base = Q::from_integer(BigInt::from(p));
    if k >= 0 {
        num_traits::pow(base, k as usize)
    } else {
        Q::one() / num_traits::pow(base, (-k) as usize)
    }
}

/// 1 − p^{−(s − n + 1)} for integer s.
pub fn j_local_closed(s: i64, n: usize, p: u64) -> Q {
    Q::one() - p_pow(p, BigInt::from(-(s - n as i64 + 1)))
}
