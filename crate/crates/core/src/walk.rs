//! Reflection walks of affine characters λ_s through Euclidean root models,
//! with the per-step rank-one parameter α_j·μ′ (μ′ the character before the
//! reflection).

use std::fmt;

use num_traits::{Signed, Zero};

use crate::symbolic::Affine;
use crate::{q, qi, Error, Result, Q};

/// One affine function of s per ambient coordinate.
pub type AffineChar = Vec<Affine>;

#[derive(Clone, Debug, PartialEq)]
pub struct RootModel {
    pub name: &'static str,
    pub dim: usize,
    /// simple roots α_1..α_r in ambient coordinates
    pub simple: Vec<Vec<Q>>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct WalkStep {
    /// 1-based simple root index
    pub index: usize,
    pub parameter: Affine,
    pub character: AffineChar,
}

fn dot(a: &[Q], l: &[Affine]) -> Affine {
    let mut out = Affine::int(0, 0);
    for (x, y) in a.iter().zip(l) {
        out = out.add(&y.scale(x));
    }
    out
}

fn norm2(a: &[Q]) -> Q {
    a.iter().fold(Q::zero(), |s, x| s + x * x)
}

impl RootModel {
    /// α₁ = (0,1,−1,0), α₂ = (0,0,1,−1), α₃ = (0,0,0,1), α₄ = ½(1,−1,−1,−1).
    pub fn f4() -> Self {
        let h = q(1, 2);
        RootModel {
            name: "F4",
            dim: 4,
            simple: vec![
                vec![qi(0), qi(1), qi(-1), qi(0)],
                vec![qi(0), qi(0), qi(1), qi(-1)],
                vec![qi(0), qi(0), qi(0), qi(1)],
                vec![h.clone(), -h.clone(), -h.clone(), -h],
            ],
        }
    }

    /// r-coordinates of the rank-two orthogonal walk: 1 ↔ w₁₂ (root r₁ − r₂),
    /// 2 ↔ w₂ (root r₂).
    pub fn rank2() -> Self {
        RootModel { name: "B2", dim: 2, simple: vec![vec![qi(1), qi(-1)], vec![qi(0), qi(1)]] }
    }

    /// r-coordinates of the rank-three walk: 1 ↔ w₁₂, 2 ↔ w₂₃, 3 ↔ w₃.
    pub fn b3() -> Self {
        RootModel {
            name: "B3",
            dim: 3,
            simple: vec![vec![qi(1), qi(-1), qi(0)], vec![qi(0), qi(1), qi(-1)], vec![qi(0), qi(0), qi(1)]],
        }
    }

    fn root(&self, j: usize) -> Result<&[Q]> {
        if j == 0 || j > self.simple.len() {
            return Err(Error::Domain(format!("no simple root {j} in {}", self.name)));
        }
        Ok(&self.simple[j - 1])
    }

    fn check(&self, lambda: &[Affine]) -> Result<()> {
        if lambda.len() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, got: lambda.len() });
        }
        Ok(())
    }

    /// α_j · λ
    pub fn pairing(&self, lambda: &[Affine], j: usize) -> Result<Affine> {
        self.check(lambda)?;
        Ok(dot(self.root(j)?, lambda))
    }

    /// λ − (2(λ,α_j)/(α_j,α_j)) α_j
    pub fn reflect(&self, lambda: &[Affine], j: usize) -> Result<AffineChar> {
        self.check(lambda)?;
        let a = self.root(j)?;
        let c = dot(a, lambda).scale(&(qi(2) / norm2(a)));
        Ok(lambda.iter().zip(a).map(|(l, x)| l.sub(&c.scale(x))).collect())
    }

    /// Applies the word left to right: the first index acts first.
    pub fn walk(&self, lambda0: &[Affine], word: &[usize]) -> Result<Vec<WalkStep>> {
        let mut cur = lambda0.to_vec();
        let mut out = Vec::with_capacity(word.len());
        for &j in word {
            let parameter = self.pairing(&cur, j)?;
            cur = self.reflect(&cur, j)?;
            out.push(WalkStep { index: j, parameter, character: cur.clone() });
        }
        Ok(out)
    }

    /// Coefficients c with Σ c_i α_i = λ, solved exactly.
    pub fn to_simple_root_coords(&self, lambda: &[Affine]) -> Result<Vec<Affine>> {
        self.check(lambda)?;
        let r = self.simple.len();
        if r != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, got: r });
        }
        // augmented system [A | λ_s | λ_1], columns of A the simple roots
        let mut m: Vec<Vec<Q>> = (0..r)
            .map(|i| {
                let mut row: Vec<Q> = (0..r).map(|k| self.simple[k][i].clone()).collect();
                row.push(lambda[i].a.clone());
                row.push(lambda[i].b.clone());
                row
            })
            .collect();
        for col in 0..r {
            let piv = (col..r).find(|&i| !m[i][col].is_zero()).ok_or(Error::SingularBasis)?;
            m.swap(col, piv);
            let p = m[col][col].clone();
            for x in m[col].iter_mut() {
                *x = &*x / &p;
            }
            for i in 0..r {
                if i != col && !m[i][col].is_zero() {
                    let f = m[i][col].clone();
                    let pivot_row = m[col].clone();
                    for (x, y) in m[i].iter_mut().zip(&pivot_row) {
                        *x = &*x - &f * y;
                    }
                }
            }
        }
        Ok(m.into_iter().map(|row| Affine::new(row[r].clone(), row[r + 1].clone())).collect())
    }

    /// True iff every simple-root coefficient of every character is negative
    /// at s0.
    pub fn jacquet_all_negative(&self, lambdas: &[AffineChar], s0: &Q) -> Result<bool> {
        for l in lambdas {
            for c in self.to_simple_root_coords(l)? {
                if !c.eval(s0).is_negative() {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }
}

/// "123214323412321" → [1,2,3,2,1,4,...]
pub fn parse_word(word: &str) -> Result<Vec<usize>> {
    word.chars()
        .filter(|c| !c.is_whitespace() && *c != '[' && *c != ']')
        .map(|c| c.to_digit(10).map(|d| d as usize).ok_or_else(|| Error::Domain(format!("bad word letter '{c}'"))))
        .collect()
}

pub fn char_from_strs(parts: &[&str]) -> Result<AffineChar> {
    parts.iter().map(|p| p.parse()).collect()
}

pub struct CharDisplay<'a>(pub &'a [Affine]);

impl fmt::Display for CharDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|a| a.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// One step per line: `[j]; (λ_1,...,λ_d); parameter`.
pub fn transcript(steps: &[WalkStep]) -> String {
    steps.iter().map(|st| format!("[{}]; {}; {}\n", st.index, CharDisplay(&st.character), st.parameter)).collect()
}

/// Parses the transcript format; blank lines and lines starting with '#'
/// are skipped, and a trailing `_E` after the character is accepted.
pub fn parse_transcript(text: &str) -> Result<Vec<WalkStep>> {
    let mut out = Vec::new();
    for line in text.lines() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let bad = || Error::Domain(format!("bad transcript line '{line}'"));
        let mut fields = line.split(';').map(str::trim);
        let idx = fields.next().ok_or_else(bad)?;
        let ch = fields.next().ok_or_else(bad)?;
        let par = fields.next().ok_or_else(bad)?;
        let index = idx.trim_start_matches('[').trim_end_matches(']').parse().map_err(|_| bad())?;
        let ch = ch.trim_end_matches("_E");
        let inner = ch.strip_prefix('(').and_then(|c| c.strip_suffix(')')).ok_or_else(bad)?;
        let parts: Vec<&str> = inner.split(',').collect();
        out.push(WalkStep { index, parameter: par.parse()?, character: char_from_strs(&parts)? });
    }
    Ok(out)
}

/// A disagreement between a computed walk and a reference transcript.
#[derive(Clone, Debug, PartialEq)]
pub struct StepDiff {
    /// 1-based step number
    pub step: usize,
    pub field: &'static str,
    pub expected: String,
    pub computed: String,
}

pub fn diff_walk(computed: &[WalkStep], reference: &[WalkStep]) -> Vec<StepDiff> {
    let mut out = Vec::new();
    if computed.len() != reference.len() {
        out.push(StepDiff {
            step: 0,
            field: "length",
            expected: reference.len().to_string(),
            computed: computed.len().to_string(),
        });
    }
    for (k, (c, r)) in computed.iter().zip(reference).enumerate() {
        if c.index != r.index {
            out.push(StepDiff { step: k + 1, field: "index", expected: r.index.to_string(), computed: c.index.to_string() });
        }
        if c.character != r.character {
            out.push(StepDiff {
                step: k + 1,
                field: "character",
                expected: CharDisplay(&r.character).to_string(),
                computed: CharDisplay(&c.character).to_string(),
            });
        }
        if c.parameter != r.parameter {
            out.push(StepDiff {
                step: k + 1,
                field: "parameter",
                expected: r.parameter.to_string(),
                computed: c.parameter.to_string(),
            });
        }
    }
    out
}

/// λ_s with s replaced by c − s.
pub fn reflect_s(lambda: &[Affine], c: &Q) -> AffineChar {
    lambda.iter().map(|a| Affine::new(-&a.a, &a.a * c + &a.b)).collect()
}

/// λ_s = (s−23, s−6, −5, −4) for the F4 walk.
pub fn f4_lambda() -> AffineChar {
    vec![Affine::int(1, -23), Affine::int(1, -6), Affine::int(0, -5), Affine::int(0, -4)]
}

pub const F4_W0: &str = "123214323412321";
pub const F4_W_MINUS1: &str = "23214323412321";

/// λ_s = (s−5)r₁ − 4r₂.
pub fn rank2_lambda() -> AffineChar {
    vec![Affine::int(1, -5), Affine::int(0, -4)]
}

/// λ_s = (s−2−m/2)r₁ − (1+m/2)r₂ − (m/2)r₃ and δ = (m+4, m+2, m).
pub fn b3_lambda(m: i64) -> (AffineChar, Vec<Q>) {
    let h = q(m, 2);
    let lam = vec![
        Affine::new(qi(1), qi(-2) - &h),
        Affine::constant(qi(-1) - &h),
        Affine::constant(-h),
    ];
    (lam, vec![qi(m + 4), qi(m + 2), qi(m)])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_reflection() {
        let f4 = RootModel::f4();
        let r = f4.reflect(&f4_lambda(), 1).unwrap();
        assert_eq!(r, char_from_strs(&["s-23", "-5", "s-6", "-4"]).unwrap());
        assert_eq!(f4.pairing(&f4_lambda(), 1).unwrap(), Affine::int(1, -1));
    }

    #[test]
    fn parse_word_rejects_letters() {
        assert_eq!(parse_word("[1232]").unwrap(), vec![1, 2, 3, 2]);
        assert!(parse_word("12a").is_err());
    }
}
