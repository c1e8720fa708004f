//! Verification suites, one per acceptance row, producing machine-readable
//! reports. The CLI and the acceptance test both run these.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::Serialize;
use serde_json::{json, Value};

use crate::cfunc::{self, CName, CParams};
use crate::fourier::{self, XPoint};
use crate::padic;
use crate::quadspace::QuadSpace;
use crate::rng::Sampler;
use crate::schmid::{self, MPoint, VlVector};
use crate::special::{bessel_j, bessel_k};
use crate::walk::{self, RootModel};
use crate::{qi, Error, Result, Q};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SuiteId {
    Dell,
    Cfunc,
    Telescope,
    Walk,
    Padic,
    Whittaker,
    Template,
    Poly,
    Ftrank2,
    Cln,
    Special,
}

impl SuiteId {
    pub const ALL: [SuiteId; 11] = [
        SuiteId::Dell,
        SuiteId::Cfunc,
        SuiteId::Telescope,
        SuiteId::Walk,
        SuiteId::Padic,
        SuiteId::Whittaker,
        SuiteId::Template,
        SuiteId::Poly,
        SuiteId::Ftrank2,
        SuiteId::Cln,
        SuiteId::Special,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SuiteId::Dell => "dell",
            SuiteId::Cfunc => "cfunc",
            SuiteId::Telescope => "telescope",
            SuiteId::Walk => "walk",
            SuiteId::Padic => "padic",
            SuiteId::Whittaker => "whittaker",
            SuiteId::Template => "template",
            SuiteId::Poly => "poly",
            SuiteId::Ftrank2 => "ftrank2",
            SuiteId::Cln => "cln",
            SuiteId::Special => "special",
        }
    }

    /// Acceptance row this suite implements.
    pub fn criterion(self) -> usize {
        SuiteId::ALL.iter().position(|s| *s == self).unwrap() + 1
    }

    pub fn describe(self) -> &'static str {
        match self {
            SuiteId::Dell => "Pochhammer-sum polynomial d_ell against ±2^ℓ((s−ℓ−1)/2)_{ℓ/2}, ℓ ≤ 16",
            SuiteId::Cfunc => "orders of c-functions at the special points under the ζ model",
            SuiteId::Telescope => "ζ-product simplifications as exact identities",
            SuiteId::Walk => "Weyl-group walks against the transcribed tables",
            SuiteId::Padic => "isotropic counts, character sums and local J at finite places",
            SuiteId::Whittaker => "difference-differential equations and the Schmid scalar on f¹",
            SuiteId::Template => "constant-term template annihilated by the Schmid operator",
            SuiteId::Poly => "polynomial ₂F₁-sum identity, including |a| > b",
            SuiteId::Ftrank2 => "rank-two Fourier identity and quadrature of I_v",
            SuiteId::Cln => "extraction of the rational constant C_{ℓ,n}",
            SuiteId::Special => "Bessel recurrences, beta integrals, F₄ reduction",
        }
    }
}

impl fmt::Display for SuiteId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SuiteId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        SuiteId::ALL.into_iter().find(|id| id.name() == s).ok_or_else(|| Error::UnknownName(s.into()))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Status {
    #[serde(rename = "PASS")]
    Pass,
    #[serde(rename = "FAIL")]
    Fail,
}

impl Status {
    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Status::Pass
        } else {
            Status::Fail
        }
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
        })
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Assertion {
    pub name: String,
    pub paper_anchor: String,
    pub status: Status,
    pub measured: Value,
    /// a number, or "exact"
    pub tolerance: Value,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub suite: String,
    pub params: BTreeMap<String, Value>,
    pub assertions: Vec<Assertion>,
    /// extra human-readable output (tables), not part of the JSON
    #[serde(skip)]
    pub notes: Vec<String>,
}

impl Report {
    fn new(id: SuiteId) -> Self {
        Report { suite: id.name().into(), params: BTreeMap::new(), assertions: Vec::new(), notes: Vec::new() }
    }

    pub fn passed(&self) -> bool {
        !self.assertions.is_empty() && self.assertions.iter().all(|a| a.status == Status::Pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Assertion> {
        self.assertions.iter().filter(|a| a.status == Status::Fail)
    }

    fn param(&mut self, k: &str, v: Value) {
        self.params.insert(k.into(), v);
    }

    fn exact(&mut self, name: impl Into<String>, anchor: &str, ok: bool, measured: Value) {
        self.assertions.push(Assertion {
            name: name.into(),
            paper_anchor: anchor.into(),
            status: Status::from_bool(ok),
            measured,
            tolerance: json!("exact"),
        });
    }

    /// passes iff measured ≤ tol
    fn at_most(&mut self, name: impl Into<String>, anchor: &str, measured: f64, tol: f64) {
        self.assertions.push(Assertion {
            name: name.into(),
            paper_anchor: anchor.into(),
            status: Status::from_bool(measured <= tol),
            measured: num(measured),
            tolerance: num(tol),
        });
    }

    /// passes iff measured > tol
    fn above(&mut self, name: impl Into<String>, anchor: &str, measured: f64, tol: f64) {
        self.assertions.push(Assertion {
            name: name.into(),
            paper_anchor: anchor.into(),
            status: Status::from_bool(measured > tol),
            measured: num(measured),
            tolerance: json!(format!("> {tol:e}")),
        });
    }

    fn error(&mut self, name: impl Into<String>, anchor: &str, e: &Error) {
        self.assertions.push(Assertion {
            name: name.into(),
            paper_anchor: anchor.into(),
            status: Status::Fail,
            measured: json!(format!("error: {e}")),
            tolerance: Value::Null,
        });
    }

    /// Text block: one line per assertion, then any notes.
    pub fn text(&self) -> String {
        let mut s = format!("== {} ==\n", self.suite);
        for a in &self.assertions {
            let m = match &a.measured {
                Value::String(t) => t.clone(),
                v => v.to_string(),
            };
            s += &format!("{}  {}  measured={}  tol={}\n", a.status, a.name, m, a.tolerance);
        }
        for n in &self.notes {
            s += n;
            if !n.ends_with('\n') {
                s.push('\n');
            }
        }
        s
    }
}

/// NaN and infinities become strings so the JSON stays valid.
fn num(x: f64) -> Value {
    serde_json::Number::from_f64(x).map(Value::Number).unwrap_or_else(|| json!(x.to_string()))
}

#[derive(Clone, Debug, Default)]
pub struct CfuncOpts {
    /// e8, b3, holeis, typed, rank-one, sigma or all
    pub family: Option<String>,
    pub at: Vec<Q>,
}

#[derive(Clone, Debug, Default)]
pub struct PadicOpts {
    pub p: Option<u64>,
    pub n: Option<usize>,
    pub rmax: Option<u32>,
    pub s: Option<Q>,
}

#[derive(Clone, Debug)]
pub struct SuiteConfig {
    pub seed: u64,
    /// replaces every numeric tolerance
    pub tol_override: Option<f64>,
    pub budget: u128,
    pub cfunc: CfuncOpts,
    pub padic: PadicOpts,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig { seed: 42, tol_override: None, budget: padic::DEFAULT_BUDGET, cfunc: CfuncOpts::default(), padic: PadicOpts::default() }
    }
}

impl SuiteConfig {
    fn tol(&self, default: f64) -> f64 {
        self.tol_override.unwrap_or(default)
    }
}

pub fn run(id: SuiteId, cfg: &SuiteConfig) -> Report {
    let mut r = Report::new(id);
    r.param("seed", json!(cfg.seed));
    if let Some(t) = cfg.tol_override {
        r.param("tol_override", num(t));
    }
    match id {
        SuiteId::Dell => dell(&mut r),
        SuiteId::Cfunc => cfunc_orders(&mut r, cfg),
        SuiteId::Telescope => telescope(&mut r),
        SuiteId::Walk => walks(&mut r),
        SuiteId::Padic => padic_suite(&mut r, cfg),
        SuiteId::Whittaker => whittaker(&mut r, cfg),
        SuiteId::Template => template(&mut r, cfg),
        SuiteId::Poly => poly(&mut r, cfg),
        SuiteId::Ftrank2 => ftrank2(&mut r, cfg),
        SuiteId::Cln => cln(&mut r, cfg),
        SuiteId::Special => special(&mut r, cfg),
    }
    r
}

fn dell(r: &mut Report) {
    let anchor = "Σ_j C(ℓ,j)(…) = 2^ℓ((s−ℓ−1)/2)_{ℓ/2}";
    r.param("ell", json!("2..=16 even"));
    for ell in (2..=16).step_by(2) {
        match cfunc::d_ell_sign(ell) {
            Ok(Some(sign)) => r.exact(format!("d_{ell} = {sign:+}·2^{ell}((s-{})/2)_{}", ell + 1, ell / 2), anchor, true, json!(sign)),
            Ok(None) => r.exact(format!("d_{ell} proportional to closed form"), anchor, false, json!("not ± closed form")),
            Err(e) => r.error(format!("d_{ell}"), anchor, &e),
        }
    }
}

fn family_of(label: &str) -> &'static str {
    if label.starts_with("E8") || label.starts_with("c_sl3") {
        "e8"
    } else if label.starts_with("c_b3") || label.starts_with("B3") {
        "b3"
    } else if label.starts_with("holEis") {
        "holeis"
    } else if label.starts_with("type-D") {
        "typed"
    } else if label.starts_with("rank-one") {
        "rank-one"
    } else {
        "sigma"
    }
}

/// Accepted values of the c-function family filter.
pub const FAMILIES: [&str; 7] = ["all", "e8", "b3", "holeis", "typed", "rank-one", "sigma"];

fn family_names(fam: &str) -> Vec<CName> {
    match fam {
        "e8" => vec![CName::E8CfW0, CName::E8CInfW0, CName::E8CfWMinus1],
        "b3" => vec![CName::B3, CName::B3Type8CW0],
        "holeis" => vec![CName::HolEisCumulative],
        "typed" => vec![CName::TypeDCfW0, CName::TypeDCInfW0, CName::TypeDCfWPrime],
        "rank-one" => vec![CName::RankOne],
        _ => vec![],
    }
}

fn cfunc_orders(r: &mut Report, cfg: &SuiteConfig) {
    let fam = cfg.cfunc.family.clone().unwrap_or_else(|| "all".into());
    r.param("family", json!(fam));
    if !FAMILIES.contains(&fam.as_str()) {
        r.error("family", "", &Error::UnknownName(fam));
        return;
    }
    if !cfg.cfunc.at.is_empty() {
        r.param("at", json!(cfg.cfunc.at.iter().map(|q| q.to_string()).collect::<Vec<_>>()));
    }
    let claims = match cfunc::order_claims() {
        Ok(c) => c,
        Err(e) => return r.error("order claims", "", &e),
    };
    for c in claims {
        if fam != "all" && family_of(&c.label) != fam {
            continue;
        }
        if !cfg.cfunc.at.is_empty() && !cfg.cfunc.at.iter().any(|p| p.to_string() == c.point) {
            continue;
        }
        let want = match c.expect {
            cfunc::Expect::Exactly(e) => format!("order = {e}"),
            cfunc::Expect::AtLeast(e) => format!("order ≥ {e}"),
        };
        let measured = json!({"order": c.order, "leading": c.leading.map(num)});
        r.exact(format!("{}: {want}", c.label), &c.formula, c.pass, measured);
    }
    if !cfg.cfunc.at.is_empty() {
        let p = CParams::default();
        let names = if fam == "all" { family_names("e8") } else { family_names(&fam) };
        for n in names {
            match cfunc::c_named(n, &p) {
                Ok(f) => r.notes.push(cfunc::order_report_text(n.as_str(), &cfunc::order_report(&f, &cfg.cfunc.at))),
                Err(e) => r.notes.push(format!("{}: {e}", n.as_str())),
            }
        }
    }
}

fn telescope(r: &mut Report) {
    match cfunc::telescopes() {
        Ok(ts) => {
            for t in ts {
                let m = json!({"product": t.product, "simplified": t.simplified});
                r.exact(format!("{}: product = simplified", t.label), "telescoping ζ-product", t.equal, m);
            }
        }
        Err(e) => r.error("telescopes", "", &e),
    }
}

const F4_TABLE: &str = include_str!("../tests/golden/f4_w0.txt");
const RANK2_TABLE: &str = include_str!("../tests/golden/rank2.txt");
const B3_TABLE: &str = include_str!("../tests/golden/b3_m8.txt");

fn walks(r: &mut Report) {
    if let Err(e) = walks_inner(r) {
        r.error("walks", "", &e);
    }
}

fn walks_inner(r: &mut Report) -> Result<()> {
    let f4 = RootModel::f4();
    let lam = walk::f4_lambda();
    let steps = f4.walk(&lam, &walk::parse_word(walk::F4_W0)?)?;
    let table = walk::parse_transcript(F4_TABLE)?;
    let diffs = walk::diff_walk(&steps, &table);
    // step 8 of the table lists 2s−19 while α₂·(−13,−4,s−15,14−s) = 2s−29
    let flagged = diffs.len() == 1 && diffs[0].step == 8 && diffs[0].field == "parameter" && diffs[0].computed == "2s-29";
    r.exact(
        "F4 walk: 15 steps, characters and parameters match table except flagged step 8 (table 2s-19, computed 2s-29)",
        "w0 = w1w2w3w2w1w4w3w2w3w4w1w2w3w2w1 table",
        steps.len() == 15 && table.len() == 15 && flagged,
        json!(diffs.iter().map(|d| format!("step {} {}: table {} computed {}", d.step, d.field, d.expected, d.computed)).collect::<Vec<_>>()),
    );
    let end = &steps.last().unwrap().character;
    r.exact(
        "F4 endpoint = λ_{29-s}",
        "w0 λ_s = λ_{29−s}",
        *end == walk::reflect_s(&lam, &qi(29)),
        json!(walk::CharDisplay(end).to_string()),
    );
    let m2 = RootModel::rank2();
    let st2 = m2.walk(&walk::rank2_lambda(), &[1, 2, 1])?;
    let d2 = walk::diff_walk(&st2, &walk::parse_transcript(RANK2_TABLE)?);
    let end2 = &st2.last().unwrap().character;
    r.exact("rank-2 walk matches table", "rank-two walk", d2.is_empty(), json!(d2.len()));
    r.exact(
        "rank-2 endpoint = λ_{10-s}",
        "w λ_s = λ_{10−s}",
        *end2 == walk::reflect_s(&walk::rank2_lambda(), &qi(10)),
        json!(walk::CharDisplay(end2).to_string()),
    );
    let b3 = RootModel::b3();
    let (lb, _) = walk::b3_lambda(8);
    let d3 = walk::diff_walk(&b3.walk(&lb, &[1, 2, 3, 2, 1])?, &walk::parse_transcript(B3_TABLE)?);
    r.exact("B3 walk (m = 8) matches table", "B3 walk", d3.is_empty(), json!(d3.len()));
    let coords = f4.to_simple_root_coords(&lam)?;
    let want: Vec<String> = ["2s-29", "3s-57", "4s-84", "2s-46"].iter().map(|s| s.to_string()).collect();
    let got: Vec<String> = coords.iter().map(|a| a.to_string()).collect();
    r.exact("simple-root coordinates of λ_s", "(2s−29, 3s−57, 4s−84, 2s−46)", got == want, json!(got));
    let pair = vec![lam.clone(), f4.reflect(&lam, 1)?];
    let at9 = f4.jacquet_all_negative(&pair, &qi(9))?;
    let at20 = f4.jacquet_all_negative(&pair, &qi(20))?;
    r.exact("Jacquet exponents all negative at s = 9", "square-integrability criterion", at9, json!(at9));
    r.exact("Jacquet exponents not all negative at s = 20", "square-integrability criterion", !at20, json!(at20));
    Ok(())
}

fn padic_suite(r: &mut Report, cfg: &SuiteConfig) {
    r.param("budget", json!(cfg.budget.to_string()));
    let o = &cfg.padic;
    if o.p.is_some() || o.n.is_some() || o.s.is_some() {
        let (p, n, rmax) = (o.p.unwrap_or(3), o.n.unwrap_or(2), o.rmax.unwrap_or(2));
        let s = o.s.clone().unwrap_or_else(|| qi(3));
        r.param("p", json!(p));
        r.param("n", json!(n));
        r.param("rmax", json!(rmax));
        r.param("s", json!(s.to_string()));
        return j_local_row(r, &s, n, p, rmax, cfg.budget);
    }
    let anchor_c = "#{isotropic v ∈ U_n(𝔽_p)} recurrence";
    for n in 1..=3usize {
        for p in [2u64, 3, 5, 7] {
            match padic::count_isotropic(n, p, cfg.budget) {
                Ok(c) => {
                    let rec = padic::count_isotropic_recurrence(n, p);
                    r.exact(format!("C({n}) brute force = recurrence, p = {p}"), anchor_c, c as u128 == rec, json!(c));
                }
                Err(e) => r.error(format!("C({n}), p = {p}"), anchor_c, &e),
            }
        }
    }
    let anchor_s = "S_n = Σ_{q(y)=0} ψ((η,y)) = −p^{n−1}";
    for n in 1..=3usize {
        for p in [2u64, 3, 5] {
            match padic::char_sum_s(n, p, &padic::standard_eta(n), cfg.budget) {
                Ok(c) => {
                    let want = -(p as i64).pow(n as u32 - 1);
                    r.exact(format!("S_{n} = -{p}^{}", n - 1), anchor_s, c.as_integer() == Some(want), json!(c.as_integer()));
                }
                Err(e) => r.error(format!("S_{n}, p = {p}"), anchor_s, &e),
            }
        }
    }
    let anchor_r = "r ≥ 2 character sums vanish";
    for (n, p, rr) in [(1usize, 5u64, 2u32), (2, 3, 2)] {
        match padic::r2_vanishing(n, p, rr, &padic::standard_eta(n), cfg.budget) {
            Ok(c) => r.exact(format!("sum vanishes at (n,p,r) = ({n},{p},{rr})"), anchor_r, c.is_zero(), json!(c.is_zero())),
            Err(e) => r.error(format!("({n},{p},{rr})"), anchor_r, &e),
        }
    }
    for p in [3u64, 5] {
        for s in [3i64, 4, 6] {
            j_local_row(r, &qi(s), 2, p, 2, cfg.budget);
        }
    }
}

fn j_local_row(r: &mut Report, s: &Q, n: usize, p: u64, rmax: u32, budget: u128) {
    let anchor = "J(s) = 1 − p^{−(s−n+1)}";
    let name = format!("j_local(s={s}; n={n}, p={p}, rmax={rmax})");
    match padic::j_local(s, n, p, &padic::standard_eta(n), rmax, budget) {
        Ok(j) => {
            let closed = s.is_integer().then(|| padic::j_local_closed(num_traits::ToPrimitive::to_i64(&s.to_integer()).unwrap(), n, p));
            let ok = matches!((&j.exact_q, &closed), (Some(a), Some(b)) if a == b);
            let measured = json!({"J": j.exact.clone().unwrap_or_else(|| j.approx.to_string()), "closed": closed.map(|c| c.to_string())});
            r.exact(format!("{name} = 1 - p^-(s-n+1)"), anchor, ok, measured);
        }
        Err(e) => r.error(name, anchor, &e),
    }
}

/// Points (t, m) with |t| ∈ [0.4, 1.6] of either sign and m a random isometry near 1.
pub fn sample_mpoints(space: &QuadSpace, rng: &mut Sampler, count: usize) -> Result<Vec<MPoint>> {
    (0..count)
        .map(|_| {
            let sign = if rng.uniform(0.0, 1.0) < 0.5 { -1.0 } else { 1.0 };
            let t = sign * rng.uniform(0.4, 1.6);
            MPoint::new(space, t, space.random_isometry(rng, 0.5))
        })
        .collect()
}

fn whittaker(r: &mut Report, cfg: &SuiteConfig) {
    if let Err(e) = whittaker_inner(r, cfg) {
        r.error("whittaker", "", &e);
    }
}

fn whittaker_inner(r: &mut Report, cfg: &SuiteConfig) -> Result<()> {
    let space = QuadSpace::standard(2);
    let mut rng = Sampler::new(cfg.seed);
    let pts = sample_mpoints(&space, &mut rng, 50)?;
    r.param("points", json!(50));
    let anchor = "𝒲_η satisfies the four difference-differential equations";
    let etas: [(&str, [f64; 4]); 3] = [("v1", [1.0, 0.0, 0.0, 0.0]), ("3v1+v2", [3.0, 1.0, 0.0, 0.0]), ("v1+u1", [1.0, 0.0, 1.0, 0.0])];
    for ell in [1usize, 2, 4] {
        for (label, eta) in &etas {
            let res = schmid::whittaker_residuals(&space, eta, ell, &pts)?;
            r.at_most(format!("whittaker residual ℓ={ell}, η={label}"), anchor, res, cfg.tol(1e-6));
        }
    }
    let eta = [1.0, 0.0, 0.0, 0.0];
    let bumped = |_: &[f64], t: f64, m: &DMatrix<f64>| {
        let mut w = schmid::whittaker_w(&space, &eta, &MPoint { t, m: m.clone() }, 2)?;
        w.set(1, w.get(1) * 1.01);
        Ok(w)
    };
    let det = schmid::residuals_of(&space, &bumped, &eta, 2, &pts[..10])?;
    r.above("detector flags 1% perturbation of F_1", anchor, det, 1e-3);
    let anchor_f = "D_ℓ f¹_ℓ = (s−ℓ−1)/√2 · f²_ℓ";
    for ell in [1usize, 2, 4] {
        for sv in [ell as f64 - 1.0, ell as f64 + 1.0, ell as f64 + 3.0] {
            let f1 = move |_: &[f64], t: f64, _: &DMatrix<f64>| {
                let mut w = VlVector::zeros(ell);
                w.set(0, Complex64::new(t.abs().powf(sv), 0.0));
                Ok(w)
            };
            let mut worst = 0.0f64;
            for p in &pts[..5] {
                let p = MPoint { t: p.t.abs(), m: p.m.clone() };
                let out = schmid::schmid_apply(&space, &f1, ell, &[0.0; 4], &p, 1e-4)?;
                let ts = p.t.powf(sv) * 2f64.sqrt();
                let want = sv - ell as f64 - 1.0;
                worst = worst.max((out.y_um[out.index(1)] / ts - want).norm());
                worst = worst.max((out.x_um[out.index(0)] / ts + want).norm());
            }
            r.at_most(format!("Schmid scalar on f¹, ℓ={ell}, s={sv}"), anchor_f, worst, cfg.tol(1e-6));
        }
    }
    Ok(())
}

fn template(r: &mut Report, cfg: &SuiteConfig) {
    if let Err(e) = template_inner(r, cfg) {
        r.error("template", "", &e);
    }
}

fn template_inner(r: &mut Report, cfg: &SuiteConfig) -> Result<()> {
    let space = QuadSpace::standard(2);
    let mut rng = Sampler::new(cfg.seed);
    let probes: Vec<DMatrix<f64>> = sample_mpoints(&space, &mut rng, 6)?.into_iter().map(|p| p.m).collect();
    let b0 = [1.0, 0.0, 1.0, 0.0];
    let anchor = "β|t|^{ℓ+1}[x^ℓ][y^ℓ] + |t|F′_ℓ(m)x^{2ℓ} + |t|F′_ℓ(mε)y^{2ℓ}, killed by D_ℓ";
    for ell in [2usize, 3, 4] {
        let ct = schmid::constant_term_template(&space, ell, Complex64::new(1.0, 0.0), schmid::holomorphic_section(&space, &b0, ell), &probes)?;
        let f = ct.as_function();
        let mut worst = 0.0f64;
        for p in sample_mpoints(&space, &mut rng, 8)? {
            let x: Vec<f64> = (0..4).map(|_| rng.uniform(-0.5, 0.5)).collect();
            worst = worst.max(schmid::schmid_apply(&space, &f, ell, &x, &p, 1e-4)?.residual());
        }
        r.at_most(format!("template residual, β = 1, holomorphic F′, ℓ={ell}"), anchor, worst, cfg.tol(1e-6));
    }
    Ok(())
}

fn poly(r: &mut Report, cfg: &SuiteConfig) {
    let anchor = "(ax² + 2bxy − a*y²)^ℓ = Σ_v … ₂F₁((v−ℓ)/2,(v+ℓ+1)/2;v+1;|a|²/(|a|²+b²)), any b > 0";
    let mut rng = Sampler::new(cfg.seed);
    match fourier::poly_identity_2f1sum(2, Complex64::new(1.0, 0.0), 2.0) {
        Ok(p) => {
            let want = [1.0, -8.0, 14.0, 8.0, 1.0];
            let ok = p.lhs.coeffs.iter().zip(want).all(|(c, w)| (c - w).norm() < 1e-14) && p.abs_residual <= 1e-12;
            r.exact("ℓ=2, a=1, b=2: LHS = x⁴+8x³y+14x²y²−8xy³+y⁴", anchor, ok, num(p.abs_residual));
        }
        Err(e) => r.error("ℓ=2 worked example", anchor, &e),
    }
    for ell in [2usize, 4, 6, 8] {
        let mut worst = 0.0f64;
        let mut large = 0;
        for k in 0..20 {
            let b = rng.uniform(0.05, 2.0);
            // every fourth sample forces |a| > b
            let rad = if k % 4 == 0 { b * rng.uniform(1.1, 3.0) } else { rng.uniform(0.0, 3.0) };
            let th = rng.uniform(0.0, std::f64::consts::TAU);
            let a = Complex64::from_polar(rad, th);
            large += usize::from(rad > b);
            match fourier::poly_identity_2f1sum(ell, a, b) {
                Ok(p) => worst = worst.max(p.residual),
                Err(e) => return r.error(format!("ℓ={ell}"), anchor, &e),
            }
        }
        r.at_most(format!("ℓ={ell}: max scaled residual over 20 (a,b), {large} with |a| > b"), anchor, worst, cfg.tol(1e-10));
    }
}

fn random_x(rng: &mut Sampler, n: usize, radius: f64) -> XPoint {
    XPoint::new([rng.uniform(-radius, radius), rng.uniform(-radius, radius)], (0..n).map(|_| rng.uniform(-radius, radius)).collect())
}

fn ftrank2(r: &mut Report, cfg: &SuiteConfig) {
    let anchor = "Σ I_v x^{ℓ+v}y^{ℓ−v}/((ℓ+v)!(ℓ−v)!) ≐ (a₁x²+2b₁xy−a₁*y²)^ℓ/τ^{2ℓ+1}";
    let mut rng = Sampler::new(cfg.seed);
    for (ell, n) in [(2usize, 2usize), (4, 2), (8, 10)] {
        let mut worst = 0.0f64;
        let mut scalars = Vec::new();
        for _ in 0..10 {
            let x = random_x(&mut rng, n, 1.5);
            match fourier::ftrank2_identity(&x, ell, n) {
                Ok(rep) => {
                    worst = worst.max(rep.residual);
                    scalars.push(rep.scalar);
                }
                Err(e) => return r.error(format!("(ℓ,n)=({ell},{n})"), anchor, &e),
            }
        }
        r.at_most(format!("(ℓ,n)=({ell},{n}): residual after single-scalar fit, 10 points"), anchor, worst, cfg.tol(1e-8));
        let s0 = scalars[0];
        let spread = scalars.iter().map(|s| (s - s0).norm()).fold(0.0, f64::max) / s0.norm();
        r.notes.push(format!("(ℓ,n)=({ell},{n}) fitted scalar {:.12} (spread {spread:.1e})", s0.re));
        r.at_most(format!("(ℓ,n)=({ell},{n}): fitted scalar is the same at every x"), anchor, spread, cfg.tol(1e-8));
    }
    let anchor_q = "I_v(x;ℓ) = ∫ e^{i(ω,x)} 1(q(ω)>0) q(ω)^A (…)^v K_v(√2|(ω,v₁+iv₂)|) dω";
    let mut worst = 0.0f64;
    for _ in 0..5 {
        let x = random_x(&mut rng, 2, 1.2);
        for v in -2..=2i64 {
            let res = fourier::iv_closed(v, &x, 2, 2).and_then(|c| Ok((c.i, fourier::iv_quadrature(v, &x, 2, 2, 1e-8)?)));
            match res {
                Ok((a, b)) => worst = worst.max((a - b).norm() / a.norm().max(1e-300)),
                Err(e) => return r.error("quadrature vs closed form", anchor_q, &e),
            }
        }
    }
    r.at_most("(ℓ,n)=(2,2): quadrature vs closed form, 5 points, all v", anchor_q, worst, cfg.tol(1e-4));
}

/// ω with Q(ω) > 0 and ω₂ ≠ 0.
fn random_omega(rng: &mut Sampler, n: usize) -> XPoint {
    let rad = rng.uniform(0.3, 1.2);
    let th = rng.uniform(0.0, std::f64::consts::TAU);
    let mut xn: Vec<f64> = (0..n).map(|_| rng.uniform(-1.0, 1.0)).collect();
    let norm = xn.iter().map(|c| c * c).sum::<f64>().sqrt().max(1e-12);
    let target = rad * rng.uniform(0.0, 0.9);
    xn.iter_mut().for_each(|c| *c *= target / norm);
    XPoint::new([rad * th.cos(), rad * th.sin()], xn)
}

fn cln(r: &mut Report, cfg: &SuiteConfig) {
    let anchor = "∫ e^{−2πi(ω,x)} f_ℓ(wn(x),ℓ+1) dx = C_{ℓ,n}(2π)^{2ℓ+2−dim V′/2} q(ω)^{ℓ−n/2} 𝒲_{2πω}(1)";
    let mut rng = Sampler::new(cfg.seed);
    let omegas: Vec<XPoint> = (0..5).map(|_| random_omega(&mut rng, 2)).collect();
    let tol = cfg.tol(1e-6);
    match fourier::extract_cln(2, 2, &omegas, tol) {
        Ok(rep) => {
            r.at_most("C_{2,2} constant across 5 ω (relative spread)", anchor, rep.spread, tol);
            r.exact(
                "C_{2,2} is a nonzero rational",
                anchor,
                rep.rational != qi(0),
                json!({"value": num(rep.value), "rational": rep.rational.to_string()}),
            );
        }
        Err(e) => r.error("C_{2,2}", anchor, &e),
    }
    let iso = XPoint::new([1.0, 0.0], vec![1.0, 0.0]);
    let probe = XPoint::new([0.2, 0.1], vec![0.3, 0.0]);
    let res = fourier::kappa_at(&probe, 2, 2).and_then(|kappa| {
        let ft = fourier::fourier_transform(&iso, 2, 2, kappa)?;
        // scale: the transform at a nearby anisotropic ω
        let near = fourier::fourier_transform(&XPoint::new([1.0, 0.0], vec![0.5, 0.0]), 2, 2, kappa)?;
        let s = near.iter().map(|z| z.norm()).fold(0.0, f64::max);
        Ok(ft.iter().map(|z| z.norm()).fold(0.0, f64::max) / s)
    });
    match res {
        Ok(v) => r.at_most("transform at isotropic ω = v₁+u₁ vanishes (scaled)", anchor, v, cfg.tol(1e-10)),
        Err(e) => r.error("isotropic ω", anchor, &e),
    }
}

fn special(r: &mut Report, cfg: &SuiteConfig) {
    let d1 = |f: &dyn Fn(f64) -> f64, x: f64, h: f64| {
        let c = |h: f64| (f(x + h) - f(x - h)) / (2.0 * h);
        (4.0 * c(h / 2.0) - c(h)) / 3.0
    };
    let anchor_b = "K_{v+1} − K_{v−1} = (2v/y)K_v, J_{ν−1} + J_{ν+1} = (2ν/y)J_ν, and derivative rules";
    let mut worst = 0.0f64;
    let mut fail: Option<Error> = None;
    for i in 1..=12 {
        let y = 0.45 * i as f64 + 0.1;
        for v in 1..8 {
            let k = |v: i32, y: f64| bessel_k(v, y);
            match (k(v - 1, y), k(v, y), k(v + 1, y)) {
                (Ok(km), Ok(k0), Ok(kp)) => {
                    worst = worst.max(((kp - km) - 2.0 * v as f64 / y * k0).abs() / kp.abs());
                    let der = d1(&|t| bessel_k(v, t).unwrap_or(f64::NAN), y, 1e-3);
                    worst = worst.max((der + 0.5 * (km + kp)).abs() / kp.abs());
                }
                (Err(e), _, _) | (_, Err(e), _) | (_, _, Err(e)) => fail = Some(e),
            }
        }
        for nu in [1.0, 2.5, 7.0, 15.0] {
            for yy in [y, 10.0 * y, 95.0] {
                match (bessel_j(nu - 1.0, yy), bessel_j(nu, yy), bessel_j(nu + 1.0, yy)) {
                    (Ok(jm), Ok(j0), Ok(jp)) => {
                        worst = worst.max((jm + jp - 2.0 * nu / yy * j0).abs());
                        let der = d1(&|t| bessel_j(nu, t).unwrap_or(f64::NAN), yy, 1e-3);
                        worst = worst.max((2.0 * der - (jm - jp)).abs());
                    }
                    (Err(e), _, _) | (_, Err(e), _) | (_, _, Err(e)) => fail = Some(e),
                }
            }
        }
    }
    match fail {
        Some(e) => r.error("Bessel recurrences", anchor_b, &e),
        None => r.at_most("Bessel recurrence and derivative residuals", anchor_b, worst, cfg.tol(1e-9)),
    }
    let mut ode = 0.0f64;
    for v in [0, 1, 3, 6] {
        for y in [0.2f64, 1.0, 3.5, 9.0] {
            let g = |w: f64| bessel_k(v, w.exp()).unwrap_or(f64::NAN);
            let w = y.ln();
            let c = |h: f64| (g(w + h) - 2.0 * g(w) + g(w - h)) / (h * h);
            let second = (4.0 * c(5e-4) - c(1e-3)) / 3.0;
            ode = ode.max(((second - (v as f64 * v as f64 + y * y) * g(w)) / g(w)).abs());
        }
    }
    // second differences lose digits; 1e−6 is the finite-difference floor
    r.at_most("modified Bessel equation (y∂_y)²K = (v²+y²)K", anchor_b, ode, cfg.tol(1e-6));
    let anchor_beta = "∫₀^∞ u^{dim U/2}(1+u)^{−s} du/u = Γ(dim U/2)Γ(s−dim U/2)/Γ(s)";
    for (d, s) in [(2usize, 3.0), (8, 10.0)] {
        match fourier::beta_check(d, s) {
            Ok(b) => r.at_most(format!("beta integral, dim U = {d}, s = {s}"), anchor_beta, b.residual, cfg.tol(1e-8)),
            Err(e) => r.error(format!("beta integral ({d},{s})"), anchor_beta, &e),
        }
    }
    let anchor_f4 = "F₄(ℓ+1,ℓ+1+v;ℓ+1,v+1;−r_n²/2,−r₂²/2) = τ^{−(ℓ+v+1)}₂F₁((v−ℓ)/2,(v+ℓ+1)/2;v+1;2r₂²/τ²)";
    for (ell, v, rn, r2) in [(2usize, 0usize, 0.3, 0.4), (2, 1, 0.5, 0.2), (8, 3, 0.35, 0.3)] {
        match fourier::f4_reduction(ell, v, rn, r2, 150) {
            Ok(f) => r.exact(
                format!("F4 reduction within tail bound, (ℓ,v,‖x_n‖,‖x₂‖)=({ell},{v},{rn},{r2})"),
                anchor_f4,
                f.within_tail(),
                json!({"diff": num(f.diff), "tail_bound": num(f.tail_bound)}),
            ),
            Err(e) => r.error(format!("F4 reduction ({ell},{v})"), anchor_f4, &e),
        }
    }
}

/// Runs the suites on the rayon pool; output order follows `ids`.
pub fn run_many(ids: &[SuiteId], cfg: &SuiteConfig) -> Vec<Report> {
    use rayon::prelude::*;
    ids.par_iter().map(|id| run(*id, cfg)).collect()
}

/// `--list` text: suite name, acceptance row, description.
pub fn listing() -> String {
    SuiteId::ALL.iter().map(|s| format!("{:<10} criterion {:>2}  {}\n", s.name(), s.criterion(), s.describe())).collect()
}
