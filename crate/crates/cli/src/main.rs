use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use modcheck::suites::{self, CfuncOpts, PadicOpts, Report, SuiteConfig, SuiteId};
use modcheck::Q;

/// Runs the verification suites and reports PASS/FAIL per assertion.
#[derive(Parser, Debug)]
#[command(name = "verify", version)]
struct Cli {
    /// Run every suite.
    #[arg(long)]
    all: bool,
    /// Print the suites and the acceptance row each one covers.
    #[arg(long)]
    list: bool,
    /// Suite to run (repeatable); see --list.
    #[arg(long = "suite", value_name = "NAME")]
    suites: Vec<String>,
    /// Seed for every random sample.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Write the JSON report here.
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<PathBuf>,
    /// Replace every numeric tolerance with this value.
    #[arg(long = "tol-override", global = true, value_name = "TOL")]
    tol_override: Option<f64>,
    /// Cap on points enumerated by the p-adic suite.
    #[arg(long, global = true)]
    budget: Option<u128>,
    /// Config file of `key = value` lines mirroring the flags.
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,
    #[command(subcommand)]
    cmd: Option<Cmd>,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    Dell,
    Cfunc {
        /// Family: all, e8, b3, holeis, typed, rank-one, sigma.
        #[arg(long = "suite")]
        family: Option<String>,
        /// Restrict to these points and print an order table (repeatable).
        #[arg(long)]
        at: Vec<String>,
    },
    Telescope,
    Walk,
    Padic {
        #[arg(long)]
        p: Option<u64>,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        rmax: Option<u32>,
        #[arg(long)]
        s: Option<String>,
    },
    Whittaker,
    Template,
    Poly,
    Ftrank2,
    Cln,
    Special,
}

struct Usage(String);

#[derive(Default)]
struct FileConfig {
    seed: Option<u64>,
    out: Option<PathBuf>,
    tol_override: Option<f64>,
    budget: Option<u128>,
    suites: Vec<String>,
    all: bool,
}

fn parse_config(text: &str) -> Result<FileConfig, Usage> {
    let mut c = FileConfig::default();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (k, v) = line.split_once('=').ok_or_else(|| Usage(format!("config line {}: expected key = value", i + 1)))?;
        let (k, v) = (k.trim().replace('_', "-"), v.trim());
        let bad = |what: &str| Usage(format!("config line {}: bad {what} '{v}'", i + 1));
        match k.as_str() {
            "seed" => c.seed = Some(v.parse().map_err(|_| bad("seed"))?),
            "out" => c.out = Some(PathBuf::from(v)),
            "tol-override" => c.tol_override = Some(v.parse().map_err(|_| bad("tolerance"))?),
            "budget" => c.budget = Some(v.parse().map_err(|_| bad("budget"))?),
            "suite" => c.suites.extend(v.split(',').map(|s| s.trim().to_string()).filter(|s| !s.is_empty())),
            "all" => c.all = v.parse().map_err(|_| bad("boolean"))?,
            _ => return Err(Usage(format!("config line {}: unknown key '{k}'", i + 1))),
        }
    }
    Ok(c)
}

fn parse_q(s: &str) -> Result<Q, Usage> {
    s.parse::<Q>()
        .or_else(|_| s.parse::<i64>().map(modcheck::qi))
        .map_err(|_| Usage(format!("'{s}' is not a rational number")))
}

struct Plan {
    ids: Vec<SuiteId>,
    cfg: SuiteConfig,
    out: Option<PathBuf>,
}

fn plan(cli: Cli) -> Result<Option<Plan>, Usage> {
    let file = match &cli.config {
        Some(p) => {
            let text = std::fs::read_to_string(p).map_err(|e| Usage(format!("cannot read {}: {e}", p.display())))?;
            parse_config(&text)?
        }
        None => FileConfig::default(),
    };
    let mut cfg = SuiteConfig::default();
    if let Some(s) = cli.seed.or(file.seed) {
        cfg.seed = s;
    }
    cfg.tol_override = cli.tol_override.or(file.tol_override);
    if let Some(t) = cfg.tol_override {
        if !(t.is_finite() && t > 0.0) {
            return Err(Usage(format!("--tol-override must be positive, got {t}")));
        }
    }
    if let Some(b) = cli.budget.or(file.budget) {
        cfg.budget = b;
    }
    let out = cli.out.or(file.out);
    let ids = match cli.cmd {
        Some(cmd) => vec![subcommand(cmd, &mut cfg)?],
        None if cli.all || (file.all && cli.suites.is_empty()) => SuiteId::ALL.to_vec(),
        None => {
            let names = if cli.suites.is_empty() { file.suites } else { cli.suites };
            let mut ids = Vec::new();
            for n in names {
                let id = n.parse::<SuiteId>().map_err(|_| Usage(format!("unknown suite '{n}'; see --list")))?;
                if !ids.contains(&id) {
                    ids.push(id);
                }
            }
            ids
        }
    };
    if ids.is_empty() {
        if cli.list {
            return Ok(None);
        }
        return Err(Usage("nothing to run: give a suite subcommand, --suite NAME, --all or --list".into()));
    }
    Ok(Some(Plan { ids, cfg, out }))
}

fn subcommand(cmd: Cmd, cfg: &mut SuiteConfig) -> Result<SuiteId, Usage> {
    Ok(match cmd {
        Cmd::Dell => SuiteId::Dell,
        Cmd::Cfunc { family, at } => {
            if let Some(f) = &family {
                if !suites::FAMILIES.contains(&f.as_str()) {
                    return Err(Usage(format!("unknown family '{f}'; one of {}", suites::FAMILIES.join(", "))));
                }
            }
            let at = at.iter().map(|s| parse_q(s)).collect::<Result<_, _>>()?;
            cfg.cfunc = CfuncOpts { family, at };
            SuiteId::Cfunc
        }
        Cmd::Telescope => SuiteId::Telescope,
        Cmd::Walk => SuiteId::Walk,
        Cmd::Padic { p, n, rmax, s } => {
            if let Some(p) = p {
                if !modcheck::padic::is_prime(p) {
                    return Err(Usage(format!("--p {p} is not prime")));
                }
            }
            if n == Some(0) {
                return Err(Usage("--n must be at least 1".into()));
            }
            let s = s.map(|s| parse_q(&s)).transpose()?;
            cfg.padic = PadicOpts { p, n, rmax, s };
            SuiteId::Padic
        }
        Cmd::Whittaker => SuiteId::Whittaker,
        Cmd::Template => SuiteId::Template,
        Cmd::Poly => SuiteId::Poly,
        Cmd::Ftrank2 => SuiteId::Ftrank2,
        Cmd::Cln => SuiteId::Cln,
        Cmd::Special => SuiteId::Special,
    })
}

fn json(reports: &[Report]) -> serde_json::Result<String> {
    let mut s = if reports.len() == 1 {
        serde_json::to_string_pretty(&reports[0])?
    } else {
        serde_json::to_string_pretty(reports)?
    };
    s.push('\n');
    Ok(s)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let list = cli.list;
    let plan = match plan(cli) {
        Ok(p) => p,
        Err(Usage(msg)) => {
            eprintln!("verify: {msg}");
            return ExitCode::from(2);
        }
    };
    if list {
        print!("{}", suites::listing());
    }
    let Some(plan) = plan else {
        return ExitCode::SUCCESS;
    };
    let reports = suites::run_many(&plan.ids, &plan.cfg);
    let mut counts = BTreeMap::new();
    for r in &reports {
        print!("{}", r.text());
        for a in &r.assertions {
            *counts.entry(a.status.to_string()).or_insert(0usize) += 1;
        }
    }
    let failed = reports.iter().filter(|r| !r.passed()).count();
    println!(
        "{} suite(s): {} assertions passed, {} failed",
        reports.len(),
        counts.get("PASS").copied().unwrap_or(0),
        counts.get("FAIL").copied().unwrap_or(0)
    );
    if let Some(path) = &plan.out {
        let text = match json(&reports) {
            Ok(t) => t,
            Err(e) => {
                eprintln!("verify: cannot serialize report: {e}");
                return ExitCode::from(1);
            }
        };
        if let Err(e) = std::fs::write(path, text) {
            eprintln!("verify: cannot write {}: {e}", path.display());
            return ExitCode::from(2);
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
