//! Command-line front end: descriptor parsing, command dispatch and CSV output.

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::PathBuf;

use clap::{Parser, Subcommand};
use rayon::prelude::*;

use crate::discrepancy::{asymptotic_report, d_star_series, disc_bounds, pinner_bound, Evaluator};
use crate::error::Error;
use crate::exact_reals::{convergent_table, parse_angle, parse_beta, AngleDescriptor, Elem, Field};
use crate::oracle::{oracle_drel_series, oracle_dstar, oracle_return_structure, oracle_walk_series};
use crate::ostrowski::{gap, Numeration, ReturnStructure};
use crate::walk_renorm::{walk_general_with, Walker};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] Error),
    #[error("mismatch: {0}")]
    Mismatch(String),
    #[error("usage: {0}")]
    Usage(String),
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(Error::Parse(_)) | CliError::Usage(_) => 2,
            CliError::Core(
                Error::ValidityHorizon { .. }
                | Error::Undecidable(_)
                | Error::TruncationExceeded { .. }
                | Error::DepthCap(_),
            ) => 3,
            CliError::Mismatch(_) => 4,
            _ => 1,
        }
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

#[derive(Debug, Parser)]
#[command(name = "rotwalk", version, about = "Exact walk sums and discrepancy of irrational rotations")]
#[command(args_override_self = true)]
pub struct RunConfig {
    #[command(subcommand)]
    pub command: Command,
    /// Angle descriptor: golden, sqrt2m1, sqrt13m3over2, em2, periodic:..., surd:..., list:...
    #[arg(long, global = true)]
    pub alpha: Option<String>,
    /// Offset descriptor: rat:p/q, surd:..., fsum:k1,k2,...
    #[arg(long, global = true)]
    pub beta: Option<String>,
    #[arg(long, global = true)]
    pub n: Option<u128>,
    #[arg(long = "n-max", global = true)]
    pub n_max: Option<u128>,
    /// start:stop:step, stop inclusive.
    #[arg(long, global = true)]
    pub grid: Option<String>,
    #[arg(long, global = true)]
    pub depth: Option<usize>,
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Append lossy decimal columns with K digits.
    #[arg(long, global = true)]
    pub decimals: Option<usize>,
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    /// key = value file mirroring the flags; flags win.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, Subcommand, PartialEq, Eq)]
pub enum Command {
    /// Partial quotients, convergents and f_h.
    Expand,
    /// t_k, r_k, return peaks and gaps.
    Sequences,
    /// Digits of β in the base (f_k).
    Beta,
    /// S_n with running extrema.
    Walk,
    /// d_n(α,β) with its 𝒞/𝒮/ℬ parts and bounds.
    Discrepancy,
    /// nD_n* and the Pinner bound.
    Dstar,
    /// Renormalized values against the oracle.
    Verify,
    /// Finite-horizon discrepancy ratios.
    Experiment,
}

const KEYS: &[&str] = &["alpha", "beta", "n", "n-max", "grid", "depth", "out", "decimals", "jobs"];

/// Merges a `--config` file into the argument list: config values first, so flags win.
pub fn expand_args(args: Vec<String>) -> CliResult<Vec<String>> {
    let mut path = None;
    let mut i = 1;
    while i < args.len() {
        if args[i] == "--config" {
            path = args.get(i + 1).cloned();
        } else if let Some(p) = args[i].strip_prefix("--config=") {
            path = Some(p.to_string());
        }
        i += 1;
    }
    let Some(path) = path else { return Ok(args) };
    let text = std::fs::read_to_string(&path)?;
    let mut command = None;
    let mut extra = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| CliError::Usage(format!("{path}:{}: expected key = value", lineno + 1)))?;
        let (k, v) = (k.trim().replace('_', "-"), v.trim().to_string());
        if k == "command" {
            command = Some(v);
        } else if KEYS.contains(&k.as_str()) {
            extra.push(format!("--{k}"));
            extra.push(v);
        } else {
            return Err(CliError::Usage(format!("{path}:{}: unknown key '{k}'", lineno + 1)));
        }
    }
    let has_command = args.iter().skip(1).any(|a| COMMANDS.contains(&a.as_str()));
    let mut out = vec![args[0].clone()];
    if !has_command {
        if let Some(c) = command {
            out.push(c);
        }
    }
    out.extend(extra);
    out.extend(args.into_iter().skip(1));
    Ok(out)
}

const COMMANDS: &[&str] = &["expand", "sequences", "beta", "walk", "discrepancy", "dstar", "verify", "experiment"];

struct Ctx<'a> {
    cfg: &'a RunConfig,
    angle: AngleDescriptor,
    field: std::sync::Arc<Field>,
}

struct Csv {
    buf: String,
    decimals: Option<usize>,
}

impl Csv {
    fn new(header: &[&str], decimal_cols: &[&str], decimals: Option<usize>) -> Csv {
        let mut buf = header.join(",");
        if decimals.is_some() {
            for c in decimal_cols {
                let _ = write!(buf, ",{c}_dec");
            }
        }
        buf.push('\n');
        Csv { buf, decimals }
    }

    fn row(&mut self, cells: &[String], exact: &[&Elem]) {
        self.buf.push_str(&cells.join(","));
        if let Some(k) = self.decimals {
            for e in exact {
                let _ = write!(self.buf, ",{:.*}", k, e.to_f64());
            }
        }
        self.buf.push('\n');
    }
}

fn quote(s: String) -> String {
    if s.contains(',') {
        format!("\"{s}\"")
    } else {
        s
    }
}

fn parse_grid(spec: &str) -> CliResult<Vec<u128>> {
    let parts: Vec<&str> = spec.split(':').collect();
    let bad = || CliError::Core(Error::Parse(format!("grid '{spec}' must be start:stop:step")));
    if parts.len() != 3 {
        return Err(bad());
    }
    let nums: Vec<u128> = parts.iter().map(|p| p.trim().parse::<u128>()).collect::<Result<_, _>>().map_err(|_| bad())?;
    let (start, stop, step) = (nums[0], nums[1], nums[2]);
    if step == 0 || stop < start {
        return Err(bad());
    }
    Ok((start..=stop).step_by(step as usize).collect())
}

impl Ctx<'_> {
    fn horizons(&self, default_n: u128) -> CliResult<Vec<u128>> {
        if let Some(g) = &self.cfg.grid {
            return parse_grid(g);
        }
        Ok(vec![self.cfg.n.unwrap_or(default_n)])
    }

    fn beta(&self) -> CliResult<Option<Elem>> {
        match &self.cfg.beta {
            Some(b) => Ok(Some(parse_beta(b)?.to_elem(&self.field)?)),
            None => Ok(None),
        }
    }

    fn need_beta(&self) -> CliResult<Elem> {
        self.beta()?.ok_or_else(|| CliError::Usage("--beta is required".into()))
    }
}

/// Runs one command and returns the CSV text.
pub fn run(cfg: &RunConfig) -> CliResult<String> {
    let alpha = cfg.alpha.as_deref().ok_or_else(|| CliError::Usage("--alpha is required".into()))?;
    let angle = parse_angle(alpha)?;
    let field = Field::new(&angle);
    let ctx = Ctx { cfg, angle, field };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.jobs.unwrap_or(0))
        .build()
        .map_err(|e| CliError::Usage(e.to_string()))?;
    pool.install(|| match cfg.command {
        Command::Expand => expand_cmd(&ctx),
        Command::Sequences => sequences_cmd(&ctx),
        Command::Beta => beta_cmd(&ctx),
        Command::Walk => walk_cmd(&ctx),
        Command::Discrepancy => discrepancy_cmd(&ctx),
        Command::Dstar => dstar_cmd(&ctx),
        Command::Verify => verify_cmd(&ctx),
        Command::Experiment => experiment_cmd(&ctx),
    })
}

fn expand_cmd(ctx: &Ctx) -> CliResult<String> {
    let depth = ctx.cfg.depth.unwrap_or(10);
    let table = convergent_table(&ctx.angle, depth.max(1))?;
    let mut csv = Csv::new(&["h", "a_h", "p_h", "q_h", "f_h"], &["f_h"], ctx.cfg.decimals);
    for h in 0..=depth {
        let a = if h == 0 { String::new() } else { table.a(h).to_string() };
        let f = table.f_elem(&ctx.field, h as i64);
        csv.row(&[h.to_string(), a, table.p(h).to_string(), table.q(h).to_string(), quote(f.render())], &[&f]);
    }
    Ok(csv.buf)
}

fn sequences_cmd(ctx: &Ctx) -> CliResult<String> {
    let k_max = ctx.cfg.n.unwrap_or(20) as usize;
    let rs = ReturnStructure::new(&ctx.angle)?;
    let num = Numeration::new(&ctx.angle, 1 << 20)?;
    let mut out = String::from("k,t_k,r_k,peak,j,gap\n");
    let mut j = 0u128;
    for k in 0..k_max {
        let r = rs.r_value(k)?;
        let t = rs.t_value(k)?;
        let peak = num.is_return_peak(r)? || r == 0;
        let (jcol, gcol) = if peak {
            let g = if j == 0 { String::new() } else { gap(j, &ctx.angle)?.to_string() };
            let s = (j.to_string(), g);
            j += 1;
            s
        } else {
            (String::new(), String::new())
        };
        let _ = writeln!(out, "{k},{t},{r},{},{jcol},{gcol}", u8::from(peak));
    }
    Ok(out)
}

fn beta_cmd(ctx: &Ctx) -> CliResult<String> {
    let beta = ctx.need_beta()?;
    let depth = ctx.cfg.depth.unwrap_or(10);
    let e = crate::beta_expansion::expand(&beta, &ctx.angle, depth)?;
    e.verify_digits()?;
    let mut csv = Csv::new(&["k", "b_k", "f_k", "beta_k"], &["beta_k"], ctx.cfg.decimals);
    for k in 0..depth {
        let r = e.remainder(k);
        csv.row(&[k.to_string(), e.coeff(k).to_string(), quote(e.f(k as i64).render()), quote(r.render())], &[r]);
    }
    Ok(csv.buf)
}

fn walk_cmd(ctx: &Ctx) -> CliResult<String> {
    let n = ctx.cfg.n.ok_or_else(|| CliError::Usage("--n is required".into()))?;
    let walker = Walker::new(&ctx.angle)?;
    let beta = ctx.beta()?;
    let values: Vec<i64> = (0..=n)
        .into_par_iter()
        .map(|m| match &beta {
            Some(b) => walk_general_with(&walker, m, b),
            None => walker.walk(m),
        })
        .collect::<Result<_, _>>()?;
    let mut out = String::from("n,S_n,running_max,running_min\n");
    let (mut mx, mut mn) = (i64::MIN, i64::MAX);
    for (m, s) in values.iter().enumerate() {
        mx = mx.max(*s);
        mn = mn.min(*s);
        let _ = writeln!(out, "{m},{s},{mx},{mn}");
    }
    Ok(out)
}

fn discrepancy_cmd(ctx: &Ctx) -> CliResult<String> {
    let beta = ctx.need_beta()?;
    let ev = Evaluator::new(&ctx.angle)?;
    let ns = ctx.horizons(1)?;
    let rows: Vec<_> = ns
        .par_iter()
        .map(|&n| -> CliResult<_> { Ok((n, ev.d_rel(n, &beta)?, disc_bounds(n, &ctx.angle)?)) })
        .collect::<CliResult<_>>()?;
    let mut csv = Csv::new(
        &["n", "beta", "d", "C", "S", "B", "bound_C", "bound_S", "bound_B"],
        &["d", "C", "S", "B"],
        ctx.cfg.decimals,
    );
    for (n, d, b) in rows {
        csv.row(
            &[
                n.to_string(),
                quote(beta.render()),
                quote(d.value.render()),
                quote(d.c_part.render()),
                quote(d.s_part.render()),
                quote(d.b_part.render()),
                b.bound_c.to_string(),
                b.bound_s.to_string(),
                b.bound_b.to_string(),
            ],
            &[&d.value, &d.c_part, &d.s_part, &d.b_part],
        );
    }
    Ok(csv.buf)
}

fn dstar_cmd(ctx: &Ctx) -> CliResult<String> {
    let ns = ctx.horizons(1)?;
    let top = *ns.iter().max().unwrap();
    if ns.contains(&0) {
        return Err(CliError::Usage("horizons must be ≥ 1".into()));
    }
    let series = d_star_series(top, &ctx.angle)?;
    let mut csv = Csv::new(&["n", "n_dstar", "pinner_bound"], &["n_dstar"], ctx.cfg.decimals);
    for n in ns {
        let v = &series[n as usize - 1];
        csv.row(&[n.to_string(), quote(v.render()), pinner_bound(n, &ctx.angle)?.to_string()], &[v]);
    }
    Ok(csv.buf)
}

fn experiment_cmd(ctx: &Ctx) -> CliResult<String> {
    let grid = match &ctx.cfg.grid {
        Some(g) => parse_grid(g)?,
        None => vec![10, 100, 1000],
    };
    let rows = asymptotic_report(&ctx.angle, &grid)?;
    let mut out = String::from("n,n_dstar,order,sum_a,ratio,normalized,ell_e,ell_o\n");
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{:.6},{:.6},{:.6},{:.6}",
            r.n,
            quote(r.n_dstar.render()),
            r.order,
            r.sum_a,
            r.ratio,
            r.normalized,
            r.ell_e,
            r.ell_o
        );
    }
    Ok(out)
}

/// Offsets used by `verify` when none is given.
fn verify_betas(field: &std::sync::Arc<Field>) -> crate::error::Result<Vec<Elem>> {
    let mut out: Vec<Elem> = (1..10).map(|i| field.ratio(i, 10)).collect();
    for k in 1..=3 {
        out.push(field.alpha().mul_int(k).frac()?);
    }
    Ok(out)
}

fn verify_cmd(ctx: &Ctx) -> CliResult<String> {
    let n_max = ctx.cfg.n_max.or(ctx.cfg.n).unwrap_or(1000);
    let angle = &ctx.angle;
    let mut out = String::from("check,cases,mismatches\n");
    let mut failures = Vec::new();
    let mut record = |name: &str, cases: usize, bad: usize, out: &mut String| {
        let _ = writeln!(out, "{name},{cases},{bad}");
        if bad > 0 {
            failures.push(name.to_string());
        }
    };

    let walker = Walker::new(angle)?;
    let series = oracle_walk_series(n_max, angle, None)?;
    let bad = (0..=n_max)
        .into_par_iter()
        .map(|n| walker.walk(n).map(|s| usize::from(s != series[n as usize])))
        .sum::<crate::error::Result<usize>>()?;
    record("walk_zero", n_max as usize + 1, bad, &mut out);

    let mut bad = 0;
    let (mut mx, mut mn) = (i64::MIN, i64::MAX);
    for r in 0..=n_max {
        mx = mx.max(series[r as usize]);
        mn = mn.min(series[r as usize]);
        let e = walker.extrema(r)?;
        bad += usize::from((e.max, e.min) != (mx, mn));
    }
    record("extrema", n_max as usize + 1, bad, &mut out);

    let betas = match ctx.beta()? {
        Some(b) => vec![b],
        None => verify_betas(&ctx.field)?,
    };
    let ev = Evaluator::from_stage(walker.root().clone());
    let (mut cases, mut bad_d, mut bad_g) = (0, 0, 0);
    for beta in &betas {
        let drel = oracle_drel_series(n_max, angle, beta, false)?;
        let walks = oracle_walk_series(n_max, angle, Some(beta))?;
        let res: Vec<(bool, bool)> = (1..=n_max)
            .into_par_iter()
            .map(|n| -> crate::error::Result<(bool, bool)> {
                let d = ev.d_rel(n, beta)?;
                let parts = &(&d.c_part + &d.s_part) + &d.b_part;
                let ok_d = d.value.exact_eq(&drel[n as usize]) && parts.exact_eq(&d.value);
                let ok_g = walk_general_with(&walker, n, beta)? == walks[n as usize];
                Ok((ok_d, ok_g))
            })
            .collect::<crate::error::Result<_>>()?;
        cases += res.len();
        bad_d += res.iter().filter(|r| !r.0).count();
        bad_g += res.iter().filter(|r| !r.1).count();
    }
    record("d_rel", cases, bad_d, &mut out);
    record("walk_general", cases, bad_g, &mut out);

    let k_max = 2000usize;
    let (t, r) = oracle_return_structure(k_max, angle)?;
    let rs = ReturnStructure::new(angle)?;
    let num = Numeration::new(angle, r[k_max - 1] + 1)?;
    let a1 = angle.quotient(1)?;
    let mut bad = 0;
    for k in 0..k_max {
        bad += usize::from(rs.t_value(k)? != t[k] || rs.r_value(k)? != r[k]);
        bad += usize::from(num.is_rk(r[k])? != true);
        if k > 0 {
            bad += usize::from(num.is_return_peak(r[k])? != (t[k] == a1 + 1));
        }
    }
    record("return_structure", k_max, bad, &mut out);

    let top = n_max.min(150);
    let ds = d_star_series(top, angle)?;
    let mut bad = 0;
    for n in 1..=top {
        bad += usize::from(!ds[n as usize - 1].exact_eq(&oracle_dstar(n, angle)?));
    }
    record("d_star", top as usize, bad, &mut out);

    if failures.is_empty() {
        Ok(out)
    } else {
        eprint!("{out}");
        Err(CliError::Mismatch(failures.join(", ")))
    }
}

pub fn emit(cfg: &RunConfig, text: &str) -> CliResult<()> {
    match &cfg.out {
        Some(path) => std::fs::write(path, text)?,
        None => std::io::stdout().write_all(text.as_bytes())?,
    }
    Ok(())
}

/// Parses the process arguments, runs, and returns the exit status.
pub fn main_with_args(args: Vec<String>) -> i32 {
    let args = match expand_args(args) {
        Ok(a) => a,
        Err(e) => {
            eprintln!("error: {e}");
            return e.exit_code();
        }
    };
    let cfg = match RunConfig::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match run(&cfg).and_then(|text| emit(&cfg, &text)) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
