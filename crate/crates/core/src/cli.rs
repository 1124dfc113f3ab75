//! `heartlab` command line front end.
//!
//! Exit codes: `0` when every check passes, `1` on a verified counterexample,
//! `2` on usage or input errors. Values come from flags, then from the TOML
//! file given by `--config`, then from built-in defaults.

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Deserialize;
use serde_json::{json, Value};

use crate::borel_halves::{chain_report_to_json, positivity_report_to_json, BorelHalf, Window};
use crate::cartan_data::{CartanData, NodeSet};
use crate::chambers_fan::HeartDescriptor;
use crate::elliptic_lie::EllipticAlgebra;
use crate::error::{Error, Result};
use crate::lattices::{coweight_from_json, coweight_to_json, Coweight, FiniteCoweight};
use crate::preproj_reps::{Analysis, Rep, DEFAULT_DIM_CAP};
use crate::rational::{frac, parse_rational_list, to_f64, Rational};
use crate::stability::{CentralCharge, Interval};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
    Svg,
}

#[derive(Parser, Debug)]
#[command(name = "heartlab", version, about = "Exact checks on affine ADE heart fans, stability data and Borel halves")]
pub struct Cli {
    /// Affine Dynkin type, e.g. A2, D4, E6.
    #[arg(long = "type", global = true)]
    pub dynkin: Option<String>,
    /// Seed for sampled checks (default 0).
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Output path; stdout when absent.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, global = true)]
    pub format: Option<Format>,
    /// TOML file supplying defaults for any option.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// SVG of the wall arrangement on the slice (θ, δ) = 1 with located sample points.
    Fan(FanArgs),
    /// Maximal and minimal hearts whose cone contains θ.
    Locate(LocateArgs),
    /// Normalize a central charge, or sampled charges, and re-validate.
    Normalize(NormalizeArgs),
    /// Arc directions and chamber membership for a ϖ_J-ample λ̌.
    Arc(ArcArgs),
    /// HN filtration of a representation, or greedy-vs-exhaustive on samples.
    Hn(HnArgs),
    /// Chain, union, positivity and shear checks on Δ_J.
    Roots(RootsArgs),
    /// Graded characters of n⁺_{ell,J} two ways, plus the PBW degree-one slice.
    Char(CharArgs),
    /// Classical affine Yangian relations under the generator assignment.
    Ellcheck(EllArgs),
}

#[derive(Args, Debug, Default)]
pub struct FanArgs {
    /// Half-width of the viewport in slice coordinates.
    #[arg(long)]
    pub radius: Option<String>,
    #[arg(long)]
    pub samples: Option<usize>,
    /// Where to write sampled points; defaults to `<out>.points.json`.
    #[arg(long)]
    pub points: Option<PathBuf>,
}

#[derive(Args, Debug, Default)]
pub struct LocateArgs {
    /// Coweight: |I| entries over ω̌, or e entries over λ̌ with `--basis lambda`.
    #[arg(long, allow_hyphen_values = true)]
    pub theta: Option<String>,
    #[arg(long)]
    pub basis: Option<String>,
}

#[derive(Args, Debug, Default)]
pub struct NormalizeArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub theta: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub omega: Option<String>,
    /// `up` for (0,1], `down` for [0,1).
    #[arg(long)]
    pub interval: Option<String>,
    /// Number of random charges when θ, ω are not given.
    #[arg(long)]
    pub samples: Option<usize>,
}

#[derive(Args, Debug, Default)]
pub struct ArcArgs {
    #[arg(long = "J")]
    pub j: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub lambda: Option<String>,
    /// Inclusive range `a..b`.
    #[arg(long = "n", allow_hyphen_values = true)]
    pub n_range: Option<String>,
}

#[derive(Args, Debug, Default)]
pub struct HnArgs {
    /// Representation JSON file.
    #[arg(long)]
    pub rep: Option<PathBuf>,
    #[arg(long, allow_hyphen_values = true)]
    pub theta: Option<String>,
    /// Dimension vector for sampled representations.
    #[arg(long)]
    pub dim: Option<String>,
    #[arg(long)]
    pub p: Option<u32>,
    #[arg(long)]
    pub samples: Option<usize>,
}

#[derive(Args, Debug, Default)]
pub struct RootsArgs {
    #[arg(long = "J")]
    pub j: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub lambda: Option<String>,
    #[arg(long)]
    pub n_max: Option<i64>,
    #[arg(long)]
    pub k_max: Option<u32>,
}

#[derive(Args, Debug, Default)]
pub struct CharArgs {
    #[arg(long = "J")]
    pub j: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub lambda: Option<String>,
    #[arg(long)]
    pub n_max: Option<i64>,
    #[arg(long)]
    pub t_max: Option<i64>,
    /// Factor bound for the PBW table; 0 skips it.
    #[arg(long)]
    pub pbw_factors: Option<u32>,
}

#[derive(Args, Debug, Default)]
pub struct EllArgs {
    #[arg(long)]
    pub lmax: Option<i64>,
}

/// Defaults read from `--config`.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Config {
    #[serde(rename = "type")]
    pub dynkin: Option<String>,
    pub seed: Option<u64>,
    pub format: Option<Format>,
    #[serde(rename = "J")]
    pub j: Option<String>,
    pub lambda: Option<String>,
    pub theta: Option<String>,
    pub omega: Option<String>,
    pub basis: Option<String>,
    pub interval: Option<String>,
    pub n_range: Option<String>,
    pub n_max: Option<i64>,
    pub k_max: Option<u32>,
    pub t_max: Option<i64>,
    pub pbw_factors: Option<u32>,
    pub lmax: Option<i64>,
    pub p: Option<u32>,
    pub dim: Option<String>,
    pub samples: Option<usize>,
    pub radius: Option<String>,
    pub rep: Option<PathBuf>,
    /// Directory receiving outputs of relative `--out` paths.
    pub out_dir: Option<PathBuf>,
}

impl Config {
    pub fn load(path: &Path) -> Result<Config> {
        let text = fs::read_to_string(path)?;
        toml::from_str(&text).map_err(|e| Error::Config(format!("{}: {e}", path.display())))
    }
}

/// Outcome of a command: a report and whether every check passed.
pub struct Outcome {
    pub report: Value,
    pub ok: bool,
    /// Rendered non-JSON body (SVG, CSV) when the format asks for one.
    pub body: Option<String>,
}

struct Ctx {
    cd: CartanData,
    seed: u64,
    format: Format,
    cfg: Config,
}

fn pick<T: Clone>(flag: &Option<T>, cfg: &Option<T>) -> Option<T> {
    flag.clone().or_else(|| cfg.clone())
}

/// `"1,3"` → `{1, 3}`; empty string → `∅`.
pub fn parse_node_set(s: &str) -> Result<NodeSet> {
    s.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| t.parse::<usize>().map_err(|_| Error::Parse(format!("bad node index {t:?}"))))
        .collect()
}

/// Inclusive `a..b`.
pub fn parse_range(s: &str) -> Result<std::ops::RangeInclusive<i64>> {
    let bad = || Error::Parse(format!("range must look like a..b, got {s:?}"));
    let (a, b) = s.split_once("..").ok_or_else(bad)?;
    let a: i64 = a.trim().parse().map_err(|_| bad())?;
    let b: i64 = b.trim().parse().map_err(|_| bad())?;
    if a > b {
        return Err(bad());
    }
    Ok(a..=b)
}

/// `|I|` rationals over `ω̌`, or `e` rationals over `λ̌` (embedded at level zero)
/// when `basis` is `lambda`.
pub fn parse_coweight(cd: &CartanData, s: &str, basis: Option<&str>) -> Result<Coweight> {
    let v = parse_rational_list(s)?;
    match basis.unwrap_or("omega") {
        "omega" if v.len() == cd.num_nodes() => Ok(Coweight::new(v)),
        "lambda" if v.len() == cd.rank() => Ok(cd.embed_finite_coweight(&FiniteCoweight::new(v))),
        b => Err(Error::Parse(format!(
            "coweight {s:?} has {} entries; basis {b} needs {}",
            v.len(),
            if b == "lambda" { cd.rank() } else { cd.num_nodes() }
        ))),
    }
}

fn parse_finite(cd: &CartanData, s: &str) -> Result<FiniteCoweight> {
    let v = parse_rational_list(s)?;
    if v.len() != cd.rank() {
        return Err(Error::Parse(format!("λ̌ needs {} entries, got {}", cd.rank(), v.len())));
    }
    Ok(FiniteCoweight::new(v))
}

fn random_rational<R: Rng>(rng: &mut R, span: i64) -> Rational {
    frac(rng.gen_range(-span * 4..=span * 4), rng.gen_range(1..=4))
}

fn random_coweight<R: Rng>(cd: &CartanData, rng: &mut R, span: i64) -> Coweight {
    Coweight::new((0..cd.num_nodes()).map(|_| random_rational(rng, span)).collect())
}

/// Parses arguments and runs; returns the process exit code.
pub fn main() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match run(cli) {
        Ok(true) => 0,
        Ok(false) => 1,
        Err(e) => {
            eprintln!("heartlab: {e}");
            2
        }
    }
}

/// Runs a parsed command line; `Ok(false)` means a check failed.
pub fn run(cli: Cli) -> Result<bool> {
    let cfg = match &cli.config {
        Some(p) => Config::load(p)?,
        None => Config::default(),
    };
    let dynkin = pick(&cli.dynkin, &cfg.dynkin).ok_or_else(|| Error::Config("--type is required".into()))?;
    let cd = CartanData::from_name(&dynkin)?;
    let ctx = Ctx {
        cd,
        seed: pick(&cli.seed, &cfg.seed).unwrap_or(0),
        format: pick(&cli.format, &cfg.format).unwrap_or(if matches!(cli.command, Command::Fan(_)) {
            Format::Svg
        } else {
            Format::Json
        }),
        cfg,
    };
    let out = cli.out.map(|p| match (&ctx.cfg.out_dir, p.is_relative()) {
        (Some(dir), true) => dir.join(p),
        _ => p,
    });
    let outcome = match &cli.command {
        Command::Fan(a) => cmd_fan(&ctx, a, out.as_deref())?,
        Command::Locate(a) => cmd_locate(&ctx, a)?,
        Command::Normalize(a) => cmd_normalize(&ctx, a)?,
        Command::Arc(a) => cmd_arc(&ctx, a)?,
        Command::Hn(a) => cmd_hn(&ctx, a)?,
        Command::Roots(a) => cmd_roots(&ctx, a)?,
        Command::Char(a) => cmd_char(&ctx, a)?,
        Command::Ellcheck(a) => cmd_ellcheck(&ctx, a)?,
    };
    let text = match (&outcome.body, ctx.format) {
        (Some(b), Format::Svg | Format::Csv) => b.clone(),
        _ => serde_json::to_string_pretty(&outcome.report)? + "\n",
    };
    match &out {
        Some(p) => {
            if let Some(dir) = p.parent().filter(|d| !d.as_os_str().is_empty()) {
                fs::create_dir_all(dir)?;
            }
            fs::write(p, text)?;
        }
        None => print!("{text}"),
    }
    Ok(outcome.ok)
}

fn descriptor_json(d: &HeartDescriptor) -> Result<Value> {
    Ok(serde_json::to_value(d)?)
}

fn cmd_locate(ctx: &Ctx, a: &LocateArgs) -> Result<Outcome> {
    let s = pick(&a.theta, &ctx.cfg.theta).ok_or_else(|| Error::Config("--theta is required".into()))?;
    let basis = pick(&a.basis, &ctx.cfg.basis);
    let theta = parse_coweight(&ctx.cd, &s, basis.as_deref())?;
    let (up, low) = ctx.cd.locate_heart_cone(&theta)?;
    let ok = up.contains(&ctx.cd, &theta) && low.contains(&ctx.cd, &theta);
    let report = json!({
        "type": ctx.cd.dynkin().to_string(),
        "theta": coweight_to_json(&theta),
        "upper": descriptor_json(&up)?,
        "lower": descriptor_json(&low)?,
        "contains": ok,
    });
    Ok(Outcome { report, ok, body: None })
}

fn parse_interval(s: &str) -> Result<Interval> {
    match s {
        "up" => Ok(Interval::HalfOpenUp),
        "down" => Ok(Interval::HalfOpenDown),
        _ => Err(Error::Parse(format!("interval must be up or down, got {s:?}"))),
    }
}

fn cmd_normalize(ctx: &Ctx, a: &NormalizeArgs) -> Result<Outcome> {
    let interval = parse_interval(&pick(&a.interval, &ctx.cfg.interval).unwrap_or_else(|| "up".into()))?;
    // a config θ without ω is meant for `locate`; take the config pair only whole
    let (theta, omega) = match (&a.theta, &a.omega) {
        (None, None) if ctx.cfg.omega.is_some() => (ctx.cfg.theta.clone(), ctx.cfg.omega.clone()),
        (None, None) => (None, None),
        (t, o) => (t.clone(), o.clone()),
    };
    let cd = &ctx.cd;
    let mut charges = Vec::new();
    match (theta, omega) {
        (Some(t), Some(o)) => charges.push(CentralCharge::new(parse_coweight(cd, &t, None)?, parse_coweight(cd, &o, None)?)),
        (None, None) => {
            let n = pick(&a.samples, &ctx.cfg.samples).unwrap_or(50);
            let mut rng = ChaCha8Rng::seed_from_u64(ctx.seed);
            while charges.len() < n {
                let z = CentralCharge::new(random_coweight(cd, &mut rng, 3), random_coweight(cd, &mut rng, 3));
                if cd.in_hreg(&z) {
                    charges.push(z);
                }
            }
        }
        _ => return Err(Error::Config("give both --theta and --omega, or neither".into())),
    }
    let mut results = Vec::new();
    let mut ok = true;
    for z in &charges {
        let r = cd.normalize_stability(z, interval)?;
        let valid = cd.revalidate_normalization(&r, interval);
        ok &= valid;
        let mut j = r.to_json();
        j["revalidated"] = json!(valid);
        results.push(j);
    }
    Ok(Outcome { report: json!({"type": cd.dynkin().to_string(), "results": results, "ok": ok}), ok, body: None })
}

fn j_and_lambda(ctx: &Ctx, j: &Option<String>, lambda: &Option<String>) -> Result<(NodeSet, FiniteCoweight)> {
    let j = parse_node_set(&pick(j, &ctx.cfg.j).unwrap_or_default())?;
    ctx.cd.check_finite_subset(&j)?;
    let lambda = match pick(lambda, &ctx.cfg.lambda) {
        Some(s) => parse_finite(&ctx.cd, &s)?,
        None => FiniteCoweight::sum_over(ctx.cd.rank(), &j),
    };
    Ok((j, lambda))
}

fn cmd_arc(ctx: &Ctx, a: &ArcArgs) -> Result<Outcome> {
    let (j, lambda) = j_and_lambda(ctx, &a.j, &a.lambda)?;
    if j.is_empty() {
        return Err(Error::Config("arc needs a nonempty --J".into()));
    }
    let range = parse_range(&pick(&a.n_range, &ctx.cfg.n_range).unwrap_or_else(|| "-3..3".into()))?;
    let rep = ctx.cd.verify_slicing(&lambda, &j, range)?;
    let entries: Vec<Value> = rep.entries.iter().map(|e| e.to_json()).collect();
    let report = json!({
        "type": ctx.cd.dynkin().to_string(),
        "J": j,
        "entries": entries,
        "midpoint_ok": rep.midpoint_ok,
        "ok": rep.ok,
    });
    Ok(Outcome { report, ok: rep.ok, body: None })
}

fn cmd_hn(ctx: &Ctx, a: &HnArgs) -> Result<Outcome> {
    let cd = &ctx.cd;
    let theta = match pick(&a.theta, &ctx.cfg.theta) {
        Some(s) => parse_coweight(cd, &s, None)?,
        None => cd.rho(),
    };
    let rep_path = pick(&a.rep, &ctx.cfg.rep);
    let mut reps = Vec::new();
    if let Some(path) = rep_path {
        let v: Value = serde_json::from_str(&fs::read_to_string(path)?)?;
        reps.push(Rep::from_json(cd, &v)?);
    } else {
        let dim: Vec<usize> = pick(&a.dim, &ctx.cfg.dim)
            .ok_or_else(|| Error::Config("give --rep or --dim".into()))?
            .split(',')
            .map(|t| t.trim().parse().map_err(|_| Error::Parse(format!("bad dimension {t:?}"))))
            .collect::<Result<_>>()?;
        let p = pick(&a.p, &ctx.cfg.p).unwrap_or(2);
        let n = pick(&a.samples, &ctx.cfg.samples).unwrap_or(10);
        let mut rng = ChaCha8Rng::seed_from_u64(ctx.seed);
        for _ in 0..n {
            if let Some(r) = Rep::sample_valid(cd, p, dim.clone(), &mut rng, 200)? {
                reps.push(r);
            }
        }
    }
    let mut ok = true;
    let mut results = Vec::new();
    for rep in &reps {
        let an = Analysis::new(cd, rep, &theta, DEFAULT_DIM_CAP)?;
        let hn = an.hn_filtration()?;
        let chains = an.exhaustive_hn_chains()?;
        let decreasing = hn.slopes.windows(2).all(|w| w[0] > w[1]);
        let agrees = chains.len() == 1 && chains[0] == hn;
        ok &= decreasing && agrees;
        results.push(json!({
            "rep": rep.to_json(),
            "hn": hn.to_json(),
            "oracle_chains": chains.len(),
            "agrees": agrees,
            "strictly_decreasing": decreasing,
        }));
    }
    let report = json!({"type": cd.dynkin().to_string(), "theta": coweight_to_json(&theta), "results": results, "ok": ok});
    Ok(Outcome { report, ok, body: None })
}

/// Window roots of `Δ_J` as JSON, memoized under `HEARTLAB_CACHE_DIR` when set.
fn cached_delta_j(b: &BorelHalf, n_max: i64, key: &str) -> Result<Value> {
    let compute = || -> Value {
        let rows: Vec<Value> = b
            .window_roots(n_max)
            .into_iter()
            .filter(|r| b.in_delta_j(r))
            .map(|r| json!({"alpha": r.alpha().coords(), "n": r.level()}))
            .collect();
        Value::Array(rows)
    };
    let Ok(dir) = std::env::var("HEARTLAB_CACHE_DIR") else {
        return Ok(compute());
    };
    let path = Path::new(&dir).join(format!("delta_{key}.json"));
    if let Ok(text) = fs::read_to_string(&path) {
        if let Ok(v) = serde_json::from_str(&text) {
            return Ok(v);
        }
    }
    let v = compute();
    fs::create_dir_all(&dir)?;
    fs::write(&path, serde_json::to_string(&v)?)?;
    Ok(v)
}

fn cmd_roots(ctx: &Ctx, a: &RootsArgs) -> Result<Outcome> {
    let (j, lambda) = j_and_lambda(ctx, &a.j, &a.lambda)?;
    let b = BorelHalf::new(&ctx.cd, &j, &lambda)?;
    let n_max = pick(&a.n_max, &ctx.cfg.n_max).unwrap_or(6);
    let k_max = pick(&a.k_max, &ctx.cfg.k_max).unwrap_or(4);
    let chain = b.check_chain_and_union(k_max, n_max);
    let pos = b.positivity_axioms(n_max);
    let shear = b.shear_cross_check(k_max, n_max)?;
    let ok = chain.ok() && pos.ok() && shear.is_empty();
    let lam: Vec<String> = lambda.coords().iter().map(|x| x.to_string()).collect();
    let key = format!("{}_{:?}_{}_{}", ctx.cd.dynkin(), j, lam.join("_"), n_max).replace(['{', '}', ' ', ',', '/'], "");
    let roots = cached_delta_j(&b, n_max, &key)?;
    let body = (ctx.format == Format::Csv).then(|| {
        let mut s = String::from("alpha,n\n");
        for r in roots.as_array().into_iter().flatten() {
            let alpha: Vec<String> = r["alpha"].as_array().into_iter().flatten().map(|x| x.to_string()).collect();
            s.push_str(&format!("\"{}\",{}\n", alpha.join(" "), r["n"]));
        }
        s
    });
    let report = json!({
        "type": ctx.cd.dynkin().to_string(),
        "J": j,
        "n_max": n_max,
        "k_max": k_max,
        "chain": chain_report_to_json(&chain),
        "positivity": positivity_report_to_json(&pos),
        "shear_failures": shear,
        "delta_j": roots,
        "ok": ok,
    });
    Ok(Outcome { report, ok, body })
}

fn cmd_char(ctx: &Ctx, a: &CharArgs) -> Result<Outcome> {
    let (j, lambda) = j_and_lambda(ctx, &a.j, &a.lambda)?;
    let b = BorelHalf::new(&ctx.cd, &j, &lambda)?;
    let w = Window {
        n_max: pick(&a.n_max, &ctx.cfg.n_max).unwrap_or(4),
        t_max: pick(&a.t_max, &ctx.cfg.t_max).unwrap_or(2),
    };
    let (ta, tb, diff) = b.character_n_ell_j(w);
    let factors = pick(&a.pbw_factors, &ctx.cfg.pbw_factors).unwrap_or(0);
    let mut pbw_ok = true;
    let mut pbw = Value::Null;
    if factors > 0 {
        let t = b.pbw_character(None, w, factors)?;
        pbw_ok = t.degree_slice(1).entries == ta.entries;
        let unit = t.dim(&ctx.cd.zero_root(), 0) == 1;
        pbw_ok &= unit;
        pbw = json!({"max_factors": factors, "states": t.entries.len(), "degree_one_matches": pbw_ok});
    }
    let ok = diff.is_empty() && pbw_ok;
    let body = (ctx.format == Format::Csv).then(|| ta.to_csv());
    let report = json!({
        "type": ctx.cd.dynkin().to_string(),
        "J": j,
        "table_a": ta.to_json(),
        "tables_agree": diff.is_empty() && ta == tb,
        "mismatches": diff.iter().map(|(w, l)| json!({"weight": w, "t_degree": l})).collect::<Vec<_>>(),
        "pbw": pbw,
        "ok": ok,
    });
    Ok(Outcome { report, ok, body })
}

fn cmd_ellcheck(ctx: &Ctx, a: &EllArgs) -> Result<Outcome> {
    let l_max = pick(&a.lmax, &ctx.cfg.lmax).unwrap_or(2);
    let alg = EllipticAlgebra::new(&ctx.cd)?;
    let rep = alg.check_classical_relations(l_max)?;
    let mut report = rep.to_json();
    report["type"] = json!(ctx.cd.dynkin().to_string());
    report["l_max"] = json!(l_max);
    Ok(Outcome { report, ok: rep.ok(), body: None })
}

/// Euclidean images of the fundamental coweights `λ̌_i`: columns of `L⁻¹` for the
/// Cholesky factor `L` of the finite Cartan matrix, so `⟨λ̌_i, α̌_j⟩ = δ_ij`.
fn coweight_frame(cd: &CartanData) -> Vec<Vec<f64>> {
    let e = cd.rank();
    let a: Vec<Vec<f64>> = (1..=e).map(|i| (1..=e).map(|j| cd.a(i, j) as f64).collect()).collect();
    let mut l = vec![vec![0.0; e]; e];
    for i in 0..e {
        for j in 0..=i {
            let s: f64 = (0..j).map(|k| l[i][k] * l[j][k]).sum();
            l[i][j] = if i == j { (a[i][i] - s).sqrt() } else { (a[i][j] - s) / l[j][j] };
        }
    }
    // frame_i · root_j = δ_ij with roots the rows of L: forward substitution on L f = e_i
    let mut frame = vec![vec![0.0; e]; e];
    for (i, f) in frame.iter_mut().enumerate() {
        for r in 0..e {
            let rhs = if r == i { 1.0 } else { 0.0 };
            let s: f64 = (0..r).map(|k| l[r][k] * f[k]).sum();
            f[r] = (rhs - s) / l[r][r];
        }
    }
    frame
}

fn cmd_fan(ctx: &Ctx, a: &FanArgs, out: Option<&Path>) -> Result<Outcome> {
    let cd = &ctx.cd;
    let e = cd.rank();
    if e > 2 {
        return Err(Error::Precondition(format!("fan draws the slice for |I| ≤ 3 only, {} has |I| = {}", cd.dynkin(), e + 1)));
    }
    let radius = parse_rational_list(&pick(&a.radius, &ctx.cfg.radius).unwrap_or_else(|| "2".into()))?
        .first()
        .cloned()
        .filter(|r| r.is_positive())
        .ok_or_else(|| Error::Parse("--radius must be a positive rational".into()))?;
    let samples = pick(&a.samples, &ctx.cfg.samples).unwrap_or(40);
    let frame = coweight_frame(cd);
    let r = to_f64(&radius);
    let to_plane = |x: &[f64]| -> (f64, f64) {
        let mut p = [0.0, 0.0];
        for (i, xi) in x.iter().enumerate() {
            for (k, pk) in p.iter_mut().enumerate().take(e) {
                *pk += xi * frame[i][k];
            }
        }
        (p[0], p[1])
    };
    // slice point θ = ω̌_0 + embed(x): (θ, α + nδ) = (x, α) + n, so walls are (x, α) = −n
    let slice = |x: &[Rational]| -> Coweight {
        let mut t = cd.embed_finite_coweight(&FiniteCoweight::new(x.to_vec()));
        let mut c = t.coords().to_vec();
        c[0] += Rational::from_integer(1.into());
        t = Coweight::new(c);
        t
    };
    let mut rng = ChaCha8Rng::seed_from_u64(ctx.seed);
    let mut points = Vec::new();
    let mut ok = true;
    while points.len() < samples {
        let x: Vec<Rational> = (0..e).map(|_| random_rational(&mut rng, 2) * &radius / Rational::from_integer(2.into())).collect();
        let theta = slice(&x);
        let (up, low) = cd.locate_heart_cone(&theta)?;
        let contained = up.contains(cd, &theta) && low.contains(cd, &theta);
        ok &= contained;
        points.push((x, theta, up, low, contained));
    }
    let points_json: Vec<Value> = points
        .iter()
        .map(|(_, theta, up, low, c)| {
            json!({"theta": coweight_to_json(theta), "upper": up, "lower": low, "contains": c})
        })
        .collect();
    let scale = 200.0 / r;
    let (cx, cy) = (250.0, 250.0);
    let px = |p: (f64, f64)| (cx + p.0 * scale, cy - p.1 * scale);
    let mut svg = String::new();
    svg.push_str("<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"500\" height=\"500\" viewBox=\"0 0 500 500\">\n");
    svg.push_str("<rect x=\"0\" y=\"0\" width=\"500\" height=\"500\" fill=\"white\"/>\n");
    let nmax = (r * 3.0).ceil() as i64 + 2;
    let mut walls = 0usize;
    if e == 2 {
        // fundamental alcove: x_i ≥ 0, (x, φ) ≤ 1
        let phi = cd.highest_root();
        let corners = [vec![0.0, 0.0], vec![1.0 / phi[1] as f64, 0.0], vec![0.0, 1.0 / phi[2] as f64]];
        let pts: Vec<String> = corners.iter().map(|c| px(to_plane(c))).map(|(a, b)| format!("{a:.2},{b:.2}")).collect();
        svg.push_str(&format!("<path d=\"M {} Z\" fill=\"#f6e3b4\" stroke=\"none\"/>\n", pts.join(" L ")));
        for alpha in cd.positive_roots() {
            let c = [alpha[1] as f64, alpha[2] as f64];
            for n in -nmax..=nmax {
                // line {x : c·x = −n}, clipped to the square |x_plane| ≤ 1.2 r
                let Some(seg) = clip_line(&frame, &c, -(n as f64), 1.2 * r) else { continue };
                let (p, q) = (px(seg.0), px(seg.1));
                let colour = if n == 0 { "#b03030" } else { "#404040" };
                let width = if n == 0 { 1.6 } else { 0.8 };
                svg.push_str(&format!(
                    "<path d=\"M {:.2},{:.2} L {:.2},{:.2}\" stroke=\"{colour}\" stroke-width=\"{width}\"/>\n",
                    p.0, p.1, q.0, q.1
                ));
                walls += 1;
            }
        }
    } else {
        // rank one: the slice is a line, walls are marks at x = −n / (x, α_1) scale
        let y = cy;
        svg.push_str(&format!("<path d=\"M 20,{y} L 480,{y}\" stroke=\"#404040\" stroke-width=\"1\"/>\n"));
        for n in -nmax..=nmax {
            let x = -(n as f64) * frame[0][0];
            if x.abs() > 1.2 * r {
                continue;
            }
            let (a, _) = px((x, 0.0));
            let colour = if n == 0 { "#b03030" } else { "#404040" };
            svg.push_str(&format!("<path d=\"M {a:.2},{} L {a:.2},{}\" stroke=\"{colour}\" stroke-width=\"1.2\"/>\n", y - 12.0, y + 12.0));
            walls += 1;
        }
    }
    let palette = ["#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2", "#17becf"];
    for (x, _, up, _, _) in &points {
        let xf: Vec<f64> = x.iter().map(to_f64).collect();
        let (a, b) = px(to_plane(&xf));
        let colour = palette[up.word.len() % palette.len()];
        svg.push_str(&format!("<circle cx=\"{a:.2}\" cy=\"{b:.2}\" r=\"3\" fill=\"{colour}\"/>\n"));
    }
    svg.push_str("</svg>\n");
    let points_value = json!({"type": cd.dynkin().to_string(), "points": points_json});
    if ctx.format == Format::Svg {
        let path = a.points.clone().or_else(|| out.map(|o| o.with_extension("points.json")));
        if let Some(p) = path {
            fs::write(p, serde_json::to_string_pretty(&points_value)?)?;
        }
    }
    let report = json!({
        "type": cd.dynkin().to_string(),
        "walls": walls,
        "points": points_value["points"],
        "ok": ok,
    });
    Ok(Outcome { report, ok, body: Some(svg) })
}

/// Segment of `{x : c·x = d}` (finite coweight coordinates) inside the square
/// `|X|, |Y| ≤ half` of the plane picture.
fn clip_line(frame: &[Vec<f64>], c: &[f64; 2], d: f64, half: f64) -> Option<((f64, f64), (f64, f64))> {
    // plane point P = x_1 f_1 + x_2 f_2; invert the 2×2 frame to get x from P
    let (a11, a12, a21, a22) = (frame[0][0], frame[1][0], frame[0][1], frame[1][1]);
    let det = a11 * a22 - a12 * a21;
    // c·x as a linear form on P: x = M⁻¹ P
    let g = [(c[0] * a22 - c[1] * a21) / det, (-c[0] * a12 + c[1] * a11) / det];
    let mut pts = Vec::new();
    for &xv in &[-half, half] {
        if g[1].abs() > 1e-12 {
            let yv = (d - g[0] * xv) / g[1];
            if yv.abs() <= half + 1e-9 {
                pts.push((xv, yv));
            }
        }
    }
    for &yv in &[-half, half] {
        if g[0].abs() > 1e-12 {
            let xv = (d - g[1] * yv) / g[0];
            if xv.abs() <= half + 1e-9 {
                pts.push((xv, yv));
            }
        }
    }
    pts.sort_by(|p, q| p.partial_cmp(q).unwrap_or(std::cmp::Ordering::Equal));
    pts.dedup_by(|p, q| (p.0 - q.0).abs() < 1e-9 && (p.1 - q.1).abs() < 1e-9);
    (pts.len() >= 2).then(|| (pts[0], pts[pts.len() - 1]))
}

/// Re-locates every sampled point of a `fan` points file; returns the number
/// of points checked and the failures.
pub fn revalidate_fan_points(cd: &CartanData, points: &Value) -> Result<(usize, Vec<String>)> {
    let list = points["points"].as_array().ok_or_else(|| Error::Parse("points file needs a \"points\" list".into()))?;
    let mut bad = Vec::new();
    for (k, p) in list.iter().enumerate() {
        let theta = coweight_from_json(cd, &p["theta"])?;
        let up: HeartDescriptor = serde_json::from_value(p["upper"].clone())?;
        let low: HeartDescriptor = serde_json::from_value(p["lower"].clone())?;
        let (u2, l2) = cd.locate_heart_cone(&theta)?;
        if u2 != up || l2 != low || !up.contains(cd, &theta) || !low.contains(cd, &theta) {
            bad.push(format!("point {k}"));
        }
        if theta.pair(&cd.delta()).is_zero() {
            bad.push(format!("point {k} is off the slice"));
        }
    }
    Ok((list.len(), bad))
}
