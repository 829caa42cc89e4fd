use std::path::{Path, PathBuf};

use hperc::balance::DensityProfile;
use hperc::edge_list::serialize_pairs;
use hperc::experiments::{self, BalanceStats};
use hperc::threshold::{self, PcConfig, PcEstimate, SamplingMode};
use hperc::{ClosureEngine, Seed, Template, RNG_NAME};
use serde::Serialize;
use serde_json::json;

use crate::config::{self, RunConfig};
use crate::error::{CliError, Result};
use crate::output::{csv_bytes, json_bytes, write_atomic, Run, SCHEMA_VERSION};
use crate::spec::{self, gnp_template, parse_dynamics_template, parse_template, read_graph};
use crate::{AnalyzeArgs, CloseArgs, PcArgs, StatsArgs, SweepArgs};

/// Largest graph `close`, `pc` and `ell` accept without `--force`.
pub const CLOSURE_GUARD: usize = 5000;

fn emit(out: Option<&Path>, bytes: &[u8]) -> Result<()> {
    match out {
        Some(path) => write_atomic(path, bytes),
        None => {
            use std::io::Write;
            std::io::stdout().write_all(bytes).map_err(|e| CliError::io("stdout", e))
        }
    }
}

fn analyze_template(a: &AnalyzeArgs) -> Result<Template> {
    if let Some(path) = &a.file {
        let g = read_graph(path)?;
        return Ok(Template::with_id(path.display().to_string(), g)?);
    }
    if let Some(k) = a.clique {
        return Ok(Template::clique(k)?);
    }
    if let Some(k) = a.cycle {
        return Ok(Template::cycle(k)?);
    }
    if let Some(k) = a.path {
        return Ok(Template::path(k)?);
    }
    if let Some(g) = &a.gnp {
        let (k, alpha, seed) = spec::parse_gnp(g)?;
        return gnp_template(k, alpha, seed);
    }
    parse_template(a.template.as_deref().expect("clap requires one source"))
}

pub fn analyze(a: &AnalyzeArgs) -> Result<()> {
    let h = analyze_template(a)?;
    let report = DensityProfile::with_override(&h, a.force)?.report(h.id())?;
    emit(a.out.as_deref(), &json_bytes(&report))
}

#[derive(Debug, Serialize)]
struct CloseReport<'a> {
    schema_version: u32,
    n: usize,
    template: &'a str,
    initial_edges: usize,
    final_edges: usize,
    percolated: bool,
    round_count: usize,
    rounds: &'a [Vec<(usize, usize)>],
}

pub fn close(a: &CloseArgs) -> Result<()> {
    let g = read_graph(&a.init)?;
    if g.n() > CLOSURE_GUARD && !a.force {
        return Err(CliError::Guard(format!("graph has {} vertices, above the closure guard of {CLOSURE_GUARD}", g.n())));
    }
    let h = parse_dynamics_template(&a.template)?;
    let result = ClosureEngine::new(&h).strategy(a.strategy).parallel(true).run(&g);
    if let Some(dir) = &a.rounds_dir {
        for (t, added) in result.rounds.iter().enumerate() {
            write_atomic(&dir.join(format!("round-{:04}.el", t + 1)), serialize_pairs(g.n(), added).as_bytes())?;
        }
    }
    let report = CloseReport {
        schema_version: SCHEMA_VERSION,
        n: g.n(),
        template: h.id(),
        initial_edges: g.m(),
        final_edges: result.final_graph.m(),
        percolated: result.percolated,
        round_count: result.rounds.len(),
        rounds: &result.rounds,
    };
    emit(a.out.as_deref(), &json_bytes(&report))
}

fn require<T>(value: Option<T>, what: &str) -> Result<T> {
    value.ok_or_else(|| CliError::Usage(format!("missing {what} (flag or config)")))
}

fn out_dir(flag: &Option<PathBuf>, config: &RunConfig) -> PathBuf {
    flag.clone().or_else(|| config.output_dir.clone()).unwrap_or_else(|| PathBuf::from("."))
}

struct PcSettings {
    template: Template,
    spec: String,
    sizes: Vec<usize>,
    config: PcConfig,
    seed: u64,
    dir: PathBuf,
}

impl PcSettings {
    fn resolve(a: &PcArgs) -> Result<Self> {
        let c = config::load(a.config.as_deref())?;
        let spec = require(a.template.clone().or(c.template.clone()), "template")?;
        let sizes = if a.n.is_empty() { require(c.n_list.clone(), "n list")? } else { a.n.clone() };
        if sizes.is_empty() {
            return Err(CliError::Usage("the n list is empty".into()));
        }
        if let Some(&n) = sizes.iter().find(|&&n| n > CLOSURE_GUARD) {
            if !a.force {
                return Err(CliError::Guard(format!("n = {n} is above the closure guard of {CLOSURE_GUARD}")));
            }
        }
        let config = PcConfig {
            trials_per_level: a.trials.or(c.trials).unwrap_or(threshold::DEFAULT_TRIALS_PER_LEVEL),
            levels: a.levels.or(c.levels).unwrap_or(threshold::DEFAULT_LEVELS),
            mode: a.mode.or(c.mode).unwrap_or_default(),
        };
        let seed = require(a.seed.or(c.seed), "seed")?;
        let template = parse_dynamics_template(&spec)?;
        Ok(PcSettings {
            template,
            spec,
            sizes,
            config,
            seed,
            dir: out_dir(&a.out_dir, &c),
        })
    }

    fn args(&self, threads: Option<usize>) -> serde_json::Value {
        json!({
            "template": self.spec,
            "n_list": self.sizes,
            "trials": self.config.trials_per_level,
            "levels": self.config.levels,
            "mode": self.config.mode,
            "seed": self.seed,
            "output_dir": self.dir,
            "threads": threads,
        })
    }
}

const PC_HEADER: &[&str] = &["n", "p_hat", "ci_lo", "ci_hi", "trials", "levels", "mode", "template", "seed", "rng_name"];

#[derive(Debug, Serialize)]
struct PcRow<'a> {
    n: usize,
    p_hat: f64,
    ci_lo: f64,
    ci_hi: f64,
    trials: usize,
    levels: usize,
    mode: SamplingMode,
    template: &'a str,
    seed: u64,
    rng_name: &'a str,
}

fn pc_row(e: &PcEstimate, seed: u64) -> PcRow<'_> {
    PcRow {
        n: e.n,
        p_hat: e.p_hat,
        ci_lo: e.ci.lo,
        ci_hi: e.ci.hi,
        trials: e.trials_per_level,
        levels: e.bisection_levels,
        mode: e.mode,
        template: &e.template,
        seed,
        rng_name: &e.rng_name,
    }
}

fn report_written(paths: &[PathBuf]) {
    for p in paths {
        eprintln!("wrote {}", p.display());
    }
}

/// Size `n` is estimated on `Seed::new(seed).fork(n)`, as in `ell`.
pub fn pc(a: &PcArgs, threads: Option<usize>) -> Result<()> {
    let s = PcSettings::resolve(a)?;
    let mut run = Run::start("pc", s.args(threads), s.seed, &s.dir);
    let master = Seed::new(s.seed);
    let estimates = s
        .sizes
        .iter()
        .map(|&n| threshold::estimate_pc(n, &s.template, s.config, master.fork(n as u64)))
        .collect::<std::result::Result<Vec<_>, _>>()?;
    let rows: Vec<PcRow> = estimates.iter().map(|e| pc_row(e, s.seed)).collect();
    run.add("pc.csv", csv_bytes(PC_HEADER, &rows)?);
    report_written(&run.finish()?);
    Ok(())
}

#[derive(Debug, Serialize)]
struct EllOutput<'a> {
    schema_version: u32,
    template: &'a str,
    ell_hat: f64,
    slope: f64,
    intercept: f64,
    residual: f64,
    trials: usize,
    levels: usize,
    mode: SamplingMode,
    seed: u64,
    rng_name: &'a str,
    points: Vec<PcRow<'a>>,
}

pub fn ell(a: &PcArgs, threads: Option<usize>) -> Result<()> {
    let s = PcSettings::resolve(a)?;
    let mut run = Run::start("ell", s.args(threads), s.seed, &s.dir);
    let est = threshold::estimate_ell(&s.template, &s.sizes, s.config, Seed::new(s.seed))?;
    let points: Vec<PcRow> = est.estimates.iter().map(|e| pc_row(e, s.seed)).collect();
    run.add("ell.csv", csv_bytes(PC_HEADER, &points)?);
    let out = EllOutput {
        schema_version: SCHEMA_VERSION,
        template: &est.template,
        ell_hat: est.ell_hat,
        slope: est.slope,
        intercept: est.intercept,
        residual: est.residual,
        trials: s.config.trials_per_level,
        levels: s.config.levels,
        mode: s.config.mode,
        seed: s.seed,
        rng_name: RNG_NAME,
        points,
    };
    run.add("ell.json", json_bytes(&out));
    println!("ell_hat = {} (slope {}, rms residual {})", est.ell_hat, est.slope, est.residual);
    report_written(&run.finish()?);
    Ok(())
}

const DEFAULT_SAMPLES: usize = 1000;

const SWEEP_HEADER: &[&str] = &[
    "k",
    "alpha",
    "a_equivalent",
    "a_equivalent_log2",
    "frac_strictly_balanced",
    "ci_lo",
    "ci_hi",
    "samples",
    "seed",
    "rng_name",
];

#[derive(Debug, Serialize)]
struct SweepRow<'a> {
    k: usize,
    alpha: f64,
    a_equivalent: f64,
    a_equivalent_log2: f64,
    frac_strictly_balanced: f64,
    ci_lo: f64,
    ci_hi: f64,
    samples: usize,
    seed: u64,
    rng_name: &'a str,
}

/// Row `j` is sampled on `Seed::new(seed).fork(j)`.
pub fn sweep(a: &SweepArgs, threads: Option<usize>) -> Result<()> {
    let c = config::load(a.config.as_deref())?;
    let k = require(a.k.or(c.k), "k")?;
    let alphas = if a.alphas.is_empty() { require(c.alphas.clone(), "alphas")? } else { a.alphas.clone() };
    let samples = a.samples.or(c.samples).unwrap_or(DEFAULT_SAMPLES);
    let seed = require(a.seed.or(c.seed), "seed")?;
    let dir = out_dir(&a.out_dir, &c);
    let args = json!({
        "k": k,
        "alphas": alphas,
        "samples": samples,
        "seed": seed,
        "output_dir": dir,
        "threads": threads,
        "a_equivalent_log_base": "e",
        "a_equivalent_log2_log_base": "2",
    });
    let mut run = Run::start("sweep", args, seed, &dir);
    let rows = experiments::alpha_sweep(k, &alphas, samples, Seed::new(seed))?;
    let rows: Vec<SweepRow> = rows
        .iter()
        .map(|r| SweepRow {
            k: r.k,
            alpha: r.alpha,
            a_equivalent: r.a_equivalent,
            a_equivalent_log2: r.a_equivalent_log2,
            frac_strictly_balanced: r.frac_strictly_balanced,
            ci_lo: r.ci.lo,
            ci_hi: r.ci.hi,
            samples,
            seed,
            rng_name: RNG_NAME,
        })
        .collect();
    run.add("sweep.csv", csv_bytes(SWEEP_HEADER, &rows)?);
    report_written(&run.finish()?);
    Ok(())
}

#[derive(Debug, Serialize)]
struct StatsOutput<'a> {
    schema_version: u32,
    rng_name: &'a str,
    #[serde(flatten)]
    stats: &'a BalanceStats,
}

#[derive(Debug, Serialize)]
struct HistogramRow {
    v_f: usize,
    count: u64,
}

pub fn stats(a: &StatsArgs, threads: Option<usize>) -> Result<()> {
    let c = config::load(a.config.as_deref())?;
    let k = require(a.k.or(c.k), "k")?;
    let alpha = require(a.alpha.or(c.alpha), "alpha")?;
    let samples = a.samples.or(c.samples).unwrap_or(DEFAULT_SAMPLES);
    let seed = require(a.seed.or(c.seed), "seed")?;
    let dir = out_dir(&a.out_dir, &c);
    let args = json!({
        "k": k,
        "alpha": alpha,
        "samples": samples,
        "seed": seed,
        "output_dir": dir,
        "threads": threads,
    });
    let mut run = Run::start("stats", args, seed, &dir);
    let stats = experiments::sample_balance_stats(k, alpha, samples, Seed::new(seed))?;
    let out = StatsOutput {
        schema_version: SCHEMA_VERSION,
        rng_name: RNG_NAME,
        stats: &stats,
    };
    run.add("stats.json", json_bytes(&out));
    let rows: Vec<HistogramRow> = stats
        .witness_size_histogram
        .iter().map(|(&v_f, &count)| HistogramRow { v_f, count }).collect();
    run.add("witness_sizes.csv", csv_bytes(&["v_f", "count"], &rows)?);
    report_written(&run.finish()?);
    Ok(())
}
