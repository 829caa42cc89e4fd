//! Monte Carlo estimation of percolation probabilities, `p_c(n, H)` and `ℓ(H)`.
//!
//! Trial `i` of a run seeded with `seed` draws its graph from stream
//! `seed.stream(i)`. In [`SamplingMode::Coupled`] (the default) the same
//! uniforms are reused at every edge probability, so each trial percolates
//! exactly for `p` above its own critical value. That value is found once per
//! trial by binary search over the trial's edges sorted by uniform, after
//! which the bisection for `p_c` reads the empirical curve without further
//! sampling; the outcome is identical to re-thresholding every trial at every
//! bisection midpoint. [`SamplingMode::Independent`] draws fresh graphs at
//! every level from `seed.fork(level)`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::closure::ClosureEngine;
use crate::graph::{Graph, PairUniforms};
use crate::seed::{Seed, RNG_NAME};
use crate::stats::{self, Interval, LinearFit};
use crate::template::Template;

pub const DEFAULT_TRIALS_PER_LEVEL: usize = 200;
pub const DEFAULT_LEVELS: usize = 15;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EstimateError {
    #[error("at least one trial is required")]
    NoTrials,
    #[error("at least one bisection level is required")]
    NoLevels,
    #[error("edge probability {0} is outside [0, 1]")]
    Probability(f64),
    #[error("bracket failure at n = {n}: estimate {estimate} at p = 1 is below 1/2")]
    Bracket { n: usize, estimate: f64 },
    #[error("need at least 3 strictly increasing sizes, got {0:?}")]
    SizeList(Vec<usize>),
    #[error("cannot fit a line through the estimates")]
    DegenerateFit,
}

/// A property of graphs that is preserved by adding edges.
pub trait MonotoneProperty: Sync {
    fn holds(&self, g: &Graph) -> bool;
}

/// `⟨G⟩_H = K_n`.
pub struct Percolation<'t>(pub ClosureEngine<'t>);

impl<'t> Percolation<'t> {
    pub fn new(template: &'t Template) -> Self {
        Percolation(ClosureEngine::new(template))
    }
}

impl MonotoneProperty for Percolation<'_> {
    fn holds(&self, g: &Graph) -> bool {
        self.0.percolates(g)
    }
}

pub struct Connectivity;

impl MonotoneProperty for Connectivity {
    fn holds(&self, g: &Graph) -> bool {
        g.is_connected()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SamplingMode {
    #[default]
    Coupled,
    Independent,
}

impl std::str::FromStr for SamplingMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "coupled" => Ok(SamplingMode::Coupled),
            "independent" => Ok(SamplingMode::Independent),
            other => Err(format!("unknown sampling mode {other:?} (expected coupled or independent)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PcConfig {
    pub trials_per_level: usize,
    pub levels: usize,
    pub mode: SamplingMode,
}

impl Default for PcConfig {
    fn default() -> Self {
        PcConfig {
            trials_per_level: DEFAULT_TRIALS_PER_LEVEL,
            levels: DEFAULT_LEVELS,
            mode: SamplingMode::Coupled,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProbabilityEstimate {
    pub successes: u64,
    pub trials: u64,
    pub estimate: f64,
    pub ci: Interval,
}

impl ProbabilityEstimate {
    fn new(successes: u64, trials: u64) -> Self {
        ProbabilityEstimate {
            successes,
            trials,
            estimate: successes as f64 / trials as f64,
            ci: stats::wilson95(successes, trials),
        }
    }
}

/// One bisection midpoint.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Level {
    pub p: f64,
    pub successes: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PcEstimate {
    pub n: usize,
    pub template: String,
    pub p_hat: f64,
    /// Edge probabilities at which `1/2` lies inside the Wilson 95% interval
    /// of the estimated percolation probability.
    pub ci: Interval,
    pub trials_per_level: usize,
    pub bisection_levels: usize,
    pub mode: SamplingMode,
    pub seed: Seed,
    pub rng_name: String,
    pub trace: Vec<Level>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EllEstimate {
    pub template: String,
    /// `-slope`
    pub ell_hat: f64,
    pub slope: f64,
    pub intercept: f64,
    /// RMS residual of `ln p_hat` against `ln n`.
    pub residual: f64,
    pub points: Vec<(usize, f64)>,
    pub estimates: Vec<PcEstimate>,
}

fn check_p(p: f64) -> Result<(), EstimateError> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(EstimateError::Probability(p))
    }
}

/// Fraction of `trials` samples of `G(n, p)` (trial `i` from `seed.stream(i)`)
/// with the property.
pub fn property_probability(n: usize, property: &dyn MonotoneProperty, p: f64, trials: usize, seed: Seed) -> Result<ProbabilityEstimate, EstimateError> {
    if trials == 0 {
        return Err(EstimateError::NoTrials);
    }
    check_p(p)?;
    let successes = (0..trials as u64)
        .into_par_iter()
        .filter(|&i| {
            let g = Graph::sample_gnp(n, p, seed.stream(i)).expect("p checked");
            property.holds(&g)
        })
        .count() as u64;
    Ok(ProbabilityEstimate::new(successes, trials as u64))
}

pub fn percolation_probability(n: usize, h: &Template, p: f64, trials: usize, seed: Seed) -> Result<ProbabilityEstimate, EstimateError> {
    property_probability(n, &Percolation::new(h), p, trials, seed)
}

/// Smallest `p` threshold of one coupled trial: the trial has the property at
/// `p` iff `p > critical value`. `-∞` if the edgeless graph already has it,
/// `+∞` if even `K_n` does not.
pub fn critical_value(n: usize, property: &dyn MonotoneProperty, seed: Seed) -> f64 {
    let uniforms = PairUniforms::sample(n, seed);
    let total = uniforms.pairs();
    if !property.holds(&uniforms.prefix_graph(total)) {
        return f64::INFINITY;
    }
    if property.holds(&uniforms.prefix_graph(0)) {
        return f64::NEG_INFINITY;
    }
    // holds(prefix(lo)) is false, holds(prefix(hi)) is true
    let (mut lo, mut hi) = (0, total);
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if property.holds(&uniforms.prefix_graph(mid)) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    uniforms.nth(hi - 1).0
}

/// Stochastic bisection for the `1/2` crossing on `[n^-2, 1]`.
pub fn estimate_property_threshold(n: usize, property: &dyn MonotoneProperty, label: &str, config: PcConfig, seed: Seed) -> Result<PcEstimate, EstimateError> {
    let trials = config.trials_per_level;
    if trials == 0 {
        return Err(EstimateError::NoTrials);
    }
    if config.levels == 0 {
        return Err(EstimateError::NoLevels);
    }
    let floor = 1.0 / (n.max(1) as f64).powi(2);
    let (trace, ci) = match config.mode {
        SamplingMode::Coupled => {
            let mut crit: Vec<f64> = (0..trials as u64)
                .into_par_iter()
                .map(|i| critical_value(n, property, seed.stream(i)))
                .collect();
            crit.sort_by(f64::total_cmp);
            let count_below = |p: f64| crit.partition_point(|&c| c < p) as u64;
            let at_one = count_below(1.0);
            if 2 * at_one < trials as u64 {
                return Err(EstimateError::Bracket {
                    n,
                    estimate: at_one as f64 / trials as f64,
                });
            }
            let trace = bisect(floor, config.levels, |p| count_below(p), trials as u64);
            (trace, coupled_interval(&crit, floor))
        }
        SamplingMode::Independent => {
            if !property.holds(&Graph::complete(n)) {
                return Err(EstimateError::Bracket { n, estimate: 0.0 });
            }
            let mut level = 0u64;
            let trace = bisect(floor, config.levels, |p| {
                let est = property_probability(n, property, p, trials, seed.fork(level)).expect("arguments checked");
                level += 1;
                est.successes
            }, trials as u64);
            (trace.clone(), probe_interval(&trace, trials as u64, floor))
        }
    };
    let (lo, hi) = final_bracket(&trace, floor, trials as u64);
    let p_hat = 0.5 * (lo + hi);
    let ci = Interval {
        lo: ci.lo.min(p_hat),
        hi: ci.hi.max(p_hat),
    };
    Ok(PcEstimate {
        n,
        template: label.to_string(),
        p_hat,
        ci,
        trials_per_level: trials,
        bisection_levels: config.levels,
        mode: config.mode,
        seed,
        rng_name: RNG_NAME.to_string(),
        trace,
    })
}

pub fn estimate_pc(n: usize, h: &Template, config: PcConfig, seed: Seed) -> Result<PcEstimate, EstimateError> {
    estimate_property_threshold(n, &Percolation::new(h), h.id(), config, seed)
}

fn bisect(floor: f64, levels: usize, mut successes_at: impl FnMut(f64) -> u64, trials: u64) -> Vec<Level> {
    let (mut lo, mut hi) = (floor, 1.0);
    let mut trace = Vec::with_capacity(levels);
    for _ in 0..levels {
        let p = 0.5 * (lo + hi);
        let successes = successes_at(p);
        if 2 * successes >= trials {
            hi = p;
        } else {
            lo = p;
        }
        trace.push(Level { p, successes });
    }
    trace
}

fn final_bracket(trace: &[Level], floor: f64, trials: u64) -> (f64, f64) {
    let (mut lo, mut hi) = (floor, 1.0);
    for level in trace {
        if 2 * level.successes >= trials {
            hi = level.p;
        } else {
            lo = level.p;
        }
    }
    (lo, hi)
}

/// `{p : 1/2 ∈ Wilson(P̂(p))}` for the empirical curve `P̂(p) = #{c < p} / T`.
fn coupled_interval(sorted_crit: &[f64], floor: f64) -> Interval {
    let t = sorted_crit.len();
    let plausible = |count: usize| stats::wilson95(count as u64, t as u64).contains(0.5);
    // P̂ is constant on (c_(j), c_(j+1)] with value j / T (1-based order statistics).
    let first = (0..=t).find(|&j| plausible(j));
    let last = (0..=t).rev().find(|&j| plausible(j));
    match (first, last) {
        (Some(a), Some(b)) => {
            let lo = if a == 0 { floor } else { sorted_crit[a - 1] };
            let hi = if b == t { 1.0 } else { sorted_crit[b] };
            Interval {
                lo: lo.clamp(floor, 1.0),
                hi: hi.clamp(floor, 1.0),
            }
        }
        _ => Interval { lo: floor, hi: 1.0 },
    }
}

/// Closest probed levels confidently below / above the `1/2` crossing.
fn probe_interval(trace: &[Level], trials: u64, floor: f64) -> Interval {
    let mut lo = floor;
    let mut hi = 1.0f64;
    for level in trace {
        let w = stats::wilson95(level.successes, trials);
        if w.hi < 0.5 {
            lo = lo.max(level.p);
        } else if w.lo > 0.5 {
            hi = hi.min(level.p);
        }
    }
    Interval { lo, hi }
}

/// Least-squares slope of `ln p_hat` against `ln n`; `ℓ̂ = -slope`.
pub fn estimate_ell(h: &Template, sizes: &[usize], config: PcConfig, seed: Seed) -> Result<EllEstimate, EstimateError> {
    if sizes.len() < 3 || sizes.windows(2).any(|w| w[0] >= w[1]) {
        return Err(EstimateError::SizeList(sizes.to_vec()));
    }
    let estimates = sizes
        .iter()
        .map(|&n| estimate_pc(n, h, config, seed.fork(n as u64)))
        .collect::<Result<Vec<_>, _>>()?;
    let points: Vec<(usize, f64)> = estimates.iter().map(|e| (e.n, e.p_hat)).collect();
    let fit = fit_exponent(&points)?;
    Ok(EllEstimate {
        template: h.id().to_string(),
        ell_hat: -fit.slope,
        slope: fit.slope,
        intercept: fit.intercept,
        residual: fit.rms_residual,
        points,
        estimates,
    })
}

pub fn fit_exponent(points: &[(usize, f64)]) -> Result<LinearFit, EstimateError> {
    let logs: Vec<(f64, f64)> = points.iter().map(|&(n, p)| ((n as f64).ln(), p.ln())).collect();
    stats::least_squares(&logs).ok_or(EstimateError::DegenerateFit)
}
