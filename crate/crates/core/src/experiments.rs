//! Balance statistics of random templates `G(k, alpha)`.
//!
//! Sample `i` is drawn from `seed.stream(i)` and classified exactly by
//! [`DensityProfile`].

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::balance::{DensityProfile, ANALYSIS_GUARD};
use crate::graph::Graph;
use crate::seed::Seed;
use crate::stats::{self, Interval};
use crate::template::Template;

pub use crate::stats::binomial_lower_tail;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ExperimentError {
    #[error("k = {0} is outside 3..={ANALYSIS_GUARD}")]
    Size(usize),
    #[error("at least one sample is required")]
    NoSamples,
    #[error("alpha = {0} is outside (0, 1]")]
    Alpha(f64),
    #[error("template has {0} vertices; at least 4 are required")]
    TooFewVertices(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Class {
    StrictlyBalanced,
    BalancedNotStrict,
    Unbalanced,
}

/// Classification of one sampled template.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SampleOutcome {
    pub class: Class,
    /// Size of the first maximal-ratio witness when not strictly balanced.
    pub witness_size: Option<usize>,
    pub low_degree_vertex: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BalanceStats {
    pub k: usize,
    pub alpha: f64,
    pub samples: usize,
    pub strictly_balanced_count: u64,
    pub frac_strictly_balanced: f64,
    pub frac_balanced_not_strict: f64,
    pub frac_unbalanced: f64,
    pub witness_size_histogram: BTreeMap<usize, u64>,
    pub frac_with_low_degree_witness: f64,
    pub seed: Seed,
}

impl BalanceStats {
    pub fn strict_ci(&self) -> Interval {
        stats::wilson95(self.strictly_balanced_count, self.samples as u64)
    }

    /// Binomial standard error of `frac_strictly_balanced`.
    pub fn strict_standard_error(&self) -> f64 {
        let p = self.frac_strictly_balanced;
        (p * (1.0 - p) / self.samples as f64).sqrt()
    }

    /// Most frequent witness size, smallest on ties.
    pub fn histogram_mode(&self) -> Option<usize> {
        let top = self.witness_size_histogram.values().copied().max()?;
        self.witness_size_histogram.iter().find(|(_, &c)| c == top).map(|(&s, _)| s)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AlphaSweepRow {
    pub k: usize,
    pub alpha: f64,
    /// `alpha·k / ln k`
    pub a_equivalent: f64,
    /// `alpha·k / log2 k`
    pub a_equivalent_log2: f64,
    pub frac_strictly_balanced: f64,
    pub ci: Interval,
}

fn check_k(k: usize) -> Result<(), ExperimentError> {
    if (3..=ANALYSIS_GUARD).contains(&k) {
        Ok(())
    } else {
        Err(ExperimentError::Size(k))
    }
}

/// Classifies one graph on at least 3 vertices.
pub fn classify(g: &Graph) -> SampleOutcome {
    let profile = DensityProfile::of_graph(g, false).expect("size checked by caller");
    let (balanced, _) = profile.is_balanced().expect("at least 3 vertices");
    let (strict, witness) = profile.is_strictly_balanced().expect("at least 3 vertices");
    let class = match (strict, balanced) {
        (true, _) => Class::StrictlyBalanced,
        (false, true) => Class::BalancedNotStrict,
        (false, false) => Class::Unbalanced,
    };
    SampleOutcome {
        class,
        witness_size: witness.map(|w| w.size()),
        low_degree_vertex: low_degree_vertex(g),
    }
}

/// Per-sample outcomes, in sample order.
pub fn sample_outcomes(k: usize, alpha: f64, samples: usize, seed: Seed) -> Result<Vec<SampleOutcome>, ExperimentError> {
    check_k(k)?;
    if samples == 0 {
        return Err(ExperimentError::NoSamples);
    }
    if !(0.0..=1.0).contains(&alpha) {
        return Err(ExperimentError::Alpha(alpha));
    }
    Ok((0..samples as u64)
        .into_par_iter()
        .map(|i| classify(&Graph::sample_gnp(k, alpha, seed.stream(i)).expect("alpha checked")))
        .collect())
}

pub fn sample_balance_stats(k: usize, alpha: f64, samples: usize, seed: Seed) -> Result<BalanceStats, ExperimentError> {
    let outcomes = sample_outcomes(k, alpha, samples, seed)?;
    let mut counts = [0u64; 3];
    let mut histogram = BTreeMap::new();
    let mut low = 0u64;
    for o in &outcomes {
        counts[o.class as usize] += 1;
        if let Some(s) = o.witness_size {
            *histogram.entry(s).or_insert(0) += 1;
        }
        low += o.low_degree_vertex.is_some() as u64;
    }
    let frac = |c: u64| c as f64 / samples as f64;
    Ok(BalanceStats {
        k,
        alpha,
        samples,
        strictly_balanced_count: counts[0],
        frac_strictly_balanced: frac(counts[0]),
        frac_balanced_not_strict: frac(counts[1]),
        frac_unbalanced: frac(counts[2]),
        witness_size_histogram: histogram,
        frac_with_low_degree_witness: frac(low),
        seed,
    })
}

/// Smallest vertex whose removal leaves a subgraph denser than `λ` in the
/// sense `(e - deg(v) - 1) / (k - 3) > (e - 2) / (k - 2)`.
pub fn low_degree_witness(h: &Template) -> Result<Option<usize>, ExperimentError> {
    if h.vertex_count() < 4 {
        return Err(ExperimentError::TooFewVertices(h.vertex_count()));
    }
    Ok(low_degree_vertex(h.graph()))
}

fn low_degree_vertex(g: &Graph) -> Option<usize> {
    let k = g.n() as i64;
    if k < 4 {
        return None;
    }
    let e = g.m() as i64;
    (0..g.n()).find(|&v| (e - g.degree(v) as i64 - 1) * (k - 2) > (e - 2) * (k - 3))
}

pub fn alpha_sweep(k: usize, alphas: &[f64], samples: usize, seed: Seed) -> Result<Vec<AlphaSweepRow>, ExperimentError> {
    alphas
        .iter()
        .enumerate()
        .map(|(j, &alpha)| {
            if !(alpha > 0.0 && alpha <= 1.0) {
                return Err(ExperimentError::Alpha(alpha));
            }
            let stats = sample_balance_stats(k, alpha, samples, seed.fork(j as u64))?;
            let kf = k as f64;
            Ok(AlphaSweepRow {
                k,
                alpha,
                a_equivalent: alpha * kf / kf.ln(),
                a_equivalent_log2: alpha * kf / kf.log2(),
                frac_strictly_balanced: stats.frac_strictly_balanced,
                ci: stats.strict_ci(),
            })
        })
        .collect()
}

/// Sizes of the first maximal-ratio witness among samples that are not
/// strictly balanced.
pub fn witness_location_report(k: usize, alpha: f64, samples: usize, seed: Seed) -> Result<BTreeMap<usize, u64>, ExperimentError> {
    Ok(sample_balance_stats(k, alpha, samples, seed)?.witness_size_histogram)
}
