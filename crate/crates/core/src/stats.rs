//! Small statistical helpers: Wilson intervals, binomial tails, least squares.

use serde::{Deserialize, Serialize};

/// Two-sided 95% standard normal quantile.
pub const Z95: f64 = 1.959_963_984_540_054;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }
}

/// Wilson score interval for `successes` out of `trials` at normal quantile `z`.
pub fn wilson(successes: u64, trials: u64, z: f64) -> Interval {
    assert!(trials > 0 && successes <= trials);
    let n = trials as f64;
    let p = successes as f64 / n;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let centre = (p + z2 / (2.0 * n)) / denom;
    let half = z * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    Interval {
        lo: if successes == 0 { 0.0 } else { (centre - half).max(0.0) },
        hi: if successes == trials { 1.0 } else { (centre + half).min(1.0) },
    }
}

pub fn wilson95(successes: u64, trials: u64) -> Interval {
    wilson(successes, trials, Z95)
}

/// `P(Bin(k, alpha) <= threshold)`.
///
/// Terms are accumulated directly while they stay representable and in log
/// space (log-sum-exp around the largest term) once any term would
/// underflow; both paths keep relative error near machine precision.
pub fn binomial_lower_tail(k: u64, alpha: f64, threshold: f64) -> f64 {
    assert!((0.0..=1.0).contains(&alpha), "alpha outside [0, 1]");
    if threshold < 0.0 {
        return 0.0;
    }
    let top = (threshold.floor() as u64).min(k);
    if top == k {
        return 1.0;
    }
    if alpha == 0.0 {
        return 1.0;
    }
    if alpha == 1.0 {
        return 0.0;
    }
    let log_a = alpha.ln();
    let log_b = (-alpha).ln_1p();
    let log_terms: Vec<f64> = (0..=top)
        .scan(0.0f64, |log_choose, j| {
            if j > 0 {
                *log_choose += ((k - j + 1) as f64).ln() - (j as f64).ln();
            }
            Some(*log_choose + j as f64 * log_a + (k - j) as f64 * log_b)
        })
        .collect();
    if k <= 1000 && top as f64 * log_a > -700.0 && k as f64 * log_b > -700.0 {
        // Direct path: coefficients below 2^53 are recovered exactly, and with
        // dyadic alpha every term is exact in binary.
        let mut choose = 1.0f64;
        let mut sum = neumaier::Sum::default();
        for j in 0..=top {
            if j > 0 {
                choose = choose * (k - j + 1) as f64 / j as f64;
                if choose < 9.007_199_254_740_992e15 {
                    choose = choose.round();
                }
            }
            sum.add(choose * alpha.powi(j as i32) * (1.0 - alpha).powi((k - j) as i32));
        }
        return sum.value().min(1.0);
    }
    let peak = log_terms.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let mut sum = neumaier::Sum::default();
    for t in &log_terms {
        sum.add((t - peak).exp());
    }
    (peak + sum.value().ln()).exp().min(1.0)
}

mod neumaier {
    #[derive(Default)]
    pub(super) struct Sum {
        sum: f64,
        comp: f64,
    }

    impl Sum {
        pub(super) fn add(&mut self, x: f64) {
            let t = self.sum + x;
            if self.sum.abs() >= x.abs() {
                self.comp += (self.sum - t) + x;
            } else {
                self.comp += (x - t) + self.sum;
            }
            self.sum = t;
        }

        pub(super) fn value(&self) -> f64 {
            self.sum + self.comp
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LinearFit {
    pub slope: f64,
    pub intercept: f64,
    /// Root-mean-square residual.
    pub rms_residual: f64,
}

/// Ordinary least squares `y ≈ intercept + slope·x`. Requires two distinct `x`.
pub fn least_squares(points: &[(f64, f64)]) -> Option<LinearFit> {
    let n = points.len() as f64;
    if points.len() < 2 {
        return None;
    }
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    if sxx == 0.0 {
        return None;
    }
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let rss: f64 = points.iter().map(|p| (p.1 - intercept - slope * p.0).powi(2)).sum();
    Some(LinearFit {
        slope,
        intercept,
        rms_residual: (rss / n).sqrt(),
    })
}
