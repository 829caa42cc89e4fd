//! Balancedness of templates and the exponents `λ`, `λ*`.
//!
//! For a template `H` with `v` vertices and `e` edges,
//!
//! * `λ(H) = (e - 2) / (v - 2)`;
//! * `H` is balanced if `(e_F - 1) / (v_F - 2) <= λ(H)` for every subgraph `F`
//!   with `3 <= v_F < v`, and strictly balanced if the inequality is strict;
//! * `λ*(H) = min (e - e_F - 1) / (v - v_F)` over subgraphs with `2 <= v_F < v`.
//!
//! Both conditions are monotone in `e_F` for fixed `v_F`, so everything here
//! is derived from the densest induced subgraph of each size, held in a
//! [`DensityProfile`]. All comparisons are exact.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::fraction::Fraction;
use crate::graph::Graph;
use crate::template::Template;

/// Largest template analysed without an explicit override.
pub const ANALYSIS_GUARD: usize = 28;
/// Hard limit of the bitmask representation.
pub const ANALYSIS_LIMIT: usize = 64;
/// Up to this size the profile enumerates every vertex subset.
pub const EXHAUSTIVE_LIMIT: usize = 20;

pub const REPORT_SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BalanceError {
    #[error("template has {0} vertices; at least 3 are required")]
    TooFewVertices(usize),
    #[error("template has {v} vertices, above the analysis guard of {guard}; pass an override to proceed")]
    GuardExceeded { v: usize, guard: usize },
    #[error("template has {0} vertices; at most {ANALYSIS_LIMIT} are supported")]
    Unsupported(usize),
}

/// Densest induced subgraph of every size.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DensityProfile {
    v: usize,
    e: usize,
    min_degree: usize,
    /// `max_edges[s]` for `s = 0..=v`.
    max_edges: Vec<usize>,
    /// Lexicographically smallest subset attaining `max_edges[s]`.
    argmax: Vec<u64>,
}

/// A vertex subset whose induced subgraph violates strict balance.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub vertices: Vec<usize>,
    pub edges: usize,
    /// `(e_F - 1) / (v_F - 2)`
    pub ratio: Fraction,
}

impl Witness {
    pub fn size(&self) -> usize {
        self.vertices.len()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Minimizer {
    pub v_f: usize,
    pub e_f: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct EllBounds {
    pub lower: Option<Fraction>,
    pub upper: Option<Fraction>,
    pub exact: Option<Fraction>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BalanceReport {
    pub schema_version: u32,
    pub template: String,
    pub v: usize,
    pub e: usize,
    pub min_degree: usize,
    pub lambda: Fraction,
    pub lambda_star: Fraction,
    pub balanced: bool,
    pub strictly_balanced: bool,
    pub violating_witness: Option<Witness>,
    pub lambda_star_minimizers: Vec<Minimizer>,
    pub ell_lower: Option<Fraction>,
    pub ell_upper: Option<Fraction>,
    pub ell_exact: Option<Fraction>,
}

impl DensityProfile {
    /// Refuses templates above [`ANALYSIS_GUARD`] vertices.
    pub fn new(h: &Template) -> Result<Self, BalanceError> {
        DensityProfile::with_override(h, false)
    }

    pub fn with_override(h: &Template, force: bool) -> Result<Self, BalanceError> {
        DensityProfile::of_graph(h.graph(), force)
    }

    pub fn of_graph(g: &Graph, force: bool) -> Result<Self, BalanceError> {
        let v = g.n();
        if v > ANALYSIS_LIMIT {
            return Err(BalanceError::Unsupported(v));
        }
        if v > ANALYSIS_GUARD && !force {
            return Err(BalanceError::GuardExceeded { v, guard: ANALYSIS_GUARD });
        }
        let adj: Vec<u64> = (0..v).map(|u| g.neighbors(u).fold(0u64, |m, w| m | 1 << w)).collect();
        let (max_edges, argmax) = if v <= EXHAUSTIVE_LIMIT {
            exhaustive(&adj)
        } else {
            branch_and_bound(&adj)
        };
        Ok(DensityProfile {
            v,
            e: g.m(),
            min_degree: g.min_degree().unwrap_or(0),
            max_edges,
            argmax,
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.v
    }

    pub fn edge_count(&self) -> usize {
        self.e
    }

    /// Most edges induced by any `s` vertices; `None` for `s > v`.
    pub fn max_induced_edges(&self, s: usize) -> Option<usize> {
        self.max_edges.get(s).copied()
    }

    /// Lexicographically smallest `s`-subset attaining [`Self::max_induced_edges`].
    pub fn densest_subset(&self, s: usize) -> Option<Vec<usize>> {
        self.argmax.get(s).map(|&m| mask_vertices(m))
    }

    pub fn lambda(&self) -> Result<Fraction, BalanceError> {
        self.require_three()?;
        Ok(Fraction::new(self.e as i64 - 2, self.v as i64 - 2))
    }

    /// The subset with the largest `(e_F - 1) / (v_F - 2)` over `3 <= v_F < v`,
    /// ties broken towards the lexicographically smallest vertex list.
    pub fn max_ratio_subset(&self) -> Result<Option<Witness>, BalanceError> {
        self.require_three()?;
        let mut best: Option<(Fraction, u64, usize)> = None;
        for s in 3..self.v {
            let ratio = Fraction::new(self.max_edges[s] as i64 - 1, s as i64 - 2);
            let mask = self.argmax[s];
            let better = match best {
                None => true,
                Some((r, m, _)) => ratio > r || (ratio == r && lex_less(mask, m)),
            };
            if better {
                best = Some((ratio, mask, self.max_edges[s]));
            }
        }
        Ok(best.map(|(ratio, mask, edges)| Witness {
            vertices: mask_vertices(mask),
            edges,
            ratio,
        }))
    }

    /// `(balanced, witness)`; the witness is present iff some subset has
    /// ratio strictly above `λ`.
    pub fn is_balanced(&self) -> Result<(bool, Option<Witness>), BalanceError> {
        let lambda = self.lambda()?;
        Ok(match self.max_ratio_subset()? {
            Some(w) if w.ratio > lambda => (false, Some(w)),
            _ => (true, None),
        })
    }

    /// `(strictly balanced, witness)`; the witness is present iff some subset
    /// has ratio at least `λ`.
    pub fn is_strictly_balanced(&self) -> Result<(bool, Option<Witness>), BalanceError> {
        let lambda = self.lambda()?;
        Ok(match self.max_ratio_subset()? {
            Some(w) if w.ratio >= lambda => (false, Some(w)),
            _ => (true, None),
        })
    }

    /// `λ*` and every `(v_F, e_F)` attaining it.
    pub fn lambda_star(&self) -> Result<(Fraction, Vec<Minimizer>), BalanceError> {
        self.require_three()?;
        let cost = |s: usize| Fraction::new(self.e as i64 - self.max_edges[s] as i64 - 1, (self.v - s) as i64);
        let min = (2..self.v).map(cost).min().expect("v >= 3 gives a non-empty range");
        let minimizers = (2..self.v)
            .filter(|&s| cost(s) == min)
            .map(|s| Minimizer {
                v_f: s,
                e_f: self.max_edges[s],
            })
            .collect();
        Ok((min, minimizers))
    }

    /// Bounds on `ℓ(H)`:
    ///
    /// * `ℓ >= 1/λ` when `H` is balanced;
    /// * `ℓ <= 1/λ*` when `v >= 4`, the minimum degree is at least 2 and `λ* > 0`;
    /// * exact when both apply and agree.
    ///
    /// Bounds whose hypotheses fail (or whose reciprocal is undefined) are absent.
    pub fn ell_bounds(&self) -> Result<EllBounds, BalanceError> {
        let lambda = self.lambda()?;
        let (balanced, _) = self.is_balanced()?;
        let (lambda_star, _) = self.lambda_star()?;
        let lower = if balanced && lambda.is_positive() { lambda.recip() } else { None };
        let upper = if self.v >= 4 && self.min_degree >= 2 && lambda_star.is_positive() {
            lambda_star.recip()
        } else {
            None
        };
        let exact = match (lower, upper) {
            (Some(l), Some(u)) if l == u => Some(l),
            _ => None,
        };
        Ok(EllBounds { lower, upper, exact })
    }

    pub fn report(&self, template: &str) -> Result<BalanceReport, BalanceError> {
        let lambda = self.lambda()?;
        let (balanced, _) = self.is_balanced()?;
        let (strictly_balanced, violating_witness) = self.is_strictly_balanced()?;
        let (lambda_star, lambda_star_minimizers) = self.lambda_star()?;
        let ell = self.ell_bounds()?;
        Ok(BalanceReport {
            schema_version: REPORT_SCHEMA_VERSION,
            template: template.to_string(),
            v: self.v,
            e: self.e,
            min_degree: self.min_degree,
            lambda,
            lambda_star,
            balanced,
            strictly_balanced,
            violating_witness,
            lambda_star_minimizers,
            ell_lower: ell.lower,
            ell_upper: ell.upper,
            ell_exact: ell.exact,
        })
    }

    fn require_three(&self) -> Result<(), BalanceError> {
        if self.v < 3 {
            Err(BalanceError::TooFewVertices(self.v))
        } else {
            Ok(())
        }
    }
}

/// Full report for a template, honouring the size guard.
pub fn analyze(h: &Template, force: bool) -> Result<BalanceReport, BalanceError> {
    DensityProfile::with_override(h, force)?.report(h.id())
}

pub fn lambda(h: &Template) -> Result<Fraction, BalanceError> {
    if h.vertex_count() < 3 {
        return Err(BalanceError::TooFewVertices(h.vertex_count()));
    }
    Ok(Fraction::new(h.edge_count() as i64 - 2, h.vertex_count() as i64 - 2))
}

pub fn max_induced_edges(h: &Template, s: usize) -> Result<Option<usize>, BalanceError> {
    Ok(DensityProfile::new(h)?.max_induced_edges(s))
}

pub fn is_balanced(h: &Template) -> Result<(bool, Option<Witness>), BalanceError> {
    DensityProfile::new(h)?.is_balanced()
}

pub fn is_strictly_balanced(h: &Template) -> Result<(bool, Option<Witness>), BalanceError> {
    DensityProfile::new(h)?.is_strictly_balanced()
}

pub fn lambda_star(h: &Template) -> Result<(Fraction, Vec<Minimizer>), BalanceError> {
    DensityProfile::new(h)?.lambda_star()
}

pub fn ell_bounds(h: &Template) -> Result<EllBounds, BalanceError> {
    DensityProfile::new(h)?.ell_bounds()
}

pub(crate) fn mask_vertices(mut m: u64) -> Vec<usize> {
    let mut out = Vec::with_capacity(m.count_ones() as usize);
    while m != 0 {
        out.push(m.trailing_zeros() as usize);
        m &= m - 1;
    }
    out
}

/// Lexicographic order of the ascending vertex lists of two masks.
pub(crate) fn lex_less(mut a: u64, mut b: u64) -> bool {
    loop {
        match (a, b) {
            (0, 0) => return false,
            (0, _) => return true,
            (_, 0) => return false,
            _ => {
                let (x, y) = (a.trailing_zeros(), b.trailing_zeros());
                if x != y {
                    return x < y;
                }
                a &= a - 1;
                b &= b - 1;
            }
        }
    }
}

fn exhaustive(adj: &[u64]) -> (Vec<usize>, Vec<u64>) {
    let v = adj.len();
    let mut max_edges = vec![0usize; v + 1];
    let mut argmax = vec![u64::MAX; v + 1];
    let total = 1usize << v;
    let mut edges = vec![0u16; total];
    argmax[0] = 0;
    for mask in 1..total {
        let low = mask.trailing_zeros() as usize;
        let rest = mask & (mask - 1);
        let e = edges[rest] as usize + (adj[low] & rest as u64).count_ones() as usize;
        edges[mask] = e as u16;
        let s = mask.count_ones() as usize;
        let m = mask as u64;
        if argmax[s] == u64::MAX || e > max_edges[s] || (e == max_edges[s] && lex_less(m, argmax[s])) {
            max_edges[s] = e;
            argmax[s] = m;
        }
    }
    (max_edges, argmax)
}

fn branch_and_bound(adj: &[u64]) -> (Vec<usize>, Vec<u64>) {
    let v = adj.len();
    let mut max_edges = vec![0usize; v + 1];
    let mut argmax = vec![0u64; v + 1];
    for s in 0..=v {
        let mut search = DenseSearch {
            adj,
            target: s,
            cap: s * s.saturating_sub(1) / 2,
            best: None,
        };
        search.descend(0, 0, 0, 0);
        let (e, m) = search.best.expect("a subset of every size exists");
        max_edges[s] = e;
        argmax[s] = m;
    }
    (max_edges, argmax)
}

/// Include-first depth-first search over vertices in index order, which
/// visits `s`-subsets lexicographically; only strict improvements replace the
/// incumbent, so the result is the lexicographically first optimum.
struct DenseSearch<'a> {
    adj: &'a [u64],
    target: usize,
    cap: usize,
    best: Option<(usize, u64)>,
}

impl DenseSearch<'_> {
    fn descend(&mut self, next: usize, chosen: u64, size: usize, edges: usize) {
        if matches!(self.best, Some((b, _)) if b == self.cap) {
            return;
        }
        if size == self.target {
            if self.best.is_none_or(|(b, _)| edges > b) {
                self.best = Some((edges, chosen));
            }
            return;
        }
        let v = self.adj.len();
        let need = self.target - size;
        if v - next < need {
            return;
        }
        if let Some((b, _)) = self.best {
            if self.bound2(next, chosen, edges, need) <= 2 * b {
                return;
            }
        }
        let w = next;
        let gain = (self.adj[w] & chosen).count_ones() as usize;
        self.descend(next + 1, chosen | 1 << w, size + 1, edges + gain);
        self.descend(next + 1, chosen, size, edges);
    }

    /// Twice an upper bound on the edges of any completion.
    fn bound2(&self, next: usize, chosen: u64, edges: usize, need: usize) -> usize {
        let v = self.adj.len();
        let rest: u64 = if next >= 64 { 0 } else { (!0u64 << next) & low_mask(v) };
        let mut vals: Vec<usize> = (next..v)
            .map(|w| {
                let to_chosen = (self.adj[w] & chosen).count_ones() as usize;
                let to_rest = ((self.adj[w] & rest).count_ones() as usize).min(need - 1);
                2 * to_chosen + to_rest
            })
            .collect();
        vals.sort_unstable_by(|a, b| b.cmp(a));
        let bound = 2 * edges + vals[..need].iter().sum::<usize>();
        bound.min(2 * self.cap)
    }
}

fn low_mask(v: usize) -> u64 {
    if v >= 64 {
        u64::MAX
    } else {
        (1u64 << v) - 1
    }
}
