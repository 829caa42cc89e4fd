//! The H-closure `⟨G⟩_H`.
//!
//! Each round evaluates every missing edge against the same frozen graph and
//! adds all of those that complete a copy of `H`, so round `t` of the
//! result is exactly `G_t \ G_{t-1}`.
//!
//! Two strategies produce identical results:
//!
//! * [`Strategy::Baseline`] rescans every missing edge each round.
//! * [`Strategy::Worklist`] rescans, in round `t + 1`, only missing edges
//!   that could be completed by a copy using an edge added in round `t`.
//!   With `D` the diameter of `H`, such a copy puts both endpoints of the
//!   candidate within distance `D` of the new edge, or one endpoint within
//!   `D - 1` (when the shortest path of the other one runs through the
//!   candidate itself). Disconnected templates fall back to full rescans.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bits::{self, Ones};
use crate::graph::{Graph, GraphError};
use crate::template::{Embedder, Template};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ClosureError {
    #[error("{{{0}, {1}}} is already an edge")]
    EdgePresent(usize, usize),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Strategy {
    Baseline,
    #[default]
    Worklist,
}

impl std::str::FromStr for Strategy {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "baseline" => Ok(Strategy::Baseline),
            "worklist" => Ok(Strategy::Worklist),
            other => Err(format!("unknown strategy {other:?} (expected baseline or worklist)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClosureResult {
    pub final_graph: Graph,
    /// Edges added in each round, each list in lexicographic order.
    pub rounds: Vec<Vec<(usize, usize)>>,
    pub percolated: bool,
}

impl ClosureResult {
    pub fn added_edges(&self) -> usize {
        self.rounds.iter().map(Vec::len).sum()
    }
}

/// Closure runner for one template.
#[derive(Debug, Clone)]
pub struct ClosureEngine<'t> {
    template: &'t Template,
    strategy: Strategy,
    parallel: bool,
    per_edge_limit: Option<usize>,
}

impl<'t> ClosureEngine<'t> {
    pub fn new(template: &'t Template) -> Self {
        ClosureEngine {
            template,
            strategy: Strategy::default(),
            parallel: false,
            per_edge_limit: None,
        }
    }

    pub fn strategy(mut self, strategy: Strategy) -> Self {
        self.strategy = strategy;
        self
    }

    /// Scan each round's missing edges on the rayon pool.
    pub fn parallel(mut self, parallel: bool) -> Self {
        self.parallel = parallel;
        self
    }

    /// Worklist tuning: rounds adding at most this many edges get per-edge
    /// neighbourhoods; larger rounds use one neighbourhood of all endpoints.
    /// Defaults to `max(1, n / 8)`.
    pub fn per_edge_limit(mut self, limit: usize) -> Self {
        self.per_edge_limit = Some(limit);
        self
    }

    pub fn template(&self) -> &Template {
        self.template
    }

    pub fn run(&self, g: &Graph) -> ClosureResult {
        let mut rounds = Vec::new();
        let final_graph = self.drive(g, |added| rounds.push(added.to_vec()));
        let percolated = final_graph.is_complete();
        ClosureResult {
            final_graph,
            rounds,
            percolated,
        }
    }

    pub fn percolates(&self, g: &Graph) -> bool {
        self.drive(g, |_| ()).is_complete()
    }

    /// One parallel-update round against `g`.
    pub fn round(&self, g: &Graph) -> Vec<(usize, usize)> {
        self.scan(g, None)
    }

    fn drive(&self, g: &Graph, mut on_round: impl FnMut(&[(usize, usize)])) -> Graph {
        let mut current = g.clone();
        let radius = match self.strategy {
            Strategy::Baseline => None,
            Strategy::Worklist => self.template.diameter_bound(),
        };
        let mut dirty: Option<Dirty> = None;
        loop {
            if current.is_complete() {
                break;
            }
            let added = self.scan(&current, dirty.as_ref());
            if added.is_empty() {
                break;
            }
            for &(u, v) in &added {
                current.insert(u, v);
            }
            on_round(&added);
            if let Some(radius) = radius {
                let limit = self.per_edge_limit.unwrap_or((current.n() / 8).max(1));
                dirty = Some(Dirty::around(&current, &added, radius, limit));
            }
        }
        current
    }

    fn scan(&self, g: &Graph, dirty: Option<&Dirty>) -> Vec<(usize, usize)> {
        let n = g.n();
        let row = |embedder: &mut Embedder, u: usize| {
            let w = g.words();
            let mut mask = vec![0u64; w];
            bits::fill_prefix(&mut mask, n);
            // keep v > u
            for v in 0..=u.min(n.saturating_sub(1)) {
                bits::clear(&mut mask, v);
            }
            for (m, r) in mask.iter_mut().zip(g.row(u)) {
                *m &= !r;
            }
            if let Some(d) = dirty {
                d.restrict(u, &mut mask);
            }
            Ones::new(&mask)
                .filter(|&v| embedder.completes(g, self.template, u, v))
                .map(|v| (u, v))
                .collect::<Vec<_>>()
        };
        if self.parallel {
            (0..n)
                .into_par_iter()
                .map_init(Embedder::default, |e, u| row(e, u))
                .collect::<Vec<_>>()
                .concat()
        } else {
            let mut e = Embedder::default();
            (0..n).flat_map(|u| row(&mut e, u)).collect()
        }
    }
}

/// Pairs to re-examine in the next worklist round.
#[derive(Debug)]
struct Dirty {
    words: usize,
    /// `rows[u]` bit `v`: re-examine `{u, v}`.
    rows: Vec<u64>,
    /// Vertices whose every incident pair is re-examined.
    full: Vec<u64>,
}

impl Dirty {
    fn around(g: &Graph, added: &[(usize, usize)], radius: usize, per_edge_limit: usize) -> Self {
        let words = g.words();
        let n = g.n();
        let mut dirty = Dirty {
            words,
            rows: vec![0; n * words],
            full: vec![0; words],
        };
        let mut mark = |sources: &[usize]| {
            let (inner, outer) = balls(g, sources, radius);
            for (f, b) in dirty.full.iter_mut().zip(&inner) {
                *f |= b;
            }
            for u in Ones::new(&outer) {
                for (r, b) in dirty.rows[u * words..(u + 1) * words].iter_mut().zip(&outer) {
                    *r |= b;
                }
            }
        };
        if added.len() <= per_edge_limit {
            for &(x, y) in added {
                mark(&[x, y]);
            }
        } else {
            let mut ends: Vec<usize> = added.iter().flat_map(|&(x, y)| [x, y]).collect();
            ends.sort_unstable();
            ends.dedup();
            mark(&ends);
        }
        dirty
    }

    fn restrict(&self, u: usize, mask: &mut [u64]) {
        if bits::get(&self.full, u) {
            return;
        }
        let row = &self.rows[u * self.words..(u + 1) * self.words];
        for ((m, r), f) in mask.iter_mut().zip(row).zip(&self.full) {
            *m &= r | f;
        }
    }
}

/// Balls of radius `radius - 1` and `radius` around `sources`.
fn balls(g: &Graph, sources: &[usize], radius: usize) -> (Vec<u64>, Vec<u64>) {
    let words = g.words();
    let mut seen = vec![0u64; words];
    for &s in sources {
        bits::set(&mut seen, s);
    }
    let mut frontier = seen.clone();
    let mut inner = seen.clone();
    let mut next = vec![0u64; words];
    for level in 0..radius {
        if level + 1 == radius {
            inner.copy_from_slice(&seen);
        }
        if bits::is_empty(&frontier) {
            continue;
        }
        next.iter_mut().for_each(|w| *w = 0);
        for v in Ones::new(&frontier) {
            for (nw, rw) in next.iter_mut().zip(g.row(v)) {
                *nw |= rw;
            }
        }
        for (nw, sw) in next.iter_mut().zip(seen.iter_mut()) {
            *nw &= !*sw;
            *sw |= *nw;
        }
        std::mem::swap(&mut frontier, &mut next);
    }
    (inner, seen)
}

/// Whether `G + {u, v}` contains a copy of `H` that uses `{u, v}`.
pub fn edge_completes_copy(g: &Graph, h: &Template, u: usize, v: usize) -> Result<bool, ClosureError> {
    g.check_pair(u, v)?;
    if g.has_edge(u, v) {
        return Err(ClosureError::EdgePresent(u, v));
    }
    Ok(Embedder::default().completes(g, h, u, v))
}

/// One round: the updated graph and the edges it added.
pub fn evolve_round(g: &Graph, h: &Template) -> (Graph, Vec<(usize, usize)>) {
    let added = ClosureEngine::new(h).round(g);
    let mut next = g.clone();
    for &(u, v) in &added {
        next.insert(u, v);
    }
    (next, added)
}

pub fn closure(g: &Graph, h: &Template) -> ClosureResult {
    ClosureEngine::new(h).run(g)
}

pub fn percolates(g: &Graph, h: &Template) -> bool {
    ClosureEngine::new(h).percolates(g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seed::Seed;

    fn k4_plus_pendant() -> Graph {
        Graph::from_edges(5, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3), (3, 4)]).unwrap()
    }

    #[test]
    fn triangle_completion() {
        let k3 = Template::clique(3).unwrap();
        assert!(edge_completes_copy(&Graph::path(3), &k3, 0, 2).unwrap());
        assert!(!edge_completes_copy(&Graph::path(4), &k3, 0, 3).unwrap());
        assert_eq!(edge_completes_copy(&Graph::path(3), &k3, 0, 1), Err(ClosureError::EdgePresent(0, 1)));
        assert!(matches!(edge_completes_copy(&Graph::path(3), &k3, 1, 1), Err(ClosureError::Graph(GraphError::SelfLoop(1)))));
        assert!(edge_completes_copy(&Graph::path(3), &k3, 0, 9).is_err());
    }

    #[test]
    fn k4_in_k5_minus_edge() {
        let mut g = Graph::new(5);
        for (u, v) in Graph::complete(5).edges().filter(|&e| e != (0, 1)) {
            g.add_edge(u, v).unwrap();
        }
        let k4 = Template::clique(4).unwrap();
        assert!(edge_completes_copy(&g, &k4, 0, 1).unwrap());
        let r = closure(&g, &k4);
        assert!(r.percolated);
        assert_eq!(r.rounds, vec![vec![(0, 1)]]);
    }

    #[test]
    fn star_round_and_fixed_points() {
        let k3 = Template::clique(3).unwrap();
        let (g, added) = evolve_round(&Graph::star(3), &k3);
        assert_eq!(added, vec![(1, 2), (1, 3), (2, 3)]);
        assert_eq!(g, Graph::complete(4));

        let (_, added) = evolve_round(&Graph::complete(6), &Template::new(k4_plus_pendant()).unwrap());
        assert!(added.is_empty());

        let two = Graph::from_edges(6, &[(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)]).unwrap();
        assert!(evolve_round(&two, &k3).1.is_empty());
    }

    #[test]
    fn closures_of_small_graphs() {
        let k3 = Template::clique(3).unwrap();
        let r = closure(&Graph::path(5), &k3);
        assert_eq!(r.final_graph, Graph::complete(5));
        assert!(r.percolated);
        // Distances 2 → 1 doubles reach every round: 4 → 2 → 1.
        assert_eq!(r.rounds.len(), 2);

        let matching = Graph::from_edges(4, &[(0, 1), (2, 3)]).unwrap();
        let r = closure(&matching, &k3);
        assert_eq!(r.final_graph, matching);
        assert!(r.rounds.is_empty());
        assert!(!r.percolated);
    }

    #[test]
    fn percolation_examples() {
        let k3 = Template::clique(3).unwrap();
        let tree = Graph::from_edges(6, &[(0, 1), (0, 2), (2, 3), (2, 4), (4, 5)]).unwrap();
        assert!(percolates(&tree, &k3));
        assert!(!percolates(&Graph::new(4), &k3));
        for h in [Template::clique(5).unwrap(), Template::cycle(7).unwrap(), Template::new(k4_plus_pendant()).unwrap()] {
            assert!(percolates(&Graph::complete(7), &h));
        }
    }

    #[test]
    fn template_larger_than_host_adds_nothing() {
        let r = closure(&Graph::path(4), &Template::clique(5).unwrap());
        assert!(r.rounds.is_empty());
    }

    #[test]
    fn degenerate_templates_are_literal() {
        // Single edge: every missing edge is itself a copy.
        let k2 = Template::clique(2).unwrap();
        let r = closure(&Graph::new(4), &k2);
        assert!(r.percolated);
        assert_eq!(r.rounds.len(), 1);
        // Edgeless template: no copy can use the new edge.
        let empty = Template::new(Graph::new(3)).unwrap();
        assert!(closure(&Graph::path(4), &empty).rounds.is_empty());
    }

    #[test]
    fn strategies_agree_on_random_graphs() {
        let templates = [
            Template::clique(3).unwrap(),
            Template::clique(4).unwrap(),
            Template::cycle(4).unwrap(),
            Template::cycle(5).unwrap(),
            Template::path(4).unwrap(),
            Template::new(k4_plus_pendant()).unwrap(),
        ];
        for i in 0..60u64 {
            let n = 6 + (i % 20) as usize;
            let g = Graph::sample_gnp(n, 0.15 + 0.05 * (i % 5) as f64, Seed::new(4).stream(i)).unwrap();
            let h = &templates[i as usize % templates.len()];
            let base = ClosureEngine::new(h).strategy(Strategy::Baseline).run(&g);
            for limit in [0, 1, usize::MAX] {
                let wl = ClosureEngine::new(h).strategy(Strategy::Worklist).per_edge_limit(limit).run(&g);
                assert_eq!(base, wl, "template {} instance {i} limit {limit}", h.id());
            }
            let par = ClosureEngine::new(h).parallel(true).run(&g);
            assert_eq!(base, par);
        }
    }
}
