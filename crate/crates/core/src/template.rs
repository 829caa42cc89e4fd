//! Percolation templates and the anchored embedding search.
//!
//! Deciding whether a missing edge `{u, v}` completes a copy of `H` is a
//! subgraph-isomorphism search with one H-edge pinned to `{u, v}`. For every
//! oriented edge `(a, b)` of `H` (up to automorphism) a [`Plan`] fixes the
//! order in which the remaining H-vertices are placed: always the vertex with
//! the most already-placed neighbours, so candidate sets are intersections of
//! host adjacency rows.

use thiserror::Error;

use crate::bits;
use crate::graph::Graph;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TemplateError {
    #[error("template needs at least 2 vertices, got {0}")]
    TooFewVertices(usize),
}

#[derive(Debug, Clone)]
pub struct Template {
    id: String,
    graph: Graph,
    edges: Vec<(usize, usize)>,
    degrees: Vec<usize>,
    diameter_bound: Option<usize>,
    plans: Vec<Plan>,
}

impl Template {
    pub fn new(graph: Graph) -> Result<Self, TemplateError> {
        Template::with_id("custom", graph)
    }

    pub fn with_id(id: impl Into<String>, graph: Graph) -> Result<Self, TemplateError> {
        if graph.n() < 2 {
            return Err(TemplateError::TooFewVertices(graph.n()));
        }
        let edges: Vec<_> = graph.edges().collect();
        let degrees = (0..graph.n()).map(|v| graph.degree(v)).collect();
        let diameter_bound = graph.diameter();
        let plans = orbit_plans(&graph, &edges);
        Ok(Template {
            id: id.into(),
            graph,
            edges,
            degrees,
            diameter_bound,
            plans,
        })
    }

    pub fn clique(k: usize) -> Result<Self, TemplateError> {
        Template::with_id(format!("clique{k}"), Graph::complete(k))
    }

    pub fn cycle(k: usize) -> Result<Self, TemplateError> {
        Template::with_id(format!("cycle{k}"), Graph::cycle(k))
    }

    pub fn path(k: usize) -> Result<Self, TemplateError> {
        Template::with_id(format!("path{k}"), Graph::path(k))
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    /// `v_H`
    pub fn vertex_count(&self) -> usize {
        self.graph.n()
    }

    /// `e_H`
    pub fn edge_count(&self) -> usize {
        self.graph.m()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn degrees(&self) -> &[usize] {
        &self.degrees
    }

    pub fn min_degree(&self) -> usize {
        self.degrees.iter().copied().min().unwrap_or(0)
    }

    /// Diameter of `H`; `None` when `H` is disconnected.
    pub fn diameter_bound(&self) -> Option<usize> {
        self.diameter_bound
    }

    pub(crate) fn plans(&self) -> &[Plan] {
        &self.plans
    }

    /// Number of anchor orientations searched after automorphism reduction.
    pub fn anchor_orbits(&self) -> usize {
        self.plans.len()
    }
}

/// Placement order for one anchored orientation `(a, b)`.
#[derive(Debug, Clone)]
pub(crate) struct Plan {
    /// H-vertices in placement order; `seq[0] = a`, `seq[1] = b`.
    seq: Vec<usize>,
    /// For each position, earlier positions adjacent in `H`.
    back: Vec<Vec<usize>>,
    degree: Vec<usize>,
}

impl Plan {
    fn new(h: &Graph, a: usize, b: usize) -> Self {
        let k = h.n();
        let mut seq = vec![a, b];
        let mut placed = vec![false; k];
        placed[a] = true;
        placed[b] = true;
        while seq.len() < k {
            let next = (0..k)
                .filter(|&w| !placed[w])
                .max_by_key(|&w| {
                    let links = seq.iter().filter(|&&x| h.has_edge(x, w)).count();
                    (links, h.degree(w), std::cmp::Reverse(w))
                })
                .expect("unplaced vertex remains");
            placed[next] = true;
            seq.push(next);
        }
        let back = (0..k)
            .map(|i| (0..i).filter(|&j| h.has_edge(seq[j], seq[i])).collect())
            .collect();
        let degree = seq.iter().map(|&w| h.degree(w)).collect();
        Plan { seq, back, degree }
    }
}

/// One plan per orbit of oriented edges under `Aut(H)`.
fn orbit_plans(h: &Graph, edges: &[(usize, usize)]) -> Vec<Plan> {
    let mut reps: Vec<Plan> = Vec::new();
    let mut embedder = Embedder::default();
    for &(a, b) in edges {
        for (x, y) in [(a, b), (b, a)] {
            // (x, y) joins an existing orbit iff some automorphism maps the
            // representative's anchor onto it.
            let known = reps
                .iter()
                .any(|rep| embedder.embed(h, rep, x, y, false));
            if !known {
                reps.push(Plan::new(h, x, y));
            }
        }
    }
    reps
}

/// Reusable scratch space for anchored embedding searches.
#[derive(Debug, Default, Clone)]
pub(crate) struct Embedder {
    words: usize,
    cand: Vec<u64>,
    used: Vec<u64>,
    image: Vec<usize>,
}

impl Embedder {
    fn prepare(&mut self, words: usize, k: usize) {
        self.words = words;
        self.cand.clear();
        self.cand.resize(words * k, 0);
        self.used.clear();
        self.used.resize(words, 0);
        self.image.clear();
        self.image.resize(k, 0);
    }

    /// Tries to map `plan`'s H onto `host` with the anchor sent to `(u, v)`.
    /// Every H-edge other than the anchor must land on a host edge. When
    /// `anchor_missing` is set, `{u, v}` is treated as a virtual edge that is
    /// absent from `host`.
    pub(crate) fn embed(&mut self, host: &Graph, plan: &Plan, u: usize, v: usize, anchor_missing: bool) -> bool {
        let k = plan.seq.len();
        if k > host.n() {
            return false;
        }
        let bonus = usize::from(anchor_missing);
        if host.degree(u) + bonus < plan.degree[0] || host.degree(v) + bonus < plan.degree[1] {
            return false;
        }
        if !anchor_missing && !host.has_edge(u, v) {
            return false;
        }
        self.prepare(host.words(), k);
        self.image[0] = u;
        self.image[1] = v;
        bits::set(&mut self.used, u);
        bits::set(&mut self.used, v);
        self.extend(host, plan, 2)
    }

    fn extend(&mut self, host: &Graph, plan: &Plan, depth: usize) -> bool {
        if depth == plan.seq.len() {
            return true;
        }
        let w = self.words;
        let lo = depth * w;
        {
            let slot = &mut self.cand[lo..lo + w];
            let back = &plan.back[depth];
            if back.is_empty() {
                bits::fill_prefix(slot, host.n());
            } else {
                slot.copy_from_slice(host.row(self.image[back[0]]));
                for &j in &back[1..] {
                    for (s, r) in slot.iter_mut().zip(host.row(self.image[j])) {
                        *s &= r;
                    }
                }
            }
            for (s, used) in slot.iter_mut().zip(&self.used) {
                *s &= !used;
            }
        }
        let need = plan.degree[depth];
        for wi in 0..w {
            let mut word = self.cand[lo + wi];
            while word != 0 {
                let c = wi * bits::WORD_BITS + word.trailing_zeros() as usize;
                word &= word - 1;
                if host.degree(c) < need {
                    continue;
                }
                self.image[depth] = c;
                bits::set(&mut self.used, c);
                if self.extend(host, plan, depth + 1) {
                    bits::clear(&mut self.used, c);
                    return true;
                }
                bits::clear(&mut self.used, c);
            }
        }
        false
    }

    /// True iff `host + {u, v}` has a copy of `H` using `{u, v}`; `{u, v}` must be absent.
    pub(crate) fn completes(&mut self, host: &Graph, template: &Template, u: usize, v: usize) -> bool {
        template.plans().iter().any(|plan| self.embed(host, plan, u, v, true))
    }
}
