//! Simple undirected graphs stored as a dense symmetric bit matrix.
//!
//! Row `v` holds one bit per vertex; bit `u` is set iff `{u, v}` is an edge.
//! Common-neighbourhood queries are word-wise ANDs of two rows, which is the
//! primitive the embedding search and the closure scans are built on.

use rand::Rng;
use thiserror::Error;

use crate::bits::{self, Ones};
use crate::seed::Seed;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GraphError {
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("vertex {vertex} out of range for a graph on {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("edge probability {0} is outside [0, 1]")]
    Probability(f64),
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    n: usize,
    words: usize,
    rows: Vec<u64>,
    degrees: Vec<u32>,
    m: usize,
}

impl Graph {
    /// Edgeless graph on `n` vertices.
    pub fn new(n: usize) -> Self {
        let words = bits::words_for(n);
        Graph {
            n,
            words,
            rows: vec![0; n * words],
            degrees: vec![0; n],
            m: 0,
        }
    }

    pub fn complete(n: usize) -> Self {
        let mut g = Graph::new(n);
        for v in 0..n {
            let words = g.words;
            let row = &mut g.rows[v * words..(v + 1) * words];
            bits::fill_prefix(row, n);
            bits::clear(row, v);
            g.degrees[v] = n.saturating_sub(1) as u32;
        }
        g.m = n * n.saturating_sub(1) / 2;
        g
    }

    /// Cycle `0-1-…-(n-1)-0`. For `n < 3` this is the path on `n` vertices.
    pub fn cycle(n: usize) -> Self {
        let mut g = Graph::path(n);
        if n >= 3 {
            g.insert(0, n - 1);
        }
        g
    }

    pub fn path(n: usize) -> Self {
        let mut g = Graph::new(n);
        for v in 1..n {
            g.insert(v - 1, v);
        }
        g
    }

    /// Star with centre 0 and `leaves` leaves.
    pub fn star(leaves: usize) -> Self {
        let mut g = Graph::new(leaves + 1);
        for v in 1..=leaves {
            g.insert(0, v);
        }
        g
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self, GraphError> {
        let mut g = Graph::new(n);
        for &(u, v) in edges {
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    /// Erdős–Rényi `G(n, p)`.
    ///
    /// One uniform in `[0, 1)` is drawn per unordered pair in row-major order
    /// (`(0,1), (0,2), …, (1,2), …`) and the pair is an edge iff the uniform is
    /// below `p`. Samples at different `p` from the same seed are therefore
    /// nested.
    pub fn sample_gnp(n: usize, p: f64, seed: Seed) -> Result<Self, GraphError> {
        if !(0.0..=1.0).contains(&p) {
            return Err(GraphError::Probability(p));
        }
        let mut rng = seed.rng();
        let mut g = Graph::new(n);
        for u in 0..n {
            for v in u + 1..n {
                let x: f64 = rng.random();
                if x < p {
                    g.insert(u, v);
                }
            }
        }
        Ok(g)
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn m(&self) -> usize {
        self.m
    }

    #[inline]
    pub fn degree(&self, v: usize) -> usize {
        self.degrees[v] as usize
    }

    pub fn min_degree(&self) -> Option<usize> {
        self.degrees.iter().map(|&d| d as usize).min()
    }

    #[inline]
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n && v < self.n && bits::get(self.row(u), v)
    }

    pub fn is_complete(&self) -> bool {
        self.m == self.n * self.n.saturating_sub(1) / 2
    }

    /// Adds `{u, v}`. Returns whether the edge was new.
    pub fn add_edge(&mut self, u: usize, v: usize) -> Result<bool, GraphError> {
        self.check_pair(u, v)?;
        Ok(self.insert(u, v))
    }

    pub(crate) fn check_pair(&self, u: usize, v: usize) -> Result<(), GraphError> {
        for x in [u, v] {
            if x >= self.n {
                return Err(GraphError::VertexOutOfRange { vertex: x, n: self.n });
            }
        }
        if u == v {
            return Err(GraphError::SelfLoop(u));
        }
        Ok(())
    }

    /// Unchecked insert; caller guarantees `u != v`, both in range.
    pub(crate) fn insert(&mut self, u: usize, v: usize) -> bool {
        debug_assert!(u != v && u < self.n && v < self.n);
        if bits::get(self.row(u), v) {
            return false;
        }
        let w = self.words;
        bits::set(&mut self.rows[u * w..(u + 1) * w], v);
        bits::set(&mut self.rows[v * w..(v + 1) * w], u);
        self.degrees[u] += 1;
        self.degrees[v] += 1;
        self.m += 1;
        true
    }

    /// Neighbourhood bit row of `v`.
    #[inline]
    pub fn row(&self, v: usize) -> &[u64] {
        &self.rows[v * self.words..(v + 1) * self.words]
    }

    #[inline]
    pub(crate) fn words(&self) -> usize {
        self.words
    }

    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        Ones::new(self.row(v))
    }

    /// Edges `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n).flat_map(move |u| self.neighbors(u).filter(move |&v| v > u).map(move |v| (u, v)))
    }

    /// Missing pairs `(u, v)` with `u < v`, in lexicographic order.
    pub fn non_edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n).flat_map(move |u| (u + 1..self.n).filter(move |&v| !bits::get(self.row(u), v)).map(move |v| (u, v)))
    }

    /// Edgewise containment on the same vertex set.
    pub fn is_subgraph_of(&self, other: &Graph) -> bool {
        self.n == other.n && self.rows.iter().zip(&other.rows).all(|(a, b)| a & !b == 0)
    }

    /// Number of connected components (isolated vertices count).
    pub fn component_count(&self) -> usize {
        let mut seen = vec![0u64; self.words];
        let mut frontier = vec![0u64; self.words];
        let mut next = vec![0u64; self.words];
        let mut comps = 0;
        for s in 0..self.n {
            if bits::get(&seen, s) {
                continue;
            }
            comps += 1;
            frontier.iter_mut().for_each(|w| *w = 0);
            bits::set(&mut frontier, s);
            bits::set(&mut seen, s);
            while !bits::is_empty(&frontier) {
                next.iter_mut().for_each(|w| *w = 0);
                for v in Ones::new(&frontier) {
                    for (nw, rw) in next.iter_mut().zip(self.row(v)) {
                        *nw |= rw;
                    }
                }
                for (nw, sw) in next.iter_mut().zip(seen.iter_mut()) {
                    *nw &= !*sw;
                    *sw |= *nw;
                }
                std::mem::swap(&mut frontier, &mut next);
            }
        }
        comps
    }

    /// Connected in the usual sense; graphs on fewer than two vertices count as connected.
    pub fn is_connected(&self) -> bool {
        self.component_count() <= 1
    }

    /// Largest finite shortest-path distance, or `None` when disconnected.
    pub fn diameter(&self) -> Option<usize> {
        let mut best = 0;
        for s in 0..self.n {
            let dist = self.bfs_distances(s);
            for d in dist {
                best = best.max(d?);
            }
        }
        Some(best)
    }

    pub(crate) fn bfs_distances(&self, s: usize) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.n];
        let mut queue = std::collections::VecDeque::new();
        dist[s] = Some(0);
        queue.push_back(s);
        while let Some(v) = queue.pop_front() {
            let d = dist[v].unwrap_or(0);
            for w in self.neighbors(v) {
                if dist[w].is_none() {
                    dist[w] = Some(d + 1);
                    queue.push_back(w);
                }
            }
        }
        dist
    }
}

impl std::fmt::Debug for Graph {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Graph")
            .field("n", &self.n)
            .field("m", &self.m)
            .field("edges", &self.edges().collect::<Vec<_>>())
            .finish()
    }
}

/// The per-pair uniforms behind [`Graph::sample_gnp`], kept so one trial can
/// be thresholded at many edge probabilities.
#[derive(Debug, Clone)]
pub struct PairUniforms {
    n: usize,
    /// `(uniform, u, v)` sorted by uniform.
    sorted: Vec<(f64, u32, u32)>,
}

impl PairUniforms {
    pub fn sample(n: usize, seed: Seed) -> Self {
        let mut rng = seed.rng();
        let mut sorted = Vec::with_capacity(n * n.saturating_sub(1) / 2);
        for u in 0..n {
            for v in u + 1..n {
                let x: f64 = rng.random();
                sorted.push((x, u as u32, v as u32));
            }
        }
        sorted.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)).then(a.2.cmp(&b.2)));
        PairUniforms { n, sorted }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn pairs(&self) -> usize {
        self.sorted.len()
    }

    /// The pair with the `j`-th smallest uniform (0-based) and its uniform.
    pub fn nth(&self, j: usize) -> (f64, usize, usize) {
        let (x, u, v) = self.sorted[j];
        (x, u as usize, v as usize)
    }

    /// Graph of the `count` pairs with the smallest uniforms.
    pub fn prefix_graph(&self, count: usize) -> Graph {
        let mut g = Graph::new(self.n);
        for &(_, u, v) in &self.sorted[..count] {
            g.insert(u as usize, v as usize);
        }
        g
    }

    /// Same graph as `Graph::sample_gnp(n, p, seed)` for the seed this was sampled from.
    pub fn threshold_graph(&self, p: f64) -> Graph {
        let count = self.sorted.partition_point(|e| e.0 < p);
        self.prefix_graph(count)
    }
}
