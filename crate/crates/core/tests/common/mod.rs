//! Naive reference implementations shared by the integration tests.

#![allow(dead_code)]

use hperc::{Fraction, Graph, Template};

/// Every injective map `V(H) -> V(G + uv)`; true iff one of them is a
/// homomorphism onto edges of `G + uv` that uses `uv`.
pub fn brute_completes(g: &Graph, h: &Template, u: usize, v: usize) -> bool {
    let hv = h.vertex_count();
    let n = g.n();
    if hv > n {
        return false;
    }
    let edge = |a: usize, b: usize| g.has_edge(a, b) || (a.min(b), a.max(b)) == (u.min(v), u.max(v));
    let mut map = vec![usize::MAX; hv];
    let mut used = vec![false; n];
    fn rec(i: usize, map: &mut Vec<usize>, used: &mut Vec<bool>, h: &Template, edge: &dyn Fn(usize, usize) -> bool, anchor: (usize, usize)) -> bool {
        if i == map.len() {
            let mut uses = false;
            for &(a, b) in h.edges() {
                let (x, y) = (map[a], map[b]);
                if !edge(x, y) {
                    return false;
                }
                if (x.min(y), x.max(y)) == anchor {
                    uses = true;
                }
            }
            return uses;
        }
        for x in 0..used.len() {
            if !used[x] {
                used[x] = true;
                map[i] = x;
                if rec(i + 1, map, used, h, edge, anchor) {
                    return true;
                }
                used[x] = false;
            }
        }
        false
    }
    rec(0, &mut map, &mut used, h, &edge, (u.min(v), u.max(v)))
}

/// Sequential closure: add one addable edge at a time, in the given order
/// of preference, until none is addable.
pub fn sequential_closure(g: &Graph, h: &Template, order: &[(usize, usize)]) -> Graph {
    let mut g = g.clone();
    loop {
        let next = order.iter().copied().find(|&(a, b)| !g.has_edge(a, b) && hperc::edge_completes_copy(&g, h, a, b).unwrap());
        match next {
            Some((a, b)) => {
                g.add_edge(a, b).unwrap();
            }
            None => return g,
        }
    }
}

pub fn induced_edges(g: &Graph, mask: u64) -> usize {
    g.edges().filter(|&(a, b)| mask >> a & 1 == 1 && mask >> b & 1 == 1).count()
}

/// `(balanced, strictly balanced, λ*)` by enumerating every vertex subset.
pub fn naive_balance(g: &Graph) -> (bool, bool, Fraction) {
    let v = g.n();
    let e = g.m() as i64;
    let mut balanced = true;
    let mut strict = true;
    let mut lambda_star: Option<Fraction> = None;
    for mask in 0u64..(1 << v) {
        let s = mask.count_ones() as i64;
        if s < 2 || s as usize >= v {
            continue;
        }
        let ef = induced_edges(g, mask) as i64;
        if s >= 3 {
            // (ef - 1) / (s - 2) vs (e - 2) / (v - 2)
            let lhs = (ef - 1) * (v as i64 - 2);
            let rhs = (e - 2) * (s - 2);
            balanced &= lhs <= rhs;
            strict &= lhs < rhs;
        }
        let cost = Fraction::new(e - ef - 1, v as i64 - s);
        lambda_star = Some(lambda_star.map_or(cost, |c| c.min(cost)));
    }
    (balanced, strict, lambda_star.expect("v >= 3"))
}

/// Graph number `code` on `v` vertices: bit `j` of `code` is the `j`-th pair
/// in row-major order.
pub fn graph_from_code(v: usize, code: u64) -> Graph {
    let mut edges = Vec::new();
    let mut j = 0;
    for a in 0..v {
        for b in a + 1..v {
            if code >> j & 1 == 1 {
                edges.push((a, b));
            }
            j += 1;
        }
    }
    Graph::from_edges(v, &edges).unwrap()
}

/// Union-find component count.
pub fn union_find_connected(g: &Graph) -> bool {
    let n = g.n();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        let mut x = x;
        while p[x] != r {
            let next = p[x];
            p[x] = r;
            x = next;
        }
        r
    }
    let mut comps = n;
    for (a, b) in g.edges() {
        let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
        if ra != rb {
            parent[ra] = rb;
            comps -= 1;
        }
    }
    comps <= 1
}
