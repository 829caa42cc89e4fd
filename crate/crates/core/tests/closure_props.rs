mod common;

use hperc::{closure, edge_completes_copy, percolates, ClosureEngine, Graph, Seed, Strategy as Scan, Template};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::Rng;

use common::{brute_completes, sequential_closure, union_find_connected};

fn random_template(rng: &mut impl Rng) -> Template {
    let v = rng.random_range(2..=5);
    let p = rng.random_range(0.3..1.0);
    Template::new(Graph::sample_gnp(v, p, Seed::new(rng.random())).unwrap()).unwrap()
}

#[test]
fn anchored_search_matches_injective_maps() {
    let mut rng = Seed::new(101).rng();
    let mut checked = 0;
    while checked < 600 {
        let n = rng.random_range(2..=7);
        let g = Graph::sample_gnp(n, rng.random_range(0.2..0.9), Seed::new(rng.random())).unwrap();
        let h = random_template(&mut rng);
        let missing: Vec<_> = g.non_edges().collect();
        if let Some(&(u, v)) = missing.get(rng.random_range(0..missing.len().max(1))) {
            assert_eq!(edge_completes_copy(&g, &h, u, v).unwrap(), brute_completes(&g, &h, u, v), "{g:?} {:?} ({u},{v})", h.graph());
            assert_eq!(edge_completes_copy(&g, &h, v, u).unwrap(), brute_completes(&g, &h, u, v));
            checked += 1;
        }
    }
}

#[test]
fn spec_embedding_examples() {
    let k3 = Template::clique(3).unwrap();
    assert!(edge_completes_copy(&Graph::path(3), &k3, 0, 2).unwrap());
    assert!(!edge_completes_copy(&Graph::path(4), &k3, 0, 3).unwrap());
    let mut k5e = Graph::from_edges(5, &Graph::complete(5).edges().filter(|&e| e != (0, 1)).collect::<Vec<_>>()).unwrap();
    assert!(edge_completes_copy(&k5e, &Template::clique(4).unwrap(), 0, 1).unwrap());
    k5e.add_edge(0, 1).unwrap();
    assert!(edge_completes_copy(&k5e, &k3, 0, 1).is_err());
}

#[test]
fn strategies_and_scheduling_agree() {
    let mut rng = Seed::new(7).rng();
    for _ in 0..300 {
        let n = rng.random_range(3..=12);
        let g = Graph::sample_gnp(n, rng.random_range(0.1..0.6), Seed::new(rng.random())).unwrap();
        let h = random_template(&mut rng);
        let base = ClosureEngine::new(&h).strategy(Scan::Baseline).run(&g);
        let work = ClosureEngine::new(&h).strategy(Scan::Worklist).run(&g);
        let par = ClosureEngine::new(&h).parallel(true).run(&g);
        assert_eq!(base, work);
        assert_eq!(base, par);
    }
}

#[test]
fn sequential_order_reaches_same_closure() {
    let mut rng = Seed::new(8).rng();
    for _ in 0..200 {
        let n = rng.random_range(3..=10);
        let g = Graph::sample_gnp(n, rng.random_range(0.15..0.5), Seed::new(rng.random())).unwrap();
        let h = random_template(&mut rng);
        let mut order: Vec<_> = Graph::complete(n).edges().collect();
        order.shuffle(&mut rng);
        assert_eq!(sequential_closure(&g, &h, &order), closure(&g, &h).final_graph);
    }
}

#[test]
fn triangle_percolation_is_connectivity() {
    let k3 = Template::clique(3).unwrap();
    let mut rng = Seed::new(9).rng();
    for _ in 0..1000 {
        let n = rng.random_range(3..=20);
        let p = rng.random_range(0.0..0.4);
        let g = Graph::sample_gnp(n, p, Seed::new(rng.random())).unwrap();
        assert_eq!(percolates(&g, &k3), union_find_connected(&g));
    }
}

#[test]
fn spec_closure_examples() {
    let k3 = Template::clique(3).unwrap();
    let r = closure(&Graph::path(5), &k3);
    assert!(r.percolated && r.final_graph == Graph::complete(5));
    let matching = Graph::from_edges(4, &[(0, 1), (2, 3)]).unwrap();
    assert_eq!(closure(&matching, &k3).final_graph, matching);
    let tree = Graph::from_edges(6, &[(0, 1), (0, 2), (1, 3), (1, 4), (4, 5)]).unwrap();
    assert!(percolates(&tree, &k3));
    assert!(!percolates(&Graph::new(4), &k3));
    for h in [Template::clique(4).unwrap(), Template::cycle(7).unwrap(), Template::path(2).unwrap()] {
        assert!(percolates(&Graph::complete(7), &h));
    }
}

/// Larger hosts against a direct K_4 closure (common neighbours adjacent).
#[test]
fn k4_closure_on_larger_graphs() {
    let k4 = Template::clique(4).unwrap();
    let naive = |g: &Graph| {
        let mut g = g.clone();
        loop {
            let add: Vec<_> = g
                .non_edges()
                .filter(|&(u, v)| {
                    let common: Vec<usize> = g.neighbors(u).filter(|&w| g.has_edge(v, w)).collect();
                    common.iter().enumerate().any(|(i, &a)| common[i + 1..].iter().any(|&b| g.has_edge(a, b)))
                })
                .collect();
            if add.is_empty() {
                return g;
            }
            for (u, v) in add {
                g.add_edge(u, v).unwrap();
            }
        }
    };
    for i in 0..30 {
        let g = Graph::sample_gnp(40, 0.12 + 0.002 * i as f64, Seed::new(55).stream(i)).unwrap();
        assert_eq!(closure(&g, &k4).final_graph, naive(&g));
    }
}

fn graph_strategy(max_n: usize) -> impl Strategy<Value = (Graph, Graph)> {
    (3..=max_n, any::<u64>(), 0.05f64..0.5, 0.0f64..0.3).prop_map(|(n, seed, p, extra)| {
        let small = Graph::sample_gnp(n, p, Seed::new(seed)).unwrap();
        // Coupled: same uniforms, larger p.
        let big = Graph::sample_gnp(n, (p + extra).min(1.0), Seed::new(seed)).unwrap();
        (small, big)
    })
}

fn template_strategy() -> impl Strategy<Value = Template> {
    prop_oneof![
        (3usize..=5).prop_map(|k| Template::clique(k).unwrap()),
        (4usize..=6).prop_map(|k| Template::cycle(k).unwrap()),
        (3usize..=4).prop_map(|k| Template::path(k).unwrap()),
        (any::<u64>(), 3usize..=5).prop_map(|(s, v)| Template::new(Graph::sample_gnp(v, 0.6, Seed::new(s)).unwrap()).unwrap()),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn closure_is_extensive_idempotent_and_monotone((g, big) in graph_strategy(12), h in template_strategy()) {
        prop_assert!(g.is_subgraph_of(&big));
        let r = closure(&g, &h);
        prop_assert!(g.is_subgraph_of(&r.final_graph));
        prop_assert!(closure(&r.final_graph, &h).rounds.is_empty());
        prop_assert!(r.final_graph.is_subgraph_of(&closure(&big, &h).final_graph));
        prop_assert_eq!(r.percolated, r.final_graph.is_complete());
        // Rounds are disjoint and account for every added edge.
        let mut rebuilt = g.clone();
        for round in &r.rounds {
            for &(u, v) in round {
                prop_assert!(rebuilt.add_edge(u, v).unwrap());
            }
        }
        prop_assert_eq!(rebuilt, r.final_graph);
    }

    #[test]
    fn coupled_outcomes_are_monotone_in_p(seed in any::<u64>(), n in 5usize..=25) {
        let k3 = Template::clique(3).unwrap();
        let mut last = false;
        for j in 0..=10 {
            let now = percolates(&Graph::sample_gnp(n, j as f64 * 0.05, Seed::new(seed)).unwrap(), &k3);
            prop_assert!(!last || now);
            last = now;
        }
    }
}
