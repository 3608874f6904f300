//! Graph utilities against brute-force oracles.

use std::collections::VecDeque;

use lapgen_core::generate::{self, Weights};
use lapgen_core::graph::{branch_schedule, longest_path};
use lapgen_core::laplacian::{laplacian, PerturbationTuple};
use lapgen_core::WeightedGraph;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn distances(adj: &[Vec<usize>], s: usize) -> Vec<usize> {
    let mut d = vec![usize::MAX; adj.len()];
    d[s] = 0;
    let mut q = VecDeque::from([s]);
    while let Some(u) = q.pop_front() {
        for &v in &adj[u] {
            if d[v] == usize::MAX {
                d[v] = d[u] + 1;
                q.push_back(v);
            }
        }
    }
    d
}

fn brute_diameter(g: &WeightedGraph<f64>) -> usize {
    let adj = g.adjacency();
    (0..g.n()).map(|s| distances(&adj, s).into_iter().max().unwrap()).max().unwrap()
}

fn graph(seed: u64, n: usize, extra: usize) -> WeightedGraph<f64> {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    generate::random_connected(n, extra, Weights::Random, &mut r).unwrap().to_real()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn spanning_tree_and_diameter(seed in any::<u64>(), n in 1usize..=30, extra in 0usize..20) {
        let g = graph(seed, n, extra);
        let t = g.spanning_tree().unwrap();
        prop_assert!(t.is_tree());
        prop_assert!(t.edges().iter().all(|e| g.weight(e.i, e.j) == Some(&e.w)));
        let path = longest_path(&t).unwrap();
        prop_assert_eq!(path.len() - 1, brute_diameter(&t));
        prop_assert!(path.edges().all(|(a, b)| t.has_edge(a, b)));
        let schedule = branch_schedule(&t, &path).unwrap();
        prop_assert_eq!(schedule.steps.len() + path.len() - 1, t.edge_count());
        let mut covered = vec![false; n];
        for &v in &path.nodes {
            covered[v] = true;
        }
        for step in &schedule.steps {
            prop_assert!(covered[step.attach] && !covered[step.new_node]);
            covered[step.new_node] = true;
        }
        prop_assert!(covered.iter().all(|&c| c));
    }

    #[test]
    fn structural_perturbation_is_linear_and_keeps_support(
        seed in any::<u64>(), n in 2usize..=15, extra in 0usize..10, a in -2.0f64..2.0, b in -2.0f64..2.0
    ) {
        let l = laplacian(&graph(seed, n, extra));
        let support = l.support();
        let mut e1 = PerturbationTuple::new();
        let mut e2 = PerturbationTuple::new();
        for (k, &(i, j)) in support.iter().enumerate() {
            e1.set(i, j, 0.01 * (k + 1) as f64);
            e2.set(i, j, 0.003 * ((k * 7) % 5) as f64);
        }
        let combo = l.structural_perturbation(&e1.combine(&a, &e2, &b)).unwrap();
        let sum = l.structural_perturbation(&e1).unwrap().scale(&a).add(&l.structural_perturbation(&e2).unwrap().scale(&b));
        for (x, y) in combo.entries().iter().zip(sum.entries()) {
            prop_assert!((x - y).abs() < 1e-12);
        }
        let p = l.apply_perturbation(&e1).unwrap();
        prop_assert!(p.support_equal(&l));
        prop_assert!(p.has_zero_row_sums() && p.is_symmetric() && p.is_valid_laplacian());
        for i in 0..n {
            for j in 0..n {
                if i != j && *l.get(i, j) == 0.0 {
                    prop_assert_eq!(*p.get(i, j), 0.0);
                }
            }
        }
    }
}
