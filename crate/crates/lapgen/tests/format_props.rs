//! File format round trips.

use lapgen::format::{parse_graph, write_graph, write_real_graph, GraphFile};
use lapgen_core::generate::{self, Weights};
use lapgen_core::{Digraph, Rational};
use num_traits::ToPrimitive;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn generated_graphs_round_trip(seed in any::<u64>(), n in 1usize..=25, extra in 0usize..20, random in any::<bool>()) {
        let w = if random { Weights::Random } else { Weights::Unit };
        let mut r = ChaCha8Rng::seed_from_u64(seed);
        let g = GraphFile::Undirected(generate::random_connected(n, extra, w, &mut r).unwrap());
        prop_assert_eq!(parse_graph(&write_graph(&g)).unwrap(), g);
    }

    #[test]
    fn rational_weights_round_trip(p in 1i64..1_000_000, q in 1i64..1_000_000, n in 2usize..6) {
        let w = Rational::new(p.into(), q.into());
        let d = Digraph::new(n, (1..n).map(|k| (k - 1, k, w.clone()))).unwrap();
        let g = GraphFile::Directed(d);
        prop_assert_eq!(parse_graph(&write_graph(&g)).unwrap(), g);
    }

    #[test]
    fn float_weights_round_trip(ws in proptest::collection::vec(1e-12f64..1e12, 1..10)) {
        let n = ws.len() + 1;
        let g = lapgen_core::WeightedGraph::new(n, ws.iter().enumerate().map(|(k, &w)| (k, k + 1, w))).unwrap();
        let GraphFile::Undirected(back) = parse_graph(&write_real_graph(&g)).unwrap() else { panic!() };
        for (a, b) in back.edges().iter().zip(g.edges()) {
            prop_assert_eq!(a.w.to_f64().unwrap(), b.w);
        }
    }
}
