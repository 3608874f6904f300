//! Contracts of the constructive perturbations over seeded random graphs.

use lapgen_core::eigen::{gap_report, sym_spectrum, TAU_GAP, TAU_V};
use lapgen_core::exact::simplicity_certificate;
use lapgen_core::generate::{self, Weights};
use lapgen_core::laplacian::laplacian;
use lapgen_core::perturb::{build_simple_support_laplacian, fiedler_cut, perturb_fiedler_nonzero, perturb_to_simple, Stage};
use lapgen_core::{Error, LaplacianMatrix, WeightedGraph};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn graph(seed: u64, n: usize, extra: usize, w: Weights) -> WeightedGraph<f64> {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    generate::random_connected(n, extra, w, &mut r).unwrap().to_real()
}

fn components(l: &LaplacianMatrix) -> usize {
    let mut g = l.to_graph().unwrap();
    g = WeightedGraph::new(g.n(), g.edges().iter().map(|e| (e.i, e.j, e.w))).unwrap();
    g.component_count()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn simple_results_keep_support_and_budget(seed in any::<u64>(), n in 3usize..=20, extra in 0usize..15, unit in any::<bool>()) {
        let w = if unit { Weights::Unit } else { Weights::Random };
        let l = laplacian(&graph(seed, n, extra, w));
        let r = perturb_to_simple(&l, 1e-2, TAU_GAP, seed).unwrap();
        prop_assert!(r.result.support_equal(&l));
        prop_assert!(r.achieved_norm < 1e-2);
        prop_assert!(r.gap.simple);
        let again = perturb_to_simple(&l, 1e-2, TAU_GAP, seed).unwrap();
        prop_assert_eq!(&r, &again);

        // rationalised output is certified simple
        let q = r.result.rationalize(1_000_000);
        let g = gap_report(&sym_spectrum(&q.to_real()).unwrap(), TAU_GAP / 2.0);
        prop_assert!(g.simple);
        prop_assert!(simplicity_certificate(&q).verdict);
    }

    #[test]
    fn construction_trace_tracks_components(seed in any::<u64>(), n in 2usize..=25, extra in 0usize..10) {
        let g = graph(seed, n, extra, Weights::Unit);
        let (l, trace) = build_simple_support_laplacian(&g, TAU_GAP, seed).unwrap();
        prop_assert_eq!(components(&l), 1);
        let path_components = trace.entries.iter().find(|e| e.stage == Stage::Path).map(|e| e.components);
        let mut expect = path_components.unwrap_or(1);
        for e in trace.entries.iter().filter(|e| e.stage == Stage::Branch) {
            expect -= 1;
            prop_assert_eq!(e.components, expect);
            prop_assert!(e.min_gap > 0.0);
        }
        prop_assert_eq!(expect, 1);
    }

    #[test]
    fn fiedler_nonzero_contract(seed in any::<u64>(), n in 3usize..=15, extra in 0usize..8) {
        let l = laplacian(&graph(seed, n, extra, Weights::Unit));
        let r = perturb_fiedler_nonzero(&l, 1e-2, TAU_GAP, TAU_V, seed).unwrap();
        prop_assert!(r.result.support_equal(&l));
        prop_assert!(r.achieved_norm < 1e-2);
        let cut = fiedler_cut(&r.result, TAU_GAP, TAU_V).unwrap();
        prop_assert!(cut.positive_connected && cut.negative_connected);
        prop_assert!(!cut.positive.is_empty() && !cut.negative.is_empty());
    }

    #[test]
    fn accepted_cuts_split_into_two_parts(seed in any::<u64>(), n in 2usize..=15, extra in 0usize..8) {
        let g = graph(seed, n, extra, Weights::Random);
        match fiedler_cut(&laplacian(&g), TAU_GAP, TAU_V) {
            Ok(cut) => {
                prop_assert!(cut.positive_connected && cut.negative_connected);
                let crossing: Vec<_> = g.edges().iter().map(|e| (e.i, e.j))
                    .filter(|&(i, j)| cut.vector[i] * cut.vector[j] < 0.0).collect();
                prop_assert_eq!(&cut.cut_edges, &crossing);
                let kept = WeightedGraph::new(n, g.edges().iter()
                    .filter(|e| !crossing.contains(&(e.i, e.j))).map(|e| (e.i, e.j, e.w))).unwrap();
                prop_assert_eq!(kept.component_count(), 2);
            }
            Err(Error::DegenerateFiedler { .. }) | Err(Error::DegenerateLambda2 { .. }) => {}
            Err(e) => prop_assert!(false, "unexpected {e}"),
        }
    }
}
