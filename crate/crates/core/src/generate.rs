//! Seeded graph families with exact weights.

use alloc::format;
use alloc::vec::Vec;

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::graph::{Digraph, WeightedGraph};
use crate::scalar::{int, rational, Rational};
use crate::{Error, Result};

/// Retry bound for connected random graphs.
pub const GNP_RETRIES: usize = 1000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Weights {
    Unit,
    /// `k/10` with `k` uniform in `1..=100`.
    Random,
}

fn weight(w: Weights, r: &mut ChaCha8Rng) -> Rational {
    match w {
        Weights::Unit => int(1),
        Weights::Random => rational(r.gen_range(1..=100), 10),
    }
}

fn build(n: usize, pairs: Vec<(usize, usize)>, w: Weights, r: &mut ChaCha8Rng) -> Result<WeightedGraph<Rational>> {
    let edges: Vec<_> = pairs.into_iter().map(|(i, j)| (i, j, weight(w, r))).collect();
    WeightedGraph::new(n, edges)
}

fn need(n: usize, min: usize, family: &str) -> Result<()> {
    if n < min {
        return Err(Error::InvalidConfig(format!("{family} needs at least {min} nodes")));
    }
    Ok(())
}

pub fn path(n: usize, w: Weights, r: &mut ChaCha8Rng) -> Result<WeightedGraph<Rational>> {
    need(n, 1, "path")?;
    build(n, (1..n).map(|i| (i - 1, i)).collect(), w, r)
}

pub fn cycle(n: usize, w: Weights, r: &mut ChaCha8Rng) -> Result<WeightedGraph<Rational>> {
    need(n, 3, "cycle")?;
    let mut pairs: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
    pairs.push((0, n - 1));
    build(n, pairs, w, r)
}

/// Star centred at node 0.
pub fn star(n: usize, w: Weights, r: &mut ChaCha8Rng) -> Result<WeightedGraph<Rational>> {
    need(n, 1, "star")?;
    build(n, (1..n).map(|i| (0, i)).collect(), w, r)
}

pub fn complete(n: usize, w: Weights, r: &mut ChaCha8Rng) -> Result<WeightedGraph<Rational>> {
    need(n, 1, "complete")?;
    let mut pairs = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            pairs.push((i, j));
        }
    }
    build(n, pairs, w, r)
}

/// Random recursive tree under a random labelling.
fn tree_pairs(n: usize, r: &mut ChaCha8Rng) -> Vec<(usize, usize)> {
    let mut label: Vec<usize> = (0..n).collect();
    label.shuffle(r);
    (1..n).map(|v| (label[r.gen_range(0..v)], label[v])).collect()
}

pub fn random_tree(n: usize, w: Weights, r: &mut ChaCha8Rng) -> Result<WeightedGraph<Rational>> {
    need(n, 1, "random-tree")?;
    let pairs = tree_pairs(n, r);
    build(n, pairs, w, r)
}

/// Random tree plus `extra` distinct extra edges (fewer if the graph fills up).
pub fn random_connected(n: usize, extra: usize, w: Weights, r: &mut ChaCha8Rng) -> Result<WeightedGraph<Rational>> {
    need(n, 1, "random-connected")?;
    let mut pairs = tree_pairs(n, r);
    let mut present = alloc::collections::BTreeSet::new();
    for &(a, b) in &pairs {
        present.insert((a.min(b), a.max(b)));
    }
    let mut missing: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .filter(|p| !present.contains(p))
        .collect();
    missing.shuffle(r);
    pairs.extend(missing.into_iter().take(extra));
    build(n, pairs, w, r)
}

/// Erdős–Rényi graph conditioned on connectivity by rejection.
pub fn gnp(n: usize, p: f64, w: Weights, r: &mut ChaCha8Rng) -> Result<WeightedGraph<Rational>> {
    need(n, 1, "gnp")?;
    if !(p > 0.0 && p <= 1.0) {
        return Err(Error::InvalidConfig(format!("edge probability {p} is not in (0, 1]")));
    }
    for _ in 0..GNP_RETRIES {
        let mut pairs = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                if r.gen::<f64>() < p {
                    pairs.push((i, j));
                }
            }
        }
        let g = build(n, pairs, w, r)?;
        if g.is_connected() {
            return Ok(g);
        }
    }
    Err(Error::GenerationFailed(format!(
        "no connected G({n}, {p}) sample in {GNP_RETRIES} attempts"
    )))
}

/// Random forest with `trees` components (at most `n`).
pub fn random_forest(n: usize, trees: usize, w: Weights, r: &mut ChaCha8Rng) -> Result<WeightedGraph<Rational>> {
    need(n, 1, "random-forest")?;
    let trees = trees.clamp(1, n);
    let pairs: Vec<_> = tree_pairs(n, r).into_iter().skip(trees - 1).collect();
    build(n, pairs, w, r)
}

/// Random digraph containing a diverging spanning tree, plus `extra` arcs.
pub fn random_rooted_digraph(n: usize, extra: usize, w: Weights, r: &mut ChaCha8Rng) -> Result<Digraph<Rational>> {
    need(n, 1, "random-rooted-digraph")?;
    // tree_pairs orients every edge parent -> child
    let mut arcs = tree_pairs(n, r);
    let mut present: alloc::collections::BTreeSet<(usize, usize)> = arcs.iter().copied().collect();
    let mut missing: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .filter(|&(i, j)| i != j && !present.contains(&(i, j)))
        .collect();
    missing.shuffle(r);
    for a in missing.into_iter().take(extra) {
        present.insert(a);
        arcs.push(a);
    }
    Digraph::new(n, arcs.into_iter().map(|(i, j)| (i, j, weight(w, r))).collect::<Vec<_>>())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    fn rng(seed: u64) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(seed)
    }

    #[test]
    fn families() {
        let r = &mut rng(0);
        assert_eq!(path(3, Weights::Unit, r).unwrap().edge_count(), 2);
        assert_eq!(complete(4, Weights::Unit, r).unwrap().edge_count(), 6);
        assert_eq!(cycle(5, Weights::Unit, r).unwrap().edge_count(), 5);
        assert!(cycle(2, Weights::Unit, r).is_err());
        assert_eq!(star(5, Weights::Random, r).unwrap().edge_count(), 4);
    }

    #[test]
    fn random_tree_is_reproducible() {
        let a = random_tree(10, Weights::Random, &mut rng(7)).unwrap();
        let b = random_tree(10, Weights::Random, &mut rng(7)).unwrap();
        assert_eq!(a, b);
        assert!(a.is_tree());
    }

    #[test]
    fn connected_generators() {
        for seed in 0..20 {
            let r = &mut rng(seed);
            assert!(random_connected(12, 5, Weights::Unit, r).unwrap().is_connected());
            assert!(gnp(8, 0.5, Weights::Unit, r).unwrap().is_connected());
            let f = random_forest(15, 3, Weights::Unit, r).unwrap();
            assert_eq!(f.component_count(), 3);
            let d = random_rooted_digraph(10, 6, Weights::Unit, r).unwrap();
            assert!(d.diverging_spanning_tree().is_some());
        }
        assert!(matches!(gnp(30, 1e-6, Weights::Unit, &mut rng(1)), Err(Error::GenerationFailed(_))));
        assert!(gnp(3, 0.0, Weights::Unit, &mut rng(1)).is_err());
    }
}
