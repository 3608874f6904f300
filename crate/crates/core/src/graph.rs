//! Graphs, connectivity, spanning trees and the path/branch machinery used by
//! the constructive perturbations.

use alloc::collections::VecDeque;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::scalar::Scalar;
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct Edge<S> {
    pub i: usize,
    pub j: usize,
    pub w: S,
}

/// Undirected weighted graph with strictly positive weights.
///
/// Edges are stored with `i < j`, sorted, without duplicates or self-loops.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedGraph<S = f64> {
    n: usize,
    edges: Vec<Edge<S>>,
}

impl<S: Scalar> WeightedGraph<S> {
    /// Builds a graph. Pairs may be given in either orientation.
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize, S)>) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidGraph("graph must have at least one node".into()));
        }
        let mut list = Vec::new();
        for (a, b, w) in edges {
            if a >= n || b >= n {
                return Err(Error::InvalidGraph(format!("edge ({a}, {b}) out of range for n = {n}")));
            }
            if a == b {
                return Err(Error::InvalidGraph(format!("self-loop at node {a}")));
            }
            if w.partial_cmp(&S::zero()) != Some(core::cmp::Ordering::Greater) {
                return Err(Error::InvalidGraph(format!("edge ({a}, {b}) has non-positive weight")));
            }
            let (i, j) = if a < b { (a, b) } else { (b, a) };
            list.push(Edge { i, j, w });
        }
        list.sort_by_key(|e| (e.i, e.j));
        for pair in list.windows(2) {
            if pair[0].i == pair[1].i && pair[0].j == pair[1].j {
                return Err(Error::InvalidGraph(format!(
                    "duplicate edge ({}, {})",
                    pair[0].i, pair[0].j
                )));
            }
        }
        Ok(Self { n, edges: list })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[Edge<S>] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn weight(&self, a: usize, b: usize) -> Option<&S> {
        let key = if a < b { (a, b) } else { (b, a) };
        self.edges
            .binary_search_by(|e| (e.i, e.j).cmp(&key))
            .ok()
            .map(|k| &self.edges[k].w)
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.weight(a, b).is_some()
    }

    pub fn map_weights<T: Scalar>(&self, mut f: impl FnMut(&S) -> T) -> Result<WeightedGraph<T>> {
        WeightedGraph::new(self.n, self.edges.iter().map(|e| (e.i, e.j, f(&e.w))))
    }

    pub fn to_real(&self) -> WeightedGraph<f64> {
        WeightedGraph {
            n: self.n,
            edges: self
                .edges
                .iter()
                .map(|e| Edge { i: e.i, j: e.j, w: e.w.to_real() })
                .collect(),
        }
    }

    /// Same support, every weight replaced by `w`.
    pub fn with_uniform_weight(&self, w: S) -> WeightedGraph<S> {
        WeightedGraph {
            n: self.n,
            edges: self
                .edges
                .iter()
                .map(|e| Edge { i: e.i, j: e.j, w: w.clone() })
                .collect(),
        }
    }

    /// Neighbour lists in increasing index order.
    pub fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.n];
        for e in &self.edges {
            adj[e.i].push(e.j);
            adj[e.j].push(e.i);
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        adj
    }

    /// Component label of every node (labels numbered in order of first node).
    pub fn component_labels(&self) -> (Vec<usize>, usize) {
        component_labels(&self.adjacency())
    }

    pub fn component_count(&self) -> usize {
        self.component_labels().1
    }

    pub fn is_connected(&self) -> bool {
        self.component_count() == 1
    }

    pub fn is_tree(&self) -> bool {
        self.edges.len() + 1 == self.n && self.is_connected()
    }

    /// Breadth-first spanning tree from node 0 with index-ordered neighbours.
    pub fn spanning_tree(&self) -> Result<WeightedGraph<S>> {
        let adj = self.adjacency();
        let mut seen = vec![false; self.n];
        let mut queue = VecDeque::from([0usize]);
        seen[0] = true;
        let mut edges = Vec::with_capacity(self.n.saturating_sub(1));
        while let Some(u) = queue.pop_front() {
            for &v in &adj[u] {
                if !seen[v] {
                    seen[v] = true;
                    let w = self.weight(u, v).cloned().expect("adjacent nodes share an edge");
                    edges.push((u, v, w));
                    queue.push_back(v);
                }
            }
        }
        if edges.len() + 1 != self.n {
            return Err(Error::NotConnected);
        }
        WeightedGraph::new(self.n, edges)
    }

    /// Relabels node `v` as `perm[v]`.
    pub fn reorder(&self, perm: &[usize]) -> Result<WeightedGraph<S>> {
        check_permutation(perm, self.n)?;
        WeightedGraph::new(
            self.n,
            self.edges.iter().map(|e| (perm[e.i], perm[e.j], e.w.clone())),
        )
    }

    /// Subgraph induced by all nodes except `drop`, with the remaining nodes
    /// relabelled in increasing order.
    pub fn without_node(&self, drop: usize) -> Result<WeightedGraph<S>> {
        if drop >= self.n || self.n == 1 {
            return Err(Error::InvalidGraph(format!("cannot drop node {drop}")));
        }
        let relabel = |v: usize| if v > drop { v - 1 } else { v };
        WeightedGraph::new(
            self.n - 1,
            self.edges
                .iter()
                .filter(|e| e.i != drop && e.j != drop)
                .map(|e| (relabel(e.i), relabel(e.j), e.w.clone())),
        )
    }
}

fn check_permutation(perm: &[usize], n: usize) -> Result<()> {
    if perm.len() != n {
        return Err(Error::InvalidPermutation);
    }
    let mut seen = vec![false; n];
    for &p in perm {
        if p >= n || seen[p] {
            return Err(Error::InvalidPermutation);
        }
        seen[p] = true;
    }
    Ok(())
}

fn component_labels(adj: &[Vec<usize>]) -> (Vec<usize>, usize) {
    let n = adj.len();
    let mut label = vec![usize::MAX; n];
    let mut count = 0;
    let mut queue = VecDeque::new();
    for start in 0..n {
        if label[start] != usize::MAX {
            continue;
        }
        label[start] = count;
        queue.push_back(start);
        while let Some(u) = queue.pop_front() {
            for &v in &adj[u] {
                if label[v] == usize::MAX {
                    label[v] = count;
                    queue.push_back(v);
                }
            }
        }
        count += 1;
    }
    (label, count)
}

/// BFS distances and parents from `source`.
fn bfs(adj: &[Vec<usize>], source: usize) -> (Vec<usize>, Vec<usize>) {
    let n = adj.len();
    let mut dist = vec![usize::MAX; n];
    let mut parent = vec![usize::MAX; n];
    let mut queue = VecDeque::from([source]);
    dist[source] = 0;
    while let Some(u) = queue.pop_front() {
        for &v in &adj[u] {
            if dist[v] == usize::MAX {
                dist[v] = dist[u] + 1;
                parent[v] = u;
                queue.push_back(v);
            }
        }
    }
    (dist, parent)
}

/// Ordered list of distinct nodes, consecutive ones adjacent in a host tree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreePath {
    pub nodes: Vec<usize>,
}

impl TreePath {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn root(&self) -> usize {
        self.nodes[0]
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.nodes.windows(2).map(|w| (w[0], w[1]))
    }
}

/// A diameter path of a tree.
///
/// The diameter length comes from a double breadth-first sweep. Among all
/// diameter paths the one with the lexicographically smallest (start, end)
/// pair is returned, ordered from start to end.
pub fn longest_path<S: Scalar>(tree: &WeightedGraph<S>) -> Result<TreePath> {
    if !tree.is_tree() {
        return Err(Error::NotATree);
    }
    let adj = tree.adjacency();
    let (d0, _) = bfs(&adj, 0);
    let far = argmax_first(&d0);
    let (d1, _) = bfs(&adj, far);
    let diameter = d1.iter().copied().max().unwrap_or(0);

    for start in 0..tree.n() {
        let (dist, parent) = bfs(&adj, start);
        if let Some(end) = dist.iter().position(|&d| d == diameter) {
            let mut nodes = vec![end];
            let mut cur = end;
            while cur != start {
                cur = parent[cur];
                nodes.push(cur);
            }
            nodes.reverse();
            return Ok(TreePath { nodes });
        }
    }
    unreachable!("some node realises the diameter")
}

fn argmax_first(values: &[usize]) -> usize {
    let mut best = 0;
    for (k, &v) in values.iter().enumerate() {
        if v > values[best] {
            best = k;
        }
    }
    best
}

/// One attachment: `edge` joins the covered node `attach` to `new_node`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BranchStep {
    pub edge: (usize, usize),
    pub attach: usize,
    pub new_node: usize,
}

/// Tree edges outside the path, in attachment order.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct BranchSchedule {
    pub steps: Vec<BranchStep>,
}

/// Orders the tree edges off `path` breadth-first outward from the path,
/// seeding the search with the path nodes in path order (root first).
pub fn branch_schedule<S: Scalar>(tree: &WeightedGraph<S>, path: &TreePath) -> Result<BranchSchedule> {
    if path.is_empty() {
        return Err(Error::PathNotInTree);
    }
    let n = tree.n();
    let mut covered = vec![false; n];
    for &v in &path.nodes {
        if v >= n || covered[v] {
            return Err(Error::PathNotInTree);
        }
        covered[v] = true;
    }
    if path.edges().any(|(a, b)| !tree.has_edge(a, b)) {
        return Err(Error::PathNotInTree);
    }
    let adj = tree.adjacency();
    let mut queue: VecDeque<usize> = path.nodes.iter().copied().collect();
    let mut steps = Vec::new();
    while let Some(u) = queue.pop_front() {
        for &v in &adj[u] {
            if !covered[v] {
                covered[v] = true;
                steps.push(BranchStep { edge: (u.min(v), u.max(v)), attach: u, new_node: v });
                queue.push_back(v);
            }
        }
    }
    Ok(BranchSchedule { steps })
}

/// Weighted digraph. An arc `(from, to, w)` is stored once per ordered pair.
#[derive(Debug, Clone, PartialEq)]
pub struct Digraph<S = f64> {
    n: usize,
    arcs: Vec<Edge<S>>,
}

impl<S: Scalar> Digraph<S> {
    pub fn new(n: usize, arcs: impl IntoIterator<Item = (usize, usize, S)>) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidGraph("graph must have at least one node".into()));
        }
        let mut list = Vec::new();
        for (i, j, w) in arcs {
            if i >= n || j >= n {
                return Err(Error::InvalidGraph(format!("arc ({i}, {j}) out of range for n = {n}")));
            }
            if i == j {
                return Err(Error::InvalidGraph(format!("self-loop at node {i}")));
            }
            if w.partial_cmp(&S::zero()) != Some(core::cmp::Ordering::Greater) {
                return Err(Error::InvalidGraph(format!("arc ({i}, {j}) has non-positive weight")));
            }
            list.push(Edge { i, j, w });
        }
        list.sort_by_key(|e| (e.i, e.j));
        for pair in list.windows(2) {
            if pair[0].i == pair[1].i && pair[0].j == pair[1].j {
                return Err(Error::InvalidGraph(format!(
                    "duplicate arc ({}, {})",
                    pair[0].i, pair[0].j
                )));
            }
        }
        Ok(Self { n, arcs: list })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Arcs as edges with `i` the tail and `j` the head.
    pub fn arcs(&self) -> &[Edge<S>] {
        &self.arcs
    }

    pub fn weight(&self, from: usize, to: usize) -> Option<&S> {
        self.arcs
            .binary_search_by(|e| (e.i, e.j).cmp(&(from, to)))
            .ok()
            .map(|k| &self.arcs[k].w)
    }

    pub fn to_real(&self) -> Digraph<f64> {
        Digraph {
            n: self.n,
            arcs: self
                .arcs
                .iter()
                .map(|e| Edge { i: e.i, j: e.j, w: e.w.to_real() })
                .collect(),
        }
    }

    pub fn out_adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.n];
        for a in &self.arcs {
            adj[a.i].push(a.j);
        }
        for list in &mut adj {
            list.sort_unstable();
            list.dedup();
        }
        adj
    }

    pub fn is_weakly_connected(&self) -> bool {
        let mut adj = vec![Vec::new(); self.n];
        for a in &self.arcs {
            adj[a.i].push(a.j);
            adj[a.j].push(a.i);
        }
        for list in &mut adj {
            list.sort_unstable();
            list.dedup();
        }
        component_labels(&adj).1 == 1
    }

    /// Smallest-index node reaching every other node along arcs, with the
    /// breadth-first out-tree (index-ordered neighbours) grown from it.
    pub fn diverging_spanning_tree(&self) -> Option<(usize, Digraph<S>)> {
        let adj = self.out_adjacency();
        (0..self.n).find_map(|root| {
            let (dist, parent) = bfs(&adj, root);
            if dist.contains(&usize::MAX) {
                return None;
            }
            let arcs = (0..self.n).filter(|&v| v != root).map(|v| {
                let p = parent[v];
                (p, v, self.weight(p, v).cloned().expect("tree arc exists"))
            });
            Some((root, Digraph::new(self.n, arcs).expect("subgraph of a valid digraph")))
        })
    }
}

/// Root-to-deepest path of an out-tree (ties broken by smallest end node).
pub fn longest_directed_path<S: Scalar>(root: usize, tree: &Digraph<S>) -> TreePath {
    let adj = tree.out_adjacency();
    let (dist, parent) = bfs(&adj, root);
    let depth = dist.iter().filter(|&&d| d != usize::MAX).copied().max().unwrap_or(0);
    let end = dist.iter().position(|&d| d == depth).unwrap_or(root);
    let mut nodes = vec![end];
    let mut cur = end;
    while cur != root {
        cur = parent[cur];
        nodes.push(cur);
    }
    nodes.reverse();
    TreePath { nodes }
}

/// The undirected tree underlying an out-tree.
pub fn underlying_tree<S: Scalar>(tree: &Digraph<S>) -> Result<WeightedGraph<S>> {
    WeightedGraph::new(tree.n(), tree.arcs().iter().map(|a| (a.i, a.j, a.w.clone())))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit(n: usize, edges: &[(usize, usize)]) -> WeightedGraph<f64> {
        WeightedGraph::new(n, edges.iter().map(|&(i, j)| (i, j, 1.0))).unwrap()
    }

    #[test]
    fn connectivity() {
        assert!(unit(4, &[(0, 1), (1, 2), (2, 3)]).is_connected());
        assert!(!unit(3, &[(0, 1)]).is_connected());
        assert!(unit(1, &[]).is_connected());
    }

    #[test]
    fn rejects_bad_edges() {
        assert!(WeightedGraph::new(2, [(0, 0, 1.0)]).is_err());
        assert!(WeightedGraph::new(2, [(0, 1, 0.0)]).is_err());
        assert!(WeightedGraph::new(2, [(0, 1, 1.0), (1, 0, 2.0)]).is_err());
        assert!(WeightedGraph::new(2, [(0, 2, 1.0)]).is_err());
    }

    #[test]
    fn spanning_tree_of_triangle_is_star_at_first_node() {
        let k3 = unit(3, &[(0, 1), (0, 2), (1, 2)]);
        let t = k3.spanning_tree().unwrap();
        let pairs: Vec<_> = t.edges().iter().map(|e| (e.i, e.j)).collect();
        assert_eq!(pairs, [(0, 1), (0, 2)]);
        let tree = unit(4, &[(0, 1), (1, 2), (1, 3)]);
        assert_eq!(tree.spanning_tree().unwrap(), tree);
        assert_eq!(unit(3, &[(0, 1)]).spanning_tree(), Err(Error::NotConnected));
    }

    #[test]
    fn diameter_paths() {
        let p4 = unit(4, &[(0, 1), (1, 2), (2, 3)]);
        assert_eq!(longest_path(&p4).unwrap().nodes, [0, 1, 2, 3]);
        let star = unit(4, &[(0, 1), (0, 2), (0, 3)]);
        assert_eq!(longest_path(&star).unwrap().nodes, [1, 0, 2]);
        let caterpillar = unit(4, &[(0, 1), (1, 2), (1, 3)]);
        assert_eq!(longest_path(&caterpillar).unwrap().nodes, [0, 1, 2]);
        let cycle = unit(3, &[(0, 1), (1, 2), (0, 2)]);
        assert_eq!(longest_path(&cycle), Err(Error::NotATree));
    }

    #[test]
    fn schedules() {
        let p4 = unit(4, &[(0, 1), (1, 2), (2, 3)]);
        let path = longest_path(&p4).unwrap();
        assert!(branch_schedule(&p4, &path).unwrap().steps.is_empty());

        // path 0-1-2-3 with a branch 1-4-5
        let t = unit(6, &[(0, 1), (1, 2), (2, 3), (1, 4), (4, 5)]);
        let path = TreePath { nodes: vec![0, 1, 2, 3] };
        let s = branch_schedule(&t, &path).unwrap();
        assert_eq!(
            s.steps,
            [
                BranchStep { edge: (1, 4), attach: 1, new_node: 4 },
                BranchStep { edge: (4, 5), attach: 4, new_node: 5 },
            ]
        );

        // branches at 1 and 2 (one edge each): the one nearer the root goes first
        let t = unit(6, &[(0, 1), (1, 2), (2, 3), (2, 4), (1, 5)]);
        let s = branch_schedule(&t, &path).unwrap();
        assert_eq!(s.steps[0].edge, (1, 5));
        assert_eq!(s.steps[1].edge, (2, 4));

        let bad = TreePath { nodes: vec![0, 2] };
        assert_eq!(branch_schedule(&t, &bad), Err(Error::PathNotInTree));
    }

    #[test]
    fn diverging_trees() {
        let path = Digraph::new(3, [(0, 1, 1.0), (1, 2, 1.0)]).unwrap();
        let (root, tree) = path.diverging_spanning_tree().unwrap();
        assert_eq!(root, 0);
        assert_eq!(tree, path);

        let g1 = Digraph::new(4, [(0, 1, 1.0), (3, 1, 1.0), (0, 2, 1.0), (3, 2, 1.0)]).unwrap();
        assert!(g1.diverging_spanning_tree().is_none());
        assert!(g1.is_weakly_connected());

        let cycle = Digraph::new(3, [(0, 1, 1.0), (1, 2, 1.0), (2, 0, 1.0)]).unwrap();
        assert_eq!(cycle.diverging_spanning_tree().unwrap().0, 0);

        let split = Digraph::new(4, [(0, 1, 1.0), (2, 3, 1.0)]).unwrap();
        assert!(!split.is_weakly_connected());
        assert!(Digraph::new(2, [(0, 1, 1.0)]).unwrap().is_weakly_connected());
    }

    #[test]
    fn reorder_checks_permutation() {
        let g = unit(2, &[(0, 1)]);
        assert_eq!(g.reorder(&[1, 0]).unwrap(), g);
        assert_eq!(g.reorder(&[0, 0]), Err(Error::InvalidPermutation));
        assert_eq!(g.reorder(&[0]), Err(Error::InvalidPermutation));
    }

    #[test]
    fn directed_longest_path() {
        let t = Digraph::new(5, [(0, 1, 1.0), (1, 2, 1.0), (0, 3, 1.0), (3, 4, 1.0)]).unwrap();
        assert_eq!(longest_directed_path(0, &t).nodes, [0, 1, 2]);
    }
}
