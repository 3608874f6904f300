//! Constructive same-support perturbations.
//!
//! A reference Laplacian with simple spectrum is grown on the support of the
//! input: distinct weights on a diameter path of a spanning tree, then the
//! remaining tree edges one at a time at small weights, then every other
//! support edge at smaller weights still, with the spectrum checked after
//! each step. Scaling that reference down and adding it to the input gives a
//! small perturbation with simple spectrum. Nonzero Fiedler entries are then
//! reached by seeded random perturbations, which succeed with probability one.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::eigen::{self, gap_report, GapReport, TAU_V};
use crate::exact::Certificate;
use crate::graph::{branch_schedule, longest_directed_path, longest_path, underlying_tree, WeightedGraph};
use crate::laplacian::{LaplacianMatrix, PerturbationTuple};
use crate::{Error, Result};

/// Base weight for attached branch edges.
pub const RHO: f64 = 1e-2;
/// Retries (each shrinking the weight tenfold) before a step is abandoned.
pub const MAX_RETRIES: usize = 50;
/// Halvings of the scaled reference before giving up.
pub const MAX_HALVINGS: usize = 60;
/// Random rounds when chasing nonzero eigenvector entries.
pub const MAX_ROUNDS: usize = 50;
/// Separation floor for nonsymmetric spectra. A defective eigenvalue of
/// multiplicity two splits by about the square root of machine epsilon under
/// rounding, which a smaller threshold would mistake for two simple ones.
pub const DIRECTED_GAP_FLOOR: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stage {
    Path,
    Branch,
    NonTree,
    Scale,
    Jitter,
    Round,
    Derivative,
}

impl Stage {
    pub fn name(&self) -> &'static str {
        match self {
            Stage::Path => "path",
            Stage::Branch => "branch",
            Stage::NonTree => "non-tree",
            Stage::Scale => "scale",
            Stage::Jitter => "jitter",
            Stage::Round => "round",
            Stage::Derivative => "derivative",
        }
    }
}

/// One logged step. For [`Stage::Derivative`] entries `weight` holds the
/// first-order sensitivity `(v_i - v_j)²` of `λ₂` to the edge weight.
#[derive(Debug, Clone, PartialEq)]
pub struct TraceEntry {
    pub stage: Stage,
    pub edge: Option<(usize, usize)>,
    pub weight: f64,
    pub min_gap: f64,
    /// Numerical zero multiplicity after the step.
    pub components: usize,
    pub retries: usize,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct ConstructionTrace {
    pub entries: Vec<TraceEntry>,
}

impl ConstructionTrace {
    fn push(&mut self, stage: Stage, edge: Option<(usize, usize)>, weight: f64, min_gap: f64, components: usize) {
        self.entries.push(TraceEntry { stage, edge, weight, min_gap, components, retries: 0 });
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PerturbationResult {
    pub perturbation: PerturbationTuple<f64>,
    pub result: LaplacianMatrix<f64>,
    pub achieved_norm: f64,
    pub gap: GapReport,
    /// Smallest `|v_i|` of the unit Fiedler vector; zero when `λ₂` is not
    /// simple or the matrix is directed.
    pub min_fiedler_entry: f64,
    pub attempts: usize,
    pub certified: Option<Certificate>,
    pub trace: ConstructionTrace,
}

fn rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(stream);
    r
}

/// Uniform draw from `(0, b]`.
fn open_closed(r: &mut ChaCha8Rng, b: f64) -> f64 {
    b * (1.0 - r.gen::<f64>())
}

fn symmetric_from(n: usize, w: &BTreeMap<(usize, usize), f64>) -> LaplacianMatrix<f64> {
    let g = WeightedGraph::new(n, w.iter().map(|(&(i, j), &x)| (i, j, x))).expect("positive weights on valid pairs");
    LaplacianMatrix::from_graph(&g)
}

/// Checks a partial (forest or graph) Laplacian with `c` expected components:
/// exactly `c` numerically zero eigenvalues and every eigenvalue from the
/// last zero onward separated by more than `tau * scale`. Returns the
/// smallest such separation.
fn partial_gap(l: &LaplacianMatrix<f64>, c: usize, tau: f64) -> Result<(bool, f64, usize)> {
    let vals = eigen::sym_eigenvalues(l)?;
    let scale = vals.iter().fold(1.0f64, |m, v| m.max(v.abs()));
    let zeros = vals.iter().filter(|v| v.abs() <= tau * scale).count();
    let start = c.saturating_sub(1);
    let min_gap = vals[start..].windows(2).map(|w| w[1] - w[0]).fold(f64::INFINITY, f64::min);
    Ok((zeros == c && min_gap > tau * scale, min_gap, zeros))
}

/// A Laplacian with exactly the support of `g` and a numerically simple
/// spectrum, with the log of every verified step.
///
/// Path weights are `1, 2, …, p-1`. Each branch edge gets `RHO·u` with `u`
/// drawn from `[0.5, 1)`; a failed check shrinks the weight tenfold and
/// redraws `u`. Non-tree edges are added together at `RHO²·u_e` with the same
/// retry rule.
pub fn build_simple_support_laplacian(
    g: &WeightedGraph<f64>,
    tau_gap: f64,
    seed: u64,
) -> Result<(LaplacianMatrix<f64>, ConstructionTrace)> {
    let n = g.n();
    let tree = g.spanning_tree()?;
    let path = longest_path(&tree)?;
    let schedule = branch_schedule(&tree, &path)?;
    let mut r = rng(seed, 0);
    let mut trace = ConstructionTrace::default();

    let mut w = BTreeMap::new();
    for (k, (a, b)) in path.edges().enumerate() {
        w.insert((a.min(b), a.max(b)), (k + 1) as f64);
    }
    let mut components = n - w.len();
    let (ok, gap, zeros) = partial_gap(&symmetric_from(n, &w), components, tau_gap)?;
    if !ok {
        // an unreduced tridiagonal block always has a simple spectrum
        return Err(Error::ScheduleExhausted(path.root(), path.nodes[path.len() - 1], gap));
    }
    for (a, b) in path.edges() {
        trace.push(Stage::Path, Some((a.min(b), a.max(b))), w[&(a.min(b), a.max(b))], gap, zeros);
    }

    for step in &schedule.steps {
        components -= 1;
        let mut shrink = 1.0;
        let mut accepted = None;
        let mut last_gap = 0.0;
        for retry in 0..=MAX_RETRIES {
            let weight = RHO * shrink * (0.5 + 0.5 * r.gen::<f64>());
            w.insert(step.edge, weight);
            let (ok, gap, zeros) = partial_gap(&symmetric_from(n, &w), components, tau_gap)?;
            last_gap = gap;
            if ok {
                accepted = Some(TraceEntry {
                    stage: Stage::Branch,
                    edge: Some(step.edge),
                    weight,
                    min_gap: gap,
                    components: zeros,
                    retries: retry,
                });
                break;
            }
            shrink *= 0.1;
        }
        match accepted {
            Some(entry) => trace.entries.push(entry),
            None => return Err(Error::ScheduleExhausted(step.edge.0, step.edge.1, last_gap)),
        }
    }

    let extra: Vec<(usize, usize)> =
        g.edges().iter().map(|e| (e.i, e.j)).filter(|&(i, j)| !tree.has_edge(i, j)).collect();
    if !extra.is_empty() {
        let mut shrink = 1.0;
        let mut done = false;
        let mut last_gap = 0.0;
        for retry in 0..=MAX_RETRIES {
            let mut trial = w.clone();
            for &e in &extra {
                trial.insert(e, RHO * RHO * shrink * (0.5 + 0.5 * r.gen::<f64>()));
            }
            let (ok, gap, zeros) = partial_gap(&symmetric_from(n, &trial), 1, tau_gap)?;
            last_gap = gap;
            if ok {
                for &e in &extra {
                    trace.entries.push(TraceEntry {
                        stage: Stage::NonTree,
                        edge: Some(e),
                        weight: trial[&e],
                        min_gap: gap,
                        components: zeros,
                        retries: retry,
                    });
                }
                w = trial;
                done = true;
                break;
            }
            shrink *= 0.1;
        }
        if !done {
            return Err(Error::ScheduleExhausted(extra[0].0, extra[0].1, last_gap));
        }
    }
    Ok((symmetric_from(n, &w), trace))
}

fn support_graph(l: &LaplacianMatrix<f64>) -> Result<WeightedGraph<f64>> {
    if l.is_directed() || !l.is_symmetric() {
        return Err(Error::NotSymmetric);
    }
    let g = l.to_graph()?;
    if !g.is_connected() {
        return Err(Error::NotConnected);
    }
    Ok(g)
}

fn zero_tuple(l: &LaplacianMatrix<f64>) -> PerturbationTuple<f64> {
    let mut e = PerturbationTuple::new();
    for (i, j) in l.support() {
        if l.is_directed() {
            e.set_directed(i, j, 0.0);
        } else {
            e.set(i, j, 0.0);
        }
    }
    e
}

fn min_fiedler(l: &LaplacianMatrix<f64>, tau_gap: f64) -> f64 {
    match eigen::fiedler_with(l, tau_gap, TAU_V) {
        Ok((_, v)) => eigen::min_abs_entry(&v).0,
        Err(_) => 0.0,
    }
}

fn finish(
    l: &LaplacianMatrix<f64>,
    e: PerturbationTuple<f64>,
    gap: GapReport,
    attempts: usize,
    tau_gap: f64,
    trace: ConstructionTrace,
) -> Result<PerturbationResult> {
    let result = l.apply_perturbation(&e)?;
    let achieved_norm = l.structural_perturbation(&e)?.matrix_norm();
    let min_fiedler_entry = if l.is_directed() { 0.0 } else { min_fiedler(&result, tau_gap) };
    Ok(PerturbationResult {
        perturbation: e,
        result,
        achieved_norm,
        gap,
        min_fiedler_entry,
        attempts,
        certified: None,
        trace,
    })
}

/// Same-support perturbation of norm below `eps0` giving a numerically
/// simple spectrum.
///
/// Candidates are `L + t·L*` with `L*` from [`build_simple_support_laplacian`]
/// and `t = eps0 / ‖L*‖ · 2^-m`, `m = 1, 2, …`. Each rejected candidate is
/// retried with [`JITTER_DRAWS`] seeded jitters of comparable size.
pub fn perturb_to_simple(l: &LaplacianMatrix<f64>, eps0: f64, tau_gap: f64, seed: u64) -> Result<PerturbationResult> {
    let g = support_graph(l)?;
    let s = eigen::sym_spectrum(l)?;
    let gap = gap_report(&s, tau_gap);
    if gap.simple {
        return finish(l, zero_tuple(l), gap, 0, tau_gap, ConstructionTrace::default());
    }

    let (star, mut trace) = build_simple_support_laplacian(&g, tau_gap, seed)?;
    scale_search(l, &star, eps0, seed, &mut trace, |m| {
        let s = eigen::sym_spectrum(m)?;
        Ok((gap_report(&s, tau_gap), s.zero_count(tau_gap)))
    })
    .and_then(|(e, gap, attempts)| finish(l, e, gap, attempts, tau_gap, trace))
}

/// Seeded draws per step of the scale search.
pub const JITTER_DRAWS: usize = 4;

/// Tries `t·L*` for `t = eps0 / ‖L*‖ · 2^-m`, then a few draws of `t·L*`
/// plus independent per-arc jitter in `(0, b]` with
/// `b = eps0 · 2^-m / (2·d)`, `d` the largest support degree. Both keep
/// `‖ΔL‖ < eps0`.
fn scale_search(
    l: &LaplacianMatrix<f64>,
    star: &LaplacianMatrix<f64>,
    eps0: f64,
    seed: u64,
    trace: &mut ConstructionTrace,
    check: impl Fn(&LaplacianMatrix<f64>) -> Result<(GapReport, usize)>,
) -> Result<(PerturbationTuple<f64>, GapReport, usize)> {
    let support = l.support();
    let directed = l.is_directed();
    let set = |e: &mut PerturbationTuple<f64>, i: usize, j: usize, x: f64| {
        if directed {
            e.set_directed(i, j, x)
        } else {
            e.set(i, j, x)
        }
    };
    let norm = star.matrix_norm();
    let degree = l.max_support_degree().max(1) as f64;
    let mut r = rng(seed, 1);
    let mut best = 0.0f64;
    for m in 1..=MAX_HALVINGS {
        let budget = eps0 * libm::exp2(-(m as f64));
        let t = budget / norm;
        let b = budget / (2.0 * degree);
        let mut e = PerturbationTuple::new();
        for &(i, j) in &support {
            set(&mut e, i, j, -t * star.get(i, j));
        }
        for draw in 0..=JITTER_DRAWS {
            let mut cand = e.clone();
            if draw > 0 {
                for &(i, j) in &support {
                    let base = *cand.get(i, j).expect("support key");
                    set(&mut cand, i, j, base + open_closed(&mut r, b));
                }
            }
            let delta = l.structural_perturbation(&cand)?;
            if delta.matrix_norm() >= eps0 {
                continue;
            }
            let (gap, zeros) = check(&l.add(&delta))?;
            best = best.max(gap.min_gap);
            let stage = if draw == 0 { Stage::Scale } else { Stage::Jitter };
            trace.push(stage, None, t, gap.min_gap, zeros);
            if gap.simple {
                return Ok((cand, gap, m));
            }
        }
    }
    Err(Error::BudgetExhausted { best })
}

fn directed_gap<T: eigen::SpectralValue>(s: &eigen::SpectralDecomposition<T>, tau_gap: f64) -> GapReport {
    gap_report(s, tau_gap.max(DIRECTED_GAP_FLOOR))
}

/// Directed counterpart of [`perturb_to_simple`].
///
/// The reference matrix lives on a diverging spanning tree: tree arcs carry
/// the distinct weights `1, …, n-1` (longest directed path first), so the
/// tree Laplacian is triangular in breadth-first order with spectrum
/// `{0, 1, …, n-1}`. Remaining arcs get small weights. Gaps are complex
/// distances and must exceed `max(tau_gap, DIRECTED_GAP_FLOOR)·scale`.
pub fn perturb_to_simple_directed(
    l: &LaplacianMatrix<f64>,
    eps0: f64,
    tau_gap: f64,
    seed: u64,
) -> Result<PerturbationResult> {
    let g = l.to_digraph()?;
    if !g.is_weakly_connected() {
        return Err(Error::NotConnected);
    }
    let (root, tree) = g.diverging_spanning_tree().ok_or(Error::NoDivergingTree)?;
    let mut directed = l.clone();
    if !directed.is_directed() {
        directed = LaplacianMatrix::from_digraph(&g);
    }
    let s = eigen::general_spectrum(&directed)?;
    let gap = directed_gap(&s, tau_gap);
    if gap.simple {
        return finish(&directed, zero_tuple(&directed), gap, 0, tau_gap, ConstructionTrace::default());
    }

    let n = g.n();
    let mut trace = ConstructionTrace::default();
    let path = longest_directed_path(root, &tree);
    let schedule = branch_schedule(&underlying_tree(&tree)?, &path)?;
    // (row, col) = (head, tail)
    let mut w: BTreeMap<(usize, usize), f64> = BTreeMap::new();
    let mut next = 1.0;
    for (a, b) in path.edges() {
        w.insert((b, a), next);
        trace.push(Stage::Path, Some((a, b)), next, 1.0, 0);
        next += 1.0;
    }
    for step in &schedule.steps {
        w.insert((step.new_node, step.attach), next);
        trace.push(Stage::Branch, Some((step.attach, step.new_node)), next, 1.0, 0);
        next += 1.0;
    }
    let extra: Vec<(usize, usize)> = l.support().into_iter().filter(|k| !w.contains_key(k)).collect();
    let mut r = rng(seed, 0);
    let mut star = None;
    let mut shrink = 1.0;
    for _ in 0..=MAX_RETRIES {
        let mut trial = w.clone();
        for &k in &extra {
            trial.insert(k, RHO * RHO * shrink * (0.5 + 0.5 * r.gen::<f64>()));
        }
        let cand = directed_from(n, &trial);
        let s = eigen::general_spectrum(&cand)?;
        let gap = directed_gap(&s, tau_gap);
        if gap.simple {
            for &(row, col) in &extra {
                trace.push(Stage::NonTree, Some((col, row)), trial[&(row, col)], gap.min_gap, s.zero_count(tau_gap));
            }
            star = Some(cand);
            break;
        }
        shrink *= 0.1;
    }
    let star = star.ok_or(Error::ScheduleExhausted(root, root, 0.0))?;
    scale_search(&directed, &star, eps0, seed, &mut trace, |m| {
        let s = eigen::general_spectrum(m)?;
        Ok((directed_gap(&s, tau_gap), s.zero_count(tau_gap)))
    })
    .and_then(|(e, gap, attempts)| finish(&directed, e, gap, attempts, tau_gap, trace))
}

fn directed_from(n: usize, w: &BTreeMap<(usize, usize), f64>) -> LaplacianMatrix<f64> {
    let mut entries = alloc::vec![0.0; n * n];
    for (&(row, col), &x) in w {
        entries[row * n + col] = -x;
        entries[row * n + row] += x;
    }
    LaplacianMatrix::from_entries(n, entries, true).expect("rows sum to zero by construction")
}

/// Which eigenvectors must avoid zero entries.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Target {
    Fiedler,
    Basis,
}

/// Smallest ratio `|v_i| / ‖v‖∞` over the targeted eigenvectors, or `None`
/// when a targeted eigenvalue is not simple.
fn target_ratio(s: &eigen::SpectralDecomposition<f64>, target: Target, tau_gap: f64) -> Option<f64> {
    let n = s.len();
    let ks = match target {
        Target::Fiedler => 1..2.min(n),
        Target::Basis => 1..n,
    };
    let mut worst = f64::INFINITY;
    for k in ks {
        if !s.is_simple_at(k, tau_gap) {
            return None;
        }
        let v = s.vector(k);
        let inf = v.iter().fold(0.0f64, |m, x| m.max(x.abs()));
        worst = worst.min(eigen::min_abs_entry(v).0 / inf);
    }
    Some(worst)
}

fn perturb_nonzero(
    l: &LaplacianMatrix<f64>,
    eps0: f64,
    tau_gap: f64,
    tau_v: f64,
    seed: u64,
    target: Target,
) -> Result<PerturbationResult> {
    let first = perturb_to_simple(l, eps0 / 2.0, tau_gap, seed)?;
    let mut trace = first.trace.clone();
    let s = eigen::sym_spectrum(&first.result)?;
    if let Some(ratio) = target_ratio(&s, target, tau_gap) {
        if ratio > tau_v && first.gap.simple {
            return Ok(first);
        }
    }

    if s.len() > 2 {
        let v = s.vector(1);
        for (i, j) in l.support() {
            let d = v[i] - v[j];
            trace.push(Stage::Derivative, Some((i, j)), d * d, first.gap.min_gap, 1);
        }
    }

    let support = l.support();
    let max_deg = l.max_support_degree().max(1) as f64;
    let mut r = rng(seed, 2);
    let mut best = 0.0f64;
    for m in 0..MAX_ROUNDS {
        let b = eps0 / (4.0 * max_deg) * libm::exp2(-(m as f64));
        let mut e = first.perturbation.clone();
        for &(i, j) in &support {
            let base = e.get(i, j).copied().unwrap_or(0.0);
            e.set(i, j, base + open_closed(&mut r, b));
        }
        let delta = l.structural_perturbation(&e)?;
        if delta.matrix_norm() >= eps0 {
            continue;
        }
        let s = eigen::sym_spectrum(&l.add(&delta))?;
        let gap = gap_report(&s, tau_gap);
        let ratio = target_ratio(&s, target, tau_gap);
        trace.push(Stage::Round, None, b, gap.min_gap, s.zero_count(tau_gap));
        if let Some(ratio) = ratio {
            best = best.max(ratio);
            if ratio > tau_v && gap.simple {
                return finish(l, e, gap, first.attempts + m + 1, tau_gap, trace);
            }
        }
    }
    Err(Error::BudgetExhausted { best })
}

/// Same-support perturbation of norm below `eps0` with a simple spectrum and
/// a Fiedler vector whose entries all exceed `tau_v·‖v‖∞` in magnitude.
pub fn perturb_fiedler_nonzero(
    l: &LaplacianMatrix<f64>,
    eps0: f64,
    tau_gap: f64,
    tau_v: f64,
    seed: u64,
) -> Result<PerturbationResult> {
    perturb_nonzero(l, eps0, tau_gap, tau_v, seed, Target::Fiedler)
}

/// As [`perturb_fiedler_nonzero`] but for the eigenvectors of every nonzero
/// eigenvalue.
pub fn perturb_basis_nonzero(
    l: &LaplacianMatrix<f64>,
    eps0: f64,
    tau_gap: f64,
    tau_v: f64,
    seed: u64,
) -> Result<PerturbationResult> {
    perturb_nonzero(l, eps0, tau_gap, tau_v, seed, Target::Basis)
}

/// Sign partition induced by a non-degenerate Fiedler vector.
#[derive(Debug, Clone, PartialEq)]
pub struct FiedlerCut {
    pub positive: Vec<usize>,
    pub negative: Vec<usize>,
    pub cut_edges: Vec<(usize, usize)>,
    pub lambda2: f64,
    pub vector: Vec<f64>,
    pub positive_connected: bool,
    pub negative_connected: bool,
}

pub fn fiedler_cut(l: &LaplacianMatrix<f64>, tau_gap: f64, tau_v: f64) -> Result<FiedlerCut> {
    let g = support_graph(l)?;
    let (lambda2, v) = eigen::fiedler_with(l, tau_gap, tau_v)?;
    let inf = v.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    if let Some(index) = v.iter().position(|x| x.abs() <= tau_v * inf) {
        return Err(Error::DegenerateFiedler { index });
    }
    let positive: Vec<usize> = (0..v.len()).filter(|&i| v[i] > 0.0).collect();
    let negative: Vec<usize> = (0..v.len()).filter(|&i| v[i] < 0.0).collect();
    let cut_edges = l.support().into_iter().filter(|&(i, j)| v[i] * v[j] < 0.0).collect();
    let induced_connected = |side: &[usize]| {
        let mut keep = alloc::vec![false; g.n()];
        for &i in side {
            keep[i] = true;
        }
        let mut index = alloc::vec![usize::MAX; g.n()];
        for (k, &i) in side.iter().enumerate() {
            index[i] = k;
        }
        let edges = g
            .edges()
            .iter()
            .filter(|e| keep[e.i] && keep[e.j])
            .map(|e| (index[e.i], index[e.j], e.w));
        !side.is_empty() && WeightedGraph::new(side.len(), edges).map(|h| h.is_connected()).unwrap_or(false)
    };
    Ok(FiedlerCut {
        positive_connected: induced_connected(&positive),
        negative_connected: induced_connected(&negative),
        positive,
        negative,
        cut_edges,
        lambda2,
        vector: v,
    })
}
