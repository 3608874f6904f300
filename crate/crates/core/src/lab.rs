//! Seeded Monte Carlo campaigns over random structural perturbations.
//!
//! Trial `k` draws from a ChaCha8 stream selected by `k` under the master
//! seed, so any partition of the trials across workers reproduces the same
//! samples, and aggregation only uses sums and minima.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::eigen::{self, gap_report};
use crate::exact;
use crate::graph::WeightedGraph;
use crate::laplacian::{LaplacianMatrix, PerturbationTuple};
use crate::scalar::Rational;
use crate::{Error, Result};

/// Denominator of the rational lattice used in exact mode.
pub const LATTICE: i64 = 1_000_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EpsDistribution {
    /// `ε` uniform in `(0, ε₀]`.
    Uniform,
    /// `ε` uniform in `(-w/2, ε₀]`, so perturbed weights stay above `w/2`.
    WeightRelative,
}

impl EpsDistribution {
    pub fn name(&self) -> &'static str {
        match self {
            Self::Uniform => "uniform",
            Self::WeightRelative => "weight-relative",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Experiment {
    Simplicity,
    FiedlerZero,
    FiedlerDistinct,
    SubgraphDisjoint,
}

impl Experiment {
    pub fn name(&self) -> &'static str {
        match self {
            Self::Simplicity => "simplicity",
            Self::FiedlerZero => "fiedler-zero",
            Self::FiedlerDistinct => "fiedler-distinct",
            Self::SubgraphDisjoint => "subgraph-disjoint",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrialConfig {
    pub graph: WeightedGraph<f64>,
    /// Exact weights; required for exact mode.
    pub exact_graph: Option<WeightedGraph<Rational>>,
    pub trials: usize,
    pub eps0: f64,
    pub distribution: EpsDistribution,
    pub tau_gap: f64,
    pub tau_v: f64,
    pub seed: u64,
    pub exact_mode: bool,
    /// Node removed for the subgraph experiment; defaults to the last node.
    pub drop_node: Option<usize>,
}

impl TrialConfig {
    pub fn new(graph: WeightedGraph<f64>) -> Self {
        Self {
            graph,
            exact_graph: None,
            trials: 1000,
            eps0: 0.1,
            distribution: EpsDistribution::WeightRelative,
            tau_gap: eigen::TAU_GAP,
            tau_v: eigen::TAU_V,
            seed: 0,
            exact_mode: false,
            drop_node: None,
        }
    }

    /// Uses exact weights; enables exact mode.
    pub fn exact(graph: WeightedGraph<Rational>) -> Self {
        let mut cfg = Self::new(graph.to_real());
        cfg.exact_graph = Some(graph);
        cfg.exact_mode = true;
        cfg
    }

    pub fn drop_node(&self) -> usize {
        self.drop_node.unwrap_or(self.graph.n() - 1)
    }

    pub fn validate(&self, experiment: Experiment) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::InvalidConfig("at least one trial is required".into()));
        }
        if !(self.eps0 >= 0.0 && self.eps0.is_finite()) {
            return Err(Error::InvalidConfig(format!("budget {} must be finite and non-negative", self.eps0)));
        }
        if !self.graph.is_connected() {
            return Err(Error::NotConnected);
        }
        if self.exact_mode && self.exact_graph.is_none() {
            return Err(Error::InvalidConfig("exact mode needs rational weights".into()));
        }
        if experiment != Experiment::Simplicity && self.graph.n() < 2 {
            return Err(Error::InvalidConfig(format!("{} needs at least two nodes", experiment.name())));
        }
        if self.drop_node() >= self.graph.n() {
            return Err(Error::InvalidConfig(format!("drop node {} out of range", self.drop_node())));
        }
        Ok(())
    }

    pub fn label(&self) -> &'static str {
        if self.exact_mode {
            "rational lattice probe"
        } else {
            "continuum probe"
        }
    }
}

/// Everything measured in one trial.
#[derive(Debug, Clone, PartialEq)]
pub struct TrialOutcome {
    pub index: usize,
    pub min_gap: f64,
    pub scale: f64,
    pub degenerate: bool,
    pub lambda2_degenerate: bool,
    /// Smallest `|v_i|` of the unit Fiedler vector when `λ₂` is simple.
    pub min_entry: Option<f64>,
    pub fiedler_zero: bool,
    /// Two Fiedler coordinates within tolerance, or `λ₂` degenerate (a
    /// multi-dimensional eigenspace always holds a vector with `v_i = v_j`).
    pub fiedler_repeated: bool,
    pub min_cross: Option<f64>,
    pub subgraph_hit: bool,
    /// Exact verdict for the experiment's property, in exact mode.
    pub exact_hit: Option<bool>,
    /// Some eigenvector vanishes exactly somewhere (exact fiedler-zero only).
    pub exact_basis_zero: Option<bool>,
}

fn trial_rng(seed: u64, index: usize) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(index as u64);
    r
}

fn sample_real(cfg: &TrialConfig, r: &mut ChaCha8Rng) -> PerturbationTuple<f64> {
    let mut e = PerturbationTuple::new();
    for edge in cfg.graph.edges() {
        let eps = if cfg.eps0 == 0.0 {
            0.0
        } else {
            let u: f64 = r.gen();
            match cfg.distribution {
                EpsDistribution::Uniform => cfg.eps0 * (1.0 - u),
                EpsDistribution::WeightRelative => cfg.eps0 - (cfg.eps0 + edge.w / 2.0) * u,
            }
        };
        e.set(edge.i, edge.j, eps);
    }
    e
}

fn sample_exact(cfg: &TrialConfig, g: &WeightedGraph<Rational>, r: &mut ChaCha8Rng) -> PerturbationTuple<Rational> {
    let lattice = BigInt::from(LATTICE);
    let k_max = libm::floor(cfg.eps0 * LATTICE as f64) as i64;
    let mut e = PerturbationTuple::new();
    for edge in g.edges() {
        let k = if cfg.eps0 == 0.0 {
            0
        } else {
            let lo = match cfg.distribution {
                EpsDistribution::Uniform => 1,
                EpsDistribution::WeightRelative => {
                    let half = -(edge.w.clone() * Rational::from_integer(lattice.clone()))
                        / Rational::from_integer(BigInt::from(2));
                    half.floor().to_integer().to_i64().unwrap_or(i64::MIN / 2) + 1
                }
            };
            r.gen_range(lo..=k_max.max(lo))
        };
        e.set(edge.i, edge.j, Rational::new(BigInt::from(k), lattice.clone()));
    }
    e
}

/// Runs trial `index`; the result depends only on `(cfg, experiment, index)`.
pub fn run_trial(cfg: &TrialConfig, experiment: Experiment, index: usize) -> Result<TrialOutcome> {
    let mut r = trial_rng(cfg.seed, index);
    let (lf, lq) = match (&cfg.exact_graph, cfg.exact_mode) {
        (Some(g), true) => {
            let e = sample_exact(cfg, g, &mut r);
            let lq = LaplacianMatrix::from_graph(g).apply_perturbation(&e)?;
            (lq.to_real(), Some(lq))
        }
        _ => {
            let e = sample_real(cfg, &mut r);
            (LaplacianMatrix::from_graph(&cfg.graph).apply_perturbation(&e)?, None)
        }
    };

    let s = eigen::sym_spectrum(&lf)?;
    let gap = gap_report(&s, cfg.tau_gap);
    let cut = cfg.tau_gap * gap.scale;
    let n = s.len();
    let lambda2_simple = n >= 2
        && s.eigenvalues[1] > cut
        && (n == 2 || s.eigenvalues[2] - s.eigenvalues[1] > cut);

    let mut out = TrialOutcome {
        index,
        min_gap: gap.min_gap,
        scale: gap.scale,
        degenerate: !gap.simple,
        lambda2_degenerate: n >= 2 && !lambda2_simple,
        min_entry: None,
        fiedler_zero: false,
        fiedler_repeated: n >= 2 && !lambda2_simple,
        min_cross: None,
        subgraph_hit: false,
        exact_hit: None,
        exact_basis_zero: None,
    };

    if lambda2_simple {
        let v = s.vector(1);
        let inf = v.iter().fold(0.0f64, |m, x| m.max(x.abs()));
        let (min_abs, _) = eigen::min_abs_entry(v);
        out.min_entry = Some(min_abs);
        out.fiedler_zero = min_abs <= cfg.tau_v * inf;
        let mut sorted = v.to_vec();
        sorted.sort_by(f64::total_cmp);
        out.fiedler_repeated = sorted.windows(2).any(|w| w[1] - w[0] <= cfg.tau_v * inf);
    }

    if experiment == Experiment::SubgraphDisjoint {
        let drop = cfg.drop_node();
        let sub = eigen::sym_eigenvalues(&lf.induced_without(drop)?)?;
        let full = &s.eigenvalues[1..];
        let mut cross = f64::INFINITY;
        for a in &sub[1..] {
            for b in full {
                cross = cross.min((a - b).abs());
            }
        }
        out.min_cross = Some(cross);
        out.subgraph_hit = cross <= cut;
    }

    if let Some(lq) = &lq {
        match experiment {
            Experiment::Simplicity => out.exact_hit = Some(!exact::is_simple_exact(lq)),
            Experiment::FiedlerZero => {
                let simple = exact::is_simple_exact(lq);
                out.exact_hit = Some(!simple);
                if simple {
                    out.exact_basis_zero = Some(exact::first_eigenbasis_zero(lq).is_some());
                }
            }
            Experiment::FiedlerDistinct => {}
            Experiment::SubgraphDisjoint => {
                out.exact_hit = Some(!exact::is_subgraph_disjoint_exact(lq, cfg.drop_node())?)
            }
        }
    }
    Ok(out)
}

/// Counts per decade bucket. `counts[k]` covers `[edges[k-1], edges[k])`,
/// with the first bucket open below and the last open above.
#[derive(Debug, Clone, PartialEq)]
pub struct Histogram {
    pub edges: Vec<f64>,
    pub counts: Vec<usize>,
}

impl Histogram {
    fn decades() -> Self {
        let edges: Vec<f64> = [-12, -10, -8, -6, -4, -2, 0].iter().map(|&e| libm::pow(10.0, e as f64)).collect();
        let counts = alloc::vec![0; edges.len() + 1];
        Self { edges, counts }
    }

    fn add(&mut self, x: f64) {
        let k = self.edges.iter().take_while(|&&e| x >= e).count();
        self.counts[k] += 1;
    }

    pub fn total(&self) -> usize {
        self.counts.iter().sum()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConfigEcho {
    pub n: usize,
    pub edges: usize,
    pub trials: usize,
    pub eps0: f64,
    pub distribution: &'static str,
    pub tau_gap: f64,
    pub tau_v: f64,
    pub seed: u64,
    pub exact_mode: bool,
    pub drop_node: Option<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrialReport {
    pub experiment: Experiment,
    pub label: &'static str,
    /// The property under test is conjectured rather than proved.
    pub conjecture: bool,
    pub config: ConfigEcho,
    pub trials: usize,
    /// Floating-point hits for the experiment's property.
    pub hits: usize,
    /// Exact hits for the experiment's property, in exact mode.
    pub exact_hits: Option<usize>,
    pub degenerate_spectrum: usize,
    pub degenerate_lambda2: usize,
    pub fiedler_zero: usize,
    pub fiedler_repeated: usize,
    pub subgraph_intersection: Option<usize>,
    /// Trials whose eigenbasis has an exactly vanishing entry; an upper
    /// bound for exact Fiedler zeros.
    pub exact_eigenbasis_zero: Option<usize>,
    pub min_gap: f64,
    pub min_relative_gap: f64,
    pub min_entry: Option<f64>,
    pub min_cross: Option<f64>,
    /// Relative gaps `min_gap / scale`.
    pub gap_histogram: Histogram,
    /// Smallest unit Fiedler entries.
    pub entry_histogram: Histogram,
    pub anomaly: Option<String>,
}

fn min_opt(a: Option<f64>, b: Option<f64>) -> Option<f64> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.min(y)),
        (x, None) => x,
        (None, y) => y,
    }
}

fn count_opt(acc: Option<usize>, hit: Option<bool>) -> Option<usize> {
    match hit {
        Some(h) => Some(acc.unwrap_or(0) + usize::from(h)),
        None => acc,
    }
}

/// Folds outcomes in any order into a report.
pub fn aggregate<'a>(
    cfg: &TrialConfig,
    experiment: Experiment,
    outcomes: impl IntoIterator<Item = &'a TrialOutcome>,
) -> TrialReport {
    let mut rep = TrialReport {
        experiment,
        label: cfg.label(),
        conjecture: experiment == Experiment::FiedlerDistinct,
        config: ConfigEcho {
            n: cfg.graph.n(),
            edges: cfg.graph.edge_count(),
            trials: cfg.trials,
            eps0: cfg.eps0,
            distribution: cfg.distribution.name(),
            tau_gap: cfg.tau_gap,
            tau_v: cfg.tau_v,
            seed: cfg.seed,
            exact_mode: cfg.exact_mode,
            drop_node: (experiment == Experiment::SubgraphDisjoint).then(|| cfg.drop_node()),
        },
        trials: 0,
        hits: 0,
        exact_hits: None,
        degenerate_spectrum: 0,
        degenerate_lambda2: 0,
        fiedler_zero: 0,
        fiedler_repeated: 0,
        subgraph_intersection: None,
        exact_eigenbasis_zero: None,
        min_gap: f64::INFINITY,
        min_relative_gap: f64::INFINITY,
        min_entry: None,
        min_cross: None,
        gap_histogram: Histogram::decades(),
        entry_histogram: Histogram::decades(),
        anomaly: None,
    };
    for o in outcomes {
        rep.trials += 1;
        rep.degenerate_spectrum += usize::from(o.degenerate);
        rep.degenerate_lambda2 += usize::from(o.lambda2_degenerate);
        rep.fiedler_zero += usize::from(o.fiedler_zero);
        rep.fiedler_repeated += usize::from(o.fiedler_repeated);
        if o.min_cross.is_some() {
            rep.subgraph_intersection = Some(rep.subgraph_intersection.unwrap_or(0) + usize::from(o.subgraph_hit));
        }
        rep.exact_hits = count_opt(rep.exact_hits, o.exact_hit);
        rep.exact_eigenbasis_zero = count_opt(rep.exact_eigenbasis_zero, o.exact_basis_zero);
        rep.min_gap = rep.min_gap.min(o.min_gap);
        rep.min_relative_gap = rep.min_relative_gap.min(o.min_gap / o.scale);
        rep.min_entry = min_opt(rep.min_entry, o.min_entry);
        rep.min_cross = min_opt(rep.min_cross, o.min_cross);
        rep.gap_histogram.add(o.min_gap / o.scale);
        if let Some(m) = o.min_entry {
            rep.entry_histogram.add(m);
        }
    }
    rep.hits = match experiment {
        Experiment::Simplicity => rep.degenerate_spectrum,
        Experiment::FiedlerZero => rep.fiedler_zero,
        Experiment::FiedlerDistinct => rep.fiedler_repeated,
        Experiment::SubgraphDisjoint => rep.subgraph_intersection.unwrap_or(0),
    };
    if experiment == Experiment::Simplicity && cfg.eps0 > 0.0 {
        if let Some(k) = rep.exact_hits.filter(|k| !k.is_zero()) {
            rep.anomaly = Some(format!(
                "{k} exact degenerate spectra on the rational lattice: rational points of the degenerate variety were sampled"
            ));
        }
    }
    rep
}

/// Runs every trial in index order.
pub fn run_serial(cfg: &TrialConfig, experiment: Experiment) -> Result<(TrialReport, Vec<TrialOutcome>)> {
    cfg.validate(experiment)?;
    let outcomes = (0..cfg.trials)
        .map(|k| run_trial(cfg, experiment, k))
        .collect::<Result<Vec<_>>>()?;
    Ok((aggregate(cfg, experiment, &outcomes), outcomes))
}

pub fn mc_simplicity(cfg: &TrialConfig) -> Result<TrialReport> {
    run_serial(cfg, Experiment::Simplicity).map(|r| r.0)
}

pub fn mc_fiedler_zero(cfg: &TrialConfig) -> Result<TrialReport> {
    run_serial(cfg, Experiment::FiedlerZero).map(|r| r.0)
}

pub fn mc_fiedler_distinct(cfg: &TrialConfig) -> Result<TrialReport> {
    run_serial(cfg, Experiment::FiedlerDistinct).map(|r| r.0)
}

pub fn mc_subgraph_disjoint(cfg: &TrialConfig) -> Result<TrialReport> {
    run_serial(cfg, Experiment::SubgraphDisjoint).map(|r| r.0)
}
