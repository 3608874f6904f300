//! Subcommands. [`run`] returns what the binary prints, so tests can drive
//! commands in process.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use lapgen_core::eigen::{self, gap_report, TAU_GAP, TAU_V};
use lapgen_core::exact::simplicity_certificate;
use lapgen_core::generate::{self, Weights};
use lapgen_core::lab::{EpsDistribution, Experiment, TrialConfig};
use lapgen_core::perturb::{self, fiedler_cut, PerturbationResult};
use lapgen_core::{Error, LaplacianMatrix, Rational};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::campaign::{outcomes_csv, run_parallel};
use crate::export::matrix_market;
use crate::format::{self, format_rational, parse_graph, write_graph, GraphFile};
use crate::json::{float, to_canonical};
use crate::manifest::RunManifest;
use crate::report;

pub const EXIT_OK: i32 = 0;
pub const EXIT_OTHER: i32 = 1;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;
pub const EXIT_STRUCTURE: i32 = 4;
pub const EXIT_DEGENERATE: i32 = 5;

#[derive(Debug, Parser)]
#[command(name = "lapgen", version, about = "Structural perturbation of weighted graph Laplacians")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Eigenvalues, gap report and Fiedler vector of a graph file.
    Spectrum(SpectrumArgs),
    /// Same-support perturbation with a target property.
    Perturb(PerturbArgs),
    /// Sign cut induced by the Fiedler vector.
    Partition(PartitionArgs),
    /// Monte Carlo probe over random structural perturbations.
    Mc(McArgs),
    /// Writes a graph from a standard family.
    Gen(GenArgs),
    /// Writes the Laplacian of a graph file in a matrix format.
    Export(ExportArgs),
}

#[derive(Debug, Args)]
pub struct SpectrumArgs {
    pub file: PathBuf,
    /// Adds the exact simplicity certificate.
    #[arg(long)]
    pub exact: bool,
    #[arg(long)]
    pub json: bool,
    #[arg(long, default_value_t = TAU_GAP)]
    pub tol: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PerturbMode {
    Simple,
    Fiedler,
    Basis,
    DirectedSimple,
}

#[derive(Debug, Args)]
pub struct PerturbArgs {
    pub file: PathBuf,
    #[arg(value_enum)]
    pub mode: PerturbMode,
    /// Budget ε₀ on the largest entry of the change in L.
    #[arg(long, default_value_t = 1e-2)]
    pub eps: f64,
    /// Relative tolerance for eigenvalue gaps and eigenvector entries.
    #[arg(long, default_value_t = TAU_GAP)]
    pub tol: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Writes the perturbed graph file here.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Certifies the written weights exactly.
    #[arg(long)]
    pub certify: bool,
}

#[derive(Debug, Args)]
pub struct PartitionArgs {
    pub file: PathBuf,
    /// Perturbs degenerate inputs first.
    #[arg(long)]
    pub auto_perturb: bool,
    #[arg(long, default_value_t = 1e-2)]
    pub eps: f64,
    #[arg(long, default_value_t = TAU_GAP)]
    pub tol: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ExperimentArg {
    Simplicity,
    FiedlerZero,
    FiedlerDistinct,
    SubgraphDisjoint,
}

impl From<ExperimentArg> for Experiment {
    fn from(e: ExperimentArg) -> Self {
        match e {
            ExperimentArg::Simplicity => Experiment::Simplicity,
            ExperimentArg::FiedlerZero => Experiment::FiedlerZero,
            ExperimentArg::FiedlerDistinct => Experiment::FiedlerDistinct,
            ExperimentArg::SubgraphDisjoint => Experiment::SubgraphDisjoint,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DistributionArg {
    Uniform,
    WeightRelative,
}

#[derive(Debug, Args)]
pub struct McArgs {
    pub file: PathBuf,
    #[arg(value_enum)]
    pub experiment: ExperimentArg,
    #[arg(long, default_value_t = 1000)]
    pub trials: usize,
    #[arg(long, default_value_t = 0.1)]
    pub eps: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Samples a rational lattice and adds exact verdicts.
    #[arg(long)]
    pub exact: bool,
    /// 1-based node removed in the subgraph experiment; defaults to the last.
    #[arg(long)]
    pub drop_node: Option<usize>,
    #[arg(long, default_value_t = TAU_GAP)]
    pub tau_gap: f64,
    #[arg(long, default_value_t = TAU_V)]
    pub tau_v: f64,
    #[arg(long, value_enum, default_value_t = DistributionArg::WeightRelative)]
    pub distribution: DistributionArg,
    /// Worker threads; 0 uses every core.
    #[arg(long, default_value_t = 0)]
    pub threads: usize,
    /// Writes per-trial rows here.
    #[arg(long)]
    pub csv: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Family {
    Path,
    Cycle,
    Star,
    Complete,
    RandomTree,
    Gnp,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum WeightsArg {
    Unit,
    Random,
}

#[derive(Debug, Args)]
pub struct GenArgs {
    #[arg(value_enum)]
    pub family: Family,
    pub n: usize,
    /// Edge probability for gnp.
    #[arg(long)]
    pub p: Option<f64>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_enum, default_value_t = WeightsArg::Unit)]
    pub weights: WeightsArg,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ExportFormat {
    MatrixMarket,
}

#[derive(Debug, Args)]
pub struct ExportArgs {
    pub file: PathBuf,
    #[arg(long, value_enum, default_value_t = ExportFormat::MatrixMarket)]
    pub format: ExportFormat,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("{message}")]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    fn new(code: i32, message: impl Into<String>) -> Self {
        Self { code, message: message.into() }
    }
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::BudgetExhausted { .. } | Error::ScheduleExhausted(..) | Error::ConvergenceFailure { .. } => EXIT_BUDGET,
        Error::NotConnected
        | Error::Disconnected
        | Error::NoDivergingTree
        | Error::NotATree
        | Error::PathNotInTree
        | Error::SupportViolation(..)
        | Error::NotSymmetric => EXIT_STRUCTURE,
        Error::DegenerateLambda2 { .. } | Error::DegenerateLambda { .. } | Error::DegenerateFiedler { .. } => {
            EXIT_DEGENERATE
        }
        Error::InvalidGraph(_) => EXIT_PARSE,
        _ => EXIT_OTHER,
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        // library indices are 0-based
        let message = match &e {
            Error::DegenerateFiedler { index } => format!("Fiedler vector has a zero entry at node {}", index + 1),
            Error::SupportViolation(i, j) => format!("perturbation names pair ({}, {}) outside the support", i + 1, j + 1),
            Error::ScheduleExhausted(i, j, gap) => {
                format!("attachment schedule exhausted on edge ({}, {}); last gap {gap:e}", i + 1, j + 1)
            }
            _ => e.to_string(),
        };
        Self::new(exit_code(&e), message)
    }
}

/// What a command prints.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Output {
    pub stdout: String,
    pub warnings: Vec<String>,
}

impl Output {
    fn text(stdout: String) -> Self {
        Self { stdout, warnings: Vec::new() }
    }
}

struct Input {
    bytes: Vec<u8>,
    graph: GraphFile,
}

fn read_input(path: &Path) -> Result<Input, CliError> {
    let bytes =
        std::fs::read(path).map_err(|e| CliError::new(EXIT_OTHER, format!("cannot read {}: {e}", path.display())))?;
    let text = std::str::from_utf8(&bytes)
        .map_err(|_| CliError::new(EXIT_PARSE, format!("{}: not UTF-8 text", path.display())))?;
    let graph = parse_graph(text).map_err(|e| CliError::new(EXIT_PARSE, format!("{}: {e}", path.display())))?;
    Ok(Input { bytes, graph })
}

fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    std::fs::write(path, contents)
        .map_err(|e| CliError::new(EXIT_OTHER, format!("cannot write {}: {e}", path.display())))
}

fn exact_laplacian(g: &GraphFile) -> LaplacianMatrix<Rational> {
    match g {
        GraphFile::Undirected(g) => LaplacianMatrix::from_graph(g),
        GraphFile::Directed(g) => LaplacianMatrix::from_digraph(g),
    }
}

fn with_manifest(mut body: Value, manifest: &RunManifest) -> String {
    body["manifest"] = manifest.to_json();
    to_canonical(&body)
}

fn path_flag(p: &Path) -> Value {
    json!(p.display().to_string())
}

pub fn run(cli: Cli) -> Result<Output, CliError> {
    match cli.command {
        Command::Spectrum(a) => spectrum(a),
        Command::Perturb(a) => perturb_cmd(a),
        Command::Partition(a) => partition(a),
        Command::Mc(a) => mc(a),
        Command::Gen(a) => gen(a),
        Command::Export(a) => export(a),
    }
}

fn sci(x: f64) -> String {
    format!("{x:.16e}")
}

fn spectrum(a: SpectrumArgs) -> Result<Output, CliError> {
    let input = read_input(&a.file)?;
    let lq = exact_laplacian(&input.graph);
    let l = lq.to_real();
    let manifest = RunManifest::new("spectrum")
        .flag("file", path_flag(&a.file))
        .flag("exact", a.exact)
        .flag("json", a.json)
        .flag("tol", float(a.tol))
        .input(&input.bytes);
    let mut warnings = Vec::new();
    let certificate = a.exact.then(|| simplicity_certificate(&lq));
    let cert_line = certificate.as_ref().map(|c| {
        let verdict = if c.verdict { "SIMPLE" } else { "DEGENERATE" };
        format!("{verdict} (Discr = {})", format_rational(&c.value))
    });

    let mut body = json!({
        "n": l.n(),
        "edges": input.graph.edge_count(),
        "directed": l.is_directed(),
        "certificate": certificate.as_ref().map_or(Value::Null, report::certificate_json),
    });
    let mut text = String::new();
    let _ = writeln!(
        text,
        "graph: n = {}, m = {}, {}",
        l.n(),
        input.graph.edge_count(),
        if l.is_directed() { "directed" } else { "undirected" }
    );

    if l.is_directed() {
        let s = eigen::general_spectrum(&l)?;
        let gap = gap_report(&s, a.tol);
        let zeros = s.zero_count(a.tol);
        let _ = writeln!(text, "eigenvalues:");
        for z in &s.eigenvalues {
            let _ = writeln!(text, "  {} {:+.16e}i", sci(z.re), z.im);
        }
        body["eigenvalues"] =
            Value::Array(s.eigenvalues.iter().map(|z| json!({"re": float(z.re), "im": float(z.im)})).collect());
        body["gap"] = report::gap_json(&gap);
        body["zero_multiplicity"] = json!(zeros);
        body["max_residual"] = float(s.max_residual());
        let _ = writeln!(text, "zero multiplicity: {zeros}");
        let _ = writeln!(text, "min gap: {} (scale {}): {}", sci(gap.min_gap), sci(gap.scale), simple_word(gap.simple));
    } else {
        let g = match &input.graph {
            GraphFile::Undirected(g) => g,
            GraphFile::Directed(_) => unreachable!(),
        };
        let s = eigen::sym_spectrum(&l)?;
        let gap = gap_report(&s, a.tol);
        let components = g.component_count();
        let zeros = s.zero_count(a.tol);
        if components > 1 {
            warnings.push(format!(
                "warning: graph is not connected ({components} components); eigenvalue 0 has multiplicity {zeros}"
            ));
        }
        let _ = writeln!(text, "eigenvalues:");
        for x in &s.eigenvalues {
            let _ = writeln!(text, "  {}", sci(*x));
        }
        let _ = writeln!(text, "zero multiplicity: {zeros} ({components} components)");
        let _ = writeln!(text, "min gap: {} (scale {}): {}", sci(gap.min_gap), sci(gap.scale), simple_word(gap.simple));
        body["eigenvalues"] = Value::Array(s.eigenvalues.iter().map(|&x| float(x)).collect());
        body["gap"] = report::gap_json(&gap);
        body["zero_multiplicity"] = json!(zeros);
        body["components"] = json!(components);
        body["max_residual"] = float(s.max_residual());
        body["fiedler"] = match eigen::fiedler_with(&l, a.tol, TAU_V) {
            Ok((lambda2, v)) => {
                let (m, at) = eigen::min_abs_entry(&v);
                let _ = writeln!(text, "fiedler value: {}", sci(lambda2));
                let _ = writeln!(text, "fiedler vector:");
                for x in &v {
                    let _ = writeln!(text, "  {}", sci(*x));
                }
                json!({
                    "status": "simple",
                    "lambda2": float(lambda2),
                    "vector": v.iter().map(|&x| float(x)).collect::<Vec<_>>(),
                    "min_abs_entry": float(m),
                    "min_abs_node": at + 1,
                })
            }
            Err(Error::DegenerateLambda2 { lambda2, .. }) => {
                let _ = writeln!(text, "fiedler value: {} (not simple)", sci(lambda2));
                json!({"status": "degenerate", "lambda2": float(lambda2)})
            }
            Err(Error::Disconnected) => {
                let _ = writeln!(text, "fiedler value: 0 (disconnected)");
                json!({"status": "disconnected", "lambda2": float(0.0)})
            }
            Err(e) => return Err(e.into()),
        };
    }
    if let Some(line) = cert_line {
        let _ = writeln!(text, "certificate: {line}");
    }
    let stdout = if a.json { with_manifest(body, &manifest) } else { text };
    Ok(Output { stdout, warnings })
}

fn simple_word(simple: bool) -> &'static str {
    if simple {
        "simple"
    } else {
        "not simple"
    }
}

fn perturb_cmd(a: PerturbArgs) -> Result<Output, CliError> {
    let input = read_input(&a.file)?;
    let l = exact_laplacian(&input.graph).to_real();
    let directed = matches!(a.mode, PerturbMode::DirectedSimple);
    if directed != input.graph.is_directed() {
        let need = if directed { "a directed" } else { "an undirected" };
        return Err(CliError::new(EXIT_STRUCTURE, format!("mode needs {need} graph")));
    }
    let r: PerturbationResult = match a.mode {
        PerturbMode::Simple => perturb::perturb_to_simple(&l, a.eps, a.tol, a.seed)?,
        PerturbMode::Fiedler => perturb::perturb_fiedler_nonzero(&l, a.eps, a.tol, a.tol, a.seed)?,
        PerturbMode::Basis => perturb::perturb_basis_nonzero(&l, a.eps, a.tol, a.tol, a.seed)?,
        PerturbMode::DirectedSimple => perturb::perturb_to_simple_directed(&l, a.eps, a.tol, a.seed)?,
    };
    let written = if directed {
        format::write_real_digraph(&r.result.to_digraph()?)
    } else {
        format::write_real_graph(&r.result.to_graph()?)
    };
    let mut body = report::perturbation_json(&r);
    if a.certify {
        let exact = parse_graph(&written).map_err(|e| CliError::new(EXIT_OTHER, e.to_string()))?;
        body["certificate"] = report::certificate_json(&simplicity_certificate(&exact_laplacian(&exact)));
    }
    body["mode"] = json!(a.mode.to_possible_value().map(|v| v.get_name().to_string()));
    body["graph"] = json!(written);
    if let Some(out) = &a.out {
        write_file(out, &written)?;
    }
    let manifest = RunManifest::new("perturb")
        .flag("file", path_flag(&a.file))
        .flag("mode", body["mode"].clone())
        .flag("eps", float(a.eps))
        .flag("tol", float(a.tol))
        .flag("out", a.out.as_deref().map_or(Value::Null, path_flag))
        .flag("certify", a.certify)
        .seed(a.seed)
        .input(&input.bytes);
    Ok(Output::text(with_manifest(body, &manifest)))
}

fn partition(a: PartitionArgs) -> Result<Output, CliError> {
    let input = read_input(&a.file)?;
    if input.graph.is_directed() {
        return Err(CliError::new(EXIT_STRUCTURE, "partition needs an undirected graph"));
    }
    let l = exact_laplacian(&input.graph).to_real();
    let (cut, perturbed) = match fiedler_cut(&l, a.tol, a.tol) {
        Ok(cut) => (cut, None),
        Err(Error::DegenerateFiedler { .. } | Error::DegenerateLambda2 { .. }) if a.auto_perturb => {
            let r = perturb::perturb_fiedler_nonzero(&l, a.eps, a.tol, a.tol, a.seed)?;
            (fiedler_cut(&r.result, a.tol, a.tol)?, Some(r))
        }
        Err(e) => return Err(e.into()),
    };
    let mut body = report::cut_json(&cut);
    body["perturbed"] = json!(perturbed.is_some());
    body["perturbation"] = perturbed.as_ref().map_or(Value::Null, report::perturbation_json);
    let manifest = RunManifest::new("partition")
        .flag("file", path_flag(&a.file))
        .flag("auto_perturb", a.auto_perturb)
        .flag("eps", float(a.eps))
        .flag("tol", float(a.tol))
        .seed(a.seed)
        .input(&input.bytes);
    Ok(Output::text(with_manifest(body, &manifest)))
}

fn mc(a: McArgs) -> Result<Output, CliError> {
    let input = read_input(&a.file)?;
    let g = match &input.graph {
        GraphFile::Undirected(g) => g.clone(),
        GraphFile::Directed(_) => return Err(CliError::new(EXIT_STRUCTURE, "mc needs an undirected graph")),
    };
    let mut cfg = if a.exact { TrialConfig::exact(g) } else { TrialConfig::new(g.to_real()) };
    cfg.trials = a.trials;
    cfg.eps0 = a.eps;
    cfg.seed = a.seed;
    cfg.tau_gap = a.tau_gap;
    cfg.tau_v = a.tau_v;
    cfg.distribution = match a.distribution {
        DistributionArg::Uniform => EpsDistribution::Uniform,
        DistributionArg::WeightRelative => EpsDistribution::WeightRelative,
    };
    if let Some(d) = a.drop_node {
        if d == 0 || d > cfg.graph.n() {
            return Err(CliError::new(EXIT_OTHER, format!("drop node {d} out of range 1..={}", cfg.graph.n())));
        }
        cfg.drop_node = Some(d - 1);
    }
    let experiment: Experiment = a.experiment.into();
    let (rep, outcomes) = run_parallel(&cfg, experiment, a.threads)?;
    if let Some(path) = &a.csv {
        write_file(path, &outcomes_csv(&outcomes))?;
    }
    let mut warnings = Vec::new();
    if let Some(msg) = &rep.anomaly {
        warnings.push(format!("warning: {msg}"));
    }
    let manifest = RunManifest::new("mc")
        .flag("file", path_flag(&a.file))
        .flag("experiment", experiment.name())
        .flag("trials", a.trials)
        .flag("eps", float(a.eps))
        .flag("exact", a.exact)
        .flag("drop_node", a.drop_node)
        .flag("tau_gap", float(a.tau_gap))
        .flag("tau_v", float(a.tau_v))
        .flag("distribution", cfg.distribution.name())
        .flag("csv", a.csv.as_deref().map_or(Value::Null, path_flag))
        .flag("threads", a.threads)
        .seed(a.seed)
        .input(&input.bytes);
    Ok(Output { stdout: with_manifest(report::trial_report_json(&rep), &manifest), warnings })
}

fn gen(a: GenArgs) -> Result<Output, CliError> {
    let weights = match a.weights {
        WeightsArg::Unit => Weights::Unit,
        WeightsArg::Random => Weights::Random,
    };
    let mut r = ChaCha8Rng::seed_from_u64(a.seed);
    if a.family != Family::Gnp && a.p.is_some() {
        return Err(CliError::new(EXIT_OTHER, "--p only applies to gnp"));
    }
    let g = match a.family {
        Family::Path => generate::path(a.n, weights, &mut r),
        Family::Cycle => generate::cycle(a.n, weights, &mut r),
        Family::Star => generate::star(a.n, weights, &mut r),
        Family::Complete => generate::complete(a.n, weights, &mut r),
        Family::RandomTree => generate::random_tree(a.n, weights, &mut r),
        Family::Gnp => {
            let p = a.p.ok_or_else(|| CliError::new(EXIT_OTHER, "gnp needs --p"))?;
            generate::gnp(a.n, p, weights, &mut r)
        }
    }?;
    let text = write_graph(&GraphFile::Undirected(g));
    match &a.out {
        Some(path) => {
            write_file(path, &text)?;
            Ok(Output::default())
        }
        None => Ok(Output::text(text)),
    }
}

fn export(a: ExportArgs) -> Result<Output, CliError> {
    let input = read_input(&a.file)?;
    let text = match a.format {
        ExportFormat::MatrixMarket => matrix_market(&input.graph),
    };
    match &a.out {
        Some(path) => {
            write_file(path, &text)?;
            Ok(Output::default())
        }
        None => Ok(Output::text(text)),
    }
}
