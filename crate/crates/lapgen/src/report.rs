//! JSON views of library results. Node indices are 1-based.

use lapgen_core::eigen::GapReport;
use lapgen_core::exact::Certificate;
use lapgen_core::lab::{Histogram, TrialReport};
use lapgen_core::perturb::{FiedlerCut, PerturbationResult};
use serde_json::{json, Value};

use crate::format::format_rational;
use crate::json::float;

fn floats(xs: &[f64]) -> Value {
    Value::Array(xs.iter().map(|&x| float(x)).collect())
}

fn opt_float(x: Option<f64>) -> Value {
    x.map_or(Value::Null, float)
}

fn pair(p: (usize, usize)) -> Value {
    json!([p.0 + 1, p.1 + 1])
}

pub fn certificate_json(c: &Certificate) -> Value {
    json!({
        "kind": c.kind.name(),
        "value": format_rational(&c.value),
        "verdict": c.verdict,
        "context": format!("{:016x}", c.context),
    })
}

pub fn gap_json(g: &GapReport) -> Value {
    json!({
        "min_gap": float(g.min_gap),
        "scale": float(g.scale),
        "simple": g.simple,
    })
}

pub fn perturbation_json(r: &PerturbationResult) -> Value {
    let directed = r.result.is_directed();
    let entries: Vec<Value> = r
        .perturbation
        .iter()
        .map(|(&(a, b), &eps)| {
            // directed keys are Laplacian positions (row, col) of arc col -> row
            let (i, j) = if directed { (b, a) } else { (a, b) };
            json!({"i": i + 1, "j": j + 1, "eps": float(eps)})
        })
        .collect();
    let trace: Vec<Value> = r
        .trace
        .entries
        .iter()
        .map(|t| {
            json!({
                "stage": t.stage.name(),
                "edge": t.edge.map_or(Value::Null, pair),
                "weight": float(t.weight),
                "min_gap": float(t.min_gap),
                "components": t.components,
                "retries": t.retries,
            })
        })
        .collect();
    json!({
        "achieved_norm": float(r.achieved_norm),
        "attempts": r.attempts,
        "gap": gap_json(&r.gap),
        "min_fiedler_entry": float(r.min_fiedler_entry),
        "perturbation": entries,
        "trace": trace,
        "certificate": r.certified.as_ref().map_or(Value::Null, certificate_json),
    })
}

pub fn cut_json(c: &FiedlerCut) -> Value {
    let one_based = |v: &[usize]| v.iter().map(|i| i + 1).collect::<Vec<_>>();
    json!({
        "positive": one_based(&c.positive),
        "negative": one_based(&c.negative),
        "cut_edges": c.cut_edges.iter().map(|&p| pair(p)).collect::<Vec<_>>(),
        "lambda2": float(c.lambda2),
        "vector": floats(&c.vector),
        "positive_connected": c.positive_connected,
        "negative_connected": c.negative_connected,
    })
}

fn histogram_json(h: &Histogram) -> Value {
    json!({"edges": floats(&h.edges), "counts": h.counts})
}

pub fn trial_report_json(r: &TrialReport) -> Value {
    let c = &r.config;
    json!({
        "experiment": r.experiment.name(),
        "label": r.label,
        "conjecture": r.conjecture,
        "config": {
            "n": c.n,
            "edges": c.edges,
            "trials": c.trials,
            "eps0": float(c.eps0),
            "distribution": c.distribution,
            "tau_gap": float(c.tau_gap),
            "tau_v": float(c.tau_v),
            "seed": c.seed,
            "exact_mode": c.exact_mode,
            "drop_node": c.drop_node.map(|d| d + 1),
        },
        "trials": r.trials,
        "hits": r.hits,
        "exact_hits": r.exact_hits,
        "degenerate_spectrum": r.degenerate_spectrum,
        "degenerate_lambda2": r.degenerate_lambda2,
        "fiedler_zero": r.fiedler_zero,
        "fiedler_repeated": r.fiedler_repeated,
        "subgraph_intersection": r.subgraph_intersection,
        "exact_eigenbasis_zero": r.exact_eigenbasis_zero,
        "min_gap": float(r.min_gap),
        "min_relative_gap": float(r.min_relative_gap),
        "min_entry": opt_float(r.min_entry),
        "min_cross": opt_float(r.min_cross),
        "gap_histogram": histogram_json(&r.gap_histogram),
        "entry_histogram": histogram_json(&r.entry_histogram),
        "anomaly": r.anomaly,
    })
}
