//! Parallel campaign driver.
//!
//! Trials are independent and aggregation is order-free, so the report does
//! not depend on the number of worker threads.

use lapgen_core::lab::{aggregate, run_trial, Experiment, TrialConfig, TrialOutcome, TrialReport};
use lapgen_core::Result;
use rayon::prelude::*;

/// Runs every trial on a pool of `threads` workers; 0 picks the default.
pub fn run_parallel(
    cfg: &TrialConfig,
    experiment: Experiment,
    threads: usize,
) -> Result<(TrialReport, Vec<TrialOutcome>)> {
    cfg.validate(experiment)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .expect("thread pool");
    let outcomes = pool.install(|| {
        (0..cfg.trials)
            .into_par_iter()
            .map(|k| run_trial(cfg, experiment, k))
            .collect::<Result<Vec<_>>>()
    })?;
    Ok((aggregate(cfg, experiment, &outcomes), outcomes))
}

fn opt<T: ToString>(v: Option<T>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

/// One CSV row per trial, with 1-based trial numbers.
pub fn outcomes_csv(outcomes: &[TrialOutcome]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    let header = [
        "trial",
        "min_gap",
        "scale",
        "degenerate",
        "lambda2_degenerate",
        "min_entry",
        "fiedler_zero",
        "fiedler_repeated",
        "min_cross",
        "subgraph_hit",
        "exact_hit",
        "exact_basis_zero",
    ];
    w.write_record(header).expect("in-memory csv");
    for o in outcomes {
        w.write_record([
            (o.index + 1).to_string(),
            format!("{:.16e}", o.min_gap),
            format!("{:.16e}", o.scale),
            o.degenerate.to_string(),
            o.lambda2_degenerate.to_string(),
            opt(o.min_entry.map(|x| format!("{x:.16e}"))),
            o.fiedler_zero.to_string(),
            o.fiedler_repeated.to_string(),
            opt(o.min_cross.map(|x| format!("{x:.16e}"))),
            o.subgraph_hit.to_string(),
            opt(o.exact_hit),
            opt(o.exact_basis_zero),
        ])
        .expect("in-memory csv");
    }
    String::from_utf8(w.into_inner().expect("in-memory csv")).expect("utf-8 csv")
}
