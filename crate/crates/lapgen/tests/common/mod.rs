#![allow(dead_code)]

use std::path::{Path, PathBuf};
use std::process::Command;

pub fn data_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data")
}

pub fn golden_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden")
}

pub struct Run {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Runs the binary inside the data directory so relative paths in
/// manifests stay stable.
pub fn lapgen(args: &[&str]) -> Run {
    let out = Command::new(env!("CARGO_BIN_EXE_lapgen"))
        .args(args)
        .current_dir(data_dir())
        .output()
        .expect("spawn lapgen");
    Run {
        code: out.status.code().unwrap_or(-1),
        stdout: String::from_utf8(out.stdout).expect("utf-8 stdout"),
        stderr: String::from_utf8(out.stderr).expect("utf-8 stderr"),
    }
}

/// Commands covered by the golden files, by golden name.
pub const GOLDEN: &[(&str, &[&str])] = &[
    ("spectrum_p3", &["spectrum", "p3.txt", "--json"]),
    ("spectrum_k3_exact", &["spectrum", "k3.txt", "--exact", "--json"]),
    ("spectrum_k3_text", &["spectrum", "k3.txt", "--exact"]),
    ("spectrum_example4", &["spectrum", "example4.txt", "--exact", "--json"]),
    ("spectrum_g1", &["spectrum", "g1.txt", "--exact", "--json"]),
    ("spectrum_disconnected", &["spectrum", "disconnected.txt", "--json"]),
    ("perturb_k3_simple", &["perturb", "k3.txt", "simple", "--eps", "0.01", "--certify"]),
    ("perturb_p3_fiedler", &["perturb", "p3.txt", "fiedler"]),
    ("perturb_p4_basis", &["perturb", "p4.txt", "basis", "--seed", "3"]),
    ("perturb_tree_directed", &["perturb", "out_tree.txt", "directed-simple"]),
    ("partition_p4", &["partition", "p4.txt"]),
    ("partition_p3_auto", &["partition", "p3.txt", "--auto-perturb"]),
    ("mc_k3_simplicity", &["mc", "k3.txt", "simplicity", "--trials", "200", "--seed", "1"]),
    ("mc_p3_fiedler_exact", &["mc", "p3.txt", "fiedler-zero", "--trials", "100", "--exact", "--threads", "2"]),
    ("mc_example4_subgraph", &["mc", "example4.txt", "subgraph-disjoint", "--trials", "100", "--drop-node", "2", "--exact"]),
    ("mc_s4_distinct", &["mc", "s4.txt", "fiedler-distinct", "--trials", "1", "--eps", "0"]),
    ("mc_cycle_uniform", &["mc", "c5.txt", "fiedler-distinct", "--trials", "50", "--distribution", "uniform", "--seed", "9"]),
    ("gen_path3", &["gen", "path", "3"]),
    ("gen_gnp", &["gen", "gnp", "10", "--p", "0.3", "--seed", "5", "--weights", "random"]),
    ("gen_random_tree", &["gen", "random-tree", "10", "--seed", "7"]),
    ("export_example4", &["export", "example4.txt"]),
    ("export_g1", &["export", "g1.txt", "--format", "matrix-market"]),
];

pub fn golden_path(name: &str) -> PathBuf {
    golden_dir().join(format!("{name}.out"))
}
