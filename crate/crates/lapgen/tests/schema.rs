//! JSON outputs validate against the published schemas.

mod common;

use std::path::Path;

use common::{lapgen, GOLDEN};
use serde_json::Value;

fn schema(name: &str) -> jsonschema::JSONSchema {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../docs/schemas").join(format!("{name}.schema.json"));
    let text = std::fs::read_to_string(&path).unwrap();
    let v: Value = serde_json::from_str(&text).unwrap();
    jsonschema::JSONSchema::compile(&v).unwrap()
}

#[test]
fn every_json_output_validates() {
    let mut checked = 0;
    for (name, args) in GOLDEN {
        let command = args[0];
        if command == "gen" || command == "export" || (command == "spectrum" && !args.contains(&"--json")) {
            continue;
        }
        let run = lapgen(args);
        let v: Value = serde_json::from_str(&run.stdout).unwrap();
        let s = schema(command);
        if let Err(errors) = s.validate(&v) {
            let msgs: Vec<String> = errors.map(|e| format!("{} at {}", e, e.instance_path)).collect();
            panic!("{name}: {msgs:?}");
        }
        assert!(v["manifest"]["input_sha256"].is_string(), "{name}");
        checked += 1;
    }
    assert!(checked >= 10);
}

#[test]
fn schemas_reject_malformed_reports() {
    let run = lapgen(&["partition", "p4.txt"]);
    let mut v: Value = serde_json::from_str(&run.stdout).unwrap();
    v["positive"] = Value::Array(vec![]);
    assert!(!schema("partition").is_valid(&v));
    v.as_object_mut().unwrap().remove("manifest");
    assert!(!schema("partition").is_valid(&v));
}
