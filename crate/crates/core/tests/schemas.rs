//! Outputs and shipped configs validate against the JSON schemas in `docs/`.

use std::fs;
use std::path::{Path, PathBuf};

use jsonschema::{Retrieve, Uri, Validator};
use radabound::io::{run_configured, RunConfig, TRACE_HEADER};
use serde_json::Value;

fn repo_root() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../..")
}

fn load_json(path: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap()
}

struct LocalSchemas;

impl Retrieve for LocalSchemas {
    fn retrieve(
        &self,
        uri: &Uri<String>,
    ) -> Result<Value, Box<dyn std::error::Error + Send + Sync>> {
        match uri.as_str() {
            "urn:radabound:config" => Ok(load_json(&repo_root().join("docs/config.schema.json"))),
            other => Err(format!("unknown schema {other}").into()),
        }
    }
}

fn validator(name: &str) -> Validator {
    jsonschema::options()
        .with_retriever(LocalSchemas)
        .build(&load_json(&repo_root().join("docs").join(name)))
        .unwrap()
}

fn assert_valid(v: &Validator, doc: &Value) {
    let errors: Vec<String> = v.iter_errors(doc).map(|e| e.to_string()).collect();
    assert!(errors.is_empty(), "{errors:?}");
}

#[test]
fn shipped_configs_match_schema_and_parse() {
    let v = validator("config.schema.json");
    let dir = repo_root().join("configs");
    let mut seen = 0;
    for entry in fs::read_dir(&dir).unwrap() {
        let path = entry.unwrap().path();
        assert_valid(&v, &load_json(&path));
        RunConfig::load(&path).unwrap();
        seen += 1;
    }
    assert!(seen >= 2);
}

#[test]
fn summary_matches_schema() {
    let tmp = tempfile::tempdir().unwrap();
    let text = format!(
        r#"{{
            "experiment": {{"m_train": 200, "m_holdout": 200, "m_fresh": 200, "d": 12,
                            "variance": 4.0, "n_biased": 4, "bias": 0.5, "seed": 9}},
            "guard": {{"epsilon": 0.1, "delta": 0.1, "l": 8, "method": "bernstein_two_term", "seed": 9}},
            "epsilon_list": [0.05, 0.3],
            "output_dir": {:?}
        }}"#,
        tmp.path().join("out")
    );
    let config = RunConfig::from_json(&text).unwrap();
    run_configured(&config).unwrap();
    let out = tmp.path().join("out");
    let summary = load_json(&out.join("summary.json"));
    assert_valid(&validator("summary.schema.json"), &summary);

    for run in summary["runs"].as_array().unwrap() {
        let trace = fs::read_to_string(out.join(run["trace_file"].as_str().unwrap())).unwrap();
        let mut lines = trace.lines();
        assert_eq!(lines.next(), Some(TRACE_HEADER));
        let width = TRACE_HEADER.split(',').count();
        for line in lines {
            assert_eq!(line.split(',').count(), width, "{line}");
        }
    }
}

#[test]
fn schema_rejects_malformed_summary() {
    let v = validator("summary.schema.json");
    let doc = serde_json::json!({ "version": "0", "runs": [] });
    assert!(!v.is_valid(&doc));
}

#[test]
fn config_schema_rejects_unknown_method() {
    let v = validator("config.schema.json");
    let doc = serde_json::json!({
        "experiment": { "d": 5, "variance": 1.0, "seed": 0 },
        "guard": { "epsilon": 0.1, "delta": 0.1, "l": 4, "method": "hoeffding", "seed": 0 }
    });
    assert!(!v.is_valid(&doc));
}
