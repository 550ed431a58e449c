//! Scenario files: a payload for one operation plus an optional golden
//! output, run individually or as a suite.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::ops::{self, CheckOut, Ctx, Failure};

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub name: String,
    pub module: String,
    pub operation: String,
    #[serde(default)]
    pub description: Option<String>,
    pub input: Value,
    /// Golden output, relative to the scenario file.
    #[serde(default)]
    pub golden: Option<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Pass,
    GoldenMismatch,
    Fail,
    OperationError,
    SchemaError,
}

impl Status {
    pub fn exit_code(self) -> u8 {
        match self {
            Status::Pass => 0,
            Status::SchemaError => 2,
            Status::Fail | Status::OperationError => 3,
            Status::GoldenMismatch => 4,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Status::Pass => "PASS",
            Status::GoldenMismatch => "GOLDEN MISMATCH",
            Status::Fail => "FAIL",
            Status::OperationError => "ERROR",
            Status::SchemaError => "SCHEMA ERROR",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Golden {
    None,
    Match,
    Mismatch,
    Missing,
    Written,
}

#[derive(Clone, Debug, Serialize)]
pub struct ScenarioReport {
    pub scenario: String,
    pub file: String,
    pub module: String,
    pub operation: String,
    pub status: Status,
    pub ok: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    pub checks: Vec<CheckOut>,
    pub output: Value,
    pub golden: Golden,
    #[serde(skip)]
    pub text: Option<String>,
}

/// Exit code for a batch: schema errors first, then failures, then golden
/// mismatches.
pub fn aggregate(statuses: impl IntoIterator<Item = Status>) -> u8 {
    let all: Vec<Status> = statuses.into_iter().collect();
    for s in [Status::SchemaError, Status::OperationError, Status::Fail, Status::GoldenMismatch] {
        if all.contains(&s) {
            return s.exit_code();
        }
    }
    0
}

/// Recursively sorted copy, so that output does not depend on map order.
pub fn canonical(v: &Value) -> Value {
    match v {
        Value::Object(m) => {
            let mut keys: Vec<&String> = m.keys().collect();
            keys.sort();
            Value::Object(keys.into_iter().map(|k| (k.clone(), canonical(&m[k]))).collect())
        }
        Value::Array(a) => Value::Array(a.iter().map(canonical).collect()),
        _ => v.clone(),
    }
}

pub fn to_canonical_string(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(&canonical(v)).expect("values serialize");
    s.push('\n');
    s
}

pub fn load(path: &Path) -> Result<Scenario, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    let sc: Scenario = serde_json::from_str(&text).map_err(|e| format!("{}: {e}", path.display()))?;
    if sc.name.trim().is_empty() {
        return Err(format!("{}: empty scenario name", path.display()));
    }
    if ops::find(&sc.module, &sc.operation).is_none() {
        return Err(format!("{}: unknown operation `{}/{}`", path.display(), sc.module, sc.operation));
    }
    Ok(sc)
}

/// Scenario files directly inside `dir`, sorted by file name.
pub fn list(dir: &Path) -> Result<Vec<PathBuf>, String> {
    let rd = std::fs::read_dir(dir).map_err(|e| format!("{}: {e}", dir.display()))?;
    let mut out: Vec<PathBuf> = rd
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.is_file() && p.extension().is_some_and(|x| x == "json"))
        .collect();
    out.sort_by(|a, b| a.file_name().cmp(&b.file_name()));
    Ok(out)
}

fn file_name(path: &Path) -> String {
    path.file_name().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default()
}

fn schema_error(path: &Path, msg: String) -> ScenarioReport {
    ScenarioReport {
        scenario: path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default(),
        file: file_name(path),
        module: String::new(),
        operation: String::new(),
        status: Status::SchemaError,
        ok: false,
        error: Some(msg),
        checks: Vec::new(),
        output: Value::Null,
        golden: Golden::None,
        text: None,
    }
}

pub fn run_file(path: &Path, ctx: &Ctx, update_golden: bool) -> ScenarioReport {
    match load(path) {
        Ok(sc) => run(&sc, path, ctx, update_golden),
        Err(e) => schema_error(path, e),
    }
}

pub fn run(sc: &Scenario, path: &Path, ctx: &Ctx, update_golden: bool) -> ScenarioReport {
    let op = ops::find(&sc.module, &sc.operation).expect("checked on load");
    let mut rep = ScenarioReport {
        scenario: sc.name.clone(),
        file: file_name(path),
        module: sc.module.clone(),
        operation: sc.operation.clone(),
        status: Status::Pass,
        ok: false,
        error: None,
        checks: Vec::new(),
        output: Value::Null,
        golden: Golden::None,
        text: None,
    };
    let res = std::panic::catch_unwind(|| (op.run)(&sc.input, ctx))
        .unwrap_or_else(|_| Err(Failure::Operation("operation panicked".into())));
    let out = match res {
        Ok(o) => o,
        Err(f) => {
            rep.status = match f {
                Failure::Schema(_) => Status::SchemaError,
                Failure::Operation(_) => Status::OperationError,
            };
            rep.error = Some(f.to_string());
            return rep;
        }
    };
    let checks_ok = out.ok();
    rep.checks = out.checks;
    rep.output = canonical(&out.output);
    rep.text = out.text;
    if !checks_ok {
        rep.status = Status::Fail;
    }
    if let Some(g) = &sc.golden {
        let gpath = path.parent().unwrap_or(Path::new(".")).join(g);
        let want = to_canonical_string(&rep.output);
        rep.golden = if update_golden && checks_ok {
            match gpath.parent().map(std::fs::create_dir_all).transpose().and_then(|_| std::fs::write(&gpath, &want)) {
                Ok(()) => Golden::Written,
                Err(e) => {
                    rep.error = Some(format!("{}: {e}", gpath.display()));
                    rep.status = Status::OperationError;
                    Golden::Missing
                }
            }
        } else {
            match std::fs::read_to_string(&gpath) {
                Ok(have) if have == want => Golden::Match,
                Ok(_) => Golden::Mismatch,
                Err(_) => Golden::Missing,
            }
        };
        if matches!(rep.golden, Golden::Mismatch | Golden::Missing) && rep.status == Status::Pass {
            rep.status = Status::GoldenMismatch;
            rep.error = Some(format!("output differs from {g}"));
        }
    }
    rep.ok = rep.status == Status::Pass;
    rep
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn aggregate_prefers_schema_then_failure_then_golden() {
        use Status::*;
        assert_eq!(aggregate([]), 0);
        assert_eq!(aggregate([Pass, Pass]), 0);
        assert_eq!(aggregate([GoldenMismatch, Pass]), 4);
        assert_eq!(aggregate([GoldenMismatch, Fail]), 3);
        assert_eq!(aggregate([OperationError, SchemaError, GoldenMismatch]), 2);
    }

    #[test]
    fn canonical_form_sorts_nested_keys() {
        let v: Value = serde_json::from_str(r#"{"b": [{"z": 1, "a": 2}], "a": null}"#).unwrap();
        let s = to_canonical_string(&v);
        assert!(s.find("\"a\": null").unwrap() < s.find("\"b\"").unwrap());
        assert!(s.find("\"a\": 2").unwrap() < s.find("\"z\": 1").unwrap());
        assert!(s.ends_with("}\n"));
    }

    #[test]
    fn every_registered_operation_rejects_unknown_fields() {
        let ctx = Ctx::default();
        for op in ops::OPS {
            let r = (op.run)(&serde_json::json!({"no_such_field": 1}), &ctx);
            assert!(matches!(r, Err(Failure::Schema(_))), "{}/{}", op.module, op.name);
        }
    }
}
