//! Operation registry shared by the subcommands and the scenario runner.

mod clifford;
mod homalg;
mod mf;
mod windows;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use mfwin::{Field, FieldElem};

/// Seed used when neither the command line nor the payload gives one.
pub const DEFAULT_SEED: u64 = 0;

/// Settings from the command line that override payload values.
#[derive(Clone, Debug, Default)]
pub struct Ctx {
    pub seed: Option<u64>,
    pub degree_cap: Option<i64>,
    pub field: Option<Field>,
}

impl Ctx {
    pub fn seed(&self, payload: Option<u64>) -> u64 {
        self.seed.or(payload).unwrap_or(DEFAULT_SEED)
    }

    pub fn cap(&self, payload: Option<i64>) -> i64 {
        self.degree_cap.or(payload).unwrap_or(mfwin::homalg::DEFAULT_CAP)
    }

    pub fn field(&self, payload: Option<&str>) -> Result<Field, Failure> {
        match (&self.field, payload) {
            (Some(f), _) => Ok(*f),
            (None, Some(s)) => Field::parse_spec(s).map_err(|e| Failure::Schema(format!("field: {e}"))),
            (None, None) => Ok(Field::Rational),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckOut {
    pub name: String,
    pub ok: bool,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub detail: String,
}

/// Result of an operation: machine-readable output, the checks it ran and
/// an optional human summary used by text output.
#[derive(Clone, Debug)]
pub struct OpReport {
    pub output: Value,
    pub checks: Vec<CheckOut>,
    pub text: Option<String>,
}

impl OpReport {
    pub fn ok(&self) -> bool {
        self.checks.iter().all(|c| c.ok)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Failure {
    /// The payload does not fit the operation's schema.
    Schema(String),
    /// The computation itself failed.
    Operation(String),
}

impl std::fmt::Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Failure::Schema(s) => write!(f, "schema error: {s}"),
            Failure::Operation(s) => write!(f, "operation failed: {s}"),
        }
    }
}

impl From<mfwin::Error> for Failure {
    fn from(e: mfwin::Error) -> Self {
        match e {
            mfwin::Error::Parse(_) => Failure::Schema(e.to_string()),
            _ => Failure::Operation(e.to_string()),
        }
    }
}

pub type OpResult = Result<OpReport, Failure>;

pub struct OpSpec {
    pub module: &'static str,
    pub name: &'static str,
    pub summary: &'static str,
    pub run: fn(&Value, &Ctx) -> OpResult,
}

pub const OPS: &[OpSpec] = &[
    OpSpec { module: "mf", name: "validate", summary: "validate one factorization", run: mf::validate },
    OpSpec { module: "mf", name: "validity_suite", summary: "validate the model factorizations and their mutants", run: mf::validity_suite },
    OpSpec { module: "mf", name: "weights", summary: "weights of a factorization at a fixed point", run: mf::weights },
    OpSpec { module: "mf", name: "knorrer_laws", summary: "weight shifts under the Knorrer kernels", run: mf::knorrer_laws },
    OpSpec { module: "mf", name: "even_bound", summary: "weight bound for even standard models", run: mf::even_bound },
    OpSpec { module: "homalg", name: "corank2_end_algebra", summary: "corank-2 local computation end to end", run: homalg::corank2 },
    OpSpec { module: "homalg", name: "so2_end_algebra", summary: "endomorphism algebra of the SO(2) generator", run: homalg::so2 },
    OpSpec { module: "windows", name: "sets", summary: "window regions and their enumerations", run: windows::sets },
    OpSpec { module: "windows", name: "reduce", summary: "reduce a weight set into the window", run: windows::reduce },
    OpSpec { module: "windows", name: "random_reductions", summary: "reductions of random symmetric strip sets", run: windows::random_reductions },
    OpSpec { module: "windows", name: "exceptional", summary: "exceptional collection and Hom vanishing", run: windows::exceptional },
    OpSpec { module: "windows", name: "hom_dim", summary: "dimension of invariant maps between line bundles", run: windows::hom_dim },
    OpSpec { module: "clifford", name: "build", summary: "Clifford algebra of a form", run: clifford::build },
    OpSpec { module: "clifford", name: "center", summary: "center of a Clifford algebra or its even part", run: clifford::center },
    OpSpec { module: "clifford", name: "structure_suite", summary: "dimensions and centers over a range of sizes", run: clifford::structure_suite },
    OpSpec { module: "pencil", name: "strata", summary: "corank stratification of a linear system", run: clifford::strata },
    OpSpec { module: "pencil", name: "random", summary: "singular members of random pencils", run: clifford::random_pencils },
];

pub fn find(module: &str, name: &str) -> Option<&'static OpSpec> {
    OPS.iter().find(|o| o.module == module && o.name == name)
}

pub fn parse<T: DeserializeOwned>(v: &Value) -> Result<T, Failure> {
    serde_json::from_value(v.clone()).map_err(|e| Failure::Schema(e.to_string()))
}

pub fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("report types serialize")
}

/// Collects named checks.
#[derive(Default)]
pub struct Checks(pub Vec<CheckOut>);

impl Checks {
    pub fn add(&mut self, name: impl Into<String>, ok: bool, detail: impl Into<String>) {
        self.0.push(CheckOut { name: name.into(), ok, detail: detail.into() });
    }
}

/// A matrix entry given as a JSON number or a field literal such as "-1/2".
#[derive(Clone, Debug, Deserialize)]
#[serde(untagged)]
pub enum Entry {
    Int(i64),
    Str(String),
}

impl Entry {
    pub fn literal(&self) -> String {
        match self {
            Entry::Int(v) => v.to_string(),
            Entry::Str(s) => s.clone(),
        }
    }
}

pub fn literals(rows: &[Vec<Entry>]) -> Vec<Vec<String>> {
    rows.iter().map(|r| r.iter().map(Entry::literal).collect()).collect()
}

pub fn parse_elem(field: &Field, s: &str) -> Result<FieldElem, Failure> {
    field.parse(s).map_err(|e| Failure::Schema(e.to_string()))
}
