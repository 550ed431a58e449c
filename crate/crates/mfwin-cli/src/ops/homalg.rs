use serde::Deserialize;
use serde_json::{json, Value};

use mfwin::homalg::{check_presentation, corank2_report, so2_end_algebra, AlgebraPresentation, Verdict};

use super::{parse, Checks, Ctx, OpReport, OpResult};

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct Corank2In {
    #[serde(default)]
    cap: Option<i64>,
}

fn verdict_json(v: &Verdict) -> Value {
    let pairs = |m: &std::collections::BTreeMap<i64, usize>| m.iter().map(|(d, k)| json!([d, k])).collect::<Vec<_>>();
    json!({
        "matches": v.matches,
        "cap": v.cap,
        "dims_computed": pairs(&v.dims_computed),
        "dims_target": pairs(&v.dims_target),
        "mismatches": v.mismatches.iter().map(|m| json!({"degree": m.degree, "detail": m.detail})).collect::<Vec<_>>(),
    })
}

fn presentation_json(p: &AlgebraPresentation) -> Value {
    json!({
        "base": p.base_vars,
        "generators": p.generators.iter().map(|(g, w)| json!({"name": g, "weight": w})).collect::<Vec<_>>(),
        "relations": p.relation_strings(),
        "products": p.table.iter().map(|e| json!([e.left, e.right, e.value])).collect::<Vec<_>>(),
        "commutative": p.commutative,
    })
}

pub fn corank2(input: &Value, ctx: &Ctx) -> OpResult {
    let inp: Corank2In = parse(input)?;
    let cap = ctx.cap(inp.cap);
    let rep = corank2_report(cap)?;
    let mut checks = Checks::default();
    for c in &rep.checks {
        checks.add(c.name.clone(), c.ok, c.detail.clone());
    }
    let output = json!({
        "theta_table": rep.theta_table.iter().map(|(a, b, v)| json!([a, b, v])).collect::<Vec<_>>(),
        "verdict": verdict_json(&rep.verdict),
    });
    let mut text = String::new();
    for (a, b, v) in &rep.theta_table {
        text += &format!("{a} * {b} = {v}\n");
    }
    text += &rep.verdict.to_string();
    Ok(OpReport { output, checks: checks.0, text: Some(text) })
}

fn three() -> usize {
    3
}
fn two() -> usize {
    2
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct So2In {
    #[serde(default = "three")]
    n: usize,
    #[serde(default = "two")]
    corank: usize,
    #[serde(default)]
    cap: Option<i64>,
}

pub fn so2(input: &Value, ctx: &Ctx) -> OpResult {
    let inp: So2In = parse(input)?;
    let cap = ctx.cap(inp.cap);
    let (alg, target) = so2_end_algebra(inp.n, inp.corank, cap)?;
    let v = check_presentation(&alg.presentation, &target, cap)?;
    let mut checks = Checks::default();
    checks.add("presentation", v.matches, v.to_string().trim_end().to_string());
    let output = json!({
        "n": inp.n,
        "corank": inp.corank,
        "presentation": presentation_json(&alg.presentation),
        "target": presentation_json(&target),
        "verdict": verdict_json(&v),
    });
    Ok(OpReport { output, checks: checks.0, text: Some(v.to_string()) })
}
