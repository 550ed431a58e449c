use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Deserialize;
use serde_json::{json, Value};

use mfwin::windows::{
    enumerate_exceptional, invariant_hom_dim, leq_stratum, reduce_to_window, window_regions, IrrepLabel,
    Stratum, Weight, WeightRegion, WeightSet,
};

use super::{parse, to_value, Checks, Ctx, Failure, OpReport, OpResult};

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SetsIn {
    n: usize,
    l: usize,
    #[serde(default)]
    expect_sizes: Option<Sizes>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct Sizes {
    s_plus: usize,
    s_minus_res: usize,
}

/// Points of a region within a box, straight from its inequalities.
fn brute(r: &WeightRegion, n: usize) -> BTreeSet<Weight> {
    let b = 4 * n as i64 + 2;
    (-b..=b).flat_map(|i| (-b..=b).map(move |j| (i, j))).filter(|&w| r.contains(w)).collect()
}

fn region_json(r: &WeightRegion) -> Result<Value, Failure> {
    let pts = if r.is_bounded() { Some(to_value(&r.enumerate()?.to_vec())) } else { None };
    Ok(json!({
        "name": r.name,
        "inequalities": r.describe(),
        "bounded": r.is_bounded(),
        "points": pts,
    }))
}

pub fn sets(input: &Value, _ctx: &Ctx) -> OpResult {
    let inp: SetsIn = parse(input)?;
    let r = window_regions(inp.n, inp.l)?;
    let plus = r.s_plus.enumerate()?;
    let res = r.s_minus_res.enumerate()?;
    let mut checks = Checks::default();
    checks.add("S+ enumeration", plus.points == brute(&r.s_plus, inp.n), format!("{} points", plus.len()));
    checks.add("S-,res enumeration", res.points == brute(&r.s_minus_res, inp.n), format!("{} points", res.len()));
    checks.add("S+ is sigma-symmetric", plus.is_sigma_symmetric(), String::new());
    if let Some(s) = &inp.expect_sizes {
        checks.add(
            "sizes",
            plus.len() == s.s_plus && res.len() == s.s_minus_res,
            format!("|S+| = {}, |S-,res| = {}", plus.len(), res.len()),
        );
    }
    let output = json!({
        "n": inp.n,
        "l": inp.l,
        "s_plus": region_json(&r.s_plus)?,
        "s_minus": region_json(&r.s_minus)?,
        "s_minus_res": region_json(&r.s_minus_res)?,
    });
    let mut text = String::new();
    for reg in [&r.s_plus, &r.s_minus, &r.s_minus_res] {
        text += &format!("{}:\n", reg.name);
        for line in reg.describe() {
            text += &format!("  {line}\n");
        }
        if reg.is_bounded() {
            text += &format!("  points {}\n", reg.enumerate()?);
        }
    }
    Ok(OpReport { output, checks: checks.0, text: Some(text) })
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ReduceIn {
    n: usize,
    weights: Vec<Weight>,
    #[serde(default)]
    expect_final: Option<Vec<Weight>>,
}

pub fn reduce(input: &Value, _ctx: &Ctx) -> OpResult {
    let inp: ReduceIn = parse(input)?;
    let wt: WeightSet = inp.weights.iter().copied().collect();
    let (out, trace) = reduce_to_window(&wt, inp.n)?;
    let plus = window_regions(inp.n, 0)?.s_plus;
    let mut checks = Checks::default();
    checks.add("result lies in S+", out.is_subset_of_region(&plus), format!("{out}"));
    checks.add("result is sigma-symmetric", out.is_sigma_symmetric(), String::new());
    checks.add("steps are good and extremal", trace.steps.iter().all(|s| s.good && s.extremal), String::new());
    if let Some(e) = &inp.expect_final {
        let want: WeightSet = e.iter().copied().collect();
        checks.add("final set", out == want, format!("{out}, expected {want}"));
    }
    let mut text = format!("{wt}\n");
    for s in &trace.steps {
        text += &format!("  {:?} S = {} -> {}\n", s.kind, s.s, s.result);
    }
    text += &format!("final {out}\n");
    let output = json!({"input": wt.to_vec(), "final": out.to_vec(), "trace": to_value(&trace)});
    Ok(OpReport { output, checks: checks.0, text: Some(text) })
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RandomIn {
    #[serde(default)]
    seed: Option<u64>,
    #[serde(default = "default_ns")]
    ns: Vec<usize>,
    #[serde(default = "hundred")]
    count: usize,
}

fn default_ns() -> Vec<usize> {
    vec![3, 4, 5]
}
fn hundred() -> usize {
    100
}

/// A random sigma-symmetric set of weights with sums in [0, 2n-1].
fn random_strip_set(rng: &mut ChaCha8Rng, n: usize) -> WeightSet {
    let top = 2 * n as i64 - 1;
    let wide = 2 * n as i64;
    loop {
        let mut pts = Vec::new();
        for _ in 0..rng.random_range(1..6) {
            let s = rng.random_range(0..=top);
            let d = rng.random_range(-wide..=wide);
            if (s + d).rem_euclid(2) == 0 {
                pts.push(((s + d) / 2, (s - d) / 2));
            }
        }
        if !pts.is_empty() {
            let set: WeightSet = pts.into_iter().collect();
            return set.union(&set.sigma());
        }
    }
}

pub fn random_reductions(input: &Value, ctx: &Ctx) -> OpResult {
    let inp: RandomIn = parse(input)?;
    let mut rng = ChaCha8Rng::seed_from_u64(ctx.seed(inp.seed));
    let mut checks = Checks::default();
    let mut rows = Vec::new();
    for &n in &inp.ns {
        let sp = window_regions(n, 0)?.s_plus;
        let (mut bad, mut steps) = (Vec::new(), 0);
        for _ in 0..inp.count {
            let wt = random_strip_set(&mut rng, n);
            let (out, trace) = reduce_to_window(&wt, n)?;
            steps += trace.steps.len();
            let ok = out.is_subset_of_region(&sp)
                && out.is_sigma_symmetric()
                && trace.steps.iter().all(|s| s.good && s.extremal);
            if !ok {
                bad.push(wt.to_string());
            }
        }
        checks.add(format!("n={n}"), bad.is_empty(), bad.join("; "));
        rows.push(json!({"n": n, "sets": inp.count, "steps": steps, "failures": bad.len()}));
    }
    Ok(OpReport { output: json!({ "runs": rows }), checks: checks.0, text: None })
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ExceptionalIn {
    n: usize,
    l: usize,
    #[serde(default)]
    expect_count: Option<usize>,
}

pub fn exceptional(input: &Value, _ctx: &Ctx) -> OpResult {
    let inp: ExceptionalIn = parse(input)?;
    let c = enumerate_exceptional(inp.n, inp.l)?;
    let n = inp.n;
    let mut checks = Checks::default();
    checks.add("exceptional", c.is_exceptional(), String::new());
    let mut vanishing = 0;
    let mut bad = Vec::new();
    for x in &c.objects {
        for y in &c.objects {
            let below = x.weights().iter().any(|&u| y.weights().iter().any(|&v| leq_stratum(u, v, Stratum::Full)));
            if !below {
                vanishing += 1;
                if invariant_hom_dim(x, y, n) != 0 {
                    bad.push(format!("Hom({x}, {y})"));
                }
            }
        }
    }
    checks.add("Hom vanishing", bad.is_empty(), format!("{vanishing} pairs checked {}", bad.join(", ")).trim_end().to_string());
    if inp.l == 0 && n % 2 == 1 {
        let euler = (n * n + n) / 2 + n;
        checks.add("Euler characteristic", c.objects.len() == euler, format!("{} objects, expected {euler}", c.objects.len()));
    }
    if let Some(k) = inp.expect_count {
        checks.add("count", c.objects.len() == k, format!("{} objects", c.objects.len()));
    }
    let r = window_regions(n, inp.l)?;
    let homs: Vec<Value> = c
        .edges
        .iter()
        .map(|&(a, b)| json!({"from": a, "to": b, "dim": invariant_hom_dim(&c.objects[a], &c.objects[b], n).to_string()}))
        .collect();
    let output = json!({
        "n": n,
        "l": inp.l,
        "s_plus": r.s_plus.enumerate()?.to_vec(),
        "s_minus_res": r.s_minus_res.enumerate()?.to_vec(),
        "objects": c.objects.iter().map(|o| json!({"label": o.to_string(), "irrep": to_value(o)})).collect::<Vec<_>>(),
        "homs": homs,
    });
    let text = format!(
        "{} objects: {}\n",
        c.objects.len(),
        c.exceptional_order().iter().map(|o| o.to_string()).collect::<Vec<_>>().join(", ")
    );
    Ok(OpReport { output, checks: checks.0, text: Some(text) })
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct HomIn {
    n: usize,
    source: IrrepLabel,
    target: IrrepLabel,
    #[serde(default)]
    expect: Option<u64>,
}

pub fn hom_dim(input: &Value, _ctx: &Ctx) -> OpResult {
    let inp: HomIn = parse(input)?;
    let d = invariant_hom_dim(&inp.source, &inp.target, inp.n);
    let mut checks = Checks::default();
    if let Some(e) = inp.expect {
        checks.add("dimension", d == e as u128, format!("{d}, expected {e}"));
    }
    let output = json!({"source": inp.source.to_string(), "target": inp.target.to_string(), "dim": d.to_string()});
    Ok(OpReport { output, checks: checks.0, text: Some(format!("dim Hom({}, {}) = {d}\n", inp.source, inp.target)) })
}
