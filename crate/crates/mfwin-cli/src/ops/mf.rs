use std::collections::BTreeMap;

use rand::seq::{IndexedRandom, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Deserialize;
use serde_json::{json, Value};

use mfwin::exactalg::RConvention;
use mfwin::mf::{
    corank2_ring, direct_sum, global_def_of_k, global_quadrics, global_ring, k2_prime, knorrer_o2_kernel,
    knorrer_so2_kernel, koszul, m1, m2, standard_model_over, tensor, weights_at_point, KernelVariant, MfJson,
    ViolationKind,
};
use mfwin::{FieldElem, MatrixFactorization, Poly, RingRef, WeightMultiset};

use super::{parse, parse_elem, to_value, Checks, Ctx, Failure, OpReport, OpResult};

fn two() -> usize {
    2
}
fn three() -> usize {
    3
}
fn four() -> usize {
    4
}
fn yes() -> bool {
    true
}

/// Factorizations the payload can name.
#[derive(Clone, Debug, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ModelSpec {
    /// Resolution of the first component in the corank-2 model.
    M1 {
        #[serde(default = "two")]
        n: usize,
    },
    /// Its image under the swap.
    M2 {
        #[serde(default = "two")]
        n: usize,
    },
    K2Prime {
        #[serde(default = "two")]
        n: usize,
    },
    So2Kernel {
        #[serde(default = "four")]
        n: usize,
        #[serde(default = "three")]
        k: usize,
    },
    O2Kernel {
        #[serde(default = "four")]
        n: usize,
        #[serde(default = "three")]
        a: usize,
        #[serde(default = "four")]
        b: usize,
    },
    /// Koszul factorization of the family of quadrics `x^T A_k y`.
    GlobalKoszul { forms: Vec<Vec<Vec<i64>>> },
    /// Generator of a standard local model.
    Standard { n: usize, corank: usize, variant: KernelVariant },
    Json { factorization: MfJson },
}

impl ModelSpec {
    pub fn build(&self, ctx: &Ctx) -> Result<MatrixFactorization, Failure> {
        let field = ctx.field(None)?;
        Ok(match self {
            ModelSpec::M1 { n } => m1(&corank2_ring(*n)?)?,
            ModelSpec::M2 { n } => m2(&corank2_ring(*n)?)?,
            ModelSpec::K2Prime { n } => k2_prime(&corank2_ring(*n)?)?,
            ModelSpec::So2Kernel { n, k } => knorrer_so2_kernel(&corank2_ring(*n)?, *k)?,
            ModelSpec::O2Kernel { n, a, b } => knorrer_o2_kernel(&corank2_ring(*n)?, *a, *b)?,
            ModelSpec::GlobalKoszul { forms } => {
                let n = forms.first().map_or(0, |f| f.len());
                if n == 0 || forms.iter().any(|f| f.len() != n || f.iter().any(|r| r.len() != n)) {
                    return Err(Failure::Schema("forms must be nonempty square matrices of one size".into()));
                }
                let ring = global_ring(n, forms.len(), RConvention::LCharge, field)?;
                global_def_of_k(&ring, &global_quadrics(&ring, forms)?)?
            }
            ModelSpec::Standard { n, corank, variant } => standard_model_over(*n, *corank, *variant, field)?
                .k_sum
                .ok_or_else(|| Failure::Operation(format!("no generator for n={n}, corank {corank}")))?,
            ModelSpec::Json { factorization } => MatrixFactorization::from_json(factorization)?,
        })
    }
}

pub fn origin(ring: &RingRef) -> Vec<(String, FieldElem)> {
    let g = &ring.grading;
    (0..g.nvars())
        .filter(|&i| g.is_base_var(i))
        .map(|i| (g.vars[i].name.clone(), ring.field.zero()))
        .collect()
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct Mutation {
    row: usize,
    col: usize,
    entry: String,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct Pos {
    row: usize,
    col: usize,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ValidateIn {
    model: ModelSpec,
    #[serde(default)]
    mutate: Vec<Mutation>,
    #[serde(default = "yes")]
    expect_valid: bool,
    #[serde(default)]
    expect_violation_at: Option<Pos>,
}

pub fn validate(input: &Value, ctx: &Ctx) -> OpResult {
    let inp: ValidateIn = parse(input)?;
    let mut m = inp.model.build(ctx)?;
    for mu in &inp.mutate {
        if mu.row >= m.rank() || mu.col >= m.rank() {
            return Err(Failure::Schema(format!("mutation ({}, {}) outside rank {}", mu.row, mu.col, m.rank())));
        }
        let p = Poly::parse(&m.ring, &mu.entry)?;
        m = m.with_entry(mu.row, mu.col, p);
    }
    let rep = m.validate();
    let mut checks = Checks::default();
    checks.add("validity", rep.ok == inp.expect_valid, format!("valid = {}, expected {}", rep.ok, inp.expect_valid));
    if let Some(p) = &inp.expect_violation_at {
        let hit = rep.violations.iter().any(|v| v.row == Some(p.row) || v.col == Some(p.col));
        checks.add("violation localized", hit, format!("row {} or column {}", p.row, p.col));
    }
    let output = json!({
        "rank": m.rank(),
        "generators": m.labels(),
        "potential": m.w.to_string(),
        "has_sigma": m.sigma.is_some(),
        "report": to_value(&rep),
    });
    Ok(OpReport { output, checks: checks.0, text: Some(format!("rank {}\n{rep}", m.rank())) })
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct WeightsIn {
    model: ModelSpec,
    /// Values of base variables; unnamed ones are zero.
    #[serde(default)]
    point: BTreeMap<String, String>,
    #[serde(default)]
    expect_support: Option<Vec<Vec<i64>>>,
    #[serde(default)]
    expect: Option<Vec<(Vec<i64>, usize)>>,
}

pub fn weights(input: &Value, ctx: &Ctx) -> OpResult {
    let inp: WeightsIn = parse(input)?;
    let m = inp.model.build(ctx)?;
    let mut pt = origin(&m.ring);
    for (name, val) in &inp.point {
        let e = parse_elem(&m.ring.field, val)?;
        match pt.iter_mut().find(|(n, _)| n == name) {
            Some(slot) => slot.1 = e,
            None => return Err(Failure::Schema(format!("`{name}` is not a base variable"))),
        }
    }
    let w = weights_at_point(&m, &pt)?;
    let mut checks = Checks::default();
    if let Some(s) = &inp.expect_support {
        let want: std::collections::BTreeSet<Vec<i64>> = s.iter().cloned().collect();
        checks.add("support", w.support() == want, format!("{w}"));
    }
    if let Some(e) = &inp.expect {
        let mut want = WeightMultiset::new();
        for (k, mult) in e {
            want.add(k.clone(), *mult);
        }
        checks.add("multiset", w == want, format!("{w}, expected {want}"));
    }
    let output = json!({
        "weights": to_value(&w)["weights"],
        "display": w.to_string(),
        "total": w.total(),
        "width": w.width(),
    });
    Ok(OpReport { output, checks: checks.0, text: Some(format!("weights {w}")) })
}

/// Doubles a random nonzero entry and adds 1 to it; both mutants must be
/// rejected at that entry.
fn mutants_localized(m: &MatrixFactorization, rng: &mut ChaCha8Rng) -> Result<(), String> {
    let nz: Vec<(usize, usize)> = (0..m.rank())
        .flat_map(|h| (0..m.rank()).map(move |g| (h, g)))
        .filter(|&(h, g)| !m.d[h][g].is_zero())
        .collect();
    let &(h, g) = nz.choose(rng).ok_or("no nonzero entries")?;
    let two = m.ring.field.from_i64(2);
    let rep = m.with_entry(h, g, m.d[h][g].scale(&two)).validate();
    if rep.ok {
        return Err(format!("doubled entry ({h},{g}) accepted"));
    }
    let localized = rep.violations.iter().all(|v| match v.kind {
        ViolationKind::Square => v.row == Some(h) || v.col == Some(g),
        ViolationKind::Sigma => v.row.is_some() && v.col.is_some(),
        _ => false,
    });
    let sigma_hit = m.sigma.is_none()
        || rep.violations.iter().any(|v| v.kind == ViolationKind::Sigma && (v.row, v.col) == (Some(h), Some(g)));
    if !(localized && sigma_hit) {
        return Err(format!("doubled entry ({h},{g}) not localized"));
    }
    let inhom = m.with_entry(h, g, &m.d[h][g] + &Poly::one(&m.ring)).validate();
    if !inhom
        .violations
        .iter()
        .any(|v| v.kind == ViolationKind::Homogeneity && v.row == Some(h) && v.col == Some(g))
    {
        return Err(format!("inhomogeneous entry ({h},{g}) not reported there"));
    }
    Ok(())
}

fn random_symmetric(rng: &mut ChaCha8Rng, n: usize, range: i64) -> Vec<Vec<i64>> {
    let mut a = vec![vec![0; n]; n];
    for i in 0..n {
        for j in i..n {
            let v = rng.random_range(-range..=range);
            a[i][j] = v;
            a[j][i] = v;
        }
    }
    a
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SuiteIn {
    #[serde(default)]
    seed: Option<u64>,
    #[serde(default = "three")]
    n_max: usize,
    #[serde(default = "three")]
    l_max: usize,
}

pub fn validity_suite(input: &Value, ctx: &Ctx) -> OpResult {
    let inp: SuiteIn = parse(input)?;
    let mut rng = ChaCha8Rng::seed_from_u64(ctx.seed(inp.seed));
    let ring = corank2_ring(2)?;
    let ring4 = corank2_ring(4)?;
    let mut cases = vec![
        ("M1".to_string(), m1(&ring)?),
        ("M2".to_string(), m2(&ring)?),
        ("K2'".to_string(), k2_prime(&ring)?),
        ("SO2 kernel".to_string(), knorrer_so2_kernel(&ring4, 3)?),
        ("O2 kernel".to_string(), knorrer_o2_kernel(&ring4, 3, 4)?),
    ];
    for n in 1..=inp.n_max {
        for l in 1..=inp.l_max {
            let g = global_ring(n, l, RConvention::LCharge, ctx.field(None)?)?;
            let forms: Vec<Vec<Vec<i64>>> = (0..l).map(|_| random_symmetric(&mut rng, n, 3)).collect();
            cases.push((format!("global Koszul n={n} l={l}"), global_def_of_k(&g, &global_quadrics(&g, &forms)?)?));
        }
    }
    let mut checks = Checks::default();
    let mut rows = Vec::new();
    for (name, m) in &cases {
        let rep = m.validate();
        checks.add(format!("{name} valid"), rep.ok, if rep.ok { String::new() } else { rep.to_string() });
        let mu = mutants_localized(m, &mut rng);
        checks.add(format!("{name} mutants"), mu.is_ok(), mu.err().unwrap_or_default());
        rows.push(json!({"name": name, "rank": m.rank(), "valid": rep.ok}));
    }
    Ok(OpReport { output: json!({ "factorizations": rows }), checks: checks.0, text: None })
}

fn var(ring: &RingRef, name: &str) -> Result<Poly, Failure> {
    Ok(Poly::var_named(ring, name)?)
}

fn random_factorization(ring: &RingRef, rng: &mut ChaCha8Rng) -> Result<MatrixFactorization, Failure> {
    let kos = koszul(
        &[var(ring, "x1")?, var(ring, "x2")?],
        &[
            &(&var(ring, "s")? * &var(ring, "y1")?) + &(&var(ring, "t")? * &var(ring, "y2")?),
            &(&var(ring, "t")? * &var(ring, "y1")?) + &(&var(ring, "u")? * &var(ring, "y2")?),
        ],
    )?;
    let pool = [m1(ring)?, m2(ring)?, kos];
    let pick = |rng: &mut ChaCha8Rng| {
        let f = pool.choose(rng).expect("nonempty pool").twist(&[rng.random_range(-2..=2)]);
        f.shift(rng.random_range(0..=1) * 2)
    };
    let mut m = pick(rng);
    if rng.random_bool(0.5) {
        m = direct_sum(&m, &pick(rng).relabel("s"))?;
    }
    let mut perm: Vec<usize> = (0..m.rank()).collect();
    perm.shuffle(rng);
    let scale: Vec<FieldElem> = (0..m.rank())
        .map(|_| ring.field.from_i64(rng.random_range(1..=5) * if rng.random_bool(0.5) { 1 } else { -1 }))
        .collect();
    Ok(m.conjugate(&perm, &scale)?)
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct LawsIn {
    #[serde(default)]
    seed: Option<u64>,
    #[serde(default = "ten")]
    trials: usize,
}

fn ten() -> usize {
    10
}

pub fn knorrer_laws(input: &Value, ctx: &Ctx) -> OpResult {
    let inp: LawsIn = parse(input)?;
    let ring = corank2_ring(4)?;
    let pt = origin(&ring);
    let kernels = [
        ("SO2", knorrer_so2_kernel(&ring, 3)?, WeightMultiset::from_weights([vec![-1], vec![0]])),
        ("O2", knorrer_o2_kernel(&ring, 3, 4)?, WeightMultiset::from_weights([vec![-1], vec![0], vec![0], vec![1]])),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(ctx.seed(inp.seed));
    let mut checks = Checks::default();
    let mut trials = Vec::new();
    for trial in 0..inp.trials {
        let f = random_factorization(&ring, &mut rng)?;
        let wf = weights_at_point(&f, &pt)?;
        let mut row = json!({"trial": trial, "rank": f.rank(), "weights": wf.to_string()});
        for (name, k, kw) in &kernels {
            let wt = weights_at_point(&tensor(&f, k)?, &pt)?;
            checks.add(format!("trial {trial} {name}"), wt == wf.convolve(kw), format!("{wf} -> {wt}"));
            row[*name] = Value::String(wt.to_string());
        }
        trials.push(row);
    }
    let output = json!({
        "kernels": kernels.iter().map(|(n, _, w)| json!({"name": n, "weights": w.to_string()})).collect::<Vec<_>>(),
        "trials": trials,
    });
    Ok(OpReport { output, checks: checks.0, text: None })
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct EvenIn {
    #[serde(default = "even_ns")]
    ns: Vec<usize>,
    #[serde(default = "even_coranks")]
    coranks: Vec<usize>,
}

fn even_ns() -> Vec<usize> {
    vec![2, 4]
}
fn even_coranks() -> Vec<usize> {
    vec![0, 1]
}

pub fn even_bound(input: &Value, ctx: &Ctx) -> OpResult {
    let inp: EvenIn = parse(input)?;
    let mut checks = Checks::default();
    let mut rows = Vec::new();
    for &n in &inp.ns {
        if n % 2 == 1 {
            return Err(Failure::Schema(format!("n = {n} is odd")));
        }
        for &corank in &inp.coranks {
            for variant in [KernelVariant::So2, KernelVariant::O2] {
                let m = standard_model_over(n, corank, variant, ctx.field(None)?)?;
                let s = m.k_sum.as_ref().ok_or_else(|| Failure::Operation("no generator".into()))?;
                let w = weights_at_point(s, &origin(&m.ring))?;
                let bound = n as i64 / 2;
                let name = format!("n={n} corank={corank} {variant:?}");
                checks.add(format!("{name} valid"), s.validate().ok, String::new());
                checks.add(
                    format!("{name} bound"),
                    !w.is_empty() && w.support().iter().all(|v| v[0].abs() <= bound),
                    format!("{w}, bound {bound}"),
                );
                rows.push(json!({"n": n, "corank": corank, "variant": variant, "weights": w.to_string(), "bound": bound}));
            }
        }
    }
    Ok(OpReport { output: json!({ "models": rows }), checks: checks.0, text: None })
}
