use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Deserialize;
use serde_json::{json, Value};

use mfwin::clifford::{center_split, clifford_algebra, pencil_strata, stratify_system, Part, QuadraticForm, Split};
use mfwin::exactalg::Matrix;
use mfwin::Field;

use super::{literals, parse, to_value, Checks, Ctx, Entry, Failure, OpReport, OpResult};

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct BuildIn {
    form: Vec<Vec<Entry>>,
    #[serde(default)]
    field: Option<String>,
}

fn form(ctx: &Ctx, rows: &[Vec<Entry>], field: Option<&str>) -> Result<QuadraticForm, Failure> {
    let f = ctx.field(field)?;
    Ok(QuadraticForm::parse(&f, &literals(rows))?)
}

pub fn build(input: &Value, ctx: &Ctx) -> OpResult {
    let inp: BuildIn = parse(input)?;
    let q = form(ctx, &inp.form, inp.field.as_deref())?;
    let c = clifford_algebra(&q)?;
    let m = q.dim();
    let f = *q.field();
    let mut checks = Checks::default();
    let mut bad = Vec::new();
    let mut products = Vec::new();
    for i in 0..m {
        for j in 0..m {
            let (ei, ej) = (c.gen(i), c.gen(j));
            let p = c.mul(&ei, &ej);
            products.push(json!({"left": i + 1, "right": j + 1, "value": c.format(&p)}));
            let anti = c.add(&p, &c.mul(&ej, &ei));
            let two_b = c.scale(&(&f.from_i64(2) * q.matrix.get(i, j)), &c.one());
            if !c.is_zero(&c.sub(&anti, &two_b)) {
                bad.push(format!("({}, {})", i + 1, j + 1));
            }
        }
    }
    checks.add("Clifford relations", bad.is_empty(), bad.join(", "));
    checks.add("dimension", c.dim() == 1 << m, format!("{}", c.dim()));
    checks.add("even part", c.part_dim(Part::Even) == (1usize << m).div_ceil(2), format!("{}", c.part_dim(Part::Even)));
    let output = json!({
        "field": f.spec_string(),
        "form": q.to_strings(),
        "generators": m,
        "rank": q.rank(),
        "dim": c.dim(),
        "even_dim": c.part_dim(Part::Even),
        "products": products,
    });
    let text = format!("Clifford algebra on {m} generators: dim {}, even part {}\n", c.dim(), c.part_dim(Part::Even));
    Ok(OpReport { output, checks: checks.0, text: Some(text) })
}

fn even() -> Part {
    Part::Even
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct CenterIn {
    form: Vec<Vec<Entry>>,
    #[serde(default)]
    field: Option<String>,
    #[serde(default = "even")]
    part: Part,
    #[serde(default)]
    expect_center_dim: Option<usize>,
    /// One of simple, idempotent, quadratic_extension, nilpotent, other.
    #[serde(default)]
    expect_split: Option<String>,
}

fn split_kind(s: &Split) -> &'static str {
    match s {
        Split::Simple => "simple",
        Split::Idempotent { .. } => "idempotent",
        Split::QuadraticExtension { .. } => "quadratic_extension",
        Split::Nilpotent { .. } => "nilpotent",
        Split::Other => "other",
    }
}

pub fn center(input: &Value, ctx: &Ctx) -> OpResult {
    let inp: CenterIn = parse(input)?;
    let q = form(ctx, &inp.form, inp.field.as_deref())?;
    let c = clifford_algebra(&q)?;
    let r = center_split(&c, inp.part)?;
    let mut checks = Checks::default();
    if let Some(d) = inp.expect_center_dim {
        checks.add("center dimension", r.center_dim == d, format!("{}, expected {d}", r.center_dim));
    }
    if let Some(k) = &inp.expect_split {
        checks.add("split", split_kind(&r.split) == k, format!("{}, expected {k}", split_kind(&r.split)));
    }
    let text = format!(
        "center of the {:?} part: dim {} spanned by {}; nilradical dim {}; {:?}\n",
        inp.part,
        r.center_dim,
        r.center_basis.join(", "),
        r.nilradical_dim,
        r.split
    );
    Ok(OpReport { output: to_value(&r), checks: checks.0, text: Some(text) })
}

fn random_symmetric(rng: &mut ChaCha8Rng, m: usize) -> Vec<Vec<i64>> {
    let mut a = vec![vec![0; m]; m];
    for i in 0..m {
        for j in i..m {
            let v = rng.random_range(-3..=3);
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
    #[serde(default = "eight")]
    m_max: usize,
}

fn eight() -> usize {
    8
}

pub fn structure_suite(input: &Value, ctx: &Ctx) -> OpResult {
    let inp: SuiteIn = parse(input)?;
    let f = ctx.field(None)?;
    let mut rng = ChaCha8Rng::seed_from_u64(ctx.seed(inp.seed));
    let mut checks = Checks::default();
    let mut dims = Vec::new();
    for m in 1..=inp.m_max {
        let q = QuadraticForm::from_i64(&f, &random_symmetric(&mut rng, m))?;
        let c = clifford_algebra(&q)?;
        let ok = c.dim() == 1 << m && c.part_dim(Part::Even) == 1 << (m - 1);
        checks.add(format!("dims m={m}"), ok, format!("{} / {}", c.dim(), c.part_dim(Part::Even)));
        dims.push(json!({"m": m, "dim": c.dim(), "even_dim": c.part_dim(Part::Even)}));
    }
    let mut centers = Vec::new();
    for m in 2..=6usize {
        let d: Vec<i64> = (1..=m as i64).collect();
        let c = clifford_algebra(&QuadraticForm::diag(&f, &d))?;
        let r = center_split(&c, Part::Even)?;
        let want = if m % 2 == 0 { 2 } else { 1 };
        checks.add(format!("even center m={m}"), r.center_dim == want, format!("{}", r.center_dim));
        centers.push(json!({"m": m, "center_dim": r.center_dim, "split": split_kind(&r.split)}));
    }
    let c = clifford_algebra(&QuadraticForm::diag(&f, &[1, 1, 1, 0]))?;
    let r = center_split(&c, Part::Even)?;
    checks.add("corank-1 m=4 center", matches!(r.split, Split::Nilpotent { .. }), format!("{:?}", r.split));
    let output = json!({"dims": dims, "diagonal_centers": centers, "corank1": to_value(&r)});
    Ok(OpReport { output, checks: checks.0, text: None })
}

fn sixteen() -> usize {
    16
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct StrataIn {
    system: Vec<Vec<Vec<Entry>>>,
    #[serde(default)]
    field: Option<String>,
    #[serde(default = "sixteen")]
    samples: usize,
    #[serde(default)]
    seed: Option<u64>,
    #[serde(default)]
    expect_total: Option<usize>,
    #[serde(default)]
    expect_corank1: Option<usize>,
}

pub fn strata(input: &Value, ctx: &Ctx) -> OpResult {
    let inp: StrataIn = parse(input)?;
    let basis = inp
        .system
        .iter()
        .map(|m| form(ctx, m, inp.field.as_deref()))
        .collect::<Result<Vec<_>, _>>()?;
    let rep = stratify_system(&basis, inp.samples, ctx.seed(inp.seed))?;
    let mut checks = Checks::default();
    if let Some(t) = inp.expect_total {
        let got = rep.pencil.as_ref().map(|p| p.total_multiplicity);
        checks.add("total multiplicity", got == Some(t), format!("{got:?}, expected {t}"));
    }
    if let Some(t) = inp.expect_corank1 {
        let got = rep.pencil.as_ref().map(|p| p.corank1_count);
        checks.add("corank-1 members", got == Some(t), format!("{got:?}, expected {t}"));
    }
    Ok(OpReport { output: to_value(&rep), checks: checks.0, text: Some(rep.summary()) })
}

fn random_rational_symmetric(f: &Field, rng: &mut ChaCha8Rng, m: usize) -> Result<Matrix, Failure> {
    let mut a = Matrix::zero(f, m, m);
    for i in 0..m {
        for j in i..m {
            let v = f.from_ratio(rng.random_range(-9..=9), rng.random_range(1..=4))?;
            a.set(i, j, v.clone());
            a.set(j, i, v);
        }
    }
    Ok(a)
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RandomIn {
    #[serde(default)]
    seed: Option<u64>,
    #[serde(default = "default_ms")]
    ms: Vec<usize>,
    #[serde(default = "twenty")]
    count: u64,
}

fn default_ms() -> Vec<usize> {
    vec![3, 4, 5]
}
fn twenty() -> u64 {
    20
}

pub fn random_pencils(input: &Value, ctx: &Ctx) -> OpResult {
    let inp: RandomIn = parse(input)?;
    let f = ctx.field(None)?;
    let base = ctx.seed(inp.seed);
    let mut checks = Checks::default();
    let mut rows = Vec::new();
    for &m in &inp.ms {
        let mut bad = Vec::new();
        let mut corank1 = 0;
        for k in 0..inp.count {
            let mut rng = ChaCha8Rng::seed_from_u64(base.wrapping_add(1000 * m as u64 + k));
            let a = random_rational_symmetric(&f, &mut rng, m)?;
            let b = random_rational_symmetric(&f, &mut rng, m)?;
            let p = pencil_strata(&a, &b, &mut rng)?;
            if p.identically_singular || p.total_multiplicity != m {
                bad.push(format!("#{k}: det {}", p.det));
            }
            corank1 += p.corank1_count;
        }
        checks.add(format!("m={m}"), bad.is_empty(), bad.join("; "));
        rows.push(json!({"m": m, "pencils": inp.count, "corank1_members": corank1, "failures": bad.len()}));
    }
    Ok(OpReport { output: json!({ "runs": rows }), checks: checks.0, text: None })
}
