//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Exits 0 after printing the summary so that `cargo test` reports the
//! results without aborting; set MFWIN_ACCEPTANCE_STRICT=1 to exit nonzero
//! when any criterion fails.

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use rand::seq::{IndexedRandom, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use mfwin::clifford::{center_split, clifford_algebra, pencil_strata, Part, QuadraticForm, Split};
use mfwin::exactalg::{Matrix, RConvention};
use mfwin::homalg::{check_presentation, corank2_report, so2_end_algebra, DEFAULT_CAP};
use mfwin::mf::{
    corank2_ring, direct_sum, global_def_of_k, global_quadrics, global_ring, koszul, knorrer_o2_kernel,
    knorrer_so2_kernel, m1, m2, standard_model, tensor, weights_at_point, KernelVariant,
    ViolationKind,
};
use mfwin::windows::{
    enumerate_exceptional, invariant_hom_dim, leq_stratum, reduce_to_window, sigma, window_regions,
    IrrepLabel, Stratum, Weight, WeightSet,
};
use mfwin::{Field, FieldElem, MatrixFactorization, Poly, RingRef, WeightMultiset};

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(t: Instant, budget: Duration) -> Result<(), String> {
    let e = t.elapsed();
    ensure(e <= budget, || format!("took {:.2?}, budget {:.0?}", e, budget))
}

fn origin(ring: &RingRef) -> Vec<(String, FieldElem)> {
    let g = &ring.grading;
    (0..g.nvars())
        .filter(|&i| g.is_base_var(i))
        .map(|i| (g.vars[i].name.clone(), ring.field.zero()))
        .collect()
}

fn mset(ws: &[i64]) -> WeightMultiset {
    WeightMultiset::from_weights(ws.iter().map(|&w| vec![w]))
}

fn var(ring: &RingRef, name: &str) -> Poly {
    Poly::var_named(ring, name).unwrap()
}

fn c1_corank2_end_algebra() -> Outcome {
    let t = Instant::now();
    let rep = corank2_report(DEFAULT_CAP).map_err(|e| e.to_string())?;
    let failed: Vec<String> = rep.failures().iter().map(|c| format!("{}: {}", c.name, c.detail)).collect();
    ensure(failed.is_empty(), || failed.join("; "))?;
    let dims: Vec<usize> = rep.verdict.dims_computed.values().copied().collect();
    ensure(dims == (1..=11).collect::<Vec<_>>(), || format!("graded dimensions {dims:?}"))?;
    within(t, Duration::from_secs(10))?;
    Ok(format!("{} checks, presentation agrees to degree {}", rep.checks.len(), DEFAULT_CAP))
}

/// Replaces a nonzero entry by a multiple and by an inhomogeneous sum, and
/// checks that each mutant is rejected at that position.
fn mutants_localized(m: &MatrixFactorization, rng: &mut ChaCha8Rng) -> Result<(), String> {
    let nz: Vec<(usize, usize)> = (0..m.rank())
        .flat_map(|h| (0..m.rank()).map(move |g| (h, g)))
        .filter(|&(h, g)| !m.d[h][g].is_zero())
        .collect();
    let &(h, g) = nz.choose(rng).ok_or("no nonzero entries")?;
    let two = m.ring.field.from_i64(2);
    let bad = m.with_entry(h, g, m.d[h][g].scale(&two));
    let rep = bad.validate();
    ensure(!rep.ok, || format!("doubled entry ({h},{g}) accepted"))?;
    // Square residuals lie in row h or column g; a sigma-structure also
    // flags the mutated entry itself.
    let localized = rep.violations.iter().all(|v| match v.kind {
        ViolationKind::Square => v.row == Some(h) || v.col == Some(g),
        ViolationKind::Sigma => v.row.is_some() && v.col.is_some(),
        _ => false,
    });
    let sigma_hit = m.sigma.is_none()
        || rep.violations.iter().any(|v| v.kind == ViolationKind::Sigma && (v.row, v.col) == (Some(h), Some(g)));
    ensure(localized && sigma_hit, || format!("doubled entry ({h},{g}) not localized: {rep}"))?;
    let one = Poly::one(&m.ring);
    let inhom = m.with_entry(h, g, &m.d[h][g] + &one);
    ensure(
        inhom
            .validate()
            .violations
            .iter()
            .any(|v| v.kind == ViolationKind::Homogeneity && v.row == Some(h) && v.col == Some(g)),
        || format!("inhomogeneous entry ({h},{g}) not reported there"),
    )
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

fn c2_validity() -> Outcome {
    let t = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut cases: Vec<(String, MatrixFactorization)> = Vec::new();
    let ring = corank2_ring(2).map_err(|e| e.to_string())?;
    cases.push(("M1".into(), m1(&ring).map_err(|e| e.to_string())?));
    cases.push(("M2".into(), m2(&ring).map_err(|e| e.to_string())?));
    let ring4 = corank2_ring(4).map_err(|e| e.to_string())?;
    cases.push(("SO2 kernel".into(), knorrer_so2_kernel(&ring4, 3).map_err(|e| e.to_string())?));
    cases.push(("O2 kernel".into(), knorrer_o2_kernel(&ring4, 3, 4).map_err(|e| e.to_string())?));
    for n in 1..=3 {
        for l in 1..=3 {
            let gring = global_ring(n, l, RConvention::LCharge, Field::Rational).map_err(|e| e.to_string())?;
            let forms: Vec<Vec<Vec<i64>>> = (0..l).map(|_| random_symmetric(&mut rng, n, 3)).collect();
            let f = global_quadrics(&gring, &forms).map_err(|e| e.to_string())?;
            match global_def_of_k(&gring, &f) {
                Ok(k) => cases.push((format!("global Koszul n={n} l={l}"), k)),
                Err(e) => return Err(format!("global Koszul n={n} l={l}: {e}")),
            }
        }
    }
    for (name, m) in &cases {
        let rep = m.validate();
        ensure(rep.ok, || format!("{name}: {rep}"))?;
        mutants_localized(m, &mut rng).map_err(|e| format!("{name}: {e}"))?;
    }
    within(t, Duration::from_secs(5))?;
    Ok(format!("{} factorizations valid, all mutants rejected at the mutated entry", cases.len()))
}

fn random_factorization(ring: &RingRef, rng: &mut ChaCha8Rng) -> MatrixFactorization {
    let a = m1(ring).unwrap();
    let b = m2(ring).unwrap();
    let kos = koszul(
        &[var(ring, "x1"), var(ring, "x2")],
        &[
            &(&var(ring, "s") * &var(ring, "y1")) + &(&var(ring, "t") * &var(ring, "y2")),
            &(&var(ring, "t") * &var(ring, "y1")) + &(&var(ring, "u") * &var(ring, "y2")),
        ],
    )
    .unwrap();
    let pool = [a, b, kos];
    let pick = |rng: &mut ChaCha8Rng| {
        let f = pool.choose(rng).unwrap().clone();
        let f = f.twist(&[rng.random_range(-2..=2)]);
        f.shift(rng.random_range(0..=1) * 2)
    };
    let mut m = pick(rng);
    for k in 0..rng.random_range(0..=1) {
        let other = pick(rng).relabel(&format!("s{k}"));
        m = direct_sum(&m, &other).unwrap();
    }
    let mut perm: Vec<usize> = (0..m.rank()).collect();
    perm.shuffle(rng);
    let scale: Vec<FieldElem> = (0..m.rank())
        .map(|_| {
            let v = rng.random_range(1..=5) * if rng.random_bool(0.5) { 1 } else { -1 };
            ring.field.from_i64(v)
        })
        .collect();
    m.conjugate(&perm, &scale).unwrap()
}

fn c3_weight_laws() -> Outcome {
    let ring = corank2_ring(2).map_err(|e| e.to_string())?;
    let a = m1(&ring).map_err(|e| e.to_string())?;
    let w0 = weights_at_point(&a, &origin(&ring)).map_err(|e| e.to_string())?;
    ensure(w0.support() == mset(&[-1, 0]).support(), || format!("weights at the origin {w0}"))?;
    let p = mfwin::mf::base_point(&ring, &[("s", 1), ("t", 0), ("u", 1)]);
    let w1 = weights_at_point(&a, &p).map_err(|e| e.to_string())?;
    ensure(w1.is_empty(), || format!("weights at a corank-0 point {w1}"))?;

    let ring4 = corank2_ring(4).map_err(|e| e.to_string())?;
    let pt = origin(&ring4);
    let so2 = knorrer_so2_kernel(&ring4, 3).map_err(|e| e.to_string())?;
    let o2 = knorrer_o2_kernel(&ring4, 3, 4).map_err(|e| e.to_string())?;
    let so2_w = mset(&[-1, 0]);
    let o2_w = mset(&[-1, 0, 0, 1]);
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for trial in 0..10 {
        let f = random_factorization(&ring4, &mut rng);
        ensure(f.validate().ok, || format!("trial {trial}: random factorization invalid"))?;
        let wf = weights_at_point(&f, &pt).map_err(|e| e.to_string())?;
        for (name, k, kw) in [("SO2", &so2, &so2_w), ("O2", &o2, &o2_w)] {
            let t = tensor(&f, k).map_err(|e| e.to_string())?;
            let wt = weights_at_point(&t, &pt).map_err(|e| e.to_string())?;
            ensure(wt == wf.convolve(kw), || format!("trial {trial} {name}: {wf} -> {wt}"))?;
        }
    }
    let o2_support: BTreeSet<i64> = o2_w.support().into_iter().map(|v| v[0]).collect();
    ensure(o2_support == BTreeSet::from([-1, 0, 1]), || "O2 support".into())?;
    Ok("origin {-1,0}, corank-0 point empty, 10 random factorizations obey both laws".into())
}

fn c4_even_bound() -> Outcome {
    let mut parts = Vec::new();
    for n in [2usize, 4] {
        for corank in [0usize, 1] {
            for variant in [KernelVariant::So2, KernelVariant::O2] {
                let m = standard_model(n, corank, variant).map_err(|e| e.to_string())?;
                let s = m.k_sum.as_ref().ok_or("no generator")?;
                ensure(s.validate().ok, || format!("({n},{corank},{variant:?}) invalid"))?;
                let w = weights_at_point(s, &origin(&m.ring)).map_err(|e| e.to_string())?;
                let half = n as i64 / 2;
                ensure(!w.is_empty(), || format!("({n},{corank},{variant:?}) has no weights"))?;
                ensure(w.support().iter().all(|v| v[0].abs() <= half), || {
                    format!("({n},{corank},{variant:?}) weights {w}")
                })?;
                parts.push(format!("n={n} c={corank} {variant:?} width {}", w.width()));
            }
        }
    }
    Ok(parts.join("; "))
}

/// Definitional enumeration over a box: points with sum in [lo, hi] and
/// |i - j| <= width.
fn brute_region(lo: i64, hi: i64, width: i64) -> BTreeSet<Weight> {
    let mut out = BTreeSet::new();
    for i in -20..=20 {
        for j in -20..=20 {
            if (lo..=hi).contains(&(i + j)) && (i - j).abs() <= width {
                out.insert((i, j));
            }
        }
    }
    out
}

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

fn ws(v: &[Weight]) -> WeightSet {
    v.iter().copied().collect()
}

fn c5_windows() -> Outcome {
    let t = Instant::now();
    let r = window_regions(3, 2).map_err(|e| e.to_string())?;
    let plus = r.s_plus.enumerate().map_err(|e| e.to_string())?;
    let res = r.s_minus_res.enumerate().map_err(|e| e.to_string())?;
    ensure(plus.points == brute_region(0, 5, 1) && plus.len() == 9, || format!("S+ = {plus}"))?;
    ensure(res.points == brute_region(0, 3, 1) && res.len() == 6, || format!("S-,res = {res}"))?;

    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for n in 3..=5 {
        let sp = window_regions(n, 0).map_err(|e| e.to_string())?.s_plus;
        for _ in 0..100 {
            let wt = random_strip_set(&mut rng, n);
            let (out, trace) = reduce_to_window(&wt, n).map_err(|e| format!("{wt}: {e}"))?;
            ensure(out.is_subset_of_region(&sp) && out.is_sigma_symmetric(), || format!("n={n}: {wt} -> {out}"))?;
            ensure(trace.steps.iter().all(|s| s.good && s.extremal), || format!("n={n}: bad step for {wt}"))?;
        }
    }

    // The recorded derivation for {(0,3),(3,0)} at n = 3.
    let (_, trace) = reduce_to_window(&ws(&[(0, 3), (3, 0)]), 3).map_err(|e| e.to_string())?;
    let recorded = [ws(&[(0, 0), (0, 1), (1, 0), (0, 2), (2, 0)]), ws(&[(0, 0), (0, 1), (1, 0), (2, 2)])];
    ensure(trace.steps.len() == recorded.len(), || format!("trace has {} steps", trace.steps.len()))?;
    for (k, (step, want)) in trace.steps.iter().zip(&recorded).enumerate() {
        ensure(&step.result == want, || {
            format!("trace step {} gives {} but the recorded derivation has {}", k + 1, step.result, want)
        })?;
    }
    within(t, Duration::from_secs(5))?;
    Ok("regions match, 300 reductions land in S+, trace matches".into())
}

/// Invariant Hom dimension by listing basis triples (a, b, monomial) and
/// their sigma-orbits directly.
fn brute_hom_dim(rho: &IrrepLabel, rho2: &IrrepLabel, n: usize) -> u128 {
    fn exps(n: usize, deg: i64) -> Vec<Vec<i64>> {
        if deg < 0 {
            return vec![];
        }
        if n == 1 {
            return vec![vec![deg]];
        }
        (0..=deg)
            .flat_map(|k| {
                exps(n - 1, deg - k).into_iter().map(move |mut v| {
                    v.push(k);
                    v
                })
            })
            .collect()
    }
    let sign = rho.sign() * rho2.sign();
    let mut triples = BTreeSet::new();
    for a in rho.weights() {
        for b in rho2.weights() {
            for ex in exps(n, b.0 - a.0) {
                for ey in exps(n, b.1 - a.1) {
                    triples.insert((a, b, ex.clone(), ey));
                }
            }
        }
    }
    let mut seen = BTreeSet::new();
    let mut count = 0;
    for tr in &triples {
        if seen.contains(tr) {
            continue;
        }
        let img = (sigma(tr.0), sigma(tr.1), tr.3.clone(), tr.2.clone());
        seen.insert(tr.clone());
        seen.insert(img.clone());
        if &img != tr || sign > 0 {
            count += 1;
        }
    }
    count
}

fn c6_exceptional() -> Outcome {
    let c = enumerate_exceptional(3, 0).map_err(|e| e.to_string())?;
    let n = 3usize;
    let euler = (n * n + n) / 2 + n;
    ensure(c.objects.len() == euler, || format!("{} objects, expected {euler}", c.objects.len()))?;
    ensure(c.is_exceptional(), || "collection is not exceptional".into())?;
    let mut pairs = 0;
    for (n, l) in [(3usize, 0usize), (3, 2), (5, 5)] {
        let c = enumerate_exceptional(n, l).map_err(|e| e.to_string())?;
        for x in &c.objects {
            for y in &c.objects {
                let below = x.weights().iter().any(|&u| y.weights().iter().any(|&v| leq_stratum(u, v, Stratum::Full)));
                let d = invariant_hom_dim(x, y, n);
                if n <= 3 {
                    let b = brute_hom_dim(x, y, n);
                    ensure(d == b, || format!("Hom({x}, {y}) n={n}: {d} vs oracle {b}"))?;
                }
                if !below {
                    pairs += 1;
                    ensure(d == 0, || format!("Hom({x}, {y}) = {d} at n={n}, l={l}"))?;
                }
            }
        }
    }
    Ok(format!("9 objects, Hom vanishes on {pairs} ordered pairs with source not below target"))
}

fn c7_clifford() -> Outcome {
    let f = Field::Rational;
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for m in 1..=8 {
        let q = QuadraticForm::from_i64(&f, &random_symmetric(&mut rng, m, 3)).map_err(|e| e.to_string())?;
        let c = clifford_algebra(&q).map_err(|e| e.to_string())?;
        ensure(c.dim() == 1 << m && c.part_dim(Part::Even) == 1 << (m - 1), || format!("m={m} dims"))?;
        ensure(c.basis(Part::Even).len() == 1 << (m - 1), || format!("m={m} even basis"))?;
    }
    for m in 2..=6 {
        let d: Vec<i64> = (1..=m as i64).collect();
        let c = clifford_algebra(&QuadraticForm::diag(&f, &d)).map_err(|e| e.to_string())?;
        let even = center_split(&c, Part::Even).map_err(|e| e.to_string())?;
        let want = if m % 2 == 0 { 2 } else { 1 };
        ensure(even.center_dim == want, || format!("m={m}: even center dim {}", even.center_dim))?;
    }
    let c = clifford_algebra(&QuadraticForm::diag(&f, &[1, 1, 1, 0])).map_err(|e| e.to_string())?;
    let r = center_split(&c, Part::Even).map_err(|e| e.to_string())?;
    ensure(matches!(r.split, Split::Nilpotent { .. }), || format!("corank-1 m=4 split {:?}", r.split))?;
    Ok(format!("dims to m=8, centers m=2..6, corank-1 center {:?}", r.split))
}

fn random_rational_symmetric(f: &Field, rng: &mut ChaCha8Rng, m: usize) -> Matrix {
    let mut a = Matrix::zero(f, m, m);
    for i in 0..m {
        for j in i..m {
            let v = f.from_ratio(rng.random_range(-9..=9), rng.random_range(1..=4)).unwrap();
            a.set(i, j, v.clone());
            a.set(j, i, v);
        }
    }
    a
}

fn c8_pencils() -> Outcome {
    let t = Instant::now();
    let f = Field::Rational;
    let mut total = 0;
    for m in 3..=5 {
        for seed in 0..20u64 {
            let mut rng = ChaCha8Rng::seed_from_u64(1000 * m as u64 + seed);
            let a = random_rational_symmetric(&f, &mut rng, m);
            let b = random_rational_symmetric(&f, &mut rng, m);
            let p = pencil_strata(&a, &b, &mut rng).map_err(|e| e.to_string())?;
            ensure(!p.identically_singular, || format!("m={m} seed={seed}: singular pencil"))?;
            ensure(p.total_multiplicity == m, || {
                format!("m={m} seed={seed}: multiplicity {} (det {})", p.total_multiplicity, p.det)
            })?;
            total += 1;
        }
    }
    within(t, Duration::from_secs(5))?;
    Ok(format!("{total} pencils, singular members with multiplicity = m"))
}

fn c9_so2_variant() -> Outcome {
    let (alg, target) = so2_end_algebra(3, 2, DEFAULT_CAP).map_err(|e| e.to_string())?;
    let v = check_presentation(&alg.presentation, &target, DEFAULT_CAP).map_err(|e| e.to_string())?;
    ensure(v.matches, || v.to_string())?;
    Ok(format!("presentation agrees to degree {DEFAULT_CAP}"))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("corank-2 endomorphism algebra", c1_corank2_end_algebra),
        ("factorization validity", c2_validity),
        ("weight laws", c3_weight_laws),
        ("even-case generator bound", c4_even_bound),
        ("window combinatorics", c5_windows),
        ("exceptional collections", c6_exceptional),
        ("Clifford structure", c7_clifford),
        ("pencil stratification", c8_pencils),
        ("SO(2) variant", c9_so2_variant),
    ];
    let mut failed = 0;
    for (k, (name, f)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let res = std::panic::catch_unwind(f).unwrap_or_else(|_| Err("panicked".into()));
        let dt = t.elapsed();
        match res {
            Ok(detail) => println!("criterion {} ({name}): PASS - {detail} [{dt:.2?}]", k + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {} ({name}): FAIL - {detail} [{dt:.2?}]", k + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 && std::env::var("MFWIN_ACCEPTANCE_STRICT").is_ok_and(|v| v == "1") {
        std::process::exit(1);
    }
}
