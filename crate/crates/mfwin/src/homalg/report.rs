//! End-to-end checks of the corank-2 local computation, collected into a
//! serializable report.

use serde::Serialize;

use super::{
    check_presentation, corank2_end_algebra, corank2_target, dg_cohomology, invariant_degree_zero,
    presentation_from_relations, same_relations_up_to, BaseSplit, CohomologyModule, Verdict,
};
use crate::error::Result;
use crate::exactalg::{Field, Poly, RingRef};
use crate::groebner::{BaseRing, GroebnerBasis, SubquotientPresentation};
use crate::mf::{corank2_ring, m1, m2, q_ideal, MatrixFactorization};

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub ok: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct Corank2Report {
    pub checks: Vec<Check>,
    /// Products `theta_i theta_j` as (left, right, value).
    pub theta_table: Vec<(String, String, String)>,
    pub verdict: Verdict,
}

impl Corank2Report {
    pub fn ok(&self) -> bool {
        self.checks.iter().all(|c| c.ok)
    }

    pub fn failures(&self) -> Vec<&Check> {
        self.checks.iter().filter(|c| !c.ok).collect()
    }
}

fn p(ring: &RingRef, s: &str) -> Result<Poly> {
    Poly::parse(ring, s)
}

fn polys(ring: &RingRef, xs: &[&str]) -> Result<Vec<Poly>> {
    xs.iter().map(|s| p(ring, s)).collect()
}

fn congruent(gb: &GroebnerBasis, a: &Poly, b: &Poly) -> Result<bool> {
    Ok(gb.reduce_poly(&(a - b))?.is_zero())
}

/// Sign e in {1, -1} with `e * ours(i, j) = hand[i][j]` modulo the ideal.
fn block_sign(
    gb: &GroebnerBasis,
    ring: &RingRef,
    ours: &dyn Fn(usize, usize) -> Poly,
    hand: &[[&str; 3]; 3],
) -> Result<Option<i64>> {
    for e in [1, -1] {
        let mut all = true;
        'outer: for (i, row) in hand.iter().enumerate() {
            for (j, h) in row.iter().enumerate() {
                let o = if e == 1 { ours(i, j) } else { -&ours(i, j) };
                if !congruent(gb, &o, &p(ring, h)?)? {
                    all = false;
                    break 'outer;
                }
            }
        }
        if all {
            return Ok(Some(e));
        }
    }
    Ok(None)
}

/// Signs of the right block (rows e, f2, f3; columns f1, g1, g2) and left
/// block (transposed index sets) of the restricted dual.
fn dual_signs(
    ring: &RingRef,
    gb: &GroebnerBasis,
    m: &MatrixFactorization,
    pre: &str,
    dr: [[&str; 3]; 3],
    dl: [[&str; 3]; 3],
) -> Result<(Option<i64>, Option<i64>)> {
    let dual = m.dual();
    let idx = |l: &str| dual.index_of(&format!("{pre}{l}^v"));
    let rows = [idx("e")?, idx("f2")?, idx("f3")?];
    let cols = [idx("f1")?, idx("g1")?, idx("g2")?];
    Ok((
        block_sign(gb, ring, &|i, j| dual.d[rows[i]][cols[j]].clone(), &dr)?,
        block_sign(gb, ring, &|i, j| dual.d[cols[i]][rows[j]].clone(), &dl)?,
    ))
}

fn vector(ring: &RingRef, c: &CohomologyModule, coeffs: &[(&str, &str)]) -> Result<Vec<Poly>> {
    let mut v = vec![Poly::zero(ring); c.ambient.len()];
    for (l, s) in coeffs {
        if let Some(k) = c.ambient_labels.iter().position(|x| x == l) {
            v[k] = p(ring, s)?;
        }
    }
    Ok(v)
}

fn s_presentation(
    split: &BaseSplit,
    labels: &[&str],
    weights: &[i64],
    rels: &[&[&str]],
) -> Result<SubquotientPresentation> {
    let s = &split.s_ring;
    Ok(presentation_from_relations(
        &BaseRing::polynomial(s),
        labels,
        weights.iter().map(|&w| split.s_degree(w)).collect(),
        rels.iter().map(|r| polys(s, r)).collect::<Result<_>>()?,
    ))
}

/// Runs every check of the corank-2 computation up to weight `cap`.
pub fn corank2_report(cap: i64) -> Result<Corank2Report> {
    let mut checks = Vec::new();
    let mut push = |name: &str, ok: bool, detail: String| {
        checks.push(Check { name: name.into(), ok, detail })
    };
    let ring = corank2_ring(2)?;
    let q = q_ideal(&ring)?;
    let gb = BaseRing::quotient(&ring, q.clone()).ideal_gb()?;
    let a = m1(&ring)?;
    let b = m2(&ring)?;

    let r1 = dual_signs(
        &ring,
        &gb,
        &a,
        "",
        [["0", "y1", "y2"], ["x1", "-u", "t"], ["x2", "t", "-s"]],
        [
            ["0", "s*y1 + t*y2", "t*y1 + u*y2"],
            ["0", "-x2*y2", "x1*y2"],
            ["0", "x2*y1", "-x1*y1"],
        ],
    )?;
    push("restricted dual of M1", r1 == (Some(-1), Some(1)), format!("block signs {r1:?}"));
    let r2 = dual_signs(
        &ring,
        &gb,
        &b,
        "σ",
        [["0", "x1", "x2"], ["y1", "-u", "t"], ["y2", "t", "-s"]],
        [
            ["0", "0", "0"],
            ["s*y1 + t*y2", "-x2*y2", "x2*y1"],
            ["t*y1 + u*y2", "x1*y2", "-x1*y1"],
        ],
    )?;
    push("restricted dual of M2", r2 == (Some(1), Some(-1)), format!("block signs {r2:?}"));

    let split = BaseSplit::new(&ring)?;

    // Endomorphisms of M1 over the restriction: one generator e^v.
    let dual = a.dual();
    let h = dg_cohomology(&dual, Some(&q))?;
    let par = dual.gens[dual.index_of("e^v")?].parity(&ring.grading);
    push("H of M1^v: other parity vanishes", h.half(par + 1).is_zero(), String::new());
    let c = h.half(par);
    let ev = vector(&ring, c, &[("e^v", "1")])?;
    let c = c.with_generators(&dual, &[("e^v", ev)])?;
    let expected = presentation_from_relations(
        &c.presentation.base,
        &["e^v"],
        vec![c.presentation.gen_degrees[0].clone()],
        polys(&ring, &["x1*y1", "x1*y2", "x2*y1", "x2*y2", "t*y1 + u*y2", "s*y1 + t*y2"])?
            .into_iter()
            .map(|x| vec![x])
            .collect(),
    );
    push(
        "H of M1^v: relations of e^v",
        same_relations_up_to(&c.presentation, &expected, &[0], &[1])?,
        String::new(),
    );
    let inv = invariant_degree_zero(&c)?;
    let target = s_presentation(&split, &["e^v"], &[0], &[&["s*u - t^2"]])?;
    push(
        "invariant part of H of M1^v is S/(su - t^2)",
        same_relations_up_to(&inv, &target, &[0], &[1])?,
        String::new(),
    );

    // Maps from M2: generators h1, h2, h3 with y_k h3 exact.
    let dual = b.dual();
    let h = dg_cohomology(&dual, Some(&q))?;
    let par = dual.gens[dual.index_of("σg1^v")?].parity(&ring.grading);
    push("H of M2^v: other parity vanishes", h.half(par + 1).is_zero(), String::new());
    let c = h.half(par);
    let gens = [
        ("h1", vector(&ring, c, &[("σg1^v", "s"), ("σg2^v", "t")])?),
        ("h2", vector(&ring, c, &[("σg1^v", "t"), ("σg2^v", "u")])?),
        ("h3", vector(&ring, c, &[("σg1^v", "x2"), ("σg2^v", "-x1")])?),
    ];
    let c = c.with_generators(&dual, &gens)?;
    let mut exact = true;
    for y in ["y1", "y2"] {
        let yp = p(&ring, y)?;
        let v: Vec<Poly> = gens[2].1.iter().map(|x| x * &yp).collect();
        exact &= c.is_exact(&v)?;
    }
    push("y_k h3 is exact", exact, String::new());
    let inv = invariant_degree_zero(&c)?;
    let labels_ok = inv.labels == ["h1", "h2"];
    let ours = s_presentation(&split, &["h1", "h2"], &[2, 2], &[&["t", "-s"], &["u", "-t"]])?;
    let swapped = s_presentation(&split, &["h1", "h2"], &[2, 2], &[&["s", "-t"], &["t", "-u"]])?;
    push(
        "invariant part of H of M2^v",
        labels_ok
            && same_relations_up_to(&inv, &ours, &[0, 1], &[1, 1])?
            && same_relations_up_to(&inv, &swapped, &[1, 0], &[1, 1])?,
        format!("generators {:?}; relations agree with h1, h2 swapped", inv.labels),
    );

    // The endomorphism algebra of the kernel.
    let (t, alg) = corank2_end_algebra(cap)?;
    let pres = &alg.presentation;
    let theta_table: Vec<(String, String, String)> =
        pres.table.iter().map(|e| (e.left.clone(), e.right.clone(), e.value.clone())).collect();
    let expect = [("theta1", "theta1", "s"), ("theta1", "theta2", "t"), ("theta2", "theta1", "t"), ("theta2", "theta2", "u")];
    let table_ok = theta_table.len() == 4
        && theta_table.iter().zip(expect).all(|(a, b)| a.0 == b.0 && a.1 == b.1 && a.2 == b.2);
    push("theta products", table_ok && pres.commutative, format!("{theta_table:?}"));
    let target = corank2_target(&Field::Rational, &t.ring)?;
    let verdict = check_presentation(pres, &target, cap)?;
    push("End algebra presentation", verdict.matches, verdict.to_string().trim_end().to_string());
    Ok(Corank2Report { checks, theta_table, verdict })
}
