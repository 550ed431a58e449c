//! Graded dimensions by counting standard monomials.

use std::collections::BTreeMap;

use super::gb::GroebnerBasis;
use crate::error::{Error, Result};
use crate::exactalg::{Degree, GradingSpec, Mono};

/// Default hard cap on the auxiliary weight of graded-piece queries.
pub const DEFAULT_DEGREE_CAP: i64 = 20;

/// Enumerates monomials of auxiliary weight at most `wmax` that avoid every
/// monomial in `forbidden` (as divisors); calls `f` on each.
pub fn for_each_standard_monomial<F: FnMut(&Mono, i64)>(
    grading: &GradingSpec,
    forbidden: &[Mono],
    wmax: i64,
    f: &mut F,
) {
    let n = grading.nvars();
    let weights: Vec<i64> = grading.vars.iter().map(|v| v.weight).collect();
    let mut m = Mono::one();
    rec(0, n, &weights, forbidden, wmax, 0, &mut m, f);
}

#[allow(clippy::too_many_arguments)]
fn rec<F: FnMut(&Mono, i64)>(
    k: usize,
    n: usize,
    weights: &[i64],
    forbidden: &[Mono],
    wmax: i64,
    w: i64,
    m: &mut Mono,
    f: &mut F,
) {
    if k == n {
        f(m, w);
        return;
    }
    let mut e = 0u16;
    let mut wcur = w;
    loop {
        m.0[k] = e;
        if forbidden.iter().any(|l| l.divides(m)) {
            break;
        }
        rec(k + 1, n, weights, forbidden, wmax, wcur, m, f);
        wcur += weights[k];
        if wcur > wmax {
            break;
        }
        e += 1;
    }
    m.0[k] = 0;
}

/// Dimension of the degree-`d` piece of F / M where F has basis degrees
/// `basis_deg` and `gb` is a Gröbner basis of M.
pub fn piece_dim(gb: &GroebnerBasis, basis_deg: &[Degree], d: &Degree, cap: i64) -> Result<usize> {
    if d.w.abs() > cap {
        return Err(Error::DegreeCap {
            cap,
            requested: d.w,
        });
    }
    let g = &gb.ring().grading;
    let lts = gb.leading_terms();
    let mut total = 0;
    for (pos, bd) in basis_deg.iter().enumerate() {
        let need = d - bd;
        if need.w < 0 {
            continue;
        }
        let forb: Vec<Mono> = lts
            .iter()
            .filter(|(p, _)| *p == pos)
            .map(|(_, m)| *m)
            .collect();
        for_each_standard_monomial(g, &forb, need.w, &mut |m, w| {
            if w == need.w && g.degree_of(&m.0) == need {
                total += 1;
            }
        });
    }
    Ok(total)
}

/// All nonzero graded dimensions of F / M with auxiliary weight at most `wmax`.
pub fn graded_dims(
    gb: &GroebnerBasis,
    basis_deg: &[Degree],
    wmax: i64,
    cap: i64,
) -> Result<BTreeMap<Degree, usize>> {
    if wmax > cap {
        return Err(Error::DegreeCap {
            cap,
            requested: wmax,
        });
    }
    let g = &gb.ring().grading;
    let lts = gb.leading_terms();
    let mut out = BTreeMap::new();
    for (pos, bd) in basis_deg.iter().enumerate() {
        if wmax - bd.w < 0 {
            continue;
        }
        let forb: Vec<Mono> = lts
            .iter()
            .filter(|(p, _)| *p == pos)
            .map(|(_, m)| *m)
            .collect();
        for_each_standard_monomial(g, &forb, wmax - bd.w, &mut |m, _| {
            let deg = &g.degree_of(&m.0) + bd;
            *out.entry(deg).or_insert(0) += 1;
        });
    }
    Ok(out)
}
