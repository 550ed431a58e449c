//! Syzygy modules via the graph-module elimination trick.

use super::gb::{from_ivec, run, to_ivec, GbOptions, SubmoduleGens};
use super::order::{Ctx, ModuleOrder, MonomialOrder};
use crate::error::Result;
use crate::exactalg::{Degree, Poly};

/// Degree of a module element given basis degrees; `None` if zero or inhomogeneous.
pub fn element_degree(v: &[Poly], degrees: &[Degree]) -> Option<Degree> {
    let mut out: Option<Degree> = None;
    for (p, d) in v.iter().zip(degrees) {
        if p.is_zero() {
            continue;
        }
        let pd = p.degree()?;
        let total = &pd + d;
        match &out {
            None => out = Some(total),
            Some(o) if *o == total => {}
            Some(_) => return None,
        }
    }
    out
}

/// True when every component is homogeneous and all share one degree.
pub fn is_homogeneous_element(v: &[Poly], degrees: &[Degree]) -> bool {
    v.iter().all(|p| p.is_zero()) || element_degree(v, degrees).is_some()
}

/// Generators of the syzygy module of `gens.gens` (over `U / gens.ideal`
/// when an ideal is present). The result has rank `gens.gens.len()`, carries
/// the same ideal, and basis degrees equal to the generator degrees.
pub fn syzygies(gens: &SubmoduleGens) -> Result<SubmoduleGens> {
    syzygies_with(gens, &MonomialOrder::default())
}

pub fn syzygies_with(gens: &SubmoduleGens, ord: &MonomialOrder) -> Result<SubmoduleGens> {
    gens.validate()?;
    let r = gens.rank;
    let k = gens.gens.len();
    let ring = &gens.ring;
    let base_deg: Vec<Degree> = gens
        .degrees
        .clone()
        .unwrap_or_else(|| vec![Degree::zero(ring.grading.torus_rank); r]);
    let gdeg: Vec<Degree> = gens
        .gens
        .iter()
        .map(|g| {
            element_degree(g, &base_deg).unwrap_or_else(|| Degree::zero(ring.grading.torus_rank))
        })
        .collect();
    let mut shifts: Vec<i64> = base_deg.iter().map(|d| d.w).collect();
    shifts.extend(gdeg.iter().map(|d| d.w));
    let mut ord = ord.clone();
    ord.module = ModuleOrder::Pot;
    let ctx = Ctx::new(ring, &ord, shifts)?;
    let mut input = Vec::new();
    for (j, g) in gens.gens.iter().enumerate() {
        let mut v = g.clone();
        v.extend((0..k).map(|_| Poly::zero(ring)));
        v[r + j] = Poly::one(ring);
        input.push(to_ivec(&ctx, &v));
    }
    for h in &gens.ideal {
        for i in 0..r {
            let mut v = vec![Poly::zero(ring); r + k];
            v[i] = h.clone();
            input.push(to_ivec(&ctx, &v));
        }
    }
    let basis = run(&ctx, r + k, input, GbOptions::default());
    let mut out = Vec::new();
    for b in &basis {
        if (b[0].pos as usize) >= r {
            let full = from_ivec(&ctx, ring, r + k, b);
            out.push(full[r..].to_vec());
        }
    }
    Ok(SubmoduleGens {
        ring: ring.clone(),
        rank: k.max(1),
        gens: if k == 0 { Vec::new() } else { out },
        ideal: gens.ideal.clone(),
        degrees: Some(if k == 0 {
            vec![Degree::zero(ring.grading.torus_rank)]
        } else {
            gdeg
        }),
    })
}

/// Applies a matrix with columns `cols` (each of length `rank`) to a coefficient vector.
pub fn combine(cols: &[Vec<Poly>], coeffs: &[Poly], rank: usize) -> Vec<Poly> {
    let ring = coeffs.first().map(|p| p.ring().clone()).or_else(|| {
        cols.first()
            .and_then(|c| c.first().map(|p| p.ring().clone()))
    });
    let Some(ring) = ring else { return Vec::new() };
    let mut out = vec![Poly::zero(&ring); rank];
    for (c, a) in cols.iter().zip(coeffs) {
        if a.is_zero() {
            continue;
        }
        for (o, x) in out.iter_mut().zip(c) {
            if !x.is_zero() {
                *o = &*o + &(a * x);
            }
        }
    }
    out
}
