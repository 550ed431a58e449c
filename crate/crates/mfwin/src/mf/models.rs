//! Standard local models, the explicit resolutions of the corank-2 model,
//! Knörrer kernels and the Koszul objects of the global model.

use serde::{Deserialize, Serialize};

use super::ops::{direct_sum, koszul, tensor};
use super::{Generator, MatrixFactorization, SigmaStructure};
use crate::error::{Error, Result};
use crate::exactalg::{
    Field, FieldElem, GradingSpec, Poly, RConvention, Ring, RingRef, TorusAction, VarSpec,
};

/// Shape of the trivial part of the quadratic form.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum KernelVariant {
    /// Trivial part `sum x_k y_k`, reduced by rank-two kernels.
    #[serde(alias = "SO2")]
    So2,
    /// Trivial part in hyperbolic pairs `x_a y_b + x_b y_a` (plus one
    /// diagonal term when their number is odd), reduced by rank-four kernels.
    #[serde(alias = "O2")]
    O2,
}

/// Ring of the standard local model of corank `corank` on n-dimensional fibres.
///
/// Base variables have weight 2. The first `corank` coordinate pairs have
/// weight 1 and the rest weight 2 (all weight 1 for corank 0).
pub fn local_ring(n: usize, corank: usize, field: Field) -> Result<RingRef> {
    if corank > 2 || n < corank.max(1) {
        return Err(Error::Unsupported(format!(
            "no standard model for n = {n}, corank = {corank}"
        )));
    }
    if 2 * n + [0, 1, 3][corank] > crate::exactalg::MAX_VARS {
        return Err(Error::SizeCap(format!("n = {n} needs too many variables")));
    }
    let mut vars = Vec::new();
    for b in ["s", "t", "u"].iter().take([0, 1, 3][corank]) {
        vars.push(VarSpec::new(b, &[0], 0, 2));
    }
    let fw = |k: usize| if corank == 0 || k <= corank { 1 } else { 2 };
    for k in 1..=n {
        vars.push(VarSpec::new(&format!("x{k}"), &[1], 1, fw(k)));
    }
    for k in 1..=n {
        vars.push(VarSpec::new(&format!("y{k}"), &[-1], 1, fw(k)));
    }
    let pairs: Vec<(String, String)> = (1..=n)
        .map(|k| (format!("x{k}"), format!("y{k}")))
        .collect();
    let g = GradingSpec::new(vars, vec![1], Some((&pairs, TorusAction::Negate)))?;
    Ok(Ring::new(field, g))
}

pub fn corank2_ring(n: usize) -> Result<RingRef> {
    local_ring(n, 2, Field::Rational)
}

fn v(ring: &RingRef, name: &str) -> Poly {
    Poly::var_named(ring, name).expect("model variable")
}

fn xv(ring: &RingRef, k: usize) -> Poly {
    v(ring, &format!("x{k}"))
}

fn yv(ring: &RingRef, k: usize) -> Poly {
    v(ring, &format!("y{k}"))
}

/// Blocks of trivial coordinates: single indices or hyperbolic pairs.
fn trivial_blocks(first: usize, n: usize, variant: KernelVariant) -> Vec<Vec<usize>> {
    let coords: Vec<usize> = (first..=n).collect();
    match variant {
        KernelVariant::So2 => coords.into_iter().map(|k| vec![k]).collect(),
        KernelVariant::O2 => {
            let mut out = Vec::new();
            let mut rest = &coords[..];
            if coords.len() % 2 == 1 {
                out.push(vec![coords[0]]);
                rest = &coords[1..];
            }
            for p in rest.chunks(2) {
                out.push(p.to_vec());
            }
            out
        }
    }
}

fn block_potential(ring: &RingRef, b: &[usize]) -> Poly {
    match b {
        [k] => &xv(ring, *k) * &yv(ring, *k),
        [a, c] => &(&xv(ring, *a) * &yv(ring, *c)) + &(&xv(ring, *c) * &yv(ring, *a)),
        _ => unreachable!("blocks have one or two coordinates"),
    }
}

fn corank_of(ring: &RingRef) -> usize {
    let has = |n: &str| ring.grading.var_index(n).is_ok();
    if has("t") {
        2
    } else if has("s") {
        1
    } else {
        0
    }
}

fn fibre_dim(ring: &RingRef) -> usize {
    (1..)
        .take_while(|k| ring.grading.var_index(&format!("x{k}")).is_ok())
        .count()
}

/// Potential of the standard model on `ring`.
pub fn potential(ring: &RingRef, variant: KernelVariant) -> Poly {
    let n = fibre_dim(ring);
    let corank = corank_of(ring);
    let mut w = match corank {
        2 => w2_core(ring),
        1 => &v(ring, "s") * &(&xv(ring, 1) * &yv(ring, 1)),
        _ => Poly::zero(ring),
    };
    for b in trivial_blocks(corank + 1, n, variant) {
        w = &w + &block_potential(ring, &b);
    }
    w
}

fn w2_core(ring: &RingRef) -> Poly {
    Poly::parse(ring, "s*x1*y1 + t*x1*y2 + t*x2*y1 + u*x2*y2").expect("corank-2 potential")
}

/// Ideal of the coordinate ring Q of Y_1 in the n = 2 corank-2 model.
pub fn q_ideal(ring: &RingRef) -> Result<Vec<Poly>> {
    ["s*x1 + t*x2", "t*x1 + u*x2", "s*u - t^2"]
        .iter()
        .map(|s| Poly::parse(ring, s))
        .collect()
}

/// Resolution of O_{Y_1} in the corank-2 model on coordinates 1, 2:
/// generators e, f1, g1, g2, f2, f3.
pub fn m1(ring: &RingRef) -> Result<MatrixFactorization> {
    let gens = vec![
        Generator::new("e", &[0], 0, 0),
        Generator::new("f1", &[0], 1, -2),
        Generator::new("g1", &[-1], 0, -1),
        Generator::new("g2", &[-1], 0, -1),
        Generator::new("f2", &[-1], 1, -1),
        Generator::new("f3", &[-1], 1, -1),
    ];
    // Row h, column g: coefficient of h in d(g).
    let d = MatrixFactorization::parse_matrix(
        ring,
        &[
            &["0", "s*u - t^2", "s*x1 + t*x2", "t*x1 + u*x2", "0", "0"],
            &["0", "0", "0", "0", "x1", "x2"],
            &["y1", "0", "0", "0", "-u", "t"],
            &["y2", "0", "0", "0", "t", "-s"],
            &["0", "s*y1 + t*y2", "-x2*y2", "x2*y1", "0", "0"],
            &["0", "t*y1 + u*y2", "x1*y2", "-x1*y1", "0", "0"],
        ],
    )?;
    MatrixFactorization::checked(ring, gens, d, w2_core(ring), 2)
}

/// Resolution of O_{Y_2}(-1): the sigma-image of `m1` twisted by -1.
pub fn m2(ring: &RingRef) -> Result<MatrixFactorization> {
    Ok(m1(ring)?.sigma_image()?.twist(&[-1]))
}

/// M_1 + M_2 with the sigma-structure exchanging g and its image.
pub fn k2_prime(ring: &RingRef) -> Result<MatrixFactorization> {
    let a = m1(ring)?;
    let b = m2(ring)?;
    let mut k = direct_sum(&a, &b)?;
    let r = a.rank();
    let perm: Vec<usize> = (0..2 * r)
        .map(|i| if i < r { i + r } else { i - r })
        .collect();
    k.sigma = Some(SigmaStructure::solve(&k, perm, vec![-1])?);
    Ok(k)
}

/// Rank-two kernel `O(-1) <-> O` with arrows x_k, y_k, for W = x_k y_k.
pub fn knorrer_so2_kernel(ring: &RingRef, k: usize) -> Result<MatrixFactorization> {
    let mut f = koszul(&[xv(ring, k)], &[yv(ring, k)])?;
    f.sigma = Some(SigmaStructure::solve(&f, vec![1, 0], vec![-1])?);
    Ok(f)
}

/// Rank-four kernel for W = x_a y_b + x_b y_a: generators O+, O-, O(-1), O(1).
pub fn knorrer_o2_kernel(ring: &RingRef, a: usize, b: usize) -> Result<MatrixFactorization> {
    let (xa, ya, xb, yb) = (xv(ring, a), yv(ring, a), xv(ring, b), yv(ring, b));
    let c = ring.grading.vars[ring.grading.var_index(&format!("x{a}"))?].weight;
    let gens = vec![
        Generator::new("O+", &[0], 0, 0),
        Generator::new("O-", &[0], 0, 0),
        Generator::new("O(-1)", &[-1], 0, 0),
        Generator::new("O(1)", &[1], 0, 0),
    ];
    let z = Poly::zero(ring);
    let d = vec![
        vec![z.clone(), z.clone(), xa.clone(), ya.clone()],
        vec![z.clone(), z.clone(), xb.clone(), -&yb],
        vec![yb.clone(), ya.clone(), z.clone(), z.clone()],
        vec![xb.clone(), -&xa, z.clone(), z.clone()],
    ];
    let w = &(&xa * &yb) + &(&xb * &ya);
    let mut f = MatrixFactorization::checked(ring, gens, d, w, c)?;
    f.sigma = Some(SigmaStructure::solve(&f, vec![0, 1, 3, 2], vec![0])?);
    Ok(f)
}

/// A standard model together with its generating object.
#[derive(Clone, Debug)]
pub struct StandardModel {
    pub n: usize,
    pub corank: usize,
    pub variant: KernelVariant,
    pub ring: RingRef,
    pub w: Poly,
    /// Summands of K (one per component Y_i).
    pub k: Vec<MatrixFactorization>,
    /// Direct sum of the summands with its sigma-structure.
    pub k_sum: Option<MatrixFactorization>,
}

fn split_halves(m: &MatrixFactorization) -> Result<Vec<MatrixFactorization>> {
    let r = m.rank() / 2;
    let mut out = Vec::new();
    for part in [0..r, r..2 * r] {
        let idx: Vec<usize> = part.collect();
        let gens = idx.iter().map(|&i| m.gens[i].clone()).collect();
        let d = idx
            .iter()
            .map(|&h| idx.iter().map(|&g| m.d[h][g].clone()).collect())
            .collect();
        out.push(MatrixFactorization::checked(
            &m.ring,
            gens,
            d,
            m.w.clone(),
            m.c,
        )?);
    }
    Ok(out)
}

/// Standard local model of dimension n and given corank with generator
/// `K = O_{Y_1}(a) + O_{Y_2}(-a)` presented by explicit factorizations.
pub fn standard_model(n: usize, corank: usize, variant: KernelVariant) -> Result<StandardModel> {
    standard_model_over(n, corank, variant, Field::Rational)
}

pub fn standard_model_over(
    n: usize,
    corank: usize,
    variant: KernelVariant,
    field: Field,
) -> Result<StandardModel> {
    if corank == 2 && n < 2 {
        return Err(Error::Unsupported("corank 2 needs n >= 2".into()));
    }
    let ring = local_ring(n, corank, field)?;
    let w = potential(&ring, variant);
    let sum = match corank {
        2 => {
            let mut k = k2_prime(&ring)?;
            let mut so2 = 0i64;
            for b in trivial_blocks(3, n, variant) {
                let f = match b.as_slice() {
                    [c] => {
                        so2 += 1;
                        knorrer_so2_kernel(&ring, *c)?
                    }
                    [a, c] => knorrer_o2_kernel(&ring, *a, *c)?,
                    _ => unreachable!(),
                };
                k = tensor(&k, &f)?;
            }
            Some(k.twist(&[(so2 + 1) / 2]))
        }
        1 if n % 2 == 1 => {
            let half = (n as i64 - 1) / 2;
            let mut a1 = vec![v(&ring, "s")];
            let mut b1 = vec![&xv(&ring, 1) * &yv(&ring, 1)];
            let mut a2 = a1.clone();
            let mut b2 = b1.clone();
            for k in 2..=n {
                let (ix, iy) = (
                    ring.grading.var_index(&format!("x{k}"))?,
                    ring.grading.var_index(&format!("y{k}"))?,
                );
                a1.push(xv(&ring, k));
                b1.push(w.derivative(ix));
                a2.push(yv(&ring, k));
                b2.push(w.derivative(iy));
            }
            Some(pair_sum(
                &koszul(&a1, &b1)?.twist(&[half]),
                &koszul(&a2, &b2)?.twist(&[-half]),
            )?)
        }
        _ if n.is_multiple_of(2) => {
            let half = n as i64 / 2;
            let mut a1 = Vec::new();
            let mut b1 = Vec::new();
            let mut a2 = Vec::new();
            let mut b2 = Vec::new();
            for k in 1..=n {
                let (ix, iy) = (
                    ring.grading.var_index(&format!("x{k}"))?,
                    ring.grading.var_index(&format!("y{k}"))?,
                );
                a1.push(xv(&ring, k));
                b1.push(w.derivative(ix));
                a2.push(yv(&ring, k));
                b2.push(w.derivative(iy));
            }
            Some(pair_sum(
                &koszul(&a1, &b1)?.twist(&[half]),
                &koszul(&a2, &b2)?.twist(&[-half]),
            )?)
        }
        _ => None,
    };
    let k = match &sum {
        Some(s) => {
            if s.w != w {
                return Err(Error::Failed(
                    "generating object factors the wrong potential".into(),
                ));
            }
            split_halves(s)?
        }
        None => Vec::new(),
    };
    Ok(StandardModel {
        n,
        corank,
        variant,
        ring,
        w,
        k,
        k_sum: sum,
    })
}

/// Direct sum of Y1 and its sigma-analogue Y2 with sigma exchanging e_I.
fn pair_sum(y1: &MatrixFactorization, y2: &MatrixFactorization) -> Result<MatrixFactorization> {
    let y1 = y1.relabel("Y1:");
    let y2 = y2.relabel("Y2:");
    let mut s = direct_sum(&y1, &y2)?;
    let r = y1.rank();
    let perm: Vec<usize> = (0..2 * r)
        .map(|i| if i < r { i + r } else { i - r })
        .collect();
    s.sigma = Some(SigmaStructure::solve(&s, perm, vec![0])?);
    Ok(s)
}

/// Ring of the global model on V x V x L.
pub fn global_ring(n: usize, l: usize, conv: RConvention, field: Field) -> Result<RingRef> {
    Ok(Ring::new(field, GradingSpec::global_model(n, l, conv)?))
}

/// Bilinear forms `f_k = sum_ij A_k[i][j] x_i y_j` for symmetric A_k.
pub fn global_quadrics(ring: &RingRef, forms: &[Vec<Vec<i64>>]) -> Result<Vec<Poly>> {
    let f = ring.field;
    let mut out = Vec::new();
    for a in forms {
        let n = a.len();
        let mut p = Poly::zero(ring);
        for i in 0..n {
            if a[i].len() != n {
                return Err(Error::ShapeMismatch("quadric matrix is not square".into()));
            }
            for j in 0..n {
                if a[i][j] != a[j][i] {
                    return Err(Error::NotSymmetric(
                        "quadric matrix is not symmetric".into(),
                    ));
                }
                if a[i][j] != 0 {
                    let m = &xv(ring, i + 1) * &yv(ring, j + 1);
                    p = &p + &m.scale(&f.from_i64(a[i][j]));
                }
            }
        }
        out.push(p);
    }
    Ok(out)
}

/// `W = sum_k p_k f_k` in the global model.
pub fn global_potential(ring: &RingRef, quadrics: &[Poly]) -> Poly {
    let mut w = Poly::zero(ring);
    for (k, f) in quadrics.iter().enumerate() {
        w = &w + &(&v(ring, &format!("p{}", k + 1)) * f);
    }
    w
}

/// Koszul representative of E_rho: the resolution of V x V x 0 by the
/// L-coordinates, twisted so that its weights run from rho - (l,l) to rho.
pub fn global_e_rho(
    ring: &RingRef,
    quadrics: &[Poly],
    rho: (i64, i64),
) -> Result<MatrixFactorization> {
    let l = quadrics.len() as i64;
    let a: Vec<Poly> = (1..=quadrics.len())
        .map(|k| v(ring, &format!("p{k}")))
        .collect();
    Ok(koszul(&a, quadrics)?.twist(&[rho.0 - l, rho.1 - l]))
}

/// Koszul factorization of the zero section L inside V x V x L, with
/// leftward arrows half the gradient of W.
pub fn global_def_of_k(ring: &RingRef, quadrics: &[Poly]) -> Result<MatrixFactorization> {
    let n = fibre_dim(ring);
    let w = global_potential(ring, quadrics);
    let half = ring.field.from_ratio(1, 2)?;
    let mut a = Vec::new();
    let mut b = Vec::new();
    for name in (1..=n)
        .map(|k| format!("x{k}"))
        .chain((1..=n).map(|k| format!("y{k}")))
    {
        let i = ring.grading.var_index(&name)?;
        a.push(v(ring, &name));
        b.push(w.derivative(i).scale(&half));
    }
    koszul(&a, &b)
}

/// Assignment of every base variable from `(name, value)` pairs.
pub fn base_point(ring: &RingRef, vals: &[(&str, i64)]) -> Vec<(String, FieldElem)> {
    vals.iter()
        .map(|(n, c)| (n.to_string(), ring.field.from_i64(*c)))
        .collect()
}
