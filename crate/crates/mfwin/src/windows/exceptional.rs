//! Exceptional objects attached to the weights of S+ outside S-,res, and the
//! dimensions of their invariant Hom spaces on V x V.

use std::fmt;

use serde::{Deserialize, Serialize};

use super::{leq_stratum, sigma, window_regions, Stratum, Weight, WeightSet};
use crate::error::Result;

/// An irreducible representation of the torus extended by the swap: a
/// sigma-orbit `{(i,j),(j,i)}` with `i > j`, or a diagonal character (i,i)
/// on which sigma acts by a sign.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum IrrepLabel {
    OffDiagonal { i: i64, j: i64 },
    Diagonal { i: i64, plus: bool },
}

impl IrrepLabel {
    pub fn off_diagonal(i: i64, j: i64) -> IrrepLabel {
        IrrepLabel::OffDiagonal { i: i.max(j), j: i.min(j) }
    }

    pub fn weights(&self) -> Vec<Weight> {
        match *self {
            IrrepLabel::OffDiagonal { i, j } => vec![(j, i), (i, j)],
            IrrepLabel::Diagonal { i, .. } => vec![(i, i)],
        }
    }

    /// The sign of sigma on a diagonal character; +1 for off-diagonal orbits,
    /// whose sign is absorbed by the free action.
    pub fn sign(&self) -> i64 {
        match *self {
            IrrepLabel::Diagonal { plus: false, .. } => -1,
            _ => 1,
        }
    }

    fn min_sum(&self) -> i64 {
        let (i, j) = self.weights()[0];
        i + j
    }
}

impl fmt::Display for IrrepLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            IrrepLabel::OffDiagonal { i, j } => write!(f, "{{({i},{j}),({j},{i})}}"),
            IrrepLabel::Diagonal { i, plus } => write!(f, "({i},{i}){}", if plus { "+" } else { "-" }),
        }
    }
}

fn binom(n: u128, k: u128) -> u128 {
    (0..k).fold(1u128, |acc, t| acc * (n - t) / (t + 1))
}

/// Monomials in x1..xn, y1..yn of bidegree (p, q).
fn monomials(n: usize, p: i64, q: i64) -> u128 {
    if p < 0 || q < 0 {
        return 0;
    }
    let m = n as u128 - 1;
    binom(p as u128 + m, m) * binom(q as u128 + m, m)
}

/// Dimension of the invariant maps `O(rho) -> O(rho')` over
/// `k[x1..xn, y1..yn]` with x of weight (1,0), y of weight (0,1) and sigma
/// swapping x and y. A basis of the equivariant maps before taking
/// invariants is given by triples (a, b, m) with a in wt(rho), b in wt(rho')
/// and m a monomial of weight b - a; sigma permutes them up to the sign of
/// the two representations, so the invariants count free orbits plus fixed
/// triples of sign +1.
pub fn invariant_hom_dim(rho: &IrrepLabel, rho2: &IrrepLabel, n: usize) -> u128 {
    let mut total = 0u128;
    let mut fixed = 0u128;
    for a in rho.weights() {
        for b in rho2.weights() {
            let (p, q) = (b.0 - a.0, b.1 - a.1);
            total += monomials(n, p, q);
            if sigma(a) == a && sigma(b) == b && p == q && p >= 0 {
                fixed += binom(p as u128 + n as u128 - 1, n as u128 - 1);
            }
        }
    }
    let sign = rho.sign() * rho2.sign();
    if sign > 0 {
        (total + fixed) / 2
    } else {
        (total - fixed) / 2
    }
}

/// The objects with weights in S+ minus S-,res and the nonvanishing Hom
/// spaces between distinct objects.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExceptionalCollection {
    pub n: usize,
    pub l: usize,
    pub objects: Vec<IrrepLabel>,
    /// `(a, b)` when Hom(objects[a], objects[b]) is nonzero and `a != b`.
    pub edges: Vec<(usize, usize)>,
}

impl ExceptionalCollection {
    /// Endomorphisms are the scalars and Hom is nonzero only upward in the
    /// order by weight sum, so listing by sum is an exceptional order.
    pub fn is_exceptional(&self) -> bool {
        let endo_ok = self.objects.iter().all(|o| invariant_hom_dim(o, o, self.n) == 1);
        let order_ok = self.edges.iter().all(|&(a, b)| self.objects[a].min_sum() < self.objects[b].min_sum());
        endo_ok && order_ok
    }

    /// Objects sorted so that all Hom spaces point forward.
    pub fn exceptional_order(&self) -> Vec<IrrepLabel> {
        let mut v = self.objects.clone();
        v.sort_by_key(|o| (o.min_sum(), *o));
        v
    }
}

pub fn enumerate_exceptional(n: usize, l: usize) -> Result<ExceptionalCollection> {
    let r = window_regions(n, l)?;
    let plus = r.s_plus.enumerate()?;
    let res = r.s_minus_res.enumerate()?;
    let rest: WeightSet = plus.difference(&res);
    let mut objects = Vec::new();
    for (i, j) in rest.iter() {
        if i > j {
            objects.push(IrrepLabel::off_diagonal(i, j));
        } else if i == j {
            objects.push(IrrepLabel::Diagonal { i, plus: true });
            objects.push(IrrepLabel::Diagonal { i, plus: false });
        }
    }
    objects.sort_by_key(|o| (o.min_sum(), *o));
    let mut edges = Vec::new();
    for (a, x) in objects.iter().enumerate() {
        for (b, y) in objects.iter().enumerate() {
            if a == b || x.weights() == y.weights() {
                continue;
            }
            let nonzero =
                x.weights().iter().any(|&u| y.weights().iter().any(|&v| leq_stratum(u, v, Stratum::Full)));
            if nonzero {
                edges.push((a, b));
            }
        }
    }
    Ok(ExceptionalCollection { n, l, objects, edges })
}
