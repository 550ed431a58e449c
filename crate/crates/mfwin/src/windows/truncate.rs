//! Weight truncation of equivariant free complexes on an affine stratum.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{leq_stratum, Stratum, Weight, WeightSet};
use crate::error::{Error, Result};
use crate::exactalg::{Field, GradingSpec, Matrix, Poly, Ring, RingRef, TorusAction, VarSpec};

/// Coordinate ring of a stratum: `x1..xn` of weight (1,0) together with
/// `y1..yn` of weight (0,1) (full) or `p1..pl` of weight (-1,-1) (X-locus).
pub fn stratum_ring(n: usize, l: usize, stratum: Stratum, field: Field) -> Result<RingRef> {
    let mut vars: Vec<VarSpec> = (1..=n).map(|k| VarSpec::new(&format!("x{k}"), &[1, 0], 0, 1)).collect();
    let g = match stratum {
        Stratum::Full => {
            vars.extend((1..=n).map(|k| VarSpec::new(&format!("y{k}"), &[0, 1], 0, 1)));
            let pairs: Vec<(String, String)> = (1..=n).map(|k| (format!("x{k}"), format!("y{k}"))).collect();
            GradingSpec::new(vars, vec![0, 0], Some((&pairs, TorusAction::Swap)))?
        }
        Stratum::XLocus => {
            vars.extend((1..=l).map(|k| VarSpec::new(&format!("p{k}"), &[-1, -1], 0, 1)));
            GradingSpec::new(vars, vec![0, 0], None)?
        }
    };
    Ok(Ring::new(field, g))
}

/// A bounded complex of sums of line bundles `O(w)`: `d[h][g]` is the
/// coefficient of generator h in d(g), a section of `O(w_h - w_g)`, and
/// generator h sits in cohomological degree `degree[h]`.
#[derive(Clone, Debug)]
pub struct FreeComplex {
    pub ring: RingRef,
    pub weights: Vec<Weight>,
    pub degrees: Vec<i64>,
    pub d: Vec<Vec<Poly>>,
}

impl FreeComplex {
    /// Checks shapes, homogeneity, the degree of d and `d^2 = 0`.
    pub fn new(ring: &RingRef, weights: Vec<Weight>, degrees: Vec<i64>, d: Vec<Vec<Poly>>) -> Result<FreeComplex> {
        let r = weights.len();
        if degrees.len() != r || d.len() != r || d.iter().any(|row| row.len() != r) {
            return Err(Error::ShapeMismatch("complex data have inconsistent sizes".into()));
        }
        if ring.grading.torus_rank != 2 {
            return Err(Error::RingMismatch("weights need a rank-two torus".into()));
        }
        for h in 0..r {
            for g in 0..r {
                let p = &d[h][g];
                if p.is_zero() {
                    continue;
                }
                if degrees[h] != degrees[g] + 1 {
                    return Err(Error::Inhomogeneous(format!("entry ({h},{g}) does not raise the degree by one")));
                }
                let want = [weights[h].0 - weights[g].0, weights[h].1 - weights[g].1];
                let ok = p.terms().iter().all(|(m, _)| ring.grading.degree_of(&m.0[..ring.nvars()]).torus == want);
                if !ok {
                    return Err(Error::Inhomogeneous(format!("entry ({h},{g}) = {p} is not of weight {want:?}")));
                }
            }
        }
        let c = FreeComplex { ring: ring.clone(), weights, degrees, d };
        let sq = crate::mf::mat_mul(ring, &c.d, &c.d);
        if sq.iter().flatten().any(|p| !p.is_zero()) {
            return Err(Error::NotClosed("d^2 is not zero".into()));
        }
        Ok(c)
    }

    /// Koszul complex of homogeneous `seq`: generator `e_I` for each subset I
    /// has weight `top - sum_{i in I} wt(f_i)` in degree `-|I|`, and
    /// `d e_I = sum_k (-1)^pos(k) f_k e_{I - k}`.
    pub fn koszul(ring: &RingRef, seq: &[Poly], top: Weight) -> Result<FreeComplex> {
        let k = seq.len();
        if k > 12 {
            return Err(Error::SizeCap(format!("{k} elements exceed the Koszul cap of 12")));
        }
        let mut wts = Vec::with_capacity(k);
        for f in seq {
            let deg = f.degree().ok_or_else(|| Error::Inhomogeneous(format!("{f} is zero or inhomogeneous")))?;
            wts.push((deg.torus[0], deg.torus[1]));
        }
        let subsets = 1usize << k;
        let weights = (0..subsets)
            .map(|m| {
                (0..k).filter(|i| m >> i & 1 == 1).fold(top, |w, i| (w.0 - wts[i].0, w.1 - wts[i].1))
            })
            .collect();
        let degrees = (0..subsets).map(|m| -(m.count_ones() as i64)).collect();
        let mut d = vec![vec![Poly::zero(ring); subsets]; subsets];
        for m in 0..subsets {
            for (pos, i) in (0..k).filter(|i| m >> i & 1 == 1).enumerate() {
                let f = &seq[i];
                d[m & !(1 << i)][m] = if pos % 2 == 0 { f.clone() } else { -f };
            }
        }
        FreeComplex::new(ring, weights, degrees, d)
    }

    pub fn rank(&self) -> usize {
        self.weights.len()
    }

    /// The complex on a subset of the generators with the induced matrix.
    pub fn restrict(&self, keep: &[usize]) -> FreeComplex {
        FreeComplex {
            ring: self.ring.clone(),
            weights: keep.iter().map(|&i| self.weights[i]).collect(),
            degrees: keep.iter().map(|&i| self.degrees[i]).collect(),
            d: keep.iter().map(|&h| keep.iter().map(|&g| self.d[h][g].clone()).collect()).collect(),
        }
    }

    /// True when d maps the span of `sel` into itself.
    pub fn is_subcomplex(&self, sel: &[usize]) -> bool {
        sel.iter().all(|&g| (0..self.rank()).all(|h| self.d[h][g].is_zero() || sel.contains(&h)))
    }
}

/// Up- or down-closure of a set of characters.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "generators", rename_all = "lowercase")]
pub enum Closure {
    Up(WeightSet),
    Down(WeightSet),
}

impl Closure {
    pub fn contains(&self, w: Weight, stratum: Stratum) -> bool {
        match self {
            Closure::Up(s) => s.iter().any(|x| leq_stratum(x, w, stratum)),
            Closure::Down(s) => s.iter().any(|x| leq_stratum(w, x, stratum)),
        }
    }
}

/// The short exact sequence `0 -> sub -> E -> quotient -> 0` cut out by a
/// closed set of weights: for an up-closed set the selected generators form
/// the subcomplex, for a down-closed set they form the quotient.
#[derive(Clone, Debug)]
pub struct Truncation {
    pub selected: Vec<usize>,
    pub sub_indices: Vec<usize>,
    pub quotient_indices: Vec<usize>,
    pub sub: FreeComplex,
    pub quotient: FreeComplex,
}

pub fn weight_truncate(c: &FreeComplex, s: &Closure, stratum: Stratum) -> Result<Truncation> {
    let selected: Vec<usize> = (0..c.rank()).filter(|&i| s.contains(c.weights[i], stratum)).collect();
    let rest: Vec<usize> = (0..c.rank()).filter(|i| !selected.contains(i)).collect();
    let (sub_indices, quotient_indices) = match s {
        Closure::Up(_) => (selected.clone(), rest),
        Closure::Down(_) => (rest, selected.clone()),
    };
    if !c.is_subcomplex(&sub_indices) {
        return Err(Error::NotClosed("the selection is not preserved by d; the set is not closed for this order".into()));
    }
    Ok(Truncation {
        sub: c.restrict(&sub_indices),
        quotient: c.restrict(&quotient_indices),
        selected,
        sub_indices,
        quotient_indices,
    })
}

/// Dimensions of the weight pieces of the cohomology of the fibre at the
/// origin (all coordinates set to zero).
pub fn weights_at_origin(c: &FreeComplex) -> Result<BTreeMap<Weight, usize>> {
    let field = &c.ring.field;
    let zero = vec![Some(field.zero()); c.ring.nvars()];
    let mut out = BTreeMap::new();
    let mut by_weight: BTreeMap<Weight, Vec<usize>> = BTreeMap::new();
    for (i, w) in c.weights.iter().enumerate() {
        by_weight.entry(*w).or_default().push(i);
    }
    for (w, idx) in by_weight {
        let mut m = Matrix::zero(field, idx.len(), idx.len());
        for (a, &h) in idx.iter().enumerate() {
            for (b, &g) in idx.iter().enumerate() {
                let v = c.d[h][g].evaluate_indexed(&zero)?;
                m.set(a, b, v.constant_value().unwrap_or_else(|| field.zero()));
            }
        }
        let dim = idx.len() - 2 * m.rank();
        if dim > 0 {
            out.insert(w, dim);
        }
    }
    Ok(out)
}
