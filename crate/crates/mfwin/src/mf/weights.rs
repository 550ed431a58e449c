//! Torus weights of a factorization at a fixed point of the base.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use super::MatrixFactorization;
use crate::error::{Error, Result};
use crate::exactalg::{FieldElem, Matrix};

/// Characters with multiplicities.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct WeightMultiset {
    #[serde(with = "as_pairs")]
    pub weights: BTreeMap<Vec<i64>, usize>,
}

/// JSON maps need string keys, so the multiset is stored as (weight, count) pairs.
mod as_pairs {
    use std::collections::BTreeMap;

    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(m: &BTreeMap<Vec<i64>, usize>, s: S) -> Result<S::Ok, S::Error> {
        m.iter().collect::<Vec<_>>().serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BTreeMap<Vec<i64>, usize>, D::Error> {
        let pairs = Vec::<(Vec<i64>, usize)>::deserialize(d)?;
        let mut m = BTreeMap::new();
        for (w, k) in pairs {
            *m.entry(w).or_insert(0) += k;
        }
        Ok(m)
    }
}

impl WeightMultiset {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_weights<I: IntoIterator<Item = Vec<i64>>>(it: I) -> Self {
        let mut m = Self::new();
        for w in it {
            m.add(w, 1);
        }
        m
    }

    pub fn add(&mut self, w: Vec<i64>, mult: usize) {
        if mult > 0 {
            *self.weights.entry(w).or_insert(0) += mult;
        }
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    /// Total multiplicity.
    pub fn total(&self) -> usize {
        self.weights.values().sum()
    }

    /// Underlying set of characters.
    pub fn support(&self) -> BTreeSet<Vec<i64>> {
        self.weights.keys().cloned().collect()
    }

    pub fn negated(&self) -> Self {
        let mut m = Self::new();
        for (w, &k) in &self.weights {
            m.add(w.iter().map(|a| -a).collect(), k);
        }
        m
    }

    /// Image under a map on characters.
    pub fn mapped<F: Fn(&[i64]) -> Vec<i64>>(&self, f: F) -> Self {
        let mut m = Self::new();
        for (w, &k) in &self.weights {
            m.add(f(w), k);
        }
        m
    }

    /// Minkowski sum with multiplicities.
    pub fn convolve(&self, o: &Self) -> Self {
        let mut m = Self::new();
        for (a, &ka) in &self.weights {
            for (b, &kb) in &o.weights {
                m.add(a.iter().zip(b).map(|(x, y)| x + y).collect(), ka * kb);
            }
        }
        m
    }

    /// Largest absolute value of a coordinate (0 when empty).
    pub fn width(&self) -> i64 {
        self.weights
            .keys()
            .flat_map(|w| w.iter().map(|a| a.abs()))
            .max()
            .unwrap_or(0)
    }
}

impl fmt::Display for WeightMultiset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .weights
            .iter()
            .map(|(w, k)| {
                let w = if w.len() == 1 {
                    w[0].to_string()
                } else {
                    format!(
                        "({})",
                        w.iter()
                            .map(|a| a.to_string())
                            .collect::<Vec<_>>()
                            .join(",")
                    )
                };
                if *k == 1 {
                    w
                } else {
                    format!("{w}^{k}")
                }
            })
            .collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}

/// Weights at the torus-fixed point where the named variables take the given
/// values and every other variable vanishes: the characters occurring in the
/// 2-periodic homology of the fibre, with their dimensions.
pub fn weights_at_point(
    m: &MatrixFactorization,
    point: &[(String, FieldElem)],
) -> Result<WeightMultiset> {
    let g = &m.ring.grading;
    let mut vals: Vec<Option<FieldElem>> = vec![None; g.nvars()];
    for (name, c) in point {
        let i = g.var_index(name)?;
        if g.vars[i].torus.iter().any(|&t| t != 0) {
            return Err(Error::Unsupported(format!(
                "`{name}` is not torus-invariant; the point is not fixed"
            )));
        }
        vals[i] = Some(c.clone());
    }
    for i in 0..g.nvars() {
        if g.is_base_var(i) && vals[i].is_none() {
            return Err(Error::Degenerate(format!(
                "base variable `{}` is not assigned",
                g.vars[i].name
            )));
        }
    }
    let field = &m.ring.field;
    let vals: Vec<Option<FieldElem>> = vals
        .into_iter()
        .map(|v| Some(v.unwrap_or_else(|| field.zero())))
        .collect();
    let scalar = |p: &crate::exactalg::Poly| -> Result<FieldElem> {
        let q = p.evaluate_indexed(&vals)?;
        Ok(q.constant_value().unwrap_or_else(|| field.zero()))
    };
    let w0 = scalar(&m.w)?;
    if !w0.is_zero() {
        return Err(Error::NonzeroPotential(format!("W = {w0}")));
    }
    let mut blocks: BTreeMap<Vec<i64>, Vec<usize>> = BTreeMap::new();
    for (i, gen) in m.gens.iter().enumerate() {
        blocks.entry(gen.chi.clone()).or_default().push(i);
    }
    let mut out = WeightMultiset::new();
    for (chi, idx) in blocks {
        let mut a = Matrix::zero(field, idx.len(), idx.len());
        for (r, &h) in idx.iter().enumerate() {
            for (c, &gi) in idx.iter().enumerate() {
                a.set(r, c, scalar(&m.d[h][gi])?);
            }
        }
        let dim = idx.len() - 2 * a.rank();
        out.add(chi, dim);
    }
    Ok(out)
}
