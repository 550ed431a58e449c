//! Character-lattice combinatorics of the window categories: window regions,
//! partial orders, good sets, weight truncation, the cone-based weight
//! reduction and the exceptional objects with their Hom-vanishing pattern.

mod exceptional;
mod reduce;
mod truncate;

#[cfg(test)]
mod tests;

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use exceptional::{enumerate_exceptional, invariant_hom_dim, ExceptionalCollection, IrrepLabel};
pub use reduce::{reduce_to_window, strip_normalize, width, ReductionStep, ReductionTrace, StepKind};
pub use truncate::{stratum_ring, weights_at_origin, weight_truncate, Closure, FreeComplex, Truncation};

/// A character of the rank-two torus.
pub type Weight = (i64, i64);

/// Upper bound on enumerated region sizes.
const ENUMERATION_CAP: usize = 1 << 20;

/// One strip of a window region: `sum_min <= i + j <= sum_max` and
/// `|i - j| <= max_width`, with missing bounds meaning unbounded.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Strip {
    pub sum_min: i64,
    pub sum_max: Option<i64>,
    pub max_width: Option<i64>,
}

impl Strip {
    pub fn contains(&self, w: Weight) -> bool {
        let s = w.0 + w.1;
        s >= self.sum_min
            && self.sum_max.is_none_or(|m| s <= m)
            && self.max_width.is_none_or(|k| (w.0 - w.1).abs() <= k)
    }

    fn is_empty(&self) -> bool {
        self.sum_max.is_some_and(|m| m < self.sum_min) || self.max_width.is_some_and(|k| k < 0)
    }

    fn is_bounded(&self) -> bool {
        self.is_empty() || (self.sum_max.is_some() && self.max_width.is_some())
    }

    /// The inequalities in the form `a*i + b*j <= c`.
    pub fn inequalities(&self) -> Vec<(i64, i64, i64)> {
        let mut out = vec![(-1, -1, -self.sum_min)];
        if let Some(m) = self.sum_max {
            out.push((1, 1, m));
        }
        if let Some(k) = self.max_width {
            out.push((1, -1, k));
            out.push((-1, 1, k));
        }
        out
    }
}

/// A union of strips in the character lattice.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeightRegion {
    pub name: String,
    pub strips: Vec<Strip>,
}

impl WeightRegion {
    pub fn contains(&self, w: Weight) -> bool {
        self.strips.iter().any(|s| s.contains(w))
    }

    pub fn is_bounded(&self) -> bool {
        self.strips.iter().all(Strip::is_bounded)
    }

    /// All lattice points, sorted; `Unsupported` for unbounded regions.
    pub fn enumerate(&self) -> Result<WeightSet> {
        if !self.is_bounded() {
            return Err(Error::Unsupported(format!("region {} is unbounded", self.name)));
        }
        let mut out = BTreeSet::new();
        for s in self.strips.iter().filter(|s| !s.is_empty()) {
            let (lo, hi, k) = (s.sum_min, s.sum_max.unwrap(), s.max_width.unwrap());
            for sum in lo..=hi {
                for d in -k..=k {
                    if (sum - d).rem_euclid(2) == 0 {
                        out.insert(((sum + d) / 2, (sum - d) / 2));
                        if out.len() > ENUMERATION_CAP {
                            return Err(Error::SizeCap(format!("region {} is too large", self.name)));
                        }
                    }
                }
            }
        }
        Ok(WeightSet { points: out })
    }

    /// Human-readable inequality list, one disjunct per line.
    pub fn describe(&self) -> Vec<String> {
        let term = |a: i64, b: i64| match (a, b) {
            (1, 1) => "i + j".to_string(),
            (-1, -1) => "-i - j".to_string(),
            (1, -1) => "i - j".to_string(),
            (-1, 1) => "j - i".to_string(),
            _ => format!("{a}*i + {b}*j"),
        };
        self.strips
            .iter()
            .map(|s| {
                s.inequalities().iter().map(|&(a, b, c)| format!("{} <= {c}", term(a, b))).collect::<Vec<_>>().join(" and ")
            })
            .collect()
    }
}

/// The regions S+, S- and S-,res for `n = dim V` and `l = dim L`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WindowRegions {
    pub n: usize,
    pub l: usize,
    pub s_plus: WeightRegion,
    pub s_minus: WeightRegion,
    pub s_minus_res: WeightRegion,
}

pub fn window_regions(n: usize, l: usize) -> Result<WindowRegions> {
    if n == 0 {
        return Err(Error::Unsupported("n must be at least 1".into()));
    }
    let (ni, li) = (n as i64, l as i64);
    let plus = if n % 2 == 1 {
        vec![Strip { sum_min: 0, sum_max: Some(2 * ni - 1), max_width: Some((ni - 1) / 2) }]
    } else {
        vec![
            Strip { sum_min: 0, sum_max: Some(ni - 1), max_width: Some(ni / 2) },
            Strip { sum_min: ni, sum_max: Some(2 * ni - 1), max_width: Some(ni / 2 - 1) },
        ]
    };
    Ok(WindowRegions {
        n,
        l,
        s_plus: WeightRegion { name: "S+".into(), strips: plus },
        s_minus: WeightRegion {
            name: "S-".into(),
            strips: vec![Strip { sum_min: 0, sum_max: Some(2 * li - 1), max_width: None }],
        },
        s_minus_res: WeightRegion {
            name: "S-,res".into(),
            strips: vec![Strip { sum_min: 0, sum_max: Some(2 * li - 1), max_width: Some(ni / 2) }],
        },
    })
}

/// A finite set of characters.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct WeightSet {
    pub points: BTreeSet<Weight>,
}

pub fn sigma(w: Weight) -> Weight {
    (w.1, w.0)
}

impl WeightSet {
    pub fn new() -> WeightSet {
        WeightSet::default()
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn contains(&self, w: Weight) -> bool {
        self.points.contains(&w)
    }

    pub fn iter(&self) -> impl Iterator<Item = Weight> + '_ {
        self.points.iter().copied()
    }

    pub fn sigma(&self) -> WeightSet {
        self.iter().map(sigma).collect()
    }

    pub fn is_sigma_symmetric(&self) -> bool {
        self.iter().all(|w| self.contains(sigma(w)))
    }

    pub fn translate(&self, by: Weight) -> WeightSet {
        self.iter().map(|(i, j)| (i + by.0, j + by.1)).collect()
    }

    pub fn negated(&self) -> WeightSet {
        self.iter().map(|(i, j)| (-i, -j)).collect()
    }

    pub fn union(&self, o: &WeightSet) -> WeightSet {
        WeightSet { points: self.points.union(&o.points).copied().collect() }
    }

    pub fn intersection(&self, o: &WeightSet) -> WeightSet {
        WeightSet { points: self.points.intersection(&o.points).copied().collect() }
    }

    pub fn difference(&self, o: &WeightSet) -> WeightSet {
        WeightSet { points: self.points.difference(&o.points).copied().collect() }
    }

    pub fn is_subset_of_region(&self, r: &WeightRegion) -> bool {
        self.iter().all(|w| r.contains(w))
    }

    pub fn to_vec(&self) -> Vec<Weight> {
        self.iter().collect()
    }
}

impl FromIterator<Weight> for WeightSet {
    fn from_iter<I: IntoIterator<Item = Weight>>(it: I) -> Self {
        WeightSet { points: it.into_iter().collect() }
    }
}

impl fmt::Display for WeightSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let items: Vec<String> = self.iter().map(|(i, j)| format!("({i},{j})")).collect();
        write!(f, "{{{}}}", items.join(","))
    }
}

/// The locus whose coordinate ring defines the order on characters.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Stratum {
    /// V x V x 0: coordinates of weight (1,0) and (0,1); the product order
    /// `i <= i'` and `j <= j'`.
    Full,
    /// V x 0 x L: coordinates of weight (1,0) and (-1,-1).
    XLocus,
}

impl Stratum {
    /// Characters of the coordinate functions generating the order.
    pub fn generators(&self) -> [Weight; 2] {
        match self {
            Stratum::Full => [(1, 0), (0, 1)],
            Stratum::XLocus => [(1, 0), (-1, -1)],
        }
    }
}

/// `w1 <= w2`: the difference is a nonnegative integer combination of the
/// stratum's coordinate characters.
pub fn leq_stratum(w1: Weight, w2: Weight, stratum: Stratum) -> bool {
    let [a, b] = stratum.generators();
    let d = (w2.0 - w1.0, w2.1 - w1.1);
    let det = a.0 * b.1 - a.1 * b.0;
    let x = d.0 * b.1 - d.1 * b.0;
    let y = a.0 * d.1 - a.1 * d.0;
    x % det == 0 && y % det == 0 && x / det >= 0 && y / det >= 0
}

/// Good sets: `(U_{i=0..n} sigma(S) - (i,0)) ∩ S = ∅`.
pub fn is_good(s: &WeightSet, n: usize) -> bool {
    let ss = s.sigma();
    (0..=n as i64).all(|i| ss.iter().all(|(a, b)| !s.contains((a - i, b))))
}

/// No element of `s` lies strictly above an element of `all \ s`.
pub fn is_minimal_subset(s: &WeightSet, all: &WeightSet, stratum: Stratum) -> bool {
    let rest = all.difference(s);
    s.iter().all(|x| rest.iter().all(|y| !leq_stratum(y, x, stratum)))
}

/// No element of `s` lies strictly below an element of `all \ s`.
pub fn is_maximal_subset(s: &WeightSet, all: &WeightSet, stratum: Stratum) -> bool {
    let rest = all.difference(s);
    s.iter().all(|x| rest.iter().all(|y| !leq_stratum(x, y, stratum)))
}
