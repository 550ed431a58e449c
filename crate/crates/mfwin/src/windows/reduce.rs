//! Reduction of a sigma-symmetric weight set into S+ by simulated cones over
//! objects supported on the unstable locus.

use serde::{Deserialize, Serialize};

use super::{
    is_good, is_maximal_subset, is_minimal_subset, window_regions, Stratum, Weight, WeightSet,
};
use crate::error::{Error, Result};

/// Largest `|i - j|` over the set (0 when empty).
pub fn width(s: &WeightSet) -> i64 {
    s.iter().map(|(i, j)| (i - j).abs()).max().unwrap_or(0)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum StepKind {
    /// Diagonal shifts `w -> w - k(1,1)` bringing every sum into [0, 2n-1].
    Strip { shifts: Vec<(Weight, i64)> },
    /// Cone over a map to an object built from a minimal good set.
    Minimal,
    /// Cone over a map from an object built from a maximal set S with -S good.
    Maximal,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReductionStep {
    pub kind: StepKind,
    pub s: WeightSet,
    /// Goodness of S (minimal steps) or of -S (maximal steps).
    pub good: bool,
    /// Minimality (resp. maximality) of S inside the current weights.
    pub extremal: bool,
    pub bound: WeightSet,
    pub result: WeightSet,
    pub width_before: i64,
    pub width_after: i64,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReductionTrace {
    pub steps: Vec<ReductionStep>,
}

/// Shifts each weight diagonally by the least multiple of (1,1) putting its
/// sum into [0, 2n-1]. Returns the new set and the nonzero shifts.
pub fn strip_normalize(wt: &WeightSet, n: usize) -> (WeightSet, Vec<(Weight, i64)>) {
    let top = 2 * n as i64 - 1;
    let mut shifts = Vec::new();
    let out = wt
        .iter()
        .map(|(i, j)| {
            let s = i + j;
            let k = if s > top {
                (s - top + 1) / 2
            } else if s < 0 {
                -((-s + 1) / 2)
            } else {
                0
            };
            if k != 0 {
                shifts.push(((i, j), k));
            }
            (i - k, j - k)
        })
        .collect();
    (out, shifts)
}

/// The bound on the weights of the cone. `sign` is -1 for minimal steps and
/// +1 for maximal ones.
fn cone_bound(wt: &WeightSet, s: &WeightSet, n: usize, sign: i64) -> WeightSet {
    let ss = s.sigma();
    let mut bound = wt.difference(&s.union(&ss));
    for i in 1..=n as i64 {
        bound = bound.union(&s.translate((0, sign * i)));
        bound = bound.union(&ss.translate((sign * i, 0)));
    }
    bound
}

/// A good subset chosen greedily, largest sums first.
fn greedy_good(s: &WeightSet, n: usize) -> WeightSet {
    let mut items = s.to_vec();
    items.sort_by_key(|&(i, j)| -(i + j));
    let mut out = WeightSet::new();
    for w in items {
        let mut t = out.clone();
        t.points.insert(w);
        if is_good(&t, n) {
            out = t;
        }
    }
    out
}

/// Reduces a sigma-symmetric weight set into S+, recording every step.
pub fn reduce_to_window(wt: &WeightSet, n: usize) -> Result<(WeightSet, ReductionTrace)> {
    if !wt.is_sigma_symmetric() {
        return Err(Error::NotSymmetric(format!("weights {wt} are not sigma-symmetric")));
    }
    let regions = window_regions(n, 0)?;
    let plus = &regions.s_plus;
    let mut trace = ReductionTrace::default();
    if wt.is_subset_of_region(plus) {
        return Ok((wt.clone(), trace));
    }
    let ni = n as i64;
    let (mut cur, shifts) = strip_normalize(wt, n);
    if !shifts.is_empty() {
        let w = width(&cur);
        trace.steps.push(ReductionStep {
            kind: StepKind::Strip { shifts },
            s: WeightSet::new(),
            good: true,
            extremal: true,
            bound: cur.clone(),
            result: cur.clone(),
            width_before: width(wt),
            width_after: w,
        });
    }
    // Each step removes S and its image from the top width level and adds
    // strictly narrower weights, so the loop is bounded by the sum over
    // widths of the level sizes of the strip.
    let cap = 4 * (ni + 1) * (ni + 1) * (cur.len() as i64 + 1) + 64;
    let mut steps = 0;
    while !cur.is_subset_of_region(plus) {
        steps += 1;
        if steps > cap {
            return Err(Error::Failed(format!("weight reduction did not terminate within {cap} steps")));
        }
        let k = width(&cur);
        let level: WeightSet = cur.iter().filter(|(i, j)| (i - j).abs() == k).collect();
        let (kind, s) = if 2 * k > ni {
            if level.iter().map(|(i, j)| i + j).max().unwrap_or(i64::MIN) >= ni {
                (StepKind::Minimal, level.iter().filter(|&(i, j)| i + j >= ni && i < j).collect())
            } else {
                (StepKind::Maximal, level.iter().filter(|&(i, j)| i + j < ni && i > j).collect::<WeightSet>())
            }
        } else if ni % 2 == 0 && 2 * k == ni {
            // Even n: the top level must leave the upper strip.
            let s: WeightSet = level.iter().filter(|&(i, j)| i + j >= ni && i < j).collect();
            (StepKind::Minimal, if is_good(&s, n) { s } else { greedy_good(&s, n) })
        } else {
            return Err(Error::Failed(format!("weights {cur} of width {k} are outside S+")));
        };
        if s.is_empty() {
            return Err(Error::Failed(format!("no reduction set for weights {cur}")));
        }
        let (good, extremal, sign) = match kind {
            StepKind::Minimal => (is_good(&s, n), is_minimal_subset(&s, &cur, Stratum::XLocus), -1),
            _ => (is_good(&s.negated(), n), is_maximal_subset(&s, &cur, Stratum::XLocus), 1),
        };
        let bound = cone_bound(&cur, &s, n, sign);
        let result = bound.intersection(&bound.sigma());
        trace.steps.push(ReductionStep {
            kind,
            s,
            good,
            extremal,
            bound,
            result: result.clone(),
            width_before: k,
            width_after: width(&result),
        });
        cur = result;
    }
    Ok((cur, trace))
}
