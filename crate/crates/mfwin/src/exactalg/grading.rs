//! Multigradings on polynomial rings: torus characters, R-charge, an auxiliary
//! positive weight and an optional variable involution.

use std::collections::HashSet;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Maximum number of ring variables.
pub const MAX_VARS: usize = 16;

/// Grading data of a single variable.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct VarSpec {
    pub name: String,
    /// Character of the torus, one entry per torus factor.
    pub torus: Vec<i64>,
    /// R-charge.
    pub r: i64,
    /// Auxiliary positive weight; makes graded pieces finite.
    #[serde(default = "default_weight")]
    pub weight: i64,
}

fn default_weight() -> i64 {
    1
}

impl VarSpec {
    pub fn new(name: &str, torus: &[i64], r: i64, weight: i64) -> VarSpec {
        VarSpec {
            name: name.to_string(),
            torus: torus.to_vec(),
            r,
            weight,
        }
    }
}

/// How the involution acts on torus characters.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TorusAction {
    Identity,
    /// (a, b) -> (b, a) on a rank-2 torus.
    Swap,
    /// a -> -a.
    Negate,
}

impl TorusAction {
    pub fn apply(&self, chi: &[i64]) -> Vec<i64> {
        match self {
            TorusAction::Identity => chi.to_vec(),
            TorusAction::Swap => chi.iter().rev().copied().collect(),
            TorusAction::Negate => chi.iter().map(|c| -c).collect(),
        }
    }
}

/// Involution on variables together with its action on characters.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Involution {
    pub perm: Vec<usize>,
    pub torus: TorusAction,
}

/// Total degree of a homogeneous element: torus character, R-charge and weight.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Degree {
    pub torus: Vec<i64>,
    pub r: i64,
    pub w: i64,
}

impl Degree {
    pub fn zero(rank: usize) -> Degree {
        Degree {
            torus: vec![0; rank],
            r: 0,
            w: 0,
        }
    }

    pub fn new(torus: &[i64], r: i64, w: i64) -> Degree {
        Degree {
            torus: torus.to_vec(),
            r,
            w,
        }
    }
}

impl fmt::Display for Degree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(chi={:?}, r={}, w={})", self.torus, self.r, self.w)
    }
}

impl Add for &Degree {
    type Output = Degree;
    fn add(self, o: &Degree) -> Degree {
        Degree {
            torus: self
                .torus
                .iter()
                .zip(&o.torus)
                .map(|(a, b)| a + b)
                .collect(),
            r: self.r + o.r,
            w: self.w + o.w,
        }
    }
}

impl Sub for &Degree {
    type Output = Degree;
    fn sub(self, o: &Degree) -> Degree {
        Degree {
            torus: self
                .torus
                .iter()
                .zip(&o.torus)
                .map(|(a, b)| a - b)
                .collect(),
            r: self.r - o.r,
            w: self.w - o.w,
        }
    }
}

impl Neg for &Degree {
    type Output = Degree;
    fn neg(self) -> Degree {
        Degree {
            torus: self.torus.iter().map(|a| -a).collect(),
            r: -self.r,
            w: -self.w,
        }
    }
}

/// Grading of a polynomial ring.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GradingSpec {
    pub vars: Vec<VarSpec>,
    pub torus_rank: usize,
    /// Pairing vector of the distinguished 2-torsion element; parity of a
    /// character chi with R-charge r is `tau . chi + r mod 2`.
    pub tau: Vec<i64>,
    pub sigma: Option<Involution>,
}

/// Choice of R-charge convention for the global model.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RConvention {
    /// L-coordinates carry R-charge 2, V-coordinates 0.
    LCharge,
    /// V-coordinates carry R-charge 1, L-coordinates 0.
    VCharge,
}

impl GradingSpec {
    /// Validates and builds a grading. `sigma_pairs` lists swapped variable names;
    /// unlisted variables are fixed.
    pub fn new(
        vars: Vec<VarSpec>,
        tau: Vec<i64>,
        sigma_pairs: Option<(&[(String, String)], TorusAction)>,
    ) -> Result<GradingSpec> {
        if vars.len() > MAX_VARS {
            return Err(Error::InvalidGrading(format!(
                "at most {MAX_VARS} variables supported"
            )));
        }
        let torus_rank = vars.first().map(|v| v.torus.len()).unwrap_or(tau.len());
        let mut seen = HashSet::new();
        for v in &vars {
            if v.name.is_empty() || !v.name.chars().next().unwrap().is_ascii_alphabetic() {
                return Err(Error::InvalidGrading(format!(
                    "bad variable name `{}`",
                    v.name
                )));
            }
            if !seen.insert(v.name.clone()) {
                return Err(Error::InvalidGrading(format!(
                    "duplicate variable `{}`",
                    v.name
                )));
            }
            if v.torus.len() != torus_rank {
                return Err(Error::InvalidGrading(format!(
                    "variable `{}` has wrong torus rank",
                    v.name
                )));
            }
            if v.weight <= 0 {
                return Err(Error::InvalidGrading(format!(
                    "variable `{}` needs positive weight",
                    v.name
                )));
            }
        }
        let tau = if tau.is_empty() {
            vec![0; torus_rank]
        } else {
            tau
        };
        if tau.len() != torus_rank {
            return Err(Error::InvalidGrading("tau has wrong length".into()));
        }
        let mut g = GradingSpec {
            vars,
            torus_rank,
            tau,
            sigma: None,
        };
        for (i, v) in g.vars.iter().enumerate() {
            if g.parity(&v.torus, v.r) != 0 {
                return Err(Error::InvalidGrading(format!(
                    "variable `{}` is odd for the distinguished element (index {i})",
                    v.name
                )));
            }
        }
        if let Some((pairs, action)) = sigma_pairs {
            let mut perm: Vec<usize> = (0..g.vars.len()).collect();
            for (a, b) in pairs {
                let ia = g.var_index(a)?;
                let ib = g.var_index(b)?;
                if perm[ia] != ia || perm[ib] != ib {
                    return Err(Error::InvalidGrading(format!(
                        "variable paired twice in `{a}`/`{b}`"
                    )));
                }
                perm[ia] = ib;
                perm[ib] = ia;
            }
            g.set_sigma(Involution {
                perm,
                torus: action,
            })?;
        }
        Ok(g)
    }

    fn set_sigma(&mut self, inv: Involution) -> Result<()> {
        if inv.perm.len() != self.vars.len() {
            return Err(Error::InvalidGrading("involution has wrong length".into()));
        }
        if matches!(inv.torus, TorusAction::Swap) && self.torus_rank != 2 {
            return Err(Error::InvalidGrading(
                "swap action needs a rank-2 torus".into(),
            ));
        }
        for (i, &j) in inv.perm.iter().enumerate() {
            if j >= inv.perm.len() || inv.perm[j] != i {
                return Err(Error::InvalidGrading("sigma is not an involution".into()));
            }
            let (a, b) = (&self.vars[i], &self.vars[j]);
            if a.r != b.r || a.weight != b.weight {
                return Err(Error::InvalidGrading(format!(
                    "sigma must preserve R-charge and weight (`{}` -> `{}`)",
                    a.name, b.name
                )));
            }
            if inv.torus.apply(&a.torus) != b.torus {
                return Err(Error::InvalidGrading(format!(
                    "sigma is incompatible with torus characters (`{}` -> `{}`)",
                    a.name, b.name
                )));
            }
        }
        self.sigma = Some(inv);
        Ok(())
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn var_index(&self, name: &str) -> Result<usize> {
        self.vars
            .iter()
            .position(|v| v.name == name)
            .ok_or_else(|| Error::UnknownVariable(name.to_string()))
    }

    pub fn var_names(&self) -> Vec<String> {
        self.vars.iter().map(|v| v.name.clone()).collect()
    }

    /// Degree of the monomial with the given exponents.
    pub fn degree_of(&self, exps: &[u16]) -> Degree {
        let mut d = Degree::zero(self.torus_rank);
        for (v, &e) in self.vars.iter().zip(exps) {
            if e == 0 {
                continue;
            }
            let e = e as i64;
            for (t, c) in d.torus.iter_mut().zip(&v.torus) {
                *t += e * c;
            }
            d.r += e * v.r;
            d.w += e * v.weight;
        }
        d
    }

    pub fn var_degree(&self, i: usize) -> Degree {
        let v = &self.vars[i];
        Degree {
            torus: v.torus.clone(),
            r: v.r,
            w: v.weight,
        }
    }

    /// Parity `tau . chi + r mod 2` in {0, 1}.
    pub fn parity(&self, chi: &[i64], r: i64) -> i64 {
        let s: i64 = self.tau.iter().zip(chi).map(|(a, b)| a * b).sum::<i64>() + r;
        s.rem_euclid(2)
    }

    /// Action of the involution on characters (identity when absent).
    pub fn act_torus(&self, chi: &[i64]) -> Vec<i64> {
        match &self.sigma {
            Some(s) => s.torus.apply(chi),
            None => chi.to_vec(),
        }
    }

    /// A variable is a base variable when it has trivial torus character and zero R-charge.
    pub fn is_base_var(&self, i: usize) -> bool {
        let v = &self.vars[i];
        v.r == 0 && v.torus.iter().all(|&c| c == 0)
    }

    /// Global model on V x V x L with dim V = n, dim L = l.
    pub fn global_model(n: usize, l: usize, conv: RConvention) -> Result<GradingSpec> {
        let (rv, rp) = match conv {
            RConvention::LCharge => (0, 2),
            RConvention::VCharge => (1, 0),
        };
        let mut vars = Vec::new();
        for i in 1..=n {
            vars.push(VarSpec::new(&format!("x{i}"), &[1, 0], rv, 1));
        }
        for i in 1..=n {
            vars.push(VarSpec::new(&format!("y{i}"), &[0, 1], rv, 1));
        }
        for i in 1..=l {
            vars.push(VarSpec::new(&format!("p{i}"), &[-1, -1], rp, 2));
        }
        let tau = match conv {
            RConvention::LCharge => vec![0, 0],
            RConvention::VCharge => vec![1, 1],
        };
        let pairs: Vec<(String, String)> = (1..=n)
            .map(|i| (format!("x{i}"), format!("y{i}")))
            .collect();
        GradingSpec::new(vars, tau, Some((&pairs, TorusAction::Swap)))
    }

    pub fn to_json(&self) -> GradingJson {
        let pairs = self.sigma.as_ref().map(|s| {
            let mut out = Vec::new();
            for (i, &j) in s.perm.iter().enumerate() {
                if i < j {
                    out.push((self.vars[i].name.clone(), self.vars[j].name.clone()));
                }
            }
            SigmaJson {
                pairs: out,
                torus: s.torus,
            }
        });
        GradingJson {
            vars: self.vars.clone(),
            tau: self.tau.clone(),
            sigma: pairs,
        }
    }

    pub fn from_json(j: &GradingJson) -> Result<GradingSpec> {
        let sigma = j.sigma.as_ref().map(|s| (s.pairs.as_slice(), s.torus));
        GradingSpec::new(j.vars.clone(), j.tau.clone(), sigma)
    }
}

/// JSON header form of a grading.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GradingJson {
    pub vars: Vec<VarSpec>,
    #[serde(default)]
    pub tau: Vec<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sigma: Option<SigmaJson>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SigmaJson {
    pub pairs: Vec<(String, String)>,
    pub torus: TorusAction,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn global_model_conventions() {
        let a = GradingSpec::global_model(3, 2, RConvention::LCharge).unwrap();
        assert_eq!(a.nvars(), 8);
        assert_eq!(
            a.var_degree(a.var_index("p1").unwrap()),
            Degree::new(&[-1, -1], 2, 2)
        );
        let b = GradingSpec::global_model(3, 2, RConvention::VCharge).unwrap();
        assert_eq!(b.var_degree(0), Degree::new(&[1, 0], 1, 1));
        assert_eq!(b.parity(&[1, 0], 1), 0);
        let s = b.sigma.as_ref().unwrap();
        assert_eq!(s.perm[0], 3);
    }

    #[test]
    fn sigma_must_respect_characters() {
        let vars = vec![VarSpec::new("x", &[1], 1, 1), VarSpec::new("y", &[1], 1, 1)];
        let pairs = vec![("x".to_string(), "y".to_string())];
        let err = GradingSpec::new(vars, vec![1], Some((&pairs, TorusAction::Negate)));
        assert!(err.is_err());
    }

    #[test]
    fn odd_variables_rejected() {
        let vars = vec![VarSpec::new("x", &[1], 0, 1)];
        assert!(GradingSpec::new(vars, vec![1], None).is_err());
    }

    #[test]
    fn json_round_trip() {
        let g = GradingSpec::global_model(2, 1, RConvention::VCharge).unwrap();
        let j = serde_json::to_string(&g.to_json()).unwrap();
        let back: GradingJson = serde_json::from_str(&j).unwrap();
        assert_eq!(GradingSpec::from_json(&back).unwrap(), g);
    }
}
