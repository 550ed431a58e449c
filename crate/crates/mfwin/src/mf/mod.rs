//! Graded matrix factorizations: validation, constructors, functors and
//! weights at points of the base.
//!
//! Conventions. A generator g carries a twist (chi_g, r_g, w_g); the element
//! `1 * g` has degree `-(chi_g, r_g, w_g)`. The entry `d[h][g]` is the
//! coefficient of h in d(g) and has torus degree `chi_h - chi_g`, R-charge
//! `r_h - r_g + 1` and auxiliary weight `w_h - w_g + c`, where `2c` is the
//! weight of the potential.

mod models;
mod ops;
mod sigma;
mod weights;

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactalg::{
    same_ring, Degree, Field, GradingJson, GradingSpec, Poly, Ring, RingRef, TermJson,
};
use crate::groebner::GradedMatrix;

pub use models::{
    base_point, corank2_ring, global_def_of_k, global_e_rho, global_potential, global_quadrics,
    global_ring, k2_prime, knorrer_o2_kernel, knorrer_so2_kernel, local_ring, m1, m2, potential,
    q_ideal, standard_model, standard_model_over, KernelVariant, StandardModel,
};
pub use ops::{direct_sum, hom_dg, koszul, koszul_with, tensor};
pub use sigma::{sigma_on_hom, SigmaStructure};
pub use weights::{weights_at_point, WeightMultiset};

/// Generator of a graded free module.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Generator {
    pub label: String,
    pub chi: Vec<i64>,
    pub r: i64,
    pub w: i64,
}

impl Generator {
    pub fn new(label: &str, chi: &[i64], r: i64, w: i64) -> Generator {
        Generator {
            label: label.to_string(),
            chi: chi.to_vec(),
            r,
            w,
        }
    }

    /// Degree of the element `1 * g`.
    pub fn elem_degree(&self) -> Degree {
        Degree {
            torus: self.chi.iter().map(|c| -c).collect(),
            r: -self.r,
            w: -self.w,
        }
    }

    pub fn parity(&self, g: &GradingSpec) -> i64 {
        g.parity(&self.chi, self.r)
    }
}

/// A matrix factorization `d^2 = W * Id` (or a dg module when W = 0).
#[derive(Clone, Debug)]
pub struct MatrixFactorization {
    pub ring: RingRef,
    pub gens: Vec<Generator>,
    /// `d[h][g]`: coefficient of generator h in d(g).
    pub d: Vec<Vec<Poly>>,
    pub w: Poly,
    /// Half the auxiliary weight of the potential.
    pub c: i64,
    pub sigma: Option<SigmaStructure>,
}

/// Dg modules share the representation, with potential zero.
pub type DgModule = MatrixFactorization;

/// A single failed check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub kind: ViolationKind,
    pub row: Option<usize>,
    pub col: Option<usize>,
    pub detail: String,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ViolationKind {
    Potential,
    Homogeneity,
    Square,
    Sigma,
}

/// Result of `validate`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub ok: bool,
    pub violations: Vec<Violation>,
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.ok {
            return write!(f, "ok");
        }
        writeln!(f, "{} violation(s):", self.violations.len())?;
        for v in &self.violations {
            let pos = match (v.row, v.col) {
                (Some(r), Some(c)) => format!(" at ({r}, {c})"),
                _ => String::new(),
            };
            writeln!(f, "  {:?}{pos}: {}", v.kind, v.detail)?;
        }
        Ok(())
    }
}

impl MatrixFactorization {
    /// Builds a factorization after shape and ring checks; use `validate` for
    /// the algebraic contract.
    pub fn new(
        ring: &RingRef,
        gens: Vec<Generator>,
        d: Vec<Vec<Poly>>,
        w: Poly,
        c: i64,
    ) -> Result<Self> {
        let n = gens.len();
        if d.len() != n || d.iter().any(|r| r.len() != n) {
            return Err(Error::ShapeMismatch(format!(
                "differential must be {n}x{n}"
            )));
        }
        let mut seen = std::collections::HashSet::new();
        for g in &gens {
            if !seen.insert(g.label.clone()) {
                return Err(Error::InvalidFactorization(format!(
                    "duplicate label `{}`",
                    g.label
                )));
            }
            if g.chi.len() != ring.grading.torus_rank {
                return Err(Error::InvalidFactorization(format!(
                    "generator `{}` has wrong torus rank",
                    g.label
                )));
            }
        }
        if !same_ring(w.ring(), ring) || d.iter().flatten().any(|p| !same_ring(p.ring(), ring)) {
            return Err(Error::RingMismatch(
                "factorization data from another ring".into(),
            ));
        }
        Ok(MatrixFactorization {
            ring: ring.clone(),
            gens,
            d,
            w,
            c,
            sigma: None,
        })
    }

    /// `new` followed by `validate`, failing on any violation.
    pub fn checked(
        ring: &RingRef,
        gens: Vec<Generator>,
        d: Vec<Vec<Poly>>,
        w: Poly,
        c: i64,
    ) -> Result<Self> {
        let m = Self::new(ring, gens, d, w, c)?;
        m.ensure_valid()?;
        Ok(m)
    }

    pub fn ensure_valid(&self) -> Result<()> {
        let rep = self.validate();
        if rep.ok {
            Ok(())
        } else {
            Err(Error::InvalidFactorization(rep.to_string()))
        }
    }

    pub fn rank(&self) -> usize {
        self.gens.len()
    }

    pub fn labels(&self) -> Vec<String> {
        self.gens.iter().map(|g| g.label.clone()).collect()
    }

    pub fn parities(&self) -> Vec<i64> {
        self.gens
            .iter()
            .map(|g| g.parity(&self.ring.grading))
            .collect()
    }

    pub fn index_of(&self, label: &str) -> Result<usize> {
        self.gens
            .iter()
            .position(|g| g.label == label)
            .ok_or_else(|| Error::InvalidFactorization(format!("no generator `{label}`")))
    }

    /// Expected degree of the entry `d[h][g]`.
    pub fn entry_degree(&self, h: usize, g: usize) -> Degree {
        let (a, b) = (&self.gens[h], &self.gens[g]);
        Degree {
            torus: a.chi.iter().zip(&b.chi).map(|(x, y)| x - y).collect(),
            r: a.r - b.r + 1,
            w: a.w - b.w + self.c,
        }
    }

    /// Potential degree: torus 0, R-charge 2, weight 2c.
    pub fn potential_degree(&self) -> Degree {
        Degree {
            torus: vec![0; self.ring.grading.torus_rank],
            r: 2,
            w: 2 * self.c,
        }
    }

    /// Square of the differential.
    pub fn d_squared(&self) -> Vec<Vec<Poly>> {
        mat_mul(&self.ring, &self.d, &self.d)
    }

    /// Checks homogeneity of W and every entry, `d^2 = W * Id`, and the
    /// sigma-structure when present.
    pub fn validate(&self) -> ValidationReport {
        let mut v = Vec::new();
        if !self.w.is_zero() && !self.w.is_homogeneous_of(&self.potential_degree()) {
            v.push(Violation {
                kind: ViolationKind::Potential,
                row: None,
                col: None,
                detail: format!(
                    "W = {} is not of degree {}",
                    self.w,
                    self.potential_degree()
                ),
            });
        }
        for h in 0..self.rank() {
            for g in 0..self.rank() {
                let p = &self.d[h][g];
                let e = self.entry_degree(h, g);
                if !p.is_homogeneous_of(&e) {
                    let got = match p.degree() {
                        Some(d) => d.to_string(),
                        None => "inhomogeneous".to_string(),
                    };
                    v.push(Violation {
                        kind: ViolationKind::Homogeneity,
                        row: Some(h),
                        col: Some(g),
                        detail: format!(
                            "entry {} -> {} = {} has degree {got}, expected {e}",
                            self.gens[g].label, self.gens[h].label, p
                        ),
                    });
                }
            }
        }
        let sq = self.d_squared();
        for h in 0..self.rank() {
            for g in 0..self.rank() {
                let mut res = sq[h][g].clone();
                if h == g {
                    res = &res - &self.w;
                }
                if !res.is_zero() {
                    v.push(Violation {
                        kind: ViolationKind::Square,
                        row: Some(h),
                        col: Some(g),
                        detail: format!("(d^2 - W Id) residual {res}"),
                    });
                }
            }
        }
        if let Some(s) = &self.sigma {
            match s.check_structure(self).and_then(|_| s.noncommuting_entries(self)) {
                Err(e) => v.push(Violation {
                    kind: ViolationKind::Sigma,
                    row: None,
                    col: None,
                    detail: e.to_string(),
                }),
                Ok(bad) => v.extend(bad.into_iter().map(|(h, g)| Violation {
                    kind: ViolationKind::Sigma,
                    row: Some(h),
                    col: Some(g),
                    detail: format!(
                        "entry {} -> {} does not commute with sigma",
                        self.gens[g].label, self.gens[h].label
                    ),
                })),
            }
        }
        ValidationReport {
            ok: v.is_empty(),
            violations: v,
        }
    }

    /// The differential as a graded matrix on element degrees.
    pub fn graded_matrix(&self) -> GradedMatrix {
        let deg: Vec<Degree> = self.gens.iter().map(|g| g.elem_degree()).collect();
        let shift = Degree {
            torus: vec![0; self.ring.grading.torus_rank],
            r: 1,
            w: self.c,
        };
        GradedMatrix {
            ring: self.ring.clone(),
            tgt_deg: deg.clone(),
            src_deg: deg,
            shift,
            entries: self.d.clone(),
        }
    }

    /// Block of d from the generators `src` to the generators `tgt`.
    pub fn block(&self, tgt: &[usize], src: &[usize]) -> GradedMatrix {
        let shift = Degree {
            torus: vec![0; self.ring.grading.torus_rank],
            r: 1,
            w: self.c,
        };
        GradedMatrix {
            ring: self.ring.clone(),
            tgt_deg: tgt.iter().map(|&i| self.gens[i].elem_degree()).collect(),
            src_deg: src.iter().map(|&i| self.gens[i].elem_degree()).collect(),
            shift,
            entries: tgt
                .iter()
                .map(|&h| src.iter().map(|&g| self.d[h][g].clone()).collect())
                .collect(),
        }
    }

    /// Indices of the even and odd generators.
    pub fn parity_split(&self) -> (Vec<usize>, Vec<usize>) {
        let p = self.parities();
        let even = (0..self.rank()).filter(|&i| p[i] == 0).collect();
        let odd = (0..self.rank()).filter(|&i| p[i] == 1).collect();
        (even, odd)
    }

    /// Rank-one factorization of W = 0 with the given twist.
    pub fn unit(ring: &RingRef, chi: &[i64], c: i64) -> MatrixFactorization {
        MatrixFactorization {
            ring: ring.clone(),
            gens: vec![Generator::new("1", chi, 0, 0)],
            d: vec![vec![Poly::zero(ring)]],
            w: Poly::zero(ring),
            c,
            sigma: None,
        }
    }

    /// Replaces the entry `d[h][g]` (used for mutation tests).
    pub fn with_entry(&self, h: usize, g: usize, p: Poly) -> MatrixFactorization {
        let mut m = self.clone();
        m.d[h][g] = p;
        m
    }

    /// Moves the factorization to a ring containing all of its variables.
    pub fn transport(&self, target: &RingRef) -> Result<MatrixFactorization> {
        let d = self
            .d
            .iter()
            .map(|r| {
                r.iter()
                    .map(|p| p.transport(target))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        let sigma = self.sigma.clone();
        let mut m = MatrixFactorization::new(
            target,
            self.gens.clone(),
            d,
            self.w.transport(target)?,
            self.c,
        )?;
        m.sigma = sigma;
        Ok(m)
    }

    /// Matrix of polynomials from row strings, for hand-written inputs.
    pub fn parse_matrix(ring: &RingRef, rows: &[&[&str]]) -> Result<Vec<Vec<Poly>>> {
        rows.iter()
            .map(|r| r.iter().map(|s| Poly::parse(ring, s)).collect())
            .collect()
    }

    pub fn to_json(&self) -> MfJson {
        MfJson {
            grading: self.ring.grading.to_json(),
            field: self.ring.field.spec_string(),
            c: Some(self.c),
            potential: self.w.to_terms_json(),
            generators: self
                .gens
                .iter()
                .map(|g| GeneratorJson {
                    label: g.label.clone(),
                    chi: g.chi.clone(),
                    r: g.r,
                    w: Some(g.w),
                })
                .collect(),
            d: self
                .d
                .iter()
                .map(|r| r.iter().map(|p| p.to_terms_json()).collect())
                .collect(),
            sigma: self.sigma.clone(),
        }
    }

    /// Reads a factorization; missing auxiliary weights are inferred from
    /// the entries.
    pub fn from_json(j: &MfJson) -> Result<MatrixFactorization> {
        let grading = GradingSpec::from_json(&j.grading)?;
        let field = Field::parse_spec(&j.field)?;
        let ring = Ring::new(field, grading);
        let w = Poly::from_terms_json(&ring, &j.potential)?;
        let d: Vec<Vec<Poly>> =
            j.d.iter()
                .map(|r| {
                    r.iter()
                        .map(|t| Poly::from_terms_json(&ring, t))
                        .collect::<Result<Vec<_>>>()
                })
                .collect::<Result<_>>()?;
        let c = match j.c {
            Some(c) => c,
            None => match w.degree() {
                Some(dw) if dw.w % 2 == 0 => dw.w / 2,
                Some(_) => return Err(Error::Schema("potential has odd auxiliary weight".into())),
                None if w.is_zero() => 0,
                None => return Err(Error::Schema("potential is inhomogeneous".into())),
            },
        };
        let mut gens: Vec<Generator> = j
            .generators
            .iter()
            .map(|g| Generator {
                label: g.label.clone(),
                chi: g.chi.clone(),
                r: g.r,
                w: g.w.unwrap_or(0),
            })
            .collect();
        if j.generators.iter().any(|g| g.w.is_none()) {
            infer_weights(&mut gens, &d, c);
        }
        let mut m = MatrixFactorization::new(&ring, gens, d, w, c)?;
        m.sigma = j.sigma.clone();
        Ok(m)
    }
}

/// Sets auxiliary weights from the entries, one connected component at a time.
fn infer_weights(gens: &mut [Generator], d: &[Vec<Poly>], c: i64) {
    let n = gens.len();
    let mut known = vec![false; n];
    for root in 0..n {
        if known[root] {
            continue;
        }
        known[root] = true;
        gens[root].w = 0;
        let mut stack = vec![root];
        while let Some(a) = stack.pop() {
            for b in 0..n {
                if known[b] {
                    continue;
                }
                // entry a -> b: w(d[b][a]) = w_b - w_a + c; entry b -> a likewise.
                let via = if let Some(deg) = d[b][a].degree() {
                    Some(deg.w + gens[a].w - c)
                } else {
                    d[a][b].degree().map(|deg| gens[a].w - deg.w + c)
                };
                if let Some(wb) = via {
                    gens[b].w = wb;
                    known[b] = true;
                    stack.push(b);
                }
            }
        }
    }
}

pub(crate) fn mat_mul(ring: &RingRef, a: &[Vec<Poly>], b: &[Vec<Poly>]) -> Vec<Vec<Poly>> {
    let n = a.len();
    let k = b.len();
    let m = if k == 0 { 0 } else { b[0].len() };
    let mut out = vec![vec![Poly::zero(ring); m]; n];
    for i in 0..n {
        for l in 0..k {
            let x = &a[i][l];
            if x.is_zero() {
                continue;
            }
            for j in 0..m {
                let y = &b[l][j];
                if !y.is_zero() {
                    out[i][j] = &out[i][j] + &(x * y);
                }
            }
        }
    }
    out
}

/// JSON form: generator table plus dense entry matrix.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MfJson {
    pub grading: GradingJson,
    #[serde(default = "default_field")]
    pub field: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c: Option<i64>,
    pub potential: Vec<TermJson>,
    pub generators: Vec<GeneratorJson>,
    pub d: Vec<Vec<Vec<TermJson>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sigma: Option<SigmaStructure>,
}

fn default_field() -> String {
    "rational".to_string()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GeneratorJson {
    pub label: String,
    pub chi: Vec<i64>,
    pub r: i64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub w: Option<i64>,
}

#[cfg(test)]
mod tests;
