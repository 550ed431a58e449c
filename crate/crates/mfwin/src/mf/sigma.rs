//! Sigma-equivariant structures: a semilinear involution phi(g) = eps_g * pi(g)
//! commuting with d, acting on characters by chi -> sigma(chi) + shift.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use super::MatrixFactorization;
use crate::error::{Error, Result};
use crate::exactalg::{Poly, RingRef};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SigmaStructure {
    pub perm: Vec<usize>,
    /// Entries are +1 or -1.
    pub signs: Vec<i64>,
    pub chi_shift: Vec<i64>,
}

impl SigmaStructure {
    /// Checks involutivity, compatibility with degrees and commutation with d:
    /// `sigma(d[h][g]) eps_h = eps_g d[pi h][pi g]`.
    pub fn check(&self, m: &MatrixFactorization) -> Result<()> {
        self.check_structure(m)?;
        match self.noncommuting_entries(m)?.first() {
            Some(&(h, gi)) => Err(Error::NotSymmetric(format!(
                "entry {} -> {} does not commute with sigma",
                m.gens[gi].label, m.gens[h].label
            ))),
            None => Ok(()),
        }
    }

    /// Involutivity and compatibility with degrees, ignoring the entries of d.
    pub fn check_structure(&self, m: &MatrixFactorization) -> Result<()> {
        let n = m.rank();
        let g = &m.ring.grading;
        if g.sigma.is_none() {
            return Err(Error::InvalidGrading(
                "sigma-structure on a ring without involution".into(),
            ));
        }
        if self.perm.len() != n || self.signs.len() != n {
            return Err(Error::ShapeMismatch(
                "sigma-structure has wrong length".into(),
            ));
        }
        if self.chi_shift.len() != g.torus_rank {
            return Err(Error::ShapeMismatch(
                "sigma character shift has wrong rank".into(),
            ));
        }
        for i in 0..n {
            let j = self.perm[i];
            if j >= n || self.perm[j] != i {
                return Err(Error::NotSymmetric(
                    "generator permutation is not an involution".into(),
                ));
            }
            if self.signs[i].abs() != 1 || self.signs[i] * self.signs[j] != 1 {
                return Err(Error::NotSymmetric(format!(
                    "signs at {} do not square to one",
                    m.gens[i].label
                )));
            }
            let expect: Vec<i64> = g
                .act_torus(&m.gens[i].chi)
                .iter()
                .zip(&self.chi_shift)
                .map(|(a, b)| a + b)
                .collect();
            let (a, b) = (&m.gens[i], &m.gens[j]);
            if b.chi != expect || a.r != b.r || a.w != b.w {
                return Err(Error::NotSymmetric(format!(
                    "degrees of {} and {} are not exchanged",
                    a.label, b.label
                )));
            }
        }
        Ok(())
    }

    /// Positions `(h, g)` of entries of d violating
    /// `sigma(d[h][g]) eps_h = eps_g d[pi h][pi g]`; assumes `check_structure`.
    pub fn noncommuting_entries(&self, m: &MatrixFactorization) -> Result<Vec<(usize, usize)>> {
        let n = m.rank();
        let mut out = Vec::new();
        for h in 0..n {
            for gi in 0..n {
                let lhs = m.d[h][gi].apply_sigma()?;
                let lhs = scale(&lhs, self.signs[h]);
                let rhs = scale(&m.d[self.perm[h]][self.perm[gi]], self.signs[gi]);
                if lhs != rhs {
                    out.push((h, gi));
                }
            }
        }
        Ok(out)
    }

    /// Finds signs making `perm` a sigma-structure, by propagation along the
    /// nonzero entries of d and the pairs of `perm`.
    pub fn solve(
        m: &MatrixFactorization,
        perm: Vec<usize>,
        chi_shift: Vec<i64>,
    ) -> Result<SigmaStructure> {
        let n = m.rank();
        if perm.len() != n {
            return Err(Error::ShapeMismatch("permutation has wrong length".into()));
        }
        // Edges (a, b, r): eps_b = r * eps_a.
        let mut adj: Vec<Vec<(usize, i64)>> = vec![Vec::new(); n];
        for i in 0..n {
            let j = perm[i];
            if j >= n {
                return Err(Error::ShapeMismatch(
                    "permutation index out of range".into(),
                ));
            }
            adj[i].push((j, 1));
        }
        for h in 0..n {
            for g in 0..n {
                let e = &m.d[h][g];
                let t = &m.d[perm[h]][perm[g]];
                if e.is_zero() && t.is_zero() {
                    continue;
                }
                let se = e.apply_sigma()?;
                let r = if se == *t {
                    1
                } else if -&se == *t {
                    -1
                } else {
                    return Err(Error::NotSymmetric(format!(
                        "entry {} -> {} has no sigma-partner up to sign",
                        m.gens[g].label, m.gens[h].label
                    )));
                };
                // sigma(e) eps_h = eps_g t: eps_h = r eps_g.
                adj[g].push((h, r));
                adj[h].push((g, r));
            }
        }
        let mut signs = vec![0i64; n];
        for root in 0..n {
            if signs[root] != 0 {
                continue;
            }
            signs[root] = 1;
            let mut q = VecDeque::from([root]);
            while let Some(a) = q.pop_front() {
                for &(b, r) in &adj[a] {
                    let want = r * signs[a];
                    if signs[b] == 0 {
                        signs[b] = want;
                        q.push_back(b);
                    } else if signs[b] != want {
                        return Err(Error::NotSymmetric(
                            "sign constraints are inconsistent".into(),
                        ));
                    }
                }
            }
        }
        let s = SigmaStructure {
            perm,
            signs,
            chi_shift,
        };
        s.check(m)?;
        Ok(s)
    }
}

fn scale(p: &Poly, s: i64) -> Poly {
    if s == 1 {
        p.clone()
    } else {
        -p
    }
}

/// Image of a map `M -> N` given as a matrix `phi[h][g]`:
/// `(sigma phi)[pi h][pi g] = eps_h eps_g sigma(phi[h][g])`.
pub fn sigma_on_hom(
    ring: &RingRef,
    src: &SigmaStructure,
    tgt: &SigmaStructure,
    phi: &[Vec<Poly>],
) -> Result<Vec<Vec<Poly>>> {
    let rows = tgt.perm.len();
    let cols = src.perm.len();
    if phi.len() != rows || phi.iter().any(|r| r.len() != cols) {
        return Err(Error::ShapeMismatch(
            "map does not match the sigma-structures".into(),
        ));
    }
    let mut out = vec![vec![Poly::zero(ring); cols]; rows];
    for h in 0..rows {
        for g in 0..cols {
            let p = &phi[h][g];
            if !p.is_zero() {
                out[tgt.perm[h]][src.perm[g]] =
                    scale(&p.apply_sigma()?, tgt.signs[h] * src.signs[g]);
            }
        }
    }
    Ok(out)
}
