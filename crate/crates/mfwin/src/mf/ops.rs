//! Constructors and functors on factorizations.

use super::{Generator, MatrixFactorization, SigmaStructure};
use crate::error::{Error, Result};
use crate::exactalg::{same_ring, Degree, FieldElem, Poly};

fn sign(p: i64) -> i64 {
    if p.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

fn signed(p: &Poly, s: i64) -> Poly {
    if s == 1 {
        p.clone()
    } else {
        -p
    }
}

/// Koszul factorization of `W = sum a_i b_i`: exterior algebra on e_I with
/// `d = sum a_i iota_i + b_i eps_i`. Half-weight c is inferred from W.
pub fn koszul(a: &[Poly], b: &[Poly]) -> Result<MatrixFactorization> {
    koszul_with(a, b, None)
}

/// As `koszul`, with an explicit half-weight (required when W = 0).
pub fn koszul_with(a: &[Poly], b: &[Poly], c: Option<i64>) -> Result<MatrixFactorization> {
    if a.len() != b.len() {
        return Err(Error::ShapeMismatch(
            "Koszul data a and b need equal length".into(),
        ));
    }
    if a.is_empty() {
        return Err(Error::Degenerate("empty Koszul data".into()));
    }
    if a.len() > 12 {
        return Err(Error::SizeCap("at most 12 Koszul pairs".into()));
    }
    let ring = a[0].ring().clone();
    if a.iter().chain(b).any(|p| !same_ring(p.ring(), &ring)) {
        return Err(Error::RingMismatch(
            "Koszul data from different rings".into(),
        ));
    }
    let rank = ring.grading.torus_rank;
    let mut w = Poly::zero(&ring);
    for (x, y) in a.iter().zip(b) {
        w = &w + &(x * y);
    }
    let c = match c {
        Some(c) => c,
        None => match w.degree() {
            Some(d) if d.w % 2 == 0 => d.w / 2,
            Some(_) => {
                return Err(Error::Inhomogeneous(
                    "potential has odd auxiliary weight".into(),
                ))
            }
            None if w.is_zero() => {
                return Err(Error::Degenerate(
                    "W = 0 needs an explicit half-weight".into(),
                ))
            }
            None => return Err(Error::Inhomogeneous(format!("W = {w} is inhomogeneous"))),
        },
    };
    let target = Degree {
        torus: vec![0; rank],
        r: 2,
        w: 2 * c,
    };
    let mut adeg = Vec::new();
    for (i, (x, y)) in a.iter().zip(b).enumerate() {
        let dx = x.degree();
        let dy = y.degree();
        if (!x.is_zero() && dx.is_none()) || (!y.is_zero() && dy.is_none()) {
            return Err(Error::Inhomogeneous(format!(
                "Koszul pair {i} has an inhomogeneous entry"
            )));
        }
        let da = match (dx, dy) {
            (Some(dx), Some(dy)) => {
                if &dx + &dy != target {
                    return Err(Error::Inhomogeneous(format!(
                        "a_{i} b_{i} has degree {}, expected {target}",
                        &dx + &dy
                    )));
                }
                dx
            }
            (Some(dx), None) => dx,
            (None, Some(dy)) => &target - &dy,
            (None, None) => return Err(Error::Degenerate(format!("Koszul pair {i} is zero"))),
        };
        adeg.push(da);
    }
    let k = a.len();
    let mut masks: Vec<u32> = (0..1u32 << k).collect();
    masks.sort_by_key(|m| (m.count_ones(), *m));
    let pos: std::collections::HashMap<u32, usize> =
        masks.iter().enumerate().map(|(i, &m)| (m, i)).collect();
    let gens: Vec<Generator> = masks
        .iter()
        .map(|&m| {
            let mut chi = vec![0i64; rank];
            let (mut r, mut wt) = (0, 0);
            let mut idx = Vec::new();
            for (i, d) in adeg.iter().enumerate() {
                if m >> i & 1 == 1 {
                    for (c0, t) in chi.iter_mut().zip(&d.torus) {
                        *c0 -= t;
                    }
                    r += 1 - d.r;
                    wt += c - d.w;
                    idx.push((i + 1).to_string());
                }
            }
            Generator {
                label: format!("e{{{}}}", idx.join(",")),
                chi,
                r,
                w: wt,
            }
        })
        .collect();
    let n = gens.len();
    let mut d = vec![vec![Poly::zero(&ring); n]; n];
    for &m in &masks {
        let src = pos[&m];
        for i in 0..k {
            let before = (m & ((1u32 << i) - 1)).count_ones() as i64;
            let s = sign(before);
            if m >> i & 1 == 1 {
                if !a[i].is_zero() {
                    d[pos[&(m ^ (1 << i))]][src] = signed(&a[i], s);
                }
            } else if !b[i].is_zero() {
                d[pos[&(m | (1 << i))]][src] = signed(&b[i], s);
            }
        }
    }
    MatrixFactorization::new(&ring, gens, d, w, c)
}

/// Tensor product with the sign rule: `d = d_M (x) 1 + (-1)^p(g) 1 (x) d_N`.
pub fn tensor(m: &MatrixFactorization, n: &MatrixFactorization) -> Result<MatrixFactorization> {
    if !same_ring(&m.ring, &n.ring) {
        return Err(Error::RingMismatch(
            "tensor factors over different rings".into(),
        ));
    }
    if m.c != n.c {
        return Err(Error::InvalidFactorization(format!(
            "tensor factors have half-weights {} and {}",
            m.c, n.c
        )));
    }
    let ring = &m.ring;
    let (a, b) = (m.rank(), n.rank());
    let pm = m.parities();
    let idx = |g: usize, h: usize| g * b + h;
    let mut gens = Vec::with_capacity(a * b);
    for g in &m.gens {
        for h in &n.gens {
            gens.push(Generator {
                label: format!("{}⊗{}", g.label, h.label),
                chi: g.chi.iter().zip(&h.chi).map(|(x, y)| x + y).collect(),
                r: g.r + h.r,
                w: g.w + h.w,
            });
        }
    }
    let mut d = vec![vec![Poly::zero(ring); a * b]; a * b];
    for g in 0..a {
        for h in 0..b {
            let src = idx(g, h);
            for g2 in 0..a {
                if !m.d[g2][g].is_zero() {
                    d[idx(g2, h)][src] = &d[idx(g2, h)][src] + &m.d[g2][g];
                }
            }
            for h2 in 0..b {
                if !n.d[h2][h].is_zero() {
                    let e = signed(&n.d[h2][h], sign(pm[g]));
                    d[idx(g, h2)][src] = &d[idx(g, h2)][src] + &e;
                }
            }
        }
    }
    let mut out = MatrixFactorization::new(ring, gens, d, &m.w + &n.w, m.c)?;
    if let (Some(sm), Some(sn)) = (&m.sigma, &n.sigma) {
        let perm: Vec<usize> = (0..a * b)
            .map(|i| idx(sm.perm[i / b], sn.perm[i % b]))
            .collect();
        let shift: Vec<i64> = sm
            .chi_shift
            .iter()
            .zip(&sn.chi_shift)
            .map(|(x, y)| x + y)
            .collect();
        out.sigma = Some(SigmaStructure::solve(&out, perm, shift)?);
    }
    Ok(out)
}

/// Direct sum; sigma-structures are combined when both summands carry one.
pub fn direct_sum(m: &MatrixFactorization, n: &MatrixFactorization) -> Result<MatrixFactorization> {
    if !same_ring(&m.ring, &n.ring) {
        return Err(Error::RingMismatch("summands over different rings".into()));
    }
    if m.w != n.w || m.c != n.c {
        return Err(Error::InvalidFactorization(
            "summands factor different potentials".into(),
        ));
    }
    let ring = &m.ring;
    let (a, b) = (m.rank(), n.rank());
    let mut gens = m.gens.clone();
    gens.extend(n.gens.iter().cloned());
    let mut d = vec![vec![Poly::zero(ring); a + b]; a + b];
    for i in 0..a {
        for j in 0..a {
            d[i][j] = m.d[i][j].clone();
        }
    }
    for i in 0..b {
        for j in 0..b {
            d[a + i][a + j] = n.d[i][j].clone();
        }
    }
    let mut out = MatrixFactorization::new(ring, gens, d, m.w.clone(), m.c)?;
    if let (Some(sm), Some(sn)) = (&m.sigma, &n.sigma) {
        if sm.chi_shift != sn.chi_shift {
            return Err(Error::InvalidFactorization(
                "summand sigma-structures act differently on characters".into(),
            ));
        }
        let mut perm = sm.perm.clone();
        perm.extend(sn.perm.iter().map(|p| p + a));
        let mut signs = sm.signs.clone();
        signs.extend(sn.signs.iter().copied());
        out.sigma = Some(SigmaStructure {
            perm,
            signs,
            chi_shift: sm.chi_shift.clone(),
        });
    }
    Ok(out)
}

/// Hom complex `Hom(M, N)` for factorizations of the same potential; its
/// generator `E_{h,g}` sends g to h.
pub fn hom_dg(m: &MatrixFactorization, n: &MatrixFactorization) -> Result<MatrixFactorization> {
    if !same_ring(&m.ring, &n.ring) {
        return Err(Error::RingMismatch("hom between different rings".into()));
    }
    if m.w != n.w {
        return Err(Error::PotentialMismatch(format!("{} vs {}", m.w, n.w)));
    }
    if m.c != n.c {
        return Err(Error::PotentialMismatch(format!(
            "half-weights {} vs {}",
            m.c, n.c
        )));
    }
    let ring = &m.ring;
    let (a, b) = (m.rank(), n.rank());
    let pm = m.parities();
    let pn = n.parities();
    // Index of E_{h,g}: h-major.
    let idx = |h: usize, g: usize| h * a + g;
    let mut gens = Vec::with_capacity(a * b);
    for h in &n.gens {
        for g in &m.gens {
            gens.push(Generator {
                label: format!("{}^v⊗{}", g.label, h.label),
                chi: h.chi.iter().zip(&g.chi).map(|(x, y)| x - y).collect(),
                r: h.r - g.r,
                w: h.w - g.w,
            });
        }
    }
    let mut d = vec![vec![Poly::zero(ring); a * b]; a * b];
    for h in 0..b {
        for g in 0..a {
            let src = idx(h, g);
            for h2 in 0..b {
                if !n.d[h2][h].is_zero() {
                    d[idx(h2, g)][src] = &d[idx(h2, g)][src] + &n.d[h2][h];
                }
            }
            let s = -sign(pn[h] - pm[g]);
            for g2 in 0..a {
                if !m.d[g][g2].is_zero() {
                    let e = signed(&m.d[g][g2], s);
                    d[idx(h, g2)][src] = &d[idx(h, g2)][src] + &e;
                }
            }
        }
    }
    MatrixFactorization::new(ring, gens, d, Poly::zero(ring), m.c)
}

impl MatrixFactorization {
    /// Dual factorization of -W.
    pub fn dual(&self) -> MatrixFactorization {
        let n = self.rank();
        let p = self.parities();
        let gens = self
            .gens
            .iter()
            .map(|g| Generator {
                label: format!("{}^v", g.label),
                chi: g.chi.iter().map(|c| -c).collect(),
                r: -g.r,
                w: -g.w,
            })
            .collect();
        let mut d = vec![vec![Poly::zero(&self.ring); n]; n];
        for (g, row) in d.iter_mut().enumerate() {
            for (g2, e) in row.iter_mut().enumerate() {
                if !self.d[g2][g].is_zero() {
                    *e = signed(&self.d[g2][g], sign(p[g2]));
                }
            }
        }
        let sigma = self.sigma.as_ref().map(|s| SigmaStructure {
            perm: s.perm.clone(),
            signs: s.signs.clone(),
            chi_shift: s.chi_shift.iter().map(|c| -c).collect(),
        });
        MatrixFactorization {
            ring: self.ring.clone(),
            gens,
            d,
            w: -&self.w,
            c: self.c,
            sigma,
        }
    }

    /// Change of basis: generator k of the result is `scale[k]` times
    /// generator `perm[k]`. Any sigma-structure is dropped.
    pub fn conjugate(&self, perm: &[usize], scale: &[FieldElem]) -> Result<MatrixFactorization> {
        let n = self.rank();
        let mut seen = vec![false; n];
        if perm.len() != n || scale.len() != n || perm.iter().any(|&i| i >= n || std::mem::replace(&mut seen[i], true)) {
            return Err(Error::ShapeMismatch(format!("expected a permutation of {n} generators with {n} scales")));
        }
        let inv = scale.iter().map(|c| c.inv()).collect::<Result<Vec<_>>>()?;
        let gens = perm.iter().map(|&i| self.gens[i].clone()).collect();
        let d = (0..n)
            .map(|h| (0..n).map(|g| self.d[perm[h]][perm[g]].scale(&(&inv[h] * &scale[g]))).collect())
            .collect();
        MatrixFactorization::new(&self.ring, gens, d, self.w.clone(), self.c)
    }

    /// Twist by a character: chi_g += chi for every generator.
    pub fn twist(&self, chi: &[i64]) -> MatrixFactorization {
        let mut m = self.clone();
        for g in &mut m.gens {
            for (a, b) in g.chi.iter_mut().zip(chi) {
                *a += b;
            }
        }
        if let Some(s) = &mut m.sigma {
            let acted = self.ring.grading.act_torus(chi);
            for ((sh, t), at) in s.chi_shift.iter_mut().zip(chi).zip(&acted) {
                *sh += t - at;
            }
        }
        m
    }

    /// Cohomological shift [k]: R-shifts += k, d negated for odd k.
    pub fn shift(&self, k: i64) -> MatrixFactorization {
        let mut m = self.clone();
        for g in &mut m.gens {
            g.r += k;
        }
        if k.rem_euclid(2) == 1 {
            for row in &mut m.d {
                for e in row.iter_mut() {
                    *e = -&*e;
                }
            }
        }
        m
    }

    /// Image under the ring involution: entries and characters are acted on,
    /// labels acquire the prefix "σ". Requires sigma(W) = W.
    pub fn sigma_image(&self) -> Result<MatrixFactorization> {
        let grading = &self.ring.grading;
        if grading.sigma.is_none() {
            return Err(Error::InvalidGrading("ring has no involution".into()));
        }
        if self.w.apply_sigma()? != self.w {
            return Err(Error::NotSymmetric(format!(
                "W = {} is not sigma-invariant",
                self.w
            )));
        }
        let gens = self
            .gens
            .iter()
            .map(|g| Generator {
                label: format!("σ{}", g.label),
                chi: grading.act_torus(&g.chi),
                r: g.r,
                w: g.w,
            })
            .collect();
        let d = self
            .d
            .iter()
            .map(|r| {
                r.iter()
                    .map(|p| p.apply_sigma())
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        MatrixFactorization::new(&self.ring, gens, d, self.w.clone(), self.c)
    }

    /// Reduces every entry modulo a polynomial substitution of the ring
    /// (used to restrict to loci given by setting variables).
    pub fn evaluate(
        &self,
        vals: &[Option<crate::exactalg::FieldElem>],
    ) -> Result<MatrixFactorization> {
        let d = self
            .d
            .iter()
            .map(|r| {
                r.iter()
                    .map(|p| p.evaluate_indexed(vals))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        let w = self.w.evaluate_indexed(vals)?;
        let mut m = MatrixFactorization::new(&self.ring, self.gens.clone(), d, w, self.c)?;
        m.sigma = None;
        Ok(m)
    }

    /// Relabels generators with a prefix.
    pub fn relabel(&self, prefix: &str) -> MatrixFactorization {
        let mut m = self.clone();
        for g in &mut m.gens {
            g.label = format!("{prefix}{}", g.label);
        }
        m
    }
}
