//! Hom complexes of factorizations as complexes of free modules over the base
//! ring S, in a fixed torus character and R-degrees -1, 0, 1, together with a
//! reduction by cancelling unit entries.

use std::collections::{BTreeMap, HashMap};

use rand::Rng;

use super::BaseSplit;
use crate::error::{Error, Result};
use crate::exactalg::{Degree, FieldElem, Matrix, Mono, Poly};
use crate::groebner::{
    buchberger, for_each_standard_monomial, present_span, subquotient, BaseRing, GradedMatrix,
    GroebnerBasis, MonomialOrder, SubmoduleGens, SubquotientPresentation,
};
use crate::mf::{mat_mul, MatrixFactorization, SigmaStructure};

/// Sparse vector over S keyed by basis index.
pub type SparseVec = BTreeMap<usize, Poly>;

/// Basis element `mono * E_{h,g}` of the Hom complex: the map sending source
/// generator g to `mono * h`. Its S-weight is `w(mono) - w_h + w_g`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BasisElem {
    pub h: usize,
    pub g: usize,
    pub mono: Mono,
    pub weight: i64,
}

/// `Hom(src, tgt)` in torus character `chi`, degrees -1, 0 and 1, over S.
#[derive(Clone, Debug)]
pub struct HomComplex {
    pub src: MatrixFactorization,
    pub tgt: MatrixFactorization,
    pub split: BaseSplit,
    pub chi: Vec<i64>,
    /// Bases of C^{-1}, C^0 and C^1.
    pub basis: [Vec<BasisElem>; 3],
    index: [HashMap<(usize, usize, Mono), usize>; 3],
    /// Columns of D: C^{-1} -> C^0.
    pub d_in: Vec<SparseVec>,
    /// Columns of D: C^0 -> C^1.
    pub d_out: Vec<SparseVec>,
}

fn add_into(v: &mut SparseVec, k: usize, p: Poly) {
    if p.is_zero() {
        return;
    }
    match v.get_mut(&k) {
        Some(q) => {
            *q = &*q + &p;
            if q.is_zero() {
                v.remove(&k);
            }
        }
        None => {
            v.insert(k, p);
        }
    }
}

impl HomComplex {
    pub fn new(
        src: &MatrixFactorization,
        tgt: &MatrixFactorization,
        chi: &[i64],
    ) -> Result<HomComplex> {
        if src.w != tgt.w || src.c != tgt.c {
            return Err(Error::PotentialMismatch(
                "Hom complex needs equal potentials".into(),
            ));
        }
        if !crate::exactalg::same_ring(&src.ring, &tgt.ring) {
            return Err(Error::RingMismatch(
                "Hom complex of factorizations over different rings".into(),
            ));
        }
        let split = BaseSplit::new(&src.ring)?;
        let g = &src.ring.grading;
        let mut basis: [Vec<BasisElem>; 3] = Default::default();
        let mut index: [HashMap<(usize, usize, Mono), usize>; 3] = Default::default();
        for (slot, k) in [-1i64, 0, 1].into_iter().enumerate() {
            for h in 0..tgt.rank() {
                for gi in 0..src.rank() {
                    let (a, b) = (&tgt.gens[h], &src.gens[gi]);
                    let tor: Vec<i64> = a
                        .chi
                        .iter()
                        .zip(&b.chi)
                        .zip(chi)
                        .map(|((x, y), z)| x - y + z)
                        .collect();
                    for m in split.fibre_monomials(&tor, a.r - b.r + k) {
                        let weight = g.degree_of(&m.0[..g.nvars()]).w - a.w + b.w;
                        index[slot].insert((h, gi, m), basis[slot].len());
                        basis[slot].push(BasisElem {
                            h,
                            g: gi,
                            mono: m,
                            weight,
                        });
                    }
                }
            }
        }
        let mut hc = HomComplex {
            src: src.clone(),
            tgt: tgt.clone(),
            split,
            chi: chi.to_vec(),
            basis,
            index,
            d_in: vec![],
            d_out: vec![],
        };
        hc.d_in = (0..hc.basis[0].len())
            .map(|i| hc.d_basis(-1, i))
            .collect::<Result<_>>()?;
        hc.d_out = (0..hc.basis[1].len())
            .map(|i| hc.d_basis(0, i))
            .collect::<Result<_>>()?;
        Ok(hc)
    }

    fn sign(&self, k: i64) -> i64 {
        let g = &self.src.ring.grading;
        if g.parity(&self.chi, k) == 0 {
            1
        } else {
            -1
        }
    }

    fn slot(k: i64) -> Result<usize> {
        match k {
            -1 => Ok(0),
            0 => Ok(1),
            1 => Ok(2),
            _ => Err(Error::Unsupported(format!("Hom degree {k} is not stored"))),
        }
    }

    /// D of a basis element of C^k, as a vector over C^{k+1}.
    fn d_basis(&self, k: i64, i: usize) -> Result<SparseVec> {
        let b = &self.basis[Self::slot(k)?][i];
        let ring = &self.src.ring;
        let m = Poly::monomial(ring, b.mono, ring.field.one());
        let s = self.sign(k);
        let mut out = SparseVec::new();
        let ts = Self::slot(k + 1)?;
        let mut put = |h: usize, g: usize, p: &Poly| -> Result<()> {
            for (fm, c) in self.split.split(p)? {
                let j = *self.index[ts].get(&(h, g, fm)).ok_or_else(|| {
                    Error::Inhomogeneous("differential leaves the degree piece".into())
                })?;
                add_into(&mut out, j, c);
            }
            Ok(())
        };
        for h2 in 0..self.tgt.rank() {
            let e = &self.tgt.d[h2][b.h];
            if !e.is_zero() {
                put(h2, b.g, &(e * &m))?;
            }
        }
        for g2 in 0..self.src.rank() {
            let e = &self.src.d[b.g][g2];
            if !e.is_zero() {
                let p = &m * e;
                put(b.h, g2, &if s == 1 { -&p } else { p })?;
            }
        }
        Ok(out)
    }

    pub fn c(&self) -> i64 {
        self.src.c
    }

    /// Coordinates of a map `phi[h][g]` of degree k.
    pub fn to_vector(&self, k: i64, phi: &[Vec<Poly>]) -> Result<SparseVec> {
        let slot = Self::slot(k)?;
        let mut out = SparseVec::new();
        for (h, row) in phi.iter().enumerate() {
            for (g, p) in row.iter().enumerate() {
                for (fm, c) in self.split.split(p)? {
                    let j = *self.index[slot].get(&(h, g, fm)).ok_or_else(|| {
                        Error::Inhomogeneous(format!("entry ({h}, {g}) has the wrong degree"))
                    })?;
                    add_into(&mut out, j, c);
                }
            }
        }
        Ok(out)
    }

    /// The map with the given coordinates.
    pub fn to_matrix(&self, k: i64, v: &SparseVec) -> Result<Vec<Vec<Poly>>> {
        let slot = Self::slot(k)?;
        let ring = &self.src.ring;
        let mut out = vec![vec![Poly::zero(ring); self.src.rank()]; self.tgt.rank()];
        for (&j, c) in v {
            let b = &self.basis[slot][j];
            let m = Poly::monomial(ring, b.mono, ring.field.one());
            out[b.h][b.g] = &out[b.h][b.g] + &(&c.transport(ring)? * &m);
        }
        Ok(out)
    }

    /// `D phi = d_tgt phi - (-1)^|phi| phi d_src` on matrices.
    pub fn apply_d(&self, k: i64, phi: &[Vec<Poly>]) -> Vec<Vec<Poly>> {
        let ring = &self.src.ring;
        let a = mat_mul(ring, &self.tgt.d, phi);
        let b = mat_mul(ring, phi, &self.src.d);
        let s = self.sign(k);
        a.iter()
            .zip(&b)
            .map(|(ra, rb)| {
                ra.iter()
                    .zip(rb)
                    .map(|(x, y)| if s == 1 { x - y } else { x + y })
                    .collect()
            })
            .collect()
    }

    pub fn is_closed(&self, k: i64, phi: &[Vec<Poly>]) -> bool {
        self.apply_d(k, phi).iter().flatten().all(|p| p.is_zero())
    }

    /// Character action check and the induced action on basis elements of
    /// degree k: `sigma(mono E_{h,g}) = eps_h eps_g sigma(mono) E_{pi h, pi g}`.
    fn sigma_data(&self) -> Result<(&SigmaStructure, &SigmaStructure)> {
        let (Some(ss), Some(st)) = (&self.src.sigma, &self.tgt.sigma) else {
            return Err(Error::NotSymmetric(
                "Hom complex of objects without sigma-structures".into(),
            ));
        };
        let g = &self.src.ring.grading;
        let img: Vec<i64> = g
            .act_torus(&self.chi)
            .iter()
            .zip(&st.chi_shift)
            .zip(&ss.chi_shift)
            .map(|((a, b), c)| a + b - c)
            .collect();
        if img != self.chi {
            return Err(Error::NotSymmetric(
                "sigma does not preserve the torus character of the piece".into(),
            ));
        }
        Ok((ss, st))
    }

    pub fn sigma_vector(&self, k: i64, v: &SparseVec) -> Result<SparseVec> {
        let (ss, st) = self.sigma_data()?;
        let slot = Self::slot(k)?;
        let perm = &self.src.ring.grading.sigma.as_ref().expect("checked").perm;
        let mut out = SparseVec::new();
        for (&j, c) in v {
            let b = &self.basis[slot][j];
            let mut m = Mono::one();
            for (i, &p) in perm.iter().enumerate() {
                m.0[p] = b.mono.0[i];
            }
            let key = (st.perm[b.h], ss.perm[b.g], m);
            let t = *self.index[slot]
                .get(&key)
                .ok_or_else(|| Error::NotSymmetric("sigma leaves the basis".into()))?;
            let e = st.signs[b.h] * ss.signs[b.g];
            add_into(&mut out, t, if e == 1 { c.clone() } else { -c });
        }
        Ok(out)
    }

    /// S-monomials of exact weight `w`.
    fn s_monomials(&self, w: i64) -> Vec<Mono> {
        let mut out = Vec::new();
        if w < 0 {
            return out;
        }
        for_each_standard_monomial(&self.split.s_ring.grading, &[], w, &mut |m, wt| {
            if wt == w {
                out.push(*m);
            }
        });
        out
    }

    /// Coordinates (basis index, S-monomial) of the weight-w piece of C^k.
    fn dense_basis(&self, k: i64, w: i64) -> Result<Vec<(usize, Mono)>> {
        let slot = Self::slot(k)?;
        let mut out = Vec::new();
        for (j, b) in self.basis[slot].iter().enumerate() {
            for m in self.s_monomials(w - b.weight) {
                out.push((j, m));
            }
        }
        Ok(out)
    }

    /// Identity map (requires src = tgt in rank).
    pub fn identity(&self) -> Vec<Vec<Poly>> {
        let ring = &self.src.ring;
        (0..self.tgt.rank())
            .map(|h| {
                (0..self.src.rank())
                    .map(|g| {
                        if g == h {
                            Poly::one(ring)
                        } else {
                            Poly::zero(ring)
                        }
                    })
                    .collect()
            })
            .collect()
    }

    /// D of a random element of weight `w - c` in degree -1, with integer
    /// coefficients in [-3, 3].
    pub fn random_boundary<R: Rng>(&self, w: i64, rng: &mut R) -> Result<Vec<Vec<Poly>>> {
        let s = &self.split.s_ring;
        let mut v = SparseVec::new();
        for (j, m) in self.dense_basis(-1, w - self.c())? {
            let c = rng.random_range(-3i64..=3);
            add_into(&mut v, j, Poly::monomial(s, m, s.field.from_i64(c)));
        }
        let psi = self.to_matrix(-1, &v)?;
        Ok(self.apply_d(-1, &psi))
    }

    /// Solves for a cocycle of degree 0 and weight `w` whose rows `h` agree
    /// with the given targets modulo `ideal` (one target per source generator).
    pub fn lift(
        &self,
        w: i64,
        rows: &[(usize, Vec<Poly>)],
        ideal: &[Poly],
    ) -> Result<Vec<Vec<Poly>>> {
        let ring = &self.src.ring;
        let field = &ring.field;
        let unknowns = self.dense_basis(0, w)?;
        #[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
        enum Key {
            D(usize, Mono),
            Row(usize, usize, Mono),
        }
        let mut keys: BTreeMap<Key, usize> = BTreeMap::new();
        let key_id = |k: Key, keys: &mut BTreeMap<Key, usize>| {
            let n = keys.len();
            *keys.entry(k).or_insert(n)
        };
        let mut cols: Vec<Vec<(usize, FieldElem)>> = Vec::new();
        let constrained: HashMap<usize, usize> =
            rows.iter().enumerate().map(|(i, (h, _))| (*h, i)).collect();
        for (j, mu) in &unknowns {
            let mut col = Vec::new();
            for (&t, c) in &self.d_out[*j] {
                for (m, a) in c.terms() {
                    col.push((key_id(Key::D(t, m.mul(mu)), &mut keys), a.clone()));
                }
            }
            let b = &self.basis[1][*j];
            if constrained.contains_key(&b.h) {
                let mut full = b.mono;
                let smu = Poly::monomial(&self.split.s_ring, *mu, field.one()).transport(ring)?;
                full = full.mul(&smu.terms()[0].0);
                col.push((key_id(Key::Row(b.h, b.g, full), &mut keys), field.one()));
            }
            cols.push(col);
        }
        // Ideal multiples in each constrained entry.
        for (h, targets) in rows {
            if targets.len() != self.src.rank() {
                return Err(Error::ShapeMismatch(
                    "row target has the wrong length".into(),
                ));
            }
            for g in 0..self.src.rank() {
                let (a, b) = (&self.tgt.gens[*h], &self.src.gens[g]);
                let want = Degree {
                    torus: a
                        .chi
                        .iter()
                        .zip(&b.chi)
                        .zip(&self.chi)
                        .map(|((x, y), z)| x - y + z)
                        .collect(),
                    r: a.r - b.r,
                    w: a.w - b.w + w,
                };
                for f in ideal {
                    let Some(df) = f.degree() else { continue };
                    let dn = &want - &df;
                    for_each_standard_monomial(&ring.grading, &[], dn.w, &mut |m, _| {
                        if ring.grading.degree_of(&m.0[..ring.nvars()]) == dn {
                            let p = f.mul_term(m, &field.one());
                            let col = p
                                .terms()
                                .iter()
                                .map(|(mm, c)| (key_id(Key::Row(*h, g, *mm), &mut keys), -c))
                                .collect();
                            cols.push(col);
                        }
                    });
                }
            }
        }
        let mut rhs_entries = Vec::new();
        for (h, targets) in rows {
            for (g, t) in targets.iter().enumerate() {
                for (m, c) in t.terms() {
                    rhs_entries.push((key_id(Key::Row(*h, g, *m), &mut keys), c.clone()));
                }
            }
        }
        let nrows = keys.len();
        let mut a = Matrix::zero(field, nrows, cols.len());
        for (j, col) in cols.iter().enumerate() {
            for (i, c) in col {
                let cur = a.get(*i, j).clone();
                a.set(*i, j, &cur + c);
            }
        }
        let mut rhs = vec![field.zero(); nrows];
        for (i, c) in rhs_entries {
            rhs[i] = &rhs[i] + &c;
        }
        let x = a.solve(&rhs).ok_or_else(|| {
            Error::Failed(format!("no cocycle of weight {w} with the given rows"))
        })?;
        let s = &self.split.s_ring;
        let mut v = SparseVec::new();
        for ((j, mu), c) in unknowns.iter().zip(&x) {
            if !c.is_zero() {
                add_into(&mut v, *j, Poly::monomial(s, *mu, c.clone()));
            }
        }
        let phi = self.to_matrix(0, &v)?;
        debug_assert!(self.is_closed(0, &phi));
        Ok(phi)
    }

    /// Cancels unit entries and returns the reduced complex computing H^0.
    pub fn reduce(&self) -> Result<ReducedComplex> {
        ReducedComplex::new(self)
    }
}

/// A homotopy-equivalent smaller complex for H^0 with the comparison maps.
#[derive(Clone, Debug)]
pub struct ReducedComplex {
    /// Surviving basis indices of C^{-1}, C^0, C^1 of the original complex.
    pub keep: [Vec<usize>; 3],
    a: BTreeMap<usize, SparseVec>,
    b: BTreeMap<usize, SparseVec>,
    iota: BTreeMap<usize, SparseVec>,
    proj: Vec<SparseVec>,
    weights: Vec<i64>,
    c: i64,
    s_ring: crate::exactalg::RingRef,
    torus_rank: usize,
}

fn unit_entry(col: &SparseVec) -> Option<(usize, FieldElem)> {
    col.iter().find_map(|(&i, p)| {
        if p.is_unit() {
            p.constant_value().map(|c| (i, c))
        } else {
            None
        }
    })
}

impl ReducedComplex {
    fn new(hc: &HomComplex) -> Result<ReducedComplex> {
        let n0 = hc.basis[1].len();
        let mut a: BTreeMap<usize, SparseVec> = hc.d_in.iter().cloned().enumerate().collect();
        let mut b: BTreeMap<usize, SparseVec> = hc.d_out.iter().cloned().enumerate().collect();
        let s = &hc.split.s_ring;
        let mut iota: BTreeMap<usize, SparseVec> = (0..n0)
            .map(|i| (i, SparseVec::from([(i, Poly::one(s))])))
            .collect();
        let mut proj: Vec<SparseVec> = (0..n0)
            .map(|i| SparseVec::from([(i, Poly::one(s))]))
            .collect();
        let mut alive1: std::collections::BTreeSet<usize> = (0..hc.basis[2].len()).collect();
        loop {
            // Pivot in A: column j, row i.
            let pa = a
                .iter()
                .filter_map(|(&j, col)| unit_entry(col).map(|(i, u)| (col.len(), j, i, u)))
                .min_by_key(|t| (t.0, t.1));
            if let Some((_, j, i, u)) = pa {
                let piv = a.remove(&j).unwrap();
                let uinv = u.inv()?;
                let elim = |v: &mut SparseVec| {
                    if let Some(f) = v.get(&i).cloned() {
                        let f = f.scale(&uinv);
                        for (&r, p) in &piv {
                            add_into(v, r, -&(&f * p));
                        }
                        v.remove(&i);
                    }
                };
                for col in a.values_mut() {
                    elim(col);
                }
                for v in proj.iter_mut() {
                    elim(v);
                }
                b.remove(&i);
                iota.remove(&i);
                continue;
            }
            // Pivot in B: column i, row l.
            let pb = b
                .iter()
                .filter_map(|(&i, col)| unit_entry(col).map(|(l, u)| (col.len(), i, l, u)))
                .min_by_key(|t| (t.0, t.1));
            let Some((_, i, l, u)) = pb else { break };
            let piv = b.remove(&i).unwrap();
            let uinv = u.inv()?;
            let iota_i = iota.remove(&i).unwrap();
            let keys: Vec<usize> = b.keys().copied().collect();
            for k in keys {
                let col = b.get_mut(&k).unwrap();
                let Some(beta) = col.get(&l).cloned() else {
                    continue;
                };
                let f = beta.scale(&uinv);
                for (&r, p) in &piv {
                    add_into(col, r, -&(&f * p));
                }
                debug_assert!(!col.contains_key(&l));
                let io = iota.get_mut(&k).unwrap();
                for (&r, p) in &iota_i {
                    add_into(io, r, -&(&f * p));
                }
            }
            alive1.remove(&l);
            for col in a.values_mut() {
                col.remove(&i);
            }
            for v in proj.iter_mut() {
                v.remove(&i);
            }
        }
        let keep = [
            a.keys().copied().collect(),
            b.keys().copied().collect(),
            alive1.into_iter().collect(),
        ];
        let weights = hc.basis[1].iter().map(|e| e.weight).collect();
        Ok(ReducedComplex {
            keep,
            a,
            b,
            iota,
            proj,
            weights,
            c: hc.c(),
            s_ring: s.clone(),
            torus_rank: hc.src.ring.grading.torus_rank,
        })
    }

    fn deg(&self, w: i64) -> Degree {
        Degree {
            torus: vec![0; self.torus_rank],
            r: 0,
            w,
        }
    }

    /// Element degrees of the surviving C^0 basis.
    pub fn degrees(&self) -> Vec<Degree> {
        self.keep[1]
            .iter()
            .map(|&i| self.deg(self.weights[i]))
            .collect()
    }

    fn dense(&self, v: &SparseVec) -> Vec<Poly> {
        self.keep[1]
            .iter()
            .map(|i| {
                v.get(i)
                    .cloned()
                    .unwrap_or_else(|| Poly::zero(&self.s_ring))
            })
            .collect()
    }

    /// Columns of the incoming differential over the surviving basis.
    pub fn image_columns(&self) -> Vec<Vec<Poly>> {
        self.a.values().map(|c| self.dense(c)).collect()
    }

    /// Presentation of H^0 over S.
    pub fn cohomology(&self, hc: &HomComplex) -> Result<SubquotientPresentation> {
        let deg0 = self.degrees();
        let deg1: Vec<Degree> = self.keep[2]
            .iter()
            .map(|&l| self.deg(hc.basis[2][l].weight))
            .collect();
        let degm: Vec<Degree> = self.keep[0]
            .iter()
            .map(|&j| self.deg(hc.basis[0][j].weight))
            .collect();
        let pos1: HashMap<usize, usize> = self.keep[2]
            .iter()
            .enumerate()
            .map(|(p, &l)| (l, p))
            .collect();
        let z = Poly::zero(&self.s_ring);
        let mut be = vec![vec![z.clone(); deg0.len()]; deg1.len()];
        for (cix, i) in self.keep[1].iter().enumerate() {
            for (l, p) in &self.b[i] {
                be[pos1[l]][cix] = p.clone();
            }
        }
        let ae: Vec<Vec<Poly>> = {
            let cols = self.image_columns();
            (0..deg0.len())
                .map(|r| cols.iter().map(|c| c[r].clone()).collect())
                .collect()
        };
        let shift = self.deg(self.c);
        let bm = GradedMatrix::new(&self.s_ring, deg1, deg0.clone(), shift.clone(), be)?;
        let am = GradedMatrix::new(&self.s_ring, deg0, degm, shift, ae)?;
        subquotient(&bm, &am, &BaseRing::polynomial(&self.s_ring))
    }

    /// Class of a cocycle of the original complex, over the surviving basis.
    pub fn project(&self, v: &SparseVec) -> Vec<Poly> {
        let mut out = SparseVec::new();
        for (&o, c) in v {
            for (&k, p) in &self.proj[o] {
                add_into(&mut out, k, c * p);
            }
        }
        self.dense(&out)
    }

    /// Cocycle of the original complex representing a surviving vector.
    pub fn include(&self, v: &[Poly]) -> SparseVec {
        let mut out = SparseVec::new();
        for (x, &k) in v.iter().zip(&self.keep[1]) {
            if x.is_zero() {
                continue;
            }
            for (&o, p) in &self.iota[&k] {
                add_into(&mut out, o, x * p);
            }
        }
        out
    }

    /// Gröbner basis of the image of the incoming differential.
    pub fn image_gb(&self) -> Result<GroebnerBasis> {
        let sg = SubmoduleGens::new(
            &self.s_ring,
            self.keep[1].len().max(1),
            self.image_columns(),
        )
        .with_degrees(self.degrees());
        buchberger(&sg, &MonomialOrder::default())
    }

    /// Presentation over S of the span of the given classes.
    pub fn span(
        &self,
        elems: Vec<(String, Vec<Poly>, Degree)>,
        prune: bool,
    ) -> Result<SubquotientPresentation> {
        present_span(
            &BaseRing::polynomial(&self.s_ring),
            &self.degrees(),
            elems,
            &self.image_columns(),
            prune,
        )
    }
}
