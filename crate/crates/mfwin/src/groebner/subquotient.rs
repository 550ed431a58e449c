//! Presentations of ker A / im B over polynomial and quotient rings.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::gb::{buchberger, GroebnerBasis, SubmoduleGens};
use super::hilbert::{graded_dims, piece_dim, DEFAULT_DEGREE_CAP};
use super::order::MonomialOrder;
use super::syz::{element_degree, syzygies_with};
use crate::error::{Error, Result};
use crate::exactalg::{same_ring, Degree, FieldElem, Mono, Poly, RingRef, TermJson};

/// A polynomial ring or its quotient by an ideal.
#[derive(Clone, Debug)]
pub struct BaseRing {
    pub ring: RingRef,
    pub ideal: Vec<Poly>,
}

impl BaseRing {
    pub fn polynomial(ring: &RingRef) -> BaseRing {
        BaseRing {
            ring: ring.clone(),
            ideal: Vec::new(),
        }
    }

    pub fn quotient(ring: &RingRef, ideal: Vec<Poly>) -> BaseRing {
        BaseRing {
            ring: ring.clone(),
            ideal,
        }
    }

    pub fn is_quotient(&self) -> bool {
        !self.ideal.is_empty()
    }

    /// Gröbner basis of the ideal (empty basis for the polynomial ring).
    pub fn ideal_gb(&self) -> Result<GroebnerBasis> {
        buchberger(
            &SubmoduleGens::ideal(&self.ring, self.ideal.clone()),
            &MonomialOrder::default(),
        )
    }

    pub fn describe(&self) -> String {
        if self.ideal.is_empty() {
            format!("k[{}]", self.ring.grading.var_names().join(","))
        } else {
            let gens: Vec<String> = self.ideal.iter().map(|p| p.to_string()).collect();
            format!(
                "k[{}]/({})",
                self.ring.grading.var_names().join(","),
                gens.join(", ")
            )
        }
    }
}

/// Matrix of polynomials with graded source and target. Column j is the
/// image of the j-th source generator; homogeneity means
/// `deg(a_ij) + tgt_deg[i] = src_deg[j] + shift` for every nonzero entry.
#[derive(Clone, Debug)]
pub struct GradedMatrix {
    pub ring: RingRef,
    pub tgt_deg: Vec<Degree>,
    pub src_deg: Vec<Degree>,
    pub shift: Degree,
    /// Row-major: `entries[i][j]`.
    pub entries: Vec<Vec<Poly>>,
}

impl GradedMatrix {
    pub fn new(
        ring: &RingRef,
        tgt_deg: Vec<Degree>,
        src_deg: Vec<Degree>,
        shift: Degree,
        entries: Vec<Vec<Poly>>,
    ) -> Result<GradedMatrix> {
        let m = GradedMatrix {
            ring: ring.clone(),
            tgt_deg,
            src_deg,
            shift,
            entries,
        };
        m.check_shape()?;
        Ok(m)
    }

    pub fn zero(
        ring: &RingRef,
        tgt_deg: Vec<Degree>,
        src_deg: Vec<Degree>,
        shift: Degree,
    ) -> GradedMatrix {
        let entries = vec![vec![Poly::zero(ring); src_deg.len()]; tgt_deg.len()];
        GradedMatrix {
            ring: ring.clone(),
            tgt_deg,
            src_deg,
            shift,
            entries,
        }
    }

    pub fn rows(&self) -> usize {
        self.tgt_deg.len()
    }

    pub fn cols(&self) -> usize {
        self.src_deg.len()
    }

    fn check_shape(&self) -> Result<()> {
        if self.entries.len() != self.rows() || self.entries.iter().any(|r| r.len() != self.cols())
        {
            return Err(Error::ShapeMismatch(format!(
                "matrix entries do not match {}x{} degree data",
                self.rows(),
                self.cols()
            )));
        }
        for r in &self.entries {
            for p in r {
                if !same_ring(p.ring(), &self.ring) {
                    return Err(Error::RingMismatch("matrix entry from another ring".into()));
                }
            }
        }
        Ok(())
    }

    /// Offending entries `(row, col)` for the homogeneity rule.
    pub fn homogeneity_violations(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for (i, row) in self.entries.iter().enumerate() {
            for (j, p) in row.iter().enumerate() {
                let expect = &(&self.src_deg[j] + &self.shift) - &self.tgt_deg[i];
                if !p.is_homogeneous_of(&expect) {
                    out.push((i, j));
                }
            }
        }
        out
    }

    pub fn column(&self, j: usize) -> Vec<Poly> {
        self.entries.iter().map(|r| r[j].clone()).collect()
    }

    pub fn columns(&self) -> Vec<Vec<Poly>> {
        (0..self.cols()).map(|j| self.column(j)).collect()
    }

    pub fn mul(&self, o: &GradedMatrix) -> Result<GradedMatrix> {
        if self.cols() != o.rows() {
            return Err(Error::ShapeMismatch(
                "matrix product of incompatible shapes".into(),
            ));
        }
        let mut out = GradedMatrix::zero(
            &self.ring,
            self.tgt_deg.clone(),
            o.src_deg.clone(),
            &self.shift + &o.shift,
        );
        for i in 0..self.rows() {
            for k in 0..self.cols() {
                let a = &self.entries[i][k];
                if a.is_zero() {
                    continue;
                }
                for j in 0..o.cols() {
                    let b = &o.entries[k][j];
                    if !b.is_zero() {
                        out.entries[i][j] = &out.entries[i][j] + &(a * b);
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn apply(&self, v: &[Poly]) -> Vec<Poly> {
        self.entries
            .iter()
            .map(|row| {
                let mut acc = Poly::zero(&self.ring);
                for (a, x) in row.iter().zip(v) {
                    if !a.is_zero() && !x.is_zero() {
                        acc = &acc + &(a * x);
                    }
                }
                acc
            })
            .collect()
    }
}

/// Generators-and-relations presentation of a subquotient module.
#[derive(Clone, Debug)]
pub struct SubquotientPresentation {
    pub base: BaseRing,
    pub labels: Vec<String>,
    /// Element degrees of the generators.
    pub gen_degrees: Vec<Degree>,
    /// Representatives in the ambient free module.
    pub generators: Vec<Vec<Poly>>,
    /// Each relation has one coefficient per generator, reduced modulo the ideal.
    pub relations: Vec<Vec<Poly>>,
}

impl SubquotientPresentation {
    pub fn is_zero(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn num_generators(&self) -> usize {
        self.generators.len()
    }

    /// Gröbner basis of the relation module plus the ideal times the free module.
    pub fn relation_gb(&self) -> Result<Option<GroebnerBasis>> {
        if self.generators.is_empty() {
            return Ok(None);
        }
        let sg = SubmoduleGens::new(
            &self.base.ring,
            self.generators.len(),
            self.relations.clone(),
        )
        .with_quotient(self.base.ideal.clone())
        .with_degrees(self.gen_degrees.clone());
        Ok(Some(buchberger(&sg, &MonomialOrder::default())?))
    }

    /// Vector-space dimension of the piece of degree `d`.
    pub fn graded_piece_dim(&self, d: &Degree) -> Result<usize> {
        self.graded_piece_dim_capped(d, DEFAULT_DEGREE_CAP)
    }

    pub fn graded_piece_dim_capped(&self, d: &Degree, cap: i64) -> Result<usize> {
        match self.relation_gb()? {
            None => {
                if d.w.abs() > cap {
                    return Err(Error::DegreeCap {
                        cap,
                        requested: d.w,
                    });
                }
                Ok(0)
            }
            Some(gb) => piece_dim(&gb, &self.gen_degrees, d, cap),
        }
    }

    /// All nonzero graded dimensions up to auxiliary weight `wmax`.
    pub fn graded_dims(&self, wmax: i64) -> Result<BTreeMap<Degree, usize>> {
        match self.relation_gb()? {
            None => Ok(BTreeMap::new()),
            Some(gb) => graded_dims(&gb, &self.gen_degrees, wmax, DEFAULT_DEGREE_CAP),
        }
    }

    /// The submodule spanned by the relations, as generators over the base ring.
    pub fn relation_module(&self) -> SubmoduleGens {
        SubmoduleGens::new(
            &self.base.ring,
            self.generators.len().max(1),
            self.relations.clone(),
        )
        .with_quotient(self.base.ideal.clone())
        .with_degrees(self.gen_degrees.clone())
    }

    pub fn to_json(&self) -> PresentationJson {
        PresentationJson {
            base: self.base.describe(),
            generators: self
                .labels
                .iter()
                .zip(&self.gen_degrees)
                .map(|(l, d)| GeneratorJson {
                    label: l.clone(),
                    degree: d.clone(),
                })
                .collect(),
            relations: self
                .relations
                .iter()
                .map(|r| r.iter().map(|p| p.to_string()).collect())
                .collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GeneratorJson {
    pub label: String,
    pub degree: Degree,
}

/// Human-oriented serialization of a presentation.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PresentationJson {
    pub base: String,
    pub generators: Vec<GeneratorJson>,
    pub relations: Vec<Vec<String>>,
}

/// Sparse row echelon over a field, keyed by (position, monomial).
#[derive(Default)]
pub(crate) struct Echelon {
    rows: BTreeMap<(usize, Mono), BTreeMap<(usize, Mono), FieldElem>>,
}

impl Echelon {
    /// Inserts the vector and returns true if it was independent.
    pub fn insert(&mut self, v: BTreeMap<(usize, Mono), FieldElem>) -> bool {
        let mut v = v;
        loop {
            let Some((key, c)) = v.iter().next().map(|(k, c)| (*k, c.clone())) else {
                return false;
            };
            match self.rows.get(&key) {
                Some(row) => {
                    for (k, x) in row {
                        let nv = v.get(k).cloned().unwrap_or_else(|| x.field().zero());
                        let nv = &nv - &(&c * x);
                        if nv.is_zero() {
                            v.remove(k);
                        } else {
                            v.insert(*k, nv);
                        }
                    }
                }
                None => {
                    let inv = c.inv().expect("nonzero");
                    for x in v.values_mut() {
                        *x = &*x * &inv;
                    }
                    self.rows.insert(key, v);
                    return true;
                }
            }
        }
    }
}

pub(crate) fn to_sparse(v: &[Poly]) -> BTreeMap<(usize, Mono), FieldElem> {
    let mut out = BTreeMap::new();
    for (i, p) in v.iter().enumerate() {
        for (m, c) in p.terms() {
            out.insert((i, *m), c.clone());
        }
    }
    out
}

fn wkey(d: &Degree) -> (i64, i64, Vec<i64>) {
    (d.w, d.r, d.torus.clone())
}

/// Selects a minimal generating subset of `cands` modulo the submodule
/// `base` (generators, ideal and basis degrees as in `base`), processing
/// candidates in increasing degree. All inputs must be homogeneous.
pub fn prune_generators(
    base: &SubmoduleGens,
    cands: Vec<(Vec<Poly>, Degree)>,
) -> Result<Vec<(Vec<Poly>, Degree)>> {
    let mut cands: Vec<(usize, Vec<Poly>, Degree)> = cands
        .into_iter()
        .enumerate()
        .map(|(i, (v, d))| (i, v, d))
        .collect();
    cands.sort_by(|a, b| wkey(&a.2).cmp(&wkey(&b.2)).then(a.0.cmp(&b.0)));
    let mut kept: Vec<(Vec<Poly>, Degree)> = Vec::new();
    let mut idx = 0;
    while idx < cands.len() {
        let w = cands[idx].2.w;
        let mut end = idx;
        while end < cands.len() && cands[end].2.w == w {
            end += 1;
        }
        let mut sg = base.clone();
        sg.gens.extend(kept.iter().map(|(v, _)| v.clone()));
        let gb = buchberger(&sg, &MonomialOrder::default())?;
        let mut ech = Echelon::default();
        for (_, v, d) in &cands[idx..end] {
            let nf = gb.normal_form(v)?;
            if nf.iter().all(|p| p.is_zero()) {
                continue;
            }
            if ech.insert(to_sparse(&nf)) {
                kept.push((v.clone(), d.clone()));
            }
        }
        idx = end;
    }
    Ok(kept)
}

/// Removes generators that appear with a unit coefficient in some relation.
pub fn eliminate_units(
    gens: &mut Vec<Vec<Poly>>,
    degs: &mut Vec<Degree>,
    labels: &mut Vec<String>,
    rels: &mut Vec<Vec<Poly>>,
) {
    loop {
        let hit = rels
            .iter()
            .enumerate()
            .find_map(|(ri, r)| r.iter().position(|p| p.is_unit()).map(|j| (ri, j)));
        let Some((ri, j)) = hit else { return };
        let unit_rel = rels.remove(ri);
        let c = unit_rel[j].constant_value().unwrap();
        let cinv = c.inv().expect("unit");
        for r in rels.iter_mut() {
            if r[j].is_zero() {
                continue;
            }
            let f = r[j].scale(&cinv);
            for (k, x) in unit_rel.iter().enumerate() {
                if !x.is_zero() {
                    r[k] = &r[k] - &(&f * x);
                }
            }
        }
        for r in rels.iter_mut() {
            r.remove(j);
        }
        rels.retain(|r| r.iter().any(|p| !p.is_zero()));
        gens.remove(j);
        degs.remove(j);
        labels.remove(j);
    }
}

/// Presentation of ker(ker_of) / im(im_of) over `base`.
pub fn subquotient(
    ker_of: &GradedMatrix,
    im_of: &GradedMatrix,
    base: &BaseRing,
) -> Result<SubquotientPresentation> {
    subquotient_labeled(ker_of, im_of, base, None)
}

pub fn subquotient_labeled(
    ker_of: &GradedMatrix,
    im_of: &GradedMatrix,
    base: &BaseRing,
    ambient_labels: Option<&[String]>,
) -> Result<SubquotientPresentation> {
    let n = ker_of.cols();
    if im_of.rows() != n {
        return Err(Error::ShapeMismatch(format!(
            "kernel map has {} columns but image map has {} rows",
            n,
            im_of.rows()
        )));
    }
    if ker_of.src_deg != im_of.tgt_deg {
        return Err(Error::ShapeMismatch("middle degrees disagree".into()));
    }
    for m in [ker_of, im_of] {
        if let Some((i, j)) = m.homogeneity_violations().first() {
            return Err(Error::Inhomogeneous(format!(
                "entry ({i}, {j}) = {}",
                m.entries[*i][*j]
            )));
        }
    }
    let ring = &base.ring;
    let ideal_gb = base.ideal_gb()?;
    let comp = ker_of.mul(im_of)?;
    for row in &comp.entries {
        for p in row {
            if !ideal_gb.reduce_poly(p)?.is_zero() {
                return Err(Error::NotClosed(
                    "composite of the two maps is nonzero".into(),
                ));
            }
        }
    }
    let mid_deg = ker_of.src_deg.clone();
    let tz = Degree::zero(ring.grading.torus_rank);
    // Kernel generators.
    let kernel: Vec<(Vec<Poly>, Degree)> = if ker_of.rows() == 0 {
        (0..n)
            .map(|i| {
                let mut v = vec![Poly::zero(ring); n];
                v[i] = Poly::one(ring);
                (v, mid_deg[i].clone())
            })
            .collect()
    } else {
        let sg = SubmoduleGens::new(ring, ker_of.rows(), ker_of.columns())
            .with_quotient(base.ideal.clone())
            .with_degrees(ker_of.tgt_deg.iter().map(|d| d - &ker_of.shift).collect());
        let syz = syzygies_with(&sg, &MonomialOrder::default())?;
        syz.gens
            .into_iter()
            .filter(|v| v.iter().any(|p| !p.is_zero()))
            .map(|v| {
                let d = element_degree(&v, &mid_deg).unwrap_or_else(|| tz.clone());
                (v, d)
            })
            .collect()
    };
    let kernel: Vec<(String, Vec<Poly>, Degree)> = kernel
        .into_iter()
        .map(|(v, d)| (label_for(&v, ambient_labels).unwrap_or_default(), v, d))
        .collect();
    let mut p = present_span(base, &mid_deg, kernel, &im_of.columns(), true)?;
    for (i, l) in p.labels.iter_mut().enumerate() {
        if l.is_empty() {
            *l = format!("g{i}");
        }
    }
    Ok(p)
}

/// Presentation of the submodule spanned by `elements` inside F / im(cols),
/// where F is free with basis degrees `mid_deg` over `base`. With `prune`,
/// redundant elements are dropped first (smallest degrees kept).
pub fn present_span(
    base: &BaseRing,
    mid_deg: &[Degree],
    elements: Vec<(String, Vec<Poly>, Degree)>,
    image_cols: &[Vec<Poly>],
    prune: bool,
) -> Result<SubquotientPresentation> {
    let ring = &base.ring;
    let n = mid_deg.len();
    let ideal_gb = base.ideal_gb()?;
    let empty = SubquotientPresentation {
        base: base.clone(),
        labels: vec![],
        gen_degrees: vec![],
        generators: vec![],
        relations: vec![],
    };
    if n == 0 {
        return Ok(empty);
    }
    let kept: Vec<(String, Vec<Poly>, Degree)> = if prune {
        let base_sub = SubmoduleGens::new(ring, n, image_cols.to_vec())
            .with_quotient(base.ideal.clone())
            .with_degrees(mid_deg.to_vec());
        let by_vec: Vec<(Vec<Poly>, Degree)> = elements
            .iter()
            .map(|(_, v, d)| (v.clone(), d.clone()))
            .collect();
        let kept = prune_generators(&base_sub, by_vec)?;
        kept.into_iter()
            .map(|(v, d)| {
                let l = elements
                    .iter()
                    .find(|(_, w, _)| *w == v)
                    .map(|e| e.0.clone())
                    .unwrap_or_default();
                (l, v, d)
            })
            .collect()
    } else {
        elements
    };
    let mut generators: Vec<Vec<Poly>> = kept
        .iter()
        .map(|(_, v, _)| reduce_vec(&ideal_gb, v))
        .collect::<Result<_>>()?;
    let mut gen_degrees: Vec<Degree> = kept.iter().map(|(_, _, d)| d.clone()).collect();
    let mut labels: Vec<String> = kept.iter().map(|(l, _, _)| l.clone()).collect();
    if generators.is_empty() {
        return Ok(empty);
    }
    // Relations: syzygies of [K | B] over the base ring, projected to K.
    let k = generators.len();
    let mut cols = generators.clone();
    cols.extend(image_cols.iter().cloned());
    let sg = SubmoduleGens::new(ring, n, cols)
        .with_quotient(base.ideal.clone())
        .with_degrees(mid_deg.to_vec());
    let syz = syzygies_with(&sg, &MonomialOrder::default())?;
    let projected: Vec<Vec<Poly>> = syz
        .gens
        .iter()
        .map(|v| reduce_vec(&ideal_gb, &v[..k]))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .filter(|v| v.iter().any(|p| !p.is_zero()))
        .collect();
    let mut relations = minimal_relations(ring, &gen_degrees, &base.ideal, &ideal_gb, projected)?;
    if prune {
        eliminate_units(
            &mut generators,
            &mut gen_degrees,
            &mut labels,
            &mut relations,
        );
    }
    Ok(SubquotientPresentation {
        base: base.clone(),
        labels,
        gen_degrees,
        generators,
        relations,
    })
}

fn label_for(v: &[Poly], ambient: Option<&[String]>) -> Option<String> {
    let names = ambient?;
    let nz: Vec<usize> = (0..v.len()).filter(|&i| !v[i].is_zero()).collect();
    if nz.len() == 1 && v[nz[0]].is_unit() {
        return Some(names[nz[0]].clone());
    }
    None
}

pub(crate) fn reduce_vec(gb: &GroebnerBasis, v: &[Poly]) -> Result<Vec<Poly>> {
    v.iter().map(|p| gb.reduce_poly(p)).collect()
}

/// Minimal homogeneous relation set: reduced Gröbner basis elements of the
/// relation module, pruned to a minimal generating subset, reduced modulo I.
pub(crate) fn minimal_relations(
    ring: &RingRef,
    gen_degrees: &[Degree],
    ideal: &[Poly],
    ideal_gb: &GroebnerBasis,
    rels: Vec<Vec<Poly>>,
) -> Result<Vec<Vec<Poly>>> {
    if rels.is_empty() {
        return Ok(rels);
    }
    let k = gen_degrees.len();
    let sg = SubmoduleGens::new(ring, k, rels)
        .with_quotient(ideal.to_vec())
        .with_degrees(gen_degrees.to_vec());
    let gb = buchberger(&sg, &MonomialOrder::default())?;
    let tz = Degree::zero(ring.grading.torus_rank);
    let cands: Vec<(Vec<Poly>, Degree)> = gb
        .elements()
        .into_iter()
        .map(|v| {
            let d = element_degree(&v, gen_degrees).unwrap_or_else(|| tz.clone());
            (v, d)
        })
        .collect();
    let base = SubmoduleGens::new(ring, k, vec![])
        .with_quotient(ideal.to_vec())
        .with_degrees(gen_degrees.to_vec());
    let kept = prune_generators(&base, cands)?;
    kept.into_iter()
        .map(|(v, _)| reduce_vec(ideal_gb, &v))
        .collect()
}

impl fmt::Display for SubquotientPresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        writeln!(f, "generators over {}:", self.base.describe())?;
        for (l, d) in self.labels.iter().zip(&self.gen_degrees) {
            writeln!(f, "  {l} in degree {d}")?;
        }
        writeln!(f, "relations:")?;
        for r in &self.relations {
            let parts: Vec<String> = r.iter().map(|p| p.to_string()).collect();
            writeln!(f, "  ({})", parts.join(", "))?;
        }
        Ok(())
    }
}

/// JSON array-of-arrays matrix of term lists.
pub type MatrixJson = Vec<Vec<Vec<TermJson>>>;
