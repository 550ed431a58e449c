//! Cohomology of dg modules, degree-zero invariant parts over the base ring and
//! multiplicative structure of endomorphism algebras.

mod algebra;
mod complex;
mod local;
mod report;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactalg::{Degree, GradingSpec, Mono, Poly, Ring, RingRef, VarSpec};
use crate::groebner::{buchberger, MonomialOrder};
use crate::groebner::{
    present_span, subquotient_labeled, BaseRing, SubmoduleGens, SubquotientPresentation,
};
use crate::mf::DgModule;

pub use algebra::{
    algebra_structure, check_presentation, AlgebraPresentation, EndAlgebra, Mismatch, ProductEntry,
    Verdict, DEFAULT_CAP,
};
pub use complex::{BasisElem, HomComplex, ReducedComplex};
pub use local::{
    base_specs, corank2_end_algebra, corank2_target, corank2_thetas, h_rows, so2_end_algebra,
    Corank2Thetas,
};
pub use report::{corank2_report, Check, Corank2Report};

/// One parity half of the cohomology of a dg module: `ker d / im d` restricted
/// to the generators of that parity.
#[derive(Clone, Debug)]
pub struct CohomologyModule {
    pub presentation: SubquotientPresentation,
    /// Generators of the dg module lying in this half, in order; representatives
    /// are vectors over these.
    pub ambient: Vec<usize>,
    pub ambient_labels: Vec<String>,
    pub ambient_degrees: Vec<Degree>,
    /// Columns of the incoming differential (its image).
    pub image: Vec<Vec<Poly>>,
    pub parity: i64,
}

/// Both halves of the 2-periodic cohomology.
#[derive(Clone, Debug)]
pub struct Cohomology {
    pub even: CohomologyModule,
    pub odd: CohomologyModule,
}

impl Cohomology {
    pub fn half(&self, parity: i64) -> &CohomologyModule {
        if parity.rem_euclid(2) == 0 {
            &self.even
        } else {
            &self.odd
        }
    }
}

/// Cohomology of a dg module, optionally over `U / restrict_to`.
pub fn dg_cohomology(m: &DgModule, restrict_to: Option<&[Poly]>) -> Result<Cohomology> {
    let base = match restrict_to {
        Some(i) => BaseRing::quotient(&m.ring, i.to_vec()),
        None => BaseRing::polynomial(&m.ring),
    };
    let gb = base.ideal_gb()?;
    for row in m.d_squared() {
        for p in row {
            if !gb.reduce_poly(&p)?.is_zero() {
                return Err(Error::NotClosed(
                    "d^2 does not vanish on the restriction".into(),
                ));
            }
        }
    }
    let (even, odd) = m.parity_split();
    let half = |src: &[usize], other: &[usize], parity: i64| -> Result<CohomologyModule> {
        let ker_of = m.block(other, src);
        let im_of = m.block(src, other);
        let labels: Vec<String> = src.iter().map(|&i| m.gens[i].label.clone()).collect();
        let presentation = subquotient_labeled(&ker_of, &im_of, &base, Some(&labels))?;
        Ok(CohomologyModule {
            presentation,
            ambient: src.to_vec(),
            ambient_labels: labels,
            ambient_degrees: src.iter().map(|&i| m.gens[i].elem_degree()).collect(),
            image: im_of.columns(),
            parity,
        })
    };
    Ok(Cohomology {
        even: half(&even, &odd, 0)?,
        odd: half(&odd, &even, 1)?,
    })
}

impl CohomologyModule {
    pub fn is_zero(&self) -> bool {
        self.presentation.is_zero()
    }

    /// Re-presents the module on explicitly chosen cocycles (vectors over the
    /// ambient generators), after checking that they are closed and generate.
    pub fn with_generators(
        &self,
        m: &DgModule,
        named: &[(&str, Vec<Poly>)],
    ) -> Result<CohomologyModule> {
        let base = &self.presentation.base;
        let gb = base.ideal_gb()?;
        let other: Vec<usize> = (0..m.rank())
            .filter(|i| !self.ambient.contains(i))
            .collect();
        let ker_of = m.block(&other, &self.ambient);
        let mut elems = Vec::new();
        for (name, v) in named {
            if v.len() != self.ambient.len() {
                return Err(Error::ShapeMismatch(format!(
                    "`{name}` has the wrong length"
                )));
            }
            for p in ker_of.apply(v) {
                if !gb.reduce_poly(&p)?.is_zero() {
                    return Err(Error::NotClosed(format!("`{name}` is not a cocycle")));
                }
            }
            let d = crate::groebner::element_degree(v, &self.ambient_degrees)
                .ok_or_else(|| Error::Inhomogeneous(format!("`{name}` is not homogeneous")))?;
            elems.push((name.to_string(), v.clone(), d));
        }
        let mut span = SubmoduleGens::new(&base.ring, self.ambient.len(), self.image.clone())
            .with_quotient(base.ideal.clone())
            .with_degrees(self.ambient_degrees.clone());
        span.gens.extend(elems.iter().map(|e| e.1.clone()));
        let sgb = buchberger(&span, &MonomialOrder::default())?;
        for g in &self.presentation.generators {
            if !sgb.contains(g)? {
                return Err(Error::Failed(
                    "chosen cocycles do not generate the cohomology".into(),
                ));
            }
        }
        let presentation = present_span(base, &self.ambient_degrees, elems, &self.image, false)?;
        Ok(CohomologyModule {
            presentation,
            ..self.clone()
        })
    }

    /// True when `v` is closed and zero in cohomology.
    pub fn is_exact(&self, v: &[Poly]) -> Result<bool> {
        let base = &self.presentation.base;
        let sg = SubmoduleGens::new(&base.ring, self.ambient.len(), self.image.clone())
            .with_quotient(base.ideal.clone())
            .with_degrees(self.ambient_degrees.clone());
        buchberger(&sg, &MonomialOrder::default())?.contains(v)
    }
}

/// Splitting of a ring into base variables (trivial torus character, zero
/// R-charge) and fibre variables.
#[derive(Clone, Debug)]
pub struct BaseSplit {
    pub ring: RingRef,
    /// Polynomial ring in the base variables.
    pub s_ring: RingRef,
    pub fibre_mask: Vec<bool>,
}

impl BaseSplit {
    pub fn new(ring: &RingRef) -> Result<BaseSplit> {
        let g = &ring.grading;
        let mut vars = Vec::new();
        let mut mask = Vec::new();
        for i in 0..g.nvars() {
            let base = g.is_base_var(i);
            mask.push(!base);
            if base {
                vars.push(g.vars[i].clone());
            } else if g.vars[i].r < 1 {
                return Err(Error::Unsupported(format!(
                    "fibre variable `{}` needs positive R-charge for finite degree pieces",
                    g.vars[i].name
                )));
            }
        }
        let s_grading = GradingSpec::new(
            if vars.is_empty() {
                Vec::<VarSpec>::new()
            } else {
                vars
            },
            vec![0; g.torus_rank],
            None,
        )?;
        Ok(BaseSplit {
            ring: ring.clone(),
            s_ring: Ring::new(ring.field, s_grading),
            fibre_mask: mask,
        })
    }

    /// Degree in S of an element of U-weight `w`.
    pub fn s_degree(&self, w: i64) -> Degree {
        Degree {
            torus: vec![0; self.ring.grading.torus_rank],
            r: 0,
            w,
        }
    }

    /// Fibre monomials with the given torus character and R-charge.
    pub fn fibre_monomials(&self, torus: &[i64], r: i64) -> Vec<Mono> {
        let g = &self.ring.grading;
        let fibre: Vec<usize> = (0..g.nvars()).filter(|&i| self.fibre_mask[i]).collect();
        let mut out = Vec::new();
        if r < 0 {
            return out;
        }
        let mut m = Mono::one();
        fn rec(
            g: &GradingSpec,
            fibre: &[usize],
            k: usize,
            left: i64,
            torus: &[i64],
            m: &mut Mono,
            out: &mut Vec<Mono>,
        ) {
            if k == fibre.len() {
                if left == 0 && g.degree_of(&m.0[..g.nvars()]).torus == torus {
                    out.push(*m);
                }
                return;
            }
            let v = fibre[k];
            let rv = g.vars[v].r;
            let mut e = 0;
            loop {
                if e * rv > left {
                    break;
                }
                m.0[v] = e as u16;
                rec(g, fibre, k + 1, left - e * rv, torus, m, out);
                e += 1;
            }
            m.0[v] = 0;
        }
        rec(g, &fibre, 0, r, torus, &mut m, &mut out);
        out.sort_by(|a, b| b.cmp_degrevlex(a));
        out
    }

    /// Splits `p` into (fibre monomial, coefficient in S).
    pub fn split(&self, p: &Poly) -> Result<Vec<(Mono, Poly)>> {
        p.split_by_mask(&self.fibre_mask)
            .into_iter()
            .map(|(m, c)| Ok((m, c.transport(&self.s_ring)?)))
            .collect()
    }
}

/// Piece of torus character zero and R-charge zero of a module given by a
/// presentation over U (or U / I), as a module over the base ring S.
pub fn invariant_degree_zero(c: &CohomologyModule) -> Result<SubquotientPresentation> {
    let t = vec![0; c.presentation.base.ring.grading.torus_rank];
    invariant_piece(&c.presentation, &t, 0)
}

/// Piece of torus character `chi` and R-charge `r` of the presented module,
/// as a module over S.
pub fn invariant_piece(
    p: &SubquotientPresentation,
    chi: &[i64],
    r: i64,
) -> Result<SubquotientPresentation> {
    let ring = &p.base.ring;
    let split = BaseSplit::new(ring)?;
    let s_base = BaseRing::polynomial(&split.s_ring);
    if p.is_zero() {
        return present_span(&s_base, &[], vec![], &[], true);
    }
    // Basis of the piece of F: (generator, fibre monomial).
    let mut basis: Vec<(usize, Mono)> = Vec::new();
    let mut degs = Vec::new();
    for (i, d) in p.gen_degrees.iter().enumerate() {
        let tor: Vec<i64> = chi.iter().zip(&d.torus).map(|(a, b)| a - b).collect();
        for m in split.fibre_monomials(&tor, r - d.r) {
            degs.push(split.s_degree(ring.grading.degree_of(&m.0[..ring.nvars()]).w + d.w));
            basis.push((i, m));
        }
    }
    let index = |i: usize, m: &Mono| basis.iter().position(|(j, n)| *j == i && n == m);
    let to_s = |v: &[Poly]| -> Result<Vec<Poly>> {
        let mut out = vec![Poly::zero(&split.s_ring); basis.len()];
        for (i, q) in v.iter().enumerate() {
            for (m, c) in split.split(q)? {
                let k = index(i, &m).ok_or_else(|| {
                    Error::Inhomogeneous("element leaves the degree piece".into())
                })?;
                out[k] = &out[k] + &c;
            }
        }
        Ok(out)
    };
    // U-generators of N = relations + I F, with their degrees.
    let k = p.gen_degrees.len();
    let mut ngens: Vec<Vec<Poly>> = p.relations.clone();
    for f in &p.base.ideal {
        for i in 0..k {
            let mut v = vec![Poly::zero(ring); k];
            v[i] = f.clone();
            ngens.push(v);
        }
    }
    let mut cols = Vec::new();
    for n in &ngens {
        let Some(e) = crate::groebner::element_degree(n, &p.gen_degrees) else {
            return Err(Error::Inhomogeneous("relation is not homogeneous".into()));
        };
        let tor: Vec<i64> = chi.iter().zip(&e.torus).map(|(a, b)| a - b).collect();
        for m in split.fibre_monomials(&tor, r - e.r) {
            let mp = Poly::monomial(ring, m, ring.field.one());
            let v: Vec<Poly> = n.iter().map(|q| q * &mp).collect();
            cols.push(to_s(&v)?);
        }
    }
    let elems: Vec<(String, Vec<Poly>, Degree)> = basis
        .iter()
        .enumerate()
        .map(|(b, (i, m))| {
            let mut v = vec![Poly::zero(&split.s_ring); basis.len()];
            v[b] = Poly::one(&split.s_ring);
            let mono = Poly::monomial(ring, *m, ring.field.one());
            let label = if m.is_one() {
                p.labels[*i].clone()
            } else {
                format!("{}*{}", mono, p.labels[*i])
            };
            (label, v, degs[b].clone())
        })
        .collect();
    present_span(&s_base, &degs, elems, &cols, true)
}

/// Tests whether two presentations over the same ring have equal relation
/// modules after permuting the generators of `b` by `perm` (generator i of
/// `a` corresponds to generator `perm[i]` of `b`), with optional sign flips.
pub fn same_relations_up_to(
    a: &SubquotientPresentation,
    b: &SubquotientPresentation,
    perm: &[usize],
    signs: &[i64],
) -> Result<bool> {
    if a.num_generators() != b.num_generators() || perm.len() != a.num_generators() {
        return Ok(false);
    }
    let ring = &a.base.ring;
    let mapped: Vec<Vec<Poly>> = b
        .relations
        .iter()
        .map(|r| {
            (0..perm.len())
                .map(|i| {
                    if signs[i] < 0 {
                        -&r[perm[i]]
                    } else {
                        r[perm[i]].clone()
                    }
                })
                .collect()
        })
        .collect();
    let mk = |rels: Vec<Vec<Poly>>| {
        buchberger(
            &SubmoduleGens::new(ring, perm.len(), rels).with_quotient(a.base.ideal.clone()),
            &MonomialOrder::default(),
        )
    };
    let ga = mk(a.relations.clone())?;
    let gb = mk(mapped.clone())?;
    for r in &mapped {
        if !ga.contains(r)? {
            return Ok(false);
        }
    }
    for r in &a.relations {
        if !gb.contains(r)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Relation module generated by explicit vectors, as a presentation on `k`
/// generators of the given degrees over `base`.
pub fn presentation_from_relations(
    base: &BaseRing,
    labels: &[&str],
    degrees: Vec<Degree>,
    relations: Vec<Vec<Poly>>,
) -> SubquotientPresentation {
    let ring = &base.ring;
    let k = labels.len();
    SubquotientPresentation {
        base: base.clone(),
        labels: labels.iter().map(|s| s.to_string()).collect(),
        gen_degrees: degrees,
        generators: (0..k)
            .map(|i| {
                (0..k)
                    .map(|j| {
                        if i == j {
                            Poly::one(ring)
                        } else {
                            Poly::zero(ring)
                        }
                    })
                    .collect()
            })
            .collect(),
        relations,
    }
}

/// Summary of a presentation for reports.
#[derive(Clone, Debug, Serialize)]
pub struct PresentationSummary {
    pub generators: Vec<(String, i64)>,
    pub relations: Vec<Vec<String>>,
}

pub fn summarize(p: &SubquotientPresentation) -> PresentationSummary {
    PresentationSummary {
        generators: p
            .labels
            .iter()
            .cloned()
            .zip(p.gen_degrees.iter().map(|d| d.w))
            .collect(),
        relations: p
            .relations
            .iter()
            .map(|r| r.iter().map(|x| x.to_string()).collect())
            .collect(),
    }
}

#[cfg(test)]
mod tests;
