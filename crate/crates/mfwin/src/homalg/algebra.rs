//! Multiplicative structure of H^0 End(K): products of chosen cocycles reduced
//! onto S-combinations of the unit and the generators, and comparison with a
//! target presentation up to a degree cap.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use super::complex::{HomComplex, ReducedComplex, SparseVec};
use crate::error::{Error, Result};
use crate::exactalg::{Degree, FieldElem, GradingSpec, Matrix, Mono, Poly, Ring, RingRef, VarSpec};
use crate::groebner::{
    buchberger, for_each_standard_monomial, hilbert::piece_dim, GroebnerBasis, MonomialOrder,
    SubmoduleGens, SubquotientPresentation,
};
use crate::mf::mat_mul;

/// Default degree cap for presentation checks.
pub const DEFAULT_CAP: i64 = 10;

/// One product of two generators, written in the algebra ring.
#[derive(Clone, Debug, Serialize)]
pub struct ProductEntry {
    pub left: String,
    pub right: String,
    pub value: String,
    #[serde(skip)]
    pub poly: Poly,
}

/// Commutative graded algebra over S generated by symbols of positive weight.
#[derive(Clone, Debug)]
pub struct AlgebraPresentation {
    /// Polynomial ring in the base variables followed by the generator symbols.
    pub ring: RingRef,
    pub base_vars: Vec<String>,
    pub generators: Vec<(String, i64)>,
    pub relations: Vec<Poly>,
    pub table: Vec<ProductEntry>,
    pub commutative: bool,
    /// Graded dimensions of the algebra the presentation is meant to describe,
    /// when computed independently of the relations.
    pub hilbert: Option<BTreeMap<i64, usize>>,
}

impl AlgebraPresentation {
    /// Builds a presentation from base variables, generator symbols and
    /// relation strings.
    pub fn from_strings(
        field: &crate::exactalg::Field,
        base: &[VarSpec],
        generators: &[(&str, i64)],
        relations: &[&str],
    ) -> Result<AlgebraPresentation> {
        let ring = algebra_ring(field, base, generators)?;
        let relations = relations
            .iter()
            .map(|s| Poly::parse(&ring, s))
            .collect::<Result<_>>()?;
        Ok(AlgebraPresentation {
            ring,
            base_vars: base.iter().map(|v| v.name.clone()).collect(),
            generators: generators
                .iter()
                .map(|(n, w)| (n.to_string(), *w))
                .collect(),
            relations,
            table: vec![],
            commutative: true,
            hilbert: None,
        })
    }

    fn gb(&self) -> Result<GroebnerBasis> {
        buchberger(
            &SubmoduleGens::ideal(&self.ring, self.relations.clone()),
            &MonomialOrder::default(),
        )
    }

    /// Dimensions of the presented algebra in weights 0..=cap.
    pub fn dims(&self, cap: i64) -> Result<BTreeMap<i64, usize>> {
        let gb = self.gb()?;
        let z = Degree::zero(self.ring.grading.torus_rank);
        (0..=cap)
            .map(|w| {
                Ok((
                    w,
                    piece_dim(&gb, std::slice::from_ref(&z), &Degree { w, ..z.clone() }, cap.max(w))?,
                ))
            })
            .collect()
    }

    pub fn relation_strings(&self) -> Vec<String> {
        self.relations.iter().map(|p| p.to_string()).collect()
    }
}

impl fmt::Display for AlgebraPresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let gens: Vec<String> = self
            .generators
            .iter()
            .map(|(n, w)| format!("{n} (weight {w})"))
            .collect();
        writeln!(
            f,
            "algebra over k[{}] on {}",
            self.base_vars.join(","),
            gens.join(", ")
        )?;
        for e in &self.table {
            writeln!(f, "  {} * {} = {}", e.left, e.right, e.value)?;
        }
        writeln!(f, "relations:")?;
        for r in &self.relations {
            writeln!(f, "  {r}")?;
        }
        Ok(())
    }
}

fn algebra_ring(
    field: &crate::exactalg::Field,
    base: &[VarSpec],
    generators: &[(&str, i64)],
) -> Result<RingRef> {
    let rank = base.first().map(|v| v.torus.len()).unwrap_or(1);
    let mut vars: Vec<VarSpec> = base
        .iter()
        .map(|v| VarSpec::new(&v.name, &vec![0; rank], 0, v.weight))
        .collect();
    for (n, w) in generators {
        if *w <= 0 {
            return Err(Error::Unsupported(format!(
                "generator `{n}` needs positive weight"
            )));
        }
        vars.push(VarSpec::new(n, &vec![0; rank], 0, *w));
    }
    Ok(Ring::new(
        *field,
        GradingSpec::new(vars, vec![0; rank], None)?,
    ))
}

/// Everything computed about the endomorphism algebra.
#[derive(Clone, Debug)]
pub struct EndAlgebra {
    pub presentation: AlgebraPresentation,
    /// H^0 of the Hom complex over S.
    pub cohomology: SubquotientPresentation,
    /// The sigma-invariant part, when the object carries a sigma-structure.
    pub invariant: Option<SubquotientPresentation>,
    /// Presentation over S of the span of the unit and the generators.
    pub span: SubquotientPresentation,
}

struct Ctx<'a> {
    hc: &'a HomComplex,
    red: ReducedComplex,
    gb: GroebnerBasis,
}

impl Ctx<'_> {
    fn class(&self, phi: &[Vec<Poly>]) -> Result<Vec<Poly>> {
        let v = self.hc.to_vector(0, phi)?;
        Ok(self.red.project(&v))
    }

    fn nf(&self, v: &[Poly]) -> Result<Vec<Poly>> {
        self.gb.normal_form(v)
    }
}

fn sparse_key(v: &[Poly]) -> BTreeMap<(usize, Mono), FieldElem> {
    let mut out = BTreeMap::new();
    for (i, p) in v.iter().enumerate() {
        for (m, c) in p.terms() {
            out.insert((i, *m), c.clone());
        }
    }
    out
}

/// Solves `target = sum x_k cands_k` over the field on normal forms.
fn solve_combination(cands: &[Vec<Poly>], target: &[Poly]) -> Option<Vec<FieldElem>> {
    let field = target.first().map(|p| p.ring().field)?;
    let mut keys: BTreeMap<(usize, Mono), usize> = BTreeMap::new();
    let sv: Vec<_> = cands.iter().map(|c| sparse_key(c)).collect();
    let tv = sparse_key(target);
    for k in sv.iter().flat_map(|s| s.keys()).chain(tv.keys()) {
        let n = keys.len();
        keys.entry(*k).or_insert(n);
    }
    let mut a = Matrix::zero(&field, keys.len(), cands.len());
    for (j, s) in sv.iter().enumerate() {
        for (k, c) in s {
            a.set(keys[k], j, c.clone());
        }
    }
    let mut b = vec![field.zero(); keys.len()];
    for (k, c) in &tv {
        b[keys[k]] = c.clone();
    }
    if keys.is_empty() {
        return Some(vec![field.zero(); cands.len()]);
    }
    a.solve(&b)
}

fn weight_of(hc: &HomComplex, phi: &[Vec<Poly>]) -> Result<Option<i64>> {
    let v: SparseVec = hc.to_vector(0, phi)?;
    let mut w = None;
    for (j, c) in &v {
        for (m, _) in c.terms() {
            let x = hc
                .split
                .s_ring
                .grading
                .degree_of(&m.0[..hc.split.s_ring.nvars()])
                .w
                + hc.basis[1][*j].weight;
            match w {
                None => w = Some(x),
                Some(y) if y != x => {
                    return Err(Error::Inhomogeneous("cocycle mixes weights".into()))
                }
                _ => {}
            }
        }
    }
    Ok(w)
}

/// Multiplication table and presentation of the subalgebra of H^0 End(K)
/// generated over S by the unit and the given cocycles. Dimensions of the
/// whole algebra (its sigma-invariant part when K has a sigma-structure) are
/// computed up to `cap` for comparison.
pub fn algebra_structure(
    hc: &HomComplex,
    generators: &[(&str, Vec<Vec<Poly>>)],
    cap: i64,
) -> Result<EndAlgebra> {
    if hc.src.rank() != hc.tgt.rank()
        || hc.src.gens != hc.tgt.gens
        || hc.chi.iter().any(|&c| c != 0)
    {
        return Err(Error::Unsupported(
            "algebra structure needs an endomorphism complex in character 0".into(),
        ));
    }
    let red = hc.reduce()?;
    let gb = red.image_gb()?;
    let ctx = Ctx { hc, red, gb };
    let s_ring = hc.split.s_ring.clone();
    let field = s_ring.field;
    let mut weights = Vec::new();
    for (name, phi) in generators {
        if !hc.is_closed(0, phi) {
            return Err(Error::NotClosed(format!(
                "generator `{name}` is not a cocycle"
            )));
        }
        let w = weight_of(hc, phi)?
            .ok_or_else(|| Error::Degenerate(format!("generator `{name}` is zero")))?;
        if w <= 0 {
            return Err(Error::Unsupported(format!(
                "generator `{name}` has weight {w}; positive weights required"
            )));
        }
        weights.push(w);
    }
    let id = hc.identity();
    let gens_with_unit: Vec<(String, Vec<Vec<Poly>>, i64)> =
        std::iter::once(("1".to_string(), id.clone(), 0))
            .chain(
                generators
                    .iter()
                    .zip(&weights)
                    .map(|((n, p), w)| (n.to_string(), p.clone(), *w)),
            )
            .collect();
    let classes: Vec<Vec<Poly>> = gens_with_unit
        .iter()
        .map(|(_, p, _)| ctx.class(p))
        .collect::<Result<_>>()?;
    let base_specs: Vec<VarSpec> = s_ring.grading.vars.clone();
    let names: Vec<(&str, i64)> = generators
        .iter()
        .map(|(n, _)| *n)
        .zip(weights.iter().copied())
        .collect();
    let aring = algebra_ring(&field, &base_specs, &names)?;
    let nb = s_ring.nvars();
    let s_to_a = |m: &Mono| {
        let mut out = Mono::one();
        out.0[..nb].copy_from_slice(&m.0[..nb]);
        out
    };
    // Candidates mu * g_k of weight w, with their normal forms.
    let s_monos = |w: i64| {
        let mut out = Vec::new();
        if w >= 0 {
            for_each_standard_monomial(&s_ring.grading, &[], w, &mut |m, wt| {
                if wt == w {
                    out.push(*m);
                }
            });
        }
        out
    };
    let candidates = |w: i64| -> Result<Vec<(Mono, usize, Vec<Poly>)>> {
        let mut out = Vec::new();
        for (k, (_, _, wk)) in gens_with_unit.iter().enumerate() {
            for mu in s_monos(w - wk) {
                let mp = Poly::monomial(&s_ring, mu, field.one());
                let v: Vec<Poly> = classes[k].iter().map(|p| p * &mp).collect();
                out.push((mu, k, ctx.nf(&v)?));
            }
        }
        Ok(out)
    };
    let mut table = Vec::new();
    let mut relations = Vec::new();
    let mut commutative = true;
    let mut product_classes: BTreeMap<(usize, usize), Vec<Poly>> = BTreeMap::new();
    for i in 0..generators.len() {
        for j in 0..generators.len() {
            let prod = mat_mul(&hc.src.ring, &generators[i].1, &generators[j].1);
            let w = weights[i] + weights[j];
            if w > cap {
                return Err(Error::DegreeCap { cap, requested: w });
            }
            let nf = ctx.nf(&ctx.class(&prod)?)?;
            product_classes.insert((i, j), nf.clone());
            let cands = candidates(w)?;
            let nfs: Vec<Vec<Poly>> = cands.iter().map(|c| c.2.clone()).collect();
            let x = solve_combination(&nfs, &nf).ok_or_else(|| {
                Error::Failed(format!(
                    "product {}*{} leaves the span of the unit and the generators",
                    generators[i].0, generators[j].0
                ))
            })?;
            let mut value = Poly::zero(&aring);
            for ((mu, k, _), c) in cands.iter().zip(&x) {
                if c.is_zero() {
                    continue;
                }
                let mut m = s_to_a(mu);
                if *k > 0 {
                    m.0[nb + k - 1] += 1;
                }
                value = &value + &Poly::monomial(&aring, m, c.clone());
            }
            let mut lhs = Mono::one();
            lhs.0[nb + i] += 1;
            lhs.0[nb + j] += 1;
            if j >= i {
                relations.push(&Poly::monomial(&aring, lhs, field.one()) - &value);
            }
            table.push(ProductEntry {
                left: generators[i].0.to_string(),
                right: generators[j].0.to_string(),
                value: value.to_string(),
                poly: value,
            });
        }
    }
    for i in 0..generators.len() {
        for j in 0..i {
            if product_classes[&(i, j)] != product_classes[&(j, i)] {
                commutative = false;
            }
        }
    }
    // S-linear relations among the unit and the generators.
    let span_elems: Vec<(String, Vec<Poly>, Degree)> = gens_with_unit
        .iter()
        .zip(&classes)
        .map(|((n, _, w), c)| {
            (
                n.clone(),
                c.clone(),
                Degree {
                    torus: vec![0; s_ring.grading.torus_rank],
                    r: 0,
                    w: *w,
                },
            )
        })
        .collect();
    let span = ctx.red.span(span_elems, false)?;
    for rel in &span.relations {
        let mut p = Poly::zero(&aring);
        for (k, f) in rel.iter().enumerate() {
            for (m, c) in f.terms() {
                let mut mm = s_to_a(m);
                if k > 0 {
                    mm.0[nb + k - 1] += 1;
                }
                p = &p + &Poly::monomial(&aring, mm, c.clone());
            }
        }
        if !p.is_zero() {
            relations.push(p);
        }
    }
    let cohomology = ctx.red.cohomology(hc)?;
    let invariant = if hc.src.sigma.is_some() {
        let mut elems = Vec::new();
        for (k, (g, d)) in cohomology
            .generators
            .iter()
            .zip(&cohomology.gen_degrees)
            .enumerate()
        {
            let rep = ctx.red.include(g);
            let img = ctx.red.project(&hc.sigma_vector(0, &rep)?);
            let sum: Vec<Poly> = g.iter().zip(&img).map(|(a, b)| a + b).collect();
            if sum.iter().any(|p| !p.is_zero()) {
                elems.push((format!("r{k}"), sum, d.clone()));
            }
        }
        Some(ctx.red.span(elems, true)?)
    } else {
        None
    };
    let whole = invariant.as_ref().unwrap_or(&cohomology);
    let z = Degree::zero(s_ring.grading.torus_rank);
    let mut hilbert = BTreeMap::new();
    for w in 0..=cap {
        hilbert.insert(
            w,
            whole.graded_piece_dim_capped(&Degree { w, ..z.clone() }, cap.max(w) + 1)?,
        );
    }
    let presentation = AlgebraPresentation {
        ring: aring,
        base_vars: base_specs.iter().map(|v| v.name.clone()).collect(),
        generators: names.iter().map(|(n, w)| (n.to_string(), *w)).collect(),
        relations,
        table,
        commutative,
        hilbert: Some(hilbert),
    };
    Ok(EndAlgebra {
        presentation,
        cohomology,
        invariant,
        span,
    })
}

/// One failed check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Mismatch {
    pub degree: i64,
    pub detail: String,
}

/// Outcome of `check_presentation`.
#[derive(Clone, Debug, Serialize)]
pub struct Verdict {
    pub matches: bool,
    pub cap: i64,
    pub mismatches: Vec<Mismatch>,
    pub dims_computed: BTreeMap<i64, usize>,
    pub dims_target: BTreeMap<i64, usize>,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.matches {
            writeln!(f, "presentations agree up to degree {}", self.cap)?;
        } else {
            writeln!(
                f,
                "{} mismatch(es) up to degree {}:",
                self.mismatches.len(),
                self.cap
            )?;
            for m in &self.mismatches {
                writeln!(f, "  degree {}: {}", m.degree, m.detail)?;
            }
        }
        let dims: Vec<String> = self.dims_computed.values().map(|d| d.to_string()).collect();
        writeln!(f, "dimensions: {}", dims.join(" "))
    }
}

fn weight(p: &Poly) -> i64 {
    p.degree().map(|d| d.w).unwrap_or_else(|| {
        p.terms()
            .iter()
            .map(|(m, _)| p.ring().grading.degree_of(&m.0[..p.ring().nvars()]).w)
            .max()
            .unwrap_or(0)
    })
}

/// Checks that each target relation holds in the computed algebra, each
/// computed relation follows from the target ones, and the graded dimensions
/// agree in every weight up to `cap`.
pub fn check_presentation(
    computed: &AlgebraPresentation,
    target: &AlgebraPresentation,
    cap: i64,
) -> Result<Verdict> {
    let mut mismatches = Vec::new();
    let tr: Vec<Poly> = target
        .relations
        .iter()
        .map(|p| p.transport(&computed.ring))
        .collect::<Result<_>>()?;
    let cgb = computed.gb()?;
    let tgb = buchberger(
        &SubmoduleGens::ideal(&computed.ring, tr.clone()),
        &MonomialOrder::default(),
    )?;
    for (p, orig) in tr.iter().zip(&target.relations) {
        let w = weight(p);
        if w <= cap && !cgb.reduce_poly(p)?.is_zero() {
            mismatches.push(Mismatch {
                degree: w,
                detail: format!("target relation {orig} does not hold"),
            });
        }
    }
    for p in &computed.relations {
        let w = weight(p);
        if w <= cap && !tgb.reduce_poly(p)?.is_zero() {
            mismatches.push(Mismatch {
                degree: w,
                detail: format!("computed relation {p} is not implied by the target"),
            });
        }
    }
    let dims_target = target.dims(cap)?;
    let dims_computed = match &computed.hilbert {
        Some(h) => h.clone(),
        None => computed.dims(cap)?,
    };
    let own = computed.dims(cap)?;
    for w in 0..=cap {
        let (a, b) = (
            dims_computed.get(&w).copied().unwrap_or(0),
            dims_target.get(&w).copied().unwrap_or(0),
        );
        if a != b {
            mismatches.push(Mismatch {
                degree: w,
                detail: format!("dimension {a} computed, {b} in the target"),
            });
        }
        let c = own.get(&w).copied().unwrap_or(0);
        if c != a {
            mismatches.push(Mismatch {
                degree: w,
                detail: format!(
                    "generators span dimension {c} of {a}; the presentation is not surjective"
                ),
            });
        }
    }
    mismatches.sort_by_key(|m| m.degree);
    Ok(Verdict {
        matches: mismatches.is_empty(),
        cap,
        mismatches,
        dims_computed,
        dims_target,
    })
}
