//! Buchberger's algorithm for submodules of free modules.

use std::cmp::Ordering;
use std::collections::BTreeSet;

use super::order::{Ctx, MonomialOrder};
use crate::error::{Error, Result};
use crate::exactalg::{same_ring, Degree, FieldElem, Mono, Poly, RingRef};

#[derive(Clone, Debug)]
pub(crate) struct Term {
    pub pos: u32,
    pub mono: Mono,
    pub c: FieldElem,
}

/// Module element in internal coordinates, sorted strictly descending.
pub(crate) type IVec = Vec<Term>;

/// Generators of a submodule of a free module of rank `rank`, optionally over
/// a quotient ring `U / ideal`.
#[derive(Clone, Debug)]
pub struct SubmoduleGens {
    pub ring: RingRef,
    pub rank: usize,
    pub gens: Vec<Vec<Poly>>,
    pub ideal: Vec<Poly>,
    /// Degrees of the free basis (element degree of e_i); used for selection
    /// and homogeneity. Defaults to zero.
    pub degrees: Option<Vec<Degree>>,
}

impl SubmoduleGens {
    pub fn new(ring: &RingRef, rank: usize, gens: Vec<Vec<Poly>>) -> SubmoduleGens {
        SubmoduleGens {
            ring: ring.clone(),
            rank,
            gens,
            ideal: Vec::new(),
            degrees: None,
        }
    }

    /// Generators of an ideal (rank 1).
    pub fn ideal(ring: &RingRef, polys: Vec<Poly>) -> SubmoduleGens {
        SubmoduleGens::new(ring, 1, polys.into_iter().map(|p| vec![p]).collect())
    }

    pub fn with_quotient(mut self, ideal: Vec<Poly>) -> Self {
        self.ideal = ideal;
        self
    }

    pub fn with_degrees(mut self, degrees: Vec<Degree>) -> Self {
        self.degrees = Some(degrees);
        self
    }

    pub(crate) fn shifts(&self) -> Vec<i64> {
        match &self.degrees {
            Some(d) => d.iter().map(|x| x.w).collect(),
            None => vec![0; self.rank],
        }
    }

    pub(crate) fn validate(&self) -> Result<()> {
        if self.rank == 0 {
            return Err(Error::ShapeMismatch("ambient rank must be positive".into()));
        }
        for g in &self.gens {
            if g.len() != self.rank {
                return Err(Error::ShapeMismatch(format!(
                    "generator has length {} but the ambient rank is {}",
                    g.len(),
                    self.rank
                )));
            }
            for p in g {
                if !same_ring(p.ring(), &self.ring) {
                    return Err(Error::RingMismatch(
                        "generator entry from another ring".into(),
                    ));
                }
            }
        }
        if let Some(d) = &self.degrees {
            if d.len() != self.rank {
                return Err(Error::ShapeMismatch(
                    "one degree per basis vector required".into(),
                ));
            }
        }
        Ok(())
    }

    /// All generators including `ideal * e_i`.
    pub(crate) fn all_generators(&self) -> Vec<Vec<Poly>> {
        let mut out = self.gens.clone();
        for h in &self.ideal {
            for i in 0..self.rank {
                let mut v = vec![Poly::zero(&self.ring); self.rank];
                v[i] = h.clone();
                out.push(v);
            }
        }
        out
    }
}

pub(crate) fn to_ivec(ctx: &Ctx, v: &[Poly]) -> IVec {
    let mut out = Vec::new();
    for (pos, p) in v.iter().enumerate() {
        for (m, c) in p.terms() {
            out.push(Term {
                pos: pos as u32,
                mono: ctx.to_internal(m),
                c: c.clone(),
            });
        }
    }
    out.sort_by(|a, b| ctx.cmp_term(b.pos, &b.mono, a.pos, &a.mono));
    out
}

pub(crate) fn from_ivec(ctx: &Ctx, ring: &RingRef, rank: usize, v: &IVec) -> Vec<Poly> {
    let mut buckets: Vec<Vec<(Mono, FieldElem)>> = vec![Vec::new(); rank];
    for t in v {
        buckets[t.pos as usize].push((ctx.to_external(&t.mono), t.c.clone()));
    }
    buckets
        .into_iter()
        .map(|b| Poly::from_terms(ring, b))
        .collect()
}

/// a - c * m * b.
pub(crate) fn sub_mul(ctx: &Ctx, a: &IVec, b: &IVec, m: &Mono, c: &FieldElem) -> IVec {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        if j == b.len() {
            out.extend(a[i..].iter().cloned());
            break;
        }
        let bm = b[j].mono.mul(m);
        if i == a.len() {
            out.push(Term {
                pos: b[j].pos,
                mono: bm,
                c: -&(&b[j].c * c),
            });
            j += 1;
            continue;
        }
        match ctx.cmp_term(a[i].pos, &a[i].mono, b[j].pos, &bm) {
            Ordering::Greater => {
                out.push(a[i].clone());
                i += 1;
            }
            Ordering::Less => {
                out.push(Term {
                    pos: b[j].pos,
                    mono: bm,
                    c: -&(&b[j].c * c),
                });
                j += 1;
            }
            Ordering::Equal => {
                let v = &a[i].c - &(&b[j].c * c);
                if !v.is_zero() {
                    out.push(Term {
                        pos: a[i].pos,
                        mono: a[i].mono,
                        c: v,
                    });
                }
                i += 1;
                j += 1;
            }
        }
    }
    out
}

fn make_monic(v: &mut IVec) {
    if let Some(t) = v.first() {
        if !t.c.is_one() {
            let inv = t.c.inv().expect("nonzero leading coefficient");
            for t in v.iter_mut() {
                t.c = &t.c * &inv;
            }
        }
    }
}

/// Index for finding reducers by position.
struct Reducers<'a> {
    by_pos: Vec<Vec<usize>>,
    basis: &'a [IVec],
}

impl<'a> Reducers<'a> {
    fn new(basis: &'a [IVec], rank: usize) -> Self {
        let mut by_pos = vec![Vec::new(); rank];
        for (i, g) in basis.iter().enumerate() {
            if let Some(t) = g.first() {
                by_pos[t.pos as usize].push(i);
            }
        }
        Reducers { by_pos, basis }
    }

    fn find(&self, pos: u32, m: &Mono, skip: Option<usize>) -> Option<usize> {
        self.by_pos[pos as usize]
            .iter()
            .copied()
            .find(|&i| Some(i) != skip && self.basis[i][0].mono.divides(m))
    }
}

/// Full reduction of `v` against monic `basis`.
fn reduce_full(ctx: &Ctx, v: IVec, red: &Reducers, skip: Option<usize>) -> IVec {
    let mut rem: IVec = Vec::new();
    let mut cur = v;
    while !cur.is_empty() {
        let t = &cur[0];
        match red.find(t.pos, &t.mono, skip) {
            Some(k) => {
                let g = &red.basis[k];
                let m = g[0].mono.quotient_of(&t.mono);
                let c = t.c.clone();
                cur = sub_mul(ctx, &cur, g, &m, &c);
            }
            None => {
                rem.push(cur.remove(0));
            }
        }
    }
    rem
}

/// Reduction of leading terms only.
fn reduce_top(ctx: &Ctx, mut cur: IVec, red: &Reducers) -> IVec {
    while let Some(t) = cur.first() {
        match red.find(t.pos, &t.mono, None) {
            Some(k) => {
                let g = &red.basis[k];
                let m = g[0].mono.quotient_of(&t.mono);
                let c = t.c.clone();
                cur = sub_mul(ctx, &cur, g, &m, &c);
            }
            None => break,
        }
    }
    cur
}

/// A reduced Gröbner basis.
#[derive(Clone, Debug)]
pub struct GroebnerBasis {
    pub(crate) ring: RingRef,
    pub(crate) rank: usize,
    pub(crate) order: MonomialOrder,
    pub(crate) ctx: Ctx,
    pub(crate) basis: Vec<IVec>,
}

#[derive(Clone, Copy, Debug, Default)]
pub struct GbOptions {
    /// Ignore S-pairs whose (shifted) lcm degree exceeds this bound. The
    /// result is then a basis only up to that degree (homogeneous input).
    pub max_degree: Option<i64>,
}

/// Computes the reduced Gröbner basis of the submodule (quotient ideal
/// generators included).
pub fn buchberger(gens: &SubmoduleGens, ord: &MonomialOrder) -> Result<GroebnerBasis> {
    buchberger_with(gens, ord, GbOptions::default())
}

pub fn buchberger_with(
    gens: &SubmoduleGens,
    ord: &MonomialOrder,
    opts: GbOptions,
) -> Result<GroebnerBasis> {
    gens.validate()?;
    let ctx = Ctx::new(&gens.ring, ord, gens.shifts())?;
    let input: Vec<IVec> = gens
        .all_generators()
        .iter()
        .map(|g| to_ivec(&ctx, g))
        .collect();
    let basis = run(&ctx, gens.rank, input, opts);
    Ok(GroebnerBasis {
        ring: gens.ring.clone(),
        rank: gens.rank,
        order: ord.clone(),
        ctx,
        basis,
    })
}

pub(crate) fn run(ctx: &Ctx, rank: usize, mut input: Vec<IVec>, opts: GbOptions) -> Vec<IVec> {
    input.retain(|v| !v.is_empty());
    input.sort_by(|a, b| {
        let da = ctx.term_deg(a[0].pos, &a[0].mono);
        let db = ctx.term_deg(b[0].pos, &b[0].mono);
        da.cmp(&db)
            .then_with(|| ctx.cmp_term(a[0].pos, &a[0].mono, b[0].pos, &b[0].mono))
    });
    let mut basis: Vec<IVec> = Vec::new();
    // Pending pairs keyed by (degree, j, i) for deterministic normal selection.
    let mut pending: BTreeSet<(i64, usize, usize)> = BTreeSet::new();
    let mut pending_set: BTreeSet<(usize, usize)> = BTreeSet::new();
    let mut queue = input.into_iter();
    let mut next_input = queue.next();

    let add = |basis: &mut Vec<IVec>,
               pending: &mut BTreeSet<(i64, usize, usize)>,
               pending_set: &mut BTreeSet<(usize, usize)>,
               mut v: IVec| {
        make_monic(&mut v);
        let j = basis.len();
        let (pj, mj) = (v[0].pos, v[0].mono);
        for (i, g) in basis.iter().enumerate() {
            if g[0].pos == pj {
                let l = g[0].mono.lcm(&mj);
                let d = ctx.term_deg(pj, &l);
                if opts.max_degree.is_some_and(|m| d > m) {
                    continue;
                }
                pending.insert((d, j, i));
                pending_set.insert((i, j));
            }
        }
        basis.push(v);
    };

    loop {
        // Interleave input generators with pairs by degree.
        let pair_deg = pending.iter().next().map(|p| p.0);
        let input_deg = next_input
            .as_ref()
            .map(|v| ctx.term_deg(v[0].pos, &v[0].mono));
        let take_input = match (input_deg, pair_deg) {
            (None, None) => break,
            (Some(_), None) => true,
            (None, Some(_)) => false,
            (Some(a), Some(b)) => a <= b,
        };
        if take_input {
            let v = next_input.take().unwrap();
            next_input = queue.next();
            let red = Reducers::new(&basis, rank);
            let r = reduce_top(ctx, v, &red);
            if !r.is_empty() {
                add(&mut basis, &mut pending, &mut pending_set, r);
            }
            continue;
        }
        let (d, j, i) = *pending.iter().next().unwrap();
        pending.remove(&(d, j, i));
        pending_set.remove(&(i, j));
        let (gi, gj) = (&basis[i], &basis[j]);
        let pos = gi[0].pos;
        let l = gi[0].mono.lcm(&gj[0].mono);
        // Chain criterion.
        let chain = (0..basis.len()).any(|k| {
            k != i
                && k != j
                && basis[k][0].pos == pos
                && basis[k][0].mono.divides(&l)
                && !pending_set.contains(&(i.min(k), i.max(k)))
                && !pending_set.contains(&(j.min(k), j.max(k)))
        });
        if chain {
            continue;
        }
        let mi = gi[0].mono.quotient_of(&l);
        let mj = gj[0].mono.quotient_of(&l);
        let one = gi[0].c.field().one();
        let si: IVec = gi
            .iter()
            .map(|t| Term {
                pos: t.pos,
                mono: t.mono.mul(&mi),
                c: t.c.clone(),
            })
            .collect();
        let s = sub_mul(ctx, &si, gj, &mj, &one);
        let red = Reducers::new(&basis, rank);
        let r = reduce_top(ctx, s, &red);
        if !r.is_empty() {
            add(&mut basis, &mut pending, &mut pending_set, r);
        }
    }
    interreduce(ctx, rank, basis)
}

fn interreduce(ctx: &Ctx, rank: usize, basis: Vec<IVec>) -> Vec<IVec> {
    // Keep elements whose leading term is not divisible by another's.
    let mut keep: Vec<IVec> = Vec::new();
    let mut sorted = basis;
    sorted.sort_by(|a, b| ctx.cmp_term(a[0].pos, &a[0].mono, b[0].pos, &b[0].mono));
    for g in sorted {
        if !keep
            .iter()
            .any(|h| h[0].pos == g[0].pos && h[0].mono.divides(&g[0].mono))
        {
            keep.push(g);
        }
    }
    let mut out = Vec::with_capacity(keep.len());
    for k in 0..keep.len() {
        let red = Reducers::new(&keep, rank);
        let head = keep[k][0].clone();
        let tail: IVec = keep[k][1..].to_vec();
        let mut r = reduce_full(ctx, tail, &red, Some(k));
        r.insert(0, head);
        out.push(r);
    }
    for (k, v) in out.iter().enumerate() {
        keep[k] = v.clone();
    }
    keep.sort_by(|a, b| ctx.cmp_term(b[0].pos, &b[0].mono, a[0].pos, &a[0].mono));
    keep
}

impl GroebnerBasis {
    pub fn ring(&self) -> &RingRef {
        &self.ring
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn order(&self) -> &MonomialOrder {
        &self.order
    }

    pub fn len(&self) -> usize {
        self.basis.len()
    }

    pub fn is_empty(&self) -> bool {
        self.basis.is_empty()
    }

    /// Basis elements as vectors of polynomials, sorted by leading term, descending.
    pub fn elements(&self) -> Vec<Vec<Poly>> {
        self.basis
            .iter()
            .map(|v| from_ivec(&self.ctx, &self.ring, self.rank, v))
            .collect()
    }

    /// Leading (position, monomial) pairs in ring coordinates.
    pub fn leading_terms(&self) -> Vec<(usize, Mono)> {
        self.basis
            .iter()
            .map(|v| (v[0].pos as usize, self.ctx.to_external(&v[0].mono)))
            .collect()
    }

    pub fn normal_form(&self, v: &[Poly]) -> Result<Vec<Poly>> {
        if v.len() != self.rank {
            return Err(Error::ShapeMismatch(format!(
                "vector of length {} against a basis of rank {}",
                v.len(),
                self.rank
            )));
        }
        let iv = to_ivec(&self.ctx, v);
        let red = Reducers::new(&self.basis, self.rank);
        let r = reduce_full(&self.ctx, iv, &red, None);
        Ok(from_ivec(&self.ctx, &self.ring, self.rank, &r))
    }

    pub fn contains(&self, v: &[Poly]) -> Result<bool> {
        Ok(self.normal_form(v)?.iter().all(|p| p.is_zero()))
    }

    /// Normal form of a single polynomial (rank 1 bases).
    pub fn reduce_poly(&self, p: &Poly) -> Result<Poly> {
        Ok(self.normal_form(std::slice::from_ref(p))?.remove(0))
    }

    /// True when some leading monomial in position `pos` divides `m` (ring coordinates).
    pub fn is_leading_multiple(&self, pos: usize, m: &Mono) -> bool {
        let mi = self.ctx.to_internal(m);
        self.basis
            .iter()
            .any(|v| v[0].pos as usize == pos && v[0].mono.divides(&mi))
    }
}
