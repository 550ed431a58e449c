//! Sparse multigraded polynomials with exact coefficients.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::field::{Field, FieldElem};
use super::grading::{Degree, GradingJson, GradingSpec, MAX_VARS};
use crate::error::{Error, Result};

/// Exponent vector; unused trailing slots are zero.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Mono(pub [u16; MAX_VARS]);

impl Mono {
    pub fn one() -> Mono {
        Mono([0; MAX_VARS])
    }

    pub fn var(i: usize) -> Mono {
        let mut m = Mono::one();
        m.0[i] = 1;
        m
    }

    pub fn from_exps(exps: &[u16]) -> Mono {
        let mut m = Mono::one();
        m.0[..exps.len()].copy_from_slice(exps);
        m
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn total_degree(&self) -> u32 {
        self.0.iter().map(|&e| e as u32).sum()
    }

    pub fn mul(&self, o: &Mono) -> Mono {
        let mut m = *self;
        for (a, b) in m.0.iter_mut().zip(o.0.iter()) {
            *a += *b;
        }
        m
    }

    pub fn divides(&self, o: &Mono) -> bool {
        self.0.iter().zip(o.0.iter()).all(|(a, b)| a <= b)
    }

    /// `o / self`; caller guarantees divisibility.
    pub fn quotient_of(&self, o: &Mono) -> Mono {
        let mut m = *o;
        for (a, b) in m.0.iter_mut().zip(self.0.iter()) {
            *a -= *b;
        }
        m
    }

    pub fn lcm(&self, o: &Mono) -> Mono {
        let mut m = *self;
        for (a, b) in m.0.iter_mut().zip(o.0.iter()) {
            *a = (*a).max(*b);
        }
        m
    }

    pub fn cmp_degrevlex(&self, o: &Mono) -> Ordering {
        match self.total_degree().cmp(&o.total_degree()) {
            Ordering::Equal => {}
            c => return c,
        }
        for i in (0..MAX_VARS).rev() {
            if self.0[i] != o.0[i] {
                return o.0[i].cmp(&self.0[i]);
            }
        }
        Ordering::Equal
    }

    pub fn cmp_lex(&self, o: &Mono) -> Ordering {
        for i in 0..MAX_VARS {
            if self.0[i] != o.0[i] {
                return self.0[i].cmp(&o.0[i]);
            }
        }
        Ordering::Equal
    }
}

/// A polynomial ring: coefficient field plus grading.
#[derive(Debug, PartialEq, Eq, Hash)]
pub struct Ring {
    pub field: Field,
    pub grading: GradingSpec,
}

pub type RingRef = Arc<Ring>;

impl Ring {
    pub fn new(field: Field, grading: GradingSpec) -> RingRef {
        Arc::new(Ring { field, grading })
    }

    pub fn nvars(&self) -> usize {
        self.grading.nvars()
    }

    pub fn var_name(&self, i: usize) -> &str {
        &self.grading.vars[i].name
    }
}

pub fn same_ring(a: &RingRef, b: &RingRef) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

/// Sparse polynomial; terms sorted strictly descending in degrevlex, no zero coefficients.
#[derive(Clone, Debug)]
pub struct Poly {
    ring: RingRef,
    terms: Vec<(Mono, FieldElem)>,
}

impl PartialEq for Poly {
    fn eq(&self, o: &Poly) -> bool {
        same_ring(&self.ring, &o.ring) && self.terms == o.terms
    }
}

impl Eq for Poly {}

/// Result of a multidegree query.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MultiDegree {
    Zero,
    Homogeneous { torus: Vec<i64>, r: i64 },
    Inhomogeneous,
}

fn desc(a: &Mono, b: &Mono) -> Ordering {
    b.cmp_degrevlex(a)
}

impl Poly {
    pub fn zero(ring: &RingRef) -> Poly {
        Poly {
            ring: ring.clone(),
            terms: Vec::new(),
        }
    }

    pub fn one(ring: &RingRef) -> Poly {
        Poly::constant(ring, ring.field.one())
    }

    pub fn constant(ring: &RingRef, c: FieldElem) -> Poly {
        Poly::monomial(ring, Mono::one(), c)
    }

    pub fn from_i64(ring: &RingRef, c: i64) -> Poly {
        Poly::constant(ring, ring.field.from_i64(c))
    }

    pub fn monomial(ring: &RingRef, m: Mono, c: FieldElem) -> Poly {
        if c.is_zero() {
            Poly::zero(ring)
        } else {
            Poly {
                ring: ring.clone(),
                terms: vec![(m, c)],
            }
        }
    }

    pub fn var(ring: &RingRef, i: usize) -> Poly {
        Poly::monomial(ring, Mono::var(i), ring.field.one())
    }

    pub fn var_named(ring: &RingRef, name: &str) -> Result<Poly> {
        Ok(Poly::var(ring, ring.grading.var_index(name)?))
    }

    /// Builds a polynomial from arbitrary terms, combining duplicates.
    pub fn from_terms(ring: &RingRef, mut terms: Vec<(Mono, FieldElem)>) -> Poly {
        terms.sort_by(|a, b| desc(&a.0, &b.0));
        let mut out: Vec<(Mono, FieldElem)> = Vec::with_capacity(terms.len());
        for (m, c) in terms {
            match out.last_mut() {
                Some((lm, lc)) if *lm == m => *lc = &*lc + &c,
                _ => out.push((m, c)),
            }
        }
        out.retain(|(_, c)| !c.is_zero());
        Poly {
            ring: ring.clone(),
            terms: out,
        }
    }

    pub fn ring(&self) -> &RingRef {
        &self.ring
    }

    pub fn terms(&self) -> &[(Mono, FieldElem)] {
        &self.terms
    }

    pub fn into_terms(self) -> Vec<(Mono, FieldElem)> {
        self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// The value if the polynomial is constant (zero included).
    pub fn constant_value(&self) -> Option<FieldElem> {
        match self.terms.as_slice() {
            [] => Some(self.ring.field.zero()),
            [(m, c)] if m.is_one() => Some(c.clone()),
            _ => None,
        }
    }

    /// Nonzero constant.
    pub fn is_unit(&self) -> bool {
        matches!(self.terms.as_slice(), [(m, _)] if m.is_one())
    }

    fn check_ring(&self, o: &Poly) -> Result<()> {
        if same_ring(&self.ring, &o.ring) {
            Ok(())
        } else {
            Err(Error::RingMismatch(
                "operands live in different rings".into(),
            ))
        }
    }

    pub fn checked_add(&self, o: &Poly) -> Result<Poly> {
        self.check_ring(o)?;
        Ok(self.add_impl(o, false))
    }

    pub fn checked_sub(&self, o: &Poly) -> Result<Poly> {
        self.check_ring(o)?;
        Ok(self.add_impl(o, true))
    }

    pub fn checked_mul(&self, o: &Poly) -> Result<Poly> {
        self.check_ring(o)?;
        Ok(self.mul_impl(o))
    }

    fn add_impl(&self, o: &Poly, negate: bool) -> Poly {
        let mut out = Vec::with_capacity(self.terms.len() + o.terms.len());
        let (mut i, mut j) = (0, 0);
        while i < self.terms.len() && j < o.terms.len() {
            let (ma, ca) = &self.terms[i];
            let (mb, cb) = &o.terms[j];
            match mb.cmp_degrevlex(ma) {
                Ordering::Less => {
                    out.push((*ma, ca.clone()));
                    i += 1;
                }
                Ordering::Greater => {
                    out.push((*mb, if negate { -cb } else { cb.clone() }));
                    j += 1;
                }
                Ordering::Equal => {
                    let c = if negate { ca - cb } else { ca + cb };
                    if !c.is_zero() {
                        out.push((*ma, c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend(self.terms[i..].iter().cloned());
        for (m, c) in &o.terms[j..] {
            out.push((*m, if negate { -c } else { c.clone() }));
        }
        Poly {
            ring: self.ring.clone(),
            terms: out,
        }
    }

    fn mul_impl(&self, o: &Poly) -> Poly {
        if self.is_zero() || o.is_zero() {
            return Poly::zero(&self.ring);
        }
        let (small, big) = if self.len() <= o.len() {
            (self, o)
        } else {
            (o, self)
        };
        let mut acc = Poly::zero(&self.ring);
        for (m, c) in &small.terms {
            acc = acc.add_impl(&big.mul_term(m, c), false);
        }
        acc
    }

    /// Multiplication by the term `c * m`.
    pub fn mul_term(&self, m: &Mono, c: &FieldElem) -> Poly {
        if c.is_zero() {
            return Poly::zero(&self.ring);
        }
        Poly {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(a, b)| (a.mul(m), b * c)).collect(),
        }
    }

    pub fn scale(&self, c: &FieldElem) -> Poly {
        self.mul_term(&Mono::one(), c)
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut r = Poly::one(&self.ring);
        for _ in 0..e {
            r = &r * self;
        }
        r
    }

    /// Leading term in degrevlex.
    pub fn leading(&self) -> Option<&(Mono, FieldElem)> {
        self.terms.first()
    }

    /// Full degree (torus, R-charge, weight) if homogeneous and nonzero.
    pub fn degree(&self) -> Option<Degree> {
        let g = &self.ring.grading;
        let mut it = self.terms.iter();
        let first = g.degree_of(&it.next()?.0 .0);
        for (m, _) in it {
            if g.degree_of(&m.0) != first {
                return None;
            }
        }
        Some(first)
    }

    /// Torus character and R-charge common to all terms.
    pub fn multidegree(&self) -> MultiDegree {
        let g = &self.ring.grading;
        let mut it = self.terms.iter();
        let Some((m0, _)) = it.next() else {
            return MultiDegree::Zero;
        };
        let d0 = g.degree_of(&m0.0);
        for (m, _) in it {
            let d = g.degree_of(&m.0);
            if d.torus != d0.torus || d.r != d0.r {
                return MultiDegree::Inhomogeneous;
            }
        }
        MultiDegree::Homogeneous {
            torus: d0.torus,
            r: d0.r,
        }
    }

    /// True when zero or homogeneous of exactly `d`.
    pub fn is_homogeneous_of(&self, d: &Degree) -> bool {
        let g = &self.ring.grading;
        self.terms.iter().all(|(m, _)| &g.degree_of(&m.0) == d)
    }

    /// Substitutes values for the named variables; the rest stay symbolic.
    pub fn evaluate(&self, assignment: &[(String, FieldElem)]) -> Result<Poly> {
        let mut vals: Vec<Option<FieldElem>> = vec![None; self.ring.nvars()];
        for (name, v) in assignment {
            let i = self.ring.grading.var_index(name)?;
            if v.field() != self.ring.field {
                return Err(Error::FieldMismatch(format!("value for `{name}`")));
            }
            vals[i] = Some(v.clone());
        }
        self.evaluate_indexed(&vals)
    }

    pub fn evaluate_indexed(&self, vals: &[Option<FieldElem>]) -> Result<Poly> {
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| {
                let mut m2 = *m;
                let mut c2 = c.clone();
                for (i, v) in vals.iter().enumerate() {
                    if let Some(v) = v {
                        if m.0[i] > 0 {
                            c2 = &c2 * &v.pow(m.0[i] as u64);
                            m2.0[i] = 0;
                        }
                    }
                }
                (m2, c2)
            })
            .collect();
        Ok(Poly::from_terms(&self.ring, terms))
    }

    /// Total evaluation; fails if a variable is left unassigned.
    pub fn evaluate_full(&self, assignment: &[(String, FieldElem)]) -> Result<FieldElem> {
        let p = self.evaluate(assignment)?;
        p.constant_value()
            .ok_or_else(|| Error::Failed("evaluation left free variables".into()))
    }

    /// Ring homomorphism sending variable i to `images[i]` (all in `target`).
    pub fn substitute(&self, target: &RingRef, images: &[Poly]) -> Result<Poly> {
        if images.len() != self.ring.nvars() {
            return Err(Error::ShapeMismatch(
                "substitution needs one image per variable".into(),
            ));
        }
        let mut acc = Poly::zero(target);
        for (m, c) in &self.terms {
            let mut t = Poly::constant(target, c.clone());
            for (i, &e) in m.0.iter().enumerate().take(self.ring.nvars()) {
                if e > 0 {
                    t = t.checked_mul(&images[i].pow(e as u32))?;
                }
            }
            acc = acc.checked_add(&t)?;
        }
        Ok(acc)
    }

    /// Permutes variables: x_i -> x_{perm[i]}.
    pub fn permute_vars(&self, perm: &[usize]) -> Poly {
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| {
                let mut m2 = Mono::one();
                for (i, &j) in perm.iter().enumerate() {
                    m2.0[j] = m.0[i];
                }
                (m2, c.clone())
            })
            .collect();
        Poly::from_terms(&self.ring, terms)
    }

    /// Image under the ring involution.
    pub fn apply_sigma(&self) -> Result<Poly> {
        let s = self
            .ring
            .grading
            .sigma
            .as_ref()
            .ok_or_else(|| Error::InvalidGrading("ring has no involution".into()))?;
        Ok(self.permute_vars(&s.perm))
    }

    /// Moves the polynomial into a ring containing every variable it uses, matched by name.
    pub fn transport(&self, target: &RingRef) -> Result<Poly> {
        if same_ring(&self.ring, target) {
            return Ok(self.clone());
        }
        let mut used = vec![false; self.ring.nvars()];
        for (m, _) in &self.terms {
            for (i, u) in used.iter_mut().enumerate() {
                *u |= m.0[i] > 0;
            }
        }
        let mut idx = Vec::with_capacity(self.ring.nvars());
        for (v, &u) in self.ring.grading.vars.iter().zip(&used) {
            if !u {
                idx.push(None);
                continue;
            }
            let j = target.grading.var_index(&v.name)?;
            let tv = &target.grading.vars[j];
            if tv.torus != v.torus || tv.r != v.r || tv.weight != v.weight {
                return Err(Error::RingMismatch(format!(
                    "variable `{}` graded differently",
                    v.name
                )));
            }
            idx.push(Some(j));
        }
        if target.field != self.ring.field {
            return Err(Error::FieldMismatch("transport between fields".into()));
        }
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| {
                let mut m2 = Mono::one();
                for (i, j) in idx.iter().enumerate() {
                    if let Some(j) = j {
                        m2.0[*j] = m.0[i];
                    }
                }
                (m2, c.clone())
            })
            .collect();
        Ok(Poly::from_terms(target, terms))
    }

    pub fn derivative(&self, var: usize) -> Poly {
        let f = &self.ring.field;
        let terms = self
            .terms
            .iter()
            .filter(|(m, _)| m.0[var] > 0)
            .map(|(m, c)| {
                let mut m2 = *m;
                let e = m2.0[var];
                m2.0[var] -= 1;
                (m2, c * &f.from_i64(e as i64))
            })
            .collect();
        Poly::from_terms(&self.ring, terms)
    }

    /// Groups terms by their restriction to the variables flagged in `mask`:
    /// returns pairs (mono in masked variables, coefficient polynomial in the rest).
    pub fn split_by_mask(&self, mask: &[bool]) -> Vec<(Mono, Poly)> {
        let mut groups: Vec<(Mono, Vec<(Mono, FieldElem)>)> = Vec::new();
        for (m, c) in &self.terms {
            let mut a = Mono::one();
            let mut b = *m;
            for (i, &f) in mask.iter().enumerate() {
                if f {
                    a.0[i] = m.0[i];
                    b.0[i] = 0;
                }
            }
            match groups.iter_mut().find(|(g, _)| *g == a) {
                Some((_, v)) => v.push((b, c.clone())),
                None => groups.push((a, vec![(b, c.clone())])),
            }
        }
        groups.sort_by(|x, y| desc(&x.0, &y.0));
        groups
            .into_iter()
            .map(|(a, v)| (a, Poly::from_terms(&self.ring, v)))
            .collect()
    }

    /// Parses an expression such as `s*x1 + 2*t*x2 - u^2`.
    pub fn parse(ring: &RingRef, s: &str) -> Result<Poly> {
        let mut p = Parser {
            ring,
            src: s.as_bytes(),
            pos: 0,
        };
        let out = p.expr()?;
        p.skip_ws();
        if p.pos != p.src.len() {
            return Err(Error::Parse(format!(
                "trailing input in `{s}` at {}",
                p.pos
            )));
        }
        Ok(out)
    }

    pub fn to_terms_json(&self) -> Vec<TermJson> {
        let n = self.ring.nvars();
        self.terms
            .iter()
            .map(|(m, c)| TermJson {
                coeff: c.to_string(),
                exps: m.0[..n].to_vec(),
            })
            .collect()
    }

    pub fn from_terms_json(ring: &RingRef, terms: &[TermJson]) -> Result<Poly> {
        let n = ring.nvars();
        let mut out = Vec::with_capacity(terms.len());
        for t in terms {
            if t.exps.len() != n {
                return Err(Error::Schema(format!(
                    "exponent vector has arity {} but the ring has {n} variables",
                    t.exps.len()
                )));
            }
            out.push((Mono::from_exps(&t.exps), ring.field.parse(&t.coeff)?));
        }
        Ok(Poly::from_terms(ring, out))
    }

    pub fn to_json(&self) -> PolyJson {
        PolyJson {
            grading: self.ring.grading.to_json(),
            field: self.ring.field.spec_string(),
            terms: self.to_terms_json(),
        }
    }

    pub fn from_json(j: &PolyJson) -> Result<Poly> {
        let ring = Ring::new(
            Field::parse_spec(&j.field)?,
            GradingSpec::from_json(&j.grading)?,
        );
        Poly::from_terms_json(&ring, &j.terms)
    }
}

/// One serialized term.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermJson {
    pub coeff: String,
    pub exps: Vec<u16>,
}

/// A standalone serialized polynomial with its grading header.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PolyJson {
    pub grading: GradingJson,
    pub field: String,
    pub terms: Vec<TermJson>,
}

struct Parser<'a> {
    ring: &'a RingRef,
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn err(&self, msg: &str) -> Error {
        Error::Parse(format!("{msg} at position {}", self.pos))
    }

    fn expr(&mut self) -> Result<Poly> {
        let mut acc = match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                -&self.term()?
            }
            Some(b'+') => {
                self.pos += 1;
                self.term()?
            }
            _ => self.term()?,
        };
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    acc = &acc + &self.term()?;
                }
                Some(b'-') => {
                    self.pos += 1;
                    acc = &acc - &self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Poly> {
        let mut acc = self.power()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    acc = &acc * &self.power()?;
                }
                Some(b'/') => {
                    self.pos += 1;
                    let d = self.power()?;
                    let c = d
                        .constant_value()
                        .ok_or_else(|| self.err("division by a non-constant"))?;
                    acc = acc.scale(&c.inv()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn power(&mut self) -> Result<Poly> {
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            self.skip_ws();
            let start = self.pos;
            while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                self.pos += 1;
            }
            let e: u32 = std::str::from_utf8(&self.src[start..self.pos])
                .unwrap()
                .parse()
                .map_err(|_| self.err("bad exponent"))?;
            return Ok(base.pow(e));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Poly> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.err("expected `)`"));
                }
                self.pos += 1;
                Ok(e)
            }
            Some(b'-') => {
                self.pos += 1;
                Ok(-&self.power()?)
            }
            Some(c) if c.is_ascii_digit() => {
                let start = self.pos;
                while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                    self.pos += 1;
                }
                let s = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
                Ok(Poly::constant(self.ring, self.ring.field.parse(s)?))
            }
            Some(c) if c.is_ascii_alphabetic() => {
                let start = self.pos;
                while self.pos < self.src.len()
                    && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
                {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
                Poly::var_named(self.ring, name)
            }
            _ => Err(self.err("unexpected input")),
        }
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms.iter().enumerate() {
            let neg = c.sign() < 0;
            let abs = if neg { -c } else { c.clone() };
            if k == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            let mut factors = Vec::new();
            if !abs.is_one() || m.is_one() {
                factors.push(abs.to_string());
            }
            for (i, &e) in m.0.iter().enumerate() {
                if e == 1 {
                    factors.push(self.ring.var_name(i).to_string());
                } else if e > 1 {
                    factors.push(format!("{}^{}", self.ring.var_name(i), e));
                }
            }
            write!(f, "{}", factors.join("*"))?;
        }
        Ok(())
    }
}

impl<'a> Add<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn add(self, o: &Poly) -> Poly {
        self.checked_add(o).expect("ring mismatch")
    }
}

impl<'a> Sub<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn sub(self, o: &Poly) -> Poly {
        self.checked_sub(o).expect("ring mismatch")
    }
}

impl<'a> Mul<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn mul(self, o: &Poly) -> Poly {
        self.checked_mul(o).expect("ring mismatch")
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(m, c)| (*m, -c)).collect(),
        }
    }
}
