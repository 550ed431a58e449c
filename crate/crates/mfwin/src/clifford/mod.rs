//! Clifford algebras of quadratic forms, their even parts and centers, and
//! corank stratification of linear systems of symmetric matrices.

mod center;
mod pencil;


use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactalg::{Field, FieldElem, Matrix};

pub use center::{center_basis, center_split, CenterReport, Split};
pub use pencil::{pencil_strata, stratify_system, symbolic_det, PencilStrata, StrataReport, StratumPoint};

/// Largest supported number of generators.
pub const MAX_GENERATORS: usize = 12;

/// A symmetric bilinear form `B`; the Clifford relation is
/// `e_i e_j + e_j e_i = 2 B(e_i, e_j)`, so `q(v) = B(v, v)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadraticForm {
    pub matrix: Matrix,
}

impl QuadraticForm {
    pub fn new(matrix: Matrix) -> Result<QuadraticForm> {
        let m = matrix.rows();
        if matrix.cols() != m {
            return Err(Error::ShapeMismatch(format!("form is {}x{}, not square", m, matrix.cols())));
        }
        for i in 0..m {
            for j in 0..i {
                if matrix.get(i, j) != matrix.get(j, i) {
                    return Err(Error::NotSymmetric(format!("entries ({i},{j}) and ({j},{i}) differ")));
                }
            }
        }
        Ok(QuadraticForm { matrix })
    }

    pub fn from_i64(field: &Field, rows: &[Vec<i64>]) -> Result<QuadraticForm> {
        if rows.iter().any(|r| r.len() != rows.len()) {
            return Err(Error::ShapeMismatch("form rows have unequal lengths".into()));
        }
        QuadraticForm::new(Matrix::from_i64(field, rows))
    }

    pub fn diag(field: &Field, d: &[i64]) -> QuadraticForm {
        let rows: Vec<Vec<i64>> =
            (0..d.len()).map(|i| (0..d.len()).map(|j| if i == j { d[i] } else { 0 }).collect()).collect();
        QuadraticForm { matrix: Matrix::from_i64(field, &rows) }
    }

    /// Entries given as field literals such as `"-1/2"`.
    pub fn parse(field: &Field, rows: &[Vec<String>]) -> Result<QuadraticForm> {
        let parsed = rows
            .iter()
            .map(|r| r.iter().map(|s| field.parse(s)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        if parsed.iter().any(|r| r.len() != parsed.len()) {
            return Err(Error::ShapeMismatch("form rows have unequal lengths".into()));
        }
        QuadraticForm::new(Matrix::from_rows(field, parsed)?)
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn field(&self) -> &Field {
        self.matrix.field()
    }

    pub fn rank(&self) -> usize {
        self.matrix.rank()
    }

    pub fn corank(&self) -> usize {
        self.dim() - self.rank()
    }

    pub fn to_strings(&self) -> Vec<Vec<String>> {
        (0..self.dim()).map(|i| self.matrix.row(i).iter().map(|c| c.to_string()).collect()).collect()
    }
}

/// A basis blade `e_{a1} ... e_{ak}` with `a1 < ... < ak`, as a bit mask.
pub type Blade = u32;

/// An element in the blade basis: coefficient of blade `b` at index `b`.
pub type Elem = Vec<FieldElem>;

/// The Clifford algebra of a form on `m` generators, dimension `2^m`.
#[derive(Clone, Debug)]
pub struct CliffordAlgebra {
    pub q: QuadraticForm,
    m: usize,
}

pub fn clifford_algebra(q: &QuadraticForm) -> Result<CliffordAlgebra> {
    let m = q.dim();
    if m > MAX_GENERATORS {
        return Err(Error::SizeCap(format!("{m} generators exceed the cap of {MAX_GENERATORS}")));
    }
    Ok(CliffordAlgebra { q: q.clone(), m })
}

/// Which subalgebra an operation refers to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Part {
    Full,
    Even,
}

pub fn blade_label(b: Blade) -> String {
    if b == 0 {
        return "1".into();
    }
    (0..32).filter(|i| b >> i & 1 == 1).map(|i| format!("e{}", i + 1)).collect()
}

impl CliffordAlgebra {
    pub fn generators(&self) -> usize {
        self.m
    }

    pub fn field(&self) -> &Field {
        self.q.field()
    }

    pub fn dim(&self) -> usize {
        1 << self.m
    }

    /// Blades spanning the part, in increasing mask order.
    pub fn basis(&self, part: Part) -> Vec<Blade> {
        (0..self.dim() as Blade).filter(|b| part == Part::Full || b.count_ones() % 2 == 0).collect()
    }

    pub fn part_dim(&self, part: Part) -> usize {
        match part {
            Part::Full => self.dim(),
            Part::Even => self.dim() / 2,
        }
    }

    pub fn zero(&self) -> Elem {
        vec![self.field().zero(); self.dim()]
    }

    pub fn blade(&self, b: Blade) -> Elem {
        let mut v = self.zero();
        v[b as usize] = self.field().one();
        v
    }

    pub fn one(&self) -> Elem {
        self.blade(0)
    }

    /// The generator `e_{i+1}`.
    pub fn gen(&self, i: usize) -> Elem {
        self.blade(1 << i)
    }

    /// Algebra generators of the part: the `e_i`, or the `e_i e_j` with `i < j`.
    pub fn algebra_generators(&self, part: Part) -> Vec<Elem> {
        match part {
            Part::Full => (0..self.m).map(|i| self.gen(i)).collect(),
            Part::Even => (0..self.m)
                .flat_map(|i| (i + 1..self.m).map(move |j| (i, j)))
                .map(|(i, j)| self.blade(1 << i | 1 << j))
                .collect(),
        }
    }

    /// `e_A e_j` in the blade basis.
    fn mul_gen(&self, a: Blade, j: usize) -> BTreeMap<Blade, FieldElem> {
        let f = self.field();
        let mut out = BTreeMap::new();
        if a == 0 {
            out.insert(1 << j, f.one());
            return out;
        }
        let top = 31 - a.leading_zeros() as usize;
        let rest = a & !(1 << top);
        if j > top {
            out.insert(a | 1 << j, f.one());
        } else if j == top {
            let c = self.q.matrix.get(top, top).clone();
            if !c.is_zero() {
                out.insert(rest, c);
            }
        } else {
            // e_rest e_top e_j = -e_rest e_j e_top + 2 B(top, j) e_rest, and
            // every blade of e_rest e_j has indices below top.
            for (c, k) in self.mul_gen(rest, j) {
                out.insert(c | 1 << top, -k);
            }
            let b = self.q.matrix.get(top, j);
            if !b.is_zero() {
                let two = f.from_i64(2);
                let e = out.entry(rest).or_insert_with(|| f.zero());
                *e = &*e + &(&two * b);
            }
        }
        out.retain(|_, c| !c.is_zero());
        out
    }

    /// Product of two blades.
    pub fn blade_product(&self, a: Blade, b: Blade) -> Vec<(Blade, FieldElem)> {
        let mut cur: BTreeMap<Blade, FieldElem> = BTreeMap::new();
        cur.insert(a, self.field().one());
        for j in (0..self.m).filter(|j| b >> j & 1 == 1) {
            let mut next: BTreeMap<Blade, FieldElem> = BTreeMap::new();
            for (c, k) in &cur {
                for (d, v) in self.mul_gen(*c, j) {
                    let e = next.entry(d).or_insert_with(|| self.field().zero());
                    *e = &*e + &(k * &v);
                }
            }
            next.retain(|_, c| !c.is_zero());
            cur = next;
        }
        cur.into_iter().collect()
    }

    pub fn mul(&self, x: &Elem, y: &Elem) -> Elem {
        let mut out = self.zero();
        for (a, ca) in x.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
            for (b, cb) in y.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
                let k = ca * cb;
                for (d, v) in self.blade_product(a as Blade, b as Blade) {
                    out[d as usize] = &out[d as usize] + &(&k * &v);
                }
            }
        }
        out
    }

    pub fn add(&self, x: &Elem, y: &Elem) -> Elem {
        x.iter().zip(y).map(|(a, b)| a + b).collect()
    }

    pub fn sub(&self, x: &Elem, y: &Elem) -> Elem {
        x.iter().zip(y).map(|(a, b)| a - b).collect()
    }

    pub fn scale(&self, c: &FieldElem, x: &Elem) -> Elem {
        x.iter().map(|a| c * a).collect()
    }

    pub fn is_zero(&self, x: &Elem) -> bool {
        x.iter().all(FieldElem::is_zero)
    }

    pub fn commutator(&self, x: &Elem, y: &Elem) -> Elem {
        self.sub(&self.mul(x, y), &self.mul(y, x))
    }

    /// True when every blade with a nonzero coefficient lies in the part.
    pub fn in_part(&self, x: &Elem, part: Part) -> bool {
        part == Part::Full || x.iter().enumerate().all(|(b, c)| c.is_zero() || b.count_ones() % 2 == 0)
    }

    pub fn format(&self, x: &Elem) -> String {
        ElemDisplay(x).to_string()
    }
}

struct ElemDisplay<'a>(&'a Elem);

impl fmt::Display for ElemDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self
            .0
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(b, c)| match (b, c.is_one()) {
                (0, _) => c.to_string(),
                (_, true) => blade_label(b as Blade),
                _ => format!("{c}*{}", blade_label(b as Blade)),
            })
            .collect();
        if terms.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", terms.join(" + "))
        }
    }
}
