//! Centers of Clifford algebras and their even parts.

use serde::{Deserialize, Serialize};

use super::{CliffordAlgebra, Elem, Part};
use crate::error::{Error, Result};
use crate::exactalg::{FieldElem, Matrix};

/// A basis of the center of the part, starting with 1; the remaining
/// elements have no scalar component.
pub fn center_basis(alg: &CliffordAlgebra, part: Part) -> Result<Vec<Elem>> {
    let field = alg.field();
    let basis = alg.basis(part);
    // Kernel of z -> [z, g] intersected over the generators g, shrinking the
    // candidate space one generator at a time.
    let mut cand: Vec<Elem> = basis.iter().map(|&b| alg.blade(b)).collect();
    for g in alg.algebra_generators(part) {
        if cand.is_empty() {
            break;
        }
        let imgs: Vec<Elem> = cand.iter().map(|z| alg.commutator(z, &g)).collect();
        let mut m = Matrix::zero(field, alg.dim(), imgs.len());
        for (c, v) in imgs.iter().enumerate() {
            for (r, x) in v.iter().enumerate() {
                if !x.is_zero() {
                    m.set(r, c, x.clone());
                }
            }
        }
        cand = m
            .kernel()
            .into_iter()
            .map(|k| {
                k.iter().zip(&cand).fold(alg.zero(), |acc, (c, z)| alg.add(&acc, &alg.scale(c, z)))
            })
            .collect();
    }
    // Normalize: 1 first, then a reduced basis of the scalar-free parts.
    let one = alg.one();
    let rest: Vec<Elem> = cand.iter().map(|z| alg.sub(z, &alg.scale(&z[0], &one))).collect();
    let mut m = Matrix::zero(field, rest.len(), alg.dim());
    for (r, v) in rest.iter().enumerate() {
        for (c, x) in v.iter().enumerate() {
            m.set(r, c, x.clone());
        }
    }
    let (red, pivots) = m.rref();
    let mut out = vec![one];
    out.extend((0..pivots.len()).map(|r| red.row(r).to_vec()));
    if out.len() != cand.len() {
        return Err(Error::Failed("the center does not contain 1".into()));
    }
    Ok(out)
}

/// The shape of the center.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Split {
    /// The center is the field.
    Simple,
    /// A central idempotent e splits the algebra into `eA + (1-e)A`.
    Idempotent { idempotent: String, blocks: Vec<usize> },
    /// The center is `F[z]/(z^2 - disc)` with `disc` a non-square.
    QuadraticExtension { discriminant: String },
    /// The center has nilpotent elements.
    Nilpotent { witness: String, nilradical_dim: usize },
    /// Reduced center of dimension above 2; not analysed further.
    Other,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CenterReport {
    pub part: Part,
    pub algebra_dim: usize,
    pub center_dim: usize,
    pub center_basis: Vec<String>,
    pub nilradical_dim: usize,
    pub split: Split,
}

/// Coordinates of x in the span of `basis` (assumed independent).
fn coords(alg: &CliffordAlgebra, basis: &[Elem], x: &Elem) -> Result<Vec<FieldElem>> {
    let field = alg.field();
    let mut m = Matrix::zero(field, alg.dim(), basis.len());
    for (c, v) in basis.iter().enumerate() {
        for (r, e) in v.iter().enumerate() {
            m.set(r, c, e.clone());
        }
    }
    m.solve(x).ok_or_else(|| Error::Failed("product leaves the center".into()))
}

/// Multiplication by each basis element on the center, as matrices.
fn regular_rep(alg: &CliffordAlgebra, z: &[Elem]) -> Result<Vec<Matrix>> {
    let field = alg.field();
    z.iter()
        .map(|a| {
            let mut m = Matrix::zero(field, z.len(), z.len());
            for (c, b) in z.iter().enumerate() {
                for (r, v) in coords(alg, z, &alg.mul(a, b))?.into_iter().enumerate() {
                    m.set(r, c, v);
                }
            }
            Ok(m)
        })
        .collect()
}

fn trace(m: &Matrix) -> FieldElem {
    (0..m.rows()).fold(m.field().zero(), |acc, i| &acc + m.get(i, i))
}

/// Radical of the trace form of the center; equals the nilradical in
/// characteristic zero or above the center dimension.
fn nilradical(alg: &CliffordAlgebra, z: &[Elem]) -> Result<Vec<Elem>> {
    let field = alg.field();
    let reps = regular_rep(alg, z)?;
    let mut form = Matrix::zero(field, z.len(), z.len());
    for a in 0..z.len() {
        for b in 0..z.len() {
            form.set(a, b, trace(&reps[a].mul(&reps[b])?));
        }
    }
    Ok(form
        .kernel()
        .into_iter()
        .map(|k| k.iter().zip(z).fold(alg.zero(), |acc, (c, e)| alg.add(&acc, &alg.scale(c, e))))
        .collect())
}

fn is_nilpotent(alg: &CliffordAlgebra, x: &Elem, bound: usize) -> bool {
    let mut p = x.clone();
    for _ in 0..bound {
        if alg.is_zero(&p) {
            return true;
        }
        p = alg.mul(&p, x);
    }
    alg.is_zero(&p)
}

/// Rank of left multiplication by `e` on the part.
fn left_ideal_dim(alg: &CliffordAlgebra, e: &Elem, part: Part) -> usize {
    let basis = alg.basis(part);
    let mut m = Matrix::zero(alg.field(), basis.len(), alg.dim());
    for (r, &b) in basis.iter().enumerate() {
        for (c, v) in alg.mul(e, &alg.blade(b)).into_iter().enumerate() {
            m.set(r, c, v);
        }
    }
    m.rank()
}

pub fn center_split(alg: &CliffordAlgebra, part: Part) -> Result<CenterReport> {
    let z = center_basis(alg, part)?;
    let rad = nilradical(alg, &z)?;
    let split = if z.len() == 1 {
        Split::Simple
    } else if let Some(w) = rad.iter().find(|w| is_nilpotent(alg, w, z.len() + 1)) {
        Split::Nilpotent { witness: alg.format(w), nilradical_dim: rad.len() }
    } else if z.len() == 2 {
        quadratic_split(alg, &z, part)?
    } else {
        Split::Other
    };
    Ok(CenterReport {
        part,
        algebra_dim: alg.part_dim(part),
        center_dim: z.len(),
        center_basis: z.iter().map(|e| alg.format(e)).collect(),
        nilradical_dim: rad.len(),
        split,
    })
}

/// `Z = span(1, z)` with `z^2 = a + b z`. Idempotents `x + y z` exist iff
/// `b^2 + 4a` is a nonzero square, with `y = 1/sqrt(b^2 + 4a)` and
/// `x = (1 - b y)/2`.
fn quadratic_split(alg: &CliffordAlgebra, z: &[Elem], part: Part) -> Result<Split> {
    let field = alg.field();
    let zz = alg.mul(&z[1], &z[1]);
    let c = coords(alg, z, &zz)?;
    let (a, b) = (&c[0], &c[1]);
    let disc = &(b * b) + &(&field.from_i64(4) * a);
    let Some(root) = disc.sqrt().filter(|r| !r.is_zero()) else {
        return Ok(Split::QuadraticExtension { discriminant: disc.to_string() });
    };
    let y = root.inv()?;
    let half = field.from_ratio(1, 2)?;
    let x = &half * &(&field.one() - &(b * &y));
    let e = alg.add(&alg.scale(&x, &z[0]), &alg.scale(&y, &z[1]));
    if alg.mul(&e, &e) != e {
        return Err(Error::Failed("the computed central element is not idempotent".into()));
    }
    let f = alg.sub(&alg.one(), &e);
    Ok(Split::Idempotent {
        idempotent: alg.format(&e),
        blocks: vec![left_ideal_dim(alg, &e, part), left_ideal_dim(alg, &f, part)],
    })
}
