//! Corank stratification of linear systems of symmetric matrices.

use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::QuadraticForm;
use crate::error::{Error, Result};
use crate::exactalg::{Field, FieldElem, GradingSpec, Matrix, Poly, Ring, UPoly, VarSpec};

/// `det(sum_i x_i M_i)` as a form of degree m in `x1..xl`, by Laplace
/// expansion over column subsets.
pub fn symbolic_det(basis: &[QuadraticForm]) -> Result<Poly> {
    let field = *basis[0].field();
    let l = basis.len();
    let m = basis[0].dim();
    let vars = (1..=l).map(|k| VarSpec::new(&format!("x{k}"), &[0], 0, 1)).collect();
    let ring = Ring::new(field, GradingSpec::new(vars, vec![0], None)?);
    let entry = |r: usize, c: usize| {
        (0..l).fold(Poly::zero(&ring), |acc, k| &acc + &Poly::var(&ring, k).scale(basis[k].matrix.get(r, c)))
    };
    let entries: Vec<Vec<Poly>> = (0..m).map(|r| (0..m).map(|c| entry(r, c)).collect()).collect();
    let mut dp: HashMap<u32, Poly> = HashMap::from([(0, Poly::one(&ring))]);
    for row in entries.iter() {
        let mut next: HashMap<u32, Poly> = HashMap::new();
        for (mask, p) in &dp {
            for (c, e) in row.iter().enumerate() {
                if mask >> c & 1 == 1 || e.is_zero() {
                    continue;
                }
                let above = (mask >> c).count_ones() % 2 == 1;
                let t = p * e;
                let t = if above { -&t } else { t };
                let slot = next.entry(mask | 1 << c).or_insert_with(|| Poly::zero(&ring));
                *slot = &*slot + &t;
            }
        }
        next.retain(|_, p| !p.is_zero());
        dp = next;
    }
    Ok(dp.remove(&((1u32 << m) - 1)).unwrap_or_else(|| Poly::zero(&ring)))
}

/// A stratum of a pencil: a rational parameter, the point at infinity, or
/// the roots of a factor of the determinant without rational roots.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StratumPoint {
    pub location: String,
    /// Number of geometric points.
    pub degree: usize,
    /// Multiplicity as a root of the determinant.
    pub multiplicity: usize,
    pub corank: usize,
    /// False when `corank` is only a lower bound.
    pub corank_exact: bool,
    /// The pencil meets the discriminant transversally: a simple root of
    /// corank one, where some (m-1)-minor is nonzero.
    pub smooth: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PencilStrata {
    /// `det(A + tB)`.
    pub det: String,
    pub identically_singular: bool,
    pub points: Vec<StratumPoint>,
    /// Members of corank at least 1 with multiplicity; equals m unless
    /// every member is singular.
    pub total_multiplicity: usize,
    /// Members of corank exactly 1, with multiplicity.
    pub corank1_count: usize,
    /// Geometric points of corank at least 2.
    pub corank_ge2_count: usize,
}

fn member(a: &Matrix, b: &Matrix, t: &FieldElem) -> Matrix {
    let mut out = a.clone();
    for r in 0..a.rows() {
        for c in 0..a.cols() {
            out.set(r, c, a.get(r, c) + &(t * b.get(r, c)));
        }
    }
    out
}

fn submatrix(a: &Matrix, skip_r: usize, skip_c: usize) -> Matrix {
    let n = a.rows();
    let mut out = Matrix::zero(a.field(), n - 1, n - 1);
    for (i, r) in (0..n).filter(|&r| r != skip_r).enumerate() {
        for (j, c) in (0..n).filter(|&c| c != skip_c).enumerate() {
            out.set(i, j, a.get(r, c).clone());
        }
    }
    out
}

/// gcd of all (m-1)-minors of `A + tB`, by interpolation in t.
fn minors_gcd(a: &Matrix, b: &Matrix) -> Result<UPoly> {
    let field = *a.field();
    let m = a.rows();
    let nodes: Vec<FieldElem> = (0..m as i64).map(|k| field.from_i64(k)).collect();
    let members: Vec<Matrix> = nodes.iter().map(|t| member(a, b, t)).collect();
    let mut g = UPoly::zero(&field);
    for r in 0..m {
        for c in 0..m {
            let pts = nodes
                .iter()
                .zip(&members)
                .map(|(t, mm)| Ok((t.clone(), submatrix(mm, r, c).det()?)))
                .collect::<Result<Vec<_>>>()?;
            g = g.gcd(&UPoly::interpolate(&field, &pts)?);
            if g.degree() == Some(0) {
                return Ok(g);
            }
        }
    }
    Ok(g)
}

fn roots<R: Rng>(f: &UPoly, rng: &mut R) -> Result<Vec<FieldElem>> {
    match f.field() {
        Field::Rational => f.rational_roots(),
        Field::Prime(_) => f.roots_mod_p(rng),
    }
}

/// Stratifies the pencil `A + tB` (with `B` at t = infinity) by corank.
pub fn pencil_strata<R: Rng>(a: &Matrix, b: &Matrix, rng: &mut R) -> Result<PencilStrata> {
    let field = *a.field();
    let m = a.rows();
    if field.characteristic() != 0 && field.characteristic() <= m as u64 {
        return Err(Error::Unsupported(format!("characteristic must exceed {m}")));
    }
    let pts = (0..=m as i64)
        .map(|k| {
            let t = field.from_i64(k);
            let d = member(a, b, &t).det()?;
            Ok((t, d))
        })
        .collect::<Result<Vec<_>>>()?;
    let det = UPoly::interpolate(&field, &pts)?;
    let mut out = PencilStrata {
        det: det.to_string(),
        identically_singular: det.is_zero(),
        points: Vec::new(),
        total_multiplicity: 0,
        corank1_count: 0,
        corank_ge2_count: 0,
    };
    if det.is_zero() {
        return Ok(out);
    }
    let deg = det.degree().unwrap_or(0);
    if deg < m {
        let corank = m - b.rank();
        out.points.push(StratumPoint {
            location: "t = inf".into(),
            degree: 1,
            multiplicity: m - deg,
            corank,
            corank_exact: true,
            smooth: corank == 1 && m - deg == 1,
        });
    }
    let mut gcd: Option<UPoly> = None;
    for (f, k) in det.squarefree()? {
        let mut rest = f.clone();
        for alpha in roots(&f, rng)? {
            let corank = m - member(a, b, &alpha).rank();
            out.points.push(StratumPoint {
                location: format!("t = {alpha}"),
                degree: 1,
                multiplicity: k,
                corank,
                corank_exact: true,
                smooth: corank == 1 && k == 1,
            });
            rest = rest.div_rem(&UPoly::new(&field, vec![-alpha, field.one()]))?.0;
        }
        let d = rest.degree().unwrap_or(0);
        if d == 0 {
            continue;
        }
        // At a simple root the derivative of det, a combination of the
        // (m-1)-minors, is nonzero, so the corank is exactly one.
        let (bad, good) = if k == 1 {
            (UPoly::constant(&field, field.one()), rest)
        } else {
            if gcd.is_none() {
                gcd = Some(minors_gcd(a, b)?);
            }
            let h = rest.gcd(gcd.as_ref().unwrap());
            let good = rest.div_rem(&h)?.0;
            (h, good)
        };
        if let Some(e) = bad.degree().filter(|&e| e > 0) {
            out.points.push(StratumPoint {
                location: format!("roots of {}", bad.monic()),
                degree: e,
                multiplicity: k,
                corank: 2,
                corank_exact: false,
                smooth: false,
            });
        }
        if let Some(e) = good.degree().filter(|&e| e > 0) {
            out.points.push(StratumPoint {
                location: format!("roots of {}", good.monic()),
                degree: e,
                multiplicity: k,
                corank: 1,
                corank_exact: true,
                smooth: k == 1,
            });
        }
    }
    for p in &out.points {
        out.total_multiplicity += p.degree * p.multiplicity;
        if p.corank == 1 {
            out.corank1_count += p.degree * p.multiplicity;
        } else {
            out.corank_ge2_count += p.degree;
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StrataReport {
    pub m: usize,
    pub l: usize,
    /// `det(x1 M1 + ... + xl Ml)`.
    pub discriminant: String,
    pub discriminant_degree: Option<usize>,
    /// The stratification itself for pencils.
    pub pencil: Option<PencilStrata>,
    /// For l >= 3: the stratification restricted to random lines.
    pub sampled_lines: Vec<PencilStrata>,
    /// Corank >= 2 points met by the sampled lines; zero suggests the
    /// corank-2 locus has codimension at least two in the projective system.
    pub corank2_hits: usize,
}

impl StrataReport {
    pub fn summary(&self) -> String {
        let mut s = format!("linear system of dimension {} in Sym^2 of a {}-dimensional space\n", self.l, self.m);
        s += &format!("discriminant: {}\n", self.discriminant);
        let describe = |p: &PencilStrata| {
            let mut t = format!("  det(A + tB) = {}\n", p.det);
            for x in &p.points {
                t += &format!(
                    "  {}: {} point(s), multiplicity {}, corank {}{}{}\n",
                    x.location,
                    x.degree,
                    x.multiplicity,
                    if x.corank_exact { "" } else { ">= " },
                    x.corank,
                    if x.smooth { ", transverse" } else { "" }
                );
            }
            t += &format!(
                "  singular members with multiplicity: {} (corank 1: {}, corank >= 2 points: {})\n",
                p.total_multiplicity, p.corank1_count, p.corank_ge2_count
            );
            t
        };
        if let Some(p) = &self.pencil {
            s += &describe(p);
        }
        if !self.sampled_lines.is_empty() {
            s += &format!("{} sampled lines, corank >= 2 hits: {}\n", self.sampled_lines.len(), self.corank2_hits);
        }
        s
    }
}

fn combine(basis: &[QuadraticForm], coeffs: &[i64]) -> Matrix {
    let field = basis[0].field();
    let m = basis[0].dim();
    let mut out = Matrix::zero(field, m, m);
    for (q, &c) in basis.iter().zip(coeffs) {
        let c = field.from_i64(c);
        for r in 0..m {
            for k in 0..m {
                out.set(r, k, out.get(r, k) + &(&c * q.matrix.get(r, k)));
            }
        }
    }
    out
}

fn flatten_rank(ms: &[&Matrix]) -> usize {
    let field = ms[0].field();
    let m = ms[0].rows();
    let rows: Vec<Vec<FieldElem>> =
        ms.iter().map(|a| (0..m * m).map(|k| a.get(k / m, k % m).clone()).collect()).collect();
    Matrix::from_rows(field, rows).map(|x| x.rank()).unwrap_or(0)
}

pub fn stratify_system(basis: &[QuadraticForm], samples: usize, seed: u64) -> Result<StrataReport> {
    let l = basis.len();
    if l < 2 {
        return Err(Error::Unsupported("a linear system needs at least two members".into()));
    }
    let m = basis[0].dim();
    if basis.iter().any(|q| q.dim() != m || q.field() != basis[0].field()) {
        return Err(Error::ShapeMismatch("members differ in size or field".into()));
    }
    if m > super::MAX_GENERATORS {
        return Err(Error::SizeCap(format!("matrices of size {m} exceed the cap")));
    }
    let mats: Vec<&Matrix> = basis.iter().map(|q| &q.matrix).collect();
    if flatten_rank(&mats) < l {
        return Err(Error::Degenerate("the members are linearly dependent".into()));
    }
    let disc = symbolic_det(basis)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = StrataReport {
        m,
        l,
        discriminant: disc.to_string(),
        discriminant_degree: disc.degree().map(|d| d.w as usize),
        pencil: None,
        sampled_lines: Vec::new(),
        corank2_hits: 0,
    };
    if l == 2 {
        report.pencil = Some(pencil_strata(mats[0], mats[1], &mut rng)?);
        return Ok(report);
    }
    while report.sampled_lines.len() < samples {
        let c: Vec<i64> = (0..l).map(|_| rng.random_range(-9..=9)).collect();
        let d: Vec<i64> = (0..l).map(|_| rng.random_range(-9..=9)).collect();
        let (a, b) = (combine(basis, &c), combine(basis, &d));
        if flatten_rank(&[&a, &b]) < 2 {
            continue;
        }
        let p = pencil_strata(&a, &b, &mut rng)?;
        report.corank2_hits += p.corank_ge2_count;
        report.sampled_lines.push(p);
    }
    Ok(report)
}
