//! Dense univariate polynomials over an exact field.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};

use super::field::{Field, FieldElem};
use crate::error::{Error, Result};

/// Coefficients stored low to high with no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UPoly {
    field: Field,
    coeffs: Vec<FieldElem>,
}

impl UPoly {
    pub fn new(field: &Field, mut coeffs: Vec<FieldElem>) -> UPoly {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        UPoly {
            field: *field,
            coeffs,
        }
    }

    pub fn zero(field: &Field) -> UPoly {
        UPoly {
            field: *field,
            coeffs: Vec::new(),
        }
    }

    pub fn constant(field: &Field, c: FieldElem) -> UPoly {
        UPoly::new(field, vec![c])
    }

    /// The polynomial t.
    pub fn t(field: &Field) -> UPoly {
        UPoly::new(field, vec![field.zero(), field.one()])
    }

    pub fn from_i64s(field: &Field, cs: &[i64]) -> UPoly {
        UPoly::new(field, cs.iter().map(|&c| field.from_i64(c)).collect())
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn coeffs(&self) -> &[FieldElem] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn lc(&self) -> FieldElem {
        self.coeffs
            .last()
            .cloned()
            .unwrap_or_else(|| self.field.zero())
    }

    pub fn eval(&self, x: &FieldElem) -> FieldElem {
        let mut acc = self.field.zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * x) + c;
        }
        acc
    }

    pub fn add(&self, o: &UPoly) -> UPoly {
        let n = self.coeffs.len().max(o.coeffs.len());
        let z = self.field.zero();
        let cs = (0..n)
            .map(|i| self.coeffs.get(i).unwrap_or(&z) + o.coeffs.get(i).unwrap_or(&z))
            .collect();
        UPoly::new(&self.field, cs)
    }

    pub fn neg(&self) -> UPoly {
        UPoly::new(&self.field, self.coeffs.iter().map(|c| -c).collect())
    }

    pub fn sub(&self, o: &UPoly) -> UPoly {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &UPoly) -> UPoly {
        if self.is_zero() || o.is_zero() {
            return UPoly::zero(&self.field);
        }
        let mut cs = vec![self.field.zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                cs[i + j] = &cs[i + j] + &(a * b);
            }
        }
        UPoly::new(&self.field, cs)
    }

    pub fn scale(&self, c: &FieldElem) -> UPoly {
        UPoly::new(&self.field, self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn monic(&self) -> UPoly {
        if self.is_zero() {
            return self.clone();
        }
        self.scale(&self.lc().inv().expect("nonzero leading coefficient"))
    }

    pub fn div_rem(&self, d: &UPoly) -> Result<(UPoly, UPoly)> {
        let dd = d.degree().ok_or(Error::DivisionByZero)?;
        let inv = d.lc().inv()?;
        let mut r = self.coeffs.clone();
        let mut q = vec![self.field.zero(); r.len().saturating_sub(dd)];
        while r.len() > dd {
            let k = r.len() - 1 - dd;
            let c = &r[r.len() - 1] * &inv;
            for (i, b) in d.coeffs.iter().enumerate() {
                r[k + i] = &r[k + i] - &(&c * b);
            }
            q[k] = c;
            r.pop();
            while r.last().is_some_and(|c| c.is_zero()) {
                r.pop();
            }
        }
        Ok((UPoly::new(&self.field, q), UPoly::new(&self.field, r)))
    }

    /// Monic gcd (zero if both are zero).
    pub fn gcd(&self, o: &UPoly) -> UPoly {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let r = a.div_rem(&b).expect("nonzero divisor").1;
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn derivative(&self) -> UPoly {
        let cs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c * &self.field.from_i64(i as i64))
            .collect();
        UPoly::new(&self.field, cs)
    }

    /// `self^e mod m`.
    pub fn pow_mod(&self, mut e: u64, m: &UPoly) -> Result<UPoly> {
        let mut base = self.div_rem(m)?.1;
        let mut acc = UPoly::constant(&self.field, self.field.one()).div_rem(m)?.1;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base).div_rem(m)?.1;
            }
            base = base.mul(&base).div_rem(m)?.1;
            e >>= 1;
        }
        Ok(acc)
    }

    /// Lagrange interpolation through distinct nodes.
    pub fn interpolate(field: &Field, pts: &[(FieldElem, FieldElem)]) -> Result<UPoly> {
        let mut acc = UPoly::zero(field);
        for (i, (xi, yi)) in pts.iter().enumerate() {
            let mut basis = UPoly::constant(field, field.one());
            let mut denom = field.one();
            for (j, (xj, _)) in pts.iter().enumerate() {
                if i != j {
                    basis = basis.mul(&UPoly::new(field, vec![-xj, field.one()]));
                    denom = &denom * &(xi - xj);
                }
            }
            acc = acc.add(&basis.scale(&yi.div(&denom)?));
        }
        Ok(acc)
    }

    /// Squarefree decomposition (Yun): pairs (factor, multiplicity) with
    /// self = lc * prod factor^mult. Characteristic must exceed the degree.
    pub fn squarefree(&self) -> Result<Vec<(UPoly, usize)>> {
        let deg = self
            .degree()
            .ok_or_else(|| Error::Degenerate("zero polynomial".into()))?;
        let ch = self.field.characteristic();
        if ch != 0 && ch as u128 <= deg as u128 {
            return Err(Error::Unsupported(
                "squarefree decomposition needs char > degree".into(),
            ));
        }
        let mut out = Vec::new();
        if deg == 0 {
            return Ok(out);
        }
        let f = self.monic();
        let fp = f.derivative();
        let a = f.gcd(&fp);
        let mut b = f.div_rem(&a)?.0;
        let mut c = fp.div_rem(&a)?.0;
        let mut d = c.sub(&b.derivative());
        let mut i = 1;
        loop {
            let g = b.gcd(&d);
            if g.degree().unwrap_or(0) > 0 {
                out.push((g.clone(), i));
            }
            b = b.div_rem(&g)?.0;
            if b.degree().unwrap_or(0) == 0 {
                break;
            }
            c = d.div_rem(&g)?.0;
            d = c.sub(&b.derivative());
            i += 1;
        }
        Ok(out)
    }

    /// Distinct rational roots of a polynomial over Q.
    pub fn rational_roots(&self) -> Result<Vec<FieldElem>> {
        if self.field != Field::Rational {
            return Err(Error::FieldMismatch(
                "rational roots need the rational field".into(),
            ));
        }
        let mut p = self.clone();
        let mut roots = Vec::new();
        // Strip the root 0.
        if p.coeffs.first().is_some_and(|c| c.is_zero()) {
            roots.push(self.field.zero());
            let k = p.coeffs.iter().position(|c| !c.is_zero()).unwrap_or(0);
            p = UPoly::new(&self.field, p.coeffs[k..].to_vec());
        }
        if p.degree().unwrap_or(0) == 0 {
            return Ok(roots);
        }
        // Roots of the squarefree part y^d + ... of g(y) = c_d^(d-1) f(y / c_d)
        // are integers y = c_d r bounded by the Cauchy bound; find them mod a
        // prime, lift p-adically past twice the bound and test exactly.
        let sf = p.div_rem(&p.gcd(&p.derivative()))?.0;
        let ints = integer_coeffs(&sf);
        let d = ints.len() - 1;
        let cd = ints[d].clone();
        let g: Vec<BigInt> = (0..=d)
            .map(|i| if i == d { BigInt::one() } else { &ints[i] * cd.pow((d - 1 - i) as u32) })
            .collect();
        let gp: Vec<BigInt> = (1..=d).map(|i| &g[i] * BigInt::from(i)).collect();
        let bound = g.iter().map(|c| c.abs()).max().unwrap_or_default() + BigInt::one();
        let horner = |cs: &[BigInt], x: &BigInt| cs.iter().rev().fold(BigInt::zero(), |acc, c| acc * x + c);
        let (prime, mod_roots) = modular_roots(&g)?;
        let mut ys = Vec::new();
        for r0 in mod_roots {
            let mut m = BigInt::from(prime);
            let mut r = BigInt::from(r0);
            while m <= &bound * 2 {
                m = &m * &m;
                let inv = mod_inverse(&horner(&gp, &r).mod_floor(&m), &m)
                    .ok_or_else(|| Error::Failed("root lifting hit a multiple root".into()))?;
                r = (&r - horner(&g, &r) * inv).mod_floor(&m);
            }
            let y = if &r * 2 > m { &r - &m } else { r };
            if horner(&g, &y).is_zero() {
                ys.push(y);
            }
        }
        ys.sort();
        roots.extend(ys.into_iter().map(|y| FieldElem::Q(BigRational::new(y, cd.clone()))));
        Ok(roots)
    }

    /// Distinct roots in F_p, by splitting gcd(f, t^p - t).
    pub fn roots_mod_p<R: Rng>(&self, rng: &mut R) -> Result<Vec<FieldElem>> {
        let Field::Prime(p) = self.field else {
            return Err(Error::FieldMismatch(
                "roots_mod_p needs a prime field".into(),
            ));
        };
        if self.is_zero() {
            return Err(Error::Degenerate("zero polynomial".into()));
        }
        let f = self.monic();
        let t = UPoly::t(&self.field);
        let tp = t.pow_mod(p, &f)?;
        let g = f.gcd(&tp.sub(&t));
        let mut out = Vec::new();
        split_linear(&g, p, rng, &mut out)?;
        out.sort_by_key(|a| a.to_string());
        Ok(out)
    }
}

fn split_linear<R: Rng>(g: &UPoly, p: u64, rng: &mut R, out: &mut Vec<FieldElem>) -> Result<()> {
    let Some(d) = g.degree() else { return Ok(()) };
    if d == 0 {
        return Ok(());
    }
    if d == 1 {
        let m = g.monic();
        out.push(-&m.coeffs[0]);
        return Ok(());
    }
    let field = g.field;
    if p == 2 {
        for v in 0..2 {
            if g.eval(&field.from_i64(v)).is_zero() {
                out.push(field.from_i64(v));
            }
        }
        return Ok(());
    }
    loop {
        let a = field.from_i64(rng.random_range(0..p.min(i64::MAX as u64)) as i64);
        let shifted = UPoly::new(&field, vec![a, field.one()]);
        let h = shifted
            .pow_mod((p - 1) / 2, g)?
            .sub(&UPoly::constant(&field, field.one()));
        let f1 = g.gcd(&h);
        let k = f1.degree().unwrap_or(0);
        if k > 0 && k < d {
            let f2 = g.div_rem(&f1)?.0;
            split_linear(&f1, p, rng, out)?;
            split_linear(&f2, p, rng, out)?;
            return Ok(());
        }
    }
}

fn integer_coeffs(p: &UPoly) -> Vec<BigInt> {
    let qs: Vec<BigRational> = p
        .coeffs
        .iter()
        .map(|c| c.as_rational().unwrap().clone())
        .collect();
    let mut l = BigInt::one();
    for q in &qs {
        l = l.lcm(q.denom());
    }
    let ints: Vec<BigInt> = qs
        .iter()
        .map(|q| (q * BigRational::from_integer(l.clone())).to_integer())
        .collect();
    let mut g = BigInt::zero();
    for v in &ints {
        g = g.gcd(v);
    }
    ints.into_iter().map(|v| v / &g).collect()
}

/// A prime keeping the monic integer polynomial `g` squarefree, and the
/// roots of `g` modulo it.
fn modular_roots(g: &[BigInt]) -> Result<(u64, Vec<u64>)> {
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0);
    for p in (32_771u64..).step_by(2).filter(|&p| Field::prime(p).is_ok()).take(200) {
        let field = Field::Prime(p);
        let pb = BigInt::from(p);
        let cs = g.iter().map(|c| field.from_i64(c.mod_floor(&pb).to_i64().unwrap())).collect();
        let f = UPoly::new(&field, cs);
        if f.gcd(&f.derivative()).degree() != Some(0) {
            continue;
        }
        let roots = f
            .roots_mod_p(&mut rng)?
            .into_iter()
            .map(|r| match r {
                FieldElem::Fp { v, .. } => v,
                FieldElem::Q(_) => unreachable!("root over a prime field"),
            })
            .collect();
        return Ok((p, roots));
    }
    Err(Error::Failed("no prime keeps the polynomial squarefree".into()))
}

fn mod_inverse(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    let e = a.extended_gcd(m);
    e.gcd.is_one().then(|| e.x.mod_floor(m))
}

impl fmt::Display for UPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "{c}")?,
                1 => write!(f, "({c})*t")?,
                _ => write!(f, "({c})*t^{i}")?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn yun_decomposition() {
        let q = Field::Rational;
        // (t-1)^2 (t+2)
        let f = UPoly::from_i64s(&q, &[-1, 1])
            .mul(&UPoly::from_i64s(&q, &[-1, 1]))
            .mul(&UPoly::from_i64s(&q, &[2, 1]));
        let sq = f.squarefree().unwrap();
        let total: usize = sq.iter().map(|(g, m)| g.degree().unwrap() * m).sum();
        assert_eq!(total, 3);
        assert!(sq
            .iter()
            .any(|(g, m)| *m == 2 && *g == UPoly::from_i64s(&q, &[-1, 1])));
    }

    #[test]
    fn rational_roots_of_cubic() {
        let q = Field::Rational;
        // (t+1)(2t+1)(3t+1)
        let f = UPoly::from_i64s(&q, &[1, 1])
            .mul(&UPoly::from_i64s(&q, &[1, 2]))
            .mul(&UPoly::from_i64s(&q, &[1, 3]));
        let mut r: Vec<String> = f
            .rational_roots()
            .unwrap()
            .iter()
            .map(|x| x.to_string())
            .collect();
        r.sort();
        assert_eq!(r, vec!["-1", "-1/2", "-1/3"]);
    }

    #[test]
    fn rational_roots_with_large_coefficients() {
        let q = Field::Rational;
        // (1234567 t + 891011)(t - 3)^2 (t^2 + 2) with a repeated root.
        let f = UPoly::from_i64s(&q, &[891_011, 1_234_567])
            .mul(&UPoly::from_i64s(&q, &[-3, 1]))
            .mul(&UPoly::from_i64s(&q, &[-3, 1]))
            .mul(&UPoly::from_i64s(&q, &[2, 0, 1]))
            .scale(&q.from_i64(1_000_000_007));
        let r: Vec<String> = f.rational_roots().unwrap().iter().map(|x| x.to_string()).collect();
        assert_eq!(r, vec!["-891011/1234567", "3"]);
        let g = UPoly::from_i64s(&q, &[0, 0, 5, 1]);
        let r: Vec<String> = g.rational_roots().unwrap().iter().map(|x| x.to_string()).collect();
        assert_eq!(r, vec!["0", "-5"]);
    }

    #[test]
    fn roots_over_prime_field() {
        let f7 = Field::prime(101).unwrap();
        let f = UPoly::from_i64s(&f7, &[-3, 1])
            .mul(&UPoly::from_i64s(&f7, &[-5, 1]))
            .mul(&UPoly::from_i64s(&f7, &[1, 0, 1]));
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let r = f.roots_mod_p(&mut rng).unwrap();
        // t^2 + 1 splits mod 101 (101 = 1 mod 4), so four roots.
        assert_eq!(r.len(), 4);
        for x in &r {
            assert!(f.eval(x).is_zero());
        }
    }

    #[test]
    fn interpolation_recovers_polynomial() {
        let q = Field::Rational;
        let f = UPoly::from_i64s(&q, &[3, 0, -2, 1]);
        let pts: Vec<_> = (0..4)
            .map(|i| (q.from_i64(i), f.eval(&q.from_i64(i))))
            .collect();
        assert_eq!(UPoly::interpolate(&q, &pts).unwrap(), f);
    }
}
