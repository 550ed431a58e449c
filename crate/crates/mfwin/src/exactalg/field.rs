//! Exact coefficient fields: the rationals and prime fields F_p.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A coefficient field.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Field {
    Rational,
    Prime(u64),
}

/// An element of a [`Field`]. Prime-field residues carry their modulus.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum FieldElem {
    Q(BigRational),
    Fp { v: u64, p: u64 },
}

fn mulmod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn powmod(mut a: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    a %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = mulmod(r, a, m);
        }
        a = mulmod(a, a, m);
        e >>= 1;
    }
    r
}

/// Deterministic Miller-Rabin for 64-bit integers.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'outer: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = powmod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulmod(x, x, n);
            if x == n - 1 {
                continue 'outer;
            }
        }
        return false;
    }
    true
}

fn big_mod(x: &BigInt, p: u64) -> u64 {
    let r = x.mod_floor(&BigInt::from(p));
    r.to_u64().expect("residue fits in u64")
}

impl Field {
    /// The prime field F_p; rejects composite moduli.
    pub fn prime(p: u64) -> Result<Field> {
        if p > (1u64 << 62) || !is_prime_u64(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(Field::Prime(p))
    }

    pub fn characteristic(&self) -> u64 {
        match self {
            Field::Rational => 0,
            Field::Prime(p) => *p,
        }
    }

    pub fn zero(&self) -> FieldElem {
        self.from_i64(0)
    }

    pub fn one(&self) -> FieldElem {
        self.from_i64(1)
    }

    pub fn from_i64(&self, n: i64) -> FieldElem {
        match self {
            Field::Rational => FieldElem::Q(BigRational::from_integer(BigInt::from(n))),
            Field::Prime(p) => FieldElem::Fp {
                v: (n as i128).rem_euclid(*p as i128) as u64,
                p: *p,
            },
        }
    }

    /// Embeds the fraction `num/den`.
    pub fn from_ratio(&self, num: i64, den: i64) -> Result<FieldElem> {
        self.from_bigrational(&BigRational::new_raw(BigInt::from(num), BigInt::from(den)))
    }

    pub fn from_bigrational(&self, q: &BigRational) -> Result<FieldElem> {
        if q.denom().is_zero() {
            return Err(Error::DivisionByZero);
        }
        match self {
            Field::Rational => Ok(FieldElem::Q(BigRational::new(
                q.numer().clone(),
                q.denom().clone(),
            ))),
            Field::Prime(p) => {
                let n = big_mod(q.numer(), *p);
                let d = big_mod(q.denom(), *p);
                if d == 0 {
                    return Err(Error::DivisionByZero);
                }
                let inv = powmod(d, p - 2, *p);
                Ok(FieldElem::Fp {
                    v: mulmod(n, inv, *p),
                    p: *p,
                })
            }
        }
    }

    /// Parses `"n"` or `"num/den"`.
    pub fn parse(&self, s: &str) -> Result<FieldElem> {
        let s = s.trim();
        let (num, den) = match s.split_once('/') {
            Some((a, b)) => (a.trim(), b.trim()),
            None => (s, "1"),
        };
        let num: BigInt = num
            .parse()
            .map_err(|_| Error::Parse(format!("bad coefficient `{s}`")))?;
        let den: BigInt = den
            .parse()
            .map_err(|_| Error::Parse(format!("bad coefficient `{s}`")))?;
        self.from_bigrational(&BigRational::new_raw(num, den))
    }

    /// Parses `rational` or `fp:<p>`.
    pub fn parse_spec(s: &str) -> Result<Field> {
        let s = s.trim();
        if s == "rational" || s == "Q" {
            return Ok(Field::Rational);
        }
        if let Some(p) = s.strip_prefix("fp:") {
            let p: u64 = p
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("bad field spec `{s}`")))?;
            return Field::prime(p);
        }
        Err(Error::Parse(format!("bad field spec `{s}`")))
    }

    pub fn spec_string(&self) -> String {
        match self {
            Field::Rational => "rational".to_string(),
            Field::Prime(p) => format!("fp:{p}"),
        }
    }
}

impl FieldElem {
    pub fn field(&self) -> Field {
        match self {
            FieldElem::Q(_) => Field::Rational,
            FieldElem::Fp { p, .. } => Field::Prime(*p),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            FieldElem::Q(q) => q.is_zero(),
            FieldElem::Fp { v, .. } => *v == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            FieldElem::Q(q) => q.is_one(),
            FieldElem::Fp { v, .. } => *v == 1,
        }
    }

    fn check(&self, other: &FieldElem) {
        assert_eq!(self.field(), other.field(), "field mismatch in arithmetic");
    }

    /// Multiplicative inverse; rejects zero.
    pub fn inv(&self) -> Result<FieldElem> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(match self {
            FieldElem::Q(q) => FieldElem::Q(q.recip()),
            FieldElem::Fp { v, p } => FieldElem::Fp {
                v: powmod(*v, p - 2, *p),
                p: *p,
            },
        })
    }

    pub fn div(&self, other: &FieldElem) -> Result<FieldElem> {
        self.check(other);
        Ok(self * &other.inv()?)
    }

    pub fn checked_add(&self, other: &FieldElem) -> Result<FieldElem> {
        if self.field() != other.field() {
            return Err(Error::FieldMismatch(format!(
                "{:?} vs {:?}",
                self.field(),
                other.field()
            )));
        }
        Ok(self + other)
    }

    pub fn pow(&self, mut e: u64) -> FieldElem {
        let mut base = self.clone();
        let mut r = self.field().one();
        while e > 0 {
            if e & 1 == 1 {
                r = &r * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        r
    }

    /// The rational value, if this is a rational element.
    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            FieldElem::Q(q) => Some(q),
            FieldElem::Fp { .. } => None,
        }
    }

    pub fn to_i64(&self) -> Option<i64> {
        match self {
            FieldElem::Q(q) if q.is_integer() => q.numer().to_i64(),
            FieldElem::Q(_) => None,
            FieldElem::Fp { v, .. } => i64::try_from(*v).ok(),
        }
    }

    /// Square root inside the field, if one exists.
    pub fn sqrt(&self) -> Option<FieldElem> {
        match self {
            FieldElem::Q(q) => {
                if q.is_negative() {
                    return None;
                }
                let n = q.numer().sqrt();
                let d = q.denom().sqrt();
                if &(&n * &n) == q.numer() && &(&d * &d) == q.denom() {
                    Some(FieldElem::Q(BigRational::new(n, d)))
                } else {
                    None
                }
            }
            FieldElem::Fp { v, p } => tonelli_shanks(*v, *p).map(|r| FieldElem::Fp { v: r, p: *p }),
        }
    }

    /// Sign-aware canonical key used for deterministic sorting of coefficients.
    pub fn sign(&self) -> i32 {
        match self {
            FieldElem::Q(q) => match q.numer().sign() {
                Sign::Minus => -1,
                Sign::NoSign => 0,
                Sign::Plus => 1,
            },
            FieldElem::Fp { v, .. } => (*v != 0) as i32,
        }
    }
}

fn tonelli_shanks(n: u64, p: u64) -> Option<u64> {
    let n = n % p;
    if n == 0 {
        return Some(0);
    }
    if p == 2 {
        return Some(n);
    }
    if powmod(n, (p - 1) / 2, p) != 1 {
        return None;
    }
    let mut q = p - 1;
    let mut s = 0u32;
    while q.is_multiple_of(2) {
        q /= 2;
        s += 1;
    }
    let mut z = 2;
    while powmod(z, (p - 1) / 2, p) != p - 1 {
        z += 1;
    }
    let mut m = s;
    let mut c = powmod(z, q, p);
    let mut t = powmod(n, q, p);
    let mut r = powmod(n, q.div_ceil(2), p);
    while t != 1 {
        let mut i = 0;
        let mut tt = t;
        while tt != 1 {
            tt = mulmod(tt, tt, p);
            i += 1;
        }
        let b = powmod(c, 1u64 << (m - i - 1), p);
        m = i;
        c = mulmod(b, b, p);
        t = mulmod(t, c, p);
        r = mulmod(r, b, p);
    }
    Some(r)
}

impl fmt::Display for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldElem::Q(q) => {
                if q.is_integer() {
                    write!(f, "{}", q.numer())
                } else {
                    write!(f, "{}/{}", q.numer(), q.denom())
                }
            }
            FieldElem::Fp { v, .. } => write!(f, "{v}"),
        }
    }
}

impl<'a> Add<&'a FieldElem> for &'a FieldElem {
    type Output = FieldElem;
    fn add(self, o: &FieldElem) -> FieldElem {
        self.check(o);
        match (self, o) {
            (FieldElem::Q(a), FieldElem::Q(b)) => FieldElem::Q(a + b),
            (FieldElem::Fp { v: a, p }, FieldElem::Fp { v: b, .. }) => FieldElem::Fp {
                v: ((*a as u128 + *b as u128) % *p as u128) as u64,
                p: *p,
            },
            _ => unreachable!(),
        }
    }
}

impl<'a> Sub<&'a FieldElem> for &'a FieldElem {
    type Output = FieldElem;
    fn sub(self, o: &FieldElem) -> FieldElem {
        self.check(o);
        match (self, o) {
            (FieldElem::Q(a), FieldElem::Q(b)) => FieldElem::Q(a - b),
            (FieldElem::Fp { v: a, p }, FieldElem::Fp { v: b, .. }) => FieldElem::Fp {
                v: ((*a as u128 + (*p - *b) as u128) % *p as u128) as u64,
                p: *p,
            },
            _ => unreachable!(),
        }
    }
}

impl<'a> Mul<&'a FieldElem> for &'a FieldElem {
    type Output = FieldElem;
    fn mul(self, o: &FieldElem) -> FieldElem {
        self.check(o);
        match (self, o) {
            (FieldElem::Q(a), FieldElem::Q(b)) => FieldElem::Q(a * b),
            (FieldElem::Fp { v: a, p }, FieldElem::Fp { v: b, .. }) => FieldElem::Fp {
                v: mulmod(*a, *b, *p),
                p: *p,
            },
            _ => unreachable!(),
        }
    }
}

impl Neg for &FieldElem {
    type Output = FieldElem;
    fn neg(self) -> FieldElem {
        match self {
            FieldElem::Q(a) => FieldElem::Q(-a),
            FieldElem::Fp { v, p } => FieldElem::Fp {
                v: (*p - *v) % *p,
                p: *p,
            },
        }
    }
}

impl Neg for FieldElem {
    type Output = FieldElem;
    fn neg(self) -> FieldElem {
        -&self
    }
}

impl Add for FieldElem {
    type Output = FieldElem;
    fn add(self, o: FieldElem) -> FieldElem {
        &self + &o
    }
}

impl Sub for FieldElem {
    type Output = FieldElem;
    fn sub(self, o: FieldElem) -> FieldElem {
        &self - &o
    }
}

impl Mul for FieldElem {
    type Output = FieldElem;
    fn mul(self, o: FieldElem) -> FieldElem {
        &self * &o
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_arithmetic_is_exact() {
        let q = Field::Rational;
        let a = q.from_ratio(1, 3).unwrap();
        let b = q.from_ratio(1, 6).unwrap();
        assert_eq!((&a + &b).to_string(), "1/2");
        assert_eq!((&a * &b).to_string(), "1/18");
        assert_eq!(a.div(&b).unwrap().to_string(), "2");
        assert!(q.zero().inv().is_err());
    }

    #[test]
    fn prime_field_rejects_composites() {
        assert!(Field::prime(7).is_ok());
        assert_eq!(Field::prime(9), Err(Error::NotPrime(9)));
        assert!(Field::prime(1_000_000_007).is_ok());
    }

    #[test]
    fn prime_field_inverse_and_sqrt() {
        let f = Field::prime(101).unwrap();
        let a = f.from_i64(37);
        assert!((&a * &a.inv().unwrap()).is_one());
        assert_eq!(f.from_ratio(1, 2).unwrap().to_string(), "51");
        let sq = f.from_i64(4).sqrt().unwrap();
        assert_eq!((&sq * &sq).to_string(), "4");
        let q = Field::Rational;
        assert_eq!(
            q.from_ratio(9, 4).unwrap().sqrt().unwrap().to_string(),
            "3/2"
        );
        assert!(q.from_i64(2).sqrt().is_none());
    }

    #[test]
    fn parse_round_trip() {
        let q = Field::Rational;
        assert_eq!(q.parse("-6/4").unwrap().to_string(), "-3/2");
        assert!(q.parse("1/0").is_err());
        assert_eq!(Field::parse_spec("fp:13").unwrap(), Field::Prime(13));
    }
}
