//! Exact scalars: prime fields with word-sized residues and the rationals.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The base field. Prime moduli are limited to `p < 2^31` so that products
/// of residues fit in a `u64` before reduction.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Field {
    Prime { p: u32 },
    Rational,
}

impl Field {
    pub fn prime(p: u64) -> Result<Field> {
        if p >= 1 << 31 || !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(Field::Prime { p: p as u32 })
    }

    pub fn zero(&self) -> Scalar {
        self.from_i64(0)
    }

    pub fn one(&self) -> Scalar {
        self.from_i64(1)
    }

    pub fn from_i64(&self, v: i64) -> Scalar {
        match *self {
            Field::Prime { p } => Scalar::Mod {
                value: v.rem_euclid(p as i64) as u32,
                p,
            },
            Field::Rational => Scalar::Rat(BigRational::from_integer(BigInt::from(v))),
        }
    }

    /// `num / den` as a field element.
    pub fn ratio(&self, num: i64, den: i64) -> Result<Scalar> {
        let d = self.from_i64(den);
        self.from_i64(num).try_mul(&d.inv()?)
    }

    /// Number of elements, `None` for the rationals.
    pub fn order(&self) -> Option<u64> {
        match *self {
            Field::Prime { p } => Some(p as u64),
            Field::Rational => None,
        }
    }

    /// Parses a decimal literal such as `"13"`, `"-2/3"`; prime-field values are
    /// reduced to their canonical residue.
    pub fn parse(&self, s: &str) -> Result<Scalar> {
        let bad = || Error::BadScalar(s.to_string());
        let t = s.trim();
        let (num, den) = match t.split_once('/') {
            Some((a, b)) => (
                BigInt::from_str(a.trim()).map_err(|_| bad())?,
                BigInt::from_str(b.trim()).map_err(|_| bad())?,
            ),
            None => (BigInt::from_str(t).map_err(|_| bad())?, BigInt::one()),
        };
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        self.from_bigints(&num, &den)
    }

    pub fn from_bigints(&self, num: &BigInt, den: &BigInt) -> Result<Scalar> {
        match *self {
            Field::Prime { p } => {
                let pb = BigInt::from(p);
                let n = num.mod_floor(&pb).to_u32().unwrap();
                let d = den.mod_floor(&pb).to_u32().unwrap();
                let n = Scalar::Mod { value: n, p };
                let d = Scalar::Mod { value: d, p };
                n.try_mul(&d.inv()?)
            }
            Field::Rational => {
                if den.is_zero() {
                    return Err(Error::DivisionByZero);
                }
                Ok(Scalar::Rat(BigRational::new(num.clone(), den.clone())))
            }
        }
    }

    /// Smallest primitive `n`-th root of unity (by canonical residue).
    pub fn root_of_unity(&self, n: u64) -> Result<Scalar> {
        if n == 0 {
            return Err(Error::NoSuchRoot(n, self.to_string()));
        }
        match *self {
            Field::Rational => match n {
                1 => Ok(self.one()),
                2 => Ok(self.from_i64(-1)),
                _ => Err(Error::NoSuchRoot(n, self.to_string())),
            },
            Field::Prime { p } => {
                if !(p as u64 - 1).is_multiple_of(n) {
                    return Err(Error::NoSuchRoot(n, self.to_string()));
                }
                for c in 1..p {
                    let z = Scalar::Mod { value: c, p };
                    if z.pow(n) == self.one() && (1..n).all(|m| z.pow(m) != self.one()) {
                        return Ok(z);
                    }
                }
                Err(Error::NoSuchRoot(n, self.to_string()))
            }
        }
    }

    /// The `i`-th element of a fixed enumeration of a finite field.
    pub fn element(&self, i: u64) -> Scalar {
        self.from_i64(i as i64)
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Prime { p } => write!(f, "F_{p}"),
            Field::Rational => write!(f, "Q"),
        }
    }
}

impl FromStr for Field {
    type Err = Error;

    /// Accepts `p:7`, `F7`, `7` or `Q`.
    fn from_str(s: &str) -> Result<Field> {
        let t = s.trim();
        if t.eq_ignore_ascii_case("q") || t.eq_ignore_ascii_case("rational") {
            return Ok(Field::Rational);
        }
        let digits = t
            .trim_start_matches("p:")
            .trim_start_matches('F')
            .trim_start_matches("F_");
        let p: u64 = digits.parse().map_err(|_| Error::BadScalar(s.to_string()))?;
        Field::prime(p)
    }
}

pub(crate) fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// An exact field element in canonical form: a residue in `[0, p)` or a
/// reduced fraction with positive denominator. Equality is representation
/// equality.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Scalar {
    Mod { value: u32, p: u32 },
    Rat(BigRational),
}

/// Arithmetic operations dispatched by [`arith`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Op {
    Add,
    Sub,
    Mul,
    Div,
    Neg,
    Inv,
}

/// Checked arithmetic entry point; `b` is ignored for unary operations.
pub fn arith(op: Op, a: &Scalar, b: Option<&Scalar>) -> Result<Scalar> {
    let need_b = || b.ok_or_else(|| Error::Precondition("binary operation needs two operands".into()));
    match op {
        Op::Add => a.try_add(need_b()?),
        Op::Sub => a.try_sub(need_b()?),
        Op::Mul => a.try_mul(need_b()?),
        Op::Div => a.try_mul(&need_b()?.inv()?),
        Op::Neg => Ok(-a),
        Op::Inv => a.inv(),
    }
}

impl Scalar {
    pub fn field(&self) -> Field {
        match self {
            Scalar::Mod { p, .. } => Field::Prime { p: *p },
            Scalar::Rat(_) => Field::Rational,
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Mod { value, .. } => *value == 0,
            Scalar::Rat(r) => r.is_zero(),
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Mod { value, .. } => *value == 1,
            Scalar::Rat(r) => r.is_one(),
        }
    }

    fn check(&self, other: &Scalar) -> Result<()> {
        if self.field() != other.field() {
            return Err(Error::FieldMismatch(self.field().to_string(), other.field().to_string()));
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Scalar) -> Result<Scalar> {
        self.check(other)?;
        Ok(self + other)
    }

    pub fn try_sub(&self, other: &Scalar) -> Result<Scalar> {
        self.check(other)?;
        Ok(self - other)
    }

    pub fn try_mul(&self, other: &Scalar) -> Result<Scalar> {
        self.check(other)?;
        Ok(self * other)
    }

    pub fn inv(&self) -> Result<Scalar> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        match self {
            Scalar::Mod { value, p } => {
                // Fermat: a^(p-2)
                Ok(Scalar::Mod {
                    value: pow_mod(*value as u64, *p as u64 - 2, *p as u64) as u32,
                    p: *p,
                })
            }
            Scalar::Rat(r) => Ok(Scalar::Rat(r.recip())),
        }
    }

    pub fn pow(&self, mut e: u64) -> Scalar {
        let mut base = self.clone();
        let mut acc = self.field().one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// In-place `self += a * b`.
    #[inline]
    pub fn add_mul(&mut self, a: &Scalar, b: &Scalar) {
        match (self, a, b) {
            (Scalar::Mod { value, p }, Scalar::Mod { value: x, .. }, Scalar::Mod { value: y, .. }) => {
                let p64 = *p as u64;
                *value = ((*value as u64 + (*x as u64 * *y as u64) % p64) % p64) as u32;
            }
            (s, a, b) => {
                let t = &*s + &(a * b);
                *s = t;
            }
        }
    }

    #[inline]
    pub fn add_assign_ref(&mut self, a: &Scalar) {
        match (self, a) {
            (Scalar::Mod { value, p }, Scalar::Mod { value: x, .. }) => {
                *value = ((*value as u64 + *x as u64) % *p as u64) as u32;
            }
            (s, a) => {
                let t = &*s + a;
                *s = t;
            }
        }
    }
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1u64 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    acc
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Mod { value, .. } => write!(f, "{value}"),
            Scalar::Rat(r) => {
                if r.denom().is_one() {
                    write!(f, "{}", r.numer())
                } else {
                    write!(f, "{}/{}", r.numer(), r.denom())
                }
            }
        }
    }
}

// The operator impls assume both operands come from the same field; the
// tensor engine only ever combines scalars of one datum. Use the `try_*`
// methods (or `arith`) when that is not guaranteed.
// Most coefficients in practice are 0, ±1 or integers; skip the gcd
// reductions of the general fraction arithmetic for those.
#[inline]
fn rat_mul(a: &BigRational, b: &BigRational) -> BigRational {
    if a.is_zero() || b.is_zero() {
        BigRational::zero()
    } else if a.is_one() {
        b.clone()
    } else if b.is_one() {
        a.clone()
    } else if a.is_integer() && b.is_integer() {
        BigRational::from_integer(a.numer() * b.numer())
    } else {
        a * b
    }
}

#[inline]
fn rat_add(a: &BigRational, b: &BigRational) -> BigRational {
    if a.is_zero() {
        b.clone()
    } else if b.is_zero() {
        a.clone()
    } else if a.is_integer() && b.is_integer() {
        BigRational::from_integer(a.numer() + b.numer())
    } else {
        a + b
    }
}

impl Add for &Scalar {
    type Output = Scalar;
    #[inline]
    fn add(self, rhs: &Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Mod { value: a, p }, Scalar::Mod { value: b, p: q }) => {
                debug_assert_eq!(p, q);
                Scalar::Mod {
                    value: ((*a as u64 + *b as u64) % *p as u64) as u32,
                    p: *p,
                }
            }
            (Scalar::Rat(a), Scalar::Rat(b)) => Scalar::Rat(rat_add(a, b)),
            _ => panic!("field mismatch in scalar addition"),
        }
    }
}

impl Sub for &Scalar {
    type Output = Scalar;
    #[inline]
    fn sub(self, rhs: &Scalar) -> Scalar {
        self + &(-rhs)
    }
}

impl Mul for &Scalar {
    type Output = Scalar;
    #[inline]
    fn mul(self, rhs: &Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Mod { value: a, p }, Scalar::Mod { value: b, p: q }) => {
                debug_assert_eq!(p, q);
                Scalar::Mod {
                    value: (*a as u64 * *b as u64 % *p as u64) as u32,
                    p: *p,
                }
            }
            (Scalar::Rat(a), Scalar::Rat(b)) => Scalar::Rat(rat_mul(a, b)),
            _ => panic!("field mismatch in scalar multiplication"),
        }
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    #[inline]
    fn neg(self) -> Scalar {
        match self {
            Scalar::Mod { value, p } => Scalar::Mod {
                value: if *value == 0 { 0 } else { p - value },
                p: *p,
            },
            Scalar::Rat(a) => Scalar::Rat(-a),
        }
    }
}

impl Scalar {
    /// Sign-aware helper used by the DSL printer for rational literals.
    pub fn is_negative(&self) -> bool {
        match self {
            Scalar::Mod { .. } => false,
            Scalar::Rat(r) => r.is_negative(),
        }
    }
}
