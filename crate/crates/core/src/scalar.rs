//! Exact scalars: arbitrary-precision rationals and residues modulo a prime.

use std::fmt;
use std::hash::Hash;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Describes the field a scalar lives in and builds its constants.
pub trait Field: Clone + PartialEq + Eq + Hash + fmt::Debug + fmt::Display + Send + Sync {
    type Elem: Scalar<F = Self>;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    /// Takes `&self` because a prime field carries its modulus.
    #[allow(clippy::wrong_self_convention)]
    fn from_i64(&self, v: i64) -> Self::Elem;
    /// 0 for the rationals.
    fn characteristic(&self) -> u64;
    /// Parses "n", "-n" or "n/d".
    fn parse(&self, s: &str) -> Result<Self::Elem>;
    /// All elements, for finite fields.
    fn elements(&self) -> Option<Vec<Self::Elem>>;
}

/// An exact field element. Arithmetic operators require both operands to be in the same field;
/// matrix-level operations check this before touching entries.
pub trait Scalar:
    Clone
    + PartialEq
    + Eq
    + Hash
    + fmt::Debug
    + fmt::Display
    + Send
    + Sync
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
    + for<'a> Add<&'a Self, Output = Self>
    + for<'a> Sub<&'a Self, Output = Self>
    + for<'a> Mul<&'a Self, Output = Self>
{
    type F: Field<Elem = Self>;

    fn field(&self) -> Self::F;
    fn is_zero(&self) -> bool;
    fn inv(&self) -> Option<Self>;
    /// An exact square root in the field, if one exists.
    fn sqrt(&self) -> Option<Self>;

    fn is_one(&self) -> bool {
        *self == self.field().one()
    }

    fn div(&self, other: &Self) -> Option<Self> {
        other.inv().map(|i| self.clone() * i)
    }

    /// `self^e` for a non-negative exponent.
    fn pow(&self, e: u32) -> Self {
        let mut acc = self.field().one();
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * &base;
            }
            base = base.clone() * &base;
            e >>= 1;
        }
        acc
    }
}

// ---------------------------------------------------------------------------
// Rationals

pub type Rational = BigRational;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct RationalField;

impl fmt::Display for RationalField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("Q")
    }
}

pub fn parse_rational(s: &str) -> Result<Rational> {
    let t = s.trim();
    let bad = || Error::Parse(format!("invalid rational value '{s}'"));
    let (num, den) = match t.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (t, "1"),
    };
    let num: BigInt = num.parse().map_err(|_| bad())?;
    let den: BigInt = den.parse().map_err(|_| bad())?;
    if den.is_zero() {
        return Err(Error::Parse(format!("zero denominator in '{s}'")));
    }
    Ok(BigRational::new(num, den))
}

impl Field for RationalField {
    type Elem = Rational;

    fn zero(&self) -> Rational {
        Rational::zero()
    }
    fn one(&self) -> Rational {
        Rational::one()
    }
    fn from_i64(&self, v: i64) -> Rational {
        Rational::from_integer(BigInt::from(v))
    }
    fn characteristic(&self) -> u64 {
        0
    }
    fn parse(&self, s: &str) -> Result<Rational> {
        parse_rational(s)
    }
    fn elements(&self) -> Option<Vec<Rational>> {
        None
    }
}

impl Scalar for Rational {
    type F = RationalField;

    fn field(&self) -> RationalField {
        RationalField
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn inv(&self) -> Option<Self> {
        if Zero::is_zero(self) {
            None
        } else {
            Some(self.recip())
        }
    }
    fn sqrt(&self) -> Option<Self> {
        if self.is_negative() {
            return None;
        }
        let n = self.numer().sqrt();
        let d = self.denom().sqrt();
        if &(&n * &n) == self.numer() && &(&d * &d) == self.denom() {
            Some(BigRational::new(n, d))
        } else {
            None
        }
    }
}

/// Converts an integral rational to `i64`.
pub fn rational_to_i64(r: &Rational) -> Option<i64> {
    if r.is_integer() {
        r.numer().to_i64()
    } else {
        None
    }
}

// ---------------------------------------------------------------------------
// Prime fields

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::InvalidParameter(format!("{p} is not prime")));
        }
        if p > u32::MAX as u64 {
            return Err(Error::InvalidParameter(format!("modulus {p} too large")));
        }
        Ok(Self { p })
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn elem(&self, v: u64) -> Fp {
        Fp { value: v % self.p, modulus: self.p }
    }

    /// Reduces a rational; fails when p divides the denominator.
    pub fn reduce(&self, r: &Rational) -> Result<Fp> {
        let p = BigInt::from(self.p);
        let d = ((r.denom() % &p) + &p) % &p;
        if d.is_zero() {
            return Err(Error::InvalidParameter(format!(
                "denominator of {r} is divisible by {}",
                self.p
            )));
        }
        let n = ((r.numer() % &p) + &p) % &p;
        let n = self.elem(n.to_u64().expect("residue fits"));
        let d = self.elem(d.to_u64().expect("residue fits"));
        Ok(n * d.inv().expect("nonzero residue"))
    }
}

impl fmt::Display for PrimeField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}", self.p)
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

impl Field for PrimeField {
    type Elem = Fp;

    fn zero(&self) -> Fp {
        self.elem(0)
    }
    fn one(&self) -> Fp {
        self.elem(1)
    }
    fn from_i64(&self, v: i64) -> Fp {
        let p = self.p as i64;
        self.elem(v.rem_euclid(p) as u64)
    }
    fn characteristic(&self) -> u64 {
        self.p
    }
    fn parse(&self, s: &str) -> Result<Fp> {
        self.reduce(&parse_rational(s)?)
    }
    fn elements(&self) -> Option<Vec<Fp>> {
        Some((0..self.p).map(|v| self.elem(v)).collect())
    }
}

/// A residue modulo a prime. Mixing moduli in arithmetic panics; matrices check fields up front.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Fp {
    value: u64,
    modulus: u64,
}

impl Fp {
    pub fn value(&self) -> u64 {
        self.value
    }
    pub fn modulus(&self) -> u64 {
        self.modulus
    }
    fn same(&self, o: &Fp) {
        assert_eq!(self.modulus, o.modulus, "arithmetic between different prime fields");
    }
}

impl fmt::Display for Fp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

impl Add<&Fp> for Fp {
    type Output = Fp;
    fn add(self, o: &Fp) -> Fp {
        self.same(o);
        Fp { value: (self.value + o.value) % self.modulus, modulus: self.modulus }
    }
}
impl Sub<&Fp> for Fp {
    type Output = Fp;
    fn sub(self, o: &Fp) -> Fp {
        self.same(o);
        Fp { value: (self.value + self.modulus - o.value) % self.modulus, modulus: self.modulus }
    }
}
impl Mul<&Fp> for Fp {
    type Output = Fp;
    fn mul(self, o: &Fp) -> Fp {
        self.same(o);
        Fp { value: (self.value * o.value) % self.modulus, modulus: self.modulus }
    }
}
impl Add for Fp {
    type Output = Fp;
    fn add(self, o: Fp) -> Fp {
        Add::add(self, &o)
    }
}
impl Sub for Fp {
    type Output = Fp;
    fn sub(self, o: Fp) -> Fp {
        Sub::sub(self, &o)
    }
}
impl Mul for Fp {
    type Output = Fp;
    fn mul(self, o: Fp) -> Fp {
        Mul::mul(self, &o)
    }
}
impl Neg for Fp {
    type Output = Fp;
    fn neg(self) -> Fp {
        Fp { value: (self.modulus - self.value) % self.modulus, modulus: self.modulus }
    }
}

impl Scalar for Fp {
    type F = PrimeField;

    fn field(&self) -> PrimeField {
        PrimeField { p: self.modulus }
    }
    fn is_zero(&self) -> bool {
        self.value == 0
    }
    fn inv(&self) -> Option<Self> {
        if self.value == 0 {
            return None;
        }
        // Fermat: a^(p-2)
        Some(self.pow((self.modulus - 2) as u32))
    }
    fn sqrt(&self) -> Option<Self> {
        (0..self.modulus)
            .map(|v| Fp { value: v, modulus: self.modulus })
            .find(|r| *r * *r == *self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(s: &str) -> Rational {
        parse_rational(s).unwrap()
    }

    #[test]
    fn rational_parse_normalizes() {
        assert_eq!(q("4/-6").to_string(), "-2/3");
        assert_eq!(q(" 10 ").to_string(), "10");
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }

    #[test]
    fn rational_sqrt() {
        assert_eq!(q("9/4").sqrt(), Some(q("3/2")));
        assert_eq!(q("2").sqrt(), None);
        assert_eq!(q("-1").sqrt(), None);
    }

    #[test]
    fn fp_arithmetic() {
        let f = PrimeField::new(7).unwrap();
        let a = f.elem(3);
        assert_eq!((a * a.inv().unwrap()).value(), 1);
        assert_eq!((-a).value(), 4);
        assert_eq!(f.from_i64(-1).value(), 6);
        assert_eq!(f.parse("1/2").unwrap().value(), 4);
        assert!(PrimeField::new(3).unwrap().parse("1/3").is_err());
        assert!(PrimeField::new(4).is_err());
        assert_eq!(f.elem(2).sqrt().map(|r| r * r), Some(f.elem(2)));
        assert_eq!(f.elem(3).sqrt(), None);
    }

    #[test]
    fn pow_matches_repeated_product() {
        let r = q("-3/2");
        assert_eq!(r.pow(3), q("-27/8"));
        assert_eq!(r.pow(0), q("1"));
    }
}
