//! Exact Gaussian rationals `a + b·i` with `a, b ∈ ℚ`.
//!
//! Every quantity in the pipeline lives in `ℚ(i)`, so no rounding ever
//! happens. Values are kept in lowest terms by `BigRational`.

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::ParseScalarError;

/// A Gaussian rational number.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Scalar {
    re: BigRational,
    im: BigRational,
}

impl Scalar {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        Scalar { re, im }
    }

    pub fn from_rational(re: BigRational) -> Self {
        Scalar { re, im: BigRational::zero() }
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rational(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn from_bigint(n: BigInt) -> Self {
        Self::from_rational(BigRational::from_integer(n))
    }

    /// `num / den` as a real scalar. Panics if `den == 0`.
    pub fn ratio(num: i64, den: i64) -> Self {
        Self::from_rational(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn zero() -> Self {
        Scalar::default()
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    /// The imaginary unit.
    pub fn i() -> Self {
        Scalar { re: BigRational::zero(), im: BigRational::one() }
    }

    /// `i^k` for any integer `k`.
    pub fn i_pow(k: i64) -> Self {
        match k.rem_euclid(4) {
            0 => Self::one(),
            1 => Self::i(),
            2 => -Self::one(),
            _ => -Self::i(),
        }
    }

    /// `(-1)^k`.
    pub fn sign_pow(k: i64) -> Self {
        if k.rem_euclid(2) == 0 {
            Self::one()
        } else {
            -Self::one()
        }
    }

    pub fn re(&self) -> &BigRational {
        &self.re
    }

    pub fn im(&self) -> &BigRational {
        &self.im
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.re.is_one() && self.im.is_zero()
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    /// True when the value is a rational integer.
    pub fn is_integer(&self) -> bool {
        self.im.is_zero() && self.re.is_integer()
    }

    pub fn conj(&self) -> Self {
        Scalar { re: self.re.clone(), im: -self.im.clone() }
    }

    /// `|z|^2 = a^2 + b^2`.
    pub fn norm_sqr(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }

    /// Multiplicative inverse, `None` for zero.
    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        if self.im.is_zero() {
            return Some(Self::from_rational(self.re.recip()));
        }
        let n = self.norm_sqr();
        Some(Scalar { re: &self.re / &n, im: -(&self.im / &n) })
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// Exact square root in `ℚ(i)`, if one exists. Of the two roots the one
    /// with positive real part (or positive imaginary part when the real
    /// part vanishes) is returned.
    pub fn sqrt(&self) -> Option<Self> {
        if self.is_zero() {
            return Some(Self::zero());
        }
        // (x + y i)^2 = a + b i  =>  x^2 = (a + |z|)/2, y^2 = (|z| - a)/2.
        let modulus = rational_sqrt(&self.norm_sqr())?;
        let two = BigRational::from_integer(BigInt::from(2));
        let x2 = (&self.re + &modulus) / &two;
        let y2 = (&modulus - &self.re) / &two;
        let x = rational_sqrt(&x2)?;
        let mut y = rational_sqrt(&y2)?;
        if self.im.is_negative() {
            y = -y;
        }
        let root = if x.is_zero() { Scalar { re: x, im: y.abs() } } else { Scalar { re: x, im: y } };
        debug_assert_eq!(&(&root * &root), self);
        Some(root)
    }

    /// Decimal approximation of both parts, for display only.
    pub fn to_decimal_string(&self, digits: usize) -> String {
        let re = rational_to_decimal(&self.re, digits);
        if self.im.is_zero() {
            return format!("~{re}");
        }
        let im = rational_to_decimal(&self.im.abs(), digits);
        let sign = if self.im.is_negative() { '-' } else { '+' };
        format!("~{re}{sign}{im}*i")
    }
}

fn rational_sqrt(r: &BigRational) -> Option<BigRational> {
    if r.is_negative() {
        return None;
    }
    let n = r.numer().sqrt();
    let d = r.denom().sqrt();
    if &(&n * &n) == r.numer() && &(&d * &d) == r.denom() {
        Some(BigRational::new(n, d))
    } else {
        None
    }
}

fn rational_to_decimal(r: &BigRational, digits: usize) -> String {
    let neg = r.is_negative();
    let a = r.abs();
    let scale = BigInt::from(10u32).pow(digits as u32);
    let scaled = (a * BigRational::from_integer(scale.clone())).round().to_integer();
    let int_part = &scaled / &scale;
    let frac_part = &scaled % &scale;
    let mut s = String::new();
    if neg && !scaled.is_zero() {
        s.push('-');
    }
    s.push_str(&int_part.to_string());
    if digits > 0 {
        s.push('.');
        s.push_str(&format!("{:0>width$}", frac_part.to_string(), width = digits));
    }
    s
}

fn fmt_rational(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

impl fmt::Display for Scalar {
    /// Formats as `a/b`, `a/b+c/d*i` or `c/d*i`; integer parts omit `/1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            return write!(f, "{}", fmt_rational(&self.re));
        }
        let im_abs = fmt_rational(&self.im.abs());
        if self.re.is_zero() {
            let sign = if self.im.is_negative() { "-" } else { "" };
            return write!(f, "{sign}{im_abs}*i");
        }
        let sign = if self.im.is_negative() { '-' } else { '+' };
        write!(f, "{}{sign}{im_abs}*i", fmt_rational(&self.re))
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

fn parse_rational(s: &str) -> Result<BigRational, ParseScalarError> {
    let s = s.trim();
    let bad = || ParseScalarError(s.to_string());
    if s.is_empty() {
        return Err(bad());
    }
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(BigRational::new(n, d))
        }
        None => Ok(BigRational::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

impl FromStr for Scalar {
    type Err = ParseScalarError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let bad = || ParseScalarError(s.to_string());
        if t.is_empty() {
            return Err(bad());
        }
        let Some(body) = t.strip_suffix("*i").or_else(|| t.strip_suffix('i')) else {
            return Ok(Scalar::from_rational(parse_rational(&t)?));
        };
        // Split at the last sign that is not in leading position.
        let split =
            body.char_indices().filter(|&(idx, c)| idx > 0 && (c == '+' || c == '-')).map(|(idx, _)| idx).next_back();
        let (re, im) = match split {
            Some(idx) => (parse_rational(&body[..idx])?, &body[idx..]),
            None => (BigRational::zero(), body),
        };
        let im = match im {
            "" | "+" => BigRational::one(),
            "-" => -BigRational::one(),
            other => parse_rational(other.strip_prefix('+').unwrap_or(other))?,
        };
        Ok(Scalar { re, im })
    }
}

impl Serialize for Scalar {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Scalar {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Str(String),
            Int(i64),
        }
        match Repr::deserialize(deserializer)? {
            Repr::Str(s) => s.parse().map_err(serde::de::Error::custom),
            Repr::Int(n) => Ok(Scalar::from_int(n)),
        }
    }
}

impl From<i64> for Scalar {
    fn from(n: i64) -> Self {
        Scalar::from_int(n)
    }
}

impl From<BigRational> for Scalar {
    fn from(r: BigRational) -> Self {
        Scalar::from_rational(r)
    }
}

impl<'a> Add<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        Scalar { re: &self.re + &rhs.re, im: &self.im + &rhs.im }
    }
}

impl<'a> Sub<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        Scalar { re: &self.re - &rhs.re, im: &self.im - &rhs.im }
    }
}

impl<'a> Mul<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        if self.im.is_zero() && rhs.im.is_zero() {
            return Scalar::from_rational(&self.re * &rhs.re);
        }
        Scalar { re: &self.re * &rhs.re - &self.im * &rhs.im, im: &self.re * &rhs.im + &self.im * &rhs.re }
    }
}

impl<'a> Div<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    /// Panics on division by zero.
    fn div(self, rhs: &Scalar) -> Scalar {
        #[allow(clippy::suspicious_arithmetic_impl)]
        let q = self * &rhs.inv().expect("division by zero scalar");
        q
    }
}

macro_rules! forward_owned {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr<Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: Scalar) -> Scalar { (&self).$m(&rhs) }
        }
        impl<'a> $tr<&'a Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: &Scalar) -> Scalar { (&self).$m(rhs) }
        }
    )*};
}
forward_owned!(Add add, Sub sub, Mul mul, Div div);

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar { re: -self.re, im: -self.im }
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar { re: -self.re.clone(), im: -self.im.clone() }
    }
}

impl AddAssign<&Scalar> for Scalar {
    fn add_assign(&mut self, rhs: &Scalar) {
        self.re += &rhs.re;
        self.im += &rhs.im;
    }
}

impl SubAssign<&Scalar> for Scalar {
    fn sub_assign(&mut self, rhs: &Scalar) {
        self.re -= &rhs.re;
        self.im -= &rhs.im;
    }
}

impl MulAssign<&Scalar> for Scalar {
    fn mul_assign(&mut self, rhs: &Scalar) {
        *self = &*self * rhs;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn display_and_parse() {
        let cases = ["0", "5", "-3/7", "1/2+3/4*i", "1/2-3/4*i", "2*i", "-1/3*i"];
        for c in cases {
            let s: Scalar = c.parse().unwrap();
            assert_eq!(s.to_string(), c);
        }
        assert_eq!("4/6".parse::<Scalar>().unwrap().to_string(), "2/3");
        assert_eq!("i".parse::<Scalar>().unwrap(), Scalar::i());
        assert_eq!("1-i".parse::<Scalar>().unwrap().to_string(), "1-1*i");
        assert!("1/0".parse::<Scalar>().is_err());
        assert!("abc".parse::<Scalar>().is_err());
    }

    #[test]
    fn field_ops() {
        let a: Scalar = "1/2+1*i".parse().unwrap();
        let b: Scalar = "3-2/5*i".parse().unwrap();
        assert_eq!(&(&a * &b) / &b, a);
        assert_eq!(&a * &a.inv().unwrap(), Scalar::one());
        assert_eq!(Scalar::i_pow(2), -Scalar::one());
        assert_eq!(Scalar::i_pow(-1), -Scalar::i());
        assert!(Scalar::zero().inv().is_none());
    }

    #[test]
    fn exact_square_roots() {
        let four = Scalar::from_int(4);
        assert_eq!(four.sqrt().unwrap(), Scalar::from_int(2));
        assert_eq!(Scalar::from_int(-1).sqrt().unwrap(), Scalar::i());
        let z: Scalar = "3+4*i".parse().unwrap();
        assert_eq!(z.sqrt().unwrap(), "2+1*i".parse().unwrap());
        assert!(Scalar::from_int(2).sqrt().is_none());
        assert_eq!(Scalar::ratio(9, 25).sqrt().unwrap(), Scalar::ratio(3, 5));
    }

    #[test]
    fn decimal_display() {
        assert_eq!(Scalar::ratio(1, 3).to_decimal_string(4), "~0.3333");
        assert_eq!(Scalar::ratio(-2, 3).to_decimal_string(2), "~-0.67");
    }
}
