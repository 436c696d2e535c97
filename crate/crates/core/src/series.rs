//! Truncated power series `Σ c_k q^k + O(q^N)` over [`Scalar`].
//!
//! A series of order `N` is known modulo `q^N`; it stores exactly `N`
//! coefficients. Binary operations return the smaller of the two orders.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::Signed;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "SeriesRepr", into = "SeriesRepr")]
pub struct Series {
    coeffs: Vec<Scalar>,
}

#[derive(Serialize, Deserialize)]
struct SeriesRepr {
    order: usize,
    coeffs: Vec<Scalar>,
}

impl TryFrom<SeriesRepr> for Series {
    type Error = String;
    fn try_from(r: SeriesRepr) -> Result<Self, String> {
        if r.coeffs.len() > r.order {
            return Err(format!("series has {} coefficients but order {}", r.coeffs.len(), r.order));
        }
        // Missing trailing coefficients are zero.
        Ok(Series::from_coeffs(r.coeffs, r.order))
    }
}

impl From<Series> for SeriesRepr {
    fn from(s: Series) -> Self {
        SeriesRepr { order: s.order(), coeffs: s.coeffs }
    }
}

/// Which of the two formal functions [`Series::exp_log`] applies.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExpLog {
    Exp,
    Log,
}

impl Series {
    pub fn zero(order: usize) -> Self {
        Series { coeffs: vec![Scalar::zero(); order] }
    }

    pub fn constant(c: Scalar, order: usize) -> Self {
        let mut s = Self::zero(order);
        if order > 0 {
            s.coeffs[0] = c;
        }
        s
    }

    pub fn one(order: usize) -> Self {
        Self::constant(Scalar::one(), order)
    }

    /// `c · q^k`, dropped entirely when `k >= order`.
    pub fn monomial(c: Scalar, k: usize, order: usize) -> Self {
        let mut s = Self::zero(order);
        if k < order {
            s.coeffs[k] = c;
        }
        s
    }

    /// The coordinate `q` itself.
    pub fn q(order: usize) -> Self {
        Self::monomial(Scalar::one(), 1, order)
    }

    /// Pads with zeros or truncates `coeffs` to exactly `order` entries.
    pub fn from_coeffs(mut coeffs: Vec<Scalar>, order: usize) -> Self {
        coeffs.resize(order, Scalar::zero());
        Series { coeffs }
    }

    pub fn from_ints(coeffs: &[i64], order: usize) -> Self {
        Self::from_coeffs(coeffs.iter().map(|&c| Scalar::from_int(c)).collect(), order)
    }

    pub fn order(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    /// Coefficient of `q^k`. Panics when `k >= order`: that coefficient is
    /// not known.
    pub fn coeff(&self, k: usize) -> &Scalar {
        assert!(k < self.order(), "coefficient q^{k} unknown at order {}", self.order());
        &self.coeffs[k]
    }

    pub fn set_coeff(&mut self, k: usize, c: Scalar) {
        if k < self.order() {
            self.coeffs[k] = c;
        }
    }

    /// Constant term; zero for the empty series.
    pub fn constant_term(&self) -> Scalar {
        self.coeffs.first().cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Scalar::is_zero)
    }

    /// True when every coefficient of positive degree vanishes.
    pub fn is_constant(&self) -> bool {
        self.coeffs.iter().skip(1).all(Scalar::is_zero)
    }

    /// Index of the first nonzero coefficient.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    pub fn truncate(&self, order: usize) -> Self {
        assert!(order <= self.order(), "cannot raise truncation order");
        Series { coeffs: self.coeffs[..order].to_vec() }
    }

    /// First index below both orders where the coefficients differ.
    pub fn first_difference(&self, other: &Series) -> Option<usize> {
        (0..self.order().min(other.order())).find(|&k| self.coeffs[k] != other.coeffs[k])
    }

    /// Truncation to `min(self.order(), order)`.
    pub fn at_most(&self, order: usize) -> Self {
        self.truncate(order.min(self.order()))
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        Series { coeffs: self.coeffs.iter().map(|x| x * c).collect() }
    }

    /// `Σ c_k q^k ↦ Σ c_k λ^k q^k`, i.e. the substitution `q ↦ λ q`.
    pub fn scale_variable(&self, lambda: &Scalar) -> Self {
        let mut pow = Scalar::one();
        let mut coeffs = Vec::with_capacity(self.order());
        for c in &self.coeffs {
            coeffs.push(c * &pow);
            pow = &pow * lambda;
        }
        Series { coeffs }
    }

    /// Multiplication by `q^k`, keeping the order.
    pub fn shift(&self, k: usize) -> Self {
        let n = self.order();
        let mut out = Self::zero(n);
        for i in 0..n.saturating_sub(k) {
            out.coeffs[i + k] = self.coeffs[i].clone();
        }
        out
    }

    /// Multiplicative inverse of a unit by the order-by-order recurrence.
    pub fn invert_unit(&self) -> Result<Self> {
        let n = self.order();
        if n == 0 {
            return Ok(self.clone());
        }
        let a0_inv = self.coeffs[0].inv().ok_or(Error::ZeroConstantTerm)?;
        let mut b = vec![Scalar::zero(); n];
        b[0] = a0_inv.clone();
        for k in 1..n {
            let mut acc = Scalar::zero();
            for j in 1..=k {
                if !self.coeffs[j].is_zero() {
                    acc += &(&self.coeffs[j] * &b[k - j]);
                }
            }
            b[k] = -(&acc * &a0_inv);
        }
        Ok(Series { coeffs: b })
    }

    /// `self / other` with `other` a unit.
    pub fn div_unit(&self, other: &Series) -> Result<Self> {
        Ok(self * &other.invert_unit()?)
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Series::one(self.order());
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// `f(g(q))` for `g(0) = 0`, by Horner evaluation in the truncated ring.
    pub fn compose(&self, inner: &Series) -> Result<Self> {
        if !inner.constant_term().is_zero() {
            return Err(Error::NonzeroInnerConstant);
        }
        let n = self.order().min(inner.order());
        let g = inner.truncate(n);
        let mut acc = Series::zero(n);
        for c in self.coeffs[..n].iter().rev() {
            acc = &acc * &g;
            acc.coeffs[0] += c;
        }
        Ok(acc)
    }

    /// Compositional inverse by Lagrange inversion:
    /// `[q^k] g = (1/k) [w^{k-1}] (w / f(w))^k`.
    pub fn reverse(&self) -> Result<Self> {
        let n = self.order();
        if n < 2 || !self.coeffs[0].is_zero() || self.coeffs[1].is_zero() {
            return Err(Error::NotReversible);
        }
        // f(w)/w, known to order n - 1.
        let f_over_w = Series { coeffs: self.coeffs[1..].to_vec() };
        let phi = f_over_w.invert_unit()?;
        let mut out = Series::zero(n);
        let mut power = Series::one(n - 1);
        for k in 1..n {
            power = &power * &phi;
            out.coeffs[k] = power.coeffs[k - 1].clone() / Scalar::from_int(k as i64);
        }
        Ok(out)
    }

    /// Formal `exp` (needs `a(0) = 0`) or `log` (needs `a(0) = 1`).
    pub fn exp_log(&self, mode: ExpLog) -> Result<Self> {
        match mode {
            ExpLog::Exp => self.exp(),
            ExpLog::Log => self.log(),
        }
    }

    pub fn exp(&self) -> Result<Self> {
        let n = self.order();
        if n > 0 && !self.coeffs[0].is_zero() {
            return Err(Error::BadConstantTerm("exp"));
        }
        // k e_k = Σ_{j=1}^k j a_j e_{k-j}
        let mut e = vec![Scalar::zero(); n];
        if n > 0 {
            e[0] = Scalar::one();
        }
        for k in 1..n {
            let mut acc = Scalar::zero();
            for j in 1..=k {
                if !self.coeffs[j].is_zero() {
                    acc += &(&(&self.coeffs[j] * &e[k - j]) * &Scalar::from_int(j as i64));
                }
            }
            e[k] = acc / Scalar::from_int(k as i64);
        }
        Ok(Series { coeffs: e })
    }

    pub fn log(&self) -> Result<Self> {
        if self.order() > 0 && !self.coeffs[0].is_one() {
            return Err(Error::BadConstantTerm("log"));
        }
        self.theta().div_unit(self)?.theta_inverse()
    }

    /// `θ = q d/dq`: `Σ c_k q^k ↦ Σ k c_k q^k`.
    pub fn theta(&self) -> Self {
        Series { coeffs: self.coeffs.iter().enumerate().map(|(k, c)| c * &Scalar::from_int(k as i64)).collect() }
    }

    /// The antiderivative of `θ` on series without constant term.
    pub fn theta_inverse(&self) -> Result<Self> {
        if !self.constant_term().is_zero() {
            return Err(Error::NonzeroConstant);
        }
        Ok(Series {
            coeffs: self
                .coeffs
                .iter()
                .enumerate()
                .map(|(k, c)| if k == 0 { Scalar::zero() } else { c / &Scalar::from_int(k as i64) })
                .collect(),
        })
    }

    /// Ordinary derivative `d/dq`; the order drops by one.
    pub fn derivative(&self) -> Self {
        Series {
            coeffs: self.coeffs.iter().enumerate().skip(1).map(|(k, c)| c * &Scalar::from_int(k as i64)).collect(),
        }
    }
}

impl fmt::Display for Series {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            // real coefficients print as `- 3*q^2`, not `+ -3*q^2`
            let neg = c.is_real() && c.re().is_negative();
            let c = if neg { -c } else { c.clone() };
            match (first, neg) {
                (true, true) => write!(f, "-")?,
                (false, true) => write!(f, " - ")?,
                (false, false) => write!(f, " + ")?,
                (true, false) => {}
            }
            first = false;
            let cs = if !c.is_real() && k > 0 { format!("({c})") } else { c.to_string() };
            let cs = if c.is_one() && k > 0 { String::new() } else { format!("{cs}*") };
            match k {
                0 => write!(f, "{}", cs.trim_end_matches('*'))?,
                1 => write!(f, "{cs}q")?,
                _ => write!(f, "{cs}q^{k}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, " + O(q^{})", self.order())
    }
}

impl fmt::Debug for Series {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl<'a> Add<&'a Series> for &'a Series {
    type Output = Series;
    fn add(self, rhs: &Series) -> Series {
        let n = self.order().min(rhs.order());
        Series { coeffs: (0..n).map(|k| &self.coeffs[k] + &rhs.coeffs[k]).collect() }
    }
}

impl<'a> Sub<&'a Series> for &'a Series {
    type Output = Series;
    fn sub(self, rhs: &Series) -> Series {
        let n = self.order().min(rhs.order());
        Series { coeffs: (0..n).map(|k| &self.coeffs[k] - &rhs.coeffs[k]).collect() }
    }
}

impl<'a> Mul<&'a Series> for &'a Series {
    type Output = Series;
    /// Cauchy product truncated at the smaller order.
    fn mul(self, rhs: &Series) -> Series {
        let n = self.order().min(rhs.order());
        let mut out = vec![Scalar::zero(); n];
        for (i, a) in self.coeffs[..n].iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs[..n - i].iter().enumerate() {
                if !b.is_zero() {
                    out[i + j] += &(a * b);
                }
            }
        }
        Series { coeffs: out }
    }
}

impl Add for Series {
    type Output = Series;
    fn add(self, rhs: Series) -> Series {
        &self + &rhs
    }
}

impl Sub for Series {
    type Output = Series;
    fn sub(self, rhs: Series) -> Series {
        &self - &rhs
    }
}

impl Mul for Series {
    type Output = Series;
    fn mul(self, rhs: Series) -> Series {
        &self * &rhs
    }
}

impl Neg for &Series {
    type Output = Series;
    fn neg(self) -> Series {
        Series { coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

impl Neg for Series {
    type Output = Series;
    fn neg(self) -> Series {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(c: &[i64], n: usize) -> Series {
        Series::from_ints(c, n)
    }

    #[test]
    fn ring_examples() {
        assert_eq!(&s(&[1, 1], 6) * &s(&[1, -1], 6), s(&[1, 0, -1], 6));
        assert_eq!(&s(&[1], 4) + &s(&[0], 4), s(&[1], 4));
        let geom = s(&[1; 8], 8);
        assert_eq!(&geom * &s(&[1, -1], 8), Series::one(8));
        // min-order rule
        assert_eq!((&s(&[1, 2, 3], 3) + &s(&[1], 5)).order(), 3);
    }

    #[test]
    fn invert_examples() {
        assert_eq!(s(&[1, -1], 6).invert_unit().unwrap(), s(&[1; 6], 6));
        assert_eq!(Series::one(3).invert_unit().unwrap(), Series::one(3));
        let a = s(&[1, 120, 113400, 168168000], 8);
        assert_eq!(&a * &a.invert_unit().unwrap(), Series::one(8));
        assert_eq!(s(&[0, 1], 4).invert_unit(), Err(Error::ZeroConstantTerm));
    }

    #[test]
    fn display() {
        assert_eq!(s(&[-1, 1, -770, 0, 3], 6).to_string(), "-1 + q - 770*q^2 + 3*q^4 + O(q^6)");
        assert_eq!(Series::zero(2).to_string(), "0 + O(q^2)");
        let c = Series::monomial(&Scalar::one() + &Scalar::i(), 1, 3);
        assert_eq!(c.to_string(), "(1+1*i)*q + O(q^3)");
    }

    #[test]
    fn compose_examples() {
        let f = s(&[0, 1, 1], 6);
        let g = s(&[0, 0, 1], 6);
        assert_eq!(f.compose(&g).unwrap(), s(&[0, 0, 1, 0, 1], 6));
        assert_eq!(f.compose(&Series::q(6)).unwrap(), f);
        assert_eq!(f.compose(&s(&[1, 1], 6)), Err(Error::NonzeroInnerConstant));
        // exp(log(1+q)) - 1 = q
        let log1p = s(&[1, 1], 10).log().unwrap();
        let expm1 = &Series::q(10).exp().unwrap() - &Series::one(10);
        assert_eq!(expm1.compose(&log1p).unwrap(), Series::q(10));
    }

    #[test]
    fn reverse_examples() {
        assert_eq!(Series::q(6).reverse().unwrap(), Series::q(6));
        assert_eq!(s(&[0, 1, 1], 6).reverse().unwrap(), s(&[0, 1, -1, 2, -5, 14], 6));
        let c = Scalar::from_int(7);
        assert_eq!(Series::q(5).scale(&c).reverse().unwrap(), Series::q(5).scale(&c.inv().unwrap()));
        assert_eq!(s(&[1, 1], 4).reverse(), Err(Error::NotReversible));
        assert_eq!(s(&[0, 0, 1], 4).reverse(), Err(Error::NotReversible));
    }

    #[test]
    fn exp_log_examples() {
        let e = Series::q(7).exp().unwrap();
        let mut fact = 1i64;
        for k in 0..7 {
            if k > 0 {
                fact *= k as i64;
            }
            assert_eq!(e.coeff(k), &Scalar::ratio(1, fact));
        }
        let l = s(&[1, 1], 6).log().unwrap();
        for k in 1..6 {
            let sign = if k % 2 == 1 { 1 } else { -1 };
            assert_eq!(l.coeff(k), &Scalar::ratio(sign, k as i64));
        }
        assert_eq!(s(&[1], 3).exp(), Err(Error::BadConstantTerm("exp")));
        assert_eq!(s(&[2], 3).log(), Err(Error::BadConstantTerm("log")));
    }

    #[test]
    fn theta_examples() {
        assert_eq!(Series::monomial(Scalar::one(), 3, 5).theta(), s(&[0, 0, 0, 3], 5));
        assert_eq!(
            Series::monomial(Scalar::from_int(3), 2, 5).theta_inverse().unwrap(),
            Series::monomial(Scalar::ratio(3, 2), 2, 5)
        );
        assert_eq!(s(&[1], 3).theta_inverse(), Err(Error::NonzeroConstant));
    }

    #[test]
    fn json_schema() {
        let a = Series::from_coeffs(vec![Scalar::one(), "1/2+1*i".parse().unwrap()], 3);
        let js = serde_json::to_string(&a).unwrap();
        assert_eq!(js, r#"{"order":3,"coeffs":["1","1/2+1*i","0"]}"#);
        let back: Series = serde_json::from_str(&js).unwrap();
        assert_eq!(back, a);
        let short: Series = serde_json::from_str(r#"{"order":3,"coeffs":["1"]}"#).unwrap();
        assert_eq!(short, Series::one(3));
        assert!(serde_json::from_str::<Series>(r#"{"order":1,"coeffs":["1","2"]}"#).is_err());
    }
}
