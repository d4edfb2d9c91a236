//! Exact univariate polynomial and truncated power-series arithmetic.
//!
//! Coefficients are arbitrary-precision integers: binomial growth like
//! (1+t)^{2g} squares past 64-bit range in products well before g = 20, and
//! Betti numbers must come out exact. Polynomials are kept in canonical form
//! (no trailing zero coefficients; the zero polynomial has an empty list).
//!
//! Binary operations on two truncated series use the minimum of the two
//! truncation orders; coefficients beyond the order are never materialized.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum AlgebraError {
    #[error("geometric series step must be >= 1")]
    ZeroStep,
    #[error("negative shift {0} rejected")]
    NegativeShift(i64),
    #[error("cannot parse polynomial: {0}")]
    Parse(String),
}

/// Dense polynomial in one formal variable `t`, index i = coefficient of t^i.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Polynomial {
    coeffs: Vec<BigInt>,
}

impl Polynomial {
    /// Build from coefficients (ascending powers), stripping trailing zeros.
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().map_or(false, |c| c.is_zero()) {
            coeffs.pop();
        }
        Polynomial { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Polynomial::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero() -> Self {
        Polynomial { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Polynomial::monomial(BigInt::one(), 0)
    }

    /// c * t^k
    pub fn monomial(c: BigInt, k: usize) -> Self {
        if c.is_zero() {
            return Polynomial::zero();
        }
        let mut coeffs = vec![BigInt::zero(); k + 1];
        coeffs[k] = c;
        Polynomial { coeffs }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, or None for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeff(&self, i: usize) -> BigInt {
        self.coeffs.get(i).cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        Polynomial::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Polynomial::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Exact evaluation at an integer point.
    pub fn eval(&self, x: &BigInt) -> BigInt {
        let mut acc = BigInt::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    /// All coefficients non-negative.
    pub fn is_nonnegative(&self) -> bool {
        self.coeffs
            .iter()
            .all(|c| c.sign() != num_bigint::Sign::Minus)
    }

    /// Palindromic of the given degree: c_i = c_{deg-i} for all i.
    pub fn is_palindromic(&self, deg: usize) -> bool {
        (0..=deg).all(|i| self.coeff(i) == self.coeff(deg - i))
    }
}

pub fn poly_add(a: &Polynomial, b: &Polynomial) -> Polynomial {
    let n = a.coeffs.len().max(b.coeffs.len());
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        out.push(a.coeff(i) + b.coeff(i));
    }
    Polynomial::new(out)
}

/// Convolution product, exact.
pub fn poly_mul(a: &Polynomial, b: &Polynomial) -> Polynomial {
    if a.is_zero() || b.is_zero() {
        return Polynomial::zero();
    }
    let mut out = vec![BigInt::zero(); a.coeffs.len() + b.coeffs.len() - 1];
    for (i, ai) in a.coeffs.iter().enumerate() {
        if ai.is_zero() {
            continue;
        }
        for (j, bj) in b.coeffs.iter().enumerate() {
            out[i + j] += ai * bj;
        }
    }
    Polynomial::new(out)
}

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        poly_add(self, rhs)
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        poly_add(self, &-rhs)
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        poly_mul(self, rhs)
    }
}

impl fmt::Display for Polynomial {
    /// Ascending dense form `c0 + c1*t + c2*t^2`; the zero polynomial is `0`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, c) in self.coeffs.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            match i {
                0 => write!(f, "{c}")?,
                1 => write!(f, "{c}*t")?,
                _ => write!(f, "{c}*t^{i}")?,
            }
        }
        Ok(())
    }
}

impl FromStr for Polynomial {
    type Err = AlgebraError;

    /// Parses the `Display` grammar, with optional whitespace; sparse terms
    /// (`t^3`, `-2*t`, bare integers) are accepted and summed.
    fn from_str(s: &str) -> Result<Self, AlgebraError> {
        let body = s.trim();
        if body.is_empty() {
            return Err(AlgebraError::Parse("empty input".into()));
        }
        let mut acc = Polynomial::zero();
        for raw in body.split('+') {
            let term = raw.trim();
            if term.is_empty() {
                return Err(AlgebraError::Parse(format!("empty term in {s:?}")));
            }
            let (coeff_str, pow) = match term.find('t') {
                None => (term, 0usize),
                Some(tpos) => {
                    let head = term[..tpos].trim().trim_end_matches('*').trim();
                    let tail = term[tpos + 1..].trim();
                    let pow = if tail.is_empty() {
                        1
                    } else {
                        let exp = tail
                            .strip_prefix('^')
                            .ok_or_else(|| AlgebraError::Parse(format!("bad term {term:?}")))?;
                        exp.trim()
                            .parse::<usize>()
                            .map_err(|_| AlgebraError::Parse(format!("bad exponent in {term:?}")))?
                    };
                    (head, pow)
                }
            };
            let coeff = match coeff_str {
                "" => BigInt::one(),
                "-" => -BigInt::one(),
                s => BigInt::from_str(s)
                    .map_err(|_| AlgebraError::Parse(format!("bad coefficient {s:?}")))?,
            };
            acc = poly_add(&acc, &Polynomial::monomial(coeff, pow));
        }
        Ok(acc)
    }
}

/// Power series in `t` truncated at a stated order (inclusive).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TruncatedSeries {
    /// Exactly `order + 1` coefficients.
    coeffs: Vec<BigInt>,
    order: usize,
}

impl TruncatedSeries {
    pub fn from_polynomial(p: &Polynomial, order: usize) -> Self {
        let mut coeffs = vec![BigInt::zero(); order + 1];
        for (i, c) in coeffs.iter_mut().enumerate() {
            *c = p.coeff(i);
        }
        TruncatedSeries { coeffs, order }
    }

    pub fn one(order: usize) -> Self {
        TruncatedSeries::from_polynomial(&Polynomial::one(), order)
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn coeff(&self, i: usize) -> BigInt {
        self.coeffs.get(i).cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn is_nonnegative(&self) -> bool {
        self.coeffs
            .iter()
            .all(|c| c.sign() != num_bigint::Sign::Minus)
    }

    /// Truncation of the polynomial with the same leading coefficients.
    pub fn to_polynomial(&self) -> Polynomial {
        Polynomial::new(self.coeffs.clone())
    }
}

/// 1/(1 - t^step) up to `order`: coefficient 1 at multiples of `step`.
pub fn series_geometric(step: usize, order: usize) -> Result<TruncatedSeries, AlgebraError> {
    if step == 0 {
        return Err(AlgebraError::ZeroStep);
    }
    let mut coeffs = vec![BigInt::zero(); order + 1];
    let mut i = 0;
    while i <= order {
        coeffs[i] = BigInt::one();
        i += step;
    }
    Ok(TruncatedSeries { coeffs, order })
}

/// Truncated convolution at the minimum of the two orders.
pub fn series_mul(a: &TruncatedSeries, b: &TruncatedSeries) -> TruncatedSeries {
    let order = a.order.min(b.order);
    let mut coeffs = vec![BigInt::zero(); order + 1];
    for i in 0..=order {
        if a.coeffs[i].is_zero() {
            continue;
        }
        for j in 0..=(order - i) {
            if !b.coeffs[j].is_zero() {
                coeffs[i + j] += &a.coeffs[i] * &b.coeffs[j];
            }
        }
    }
    TruncatedSeries { coeffs, order }
}

pub fn series_add(a: &TruncatedSeries, b: &TruncatedSeries) -> TruncatedSeries {
    let order = a.order.min(b.order);
    let coeffs = (0..=order).map(|i| a.coeff(i) + b.coeff(i)).collect();
    TruncatedSeries { coeffs, order }
}

pub fn series_sub(a: &TruncatedSeries, b: &TruncatedSeries) -> TruncatedSeries {
    let order = a.order.min(b.order);
    let coeffs = (0..=order).map(|i| a.coeff(i) - b.coeff(i)).collect();
    TruncatedSeries { coeffs, order }
}

/// Multiply by t^k, dropping terms pushed beyond the truncation order.
pub fn series_shift(a: &TruncatedSeries, k: i64) -> Result<TruncatedSeries, AlgebraError> {
    if k < 0 {
        return Err(AlgebraError::NegativeShift(k));
    }
    let k = k as usize;
    let mut coeffs = vec![BigInt::zero(); a.order + 1];
    for i in 0..=a.order {
        if i >= k {
            coeffs[i] = a.coeffs[i - k].clone();
        }
    }
    Ok(TruncatedSeries {
        coeffs,
        order: a.order,
    })
}

impl fmt::Display for TruncatedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_polynomial())?;
        write!(f, " ; order={}", self.order)
    }
}
