//! Exact arithmetic in a real quadratic field `ℚ(α)`, `α² = r`.
//!
//! Scalars travel as text in the form `a/b` or `a/b+c/d*al`, where `al`
//! stands for `α`. Whole numbers may omit the denominator.

use alloc::format;
use alloc::string::ToString;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};
use core::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{input, Error, Result};

/// Minimal field interface used by the exact elimination routines.
pub trait Field: Clone + PartialEq + fmt::Debug {
    fn is_zero(&self) -> bool;
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn add(&self, rhs: &Self) -> Self;
    fn sub(&self, rhs: &Self) -> Self;
    fn mul(&self, rhs: &Self) -> Self;
    /// Multiplicative inverse of a nonzero element.
    fn inv(&self) -> Self;
}

impl Field for BigRational {
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn zero_like(&self) -> Self {
        BigRational::zero()
    }
    fn one_like(&self) -> Self {
        BigRational::one()
    }
    fn add(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn sub(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn mul(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn inv(&self) -> Self {
        self.recip()
    }
}

pub fn rational(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn rational_to_f64(q: &BigRational) -> f64 {
    q.to_f64().unwrap_or(f64::NAN)
}

fn is_square(n: &BigInt) -> bool {
    if n.is_negative() {
        return false;
    }
    let s = n.sqrt();
    &s * &s == *n
}

/// Descriptor of `ℚ(√r)`; `r` is a positive rational that is not a square.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadraticField {
    r: BigRational,
}

impl QuadraticField {
    pub fn new(r: BigRational) -> Result<Self> {
        if !r.is_positive() {
            return Err(input(format!("field descriptor r = {r} must be positive")));
        }
        if is_square(r.numer()) && is_square(r.denom()) {
            return Err(input(format!(
                "field descriptor r = {r} is a rational square, so sqrt(r) is not irrational"
            )));
        }
        Ok(Self { r })
    }

    pub fn parse(text: &str) -> Result<Self> {
        let r = parse_rational(text)?;
        Self::new(r)
    }

    /// `ℚ(√2)`, the default field.
    pub fn sqrt2() -> Self {
        Self { r: BigRational::from_integer(BigInt::from(2)) }
    }

    pub fn r(&self) -> &BigRational {
        &self.r
    }

    pub fn alpha_f64(&self) -> f64 {
        libm::sqrt(rational_to_f64(&self.r))
    }

    pub fn zero(&self) -> ExactScalar {
        ExactScalar::new(BigRational::zero(), BigRational::zero(), self)
    }

    pub fn one(&self) -> ExactScalar {
        ExactScalar::new(BigRational::one(), BigRational::zero(), self)
    }

    pub fn alpha(&self) -> ExactScalar {
        ExactScalar::new(BigRational::zero(), BigRational::one(), self)
    }

    pub fn int(&self, n: i64) -> ExactScalar {
        self.rational(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn rational(&self, q: BigRational) -> ExactScalar {
        ExactScalar::new(q, BigRational::zero(), self)
    }

    /// Parse `a/b` or `a/b+c/d*al`.
    pub fn scalar(&self, text: &str) -> Result<ExactScalar> {
        let (a, b) = parse_components(text)?;
        Ok(ExactScalar::new(a, b, self))
    }
}

impl fmt::Display for QuadraticField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.r)
    }
}

/// `a + b·α` with `a, b ∈ ℚ` and `α = √r`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactScalar {
    a: BigRational,
    b: BigRational,
    r: BigRational,
}

impl ExactScalar {
    pub fn new(a: BigRational, b: BigRational, field: &QuadraticField) -> Self {
        Self { a, b, r: field.r.clone() }
    }

    /// Rational part.
    pub fn a(&self) -> &BigRational {
        &self.a
    }

    /// Coefficient of `α`.
    pub fn b(&self) -> &BigRational {
        &self.b
    }

    pub fn field(&self) -> QuadraticField {
        QuadraticField { r: self.r.clone() }
    }

    pub fn is_rational(&self) -> bool {
        Zero::is_zero(&self.b)
    }

    pub fn to_f64(&self) -> f64 {
        let alpha = libm::sqrt(rational_to_f64(&self.r));
        rational_to_f64(&self.a) + rational_to_f64(&self.b) * alpha
    }

    /// Norm `a² − r b²`, nonzero for nonzero elements.
    pub fn norm(&self) -> BigRational {
        &self.a * &self.a - &self.r * &self.b * &self.b
    }

    pub fn conjugate(&self) -> Self {
        Self { a: self.a.clone(), b: -self.b.clone(), r: self.r.clone() }
    }

    fn r_of<'a>(&'a self, rhs: &'a Self) -> &'a BigRational {
        debug_assert!(
            self.r == rhs.r || self.is_rational() || rhs.is_rational(),
            "mixing scalars from different quadratic fields"
        );
        if self.is_rational() {
            &rhs.r
        } else {
            &self.r
        }
    }
}

impl Field for ExactScalar {
    fn is_zero(&self) -> bool {
        Zero::is_zero(&self.a) && Zero::is_zero(&self.b)
    }
    fn zero_like(&self) -> Self {
        Self { a: BigRational::zero(), b: BigRational::zero(), r: self.r.clone() }
    }
    fn one_like(&self) -> Self {
        Self { a: BigRational::one(), b: BigRational::zero(), r: self.r.clone() }
    }
    fn add(&self, rhs: &Self) -> Self {
        Self { a: &self.a + &rhs.a, b: &self.b + &rhs.b, r: self.r_of(rhs).clone() }
    }
    fn sub(&self, rhs: &Self) -> Self {
        Self { a: &self.a - &rhs.a, b: &self.b - &rhs.b, r: self.r_of(rhs).clone() }
    }
    fn mul(&self, rhs: &Self) -> Self {
        let r = self.r_of(rhs).clone();
        let a = &self.a * &rhs.a + &r * &self.b * &rhs.b;
        let b = &self.a * &rhs.b + &self.b * &rhs.a;
        Self { a, b, r }
    }
    fn inv(&self) -> Self {
        let n = self.norm();
        assert!(!Zero::is_zero(&n), "inverse of zero in quadratic field");
        Self { a: &self.a / &n, b: -(&self.b / &n), r: self.r.clone() }
    }
}

impl Add for &ExactScalar {
    type Output = ExactScalar;
    fn add(self, rhs: Self) -> ExactScalar {
        Field::add(self, rhs)
    }
}

impl Sub for &ExactScalar {
    type Output = ExactScalar;
    fn sub(self, rhs: Self) -> ExactScalar {
        Field::sub(self, rhs)
    }
}

impl Mul for &ExactScalar {
    type Output = ExactScalar;
    fn mul(self, rhs: Self) -> ExactScalar {
        Field::mul(self, rhs)
    }
}

impl Neg for &ExactScalar {
    type Output = ExactScalar;
    fn neg(self) -> ExactScalar {
        ExactScalar { a: -self.a.clone(), b: -self.b.clone(), r: self.r.clone() }
    }
}

impl Neg for ExactScalar {
    type Output = ExactScalar;
    fn neg(self) -> ExactScalar {
        -&self
    }
}

impl fmt::Display for ExactScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if Zero::is_zero(&self.b) {
            return write!(f, "{}", self.a);
        }
        if !Zero::is_zero(&self.a) {
            write!(f, "{}", self.a)?;
            if self.b.is_positive() {
                f.write_str("+")?;
            }
        }
        write!(f, "{}*al", self.b)
    }
}

fn parse_err(text: &str, reason: &'static str) -> Error {
    Error::Parse { input: text.to_string(), reason }
}

/// Parse `n` or `n/d` with optional leading sign.
pub fn parse_rational(text: &str) -> Result<BigRational> {
    if text.is_empty() {
        return Err(parse_err(text, "empty rational"));
    }
    if text.chars().any(char::is_whitespace) {
        return Err(parse_err(text, "whitespace is not allowed"));
    }
    let (num, den) = match text.split_once('/') {
        Some((n, d)) => (n, d),
        None => (text, "1"),
    };
    let num = BigInt::from_str(num).map_err(|_| parse_err(text, "bad numerator"))?;
    if den.starts_with(['+', '-']) {
        return Err(parse_err(text, "sign not allowed in denominator"));
    }
    let den = BigInt::from_str(den).map_err(|_| parse_err(text, "bad denominator"))?;
    if Zero::is_zero(&den) {
        return Err(parse_err(text, "zero denominator"));
    }
    Ok(BigRational::new(num, den))
}

fn parse_components(text: &str) -> Result<(BigRational, BigRational)> {
    if text.chars().any(char::is_whitespace) {
        return Err(parse_err(text, "whitespace is not allowed"));
    }
    let Some(head) = text.strip_suffix("*al") else {
        if text.ends_with("al") {
            return Err(parse_err(text, "irrational part must be written c/d*al"));
        }
        return Ok((parse_rational(text)?, BigRational::zero()));
    };
    // Split at the last sign that is not in leading position.
    let split = head
        .char_indices()
        .skip(1)
        .filter(|&(_, c)| c == '+' || c == '-')
        .map(|(i, _)| i)
        .last();
    match split {
        Some(i) => {
            let a = parse_rational(&head[..i])?;
            let b_text = &head[i..];
            let b = parse_rational(b_text.strip_prefix('+').unwrap_or(b_text))?;
            Ok((a, b))
        }
        None => Ok((BigRational::zero(), parse_rational(head)?)),
    }
}
