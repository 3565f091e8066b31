use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::{Error, Result};

/// Exact rational value used by `--exact` mode.
pub type Rational = BigRational;

/// Comparison tolerance for floating point evaluation.
///
/// Two `f64` values are considered equal when they differ by at most the
/// tolerance. Exact scalars ignore it.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Tolerance(f64);

impl Tolerance {
    pub const DEFAULT: Tolerance = Tolerance(1e-9);
    pub const ENV_VAR: &'static str = "POSSCHECK_EPSILON";

    pub fn new(eps: f64) -> Result<Self> {
        if eps.is_finite() && (0.0..0.5).contains(&eps) {
            Ok(Tolerance(eps))
        } else {
            Err(Error::Parse(format!("tolerance {eps} must lie in [0, 0.5)")))
        }
    }

    /// Reads `POSSCHECK_EPSILON`, falling back to the default when unset.
    pub fn from_env() -> Result<Self> {
        match std::env::var(Self::ENV_VAR) {
            Ok(s) => {
                let eps = s
                    .trim()
                    .parse::<f64>()
                    .map_err(|e| Error::Parse(format!("{}={s}: {e}", Self::ENV_VAR)))?;
                Tolerance::new(eps)
            }
            Err(_) => Ok(Tolerance::DEFAULT),
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance::DEFAULT
    }
}

/// Numeric values a possibility table can hold.
///
/// The operation set is exactly what the three base t-norms and their
/// residuals need (`min`/`max` via ordering, `+`, `-`, `*`, `/`), so both
/// `f64` and [`Rational`] qualify. Automorphism transforms need real powers
/// and are only available for `f64`.
pub trait Scalar:
    Clone + PartialEq + PartialOrd + fmt::Debug + fmt::Display + Send + Sync + 'static
{
    /// Whether comparisons are exact (tolerance ignored).
    const EXACT: bool;

    fn zero() -> Self;
    fn one() -> Self;
    fn add(&self, rhs: &Self) -> Self;
    fn sub(&self, rhs: &Self) -> Self;
    fn mul(&self, rhs: &Self) -> Self;
    fn div(&self, rhs: &Self) -> Self;
    fn to_f64(&self) -> f64;
    fn from_f64(x: f64) -> Option<Self>;
    /// Parses a decimal number or a `p/q` fraction.
    fn parse(s: &str) -> Result<Self>;
    /// `self^p`, or `None` when the result is not representable.
    fn powf(&self, p: f64) -> Option<Self>;
    fn close_to(&self, other: &Self, tol: Tolerance) -> bool;

    fn is_unit(&self) -> bool {
        *self >= Self::zero() && *self <= Self::one()
    }

    fn min_of(&self, other: &Self) -> Self {
        if self <= other {
            self.clone()
        } else {
            other.clone()
        }
    }

    fn max_of(&self, other: &Self) -> Self {
        if self >= other {
            self.clone()
        } else {
            other.clone()
        }
    }
}

impl Scalar for f64 {
    const EXACT: bool = false;

    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
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
    fn div(&self, rhs: &Self) -> Self {
        self / rhs
    }
    fn to_f64(&self) -> f64 {
        *self
    }
    fn from_f64(x: f64) -> Option<Self> {
        x.is_finite().then_some(x)
    }
    fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        if let Some((p, q)) = s.split_once('/') {
            let p: f64 = p.trim().parse().map_err(|_| bad_number(s))?;
            let q: f64 = q.trim().parse().map_err(|_| bad_number(s))?;
            if q == 0.0 {
                return Err(bad_number(s));
            }
            return Ok(p / q);
        }
        let v: f64 = s.parse().map_err(|_| bad_number(s))?;
        if v.is_finite() {
            Ok(v)
        } else {
            Err(bad_number(s))
        }
    }
    fn powf(&self, p: f64) -> Option<Self> {
        Some(f64::powf(*self, p))
    }
    fn close_to(&self, other: &Self, tol: Tolerance) -> bool {
        (self - other).abs() <= tol.value()
    }
}

impl Scalar for Rational {
    const EXACT: bool = true;

    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
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
    fn div(&self, rhs: &Self) -> Self {
        self / rhs
    }
    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }
    /// Converts through the shortest decimal representation, so `0.1`
    /// becomes exactly `1/10` rather than the nearest binary fraction.
    fn from_f64(x: f64) -> Option<Self> {
        if !x.is_finite() {
            return None;
        }
        parse_decimal(&format!("{x}"))
    }
    fn parse(s: &str) -> Result<Self> {
        parse_rational(s)
    }
    fn powf(&self, _p: f64) -> Option<Self> {
        None
    }
    fn close_to(&self, other: &Self, _tol: Tolerance) -> bool {
        self == other
    }
}

fn bad_number(s: &str) -> Error {
    Error::Parse(format!("`{s}` is not a number or p/q fraction"))
}

/// Parses `"p/q"`, an integer, or a plain decimal such as `"0.25"` exactly.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    if let Some((p, q)) = s.split_once('/') {
        let p = BigInt::from_str(p.trim()).map_err(|_| bad_number(s))?;
        let q = BigInt::from_str(q.trim()).map_err(|_| bad_number(s))?;
        if q.is_zero() {
            return Err(bad_number(s));
        }
        return Ok(Rational::new(p, q));
    }
    parse_decimal(s).ok_or_else(|| bad_number(s))
}

fn parse_decimal(s: &str) -> Option<Rational> {
    let (neg, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s.strip_prefix('+').unwrap_or(s)),
    };
    let (int, frac) = body.split_once('.').unwrap_or((body, ""));
    if int.is_empty() && frac.is_empty() {
        return None;
    }
    if !int.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let digits = format!("{int}{frac}");
    let numer = BigInt::from_str(if digits.is_empty() { "0" } else { &digits }).ok()?;
    let denom = num_traits::pow(BigInt::from(10), frac.len());
    let r = Rational::new(numer, denom);
    Some(if neg { -r.abs() } else { r })
}
