//! Scalar backends.
//!
//! Every algorithm in the crate is generic over [`Scalar`]. Two backends are
//! provided: [`Rational`] (arbitrary-precision fractions, exact equality) and
//! [`Float`] (IEEE doubles compared with a process-wide relative tolerance).

use std::fmt::{self, Debug, Display};
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;
use std::sync::atomic::{AtomicU64, Ordering};

use num::bigint::Sign;
use num::{BigInt, BigRational, One, Signed, ToPrimitive, Zero};

/// Exact rational scalar.
pub type Rational = BigRational;

pub const DEFAULT_FLOAT_TOLERANCE: f64 = 1e-9;

static FLOAT_TOL_BITS: AtomicU64 = AtomicU64::new(0x3E11_2E0B_E826_D695); // 1e-9

/// Sets the comparison tolerance used by [`Float`] for the rest of the run.
pub fn set_float_tolerance(tol: f64) {
    assert!(tol >= 0.0 && tol.is_finite(), "tolerance must be finite and non-negative");
    FLOAT_TOL_BITS.store(tol.to_bits(), Ordering::Relaxed);
}

pub fn float_tolerance() -> f64 {
    f64::from_bits(FLOAT_TOL_BITS.load(Ordering::Relaxed))
}

pub trait Scalar:
    Clone
    + Debug
    + Display
    + PartialEq
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    /// True for backends with decidable equality.
    const EXACT: bool;

    fn zero() -> Self;
    fn one() -> Self;
    fn from_i64(v: i64) -> Self;
    fn from_rational(q: &Rational) -> Self;
    fn from_f64(v: f64) -> Self;
    fn to_f64(&self) -> f64;

    /// Exact backend: numerically zero. Float backend: `|x| <= tol`.
    fn is_zero(&self) -> bool;

    /// -1, 0 or 1, honouring the backend's notion of zero.
    fn sign(&self) -> i32 {
        if self.is_zero() {
            0
        } else if self.to_f64() > 0.0 {
            1
        } else {
            -1
        }
    }

    /// `self += a * b`.
    fn add_mul(&mut self, a: &Self, b: &Self);

    /// Preference when choosing an elimination pivot; larger is better.
    fn pivot_score(&self) -> f64;

    /// Parses a rational (`p/q`) or decimal literal. Returns `None` if the
    /// literal is malformed.
    fn parse_literal(text: &str) -> Option<Self>;

    fn to_json(&self) -> serde_json::Value;

    fn abs_f64(&self) -> f64 {
        self.to_f64().abs()
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
    fn from_i64(v: i64) -> Self {
        BigRational::from_integer(BigInt::from(v))
    }
    fn from_rational(q: &Rational) -> Self {
        q.clone()
    }
    fn from_f64(v: f64) -> Self {
        BigRational::from_float(v).expect("finite float")
    }
    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or_else(|| {
            // numerator/denominator may overflow f64 separately
            let n = self.numer().to_f64().unwrap_or(f64::NAN);
            let d = self.denom().to_f64().unwrap_or(f64::NAN);
            n / d
        })
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn sign(&self) -> i32 {
        match self.numer().sign() {
            Sign::Minus => -1,
            Sign::NoSign => 0,
            Sign::Plus => 1,
        }
    }
    fn add_mul(&mut self, a: &Self, b: &Self) {
        if Zero::is_zero(a) || Zero::is_zero(b) {
            return;
        }
        *self += a * b;
    }
    fn pivot_score(&self) -> f64 {
        if Zero::is_zero(self) {
            return f64::NEG_INFINITY;
        }
        -((self.numer().bits() + self.denom().bits()) as f64)
    }
    fn parse_literal(text: &str) -> Option<Self> {
        parse_rational(text)
    }
    fn to_json(&self) -> serde_json::Value {
        serde_json::Value::String(self.to_string())
    }
    fn abs_f64(&self) -> f64 {
        Scalar::to_f64(&self.abs())
    }
}

/// Parses `p`, `p/q`, or a decimal such as `-2.125` into an exact fraction.
pub fn parse_rational(text: &str) -> Option<Rational> {
    let t = text.trim();
    if t.is_empty() {
        return None;
    }
    if let Some((p, q)) = t.split_once('/') {
        let p = parse_decimal(p)?;
        let q = parse_decimal(q)?;
        if Zero::is_zero(&q) {
            return None;
        }
        return Some(p / q);
    }
    parse_decimal(t)
}

fn parse_decimal(text: &str) -> Option<Rational> {
    let t = text.trim();
    let (neg, body) = match t.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, t.strip_prefix('+').unwrap_or(t)),
    };
    if body.is_empty() {
        return None;
    }
    let (int_part, frac_part) = match body.split_once('.') {
        Some((i, f)) => (i, f),
        None => (body, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.chars().all(|c| c.is_ascii_digit()) || !frac_part.chars().all(|c| c.is_ascii_digit()) {
        return None;
    }
    let digits = format!("{int_part}{frac_part}");
    let numer = BigInt::from_str(if digits.is_empty() { "0" } else { &digits }).ok()?;
    let denom = num::pow(BigInt::from(10), frac_part.len());
    let q = BigRational::new(numer, denom);
    Some(if neg { -q } else { q })
}

/// Double-precision scalar whose equality is tolerance based.
#[derive(Clone, Copy, Default)]
pub struct Float(pub f64);

impl Float {
    pub fn value(self) -> f64 {
        self.0
    }
}

impl Debug for Float {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        Debug::fmt(&self.0, f)
    }
}

impl Display for Float {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        Display::fmt(&self.0, f)
    }
}

impl PartialEq for Float {
    fn eq(&self, other: &Self) -> bool {
        let (x, y) = (self.0, other.0);
        let scale = 1f64.max(x.abs()).max(y.abs());
        (x - y).abs() <= float_tolerance() * scale
    }
}

macro_rules! float_binop {
    ($tr:ident, $m:ident, $op:tt) => {
        impl $tr for Float {
            type Output = Float;
            fn $m(self, rhs: Float) -> Float {
                Float(self.0 $op rhs.0)
            }
        }
    };
}
float_binop!(Add, add, +);
float_binop!(Sub, sub, -);
float_binop!(Mul, mul, *);
float_binop!(Div, div, /);

impl Neg for Float {
    type Output = Float;
    fn neg(self) -> Float {
        Float(-self.0)
    }
}

impl Scalar for Float {
    const EXACT: bool = false;

    fn zero() -> Self {
        Float(0.0)
    }
    fn one() -> Self {
        Float(1.0)
    }
    fn from_i64(v: i64) -> Self {
        Float(v as f64)
    }
    fn from_rational(q: &Rational) -> Self {
        Float(Scalar::to_f64(q))
    }
    fn from_f64(v: f64) -> Self {
        Float(v)
    }
    fn to_f64(&self) -> f64 {
        self.0
    }
    fn is_zero(&self) -> bool {
        self.0.abs() <= float_tolerance()
    }
    fn add_mul(&mut self, a: &Self, b: &Self) {
        self.0 = a.0.mul_add(b.0, self.0);
    }
    fn pivot_score(&self) -> f64 {
        self.0.abs()
    }
    fn parse_literal(text: &str) -> Option<Self> {
        let t = text.trim();
        if let Some((p, q)) = t.split_once('/') {
            let p: f64 = p.trim().parse().ok()?;
            let q: f64 = q.trim().parse().ok()?;
            if q == 0.0 {
                return None;
            }
            return Some(Float(p / q));
        }
        if t.is_empty() || !t.chars().all(|c| c.is_ascii_digit() || matches!(c, '.' | '-' | '+' | 'e' | 'E')) {
            return None;
        }
        t.parse().ok().map(Float)
    }
    fn to_json(&self) -> serde_json::Value {
        serde_json::Number::from_f64(self.0)
            .map(serde_json::Value::Number)
            .unwrap_or(serde_json::Value::Null)
    }
}

/// Best rational approximation of `x` with denominator at most `max_denom`,
/// by continued-fraction convergents.
pub fn rationalize(x: f64, max_denom: u64) -> Option<Rational> {
    if !x.is_finite() {
        return None;
    }
    let neg = x < 0.0;
    let mut rest = x.abs();
    let (mut p0, mut q0, mut p1, mut q1): (i128, i128, i128, i128) = (0, 1, 1, 0);
    for _ in 0..64 {
        let a = rest.floor();
        if a > 1e15 {
            break;
        }
        let a = a as i128;
        let p2 = a * p1 + p0;
        let q2 = a * q1 + q0;
        if q2 > max_denom as i128 {
            break;
        }
        (p0, q0, p1, q1) = (p1, q1, p2, q2);
        let frac = rest - a as f64;
        if frac.abs() < 1e-13 * rest.max(1.0) {
            break;
        }
        rest = 1.0 / frac;
    }
    if q1 == 0 {
        return None;
    }
    let q = BigRational::new(BigInt::from(p1), BigInt::from(q1));
    Some(if neg { -q } else { q })
}
