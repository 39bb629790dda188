//! Exact scalars: arbitrary-precision rationals and the Boolean semiring.
//!
//! Both carriers implement [`Scalar`], a commutative semiring with an action of
//! the nonnegative rationals. Everything downstream (matrices, splittings,
//! bimonoids) is generic over this trait.

use std::fmt;
use std::ops::{Add, Mul};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::Rng;
use serde_json::Value;
use thiserror::Error;

/// Exact rational number, always stored in lowest terms with a positive denominator.
pub type Rational = BigRational;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ScalarError {
    #[error("negative scalar {0} cannot act on a Q>=0-module")]
    Negative(String),
    #[error("malformed scalar encoding: {0}")]
    Decode(String),
}

/// A commutative semiring that is an algebra over the nonnegative rationals.
///
/// `from_rational(q)` is the image of `q` under the structure morphism
/// `Q>=0 -> Self`; the action on an element is `from_rational(q) * x`.
pub trait Scalar:
    Clone
    + PartialEq
    + Eq
    + fmt::Debug
    + fmt::Display
    + Zero
    + One
    + Add<Output = Self>
    + Mul<Output = Self>
    + Send
    + Sync
    + 'static
{
    /// Short model tag used in serialized files.
    const KIND: &'static str;

    fn from_rational(q: &Rational) -> Result<Self, ScalarError>;

    /// Apply the rational action `q . x`.
    fn act(q: &Rational, x: &Self) -> Result<Self, ScalarError> {
        Ok(Self::from_rational(q)? * x.clone())
    }

    /// `self += a * b`, the inner step of matrix products.
    fn add_assign_mul(&mut self, a: &Self, b: &Self) {
        *self = self.clone() + a.clone() * b.clone();
    }

    fn is_nonnegative(&self) -> bool;

    /// A value guaranteed to differ from `self`.
    fn perturb(&self) -> Self;

    /// A small random element, used for randomized law checks.
    fn sample<R: Rng + ?Sized>(rng: &mut R) -> Self;

    fn to_json(&self) -> Value;

    fn from_json(v: &Value) -> Result<Self, ScalarError>;
}

pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn rat_int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// `1/n!` exactly.
pub fn inv_factorial(n: usize) -> Rational {
    factorial(n).recip()
}

pub fn factorial(n: usize) -> Rational {
    Rational::from_integer((1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k)))
}

/// `binom(n, k)` as an exact rational (zero when `k > n`).
pub fn binomial(n: usize, k: usize) -> Rational {
    if k > n {
        return Rational::zero();
    }
    factorial(n) / (factorial(k) * factorial(n - k))
}

fn int_to_json(i: &BigInt) -> Value {
    match i.to_i64() {
        Some(v) => Value::from(v),
        // Out of i64 range: fall back to a decimal string.
        None => Value::String(i.to_string()),
    }
}

fn int_from_json(v: &Value) -> Result<BigInt, ScalarError> {
    match v {
        Value::Number(n) => n
            .as_i64()
            .map(BigInt::from)
            .or_else(|| n.as_u64().map(BigInt::from))
            .ok_or_else(|| ScalarError::Decode(format!("not an integer: {n}"))),
        Value::String(s) => s
            .parse::<BigInt>()
            .map_err(|_| ScalarError::Decode(format!("not an integer: {s:?}"))),
        other => Err(ScalarError::Decode(format!("not an integer: {other}"))),
    }
}

impl Scalar for Rational {
    const KIND: &'static str = "matq";

    fn from_rational(q: &Rational) -> Result<Self, ScalarError> {
        Ok(q.clone())
    }

    fn add_assign_mul(&mut self, a: &Self, b: &Self) {
        *self += a * b;
    }

    fn is_nonnegative(&self) -> bool {
        !self.is_negative()
    }

    fn perturb(&self) -> Self {
        self + Rational::one()
    }

    fn sample<R: Rng + ?Sized>(rng: &mut R) -> Self {
        rat(rng.gen_range(0..=4), rng.gen_range(1..=3))
    }

    fn to_json(&self) -> Value {
        Value::Array(vec![int_to_json(self.numer()), int_to_json(self.denom())])
    }

    fn from_json(v: &Value) -> Result<Self, ScalarError> {
        let arr = v
            .as_array()
            .filter(|a| a.len() == 2)
            .ok_or_else(|| ScalarError::Decode(format!("expected [num, den], got {v}")))?;
        let num = int_from_json(&arr[0])?;
        let den = int_from_json(&arr[1])?;
        if !den.is_positive() {
            return Err(ScalarError::Decode(format!("denominator must be >= 1, got {den}")));
        }
        let q = Rational::new_raw(num.clone(), den.clone());
        let reduced = Rational::new(num, den);
        if q.numer() != reduced.numer() || q.denom() != reduced.denom() {
            return Err(ScalarError::Decode(format!("rational {v} is not in lowest terms")));
        }
        Ok(reduced)
    }
}

/// Element of the Boolean semiring `B = {0, 1}` with `1 + 1 = 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Boolean(pub bool);

impl Boolean {
    pub const FALSE: Boolean = Boolean(false);
    pub const TRUE: Boolean = Boolean(true);
}

impl fmt::Display for Boolean {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", u8::from(self.0))
    }
}

impl Add for Boolean {
    type Output = Boolean;
    fn add(self, rhs: Boolean) -> Boolean {
        Boolean(self.0 || rhs.0)
    }
}

impl Mul for Boolean {
    type Output = Boolean;
    fn mul(self, rhs: Boolean) -> Boolean {
        Boolean(self.0 && rhs.0)
    }
}

impl Zero for Boolean {
    fn zero() -> Self {
        Boolean(false)
    }
    fn is_zero(&self) -> bool {
        !self.0
    }
}

impl One for Boolean {
    fn one() -> Self {
        Boolean(true)
    }
}

/// `q . x` in `B`: zero when `q = 0`, `x` otherwise. Negative `q` is rejected.
pub fn bool_rational_action(q: &Rational, x: Boolean) -> Result<Boolean, ScalarError> {
    Boolean::act(q, &x)
}

impl Scalar for Boolean {
    const KIND: &'static str = "rel";

    fn from_rational(q: &Rational) -> Result<Self, ScalarError> {
        if q.is_negative() {
            return Err(ScalarError::Negative(q.to_string()));
        }
        Ok(Boolean(!q.is_zero()))
    }

    fn add_assign_mul(&mut self, a: &Self, b: &Self) {
        self.0 |= a.0 && b.0;
    }

    fn is_nonnegative(&self) -> bool {
        true
    }

    fn perturb(&self) -> Self {
        Boolean(!self.0)
    }

    fn sample<R: Rng + ?Sized>(rng: &mut R) -> Self {
        Boolean(rng.gen_bool(0.5))
    }

    fn to_json(&self) -> Value {
        Value::from(u8::from(self.0))
    }

    fn from_json(v: &Value) -> Result<Self, ScalarError> {
        match v.as_u64() {
            Some(0) => Ok(Boolean(false)),
            Some(1) => Ok(Boolean(true)),
            _ => Err(ScalarError::Decode(format!("expected 0 or 1, got {v}"))),
        }
    }
}
