//! Exact arithmetic for subgroup indices and entropy values.
//!
//! Entropy is never stored as a float: an [`ExactEntropy`] holds the natural
//! number `α` whose logarithm is the entropy, so addition of entropies is
//! multiplication of naturals and comparisons are integer comparisons.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul};

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Result, TdlcError};

/// The index of one subgroup in another: a positive natural or infinite.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum IndexValue {
    Finite(BigUint),
    Infinite,
}

impl IndexValue {
    pub fn one() -> Self {
        IndexValue::Finite(BigUint::one())
    }

    pub fn finite(n: impl Into<BigUint>) -> Result<Self> {
        let n = n.into();
        if n.is_zero() {
            return Err(TdlcError::ZeroIndex);
        }
        Ok(IndexValue::Finite(n))
    }

    /// `base^exp` for a prime power index.
    pub fn power(base: u64, exp: u64) -> Self {
        IndexValue::Finite(num_traits::pow(BigUint::from(base), exp as usize))
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, IndexValue::Finite(_))
    }

    pub fn as_finite(&self) -> Option<&BigUint> {
        match self {
            IndexValue::Finite(n) => Some(n),
            IndexValue::Infinite => None,
        }
    }

    /// Exact quotient `self / other` when `other` divides `self`.
    pub fn checked_div(&self, other: &IndexValue) -> Option<IndexValue> {
        match (self, other) {
            (IndexValue::Finite(a), IndexValue::Finite(b)) => {
                if (a % b).is_zero() {
                    Some(IndexValue::Finite(a / b))
                } else {
                    None
                }
            }
            _ => None,
        }
    }

    pub fn divides(&self, other: &IndexValue) -> bool {
        match (self, other) {
            (IndexValue::Finite(a), IndexValue::Finite(b)) => (b % a).is_zero(),
            (_, IndexValue::Infinite) => true,
            (IndexValue::Infinite, IndexValue::Finite(_)) => false,
        }
    }
}

impl Mul for IndexValue {
    type Output = IndexValue;
    fn mul(self, rhs: IndexValue) -> IndexValue {
        match (self, rhs) {
            (IndexValue::Finite(a), IndexValue::Finite(b)) => IndexValue::Finite(a * b),
            _ => IndexValue::Infinite,
        }
    }
}

impl<'a> Mul<&'a IndexValue> for &'a IndexValue {
    type Output = IndexValue;
    fn mul(self, rhs: &IndexValue) -> IndexValue {
        self.clone() * rhs.clone()
    }
}

impl PartialOrd for IndexValue {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for IndexValue {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (IndexValue::Finite(a), IndexValue::Finite(b)) => a.cmp(b),
            (IndexValue::Finite(_), IndexValue::Infinite) => Ordering::Less,
            (IndexValue::Infinite, IndexValue::Finite(_)) => Ordering::Greater,
            (IndexValue::Infinite, IndexValue::Infinite) => Ordering::Equal,
        }
    }
}

impl fmt::Display for IndexValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IndexValue::Finite(n) => write!(f, "{n}"),
            IndexValue::Infinite => write!(f, "inf"),
        }
    }
}

/// An entropy value `log α` for a positive natural `α`, or `+∞`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum ExactEntropy {
    Finite(BigUint),
    Infinite,
}

impl ExactEntropy {
    pub fn zero() -> Self {
        ExactEntropy::Finite(BigUint::one())
    }

    /// `log α`; rejects `α = 0`.
    pub fn log_of(alpha: impl Into<BigUint>) -> Result<Self> {
        let alpha = alpha.into();
        if alpha.is_zero() {
            return Err(TdlcError::ZeroIndex);
        }
        Ok(ExactEntropy::Finite(alpha))
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, ExactEntropy::Finite(a) if a.is_one())
    }

    pub fn alpha(&self) -> Option<&BigUint> {
        match self {
            ExactEntropy::Finite(a) => Some(a),
            ExactEntropy::Infinite => None,
        }
    }

    /// Natural logarithm rendered for humans. Never used in a comparison.
    pub fn display_ln(&self) -> Option<f64> {
        self.alpha().map(ln_biguint)
    }
}

pub fn entropy_from_index(alpha: &IndexValue) -> ExactEntropy {
    match alpha {
        IndexValue::Finite(a) => ExactEntropy::Finite(a.clone()),
        IndexValue::Infinite => ExactEntropy::Infinite,
    }
}

pub fn entropy_add(a: &ExactEntropy, b: &ExactEntropy) -> ExactEntropy {
    a.clone() + b.clone()
}

fn ln_biguint(n: &BigUint) -> f64 {
    let bits = n.bits();
    if bits <= 64 {
        return n.to_f64().map(f64::ln).unwrap_or(0.0);
    }
    let shift = bits - 53;
    let top = (n >> shift).to_f64().unwrap_or(1.0);
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

impl Add for ExactEntropy {
    type Output = ExactEntropy;
    fn add(self, rhs: ExactEntropy) -> ExactEntropy {
        match (self, rhs) {
            (ExactEntropy::Finite(a), ExactEntropy::Finite(b)) => ExactEntropy::Finite(a * b),
            _ => ExactEntropy::Infinite,
        }
    }
}

impl PartialOrd for ExactEntropy {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ExactEntropy {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (ExactEntropy::Finite(a), ExactEntropy::Finite(b)) => a.cmp(b),
            (ExactEntropy::Finite(_), ExactEntropy::Infinite) => Ordering::Less,
            (ExactEntropy::Infinite, ExactEntropy::Finite(_)) => Ordering::Greater,
            (ExactEntropy::Infinite, ExactEntropy::Infinite) => Ordering::Equal,
        }
    }
}

impl fmt::Display for ExactEntropy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExactEntropy::Finite(a) if a.is_one() => write!(f, "0"),
            ExactEntropy::Finite(a) => write!(f, "log {a}"),
            ExactEntropy::Infinite => write!(f, "inf"),
        }
    }
}
