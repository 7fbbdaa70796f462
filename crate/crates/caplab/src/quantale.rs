//! The value quantale: exact nonnegative rationals extended with ∞, ordered by
//! ≤, combined by one of two tensors ⊕ (truncated addition, or join), each
//! with its residuation `residuate(v, u) = least α with v ≤ u ⊕ α`.
//!
//! All arithmetic is exact.  Parsing accepts decimal literals (`1.5`),
//! rational literals (`3/2`), plain integers (`5`) and the token `inf`;
//! decimals are converted to exact rationals.

use std::cmp::Ordering;
use std::fmt;
use std::ops::Add;
use std::str::FromStr;

use num_rational::Ratio;
use num_traits::Zero;

use crate::Error;

/// Exact rational backing for finite weights.
pub type Rational = Ratio<i64>;

/// A distance or limit value: an exact nonnegative rational, or ∞.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Weight {
    Finite(Rational),
    Infinity,
}

impl Weight {
    pub const INF: Weight = Weight::Infinity;

    pub fn zero() -> Weight {
        Weight::Finite(Rational::zero())
    }

    /// Integer weight; `n` must be nonnegative.
    pub fn int(n: i64) -> Weight {
        assert!(n >= 0, "weights are nonnegative");
        Weight::Finite(Rational::from_integer(n))
    }

    /// Exact rational weight `num/den`; panics on `den == 0` or a negative value.
    pub fn ratio(num: i64, den: i64) -> Weight {
        assert!(den != 0, "zero denominator");
        let r = Rational::new(num, den);
        assert!(r >= Rational::zero(), "weights are nonnegative");
        Weight::Finite(r)
    }

    pub fn is_zero(self) -> bool {
        self == Weight::zero()
    }

    pub fn is_finite(self) -> bool {
        matches!(self, Weight::Finite(_))
    }

    pub fn is_infinite(self) -> bool {
        matches!(self, Weight::Infinity)
    }

    /// Finite part, if any.
    pub fn finite(self) -> Option<Rational> {
        match self {
            Weight::Finite(r) => Some(r),
            Weight::Infinity => None,
        }
    }

    /// Join (binary maximum).
    pub fn join(self, other: Weight) -> Weight {
        self.max(other)
    }
}

impl PartialOrd for Weight {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Weight {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Weight::Finite(a), Weight::Finite(b)) => a.cmp(b),
            (Weight::Finite(_), Weight::Infinity) => Ordering::Less,
            (Weight::Infinity, Weight::Finite(_)) => Ordering::Greater,
            (Weight::Infinity, Weight::Infinity) => Ordering::Equal,
        }
    }
}

impl Add for Weight {
    type Output = Weight;

    /// Truncated addition: anything plus ∞ is ∞.
    fn add(self, other: Weight) -> Weight {
        match (self, other) {
            (Weight::Finite(a), Weight::Finite(b)) => Weight::Finite(a + b),
            _ => Weight::Infinity,
        }
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Weight::Infinity => write!(f, "inf"),
            Weight::Finite(r) if r.is_integer() => write!(f, "{}", r.numer()),
            Weight::Finite(r) => write!(f, "{}/{}", r.numer(), r.denom()),
        }
    }
}

impl FromStr for Weight {
    type Err = Error;

    fn from_str(text: &str) -> Result<Weight, Error> {
        let bad = |reason: &str| Error::WeightLiteral {
            text: text.to_string(),
            reason: reason.to_string(),
        };
        let s = text.trim();
        if s.is_empty() {
            return Err(bad("empty"));
        }
        if s == "inf" {
            return Ok(Weight::Infinity);
        }
        if let Some((num, den)) = s.split_once('/') {
            let n: i64 = num.parse().map_err(|_| bad("numerator is not an integer"))?;
            let d: i64 = den.parse().map_err(|_| bad("denominator is not an integer"))?;
            if d <= 0 {
                return Err(bad("denominator must be positive"));
            }
            if n < 0 {
                return Err(bad("weights are nonnegative"));
            }
            return Ok(Weight::Finite(Rational::new(n, d)));
        }
        if let Some((whole, frac)) = s.split_once('.') {
            if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
                return Err(bad("malformed decimal"));
            }
            let w: i64 = if whole.is_empty() {
                0
            } else {
                whole.parse().map_err(|_| bad("malformed decimal"))?
            };
            if w < 0 || whole.starts_with('-') {
                return Err(bad("weights are nonnegative"));
            }
            let digits: i64 = frac.parse().map_err(|_| bad("decimal part too fine"))?;
            let den = 10i64
                .checked_pow(frac.len() as u32)
                .ok_or_else(|| bad("decimal part too fine"))?;
            let num = w
                .checked_mul(den)
                .and_then(|v| v.checked_add(digits))
                .ok_or_else(|| bad("decimal too large"))?;
            return Ok(Weight::Finite(Rational::new(num, den)));
        }
        let n: i64 = s.parse().map_err(|_| bad("not a weight"))?;
        if n < 0 {
            return Err(bad("weights are nonnegative"));
        }
        Ok(Weight::int(n))
    }
}

/// The tensor ⊕ on the value quantale.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Tensor {
    /// Truncated addition `a + b`.
    Plus,
    /// Join `a ∨ b`.
    Max,
}

impl Tensor {
    pub const BOTH: [Tensor; 2] = [Tensor::Plus, Tensor::Max];

    /// `a ⊕ b`.
    pub fn combine(self, a: Weight, b: Weight) -> Weight {
        match self {
            Tensor::Plus => a + b,
            Tensor::Max => a.max(b),
        }
    }

    /// The residuation `least α with v ≤ u ⊕ α`.
    ///
    /// Case table:
    /// * `v ≤ u` (including `u = ∞`): α = 0;
    /// * Plus, `u < v < ∞`: α = v − u;
    /// * Plus, `v = ∞ > u`: α = ∞ (no finite α closes the gap);
    /// * Max, `v > u`: α = v (any smaller α leaves `u ∨ α < v`).
    pub fn residuate(self, v: Weight, u: Weight) -> Weight {
        if v <= u {
            return Weight::zero();
        }
        match self {
            Tensor::Max => v,
            Tensor::Plus => match (v, u) {
                (Weight::Infinity, _) => Weight::Infinity,
                (Weight::Finite(vf), Weight::Finite(uf)) => Weight::Finite(vf - uf),
                // v ≤ ∞ always holds, so u = ∞ never reaches this branch.
                (Weight::Finite(_), Weight::Infinity) => unreachable!(),
            },
        }
    }
}

impl fmt::Display for Tensor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tensor::Plus => write!(f, "plus"),
            Tensor::Max => write!(f, "max"),
        }
    }
}

impl FromStr for Tensor {
    type Err = Error;

    fn from_str(s: &str) -> Result<Tensor, Error> {
        match s {
            "plus" => Ok(Tensor::Plus),
            "max" => Ok(Tensor::Max),
            other => Err(Error::WeightLiteral {
                text: other.to_string(),
                reason: "expected `plus` or `max`".to_string(),
            }),
        }
    }
}
