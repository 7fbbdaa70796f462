//! Internal exact fixed-denominator view of a space's matrix.
//!
//! The exhaustive searches compare millions of weights.  Within one search
//! all values live in the lattice generated by the matrix entries under ⊕,
//! so after clearing denominators by their lcm every value is a u64 numerator
//! (with `u64::MAX` as ∞) and every comparison and tensor application is
//! integer arithmetic.  The conversion is exact in both directions; inputs
//! whose scaled entries would overflow are rejected rather than rounded.

use num_integer::Integer;

use crate::quantale::{Tensor, Weight};
use crate::spaces::FiniteCapSpace;
use crate::{Error, Result};

/// ∞ in scaled form.
pub(crate) const INF: u64 = u64::MAX;

/// Ceiling on scaled entries.  The searches form sums of at most a handful of
/// entries, so this leaves ample headroom below `u64::MAX`.
const MAX_SCALED: u64 = 1 << 40;

/// `a ⊕ b` on scaled values.
pub(crate) fn combine(t: Tensor, a: u64, b: u64) -> u64 {
    match t {
        Tensor::Max => a.max(b),
        Tensor::Plus => {
            if a == INF || b == INF {
                INF
            } else {
                a + b
            }
        }
    }
}

/// One space's matrix with denominators cleared.
#[derive(Debug, Clone)]
pub(crate) struct ScaledSpace {
    pub n: usize,
    /// Row-major: `d[x * n + a]`.
    pub d: Vec<u64>,
}

impl ScaledSpace {
    pub fn new(space: &FiniteCapSpace) -> Result<ScaledSpace> {
        let denom = common_denominator(space.matrix().iter().copied(), 1)?;
        let d = space
            .matrix()
            .iter()
            .map(|&w| scale(w, denom))
            .collect::<Result<Vec<u64>>>()?;
        Ok(ScaledSpace {
            n: space.len(),
            d,
        })
    }

    #[inline]
    pub fn at(&self, x: usize, a: usize) -> u64 {
        self.d[x * self.n + a]
    }
}

fn common_denominator<I: Iterator<Item = Weight>>(weights: I, start: i64) -> Result<i64> {
    let mut denom: i64 = start;
    for w in weights {
        if let Weight::Finite(r) = w {
            denom = denom
                .checked_mul(*r.denom() / denom.gcd(r.denom()))
                .ok_or(Error::ScaleOverflow)?;
        }
    }
    Ok(denom)
}

/// Exact scaling of a weight to the given denominator.
fn scale(w: Weight, denom: i64) -> Result<u64> {
    match w {
        Weight::Infinity => Ok(INF),
        Weight::Finite(r) => {
            if denom % r.denom() != 0 {
                return Err(Error::ScaleOverflow);
            }
            let v = r
                .numer()
                .checked_mul(denom / r.denom())
                .ok_or(Error::ScaleOverflow)?;
            if v < 0 || v as u64 > MAX_SCALED {
                return Err(Error::ScaleOverflow);
            }
            Ok(v as u64)
        }
    }
}
