//! Linear chains of rational curves over a parabolic fiber.
//!
//! Blowing up the point `Q_j` of the fiber `F_j` (self-intersection 0)
//! repeatedly, as dictated by the weight `alpha_j = p/q`, produces the chain
//!
//! ```text
//! -e_1 ... -e_l  -1  -e'_m ... -e'_1
//! ```
//!
//! where `e` are the digits of `q/p` and `e'` those of `q/(q - p)`. The two
//! strings on either side of the `-1` curve resolve the quotient singularities
//! of types `(p, q)` and `(q - p, q)`.

use std::fmt;

use num_rational::Ratio;
use serde::Serialize;

use crate::cfrac::hj_expand;
use crate::error::{Error, Result};
use crate::Fraction;

/// Self-intersection numbers of a linear chain of curves, left to right.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct CurveChain(pub Vec<i64>);

impl CurveChain {
    pub fn new(selfints: Vec<i64>) -> Self {
        CurveChain(selfints)
    }

    pub fn selfints(&self) -> &[i64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn reversed(&self) -> Self {
        CurveChain(self.0.iter().rev().copied().collect())
    }
}

impl fmt::Display for CurveChain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|e| e.to_string()).collect();
        f.write_str(&parts.join(" "))
    }
}

fn split_weight(alpha: &Fraction) -> Result<(i64, i64)> {
    let (p, q) = (*alpha.numer(), *alpha.denom());
    if p <= 0 || p >= q {
        return Err(Error::WeightOutOfRange(alpha.to_string()));
    }
    Ok((p, q))
}

fn negated(digits: &[i64]) -> Vec<i64> {
    digits.iter().map(|e| -e).collect()
}

/// The two singular strings `([-e_1..-e_l], [-e'_1..-e'_m])` resolving the
/// singularities of types `(p, q)` and `(q - p, q)`.
pub fn singular_strings(alpha: &Fraction) -> Result<(CurveChain, CurveChain)> {
    let (p, q) = split_weight(alpha)?;
    let e = hj_expand(p, q)?;
    let e_dual = hj_expand(q - p, q)?;
    Ok((
        CurveChain(negated(e.digits())),
        CurveChain(negated(e_dual.digits())),
    ))
}

/// Chain over the fiber of a parabolic point of weight `alpha`.
pub fn fiber_chain(alpha: &Fraction) -> Result<CurveChain> {
    let (left, right) = singular_strings(alpha)?;
    let mut out = left.0;
    out.push(-1);
    out.extend(right.0.iter().rev());
    Ok(CurveChain(out))
}

/// Number of point blow-ups needed over the fiber: `len(chain) - 1`.
pub fn blowup_count(alpha: &Fraction) -> Result<usize> {
    Ok(fiber_chain(alpha)?.len() - 1)
}

/// Contracts the leftmost `-1` curve, adding 1 to each neighbour.
pub fn blow_down_once(chain: &CurveChain) -> Result<CurveChain> {
    let pos = chain
        .0
        .iter()
        .position(|&e| e == -1)
        .ok_or(Error::NoExceptionalCurve)?;
    if chain.len() == 1 {
        return Err(Error::ContractsToPoint);
    }
    let mut out = chain.0.clone();
    out.remove(pos);
    if pos > 0 {
        out[pos - 1] += 1;
    }
    if pos < out.len() {
        out[pos] += 1;
    }
    Ok(CurveChain(out))
}

/// Contracts `-1` curves until none remains (or only a single curve is
/// left). For every fiber chain the result is `[0]`.
pub fn blow_down_fully(chain: &CurveChain) -> Result<CurveChain> {
    blow_down_trace(chain).map(|mut steps| steps.pop().unwrap_or_else(|| chain.clone()))
}

/// Every intermediate chain of [`blow_down_fully`], starting with the input.
pub fn blow_down_trace(chain: &CurveChain) -> Result<Vec<CurveChain>> {
    let mut steps = vec![chain.clone()];
    loop {
        let cur = steps.last().unwrap();
        if cur.0 == [-1] {
            return Err(Error::ContractsToPoint);
        }
        if cur.len() < 2 || !cur.0.contains(&-1) {
            return Ok(steps);
        }
        let next = blow_down_once(cur)?;
        steps.push(next);
    }
}

/// `1 - alpha` as a reduced fraction.
pub fn complement(alpha: &Fraction) -> Fraction {
    Ratio::from_integer(1) - alpha
}
