//! Hirzebruch-Jung (negative-regular) continued fractions.
//!
//! For coprime `0 < p < q` the expansion
//!
//! ```text
//! q/p = e_1 - 1/(e_2 - 1/(... - 1/e_k)),   e_j >= 2
//! ```
//!
//! encodes the minimal resolution of the cyclic quotient singularity of type
//! `(p, q)`. The approximants `(m_j, n_j)` for `j = 0..=k+2` are
//!
//! ```text
//! (m_0, n_0) = (0, -1), (m_1, n_1) = (1, 0),
//! (m_{j+1}, n_{j+1}) = e_j (m_j, n_j) - (m_{j-1}, n_{j-1})   for j = 1..=k,
//! (m_{k+2}, n_{k+2}) = (0, 1),
//! ```
//!
//! so that `n_{j+1}/m_{j+1}` is the j-th convergent of `p/q` and
//! `(m_{k+1}, n_{k+1}) = (q, p)`.

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{PrimInt, Signed};
use serde::Serialize;

use crate::error::{Error, Result};

/// Integer types the expansion can be carried out in.
pub trait HjInt: PrimInt + Signed + Integer + std::fmt::Debug + std::fmt::Display {}

impl<T> HjInt for T where T: PrimInt + Signed + Integer + std::fmt::Debug + std::fmt::Display {}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HjExpansion<I> {
    p: I,
    q: I,
    digits: Vec<I>,
    approximants: Vec<(I, I)>,
}

impl<I: HjInt> HjExpansion<I> {
    pub fn p(&self) -> I {
        self.p
    }

    pub fn q(&self) -> I {
        self.q
    }

    /// The digits `e_1..e_k`.
    pub fn digits(&self) -> &[I] {
        &self.digits
    }

    /// Number of digits `k` (the length of the resolution string).
    pub fn len(&self) -> usize {
        self.digits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.digits.is_empty()
    }

    /// `(m_j, n_j)` for `j = 0..=k+2`.
    pub fn approximants(&self) -> &[(I, I)] {
        &self.approximants
    }

    pub fn m(&self, j: usize) -> I {
        self.approximants[j].0
    }

    pub fn n(&self, j: usize) -> I {
        self.approximants[j].1
    }

    /// `m_j n_{j+1} - m_{j+1} n_j` for `j = 0..=k+1`.
    ///
    /// Equal to 1 for `j <= k`. The last entry pairs `(q, p)` with `(0, 1)`
    /// and equals `q`, the order of the group at infinity.
    pub fn determinants(&self) -> Vec<I> {
        self.approximants
            .windows(2)
            .map(|w| w[0].0 * w[1].1 - w[1].0 * w[0].1)
            .collect()
    }

    /// True iff every digit is 2, i.e. `p = q - 1`.
    pub fn is_crepant(&self) -> bool {
        let two = I::one() + I::one();
        self.digits.iter().all(|&e| e == two)
    }
}

fn check_pair<I: HjInt>(p: I, q: I) -> Result<()> {
    if p <= I::zero() || p >= q || p.gcd(&q) != I::one() {
        return Err(Error::BadFraction {
            p: p.to_i64().unwrap_or(i64::MAX),
            q: q.to_i64().unwrap_or(i64::MAX),
        });
    }
    Ok(())
}

/// Expands `q/p` by iterated ceiling division.
pub fn hj_expand<I: HjInt>(p: I, q: I) -> Result<HjExpansion<I>> {
    check_pair(p, q)?;
    let mut digits = Vec::new();
    let (mut num, mut den) = (q, p);
    loop {
        let e = num.div_ceil(&den);
        digits.push(e);
        let rem = e * den - num;
        if rem.is_zero() {
            break;
        }
        // num/den = e - 1/(den/rem)
        num = den;
        den = rem;
    }
    let approximants = approximant_pairs(&digits);
    Ok(HjExpansion {
        p,
        q,
        digits,
        approximants,
    })
}

/// Generates `(m_j, n_j)` for `j = 0..=k+2` from digits `e_1..e_k` by the
/// three-term recurrence.
pub fn approximant_pairs<I: HjInt>(digits: &[I]) -> Vec<(I, I)> {
    let mut out = Vec::with_capacity(digits.len() + 3);
    out.push((I::zero(), -I::one()));
    out.push((I::one(), I::zero()));
    for (j, &e) in digits.iter().enumerate() {
        let (m1, n1) = out[j + 1];
        let (m0, n0) = out[j];
        out.push((e * m1 - m0, e * n1 - n0));
    }
    out.push((I::zero(), I::one()));
    out
}

/// Evaluates `e_1 - 1/(e_2 - 1/(... - 1/e_k))` exactly, innermost first.
pub fn eval_negative_cfrac<I: HjInt>(digits: &[I]) -> Result<Ratio<I>> {
    let two = I::one() + I::one();
    if digits.is_empty() || digits.iter().any(|&e| e < two) {
        return Err(Error::BadDigits);
    }
    let mut acc = Ratio::from_integer(*digits.last().unwrap());
    for &e in digits.iter().rev().skip(1) {
        acc = Ratio::from_integer(e) - acc.recip();
    }
    Ok(acc)
}
