//! Log-term coefficients and mass of the toric ALE scalar-flat Kähler
//! metrics on Hirzebruch-Jung resolutions.
//!
//! A metric of this family is determined by levels
//! `inf >= y_0 > y_1 > ... > y_{k+1} = 0` and integer labels
//! `(a_j, b_j) = (m_j - m_{j+1}, n_j - n_{j+1})` coming from an approximant
//! chain. Its Kähler potential at infinity has a `log r` term with coefficient
//! proportional to `mu = a + b`, where
//!
//! ```text
//! a (q, p) - b (0, 1) = sum_{j=0..k} y_j^{-1} (a_j, b_j).
//! ```
//!
//! Three independent routes to `mu` live here: directly from the labels
//! ([`log_coeffs_from_pairs`]), from the Abel-summed form over the chain
//! ([`log_coeffs_from_levels`]), and from the positive weights
//! `u_j = m_j (c_j - c_{j-1})` ([`mu_from_u`]).

use std::cmp::Ordering;
use std::fmt;

use serde::Serialize;

use crate::cfrac::hj_expand;
use crate::error::{Error, Result};
use crate::scalar::Exact;

/// A level `y_j`: either a finite exact value or `+inf` (only for `y_0`).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum Level<Q> {
    Infinite,
    Finite(Q),
}

impl<Q: Exact> Level<Q> {
    /// `1 / y`, with `1 / inf = 0`. Zero level has no reciprocal and is
    /// mapped to 0 as well (the convention `c_{k+1} = 0`).
    pub fn reciprocal(&self) -> Q {
        match self {
            Level::Infinite => Q::zero(),
            Level::Finite(y) if y.is_zero() => Q::zero(),
            Level::Finite(y) => Q::one() / y.clone(),
        }
    }

    pub fn finite(&self) -> Option<&Q> {
        match self {
            Level::Infinite => None,
            Level::Finite(y) => Some(y),
        }
    }

    fn gt(&self, other: &Self) -> bool {
        match (self, other) {
            (Level::Infinite, Level::Infinite) => false,
            (Level::Infinite, _) => true,
            (_, Level::Infinite) => false,
            (Level::Finite(a), Level::Finite(b)) => a.partial_cmp(b) == Some(Ordering::Greater),
        }
    }
}

impl<Q: fmt::Display> fmt::Display for Level<Q> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Level::Infinite => f.write_str("inf"),
            Level::Finite(y) => write!(f, "{y}"),
        }
    }
}

/// Sequence `(m_j, n_j)`, `j = 0..=k+2`, with `(m_0, n_0) = (0, -1)`,
/// `(m_1, n_1) = (1, 0)`, `(m_{k+2}, n_{k+2}) = (0, 1)` and `m_j > 0` in
/// between. Chains from continued fractions are monotone; chains produced by
/// [`ApproximantChain::insert`] need not be.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ApproximantChain(Vec<(i64, i64)>);

impl ApproximantChain {
    pub fn new(pairs: Vec<(i64, i64)>) -> Result<Self> {
        if pairs.len() < 3 {
            return Err(Error::BadChain("need at least three pairs".into()));
        }
        if pairs[0] != (0, -1) || pairs[1] != (1, 0) || *pairs.last().unwrap() != (0, 1) {
            return Err(Error::BadChain(
                "chain must start (0,-1),(1,0) and end (0,1)".into(),
            ));
        }
        if pairs[1..pairs.len() - 1].iter().any(|&(m, _)| m <= 0) {
            return Err(Error::BadChain(
                "m_j must be positive for 1 <= j <= k+1".into(),
            ));
        }
        Ok(ApproximantChain(pairs))
    }

    /// Chain of the minimal resolution of type `(p, q)`.
    pub fn from_fraction(p: i64, q: i64) -> Result<Self> {
        let hj = hj_expand(p, q)?;
        Ok(ApproximantChain(hj.approximants().to_vec()))
    }

    /// `(0,-1), (1,0), (q,1), (0,1)`; `q = 1` is the Burns metric, `q = 2`
    /// Eguchi-Hanson.
    pub fn lebrun(q: i64) -> Result<Self> {
        Self::new(vec![(0, -1), (1, 0), (q, 1), (0, 1)])
    }

    /// The flat chain `(0,-1), (1,0), (0,1)`.
    pub fn flat() -> Self {
        ApproximantChain(vec![(0, -1), (1, 0), (0, 1)])
    }

    pub fn pairs(&self) -> &[(i64, i64)] {
        &self.0
    }

    /// Number of interior labels `k`.
    pub fn k(&self) -> usize {
        self.0.len() - 3
    }

    pub fn m(&self, j: usize) -> i64 {
        self.0[j].0
    }

    pub fn n(&self, j: usize) -> i64 {
        self.0[j].1
    }

    /// `q = m_{k+1}`.
    pub fn q(&self) -> i64 {
        self.m(self.k() + 1)
    }

    /// `p = n_{k+1}`.
    pub fn p(&self) -> i64 {
        self.n(self.k() + 1)
    }

    /// `(a_j, b_j) = (m_j - m_{j+1}, n_j - n_{j+1})` for `j = 0..=k+1`.
    pub fn label_differences(&self) -> Vec<(i64, i64)> {
        self.0
            .windows(2)
            .map(|w| (w[0].0 - w[1].0, w[0].1 - w[1].1))
            .collect()
    }

    /// Blow-up at the common endpoint of the intervals labelled by
    /// `(m_j, n_j)` and `(m_{j+1}, n_{j+1})`: inserts their sum between them.
    pub fn insert(&self, j: usize) -> Result<Self> {
        if j + 1 >= self.0.len() {
            return Err(Error::BadPosition(j));
        }
        let (a, b) = (self.0[j], self.0[j + 1]);
        let mut out = self.0.clone();
        out.insert(j + 1, (a.0 + b.0, a.1 + b.1));
        Self::new(out)
    }

    /// `p/q - n_j/m_j + 1/q - 1/m_j`, the weight of `u_j` in `mu`.
    pub fn mu_coefficient<Q: Exact>(&self, j: usize) -> Result<Q> {
        let k = self.k();
        if j == 0 || j > k {
            return Err(Error::IndexOutOfRange { index: j, max: k });
        }
        let (q, p) = (self.q(), self.p());
        let (m, n) = self.0[j];
        Ok(Q::from_ints(p + 1, q) - Q::from_ints(n + 1, m))
    }

    pub fn mu_coefficients<Q: Exact>(&self) -> Vec<Q> {
        (1..=self.k())
            .map(|j| self.mu_coefficient(j).expect("index in range"))
            .collect()
    }
}

impl fmt::Display for ApproximantChain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|(m, n)| format!("({m},{n})")).collect();
        f.write_str(&parts.join(" "))
    }
}

/// Input data of the monopole ansatz: levels, labels and (optionally) the
/// approximant chain the labels were derived from.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MonopoleData<Q> {
    levels: Vec<Level<Q>>,
    pairs: Vec<(i64, i64)>,
    chain: Option<ApproximantChain>,
}

fn check_levels<Q: Exact>(levels: &[Level<Q>]) -> Result<()> {
    if levels.len() < 2 {
        return Err(Error::BadLevels("need at least two levels".into()));
    }
    match levels.last().unwrap() {
        Level::Finite(y) if y.is_zero() => {}
        _ => return Err(Error::BadLevels("last level must be exactly 0".into())),
    }
    if levels[1..].iter().any(|l| matches!(l, Level::Infinite)) {
        return Err(Error::BadLevels("only y_0 may be infinite".into()));
    }
    if !levels.windows(2).all(|w| w[0].gt(&w[1])) {
        return Err(Error::BadLevels(
            "levels must be strictly decreasing".into(),
        ));
    }
    Ok(())
}

impl<Q: Exact> MonopoleData<Q> {
    /// Builds data from a chain; needs `k + 2` levels.
    pub fn from_chain(chain: ApproximantChain, levels: Vec<Level<Q>>) -> Result<Self> {
        if levels.len() != chain.k() + 2 {
            return Err(Error::LengthMismatch {
                expected: chain.k() + 2,
                got: levels.len(),
            });
        }
        check_levels(&levels)?;
        Ok(MonopoleData {
            pairs: chain.label_differences(),
            levels,
            chain: Some(chain),
        })
    }

    /// Builds data from raw labels, without a chain.
    pub fn from_pairs(levels: Vec<Level<Q>>, pairs: Vec<(i64, i64)>) -> Result<Self> {
        if levels.len() != pairs.len() {
            return Err(Error::LengthMismatch {
                expected: levels.len(),
                got: pairs.len(),
            });
        }
        check_levels(&levels)?;
        Ok(MonopoleData {
            levels,
            pairs,
            chain: None,
        })
    }

    /// Flat space: `k = 0`, `y_0 = inf`.
    pub fn flat() -> Self {
        Self::from_chain(
            ApproximantChain::flat(),
            vec![Level::Infinite, Level::Finite(Q::zero())],
        )
        .expect("flat data is valid")
    }

    pub fn levels(&self) -> &[Level<Q>] {
        &self.levels
    }

    pub fn pairs(&self) -> &[(i64, i64)] {
        &self.pairs
    }

    pub fn chain(&self) -> Option<&ApproximantChain> {
        self.chain.as_ref()
    }

    /// `k`, the number of interior levels.
    pub fn k(&self) -> usize {
        self.levels.len() - 2
    }

    /// `c_j = 1 / y_j` for `j = 0..=k` (`c_0 = 0` when `y_0 = inf`).
    pub fn reciprocals(&self) -> Vec<Q> {
        self.levels[..=self.k()]
            .iter()
            .map(Level::reciprocal)
            .collect()
    }
}

/// Levels `y_j = spacing * (k + 1 - j)`, all finite.
pub fn evenly_spaced_levels<Q: Exact>(k: usize, spacing: &Q) -> Vec<Level<Q>> {
    (0..=k + 1)
        .map(|j| Level::Finite(spacing.clone() * Q::from_int((k + 1 - j) as i64)))
        .collect()
}

/// Monopole data for the resolution of type `(p, q)`.
pub fn monopole_from_fraction<Q: Exact>(
    p: i64,
    q: i64,
    levels: Vec<Level<Q>>,
) -> Result<MonopoleData<Q>> {
    MonopoleData::from_chain(ApproximantChain::from_fraction(p, q)?, levels)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LogTerm<Q> {
    pub coefficient: Q,
    pub u: Q,
}

/// Coefficients of the ALE expansion. `a` and `b` individually depend on
/// `c_0`, which the `u`-parametrisation does not see; they are `None` on
/// that route.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LogCoefficients<Q> {
    pub a: Option<Q>,
    pub b: Option<Q>,
    pub mu: Q,
    pub per_term: Vec<LogTerm<Q>>,
}

/// `a, b` straight from `a (q,p) - b (0,1) = sum_j c_j (a_j, b_j)`, using
/// the leading label `(a_{k+1}, b_{k+1}) = (q, p - 1)`.
pub fn log_coeffs_from_pairs<Q: Exact>(data: &MonopoleData<Q>) -> Result<(Q, Q)> {
    let k = data.k();
    let (q, p_minus_one) = data.pairs[k + 1];
    if q <= 0 {
        return Err(Error::BadChain(format!(
            "leading label q = {q} is not positive"
        )));
    }
    let p = p_minus_one + 1;
    let (mut x, mut y) = (Q::zero(), Q::zero());
    for (c, &(aj, bj)) in data.reciprocals().into_iter().zip(&data.pairs) {
        x = x + c.clone() * Q::from_int(aj);
        y = y + c * Q::from_int(bj);
    }
    let a = x / Q::from_int(q);
    let b = a.clone() * Q::from_int(p) - y;
    Ok((a, b))
}

/// Abel-summed route: `qa = sum (c_j - c_{j-1}) m_j`,
/// `qb = sum (c_j - c_{j-1}) (p m_j - q n_j)` over `j = 0..=k+1` with
/// `c_{-1} = c_{k+1} = 0`.
pub fn log_coeffs_from_levels<Q: Exact>(data: &MonopoleData<Q>) -> Result<LogCoefficients<Q>> {
    let chain = data.chain.as_ref().ok_or(Error::MissingChain)?;
    let k = chain.k();
    let (q, p) = (chain.q(), chain.p());
    let mut c = data.reciprocals();
    c.push(Q::zero());
    let (mut qa, mut qb) = (Q::zero(), Q::zero());
    let mut per_term = Vec::with_capacity(k);
    let mut prev = Q::zero();
    for (j, cj) in c.iter().enumerate() {
        let diff = cj.clone() - prev;
        let (m, n) = chain.pairs()[j];
        qa = qa + diff.clone() * Q::from_int(m);
        qb = qb + diff.clone() * Q::from_int(p * m - q * n);
        if (1..=k).contains(&j) {
            per_term.push(LogTerm {
                coefficient: chain.mu_coefficient(j)?,
                u: diff * Q::from_int(m),
            });
        }
        prev = cj.clone();
    }
    let a = qa / Q::from_int(q);
    let b = qb / Q::from_int(q);
    Ok(LogCoefficients {
        mu: a.clone() + b.clone(),
        a: Some(a),
        b: Some(b),
        per_term,
    })
}

/// `mu = sum_j (p/q - n_j/m_j + 1/q - 1/m_j) u_j` over any chain.
pub fn mu_from_chain_u<Q: Exact>(chain: &ApproximantChain, u: &[Q]) -> Result<LogCoefficients<Q>> {
    let k = chain.k();
    if u.len() != k {
        return Err(Error::LengthMismatch {
            expected: k,
            got: u.len(),
        });
    }
    if let Some((i, v)) = u.iter().enumerate().find(|(_, v)| !v.is_positive()) {
        return Err(Error::NonPositiveU {
            index: i + 1,
            value: v.to_string(),
        });
    }
    let per_term: Vec<LogTerm<Q>> = chain
        .mu_coefficients()
        .into_iter()
        .zip(u)
        .map(|(coefficient, u)| LogTerm {
            coefficient,
            u: u.clone(),
        })
        .collect();
    let mu = per_term.iter().fold(Q::zero(), |acc, t| {
        acc + t.coefficient.clone() * t.u.clone()
    });
    Ok(LogCoefficients {
        a: None,
        b: None,
        mu,
        per_term,
    })
}

/// `mu` for the resolution of type `(p, q)` from positive weights `u_1..u_k`.
pub fn mu_from_u<Q: Exact>(p: i64, q: i64, u: &[Q]) -> Result<LogCoefficients<Q>> {
    mu_from_chain_u(&ApproximantChain::from_fraction(p, q)?, u)
}

/// The `j`-th coefficient of `mu` for the resolution of type `(p, q)`.
pub fn mu_coefficient<Q: Exact>(p: i64, q: i64, j: usize) -> Result<Q> {
    ApproximantChain::from_fraction(p, q)?.mu_coefficient(j)
}

/// Blow-up of the data at level `y_position`, shared by the intervals
/// labelled `(m_j, n_j)` and `(m_{j+1}, n_{j+1})` with `j = position`.
///
/// The old level becomes the upper end of the new interval; its lower end is
/// `new_level`, or the midpoint towards `y_{j+1}` when not given.
pub fn blowup_insert<Q: Exact>(
    data: &MonopoleData<Q>,
    position: usize,
    new_level: Option<Q>,
) -> Result<MonopoleData<Q>> {
    let chain = data.chain.as_ref().ok_or(Error::MissingChain)?;
    let k = data.k();
    // inserting at 0 would move the (1, 0) label off index 1
    if position == 0 || position > k {
        return Err(Error::BadPosition(position));
    }
    let upper = data.levels[position]
        .finite()
        .cloned()
        .ok_or(Error::BadPosition(position))?;
    let lower = data.levels[position + 1]
        .finite()
        .cloned()
        .expect("only y_0 can be infinite");
    let y = match new_level {
        Some(y) => {
            if !(y < upper && y > lower) {
                return Err(Error::BadLevels(format!(
                    "inserted level {y} must lie strictly between {lower} and {upper}"
                )));
            }
            y
        }
        None => (upper + lower) / Q::from_int(2),
    };
    let mut levels = data.levels.clone();
    levels.insert(position + 1, Level::Finite(y));
    MonopoleData::from_chain(chain.insert(position)?, levels)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Sign {
    Negative,
    Zero,
    Positive,
}

impl Sign {
    pub fn of<Q: Exact>(x: &Q) -> Self {
        if x.is_negative() {
            Sign::Negative
        } else if x.is_zero() {
            Sign::Zero
        } else {
            Sign::Positive
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Negative => "negative",
            Sign::Zero => "zero",
            Sign::Positive => "positive",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MassVerdict<Q> {
    pub mu: Q,
    pub sign: Sign,
    pub crepant: bool,
    pub coefficients: LogCoefficients<Q>,
}

pub fn mass_verdict_for_chain<Q: Exact>(
    chain: &ApproximantChain,
    u: &[Q],
) -> Result<MassVerdict<Q>> {
    let coefficients = mu_from_chain_u(chain, u)?;
    Ok(MassVerdict {
        sign: Sign::of(&coefficients.mu),
        mu: coefficients.mu.clone(),
        crepant: chain.p() == chain.q() - 1,
        coefficients,
    })
}

/// Sign of the mass of the ALE metric on the resolution of type `(p, q)`.
pub fn mass_verdict<Q: Exact>(p: i64, q: i64, u: &[Q]) -> Result<MassVerdict<Q>> {
    mass_verdict_for_chain(&ApproximantChain::from_fraction(p, q)?, u)
}
