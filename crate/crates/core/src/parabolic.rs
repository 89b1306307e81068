//! Parabolic ruled surfaces and their slope stability.
//!
//! A parabolic structure on a ruled surface `M -> Sigma` is a set of distinct
//! base points `P_j`, a marked point `Q_j` in each fiber over `P_j` and a
//! rational weight `alpha_j` in `(0, 1)`. A holomorphic section `S` has slope
//!
//! ```text
//! mu(S) = [S]^2 + sum_{Q_j not in S} alpha_j - sum_{Q_j in S} alpha_j.
//! ```
//!
//! Sections are not enumerated in general. For the trivial bundle over the
//! sphere (`P^1 x P^1`) a built-in candidate family is generated; otherwise the
//! sections declared on the surface are the candidate family and verdicts are
//! relative to it.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use num_rational::Ratio;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::Fraction;

/// A point `[z0 : z1]` of the real projective line, stored normalised as
/// `[w : 1]` or `[1 : 0]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ProjPoint {
    z0: Fraction,
    z1: Fraction,
}

impl ProjPoint {
    pub fn new(z0: Fraction, z1: Fraction) -> Result<Self> {
        if z0.is_zero() && z1.is_zero() {
            return Err(Error::Parse("[0:0] is not a projective point".into()));
        }
        Ok(if z1.is_zero() {
            ProjPoint {
                z0: Fraction::one(),
                z1: Fraction::zero(),
            }
        } else {
            ProjPoint {
                z0: z0 / z1,
                z1: Fraction::one(),
            }
        })
    }

    pub fn infinity() -> Self {
        ProjPoint {
            z0: Fraction::one(),
            z1: Fraction::zero(),
        }
    }

    pub fn zero() -> Self {
        ProjPoint {
            z0: Fraction::zero(),
            z1: Fraction::one(),
        }
    }

    pub fn coords(&self) -> (Fraction, Fraction) {
        (self.z0, self.z1)
    }

    /// `(|z0|^2 - |z1|^2) / (|z0|^2 + |z1|^2)`: `+1` at `[1:0]`, `-1` at
    /// `[0:1]`, average zero on the sphere.
    pub fn height(&self) -> Fraction {
        let (a, b) = (self.z0 * self.z0, self.z1 * self.z1);
        (a - b) / (a + b)
    }

    /// The Möbius image `[z0 b2 - z1 a2 : z0 b1 - z1 a1]`, sending `north` to
    /// `[1:0]` and `south` to `[0:1]`.
    pub fn normalised(&self, north: &ProjPoint, south: &ProjPoint) -> Result<ProjPoint> {
        let (a1, b1) = north.coords();
        let (a2, b2) = south.coords();
        ProjPoint::new(self.z0 * b2 - self.z1 * a2, self.z0 * b1 - self.z1 * a1)
    }

    /// Image under the inversion `[z0 : z1] -> [z1 : z0]`.
    pub fn inverted(&self) -> ProjPoint {
        ProjPoint::new(self.z1, self.z0).expect("nonzero")
    }
}

impl fmt::Display for ProjPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.z0, self.z1)
    }
}

impl Serialize for ProjPoint {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// Parses `"p/q"`, integers, and terminating decimals such as `"-0.25"`.
pub fn parse_fraction(s: &str) -> Result<Fraction> {
    let s = s.trim();
    let bad = || Error::Parse(format!("malformed number {s:?}"));
    if let Some((n, d)) = s.split_once('/') {
        let n: i64 = n.trim().parse().map_err(|_| bad())?;
        let d: i64 = d.trim().parse().map_err(|_| bad())?;
        if d == 0 {
            return Err(bad());
        }
        return Ok(Ratio::new(n, d));
    }
    if let Some((int, frac)) = s.split_once('.') {
        let neg = int.trim_start().starts_with('-');
        let int_val: i64 = match int.trim() {
            "" | "-" | "+" => 0,
            t => t.parse().map_err(|_| bad())?,
        };
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) || frac.len() > 15 {
            return Err(bad());
        }
        let den = 10i64.pow(frac.len() as u32);
        let num: i64 = frac.parse().map_err(|_| bad())?;
        let magnitude = Ratio::from_integer(int_val.abs()) + Ratio::new(num, den);
        return Ok(if neg { -magnitude } else { magnitude });
    }
    s.parse::<i64>().map(Ratio::from_integer).map_err(|_| bad())
}

impl FromStr for ProjPoint {
    type Err = Error;

    /// `"a:b"` or `"[a:b]"`, components as in [`parse_fraction`]; a bare
    /// number `w` means `[w:1]`, and `"inf"` means `[1:0]`.
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim().trim_start_matches('[').trim_end_matches(']');
        if t.eq_ignore_ascii_case("inf") || t == "∞" {
            return Ok(ProjPoint::infinity());
        }
        match t.split_once(':') {
            Some((a, b)) => ProjPoint::new(parse_fraction(a)?, parse_fraction(b)?),
            None => ProjPoint::new(parse_fraction(t)?, Fraction::one()),
        }
    }
}

/// Where the marked point `Q_j` sits.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Incidence {
    /// On the declared section with this id.
    Section(String),
    /// At this coordinate of the `P^1` fiber (trivial bundle over the sphere).
    Fiber(ProjPoint),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MarkedPoint {
    pub label: String,
    pub base: Option<ProjPoint>,
    pub weight: Fraction,
    pub incidence: Incidence,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum BundleModel {
    /// `P^1 x P^1 -> P^1`, first projection.
    TrivialP1,
    /// Anything else; sections must be declared.
    Sections,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SectionData {
    pub id: String,
    pub self_intersection: i64,
    /// Indices of the marked points lying on the section.
    pub contains: BTreeSet<usize>,
    pub disjoint_from: BTreeSet<String>,
}

impl SectionData {
    pub fn new(id: impl Into<String>, self_intersection: i64) -> Self {
        SectionData {
            id: id.into(),
            self_intersection,
            contains: BTreeSet::new(),
            disjoint_from: BTreeSet::new(),
        }
    }

    pub fn containing(mut self, idx: impl IntoIterator<Item = usize>) -> Self {
        self.contains.extend(idx);
        self
    }

    pub fn disjoint_from(mut self, ids: impl IntoIterator<Item = impl Into<String>>) -> Self {
        self.disjoint_from.extend(ids.into_iter().map(Into::into));
        self
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ParabolicSurface {
    genus: u32,
    model: BundleModel,
    points: Vec<MarkedPoint>,
    sections: Vec<SectionData>,
}

impl ParabolicSurface {
    /// Validates the data and completes each declared section's `contains`
    /// set from the points' incidence.
    pub fn new(
        genus: u32,
        model: BundleModel,
        points: Vec<MarkedPoint>,
        mut sections: Vec<SectionData>,
    ) -> Result<Self> {
        if model == BundleModel::TrivialP1 && genus != 0 {
            return Err(Error::BadSurface("the trivial-p1 model has genus 0".into()));
        }
        for pt in &points {
            if !(pt.weight > Fraction::zero() && pt.weight < Fraction::one()) {
                return Err(Error::WeightOutOfRange(pt.weight.to_string()));
            }
        }
        for (i, a) in points.iter().enumerate() {
            for b in &points[i + 1..] {
                let same = match (&a.base, &b.base) {
                    (Some(x), Some(y)) => x == y,
                    _ => a.label == b.label,
                };
                if same {
                    return Err(Error::BadSurface(format!(
                        "base points {:?} and {:?} coincide",
                        a.label, b.label
                    )));
                }
            }
        }
        let mut ids = BTreeSet::new();
        for s in &sections {
            if !ids.insert(s.id.clone()) {
                return Err(Error::BadSurface(format!(
                    "duplicate section id {:?}",
                    s.id
                )));
            }
            if let Some(&j) = s.contains.iter().find(|&&j| j >= points.len()) {
                return Err(Error::BadSurface(format!(
                    "section {:?} contains unknown point index {j}",
                    s.id
                )));
            }
        }
        for (j, pt) in points.iter().enumerate() {
            match (&pt.incidence, model) {
                (Incidence::Section(id), _) => {
                    let sec = sections
                        .iter_mut()
                        .find(|s| &s.id == id)
                        .ok_or_else(|| Error::UnknownSection(id.clone()))?;
                    sec.contains.insert(j);
                }
                (Incidence::Fiber(_), BundleModel::TrivialP1) => {}
                (Incidence::Fiber(_), BundleModel::Sections) => {
                    return Err(Error::BadSurface(format!(
                        "point {:?} gives a fiber coordinate but the model is 'sections'",
                        pt.label
                    )))
                }
            }
        }
        // disjointness is symmetric
        let pairs: Vec<(String, String)> = sections
            .iter()
            .flat_map(|s| {
                s.disjoint_from
                    .iter()
                    .map(move |o| (s.id.clone(), o.clone()))
            })
            .collect();
        for (a, b) in pairs {
            if let Some(sec) = sections.iter_mut().find(|s| s.id == b) {
                sec.disjoint_from.insert(a);
            }
        }
        Ok(ParabolicSurface {
            genus,
            model,
            points,
            sections,
        })
    }

    pub fn genus(&self) -> u32 {
        self.genus
    }

    pub fn model(&self) -> BundleModel {
        self.model
    }

    pub fn points(&self) -> &[MarkedPoint] {
        &self.points
    }

    pub fn sections(&self) -> &[SectionData] {
        &self.sections
    }

    pub fn weights(&self) -> Vec<Fraction> {
        self.points.iter().map(|p| p.weight).collect()
    }

    pub fn total_weight(&self) -> Fraction {
        self.points.iter().map(|p| p.weight).sum()
    }

    /// The sphere carrying exactly two marked points.
    pub fn is_two_point_sphere(&self) -> bool {
        self.genus == 0 && self.points.len() == 2
    }

    /// Same surface with the marked points reordered: `perm[i]` is the old
    /// index of the new `i`-th point.
    pub fn permuted(&self, perm: &[usize]) -> Result<Self> {
        let inverse: BTreeMap<usize, usize> = perm
            .iter()
            .enumerate()
            .map(|(new, &old)| (old, new))
            .collect();
        let points = perm.iter().map(|&old| self.points[old].clone()).collect();
        let sections = self
            .sections
            .iter()
            .map(|s| SectionData {
                contains: s.contains.iter().map(|j| inverse[j]).collect(),
                ..s.clone()
            })
            .collect();
        ParabolicSurface::new(self.genus, self.model, points, sections)
    }

    /// Slope of the declared section `id`.
    pub fn slope(&self, id: &str) -> Result<Fraction> {
        let sec = self
            .sections
            .iter()
            .find(|s| s.id == id)
            .ok_or_else(|| Error::UnknownSection(id.to_string()))?;
        Ok(self.slope_of(sec))
    }

    pub fn slope_of(&self, section: &SectionData) -> Fraction {
        self.points.iter().enumerate().fold(
            Ratio::from_integer(section.self_intersection),
            |acc, (j, pt)| {
                if section.contains.contains(&j) {
                    acc - pt.weight
                } else {
                    acc + pt.weight
                }
            },
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CandidateKind {
    /// Constant section of `P^1 x P^1` at a fiber coordinate (`None`: a
    /// generic coordinate avoiding every marked point).
    Constant {
        fiber: Option<ProjPoint>,
    },
    /// A degree-`d` graph assumed to pass through the given marked points.
    VirtualGraph {
        degree: i64,
    },
    Declared,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Candidate {
    pub section: SectionData,
    pub kind: CandidateKind,
    pub slope: Fraction,
}

fn disjoint(a: &Candidate, b: &Candidate) -> bool {
    // distinct constant sections never meet
    if matches!(a.kind, CandidateKind::Constant { .. })
        && matches!(b.kind, CandidateKind::Constant { .. })
    {
        return a.section.id != b.section.id;
    }
    a.section.disjoint_from.contains(&b.section.id)
        || b.section.disjoint_from.contains(&a.section.id)
}

/// Candidate family for `P^1 x P^1`: constant sections grouped by fiber
/// coordinate, two generic constant sections, and for each degree
/// `d = 1..n-1` a graph through the `min(2d + 1, n)` heaviest points.
pub fn trivial_bundle_candidates(surface: &ParabolicSurface) -> Vec<Candidate> {
    let mut groups: BTreeMap<ProjPoint, BTreeSet<usize>> = BTreeMap::new();
    for (j, pt) in surface.points.iter().enumerate() {
        if let Incidence::Fiber(w) = pt.incidence {
            groups.entry(w).or_default().insert(j);
        }
    }
    // [1:0] then [0:1] first, so the usual pair lands as (S1, S2)
    let rank = |w: &ProjPoint| {
        if *w == ProjPoint::infinity() {
            0
        } else if *w == ProjPoint::zero() {
            1
        } else {
            2
        }
    };
    let mut fibers: Vec<ProjPoint> = groups.keys().copied().collect();
    fibers.sort_by_key(|w| (rank(w), *w));

    let mut out = Vec::new();
    for w in fibers {
        let section = SectionData {
            id: format!("const[{w}]"),
            self_intersection: 0,
            contains: groups[&w].clone(),
            disjoint_from: BTreeSet::new(),
        };
        out.push(Candidate {
            slope: surface.slope_of(&section),
            section,
            kind: CandidateKind::Constant { fiber: Some(w) },
        });
    }
    for id in ["const[generic]", "const[generic']"] {
        let generic = SectionData::new(id, 0);
        out.push(Candidate {
            slope: surface.slope_of(&generic),
            section: generic,
            kind: CandidateKind::Constant { fiber: None },
        });
    }

    let n = surface.points.len();
    let mut by_weight: Vec<usize> = (0..n).collect();
    by_weight.sort_by(|&a, &b| {
        surface.points[b]
            .weight
            .cmp(&surface.points[a].weight)
            .then(a.cmp(&b))
    });
    for d in 1..n as i64 {
        let through = ((2 * d + 1) as usize).min(n);
        let section = SectionData {
            id: format!("graph[deg {d}]"),
            self_intersection: 2 * d,
            contains: by_weight[..through].iter().copied().collect(),
            disjoint_from: BTreeSet::new(),
        };
        out.push(Candidate {
            slope: surface.slope_of(&section),
            section,
            kind: CandidateKind::VirtualGraph { degree: d },
        });
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SectionRef {
    pub id: String,
    pub contains: BTreeSet<usize>,
    /// Fiber coordinate, for constant sections of the trivial bundle.
    pub fiber: Option<ProjPoint>,
}

impl SectionRef {
    fn of(c: &Candidate) -> Self {
        SectionRef {
            id: c.section.id.clone(),
            contains: c.section.contains.clone(),
            fiber: match c.kind {
                CandidateKind::Constant { fiber } => fiber,
                _ => None,
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum StabilityKind {
    Stable,
    StrictlyPolystable { s1: SectionRef, s2: SectionRef },
    SemistableNotPolystable,
    Unstable,
}

impl StabilityKind {
    pub fn name(&self) -> &'static str {
        match self {
            StabilityKind::Stable => "stable",
            StabilityKind::StrictlyPolystable { .. } => "strictly polystable",
            StabilityKind::SemistableNotPolystable => "semistable, not polystable",
            StabilityKind::Unstable => "unstable",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StabilityVerdict {
    pub kind: StabilityKind,
    pub min_slope: Fraction,
    /// Candidates achieving the minimum.
    pub witness: Vec<String>,
    pub candidates: Vec<Candidate>,
    /// Only declared sections were examined.
    pub relative_to_supplied_sections: bool,
    /// The minimum is attained only by a virtual graph, whose existence was
    /// assumed; the verdict is then conservative.
    pub estimated_minimum: bool,
}

impl StabilityVerdict {
    pub fn is_strictly_polystable(&self) -> bool {
        matches!(self.kind, StabilityKind::StrictlyPolystable { .. })
    }

    pub fn is_polystable(&self) -> bool {
        matches!(
            self.kind,
            StabilityKind::Stable | StabilityKind::StrictlyPolystable { .. }
        )
    }
}

/// Classifies by the minimum slope over the candidate family.
pub fn classify(
    surface: &ParabolicSurface,
    extra_sections: &[SectionData],
) -> Result<StabilityVerdict> {
    let builtin = surface.genus == 0 && surface.model == BundleModel::TrivialP1;
    let mut candidates = if builtin {
        trivial_bundle_candidates(surface)
    } else {
        Vec::new()
    };
    for s in surface.sections.iter().chain(extra_sections) {
        if let Some(&j) = s.contains.iter().find(|&&j| j >= surface.points.len()) {
            return Err(Error::BadSurface(format!(
                "section {:?} contains unknown point index {j}",
                s.id
            )));
        }
        candidates.push(Candidate {
            slope: surface.slope_of(s),
            section: s.clone(),
            kind: CandidateKind::Declared,
        });
    }
    let min_slope = candidates
        .iter()
        .map(|c| c.slope)
        .min()
        .ok_or(Error::NoCandidates)?;
    let minimizers: Vec<&Candidate> = candidates.iter().filter(|c| c.slope == min_slope).collect();
    let witness = minimizers.iter().map(|c| c.section.id.clone()).collect();
    let estimated_minimum = minimizers
        .iter()
        .all(|c| matches!(c.kind, CandidateKind::VirtualGraph { .. }));

    let kind = if min_slope.is_negative() {
        StabilityKind::Unstable
    } else if min_slope.is_positive() {
        StabilityKind::Stable
    } else {
        let zero: Vec<&Candidate> = minimizers.clone();
        let pair = zero.iter().enumerate().find_map(|(i, a)| {
            zero[i + 1..]
                .iter()
                .find(|b| disjoint(a, b))
                .map(|b| (SectionRef::of(a), SectionRef::of(b)))
        });
        match pair {
            Some((s1, s2)) => StabilityKind::StrictlyPolystable { s1, s2 },
            None => StabilityKind::SemistableNotPolystable,
        }
    };
    Ok(StabilityVerdict {
        kind,
        min_slope,
        witness,
        candidates,
        relative_to_supplied_sections: !builtin,
        estimated_minimum,
    })
}

/// Sporadic structures: strictly polystable, base not the two-point sphere,
/// and weights `1/q_j` on one slope-zero section and `(q_j - 1)/q_j` on the
/// other.
pub fn is_sporadic(surface: &ParabolicSurface, verdict: &StabilityVerdict) -> bool {
    let StabilityKind::StrictlyPolystable { s1, s2 } = &verdict.kind else {
        return false;
    };
    if surface.is_two_point_sphere() {
        return false;
    }
    let unit = |j: &usize| *surface.points[*j].weight.numer() == 1;
    let co_unit = |j: &usize| {
        let w = surface.points[*j].weight;
        *w.numer() == *w.denom() - 1
    };
    let pattern = |a: &SectionRef, b: &SectionRef| {
        a.contains.iter().all(unit) && b.contains.iter().all(co_unit)
    };
    pattern(s1, s2) || pattern(s2, s1)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fr(p: i64, q: i64) -> Fraction {
        Ratio::new(p, q)
    }

    fn pp(s: &str) -> ProjPoint {
        s.parse().unwrap()
    }

    fn fiber_point(label: &str, base: &str, w: Fraction, fiber: &str) -> MarkedPoint {
        MarkedPoint {
            label: label.into(),
            base: Some(pp(base)),
            weight: w,
            incidence: Incidence::Fiber(pp(fiber)),
        }
    }

    fn toric() -> ParabolicSurface {
        ParabolicSurface::new(
            0,
            BundleModel::TrivialP1,
            vec![
                fiber_point("P1", "1:0", fr(1, 2), "1:0"),
                fiber_point("P2", "0:1", fr(1, 2), "0:1"),
            ],
            vec![],
        )
        .unwrap()
    }

    #[test]
    fn projective_points() {
        assert_eq!(pp("[2:4]"), pp("1/2"));
        assert_eq!(pp("3:0"), ProjPoint::infinity());
        assert_eq!(pp("inf"), ProjPoint::infinity());
        assert_eq!(pp("0.5:1"), pp("1:2"));
        assert!("0:0".parse::<ProjPoint>().is_err());
        assert_eq!(pp("1:0").height(), fr(1, 1));
        assert_eq!(pp("0:1").height(), fr(-1, 1));
        assert_eq!(pp("1:1").height(), fr(0, 1));
        assert_eq!(pp("-1:1").height(), fr(0, 1));
        assert_eq!(pp("1:1").inverted(), pp("1:1"));
        assert_eq!(pp("2:1").inverted(), pp("1:2"));
    }

    #[test]
    fn fraction_parsing() {
        assert_eq!(parse_fraction("3/6").unwrap(), fr(1, 2));
        assert_eq!(parse_fraction("-0.25").unwrap(), fr(-1, 4));
        assert_eq!(parse_fraction("-1.5").unwrap(), fr(-3, 2));
        assert_eq!(parse_fraction(" 7 ").unwrap(), fr(7, 1));
        assert!(parse_fraction("1/0").is_err());
        assert!(parse_fraction("abc").is_err());
        assert!(parse_fraction("1.").is_err());
    }

    #[test]
    fn toric_slopes() {
        let s = toric();
        let v = classify(&s, &[]).unwrap();
        let slope_of = |id: &str| {
            v.candidates
                .iter()
                .find(|c| c.section.id == id)
                .unwrap()
                .slope
        };
        assert_eq!(slope_of("const[1:0]"), fr(0, 1));
        assert_eq!(slope_of("const[0:1]"), fr(0, 1));
        assert_eq!(slope_of("const[generic]"), fr(1, 1));
        match &v.kind {
            StabilityKind::StrictlyPolystable { s1, s2 } => {
                assert_eq!(s1.fiber, Some(ProjPoint::infinity()));
                assert_eq!(s2.fiber, Some(ProjPoint::zero()));
            }
            other => panic!("unexpected {other:?}"),
        }
        assert!(!is_sporadic(&s, &v));
    }

    #[test]
    fn empty_structure_slope_is_self_intersection() {
        let s = ParabolicSurface::new(
            2,
            BundleModel::Sections,
            vec![],
            vec![SectionData::new("S", -3)],
        )
        .unwrap();
        assert_eq!(s.slope("S").unwrap(), fr(-3, 1));
        assert!(matches!(s.slope("T"), Err(Error::UnknownSection(_))));
        let v = classify(&s, &[]).unwrap();
        assert_eq!(v.kind, StabilityKind::Unstable);
        assert!(v.relative_to_supplied_sections);
    }

    #[test]
    fn no_candidates_is_an_error() {
        let s = ParabolicSurface::new(1, BundleModel::Sections, vec![], vec![]).unwrap();
        assert_eq!(classify(&s, &[]), Err(Error::NoCandidates));
    }

    #[test]
    fn stable_three_points() {
        // three distinct fiber coordinates, small weights: every constant
        // section through one point has slope > 0
        let s = ParabolicSurface::new(
            0,
            BundleModel::TrivialP1,
            vec![
                fiber_point("a", "0:1", fr(1, 3), "1:0"),
                fiber_point("b", "1:0", fr(1, 3), "0:1"),
                fiber_point("c", "1:1", fr(1, 4), "1:1"),
            ],
            vec![],
        )
        .unwrap();
        let v = classify(&s, &[]).unwrap();
        assert_eq!(v.kind, StabilityKind::Stable);
        assert_eq!(v.min_slope, fr(1, 4));
    }

    #[test]
    fn semistable_without_disjoint_pair() {
        // weight balance forces slope 0 only on one constant section
        let s = ParabolicSurface::new(
            0,
            BundleModel::TrivialP1,
            vec![
                fiber_point("a", "0:1", fr(1, 2), "1:0"),
                fiber_point("b", "1:0", fr(1, 4), "0:1"),
                fiber_point("c", "1:1", fr(1, 4), "2:1"),
            ],
            vec![],
        )
        .unwrap();
        let v = classify(&s, &[]).unwrap();
        assert_eq!(v.kind, StabilityKind::SemistableNotPolystable);
    }

    #[test]
    fn declared_sections_and_disjointness() {
        let pts = vec![
            MarkedPoint {
                label: "P1".into(),
                base: None,
                weight: fr(1, 3),
                incidence: Incidence::Section("S1".into()),
            },
            MarkedPoint {
                label: "P2".into(),
                base: None,
                weight: fr(2, 3),
                incidence: Incidence::Section("S2".into()),
            },
            MarkedPoint {
                label: "P3".into(),
                base: None,
                weight: fr(1, 3),
                incidence: Incidence::Section("S1".into()),
            },
        ];
        let s = ParabolicSurface::new(
            1,
            BundleModel::Sections,
            pts,
            vec![
                SectionData::new("S1", 0).disjoint_from(["S2"]),
                SectionData::new("S2", 0),
            ],
        )
        .unwrap();
        assert!(s.sections()[1].disjoint_from.contains("S1"));
        let v = classify(&s, &[]).unwrap();
        assert!(v.is_strictly_polystable());
        assert!(is_sporadic(&s, &v));
    }

    #[test]
    fn rejects_bad_surfaces() {
        let dup = ParabolicSurface::new(
            0,
            BundleModel::TrivialP1,
            vec![
                fiber_point("a", "0:1", fr(1, 2), "1:0"),
                fiber_point("b", "0:2", fr(1, 2), "0:1"),
            ],
            vec![],
        );
        assert!(dup.is_err());
        let unknown = ParabolicSurface::new(
            1,
            BundleModel::Sections,
            vec![MarkedPoint {
                label: "a".into(),
                base: None,
                weight: fr(1, 2),
                incidence: Incidence::Section("nope".into()),
            }],
            vec![],
        );
        assert!(matches!(unknown, Err(Error::UnknownSection(_))));
        assert!(ParabolicSurface::new(1, BundleModel::TrivialP1, vec![], vec![]).is_err());
    }

    #[test]
    fn normalisation_sends_sections_to_poles() {
        let n = pp("2:1");
        let s = pp("-1:1");
        assert_eq!(n.normalised(&n, &s).unwrap(), ProjPoint::infinity());
        assert_eq!(s.normalised(&n, &s).unwrap(), ProjPoint::zero());
        let y = pp("1:1");
        assert_eq!(
            y.normalised(&ProjPoint::infinity(), &ProjPoint::zero())
                .unwrap()
                .height(),
            y.height()
        );
    }
}
