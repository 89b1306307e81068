//! Orbifold base data and the gluing-feasibility pipeline.
//!
//! A parabolic ruled surface with rational weights is the resolution of an
//! orbifold `M_rho`, a flat `P^1` bundle over the orbifold curve that has a
//! point of order `q_j` at each parabolic point. Holomorphic vector fields of
//! `M_rho` are governed by the fixed points of the holonomy on `P^1`; when
//! there is exactly one non-constant kernel function `phi` (a height function
//! with `phi = +1` on `S1`, `-1` on `S2`), gluing needs a strictly positive
//! vector in the kernel of the row of `phi`-values at the orbifold points and
//! blow-up points.

use std::fmt;

use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::lp;
use crate::parabolic::{
    classify, is_sporadic, BundleModel, ParabolicSurface, ProjPoint, StabilityKind,
    StabilityVerdict,
};
use crate::resolution::{blowup_count, singular_strings};
use crate::scalar::Exact;
use crate::{Fraction, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OrbifoldSurface {
    genus: u32,
    orders: Vec<i64>,
}

impl OrbifoldSurface {
    pub fn new(genus: u32, orders: Vec<i64>) -> Result<Self> {
        if let Some(&q) = orders.iter().find(|&&q| q < 2) {
            return Err(Error::BadSurface(format!("orbifold order {q} is below 2")));
        }
        Ok(OrbifoldSurface { genus, orders })
    }

    pub fn genus(&self) -> u32 {
        self.genus
    }

    pub fn orders(&self) -> &[i64] {
        &self.orders
    }

    /// Adds one more orbifold point.
    pub fn with_point(&self, q: i64) -> Result<Self> {
        let mut orders = self.orders.clone();
        orders.push(q);
        OrbifoldSurface::new(self.genus, orders)
    }

    /// The sphere with exactly two orbifold points of the same order, i.e.
    /// `P^1 / Z_q`.
    pub fn is_quotient_sphere(&self) -> bool {
        self.genus == 0 && self.orders.len() == 2 && self.orders[0] == self.orders[1]
    }
}

/// Orders are the denominators of the weights.
pub fn orbifold_from_parabolic(surface: &ParabolicSurface) -> OrbifoldSurface {
    OrbifoldSurface {
        genus: surface.genus(),
        orders: surface.points().iter().map(|p| *p.weight.denom()).collect(),
    }
}

/// `2 - 2g - sum (1 - 1/q_j)`.
pub fn chi_orb(orb: &OrbifoldSurface) -> Fraction {
    let top = Fraction::from_integer(2 - 2 * orb.genus as i64);
    orb.orders.iter().fold(top, |acc, &q| {
        acc - (Fraction::from_integer(1) - Fraction::new(1, q))
    })
}

/// Bad orbifolds are the teardrop (sphere, one point) and the sphere with two
/// points of distinct orders.
pub fn is_good(orb: &OrbifoldSurface) -> bool {
    if orb.genus > 0 {
        return true;
    }
    match orb.orders.as_slice() {
        [_] => false,
        [a, b] => a == b,
        _ => true,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum AxisSign {
    Plus,
    Minus,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Rotation {
    Explicit {
        axis: [f64; 3],
        angle: f64,
    },
    /// Rotation by `2 pi alpha` about the set's common axis.
    Symbolic {
        alpha: Fraction,
        sign: AxisSign,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RotationSet {
    pub common_axis: [f64; 3],
    pub entries: Vec<Rotation>,
}

impl RotationSet {
    pub fn explicit(entries: Vec<([f64; 3], f64)>) -> Self {
        RotationSet {
            common_axis: [0.0, 0.0, 1.0],
            entries: entries
                .into_iter()
                .map(|(axis, angle)| Rotation::Explicit { axis, angle })
                .collect(),
        }
    }

    /// Holonomy of a split structure: rotation by `2 pi alpha_j` about the
    /// axis through the two section points, oriented by the section `Q_j`
    /// lies on.
    pub fn split(weights_and_sides: impl IntoIterator<Item = (Fraction, AxisSign)>) -> Self {
        RotationSet {
            common_axis: [0.0, 0.0, 1.0],
            entries: weights_and_sides
                .into_iter()
                .map(|(alpha, sign)| Rotation::Symbolic { alpha, sign })
                .collect(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum FixCase {
    NoFixedPoint,
    TwoFixedPoints,
    Trivial,
    QuotientSphereBase,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct FixType {
    pub case: FixCase,
    /// Dimension of the space of holomorphic vector fields of `M_rho` that
    /// vanish somewhere.
    pub dim_v0: usize,
}

impl FixType {
    pub fn of(case: FixCase) -> Self {
        let dim_v0 = match case {
            FixCase::NoFixedPoint => 0,
            FixCase::TwoFixedPoints => 1,
            FixCase::QuotientSphereBase => 2,
            FixCase::Trivial => 3,
        };
        FixType { case, dim_v0 }
    }
}

const AXIS_TOL: f64 = 1e-9;

fn unit(v: [f64; 3]) -> Result<[f64; 3]> {
    let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
    if !(n > 0.0) || !n.is_finite() {
        return Err(Error::ZeroAxis);
    }
    Ok([v[0] / n, v[1] / n, v[2] / n])
}

fn cross_norm(a: [f64; 3], b: [f64; 3]) -> f64 {
    let c = [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ];
    (c[0] * c[0] + c[1] * c[1] + c[2] * c[2]).sqrt()
}

pub fn classify_fixed_points(rotations: &RotationSet, base: &OrbifoldSurface) -> Result<FixType> {
    let common = unit(rotations.common_axis)?;
    let mut axes = Vec::new();
    for r in &rotations.entries {
        match r {
            Rotation::Explicit { axis, angle } => {
                let a = unit(*axis)?;
                let turns = angle / std::f64::consts::TAU;
                if (turns - turns.round()).abs() > AXIS_TOL {
                    axes.push(a);
                }
            }
            Rotation::Symbolic { alpha, .. } => {
                if !alpha.is_integer() {
                    axes.push(common);
                }
            }
        }
    }
    if base.is_quotient_sphere() {
        return Ok(FixType::of(FixCase::QuotientSphereBase));
    }
    let case = match axes.split_first() {
        None => FixCase::Trivial,
        Some((first, rest)) if rest.iter().all(|a| cross_norm(*first, *a) < AXIS_TOL) => {
            FixCase::TwoFixedPoints
        }
        Some(_) => FixCase::NoFixedPoint,
    };
    Ok(FixType::of(case))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum ColumnSource {
    /// Orbifold point over the parabolic point with this index.
    Singularity {
        point: usize,
        side: AxisSign,
        p: i64,
        q: i64,
    },
    /// Blow-up at an extra point.
    Extra { index: usize, fiber: ProjPoint },
}

impl fmt::Display for ColumnSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ColumnSource::Singularity { point, side, p, q } => {
                let s = if *side == AxisSign::Plus { "S1" } else { "S2" };
                write!(f, "P{} {s}-side ({p},{q})", point + 1)
            }
            ColumnSource::Extra { index, fiber } => write!(f, "y{} [{fiber}]", index + 1),
        }
    }
}

/// The one-row gluing matrix with a label per column.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GluingMatrix {
    pub rows: Vec<Vec<Fraction>>,
    pub columns: Vec<ColumnSource>,
}

impl GluingMatrix {
    pub fn is_empty(&self) -> bool {
        self.columns.is_empty()
    }

    /// The matrix under the opposite `S1`/`S2` convention.
    pub fn negated(&self) -> Self {
        GluingMatrix {
            rows: self
                .rows
                .iter()
                .map(|r| r.iter().map(|v| -v).collect())
                .collect(),
            columns: self.columns.clone(),
        }
    }
}

/// Row of kernel-function values. For `Q_j` on `S1` the `S1`-side point has
/// type `(p_j, q_j)`, otherwise `(q_j - p_j, q_j)`; it enters as `-1` and the
/// opposite point as `+1`, each only when its type `(p, q)` has `p != q - 1`.
/// Extra points enter with `phi` of their fiber position, read in coordinates
/// where `S1 = [1:0]` and `S2 = [0:1]`.
pub fn gluing_matrix(
    surface: &ParabolicSurface,
    verdict: &StabilityVerdict,
    extra_points: &[ProjPoint],
) -> Result<GluingMatrix> {
    let StabilityKind::StrictlyPolystable { s1, s2 } = &verdict.kind else {
        return Err(Error::NotStrictlyPolystable);
    };
    let mut row = Vec::new();
    let mut columns = Vec::new();
    for (j, pt) in surface.points().iter().enumerate() {
        let (p, q) = (*pt.weight.numer(), *pt.weight.denom());
        let on_s1 = if s1.contains.contains(&j) {
            true
        } else if s2.contains.contains(&j) {
            false
        } else {
            return Err(Error::BadSurface(format!(
                "marked point {:?} lies on neither {} nor {}",
                pt.label, s1.id, s2.id
            )));
        };
        let (p1, p2) = if on_s1 { (p, q - p) } else { (q - p, p) };
        for (side, ps, entry) in [(AxisSign::Plus, p1, -1), (AxisSign::Minus, p2, 1)] {
            if ps != q - 1 {
                row.push(Fraction::from_integer(entry));
                columns.push(ColumnSource::Singularity {
                    point: j,
                    side,
                    p: ps,
                    q,
                });
            }
        }
    }
    for (i, y) in extra_points.iter().enumerate() {
        let y_norm = match (s1.fiber, s2.fiber) {
            (Some(n), Some(s)) => y.normalised(&n, &s)?,
            _ => *y,
        };
        row.push(y_norm.height());
        columns.push(ColumnSource::Extra {
            index: i,
            fiber: *y,
        });
    }
    Ok(GluingMatrix {
        rows: vec![row],
        columns,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Verdict {
    Feasible,
    FeasibleEquivariant,
    Obstructed {
        reason: Obstruction,
    },
    Infeasible,
    /// Gluing applies only for special positions of the extra points.
    Conditional {
        reason: String,
    },
    NotApplicable {
        reason: Inapplicable,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Obstruction {
    EmptyMatrix,
    Sporadic,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Inapplicable {
    BadOrbifold,
    NotPolystable,
}

impl Verdict {
    pub fn exit_code(&self) -> i32 {
        match self {
            Verdict::Feasible | Verdict::FeasibleEquivariant => 0,
            Verdict::Obstructed { .. } | Verdict::Infeasible | Verdict::Conditional { .. } => 3,
            Verdict::NotApplicable { .. } => 4,
        }
    }

    pub fn is_feasible(&self) -> bool {
        self.exit_code() == 0
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Feasible => f.write_str("Feasible"),
            Verdict::FeasibleEquivariant => f.write_str("FeasibleEquivariant"),
            Verdict::Obstructed {
                reason: Obstruction::EmptyMatrix,
            } => f.write_str("Obstructed (empty matrix)"),
            Verdict::Obstructed {
                reason: Obstruction::Sporadic,
            } => f.write_str("Obstructed (sporadic)"),
            Verdict::Infeasible => f.write_str("Infeasible"),
            Verdict::Conditional { reason } => write!(f, "Conditional ({reason})"),
            Verdict::NotApplicable {
                reason: Inapplicable::BadOrbifold,
            } => f.write_str("NotApplicable (bad orbifold)"),
            Verdict::NotApplicable {
                reason: Inapplicable::NotPolystable,
            } => f.write_str("NotApplicable (not polystable)"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Feasibility {
    /// Rank of the matrix.
    pub c1: usize,
    /// `dim ker` when the kernel meets the open positive cone, else 0.
    pub c2: usize,
    pub positive_kernel: bool,
    #[serde(serialize_with = "display_opt_vec")]
    pub kernel_witness: Option<Vec<Rational>>,
    pub verdict: Verdict,
}

fn display_opt_vec<S: serde::Serializer>(
    v: &Option<Vec<Rational>>,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    match v {
        None => s.serialize_none(),
        Some(v) => s.collect_seq(v.iter().map(|x| x.to_string())),
    }
}

/// Exact rank and positive-kernel test. Feasible iff `c1 = dim_v0` and the
/// kernel meets the positive cone; an empty matrix with `dim_v0 > 0` is
/// obstructed.
pub fn feasibility(matrix: &GluingMatrix, dim_v0: usize) -> Feasibility {
    let ncols = matrix.columns.len();
    if ncols == 0 {
        let verdict = if dim_v0 == 0 {
            Verdict::Feasible
        } else {
            Verdict::Obstructed {
                reason: Obstruction::EmptyMatrix,
            }
        };
        return Feasibility {
            c1: 0,
            c2: 0,
            positive_kernel: false,
            kernel_witness: None,
            verdict,
        };
    }
    let rows: Vec<Vec<Rational>> = matrix
        .rows
        .iter()
        .map(|r| r.iter().map(Rational::from_fraction).collect())
        .collect();
    let c1 = lp::rank(&rows);
    let witness = lp::positive_kernel_vector(&rows, ncols);
    let positive_kernel = witness.is_some();
    let c2 = if positive_kernel { ncols - c1 } else { 0 };
    let verdict = if positive_kernel && c1 == dim_v0 {
        Verdict::Feasible
    } else {
        Verdict::Infeasible
    };
    Feasibility {
        c1,
        c2,
        positive_kernel,
        kernel_witness: witness,
        verdict,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GluingReport {
    pub matrix: GluingMatrix,
    pub c1: usize,
    pub c2: usize,
    pub positive_kernel: bool,
    #[serde(serialize_with = "display_opt_vec")]
    pub kernel_witness: Option<Vec<Rational>>,
    pub case: FixType,
    pub verdict: Verdict,
    pub sfk_possible: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PipelineReport {
    pub stability: StabilityVerdict,
    pub sporadic: bool,
    pub orbifold: OrbifoldSurface,
    pub chi_orb: Fraction,
    pub good_orbifold: bool,
    /// `chi_orb < 0`: the glued metric can be scalar-flat.
    pub sfk_possible: bool,
    pub case: Option<FixType>,
    pub gluing: Option<GluingReport>,
    pub verdict: Verdict,
    /// Point blow-ups of `M`, extra points included.
    pub blowups: usize,
    pub description: String,
    /// Curves resolving the orbifold points of the quotient, per marked point.
    pub resolution: Vec<PointResolution>,
    pub notes: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PointResolution {
    pub label: String,
    pub weight: Fraction,
    pub strings: (Vec<i64>, Vec<i64>),
}

impl PipelineReport {
    /// Self-intersections of every resolving curve, in point order.
    pub fn resolution_curves(&self) -> Vec<i64> {
        self.resolution
            .iter()
            .flat_map(|r| r.strings.0.iter().chain(&r.strings.1).copied())
            .collect()
    }
}

/// Number of point blow-ups and a description of the blown-up surface.
pub fn describe_blowup(surface: &ParabolicSurface, extra: usize) -> Result<(usize, String)> {
    let mut n = extra;
    for pt in surface.points() {
        n += blowup_count(&pt.weight)?;
    }
    let desc = match (surface.genus(), n) {
        (0, 0) if surface.model() == BundleModel::TrivialP1 => "ℂP¹ × ℂP¹".to_string(),
        (0, 0) => "rational ruled surface".to_string(),
        (0, n) => format!("ℂP² blown up at {} points", n + 1),
        (g, 0) => format!("ruled surface over a genus-{g} curve"),
        (g, n) => format!("ruled surface over a genus-{g} curve blown up at {n} points"),
    };
    Ok((n, desc))
}

const SPORADIC_NOTE: &str =
    "sporadic structure: gluing is not available; the existence of a CSCK metric is conjectural";

/// Runs stability, orbifold and gluing checks and decides whether the
/// iterated blow-up (plus blow-ups at `extra_points`) is expected to carry a
/// CSCK metric.
pub fn theorem_a_report(
    surface: &ParabolicSurface,
    extra_points: &[ProjPoint],
) -> Result<PipelineReport> {
    let stability = classify(surface, &[])?;
    let orbifold = orbifold_from_parabolic(surface);
    let chi = chi_orb(&orbifold);
    let good = is_good(&orbifold);
    let sporadic = is_sporadic(surface, &stability);
    let (blowups, description) = describe_blowup(surface, extra_points.len())?;
    let resolution = surface
        .points()
        .iter()
        .map(|pt| {
            let (a, b) = singular_strings(&pt.weight)?;
            Ok(PointResolution {
                label: pt.label.clone(),
                weight: pt.weight,
                strings: (a.selfints().to_vec(), b.selfints().to_vec()),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let sfk_possible = chi.is_negative();
    let mut notes = Vec::new();
    if stability.relative_to_supplied_sections {
        notes.push("stability is relative to supplied sections".to_string());
    }
    if stability.estimated_minimum {
        notes.push("minimal slope attained only by an assumed graph section".to_string());
    }

    let mut case = None;
    let mut gluing = None;
    let verdict = if !good {
        Verdict::NotApplicable {
            reason: Inapplicable::BadOrbifold,
        }
    } else {
        match &stability.kind {
            StabilityKind::Unstable | StabilityKind::SemistableNotPolystable => {
                Verdict::NotApplicable {
                    reason: Inapplicable::NotPolystable,
                }
            }
            StabilityKind::Stable => {
                let fix = FixType::of(FixCase::NoFixedPoint);
                case = Some(fix);
                let matrix = GluingMatrix {
                    rows: vec![],
                    columns: vec![],
                };
                let f = feasibility(&matrix, fix.dim_v0);
                gluing = Some(report(matrix, f, fix, sfk_possible));
                Verdict::Feasible
            }
            StabilityKind::StrictlyPolystable { s1, .. } => {
                let rotations =
                    RotationSet::split(surface.points().iter().enumerate().map(|(j, pt)| {
                        let sign = if s1.contains.contains(&j) {
                            AxisSign::Plus
                        } else {
                            AxisSign::Minus
                        };
                        (pt.weight, sign)
                    }));
                let fix = classify_fixed_points(&rotations, &orbifold)?;
                case = Some(fix);
                match fix.case {
                    FixCase::Trivial if extra_points.is_empty() => {
                        notes.push("trivial parabolic structure: nothing to glue".to_string());
                        Verdict::Feasible
                    }
                    FixCase::Trivial => Verdict::Conditional {
                        reason: "special configurations required".to_string(),
                    },
                    FixCase::QuotientSphereBase => {
                        notes.push(
                            "two independent holomorphic vector fields; Z2-equivariant gluing"
                                .to_string(),
                        );
                        if z2_invariant(extra_points) {
                            Verdict::FeasibleEquivariant
                        } else {
                            Verdict::Conditional {
                                reason: "special configurations required".to_string(),
                            }
                        }
                    }
                    _ => {
                        let matrix = gluing_matrix(surface, &stability, extra_points)?;
                        let f = feasibility(&matrix, fix.dim_v0);
                        let matrix_verdict = f.verdict.clone();
                        gluing = Some(report(matrix, f, fix, sfk_possible));
                        if sporadic && extra_points.is_empty() {
                            notes.push(SPORADIC_NOTE.to_string());
                            Verdict::Obstructed {
                                reason: Obstruction::Sporadic,
                            }
                        } else {
                            matrix_verdict
                        }
                    }
                }
            }
        }
    };
    Ok(PipelineReport {
        stability,
        sporadic,
        orbifold,
        chi_orb: chi,
        good_orbifold: good,
        sfk_possible,
        case,
        gluing,
        verdict,
        blowups,
        description,
        resolution,
        notes,
    })
}

fn report(matrix: GluingMatrix, f: Feasibility, case: FixType, sfk_possible: bool) -> GluingReport {
    GluingReport {
        matrix,
        c1: f.c1,
        c2: f.c2,
        positive_kernel: f.positive_kernel,
        kernel_witness: f.kernel_witness,
        case,
        verdict: f.verdict,
        sfk_possible,
    }
}

/// The extra points form a set invariant under the involution exchanging the
/// two sections.
pub fn z2_invariant(extra_points: &[ProjPoint]) -> bool {
    let mut a: Vec<ProjPoint> = extra_points.to_vec();
    let mut b: Vec<ProjPoint> = extra_points.iter().map(ProjPoint::inverted).collect();
    a.sort();
    b.sort();
    a == b
}

/// `M w` for a rational vector `w`.
pub fn apply_matrix(matrix: &GluingMatrix, w: &[Rational]) -> Vec<Rational> {
    matrix
        .rows
        .iter()
        .map(|r| {
            r.iter().zip(w).fold(Rational::zero(), |acc, (a, b)| {
                acc + Rational::from_fraction(a) * b
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parabolic::{Incidence, MarkedPoint, SectionData};

    fn fr(p: i64, q: i64) -> Fraction {
        Fraction::new(p, q)
    }

    fn pp(s: &str) -> ProjPoint {
        s.parse().unwrap()
    }

    fn surface(pts: &[(&str, Fraction, &str)]) -> ParabolicSurface {
        let points = pts
            .iter()
            .map(|(base, w, fiber)| MarkedPoint {
                label: base.to_string(),
                base: Some(pp(base)),
                weight: *w,
                incidence: Incidence::Fiber(pp(fiber)),
            })
            .collect();
        ParabolicSurface::new(0, BundleModel::TrivialP1, points, vec![]).unwrap()
    }

    fn cor_d() -> ParabolicSurface {
        surface(&[
            ("1:0", fr(1, 2), "1:0"),
            ("0:1", fr(1, 2), "0:1"),
            ("1:1", fr(1, 3), "1:0"),
            ("-1:1", fr(1, 3), "0:1"),
        ])
    }

    #[test]
    fn euler_characteristics() {
        let s = OrbifoldSurface::new(0, vec![2, 2]).unwrap();
        assert_eq!(chi_orb(&s), fr(1, 1));
        let d = orbifold_from_parabolic(&cor_d());
        assert_eq!(d.orders(), &[2, 2, 3, 3]);
        assert_eq!(chi_orb(&d), fr(-1, 3));
        assert_eq!(
            chi_orb(&OrbifoldSurface::new(3, vec![]).unwrap()),
            fr(-4, 1)
        );
        let e = d.with_point(5).unwrap();
        assert_eq!(chi_orb(&d) - chi_orb(&e), fr(4, 5));
        assert!(OrbifoldSurface::new(0, vec![1]).is_err());
    }

    #[test]
    fn goodness() {
        let o = |g, v: &[i64]| OrbifoldSurface::new(g, v.to_vec()).unwrap();
        assert!(!is_good(&o(0, &[3])));
        assert!(!is_good(&o(0, &[2, 3])));
        assert!(is_good(&o(0, &[2, 2])));
        assert!(is_good(&o(0, &[])));
        assert!(is_good(&o(0, &[2, 3, 5])));
        assert!(is_good(&o(1, &[3])));
    }

    #[test]
    fn fixed_point_cases() {
        let base = OrbifoldSurface::new(0, vec![2, 3, 5]).unwrap();
        let id = RotationSet::explicit(vec![
            ([0.0, 0.0, 1.0], 0.0),
            ([1.0, 0.0, 0.0], std::f64::consts::TAU),
        ]);
        assert_eq!(
            classify_fixed_points(&id, &base).unwrap(),
            FixType::of(FixCase::Trivial)
        );
        let common = RotationSet::explicit(vec![([0.0, 0.0, 1.0], 1.0), ([0.0, 0.0, -2.0], 0.5)]);
        let f = classify_fixed_points(&common, &base).unwrap();
        assert_eq!((f.case, f.dim_v0), (FixCase::TwoFixedPoints, 1));
        let distinct = RotationSet::explicit(vec![([0.0, 0.0, 1.0], 1.0), ([1.0, 0.0, 0.0], 0.5)]);
        let f = classify_fixed_points(&distinct, &base).unwrap();
        assert_eq!((f.case, f.dim_v0), (FixCase::NoFixedPoint, 0));
        let zero = RotationSet::explicit(vec![([0.0, 0.0, 0.0], 1.0)]);
        assert_eq!(classify_fixed_points(&zero, &base), Err(Error::ZeroAxis));
        let sym = RotationSet::split([(fr(1, 3), AxisSign::Plus), (fr(2, 5), AxisSign::Minus)]);
        assert_eq!(
            classify_fixed_points(&sym, &base).unwrap().case,
            FixCase::TwoFixedPoints
        );
        let q = OrbifoldSurface::new(0, vec![2, 2]).unwrap();
        let f = classify_fixed_points(&sym, &q).unwrap();
        assert_eq!((f.case, f.dim_v0), (FixCase::QuotientSphereBase, 2));
    }

    #[test]
    fn four_point_sphere_matrix() {
        let s = cor_d();
        let v = classify(&s, &[]).unwrap();
        let m = gluing_matrix(&s, &v, &[]).unwrap();
        assert_eq!(m.rows, vec![vec![fr(-1, 1), fr(1, 1)]]);
        let f = feasibility(&m, 1);
        assert_eq!(f.verdict, Verdict::Feasible);
        assert_eq!((f.c1, f.c2), (1, 1));
        let w = f.kernel_witness.unwrap();
        assert!(apply_matrix(&m, &w).iter().all(|x| x.is_zero()));

        let flipped = feasibility(&m.negated(), 1);
        assert_eq!(flipped.verdict, Verdict::Feasible);
    }

    #[test]
    fn extra_point_on_the_equator() {
        let s = cor_d();
        let v = classify(&s, &[]).unwrap();
        let m = gluing_matrix(&s, &v, &[pp("1:1")]).unwrap();
        assert_eq!(m.rows[0][2], fr(0, 1));
        let m = gluing_matrix(&s, &v, &[pp("2:1")]).unwrap();
        assert_eq!(m.rows[0][2], fr(3, 5));
    }

    #[test]
    fn one_signed_and_empty_rows() {
        let row = |v: &[i64]| GluingMatrix {
            rows: vec![v.iter().map(|&x| fr(x, 1)).collect()],
            columns: (0..v.len())
                .map(|i| ColumnSource::Extra {
                    index: i,
                    fiber: ProjPoint::zero(),
                })
                .collect(),
        };
        assert_eq!(feasibility(&row(&[-1, -1]), 1).verdict, Verdict::Infeasible);
        let f = feasibility(&row(&[-1, 1]), 1);
        assert_eq!(f.verdict, Verdict::Feasible);
        let empty = GluingMatrix {
            rows: vec![vec![]],
            columns: vec![],
        };
        assert_eq!(
            feasibility(&empty, 1).verdict,
            Verdict::Obstructed {
                reason: Obstruction::EmptyMatrix
            }
        );
    }

    #[test]
    fn requires_strict_polystability() {
        let s = surface(&[
            ("0:1", fr(1, 3), "1:0"),
            ("1:0", fr(1, 3), "0:1"),
            ("1:1", fr(1, 4), "1:1"),
        ]);
        let v = classify(&s, &[]).unwrap();
        assert_eq!(
            gluing_matrix(&s, &v, &[]),
            Err(Error::NotStrictlyPolystable)
        );
    }

    #[test]
    fn pipeline_branches() {
        let r = theorem_a_report(&cor_d(), &[]).unwrap();
        assert_eq!(r.verdict, Verdict::Feasible);
        assert!(r.sfk_possible && !r.sporadic);
        assert_eq!(r.blowups, 10);
        assert_eq!(r.description, "ℂP² blown up at 11 points");

        let toric = surface(&[("1:0", fr(1, 2), "1:0"), ("0:1", fr(1, 2), "0:1")]);
        let r = theorem_a_report(&toric, &[]).unwrap();
        assert_eq!(r.verdict, Verdict::FeasibleEquivariant);
        assert_eq!(r.case.unwrap().dim_v0, 2);
        assert_eq!(r.resolution_curves(), vec![-2, -2, -2, -2]);
        let r = theorem_a_report(&toric, &[pp("2:1"), pp("1:2")]).unwrap();
        assert_eq!(r.verdict, Verdict::FeasibleEquivariant);
        let r = theorem_a_report(&toric, &[pp("2:1")]).unwrap();
        assert_eq!(r.verdict.exit_code(), 3);

        let tear = surface(&[("0:1", fr(1, 3), "1:0")]);
        let r = theorem_a_report(&tear, &[]).unwrap();
        assert_eq!(r.verdict.exit_code(), 4);

        let sporadic = surface(&[
            ("0:1", fr(1, 3), "1:0"),
            ("1:0", fr(1, 3), "1:0"),
            ("1:1", fr(1, 3), "1:0"),
            ("2:1", fr(1, 2), "0:1"),
            ("3:1", fr(1, 2), "0:1"),
        ]);
        let r = theorem_a_report(&sporadic, &[]).unwrap();
        assert!(r.sporadic);
        assert_eq!(
            r.verdict,
            Verdict::Obstructed {
                reason: Obstruction::Sporadic
            }
        );
        assert_eq!(r.gluing.unwrap().verdict, Verdict::Infeasible);
        // an extra point near S1 contributes the missing sign
        let r = theorem_a_report(&sporadic, &[pp("3:1")]).unwrap();
        assert_eq!(r.verdict, Verdict::Feasible);

        let empty = ParabolicSurface::new(0, BundleModel::TrivialP1, vec![], vec![]).unwrap();
        let r = theorem_a_report(&empty, &[]).unwrap();
        assert_eq!(r.verdict, Verdict::Feasible);
        assert_eq!(r.description, "ℂP¹ × ℂP¹");
    }

    #[test]
    fn torus_example() {
        let pts = vec![
            MarkedPoint {
                label: "P1".into(),
                base: None,
                weight: fr(2, 5),
                incidence: Incidence::Section("S1".into()),
            },
            MarkedPoint {
                label: "P2".into(),
                base: None,
                weight: fr(2, 5),
                incidence: Incidence::Section("S2".into()),
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
        let r = theorem_a_report(&s, &[]).unwrap();
        assert_eq!(r.verdict, Verdict::Feasible);
        assert!(r.sfk_possible);
        assert_eq!(r.gluing.unwrap().matrix.rows[0].len(), 4);
    }

    #[test]
    fn involution_invariance() {
        assert!(z2_invariant(&[]));
        assert!(z2_invariant(&[pp("1:1")]));
        assert!(z2_invariant(&[pp("3:1"), pp("1:3")]));
        assert!(!z2_invariant(&[pp("3:1")]));
    }
}
