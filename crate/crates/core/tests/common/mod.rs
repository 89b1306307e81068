//! Random strictly polystable parabolic surfaces for the sporadic/infeasible
//! comparison.

#![allow(dead_code)]

use rand::Rng;
use sfk_core::gluing::{feasibility, gluing_matrix, Obstruction, Verdict};
use sfk_core::parabolic::{
    classify, is_sporadic, BundleModel, Incidence, MarkedPoint, ParabolicSurface, ProjPoint,
    SectionData,
};
use sfk_core::Fraction;

pub const MAX_ORDER: i64 = 12;

#[derive(Clone, Copy)]
enum Shape {
    Free,
    /// `1/q` on the first section, `(q-1)/q` on the second.
    Pattern,
    Swapped,
}

fn draw(rng: &mut impl Rng, shape: Shape, first: bool) -> Fraction {
    let q = rng.gen_range(2..=MAX_ORDER);
    let unit = Fraction::new(1, q);
    match (shape, first) {
        (Shape::Free, _) => Fraction::new(rng.gen_range(1..q), q),
        (Shape::Pattern, true) | (Shape::Swapped, false) => unit,
        (Shape::Pattern, false) | (Shape::Swapped, true) => Fraction::from_integer(1) - unit,
    }
}

fn fits(w: Fraction, shape: Shape, first: bool) -> bool {
    let (p, q) = (*w.numer(), *w.denom());
    if !(p > 0 && p < q && q <= MAX_ORDER) {
        return false;
    }
    match (shape, first) {
        (Shape::Free, _) => true,
        (Shape::Pattern, true) | (Shape::Swapped, false) => p == 1,
        (Shape::Pattern, false) | (Shape::Swapped, true) => p == q - 1,
    }
}

/// Balanced weights on two sections, the last one solved for. Free draws
/// sometimes land on the sporadic pattern too, which is fine.
fn balanced(rng: &mut impl Rng) -> Option<(Vec<Fraction>, Vec<Fraction>)> {
    let shape = match rng.gen_range(0..4) {
        0 | 1 => Shape::Free,
        2 => Shape::Pattern,
        _ => Shape::Swapped,
    };
    let n1 = rng.gen_range(1..=3);
    let n2 = rng.gen_range(1..=3);
    let s1: Vec<Fraction> = (0..n1).map(|_| draw(rng, shape, true)).collect();
    let mut s2: Vec<Fraction> = (0..n2 - 1).map(|_| draw(rng, shape, false)).collect();
    let last = s1.iter().sum::<Fraction>() - s2.iter().sum::<Fraction>();
    if !fits(last, shape, false) {
        return None;
    }
    s2.push(last);
    Some((s1, s2))
}

fn point(
    label: String,
    base: Option<ProjPoint>,
    weight: Fraction,
    incidence: Incidence,
) -> MarkedPoint {
    MarkedPoint {
        label,
        base,
        weight,
        incidence,
    }
}

/// One attempt; `None` if the draw is unbalanced or fails the filter.
pub fn random_polystable(rng: &mut impl Rng) -> Option<ParabolicSurface> {
    let (s1, s2) = balanced(rng)?;
    let genus = rng.gen_range(0..=2u32);
    let mut points = Vec::new();
    let tagged = s1
        .iter()
        .map(|w| (*w, true))
        .chain(s2.iter().map(|w| (*w, false)));
    let surface = if genus == 0 {
        for (i, (w, first)) in tagged.enumerate() {
            let base =
                ProjPoint::new(Fraction::from_integer(i as i64), Fraction::from_integer(1)).ok()?;
            let fiber = if first {
                ProjPoint::infinity()
            } else {
                ProjPoint::zero()
            };
            points.push(point(
                format!("P{}", i + 1),
                Some(base),
                w,
                Incidence::Fiber(fiber),
            ));
        }
        ParabolicSurface::new(0, BundleModel::TrivialP1, points, vec![]).ok()?
    } else {
        for (i, (w, first)) in tagged.enumerate() {
            let id = if first { "S1" } else { "S2" };
            points.push(point(
                format!("P{}", i + 1),
                None,
                w,
                Incidence::Section(id.into()),
            ));
        }
        let sections = vec![
            SectionData::new("S1", 0).disjoint_from(["S2"]),
            SectionData::new("S2", 0),
        ];
        ParabolicSurface::new(genus, BundleModel::Sections, points, sections).ok()?
    };
    let verdict = classify(&surface, &[]).ok()?;
    (verdict.is_strictly_polystable() && !surface.is_two_point_sphere()).then_some(surface)
}

/// `(sporadic, matrix says infeasible or obstructed)` for a strictly
/// polystable surface with no extra points.
pub fn sporadic_vs_matrix(surface: &ParabolicSurface) -> (bool, bool) {
    let verdict = classify(surface, &[]).expect("classifiable");
    let sporadic = is_sporadic(surface, &verdict);
    let matrix = gluing_matrix(surface, &verdict, &[]).expect("points lie on the witnesses");
    let blocked = matches!(
        feasibility(&matrix, 1).verdict,
        Verdict::Infeasible
            | Verdict::Obstructed {
                reason: Obstruction::EmptyMatrix
            }
    );
    (sporadic, blocked)
}

pub fn fixture(name: &str) -> String {
    let path = format!("{}/fixtures/{name}", env!("CARGO_MANIFEST_DIR"));
    std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{path}: {e}"))
}
