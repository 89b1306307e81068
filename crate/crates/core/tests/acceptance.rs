//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any
//! failure.

mod common;

use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_integer::Integer;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sfk_core::cfrac::hj_expand;
use sfk_core::document::parse_surface;
use sfk_core::gluing::{theorem_a_report, PipelineReport, Verdict};
use sfk_core::logmass::{
    evenly_spaced_levels, log_coeffs_from_levels, log_coeffs_from_pairs, mass_verdict,
    mass_verdict_for_chain, monopole_from_fraction, mu_from_chain_u, ApproximantChain, Level, Sign,
};
use sfk_core::metricnum::{flat_model_error, SampleRegion};
use sfk_core::parabolic::StabilityKind;
use sfk_core::resolution::{blow_down_fully, fiber_chain, CurveChain};
use sfk_core::verify::{verify, VerifyConfig};
use sfk_core::{Fraction, MonopoleData, Rational};

use common::{fixture, random_polystable, sporadic_vs_matrix};

type Criterion = (&'static str, Box<dyn Fn() -> Outcome>);

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        passed,
        detail: detail.into(),
    }
}

fn coprime_pairs(max_q: i64) -> impl Iterator<Item = (i64, i64)> {
    (2..=max_q).flat_map(|q| (1..q).filter(move |p| p.gcd(&q) == 1).map(move |p| (p, q)))
}

fn r(n: i64, d: i64) -> Rational {
    Rational::from_integer(n.into()) / Rational::from_integer(d.into())
}

fn random_positive(rng: &mut ChaCha8Rng) -> Rational {
    r(rng.gen_range(1..=1000), rng.gen_range(1..=1000))
}

fn unit_levels(p: i64, q: i64) -> MonopoleData {
    let k = ApproximantChain::from_fraction(p, q).unwrap().k();
    monopole_from_fraction(p, q, evenly_spaced_levels(k, &Rational::one())).unwrap()
}

fn blow_down(elapsed_limit: Duration) -> Outcome {
    let start = Instant::now();
    let mut count = 0;
    let mut bad = Vec::new();
    for (p, q) in coprime_pairs(200) {
        let chain = fiber_chain(&Fraction::new(p, q)).unwrap();
        if blow_down_fully(&chain).ok() != Some(CurveChain::new(vec![0])) {
            bad.push(format!("{p}/{q}"));
        }
        count += 1;
    }
    let t = start.elapsed();
    outcome(
        bad.is_empty() && t < elapsed_limit,
        format!("{count} fractions, {} failures, {t:.2?}", bad.len()),
    )
}

fn determinants() -> Outcome {
    let (mut checked, mut failures) = (0, 0);
    for (p, q) in coprime_pairs(200) {
        let hj = hj_expand(p, q).unwrap();
        let pairs = hj.approximants();
        let k = hj.len();
        for j in 0..=k {
            let (m0, n0) = pairs[j];
            let (m1, n1) = pairs[j + 1];
            checked += 1;
            if m0 * n1 - m1 * n0 != 1 {
                failures += 1;
            }
        }
    }
    outcome(
        failures == 0,
        format!("{checked} indices, {failures} failures"),
    )
}

fn sign_theorem() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let (mut pairs, mut vectors, mut failures) = (0, 0, 0);
    for (p, q) in coprime_pairs(100) {
        let chain = ApproximantChain::from_fraction(p, q).unwrap();
        pairs += 1;
        for _ in 0..100 {
            let u: Vec<Rational> = (0..chain.k()).map(|_| random_positive(&mut rng)).collect();
            let v = mass_verdict_for_chain(&chain, &u).unwrap();
            vectors += 1;
            let ok = v.mu <= Rational::zero() && (v.mu.is_zero() == (p == q - 1));
            failures += (!ok) as usize;
        }
    }
    outcome(
        failures == 0,
        format!("{pairs} pairs, {vectors} u vectors, {failures} failures"),
    )
}

fn route_agreement() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let all: Vec<(i64, i64)> = coprime_pairs(50).collect();
    let mut failures = 0;
    for _ in 0..1000 {
        let (p, q) = all[rng.gen_range(0..all.len())];
        let k = ApproximantChain::from_fraction(p, q).unwrap().k();
        let mut y = Rational::zero();
        let mut levels = vec![Level::Finite(Rational::zero())];
        for _ in 0..=k {
            y += random_positive(&mut rng);
            levels.push(Level::Finite(y.clone()));
        }
        levels.reverse();
        if rng.gen_bool(0.3) {
            levels[0] = Level::Infinite;
        }
        let d = monopole_from_fraction(p, q, levels).unwrap();
        let (a, b) = log_coeffs_from_pairs(&d).unwrap();
        let u: Vec<Rational> = log_coeffs_from_levels(&d)
            .unwrap()
            .per_term
            .into_iter()
            .map(|t| t.u)
            .collect();
        let mu = mu_from_chain_u(d.chain().unwrap(), &u).unwrap().mu;
        failures += (a + b != mu) as usize;
    }
    outcome(
        failures == 0,
        format!("1000 level sequences, {failures} failures"),
    )
}

fn worked_examples() -> Outcome {
    let mut problems = Vec::new();
    for q in 1..=30 {
        let chain = ApproximantChain::lebrun(q).unwrap();
        let coeffs: Vec<Rational> = chain.mu_coefficients();
        if coeffs != [r(2, q) - Rational::one()] {
            problems.push(format!("single q={q}"));
        }
        let sign = mass_verdict_for_chain(&chain, &[Rational::one()])
            .unwrap()
            .sign;
        let want = match q {
            1 => Sign::Positive,
            2 => Sign::Zero,
            _ => Sign::Negative,
        };
        if sign != want {
            problems.push(format!("sign q={q}"));
        }
        let inserted = chain.insert(1).unwrap();
        let coeffs: Vec<Rational> = inserted.mu_coefficients();
        if coeffs != [r(2, q) - Rational::one(), r(2, q) - r(2, q + 1)] {
            problems.push(format!("pair q={q}"));
        }
        if q > 2 {
            let pos = mass_verdict_for_chain(&inserted, &[r(1, 1), r(q * q, 1)]).unwrap();
            let neg = mass_verdict_for_chain(&inserted, &[r(q * q, 1), r(1, 1)]).unwrap();
            if pos.sign != Sign::Positive || neg.sign != Sign::Negative {
                problems.push(format!("either sign q={q}"));
            }
        }
    }
    outcome(
        problems.is_empty(),
        if problems.is_empty() {
            "q = 1..30, both examples exact, u = (1, q²) positive and (q², 1) negative".into()
        } else {
            problems.join(", ")
        },
    )
}

fn pipeline(name: &str) -> PipelineReport {
    let input = parse_surface(&fixture(name)).unwrap();
    theorem_a_report(&input.surface, &input.extra_points).unwrap()
}

fn four_points() -> Outcome {
    let rep = pipeline("four_points.toml");
    let ok = rep.stability.is_strictly_polystable()
        && !rep.sporadic
        && rep.chi_orb == Fraction::new(-1, 3)
        && rep.sfk_possible
        && rep.blowups == 10
        && rep.description == "ℂP² blown up at 11 points";
    outcome(
        ok,
        format!(
            "{}, sporadic {}, chi {}, SFK {}, {} blow-ups, \"{}\"",
            rep.stability.kind.name(),
            rep.sporadic,
            rep.chi_orb,
            rep.sfk_possible,
            rep.blowups,
            rep.description
        ),
    )
}

fn toric_and_slope_zero() -> Outcome {
    let toric = pipeline("toric.toml");
    let mut ok = toric.stability.is_strictly_polystable()
        && toric.verdict == Verdict::FeasibleEquivariant
        && toric.resolution_curves() == [-2, -2, -2, -2];
    let mut detail = format!(
        "toric {} curves {:?}",
        toric.verdict,
        toric.resolution_curves()
    );
    for name in ["three_points.toml", "torus.toml"] {
        let rep = pipeline(name);
        let witnesses = matches!(rep.stability.kind, StabilityKind::StrictlyPolystable { .. })
            && rep.stability.min_slope.is_zero();
        ok &= witnesses && rep.verdict == Verdict::Feasible;
        detail.push_str(&format!(
            "; {name} witnesses [{}] {}",
            rep.stability.witness.join(", "),
            rep.verdict
        ));
    }
    outcome(ok, detail)
}

fn sporadic_equivalence() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let (mut seen, mut sporadic, mut failures) = (0, 0, 0);
    while seen < 600 {
        let Some(s) = random_polystable(&mut rng) else {
            continue;
        };
        let (sp, blocked) = sporadic_vs_matrix(&s);
        seen += 1;
        sporadic += sp as usize;
        failures += (sp != blocked) as usize;
    }
    outcome(
        failures == 0,
        format!("{seen} surfaces ({sporadic} sporadic), {failures} disagreements"),
    )
}

fn flat_model() -> Outcome {
    let start = Instant::now();
    let err: f64 = flat_model_error(&SampleRegion::new(1.0, 5.0, 1000, 9)).unwrap();
    let t = start.elapsed();
    outcome(
        err < 1e-12 && t < Duration::from_secs(1),
        format!("max |g - g_flat| = {err:.2e} over 1000 points with r in [1, 5], {t:.2?}"),
    )
}

fn kahler() -> Outcome {
    let mut ok = true;
    let mut parts = Vec::new();
    for (p, q) in [(1, 2), (1, 3), (2, 5), (3, 5)] {
        let rep = verify(&unit_levels(p, q), &VerifyConfig::default()).unwrap();
        let get = |n: &str| rep.check(n).unwrap();
        let names = [
            "kahler_domega",
            "kahler_integrability",
            "scalar_curvature",
            "kahler_order",
        ];
        ok &= names.iter().all(|n| get(n).passed) && rep.config.samples >= 100;
        parts.push(format!(
            "{p}/{q}: dω {:.1e}, dJ {:.1e}, |s| {:.1e}, order {:.2}",
            get("kahler_domega").value,
            get("kahler_integrability").value,
            get("scalar_curvature").value,
            get("kahler_order").value
        ));
    }
    outcome(ok, parts.join("; "))
}

fn asymptotics() -> Outcome {
    let fractions = [
        (1, 2),
        (1, 3),
        (2, 3),
        (1, 4),
        (3, 4),
        (2, 5),
        (3, 5),
        (1, 7),
        (5, 7),
        (4, 11),
        (5, 12),
        (7, 9),
    ];
    let mut ok = true;
    let (mut worst_fit, mut worst_decay) = (0.0f64, 1.0f64 / 16.0);
    let mut bad = Vec::new();
    for (p, q) in fractions {
        let d = unit_levels(p, q);
        let rep = verify(&d, &VerifyConfig::default()).unwrap();
        let u: Vec<Rational> = log_coeffs_from_levels(&d)
            .unwrap()
            .per_term
            .into_iter()
            .map(|t| t.u)
            .collect();
        let verdict = mass_verdict(p, q, &u).unwrap();
        let fit_ok = rep.check("fit_a").unwrap().passed && rep.check("fit_b").unwrap().passed;
        let decay = rep.check("potential_decay").unwrap();
        let sign_ok = rep.fitted_sign == verdict.sign;
        worst_fit = worst_fit
            .max(rep.check("fit_a").unwrap().value)
            .max(rep.check("fit_b").unwrap().value);
        if (decay.value - 1.0 / 16.0).abs() > (worst_decay - 1.0 / 16.0).abs() {
            worst_decay = decay.value;
        }
        if !(fit_ok && decay.passed && sign_ok) {
            ok = false;
            bad.push(format!("{p}/{q}"));
        }
    }
    let mut detail = format!(
        "{} fractions, worst fit error {:.2e}, worst decay ratio {:.4}",
        fractions.len(),
        worst_fit,
        worst_decay
    );
    if !bad.is_empty() {
        detail.push_str(&format!(", failing {}", bad.join(" ")));
    }
    outcome(ok, detail)
}

fn main() -> ExitCode {
    let criteria: Vec<Criterion> = vec![
        (
            "fiber chains blow down to [0]",
            Box::new(|| blow_down(Duration::from_secs(2))),
        ),
        ("determinant identity", Box::new(determinants)),
        ("sign of the mass", Box::new(sign_theorem)),
        ("level and u routes agree", Box::new(route_agreement)),
        ("single and inserted examples", Box::new(worked_examples)),
        ("four-point sphere pipeline", Box::new(four_points)),
        (
            "toric and slope-zero fixtures",
            Box::new(toric_and_slope_zero),
        ),
        ("sporadic iff blocked", Box::new(sporadic_equivalence)),
        ("flat model", Box::new(flat_model)),
        ("Kähler residuals and curvature", Box::new(kahler)),
        ("asymptotic fit and decay", Box::new(asymptotics)),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let o = run();
        let tag = if o.passed { "PASS" } else { "FAIL" };
        println!(
            "{tag} {:>2} {name}: {} [{:.2?}]",
            i + 1,
            o.detail,
            start.elapsed()
        );
        failed += (!o.passed) as usize;
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
