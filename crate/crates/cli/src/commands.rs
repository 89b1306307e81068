use std::path::Path;

use sfk_core::cfrac::hj_expand;
use sfk_core::document::{parse_surface, SurfaceInput};
use sfk_core::gluing::{theorem_a_report, FixCase, GluingReport, PipelineReport};
use sfk_core::logmass::{
    self, evenly_spaced_levels, log_coeffs_from_levels, ApproximantChain, Level, LogCoefficients,
    Sign,
};
use sfk_core::parabolic::{classify, is_sporadic, CandidateKind, StabilityKind, StabilityVerdict};
use sfk_core::resolution::{blowup_count, complement, fiber_chain, singular_strings};
use sfk_core::scalar::Exact;
use sfk_core::verify::{decay_csv, fit_csv, verify, VerifyConfig};
use sfk_core::{Fraction, MonopoleData, Rational, VERSION};

use crate::report::Report;

pub struct CliError {
    pub code: u8,
    pub message: String,
}

/// Malformed input: exit 2.
fn input(message: impl ToString) -> CliError {
    CliError {
        code: 2,
        message: message.to_string(),
    }
}

fn input_err(e: sfk_core::Error) -> CliError {
    input(e)
}

pub type Outcome = Result<(Report, u8), CliError>;

/// `p/q` with `0 < p < q`, kept unreduced so a non-coprime pair is reported.
pub fn parse_pq(s: &str) -> Result<(i64, i64), CliError> {
    let (p, q) = s
        .trim()
        .split_once('/')
        .ok_or_else(|| input(format!("expected a fraction p/q, got {s:?}")))?;
    let p: i64 = p
        .trim()
        .parse()
        .map_err(|_| input(format!("bad numerator in {s:?}")))?;
    let q: i64 = q
        .trim()
        .parse()
        .map_err(|_| input(format!("bad denominator in {s:?}")))?;
    if !(0 < p && p < q) {
        return Err(input(format!("need 0 < p < q, got {p}/{q}")));
    }
    Ok((p, q))
}

fn parse_rational(s: &str) -> Result<Rational, CliError> {
    s.trim()
        .parse::<Rational>()
        .map_err(|_| input(format!("expected a rational number, got {s:?}")))
}

fn parse_levels(list: &[String]) -> Result<Vec<Level<Rational>>, CliError> {
    list.iter()
        .map(|s| match s.trim() {
            "inf" | "∞" => Ok(Level::Infinite),
            other => parse_rational(other).map(Level::Finite),
        })
        .collect()
}

fn chain_data(p: i64, q: i64, levels: Option<&[String]>) -> Result<MonopoleData, CliError> {
    let chain = ApproximantChain::from_fraction(p, q).map_err(input)?;
    let levels = match levels {
        Some(list) => parse_levels(list)?,
        None => evenly_spaced_levels(chain.k(), &Rational::from_int(1)),
    };
    MonopoleData::from_chain(chain, levels).map_err(input)
}

fn pairs_text(pairs: &[(i64, i64)]) -> Vec<String> {
    pairs.iter().map(|(m, n)| format!("({m},{n})")).collect()
}

fn sign_text(s: Sign) -> String {
    s.to_string()
}

pub fn hj(fraction: &str) -> Outcome {
    let (p, q) = parse_pq(fraction)?;
    let exp = hj_expand(p, q).map_err(input)?;
    let dual = hj_expand(q - p, q).map_err(input)?;
    let alpha = Fraction::new(p, q);
    let chain = fiber_chain(&alpha).map_err(input)?;
    let dual_chain = fiber_chain(&complement(&alpha)).map_err(input)?;
    let (s1, s2) = singular_strings(&alpha).map_err(input)?;
    let mut r = Report::new();
    r.text("Version", VERSION)
        .text("Fraction", format!("{p}/{q}"))
        .ints("Digits", exp.digits())
        .text("Dual fraction", format!("{}/{q}", q - p))
        .ints("Dual digits", dual.digits())
        .texts("Approximants", &pairs_text(exp.approximants()))
        .ints("Fiber chain", chain.selfints())
        .ints("Dual chain", dual_chain.selfints())
        .ints("Singular string", s1.selfints())
        .ints("Dual singular string", s2.selfints())
        .int("Blow-up count", blowup_count(&alpha).map_err(input)? as i64)
        .flag("Crepant", p == q - 1);
    Ok((r, 0))
}

fn coefficients_report(r: &mut Report, c: &LogCoefficients<Rational>) {
    if let (Some(a), Some(b)) = (&c.a, &c.b) {
        r.text("a", a).text("b", b);
    }
    r.text("mu", &c.mu);
    let terms = c
        .per_term
        .iter()
        .enumerate()
        .map(|(i, t)| {
            let mut g = Report::new();
            g.int("j", i as i64 + 1)
                .text("coefficient", &t.coefficient)
                .text("u", &t.u);
            g
        })
        .collect();
    r.groups("Terms", terms);
}

pub fn mass(fraction: &str, u: Option<&[String]>, levels: Option<&[String]>) -> Outcome {
    let (p, q) = parse_pq(fraction)?;
    let mut r = Report::new();
    r.text("Version", VERSION)
        .text("Fraction", format!("{p}/{q}"));
    let coeffs = match (u, levels) {
        (Some(u), _) => {
            let u: Vec<Rational> = u
                .iter()
                .map(|s| parse_rational(s))
                .collect::<Result<_, _>>()?;
            if let Some(bad) = u.iter().find(|x| *x <= &Rational::from_int(0)) {
                return Err(input(format!("u entries must be positive, got {bad}")));
            }
            logmass::mu_from_u(p, q, &u).map_err(|e| input(format!("--u: {e}")))?
        }
        (None, Some(levels)) => {
            log_coeffs_from_levels(&chain_data(p, q, Some(levels))?).map_err(input)?
        }
        (None, None) => return Err(input("give --u or --levels")),
    };
    coefficients_report(&mut r, &coeffs);
    r.text("Sign", sign_text(Sign::of(&coeffs.mu)))
        .flag("Crepant", p == q - 1);
    Ok((r, 0))
}

pub fn blowup_insert(
    fraction: &str,
    position: usize,
    levels: Option<&[String]>,
    level: Option<&str>,
) -> Outcome {
    let (p, q) = parse_pq(fraction)?;
    let data = chain_data(p, q, levels)?;
    let new_level = level.map(parse_rational).transpose()?;
    let inserted = logmass::blowup_insert(&data, position, new_level).map_err(input)?;
    let chain = inserted.chain().expect("inserted data keeps its chain");
    let before = log_coeffs_from_levels(&data).map_err(input)?;
    let after = log_coeffs_from_levels(&inserted).map_err(input)?;
    let mut r = Report::new();
    r.text("Version", VERSION)
        .text("Fraction", format!("{p}/{q}"))
        .int("Position", position as i64)
        .texts("Chain", &pairs_text(chain.pairs()))
        .texts("Levels", inserted.levels())
        .texts("Pairs", &pairs_text(inserted.pairs()))
        .text("mu before", &before.mu);
    coefficients_report(&mut r, &after);
    r.text("Sign", sign_text(Sign::of(&after.mu)));
    Ok((r, 0))
}

fn load(path: &Path) -> Result<SurfaceInput, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| input(format!("cannot read {}: {e}", path.display())))?;
    parse_surface(&text).map_err(|e| input(format!("{}: {e}", path.display())))
}

fn stability_report(doc: &SurfaceInput, v: &StabilityVerdict) -> Report {
    let labels: Vec<String> = doc
        .surface
        .points()
        .iter()
        .map(|p| p.label.clone())
        .collect();
    let mut r = Report::new();
    r.text("Verdict", v.kind.name())
        .text("Minimal slope", v.min_slope)
        .texts("Witnesses", &v.witness);
    if let StabilityKind::StrictlyPolystable { s1, s2 } = &v.kind {
        r.texts("Disjoint slope-zero sections", &[&s1.id, &s2.id]);
    }
    let candidates = v
        .candidates
        .iter()
        .map(|c| {
            let mut g = Report::new();
            let kind = match &c.kind {
                CandidateKind::Constant { .. } => "constant".to_string(),
                CandidateKind::VirtualGraph { degree } => format!("graph of degree {degree}"),
                CandidateKind::Declared => "declared".to_string(),
            };
            let through: Vec<&String> = c.section.contains.iter().map(|&j| &labels[j]).collect();
            g.text("id", &c.section.id)
                .text("kind", kind)
                .int("self-intersection", c.section.self_intersection)
                .texts("through", &through)
                .text("slope", c.slope);
            g
        })
        .collect();
    r.groups("Candidates", candidates)
        .flag(
            "Relative to supplied sections",
            v.relative_to_supplied_sections,
        )
        .flag("Estimated minimum", v.estimated_minimum);
    r
}

pub fn stability(path: &Path) -> Outcome {
    let doc = load(path)?;
    let v = classify(&doc.surface, &[]).map_err(input_err)?;
    let mut r = Report::new();
    r.text("Version", VERSION).text("Document", path.display());
    let mut body = stability_report(&doc, &v);
    body.flag("Sporadic", is_sporadic(&doc.surface, &v));
    r.group("Stability", body);
    Ok((r, 0))
}

fn case_name(case: FixCase) -> &'static str {
    match case {
        FixCase::NoFixedPoint => "no fixed point",
        FixCase::TwoFixedPoints => "two fixed points",
        FixCase::Trivial => "trivial",
        FixCase::QuotientSphereBase => "quotient-sphere base",
    }
}

fn gluing_report(g: &GluingReport) -> Report {
    let mut r = Report::new();
    let columns: Vec<String> = g.matrix.columns.iter().map(ToString::to_string).collect();
    r.texts("Columns", &columns);
    let rows = g
        .matrix
        .rows
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut rr = Report::new();
            rr.int("row", i as i64 + 1).texts("entries", row);
            rr
        })
        .collect();
    r.groups("Rows", rows)
        .int("c1 (rank)", g.c1 as i64)
        .int("c2", g.c2 as i64)
        .flag("Positive kernel", g.positive_kernel);
    match &g.kernel_witness {
        Some(w) => r.texts("Kernel witness", w),
        None => r.texts::<String>("Kernel witness", &[]),
    };
    r.text("Matrix verdict", &g.verdict);
    r
}

fn pipeline_body(doc: &SurfaceInput, rep: &PipelineReport) -> Report {
    let mut r = Report::new();
    r.group("Stability", stability_report(doc, &rep.stability))
        .flag("Sporadic", rep.sporadic)
        .int("Genus", rep.orbifold.genus() as i64)
        .ints("Orbifold orders", rep.orbifold.orders())
        .text("Orbifold Euler characteristic", rep.chi_orb)
        .flag("Good orbifold", rep.good_orbifold)
        .flag("SFK possible", rep.sfk_possible);
    match rep.case {
        Some(c) => {
            r.text("Fixed-point case", case_name(c.case))
                .int("dim V0", c.dim_v0 as i64);
        }
        None => {
            r.text("Fixed-point case", "not computed");
        }
    }
    if let Some(g) = &rep.gluing {
        r.group("Gluing", gluing_report(g));
    }
    let resolution = rep
        .resolution
        .iter()
        .map(|p| {
            let mut g = Report::new();
            g.text("point", &p.label)
                .text("weight", p.weight)
                .ints("string", &p.strings.0)
                .ints("dual string", &p.strings.1);
            g
        })
        .collect();
    r.groups("Resolution", resolution)
        .ints("Resolution curves", &rep.resolution_curves())
        .int("Blow-ups", rep.blowups as i64)
        .text("Description", &rep.description)
        .text("Verdict", &rep.verdict)
        .int("Exit code", rep.verdict.exit_code() as i64)
        .texts("Notes", &rep.notes);
    r
}

pub fn pipeline(path: &Path, extra: &[String]) -> Outcome {
    let mut doc = load(path)?;
    for s in extra {
        doc.extra_points.push(
            s.parse()
                .map_err(|e| input(format!("--extra {s:?}: {e}")))?,
        );
    }
    let rep = theorem_a_report(&doc.surface, &doc.extra_points).map_err(input_err)?;
    let mut r = Report::new();
    r.text("Version", VERSION)
        .text("Document", path.display())
        .texts("Extra points", &doc.extra_points);
    r.extend(pipeline_body(&doc, &rep));
    let code = rep.verdict.exit_code() as u8;
    Ok((r, code))
}

pub struct VerifyRequest<'a> {
    pub fraction: &'a str,
    pub levels: Option<&'a [String]>,
    pub samples: usize,
    pub seed: u64,
    pub csv: Option<&'a Path>,
    pub fit_csv: Option<&'a Path>,
}

pub fn metric_verify(req: &VerifyRequest) -> Outcome {
    let (p, q) = parse_pq(req.fraction)?;
    if req.samples == 0 {
        return Err(input("--samples must be positive"));
    }
    let data = chain_data(p, q, req.levels)?;
    let config = VerifyConfig {
        samples: req.samples,
        seed: req.seed,
        ..VerifyConfig::default()
    };
    let rep = verify(&data, &config).map_err(input_err)?;
    let write = |path: &Path, text: String| {
        std::fs::write(path, text).map_err(|e| CliError {
            code: 1,
            message: format!("cannot write {}: {e}", path.display()),
        })
    };
    if let Some(path) = req.csv {
        write(path, decay_csv(&data, 10.0, 6).map_err(input_err)?)?;
    }
    if let Some(path) = req.fit_csv {
        write(
            path,
            fit_csv(&data, &[10.0, 30.0, 100.0, 300.0]).map_err(input_err)?,
        )?;
    }

    let t = &config.tolerances;
    let mut tol = Report::new();
    tol.real("flat model", t.flat_model)
        .real("structure", t.structure)
        .real("kahler", t.kahler)
        .real("curvature", t.curvature)
        .real("fit relative", t.fit_relative)
        .real("decay ratio", t.decay_ratio)
        .real("decay band", t.decay_band);
    let mut steps = Report::new();
    steps
        .real("kahler", config.kahler_step)
        .real("curvature", config.curvature_step);

    let mut exact = Report::new();
    exact
        .text("a", &rep.exact_fractions.0)
        .text("b", &rep.exact_fractions.1)
        .text("mu", &rep.exact_fractions.2)
        .text("sign", sign_text(rep.exact_sign));
    let mut fitted = Report::new();
    fitted
        .real("a", rep.fitted.a)
        .real("b", rep.fitted.b)
        .real("mu", rep.fitted.mu)
        .text("sign", sign_text(rep.fitted_sign));
    let decay = rep
        .decay
        .iter()
        .map(|(r, res)| {
            let mut g = Report::new();
            g.real("r", *r).real("residual", *res);
            g
        })
        .collect();
    let checks = rep
        .checks
        .iter()
        .map(|c| {
            let mut g = Report::new();
            g.text("name", c.name)
                .real("value", c.value)
                .text("tolerance", &c.tolerance)
                .text("result", if c.passed { "PASS" } else { "FAIL" });
            g
        })
        .collect();

    let mut r = Report::new();
    r.text("Version", VERSION)
        .text("Fraction", format!("{p}/{q}"))
        .texts("Levels", data.levels())
        .int("Seed", req.seed as i64)
        .int("Samples", req.samples as i64)
        .group("Steps", steps)
        .group("Tolerances", tol)
        .group("Exact", exact)
        .group("Fitted", fitted)
        .groups("Decay", decay)
        .groups("Checks", checks)
        .flag("All passed", rep.passed());
    if let Some(path) = req.csv {
        r.text("Decay CSV", path.display());
    }
    if let Some(path) = req.fit_csv {
        r.text("Fit CSV", path.display());
    }
    Ok((r, if rep.passed() { 0 } else { 1 }))
}
