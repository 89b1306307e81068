//! Verification sweep for one monopole configuration: flat-model exactness,
//! pointwise structure identities, Kähler residuals, scalar curvature, the
//! log-coefficient fit and the decay of the potential residual.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::logmass::{log_coeffs_from_levels, Sign};
use crate::metricnum::{
    self, decay_series, fit_log_coeffs, flat_model_error, geometric_radii, interior_angles,
    kahler_residual, metric_at, potential_residual, scalar_curvature_with, NumericMonopole,
    SampleRegion, CURVATURE_STEP, KAHLER_STEP,
};
use crate::scalar::Exact;
use crate::{MonopoleData, VERSION};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Tolerances {
    pub flat_model: f64,
    pub structure: f64,
    pub kahler: f64,
    pub curvature: f64,
    /// Relative error of fitted `a`, `b` and `mu`.
    pub fit_relative: f64,
    pub decay_ratio: f64,
    /// Allowed relative deviation from `decay_ratio`.
    pub decay_band: f64,
    /// Fitted `mu` below this fraction of `max(|a|, |b|)` counts as zero.
    pub zero_band: f64,
    /// Accepted range of the observed finite-difference order.
    pub order_range: (f64, f64),
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            flat_model: 1e-12,
            structure: 1e-10,
            kahler: 1e-6,
            curvature: 1e-4,
            fit_relative: 0.01,
            decay_ratio: 1.0 / 16.0,
            decay_band: 0.25,
            zero_band: 1e-6,
            order_range: (1.5, 2.5),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyConfig {
    pub samples: usize,
    pub seed: u64,
    pub r_min: f64,
    pub r_max: f64,
    pub kahler_step: f64,
    pub curvature_step: f64,
    /// Radii of the log-coefficient fit.
    pub fit_range: (f64, f64),
    pub fit_radii: usize,
    pub fit_angles: usize,
    /// Radii of the decay-ratio test; consecutive entries double.
    pub decay_radii: Vec<f64>,
    pub tolerances: Tolerances,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            samples: 100,
            seed: 0,
            r_min: 1.0,
            r_max: 5.0,
            kahler_step: KAHLER_STEP,
            curvature_step: CURVATURE_STEP,
            fit_range: (10.0, 1000.0),
            fit_radii: 15,
            fit_angles: 7,
            decay_radii: vec![10.0, 20.0, 40.0],
            tolerances: Tolerances::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: &'static str,
    pub value: f64,
    pub tolerance: String,
    pub passed: bool,
}

impl Check {
    fn at_most(name: &'static str, value: f64, tol: f64) -> Self {
        Check {
            name,
            value,
            tolerance: format!("<= {tol:e}"),
            passed: value.is_finite() && value <= tol,
        }
    }

    fn between(name: &'static str, value: f64, lo: f64, hi: f64) -> Self {
        Check {
            name,
            value,
            tolerance: format!("in [{lo}, {hi}]"),
            passed: value.is_finite() && value >= lo && value <= hi,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Coefficients {
    pub a: f64,
    pub b: f64,
    pub mu: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyReport {
    pub version: &'static str,
    pub config: VerifyConfig,
    pub exact: Coefficients,
    /// Exact values as fractions.
    pub exact_fractions: (String, String, String),
    pub exact_sign: Sign,
    pub fitted: Coefficients,
    pub fitted_sign: Sign,
    pub decay: Vec<(f64, f64)>,
    pub checks: Vec<Check>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }
}

/// Sign of a fitted value, treating anything below `zero_band` as zero.
fn fitted_sign(x: f64, zero_band: f64) -> Sign {
    if x.abs() <= zero_band {
        Sign::Zero
    } else if x < 0.0 {
        Sign::Negative
    } else {
        Sign::Positive
    }
}

/// Largest `|s|` over the sampled points, with and without Richardson.
pub fn curvature_sweep(
    data: &NumericMonopole<f64>,
    region: &SampleRegion,
    h: f64,
) -> Result<(f64, f64)> {
    let (mut plain, mut extrapolated) = (0.0f64, 0.0f64);
    for p in region.points::<f64>() {
        plain = plain.max(scalar_curvature_with(data, &p, h, false)?.abs());
        extrapolated = extrapolated.max(scalar_curvature_with(data, &p, h, true)?.abs());
    }
    Ok((plain, extrapolated))
}

/// Largest pointwise structure defect over the sampled points: `J^2 + 1`,
/// `J`-invariance of `g`, the closed form of `ω` and symmetry of `g`.
/// Returns the defect and the smallest eigenvalue of `g` seen.
pub fn structure_sweep(data: &NumericMonopole<f64>, region: &SampleRegion) -> Result<(f64, f64)> {
    let (mut defect, mut min_eig) = (0.0f64, f64::INFINITY);
    for p in region.points::<f64>() {
        let c = metric_at(data, &p)?.checks();
        defect = defect
            .max(c.j_squared)
            .max(c.j_invariance)
            .max(c.omega_formula)
            .max(c.symmetry);
        min_eig = min_eig.min(c.min_eigenvalue);
    }
    Ok((defect, min_eig))
}

/// Runs every check on `data` and collects the results.
pub fn verify(data: &MonopoleData, config: &VerifyConfig) -> Result<VerifyReport> {
    let tol = config.tolerances;
    if config.samples == 0 {
        return Err(Error::DegenerateSamples("need at least one sample".into()));
    }
    let exact = log_coeffs_from_levels(data)?;
    let (a, b) = (
        exact.a.clone().ok_or(Error::MissingChain)?,
        exact.b.clone().ok_or(Error::MissingChain)?,
    );
    let num = NumericMonopole::<f64>::from_data(data)?;
    let region = SampleRegion::new(config.r_min, config.r_max, config.samples, config.seed);
    let mut checks = Vec::new();

    checks.push(Check::at_most(
        "flat_model",
        flat_model_error::<f64>(&region)?,
        tol.flat_model,
    ));

    let (defect, min_eig) = structure_sweep(&num, &region)?;
    checks.push(Check::at_most("structure", defect, tol.structure));
    checks.push(Check {
        name: "positive_definite",
        value: min_eig,
        tolerance: "> 0".into(),
        passed: min_eig > 0.0,
    });

    let coarse = kahler_residual(&num, &region, config.kahler_step)?;
    checks.push(Check::at_most(
        "kahler_domega",
        coarse.max_domega,
        tol.kahler,
    ));
    checks.push(Check::at_most(
        "kahler_integrability",
        coarse.max_dintegrability,
        tol.kahler,
    ));
    // the order test needs truncation to dominate roundoff, so it runs at a
    // step ten times the default
    let h = 10.0 * config.kahler_step;
    let wide = kahler_residual(&num, &region, h)?;
    let half = kahler_residual(&num, &region, h / 2.0)?;
    let order = (wide.max_domega.max(wide.max_dintegrability)
        / half.max_domega.max(half.max_dintegrability))
    .log2();
    checks.push(Check::between(
        "kahler_order",
        order,
        tol.order_range.0,
        tol.order_range.1,
    ));

    let (plain, extrapolated) = curvature_sweep(&num, &region, config.curvature_step)?;
    checks.push(Check::at_most(
        "scalar_curvature",
        extrapolated,
        tol.curvature,
    ));
    checks.push(Check {
        name: "richardson_gain",
        value: extrapolated,
        tolerance: format!("<= {plain:e}"),
        passed: extrapolated <= plain,
    });

    let fit = fit_log_coeffs(
        &num,
        &geometric_radii::<f64>(config.fit_range.0, config.fit_range.1, config.fit_radii),
        &interior_angles::<f64>(config.fit_angles),
    )?;
    let exact_f = Coefficients {
        a: a.approx_f64(),
        b: b.approx_f64(),
        mu: exact.mu.approx_f64(),
    };
    let fitted = Coefficients {
        a: fit.a_fit,
        b: fit.b_fit,
        mu: fit.mu_fit(),
    };
    // a crepant chain has mu = 0 with a, b nonzero, so errors are measured
    // against the size of the pair
    let scale = exact_f.a.abs().max(exact_f.b.abs());
    let rel = |got: f64, want: f64| {
        if scale > 0.0 {
            (got - want).abs() / scale
        } else {
            (got - want).abs()
        }
    };
    checks.push(Check::at_most(
        "fit_a",
        rel(fitted.a, exact_f.a),
        tol.fit_relative,
    ));
    checks.push(Check::at_most(
        "fit_b",
        rel(fitted.b, exact_f.b),
        tol.fit_relative,
    ));
    checks.push(Check::at_most(
        "fit_mu",
        rel(fitted.mu, exact_f.mu),
        tol.fit_relative,
    ));
    let exact_sign = Sign::of(&exact.mu);
    let fsign = fitted_sign(fitted.mu, tol.zero_band * scale.max(1e-12));
    checks.push(Check {
        name: "fit_sign",
        value: fitted.mu,
        tolerance: format!("sign {exact_sign}"),
        passed: fsign == exact_sign,
    });

    let decay_rows = decay_series(&num, &config.decay_radii)?;
    let decay: Vec<(f64, f64)> = decay_rows.iter().map(|r| (r[0], r[1])).collect();
    let lo = tol.decay_ratio * (1.0 - tol.decay_band);
    let hi = tol.decay_ratio * (1.0 + tol.decay_band);
    let worst = decay
        .windows(2)
        .map(|w| w[1].1 / w[0].1)
        .fold(tol.decay_ratio, |acc, ratio| {
            if (ratio - tol.decay_ratio).abs() > (acc - tol.decay_ratio).abs() || !ratio.is_finite()
            {
                ratio
            } else {
                acc
            }
        });
    checks.push(Check::between("potential_decay", worst, lo, hi));
    let near = potential_residual(&num, config.decay_radii[0])?;
    let far = potential_residual(&num, 10.0 * config.decay_radii[0])?;
    checks.push(Check {
        name: "potential_monotone",
        value: far,
        tolerance: format!("< {near:e}"),
        passed: far < near,
    });

    Ok(VerifyReport {
        version: VERSION,
        config: config.clone(),
        exact: exact_f,
        exact_fractions: (a.to_string(), b.to_string(), exact.mu.to_string()),
        exact_sign,
        fitted,
        fitted_sign: fsign,
        decay,
        checks,
    })
}

/// `(r, residual)` CSV of the potential residual at doubling radii.
pub fn decay_csv(data: &MonopoleData, start: f64, count: usize) -> Result<String> {
    let num = NumericMonopole::<f64>::from_data(data)?;
    let radii: Vec<f64> = (0..count).map(|i| start * 2f64.powi(i as i32)).collect();
    Ok(metricnum::to_csv(
        &["r", "residual"],
        &decay_series(&num, &radii)?,
    ))
}

/// `(r, coeff_a, coeff_b)` CSV of the fit on decade windows.
pub fn fit_csv(data: &MonopoleData, starts: &[f64]) -> Result<String> {
    let num = NumericMonopole::<f64>::from_data(data)?;
    Ok(metricnum::to_csv(
        &["r", "coeff_a", "coeff_b"],
        &metricnum::fit_series(&num, starts)?,
    ))
}
