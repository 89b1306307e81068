//! Numerical evaluation of toric scalar-flat Kähler metrics built from
//! solutions of the linear system
//!
//! ```text
//! d v1/dy = d v2/dx,     x d v1/dx + x d v2/dy = v1
//! ```
//!
//! on the half-space `x > 0`. The solutions used here are finite sums of the
//! basic solutions attached to levels `y_j` and labels `(a_j, b_j)`:
//!
//! ```text
//! v1 = sum x/(2 R_j) (a_j, b_j),   v2 = sum (y - y_j)/(2 R_j) (a_j, b_j),
//! R_j = sqrt(x^2 + (y - y_j)^2),
//! ```
//!
//! where an infinite level `y_0` contributes nothing to `v1` and
//! `-(a_0, b_0)/2` to `v2`. With `D = <v1, v2>` (the determinant of the rows)
//! the metric is
//!
//! ```text
//! g = x D / (2 (x^2 + y^2)) ((dx^2 + dy^2)/x^2 + (<v1,dt>^2 + <v2,dt>^2)/D^2).
//! ```
//!
//! Everything is evaluated in polar coordinates `x = r^-2 sin 2θ`,
//! `y = r^-2 cos 2θ`, coordinate order `(r, θ, t1, t2)`. Derivatives of `v`
//! are closed form; derivatives of the tensors are finite differences.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::logmass::{Level, MonopoleData};
use crate::scalar::{Exact, Real};

type M4<R> = [[R; 4]; 4];

fn k<R: Real>(x: f64) -> R {
    R::of(x)
}

/// Smallest sampled angle; the largest is `π/2 - THETA_MARGIN`.
pub const THETA_MARGIN: f64 = 0.1;
/// Relative step for first-derivative residuals.
pub const KAHLER_STEP: f64 = 2e-5;
/// Relative step for curvature second differences.
pub const CURVATURE_STEP: f64 = 1.5e-2;
/// Relative step for the potential residual.
pub const POTENTIAL_STEP: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HalfSpacePoint<R> {
    pub x: R,
    pub y: R,
    pub t1: R,
    pub t2: R,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PolarPoint<R> {
    pub r: R,
    pub theta: R,
    pub t1: R,
    pub t2: R,
}

impl<R: Real> PolarPoint<R> {
    pub fn new(r: R, theta: R) -> Self {
        PolarPoint {
            r,
            theta,
            t1: R::zero(),
            t2: R::zero(),
        }
    }

    /// `(x, y)` of this point.
    pub fn xy(&self) -> (R, R) {
        let r2 = self.r * self.r;
        let two = self.theta + self.theta;
        (two.sin() / r2, two.cos() / r2)
    }
}

pub fn to_polar<R: Real>(p: &HalfSpacePoint<R>) -> Result<PolarPoint<R>> {
    if !(p.x > R::zero()) {
        return Err(Error::OutsideHalfSpace(p.x.as_f64()));
    }
    let rho = p.x.hypot(p.y);
    Ok(PolarPoint {
        r: R::one() / rho.sqrt(),
        theta: p.x.atan2(p.y) / k(2.0),
        t1: p.t1,
        t2: p.t2,
    })
}

pub fn from_polar<R: Real>(p: &PolarPoint<R>) -> HalfSpacePoint<R> {
    let (x, y) = p.xy();
    HalfSpacePoint {
        x,
        y,
        t1: p.t1,
        t2: p.t2,
    }
}

/// Floating-point copy of monopole data.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NumericMonopole<R> {
    /// `None` for an infinite level.
    levels: Vec<Option<R>>,
    pairs: Vec<(R, R)>,
    q: R,
    p: R,
}

impl<R: Real> NumericMonopole<R> {
    pub fn from_data<Q: Exact>(data: &MonopoleData<Q>) -> Result<Self> {
        let levels = data
            .levels()
            .iter()
            .map(|l| match l {
                Level::Infinite => None,
                Level::Finite(y) => Some(R::of(y.approx_f64())),
            })
            .collect();
        let pairs: Vec<(R, R)> = data
            .pairs()
            .iter()
            .map(|&(a, b)| (R::of(a as f64), R::of(b as f64)))
            .collect();
        let &(q, pm1) = data.pairs().last().expect("at least two labels");
        if q <= 0 {
            return Err(Error::BadChain(format!(
                "leading label q = {q} is not positive"
            )));
        }
        Ok(NumericMonopole {
            levels,
            pairs,
            q: R::of(q as f64),
            p: R::of((pm1 + 1) as f64),
        })
    }

    /// Flat space: labels `(-1,-1)`, `(1,-1)` at levels `inf`, `0`.
    pub fn flat() -> Self {
        Self::from_data(&MonopoleData::<crate::Rational>::flat()).expect("flat data")
    }

    /// The group order `q` at infinity.
    pub fn q(&self) -> R {
        self.q
    }

    pub fn p(&self) -> R {
        self.p
    }

    /// `(a, b)` of the ALE expansion, from `a (q,p) - b (0,1) = sum c_j (a_j,b_j)`
    /// over the levels other than the last.
    pub fn log_coefficients(&self) -> (R, R) {
        let n = self.levels.len();
        let (mut x, mut y) = (R::zero(), R::zero());
        for (lvl, &(aj, bj)) in self.levels[..n - 1].iter().zip(&self.pairs) {
            if let Some(yj) = lvl {
                x = x + aj / *yj;
                y = y + bj / *yj;
            }
        }
        let a = x / self.q;
        (a, self.p * a - y)
    }
}

/// `v1`, `v2`, their determinant and closed-form first derivatives.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FrameData<R> {
    pub v1: [R; 2],
    pub v2: [R; 2],
    pub det: R,
    pub dv1_dx: [R; 2],
    pub dv1_dy: [R; 2],
    pub dv2_dx: [R; 2],
    pub dv2_dy: [R; 2],
}

pub fn v_eval<R: Real>(data: &NumericMonopole<R>, x: R, y: R) -> FrameData<R> {
    let half: R = k(0.5);
    let z = [R::zero(); 2];
    let mut f = FrameData {
        v1: z,
        v2: z,
        det: R::zero(),
        dv1_dx: z,
        dv1_dy: z,
        dv2_dx: z,
        dv2_dy: z,
    };
    for (lvl, &(a, b)) in data.levels.iter().zip(&data.pairs) {
        let ab = [a, b];
        match lvl {
            None => {
                for i in 0..2 {
                    f.v2[i] = f.v2[i] - half * ab[i];
                }
            }
            Some(yj) => {
                let dy = y - *yj;
                let rr = x.hypot(dy);
                let r3 = rr * rr * rr;
                let s1 = half * x / rr;
                let s2 = half * dy / rr;
                let s1x = half * dy * dy / r3;
                let s1y = -half * x * dy / r3;
                let s2y = half * x * x / r3;
                for i in 0..2 {
                    f.v1[i] = f.v1[i] + s1 * ab[i];
                    f.v2[i] = f.v2[i] + s2 * ab[i];
                    f.dv1_dx[i] = f.dv1_dx[i] + s1x * ab[i];
                    f.dv1_dy[i] = f.dv1_dy[i] + s1y * ab[i];
                    f.dv2_dx[i] = f.dv2_dx[i] + s1y * ab[i];
                    f.dv2_dy[i] = f.dv2_dy[i] + s2y * ab[i];
                }
            }
        }
    }
    f.det = f.v1[0] * f.v2[1] - f.v1[1] * f.v2[0];
    f
}

/// Finite-difference residuals of the two monopole equations at `(x, y)`.
pub fn monopole_residual<R: Real>(data: &NumericMonopole<R>, x: R, y: R, h: R) -> (R, R) {
    let two: R = k(2.0);
    let at = |x, y| v_eval(data, x, y);
    let (xp, xm, yp, ym) = (at(x + h, y), at(x - h, y), at(x, y + h), at(x, y - h));
    let mut r1 = R::zero();
    let mut r2 = R::zero();
    let v1 = at(x, y).v1;
    for i in 0..2 {
        let d1x = (xp.v1[i] - xm.v1[i]) / (two * h);
        let d1y = (yp.v1[i] - ym.v1[i]) / (two * h);
        let d2x = (xp.v2[i] - xm.v2[i]) / (two * h);
        let d2y = (yp.v2[i] - ym.v2[i]) / (two * h);
        r1 = r1.max((d1y - d2x).abs());
        r2 = r2.max((x * d1x + x * d2y - v1[i]).abs());
    }
    (r1, r2)
}

/// Metric, Kähler form and complex structure at one point, in the basis
/// `(dr, dθ, dt1, dt2)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MetricSample<R> {
    pub point: PolarPoint<R>,
    pub g: M4<R>,
    /// `omega[i][j] = ω(∂_i, ∂_j) = g(∂_i, J ∂_j)`.
    pub omega: M4<R>,
    /// `j[i][l]`: `J dx^i = sum_l j[i][l] dx^l`, equivalently
    /// `J ∂_l = sum_i j[i][l] ∂_i`.
    pub j: M4<R>,
    pub frame: FrameData<R>,
}

fn matmul<R: Real>(a: &M4<R>, b: &M4<R>) -> M4<R> {
    let mut out = [[R::zero(); 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            for l in 0..4 {
                out[i][j] = out[i][j] + a[i][l] * b[l][j];
            }
        }
    }
    out
}

fn transpose<R: Real>(a: &M4<R>) -> M4<R> {
    let mut out = *a;
    for i in 0..4 {
        for j in 0..4 {
            out[i][j] = a[j][i];
        }
    }
    out
}

fn max_abs_diff<R: Real>(a: &M4<R>, b: &M4<R>) -> R {
    let mut m = R::zero();
    for i in 0..4 {
        for j in 0..4 {
            m = m.max((a[i][j] - b[i][j]).abs());
        }
    }
    m
}

fn max_abs<R: Real>(a: &M4<R>) -> R {
    max_abs_diff(a, &[[R::zero(); 4]; 4])
}

pub fn metric_at<R: Real>(data: &NumericMonopole<R>, p: &PolarPoint<R>) -> Result<MetricSample<R>> {
    if !(p.r > R::zero()) {
        return Err(Error::OutsideHalfSpace(p.r.as_f64()));
    }
    let (x, y) = p.xy();
    if !(x > R::zero()) {
        return Err(Error::OutsideHalfSpace(x.as_f64()));
    }
    let f = v_eval(data, x, y);
    let d = f.det;
    if !(d > R::zero()) {
        return Err(Error::DegenerateFrame(d.as_f64()));
    }
    let (s, c) = p.theta.sin_cos();
    let sc = s * c;
    let r = p.r;
    let zero = R::zero();

    // <v, dt> = v^1 dt2 - v^2 dt1 has components (-v^2, v^1) on (t1, t2)
    let xi = [[-f.v1[1], f.v1[0]], [-f.v2[1], f.v2[0]]];
    let tor = r * r * sc / d;
    let mut g = [[zero; 4]; 4];
    g[0][0] = d / sc;
    g[1][1] = r * r * d / sc;
    for a in 0..2 {
        for b in 0..2 {
            g[2 + a][2 + b] = tor * (xi[0][a] * xi[0][b] + xi[1][a] * xi[1][b]);
        }
    }

    let mut j = [[zero; 4]; 4];
    // J dr = rsc <v2,dt>/D, J dθ = -sc <v1,dt>/D, J dt = (v1 dr + r v2 dθ)/(rsc)
    for a in 0..2 {
        j[0][2 + a] = r * sc * xi[1][a] / d;
        j[1][2 + a] = -sc * xi[0][a] / d;
        j[2 + a][0] = f.v1[a] / (r * sc);
        j[2 + a][1] = f.v2[a] / sc;
    }
    let omega = matmul(&g, &j);
    Ok(MetricSample {
        point: *p,
        g,
        omega,
        j,
        frame: f,
    })
}

/// `ω = r dr ∧ <v2, dt> - r^2 dθ ∧ <v1, dt>`, written out.
pub fn omega_closed_form<R: Real>(frame: &FrameData<R>, r: R) -> M4<R> {
    let mut w = [[R::zero(); 4]; 4];
    let comps = [
        (0, 2, -r * frame.v2[1]),
        (0, 3, r * frame.v2[0]),
        (1, 2, r * r * frame.v1[1]),
        (1, 3, -r * r * frame.v1[0]),
    ];
    for (i, l, v) in comps {
        w[i][l] = v;
        w[l][i] = -v;
    }
    w
}

/// `dr^2 + r^2 dθ^2 + r^2 (s^2 dt1^2 + c^2 dt2^2)`.
pub fn flat_metric<R: Real>(p: &PolarPoint<R>) -> M4<R> {
    let (s, c) = p.theta.sin_cos();
    let r2 = p.r * p.r;
    let mut g = [[R::zero(); 4]; 4];
    g[0][0] = R::one();
    g[1][1] = r2;
    g[2][2] = r2 * s * s;
    g[3][3] = r2 * c * c;
    g
}

/// Residuals of the pointwise structure identities.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PointChecks<R> {
    /// `|J^2 + 1|`.
    pub j_squared: R,
    /// `|J^T g J - g| / |g|`.
    pub j_invariance: R,
    /// `|ω - ω_closed_form| / |ω|`.
    pub omega_formula: R,
    /// `|g - g^T|`.
    pub symmetry: R,
    pub min_eigenvalue: R,
}

impl<R: Real> MetricSample<R> {
    pub fn checks(&self) -> PointChecks<R> {
        let mut id = [[R::zero(); 4]; 4];
        for (i, row) in id.iter_mut().enumerate() {
            row[i] = -R::one();
        }
        let j2 = matmul(&self.j, &self.j);
        let jgj = matmul(&matmul(&transpose(&self.j), &self.g), &self.j);
        let closed = omega_closed_form(&self.frame, self.point.r);
        PointChecks {
            j_squared: max_abs_diff(&j2, &id),
            j_invariance: max_abs_diff(&jgj, &self.g) / max_abs(&self.g),
            omega_formula: max_abs_diff(&self.omega, &closed) / max_abs(&self.omega),
            symmetry: max_abs_diff(&self.g, &transpose(&self.g)),
            min_eigenvalue: symmetric_eigenvalues(&self.g)
                .into_iter()
                .fold(R::infinity(), R::min),
        }
    }
}

/// Eigenvalues of a symmetric 4×4 matrix by cyclic Jacobi rotations.
pub fn symmetric_eigenvalues<R: Real>(m: &M4<R>) -> [R; 4] {
    let mut a = *m;
    for _sweep in 0..50 {
        let mut off = R::zero();
        for i in 0..4 {
            for j in i + 1..4 {
                off = off + a[i][j] * a[i][j];
            }
        }
        if off <= R::min_positive_value() {
            break;
        }
        for p in 0..4 {
            for q in p + 1..4 {
                if a[p][q] == R::zero() {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (k::<R>(2.0) * a[p][q]);
                let t = theta.signum() / (theta.abs() + (theta * theta + R::one()).sqrt());
                let c = R::one() / (t * t + R::one()).sqrt();
                let s = t * c;
                for l in 0..4 {
                    let (alp, alq) = (a[l][p], a[l][q]);
                    a[l][p] = c * alp - s * alq;
                    a[l][q] = s * alp + c * alq;
                }
                for l in 0..4 {
                    let (apl, aql) = (a[p][l], a[q][l]);
                    a[p][l] = c * apl - s * aql;
                    a[q][l] = s * apl + c * aql;
                }
            }
        }
    }
    [a[0][0], a[1][1], a[2][2], a[3][3]]
}

/// Region of the `(r, θ)` quarter-plane sampled by the verification sweeps.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SampleRegion {
    pub r_min: f64,
    pub r_max: f64,
    pub theta_min: f64,
    pub theta_max: f64,
    pub samples: usize,
    pub seed: u64,
}

impl SampleRegion {
    pub fn new(r_min: f64, r_max: f64, samples: usize, seed: u64) -> Self {
        SampleRegion {
            r_min,
            r_max,
            theta_min: THETA_MARGIN,
            theta_max: std::f64::consts::FRAC_PI_2 - THETA_MARGIN,
            samples,
            seed,
        }
    }

    /// Seeded uniform samples; the same seed always gives the same points.
    pub fn points<R: Real>(&self) -> Vec<PolarPoint<R>> {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        (0..self.samples)
            .map(|_| {
                let r = rng.gen_range(self.r_min..=self.r_max);
                let th = rng.gen_range(self.theta_min..=self.theta_max);
                let t1 = rng.gen_range(0.0..std::f64::consts::TAU);
                let t2 = rng.gen_range(0.0..std::f64::consts::TAU);
                PolarPoint {
                    r: R::of(r),
                    theta: R::of(th),
                    t1: R::of(t1),
                    t2: R::of(t2),
                }
            })
            .collect()
    }

    fn check_step(&self, h: f64) -> Result<()> {
        let margin_ok = self.theta_min - 2.0 * h > 0.0
            && self.theta_max + 2.0 * h < std::f64::consts::FRAC_PI_2;
        if !(h > 0.0) || h >= 0.1 || !margin_ok || !(self.r_min > 0.0) {
            return Err(Error::StepTooLarge { h });
        }
        Ok(())
    }
}

/// Maximum relative finite-difference residuals over a region.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KahlerResidual {
    /// `dω`: `∂_r ω_{θ t} - ∂_θ ω_{r t}`.
    pub max_domega: f64,
    /// `d(J dt)`: `∂_r (J dt)_θ - ∂_θ (J dt)_r`.
    pub max_dintegrability: f64,
    pub samples: usize,
    pub step: f64,
}

/// Relative residuals at a single point, with central differences of step
/// `h r` in `r` and `h` in `θ`.
pub fn kahler_residual_at<R: Real>(
    data: &NumericMonopole<R>,
    p: &PolarPoint<R>,
    h: R,
) -> Result<(R, R)> {
    let two: R = k(2.0);
    let hr = h * p.r;
    let at = |dr: R, dth: R| metric_at(data, &PolarPoint::new(p.r + dr, p.theta + dth));
    let (rp, rm) = (at(hr, R::zero())?, at(-hr, R::zero())?);
    let (tp, tm) = (at(R::zero(), h)?, at(R::zero(), -h)?);
    let d_r = |m: fn(&MetricSample<R>) -> M4<R>, i: usize, l: usize| {
        (m(&rp)[i][l] - m(&rm)[i][l]) / (two * hr)
    };
    let d_t = |m: fn(&MetricSample<R>) -> M4<R>, i: usize, l: usize| {
        (m(&tp)[i][l] - m(&tm)[i][l]) / (two * h)
    };
    let om: fn(&MetricSample<R>) -> M4<R> = |s| s.omega;
    let jm: fn(&MetricSample<R>) -> M4<R> = |s| s.j;

    // each derivative is compared against the size of the entry it
    // differentiates over its length scale, so exact zeros stay finite
    let c = at(R::zero(), R::zero())?;
    let tiny = R::min_positive_value();
    let (mut dw, mut dw_scale) = (R::zero(), tiny);
    let (mut dj, mut dj_scale) = (R::zero(), tiny);
    for t in 2..4 {
        let a = d_r(om, 1, t);
        let b = d_t(om, 0, t);
        dw = dw.max((a - b).abs());
        dw_scale = dw_scale
            .max(a.abs() + b.abs())
            .max(c.omega[1][t].abs() / p.r + c.omega[0][t].abs());
        let a = d_r(jm, t, 1);
        let b = d_t(jm, t, 0);
        dj = dj.max((a - b).abs());
        dj_scale = dj_scale
            .max(a.abs() + b.abs())
            .max(c.j[t][1].abs() / p.r + c.j[t][0].abs());
    }
    Ok((dw / dw_scale, dj / dj_scale))
}

pub fn kahler_residual<R: Real>(
    data: &NumericMonopole<R>,
    region: &SampleRegion,
    h: f64,
) -> Result<KahlerResidual> {
    region.check_step(h)?;
    let (mut dw, mut dj) = (0.0f64, 0.0f64);
    for p in region.points::<R>() {
        let (a, b) = kahler_residual_at(data, &p, R::of(h))?;
        dw = dw.max(a.as_f64());
        dj = dj.max(b.as_f64());
    }
    Ok(KahlerResidual {
        max_domega: dw,
        max_dintegrability: dj,
        samples: region.samples,
        step: h,
    })
}

fn inverse4<R: Real>(m: &M4<R>) -> Result<M4<R>> {
    let mut a = *m;
    let mut inv = [[R::zero(); 4]; 4];
    for (i, row) in inv.iter_mut().enumerate() {
        row[i] = R::one();
    }
    for col in 0..4 {
        let piv = (col..4)
            .max_by(|&i, &j| a[i][col].abs().partial_cmp(&a[j][col].abs()).unwrap())
            .unwrap();
        if a[piv][col] == R::zero() {
            return Err(Error::DegenerateFrame(0.0));
        }
        a.swap(col, piv);
        inv.swap(col, piv);
        let d = a[col][col];
        for l in 0..4 {
            a[col][l] = a[col][l] / d;
            inv[col][l] = inv[col][l] / d;
        }
        for i in 0..4 {
            if i != col {
                let f = a[i][col];
                for l in 0..4 {
                    a[i][l] = a[i][l] - f * a[col][l];
                    inv[i][l] = inv[i][l] - f * inv[col][l];
                }
            }
        }
    }
    Ok(inv)
}

/// First and second `(r, θ)` derivatives of `g` at a point.
struct Jet<R> {
    g: M4<R>,
    dg: [M4<R>; 2],
    ddg: [[M4<R>; 2]; 2],
}

fn combine<R: Real>(terms: &[(R, &M4<R>)]) -> M4<R> {
    let mut out = [[R::zero(); 4]; 4];
    for (w, m) in terms {
        for i in 0..4 {
            for j in 0..4 {
                out[i][j] = out[i][j] + *w * m[i][j];
            }
        }
    }
    out
}

fn metric_jet<R: Real>(data: &NumericMonopole<R>, p: &PolarPoint<R>, h: R) -> Result<Jet<R>> {
    // sixth-order central stencils in both directions
    let hs = [h * p.r, h];
    let g_at = |a: R, b: R| -> Result<M4<R>> {
        Ok(metric_at(data, &PolarPoint::new(p.r + a, p.theta + b))?.g)
    };
    let shift = |e: usize, s: R| {
        if e == 0 {
            (s, R::zero())
        } else {
            (R::zero(), s)
        }
    };
    let g0 = g_at(R::zero(), R::zero())?;
    let w = |v: [f64; 7], den: f64| v.map(|x| k::<R>(x / den));
    let d1 = w([-1.0, 9.0, -45.0, 0.0, 45.0, -9.0, 1.0], 60.0);
    let d2 = w([2.0, -27.0, 270.0, -490.0, 270.0, -27.0, 2.0], 180.0);
    let offs: [R; 7] = [-3.0, -2.0, -1.0, 0.0, 1.0, 2.0, 3.0].map(k::<R>);
    let mut dg = [[[R::zero(); 4]; 4]; 2];
    let mut ddg = [[[[R::zero(); 4]; 4]; 2]; 2];
    for e in 0..2 {
        let mut samples = Vec::with_capacity(7);
        for (i, &o) in offs.iter().enumerate() {
            samples.push(if i == 3 {
                g0
            } else {
                let (a, b) = shift(e, o * hs[e]);
                g_at(a, b)?
            });
        }
        let first: Vec<(R, &M4<R>)> = (0..7).map(|i| (d1[i] / hs[e], &samples[i])).collect();
        let second: Vec<(R, &M4<R>)> = (0..7)
            .map(|i| (d2[i] / (hs[e] * hs[e]), &samples[i]))
            .collect();
        dg[e] = combine(&first);
        ddg[e][e] = combine(&second);
    }
    let (hr, ht) = (hs[0], hs[1]);
    let mut cross = Vec::with_capacity(36);
    for i in [0usize, 1, 2, 4, 5, 6] {
        for j in [0usize, 1, 2, 4, 5, 6] {
            cross.push((d1[i] * d1[j] / (hr * ht), g_at(offs[i] * hr, offs[j] * ht)?));
        }
    }
    let refs: Vec<(R, &M4<R>)> = cross.iter().map(|(w, m)| (*w, m)).collect();
    ddg[0][1] = combine(&refs);
    ddg[1][0] = ddg[0][1];
    Ok(Jet { g: g0, dg, ddg })
}

fn scalar_from_jet<R: Real>(jet: &Jet<R>) -> Result<R> {
    let gi = inverse4(&jet.g)?;
    let zero = R::zero();
    let half: R = k(0.5);
    let d = |e: usize| -> Option<&M4<R>> { (e < 2).then(|| &jet.dg[e]) };
    let dd = |e: usize, f: usize| -> Option<&M4<R>> { (e < 2 && f < 2).then(|| &jet.ddg[e][f]) };
    let dgv = |e: usize, i: usize, j: usize| d(e).map_or(zero, |m| m[i][j]);
    let ddgv = |e: usize, f: usize, i: usize, j: usize| dd(e, f).map_or(zero, |m| m[i][j]);

    // S_dbc = ∂_b g_dc + ∂_c g_db - ∂_d g_bc
    let s = |dd_: usize, b: usize, c: usize| dgv(b, dd_, c) + dgv(c, dd_, b) - dgv(dd_, b, c);
    let ds = |e: usize, dd_: usize, b: usize, c: usize| {
        ddgv(e, b, dd_, c) + ddgv(e, c, dd_, b) - ddgv(e, dd_, b, c)
    };
    // ∂_e g^{ad}
    let dgi = |e: usize, a: usize, dd_: usize| {
        let mut v = zero;
        if e < 2 {
            for f in 0..4 {
                for h in 0..4 {
                    v = v - gi[a][f] * jet.dg[e][f][h] * gi[h][dd_];
                }
            }
        }
        v
    };

    let mut gamma = [[[zero; 4]; 4]; 4];
    for a in 0..4 {
        for b in 0..4 {
            for c in 0..4 {
                let mut v = zero;
                for dd_ in 0..4 {
                    v = v + gi[a][dd_] * s(dd_, b, c);
                }
                gamma[a][b][c] = half * v;
            }
        }
    }
    // dgamma[e][a][b][c] = ∂_e Γ^a_bc, zero for torus directions
    let mut dgamma = [[[[zero; 4]; 4]; 4]; 2];
    for (e, slot) in dgamma.iter_mut().enumerate() {
        for a in 0..4 {
            for b in 0..4 {
                for c in 0..4 {
                    let mut v = zero;
                    for dd_ in 0..4 {
                        v = v + dgi(e, a, dd_) * s(dd_, b, c) + gi[a][dd_] * ds(e, dd_, b, c);
                    }
                    slot[a][b][c] = half * v;
                }
            }
        }
    }
    let dgam = |e: usize, a: usize, b: usize, c: usize| {
        if e < 2 {
            dgamma[e][a][b][c]
        } else {
            zero
        }
    };

    let mut scalar = zero;
    for b in 0..4 {
        for c in 0..4 {
            let mut ric = zero;
            for a in 0..4 {
                ric = ric + dgam(a, a, b, c) - dgam(c, a, a, b);
                for dd_ in 0..4 {
                    ric = ric + gamma[a][a][dd_] * gamma[dd_][b][c]
                        - gamma[a][c][dd_] * gamma[dd_][a][b];
                }
            }
            scalar = scalar + gi[b][c] * ric;
        }
    }
    Ok(scalar)
}

/// Scalar curvature from second differences of `g` with step `h r` in `r`
/// and `h` in `θ`, optionally Richardson-extrapolated from `h` and `h/2`.
pub fn scalar_curvature_with<R: Real>(
    data: &NumericMonopole<R>,
    p: &PolarPoint<R>,
    h: R,
    richardson: bool,
) -> Result<R> {
    let hf = h.as_f64();
    let th = p.theta.as_f64();
    if !(hf > 0.0)
        || hf >= 0.1
        || th - 3.0 * hf <= 0.0
        || th + 3.0 * hf >= std::f64::consts::FRAC_PI_2
    {
        return Err(Error::StepTooLarge { h: hf });
    }
    let coarse = scalar_from_jet(&metric_jet(data, p, h)?)?;
    if !richardson {
        return Ok(coarse);
    }
    let fine = scalar_from_jet(&metric_jet(data, p, h / k(2.0))?)?;
    Ok((k::<R>(64.0) * fine - coarse) / k(63.0))
}

pub fn scalar_curvature_at<R: Real>(data: &NumericMonopole<R>, p: &PolarPoint<R>) -> Result<R> {
    scalar_curvature_with(data, p, R::of(CURVATURE_STEP), true)
}

/// Least-squares solution of an overdetermined system by modified
/// Gram-Schmidt.
fn least_squares<R: Real>(cols: &[Vec<R>], rhs: &[R]) -> Result<Vec<R>> {
    let n = cols.len();
    let mut q: Vec<Vec<R>> = cols.to_vec();
    let mut rmat = vec![vec![R::zero(); n]; n];
    for j in 0..n {
        for i in 0..j {
            let dot = q[i]
                .iter()
                .zip(&q[j])
                .fold(R::zero(), |acc, (a, b)| acc + *a * *b);
            rmat[i][j] = dot;
            let qi = q[i].clone();
            for (v, u) in q[j].iter_mut().zip(&qi) {
                *v = *v - dot * *u;
            }
        }
        let norm = q[j].iter().fold(R::zero(), |acc, v| acc + *v * *v).sqrt();
        let scale = cols[j].iter().fold(R::zero(), |acc, v| acc.max(v.abs()));
        if !(norm > scale * k(1e-12)) {
            return Err(Error::DegenerateSamples(
                "columns are linearly dependent".into(),
            ));
        }
        rmat[j][j] = norm;
        for v in q[j].iter_mut() {
            *v = *v / norm;
        }
    }
    let qtb: Vec<R> = q
        .iter()
        .map(|qi| {
            qi.iter()
                .zip(rhs)
                .fold(R::zero(), |acc, (a, b)| acc + *a * *b)
        })
        .collect();
    let mut x = vec![R::zero(); n];
    for i in (0..n).rev() {
        let mut v = qtb[i];
        for j in i + 1..n {
            v = v - rmat[i][j] * x[j];
        }
        x[i] = v / rmat[i][i];
    }
    Ok(x)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ThetaFit<R> {
    pub theta: R,
    /// Coefficient of `r^-2` in `D/(q s c) - 1`.
    pub leading: R,
    pub next: R,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LogFit<R> {
    pub a_fit: R,
    pub b_fit: R,
    pub per_theta: Vec<ThetaFit<R>>,
}

impl<R: Real> LogFit<R> {
    pub fn mu_fit(&self) -> R {
        self.a_fit + self.b_fit
    }
}

/// Fits `r^2 (D/(q s c) - 1) = A + B r^-2 + C r^-4` at each angle, then
/// `A(θ) = a s^2 + b c^2` across angles.
pub fn fit_log_coeffs<R: Real>(
    data: &NumericMonopole<R>,
    r_samples: &[R],
    theta_samples: &[R],
) -> Result<LogFit<R>> {
    if r_samples.len() < 3 {
        return Err(Error::DegenerateSamples("need at least three radii".into()));
    }
    if r_samples.iter().any(|r| !(*r > R::zero())) {
        return Err(Error::DegenerateSamples("radii must be positive".into()));
    }
    let r0 = r_samples.iter().copied().fold(R::infinity(), R::min);
    let mut per_theta = Vec::with_capacity(theta_samples.len());
    for &th in theta_samples {
        let (s, c) = th.sin_cos();
        if !(s > R::zero() && c > R::zero()) {
            return Err(Error::DegenerateSamples(format!(
                "angle {} is not interior",
                th.as_f64()
            )));
        }
        // basis in u = (r0/r)^2 keeps the columns comparable
        let mut cols = vec![Vec::new(), Vec::new(), Vec::new()];
        let mut rhs = Vec::new();
        for &r in r_samples {
            let (x, y) = PolarPoint::new(r, th).xy();
            let f = v_eval(data, x, y);
            let u = (r0 / r) * (r0 / r);
            cols[0].push(R::one());
            cols[1].push(u);
            cols[2].push(u * u);
            rhs.push(r * r * (f.det / (data.q * s * c) - R::one()));
        }
        let sol = least_squares(&cols, &rhs)?;
        per_theta.push(ThetaFit {
            theta: th,
            leading: sol[0],
            next: sol[1] * r0 * r0,
        });
    }
    let cols = vec![
        per_theta
            .iter()
            .map(|t| t.theta.sin().powi(2))
            .collect::<Vec<_>>(),
        per_theta
            .iter()
            .map(|t| t.theta.cos().powi(2))
            .collect::<Vec<_>>(),
    ];
    let rhs: Vec<R> = per_theta.iter().map(|t| t.leading).collect();
    let ab = least_squares(&cols, &rhs)
        .map_err(|_| Error::DegenerateSamples("need two distinct interior angles".into()))?;
    Ok(LogFit {
        a_fit: ab[0],
        b_fit: ab[1],
        per_theta,
    })
}

/// `n` radii spaced geometrically over `[lo, hi]`.
pub fn geometric_radii<R: Real>(lo: f64, hi: f64, n: usize) -> Vec<R> {
    let n = n.max(2);
    let ratio = (hi / lo).ln() / (n - 1) as f64;
    (0..n)
        .map(|i| R::of(lo * (ratio * i as f64).exp()))
        .collect()
}

/// `n` angles spaced evenly over the interior sampling band.
pub fn interior_angles<R: Real>(n: usize) -> Vec<R> {
    let n = n.max(2);
    let (lo, hi) = (THETA_MARGIN, std::f64::consts::FRAC_PI_2 - THETA_MARGIN);
    (0..n)
        .map(|i| R::of(lo + (hi - lo) * i as f64 / (n - 1) as f64))
        .collect()
}

/// `J df` for `f = q (r^2/4 + (a+b)/2 log r + (a-b)/2 c^2)`; only the `dt`
/// components are nonzero.
fn jdf<R: Real>(data: &NumericMonopole<R>, ab: (R, R), r: R, th: R) -> Result<[R; 2]> {
    let half: R = k(0.5);
    let (a, b) = ab;
    let (s, c) = th.sin_cos();
    let f_r = data.q * (half * r + half * (a + b) / r);
    // f/q = r^2/4 + (a+b)/2 log r + (a-b)/4 c^2; the c^2 coefficient is
    // what makes the dθ∧(dφ-dψ) terms cancel
    let f_t = -half * data.q * (a - b) * s * c;
    let m = metric_at(data, &PolarPoint::new(r, th))?;
    Ok([
        f_r * m.j[0][2] + f_t * m.j[1][2],
        f_r * m.j[0][3] + f_t * m.j[1][3],
    ])
}

/// Fourth-order central difference of a vector-valued function.
fn d5<R: Real, F: Fn(R) -> Result<[R; 2]>>(f: F, x: R, h: R) -> Result<[R; 2]> {
    let (p2, p1, m1, m2) = (f(x + h + h)?, f(x + h)?, f(x - h)?, f(x - h - h)?);
    let den = k::<R>(12.0) * h;
    let eight: R = k(8.0);
    Ok([
        (-p2[0] + eight * p1[0] - eight * m1[0] + m2[0]) / den,
        (-p2[1] + eight * p1[1] - eight * m1[1] + m2[1]) / den,
    ])
}

/// `|ω - d J df|` at one point, in an orthonormal-scaled norm:
/// `max(|Δ_{r t}| / r, |Δ_{θ t}| / r^2)`.
pub fn potential_residual_at<R: Real>(data: &NumericMonopole<R>, r: R, th: R) -> Result<R> {
    let ab = data.log_coefficients();
    let h: R = k(POTENTIAL_STEP);
    let m = metric_at(data, &PolarPoint::new(r, th))?;
    let d_r = d5(|rr| jdf(data, ab, rr, th), r, h * r)?;
    let d_t = d5(|tt| jdf(data, ab, r, tt), th, h)?;
    let mut out = R::zero();
    for t in 0..2 {
        out = out.max((m.omega[0][2 + t] - d_r[t]).abs() / r);
        out = out.max((m.omega[1][2 + t] - d_t[t]).abs() / (r * r));
    }
    Ok(out)
}

/// Maximum of [`potential_residual_at`] over the interior angles.
pub fn potential_residual<R: Real>(data: &NumericMonopole<R>, r: R) -> Result<R> {
    let mut out = R::zero();
    for th in interior_angles::<R>(9) {
        out = out.max(potential_residual_at(data, r, th)?);
    }
    Ok(out)
}

/// Largest `|g - g_flat|` of the flat data over a seeded sample.
pub fn flat_model_error<R: Real>(region: &SampleRegion) -> Result<R> {
    let flat = NumericMonopole::<R>::flat();
    let mut err = R::zero();
    for p in region.points::<R>() {
        let m = metric_at(&flat, &p)?;
        err = err.max(max_abs_diff(&m.g, &flat_metric(&p)));
    }
    Ok(err)
}

/// Renders rows of numbers as CSV under the given header.
pub fn to_csv(header: &[&str], rows: &[Vec<f64>]) -> String {
    let mut out = header.join(",");
    out.push('\n');
    for row in rows {
        let cells: Vec<String> = row.iter().map(|v| format!("{v:e}")).collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}

/// `(r, residual)` rows of the potential residual.
pub fn decay_series<R: Real>(data: &NumericMonopole<R>, radii: &[R]) -> Result<Vec<Vec<f64>>> {
    radii
        .iter()
        .map(|&r| Ok(vec![r.as_f64(), potential_residual(data, r)?.as_f64()]))
        .collect()
}

/// `(r, coeff_a, coeff_b)` rows: the fit repeated on windows of radii
/// starting at each listed radius.
pub fn fit_series<R: Real>(data: &NumericMonopole<R>, starts: &[R]) -> Result<Vec<Vec<f64>>> {
    let angles = interior_angles::<R>(7);
    starts
        .iter()
        .map(|&r| {
            let lo = r.as_f64();
            let fit = fit_log_coeffs(data, &geometric_radii::<R>(lo, 10.0 * lo, 8), &angles)?;
            Ok(vec![lo, fit.a_fit.as_f64(), fit.b_fit.as_f64()])
        })
        .collect()
}

/// True if `x` is finite and its magnitude at most `tol`.
pub fn within<R: Real>(x: R, tol: f64) -> bool {
    x.is_finite() && x.abs().as_f64() <= tol
}

impl<R: Real> Default for NumericMonopole<R> {
    fn default() -> Self {
        Self::flat()
    }
}

impl<R: Real> NumericMonopole<R> {
    /// `true` if `D > 0` at every sampled point of the region.
    pub fn positive_on(&self, region: &SampleRegion) -> bool {
        region.points::<R>().iter().all(|p| {
            let (x, y) = p.xy();
            v_eval(self, x, y).det > R::zero()
        })
    }
}
