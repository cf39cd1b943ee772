//! Adaptive Gauss-Kronrod integration over `[0, ∞)`, `[0, ∞)²` and finite
//! intervals.
//!
//! Semi-infinite integrals are mapped onto `[0, 1)` with the rational
//! substitution `u = t / (1 - t)` and then integrated by global adaptive
//! bisection with the 7/15-point Gauss-Kronrod pair. The panel with the
//! largest error estimate is split until the summed estimate drops below
//! `max(abs_tol, rel_tol * |value|)` or the subdivision budget runs out.
//!
//! Integrands are never evaluated at `u = 0`: the abscissae are interior to
//! every panel and the mapped argument is additionally floored at
//! [`ORIGIN_FLOOR`], so integrands with a removable singularity at the origin
//! can be passed as written.

use std::fmt;

use thiserror::Error;

/// Smallest argument at which a semi-infinite integrand is evaluated.
pub const ORIGIN_FLOOR: f64 = 1e-12;

// Kronrod abscissae on [-1, 1] (non-negative half, descending). Odd entries
// are the 7-point Gauss nodes.
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.000_000_000_000_000_000_000_000_000_000_000,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];

const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

/// Tolerances and budget for one adaptive integration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadConfig {
    pub rel_tol: f64,
    pub abs_tol: f64,
    /// Maximum number of panel bisections.
    pub max_subdivisions: usize,
    /// Integrand magnitudes below this are treated as exact zeros, so an
    /// underflowed tail never meets an overflowed Jacobian.
    pub tail_cut_threshold: f64,
}

impl Default for QuadConfig {
    fn default() -> Self {
        Self {
            rel_tol: 1e-10,
            abs_tol: 1e-12,
            max_subdivisions: 200,
            tail_cut_threshold: 1e-300,
        }
    }
}

impl QuadConfig {
    pub fn new(rel_tol: f64, abs_tol: f64) -> Result<Self, QuadError> {
        let cfg = Self {
            rel_tol,
            abs_tol,
            ..Self::default()
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn with_max_subdivisions(mut self, max_subdivisions: usize) -> Self {
        self.max_subdivisions = max_subdivisions;
        self
    }

    pub fn validate(&self) -> Result<(), QuadError> {
        if !(self.rel_tol > 0.0) || !(self.abs_tol > 0.0) || self.max_subdivisions < 1 {
            return Err(QuadError::InvalidConfig(format!(
                "rel_tol={}, abs_tol={}, max_subdivisions={}",
                self.rel_tol, self.abs_tol, self.max_subdivisions
            )));
        }
        Ok(())
    }

    /// Same budget with both tolerances divided by `factor`.
    pub fn tightened(&self, factor: f64) -> Self {
        Self {
            rel_tol: self.rel_tol / factor,
            abs_tol: self.abs_tol / factor,
            ..*self
        }
    }

    /// Acceptable absolute error for an integral of the given magnitude.
    pub fn tolerance(&self, value: f64) -> f64 {
        self.abs_tol.max(self.rel_tol * value.abs())
    }
}

/// Outcome of an adaptive integration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult {
    pub value: f64,
    pub error_estimate: f64,
    pub subdivisions_used: usize,
    /// Total integrand evaluations, including those of inner integrals.
    pub evaluations: usize,
    pub converged: bool,
}

/// Which integral of an iterated pair raised an error.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    Single,
    Outer,
    Inner,
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Axis::Single => f.write_str("1d"),
            Axis::Outer => f.write_str("outer"),
            Axis::Inner => f.write_str("inner"),
        }
    }
}

#[derive(Debug, Clone, Error, PartialEq)]
pub enum QuadError {
    #[error("invalid quadrature configuration: {0}")]
    InvalidConfig(String),
    #[error(
        "{axis} integral did not converge: value {} with error estimate {:e} after {} subdivisions",
        best.value, best.error_estimate, best.subdivisions_used
    )]
    NonConvergence { axis: Axis, best: QuadResult },
    #[error("{axis} integrand is not finite at {at:e}")]
    NonFiniteIntegrand { axis: Axis, at: f64 },
}

impl QuadError {
    fn on_axis(self, new_axis: Axis) -> Self {
        match self {
            QuadError::NonConvergence { best, .. } => QuadError::NonConvergence {
                axis: new_axis,
                best,
            },
            QuadError::NonFiniteIntegrand { at, .. } => QuadError::NonFiniteIntegrand {
                axis: new_axis,
                at,
            },
            other => other,
        }
    }
}

/// A node evaluation: the integrand value (already multiplied by any
/// Jacobian) and a non-negative side quantity integrated with the same
/// weights but excluded from error control.
#[derive(Clone, Copy)]
struct Sample {
    value: f64,
    side: f64,
}

#[derive(Clone, Copy)]
struct Panel {
    segment: usize,
    a: f64,
    b: f64,
    value: f64,
    error: f64,
    side: f64,
    frozen: bool,
}

fn rescale_error(err: f64, res_abs: f64, res_asc: f64) -> f64 {
    let mut err = err.abs();
    if res_asc != 0.0 && err != 0.0 {
        err = res_asc * (200.0 * err / res_asc).powf(1.5).min(1.0);
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(50.0 * f64::EPSILON * res_abs);
    }
    err
}

fn gauss_kronrod_15<F>(
    f: &mut F,
    segment: usize,
    a: f64,
    b: f64,
    evals: &mut usize,
) -> Result<Panel, QuadError>
where
    F: FnMut(usize, f64) -> Result<Sample, QuadError>,
{
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);

    let fc = f(segment, center)?;
    let mut res_k = fc.value * WGK[7];
    let mut res_g = fc.value * WG[3];
    let mut res_abs = res_k.abs();
    let mut side = fc.side * WGK[7];
    let mut f1 = [0.0; 7];
    let mut f2 = [0.0; 7];

    for j in 0..7 {
        let dx = half * XGK[j];
        let lo = f(segment, center - dx)?;
        let hi = f(segment, center + dx)?;
        f1[j] = lo.value;
        f2[j] = hi.value;
        let pair = lo.value + hi.value;
        res_k += WGK[j] * pair;
        res_abs += WGK[j] * (lo.value.abs() + hi.value.abs());
        side += WGK[j] * (lo.side + hi.side);
        if j % 2 == 1 {
            res_g += WG[j / 2] * pair;
        }
    }
    *evals += 15;

    let mean = 0.5 * res_k;
    let mut res_asc = WGK[7] * (fc.value - mean).abs();
    for j in 0..7 {
        res_asc += WGK[j] * ((f1[j] - mean).abs() + (f2[j] - mean).abs());
    }

    let scale = half.abs();
    let value = res_k * half;
    let error = rescale_error((res_k - res_g) * half, res_abs * scale, res_asc * scale);
    let width = (b - a).abs();
    let frozen =
        width <= 8.0 * f64::EPSILON * a.abs().max(b.abs()) || width < 1e3 * f64::MIN_POSITIVE;

    Ok(Panel {
        segment,
        a,
        b,
        value,
        error,
        side: side * scale,
        frozen,
    })
}

/// Global adaptive bisection over a union of segments. The integrand
/// receives the segment index and the local coordinate.
fn adaptive<F>(
    mut f: F,
    segments: &[(f64, f64)],
    cfg: &QuadConfig,
    axis: Axis,
) -> Result<QuadResult, QuadError>
where
    F: FnMut(usize, f64) -> Result<Sample, QuadError>,
{
    cfg.validate()?;
    let mut evaluations = 0;
    let mut panels = Vec::with_capacity(segments.len() + 2 * cfg.max_subdivisions.min(4096));
    for (k, &(a, b)) in segments.iter().enumerate() {
        panels.push(gauss_kronrod_15(&mut f, k, a, b, &mut evaluations)?);
    }
    let mut subdivisions = 0;

    loop {
        let value: f64 = panels.iter().map(|p| p.value).sum();
        let error: f64 = panels.iter().map(|p| p.error + p.side).sum();
        let done = error <= cfg.tolerance(value);

        let worst = panels
            .iter()
            .enumerate()
            .filter(|(_, p)| !p.frozen)
            .max_by(|(_, x), (_, y)| x.error.total_cmp(&y.error))
            .map(|(i, _)| i);

        let Some(i) = worst.filter(|_| !done && subdivisions < cfg.max_subdivisions) else {
            let result = QuadResult {
                value,
                error_estimate: error,
                subdivisions_used: subdivisions,
                evaluations,
                converged: done,
            };
            return if done {
                Ok(result)
            } else {
                Err(QuadError::NonConvergence { axis, best: result })
            };
        };

        let Panel { segment, a, b, .. } = panels[i];
        let mid = 0.5 * (a + b);
        let left = gauss_kronrod_15(&mut f, segment, a, mid, &mut evaluations)?;
        let right = gauss_kronrod_15(&mut f, segment, mid, b, &mut evaluations)?;
        panels[i] = left;
        panels.push(right);
        subdivisions += 1;
    }
}

fn checked(value: f64, at: f64, axis: Axis) -> Result<f64, QuadError> {
    if value.is_finite() {
        Ok(value)
    } else {
        Err(QuadError::NonFiniteIntegrand { axis, at })
    }
}

// The map u = t/(1-t) is split at t = 1/2. On the upper half the complement
// r = 1 - t is the integration coordinate, so the approach to u = ∞ keeps
// full floating-point resolution.
const SEMI_INFINITE_SEGMENTS: [(f64, f64); 2] = [(0.0, 0.5), (0.0, 0.5)];

fn semi_infinite_sample<F>(
    f: &mut F,
    segment: usize,
    z: f64,
    cfg: &QuadConfig,
    axis: Axis,
) -> Result<Sample, QuadError>
where
    F: FnMut(f64) -> Result<(f64, f64), QuadError>,
{
    let (u, rest) = if segment == 0 {
        ((z / (1.0 - z)).max(ORIGIN_FLOOR), 1.0 - z)
    } else {
        ((1.0 - z) / z, z)
    };
    if !(rest > 0.0) || !u.is_finite() {
        return Ok(Sample { value: 0.0, side: 0.0 });
    }
    let (fu, side) = f(u)?;
    let fu = checked(fu, u, axis)?;
    if fu.abs() < cfg.tail_cut_threshold && side < cfg.tail_cut_threshold {
        return Ok(Sample { value: 0.0, side: 0.0 });
    }
    let value = checked(fu / rest / rest, u, axis)?;
    Ok(Sample {
        value,
        side: side / rest / rest,
    })
}

fn semi_infinite_with_side<F>(mut f: F, cfg: &QuadConfig, axis: Axis) -> Result<QuadResult, QuadError>
where
    F: FnMut(f64) -> Result<(f64, f64), QuadError>,
{
    adaptive(
        |segment, z| semi_infinite_sample(&mut f, segment, z, cfg, axis),
        &SEMI_INFINITE_SEGMENTS,
        cfg,
        axis,
    )
}

/// `∫₀^∞ f(u) du` for integrands that are finite on `(0, ∞)`, have a finite
/// limit at `0⁺` and decay fast enough at infinity.
pub fn integrate_semi_infinite<F>(f: F, cfg: &QuadConfig) -> Result<QuadResult, QuadError>
where
    F: Fn(f64) -> f64,
{
    semi_infinite_with_side(|u| Ok((f(u), 0.0)), cfg, Axis::Single)
}

/// `∫₀^∞ ∫₀^∞ f(u, v) dv du` as an iterated integral. The inner integral
/// (over `v`) runs with tolerances ten times tighter than `cfg`, its absolute
/// tolerance further scaled by the outer Jacobian, and its error estimates
/// are integrated alongside the outer value and added to the reported error.
pub fn integrate_semi_infinite_2d<F>(f: F, cfg: &QuadConfig) -> Result<QuadResult, QuadError>
where
    F: Fn(f64, f64) -> f64,
{
    let inner_cfg = cfg.tightened(10.0);
    let mut inner_evals = 0;
    let outer = semi_infinite_with_side(
        |u| {
            // the outer map multiplies inner errors by (1+u)²
            let local = QuadConfig {
                abs_tol: inner_cfg.abs_tol / ((1.0 + u) * (1.0 + u)),
                ..inner_cfg
            };
            let inner = integrate_semi_infinite(|v| f(u, v), &local).map_err(|e| e.on_axis(Axis::Inner))?;
            inner_evals += inner.evaluations;
            Ok((inner.value, inner.error_estimate))
        },
        cfg,
        Axis::Outer,
    )
    .map_err(|e| match e {
        QuadError::NonConvergence { axis, best } => QuadError::NonConvergence {
            axis,
            best: QuadResult {
                evaluations: inner_evals,
                ..best
            },
        },
        other => other,
    })?;
    Ok(QuadResult {
        evaluations: inner_evals,
        ..outer
    })
}

/// `∫ₐᵇ f(x) dx` on a finite interval; the endpoints themselves are never
/// evaluated.
pub fn integrate_interval<F>(f: F, a: f64, b: f64, cfg: &QuadConfig) -> Result<QuadResult, QuadError>
where
    F: Fn(f64) -> f64,
{
    adaptive(
        |_, x| {
            let value = checked(f(x), x, Axis::Single)?;
            Ok(Sample { value, side: 0.0 })
        },
        &[(a, b)],
        cfg,
        Axis::Single,
    )
}
