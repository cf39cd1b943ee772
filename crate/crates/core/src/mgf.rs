//! Positive random variables described by their moment generating functions.
//!
//! An [`MgfSpec`] stores the cumulant function `k(t) = ln E{e^{tX}}` together
//! with its first two derivatives. The MGF and its derivatives follow as
//! `m = e^k`, `m' = m k'`, `m'' = m (k'' + k'²)`; products of MGFs become sums
//! of cumulants and i.i.d. powers become multiples, which keeps `M(t)^n`
//! finite where the naive power would under- or overflow.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Cumulant function value and derivatives at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Cumulant {
    pub k: f64,
    pub k1: f64,
    pub k2: f64,
}

impl Cumulant {
    fn outside_domain() -> Self {
        Self {
            k: f64::INFINITY,
            k1: f64::INFINITY,
            k2: f64::INFINITY,
        }
    }
}

type CumulantFn = dyn Fn(f64) -> Cumulant + Send + Sync;

/// The MGF `t ↦ E{e^{tX}}` of a nonnegative random variable.
///
/// Every integral in this crate assumes `E{X} < ∞` and that expectation
/// and integration may be interchanged; neither is checked.
#[derive(Clone)]
pub struct MgfSpec {
    cumulant: Arc<CumulantFn>,
    domain_upper: f64,
    label: String,
}

impl fmt::Debug for MgfSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("MgfSpec")
            .field("label", &self.label)
            .field("domain_upper", &self.domain_upper)
            .finish()
    }
}

impl MgfSpec {
    /// Build from a cumulant function `t ↦ (ln m, (ln m)', (ln m)'')` valid
    /// for `t < domain_upper`. The function must return `k(0) = 0`.
    pub fn from_cumulant<F>(label: impl Into<String>, domain_upper: f64, f: F) -> Self
    where
        F: Fn(f64) -> Cumulant + Send + Sync + 'static,
    {
        Self {
            cumulant: Arc::new(f),
            domain_upper,
            label: label.into(),
        }
    }

    /// Build from the MGF and its first two derivatives directly.
    pub fn from_mgf<M, M1, M2>(label: impl Into<String>, domain_upper: f64, m: M, m1: M1, m2: M2) -> Self
    where
        M: Fn(f64) -> f64 + Send + Sync + 'static,
        M1: Fn(f64) -> f64 + Send + Sync + 'static,
        M2: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        Self::from_cumulant(label, domain_upper, move |t| {
            let v = m(t);
            let k1 = m1(t) / v;
            Cumulant {
                k: if t == 0.0 { 0.0 } else { v.ln() },
                k1,
                k2: m2(t) / v - k1 * k1,
            }
        })
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// Supremum of the `t` for which the MGF is finite.
    pub fn domain_upper(&self) -> f64 {
        self.domain_upper
    }

    pub fn cumulant(&self, t: f64) -> Cumulant {
        if t == 0.0 {
            let c = (self.cumulant)(0.0);
            return Cumulant { k: 0.0, ..c };
        }
        if t >= self.domain_upper {
            return Cumulant::outside_domain();
        }
        (self.cumulant)(t)
    }

    /// `ln m(t)`.
    pub fn ln_m(&self, t: f64) -> f64 {
        self.cumulant(t).k
    }

    pub fn m(&self, t: f64) -> f64 {
        self.ln_m(t).exp()
    }

    pub fn m1(&self, t: f64) -> f64 {
        let c = self.cumulant(t);
        c.k.exp() * c.k1
    }

    pub fn m2(&self, t: f64) -> f64 {
        let c = self.cumulant(t);
        c.k.exp() * (c.k2 + c.k1 * c.k1)
    }

    pub fn mean(&self) -> f64 {
        self.cumulant(0.0).k1
    }

    /// MGF of `cX`.
    pub fn scaled(&self, c: f64) -> MgfSpec {
        let inner = self.clone();
        let domain_upper = if c > 0.0 {
            self.domain_upper / c
        } else {
            f64::INFINITY
        };
        MgfSpec::from_cumulant(format!("{}*{}", c, self.label), domain_upper, move |t| {
            let v = inner.cumulant(c * t);
            Cumulant {
                k: v.k,
                k1: c * v.k1,
                k2: c * c * v.k2,
            }
        })
    }

    /// MGF of the sum of `n` independent copies.
    pub fn iid_sum(&self, n: u32) -> MgfSpec {
        let inner = self.clone();
        let nf = n as f64;
        MgfSpec::from_cumulant(format!("{}x{}", n, self.label), self.domain_upper, move |t| {
            let v = inner.cumulant(t);
            Cumulant {
                k: nf * v.k,
                k1: nf * v.k1,
                k2: nf * v.k2,
            }
        })
    }

    /// `k(−u−v) − k(−u) − k(−v)` for `u, v ≥ 0`.
    ///
    /// The plain difference loses relative accuracy like `ε/min(u, v)`, so
    /// when the smaller argument is small on the scale of `1/E{X}` the
    /// difference is taken as `∫₀^a [k'(−w) − k'(−w−b)] dw`, or as
    /// `∬ k''(−x−y)` when both are small, with 3-point Gauss-Legendre rules.
    pub fn cumulant_cross(&self, u: f64, v: f64) -> f64 {
        let (a, b) = if u <= v { (u, v) } else { (v, u) };
        if a == 0.0 {
            return 0.0;
        }
        let scale = self.mean().abs();
        if a * scale >= CROSS_SPLIT || !scale.is_finite() {
            return self.ln_m(-a - b) - self.ln_m(-a) - self.ln_m(-b);
        }
        if b * scale >= CROSS_SPLIT {
            let sum: f64 = GL3
                .iter()
                .map(|&(x, w)| {
                    let t = 0.5 * a * (1.0 + x);
                    w * (self.cumulant(-t).k1 - self.cumulant(-t - b).k1)
                })
                .sum();
            return 0.5 * a * sum;
        }
        let mut sum = 0.0;
        for &(x, wx) in &GL3 {
            for &(y, wy) in &GL3 {
                let s = 0.5 * a * (1.0 + x) + 0.5 * b * (1.0 + y);
                sum += wx * wy * self.cumulant(-s).k2;
            }
        }
        0.25 * a * b * sum
    }

    /// `m(−u−v)^n − m(−u)^n m(−v)^n` for `u, v ≥ 0`, evaluated as
    /// `e^{n(k(−u)+k(−v))} expm1(n·cross)` so the difference keeps its
    /// relative accuracy when both terms are close.
    pub fn covariance_kernel(&self, u: f64, v: f64, n: u32) -> f64 {
        let nf = n as f64;
        let lead = nf * (self.ln_m(-u) + self.ln_m(-v));
        if lead == f64::NEG_INFINITY {
            return 0.0;
        }
        lead.exp() * (nf * self.cumulant_cross(u, v)).exp_m1()
    }
}

const CROSS_SPLIT: f64 = 1e-3;

const GL3: [(f64, f64); 3] = [
    (-0.774_596_669_241_483_4, 5.0 / 9.0),
    (0.0, 8.0 / 9.0),
    (0.774_596_669_241_483_4, 5.0 / 9.0),
];

/// `X ≡ c`.
pub fn deterministic_mgf(c: f64) -> MgfSpec {
    MgfSpec::from_cumulant(format!("const({c})"), f64::INFINITY, move |t| Cumulant {
        k: c * t,
        k1: c,
        k2: 0.0,
    })
}

fn exponential_with_mean(label: String, theta: f64) -> MgfSpec {
    MgfSpec::from_cumulant(label, 1.0 / theta, move |t| {
        let d = 1.0 - t * theta;
        Cumulant {
            k: -(-t * theta).ln_1p(),
            k1: theta / d,
            k2: theta * theta / (d * d),
        }
    })
}

/// Exponential distribution with the given rate.
pub fn exponential_mgf(rate: f64) -> Result<MgfSpec> {
    if !(rate > 0.0) || !rate.is_finite() {
        return Err(Error::domain("exponential_mgf", format!("rate must be positive, got {rate}")));
    }
    Ok(exponential_with_mean(format!("exp({rate})"), 1.0 / rate))
}

/// Uniform distribution on `[0, 1]`, `m(t) = (e^t − 1)/t`.
pub fn uniform01_mgf() -> MgfSpec {
    MgfSpec::from_cumulant("uniform(0,1)", f64::INFINITY, |t| {
        if t.abs() < 0.2 {
            // t/2 + ln(sinh x / x) with x = t/2, Bernoulli series
            let x = 0.5 * t;
            let x2 = x * x;
            let l = x2 * (1.0 / 6.0 + x2 * (-1.0 / 180.0 + x2 * (1.0 / 2835.0 + x2 * (-1.0 / 37800.0 + x2 / 467_775.0))));
            let l1 = x * (1.0 / 3.0 + x2 * (-1.0 / 45.0 + x2 * (2.0 / 945.0 + x2 * (-1.0 / 4725.0 + x2 * 2.0 / 93555.0))));
            let l2 = 1.0 / 3.0 + x2 * (-1.0 / 15.0 + x2 * (2.0 / 189.0 + x2 * (-1.0 / 675.0 + x2 * 2.0 / 10395.0)));
            return Cumulant {
                k: x + l,
                k1: 0.5 + 0.5 * l1,
                k2: 0.25 * l2,
            };
        }
        let k = if t < 0.0 {
            (-t.exp_m1()).ln() - (-t).ln()
        } else {
            t + (-(-t).exp_m1()).ln() - t.ln()
        };
        let sh = (0.5 * t).sinh();
        Cumulant {
            k,
            k1: -1.0 / (-t).exp_m1() - 1.0 / t,
            k2: 1.0 / (t * t) - 0.25 / (sh * sh),
        }
    })
}

/// `Z²` for a standard normal `Z`, `m(t) = (1 − 2t)^{-1/2}`.
pub fn gaussian_square_mgf() -> MgfSpec {
    MgfSpec::from_cumulant("chi2(1)", 0.5, |t| {
        let d = 1.0 - 2.0 * t;
        Cumulant {
            k: -0.5 * (-2.0 * t).ln_1p(),
            k1: 1.0 / d,
            k2: 2.0 / (d * d),
        }
    })
}

/// `ρ|h|²` for one Rayleigh-faded antenna with `E|h|² = σ²`, i.e. an
/// exponential variable with mean `ρσ²`.
pub fn simo_gain_mgf(sigma_sq: f64, rho: f64) -> Result<MgfSpec> {
    if !(sigma_sq > 0.0) || !(rho > 0.0) || !sigma_sq.is_finite() || !rho.is_finite() {
        return Err(Error::domain(
            "simo_gain_mgf",
            format!("sigma_sq and rho must be positive, got {sigma_sq} and {rho}"),
        ));
    }
    Ok(exponential_with_mean(format!("gain({sigma_sq},{rho})"), rho * sigma_sq))
}

/// MGF of the sum of independent variables.
pub fn product_mgf(parts: &[MgfSpec]) -> Result<MgfSpec> {
    match parts {
        [] => Err(Error::domain("product_mgf", "no factors")),
        [one] => Ok(one.clone()),
        _ => {
            let parts = parts.to_vec();
            let domain_upper = parts.iter().map(|p| p.domain_upper).fold(f64::INFINITY, f64::min);
            let label = parts.iter().map(|p| p.label.as_str()).collect::<Vec<_>>().join("+");
            Ok(MgfSpec::from_cumulant(label, domain_upper, move |t| {
                parts.iter().fold(Cumulant { k: 0.0, k1: 0.0, k2: 0.0 }, |acc, p| {
                    let c = p.cumulant(t);
                    Cumulant {
                        k: acc.k + c.k,
                        k1: acc.k1 + c.k1,
                        k2: acc.k2 + c.k2,
                    }
                })
            }))
        }
    }
}

type JointFn = dyn Fn(f64, f64) -> f64 + Send + Sync;

#[derive(Clone)]
enum JointKind {
    /// `(X, Y) = (Σ aᵢZᵢ, Σ bᵢZᵢ)` with independent `Zᵢ`.
    Linear(Vec<(MgfSpec, f64, f64)>),
    General(Arc<JointFn>),
}

/// Joint MGF `(s, t) ↦ E{e^{sX + tY}}` of a pair of positive variables.
#[derive(Clone)]
pub struct JointMgfSpec {
    kind: JointKind,
    label: String,
}

impl fmt::Debug for JointMgfSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("JointMgfSpec").field("label", &self.label).finish()
    }
}

impl JointMgfSpec {
    /// From an arbitrary joint MGF. The covariance kernel is then a plain
    /// difference and is only as accurate as `m` itself near the origin.
    pub fn new<F>(label: impl Into<String>, m: F) -> Self
    where
        F: Fn(f64, f64) -> f64 + Send + Sync + 'static,
    {
        Self {
            kind: JointKind::General(Arc::new(m)),
            label: label.into(),
        }
    }

    /// `X = Σ aᵢZᵢ`, `Y = Σ bᵢZᵢ` for independent nonnegative `Zᵢ` and
    /// nonnegative coefficients.
    pub fn linear(label: impl Into<String>, components: Vec<(MgfSpec, f64, f64)>) -> Result<Self> {
        if components.is_empty() || components.iter().any(|&(_, a, b)| !(a >= 0.0 && b >= 0.0)) {
            return Err(Error::domain("JointMgfSpec::linear", "need components with nonnegative coefficients"));
        }
        Ok(Self {
            kind: JointKind::Linear(components),
            label: label.into(),
        })
    }

    /// `(X, Y)` independent.
    pub fn independent(x: &MgfSpec, y: &MgfSpec) -> Self {
        Self {
            kind: JointKind::Linear(vec![(x.clone(), 1.0, 0.0), (y.clone(), 0.0, 1.0)]),
            label: format!("({}, {})", x.label, y.label),
        }
    }

    /// `(X, X)`.
    pub fn identical(x: &MgfSpec) -> Self {
        Self {
            kind: JointKind::Linear(vec![(x.clone(), 1.0, 1.0)]),
            label: format!("({0}, {0})", x.label),
        }
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn m(&self, s: f64, t: f64) -> f64 {
        if s == 0.0 && t == 0.0 {
            return 1.0;
        }
        match &self.kind {
            JointKind::Linear(parts) => parts.iter().map(|(z, a, b)| z.ln_m(a * s + b * t)).sum::<f64>().exp(),
            JointKind::General(m) => m(s, t),
        }
    }

    /// `m(−u, −v) − m(−u, 0) m(0, −v)` for `u, v ≥ 0`.
    pub fn covariance_kernel(&self, u: f64, v: f64) -> f64 {
        match &self.kind {
            JointKind::Linear(parts) => {
                let lead: f64 = parts.iter().map(|(z, a, b)| z.ln_m(-a * u) + z.ln_m(-b * v)).sum();
                if lead == f64::NEG_INFINITY {
                    return 0.0;
                }
                let cross: f64 = parts.iter().map(|(z, a, b)| z.cumulant_cross(a * u, b * v)).sum();
                lead.exp() * cross.exp_m1()
            }
            JointKind::General(m) => m(-u, -v) - m(-u, 0.0) * m(0.0, -v),
        }
    }
}
