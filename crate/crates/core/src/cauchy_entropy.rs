//! Differential entropy of generalized multivariate Cauchy densities
//! `f(x) = C_n [1 + Σ |xᵢ|^θ]^{-q}` on `ℝⁿ`.
//!
//! Writing `[1 + s]^{-q}` as a Gamma mixture of `e^{-t(1+s)}` reduces the
//! entropy to a double integral whose cost does not depend on `n`. With
//! `Z(t) = ∫ e^{-t|x|^θ} dx = c·t^{-1/θ}`, `c = 2Γ(1/θ)/θ`, and `a = n/θ`:
//!
//! `h = q/Γ(q−a) ∬ t^{q−1−a} e^{-(t+u)} [1 − (t/(t+u))^a] dt du/u − ln C_n`.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::quadrature::{integrate_semi_infinite, integrate_semi_infinite_2d, QuadConfig, QuadResult};
use crate::special_functions::ln_gamma;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GenCauchyModel {
    theta: f64,
    q: f64,
    n: u32,
}

impl GenCauchyModel {
    /// Requires `θ > 0`, `q > 0`, `n ≥ 1` and `qθ > n` (normalizability).
    pub fn new(theta: f64, q: f64, n: u32) -> Result<Self> {
        if !(theta > 0.0 && theta.is_finite()) || !(q > 0.0 && q.is_finite()) || n == 0 {
            return Err(Error::domain(
                "GenCauchyModel",
                format!("need theta > 0, q > 0, n >= 1; got theta={theta}, q={q}, n={n}"),
            ));
        }
        if !(q * theta > n as f64) {
            return Err(Error::domain(
                "GenCauchyModel",
                format!("density is not normalizable: q*theta = {} <= n = {n}", q * theta),
            ));
        }
        Ok(Self { theta, q, n })
    }

    /// The standard multivariate Cauchy density, `θ = 2`, `q = (n+1)/2`.
    pub fn standard(n: u32) -> Result<Self> {
        Self::new(2.0, 0.5 * (n as f64 + 1.0), n)
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    fn a(&self) -> f64 {
        self.n as f64 / self.theta
    }

    // ln c with c = 2Γ(1/θ)/θ
    fn ln_c(&self) -> f64 {
        std::f64::consts::LN_2 + lgamma(1.0 / self.theta) - self.theta.ln()
    }

    // exponent of the power substitution that regularizes t^{q−1−a} at 0
    fn power(&self) -> f64 {
        (1.0 / (self.q - self.a())).max(1.0)
    }
}

fn lgamma(x: f64) -> f64 {
    // arguments are validated positive by construction
    ln_gamma(x).unwrap_or(f64::NAN)
}

/// `Z(t) = ∫ e^{-t|x|^θ} dx = 2Γ(1/θ)/(θ t^{1/θ})`.
pub fn partition_z(model: &GenCauchyModel, t: f64) -> Result<f64> {
    if !(t > 0.0) {
        return Err(Error::domain("partition_z", format!("t must be positive, got {t}")));
    }
    Ok((model.ln_c() - t.ln() / model.theta).exp())
}

/// `ln C_n = ln Γ(q) − ln Γ(q − n/θ) − n ln c`.
pub fn ln_normalizer_cn(model: &GenCauchyModel) -> f64 {
    lgamma(model.q) - lgamma(model.q - model.a()) - model.n as f64 * model.ln_c()
}

/// The normalizing constant `C_n = Γ(q) / ∫₀^∞ t^{q−1} e^{-t} Zⁿ(t) dt`,
/// in closed form.
pub fn normalizer_cn(model: &GenCauchyModel) -> f64 {
    ln_normalizer_cn(model).exp()
}

/// `C_n` with the mixture integral done by quadrature after `t = w^p`.
pub fn normalizer_cn_quadrature(model: &GenCauchyModel, cfg: &QuadConfig) -> Result<f64> {
    let p = model.power();
    let e = p * (model.q - model.a()) - 1.0;
    let r = integrate_semi_infinite(|w| p * w.powf(e) * (-w.powf(p)).exp(), cfg)?;
    Ok((lgamma(model.q) - r.value.ln() - model.n as f64 * model.ln_c()).exp())
}

/// `E{e^{-u Σ|Xᵢ|^θ}} = (C_n/Γ(q)) ∫₀^∞ t^{q−1} e^{-t} Zⁿ(t+u) dt` for
/// `u ≥ 0`.
pub fn laplace_of_sum_g(model: &GenCauchyModel, u: f64, cfg: &QuadConfig) -> Result<f64> {
    if !(u >= 0.0) {
        return Err(Error::domain("laplace_of_sum_g", format!("u must be nonnegative, got {u}")));
    }
    let (q, a, p) = (model.q, model.a(), model.power());
    let shift = -lgamma(q - a) + p.ln();
    let r = integrate_semi_infinite(
        |w| {
            let lw = w.ln();
            let t = (p * lw).exp();
            (shift + (p - 1.0) * lw + (q - 1.0) * p * lw - t - a * (t + u).ln()).exp()
        },
        cfg,
    )?;
    Ok(r.value)
}

/// Differential entropy in nats together with the diagnostics of the
/// underlying double integral.
pub fn diff_entropy_with_diagnostics(model: &GenCauchyModel, cfg: &QuadConfig) -> Result<(f64, QuadResult)> {
    let (q, a, p) = (model.q, model.a(), model.power());
    let e = p * (q - a) - 1.0;
    let coeff = (q.ln() - lgamma(q - a)).exp();
    // outer z with u = z^p, inner w with t = w^p
    let r = integrate_semi_infinite_2d(
        |z, w| {
            let t = w.powf(p);
            let u = z.powf(p);
            let bracket = if t == 0.0 {
                1.0
            } else {
                -(-a * (u / t).ln_1p()).exp_m1()
            };
            p * p * w.powf(e) * (-(t + u)).exp() * bracket / z
        },
        cfg,
    )?;
    Ok((coeff * r.value - ln_normalizer_cn(model), r))
}

/// Differential entropy in nats.
pub fn diff_entropy(model: &GenCauchyModel, cfg: &QuadConfig) -> Result<f64> {
    Ok(diff_entropy_with_diagnostics(model, cfg)?.0)
}

/// Differential entropy in nats of the standard `n`-dimensional Cauchy
/// density `Γ((n+1)/2) π^{-(n+1)/2} (1 + |x|²)^{-(n+1)/2}`.
pub fn multivariate_cauchy_entropy(n: u32, cfg: &QuadConfig) -> Result<f64> {
    diff_entropy(&GenCauchyModel::standard(n)?, cfg)
}

/// `ln C_n` of the standard density, `ln Γ((n+1)/2) − ((n+1)/2) ln π`.
pub fn standard_cauchy_ln_normalizer(n: u32) -> f64 {
    let q = 0.5 * (n as f64 + 1.0);
    lgamma(q) - q * PI.ln()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(actual: f64, expected: f64, tol: f64) {
        assert!(
            (actual - expected).abs() <= tol,
            "got {actual}, expected {expected} (tol {tol:e})"
        );
    }

    #[test]
    fn model_validation() {
        assert!(GenCauchyModel::new(2.0, 0.5, 1).is_err());
        assert!(GenCauchyModel::new(2.0, 0.6, 1).is_ok());
        assert!(GenCauchyModel::new(-1.0, 2.0, 1).is_err());
        assert!(GenCauchyModel::new(1.0, 2.0, 0).is_err());
    }

    #[test]
    fn partition_values() {
        let m2 = GenCauchyModel::new(2.0, 1.0, 1).unwrap();
        close(partition_z(&m2, 1.0).unwrap(), PI.sqrt(), 1e-14);
        close(partition_z(&m2, 4.0).unwrap(), PI.sqrt() / 2.0, 1e-14);
        let m1 = GenCauchyModel::new(1.0, 2.0, 1).unwrap();
        close(partition_z(&m1, 1.0).unwrap(), 2.0, 1e-14);
        assert!(partition_z(&m1, 0.0).is_err());
    }

    #[test]
    fn normalizers() {
        close(normalizer_cn(&GenCauchyModel::standard(1).unwrap()), 1.0 / PI, 1e-15);
        close(normalizer_cn(&GenCauchyModel::standard(3).unwrap()), 1.0 / (PI * PI), 1e-15);
        for n in 1..8 {
            close(
                ln_normalizer_cn(&GenCauchyModel::standard(n).unwrap()),
                standard_cauchy_ln_normalizer(n),
                1e-12,
            );
        }
        let m = GenCauchyModel::new(2.0, 3.0, 2).unwrap();
        let closed = normalizer_cn(&m);
        let quad = normalizer_cn_quadrature(&m, &QuadConfig::default()).unwrap();
        close(quad, closed, 1e-9 * closed);
    }

    #[test]
    fn mixture_normalizes() {
        let cfg = QuadConfig::default();
        for &(theta, q, n) in &[(2.0, 1.0, 1), (1.0, 3.5, 3), (3.0, 0.8, 2), (0.5, 9.0, 4), (2.0, 1.5, 2)] {
            let m = GenCauchyModel::new(theta, q, n).unwrap();
            close(laplace_of_sum_g(&m, 0.0, &cfg).unwrap(), 1.0, 1e-9);
        }
    }

    #[test]
    fn laplace_decreasing() {
        let cfg = QuadConfig::default();
        let m = GenCauchyModel::new(2.0, 1.5, 2).unwrap();
        let mut prev = 1.0 + 1e-9;
        for i in 0..20 {
            let v = laplace_of_sum_g(&m, 0.25 * i as f64, &cfg).unwrap();
            assert!(v <= prev && v <= 1.0 + 1e-9);
            prev = v;
        }
    }

    #[test]
    fn standard_cauchy_entropy() {
        let cfg = QuadConfig::default();
        close(multivariate_cauchy_entropy(1, &cfg).unwrap(), (4.0 * PI).ln(), 1e-8);
    }

    #[test]
    fn tightening_changes_little() {
        let cfg = QuadConfig::new(1e-8, 1e-10).unwrap();
        let m = GenCauchyModel::new(1.5, 2.0, 2).unwrap();
        let a = diff_entropy(&m, &cfg).unwrap();
        let b = diff_entropy(&m, &cfg.tightened(10.0)).unwrap();
        close(a, b, 2e-8 * a.abs().max(1.0));
    }

    #[test]
    fn cost_does_not_grow_with_dimension() {
        let cfg = QuadConfig::default();
        let (_, r2) = diff_entropy_with_diagnostics(&GenCauchyModel::standard(2).unwrap(), &cfg).unwrap();
        let (_, r100) = diff_entropy_with_diagnostics(&GenCauchyModel::standard(100).unwrap(), &cfg).unwrap();
        assert!(r100.evaluations < 4 * r2.evaluations, "{} vs {}", r100.evaluations, r2.evaluations);
    }
}
