//! Log moments from moment generating functions.
//!
//! Averaging `ln x = ∫₀^∞ (e^{-u} − e^{-ux}) du/u` over `X` turns `E{ln X}`
//! into a single integral over the MGF, and the same device applied twice
//! gives variances and covariances as double integrals.

use crate::error::{Error, Result};
use crate::mgf::{JointMgfSpec, MgfSpec};
use crate::quadrature::{integrate_interval, integrate_semi_infinite, integrate_semi_infinite_2d, QuadConfig};
use crate::special_functions::ln_gamma;

/// The power `s` in `ln x = (1/s) ln(x^s)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerParam(f64);

impl PowerParam {
    pub fn new(s: f64) -> Result<Self> {
        if s == 0.0 || !s.is_finite() {
            return Err(Error::domain("PowerParam", format!("power must be finite and nonzero, got {s}")));
        }
        Ok(Self(s))
    }

    pub fn value(self) -> f64 {
        self.0
    }

    fn positive(self, what: &'static str) -> Result<f64> {
        if self.0 > 0.0 {
            Ok(self.0)
        } else {
            Err(Error::domain(what, format!("power must be positive, got {}", self.0)))
        }
    }
}

impl Default for PowerParam {
    fn default() -> Self {
        Self(1.0)
    }
}

/// `e^a − e^b` without cancellation when `a ≈ b`.
pub(crate) fn exp_diff(a: f64, b: f64) -> f64 {
    if a >= b {
        -a.exp() * (b - a).exp_m1()
    } else {
        b.exp() * (a - b).exp_m1()
    }
}

fn require_negative_axis(mgf: &MgfSpec, what: &'static str) -> Result<()> {
    if mgf.domain_upper() >= 0.0 {
        Ok(())
    } else {
        Err(Error::domain(what, format!("MGF of {} is not finite on t <= 0", mgf.label())))
    }
}

fn require_count(n: u32, what: &'static str) -> Result<()> {
    if n >= 1 {
        Ok(())
    } else {
        Err(Error::domain(what, "n must be at least 1"))
    }
}

/// `E{ln X} = ∫₀^∞ [e^{-u} − m(−u)] du/u`.
pub fn expect_ln(x_mgf: &MgfSpec, cfg: &QuadConfig) -> Result<f64> {
    expect_ln_sum_iid(x_mgf, 1, cfg)
}

/// `E{ln(X₁ + … + X_n)}` for i.i.d. `Xᵢ`.
pub fn expect_ln_sum_iid(x_mgf: &MgfSpec, n: u32, cfg: &QuadConfig) -> Result<f64> {
    require_negative_axis(x_mgf, "expect_ln_sum_iid")?;
    require_count(n, "expect_ln_sum_iid")?;
    let nf = n as f64;
    let r = integrate_semi_infinite(|u| exp_diff(-u, nf * x_mgf.ln_m(-u)) / u, cfg)?;
    Ok(r.value)
}

/// `E{ln Y}` for `Y = (X₁^s + … + X_n^s)^{1/s}`, given the MGF of `X^s`.
pub fn expect_ln_power_sum(x_power_mgf: &MgfSpec, n: u32, s: PowerParam, cfg: &QuadConfig) -> Result<f64> {
    let s = s.positive("expect_ln_power_sum")?;
    Ok(expect_ln_sum_iid(x_power_mgf, n, cfg)? / s)
}

/// `E{ln(1 + X)} = ∫₀^∞ e^{-u}[1 − m(−u)] du/u` for `X ≥ 0`.
pub fn expect_ln1p(x_mgf: &MgfSpec, cfg: &QuadConfig) -> Result<f64> {
    require_negative_axis(x_mgf, "expect_ln1p")?;
    let r = integrate_semi_infinite(|u| -(-u).exp() * x_mgf.ln_m(-u).exp_m1() / u, cfg)?;
    Ok(r.value)
}

/// `Var{ln(1 + X)} = ∬ e^{-(u+v)}[m(−u−v) − m(−u)m(−v)] du dv/(uv)`.
pub fn var_ln1p(x_mgf: &MgfSpec, cfg: &QuadConfig) -> Result<f64> {
    require_negative_axis(x_mgf, "var_ln1p")?;
    let r = integrate_semi_infinite_2d(
        |u, v| (-(u + v)).exp() * x_mgf.covariance_kernel(u, v, 1) / (u * v),
        cfg,
    )?;
    Ok(r.value)
}

/// `Var{ln X} = (1/s²) ∬ [m(−u−v) − m(−u)m(−v)] du dv/(uv)`, given the MGF
/// of `X^s`.
pub fn var_ln(x_power_mgf: &MgfSpec, s: PowerParam, cfg: &QuadConfig) -> Result<f64> {
    var_ln_sum_iid(x_power_mgf, 1, s, cfg)
}

/// Variance of `ln Y` for `Y = (X₁^s + … + X_n^s)^{1/s}`.
pub fn var_ln_sum_iid(x_power_mgf: &MgfSpec, n: u32, s: PowerParam, cfg: &QuadConfig) -> Result<f64> {
    let s = s.positive("var_ln")?;
    require_negative_axis(x_power_mgf, "var_ln")?;
    require_count(n, "var_ln")?;
    let r = integrate_semi_infinite_2d(|u, v| x_power_mgf.covariance_kernel(u, v, n) / (u * v), cfg)?;
    Ok(r.value / (s * s))
}

/// `Cov{ln X, ln Y}` from the joint MGF of `(X^s, Y^s)`.
pub fn cov_ln(joint: &JointMgfSpec, s: PowerParam, cfg: &QuadConfig) -> Result<f64> {
    let s = s.positive("cov_ln")?;
    let r = integrate_semi_infinite_2d(
        |u, v| joint.covariance_kernel(u, v) / (u * v),
        cfg,
    )?;
    Ok(r.value / (s * s))
}

/// `E{(X₁ + … + X_n)^ρ}` for `0 < ρ < 1`:
/// `1 + ρ/Γ(1−ρ) ∫₀^∞ [e^{-u} − m(−u)^n] du/u^{ρ+1}`.
///
/// On `[0, 1]` the substitution `u = w^{1/(1−ρ)}` absorbs the `u^{-ρ}`
/// endpoint singularity.
pub fn fractional_moment_sum_iid(x_mgf: &MgfSpec, n: u32, rho: f64, cfg: &QuadConfig) -> Result<f64> {
    if !(rho > 0.0 && rho < 1.0) {
        return Err(Error::domain("fractional_moment_sum_iid", format!("rho must lie in (0, 1), got {rho}")));
    }
    require_negative_axis(x_mgf, "fractional_moment_sum_iid")?;
    require_count(n, "fractional_moment_sum_iid")?;
    let nf = n as f64;
    let bracket = |u: f64| exp_diff(-u, nf * x_mgf.ln_m(-u));

    let p = 1.0 / (1.0 - rho);
    let head = integrate_interval(
        |w| {
            let u = w.powf(p);
            if u == 0.0 {
                return 0.0;
            }
            p * bracket(u) / u
        },
        0.0,
        1.0,
        cfg,
    )?;
    let tail = integrate_semi_infinite(
        |v| {
            let u = 1.0 + v;
            bracket(u) * (-(rho + 1.0) * u.ln()).exp()
        },
        cfg,
    )?;
    let scale = rho * (-ln_gamma(1.0 - rho)?).exp();
    Ok(1.0 + scale * (head.value + tail.value))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mgf::{deterministic_mgf, exponential_mgf, gaussian_square_mgf, uniform01_mgf};
    use crate::special_functions::{exp_scaled_e1, EULER_GAMMA};
    use std::f64::consts::{LN_2, PI};

    fn close(actual: f64, expected: f64, tol: f64) {
        assert!(
            (actual - expected).abs() <= tol,
            "got {actual}, expected {expected} (tol {tol:e})"
        );
    }

    fn cfg() -> QuadConfig {
        QuadConfig::default()
    }

    #[test]
    fn exp_diff_cases() {
        close(exp_diff(1.0, 0.0), 1f64.exp() - 1.0, 1e-15);
        close(exp_diff(0.0, 1.0), 1.0 - 1f64.exp(), 1e-15);
        close(exp_diff(-1e-10, -2e-10), 1e-10 - 1.5e-20, 1e-25);
        assert_eq!(exp_diff(-800.0, -900.0), 0.0);
    }

    #[test]
    fn expect_ln_basic() {
        close(expect_ln(&deterministic_mgf(1.0), &cfg()).unwrap(), 0.0, 1e-12);
        close(expect_ln(&exponential_mgf(1.0).unwrap(), &cfg()).unwrap(), -EULER_GAMMA, 1e-9);
        close(expect_ln(&uniform01_mgf(), &cfg()).unwrap(), -1.0, 1e-9);
    }

    #[test]
    fn expect_ln_sums() {
        let e = exponential_mgf(1.0).unwrap();
        close(
            expect_ln_sum_iid(&e, 1, &cfg()).unwrap(),
            expect_ln(&e, &cfg()).unwrap(),
            0.0,
        );
        close(expect_ln_sum_iid(&deterministic_mgf(1.0), 5, &cfg()).unwrap(), 5f64.ln(), 1e-9);
        // sum of 3 unit exponentials is Gamma(3): E ln = ψ(3) = 3/2 − γ
        close(expect_ln_sum_iid(&e, 3, &cfg()).unwrap(), 1.5 - EULER_GAMMA, 1e-9);
        assert!(expect_ln_sum_iid(&e, 0, &cfg()).is_err());
    }

    #[test]
    fn power_sums() {
        let s2 = PowerParam::new(2.0).unwrap();
        let s3 = PowerParam::new(3.0).unwrap();
        close(
            expect_ln_power_sum(&deterministic_mgf(1.0), 8, s3, &cfg()).unwrap(),
            LN_2,
            1e-9,
        );
        // ψ(1/2) = −γ − 2 ln 2
        close(
            expect_ln_power_sum(&gaussian_square_mgf(), 1, s2, &cfg()).unwrap(),
            0.5 * (LN_2 - EULER_GAMMA - 2.0 * LN_2),
            1e-9,
        );
        assert!(PowerParam::new(0.0).is_err());
        let neg = PowerParam::new(-1.0).unwrap();
        assert!(expect_ln_power_sum(&gaussian_square_mgf(), 1, neg, &cfg()).is_err());
    }

    #[test]
    fn ln1p_moments() {
        close(expect_ln1p(&deterministic_mgf(0.0), &cfg()).unwrap(), 0.0, 1e-12);
        close(expect_ln1p(&deterministic_mgf(1.0), &cfg()).unwrap(), LN_2, 1e-10);
        close(
            expect_ln1p(&exponential_mgf(1.0).unwrap(), &cfg()).unwrap(),
            exp_scaled_e1(1.0).unwrap(),
            1e-10,
        );
        close(var_ln1p(&deterministic_mgf(2.5), &cfg()).unwrap(), 0.0, 1e-12);
    }

    #[test]
    fn variances() {
        let one = PowerParam::default();
        close(var_ln(&deterministic_mgf(3.0), one, &cfg()).unwrap(), 0.0, 1e-12);
        close(var_ln(&exponential_mgf(1.0).unwrap(), one, &cfg()).unwrap(), PI * PI / 6.0, 1e-8);
        close(var_ln(&gaussian_square_mgf(), one, &cfg()).unwrap(), PI * PI / 2.0, 1e-7);
    }

    #[test]
    fn covariances() {
        let one = PowerParam::default();
        let e = exponential_mgf(1.0).unwrap();
        close(cov_ln(&JointMgfSpec::independent(&e, &e), one, &cfg()).unwrap(), 0.0, 1e-12);
        close(
            cov_ln(&JointMgfSpec::identical(&e), one, &cfg()).unwrap(),
            var_ln(&e, one, &cfg()).unwrap(),
            1e-8,
        );
    }

    #[test]
    fn fractional_moments() {
        close(fractional_moment_sum_iid(&deterministic_mgf(1.0), 1, 0.3, &cfg()).unwrap(), 1.0, 1e-12);
        close(fractional_moment_sum_iid(&deterministic_mgf(1.0), 4, 0.5, &cfg()).unwrap(), 2.0, 1e-9);
        let e = exponential_mgf(1.0).unwrap();
        close(
            fractional_moment_sum_iid(&e, 1, 0.5, &cfg()).unwrap(),
            PI.sqrt() / 2.0,
            1e-9,
        );
        // Gamma(3): E S^ρ = Γ(3+ρ)/Γ(3)
        let rho = 0.7;
        let expected = (ln_gamma(3.0 + rho).unwrap() - ln_gamma(3.0).unwrap()).exp();
        close(fractional_moment_sum_iid(&e, 3, rho, &cfg()).unwrap(), expected, 1e-9);
        assert!(fractional_moment_sum_iid(&e, 1, 1.0, &cfg()).is_err());
        assert!(fractional_moment_sum_iid(&e, 1, 0.0, &cfg()).is_err());
    }

    #[test]
    fn fractional_moment_small_rho() {
        // (F(ρ) − 1)/ρ = E ln S + (ρ/2) E ln²S + O(ρ²)
        let e = exponential_mgf(1.0).unwrap();
        let one = PowerParam::default();
        let rho = 1e-3;
        for n in [1u32, 3] {
            let d = |r: f64| (fractional_moment_sum_iid(&e, n, r, &cfg()).unwrap() - 1.0) / r;
            let mean = expect_ln_sum_iid(&e, n, &cfg()).unwrap();
            let second = var_ln_sum_iid(&e, n, one, &cfg()).unwrap() + mean * mean;
            let (full, half) = (d(rho), d(0.5 * rho));
            close(2.0 * half - full, mean, 1e-5);
            close(full - mean, 0.5 * rho * second, 1e-5);
        }
    }

    #[test]
    fn scaling_law() {
        let e = exponential_mgf(1.0).unwrap();
        let base = expect_ln(&e, &cfg()).unwrap();
        for &c in &[0.5, 2.0, 10.0] {
            close(expect_ln(&e.scaled(c), &cfg()).unwrap(), base + c.ln(), 2e-10 * (1.0 + base.abs()));
        }
    }

    #[test]
    fn jensen() {
        for spec in [uniform01_mgf(), gaussian_square_mgf(), exponential_mgf(2.0).unwrap(), deterministic_mgf(4.0)] {
            let e = expect_ln(&spec, &cfg()).unwrap();
            assert!(e <= spec.mean().ln() + 1e-9, "{}", spec.label());
        }
    }
}
