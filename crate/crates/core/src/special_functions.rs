//! Exponential integral, log-gamma, log-factorial and Poisson entropy.

use std::f64::consts::PI;

use thiserror::Error;

use crate::error::{Error, Result};
use crate::quadrature::{integrate_semi_infinite, QuadConfig, QuadError};

/// Euler-Mascheroni constant.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_860_61;

#[derive(Debug, Clone, Error, PartialEq)]
#[error("{function_name} is undefined at {argument}")]
pub struct SpecialFnDomainError {
    pub function_name: &'static str,
    pub argument: f64,
}

fn require_positive(function_name: &'static str, x: f64) -> std::result::Result<(), SpecialFnDomainError> {
    if x > 0.0 && !x.is_nan() {
        Ok(())
    } else {
        Err(SpecialFnDomainError {
            function_name,
            argument: x,
        })
    }
}

// Power series terms for x <= 1. The k-th term is bounded by 1/(k*k!), so 18
// terms leave a truncation error below 1e-17.
const E1_SERIES_TERMS: usize = 18;
const E1_CF_MAX_ITER: usize = 200;

fn e1_series(x: f64) -> f64 {
    e1_series_with(x, EULER_GAMMA)
}

fn e1_series_with(x: f64, euler: f64) -> f64 {
    let mut sum = 0.0;
    let mut term = 1.0;
    for k in 1..=E1_SERIES_TERMS {
        term *= -x / k as f64;
        sum -= term / k as f64;
    }
    -euler - x.ln() + sum
}

// Modified Lentz evaluation of the continued fraction for e^x E1(x), x > 1.
fn scaled_e1_continued_fraction(x: f64) -> f64 {
    let tiny = 1e-300;
    let mut b = x + 1.0;
    let mut c = 1.0 / tiny;
    let mut d = 1.0 / b;
    let mut h = d;
    for i in 1..=E1_CF_MAX_ITER {
        let an = -((i * i) as f64);
        b += 2.0;
        d = 1.0 / (an * d + b);
        c = b + an / c;
        let delta = c * d;
        h *= delta;
        if (delta - 1.0).abs() < 1e-16 {
            break;
        }
    }
    h
}

/// `E1(x) = ∫ₓ^∞ e^{-s}/s ds` for `x > 0`.
///
/// Power series up to `x = 1`, continued fraction beyond.
pub fn exp_integral_e1(x: f64) -> std::result::Result<f64, SpecialFnDomainError> {
    require_positive("exp_integral_e1", x)?;
    if x <= 1.0 {
        Ok(e1_series(x))
    } else {
        Ok(scaled_e1_continued_fraction(x) * (-x).exp())
    }
}

// E1 with the leading series constant corrupted by one part in 10⁶; used to
// check that validation notices a broken special function.
pub(crate) fn exp_integral_e1_corrupted(x: f64) -> std::result::Result<f64, SpecialFnDomainError> {
    require_positive("exp_integral_e1", x)?;
    if x <= 1.0 {
        Ok(e1_series_with(x, EULER_GAMMA * (1.0 + 1e-6)))
    } else {
        Ok(scaled_e1_continued_fraction(x) * (-x).exp())
    }
}

/// `e^x E1(x)` without forming either factor separately, so it stays finite
/// for arguments where `e^x` overflows or `E1(x)` underflows.
pub fn exp_scaled_e1(x: f64) -> std::result::Result<f64, SpecialFnDomainError> {
    require_positive("exp_scaled_e1", x)?;
    if x <= 1.0 {
        Ok(x.exp() * e1_series(x))
    } else {
        Ok(scaled_e1_continued_fraction(x))
    }
}

// Lanczos approximation, g = 7, nine coefficients.
const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

fn lanczos_ln_gamma(x: f64) -> f64 {
    if x < 0.5 {
        // reflection; x is in (0, 0.5) here so sin(pi x) > 0
        return (PI / (PI * x).sin()).ln() - lanczos_ln_gamma(1.0 - x);
    }
    let x = x - 1.0;
    let mut a = LANCZOS[0];
    for (i, c) in LANCZOS.iter().enumerate().skip(1) {
        a += c / (x + i as f64);
    }
    let t = x + LANCZOS_G + 0.5;
    0.5 * (2.0 * PI).ln() + (x + 0.5) * t.ln() - t + a.ln()
}

/// `ln Γ(x)` for `x > 0`.
pub fn ln_gamma(x: f64) -> std::result::Result<f64, SpecialFnDomainError> {
    require_positive("ln_gamma", x)?;
    if x == 1.0 || x == 2.0 {
        return Ok(0.0);
    }
    Ok(lanczos_ln_gamma(x))
}

/// `ln n!` from the integral `∫₀^∞ e^{-u}(n − Σ_{k<n} e^{-uk}) du/u`.
pub fn ln_factorial_integral(n: u64, cfg: &QuadConfig) -> std::result::Result<f64, QuadError> {
    if n <= 1 {
        return Ok(0.0);
    }
    let nf = n as f64;
    let s1 = nf * (nf - 1.0) / 2.0;
    let s2 = (nf - 1.0) * nf * (2.0 * nf - 1.0) / 6.0;
    let s3 = s1 * s1;
    let integrand = |u: f64| {
        if u * nf < 1e-4 {
            (-u).exp() * (s1 - u * s2 / 2.0 + u * u * s3 / 6.0)
        } else {
            let bracket = nf - (-u * nf).exp_m1() / (-u).exp_m1();
            (-u).exp() * bracket / u
        }
    };
    Ok(integrate_semi_infinite(integrand, cfg)?.value)
}

/// Entropy in nats of a Poisson variable with mean `lambda`,
/// `λ − λ ln λ + E{ln N!}` with the last term from the Poisson MGF.
pub fn poisson_entropy(lambda: f64, cfg: &QuadConfig) -> Result<f64> {
    if !(lambda > 0.0) || !lambda.is_finite() {
        return Err(Error::domain("poisson_entropy", format!("lambda must be positive, got {lambda}")));
    }
    let integrand = |u: f64| {
        let w = -(-u).exp_m1();
        let y = lambda * w;
        let bracket = if y < 1e-4 {
            lambda * y * (0.5 - y / 6.0 + y * y / 24.0)
        } else {
            lambda + (-y).exp_m1() / w
        };
        (-u).exp() * bracket / u
    };
    let e_ln_factorial = integrate_semi_infinite(integrand, cfg)?.value;
    Ok(lambda - lambda * lambda.ln() + e_ln_factorial)
}
