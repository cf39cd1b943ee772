//! Ergodic capacity `E{ln(1 + ρ Σ|h_ℓ|²)}` of a single-input multiple-output
//! channel with independent Rayleigh fading, `E|h_ℓ|² = σ_ℓ²`, and the
//! variance of the same quantity.
//!
//! All functions take the SNR `ρ` on a linear scale.

use crate::error::{Error, Result};
use crate::log_moments::{expect_ln1p, var_ln1p};
use crate::mgf::{product_mgf, simo_gain_mgf, MgfSpec};
use crate::quadrature::{integrate_semi_infinite, QuadConfig};
use crate::special_functions::exp_scaled_e1;

#[derive(Debug, Clone, PartialEq)]
pub struct SimoChannel {
    sigma_sq: Vec<f64>,
    rho: f64,
}

impl SimoChannel {
    pub fn new(sigma_sq: Vec<f64>, rho: f64) -> Result<Self> {
        if sigma_sq.is_empty() || sigma_sq.iter().any(|&s| !(s > 0.0 && s.is_finite())) {
            return Err(Error::domain(
                "SimoChannel",
                format!("antenna variances must be positive, got {sigma_sq:?}"),
            ));
        }
        if !(rho > 0.0 && rho.is_finite()) {
            return Err(Error::domain("SimoChannel", format!("SNR must be positive, got {rho}")));
        }
        Ok(Self { sigma_sq, rho })
    }

    pub fn sigma_sq(&self) -> &[f64] {
        &self.sigma_sq
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }

    /// MGF of the received SNR `ρ Σ|h_ℓ|²`.
    pub fn gain_mgf(&self) -> Result<MgfSpec> {
        let parts = self
            .sigma_sq
            .iter()
            .map(|&s| simo_gain_mgf(s, self.rho))
            .collect::<Result<Vec<_>>>()?;
        product_mgf(&parts)
    }

    fn ln_product(&self, u: f64) -> f64 {
        self.sigma_sq.iter().map(|&s| (u * self.rho * s).ln_1p()).sum()
    }
}

/// `∫₀^∞ e^{-x/ρ}/x [1 − ∏ 1/(1+σ_ℓ² x)] dx`, integrated in the variable
/// `u = x/ρ`.
pub fn ergodic_capacity(ch: &SimoChannel, cfg: &QuadConfig) -> Result<f64> {
    let r = integrate_semi_infinite(|u| -(-u).exp() * (-ch.ln_product(u)).exp_m1() / u, cfg)?;
    Ok(r.value)
}

/// `2e^{1/ρ}E1(1/ρ) − e^{2/ρ}E1(2/ρ)`: capacity for two antennas with
/// `σ² = (½, 1)`.
pub fn capacity_closed_form_example(rho: f64) -> Result<f64> {
    if !(rho > 0.0) {
        return Err(Error::domain("capacity_closed_form_example", format!("SNR must be positive, got {rho}")));
    }
    Ok(2.0 * exp_scaled_e1(1.0 / rho)? - exp_scaled_e1(2.0 / rho)?)
}

/// Capacity from the partial-fraction expansion
/// `∏ 1/(1+θ_ℓu) = Σ c_ℓ/(1+θ_ℓu)`, `c_ℓ = ∏_{j≠ℓ} 1/(1 − θ_j/θ_ℓ)`, which
/// gives `C = Σ c_ℓ e^{1/θ_ℓ} E1(1/θ_ℓ)` with `θ_ℓ = ρσ_ℓ²`.
pub fn capacity_partial_fractions(ch: &SimoChannel) -> Result<f64> {
    let s = &ch.sigma_sq;
    for (i, &a) in s.iter().enumerate() {
        for &b in &s[i + 1..] {
            if (a - b).abs() <= 1e-12 * a.max(b) {
                return Err(Error::RepeatedSigma(a, b));
            }
        }
    }
    let mut total = 0.0;
    for (l, &sl) in s.iter().enumerate() {
        let coeff: f64 = s
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != l)
            .map(|(_, &sj)| 1.0 / (1.0 - sj / sl))
            .product();
        total += coeff * exp_scaled_e1(1.0 / (ch.rho * sl))?;
    }
    Ok(total)
}

/// `Var{ln(1 + ρΣ|h_ℓ|²)}` as
/// `∬ e^{-(x+y)/ρ}/(xy) [∏ 1/(1+σ_ℓ²(x+y)) − ∏ 1/((1+σ_ℓ²x)(1+σ_ℓ²y))] dx dy`.
pub fn capacity_variance(ch: &SimoChannel, cfg: &QuadConfig) -> Result<f64> {
    var_ln1p(&ch.gain_mgf()?, cfg)
}

/// The variance integrand in the original `(x, y)` variables.
pub fn variance_integrand(ch: &SimoChannel, x: f64, y: f64) -> f64 {
    let (mut joint, mut split) = (1.0, 1.0);
    for &s in &ch.sigma_sq {
        joint /= 1.0 + s * (x + y);
        split /= (1.0 + s * x) * (1.0 + s * y);
    }
    (-(x + y) / ch.rho).exp() / (x * y) * (joint - split)
}

/// Capacity through the generic `E{ln(1+X)}` route on the gain MGF.
pub fn ergodic_capacity_via_mgf(ch: &SimoChannel, cfg: &QuadConfig) -> Result<f64> {
    expect_ln1p(&ch.gain_mgf()?, cfg)
}
