//! Redundancy of universal codes and moments of the empirical entropy.
//!
//! Everything here is in nats. The empirical entropy `Ĥ` of an `n`-sample
//! from a discrete memoryless source is handled through the MGF of the
//! letter frequencies `P̂(x)`; all integrals are one- or two-dimensional
//! regardless of `n`.

use crate::error::{Error, Result};
use crate::log_moments::exp_diff;
use crate::mgf::MgfSpec;
use crate::quadrature::{integrate_semi_infinite, integrate_semi_infinite_2d, QuadConfig};
use crate::special_functions::ln_gamma;

/// Letter probabilities of a discrete memoryless source.
#[derive(Debug, Clone, PartialEq)]
pub struct DmsModel {
    probs: Vec<f64>,
}

impl DmsModel {
    /// Entries must be positive and sum to one within `1e-12`.
    pub fn new(probs: Vec<f64>) -> Result<Self> {
        if probs.is_empty() || probs.iter().any(|&p| !(p > 0.0 && p <= 1.0)) {
            return Err(Error::domain("DmsModel", format!("probabilities must lie in (0, 1], got {probs:?}")));
        }
        let total: f64 = probs.iter().sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::domain("DmsModel", format!("probabilities sum to {total}, not 1")));
        }
        Ok(Self { probs })
    }

    /// The binary symmetric source.
    pub fn bss() -> Self {
        Self { probs: vec![0.5, 0.5] }
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn alphabet_size(&self) -> usize {
        self.probs.len()
    }

    /// Source entropy in nats.
    pub fn entropy(&self) -> f64 {
        -self.probs.iter().map(|&p| p * p.ln()).sum::<f64>()
    }

    pub fn is_bss(&self) -> bool {
        self.probs.len() == 2 && self.probs.iter().all(|&p| (p - 0.5).abs() <= 1e-15)
    }

    fn letter(&self, index: usize) -> Result<f64> {
        self.probs.get(index).copied().ok_or_else(|| {
            Error::domain(
                "DmsModel",
                format!("letter {index} outside alphabet of size {}", self.probs.len()),
            )
        })
    }
}

fn require_count(n: u32, what: &'static str) -> Result<()> {
    if n >= 1 {
        Ok(())
    } else {
        Err(Error::domain(what, "n must be at least 1"))
    }
}

/// `h_b(x) = ∫₀^∞ [x e^{-ux} + (1−x) e^{-u(1−x)} − e^{-u}] du/u`.
pub fn binary_entropy_integral(x: f64, cfg: &QuadConfig) -> Result<f64> {
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::domain("binary_entropy_integral", format!("x must lie in [0, 1], got {x}")));
    }
    if x == 0.0 || x == 1.0 {
        return Ok(0.0);
    }
    let y = 1.0 - x;
    let r = integrate_semi_infinite(|u| (x * exp_diff(-u * x, -u) + y * exp_diff(-u * y, -u)) / u, cfg)?;
    Ok(r.value)
}

/// `E{h_b(X)}` for `X` supported on `[0, 1]`.
pub fn expected_hb(x_mgf: &MgfSpec, cfg: &QuadConfig) -> Result<f64> {
    expected_hb_mean_iid(x_mgf, 1, cfg)
}

/// `E{h_b((X₁ + … + X_n)/n)}` for i.i.d. `Xᵢ` on `[0, 1]`:
/// `∫₀^∞ {M^{n−1}(−t)M'(−t) + [Mⁿ(t) − M^{n−1}(t)M'(t) − 1] e^{-nt}} dt/t`.
pub fn expected_hb_mean_iid(x_mgf: &MgfSpec, n: u32, cfg: &QuadConfig) -> Result<f64> {
    require_count(n, "expected_hb_mean_iid")?;
    let nf = n as f64;
    // in the variable v = n t
    let r = integrate_semi_infinite(
        |v| {
            let t = v / nf;
            let neg = x_mgf.cumulant(-t);
            let pos = x_mgf.cumulant(t);
            let a = (nf * neg.k).exp() * neg.k1;
            let b = (nf * (pos.k - t)).exp() * pos.k1;
            let c = exp_diff(nf * pos.k - v, -v);
            (a - b + c) / v
        },
        cfg,
    )?;
    Ok(r.value)
}

/// `E{h_b(mean of n)} − E{h_b(X)}`: the expected redundancy per symbol when
/// the Bernoulli parameters are drawn from `X` and known to the decoder.
pub fn avs_redundancy(x_mgf: &MgfSpec, n: u32, cfg: &QuadConfig) -> Result<f64> {
    Ok(expected_hb_mean_iid(x_mgf, n, cfg)? - expected_hb(x_mgf, cfg)?)
}

/// `φ_n(x, t) = E{e^{tP̂(x)}} = [1 − P + P e^{t/n}]ⁿ` with its first and
/// second derivatives in `t`.
pub fn phi_kernel(dms: &DmsModel, n: u32, x_index: usize, t: f64) -> Result<(f64, f64, f64)> {
    require_count(n, "phi_kernel")?;
    let p = dms.letter(x_index)?;
    Ok(phi_parts(p, n as f64, t))
}

// k·ln(b), taking 0·ln 0 as 0
fn power_exponent(k: f64, lb: f64) -> f64 {
    if k == 0.0 {
        0.0
    } else {
        k * lb
    }
}

fn phi_parts(p: f64, nf: f64, t: f64) -> (f64, f64, f64) {
    let e = (t / nf).exp();
    let lb = (p * (t / nf).exp_m1()).ln_1p();
    let value = (nf * lb).exp();
    let d1 = p * e * power_exponent(nf - 1.0, lb).exp();
    let d2 = p * e / nf * power_exponent(nf - 2.0, lb).exp() * (1.0 - p + nf * p * e);
    (value, d1, d2)
}

/// `ψ_n(x, x', s, t) = E{e^{sP̂(x) + tP̂(x')}}` for `x ≠ x'` with its mixed
/// derivative `∂²ψ_n/∂s∂t`.
pub fn psi_kernel(dms: &DmsModel, n: u32, x_index: usize, xp_index: usize, s: f64, t: f64) -> Result<(f64, f64)> {
    require_count(n, "psi_kernel")?;
    if x_index == xp_index {
        return Err(Error::SameLetter(x_index));
    }
    let p = dms.letter(x_index)?;
    let pp = dms.letter(xp_index)?;
    Ok(psi_parts(p, pp, n as f64, s, t))
}

fn psi_parts(p: f64, pp: f64, nf: f64, s: f64, t: f64) -> (f64, f64) {
    let lc = (p * (s / nf).exp_m1() + pp * (t / nf).exp_m1()).ln_1p();
    let value = (nf * lc).exp();
    let d2 = (1.0 - 1.0 / nf) * p * pp * ((s + t) / nf + power_exponent(nf - 2.0, lc)).exp();
    (value, d2)
}

/// `E{Ĥ}` from `∫₀^∞ [e^{-u} Σ_x P(x)(1 − P(x)(1 − e^{-u}))^{n−1} − e^{-nu}] du/u`.
pub fn empirical_entropy_mean(dms: &DmsModel, n: u32, cfg: &QuadConfig) -> Result<f64> {
    require_count(n, "empirical_entropy_mean")?;
    if n == 1 {
        return Ok(0.0);
    }
    let nf = n as f64;
    // in the variable v = n u
    let r = integrate_semi_infinite(
        |v| {
            let u = v / nf;
            let w = -(-u).exp_m1();
            let sum: f64 = dms
                .probs
                .iter()
                .map(|&p| p * power_exponent(nf - 1.0, (-p * w).ln_1p()).exp())
                .sum();
            ((-u).exp() * sum - (-v).exp()) / v
        },
        cfg,
    )?;
    Ok(r.value)
}

/// `E{Ĥ}` as the finite sum
/// `Σ_x Σ_{k=1}^n C(n−1, k−1) P^k (1−P)^{n−k} ln(n/k)`, with binomial
/// weights formed in log space. Costs `n·|X|` terms.
pub fn empirical_entropy_mean_direct(dms: &DmsModel, n: u32) -> Result<f64> {
    require_count(n, "empirical_entropy_mean_direct")?;
    let nf = n as f64;
    let lg_n = ln_gamma(nf)?;
    let mut total = 0.0;
    for &p in &dms.probs {
        let (lp, lq) = (p.ln(), (-p).ln_1p());
        for k in 1..=n {
            let kf = k as f64;
            let rest = nf - kf;
            let mut lw = lg_n - ln_gamma(kf)? - ln_gamma(rest + 1.0)? + kf * lp;
            if rest > 0.0 {
                lw += rest * lq;
            }
            total += lw.exp() * (nf / kf).ln();
        }
    }
    Ok(total)
}

// Second-difference bracket shared by both variance paths, in the scaled
// variables (u, v) ↦ (nu, nv):
// e^{-n(u+v)} Z₀ − e^{-nv} Z(u, 0) − e^{-nu} Z(0, v) + Z(u, v).
fn variance_double_integral<F>(nf: f64, z: F, cfg: &QuadConfig) -> Result<f64>
where
    F: Fn(f64, f64) -> f64 + Sync,
{
    let z00 = z(0.0, 0.0);
    let r = integrate_semi_infinite_2d(
        |a, b| {
            let (u, v) = (a / nf, b / nf);
            let val = (-(a + b)).exp() * z00 - (-b).exp() * z(u, 0.0) - (-a).exp() * z(0.0, v) + z(u, v);
            val / (a * b)
        },
        cfg,
    )?;
    Ok(r.value)
}

/// `Var{Ĥ}`. The binary symmetric source uses its own closed-form kernels;
/// other sources go through the general aggregator of `φ_n''` and `ψ_n''`.
pub fn empirical_entropy_var(dms: &DmsModel, n: u32, cfg: &QuadConfig) -> Result<f64> {
    if dms.is_bss() {
        empirical_entropy_var_bss(n, cfg)
    } else {
        empirical_entropy_var_general(dms, n, cfg)
    }
}

/// `Var{Ĥ}` through `Z(r, s, t) = Σ_x φ_n''(x, r) + Σ_{x'≠x} ψ_n''(x, x', s, t)`.
pub fn empirical_entropy_var_general(dms: &DmsModel, n: u32, cfg: &QuadConfig) -> Result<f64> {
    require_count(n, "empirical_entropy_var")?;
    if n == 1 {
        return Ok(0.0);
    }
    let nf = n as f64;
    let probs = &dms.probs;
    // Z(−n(u+v), −nu, −nv) with the φ part at the sum of the two arguments
    let z = |u: f64, v: f64| {
        let mut total = 0.0;
        for (i, &p) in probs.iter().enumerate() {
            total += phi_parts(p, nf, -nf * (u + v)).2;
            for (j, &pp) in probs.iter().enumerate() {
                if i != j {
                    total += psi_parts(p, pp, nf, -nf * u, -nf * v).1;
                }
            }
        }
        total
    };
    let second = variance_double_integral(nf, z, cfg)?;
    let mean = empirical_entropy_mean(dms, n, cfg)?;
    Ok(second - mean * mean)
}

/// `Var{Ĥ}` for the binary symmetric source from the kernels
/// `f_n(s) = e^{-s}((1+e^{-s})/2)^{n−2}(1+ne^{-s})/(n+1)` and
/// `g_n(s,t) = e^{-s-t}((e^{-s}+e^{-t})/2)^{n−2}`.
pub fn empirical_entropy_var_bss(n: u32, cfg: &QuadConfig) -> Result<f64> {
    require_count(n, "empirical_entropy_var")?;
    if n == 1 {
        return Ok(0.0);
    }
    let nf = n as f64;
    let f = |s: f64| {
        // ln((1 + e^{-s})/2)
        let lb = (0.5 * (-s).exp_m1()).ln_1p();
        (-s + power_exponent(nf - 2.0, lb)).exp() * (1.0 + nf * (-s).exp()) / (nf + 1.0)
    };
    let g = |s: f64, t: f64| {
        let lc = (0.5 * ((-s).exp_m1() + (-t).exp_m1())).ln_1p();
        (-s - t + power_exponent(nf - 2.0, lc)).exp()
    };
    let i_f = variance_double_integral(nf, |u, v| f(u + v), cfg)?;
    let i_g = variance_double_integral(nf, g, cfg)?;
    let mean = empirical_entropy_mean(&DmsModel::bss(), n, cfg)?;
    Ok(0.5 * (1.0 + 1.0 / nf) * i_f + 0.5 * (1.0 - 1.0 / nf) * i_g - mean * mean)
}

/// Series coefficients of the K-T bracket, `B(u) ≈ b₁u + b₂u²`.
fn kt_series(dms: &DmsModel, nf: f64, s_bias: f64) -> (f64, f64) {
    let size = dms.probs.len() as f64;
    let p2: f64 = dms.probs.iter().map(|p| p * p).sum();
    let p3: f64 = dms.probs.iter().map(|p| p * p * p).sum();
    let c = s_bias * size;
    let a_tot = p2 * nf * (nf - 1.0) / 2.0;
    let b_tot = p3 * nf * (nf - 1.0) * (nf - 2.0) / 6.0;
    let q2 = (nf - 1.0) * nf * (2.0 * nf - 1.0) / 6.0 + c * nf * (nf - 1.0) + nf * c * c;
    let b1 = s_bias * nf * (size * p2 - 1.0);
    let b2 = a_tot / 2.0 + b_tot + s_bias * a_tot + s_bias * s_bias * nf / 2.0 - 0.5 * p3 * q2;
    (b1, b2)
}

/// Redundancy in nats per symbol of the Krichevsky-Trofimov sequential code
/// with bias `s_bias`, `Q(x | past) = (N_t(x) + s)/(t + s|X|)`:
///
/// `R_n = (1/n) ∫₀^∞ [e^{-us}(|X| − Σ_x(1 − P(1−e^{-u}))ⁿ)/(1 − e^{-u})
///        − Σ_x P e^{-us|X|P}(1 − e^{-uPn})/(1 − e^{-uP})] du/u`.
///
/// The two terms are evaluated together; close to the origin, where they
/// cancel, a second-order series in `u` takes over.
pub fn kt_redundancy(dms: &DmsModel, n: u32, s_bias: f64, cfg: &QuadConfig) -> Result<f64> {
    require_count(n, "kt_redundancy")?;
    if !(s_bias > 0.0 && s_bias.is_finite()) {
        return Err(Error::domain("kt_redundancy", format!("bias must be positive, got {s_bias}")));
    }
    let nf = n as f64;
    let size = dms.probs.len() as f64;
    let (b1, b2) = kt_series(dms, nf, s_bias);
    let bracket = |u: f64| {
        if u * nf < 1e-6 {
            return u * (b1 + b2 * u);
        }
        let w = -(-u).exp_m1();
        let first: f64 = dms
            .probs
            .iter()
            .map(|&p| -(nf * (-p * w).ln_1p()).exp_m1() / w)
            .sum::<f64>()
            * (-u * s_bias).exp();
        let second: f64 = dms
            .probs
            .iter()
            .map(|&p| p * (-u * s_bias * size * p).exp() * (-u * p * nf).exp_m1() / (-u * p).exp_m1())
            .sum();
        first - second
    };
    // in the variable v = n u
    let r = integrate_semi_infinite(|v| bracket(v / nf) / v, cfg)?;
    Ok(r.value / nf)
}
