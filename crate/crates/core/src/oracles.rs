//! Independent reference computations: seeded Monte Carlo, exact
//! enumeration and closed-form identities. Nothing in the main computation
//! paths depends on this module.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use crate::cauchy_entropy::{ln_normalizer_cn, GenCauchyModel};
use crate::error::{Error, Result};
use crate::quadrature::{integrate_semi_infinite, QuadConfig};
use crate::special_functions::ln_gamma;
use crate::universal_coding::DmsModel;

/// Generator handed to samplers. Batch `i` of a run uses stream `i` of the
/// generator seeded from [`McConfig::seed`].
pub type McRng = ChaCha8Rng;

const DEFAULT_BATCH: u64 = 1 << 14;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct McConfig {
    trials: u64,
    seed: u64,
    batch: u64,
}

impl McConfig {
    pub fn new(trials: u64, seed: u64) -> Result<Self> {
        if trials == 0 {
            return Err(Error::domain("McConfig", "trials must be at least 1"));
        }
        Ok(Self {
            trials,
            seed,
            batch: DEFAULT_BATCH,
        })
    }

    /// Samples per independently seeded batch. Changing it changes the
    /// estimate; the thread count never does.
    pub fn with_batch(mut self, batch: u64) -> Result<Self> {
        if batch == 0 {
            return Err(Error::domain("McConfig", "batch must be at least 1"));
        }
        self.batch = batch;
        Ok(self)
    }

    pub fn trials(&self) -> u64 {
        self.trials
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn batch(&self) -> u64 {
        self.batch
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McEstimate {
    pub mean: f64,
    pub std_error: f64,
    pub trials: u64,
}

impl McEstimate {
    /// `|mean − reference| ≤ k·std_error`.
    pub fn within(&self, reference: f64, k: f64) -> bool {
        (self.mean - reference).abs() <= k * self.std_error
    }
}

// Central moments through fourth order, merged pairwise.
#[derive(Debug, Clone, Copy, Default)]
struct Moments {
    n: f64,
    mean: f64,
    m2: f64,
    m3: f64,
    m4: f64,
}

impl Moments {
    fn push(&mut self, x: f64) {
        let n1 = self.n;
        self.n += 1.0;
        let n = self.n;
        let delta = x - self.mean;
        let dn = delta / n;
        let dn2 = dn * dn;
        let t = delta * dn * n1;
        self.mean += dn;
        self.m4 += t * dn2 * (n * n - 3.0 * n + 3.0) + 6.0 * dn2 * self.m2 - 4.0 * dn * self.m3;
        self.m3 += t * dn * (n - 2.0) - 3.0 * dn * self.m2;
        self.m2 += t;
    }

    fn merge(self, b: Moments) -> Moments {
        if self.n == 0.0 {
            return b;
        }
        if b.n == 0.0 {
            return self;
        }
        let (na, nb) = (self.n, b.n);
        let n = na + nb;
        let d = b.mean - self.mean;
        let dn = d / n;
        let dn2 = dn * dn;
        Moments {
            n,
            mean: self.mean + nb * dn,
            m2: self.m2 + b.m2 + d * dn * na * nb,
            m3: self.m3 + b.m3 + d * dn2 * na * nb * (na - nb) + 3.0 * dn * (na * b.m2 - nb * self.m2),
            m4: self.m4
                + b.m4
                + d * dn2 * dn * na * nb * (na * na - na * nb + nb * nb)
                + 6.0 * dn2 * (na * na * b.m2 + nb * nb * self.m2)
                + 4.0 * dn * (na * b.m3 - nb * self.m3),
        }
    }

    fn sample_variance(&self) -> f64 {
        if self.n > 1.0 {
            (self.m2 / (self.n - 1.0)).max(0.0)
        } else {
            0.0
        }
    }

    fn mean_estimate(&self) -> McEstimate {
        McEstimate {
            mean: self.mean,
            std_error: (self.sample_variance() / self.n).sqrt(),
            trials: self.n as u64,
        }
    }

    fn variance_estimate(&self) -> McEstimate {
        let s2 = self.sample_variance();
        let n = self.n;
        let spread = if n > 3.0 {
            (self.m4 / n - (n - 3.0) / (n - 1.0) * s2 * s2).max(0.0) / n
        } else {
            0.0
        };
        McEstimate {
            mean: s2,
            std_error: spread.sqrt(),
            trials: n as u64,
        }
    }
}

// Batches run in parallel; their moments are merged in batch order so the
// result does not depend on scheduling.
fn run<F>(mc: &McConfig, draw: F) -> Moments
where
    F: Fn(&mut McRng) -> f64 + Sync,
{
    let batches = mc.trials.div_ceil(mc.batch);
    let parts: Vec<Moments> = (0..batches)
        .into_par_iter()
        .map(|i| {
            let mut rng = McRng::seed_from_u64(mc.seed);
            rng.set_stream(i);
            let size = mc.batch.min(mc.trials - i * mc.batch);
            let mut m = Moments::default();
            for _ in 0..size {
                m.push(draw(&mut rng));
            }
            m
        })
        .collect();
    parts.into_iter().fold(Moments::default(), Moments::merge)
}

/// Sample mean and standard error of `f(X)` with `X` drawn by `sampler`.
pub fn mc_expect_ln<S, F>(sampler: S, f: F, mc: &McConfig) -> McEstimate
where
    S: Fn(&mut McRng) -> f64 + Sync,
    F: Fn(f64) -> f64 + Sync,
{
    run(mc, |rng| f(sampler(rng))).mean_estimate()
}

fn draw_letter(rng: &mut McRng, probs: &[f64]) -> usize {
    let r: f64 = rng.random();
    let mut acc = 0.0;
    for (i, &p) in probs.iter().enumerate() {
        acc += p;
        if r < acc {
            return i;
        }
    }
    probs.len() - 1
}

/// Per-symbol redundancy `L(xⁿ)/n − H` of the sequential code
/// `Q(x | past) = (N_t(x) + s)/(t + s|X|)` on sequences drawn from `dms`.
pub fn mc_kt_redundancy(dms: &DmsModel, n: u32, s_bias: f64, mc: &McConfig) -> Result<McEstimate> {
    if n == 0 {
        return Err(Error::domain("mc_kt_redundancy", "n must be at least 1"));
    }
    if !(s_bias > 0.0 && s_bias.is_finite()) {
        return Err(Error::domain("mc_kt_redundancy", format!("bias must be positive, got {s_bias}")));
    }
    let probs = dms.probs();
    let size = probs.len() as f64;
    let entropy = dms.entropy();
    let m = run(mc, |rng| {
        let mut counts = vec![0u32; probs.len()];
        let mut length = 0.0;
        for t in 0..n {
            let x = draw_letter(rng, probs);
            length -= ((counts[x] as f64 + s_bias) / (t as f64 + s_bias * size)).ln();
            counts[x] += 1;
        }
        length / n as f64 - entropy
    });
    Ok(m.mean_estimate())
}

/// Estimates of the mean and variance of `ln(1 + ρΣ|h_ℓ|²)` with
/// `h_ℓ = f_ℓ + i g_ℓ`, `f_ℓ, g_ℓ ~ N(0, σ_ℓ²/2)` independent.
pub fn mc_simo(sigma_sq: &[f64], rho: f64, mc: &McConfig) -> Result<(McEstimate, McEstimate)> {
    if sigma_sq.is_empty() || sigma_sq.iter().any(|&s| !(s > 0.0 && s.is_finite())) {
        return Err(Error::domain("mc_simo", format!("antenna variances must be positive, got {sigma_sq:?}")));
    }
    if !(rho >= 0.0 && rho.is_finite()) {
        return Err(Error::domain("mc_simo", format!("SNR must be nonnegative, got {rho}")));
    }
    let scales: Vec<f64> = sigma_sq.iter().map(|&s| (0.5 * s).sqrt()).collect();
    let m = run(mc, |rng| {
        let gain: f64 = scales
            .iter()
            .map(|&c| {
                let f: f64 = rng.sample(StandardNormal);
                let g: f64 = rng.sample(StandardNormal);
                c * c * (f * f + g * g)
            })
            .sum();
        (rho * gain).ln_1p()
    });
    Ok((m.mean_estimate(), m.variance_estimate()))
}

const ENUMERATION_BUDGET: usize = 1_000_000;

/// Exact `E{Ĥ}` and `Var{Ĥ}` (nats) by summing over all type classes of
/// length-`n` sequences. Refuses when there are more than 10⁶ classes.
pub fn enumerate_empirical_entropy(dms: &DmsModel, n: u32) -> Result<(f64, f64)> {
    if n == 0 {
        return Err(Error::domain("enumerate_empirical_entropy", "n must be at least 1"));
    }
    let k = dms.alphabet_size();
    let nf = n as f64;
    let classes = (ln_gamma(nf + k as f64)? - ln_gamma(nf + 1.0)? - ln_gamma(k as f64)?).exp();
    if classes > ENUMERATION_BUDGET as f64 + 0.5 {
        return Err(Error::BudgetExceeded {
            needed: classes.round(),
            budget: ENUMERATION_BUDGET,
        });
    }
    let mut ln_fact = vec![0.0; n as usize + 1];
    for i in 1..=n as usize {
        ln_fact[i] = ln_fact[i - 1] + (i as f64).ln();
    }
    let ln_p: Vec<f64> = dms.probs().iter().map(|p| p.ln()).collect();
    let mut outcomes = Vec::new();
    let mut counts = vec![0u32; k];
    enumerate_types(&mut counts, 0, n, &mut |c| {
        let mut lw = ln_fact[n as usize];
        let mut h = 0.0;
        for (&ci, &lp) in c.iter().zip(&ln_p) {
            if ci > 0 {
                let f = ci as f64 / nf;
                lw += ci as f64 * lp - ln_fact[ci as usize];
                h -= f * f.ln();
            }
        }
        outcomes.push((lw.exp(), h));
    });
    let mean: f64 = outcomes.iter().map(|&(w, h)| w * h).sum();
    let var: f64 = outcomes.iter().map(|&(w, h)| w * (h - mean) * (h - mean)).sum();
    Ok((mean, var))
}

fn enumerate_types(counts: &mut [u32], pos: usize, left: u32, visit: &mut impl FnMut(&[u32])) {
    if pos + 1 == counts.len() {
        counts[pos] = left;
        visit(counts);
        return;
    }
    for c in 0..=left {
        counts[pos] = c;
        enumerate_types(counts, pos + 1, left - c, visit);
    }
}

fn require_positive(what: &'static str, x: f64) -> Result<()> {
    if x > 0.0 && x.is_finite() {
        Ok(())
    } else {
        Err(Error::domain(what, format!("argument must be positive, got {x}")))
    }
}

/// `ψ(x)` by upward recurrence to `x ≥ 10` and the asymptotic series.
pub fn digamma(x: f64) -> Result<f64> {
    require_positive("digamma", x)?;
    let (mut x, mut acc) = (x, 0.0);
    while x < 10.0 {
        acc -= 1.0 / x;
        x += 1.0;
    }
    let r = 1.0 / (x * x);
    let series = r * (1.0 / 12.0 - r * (1.0 / 120.0 - r * (1.0 / 252.0 - r * (1.0 / 240.0 - r / 132.0))));
    Ok(acc + x.ln() - 0.5 / x - series)
}

/// `ψ'(x)` by upward recurrence to `x ≥ 10` and the asymptotic series.
pub fn trigamma(x: f64) -> Result<f64> {
    require_positive("trigamma", x)?;
    let (mut x, mut acc) = (x, 0.0);
    while x < 10.0 {
        acc += 1.0 / (x * x);
        x += 1.0;
    }
    let r = 1.0 / (x * x);
    let series = 1.0 / x + 0.5 * r + r / x * (1.0 / 6.0 - r * (1.0 / 30.0 - r * (1.0 / 42.0 - r * (1.0 / 30.0 - r * 5.0 / 66.0))));
    Ok(acc + series)
}

/// Differential entropy of the generalized Cauchy density from
/// `E{ln(1 + Σ|Xᵢ|^θ)} = ψ(q) − ψ(q − n/θ)`.
pub fn gen_cauchy_entropy_digamma(model: &GenCauchyModel) -> Result<f64> {
    let q = model.q();
    let a = model.n() as f64 / model.theta();
    Ok(q * (digamma(q)? - digamma(q - a)?) - ln_normalizer_cn(model))
}

/// `−∫ f ln f` for the standard `n`-dimensional Cauchy density, integrated
/// over the radius with the surface area `2π^{n/2}/Γ(n/2)`.
pub fn cauchy_entropy_radial(n: u32, cfg: &QuadConfig) -> Result<f64> {
    if n == 0 {
        return Err(Error::domain("cauchy_entropy_radial", "n must be at least 1"));
    }
    let nf = n as f64;
    let q = 0.5 * (nf + 1.0);
    let ln_c = ln_gamma(q)? - q * PI.ln();
    let ln_surface = std::f64::consts::LN_2 + 0.5 * nf * PI.ln() - ln_gamma(0.5 * nf)?;
    let r = integrate_semi_infinite(
        |r| {
            if r == 0.0 {
                return if n == 1 { -ln_c.exp() * ln_c } else { 0.0 };
            }
            let l = (r * r).ln_1p();
            let ln_f = ln_c - q * l;
            -(ln_surface + (nf - 1.0) * r.ln() + ln_f).exp() * ln_f
        },
        cfg,
    )?;
    Ok(r.value)
}
