//! Cross-checks of the library against the independent oracles, collected
//! into a plain-text report that is byte-identical for a fixed seed.

use std::f64::consts::{LN_2, PI};
use std::fmt::Write as _;
use std::str::FromStr;

use rand::Rng;
use rand_distr::Exp1;

use crate::cauchy_entropy::{multivariate_cauchy_entropy, GenCauchyModel};
use crate::error::Result;
use crate::log_moments::{expect_ln, expect_ln_power_sum, var_ln, PowerParam};
use crate::mgf::{deterministic_mgf, exponential_mgf, gaussian_square_mgf, uniform01_mgf};
use crate::oracles::{
    digamma, enumerate_empirical_entropy, gen_cauchy_entropy_digamma, mc_expect_ln, mc_kt_redundancy, mc_simo,
    trigamma, McConfig,
};
use crate::quadrature::{integrate_semi_infinite, QuadConfig};
use crate::simo_capacity::{capacity_variance, ergodic_capacity, SimoChannel};
use crate::special_functions::{exp_integral_e1, exp_integral_e1_corrupted, SpecialFnDomainError, EULER_GAMMA};
use crate::universal_coding::{empirical_entropy_mean, empirical_entropy_var, expected_hb_mean_iid, kt_redundancy, DmsModel};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Core,
    Apps,
    All,
}

impl Suite {
    pub fn name(self) -> &'static str {
        match self {
            Suite::Core => "core",
            Suite::Apps => "apps",
            Suite::All => "all",
        }
    }
}

impl FromStr for Suite {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "core" => Ok(Suite::Core),
            "apps" => Ok(Suite::Apps),
            "all" => Ok(Suite::All),
            _ => Err(format!("unknown suite '{s}' (expected core, apps or all)")),
        }
    }
}

/// Deliberate defects used to confirm that the checks can fail.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Fault {
    /// Perturb the leading constant of the E1 power series.
    E1Coefficient,
}

impl FromStr for Fault {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "e1" => Ok(Fault::E1Coefficient),
            _ => Err(format!("unknown fault '{s}' (expected e1)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub measured: f64,
    pub expected: f64,
    pub tolerance: f64,
    pub passed: bool,
    pub note: Option<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ValidationReport {
    pub suite: Suite,
    pub trials: u64,
    pub seed: u64,
    pub checks: Vec<Check>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "# suite={} trials={} seed={}",
            self.suite.name(),
            self.trials,
            self.seed
        );
        let _ = writeln!(out, "check,measured,expected,tolerance,status");
        for c in &self.checks {
            let _ = write!(
                out,
                "{},{:.12e},{:.12e},{:.3e},{}",
                c.name,
                c.measured,
                c.expected,
                c.tolerance,
                if c.passed { "PASS" } else { "FAIL" }
            );
            if let Some(note) = &c.note {
                let _ = write!(out, " ({note})");
            }
            out.push('\n');
        }
        let failed = self.failures().count();
        let _ = writeln!(out, "# {} checks, {} failed", self.checks.len(), failed);
        out
    }
}

struct Collector {
    checks: Vec<Check>,
}

impl Collector {
    fn abs(&mut self, name: impl Into<String>, measured: Result<f64>, expected: f64, tolerance: f64) {
        let name = name.into();
        let check = match measured {
            Ok(m) => Check {
                passed: (m - expected).abs() <= tolerance,
                name,
                measured: m,
                expected,
                tolerance,
                note: None,
            },
            Err(e) => Check {
                name,
                measured: f64::NAN,
                expected,
                tolerance,
                passed: false,
                note: Some(e.to_string()),
            },
        };
        self.checks.push(check);
    }

    fn rel(&mut self, name: impl Into<String>, measured: Result<f64>, expected: f64, tolerance: f64) {
        self.abs(name, measured, expected, tolerance * expected.abs());
    }

    // Monte Carlo estimate against an analytic value at three standard errors.
    fn sigma3(&mut self, name: impl Into<String>, estimate: Result<(f64, f64)>, analytic: Result<f64>) {
        let name = name.into();
        match (estimate, analytic) {
            (Ok((mean, se)), Ok(a)) => self.checks.push(Check {
                passed: (mean - a).abs() <= 3.0 * se,
                name,
                measured: mean,
                expected: a,
                tolerance: 3.0 * se,
                note: None,
            }),
            (Err(e), _) | (_, Err(e)) => self.abs(name, Err(e), f64::NAN, 0.0),
        }
    }
}

type E1Fn = fn(f64) -> std::result::Result<f64, SpecialFnDomainError>;

fn core_checks(col: &mut Collector, cfg: &QuadConfig, mc: &McConfig, e1: E1Fn) {
    for &x in &[1e-3, 0.5, 2.0, 1e3] {
        col.rel(format!("ln_identity[x={x}]"), expect_ln(&deterministic_mgf(x), cfg), x.ln(), 1e-9);
    }
    for &x in &[0.5, 1.0, 5.0] {
        let quad = integrate_semi_infinite(
            |v| {
                let s = x + v;
                (-s).exp() / (s * s)
            },
            cfg,
        );
        let expected = quad.map(|r| (-x).exp() / x - r.value);
        match expected {
            Ok(exp) => col.rel(format!("e1_recurrence[x={x}]"), e1(x).map_err(Into::into), exp, 1e-10),
            Err(e) => col.abs(format!("e1_recurrence[x={x}]"), Err(e.into()), f64::NAN, 0.0),
        }
    }
    col.abs("digamma[1]", digamma(1.0), -EULER_GAMMA, 1e-12);
    col.abs("digamma[1/2]", digamma(0.5), -EULER_GAMMA - 2.0 * LN_2, 1e-12);
    col.abs("trigamma[1]", trigamma(1.0), PI * PI / 6.0, 1e-12);
    let s2 = PowerParam::new(2.0).expect("valid power");
    for &n in &[1u32, 4, 10] {
        let expected = digamma(0.5 * n as f64).map(|d| 0.5 * (LN_2 + d)).unwrap_or(f64::NAN);
        col.abs(
            format!("chi_square_log_mean[n={n}]"),
            expect_ln_power_sum(&gaussian_square_mgf(), n, s2, cfg),
            expected,
            1e-8,
        );
    }
    match exponential_mgf(1.0) {
        Ok(exp_mgf) => {
            let one = PowerParam::default();
            col.abs("exponential_log_variance", var_ln(&exp_mgf, one, cfg), PI * PI / 6.0, 1e-8);
            let est = mc_expect_ln(|rng| rng.sample::<f64, _>(Exp1), f64::ln, mc);
            col.sigma3(
                "exponential_log_mean_mc",
                Ok((est.mean, est.std_error)),
                expect_ln(&exp_mgf, cfg),
            );
        }
        Err(e) => col.abs("exponential_mgf", Err(e), f64::NAN, 0.0),
    }
    col.abs("uniform_expected_hb", expected_hb_mean_iid(&uniform01_mgf(), 1, cfg), 0.5, 1e-9);
}

fn apps_checks(col: &mut Collector, cfg: &QuadConfig, mc: &McConfig, e1: E1Fn) {
    let closed = |rho: f64| -> Result<f64> {
        let (a, b) = (1.0 / rho, 2.0 / rho);
        Ok(2.0 * a.exp() * e1(a)? - b.exp() * e1(b)?)
    };
    for &rho in &[1.0, 10.0] {
        let name = format!("simo_closed_form[rho={rho}]");
        match (SimoChannel::new(vec![0.5, 1.0], rho), closed(rho)) {
            (Ok(ch), Ok(cf)) => col.rel(name, ergodic_capacity(&ch, cfg), cf, 1e-8),
            (Err(e), _) | (_, Err(e)) => col.abs(name, Err(e), f64::NAN, 0.0),
        }
    }
    for &rho in &[1.0, 10.0] {
        let (mean_name, var_name) = (format!("simo_capacity_mc[rho={rho}]"), format!("simo_variance_mc[rho={rho}]"));
        match (SimoChannel::new(vec![0.5, 1.0], rho), mc_simo(&[0.5, 1.0], rho, mc)) {
            (Ok(ch), Ok((m, v))) => {
                col.sigma3(mean_name, Ok((m.mean, m.std_error)), ergodic_capacity(&ch, cfg));
                col.sigma3(var_name, Ok((v.mean, v.std_error)), capacity_variance(&ch, cfg));
            }
            (Err(e), _) | (_, Err(e)) => col.abs(mean_name, Err(e), f64::NAN, 0.0),
        }
    }
    col.abs("cauchy_entropy[n=1]", multivariate_cauchy_entropy(1, cfg), (4.0 * PI).ln(), 1e-8);
    for &(theta, q, n) in &[(2.0, 2.0, 3u32), (1.0, 3.5, 2)] {
        let name = format!("cauchy_entropy_digamma[theta={theta},q={q},n={n}]");
        match GenCauchyModel::new(theta, q, n) {
            Ok(m) => {
                let exp = gen_cauchy_entropy_digamma(&m).unwrap_or(f64::NAN);
                col.abs(name, crate::cauchy_entropy::diff_entropy(&m, cfg), exp, 1e-7);
            }
            Err(e) => col.abs(name, Err(e), f64::NAN, 0.0),
        }
    }
    let bss = DmsModel::bss();
    for &n in &[5u32, 10] {
        match enumerate_empirical_entropy(&bss, n) {
            Ok((mean, var)) => {
                col.abs(format!("empirical_entropy_mean[n={n}]"), empirical_entropy_mean(&bss, n, cfg), mean, 1e-8);
                col.abs(format!("empirical_entropy_var[n={n}]"), empirical_entropy_var(&bss, n, cfg), var, 1e-8);
            }
            Err(e) => col.abs(format!("empirical_entropy_enumeration[n={n}]"), Err(e), f64::NAN, 0.0),
        }
    }
    let kt_mc = mc_kt_redundancy(&bss, 64, 0.5, mc).map(|e| (e.mean, e.std_error));
    col.sigma3("kt_redundancy_mc[n=64]", kt_mc, kt_redundancy(&bss, 64, 0.5, cfg));
    col.abs("avs_uniform[n=2]", expected_hb_mean_iid(&uniform01_mgf(), 2, cfg), 0.602, 5e-4);
}

/// Runs the chosen checks. Monte Carlo checks use `trials` samples from
/// generators seeded by `seed`.
pub fn run_validation(suite: Suite, trials: u64, seed: u64, fault: Option<Fault>) -> Result<ValidationReport> {
    let mc = McConfig::new(trials, seed)?;
    let cfg = QuadConfig::default();
    let e1: E1Fn = match fault {
        Some(Fault::E1Coefficient) => exp_integral_e1_corrupted,
        None => exp_integral_e1,
    };
    let mut col = Collector { checks: Vec::new() };
    if matches!(suite, Suite::Core | Suite::All) {
        core_checks(&mut col, &cfg, &mc, e1);
    }
    if matches!(suite, Suite::Apps | Suite::All) {
        apps_checks(&mut col, &cfg, &mc, e1);
    }
    Ok(ValidationReport {
        suite,
        trials,
        seed,
        checks: col.checks,
    })
}
