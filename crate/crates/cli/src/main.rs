//! `logint`: CSV tables of log-moment computations and oracle validation.

mod grid;

use std::f64::consts::LN_2;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use thiserror::Error;

use logint::cauchy_entropy::multivariate_cauchy_entropy;
use logint::log_moments::expect_ln;
use logint::mgf::{deterministic_mgf, uniform01_mgf};
use logint::simo_capacity::{capacity_variance, ergodic_capacity, SimoChannel};
use logint::universal_coding::{
    empirical_entropy_mean, empirical_entropy_var, expected_hb, expected_hb_mean_iid, kt_redundancy, DmsModel,
};
use logint::validation::{run_validation, Fault, Suite};
use logint::{QuadConfig, QuadError};

const EXIT_USAGE: u8 = 1;
const EXIT_NON_CONVERGENCE: u8 = 2;
const EXIT_VALIDATION: u8 = 3;

#[derive(Debug, Error)]
enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Compute(#[from] logint::Error),
    #[error("cannot write output: {0}")]
    Io(#[from] io::Error),
    #[error("validation failed: {0} check(s)")]
    Validation(usize),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Compute(logint::Error::Quad(QuadError::InvalidConfig(_))) => EXIT_USAGE,
            CliError::Compute(logint::Error::Quad(_)) => EXIT_NON_CONVERGENCE,
            CliError::Validation(_) => EXIT_VALIDATION,
            _ => EXIT_USAGE,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Units {
    Nats,
    Bits,
}

#[derive(Debug, Parser)]
#[command(name = "logint", version, about = "Log-moments of positive random variables from their MGFs")]
struct Cli {
    #[command(flatten)]
    output: OutputArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct OutputArgs {
    /// Units for entropies, capacities and redundancies
    #[arg(long, value_enum, default_value_t = Units::Nats, global = true)]
    units: Units,
    /// Decimal places in the CSV output (1 to 17)
    #[arg(long, default_value_t = 9, value_parser = clap::value_parser!(u8).range(1..=17), global = true)]
    precision: u8,
    /// Write to this file instead of standard output
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// ln x by quadrature next to the built-in logarithm
    Lnx {
        #[arg(required = true, allow_negative_numbers = true)]
        x: Vec<f64>,
    },
    /// Differential entropy of the standard multivariate Cauchy density
    Cauchy {
        #[arg(long, default_value_t = 30)]
        n_max: u32,
    },
    /// Ergodic capacity of a Rayleigh-fading SIMO channel over an SNR sweep
    Simo {
        /// Comma-separated antenna variances
        #[arg(long, default_value = "0.5,1")]
        sigma_sq: String,
        /// SNR grid in dB, start:stop:step
        #[arg(long, default_value = "-10:30:0.5", allow_hyphen_values = true)]
        snr_db: String,
        /// Add the variance of ln(1 + SNR) as a column
        #[arg(long)]
        with_variance: bool,
    },
    /// Expected binary entropy of the mean of n uniform Bernoulli parameters
    Avs {
        #[arg(long, default_value_t = 5)]
        n_max: u32,
    },
    /// Bias and spread of the plug-in entropy estimate
    Empent {
        /// Comma-separated sample sizes
        #[arg(long, default_value = "1,2,5,10,20,50,100,200,500,1000")]
        n: String,
        /// Comma-separated letter probabilities
        #[arg(long, default_value = "0.5,0.5")]
        probs: String,
    },
    /// Redundancy of the Krichevsky-Trofimov code
    Kt {
        #[arg(long, default_value_t = 1000)]
        n_max: u32,
        #[arg(long, default_value_t = 0.5)]
        s_bias: f64,
        /// Comma-separated letter probabilities
        #[arg(long, default_value = "0.5,0.5")]
        probs: String,
    },
    /// Cross-check the library against independent oracles
    Validate {
        #[arg(long, default_value = "all")]
        suite: Suite,
        #[arg(long, default_value_t = 200_000)]
        trials: u64,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Deliberately break a component (e1) to exercise the checks
        #[arg(long)]
        inject_fault: Option<Fault>,
    },
}

struct Table {
    header: Vec<&'static str>,
    rows: Vec<Vec<f64>>,
}

impl Table {
    fn render(&self, precision: usize) -> String {
        let mut out = self.header.join(",");
        out.push('\n');
        for row in &self.rows {
            // the key column (n, x or SNR) keeps its shortest form
            let cells: Vec<String> = row
                .iter()
                .enumerate()
                .map(|(i, v)| if i == 0 { format!("{v}") } else { format_cell(*v, precision) })
                .collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }
}

fn format_cell(v: f64, precision: usize) -> String {
    if v.is_nan() {
        "nan".to_string()
    } else {
        let s = format!("{v:.precision$}");
        // a value that rounds to zero prints without a sign
        if s.starts_with('-') && s[1..].bytes().all(|b| b == b'0' || b == b'.') {
            s[1..].to_string()
        } else {
            s
        }
    }
}

struct Scale(f64);

impl Scale {
    fn new(units: Units) -> Self {
        Scale(match units {
            Units::Nats => 1.0,
            Units::Bits => 1.0 / LN_2,
        })
    }

    fn value(&self, nats: f64) -> f64 {
        nats * self.0
    }

    fn variance(&self, nats_sq: f64) -> f64 {
        nats_sq * self.0 * self.0
    }
}

fn dms_from(probs: &str) -> Result<DmsModel, CliError> {
    let p = grid::parse_list::<f64>(probs, "probability").map_err(CliError::Usage)?;
    Ok(DmsModel::new(p)?)
}

fn positive_count(n: u32, flag: &str) -> Result<(), CliError> {
    if n == 0 {
        return Err(CliError::Usage(format!("{flag} must be at least 1")));
    }
    Ok(())
}

fn rows<T, F>(items: &[T], f: F) -> Result<Vec<Vec<f64>>, CliError>
where
    T: Sync,
    F: Fn(&T) -> Result<Vec<f64>, CliError> + Sync + Send,
{
    items.par_iter().map(f).collect()
}

fn run_table(command: &Command, scale: &Scale, cfg: &QuadConfig) -> Result<Table, CliError> {
    match command {
        Command::Lnx { x } => {
            if let Some(bad) = x.iter().find(|v| !(**v > 0.0 && v.is_finite())) {
                return Err(CliError::Usage(format!("x must be positive, got {bad}")));
            }
            Ok(Table {
                header: vec!["x", "ln_quadrature", "ln_builtin", "abs_diff"],
                rows: rows(x, |&x| {
                    let q = expect_ln(&deterministic_mgf(x), cfg)?;
                    Ok(vec![x, q, x.ln(), (q - x.ln()).abs()])
                })?,
            })
        }
        Command::Cauchy { n_max } => {
            positive_count(*n_max, "--n-max")?;
            let ns: Vec<u32> = (1..=*n_max).collect();
            Ok(Table {
                header: vec!["n", "h_n", "h_n_over_n"],
                rows: rows(&ns, |&n| {
                    let h = scale.value(multivariate_cauchy_entropy(n, cfg)?);
                    Ok(vec![n as f64, h, h / n as f64])
                })?,
            })
        }
        Command::Simo {
            sigma_sq,
            snr_db,
            with_variance,
        } => {
            let sigma = grid::parse_list::<f64>(sigma_sq, "antenna variance").map_err(CliError::Usage)?;
            let grid = grid::parse_grid(snr_db).map_err(CliError::Usage)?;
            let mut header = vec!["snr_db", "capacity"];
            if *with_variance {
                header.push("variance");
            }
            Ok(Table {
                header,
                rows: rows(&grid, |&db| {
                    let ch = SimoChannel::new(sigma.clone(), 10f64.powf(db / 10.0))?;
                    let mut row = vec![db, scale.value(ergodic_capacity(&ch, cfg)?)];
                    if *with_variance {
                        row.push(scale.variance(capacity_variance(&ch, cfg)?));
                    }
                    Ok(row)
                })?,
            })
        }
        Command::Avs { n_max } => {
            positive_count(*n_max, "--n-max")?;
            let x = uniform01_mgf();
            let base = expected_hb(&x, cfg)?;
            let ns: Vec<u32> = (1..=*n_max).collect();
            Ok(Table {
                header: vec!["n", "expected_hb_mean", "redundancy", "near_ln2"],
                rows: rows(&ns, |&n| {
                    let mean = expected_hb_mean_iid(&x, n, cfg)?;
                    let near = if (mean - LN_2).abs() <= 0.01 { 1.0 } else { 0.0 };
                    Ok(vec![n as f64, scale.value(mean), scale.value(mean - base), near])
                })?,
            })
        }
        Command::Empent { n, probs } => {
            let dms = dms_from(probs)?;
            let ns = grid::parse_list::<u32>(n, "sample size").map_err(CliError::Usage)?;
            if ns.contains(&0) {
                return Err(CliError::Usage("sample sizes must be at least 1".into()));
            }
            let h = dms.entropy();
            Ok(Table {
                header: vec!["n", "entropy_minus_mean", "std_dev"],
                rows: rows(&ns, |&n| {
                    let mean = empirical_entropy_mean(&dms, n, cfg)?;
                    let var = empirical_entropy_var(&dms, n, cfg)?.max(0.0);
                    Ok(vec![n as f64, scale.value(h - mean), scale.value(var.sqrt())])
                })?,
            })
        }
        Command::Kt { n_max, s_bias, probs } => {
            positive_count(*n_max, "--n-max")?;
            let dms = dms_from(probs)?;
            let ns: Vec<u32> = (1..=*n_max).collect();
            Ok(Table {
                header: vec!["n", "ln_n", "n_times_rn"],
                rows: rows(&ns, |&n| {
                    let r = kt_redundancy(&dms, n, *s_bias, cfg)?;
                    Ok(vec![n as f64, (n as f64).ln(), scale.value(n as f64 * r)])
                })?,
            })
        }
        Command::Validate { .. } => unreachable!("validation is not tabular"),
    }
}

fn emit(text: &str, out: &Option<PathBuf>) -> Result<(), CliError> {
    match out {
        Some(path) => {
            let mut w = BufWriter::new(File::create(path)?);
            w.write_all(text.as_bytes())?;
            w.flush()?;
        }
        None => {
            let mut stdout = io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            stdout.flush()?;
        }
    }
    Ok(())
}

fn configure_threads() -> Result<(), CliError> {
    if let Ok(raw) = std::env::var("LOGINT_THREADS") {
        let n: usize = raw
            .trim()
            .parse()
            .ok()
            .filter(|&n| n >= 1)
            .ok_or_else(|| CliError::Usage(format!("LOGINT_THREADS must be a positive integer, got '{raw}'")))?;
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Usage(e.to_string()))?;
    }
    Ok(())
}

fn run(cli: Cli) -> Result<(), CliError> {
    configure_threads()?;
    let output = &cli.output;
    if let Command::Validate {
        suite,
        trials,
        seed,
        inject_fault,
    } = &cli.command
    {
        let report = run_validation(*suite, *trials, *seed, *inject_fault)?;
        emit(&report.render(), &output.out)?;
        let failed = report.failures().count();
        return if failed == 0 {
            Ok(())
        } else {
            Err(CliError::Validation(failed))
        };
    }
    let cfg = QuadConfig::default();
    let table = run_table(&cli.command, &Scale::new(output.units), &cfg)?;
    emit(&table.render(output.precision as usize), &output.out)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(EXIT_USAGE)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("logint: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
