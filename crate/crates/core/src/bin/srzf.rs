use std::fs::File;
use std::io::BufWriter;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use srzf::harness::{
    evaluate_point, run_sweep_detailed, write_csv, PointConfig, PointOutcome, ResultRow, SweepSpec,
    SweepVariable, TuningMode,
};
use srzf::{Error, Execution, Result, Scheme};

#[derive(Parser, Debug)]
#[command(
    name = "srzf",
    version,
    about = "Secrecy rates of SRZF and RZF precoding in MIMOME downlinks"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evaluate a single operating point.
    Point(Common),
    /// Sweep the eavesdropper SNR (dB).
    SweepMuO {
        #[command(flatten)]
        common: Common,
        /// Comma-separated dB values [default: -8,-7,...,8].
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        values: Vec<f64>,
    },
    /// Sweep the overhearing channel load J/M.
    SweepAlphaO {
        #[command(flatten)]
        common: Common,
        /// Comma-separated loads.
        #[arg(long, value_delimiter = ',', required = true)]
        values: Vec<f64>,
    },
    /// Optimize precoder parameters on the large-system limit.
    Tune(Common),
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum SchemeArg {
    Srzf,
    Rzf,
    Both,
}

impl SchemeArg {
    fn schemes(self) -> Vec<Scheme> {
        match self {
            SchemeArg::Srzf => vec![Scheme::Srzf],
            SchemeArg::Rzf => vec![Scheme::Rzf],
            SchemeArg::Both => vec![Scheme::Srzf, Scheme::Rzf],
        }
    }
}

#[derive(Args, Debug, Clone)]
struct Common {
    /// Transmit antennas M.
    #[arg(long, default_value_t = 128)]
    m: usize,
    /// Legitimate channel load K/M.
    #[arg(long, default_value_t = 0.5)]
    alpha_l: f64,
    /// Overhearing channel load J/M.
    #[arg(long, default_value_t = 0.25)]
    alpha_o: f64,
    /// Receive SNR at the users, dB.
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    mu_l_db: f64,
    /// Receive SNR at the eavesdroppers, dB.
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    mu_o_db: f64,
    /// Monte Carlo trials per point (0 = asymptotic only).
    #[arg(long, default_value_t = 0)]
    trials: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// SRZF regularizer (ignored with --optimized).
    #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
    lambda: f64,
    /// SRZF leakage weight (ignored with --optimized).
    #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
    theta: f64,
    /// RZF regularizer (ignored with --optimized).
    #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
    zeta: f64,
    /// Tune parameters to maximize the asymptotic secrecy rate.
    #[arg(long)]
    optimized: bool,
    #[arg(long, value_enum, default_value_t = SchemeArg::Both)]
    scheme: SchemeArg,
    /// Write CSV rows here.
    #[arg(long)]
    output: Option<PathBuf>,
}

impl Common {
    fn point(&self) -> PointConfig {
        PointConfig {
            antennas: self.m,
            alpha_l: self.alpha_l,
            alpha_o: self.alpha_o,
            mu_l_db: self.mu_l_db,
            mu_o_db: self.mu_o_db,
            trials: self.trials,
            seed: self.seed,
        }
    }

    fn tuning(&self) -> TuningMode {
        if self.optimized {
            TuningMode::optimized()
        } else {
            TuningMode::Fixed {
                lambda: self.lambda,
                theta: self.theta,
                zeta: self.zeta,
            }
        }
    }
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map_or_else(|| "-".to_string(), |v| format!("{v:.6}"))
}

fn print_rows(outcomes: &[PointOutcome]) {
    println!(
        "{:>10} {:>12} {:>6} {:>12} {:>12} {:>10} {:>10} {:>10}",
        "variable", "value", "scheme", "lambda", "theta", "asymptotic", "simulated", "stderr"
    );
    for o in outcomes {
        let r = &o.row;
        println!(
            "{:>10} {:>12.6} {:>6} {:>12.6} {:>12.6} {:>10.6} {:>10} {:>10}",
            r.sweep_variable,
            r.sweep_value,
            r.scheme,
            r.lambda,
            r.theta,
            r.rate_asymptotic,
            fmt_opt(r.rate_simulated),
            fmt_opt(r.stderr)
        );
    }
}

fn write_output(path: Option<&Path>, rows: &[ResultRow]) -> Result<()> {
    let Some(path) = path else { return Ok(()) };
    let file = File::create(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    write_csv(rows, BufWriter::new(file)).map_err(|e| match e {
        Error::Csv(c) if c.is_io_error() => Error::Io {
            path: path.to_path_buf(),
            source: std::io::Error::other(c.to_string()),
        },
        other => other,
    })?;
    println!("wrote {} rows to {}", rows.len(), path.display());
    Ok(())
}

fn single_point(common: &Common) -> Result<Vec<PointOutcome>> {
    let cfg = common.point();
    let tuning = common.tuning();
    common
        .scheme
        .schemes()
        .into_iter()
        .map(|s| {
            evaluate_point(
                &cfg,
                s,
                &tuning,
                (SweepVariable::MuODb, cfg.mu_o_db),
                Execution::default(),
            )
        })
        .collect()
}

fn sweep(common: &Common, variable: SweepVariable, values: Vec<f64>) -> Result<Vec<PointOutcome>> {
    let spec = SweepSpec {
        variable,
        values,
        fixed: common.point(),
        schemes: common.scheme.schemes(),
        tuning: common.tuning(),
    };
    run_sweep_detailed(&spec, Execution::default())
}

fn run(cli: Cli) -> Result<()> {
    let (common, outcomes) = match cli.command {
        Command::Point(common) => {
            let out = single_point(&common)?;
            (common, out)
        }
        Command::SweepMuO { common, values } => {
            let values = if values.is_empty() {
                (-8..=8).map(f64::from).collect()
            } else {
                values
            };
            let out = sweep(&common, SweepVariable::MuODb, values)?;
            (common, out)
        }
        Command::SweepAlphaO { common, values } => {
            let out = sweep(&common, SweepVariable::AlphaO, values)?;
            (common, out)
        }
        Command::Tune(mut common) => {
            common.optimized = true;
            common.trials = 0;
            let out = single_point(&common)?;
            for o in &out {
                if let Some(t) = &o.tuned {
                    println!(
                        "{}: lambda* = {:.9} theta* = {:.9} rate* = {:.9} bits ({} evaluations{})",
                        t.scheme,
                        t.lambda_star,
                        t.theta_star,
                        t.rate_star,
                        t.grid_evals,
                        if t.plateau { ", plateau" } else { "" }
                    );
                }
            }
            (common, out)
        }
    };
    print_rows(&outcomes);
    let rows: Vec<ResultRow> = outcomes.into_iter().map(|o| o.row).collect();
    write_output(common.output.as_deref(), &rows)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
