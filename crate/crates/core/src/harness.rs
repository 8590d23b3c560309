//! Single points and sweeps pairing the large-system limit with a Monte
//! Carlo estimate, written out as CSV.

use std::fmt;
use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use crate::channel::{db_to_linear, NoiseProfile, SystemDims};
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::montecarlo::{estimate_ergodic_rate_with, MonteCarloEstimate, Scheme, SchemeSpec};
use crate::precoding::{RzfParams, SrzfParams};
use crate::tuning::{tune, GridConfig, OperatingPoint, TunedParams};

/// Exact CSV header.
pub const CSV_HEADER: &str =
    "sweep_variable,sweep_value,scheme,lambda,theta,rate_asymptotic,rate_simulated,stderr,trials,seed";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepVariable {
    AlphaO,
    MuODb,
}

impl SweepVariable {
    pub fn name(self) -> &'static str {
        match self {
            SweepVariable::AlphaO => "alpha_o",
            SweepVariable::MuODb => "mu_o_db",
        }
    }
}

impl fmt::Display for SweepVariable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// How precoder parameters are chosen at each point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TuningMode {
    Fixed { lambda: f64, theta: f64, zeta: f64 },
    Optimized(GridConfig),
}

impl TuningMode {
    /// `lambda = theta = zeta = 1`.
    pub fn unit() -> Self {
        TuningMode::Fixed {
            lambda: 1.0,
            theta: 1.0,
            zeta: 1.0,
        }
    }

    pub fn optimized() -> Self {
        TuningMode::Optimized(GridConfig::default())
    }
}

/// Everything that defines one operating point apart from the scheme.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PointConfig {
    pub antennas: usize,
    pub alpha_l: f64,
    pub alpha_o: f64,
    pub mu_l_db: f64,
    pub mu_o_db: f64,
    /// Zero means asymptotic only.
    pub trials: usize,
    pub seed: u64,
}

impl PointConfig {
    pub fn operating_point(&self) -> Result<OperatingPoint> {
        OperatingPoint::new(
            self.alpha_l,
            self.alpha_o,
            db_to_linear(self.mu_l_db),
            db_to_linear(self.mu_o_db),
        )
    }

    fn with_sweep_value(mut self, var: SweepVariable, value: f64) -> Self {
        match var {
            SweepVariable::AlphaO => self.alpha_o = value,
            SweepVariable::MuODb => self.mu_o_db = value,
        }
        self
    }
}

/// One CSV row.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultRow {
    pub sweep_variable: String,
    pub sweep_value: f64,
    pub scheme: String,
    /// `lambda` for SRZF, `zeta` for RZF.
    pub lambda: f64,
    pub theta: f64,
    pub rate_asymptotic: f64,
    pub rate_simulated: Option<f64>,
    pub stderr: Option<f64>,
    pub trials: Option<usize>,
    pub seed: u64,
}

/// A row plus the diagnostics that do not go to the CSV.
#[derive(Debug, Clone, PartialEq)]
pub struct PointOutcome {
    pub row: ResultRow,
    pub estimate: Option<MonteCarloEstimate>,
    pub tuned: Option<TunedParams>,
}

fn scheme_spec(
    scheme: Scheme,
    tuning: &TuningMode,
    op: &OperatingPoint,
) -> Result<(SchemeSpec, Option<TunedParams>)> {
    match *tuning {
        TuningMode::Fixed {
            lambda,
            theta,
            zeta,
        } => Ok((
            match scheme {
                Scheme::Srzf => SchemeSpec::Srzf(SrzfParams::new(lambda, theta)?),
                Scheme::Rzf => SchemeSpec::Rzf(RzfParams::new(zeta)?),
            },
            None,
        )),
        TuningMode::Optimized(grid) => {
            let tuned = tune(scheme, op, &grid)?;
            Ok((tuned.spec()?, Some(tuned)))
        }
    }
}

/// Evaluates one scheme at one point. The row is labelled with the given
/// sweep variable and value.
pub fn evaluate_point(
    cfg: &PointConfig,
    scheme: Scheme,
    tuning: &TuningMode,
    label: (SweepVariable, f64),
    exec: Execution,
) -> Result<PointOutcome> {
    let op = cfg.operating_point()?;
    let dims = if cfg.trials > 0 {
        Some(SystemDims::from_loads(
            cfg.antennas,
            cfg.alpha_l,
            cfg.alpha_o,
        )?)
    } else {
        None
    };
    let (spec, tuned) = scheme_spec(scheme, tuning, &op)?;
    let asymptotic = op.evaluate(spec.regularizer(), spec.theta())?;

    let estimate = match dims {
        Some(dims) => {
            let noise = NoiseProfile::from_snr_db(cfg.mu_l_db, cfg.mu_o_db)?;
            Some(estimate_ergodic_rate_with(
                dims, &noise, &spec, cfg.trials, cfg.seed, exec,
            )?)
        }
        None => None,
    };

    let row = ResultRow {
        sweep_variable: label.0.name().to_string(),
        sweep_value: label.1,
        scheme: scheme.name().to_string(),
        lambda: spec.regularizer(),
        theta: spec.theta(),
        rate_asymptotic: asymptotic.rate,
        rate_simulated: estimate.map(|e| e.mean),
        stderr: estimate.map(|e| e.stderr),
        trials: estimate.map(|e| e.trials),
        seed: cfg.seed,
    };
    Ok(PointOutcome {
        row,
        estimate,
        tuned,
    })
}

/// Single point, labelled by its `mu_o` in dB.
pub fn run_point(cfg: &PointConfig, scheme: Scheme, tuning: &TuningMode) -> Result<ResultRow> {
    evaluate_point(
        cfg,
        scheme,
        tuning,
        (SweepVariable::MuODb, cfg.mu_o_db),
        Execution::default(),
    )
    .map(|o| o.row)
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub variable: SweepVariable,
    pub values: Vec<f64>,
    /// Base point; the swept field is overwritten per value.
    pub fixed: PointConfig,
    pub schemes: Vec<Scheme>,
    pub tuning: TuningMode,
}

impl SweepSpec {
    pub fn validate(&self) -> Result<()> {
        if self.values.is_empty() {
            return Err(Error::Input("sweep needs at least one value".into()));
        }
        if let Some(w) = self
            .values
            .windows(2)
            .find(|w| w[0].partial_cmp(&w[1]) != Some(std::cmp::Ordering::Less))
        {
            return Err(Error::Input(format!(
                "sweep values must be strictly increasing ({} then {})",
                w[0], w[1]
            )));
        }
        if self.schemes.is_empty() {
            return Err(Error::Input("sweep needs at least one scheme".into()));
        }
        for &v in &self.values {
            let cfg = self.fixed.with_sweep_value(self.variable, v);
            let wrap = |e| sweep_error(self.variable, v, e);
            cfg.operating_point().map_err(wrap)?;
            if cfg.trials > 0 {
                SystemDims::from_loads(cfg.antennas, cfg.alpha_l, cfg.alpha_o).map_err(wrap)?;
            }
        }
        Ok(())
    }

    /// (value, scheme) pairs in output order.
    pub fn points(&self) -> Vec<(f64, Scheme)> {
        self.values
            .iter()
            .flat_map(|&v| self.schemes.iter().map(move |&s| (v, s)))
            .collect()
    }
}

fn sweep_error(variable: SweepVariable, value: f64, source: Error) -> Error {
    Error::SweepPoint {
        variable: variable.name(),
        value,
        source: Box::new(source),
    }
}

/// Runs every point (concurrently under `exec`) and returns the outcomes in
/// sweep order: value-major, schemes in the order given.
pub fn run_sweep_detailed(spec: &SweepSpec, exec: Execution) -> Result<Vec<PointOutcome>> {
    spec.validate()?;
    let points = spec.points();
    let outcomes = exec.map_slice(&points, |&(v, scheme)| {
        let cfg = spec.fixed.with_sweep_value(spec.variable, v);
        evaluate_point(&cfg, scheme, &spec.tuning, (spec.variable, v), exec)
            .map_err(|e| sweep_error(spec.variable, v, e))
    });
    outcomes.into_iter().collect()
}

/// Runs the sweep and writes the CSV to `sink`.
pub fn run_sweep<W: Write>(spec: &SweepSpec, sink: W) -> Result<Vec<ResultRow>> {
    let rows: Vec<ResultRow> = run_sweep_detailed(spec, Execution::default())?
        .into_iter()
        .map(|o| o.row)
        .collect();
    write_csv(&rows, sink)?;
    Ok(rows)
}

pub fn write_csv<W: Write>(rows: &[ResultRow], sink: W) -> Result<()> {
    let mut w = csv::WriterBuilder::new()
        .has_headers(false)
        .from_writer(sink);
    w.write_record(CSV_HEADER.split(','))?;
    for row in rows {
        w.serialize(row)?;
    }
    w.flush().map_err(|e| Error::Csv(e.into()))?;
    Ok(())
}

pub fn read_csv<R: Read>(source: R) -> Result<Vec<ResultRow>> {
    let mut r = csv::Reader::from_reader(source);
    let header: Vec<String> = r.headers()?.iter().map(str::to_string).collect();
    if header.join(",") != CSV_HEADER {
        return Err(Error::Input(format!(
            "unexpected CSV header {:?}",
            header.join(",")
        )));
    }
    r.deserialize()
        .map(|row| row.map_err(Error::from))
        .collect()
}
