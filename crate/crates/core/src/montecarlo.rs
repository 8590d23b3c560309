//! Monte Carlo estimate of the average ergodic secrecy rate.
//!
//! Each trial draws its channel from `SeedStream::new(master_seed).child(t)`,
//! so the trial set is fixed by the seed alone. Per-trial results are
//! collected in trial order and reduced sequentially, which keeps the
//! estimate bit-identical for any thread count.

use std::fmt;

use crate::channel::{sample_channel, ChannelRealization, NoiseProfile, SeedStream, SystemDims};
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::metrics::{average_rate, per_user_esnr, per_user_sinr, secrecy_rates, RatePoint};
use crate::precoding::{
    normalize_power, rzf_shaping_matrix, srzf_shaping_matrix, PrecoderOutput, RzfParams, SrzfParams,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Scheme {
    Rzf,
    Srzf,
}

impl Scheme {
    pub fn name(self) -> &'static str {
        match self {
            Scheme::Rzf => "RZF",
            Scheme::Srzf => "SRZF",
        }
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Scheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "rzf" => Ok(Scheme::Rzf),
            "srzf" => Ok(Scheme::Srzf),
            other => Err(Error::Input(format!("unknown scheme {other:?}"))),
        }
    }
}

/// A precoding scheme with its parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SchemeSpec {
    Rzf(RzfParams),
    Srzf(SrzfParams),
}

impl SchemeSpec {
    pub fn scheme(&self) -> Scheme {
        match self {
            SchemeSpec::Rzf(_) => Scheme::Rzf,
            SchemeSpec::Srzf(_) => Scheme::Srzf,
        }
    }

    /// `lambda` for SRZF, `zeta` for RZF.
    pub fn regularizer(&self) -> f64 {
        match self {
            SchemeSpec::Rzf(p) => p.zeta(),
            SchemeSpec::Srzf(p) => p.lambda(),
        }
    }

    /// Leakage weight; always zero for RZF.
    pub fn theta(&self) -> f64 {
        match self {
            SchemeSpec::Rzf(_) => 0.0,
            SchemeSpec::Srzf(p) => p.theta(),
        }
    }

    pub fn precoder(&self, channel: &ChannelRealization, power: f64) -> Result<PrecoderOutput> {
        let a = match self {
            SchemeSpec::Rzf(p) => rzf_shaping_matrix(&channel.h, *p)?,
            SchemeSpec::Srzf(p) => srzf_shaping_matrix(&channel.h, &channel.g, *p)?,
        };
        normalize_power(a, power)
    }
}

/// Rates and precoder of a single channel realization.
pub fn evaluate_realization(
    channel: &ChannelRealization,
    noise: &NoiseProfile,
    spec: &SchemeSpec,
) -> Result<(RatePoint, PrecoderOutput)> {
    let precoder = spec.precoder(channel, noise.power())?;
    let sinr = per_user_sinr(&channel.h, &precoder.w, noise.sigma2())?;
    let esnr = per_user_esnr(&channel.g, &precoder.w, noise.rho2())?;
    Ok((secrecy_rates(&sinr, &esnr)?, precoder))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MonteCarloEstimate {
    /// Mean over trials of the per-realization average rate, bits.
    pub mean: f64,
    /// `std_dev / sqrt(trials)`; zero for a single trial.
    pub stderr: f64,
    /// Sample standard deviation of the per-trial average rate.
    pub std_dev: f64,
    pub trials: usize,
    /// Largest relative deviation of `trace(W W^H)` from `M P` seen in any trial.
    pub max_power_error: f64,
}

struct TrialOutcome {
    rate: f64,
    power_error: f64,
}

fn run_trial(
    dims: SystemDims,
    noise: &NoiseProfile,
    spec: &SchemeSpec,
    stream: SeedStream,
) -> Result<TrialOutcome> {
    let channel = sample_channel(dims, &stream);
    let (rates, precoder) = evaluate_realization(&channel, noise, spec)?;
    Ok(TrialOutcome {
        rate: average_rate(&rates.rate)?,
        power_error: precoder.power_error(),
    })
}

pub fn estimate_ergodic_rate(
    dims: SystemDims,
    noise: &NoiseProfile,
    spec: &SchemeSpec,
    trials: usize,
    master_seed: u64,
) -> Result<MonteCarloEstimate> {
    estimate_ergodic_rate_with(dims, noise, spec, trials, master_seed, Execution::default())
}

pub fn estimate_ergodic_rate_with(
    dims: SystemDims,
    noise: &NoiseProfile,
    spec: &SchemeSpec,
    trials: usize,
    master_seed: u64,
    exec: Execution,
) -> Result<MonteCarloEstimate> {
    if trials == 0 {
        return Err(Error::Input("Monte Carlo needs at least one trial".into()));
    }
    let master = SeedStream::new(master_seed);
    let outcomes = exec.map_indexed(trials, |t| {
        run_trial(dims, noise, spec, master.child(t as u64))
    });
    let outcomes = outcomes.into_iter().collect::<Result<Vec<_>>>()?;

    let n = trials as f64;
    let mean = outcomes.iter().map(|o| o.rate).sum::<f64>() / n;
    let std_dev = if trials > 1 {
        let ss: f64 = outcomes.iter().map(|o| (o.rate - mean).powi(2)).sum();
        (ss / (n - 1.0)).sqrt()
    } else {
        0.0
    };
    let max_power_error = outcomes.iter().map(|o| o.power_error).fold(0.0, f64::max);
    Ok(MonteCarloEstimate {
        mean,
        stderr: std_dev / n.sqrt(),
        std_dev,
        trials,
        max_power_error,
    })
}
