//! Secure regularized zero forcing (SRZF) and plain RZF precoding for
//! multiuser MIMO downlinks overheard by cooperating eavesdroppers.
//!
//! The crate covers three layers:
//!
//! * finite-size evaluation: channel sampling ([`channel`]), precoders
//!   ([`precoding`]), SINR / eavesdropper SNR / secrecy rates ([`metrics`]) and
//!   seeded Monte Carlo averaging ([`montecarlo`]);
//! * large-system limits from a scalar Stieltjes-transform fixed point
//!   ([`asymptotics`]);
//! * parameter tuning on those limits ([`tuning`]) and the sweep / CSV
//!   harness behind the `srzf` binary ([`harness`]).
//!
//! Data-parallel loops go through [`Execution`]; with the default `parallel`
//! feature they run on rayon, otherwise sequentially, with identical results.

pub mod asymptotics;
pub mod channel;
pub mod error;
pub mod exec;
pub mod harness;
pub mod linalg;
pub mod metrics;
pub mod montecarlo;
pub mod precoding;
pub mod tuning;

pub use asymptotics::{asymptotic_rate, solve_fixed_point, AsymptoticInputs, AsymptoticPoint};
pub use channel::{sample_channel, ChannelRealization, NoiseProfile, SeedStream, SystemDims};
pub use error::{Error, Result};
pub use exec::Execution;
pub use linalg::CMatrix;
pub use montecarlo::{estimate_ergodic_rate, MonteCarloEstimate, Scheme, SchemeSpec};
pub use precoding::{PrecoderOutput, RzfParams, SrzfParams};
pub use tuning::{tune_rzf, tune_srzf, GridConfig, OperatingPoint, TunedParams};
