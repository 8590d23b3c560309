//! System dimensions, noise levels and i.i.d. Rayleigh channel sampling.
//!
//! Channel entries are circularly symmetric complex Gaussian with variance
//! `1/M` (real and imaginary parts each `N(0, 1/(2M))`), so every user and
//! eavesdropper channel has unit expected squared norm.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{require_non_negative, require_positive, Error, Result};
use crate::linalg::CMatrix;

/// Antenna, user and eavesdropper counts.
///
/// The loads `alpha_l = K/M` and `alpha_o = J/M` are derived on demand and
/// never stored.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SystemDims {
    m: usize,
    k: usize,
    j: usize,
}

impl SystemDims {
    pub fn new(antennas: usize, users: usize, eavesdroppers: usize) -> Result<Self> {
        if antennas == 0 {
            return Err(Error::Input(
                "number of transmit antennas M must be >= 1".into(),
            ));
        }
        if users == 0 {
            return Err(Error::Input(
                "number of legitimate users K must be >= 1".into(),
            ));
        }
        Ok(SystemDims {
            m: antennas,
            k: users,
            j: eavesdroppers,
        })
    }

    /// Builds dimensions from `M` and the two loads. Fails unless `alpha_l*M`
    /// and `alpha_o*M` are integers (no silent rounding).
    pub fn from_loads(antennas: usize, alpha_l: f64, alpha_o: f64) -> Result<Self> {
        let k = integral_count("alpha_l", alpha_l, antennas)?;
        let j = integral_count("alpha_o", alpha_o, antennas)?;
        SystemDims::new(antennas, k, j)
    }

    pub fn antennas(&self) -> usize {
        self.m
    }

    pub fn users(&self) -> usize {
        self.k
    }

    pub fn eavesdroppers(&self) -> usize {
        self.j
    }

    pub fn alpha_l(&self) -> f64 {
        self.k as f64 / self.m as f64
    }

    pub fn alpha_o(&self) -> f64 {
        self.j as f64 / self.m as f64
    }
}

fn integral_count(name: &'static str, load: f64, antennas: usize) -> Result<usize> {
    require_non_negative(name, load)?;
    let exact = load * antennas as f64;
    let rounded = exact.round();
    if (exact - rounded).abs() > 1e-9 * exact.max(1.0) {
        return Err(Error::Input(format!(
            "{name} = {load} gives a non-integral count {exact} at M = {antennas}"
        )));
    }
    Ok(rounded as usize)
}

/// Noise variances at the legitimate users (`sigma2`) and eavesdroppers
/// (`rho2`) together with the transmit power budget.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseProfile {
    sigma2: f64,
    rho2: f64,
    power: f64,
}

impl NoiseProfile {
    pub fn new(sigma2: f64, rho2: f64, power: f64) -> Result<Self> {
        Ok(NoiseProfile {
            sigma2: require_positive("sigma2", sigma2)?,
            rho2: require_positive("rho2", rho2)?,
            power: require_non_negative("power", power)?,
        })
    }

    /// Unit power with the noise variances chosen to hit the given linear SNRs.
    pub fn from_snr(mu_l: f64, mu_o: f64) -> Result<Self> {
        let mu_l = require_positive("mu_l", mu_l)?;
        let mu_o = require_positive("mu_o", mu_o)?;
        NoiseProfile::new(1.0 / mu_l, 1.0 / mu_o, 1.0)
    }

    pub fn from_snr_db(mu_l_db: f64, mu_o_db: f64) -> Result<Self> {
        NoiseProfile::from_snr(db_to_linear(mu_l_db), db_to_linear(mu_o_db))
    }

    pub fn sigma2(&self) -> f64 {
        self.sigma2
    }

    pub fn rho2(&self) -> f64 {
        self.rho2
    }

    pub fn power(&self) -> f64 {
        self.power
    }

    /// Receive SNR at the legitimate terminals, `P / sigma2`.
    pub fn mu_l(&self) -> f64 {
        self.power / self.sigma2
    }

    /// Receive SNR at the eavesdroppers, `P / rho2`.
    pub fn mu_o(&self) -> f64 {
        self.power / self.rho2
    }
}

/// `10^(db/10)`.
pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

/// One draw of the downlink channels. Row `k` of `h` is user `k`'s channel,
/// row `j` of `g` is eavesdropper `j`'s channel.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelRealization {
    pub h: CMatrix,
    pub g: CMatrix,
}

impl ChannelRealization {
    pub fn new(h: CMatrix, g: CMatrix) -> Result<Self> {
        if g.nrows() > 0 && g.ncols() != h.ncols() {
            return Err(Error::Dimension {
                context: "eavesdropper channel columns",
                expected: h.ncols(),
                actual: g.ncols(),
            });
        }
        Ok(ChannelRealization { h, g })
    }
}

/// Named sub-streams of a [`SeedStream`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[repr(u64)]
pub enum Substream {
    Legitimate = 1,
    Eavesdropper = 2,
    Auxiliary = 3,
}

/// Splittable deterministic seed.
///
/// [`SeedStream::child`] derives an independent seed for e.g. a trial index;
/// [`SeedStream::rng`] opens one of the disjoint ChaCha streams under that
/// seed. Nothing depends on call order, so parallel schedules reproduce the
/// sequential result.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SeedStream {
    key: u64,
}

impl SeedStream {
    pub fn new(seed: u64) -> Self {
        SeedStream { key: seed }
    }

    pub fn child(&self, index: u64) -> Self {
        SeedStream {
            key: splitmix64(self.key ^ splitmix64(index.wrapping_add(0x6A09_E667_F3BC_C909))),
        }
    }

    pub fn rng(&self, sub: Substream) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.key);
        rng.set_stream(sub as u64);
        rng
    }
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Fills a `rows x cols` matrix with i.i.d. `CN(0, variance)` entries, drawn
/// in row-major order.
///
/// # Panics
/// If `variance` is not finite and positive.
pub fn gaussian_complex_matrix<R: Rng + ?Sized>(
    rows: usize,
    cols: usize,
    variance: f64,
    rng: &mut R,
) -> CMatrix {
    assert!(
        variance.is_finite() && variance > 0.0,
        "entry variance must be positive, got {variance}"
    );
    let scale = (variance / 2.0).sqrt();
    let entries: Vec<Complex64> = (0..rows * cols)
        .map(|_| {
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = rng.sample(StandardNormal);
            Complex64::new(scale * re, scale * im)
        })
        .collect();
    DMatrix::from_row_slice(rows, cols, &entries)
}

/// Samples `H` (K x M) and `G` (J x M) with entry variance `1/M`. `H` comes
/// from the legitimate sub-stream only, so it does not change with `J`.
pub fn sample_channel(dims: SystemDims, stream: &SeedStream) -> ChannelRealization {
    let variance = 1.0 / dims.m as f64;
    let h = gaussian_complex_matrix(
        dims.k,
        dims.m,
        variance,
        &mut stream.rng(Substream::Legitimate),
    );
    let g = gaussian_complex_matrix(
        dims.j,
        dims.m,
        variance,
        &mut stream.rng(Substream::Eavesdropper),
    );
    ChannelRealization { h, g }
}
