//! RZF and secure RZF shaping matrices, transmit-power normalization and the
//! Frobenius leakage penalty.
//!
//! Beamformers are the columns of an `M x K` matrix throughout.

use num_complex::Complex64;

use crate::error::{require_non_negative, require_positive, Error, Result};
use crate::linalg::{frobenius_sq, hpd_factor, regularized_gram, CMatrix};

/// Regularizer `lambda` and leakage weight `theta` of the secure precoder.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SrzfParams {
    lambda: f64,
    theta: f64,
}

impl SrzfParams {
    pub fn new(lambda: f64, theta: f64) -> Result<Self> {
        Ok(SrzfParams {
            lambda: require_positive("lambda", lambda)?,
            theta: require_non_negative("theta", theta)?,
        })
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }
}

/// Regularizer `zeta` of plain RZF.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RzfParams {
    zeta: f64,
}

impl RzfParams {
    pub fn new(zeta: f64) -> Result<Self> {
        Ok(RzfParams {
            zeta: require_positive("zeta", zeta)?,
        })
    }

    pub fn zeta(&self) -> f64 {
        self.zeta
    }
}

/// A power-normalized precoder `W = sqrt(P/beta) A`.
#[derive(Debug, Clone, PartialEq)]
pub struct PrecoderOutput {
    pub w: CMatrix,
    /// `trace(A A^H) / M`
    pub beta: f64,
    pub power: f64,
    /// The unnormalized shaping matrix.
    pub a: CMatrix,
}

impl PrecoderOutput {
    /// Relative deviation of `trace(W W^H)` from `M P`. Zero power reports
    /// the absolute trace instead.
    pub fn power_error(&self) -> f64 {
        let target = self.w.nrows() as f64 * self.power;
        let actual = frobenius_sq(&self.w);
        if target > 0.0 {
            (actual - target).abs() / target
        } else {
            actual
        }
    }
}

fn check_channel_columns(h: &CMatrix, g: &CMatrix) -> Result<()> {
    if h.nrows() == 0 || h.ncols() == 0 {
        return Err(Error::Input(
            "legitimate channel H must be non-empty".into(),
        ));
    }
    if g.ncols() != h.ncols() && g.nrows() > 0 {
        return Err(Error::Dimension {
            context: "G columns vs H columns",
            expected: h.ncols(),
            actual: g.ncols(),
        });
    }
    Ok(())
}

/// `(H^H H + theta G^H G + lambda I_M)^{-1} H^H`, solved through a Cholesky
/// factorization of the regularized Gram matrix.
pub fn srzf_shaping_matrix(h: &CMatrix, g: &CMatrix, params: SrzfParams) -> Result<CMatrix> {
    check_channel_columns(h, g)?;
    let q = regularized_gram(h, g, params.theta, params.lambda);
    let chol = hpd_factor(q, "H^H H + theta G^H G + lambda I")?;
    Ok(chol.solve(&h.adjoint()))
}

/// `H^H (H H^H + zeta I_K)^{-1}`, computed on the `K x K` side.
pub fn rzf_shaping_matrix(h: &CMatrix, params: RzfParams) -> Result<CMatrix> {
    if h.nrows() == 0 || h.ncols() == 0 {
        return Err(Error::Input(
            "legitimate channel H must be non-empty".into(),
        ));
    }
    let k = h.nrows();
    let mut c = h * h.adjoint();
    crate::linalg::hermitize(&mut c);
    for i in 0..k {
        c[(i, i)] += params.zeta;
    }
    let chol = hpd_factor(c, "H H^H + zeta I")?;
    // C is Hermitian, so H^H C^{-1} = (C^{-1} H)^H.
    Ok(chol.solve(h).adjoint())
}

/// Scales `A` so that `trace(W W^H) = M P` with `M = A.nrows()`.
pub fn normalize_power(a: CMatrix, power: f64) -> Result<PrecoderOutput> {
    require_non_negative("power", power)?;
    let m = a.nrows();
    if m == 0 {
        return Err(Error::Input("shaping matrix has no rows".into()));
    }
    let beta = frobenius_sq(&a) / m as f64;
    if beta <= 0.0 || !beta.is_finite() {
        return Err(Error::DegeneratePrecoder);
    }
    let w = &a * Complex64::from((power / beta).sqrt());
    Ok(PrecoderOutput { w, beta, power, a })
}

/// Frobenius leakage `||G W||_F^2 = sum_j sum_k |g_j^T w_k|^2`.
pub fn leakage(g: &CMatrix, w: &CMatrix) -> f64 {
    if g.nrows() == 0 {
        return 0.0;
    }
    frobenius_sq(&(g * w))
}
