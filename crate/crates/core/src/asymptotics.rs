//! Large-system limits of the secure RZF precoder.
//!
//! Everything is driven by `x = G_T(-lambda)`, the Stieltjes transform of the
//! limiting spectrum of `T = H^H H + theta G^H G` evaluated at `-lambda`. It is
//! the unique positive root of
//!
//! ```text
//! lambda + alpha_l/(1+x) + theta*alpha_o/(1+theta*x) = 1/x
//! ```
//!
//! which we rewrite as `g(x) = x*(lambda + alpha_l/(1+x) + theta*alpha_o/(1+theta*x)) - 1`.
//! `g` is strictly increasing on `(0, 1/lambda]`, `g(0+) = -1` and
//! `g(1/lambda) >= 0`, so bisection on that bracket always converges.

use crate::error::{require_non_negative, require_positive, Error, Result};
use crate::linalg::{regularized_gram, CMatrix};

/// Residual bound met by every returned fixed point.
pub const FIXED_POINT_RESIDUAL: f64 = 1e-12;

const BRACKET_FLOOR: f64 = 1e-300;
const MAX_BISECTIONS: usize = 2000;

/// Loads, precoder parameters and receive SNRs of one operating point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AsymptoticInputs {
    pub alpha_l: f64,
    pub alpha_o: f64,
    pub theta: f64,
    pub lambda: f64,
    pub mu_l: f64,
    pub mu_o: f64,
}

impl AsymptoticInputs {
    pub fn new(
        alpha_l: f64,
        alpha_o: f64,
        theta: f64,
        lambda: f64,
        mu_l: f64,
        mu_o: f64,
    ) -> Result<Self> {
        let inputs = AsymptoticInputs {
            alpha_l,
            alpha_o,
            theta,
            lambda,
            mu_l,
            mu_o,
        };
        inputs.validate()?;
        Ok(inputs)
    }

    pub fn validate(&self) -> Result<()> {
        require_non_negative("alpha_l", self.alpha_l)?;
        require_non_negative("alpha_o", self.alpha_o)?;
        require_non_negative("theta", self.theta)?;
        require_positive("lambda", self.lambda)?;
        require_non_negative("mu_l", self.mu_l)?;
        require_non_negative("mu_o", self.mu_o)?;
        Ok(())
    }

    pub fn with_params(self, lambda: f64, theta: f64) -> Self {
        AsymptoticInputs {
            lambda,
            theta,
            ..self
        }
    }

    /// `g(x)`; its root is the fixed point.
    pub fn residual(&self, x: f64) -> f64 {
        let load = self.alpha_l / (1.0 + x) + self.theta * self.alpha_o / (1.0 + self.theta * x);
        x * (self.lambda + load) - 1.0
    }
}

/// Solution of the fixed point together with the derived limits.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AsymptoticPoint {
    /// `G_T(-lambda)`
    pub x: f64,
    /// `G'_T(-lambda)`
    pub g_prime: f64,
    pub sinr_asy: f64,
    pub esnr_asy: f64,
    /// `log2((1+sinr)/(1+esnr))` before clipping; negative when the
    /// eavesdroppers dominate.
    pub log_ratio: f64,
    /// Limit of the average ergodic secrecy rate in bits (clipped).
    pub rate: f64,
}

/// Unique root of `g` on `(0, 1/lambda]`.
pub fn solve_fixed_point(inputs: &AsymptoticInputs) -> Result<f64> {
    inputs.validate()?;
    let mut lo = BRACKET_FLOOR;
    let mut hi = 1.0 / inputs.lambda;
    if inputs.residual(hi) <= 0.0 {
        // Only happens with both loads zero: x = 1/lambda exactly.
        return Ok(hi);
    }
    for _ in 0..MAX_BISECTIONS {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if inputs.residual(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let x = if inputs.residual(lo).abs() <= inputs.residual(hi).abs() {
        lo
    } else {
        hi
    };
    let r = inputs.residual(x).abs();
    if r > FIXED_POINT_RESIDUAL {
        return Err(Error::parameter(
            "fixed-point residual",
            r,
            "bisection did not reach the residual tolerance",
        ));
    }
    Ok(x)
}

/// `G'_T(-lambda) = x / (lambda + alpha_l/(1+x)^2 + theta*alpha_o/(1+theta*x)^2)`.
pub fn stieltjes_derivative(x: f64, inputs: &AsymptoticInputs) -> f64 {
    let t = inputs.theta;
    let denom = inputs.lambda
        + inputs.alpha_l / (1.0 + x).powi(2)
        + t * inputs.alpha_o / (1.0 + t * x).powi(2);
    x / denom
}

fn require_users(inputs: &AsymptoticInputs) -> Result<()> {
    if inputs.alpha_l > 0.0 {
        Ok(())
    } else {
        Err(Error::UndefinedLimit("alpha_l = 0 (no legitimate users)"))
    }
}

/// `mu_l x^2 (1+x)^2 / (alpha_l g' (mu_l + (1+x)^2))`.
pub fn asymptotic_sinr(x: f64, g_prime: f64, inputs: &AsymptoticInputs) -> Result<f64> {
    require_users(inputs)?;
    let s = (1.0 + x).powi(2);
    Ok(inputs.mu_l * x * x * s / (inputs.alpha_l * g_prime * (inputs.mu_l + s)))
}

/// `mu_o alpha_o / (alpha_l (1 + theta x)^2)`.
pub fn asymptotic_esnr(x: f64, inputs: &AsymptoticInputs) -> Result<f64> {
    require_users(inputs)?;
    Ok(inputs.mu_o * inputs.alpha_o / (inputs.alpha_l * (1.0 + inputs.theta * x).powi(2)))
}

pub fn asymptotic_rate(inputs: &AsymptoticInputs) -> Result<AsymptoticPoint> {
    require_users(inputs)?;
    let x = solve_fixed_point(inputs)?;
    let g_prime = stieltjes_derivative(x, inputs);
    let sinr_asy = asymptotic_sinr(x, g_prime, inputs)?;
    let esnr_asy = asymptotic_esnr(x, inputs)?;
    let log_ratio = ((1.0 + sinr_asy) / (1.0 + esnr_asy)).log2();
    Ok(AsymptoticPoint {
        x,
        g_prime,
        sinr_asy,
        esnr_asy,
        log_ratio,
        rate: log_ratio.max(0.0),
    })
}

/// Finite-size counterpart of `x`: `trace((H^H H + theta G^H G + lambda I)^{-1}) / M`.
pub fn empirical_stieltjes(h: &CMatrix, g: &CMatrix, theta: f64, lambda: f64) -> Result<f64> {
    require_positive("lambda", lambda)?;
    require_non_negative("theta", theta)?;
    let m = h.ncols();
    if m == 0 {
        return Err(Error::Input("channel must have at least one column".into()));
    }
    if g.nrows() > 0 && g.ncols() != m {
        return Err(Error::Dimension {
            context: "G columns vs H columns",
            expected: m,
            actual: g.ncols(),
        });
    }
    let q = regularized_gram(h, g, theta, lambda);
    let inv = q
        .lu()
        .try_inverse()
        .ok_or(Error::NotPositiveDefinite("resolvent"))?;
    Ok(inv.trace().re / m as f64)
}
