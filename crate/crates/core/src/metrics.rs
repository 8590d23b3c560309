//! Finite-size SINR, eavesdropper SNR and per-user secrecy rates (bits).

use crate::error::{require_positive, Error, Result};
use crate::linalg::CMatrix;

/// Per-user link quantities for one channel realization.
#[derive(Debug, Clone, PartialEq)]
pub struct RatePoint {
    pub sinr: Vec<f64>,
    pub esnr: Vec<f64>,
    /// `max(0, log2((1 + sinr) / (1 + esnr)))`
    pub rate: Vec<f64>,
}

fn check_inner(context: &'static str, cols: usize, rows_w: usize) -> Result<()> {
    if cols != rows_w {
        return Err(Error::Dimension {
            context,
            expected: cols,
            actual: rows_w,
        });
    }
    Ok(())
}

/// `SINR_k = |h_k^T w_k|^2 / (sigma2 + sum_{j != k} |h_k^T w_j|^2)`.
pub fn per_user_sinr(h: &CMatrix, w: &CMatrix, sigma2: f64) -> Result<Vec<f64>> {
    require_positive("sigma2", sigma2)?;
    check_inner("H columns vs W rows", h.ncols(), w.nrows())?;
    if h.nrows() != w.ncols() {
        return Err(Error::Dimension {
            context: "H rows vs W columns",
            expected: h.nrows(),
            actual: w.ncols(),
        });
    }
    let hw = h * w;
    Ok((0..hw.nrows())
        .map(|k| {
            let row = hw.row(k);
            let total: f64 = row.iter().map(|z| z.norm_sqr()).sum();
            let signal = row[k].norm_sqr();
            let interference = (total - signal).max(0.0);
            signal / (sigma2 + interference)
        })
        .collect())
}

/// `ESNR_k = ||G w_k||^2 / rho2` for equal eavesdropper noise variances.
pub fn per_user_esnr(g: &CMatrix, w: &CMatrix, rho2: f64) -> Result<Vec<f64>> {
    require_positive("rho2", rho2)?;
    let j = g.nrows();
    per_user_esnr_weighted(g, w, &vec![rho2; j])
}

/// `ESNR_k = sum_j |g_j^T w_k|^2 / rho_j^2` with one noise variance per
/// eavesdropper.
pub fn per_user_esnr_weighted(g: &CMatrix, w: &CMatrix, rho2: &[f64]) -> Result<Vec<f64>> {
    if rho2.len() != g.nrows() {
        return Err(Error::Dimension {
            context: "eavesdropper noise variances",
            expected: g.nrows(),
            actual: rho2.len(),
        });
    }
    for &r in rho2 {
        require_positive("rho2", r)?;
    }
    if g.nrows() == 0 {
        return Ok(vec![0.0; w.ncols()]);
    }
    check_inner("G columns vs W rows", g.ncols(), w.nrows())?;
    let gw = g * w;
    Ok((0..gw.ncols())
        .map(|k| {
            gw.column(k)
                .iter()
                .zip(rho2)
                .map(|(z, r)| z.norm_sqr() / r)
                .sum()
        })
        .collect())
}

/// `log2((1+s)/(1+e))` clipped at zero.
pub fn secrecy_rate(sinr: f64, esnr: f64) -> f64 {
    ((1.0 + sinr) / (1.0 + esnr)).log2().max(0.0)
}

pub fn secrecy_rates(sinr: &[f64], esnr: &[f64]) -> Result<RatePoint> {
    if sinr.len() != esnr.len() {
        return Err(Error::Dimension {
            context: "sinr vs esnr length",
            expected: sinr.len(),
            actual: esnr.len(),
        });
    }
    if let Some(&bad) = sinr.iter().chain(esnr).find(|v| v.is_nan() || **v < 0.0) {
        return Err(Error::parameter("sinr/esnr", bad, "must be >= 0"));
    }
    let rate = sinr
        .iter()
        .zip(esnr)
        .map(|(&s, &e)| secrecy_rate(s, e))
        .collect();
    Ok(RatePoint {
        sinr: sinr.to_vec(),
        esnr: esnr.to_vec(),
        rate,
    })
}

/// Arithmetic mean of the per-user rates.
pub fn average_rate(rates: &[f64]) -> Result<f64> {
    if rates.is_empty() {
        return Err(Error::Input("cannot average an empty rate vector".into()));
    }
    Ok(rates.iter().sum::<f64>() / rates.len() as f64)
}
