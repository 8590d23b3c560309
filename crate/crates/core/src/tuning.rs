//! Choice of precoder parameters that maximize the large-system secrecy rate.
//!
//! SRZF: log-spaced `(lambda, theta)` grid (with `theta = 0` as an extra
//! column), then shrinking-grid rounds around the incumbent. RZF: log grid on
//! `zeta` followed by golden-section search in `log zeta`.
//!
//! The search maximizes the unclipped log ratio. Clipping at zero is monotone,
//! so the clipped maximum is unchanged, but the argmax stays meaningful when
//! the eavesdroppers dominate everywhere.

use crate::asymptotics::{asymptotic_rate, AsymptoticInputs, AsymptoticPoint};
use crate::error::{require_non_negative, require_positive, Error, Result};
use crate::exec::Execution;
use crate::montecarlo::{Scheme, SchemeSpec};
use crate::precoding::{RzfParams, SrzfParams};

/// Each refinement round shrinks the grid spacing by this factor.
pub const REFINE_SHRINK: usize = 10;

const GOLDEN_TOL: f64 = 1e-10;

/// Loads and SNRs; everything the tuner holds fixed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OperatingPoint {
    pub alpha_l: f64,
    pub alpha_o: f64,
    pub mu_l: f64,
    pub mu_o: f64,
}

impl OperatingPoint {
    pub fn new(alpha_l: f64, alpha_o: f64, mu_l: f64, mu_o: f64) -> Result<Self> {
        let op = OperatingPoint {
            alpha_l,
            alpha_o,
            mu_l,
            mu_o,
        };
        op.validate()?;
        Ok(op)
    }

    fn validate(&self) -> Result<()> {
        require_positive("alpha_l", self.alpha_l)?;
        require_non_negative("alpha_o", self.alpha_o)?;
        require_non_negative("mu_l", self.mu_l)?;
        require_non_negative("mu_o", self.mu_o)?;
        Ok(())
    }

    pub fn inputs(&self, lambda: f64, theta: f64) -> AsymptoticInputs {
        AsymptoticInputs {
            alpha_l: self.alpha_l,
            alpha_o: self.alpha_o,
            theta,
            lambda,
            mu_l: self.mu_l,
            mu_o: self.mu_o,
        }
    }

    pub fn evaluate(&self, lambda: f64, theta: f64) -> Result<AsymptoticPoint> {
        asymptotic_rate(&self.inputs(lambda, theta))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridConfig {
    pub lambda_range: (f64, f64),
    pub theta_range: (f64, f64),
    pub points_per_axis: usize,
    pub refine_iterations: usize,
}

impl Default for GridConfig {
    fn default() -> Self {
        GridConfig {
            lambda_range: (1e-3, 1e3),
            theta_range: (1e-3, 1e3),
            points_per_axis: 61,
            refine_iterations: 3,
        }
    }
}

impl GridConfig {
    pub fn validate(&self) -> Result<()> {
        let (llo, lhi) = self.lambda_range;
        let (tlo, thi) = self.theta_range;
        require_positive("lambda_range.lo", llo)?;
        require_positive("lambda_range.hi", lhi)?;
        // theta's log axis needs a positive lower end; theta = 0 is added separately.
        require_positive("theta_range.lo", tlo)?;
        require_positive("theta_range.hi", thi)?;
        if llo >= lhi {
            return Err(Error::parameter(
                "lambda_range.lo",
                llo,
                "must be below lambda_range.hi",
            ));
        }
        if tlo >= thi {
            return Err(Error::parameter(
                "theta_range.lo",
                tlo,
                "must be below theta_range.hi",
            ));
        }
        if self.points_per_axis < 2 {
            return Err(Error::parameter(
                "points_per_axis",
                self.points_per_axis as f64,
                "must be >= 2",
            ));
        }
        Ok(())
    }

    fn log_step(&self, range: (f64, f64)) -> f64 {
        (range.1.log10() - range.0.log10()) / (self.points_per_axis - 1) as f64
    }
}

/// Result of a tuning run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TunedParams {
    pub scheme: Scheme,
    /// `lambda*` for SRZF, `zeta*` for RZF.
    pub lambda_star: f64,
    /// Zero for RZF.
    pub theta_star: f64,
    /// Optimized asymptotic average secrecy rate, bits.
    pub rate_star: f64,
    /// Unclipped log ratio at the optimum.
    pub log_ratio_star: f64,
    pub grid_evals: usize,
    /// True when no probed point achieves a positive rate.
    pub plateau: bool,
}

impl TunedParams {
    pub fn spec(&self) -> Result<SchemeSpec> {
        Ok(match self.scheme {
            Scheme::Rzf => SchemeSpec::Rzf(RzfParams::new(self.lambda_star)?),
            Scheme::Srzf => SchemeSpec::Srzf(SrzfParams::new(self.lambda_star, self.theta_star)?),
        })
    }
}

pub fn log_space(lo_exp: f64, hi_exp: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![10f64.powf(lo_exp)];
    }
    let step = (hi_exp - lo_exp) / (n - 1) as f64;
    (0..n)
        .map(|i| 10f64.powf(lo_exp + step * i as f64))
        .collect()
}

#[derive(Debug, Clone, Copy)]
struct Incumbent {
    lambda: f64,
    theta: f64,
    score: f64,
}

/// Evaluates every `(lambda, theta)` pair, lambda-major, and returns the first
/// strict improvement over `seed` in that order.
fn scan(
    op: &OperatingPoint,
    lambdas: &[f64],
    thetas: &[f64],
    seed: Option<Incumbent>,
    exec: Execution,
) -> Result<Incumbent> {
    let nt = thetas.len();
    let scores = exec.map_indexed(lambdas.len() * nt, |i| {
        op.evaluate(lambdas[i / nt], thetas[i % nt])
            .map(|p| p.log_ratio)
    });
    let mut best = seed;
    for (i, score) in scores.into_iter().enumerate() {
        let score = score?;
        if best.is_none_or(|b| score > b.score) {
            best = Some(Incumbent {
                lambda: lambdas[i / nt],
                theta: thetas[i % nt],
                score,
            });
        }
    }
    best.ok_or_else(|| Error::Input("empty tuning grid".into()))
}

fn finish(scheme: Scheme, best: Incumbent, evals: usize) -> TunedParams {
    TunedParams {
        scheme,
        lambda_star: best.lambda,
        theta_star: best.theta,
        rate_star: best.score.max(0.0),
        log_ratio_star: best.score,
        grid_evals: evals,
        plateau: best.score <= 0.0,
    }
}

pub fn tune_srzf(op: &OperatingPoint, grid: &GridConfig) -> Result<TunedParams> {
    tune_srzf_with(op, grid, Execution::default())
}

pub fn tune_srzf_with(
    op: &OperatingPoint,
    grid: &GridConfig,
    exec: Execution,
) -> Result<TunedParams> {
    op.validate()?;
    grid.validate()?;
    let n = grid.points_per_axis;
    let (llo, lhi) = grid.lambda_range;
    let (tlo, thi) = grid.theta_range;

    let lambdas = log_space(llo.log10(), lhi.log10(), n);
    let mut thetas = vec![0.0];
    thetas.extend(log_space(tlo.log10(), thi.log10(), n));
    let mut best = scan(op, &lambdas, &thetas, None, exec)?;
    let mut evals = lambdas.len() * thetas.len();

    let mut dl = grid.log_step(grid.lambda_range);
    let mut dt = grid.log_step(grid.theta_range);
    let half = REFINE_SHRINK;
    for _ in 0..grid.refine_iterations {
        let c = best.lambda.log10();
        let lambdas = log_space(c - dl, c + dl, 2 * half + 1);
        let thetas = if best.theta > 0.0 {
            let c = best.theta.log10();
            log_space(c - dt, c + dt, 2 * half + 1)
        } else {
            let mut t = vec![0.0];
            t.extend(log_space(tlo.log10() - dt, tlo.log10() + dt, 2 * half + 1));
            t
        };
        best = scan(op, &lambdas, &thetas, Some(best), exec)?;
        evals += lambdas.len() * thetas.len();
        dl /= REFINE_SHRINK as f64;
        dt /= REFINE_SHRINK as f64;
    }
    Ok(finish(Scheme::Srzf, best, evals))
}

pub fn tune_rzf(op: &OperatingPoint, grid: &GridConfig) -> Result<TunedParams> {
    tune_rzf_with(op, grid, Execution::default())
}

pub fn tune_rzf_with(
    op: &OperatingPoint,
    grid: &GridConfig,
    exec: Execution,
) -> Result<TunedParams> {
    op.validate()?;
    grid.validate()?;
    let (zlo, zhi) = grid.lambda_range;
    let zetas = log_space(zlo.log10(), zhi.log10(), grid.points_per_axis);
    let mut best = scan(op, &zetas, &[0.0], None, exec)?;
    let mut evals = zetas.len();

    let step = grid.log_step(grid.lambda_range);
    let objective = |log_zeta: f64| op.evaluate(10f64.powf(log_zeta), 0.0).map(|p| p.log_ratio);
    let c = best.lambda.log10();
    let (arg, score, n) = golden_section_max(objective, c - step, c + step, GOLDEN_TOL)?;
    evals += n;
    if score > best.score {
        best = Incumbent {
            lambda: 10f64.powf(arg),
            theta: 0.0,
            score,
        };
    }
    Ok(finish(Scheme::Rzf, best, evals))
}

/// Tunes whichever scheme is asked for.
pub fn tune(scheme: Scheme, op: &OperatingPoint, grid: &GridConfig) -> Result<TunedParams> {
    match scheme {
        Scheme::Rzf => tune_rzf(op, grid),
        Scheme::Srzf => tune_srzf(op, grid),
    }
}

/// Golden-section search for a maximum of `f` on `[a, b]`. Returns the
/// argmax, its value and the number of evaluations.
pub fn golden_section_max<F>(f: F, mut a: f64, mut b: f64, tol: f64) -> Result<(f64, f64, usize)>
where
    F: Fn(f64) -> Result<f64>,
{
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let mut fc = f(c)?;
    let mut fd = f(d)?;
    let mut evals = 2;
    while (b - a).abs() > tol {
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d)?;
        }
        evals += 1;
    }
    Ok(if fc >= fd {
        (c, fc, evals)
    } else {
        (d, fd, evals)
    })
}
