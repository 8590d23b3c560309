//! Test-only oracles. Everything here uses explicit inverses or plain loops
//! so it stays independent of the Cholesky-based production path.
#![allow(dead_code)]

use nalgebra::DMatrix;
use num_complex::Complex64;
use srzf::channel::{gaussian_complex_matrix, SeedStream, Substream};
use srzf::CMatrix;

pub fn random_matrix(rows: usize, cols: usize, seed: u64) -> CMatrix {
    gaussian_complex_matrix(
        rows,
        cols,
        1.0 / cols.max(1) as f64,
        &mut SeedStream::new(seed).rng(Substream::Auxiliary),
    )
}

pub fn rel_err(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(1e-300)
}

pub fn frobenius(a: &CMatrix) -> f64 {
    a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

pub fn inverse(q: &CMatrix) -> CMatrix {
    q.clone()
        .try_inverse()
        .expect("oracle matrix must be invertible")
}

/// Column vector `h_k^*` (conjugated row k).
pub fn conj_row(m: &CMatrix, k: usize) -> CMatrix {
    let r = m.rows(k, 1).into_owned();
    r.adjoint()
}

/// Row vector `h_k^T`.
pub fn row(m: &CMatrix, k: usize) -> CMatrix {
    m.rows(k, 1).into_owned()
}

fn scalar(m: CMatrix) -> Complex64 {
    assert_eq!(m.shape(), (1, 1));
    m[(0, 0)]
}

/// `a^T X b` for row `a` and column `b`.
pub fn quad(a_row: &CMatrix, x: &CMatrix, b_col: &CMatrix) -> Complex64 {
    scalar(a_row * x * b_col)
}

/// `H^H H + theta G^H G + lambda I` assembled from outer products.
pub fn q_matrix(h: &CMatrix, g: &CMatrix, theta: f64, lambda: f64) -> CMatrix {
    let m = h.ncols();
    let mut q = CMatrix::identity(m, m) * Complex64::from(lambda);
    for k in 0..h.nrows() {
        let v = conj_row(h, k);
        q += &v * v.adjoint();
    }
    for j in 0..g.nrows() {
        let v = conj_row(g, j);
        q += &v * v.adjoint() * Complex64::from(theta);
    }
    q
}

/// The per-user building blocks of SINR and ESNR for SRZF.
#[derive(Debug, Clone)]
pub struct Blocks {
    pub u: Vec<f64>,
    pub i: Vec<f64>,
    pub beta: f64,
    pub l: Vec<f64>,
}

/// `U_k`, `I_k`, `beta`, `L_k` evaluated directly from `Q^{-1}`.
pub fn direct_blocks(h: &CMatrix, g: &CMatrix, theta: f64, lambda: f64) -> Blocks {
    let (k_users, m) = h.shape();
    let qi = inverse(&q_matrix(h, g, theta, lambda));
    let qi2 = &qi * &qi;
    let gg = g.adjoint() * g;
    let mut u = Vec::new();
    let mut i = Vec::new();
    let mut l = Vec::new();
    let mut beta = 0.0;
    for k in 0..k_users {
        let hk = row(h, k);
        u.push(quad(&hk, &qi, &conj_row(h, k)).norm_sqr());
        i.push(
            (0..k_users)
                .filter(|&j| j != k)
                .map(|j| quad(&hk, &qi, &conj_row(h, j)).norm_sqr())
                .sum(),
        );
        beta += quad(&hk, &qi2, &conj_row(h, k)).re;
        l.push(quad(&hk, &(&qi * &gg * &qi), &conj_row(h, k)).re);
    }
    Blocks {
        u,
        i,
        beta: beta / m as f64,
        l,
    }
}

/// Same quantities via the rank-one downdated matrices `Q_k`, `Q_{k,j}` and
/// `Gamma_{k,j}`.
pub fn sherman_morrison_blocks(h: &CMatrix, g: &CMatrix, theta: f64, lambda: f64) -> Blocks {
    let (k_users, m) = h.shape();
    let q = q_matrix(h, g, theta, lambda);
    let outer = |v: &CMatrix| v * v.adjoint();
    let mut u = Vec::new();
    let mut i = Vec::new();
    let mut l = Vec::new();
    let mut beta = 0.0;
    for k in 0..k_users {
        let hk = row(h, k);
        let hk_c = conj_row(h, k);
        let qk = &q - outer(&hk_c);
        let qk_inv = inverse(&qk);
        let a_k = quad(&hk, &qk_inv, &hk_c).re;
        u.push((a_k / (1.0 + a_k)).powi(2));

        let mut ik = 0.0;
        for j in (0..k_users).filter(|&j| j != k) {
            let hj = row(h, j);
            let hj_c = conj_row(h, j);
            let qkj_inv = inverse(&(&qk - outer(&hj_c)));
            let num = quad(&hk, &qkj_inv, &hj_c).norm_sqr();
            let b = quad(&hj, &qkj_inv, &hj_c).re;
            ik += num / ((1.0 + a_k).powi(2) * (1.0 + b).powi(2));
        }
        i.push(ik);

        beta += quad(&hk, &(&qk_inv * &qk_inv), &hk_c).re / (1.0 + a_k).powi(2);

        let mut lk = 0.0;
        for j in 0..g.nrows() {
            let gj = row(g, j);
            let gj_c = conj_row(g, j);
            let gamma_inv = inverse(&(&qk - outer(&gj_c) * Complex64::from(theta)));
            let num = quad(&gj, &gamma_inv, &hk_c).norm_sqr();
            let den = 1.0 + theta * quad(&gj, &gamma_inv, &gj_c).re;
            lk += num / (den * den);
        }
        l.push(lk / (1.0 + a_k).powi(2));
    }
    Blocks {
        u,
        i,
        beta: beta / m as f64,
        l,
    }
}

/// `L_k` through the intermediate form `h_k^T Q_k^{-1} G^H G Q_k^{-1} h_k^* / (1+a_k)^2`.
pub fn leakage_via_qk(h: &CMatrix, g: &CMatrix, theta: f64, lambda: f64) -> Vec<f64> {
    let q = q_matrix(h, g, theta, lambda);
    let gg = g.adjoint() * g;
    (0..h.nrows())
        .map(|k| {
            let hk = row(h, k);
            let hk_c = conj_row(h, k);
            let qk_inv = inverse(&(&q - &hk_c * hk_c.adjoint()));
            let a_k = quad(&hk, &qk_inv, &hk_c).re;
            quad(&hk, &(&qk_inv * &gg * &qk_inv), &hk_c).re / (1.0 + a_k).powi(2)
        })
        .collect()
}

/// Minimizes `trace(X^H Q X) - 2 Re trace(H X)` by plain gradient descent.
pub fn gradient_descent_rls(h: &CMatrix, g: &CMatrix, theta: f64, lambda: f64) -> CMatrix {
    let q = q_matrix(h, g, theta, lambda);
    // ||Q||_F bounds the largest eigenvalue.
    let step = 1.0 / frobenius(&q);
    let target = h.adjoint();
    let mut x = DMatrix::zeros(h.ncols(), h.nrows());
    for _ in 0..200_000 {
        let grad = &q * &x - &target;
        let update = &grad * Complex64::from(step);
        x -= &update;
        if frobenius(&update) < 1e-15 {
            break;
        }
    }
    x
}
