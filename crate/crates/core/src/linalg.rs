//! Dense complex helpers on top of nalgebra.

use nalgebra::{Cholesky, DMatrix, Dyn};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type CMatrix = DMatrix<Complex64>;

/// Factorizes a Hermitian positive-definite matrix.
pub(crate) fn hpd_factor(q: CMatrix, what: &'static str) -> Result<Cholesky<Complex64, Dyn>> {
    Cholesky::new(q).ok_or(Error::NotPositiveDefinite(what))
}

/// `H^H H`, Hermitian by construction (the upper triangle is mirrored so the
/// result is exactly Hermitian even with rounding).
pub(crate) fn gram(h: &CMatrix) -> CMatrix {
    let mut g = h.adjoint() * h;
    hermitize(&mut g);
    g
}

pub(crate) fn hermitize(m: &mut CMatrix) {
    let n = m.nrows();
    for i in 0..n {
        m[(i, i)].im = 0.0;
        for j in (i + 1)..n {
            m[(j, i)] = m[(i, j)].conj();
        }
    }
}

/// `trace(A A^H)`, i.e. the squared Frobenius norm.
pub fn frobenius_sq(a: &CMatrix) -> f64 {
    a.iter().map(|z| z.norm_sqr()).sum()
}

/// Builds `H^H H + theta G^H G + lambda I`, the regularized Gram matrix used
/// by both precoders and the resolvent trace.
pub(crate) fn regularized_gram(h: &CMatrix, g: &CMatrix, theta: f64, lambda: f64) -> CMatrix {
    let m = h.ncols();
    let mut q = gram(h);
    if theta != 0.0 && g.nrows() > 0 {
        q += gram(g) * Complex64::from(theta);
    }
    for i in 0..m {
        q[(i, i)] += lambda;
    }
    q
}
