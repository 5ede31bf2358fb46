//! Polynomial least squares: the parametric baseline, and the post-hoc
//! refit that replaces a reconstructed trend with its best polynomial
//! approximation.

use nalgebra::{DMatrix, DVector};

use crate::error::SsaError;
use crate::series::TimeSeries;
use crate::Result;

/// A fitted polynomial `value(n) = sum_j coefficients[j] * n^j` over the
/// 1-based index `n = 1..=fit_length`.
#[derive(Debug, Clone)]
pub struct PolyFit {
    pub coefficients: Vec<f64>,
    pub fit_length: usize,
}

impl PolyFit {
    pub fn degree(&self) -> usize {
        self.coefficients.len() - 1
    }

    /// Evaluates the polynomial on `n = 1..=len`; `len` may exceed the
    /// fitted length (extrapolation).
    pub fn evaluate(&self, len: usize) -> Result<TimeSeries> {
        TimeSeries::from_fn(len, |n| {
            let x = n as f64;
            self.coefficients
                .iter()
                .rev()
                .fold(0.0, |acc, c| acc * x + c)
        })
    }
}

/// Least-squares polynomial fit of the given degree.
///
/// The design matrix is built on the index grid centered and scaled to
/// `[-1, 1]` and solved through a Householder QR factorization (never
/// the normal equations); coefficients are mapped back to the `n^j`
/// basis afterwards.
pub fn polyfit(series: &TimeSeries, degree: usize) -> Result<PolyFit> {
    let n = series.len();
    if degree + 1 > n {
        return Err(SsaError::DegreeTooLarge { degree, ambient: n });
    }
    // t = alpha * n + beta maps 1..=N onto [-1, 1]
    let alpha = 2.0 / (n - 1) as f64;
    let beta = -((n + 1) as f64) / (n - 1) as f64;

    let design = DMatrix::from_fn(n, degree + 1, |i, j| {
        (alpha * (i + 1) as f64 + beta).powi(j as i32)
    });
    let rhs = DVector::from_column_slice(series.values());

    let qr = design.qr();
    let mut qtb = rhs;
    qr.q_tr_mul(&mut qtb);
    let reduced = qtb.rows(0, degree + 1).clone_owned();
    let scaled = qr
        .r()
        .solve_upper_triangular(&reduced)
        .ok_or(SsaError::SingularDesign)?;

    Ok(PolyFit {
        coefficients: shift_to_index_basis(scaled.as_slice(), alpha, beta),
        fit_length: n,
    })
}

/// Replaces a series (typically a reconstructed trend) by its
/// least-squares polynomial approximation of the given degree.
pub fn refit(series: &TimeSeries, degree: usize) -> Result<TimeSeries> {
    polyfit(series, degree)?.evaluate(series.len())
}

/// Rewrites `sum_j b_j (alpha n + beta)^j` as `sum_j c_j n^j`.
fn shift_to_index_basis(scaled: &[f64], alpha: f64, beta: f64) -> Vec<f64> {
    let degree = scaled.len() - 1;
    let mut out = vec![0.0; degree + 1];
    // power holds the coefficients of (alpha n + beta)^j
    let mut power = vec![0.0; degree + 1];
    power[0] = 1.0;
    let mut power_len = 1;
    for (j, &b) in scaled.iter().enumerate() {
        if j > 0 {
            // multiply power by (beta + alpha n)
            let mut next = vec![0.0; degree + 1];
            for (k, &c) in power.iter().take(power_len).enumerate() {
                next[k] += beta * c;
                next[k + 1] += alpha * c;
            }
            power = next;
            power_len += 1;
        }
        for (c, p) in out.iter_mut().zip(power.iter()) {
            *c += b * p;
        }
    }
    out
}
