//! Time-series container, Hankel embedding and diagonal averaging.
//!
//! A series of length `N` with window `1 < L < N` lifts to its `L x K`
//! trajectory matrix (`K = N - L + 1`) whose columns are the lagged
//! windows of the series. [`hankelize`] is the inverse map extended to
//! arbitrary matrices: it averages every antidiagonal, which is the
//! orthogonal projection onto Hankel matrices in Frobenius norm followed
//! by the inverse embedding.

use nalgebra::DMatrix;

use crate::error::SsaError;
use crate::Result;

/// A finite real-valued series `x_1, ..., x_N` with `N >= 3`.
///
/// Formulas throughout the crate index series from 1; `values()` exposes
/// the usual 0-based slice.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeSeries {
    values: Vec<f64>,
}

impl TimeSeries {
    /// Wraps raw values, rejecting series shorter than 3 (the smallest
    /// length admitting a window `1 < L < N`) and non-finite entries.
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.len() < 3 {
            return Err(SsaError::SeriesTooShort { len: values.len() });
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(SsaError::NonFinite { context: "series" });
        }
        Ok(TimeSeries { values })
    }

    /// Builds a series by evaluating `f` at the 1-based indices `1..=len`.
    pub fn from_fn(len: usize, f: impl Fn(usize) -> f64) -> Result<Self> {
        TimeSeries::new((1..=len).map(f).collect())
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        false // N >= 3 by construction
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Elementwise sum of two equal-length series.
    pub fn add(&self, other: &TimeSeries) -> Result<TimeSeries> {
        if self.len() != other.len() {
            return Err(SsaError::LengthMismatch {
                expected: self.len(),
                found: other.len(),
            });
        }
        TimeSeries::new(
            self.values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| a + b)
                .collect(),
        )
    }
}

/// The `L x K` Hankel lift of a series: `entry(i, j) = x_{i+j-1}`.
#[derive(Debug, Clone)]
pub struct TrajectoryMatrix {
    entries: DMatrix<f64>,
    window: usize,
}

impl TrajectoryMatrix {
    /// Window length `L`.
    pub fn window(&self) -> usize {
        self.window
    }

    /// Number of lagged vectors `K = N - L + 1`.
    pub fn lag_count(&self) -> usize {
        self.entries.ncols()
    }

    /// Length of the embedded series, `N = L + K - 1`.
    pub fn series_len(&self) -> usize {
        self.window + self.lag_count() - 1
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.entries
    }

    pub fn into_matrix(self) -> DMatrix<f64> {
        self.entries
    }
}

/// Embeds a series into its `L`-trajectory matrix.
///
/// Fails with `window-out-of-range` unless `1 < L < N`.
pub fn embed(series: &TimeSeries, window: usize) -> Result<TrajectoryMatrix> {
    let n = series.len();
    if window <= 1 || window >= n {
        return Err(SsaError::WindowOutOfRange {
            window,
            series_len: n,
        });
    }
    let k = n - window + 1;
    let x = series.values();
    let entries = DMatrix::from_fn(window, k, |i, j| x[i + j]);
    Ok(TrajectoryMatrix { entries, window })
}

/// Maps an `L x K` matrix back to a series of length `L + K - 1` by
/// averaging its antidiagonals.
///
/// Each antidiagonal is summed pairwise in increasing row order, so the
/// output is bit-reproducible for a given input. Applied to a trajectory
/// matrix this inverts [`embed`]; applied to an arbitrary matrix it
/// realizes the Frobenius-orthogonal projection onto Hankel matrices,
/// read off as a series.
pub fn hankelize(matrix: &DMatrix<f64>) -> Result<TimeSeries> {
    let (l, k) = (matrix.nrows(), matrix.ncols());
    if l == 0 || k == 0 {
        return Err(SsaError::SeriesTooShort { len: 0 });
    }
    let n = l + k - 1;
    let mut buf = Vec::with_capacity(l.min(k));
    let mut out = Vec::with_capacity(n);
    for d in 1..=n {
        // entries (i, j), 1-based, with i + j - 1 = d
        let i_lo = d.saturating_sub(k - 1).max(1);
        let i_hi = d.min(l);
        buf.clear();
        for i in i_lo..=i_hi {
            let j = d - i + 1;
            buf.push(matrix[(i - 1, j - 1)]);
        }
        out.push(pairwise_sum(&buf) / buf.len() as f64);
    }
    TimeSeries::new(out)
}

/// Root-mean-square error of an ensemble of estimates against a common
/// truth: `sqrt(sum_i sum_n (est_i[n] - truth[n])^2 / (M N))`.
///
/// Accumulation is replication-major then time-index, so the result is
/// deterministic.
pub fn rmse(ensemble: &[TimeSeries], truth: &TimeSeries) -> Result<f64> {
    if ensemble.is_empty() {
        return Err(SsaError::LengthMismatch {
            expected: truth.len(),
            found: 0,
        });
    }
    let n = truth.len();
    let mut total = 0.0;
    for estimate in ensemble {
        if estimate.len() != n {
            return Err(SsaError::LengthMismatch {
                expected: n,
                found: estimate.len(),
            });
        }
        let mut sse = 0.0;
        for (e, t) in estimate.values().iter().zip(truth.values()) {
            let d = e - t;
            sse += d * d;
        }
        total += sse;
    }
    Ok((total / (ensemble.len() * n) as f64).sqrt())
}

/// Pairwise (cascade) summation; order of operands is fixed by the slice.
pub(crate) fn pairwise_sum(values: &[f64]) -> f64 {
    match values.len() {
        0 => 0.0,
        1 => values[0],
        2 => values[0] + values[1],
        len => {
            let mid = len / 2;
            pairwise_sum(&values[..mid]) + pairwise_sum(&values[mid..])
        }
    }
}
