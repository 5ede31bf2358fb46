//! SVD expansion of a trajectory matrix into ordered eigentriples.
//!
//! This is the engine behind Basic SSA and behind the residual step of
//! SSA with projection. Triples carry a `kind` tag so that components
//! originating from row/column projections keep their identity through
//! grouping and reconstruction.

use nalgebra::{DMatrix, DVector};

use crate::error::SsaError;
use crate::series::{embed, TimeSeries};
use crate::Result;

/// Relative singular-value cutoff separating exact-rank structure from
/// double-precision noise at the series lengths this crate targets.
pub const DEFAULT_RANK_TOLERANCE: f64 = 1e-9;

/// Origin of an eigentriple.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TripleKind {
    RowProjection,
    ColumnProjection,
    Svd,
}

impl std::fmt::Display for TripleKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            TripleKind::RowProjection => "row-projection",
            TripleKind::ColumnProjection => "column-projection",
            TripleKind::Svd => "svd",
        })
    }
}

/// One rank-one component `magnitude * left * right^T` of a trajectory
/// matrix expansion.
///
/// `left` and `right` are unit vectors of lengths L and K when the
/// magnitude is positive, and zero vectors when it is zero.
#[derive(Debug, Clone)]
pub struct Eigentriple {
    pub magnitude: f64,
    pub left: DVector<f64>,
    pub right: DVector<f64>,
    pub kind: TripleKind,
}

impl Eigentriple {
    /// The elementary matrix `magnitude * left * right^T`.
    pub fn elementary(&self) -> DMatrix<f64> {
        (&self.left * self.right.transpose()) * self.magnitude
    }
}

/// An ordered expansion of a trajectory matrix plus the metadata needed
/// to reconstruct series from it.
///
/// Triples `1..=row_proj_count` come from the row projection,
/// the next `col_proj_count` from the column projection, and the rest
/// from the SVD of the residual in nonincreasing magnitude order.
#[derive(Debug, Clone)]
pub struct Decomposition {
    pub triples: Vec<Eigentriple>,
    pub series_len: usize,
    pub window: usize,
    pub row_proj_count: usize,
    pub col_proj_count: usize,
}

impl Decomposition {
    /// Number of triples, `d`.
    pub fn len(&self) -> usize {
        self.triples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.triples.is_empty()
    }

    /// Number of lagged vectors `K = N - L + 1`.
    pub fn lag_count(&self) -> usize {
        self.series_len - self.window + 1
    }

    /// Number of projection triples `q + p`.
    pub fn projection_count(&self) -> usize {
        self.row_proj_count + self.col_proj_count
    }

    /// Sum of the elementary matrices for the given 1-based triple indices.
    pub fn group_matrix(&self, indices: &[usize]) -> Result<DMatrix<f64>> {
        let mut sum = DMatrix::zeros(self.window, self.lag_count());
        for &index in indices {
            if index == 0 || index > self.triples.len() {
                return Err(SsaError::IndexOutOfRange {
                    index,
                    count: self.triples.len(),
                });
            }
            sum += self.triples[index - 1].elementary();
        }
        Ok(sum)
    }

    /// Sum of all elementary matrices.
    pub fn matrix_sum(&self) -> DMatrix<f64> {
        let indices: Vec<usize> = (1..=self.triples.len()).collect();
        self.group_matrix(&indices)
            .unwrap_or_else(|_| DMatrix::zeros(self.window, self.lag_count()))
    }
}

/// Expands a matrix as `sum_i sigma_i U_i V_i^T` by SVD, discarding
/// singular values below `rank_tolerance` relative to the largest.
///
/// Triples are sorted by nonincreasing magnitude (ties broken by the
/// lexicographic order of the sign-normalized left vectors) and each
/// left vector's largest-magnitude entry is made nonnegative, the right
/// vector's sign following, so output is deterministic.
pub fn svd_expand(matrix: &DMatrix<f64>, rank_tolerance: f64) -> Result<Vec<Eigentriple>> {
    svd_expand_with_floor(matrix, rank_tolerance, 0.0)
}

/// Like [`svd_expand`], with an extra absolute magnitude floor used by
/// SSA with projection so the residual's rank cutoff stays relative to
/// the full trajectory matrix rather than to the (possibly tiny)
/// residual itself.
pub(crate) fn svd_expand_with_floor(
    matrix: &DMatrix<f64>,
    rank_tolerance: f64,
    magnitude_floor: f64,
) -> Result<Vec<Eigentriple>> {
    if matrix.iter().any(|v| !v.is_finite()) {
        return Err(SsaError::NonFinite { context: "matrix" });
    }
    let svd = matrix.clone().svd(true, true);
    let u = svd.u.expect("u requested");
    let v_t = svd.v_t.expect("v_t requested");
    let sigma = svd.singular_values;

    let largest = sigma.iter().cloned().fold(0.0f64, f64::max);
    if largest <= 0.0 {
        return Ok(Vec::new());
    }
    let cutoff = (rank_tolerance * largest).max(magnitude_floor);

    let mut triples: Vec<Eigentriple> = Vec::new();
    for i in 0..sigma.len() {
        let magnitude = sigma[i];
        if magnitude < cutoff || magnitude <= 0.0 {
            continue;
        }
        let mut left = DVector::from(u.column(i).clone_owned());
        let mut right = DVector::from(v_t.row(i).transpose());
        normalize_sign(&mut left, &mut right);
        triples.push(Eigentriple {
            magnitude,
            left,
            right,
            kind: TripleKind::Svd,
        });
    }
    triples.sort_by(|a, b| {
        b.magnitude
            .partial_cmp(&a.magnitude)
            .expect("finite magnitudes")
            .then_with(|| lex_cmp(&a.left, &b.left))
    });
    Ok(triples)
}

/// Basic SSA decomposition step: SVD expansion of the trajectory matrix.
pub fn basic_ssa(series: &TimeSeries, window: usize) -> Result<Decomposition> {
    let tm = embed(series, window)?;
    let triples = svd_expand(tm.matrix(), DEFAULT_RANK_TOLERANCE)?;
    Ok(Decomposition {
        triples,
        series_len: series.len(),
        window,
        row_proj_count: 0,
        col_proj_count: 0,
    })
}

/// Relative weights `magnitude_i^2 / sum_j magnitude_j^2` of the triples.
pub fn contributions(decomposition: &Decomposition) -> Result<Vec<f64>> {
    let total: f64 = decomposition
        .triples
        .iter()
        .map(|t| t.magnitude * t.magnitude)
        .sum();
    if total <= 0.0 {
        return Err(SsaError::ZeroDecomposition);
    }
    Ok(decomposition
        .triples
        .iter()
        .map(|t| t.magnitude * t.magnitude / total)
        .collect())
}

/// Flips `(left, right)` so `left`'s largest-magnitude entry (first one
/// on ties) is nonnegative.
fn normalize_sign(left: &mut DVector<f64>, right: &mut DVector<f64>) {
    let mut pivot = 0usize;
    let mut best = -1.0f64;
    for (i, v) in left.iter().enumerate() {
        if v.abs() > best {
            best = v.abs();
            pivot = i;
        }
    }
    if left[pivot] < 0.0 {
        left.neg_mut();
        right.neg_mut();
    }
}

fn lex_cmp(a: &DVector<f64>, b: &DVector<f64>) -> std::cmp::Ordering {
    for (x, y) in a.iter().zip(b.iter()) {
        match x.partial_cmp(y).expect("finite entries") {
            std::cmp::Ordering::Equal => continue,
            other => return other,
        }
    }
    std::cmp::Ordering::Equal
}
