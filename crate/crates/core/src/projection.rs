//! Orthonormal projection bases and SSA with projection.
//!
//! The decomposition here differs from Basic SSA only in its first
//! steps: rows of the trajectory matrix are projected onto a given
//! subspace of R^K, columns of the remainder onto a subspace of R^L,
//! and only then is the residual expanded by SVD. Projecting onto
//! polynomial subspaces extracts polynomial trends; `ProjSSA(q, p)`
//! denotes row/column projection onto polynomials of degree `q - 1`
//! and `p - 1`, with 0 meaning the projection is skipped. `ProjSSA(1, 1)`
//! is classical double centering.

use nalgebra::{DMatrix, DVector};

use crate::decomposition::DEFAULT_RANK_TOLERANCE;
use crate::decomposition::{svd_expand_with_floor, Decomposition, Eigentriple, TripleKind};
use crate::error::SsaError;
use crate::series::{embed, TimeSeries};
use crate::Result;

/// Inputs whose Gram-Schmidt remainder falls below this fraction of
/// their norm are treated as linearly dependent and dropped.
pub const DEPENDENCE_TOLERANCE: f64 = 1e-10;

/// An orthonormal system of vectors in R^M, stored as matrix columns.
#[derive(Debug, Clone)]
pub struct ProjectionBasis {
    columns: DMatrix<f64>,
}

impl ProjectionBasis {
    /// Dimension M of the ambient space.
    pub fn ambient_dim(&self) -> usize {
        self.columns.nrows()
    }

    /// Number of basis vectors.
    pub fn count(&self) -> usize {
        self.columns.ncols()
    }

    /// The i-th basis vector (0-based).
    pub fn vector(&self, i: usize) -> DVector<f64> {
        self.columns.column(i).clone_owned()
    }

    /// Basis vectors as the columns of an `M x count` matrix.
    pub fn as_matrix(&self) -> &DMatrix<f64> {
        &self.columns
    }
}

/// Which subspaces to project on; an absent basis means the
/// corresponding projector is the zero operator.
#[derive(Debug, Clone)]
pub struct ProjectionSpec {
    row: Option<ProjectionBasis>,
    col: Option<ProjectionBasis>,
}

impl ProjectionSpec {
    /// At least one basis must be present.
    pub fn new(row: Option<ProjectionBasis>, col: Option<ProjectionBasis>) -> Result<Self> {
        if row.is_none() && col.is_none() {
            return Err(SsaError::NoProjector);
        }
        Ok(ProjectionSpec { row, col })
    }

    pub fn rows(basis: ProjectionBasis) -> Self {
        ProjectionSpec {
            row: Some(basis),
            col: None,
        }
    }

    pub fn cols(basis: ProjectionBasis) -> Self {
        ProjectionSpec {
            row: None,
            col: Some(basis),
        }
    }

    pub fn both(row: ProjectionBasis, col: ProjectionBasis) -> Self {
        ProjectionSpec {
            row: Some(row),
            col: Some(col),
        }
    }

    pub fn row_basis(&self) -> Option<&ProjectionBasis> {
        self.row.as_ref()
    }

    pub fn col_basis(&self) -> Option<&ProjectionBasis> {
        self.col.as_ref()
    }

    fn check_dims(&self, window: usize, lag_count: usize) -> Result<()> {
        if let Some(row) = &self.row {
            if row.ambient_dim() != lag_count {
                return Err(SsaError::DimensionMismatch {
                    context: "row basis",
                    expected: lag_count,
                    found: row.ambient_dim(),
                });
            }
        }
        if let Some(col) = &self.col {
            if col.ambient_dim() != window {
                return Err(SsaError::DimensionMismatch {
                    context: "column basis",
                    expected: window,
                    found: col.ambient_dim(),
                });
            }
        }
        Ok(())
    }
}

/// The `ProjSSA(q, p)` spec for an `L x K` trajectory matrix: a row
/// basis of polynomials of degree `q - 1` over R^K and a column basis of
/// degree `p - 1` over R^L. `q = p = 0` yields `None` (plain Basic SSA).
pub fn projssa_spec(
    row_count: usize,
    col_count: usize,
    window: usize,
    lag_count: usize,
) -> Result<Option<ProjectionSpec>> {
    let row = if row_count > 0 {
        Some(polynomial_basis(lag_count, row_count - 1)?)
    } else {
        None
    };
    let col = if col_count > 0 {
        Some(polynomial_basis(window, col_count - 1)?)
    } else {
        None
    };
    match (row, col) {
        (None, None) => Ok(None),
        (row, col) => Ok(Some(ProjectionSpec { row, col })),
    }
}

/// Orthonormal basis of the polynomials of degree `<= degree` sampled on
/// the index grid `1..=ambient_dim`.
///
/// The grid is centered and scaled to `[-1, 1]` before orthogonalization
/// (discrete Legendre polynomials, numerically stable well past degree 8);
/// the span is identical to that of the raw powers `1, n, ..., n^degree`.
/// The first vector is the normalized constant.
pub fn polynomial_basis(ambient_dim: usize, degree: usize) -> Result<ProjectionBasis> {
    if degree >= ambient_dim {
        return Err(SsaError::DegreeTooLarge {
            degree,
            ambient: ambient_dim,
        });
    }
    let m = ambient_dim;
    let grid: Vec<f64> = (0..m)
        .map(|i| {
            if m == 1 {
                0.0
            } else {
                2.0 * i as f64 / (m - 1) as f64 - 1.0
            }
        })
        .collect();
    let raw: Vec<DVector<f64>> = (0..=degree)
        .map(|j| DVector::from_iterator(m, grid.iter().map(|t| t.powi(j as i32))))
        .collect();
    let basis = orthonormalize(&raw)?;
    debug_assert_eq!(basis.count(), degree + 1);
    Ok(basis)
}

/// Gram-Schmidt with one re-orthogonalization pass; inputs that are
/// linearly dependent on earlier ones are dropped, order is preserved.
pub fn orthonormalize(raw: &[DVector<f64>]) -> Result<ProjectionBasis> {
    if raw.is_empty() {
        return Err(SsaError::EmptyBasis);
    }
    let m = raw[0].len();
    let mut kept: Vec<DVector<f64>> = Vec::new();
    for v in raw {
        if v.len() != m {
            return Err(SsaError::DimensionMismatch {
                context: "basis vector",
                expected: m,
                found: v.len(),
            });
        }
        if v.iter().any(|x| !x.is_finite()) {
            return Err(SsaError::NonFinite {
                context: "basis vector",
            });
        }
        let input_norm = v.norm();
        let mut w = v.clone();
        for _ in 0..2 {
            for b in &kept {
                let c = b.dot(&w);
                w.axpy(-c, b, 1.0);
            }
        }
        let residual = w.norm();
        if residual <= DEPENDENCE_TOLERANCE * input_norm || residual == 0.0 {
            continue; // dependent on the vectors already kept
        }
        kept.push(w / residual);
    }
    if kept.is_empty() {
        return Err(SsaError::EmptyBasis);
    }
    let mut columns = DMatrix::zeros(m, kept.len());
    for (i, b) in kept.iter().enumerate() {
        columns.set_column(i, b);
    }
    Ok(ProjectionBasis { columns })
}

/// Row projection `Pi_row(X) = X Q Q^T` of an `L x K` matrix, returned
/// together with its expansion into row-projection eigentriples
/// `sigma_i = |X Q_i|`, `left_i = X Q_i / sigma_i`, `right_i = Q_i`.
///
/// A zero `sigma_i` yields a zero triple (zero vectors), keeping triple
/// indices stable.
pub fn project_rows(
    matrix: &DMatrix<f64>,
    basis: &ProjectionBasis,
) -> Result<(DMatrix<f64>, Vec<Eigentriple>)> {
    if basis.ambient_dim() != matrix.ncols() {
        return Err(SsaError::DimensionMismatch {
            context: "row basis",
            expected: matrix.ncols(),
            found: basis.ambient_dim(),
        });
    }
    let images = matrix * basis.as_matrix(); // L x q, column i = X Q_i
    let mut triples = Vec::with_capacity(basis.count());
    let mut projected = DMatrix::zeros(matrix.nrows(), matrix.ncols());
    for i in 0..basis.count() {
        let image = images.column(i).clone_owned();
        let magnitude = image.norm();
        let (left, right) = if magnitude == 0.0 {
            (
                DVector::zeros(matrix.nrows()),
                DVector::zeros(matrix.ncols()),
            )
        } else {
            (image / magnitude, basis.vector(i))
        };
        if magnitude > 0.0 {
            projected += (&left * right.transpose()) * magnitude;
        }
        triples.push(Eigentriple {
            magnitude,
            left,
            right,
            kind: TripleKind::RowProjection,
        });
    }
    Ok((projected, triples))
}

/// Column projection `Pi_col(X) = P P^T X`, the mirror of
/// [`project_rows`]: `sigma_i = |X^T P_i|`, `left_i = P_i`,
/// `right_i = X^T P_i / sigma_i`.
pub fn project_cols(
    matrix: &DMatrix<f64>,
    basis: &ProjectionBasis,
) -> Result<(DMatrix<f64>, Vec<Eigentriple>)> {
    if basis.ambient_dim() != matrix.nrows() {
        return Err(SsaError::DimensionMismatch {
            context: "column basis",
            expected: matrix.nrows(),
            found: basis.ambient_dim(),
        });
    }
    let images = matrix.transpose() * basis.as_matrix(); // K x p, column i = X^T P_i
    let mut triples = Vec::with_capacity(basis.count());
    let mut projected = DMatrix::zeros(matrix.nrows(), matrix.ncols());
    for i in 0..basis.count() {
        let image = images.column(i).clone_owned();
        let magnitude = image.norm();
        let (left, right) = if magnitude == 0.0 {
            (
                DVector::zeros(matrix.nrows()),
                DVector::zeros(matrix.ncols()),
            )
        } else {
            (basis.vector(i), image / magnitude)
        };
        if magnitude > 0.0 {
            projected += (&left * right.transpose()) * magnitude;
        }
        triples.push(Eigentriple {
            magnitude,
            left,
            right,
            kind: TripleKind::ColumnProjection,
        });
    }
    Ok((projected, triples))
}

/// SSA with projection, decomposition stage.
///
/// Embeds the series, subtracts the row projection, then the column
/// projection of the remainder (row projector first; the order is part
/// of the output contract), and expands the residual by SVD. The triple
/// order is: `q` row-projection triples in basis order, `p`
/// column-projection triples in basis order, then SVD triples by
/// nonincreasing magnitude. Residual singular values are cut off
/// relative to the Frobenius norm of the full trajectory matrix, so an
/// exactly-projected series leaves an empty SVD part.
pub fn proj_ssa(
    series: &TimeSeries,
    window: usize,
    spec: &ProjectionSpec,
) -> Result<Decomposition> {
    proj_ssa_with_tolerance(series, window, spec, DEFAULT_RANK_TOLERANCE)
}

/// [`proj_ssa`] with an explicit relative rank tolerance.
pub fn proj_ssa_with_tolerance(
    series: &TimeSeries,
    window: usize,
    spec: &ProjectionSpec,
    rank_tolerance: f64,
) -> Result<Decomposition> {
    let tm = embed(series, window)?;
    spec.check_dims(tm.window(), tm.lag_count())?;
    let scale = tm.matrix().norm();

    let mut triples: Vec<Eigentriple> = Vec::new();
    let mut residual = tm.into_matrix();

    let row_proj_count = match spec.row_basis() {
        Some(basis) => {
            let (projected, row_triples) = project_rows(&residual, basis)?;
            residual -= projected;
            triples.extend(row_triples);
            basis.count()
        }
        None => 0,
    };
    let col_proj_count = match spec.col_basis() {
        Some(basis) => {
            let (projected, col_triples) = project_cols(&residual, basis)?;
            residual -= projected;
            triples.extend(col_triples);
            basis.count()
        }
        None => 0,
    };

    let svd_triples = svd_expand_with_floor(&residual, rank_tolerance, rank_tolerance * scale)?;
    triples.extend(svd_triples);

    Ok(Decomposition {
        triples,
        series_len: series.len(),
        window,
        row_proj_count,
        col_proj_count,
    })
}

/// Double projection `Pi_both = Pi_row + Pi_col . (id - Pi_row)` of a
/// matrix under a spec; absent bases act as zero operators.
pub fn apply_both(spec: &ProjectionSpec, matrix: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    spec.check_dims(matrix.nrows(), matrix.ncols())?;
    let mut kept = match spec.row_basis() {
        Some(basis) => matrix * basis.as_matrix() * basis.as_matrix().transpose(),
        None => DMatrix::zeros(matrix.nrows(), matrix.ncols()),
    };
    if let Some(basis) = spec.col_basis() {
        let remainder = matrix - &kept;
        kept += basis.as_matrix() * (basis.as_matrix().transpose() * remainder);
    }
    Ok(kept)
}

/// Relative distance `|Pi_both(X) - X|_F / |X|_F` measuring how much of
/// the matrix the double projector keeps: 0 when it is kept exactly, 1
/// when it is annihilated. Zero matrices return 0.
pub fn keeps_matrix(spec: &ProjectionSpec, matrix: &DMatrix<f64>) -> Result<f64> {
    let norm = matrix.norm();
    if norm == 0.0 {
        spec.check_dims(matrix.nrows(), matrix.ncols())?;
        return Ok(0.0);
    }
    let kept = apply_both(spec, matrix)?;
    Ok((matrix - kept).norm() / norm)
}
