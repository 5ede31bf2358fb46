//! Singular spectrum analysis (SSA) with subspace projection.
//!
//! The crate decomposes a time series by embedding it into a Hankel
//! trajectory matrix, optionally projecting the matrix rows and columns
//! onto given subspaces (polynomial subspaces by default), expanding the
//! remainder by SVD, and mapping grouped components back to series by
//! diagonal averaging.
//!
//! Modules:
//! - [`series`] — time-series container, Hankel embedding, diagonal averaging
//! - [`decomposition`] — SVD expansion into eigentriples, Basic SSA
//! - [`projection`] — orthonormal bases, row/column projectors, SSA with projection
//! - [`reconstruction`] — eigentriple grouping and series reconstruction
//! - [`signals`] — linear-recurrence signal generators and seeded noise
//! - [`regression`] — polynomial least squares and trend refitting
//! - [`mod@bench`] — Monte Carlo accuracy comparison harness
//! - [`io`] — CSV and config-file formats shared with the CLI
//!
//! Series indices are 1-based in all formulas and documentation; storage
//! is 0-based internally.

pub mod bench;
pub mod decomposition;
pub mod error;
pub mod io;
pub mod projection;
pub mod reconstruction;
pub mod regression;
pub mod series;
pub mod signals;

pub use error::SsaError;
pub use series::{embed, hankelize, rmse, TimeSeries, TrajectoryMatrix};

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, SsaError>;
