//! Crate-wide error type.

use thiserror::Error;

#[derive(Error, Debug)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("fields live on different grids ({0}x{0} L={1} vs {2}x{2} L={3})")]
    GridMismatch(usize, f64, usize, f64),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("time step unstable at t={t}: sup-norm grew {growth:.2}x in one step")]
    Unstable { t: f64, growth: f64 },

    #[error("tail mass {tail:.3e} exceeded 1e-6 at t={t}: box too small for this horizon")]
    TailMass { t: f64, tail: f64 },

    #[error("quadrature did not converge: {0}")]
    QuadratureNoConvergence(String),

    #[error("series truncation too small: tail proxy {proxy:.3e} exceeds {tol:.3e}")]
    SeriesTruncation { proxy: f64, tol: f64 },

    #[error("decay fit rejected: {0}")]
    FitRejected(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
