use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("vector has a component of size {0:.3e} outside the subspace")]
    NotInSubspace(f64),
    #[error("vectors are not orthonormal (deviation {0:.3e})")]
    NotOrthonormal(f64),
    #[error("vector is not a unit vector (norm {0})")]
    NotUnit(f64),
    #[error("matrix is not symmetric (asymmetry {0:.3e})")]
    NotSymmetric(f64),
    #[error("matrix is not orthogonal (deviation {0:.3e})")]
    NotOrthogonal(f64),
    #[error("matrix is not positive definite (smallest eigenvalue {0})")]
    NotPositiveDefinite(f64),
    #[error("Jacobi iteration did not converge after {0} sweeps")]
    NoConvergence(usize),
    #[error("degenerate spectrum: eigenvalue gap {gap:.3e} below {limit:.3e}")]
    DegenerateSpectrum { gap: f64, limit: f64 },
    #[error("eigenvalue structure does not match: {0}")]
    SpectrumMismatch(String),
    #[error("index out of range: {0}")]
    IndexOutOfRange(String),
    #[error("no frame reproduces a canonical matrix (best residual {0:.3e})")]
    NoNormalForm(f64),
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
}

pub type Result<T> = std::result::Result<T, Error>;
