use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("expected a rank-{expected} matrix, found rank {found}")]
    RankMismatch { expected: usize, found: usize },

    #[error("eigenvalue clustering is ambiguous at tolerance {tol:e}")]
    IllConditioned { tol: f64 },

    #[error("product is not of the form x∘y = [f(x), y]")]
    NotAdjointForm,

    #[error("matrix is not in SO(3,C) at tolerance {tol:e}")]
    NotOrthogonal { tol: f64 },

    #[error("singular matrix")]
    Singular,

    #[error("not a solution of the matrix equation (residual norm {residual_norm:e})")]
    NotASolution { residual_norm: f64 },

    #[error("rank/trace pattern matches no family: {0}")]
    Inconclusive(String),

    #[error("{0} is out of range")]
    OutOfRange(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("matrix is not symmetric at tolerance {tol:e}")]
    NotSymmetric { tol: f64 },

    #[error("non-finite entry in matrix")]
    NonFinite,

    #[error("parse error: {0}")]
    Parse(String),
}
