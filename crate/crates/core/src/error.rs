use thiserror::Error;

/// A parameter tuple `(u, n, r, k)` that does not present a group of order `u·n`.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParamError {
    #[error("u = {0} and n = {1} must both be at least 2")]
    TooSmall(i64, i64),
    #[error("amalgam r = {r} does not divide n = {n}")]
    AmalgamNotDivisor { r: i64, n: i64 },
    #[error("twist k = {k} is not a unit modulo n = {n}")]
    TwistNotUnit { k: i64, n: i64 },
    #[error("k^u = {k}^{u} is not 1 modulo n = {n}")]
    TwistOrder { k: i64, u: i64, n: i64 },
    #[error("r·(k-1) = {r}·({k}-1) is not 0 modulo n = {n}")]
    Inconsistent { r: i64, k: i64, n: i64 },
}

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Params(#[from] ParamError),
    #[error("parse error at byte {offset}: {message} (near {token:?})")]
    Parse {
        offset: usize,
        token: String,
        message: String,
    },
    #[error("malformed data set: {0}")]
    Malformed(String),
    #[error("incompatible inputs: {0}")]
    Mismatch(String),
    #[error("input is not a valid data set: {0}")]
    InvalidInput(String),
    #[error("derivation defect: {0}")]
    Defect(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
