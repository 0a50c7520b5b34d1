use thiserror::Error;

/// Errors surfaced by every layer of the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("zero input is not allowed here")]
    ZeroInput,

    #[error("{0} is not squarefree")]
    NotSquarefree(i64),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("precision exhausted in {op}: err {err} exceeds the {digits}-digit target")]
    PrecisionExhausted {
        op: &'static str,
        digits: u32,
        err: String,
    },

    #[error("route mismatch for {what}: |{a} - {b}| exceeds combined err {bound}")]
    RouteMismatch {
        what: String,
        a: String,
        b: String,
        bound: String,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
