use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("coefficients are not Hermitian symmetric at ({alpha}, {beta}): {detail}")]
    NotHermitian { alpha: String, beta: String, detail: String },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("invalid argument: {0}")]
    Domain(String),

    #[error("curve is not anchored at the polynomial's center")]
    AnchorMismatch,

    #[error("degenerate curve: every component is constant up to order {0}")]
    DegenerateCurve(u32),

    #[error("malformed grid: {0}")]
    MalformedGrid(String),

    #[error("point is not on X within tolerance (|rho(p, p)| = {residual:e}, tol = {tol:e})")]
    NotOnSet { residual: f64, tol: f64 },

    #[error("invalid search configuration: {0}")]
    InvalidConfig(String),

    #[error("Gram mismatch at ({a}, {b}): <F_a, F_b> = {f_inner}, <G_a, G_b> = {g_inner}")]
    GramMismatch { a: usize, b: usize, f_inner: String, g_inner: String },

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("divergent sequence: {0}")]
    Divergent(String),

    #[error("empty point cloud")]
    EmptyCloud,

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
