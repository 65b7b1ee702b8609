use thiserror::Error;

#[derive(Debug, Error)]
pub enum GeoError {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("non-finite entry at index {0}")]
    NonFinite(usize),

    #[error("invalid exponent {0}: must lie in [1, inf]")]
    InvalidExponent(f64),

    #[error("invalid space: {0}")]
    InvalidSpace(String),

    #[error("invalid operator: {0}")]
    InvalidOperator(String),

    #[error("dimension {dim} exceeds the Monte Carlo cap of {cap}; use the exact or hit-or-miss route")]
    DimensionCap { dim: usize, cap: usize },

    #[error("too few samples: {got} < {min}")]
    TooFewSamples { got: usize, min: usize },

    #[error("operator is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("too many subsets: {0} exceeds the enumeration cap")]
    EnumerationCap(u128),

    #[error("optimizer stagnated with KKT residual {residual:.3e} (best iterate kept)")]
    Stagnated { residual: f64, best: Vec<f64> },

    #[error("every restart produced a rank-deficient map")]
    AllRestartsDegenerate,

    #[error("linear program failed: {0}")]
    LinearProgram(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("spec parse error at `{field}`: {message}")]
    Spec { field: String, message: String },
}

pub type Result<T, E = GeoError> = std::result::Result<T, E>;

/// Deserializes `value`, naming the offending field as a path below `root`.
pub fn parse_json<T: serde::de::DeserializeOwned>(value: &serde_json::Value, root: &str) -> Result<T> {
    serde_path_to_error::deserialize(value.clone()).map_err(|e| {
        let path = e.path().to_string();
        let field = if path == "." { root.to_string() } else { format!("{root}.{path}") };
        GeoError::Spec { field, message: e.into_inner().to_string() }
    })
}
