use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("matrix is not Hermitian (residual {residual:.3e})")]
    NotHermitian { residual: f64 },

    #[error("expected a square matrix, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("numerical failure: {0}")]
    NumericalFailure(String),

    #[error("zero matrix has no inverse square root on its range")]
    ZeroMatrix,

    #[error("non-finite entry in {0}")]
    NonFinite(&'static str),

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("family spans only the zero subspace")]
    EmptySpan,

    #[error("{which} is not Parseval (residual {residual:.3e})")]
    NotParseval { which: &'static str, residual: f64 },

    #[error("gate failed: {0}")]
    GateFailed(String),

    #[error("hypothesis failed: {0}")]
    HypothesisFailed(String),

    #[error("dimension case {case}: deficit {deficit}, kernel {kernel}")]
    DimensionCase {
        case: &'static str,
        deficit: usize,
        kernel: usize,
    },

    #[error("cutoff {cutoff} exceeds family length {len}")]
    BadCutoff { cutoff: usize, len: usize },

    #[error("complement family is not Parseval for the orthogonal complement (residual {residual:.3e})")]
    NotParsevalComplement { residual: f64 },

    #[error("deficit of target ({target}) exceeds deficit of source ({source_deficit})")]
    DeficitOrder { target: usize, source_deficit: usize },

    #[error("map is not invertible")]
    NotInvertible,

    #[error("{0} is not positive definite")]
    NotPD(&'static str),

    #[error("bad lattice: {0}")]
    BadLattice(String),

    #[error("window is zero")]
    ZeroWindow,

    #[error("Gabor system is not a tight frame")]
    NotTight,

    #[error("lattice is at critical density")]
    CriticalDensity,

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Variant name, for machine-readable reports.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::NotHermitian { .. } => "NotHermitian",
            Error::NotSquare { .. } => "NotSquare",
            Error::NumericalFailure(_) => "NumericalFailure",
            Error::ZeroMatrix => "ZeroMatrix",
            Error::NonFinite(_) => "NonFinite",
            Error::ShapeMismatch(_) => "ShapeMismatch",
            Error::EmptySpan => "EmptySpan",
            Error::NotParseval { .. } => "NotParseval",
            Error::GateFailed(_) => "GateFailed",
            Error::HypothesisFailed(_) => "HypothesisFailed",
            Error::DimensionCase { .. } => "DimensionCase",
            Error::BadCutoff { .. } => "BadCutoff",
            Error::NotParsevalComplement { .. } => "NotParsevalComplement",
            Error::DeficitOrder { .. } => "DeficitOrder",
            Error::NotInvertible => "NotInvertible",
            Error::NotPD(_) => "NotPD",
            Error::BadLattice(_) => "BadLattice",
            Error::ZeroWindow => "ZeroWindow",
            Error::NotTight => "NotTight",
            Error::CriticalDensity => "CriticalDensity",
            Error::Parse(_) => "Parse",
        }
    }
}
