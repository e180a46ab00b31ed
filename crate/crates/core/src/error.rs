use thiserror::Error;

/// Errors raised by the toolkit.
///
/// Variants fall in two families: input errors (malformed data, shape
/// mismatches) and hypothesis failures (the data is well formed but the
/// mathematical precondition of the requested construction does not hold).
/// [`Error::is_hypothesis_failure`] tells them apart.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix contains NaN or infinite entries")]
    NonFinite,
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix is not Hermitian: |M - M^*|_F = {defect:e}")]
    NotHermitian { defect: f64 },
    #[error("matrix has eigenvalue {value:e} below the PSD tolerance")]
    NegativeEigenvalue { value: f64 },
    #[error("operator norm {norm} exceeds the admissible limit {limit}")]
    NormTooLarge { norm: f64, limit: f64 },
    #[error("polar decomposition needs rows >= cols, got {rows}x{cols}")]
    WideMatrix { rows: usize, cols: usize },
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("invalid g-frame: {0}")]
    InvalidFrame(String),
    #[error("partition {partition:?} does not cover {count} vectors")]
    BadPartition { partition: Vec<usize>, count: usize },
    #[error("family is not a g-frame: lambda_min(S) = {lower:e}")]
    NotAFrame { lower: f64 },
    #[error("sum of block dimensions {total} differs from dim H = {h_dim}")]
    DimensionMismatch { total: usize, h_dim: usize },
    #[error("family is not a g-Riesz basis")]
    NotGRiesz,
    #[error("family is not a g-orthonormal basis")]
    NotGOnb,
    #[error("operator is not a co-isometry: |K K^* - I|_F = {defect:e}")]
    NotCoisometry { defect: f64 },
    #[error("weights must be real for this construction")]
    ComplexWeights,
    #[error("weights are not sign-definite (mixed or zero signs)")]
    MixedSigns,
    #[error("bijection operator G is singular")]
    SingularG,
    #[error("families are not dual: |sum D_i^* L_i - I|_F = {defect:e}")]
    NotDual { defect: f64 },
    #[error("hypothesis failed: {inequality} ({detail})")]
    HypothesisFailed { inequality: String, detail: String },
    #[error("series did not reach tolerance within {terms} terms")]
    MaxIterations { terms: usize },
    #[error("inversion residual {residual:e} exceeds tolerance {tol:e}")]
    ResidualTooLarge { residual: f64, tol: f64 },
    #[error("operator is singular")]
    Singular,
    #[error("operator is not self-adjoint")]
    NotSelfAdjoint,
    #[error("control operator is not invertible")]
    NotInvertible,
    #[error("non-positive input: {0}")]
    NonPositiveInput(String),
    #[error("block {block}: C L_i^* is not a scalar multiple of L_i^* (residual {residual:e})")]
    NotEigenRelation { block: usize, residual: f64 },
    #[error("block {block} is zero; its weight is undefined")]
    ZeroBlock { block: usize },
    #[error("weight {index} is zero")]
    ZeroWeight { index: usize },
    #[error("weight {index} is not positive")]
    NonPositiveWeight { index: usize },
    #[error("cannot generate {kind}: {reason}")]
    InfeasibleKind { kind: String, reason: String },
    #[error("component {index} failed certification as {kind}")]
    CertificationFailed { index: usize, kind: String },
    #[error("schema error at {path}: {message}")]
    Schema { path: String, message: String },
}

impl Error {
    pub(crate) fn hypothesis(inequality: impl Into<String>, detail: impl Into<String>) -> Self {
        Error::HypothesisFailed {
            inequality: inequality.into(),
            detail: detail.into(),
        }
    }

    pub(crate) fn schema(path: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Schema {
            path: path.into(),
            message: message.into(),
        }
    }

    /// True when the input was well formed but a mathematical precondition failed.
    pub fn is_hypothesis_failure(&self) -> bool {
        !matches!(
            self,
            Error::NonFinite
                | Error::NotSquare { .. }
                | Error::WideMatrix { .. }
                | Error::ShapeMismatch(_)
                | Error::InvalidFrame(_)
                | Error::BadPartition { .. }
                | Error::Schema { .. }
        )
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
