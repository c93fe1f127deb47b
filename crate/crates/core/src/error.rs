use alloc::string::String;

/// Errors raised by the core library.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix is not symmetric (relative asymmetry {asymmetry:.3e} > {tol:.1e})")]
    NotSymmetric { asymmetry: f64, tol: f64 },
    #[error("matrix is not positive definite (eigenvalue range [{min_eig:.3e}, {max_eig:.3e}])")]
    NotPositiveDefinite { min_eig: f64, max_eig: f64 },
    #[error("matrix is empty")]
    Empty,
    #[error("diagonal entry {index} of a partial-correlation matrix is {value}, expected 0")]
    NonZeroDiagonal { index: usize, value: f64 },
    #[error("entry ({i}, {j}) = {value} is outside (-1, 1)")]
    EntryOutOfRange { i: usize, j: usize, value: f64 },
    #[error("entry ({i}, {j}) is not finite")]
    NonFinite { i: usize, j: usize },
    #[error("expected {expected} labels, found {found}")]
    LabelCount { expected: usize, found: usize },
    #[error("duplicate label {0:?}")]
    DuplicateLabel(String),
    #[error("unknown label {0:?}")]
    UnknownLabel(String),
    #[error("scale entry {index} = {value} must be finite and positive")]
    InvalidScale { index: usize, value: f64 },
    #[error("graph carries no scale vector; precision cannot be reconstructed")]
    MissingScale,
    #[error("matrix is singular")]
    SingularMatrix,
    #[error("restricted block (1 - R_K) is singular")]
    SingularRestrictedBlock,
    #[error("block to be eliminated is singular")]
    SingularBlock,
    #[error("truncated loop sum at node {node} is {loop_sum}, denominator not positive")]
    DenominatorNonPositive { node: usize, loop_sum: f64 },
    #[error("q = {q} outside the admissible interval (0, {bound})")]
    QOutOfRange { q: f64, bound: f64 },
    #[error("index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },
    #[error("invalid node set: {0}")]
    InvalidNodeSet(&'static str),
    #[error("removing the node set leaves no nodes")]
    EmptyRemainder,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("recurrence denominator 1 - l = {0} is not positive")]
    DegenerateDenominator(f64),
    #[error("parameter {name} = {value} outside its bound ({bound})")]
    ParamOutOfBound {
        name: &'static str,
        value: f64,
        bound: f64,
    },
    #[error("correlation length is undefined at r = 0")]
    UndefinedAtZero,
    #[error("spectral radius {0} of the series matrix is not below 1")]
    SpectralRadiusTooLarge(f64),
    #[error("sample covariance is singular")]
    SingularSampleCovariance,
    #[error("sample count n = {n} must exceed dimension d = {d}")]
    TooFewSamples { n: usize, d: usize },
    #[error("factor-model column {0} has zero total weight")]
    DegenerateColumn(usize),
    #[error("invalid partition: {0}")]
    InvalidPartition(&'static str),
}

pub type Result<T> = core::result::Result<T, Error>;
