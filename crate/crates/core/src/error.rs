use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("characteristic {0} is not a prime")]
    NotPrime(u64),
    #[error("characteristic 2 is not supported; the field order must be odd")]
    EvenCharacteristic,
    #[error("extension degree must be at least 1")]
    ZeroDegree,
    #[error("d = {0} is not a prime power, so no finite field of that order exists")]
    NotPrimePower(u64),
    #[error("d = {0} is a power of 2; characteristic-2 fields are not supported by this construction")]
    PowerOfTwo(u64),
    #[error("d = {0}: d ≡ 1 (mod 4) not supported by this construction (it requires d ≡ 3 (mod 4))")]
    UnsupportedResidue(u64),
    #[error("field order {0} is too large")]
    FieldTooLarge(u64),
    #[error("invalid modulus: {0}")]
    InvalidModulus(String),
    #[error("element index {index} out of range for a field of order {order}")]
    ElementOutOfRange { index: u64, order: u32 },
    #[error("coefficient vector {0:?} is not a valid element")]
    InvalidCoefficients(Vec<u32>),
    #[error("zero has no multiplicative inverse")]
    ZeroInverse,
    #[error("the quadratic character is not defined at zero")]
    CharacterAtZero,
    #[error("the Gauss sum is only defined here for a nonzero argument")]
    GaussSumAtZero,
    #[error("matrix is not Hermitian (max |M - M†| = {0:e})")]
    NotHermitian(f64),
    #[error("Wigner function has imaginary part {0:e} above tolerance")]
    NotReal(f64),
    #[error("linear map has determinant {0}, expected 1")]
    DeterminantNotOne(u32),
    #[error("operands live on different fields")]
    FieldMismatch,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("d = {d} exceeds the configured cost cap {cap} for this operation")]
    CostCap { d: u32, cap: u32 },
    #[error("rank-one projector eigenvector residual {0:e} above tolerance")]
    EigenResidual(f64),
    #[error("every candidate density-matrix column has negligible norm")]
    DegenerateColumns,
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
