use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("register of {0} qubits is outside the supported range 1..=10")]
    UnsupportedQubitCount(usize),

    #[error("qubit index {index} out of range for a {num_qubits}-qubit register")]
    QubitOutOfRange { index: usize, num_qubits: usize },

    #[error("gate or channel targets must be distinct")]
    RepeatedTarget,

    #[error("matrix is not unitary (deviation {0:e})")]
    NotUnitary(f64),

    #[error("matrix is not Hermitian (deviation {0:e})")]
    NotHermitian(f64),

    #[error("observable is not dichotomic: O^2 deviates from I by {0:e}")]
    NotDichotomic(f64),

    #[error("observables must not act on overlapping qubits")]
    OverlappingSupports,

    #[error("Kraus operators are not complete (deviation {0:e})")]
    IncompleteKraus(f64),

    #[error("probability {0} outside [0, 1]")]
    InvalidProbability(f64),

    #[error("state is not normalized (squared norm {0})")]
    NotNormalized(f64),

    #[error("invalid density matrix: {0}")]
    InvalidDensityMatrix(String),

    #[error("observables do not anticommute (deviation {0:e})")]
    NotAnticommuting(f64),

    #[error("too many parties for exhaustive enumeration: {0} (max 6)")]
    TooManyParties(usize),

    #[error("functional has {functional} parties but the strategy has {strategy}")]
    PartyMismatch { functional: usize, strategy: usize },

    #[error("invalid Pauli string: {0}")]
    InvalidPauli(String),

    #[error("invalid attack: {0}")]
    InvalidAttack(String),

    #[error("satellite {0} coincides with the receiver position")]
    SatelliteAtReceiver(String),

    #[error("at least {required} satellites are required, got {found}")]
    TooFewSatellites { required: usize, found: usize },

    #[error("satellite/range id mismatch: {0}")]
    IdMismatch(String),

    #[error("unknown satellite id {0}")]
    UnknownSatellite(String),

    #[error("singular geometry: positioning Jacobian is rank deficient")]
    SingularGeometry,

    #[error("solver did not converge in {iterations} iterations (residual {residual_norm} m)")]
    NotConverged { iterations: usize, residual_norm: f64 },

    #[error("invalid solver configuration: {0}")]
    InvalidSolverConfig(String),

    #[error("unknown hardware profile {0:?}")]
    UnknownProfile(String),

    #[error("invalid hardware profile: {0}")]
    InvalidProfile(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
