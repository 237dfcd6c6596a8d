use thiserror::Error;

/// Errors shared across the measurement, optics, selection, and sampling
/// modules.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Both amplitudes (or all vector components) vanish; nothing to
    /// normalize.
    #[error("zero vector cannot be normalized")]
    ZeroVector,

    /// A Bloch direction deviates from unit norm beyond the input tolerance.
    #[error("Bloch vector has non-unit norm {norm}")]
    NonUnitBloch { norm: f64 },

    /// An operator expected to be Hermitian is not.
    #[error("operator is not Hermitian (max deviation {deviation})")]
    NonHermitian { deviation: f64 },

    /// Sharpness outside the admissible range `[0, π/4]`.
    #[error("sharpness eta = {eta} outside [0, pi/4]")]
    EtaRange { eta: f64 },

    /// Unsharpness outside the admissible range `[0, π/4]`.
    #[error("unsharpness chi = {chi} outside [0, pi/4]")]
    ChiRange { chi: f64 },

    /// Transmission coefficient outside `[0, 1]`.
    #[error("transmission coefficient {value} outside [0, 1]")]
    CoefficientRange { value: f64 },

    /// Conditioning on an outcome of (numerically) zero probability.
    #[error("conditioning on an outcome of probability {probability}")]
    ImpossibleOutcome { probability: f64 },

    /// Outcome strings contain only `+` and `-`.
    #[error("invalid outcome character '{ch}'")]
    BadOutcomeChar { ch: char },

    /// Settings and outcome string have different lengths.
    #[error("length mismatch: {expected} settings vs {got} outcomes")]
    LengthMismatch { expected: usize, got: usize },

    /// Exact enumeration requested beyond the 2^N budget.
    #[error("{levels} levels exceed the enumeration limit")]
    TooManyLevels { levels: usize },

    /// Calibration requested at (numerically) zero sharpness.
    #[error("calibration diverges at zero sharpness")]
    ZeroSharpness,

    /// Postselection on a state orthogonal to the input.
    #[error("selection state is orthogonal to the input state")]
    OrthogonalSelection,

    /// No records survive selection; nothing to estimate.
    #[error("no records available for estimation")]
    EmptySample,
}

pub type Result<T> = core::result::Result<T, Error>;
