use thiserror::Error;

/// Errors shared across the crate.
///
/// Constructors validate their inputs and numerical routines report failure
/// explicitly; nothing panics on bad physics.
#[derive(Debug, Clone, Error)]
pub enum RgError {
    #[error("height must be positive, got h = {0}")]
    NonPositiveHeight(f64),

    #[error("enstrophy must be nonnegative, got {name} = {value}")]
    NegativeEnstrophy { name: &'static str, value: f64 },

    #[error("squared sound speed is negative: g'h + 3(Phi+phi)h^2 = {0}")]
    ImaginarySoundSpeed(f64),

    #[error("entropy Phi+phi vanishes; production rate is undefined")]
    ZeroEntropy,

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("endstate is not an equilibrium: gph*h0 - c_f*c^2 = {residual:.3e}")]
    NonEquilibriumEndstate { residual: f64 },

    #[error("no positive root: {0}")]
    NoPositiveRoot(String),

    #[error("ODE integration failed: {0}")]
    IntegrationFailure(String),

    #[error("periodic profile needs zero-mean delta; mean = {0:.3e}")]
    NonZeroMean(f64),

    #[error("sample grid too coarse: {0}")]
    GridTooCoarse(String),

    #[error("profile is not asymptotically constant")]
    NotAsymptoticallyConstant,

    #[error("spatial-eigenvalue radicand {0} lies on the branch cut")]
    BranchCut(num_complex::Complex64),

    #[error("consistent splitting fails at lambda = {lambda}: {detail}")]
    SplittingFailure {
        lambda: num_complex::Complex64,
        detail: String,
    },

    #[error("Evans solution overflowed past rescaling bounds")]
    OverflowGuard,

    #[error("|D| = {min_abs:.3e} on the contour is below the zero threshold {threshold:.3e}")]
    ContourThroughZero { min_abs: f64, threshold: f64 },

    #[error("eigenvalue problem is degenerate at lambda = 0")]
    LambdaZero,

    #[error("reduction identities violated: {0}")]
    ReductionViolation(String),

    #[error("CFL violation: dt = {dt:.3e} exceeds stable {dt_max:.3e}")]
    CflViolation { dt: f64, dt_max: f64 },

    #[error("relaxation source too stiff for the explicit update (|dU| = {du:.3e} at dt = {dt:.3e}); refine the grid or lower the CFL number")]
    StiffSource { du: f64, dt: f64 },

    #[error("solution blew up: {0}")]
    BlowUp(String),

    #[error("wave measurement failed: {0}")]
    MeasureFailure(String),

    #[error("io error: {0}")]
    Io(String),
}

impl From<std::io::Error> for RgError {
    fn from(e: std::io::Error) -> Self {
        RgError::Io(e.to_string())
    }
}
