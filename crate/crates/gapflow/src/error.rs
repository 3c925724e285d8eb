use thiserror::Error;

/// Error type shared across the crate.
///
/// Variants are grouped by how the command-line driver maps them to exit
/// codes: configuration problems (bad input data) exit with 3, violated
/// mathematical invariants or certification failures exit with 2.
#[derive(Debug, Error)]
pub enum Error {
    // --- configuration / input errors (exit code 3) ---
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("minimal polynomial has repeated roots: gcd(f, f') is nonconstant")]
    RepeatedRoots,
    #[error("minimal polynomial is reducible: {0}")]
    ReducibleMinpoly(String),
    #[error("omega definitions do not form a basis of the field")]
    NotABasis,
    #[error("ambiguous embedding selection: {0}")]
    AmbiguousRoot(String),
    #[error("region is unbounded along axis {axis}")]
    UnboundedRegion { axis: usize },
    #[error("generator {index} is not a unit: norm {norm} has absolute value != 1")]
    NotAUnit { index: usize, norm: String },
    #[error("unit generators are multiplicatively dependent (log-embedding rank < {expected})")]
    DependentUnits { expected: usize },
    #[error("i/o error: {0}")]
    Io(String),

    // --- invariant / certification failures (exit code 2) ---
    #[error("division by zero field element")]
    ZeroInverse,
    #[error("singular linear system: {0}")]
    SingularSystem(String),
    #[error("certified precision budget exhausted: {0}")]
    PrecisionExceeded(String),
    #[error("rescaled spacing outside the label set: {0}")]
    LabelSetIncomplete(String),
    #[error(
        "label box enumeration cap of {cap} points exceeded; certified volume estimate {volume_estimate:.0} \
         (covolume {covolume:.5}) predicts about {predicted:.0} lattice points"
    )]
    BoxCapExceeded {
        cap: usize,
        volume_estimate: f64,
        covolume: f64,
        predicted: f64,
    },
    #[error("partition paths disagree: {0}")]
    DualPathMismatch(String),
    #[error("flow decomposition found an expanding eigenvalue: {0}")]
    PositiveEigenvalue(String),
    #[error("invariant violated: {0}")]
    Invariant(String),
}

impl Error {
    /// Exit code the command-line driver should use for this error.
    #[must_use]
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config(_)
            | Error::RepeatedRoots
            | Error::ReducibleMinpoly(_)
            | Error::NotABasis
            | Error::AmbiguousRoot(_)
            | Error::UnboundedRegion { .. }
            | Error::NotAUnit { .. }
            | Error::DependentUnits { .. }
            | Error::Io(_) => 3,
            _ => 2,
        }
    }
}
