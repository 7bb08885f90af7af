use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is singular (|det| = {det:e})")]
    SingularMatrix { det: f64 },

    #[error("matrix has negative determinant {det}; not an element of PSL(2,R)")]
    NegativeDeterminant { det: f64 },

    #[error("upper half-plane point must have positive imaginary part, got {y}")]
    NotInUpperHalfPlane { y: f64 },

    #[error("h·g⁻¹ lies in the ω-cell; the crossover quantity is undefined")]
    CrossoverUndefined,

    #[error("point {x} lies outside the domain [0, {total})")]
    OutOfDomain { x: String, total: String },

    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),

    #[error("invalid lengths: {0}")]
    InvalidLengths(String),

    #[error("permutation is reducible (preserves the first {0} intervals)")]
    Reducible(usize),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("trajectory hits a cone point at time {time}")]
    SingularityHit { time: String },

    #[error("ray starts at a cone point; Busemann value undefined")]
    StartsAtSingularity,

    #[error("trajectory does not close up (gap {gap:e})")]
    NotClosed { gap: f64 },

    #[error("no legal routes of length at most {length}")]
    EmptyRouteSet { length: f64 },

    #[error("weights violate the switch condition at switch {switch} by {defect:e}")]
    SwitchCondition { switch: usize, defect: f64 },

    #[error("no rational weight system within {bound} of the target (best distance {best_distance})")]
    Infeasible {
        best: Option<Vec<i64>>,
        best_distance: f64,
        bound: f64,
    },

    #[error("invalid train track: {0}")]
    InvalidTrack(String),

    #[error("invalid surface group: {0}")]
    InvalidGroup(String),

    #[error("no hyperbolic element with nonzero length at radius {0}")]
    NoHyperbolicElement(usize),

    #[error("parse error at line {line}, field `{field}`: {message}")]
    Parse {
        line: usize,
        field: String,
        message: String,
    },
}

impl Error {
    pub(crate) fn parse(line: usize, field: &str, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            field: field.to_string(),
            message: message.into(),
        }
    }
}
