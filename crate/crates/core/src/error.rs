use thiserror::Error;

/// Errors raised by the counting, entropy and network routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("letter {0} is not a lattice direction (expected 1 or 2)")]
    InvalidLetter(u8),
    #[error("height {requested} exceeds the depth cap of {cap}")]
    DepthCap { requested: usize, cap: usize },
    #[error("{candidates} candidate colorings exceed the work cap of {cap}")]
    WorkCap { candidates: u128, cap: u128 },
    #[error("bad matrix: {0}")]
    BadMatrix(String),
    #[error("unknown symbol {0:?}")]
    UnknownSymbol(String),
    #[error("bad alphabet: {0}")]
    BadAlphabet(String),
    #[error("the shift is empty: no symbol roots an infinite coloring")]
    EmptyShift,
    #[error("{count} simple subsystems exceed the enumeration cap of {cap}")]
    EnumerationCap { count: u128, cap: u128 },
    #[error("power iteration did not converge; last bracket [{lower}, {upper}]")]
    NonConvergence { lower: f64, upper: f64 },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("every count is at most one, so the log estimators are undefined")]
    DegenerateLogs,
    #[error("parameters lie on the boundary line {0}")]
    OnBoundary(String),
    #[error("formula route gave {formula}, machinery route gave {machinery}")]
    RouteDisagreement { formula: f64, machinery: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
