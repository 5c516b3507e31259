use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Offsets text could not be read. `line` is 1-based.
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    /// Offsets parsed but break a section invariant.
    #[error("invalid section: {0}")]
    Validation(String),

    #[error("degenerate section: {0}")]
    DegenerateSection(String),

    #[error("degenerate normal at point {index}: neighbouring points coincide")]
    DegenerateNormal { index: usize },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    Dimension { expected: usize, found: usize },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("singular system: pivot {pivot:e} in column {column} is below threshold")]
    SingularSystem { column: usize, pivot: f64 },

    /// Neither of the first two points of a non-symmetric section had a
    /// root, so the extrapolation fallback has nothing to extrapolate from.
    #[error("angle assignment aborted: points 0 and 1 both have no root")]
    ThetaAbort,

    #[error("search failed: no parameter count in {n_min}..={n_max} reached tolerance {sigma_e}")]
    SearchFailed {
        n_min: usize,
        n_max: usize,
        sigma_e: f64,
    },

    #[error("Nash-Sutcliffe coefficient undefined for {axis}: reference values have zero variance")]
    UndefinedCoefficient { axis: char },
}
