use thiserror::Error;

/// Unified error type for the whole crate.
///
/// Variants are grouped by the layer that raises them; the CLI maps
/// `Usage`-like conditions to exit code 2 and assertion failures to 1.
#[derive(Debug, Error)]
pub enum Error {
    // ---- word layer ----
    #[error("word is a power of u = [x,y]; operation undefined on <u>")]
    WordInCyclicU,
    #[error("word too long: l_A = {len} exceeds the budget {budget}")]
    WordTooLong { len: usize, budget: usize },
    #[error("geodesic length {len} exceeds the exact-computation radius {radius}; letter count is an upper bound")]
    OutOfRadius { len: usize, radius: usize },
    #[error("invalid letter {0:?}; expected one of x,X,y,Y (free) or x,X,y,Y,a,A,b,B (surface)")]
    BadLetter(char),

    // ---- graph layer ----
    #[error("vertex {vertex} has odd degree {degree}; 2-factorization needs even degrees")]
    OddDegree { vertex: usize, degree: usize },
    #[error("vertex {vertex} has degree {degree}, expected {expected}")]
    NotRegular {
        vertex: usize,
        degree: usize,
        expected: usize,
    },
    #[error("graph is disconnected")]
    Disconnected,
    #[error("graph is a forest: no circuit exists")]
    Forest,
    #[error("edge index {0} out of range")]
    MissingEdge(usize),
    #[error("circulant step {step} out of range for n = {n} (need 0 < step < n/2, distinct)")]
    BadStep { step: usize, n: usize },
    #[error("cycle-enumeration cutoff {0} exceeds the supported maximum {1}")]
    CutoffTooLarge(usize, usize),
    #[error("no eligible edge for splice: every edge lies on the stored minimal circuit")]
    NoSpliceEdge,

    // ---- constructors ----
    #[error("infeasible parameters: {0}")]
    Infeasible(String),
    #[error("max_tries = {tries} exhausted: {context} (estimated acceptance {acceptance:.3e})")]
    MaxTriesExhausted {
        tries: u64,
        context: String,
        acceptance: f64,
    },
    #[error("{0} is not an odd prime >= 5")]
    NotOddPrime(u64),
    #[error("cannot find {k} edges pairwise at distance > {separation}")]
    NoSeparatedEdges { k: usize, separation: usize },

    // ---- schreier / tower ----
    #[error("tower size guard exceeded: n_r = {0} > {1}")]
    SizeGuard(u64, u64),
    #[error("no base-stabilizing word within cutoff {0}")]
    NoStabilizer(usize),

    // ---- geometry ----
    #[error("matrix not hyperbolic: |trace| = {0} <= 2 + tol")]
    NotHyperbolic(f64),
    #[error("representation invalid: {0}")]
    BadRep(String),

    // ---- plumbing ----
    #[error("assertion failed: {0}")]
    Assertion(String),
    #[error("usage: {0}")]
    Usage(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Exit code for the CLI: 2 for usage/precondition problems, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Usage(_)
            | Error::Infeasible(_)
            | Error::BadLetter(_)
            | Error::BadStep { .. }
            | Error::CutoffTooLarge(..)
            | Error::NotOddPrime(_)
            | Error::MissingEdge(_)
            | Error::Io(_)
            | Error::Json(_) => 2,
            _ => 1,
        }
    }
}
