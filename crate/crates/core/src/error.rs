use thiserror::Error;

/// Every failure the solver, the diagnostics and the oracle can report.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("term with zero decay rate cannot be integrated over an unbounded size range")]
    NonDecayingTerm,

    #[error("invalid argument scale {0}: must be strictly positive")]
    InvalidScale(String),

    #[error("negative size exponent {0} in the birth integrand")]
    NegativeExponent(i64),

    #[error("invalid collision kernel: {0}")]
    InvalidKernel(String),

    #[error("fragmentation law violates mass conservation: {0}")]
    InvalidFragmentation(String),

    #[error("invalid initial condition: {0}")]
    InvalidInitialCondition(String),

    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("unknown case `{0}`")]
    UnknownCase(String),

    #[error("no exact reference available for case `{0}`")]
    NoExactSolution(String),

    #[error("case `{case}` is outside its domain of validity at time {time}")]
    OutOfDomain { case: String, time: f64 },

    #[error("contraction constant eta = {0} must lie in (0, 1)")]
    EtaOutOfRange(f64),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("the two forms of the VIM correction disagree at component {0}")]
    StepMismatch(usize),

    #[error("quadrature did not reach tolerance within depth {max_depth} on [{a}, {b}]")]
    ToleranceNotMet { a: f64, b: f64, max_depth: u32 },

    #[error("moment equation for j = {0} is not closed for this kernel")]
    NotClosed(u32),

    #[error("moment integration left the domain of validity at time {0}")]
    DomainExit(f64),

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
