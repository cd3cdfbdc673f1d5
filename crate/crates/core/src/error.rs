use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AfError {
    #[error("duplicate argument name `{0}`")]
    DuplicateArgument(String),
    #[error("attack ({from}, {to}) out of range for {n} arguments")]
    AttackOutOfRange { from: usize, to: usize, n: usize },
    #[error("unknown argument `{0}`")]
    UnknownArgument(String),
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("framework has {n} arguments, exhaustive oracle limit is {limit}")]
    OracleLimit { n: usize, limit: usize },
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum QuboError {
    #[error("assignment has {got} bits, problem has {expected} variables")]
    LengthMismatch { expected: usize, got: usize },
    #[error("variable {index} out of range for {len} variables")]
    VariableOutOfRange { index: usize, len: usize },
    #[error("variable {0} used twice in one gadget")]
    DuplicateVariable(usize),
    #[error("gadget needs at least one input")]
    EmptyInputs,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EncodeError {
    #[error(transparent)]
    Af(#[from] AfError),
    #[error("non-emptiness needs at least one argument")]
    EmptyFramework,
    #[error("{0}")]
    Unsupported(String),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EnforceError {
    #[error(transparent)]
    Af(#[from] AfError),
    #[error("target set is empty")]
    EmptyTarget,
    #[error("penalty weight {lambda} is below the safe bound {min} (n^2 + 1)")]
    LambdaTooSmall { lambda: i64, min: i64 },
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AnnealError {
    #[error("invalid annealing parameters: {0}")]
    InvalidParams(String),
    /// A zero-energy sample whose projection fails the polynomial verifier.
    /// Always an encoding defect.
    #[error("zero-energy sample decodes to {witness:?}, which is not a valid extension")]
    InconsistentWitness { witness: Vec<usize> },
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SolveError {
    #[error(transparent)]
    Enforce(#[from] EnforceError),
    #[error(transparent)]
    Anneal(#[from] AnnealError),
}
