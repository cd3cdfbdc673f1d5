//! QUBO encodings of abstract argumentation tasks, a simulated-annealing
//! sampler to minimize them, and exhaustive oracles to check the answers.

pub mod af;
pub mod anneal;
pub mod benchgen;
pub mod encodings;
pub mod enforcement;
pub mod error;
pub mod qubo;

pub use af::{
    AcceptanceMode, ArgumentSet, ArgumentationFramework, Format, Oracle, Semantics,
    DEFAULT_ORACLE_LIMIT,
};
pub use anneal::{decide, sample, AnnealParams, Answer, DecisionReport, SampleSet};
pub use encodings::{EncodeOptions, EncodedTask, Task};
pub use enforcement::{EnforcementReport, EnforcementResult, EnforcementTask};
pub use error::{AfError, AnnealError, EncodeError, EnforceError, QuboError, SolveError};
pub use qubo::{QuboProblem, Role, VariableRegistry};
