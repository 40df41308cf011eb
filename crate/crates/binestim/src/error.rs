use thiserror::Error;

/// Errors shared by the referee, the algorithms, the oracles and the
/// adversaries.
#[derive(Debug, Error)]
pub enum Error {
    /// Placing the item would push the bin's load above 1.
    #[error("capacity exceeded: bin {bin} load {load} cannot take item of size {item}")]
    CapacityExceeded {
        bin: usize,
        load: String,
        item: String,
    },

    /// A placement addressed a bin index past the first empty one.
    #[error("invalid bin index {index}: next fresh bin is {fresh}")]
    InvalidBin { index: usize, fresh: usize },

    /// An actual size fell outside the band allowed by its announcement.
    #[error("adversary dishonest: item {item} actual {actual} outside band of announced {announced} with delta {delta}")]
    AdversaryDishonest {
        item: usize,
        actual: String,
        announced: String,
        delta: String,
    },

    /// A parameter violated a documented precondition.
    #[error("bad parameter: {0}")]
    BadParameter(String),

    /// An adversary's internal bookkeeping left no admissible size to emit.
    #[error("construction failure: {0}")]
    ConstructionFailure(String),

    /// A claimed optimal packing failed its exact feasibility check.
    #[error("certificate infeasible: {0}")]
    CertificateInfeasible(String),

    /// The exact solver was asked for more items than its configured limit.
    #[error("instance too large for exact solve: {n} items (limit {limit})")]
    InstanceTooLarge { n: usize, limit: usize },

    /// An oracle was called on an instance violating its precondition.
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),

    /// A planned placement would exceed capacity; unreachable while every
    /// actual size respects its band.
    #[error("plan violation: {0}")]
    PlanViolation(String),

    /// A bin in a Delayed-Best-Fit packing matched none of the known
    /// configurations; signals an implementation bug.
    #[error("unclassifiable bin {bin}: {detail}")]
    UnclassifiableBin { bin: usize, detail: String },

    /// Malformed instance file or transcript.
    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
