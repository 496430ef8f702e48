use thiserror::Error;

/// Errors raised by the beamforming library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid topology: {0}")]
    InvalidTopology(String),

    #[error("symbol duration must be positive, got {0}")]
    NonPositiveSymbolDuration(f64),

    #[error("reference destination {index} out of range ({count} destinations)")]
    BadReference { index: usize, count: usize },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("invalid correlation tensor: {0}")]
    InvalidCorrelation(String),

    #[error("non-positive distance {distance} m on link CCRN {ccrn} -> {receiver}")]
    NonPositiveDistance {
        ccrn: usize,
        receiver: String,
        distance: f64,
    },

    #[error("invalid CSI model: {0}")]
    InvalidCsiModel(String),

    #[error("leakage matrix for destination {destination} is singular")]
    SingularLeakage { destination: usize },

    #[error("zero-forcing needs more CCRNs ({ccrns}) than primary receivers ({primaries})")]
    ZeroForcingInfeasible { ccrns: usize, primaries: usize },

    #[error("zero-forcing projection for destination {destination} vanished")]
    DegenerateProjection { destination: usize },

    #[error("invalid allocation problem: {0}")]
    InvalidProblem(String),

    #[error("beam {beam} leaks into no primary receiver; its power is unbounded")]
    UnboundedBeam { beam: usize },

    #[error("no active set satisfies the KKT conditions (best residual {residual:e})")]
    AllocationInfeasible { residual: f64 },

    #[error("exhaustive selection over {ccrns} CCRNs exceeds the limit of {limit}")]
    SelectionTooLarge { ccrns: usize, limit: usize },

    #[error("every CCRN subset was infeasible ({evaluated} evaluated)")]
    NoFeasibleSubset { evaluated: usize },

    #[error("{0}")]
    Config(#[from] crate::config::ConfigErrors),

    #[error("campaign: {0}")]
    Campaign(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
