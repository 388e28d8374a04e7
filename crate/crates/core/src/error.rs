use thiserror::Error;

use crate::domain::Violation;
use crate::solve::SolveReport;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("point {x} lies outside the closed domain")]
    DomainViolation { x: f64 },

    #[error("power weight is singular at boundary point {x}")]
    SingularEvaluation { x: f64 },

    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("invalid problem: {}", join_violations(.0))]
    InvalidSpec(Vec<Violation>),

    #[error("singular reaction evaluated at node {node} with value {value} and no floor")]
    Singularity { node: usize, value: f64 },

    #[error("flux derivative is unbounded at cell {cell}; use a positive regularization")]
    DegenerateFlux { cell: usize },

    #[error("zero pivot in tridiagonal solve at row {row}")]
    SingularSystem { row: usize },

    #[error("energy is not available for reaction {0}")]
    UnsupportedEnergy(String),

    #[error("Newton solve did not converge (final residual {:.3e})", .0.final_residual)]
    ConvergenceFailure(Box<SolveReport>),

    #[error("singular floor still active at {active} nodes after the final stage")]
    FloorActive { active: usize, report: Box<SolveReport> },

    #[error("monotone iteration lost order at iteration {iteration}, node {node} (violation {violation:.3e})")]
    MonotonicityFailure {
        iteration: usize,
        node: usize,
        violation: f64,
    },

    #[error("fields live on different grids")]
    GridMismatch,

    #[error("fit failed: {0}")]
    Fit(String),

    #[error("rescaled and unscaled routes disagree by {gap:.3e}")]
    RouteMismatch { gap: f64 },
}

fn join_violations(v: &[Violation]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join("; ")
}
