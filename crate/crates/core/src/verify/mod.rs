//! Experiments on families of solutions: `lambda` sweeps, log-log exponent
//! fits, envelope ratios `u / (lambda^sigma d)`, ordering in `lambda`, the
//! q-Laplacian limit, multi-start uniqueness probes and a sampled check of
//! the vector inequality used for uniqueness.

mod bounds;
mod fit;
mod inequality;
mod limit;
mod sweep;
mod uniqueness;

pub use bounds::{gradient_growth_check, uniform_linf_check, GradientVerdict, LinfVerdict};
pub use fit::{fit_exponent, fit_power_law, Column, FitResult, Window};
pub use inequality::{inequality_sides, vector_inequality_check, InequalityVerdict};
pub use limit::{limit_qlaplacian, rescaled_limit, LimitResult, ROUTE_TOLERANCE};
pub use sweep::{
    boundary_ratio, check_monotone_in_lambda, lambda_sweep, ratio_profile, MonotoneVerdict, SweepRecord, SweepResult,
};
pub use uniqueness::{uniqueness_experiment, UniquenessRow};
