//! Nonlinear solution drivers.
//!
//! [`solve_newton`] runs damped Newton through a continuation in the flux
//! regularisation and the singular floor. [`solve_monotone`] is the
//! sub/supersolution iteration, nesting the Newton driver inside an outer
//! fixed-point loop. [`multi_start`] repeats Newton from seeded random
//! starts and measures how far apart the converged fields land.

mod monotone;
mod multistart;
mod newton;
mod options;

pub use monotone::{auto_shift, solve_monotone, supersolution_constant, MonotoneOptions, MonotoneResult};
pub use multistart::{multi_start, multi_start_from, random_guess, MultiStartResult};
pub use newton::{initial_guess, solve_newton, solve_problem, Problem};
pub use options::{InitialGuess, Schedule, SolveOptions, SolveReport, StageRecord};

#[cfg(test)]
mod tests;
