use std::sync::Arc;

use crate::discretization::{Field, Reaction};
use crate::domain::{Grid, ProblemSpec};
use crate::error::{Error, Result};
use crate::solve::{solve_newton, solve_problem, Problem, SolveOptions};

#[derive(Clone, Debug)]
pub struct LimitResult {
    /// `|v~ - v_0|_inf`
    pub distance: f64,
    /// Solution of `-mu Δ_p v - Δ_q v = g`.
    pub rescaled: Field,
    /// Solution of `-Δ_q v = g`.
    pub limit: Field,
    /// Relative gap between the rescaled solve and `lambda^(-1/(q-1)) u_lambda`.
    pub route_gap: f64,
}

/// Route agreement required by [`limit_qlaplacian`].
pub const ROUTE_TOLERANCE: f64 = 1e-8;

fn unit_source(template: &ProblemSpec, mu: f64) -> Problem {
    Problem::new(template.with_lambda(1.0))
        .with_flux_coefficient(mu)
        .with_reaction(Reaction::Power { coef: 1.0, beta: 0.0 })
}

/// Distance between the solution with p-flux coefficient `mu` and the pure
/// q-Laplacian solution, both with unit source `g`.
pub fn rescaled_limit(
    template: &ProblemSpec,
    mu: f64,
    grid: &Arc<Grid>,
    opts: &SolveOptions,
) -> Result<(f64, Field, Field)> {
    if template.beta() != 0.0 {
        return Err(Error::Parameter("the q-Laplacian limit needs beta = 0".into()));
    }
    let (rescaled, _) = solve_problem(&unit_source(template, mu), grid, opts, None)?;
    let (limit, _) = solve_problem(&unit_source(template, 0.0), grid, opts, None)?;
    let distance = rescaled
        .values()
        .iter()
        .zip(limit.values())
        .fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
    Ok((distance, rescaled, limit))
}

/// Rescaled solution at `mu = lambda^((p-q)/(q-1))` against the q-Laplacian
/// limit, cross-checked with the rescaled unscaled solve.
pub fn limit_qlaplacian(
    template: &ProblemSpec,
    lambda: f64,
    grid: &Arc<Grid>,
    opts: &SolveOptions,
) -> Result<LimitResult> {
    let spec = template.with_lambda(lambda);
    let (distance, rescaled, limit) = rescaled_limit(template, spec.mu(), grid, opts)?;
    let (u, _) = solve_newton(&spec, grid, opts)?;
    let route_gap = u.scaled(lambda.powf(-spec.sigma_zero())).relative_distance(&rescaled)?;
    if route_gap > ROUTE_TOLERANCE {
        return Err(Error::RouteMismatch { gap: route_gap });
    }
    Ok(LimitResult {
        distance,
        rescaled,
        limit,
        route_gap,
    })
}
