use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::discretization::Field;
use crate::domain::{Grid, ProblemSpec};
use crate::error::{Error, Result};

use super::newton::{solve_problem, Problem};
use super::options::{SolveOptions, SolveReport};

#[derive(Clone, Debug)]
pub struct MultiStartResult {
    /// Converged fields, in start order.
    pub fields: Vec<Field>,
    pub reports: Vec<SolveReport>,
    /// Start indices of the converged fields.
    pub converged: Vec<usize>,
    /// Failed starts with their error message.
    pub failures: Vec<(usize, String)>,
    /// Largest relative sup-norm distance over pairs of converged fields.
    pub max_distance: f64,
}

/// A positive perturbation of the scaled distance profile: amplitude
/// `10^U(-1,1) * lambda^sigma`, every node multiplied by `1 + U(0, 0.5)`.
pub fn random_guess(spec: &ProblemSpec, grid: &Arc<Grid>, rng: &mut impl Rng) -> Field {
    let amplitude = 10f64.powf(rng.random_range(-1.0..1.0)) * spec.lambda.powf(spec.sigma_beta());
    let values = grid
        .distances()
        .iter()
        .map(|d| amplitude * d * (1.0 + rng.random_range(0.0..0.5)))
        .collect();
    Field::from_values(Arc::clone(grid), values).expect("length matches grid")
}

/// Solves from `n_starts` seeded random guesses.
pub fn multi_start(
    spec: &ProblemSpec,
    grid: &Arc<Grid>,
    opts: &SolveOptions,
    n_starts: usize,
    seed: u64,
) -> Result<MultiStartResult> {
    if n_starts < 2 {
        return Err(Error::Parameter(format!(
            "multi-start needs at least 2 starts, got {n_starts}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let guesses = (0..n_starts).map(|_| random_guess(spec, grid, &mut rng)).collect();
    multi_start_from(spec, grid, opts, guesses)
}

/// Solves from the given guesses in parallel; results keep the input order.
pub fn multi_start_from(
    spec: &ProblemSpec,
    grid: &Arc<Grid>,
    opts: &SolveOptions,
    guesses: Vec<Field>,
) -> Result<MultiStartResult> {
    let problem = Problem::new(*spec);
    let outcomes: Vec<Result<(Field, SolveReport)>> = guesses
        .into_par_iter()
        .map(|g| solve_problem(&problem, grid, opts, Some(g)))
        .collect();

    let mut result = MultiStartResult {
        fields: Vec::new(),
        reports: Vec::new(),
        converged: Vec::new(),
        failures: Vec::new(),
        max_distance: 0.0,
    };
    let mut first_error = None;
    for (k, outcome) in outcomes.into_iter().enumerate() {
        match outcome {
            Ok((f, r)) => {
                result.fields.push(f);
                result.reports.push(r);
                result.converged.push(k);
            }
            Err(e) => {
                result.failures.push((k, e.to_string()));
                first_error.get_or_insert(e);
            }
        }
    }
    if result.fields.is_empty() {
        return Err(first_error.unwrap_or_else(|| Error::Parameter("no starts given".into())));
    }
    for i in 0..result.fields.len() {
        for j in i + 1..result.fields.len() {
            let d = result.fields[i].relative_distance(&result.fields[j])?;
            result.max_distance = result.max_distance.max(d);
        }
    }
    Ok(result)
}
