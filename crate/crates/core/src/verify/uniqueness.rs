use std::sync::Arc;

use rayon::prelude::*;

use crate::domain::{check_solvable, Grid, ProblemSpec, UniquenessRegime};
use crate::error::Result;
use crate::solve::{multi_start, SolveOptions};

#[derive(Clone, Debug, PartialEq)]
pub struct UniquenessRow {
    pub lambda: f64,
    pub max_distance: f64,
    pub converged: usize,
    pub failures: usize,
    pub regime: UniquenessRegime,
}

impl UniquenessRow {
    /// Whether the parameters carry a uniqueness guarantee for large `lambda`.
    pub fn guaranteed(&self) -> bool {
        self.regime != UniquenessRegime::NoGuarantee
    }
}

/// Multi-start collapse distance at every `lambda`. The `k`-th entry uses
/// seed `seed + k`.
pub fn uniqueness_experiment(
    template: &ProblemSpec,
    lambdas: &[f64],
    grid: &Arc<Grid>,
    opts: &SolveOptions,
    n_starts: usize,
    seed: u64,
) -> Result<Vec<UniquenessRow>> {
    check_solvable(template)?;
    lambdas
        .par_iter()
        .enumerate()
        .map(|(k, &lambda)| {
            let spec = template.with_lambda(lambda);
            let ms = multi_start(&spec, grid, opts, n_starts, seed.wrapping_add(k as u64))?;
            Ok(UniquenessRow {
                lambda,
                max_distance: ms.max_distance,
                converged: ms.fields.len(),
                failures: ms.failures.len(),
                regime: spec.uniqueness_regime(),
            })
        })
        .collect()
}
