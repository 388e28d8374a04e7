use std::sync::Arc;

use rayon::prelude::*;

use crate::discretization::Field;
use crate::domain::{check_solvable, Grid, ProblemSpec};
use crate::error::{Error, Result};
use crate::solve::{solve_newton, SolveOptions};

/// Summary of one solve in a parameter sweep.
#[derive(Clone, Debug, PartialEq)]
pub struct SweepRecord {
    pub lambda: f64,
    pub sup_norm: f64,
    pub probe_value: f64,
    /// Largest cell-slope magnitude.
    pub grad_max: f64,
    pub ratio_min: f64,
    pub ratio_max: f64,
    pub ratio_median: f64,
    /// `lambda^(-1/(q-1+beta)) * sup_norm`
    pub rescaled_sup_norm: f64,
    pub newton_iters: usize,
    pub residual_norm: f64,
    pub converged: bool,
    /// Error message for a failed solve.
    pub failure: Option<String>,
}

impl SweepRecord {
    fn failed(lambda: f64, err: &Error) -> Self {
        Self {
            lambda,
            sup_norm: f64::NAN,
            probe_value: f64::NAN,
            grad_max: f64::NAN,
            ratio_min: f64::NAN,
            ratio_max: f64::NAN,
            ratio_median: f64::NAN,
            rescaled_sup_norm: f64::NAN,
            newton_iters: 0,
            residual_norm: f64::NAN,
            converged: false,
            failure: Some(err.to_string()),
        }
    }

    /// Builds the record for a converged field.
    pub fn from_field(spec: &ProblemSpec, u: &Field, newton_iters: usize, residual_norm: f64) -> Self {
        let grid = u.grid();
        let ratios = ratio_profile(u, spec.lambda, spec);
        let (ratio_min, ratio_max) = extremes(&ratios);
        let sup_norm = u.sup_norm();
        Self {
            lambda: spec.lambda,
            sup_norm,
            probe_value: u.values()[grid.probe_index()],
            grad_max: u.max_slope(),
            ratio_min,
            ratio_max,
            ratio_median: median(&ratios),
            rescaled_sup_norm: sup_norm * spec.lambda.powf(-spec.sigma_beta()),
            newton_iters,
            residual_norm,
            converged: true,
            failure: None,
        }
    }
}

/// Records of a `lambda` sweep, plus the converged fields (`None` on failure).
#[derive(Clone, Debug)]
pub struct SweepResult {
    pub template: ProblemSpec,
    pub records: Vec<SweepRecord>,
    pub fields: Vec<Option<Field>>,
}

impl SweepResult {
    pub fn lambdas(&self) -> Vec<f64> {
        self.records.iter().map(|r| r.lambda).collect()
    }

    pub fn converged(&self) -> impl Iterator<Item = &SweepRecord> {
        self.records.iter().filter(|r| r.converged)
    }

    /// Builds a result from records alone (no fields), e.g. for synthetic checks.
    pub fn from_records(template: ProblemSpec, records: Vec<SweepRecord>) -> Self {
        let fields = vec![None; records.len()];
        Self {
            template,
            records,
            fields,
        }
    }
}

/// Solves the template at every `lambda` (in parallel, ordered by input).
pub fn lambda_sweep(
    template: &ProblemSpec,
    lambdas: &[f64],
    grid: &Arc<Grid>,
    opts: &SolveOptions,
) -> Result<SweepResult> {
    if lambdas.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::Parameter("lambda list must be strictly increasing".into()));
    }
    for &l in lambdas {
        check_solvable(&template.with_lambda(l))?;
    }
    let outcomes: Vec<(SweepRecord, Option<Field>)> = lambdas
        .par_iter()
        .map(|&lambda| {
            let spec = template.with_lambda(lambda);
            match solve_newton(&spec, grid, opts) {
                Ok((u, report)) => (
                    SweepRecord::from_field(&spec, &u, report.total_iterations, report.final_residual),
                    Some(u),
                ),
                Err(e) => (SweepRecord::failed(lambda, &e), None),
            }
        })
        .collect();
    let (records, fields) = outcomes.into_iter().unzip();
    Ok(SweepResult {
        template: *template,
        records,
        fields,
    })
}

/// `u_i / (lambda^sigma * d(x_i))` at every unknown node.
pub fn ratio_profile(u: &Field, lambda: f64, spec: &ProblemSpec) -> Vec<f64> {
    let grid = u.grid();
    let envelope = lambda.powf(spec.sigma_beta());
    grid.unknowns()
        .map(|i| u.values()[i] / (envelope * grid.distances()[i]))
        .collect()
}

/// Extremes of [`ratio_profile`]: empirical envelope constants `(c_1, c_2)`.
pub fn boundary_ratio(u: &Field, lambda: f64, spec: &ProblemSpec) -> (f64, f64) {
    extremes(&ratio_profile(u, lambda, spec))
}

fn extremes(v: &[f64]) -> (f64, f64) {
    v.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &x| {
        (lo.min(x), hi.max(x))
    })
}

fn median(v: &[f64]) -> f64 {
    if v.is_empty() {
        return f64::NAN;
    }
    let mut s = v.to_vec();
    s.sort_by(f64::total_cmp);
    let m = s.len() / 2;
    if s.len() % 2 == 1 {
        s[m]
    } else {
        0.5 * (s[m - 1] + s[m])
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MonotoneVerdict {
    pub ok: bool,
    /// Largest `u_k - u_{k+1}` over consecutive pairs and nodes.
    pub worst_violation: f64,
    /// Pair index and node of the worst violation.
    pub location: (usize, usize),
}

/// Checks `u_k <= u_{k+1} + 1e-10` nodewise for consecutive fields.
pub fn check_monotone_in_lambda(fields: &[Field]) -> Result<MonotoneVerdict> {
    let mut verdict = MonotoneVerdict {
        ok: true,
        worst_violation: 0.0,
        location: (0, 0),
    };
    for (k, pair) in fields.windows(2).enumerate() {
        if !pair[0].same_grid(&pair[1]) {
            return Err(Error::GridMismatch);
        }
        for (i, (a, b)) in pair[0].values().iter().zip(pair[1].values()).enumerate() {
            if a - b > verdict.worst_violation {
                verdict.worst_violation = a - b;
                verdict.location = (k, i);
            }
        }
    }
    verdict.ok = verdict.worst_violation <= 1e-10;
    Ok(verdict)
}
