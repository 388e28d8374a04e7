use std::sync::Arc;
use web_time::Instant;

use crate::discretization::{tridiag_solve, Field, Operator, Reaction, RegularizedFluxParams};
use crate::domain::{check_solvable, Grid, ProblemSpec};
use crate::error::{Error, Result};

use super::options::{InitialGuess, SolveOptions, SolveReport, StageRecord};

/// A discrete problem for the Newton driver: a spec plus the modifications
/// used by rescaled, limit and auxiliary problems.
#[derive(Clone, Debug)]
pub struct Problem {
    pub spec: ProblemSpec,
    /// Coefficient of the p-flux (1 for the original problem).
    pub flux_coefficient: f64,
    /// Replaces the reaction derived from `spec`.
    pub reaction: Option<Reaction>,
    /// Nodal shift `k_i u_i` on the left side.
    pub shift: Option<Vec<f64>>,
    /// Nodal source `b_i` on the right side.
    pub forcing: Option<Vec<f64>>,
}

impl Problem {
    pub fn new(spec: ProblemSpec) -> Self {
        Self {
            spec,
            flux_coefficient: 1.0,
            reaction: None,
            shift: None,
            forcing: None,
        }
    }

    pub fn with_flux_coefficient(mut self, mu_p: f64) -> Self {
        self.flux_coefficient = mu_p;
        self
    }

    pub fn with_reaction(mut self, reaction: Reaction) -> Self {
        self.reaction = Some(reaction);
        self
    }

    pub fn operator<'g>(&self, grid: &'g Grid) -> Result<Operator<'g>> {
        let fp = RegularizedFluxParams {
            eta: 0.0,
            mu_p: self.flux_coefficient,
        };
        let mut op = Operator::new(&self.spec, grid, fp, 0.0)?;
        if let Some(r) = self.reaction {
            op = op.with_reaction(r);
        }
        if let Some(k) = &self.shift {
            op = op.with_shift(k.clone());
        }
        if let Some(b) = &self.forcing {
            op = op.with_forcing(b.clone());
        }
        Ok(op)
    }

    /// Expected amplitude of the solution, `lambda^(1/(q-1+beta)) * inradius`.
    pub fn expected_scale(&self) -> f64 {
        self.spec.lambda.powf(self.spec.sigma_beta()) * self.spec.domain.inradius()
    }
}

/// Solves the problem from the default initial guess.
pub fn solve_newton(spec: &ProblemSpec, grid: &Arc<Grid>, opts: &SolveOptions) -> Result<(Field, SolveReport)> {
    solve_problem(&Problem::new(*spec), grid, opts, None)
}

pub fn initial_guess(problem: &Problem, grid: &Arc<Grid>, guess: &InitialGuess) -> Result<Field> {
    let spec = &problem.spec;
    match *guess {
        InitialGuess::DistanceProfile { amplitude } => {
            let a = amplitude * spec.lambda.powf(spec.sigma_beta());
            Ok(Field::from_fn(Arc::clone(grid), |_, d| a * d))
        }
        InitialGuess::LinearizedQ2 => {
            let mut linear = *spec;
            linear.p = 2.0;
            linear.q = 2.0;
            let op = Operator::new(&linear, grid, RegularizedFluxParams::exact(), 0.0)?
                .with_reaction(Reaction::Power { coef: 1.0, beta: 0.0 });
            let zero = Field::zeros(Arc::clone(grid));
            let mut sys = op.jacobian(zero.values())?;
            sys.rhs = op.residual(zero.values())?.iter().map(|r| -r).collect();
            let x = tridiag_solve(&sys)?;
            let floor = 1e-3 * x.iter().fold(0.0f64, |m, v| m.max(*v));
            let mut values = vec![0.0; grid.cells() + 1];
            for (i, v) in grid.unknowns().zip(x) {
                values[i] = v.max(floor * grid.distances()[i] / spec.domain.inradius());
            }
            Field::from_values(Arc::clone(grid), values)
        }
    }
}

/// Damped Newton with `(eta, floor)` continuation, optionally warm-started.
pub fn solve_problem(
    problem: &Problem,
    grid: &Arc<Grid>,
    opts: &SolveOptions,
    initial: Option<Field>,
) -> Result<(Field, SolveReport)> {
    check_solvable(&problem.spec)?;
    opts.validate()?;
    let start = Instant::now();
    let mut op = problem.operator(grid)?;
    let tol = opts.tol_residual.unwrap_or_else(|| 1e-10 * op.source_scale());
    let mut u = match initial {
        Some(f) => {
            if !Arc::ptr_eq(f.grid(), grid) && **f.grid() != **grid {
                return Err(Error::GridMismatch);
            }
            f
        }
        None => initial_guess(problem, grid, &opts.initial_guess)?,
    };
    if grid.unknowns().any(|i| !(u.values()[i] > 0.0)) {
        return Err(Error::Parameter(
            "initial guess must be positive at unknown nodes".into(),
        ));
    }

    let scale = problem.expected_scale();
    let stages = opts.stages();
    let mut report = SolveReport::new(tol);
    for (k, &(eta, rel_floor)) in stages.iter().enumerate() {
        let floor = rel_floor * scale;
        op.set_regularization(eta, floor);
        let record = newton_stage(&op, &mut u, opts, tol)?;
        report.total_iterations += record.iterations;
        report.final_residual = record.residual;
        let last = k + 1 == stages.len();
        if last {
            report.converged = record.converged;
        }
        let active = record.floor_active;
        report.stages.push(record);
        if last && active > 0 {
            report.wall_time = start.elapsed();
            return Err(Error::FloorActive {
                active,
                report: Box::new(report),
            });
        }
    }
    report.wall_time = start.elapsed();
    if !report.converged {
        return Err(Error::ConvergenceFailure(Box::new(report)));
    }
    Ok((u, report))
}

/// Runs Newton at fixed regularisation until the residual norm drops below
/// `tol`, the step stalls, or the iteration cap is hit.
pub(crate) fn newton_stage(op: &Operator<'_>, u: &mut Field, opts: &SolveOptions, tol: f64) -> Result<StageRecord> {
    let grid = op.grid();
    let unknowns = grid.unknowns();
    let first = unknowns.start;
    let use_energy = op.has_energy();
    let mass = grid.mass();

    let mut r = op.residual(u.values())?;
    let mut rnorm = op.residual_norm(&r);
    let mut merit = op.merit(&r);
    let mut energy = if use_energy { op.energy(u.values())? } else { f64::NAN };
    let mut record = StageRecord {
        eta: op.flux_params().eta,
        floor: op.floor(),
        iterations: 0,
        residual: rnorm,
        converged: false,
        floor_active: 0,
        energies: if use_energy { vec![energy] } else { Vec::new() },
    };

    let mut trial = u.clone();
    while record.iterations < opts.max_iter {
        if rnorm <= tol {
            record.converged = true;
            break;
        }
        let mut sys = op.jacobian(u.values())?;
        sys.rhs = r.iter().map(|v| -v).collect();
        let step = tridiag_solve(&sys)?;

        // largest step keeping u_i >= theta * u_i
        let mut alpha = 1.0f64;
        for (k, d) in step.iter().enumerate() {
            let ui = u.values()[first + k];
            if *d < 0.0 && ui > 0.0 {
                alpha = alpha.min((1.0 - opts.theta) * ui / -d);
            }
        }
        let slope: f64 = step.iter().enumerate().map(|(k, d)| mass[first + k] * r[k] * d).sum();

        let mut accepted = false;
        for _ in 0..=opts.max_backtracks {
            {
                let t = trial.values_mut();
                for (k, d) in step.iter().enumerate() {
                    t[first + k] = u.values()[first + k] + alpha * d;
                }
            }
            if let Ok(rt) = op.residual(trial.values()) {
                let mt = op.merit(&rt);
                let residual_ok = mt.is_finite() && mt <= (1.0 - 1e-4 * alpha) * merit;
                let mut energy_ok = false;
                let mut et = f64::NAN;
                if use_energy {
                    et = op.energy(trial.values())?;
                    energy_ok = et <= energy + 1e-4 * alpha * slope;
                }
                if mt.is_finite() && (residual_ok || energy_ok) {
                    std::mem::swap(u, &mut trial);
                    r = rt;
                    rnorm = op.residual_norm(&r);
                    merit = mt;
                    if use_energy {
                        energy = et;
                        record.energies.push(et);
                    }
                    accepted = true;
                    break;
                }
            }
            alpha *= opts.backtrack_factor;
        }
        record.iterations += 1;
        if !accepted {
            break;
        }
        let step_norm = step.iter().fold(0.0f64, |m, d| m.max(d.abs())) * alpha;
        if step_norm <= opts.tol_step * u.sup_norm() && rnorm > tol {
            break;
        }
    }
    if rnorm <= tol {
        record.converged = true;
    }
    record.residual = rnorm;
    let floor = op.floor();
    if floor > 0.0 {
        record.floor_active = unknowns.filter(|&i| u.values()[i] < floor).count();
    }
    Ok(record)
}
