use std::sync::Arc;

use crate::discretization::{nodal_weights, Field, Reaction};
use crate::domain::{check_solvable, FFamily, Grid, ProblemSpec, ReactionSpec};
use crate::error::{Error, Result};

use super::newton::{solve_problem, Problem};
use super::options::{SolveOptions, SolveReport};

#[derive(Clone, Debug, PartialEq)]
pub struct MonotoneOptions {
    /// Shift `K`; zero selects it automatically from sampled `h'`.
    pub shift: f64,
    pub max_outer: usize,
    /// Stop once `|v_{n+1} - v_n|_inf <= tol * |v_{n+1}|_inf`.
    pub tol: f64,
    /// Sample count for the automatic shift and the supersolution constant.
    pub samples: usize,
    /// Ordering slack, relative to the supersolution's sup norm.
    pub slack: f64,
    /// Keep every iterate in [`MonotoneResult::history`].
    pub keep_history: bool,
}

impl Default for MonotoneOptions {
    fn default() -> Self {
        Self {
            shift: 0.0,
            max_outer: 200,
            tol: 1e-8,
            samples: 2048,
            slack: 1e-10,
            keep_history: true,
        }
    }
}

#[derive(Clone, Debug)]
pub struct MonotoneResult {
    pub solution: Field,
    pub subsolution: Field,
    pub supersolution: Field,
    /// `v_0, v_1, ...` (empty unless requested).
    pub history: Vec<Field>,
    /// `|v_{n+1} - v_n|_inf` for every outer step.
    pub increments: Vec<f64>,
    /// Most negative `v_{n+1} - v_n` seen (zero when the sequence never decreased).
    pub worst_decrease: f64,
    /// Largest excursion of an iterate above the supersolution.
    pub worst_overshoot: f64,
    pub shift: f64,
    pub super_constant: f64,
    pub outer_iterations: usize,
    pub converged: bool,
    /// Report of the last auxiliary solve.
    pub report: SolveReport,
}

fn family_of(spec: &ProblemSpec) -> Result<(FFamily, f64)> {
    match spec.reaction {
        ReactionSpec::General { beta, family } => Ok((family, beta)),
        ReactionSpec::PureSingular { .. } => Err(Error::Parameter(
            "monotone iteration needs a general reaction f(u)/u^beta".into(),
        )),
    }
}

/// `h(u) = (f(u) - f(0)) / u^beta`
fn h(family: &FFamily, beta: f64, u: f64) -> f64 {
    (family.value(u) - family.value(0.0)) * u.powf(-beta)
}

fn h_prime(family: &FFamily, beta: f64, u: f64) -> f64 {
    family.derivative(u) * u.powf(-beta) - beta * (family.value(u) - family.value(0.0)) * u.powf(-beta - 1.0)
}

/// `1.1 * max(0, -min h')` over `samples` log-spaced points of `[lower, upper]`.
///
/// `h'` is unbounded below near zero for most families, so the sampled
/// range is the one the iterates occupy: from the smallest interior value of
/// the subsolution to the largest value of the supersolution.
pub fn auto_shift(family: &FFamily, beta: f64, lower: f64, upper: f64, samples: usize) -> f64 {
    let n = samples.max(1000);
    let (a, b) = (lower.ln(), upper.ln());
    let min = (0..n)
        .map(|j| h_prime(family, beta, (a + (b - a) * j as f64 / (n - 1) as f64).exp()))
        .fold(f64::INFINITY, f64::min);
    1.1 * (-min).max(0.0)
}

/// Smallest `C` with `f(t) <= C (1 + t^beta)` on the sampled range
/// `(0, upper]`, padded by 10% and never below `sup f` when `f` is bounded.
pub fn supersolution_constant(family: &FFamily, beta: f64, upper: f64, samples: usize) -> f64 {
    let n = samples.max(1000);
    let sampled = (0..=n)
        .map(|j| {
            let t = upper * j as f64 / n as f64;
            family.value(t) / (1.0 + t.powf(beta))
        })
        .fold(0.0f64, f64::max);
    1.1 * sampled.max(family.supremum().unwrap_or(0.0))
}

fn holds_on(family: &FFamily, beta: f64, c: f64, upper: f64, samples: usize) -> bool {
    let n = samples.max(1000);
    (0..=n).all(|j| {
        let t = upper * j as f64 / n as f64;
        family.value(t) <= c * (1.0 + t.powf(beta))
    })
}

/// Sub/supersolution iteration for `lambda f(u) / u^beta`.
///
/// Starts from the solution with `f` replaced by `inf f` and solves, for
/// every outer step,
///
/// ```text
/// A(v) - lambda g f(0) v^-beta + lambda g K v = lambda g (h(v_n) + K v_n)
/// ```
///
/// with the Newton driver warm-started at `v_n`.
pub fn solve_monotone(
    spec: &ProblemSpec,
    grid: &Arc<Grid>,
    mopts: &MonotoneOptions,
    opts: &SolveOptions,
) -> Result<MonotoneResult> {
    check_solvable(spec)?;
    let (family, beta) = family_of(spec)?;
    if !(mopts.shift >= 0.0 && mopts.shift.is_finite() && mopts.tol > 0.0 && mopts.slack >= 0.0) {
        return Err(Error::Parameter(format!("invalid monotone options {mopts:?}")));
    }
    let base = Problem::new(*spec);

    let sub_problem = base.clone().with_reaction(Reaction::Power {
        coef: family.infimum(),
        beta,
    });
    let (sub, _) = solve_problem(&sub_problem, grid, opts, None)?;

    // Supersolution: grow C until the bound holds on [0, sup super].
    let mut upper = base.expected_scale().max(1.0);
    let mut c = supersolution_constant(&family, beta, upper, mopts.samples);
    let mut sup_field = None;
    for _ in 0..64 {
        let problem = base.clone().with_reaction(Reaction::SuperBound { c, beta });
        let (field, _) = solve_problem(&problem, grid, opts, None)?;
        upper = field.sup_norm();
        if holds_on(&family, beta, c, upper, mopts.samples) {
            sup_field = Some(field);
            break;
        }
        c *= 2.0;
    }
    let sup_field =
        sup_field.ok_or_else(|| Error::Parameter("no supersolution constant found within 64 doublings".into()))?;

    let shift = if mopts.shift > 0.0 {
        mopts.shift
    } else {
        let lower = grid.unknowns().map(|i| sub.values()[i]).fold(f64::INFINITY, f64::min);
        auto_shift(&family, beta, lower, sup_field.sup_norm(), mopts.samples)
    };

    let weights = nodal_weights(spec, grid)?;
    let lambda = spec.lambda;
    let f0 = family.value(0.0);
    let scale = sup_field.sup_norm();
    let slack = mopts.slack * scale;
    let inner = opts.final_stage_only();

    let mut aux = base.with_reaction(Reaction::Power { coef: f0, beta });
    aux.shift = Some(weights.iter().map(|g| lambda * g * shift).collect());

    let mut result = MonotoneResult {
        solution: sub.clone(),
        subsolution: sub.clone(),
        supersolution: sup_field,
        history: Vec::new(),
        increments: Vec::new(),
        worst_decrease: 0.0,
        worst_overshoot: 0.0,
        shift,
        super_constant: c,
        outer_iterations: 0,
        converged: false,
        report: SolveReport::new(0.0),
    };
    check_sandwich(&result, &sub, 0, slack)?;
    if mopts.keep_history {
        result.history.push(sub.clone());
    }

    let mut current = sub;
    for n in 1..=mopts.max_outer {
        let forcing = grid
            .nodes()
            .iter()
            .enumerate()
            .map(|(i, _)| {
                if grid.is_dirichlet(i) {
                    0.0
                } else {
                    let v = current.values()[i];
                    lambda * weights[i] * (h(&family, beta, v) + shift * v)
                }
            })
            .collect();
        aux.forcing = Some(forcing);
        let (next, report) = solve_problem(&aux, grid, &inner, Some(current.clone()))?;
        result.report = report;
        result.outer_iterations = n;

        let mut diff = 0.0f64;
        let mut decrease = (0.0f64, 0usize);
        for (i, (a, b)) in next.values().iter().zip(current.values()).enumerate() {
            diff = diff.max((a - b).abs());
            if a - b < decrease.0 {
                decrease = (a - b, i);
            }
        }
        result.increments.push(diff);
        result.worst_decrease = result.worst_decrease.min(decrease.0);
        if -decrease.0 > slack {
            return Err(Error::MonotonicityFailure {
                iteration: n,
                node: decrease.1,
                violation: -decrease.0,
            });
        }
        check_sandwich(&result, &next, n, slack)?;
        let overshoot = next
            .values()
            .iter()
            .zip(result.supersolution.values())
            .fold(0.0f64, |m, (v, s)| m.max(v - s));
        result.worst_overshoot = result.worst_overshoot.max(overshoot);
        if mopts.keep_history {
            result.history.push(next.clone());
        }
        let done = diff <= mopts.tol * next.sup_norm();
        current = next;
        if done {
            result.converged = true;
            break;
        }
    }
    result.solution = current;
    Ok(result)
}

fn check_sandwich(result: &MonotoneResult, v: &Field, iteration: usize, slack: f64) -> Result<()> {
    let lower = result.subsolution.values();
    let upper = result.supersolution.values();
    for (i, &x) in v.values().iter().enumerate() {
        let violation = (lower[i] - x).max(x - upper[i]);
        if violation > slack {
            return Err(Error::MonotonicityFailure {
                iteration,
                node: i,
                violation,
            });
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shift_vanishes_for_constant_f() {
        let f = FFamily::Constant { c: 2.0 };
        assert_eq!(auto_shift(&f, 0.3, 1e-3, 10.0, 2048), 0.0);
        assert_eq!(h(&f, 0.3, 1.7), 0.0);
    }

    #[test]
    fn shifted_source_is_increasing() {
        let f = FFamily::BoundedDecaying { a: 3.0, b: 1.0 };
        let (beta, upper) = (0.1, 50.0);
        let k = auto_shift(&f, beta, 1e-2, upper, 2048);
        assert!(k > 0.0);
        let vals: Vec<f64> = (0..4000)
            .map(|j| {
                let u = 1e-2 + (upper - 1e-2) * j as f64 / 3999.0;
                h(&f, beta, u) + k * u
            })
            .collect();
        assert!(vals.windows(2).all(|w| w[1] >= w[0]));
    }

    #[test]
    fn h_prime_matches_difference_quotient() {
        let f = FFamily::SubSingularGrowth { gamma: 0.05 };
        for &u in &[0.3, 1.0, 7.0] {
            let e = 1e-6;
            let fd = (h(&f, 0.08, u + e) - h(&f, 0.08, u - e)) / (2.0 * e);
            assert!((fd - h_prime(&f, 0.08, u)).abs() < 1e-7);
        }
    }

    #[test]
    fn supersolution_constant_dominates() {
        for f in [
            FFamily::BoundedDecaying { a: 3.0, b: 1.0 },
            FFamily::SubSingularGrowth { gamma: 0.05 },
            FFamily::Constant { c: 0.5 },
        ] {
            let c = supersolution_constant(&f, 0.08, 1e3, 2048);
            assert!(holds_on(&f, 0.08, c, 1e3, 4096));
        }
    }
}
