use std::time::Duration;

/// Geometric sequence `start, start/factor, ...` ending exactly at `end`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Schedule {
    pub start: f64,
    pub end: f64,
    pub factor: f64,
}

impl Schedule {
    pub fn constant(value: f64) -> Self {
        Self {
            start: value,
            end: value,
            factor: 10.0,
        }
    }

    pub fn values(&self) -> Vec<f64> {
        let mut out = vec![self.start];
        if self.factor > 1.0 && self.end < self.start {
            let mut v = self.start;
            loop {
                v /= self.factor;
                if v <= self.end * (1.0 + 1e-9) {
                    break;
                }
                out.push(v);
            }
            out.push(self.end);
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum InitialGuess {
    /// `amplitude * lambda^(1/(q-1+beta)) * d(x)`
    DistanceProfile { amplitude: f64 },
    /// Solution of `-2 u'' = lambda g`, clipped to stay positive.
    LinearizedQ2,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SolveOptions {
    /// Residual tolerance; `None` means `1e-10 * lambda * mean g`.
    pub tol_residual: Option<f64>,
    /// Relative step below which a stage counts as stalled.
    pub tol_step: f64,
    pub max_iter: usize,
    pub backtrack_factor: f64,
    pub max_backtracks: usize,
    /// Positivity safeguard: every update keeps `u_i >= theta * old u_i`.
    pub theta: f64,
    /// Flux regularisation per continuation stage.
    pub eta: Schedule,
    /// Singular floor per stage, relative to `lambda^sigma * inradius`.
    /// The last stage always runs without a floor.
    pub floor: Schedule,
    pub initial_guess: InitialGuess,
}

impl Default for SolveOptions {
    fn default() -> Self {
        Self {
            tol_residual: None,
            tol_step: 1e-12,
            max_iter: 50,
            backtrack_factor: 0.5,
            max_backtracks: 40,
            theta: 0.1,
            eta: Schedule {
                start: 1e-2,
                end: 1e-10,
                factor: 10.0,
            },
            floor: Schedule {
                start: 1e-2,
                end: 1e-8,
                factor: 10.0,
            },
            initial_guess: InitialGuess::DistanceProfile { amplitude: 1.0 },
        }
    }
}

impl SolveOptions {
    /// `(eta, relative floor)` for every stage; the final floor is zero.
    pub fn stages(&self) -> Vec<(f64, f64)> {
        let etas = self.eta.values();
        let floors = if self.floor.start > 0.0 {
            self.floor.values()
        } else {
            Vec::new()
        };
        let count = etas.len().max(floors.len() + 1);
        (0..count)
            .map(|k| {
                let eta = etas[k.min(etas.len() - 1)];
                let floor = if k + 1 == count {
                    0.0
                } else {
                    floors.get(k).copied().unwrap_or(0.0)
                };
                (eta, floor)
            })
            .collect()
    }

    /// Only the last stage, for warm-started re-solves.
    pub fn final_stage_only(&self) -> Self {
        let eta = self.eta.end;
        Self {
            eta: Schedule::constant(eta),
            floor: Schedule::constant(0.0),
            ..self.clone()
        }
    }

    pub fn validate(&self) -> crate::Result<()> {
        let ok = self.tol_step > 0.0
            && self.tol_residual.is_none_or(|t| t > 0.0)
            && self.theta > 0.0
            && self.theta < 1.0
            && self.backtrack_factor > 0.0
            && self.backtrack_factor < 1.0
            && self.max_iter > 0
            && self.eta.end >= 0.0
            && self.eta.start >= self.eta.end
            && self.floor.start >= self.floor.end
            && self.floor.end >= 0.0;
        if ok {
            Ok(())
        } else {
            Err(crate::Error::Parameter(format!("invalid solver options {self:?}")))
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct StageRecord {
    pub eta: f64,
    pub floor: f64,
    pub iterations: usize,
    pub residual: f64,
    pub converged: bool,
    /// Unknowns sitting below the floor at the end of the stage.
    pub floor_active: usize,
    /// Energy of every accepted iterate (empty when no energy exists).
    pub energies: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SolveReport {
    pub stages: Vec<StageRecord>,
    pub total_iterations: usize,
    pub converged: bool,
    pub final_residual: f64,
    pub tolerance: f64,
    pub wall_time: Duration,
}

impl SolveReport {
    pub(crate) fn new(tolerance: f64) -> Self {
        Self {
            stages: Vec::new(),
            total_iterations: 0,
            converged: false,
            final_residual: f64::INFINITY,
            tolerance,
            wall_time: Duration::ZERO,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_schedule() {
        let o = SolveOptions::default();
        let etas = o.eta.values();
        assert_eq!(etas.len(), 9);
        assert_eq!(etas[0], 1e-2);
        assert_eq!(*etas.last().unwrap(), 1e-10);
        let stages = o.stages();
        assert_eq!(stages.len(), 9);
        assert_eq!(stages.last().unwrap(), &(1e-10, 0.0));
        assert_eq!(stages[0], (1e-2, 1e-2));
        assert!(stages.windows(2).all(|w| w[1].0 <= w[0].0 && w[1].1 <= w[0].1));
    }

    #[test]
    fn single_stage() {
        let o = SolveOptions::default().final_stage_only();
        assert_eq!(o.stages(), vec![(1e-10, 0.0)]);
    }
}
