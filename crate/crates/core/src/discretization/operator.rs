use crate::domain::{weight_eval, Domain, Grid, ProblemSpec};
use crate::error::{Error, Result};

use super::flux::{flux, flux_derivative, flux_potential, RegularizedFluxParams};
use super::reaction::Reaction;
use super::tridiag::TridiagonalSystem;

/// The discrete nonlinear operator on one grid.
///
/// For an unknown node `i`
///
/// ```text
/// R_i = -(W_{i+1/2} - W_{i-1/2}) / m_i + k_i * u_i
///       - lambda * g_i * rho(max(u_i, floor)) - b_i
/// ```
///
/// where `W = metric * (mu_p * phi_p(Du) + phi_q(Du))` is the weighted flux on
/// a cell, `m_i` the dual-cell measure, `k` an optional nodal shift and `b`
/// an optional nodal forcing. On a
/// ball the flux through the origin is zero. `m_i * R_i` is the exact
/// gradient of [`Operator::energy`] whenever the reaction has a primitive.
#[derive(Clone, Debug)]
pub struct Operator<'g> {
    grid: &'g Grid,
    p: f64,
    q: f64,
    flux: RegularizedFluxParams,
    lambda: f64,
    weights: Vec<f64>,
    reaction: Reaction,
    floor: f64,
    shift: Option<Vec<f64>>,
    forcing: Option<Vec<f64>>,
}

/// Weight `g` sampled at every node; zero on Dirichlet nodes (never used).
pub fn nodal_weights(spec: &ProblemSpec, grid: &Grid) -> Result<Vec<f64>> {
    grid.nodes()
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            if grid.is_dirichlet(i) {
                Ok(0.0)
            } else {
                weight_eval(&spec.weight, x, grid.domain())
            }
        })
        .collect()
}

impl<'g> Operator<'g> {
    pub fn new(spec: &ProblemSpec, grid: &'g Grid, flux: RegularizedFluxParams, floor: f64) -> Result<Self> {
        if spec.domain != *grid.domain() {
            return Err(Error::Parameter("problem domain differs from grid domain".into()));
        }
        if !(floor >= 0.0) {
            return Err(Error::Parameter(format!("floor must be nonnegative, got {floor}")));
        }
        Ok(Self {
            grid,
            p: spec.p,
            q: spec.q,
            flux,
            lambda: spec.lambda,
            weights: nodal_weights(spec, grid)?,
            reaction: spec.reaction.into(),
            floor,
            shift: None,
            forcing: None,
        })
    }

    pub fn with_reaction(mut self, reaction: Reaction) -> Self {
        self.reaction = reaction;
        self
    }

    /// Adds `shift_i * u_i` to every residual entry (indexed over all nodes).
    pub fn with_shift(mut self, shift: Vec<f64>) -> Self {
        self.shift = Some(shift);
        self
    }

    /// Subtracts a fixed nodal source `b_i` (indexed over all nodes).
    pub fn with_forcing(mut self, forcing: Vec<f64>) -> Self {
        self.forcing = Some(forcing);
        self
    }

    pub fn set_regularization(&mut self, eta: f64, floor: f64) {
        self.flux.eta = eta;
        self.floor = floor;
    }

    pub fn grid(&self) -> &'g Grid {
        self.grid
    }

    pub fn reaction(&self) -> &Reaction {
        &self.reaction
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn floor(&self) -> f64 {
        self.floor
    }

    pub fn flux_params(&self) -> RegularizedFluxParams {
        self.flux
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Mass-weighted mean of `g` over the unknown nodes.
    pub fn mean_weight(&self) -> f64 {
        let m = self.grid.mass();
        let (num, den) = self
            .grid
            .unknowns()
            .fold((0.0, 0.0), |(a, b), i| (a + self.weights[i] * m[i], b + m[i]));
        num / den
    }

    pub fn has_energy(&self) -> bool {
        self.reaction.has_primitive()
    }

    fn check_positive(&self, u: &[f64]) -> Result<()> {
        if self.floor == 0.0 && self.reaction.needs_positive() {
            for i in self.grid.unknowns() {
                if !(u[i] > 0.0) {
                    return Err(Error::Singularity { node: i, value: u[i] });
                }
            }
        }
        Ok(())
    }

    /// Weighted flux `W` on every cell.
    fn cell_fluxes(&self, u: &[f64]) -> Vec<f64> {
        let h = self.grid.widths();
        let w = self.grid.metric();
        let RegularizedFluxParams { eta, mu_p } = self.flux;
        (0..self.grid.cells())
            .map(|k| {
                let s = (u[k + 1] - u[k]) / h[k];
                let mut f = flux(s, self.q, eta);
                if mu_p != 0.0 {
                    f += mu_p * flux(s, self.p, eta);
                }
                w[k] * f
            })
            .collect()
    }

    /// Residual over the unknowns (`u` holds every node).
    pub fn residual(&self, u: &[f64]) -> Result<Vec<f64>> {
        self.check_positive(u)?;
        let flux = self.cell_fluxes(u);
        let m = self.grid.mass();
        Ok(self
            .grid
            .unknowns()
            .map(|i| {
                let left = if i == 0 { 0.0 } else { flux[i - 1] };
                let mut r = -(flux[i] - left) / m[i];
                if let Some(k) = &self.shift {
                    r += k[i] * u[i];
                }
                r -= self.lambda * self.weights[i] * self.reaction.floored_value(u[i], self.floor);
                if let Some(b) = &self.forcing {
                    r -= b[i];
                }
                r
            })
            .collect())
    }

    /// Exact derivative of [`Operator::residual`].
    pub fn jacobian(&self, u: &[f64]) -> Result<TridiagonalSystem> {
        self.check_positive(u)?;
        let h = self.grid.widths();
        let w = self.grid.metric();
        let m = self.grid.mass();
        let RegularizedFluxParams { eta, mu_p } = self.flux;
        let mut a = Vec::with_capacity(self.grid.cells());
        for k in 0..self.grid.cells() {
            let s = (u[k + 1] - u[k]) / h[k];
            let mut d = flux_derivative(s, self.q, eta);
            if mu_p != 0.0 {
                d += mu_p * flux_derivative(s, self.p, eta);
            }
            if !d.is_finite() {
                return Err(Error::DegenerateFlux { cell: k });
            }
            a.push(w[k] * d / h[k]);
        }
        let unknowns = self.grid.unknowns();
        let first = unknowns.start;
        let mut sys = TridiagonalSystem::zeros(unknowns.len());
        for (row, i) in unknowns.enumerate() {
            let left = if i == 0 { 0.0 } else { a[i - 1] };
            let mut diag = (a[i] + left) / m[i];
            if let Some(k) = &self.shift {
                diag += k[i];
            }
            diag -= self.lambda * self.weights[i] * self.reaction.floored_derivative(u[i], self.floor);
            sys.main[row] = diag;
            if i > first {
                sys.sub[row] = -left / m[i];
            }
            if row + 1 < sys.len() {
                sys.sup[row] = -a[i] / m[i];
            }
        }
        Ok(sys)
    }

    /// Discrete energy whose gradient is `m_i * R_i`.
    pub fn energy(&self, u: &[f64]) -> Result<f64> {
        if !self.has_energy() {
            return Err(Error::UnsupportedEnergy(self.reaction.describe()));
        }
        self.check_positive(u)?;
        let h = self.grid.widths();
        let w = self.grid.metric();
        let m = self.grid.mass();
        let RegularizedFluxParams { eta, mu_p } = self.flux;
        let mut gradient_part = 0.0;
        for k in 0..self.grid.cells() {
            let s = (u[k + 1] - u[k]) / h[k];
            let mut phi = flux_potential(s, self.q, eta);
            if mu_p != 0.0 {
                phi += mu_p * flux_potential(s, self.p, eta);
            }
            gradient_part += w[k] * h[k] * phi;
        }
        let mut nodal = 0.0;
        for i in self.grid.unknowns() {
            let prim = self
                .reaction
                .floored_primitive(u[i], self.floor)
                .expect("primitive checked above");
            let mut e = -self.lambda * self.weights[i] * prim;
            if let Some(k) = &self.shift {
                e += 0.5 * k[i] * u[i] * u[i];
            }
            if let Some(b) = &self.forcing {
                e -= b[i] * u[i];
            }
            nodal += m[i] * e;
        }
        Ok(gradient_part + nodal)
    }

    /// Partial sums `F_k = sum_{i <= k} m_i R_i` over the unknowns: the
    /// flux-balance defect accumulated from the left end (or the origin).
    pub fn flux_defects(&self, r: &[f64]) -> Vec<f64> {
        let m = self.grid.mass();
        let mut acc = 0.0;
        self.grid
            .unknowns()
            .zip(r)
            .map(|(i, ri)| {
                acc += m[i] * ri;
                acc
            })
            .collect()
    }

    /// `max_k |F_k| / total measure`, in units of the source `lambda * g`.
    ///
    /// Nodal residuals `R_i` carry a roundoff floor near `eps * |u| / h^2`
    /// on fine grids; the partial sums telescope the flux differences and
    /// keep the floor near `eps * |W|`.
    pub fn residual_norm(&self, r: &[f64]) -> f64 {
        self.flux_defects(r).iter().fold(0.0f64, |acc, f| acc.max(f.abs())) / self.grid.total_measure()
    }

    /// Root-mean-square of the flux defects, the line-search merit.
    pub fn merit(&self, r: &[f64]) -> f64 {
        let f = self.flux_defects(r);
        (f.iter().map(|v| v * v).sum::<f64>() / f.len() as f64).sqrt() / self.grid.total_measure()
    }

    /// Characteristic size of the source term, `lambda * mean g`.
    pub fn source_scale(&self) -> f64 {
        self.lambda * self.mean_weight()
    }

    pub fn is_ball(&self) -> bool {
        matches!(self.grid.domain(), Domain::Ball { .. })
    }
}
