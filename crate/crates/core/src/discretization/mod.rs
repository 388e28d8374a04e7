//! Flux-form finite differences for the double-phase operator.
//!
//! Unknowns live at grid nodes, fluxes at cell midpoints. The scheme is the
//! lowest-order finite element method with midpoint quadrature for the
//! gradient terms and mass lumping for the reaction, so every linearisation
//! is tridiagonal and the three-point stencil is exact on quadratics.

mod field;
mod flux;
mod operator;
mod reaction;
mod tridiag;

pub use field::Field;
pub use flux::{flux, flux_derivative, flux_potential, RegularizedFluxParams};
pub use operator::{nodal_weights, Operator};
pub use reaction::Reaction;
pub use tridiag::{tridiag_solve, TridiagonalSystem};

use crate::domain::ProblemSpec;
use crate::error::{Error, Result};

fn operator<'g>(spec: &ProblemSpec, u: &'g Field, fp: RegularizedFluxParams, floor: f64) -> Result<Operator<'g>> {
    Operator::new(spec, u.grid(), fp, floor)
}

/// Residual at the unknown nodes of `u`.
pub fn residual(spec: &ProblemSpec, u: &Field, fp: RegularizedFluxParams, floor: f64) -> Result<Vec<f64>> {
    operator(spec, u, fp, floor)?.residual(u.values())
}

/// Tridiagonal Jacobian of [`residual`]; the right side is left at zero.
pub fn jacobian(spec: &ProblemSpec, u: &Field, fp: RegularizedFluxParams, floor: f64) -> Result<TridiagonalSystem> {
    operator(spec, u, fp, floor)?.jacobian(u.values())
}

/// Discrete energy. Only pure singular and constant-`f` reactions have one.
pub fn energy(spec: &ProblemSpec, u: &Field, fp: RegularizedFluxParams, floor: f64) -> Result<f64> {
    let op = operator(spec, u, fp, floor)?;
    if !op.has_energy() {
        return Err(Error::UnsupportedEnergy(op.reaction().describe()));
    }
    op.energy(u.values())
}

#[cfg(test)]
mod tests;
