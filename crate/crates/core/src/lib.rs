//! Positive solutions of the singular double-phase problem
//!
//! ```text
//! -div(|u'|^(p-2) u') - div(|u'|^(q-2) u') = lambda g(x) f(u) / u^beta,   u = 0 on the boundary,
//! ```
//!
//! on intervals and radially symmetric balls, together with the experiments
//! that probe how solutions scale with `lambda`.
//!
//! The crate is layered: [`domain`] describes problems and grids,
//! [`discretization`] turns them into residuals, Jacobians and energies,
//! [`solve`] drives Newton and monotone iterations, [`verify`] runs
//! parameter sweeps and checks, and [`cli`] wires everything to config files
//! and CSV reports.

// Parameter checks are written `!(x > 0.0)` so that NaN fails them too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod discretization;
pub mod domain;
mod error;
pub mod solve;
pub mod verify;

pub use error::{Error, Result};
