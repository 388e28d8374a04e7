use std::sync::Arc;

use crate::domain::Grid;
use crate::error::{Error, Result};

/// Nodal values on a grid. Dirichlet nodes always hold exactly zero.
#[derive(Clone, Debug)]
pub struct Field {
    grid: Arc<Grid>,
    values: Vec<f64>,
}

impl Field {
    pub fn zeros(grid: Arc<Grid>) -> Self {
        let values = vec![0.0; grid.cells() + 1];
        Self { grid, values }
    }

    /// Samples `f` at every node (with the node's distance to the boundary).
    pub fn from_fn(grid: Arc<Grid>, f: impl Fn(f64, f64) -> f64) -> Self {
        let mut values: Vec<f64> = grid
            .nodes()
            .iter()
            .zip(grid.distances())
            .map(|(&x, &d)| f(x, d))
            .collect();
        enforce_dirichlet(&grid, &mut values);
        Self { grid, values }
    }

    pub fn from_values(grid: Arc<Grid>, mut values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.cells() + 1 {
            return Err(Error::Parameter(format!(
                "field has {} values, grid has {} nodes",
                values.len(),
                grid.cells() + 1
            )));
        }
        enforce_dirichlet(&grid, &mut values);
        Ok(Self { grid, values })
    }

    pub fn grid(&self) -> &Arc<Grid> {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub(crate) fn values_mut(&mut self) -> &mut [f64] {
        &mut self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn same_grid(&self, other: &Field) -> bool {
        Arc::ptr_eq(&self.grid, &other.grid) || *self.grid == *other.grid
    }

    pub fn sup_norm(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Slope on every cell.
    pub fn slopes(&self) -> Vec<f64> {
        self.values
            .windows(2)
            .zip(self.grid.widths())
            .map(|(u, h)| (u[1] - u[0]) / h)
            .collect()
    }

    /// Largest cell-slope magnitude.
    pub fn max_slope(&self) -> f64 {
        self.slopes().iter().fold(0.0, |m, s| m.max(s.abs()))
    }

    pub fn scaled(&self, t: f64) -> Field {
        Field {
            grid: Arc::clone(&self.grid),
            values: self.values.iter().map(|v| t * v).collect(),
        }
    }

    /// `max |u - v| / max |v|`, the relative sup-norm distance to `other`.
    pub fn relative_distance(&self, other: &Field) -> Result<f64> {
        if !self.same_grid(other) {
            return Err(Error::GridMismatch);
        }
        let diff = self
            .values
            .iter()
            .zip(&other.values)
            .fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
        let scale = other.sup_norm().max(self.sup_norm());
        Ok(if scale > 0.0 { diff / scale } else { diff })
    }

    pub fn argmax(&self) -> usize {
        self.values
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.total_cmp(b.1))
            .map(|(i, _)| i)
            .unwrap_or(0)
    }
}

fn enforce_dirichlet(grid: &Grid, values: &mut [f64]) {
    for (i, v) in values.iter_mut().enumerate() {
        if grid.is_dirichlet(i) {
            *v = 0.0;
        }
    }
}
