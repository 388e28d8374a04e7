use crate::error::{Error, Result};

use super::sweep::{SweepRecord, SweepResult};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Column {
    SupNorm,
    ProbeValue,
    GradientMax,
}

impl Column {
    pub fn of(&self, r: &SweepRecord) -> f64 {
        match self {
            Column::SupNorm => r.sup_norm,
            Column::ProbeValue => r.probe_value,
            Column::GradientMax => r.grad_max,
        }
    }
}

/// Which converged records enter a fit.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Window {
    All,
    /// The `k` largest `lambda` values.
    Top(usize),
    /// `lambda` in the closed range.
    Range(f64, f64),
}

impl Default for Window {
    fn default() -> Self {
        Window::Top(3)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FitResult {
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
    /// Smallest and largest `lambda` used.
    pub window: (f64, f64),
    pub points: usize,
}

/// Least-squares line through `(ln x, ln y)`.
pub fn fit_power_law(xs: &[f64], ys: &[f64]) -> Result<FitResult> {
    if xs.len() != ys.len() || xs.len() < 3 {
        return Err(Error::Fit(format!(
            "need at least 3 points, got {}",
            xs.len().min(ys.len())
        )));
    }
    if xs.iter().chain(ys).any(|v| !(*v > 0.0 && v.is_finite())) {
        return Err(Error::Fit("log-log fit needs positive finite data".into()));
    }
    let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
    let n = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxx: f64 = lx.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let syy: f64 = ly.iter().map(|y| (y - my).powi(2)).sum();
    if !(sxx > 0.0) {
        return Err(Error::Fit("all abscissae coincide".into()));
    }
    let slope = sxy / sxx;
    let r_squared = if syy > 0.0 { sxy * sxy / (sxx * syy) } else { 1.0 };
    let (lo, hi) = xs
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &x| (a.min(x), b.max(x)));
    Ok(FitResult {
        slope,
        intercept: my - slope * mx,
        r_squared,
        window: (lo, hi),
        points: xs.len(),
    })
}

/// Slope of `ln(column)` against `ln(lambda)` over the converged records in `window`.
pub fn fit_exponent(sweep: &SweepResult, column: Column, window: Window) -> Result<FitResult> {
    let mut rows: Vec<&SweepRecord> = sweep.converged().collect();
    match window {
        Window::All => {}
        Window::Top(k) => {
            let skip = rows.len().saturating_sub(k);
            rows.drain(..skip);
        }
        Window::Range(lo, hi) => rows.retain(|r| r.lambda >= lo && r.lambda <= hi),
    }
    let xs: Vec<f64> = rows.iter().map(|r| r.lambda).collect();
    let ys: Vec<f64> = rows.iter().map(|r| column.of(r)).collect();
    fit_power_law(&xs, &ys)
}
