use crate::error::{Error, Result};

use super::fit::{fit_exponent, Column, FitResult, Window};
use super::sweep::SweepResult;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LinfVerdict {
    pub ok: bool,
    pub min: f64,
    pub max: f64,
    /// Relative change of the rescaled norm over the last decade of `lambda`.
    pub last_decade_drift: f64,
}

/// Boundedness of `lambda^(-sigma) |u_lambda|_inf`: the spread `max/min` must
/// stay within 3 and the last decade may drift by at most 2%.
pub fn uniform_linf_check(sweep: &SweepResult) -> Result<LinfVerdict> {
    let rows: Vec<_> = sweep.converged().collect();
    if rows.len() < 4 {
        return Err(Error::Fit(format!("need 4 converged records, got {}", rows.len())));
    }
    let (first, last) = (rows[0], rows[rows.len() - 1]);
    if last.lambda / first.lambda < 1e4 * (1.0 - 1e-12) {
        return Err(Error::Fit("records must span at least 4 decades".into()));
    }
    let (min, max) = rows.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), r| {
        (a.min(r.rescaled_sup_norm), b.max(r.rescaled_sup_norm))
    });
    let reference = rows
        .iter()
        .find(|r| r.lambda >= last.lambda / 10.0 * (1.0 - 1e-12))
        .expect("last record qualifies");
    let drift = (last.rescaled_sup_norm - reference.rescaled_sup_norm).abs() / last.rescaled_sup_norm;
    Ok(LinfVerdict {
        ok: max / min <= 3.0 && drift <= 0.02,
        min,
        max,
        last_decade_drift: drift,
    })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GradientVerdict {
    pub ok: bool,
    pub fit: FitResult,
    /// The exponent the slope must not exceed by more than 0.02.
    pub bound: f64,
}

/// Growth of `max |Du_lambda|`: `1/(q-1)` in general, `1/(q-1+beta)` for bounded `f`.
pub fn gradient_growth_check(sweep: &SweepResult, bounded_f: bool) -> Result<GradientVerdict> {
    let fit = fit_exponent(sweep, Column::GradientMax, Window::default())?;
    let spec = &sweep.template;
    let bound = if bounded_f {
        spec.sigma_beta()
    } else {
        spec.sigma_zero()
    };
    Ok(GradientVerdict {
        ok: fit.slope <= bound + 0.02,
        fit,
        bound,
    })
}
