//! WebAssembly bindings for the browser demo: a single solve, a scaling
//! sweep with its fitted exponent, and the q-Laplacian limit.
//!
//! All problems live on the unit interval with `g = 1` (`delta = 0`) or
//! `g = d^-delta`. The wrappers convert solver errors into JS exceptions.

use std::sync::Arc;

use dphase::domain::{default_grading, make_grid, Domain, Grid, ProblemSpec, ReactionSpec, Weight};
use dphase::solve::{solve_newton, SolveOptions};
use dphase::verify::{fit_exponent, lambda_sweep, limit_qlaplacian, ratio_profile, Column, Window};
use wasm_bindgen::prelude::*;

fn spec(p: f64, q: f64, beta: f64, delta: f64, lambda: f64) -> dphase::Result<ProblemSpec> {
    Ok(ProblemSpec {
        p,
        q,
        lambda,
        domain: Domain::interval(0.0, 1.0)?,
        weight: if delta == 0.0 {
            Weight::Constant { value: 1.0 }
        } else {
            Weight::Power { amplitude: 1.0, delta }
        },
        reaction: ReactionSpec::PureSingular { beta },
    })
}

fn grid(spec: &ProblemSpec, n: usize) -> dphase::Result<Arc<Grid>> {
    let s = default_grading(&spec.weight, spec.beta()).max(2.0);
    Ok(Arc::new(make_grid(spec.domain, n, s)?))
}

fn js(e: dphase::Error) -> JsError {
    JsError::new(&e.to_string())
}

#[wasm_bindgen]
pub struct Profile {
    x: Vec<f64>,
    u: Vec<f64>,
    ratio: Vec<f64>,
    sup_norm: f64,
    iterations: usize,
}

#[wasm_bindgen]
impl Profile {
    #[wasm_bindgen(getter)]
    pub fn x(&self) -> Vec<f64> {
        self.x.clone()
    }

    #[wasm_bindgen(getter)]
    pub fn u(&self) -> Vec<f64> {
        self.u.clone()
    }

    /// `u / (lambda^sigma d)` at the interior nodes `x[1..n]`.
    #[wasm_bindgen(getter)]
    pub fn ratio(&self) -> Vec<f64> {
        self.ratio.clone()
    }

    #[wasm_bindgen(getter, js_name = supNorm)]
    pub fn sup_norm(&self) -> f64 {
        self.sup_norm
    }

    #[wasm_bindgen(getter)]
    pub fn iterations(&self) -> usize {
        self.iterations
    }
}

pub fn profile(p: f64, q: f64, beta: f64, delta: f64, lambda: f64, n: usize) -> dphase::Result<Profile> {
    let spec = spec(p, q, beta, delta, lambda)?;
    let g = grid(&spec, n)?;
    let (u, report) = solve_newton(&spec, &g, &SolveOptions::default())?;
    Ok(Profile {
        x: g.nodes().to_vec(),
        ratio: ratio_profile(&u, lambda, &spec),
        u: u.values().to_vec(),
        sup_norm: u.sup_norm(),
        iterations: report.total_iterations,
    })
}

#[wasm_bindgen(js_name = solveProfile)]
pub fn solve_profile(p: f64, q: f64, beta: f64, delta: f64, lambda: f64, n: usize) -> Result<Profile, JsError> {
    profile(p, q, beta, delta, lambda, n).map_err(js)
}

#[wasm_bindgen]
pub struct Scaling {
    lambdas: Vec<f64>,
    probe: Vec<f64>,
    slope: f64,
    target: f64,
    r_squared: f64,
}

#[wasm_bindgen]
impl Scaling {
    #[wasm_bindgen(getter)]
    pub fn lambdas(&self) -> Vec<f64> {
        self.lambdas.clone()
    }

    /// `u` at the probe node for every converged `lambda`.
    #[wasm_bindgen(getter)]
    pub fn probe(&self) -> Vec<f64> {
        self.probe.clone()
    }

    /// Fitted exponent over the top three decades.
    #[wasm_bindgen(getter)]
    pub fn slope(&self) -> f64 {
        self.slope
    }

    /// `1 / (q - 1 + beta)`
    #[wasm_bindgen(getter)]
    pub fn target(&self) -> f64 {
        self.target
    }

    #[wasm_bindgen(getter, js_name = rSquared)]
    pub fn r_squared(&self) -> f64 {
        self.r_squared
    }
}

/// Sweep over `10^lo, 10^(lo+1), ..., 10^hi`.
pub fn scaling(p: f64, q: f64, beta: f64, delta: f64, lo: i32, hi: i32, n: usize) -> dphase::Result<Scaling> {
    if hi < lo + 2 {
        return Err(dphase::Error::Parameter(
            "the sweep needs at least three decades".into(),
        ));
    }
    let spec = spec(p, q, beta, delta, 1.0)?;
    let g = grid(&spec, n)?;
    let lambdas: Vec<f64> = (lo..=hi).map(|k| 10f64.powi(k)).collect();
    let sweep = lambda_sweep(&spec, &lambdas, &g, &SolveOptions::default())?;
    let fit = fit_exponent(&sweep, Column::ProbeValue, Window::Top(3))?;
    let (lambdas, probe) = sweep.converged().map(|r| (r.lambda, r.probe_value)).unzip();
    Ok(Scaling {
        lambdas,
        probe,
        slope: fit.slope,
        target: spec.sigma_beta(),
        r_squared: fit.r_squared,
    })
}

#[wasm_bindgen(js_name = scalingSweep)]
pub fn scaling_sweep(p: f64, q: f64, beta: f64, delta: f64, lo: i32, hi: i32, n: usize) -> Result<Scaling, JsError> {
    scaling(p, q, beta, delta, lo, hi, n).map_err(js)
}

#[wasm_bindgen]
pub struct Limit {
    x: Vec<f64>,
    rescaled: Vec<f64>,
    limit: Vec<f64>,
    distance: f64,
}

#[wasm_bindgen]
impl Limit {
    #[wasm_bindgen(getter)]
    pub fn x(&self) -> Vec<f64> {
        self.x.clone()
    }

    /// `lambda^(-1/(q-1)) u_lambda` for the `beta = 0` problem.
    #[wasm_bindgen(getter)]
    pub fn rescaled(&self) -> Vec<f64> {
        self.rescaled.clone()
    }

    /// Solution of `-Δ_q v = g`.
    #[wasm_bindgen(getter)]
    pub fn limit(&self) -> Vec<f64> {
        self.limit.clone()
    }

    /// Sup-norm distance between the two profiles.
    #[wasm_bindgen(getter)]
    pub fn distance(&self) -> f64 {
        self.distance
    }
}

pub fn limit(p: f64, q: f64, delta: f64, lambda: f64, n: usize) -> dphase::Result<Limit> {
    let spec = spec(p, q, 0.0, delta, lambda)?;
    let g = grid(&spec, n)?;
    let r = limit_qlaplacian(&spec, lambda, &g, &SolveOptions::default())?;
    Ok(Limit {
        x: g.nodes().to_vec(),
        rescaled: r.rescaled.values().to_vec(),
        limit: r.limit.values().to_vec(),
        distance: r.distance,
    })
}

#[wasm_bindgen(js_name = qLaplacianLimit)]
pub fn q_laplacian_limit(p: f64, q: f64, delta: f64, lambda: f64, n: usize) -> Result<Limit, JsError> {
    limit(p, q, delta, lambda, n).map_err(js)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn profile_vanishes_on_the_boundary() {
        let pr = profile(1.5, 2.0, 0.5, 0.0, 100.0, 128).unwrap();
        assert_eq!(pr.x.len(), 129);
        assert_eq!((pr.u[0], pr.u[128]), (0.0, 0.0));
        assert_eq!(pr.ratio.len(), 127);
        assert!(pr.sup_norm > 0.0 && pr.iterations > 0);
    }

    #[test]
    fn scaling_slope_is_close_to_target() {
        let s = scaling(1.5, 2.0, 0.5, 0.0, 2, 5, 512).unwrap();
        assert_eq!(s.lambdas.len(), 4);
        assert!((s.slope - s.target).abs() < 0.05, "{} vs {}", s.slope, s.target);
    }

    #[test]
    fn short_sweeps_and_bad_exponents_are_rejected() {
        assert!(scaling(1.5, 2.0, 0.5, 0.0, 2, 3, 128).is_err());
        assert!(profile(0.5, 1.5, 0.5, 0.0, 10.0, 128).is_err());
    }

    #[test]
    fn limit_distance_shrinks() {
        let a = limit(1.5, 2.0, 0.0, 1e2, 256).unwrap().distance;
        let b = limit(1.5, 2.0, 0.0, 1e4, 256).unwrap().distance;
        assert!(b < a);
    }
}
