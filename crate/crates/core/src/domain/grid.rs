use std::ops::Range;

use super::{distance_to_boundary, Domain, Weight};
use crate::error::{Error, Result};

/// Node set on the 1D coordinate of a domain, optionally graded towards the
/// Dirichlet boundary.
///
/// `mass[i]` is the measure of the dual cell around node `i` (cell-average
/// width on an interval, `r^(N-1)`-weighted measure on a ball, without the
/// surface-area constant). `metric[k]` is the flux weight at the midpoint of
/// cell `k`, i.e. `1` on an interval and `r_(k+1/2)^(N-1)` on a ball.
#[derive(Clone, Debug, PartialEq)]
pub struct Grid {
    domain: Domain,
    n: usize,
    grading: f64,
    nodes: Vec<f64>,
    widths: Vec<f64>,
    metric: Vec<f64>,
    mass: Vec<f64>,
    dist: Vec<f64>,
}

/// Symmetric rational grading of `[0, 1]`, clustering at both ends.
fn symmetric_map(t: f64, s: f64) -> f64 {
    if s == 1.0 {
        return t;
    }
    let a = t.powf(s);
    let b = (1.0 - t).powf(s);
    a / (a + b)
}

/// One-sided grading of `[0, 1]`, clustering at `t = 1` only.
fn one_sided_map(t: f64, s: f64) -> f64 {
    if s == 1.0 {
        return t;
    }
    1.0 - (1.0 - t).powf(s)
}

/// Grading exponent that resolves the boundary layer: `1` for constant
/// weights, `ceil(1 / (1 - delta - beta))` for `d^-delta` weights.
pub fn default_grading(weight: &Weight, beta: f64) -> f64 {
    match weight {
        Weight::Constant { .. } => 1.0,
        Weight::Power { delta, .. } => (1.0 / (1.0 - delta - beta)).ceil(),
    }
}

pub fn make_grid(domain: Domain, n: usize, s: f64) -> Result<Grid> {
    if n < 4 {
        return Err(Error::Parameter(format!("grid needs n >= 4 cells, got {n}")));
    }
    if !(s >= 1.0) || !s.is_finite() {
        return Err(Error::Parameter(format!("grading exponent must be >= 1, got {s}")));
    }
    let (lo, hi) = domain.coordinate_range();
    let len = hi - lo;
    let nf = n as f64;
    let mut nodes: Vec<f64> = (0..=n)
        .map(|i| {
            let t = i as f64 / nf;
            let phi = match domain {
                Domain::Interval { .. } => symmetric_map(t, s),
                Domain::Ball { .. } => one_sided_map(t, s),
            };
            lo + len * phi
        })
        .collect();
    nodes[0] = lo;
    nodes[n] = hi;
    if let Domain::Interval { .. } = domain {
        if n.is_multiple_of(2) {
            nodes[n / 2] = domain.center();
        }
    }

    let widths: Vec<f64> = nodes.windows(2).map(|w| w[1] - w[0]).collect();
    if widths.iter().any(|&h| !(h > 0.0)) {
        return Err(Error::Parameter(format!(
            "grading s = {s} with n = {n} collapses nodes in double precision"
        )));
    }

    let (metric, mass) = match domain {
        Domain::Interval { .. } => {
            let metric = vec![1.0; n];
            let mut mass = vec![0.0; n + 1];
            mass[0] = 0.5 * widths[0];
            mass[n] = 0.5 * widths[n - 1];
            for i in 1..n {
                mass[i] = 0.5 * (widths[i - 1] + widths[i]);
            }
            (metric, mass)
        }
        Domain::Ball { dim, .. } => {
            let nd = dim as i32;
            let mids: Vec<f64> = nodes.windows(2).map(|w| 0.5 * (w[0] + w[1])).collect();
            let metric = mids.iter().map(|r| r.powi(nd - 1)).collect();
            let vol = |r: f64| r.powi(nd) / dim as f64;
            let mut mass = vec![0.0; n + 1];
            mass[0] = vol(mids[0]);
            for i in 1..n {
                mass[i] = vol(mids[i]) - vol(mids[i - 1]);
            }
            mass[n] = vol(hi) - vol(mids[n - 1]);
            (metric, mass)
        }
    };

    let dist = nodes
        .iter()
        .map(|&x| distance_to_boundary(x, &domain))
        .collect::<Result<Vec<_>>>()?;

    Ok(Grid {
        domain,
        n,
        grading: s,
        nodes,
        widths,
        metric,
        mass,
        dist,
    })
}

impl Grid {
    pub fn domain(&self) -> &Domain {
        &self.domain
    }

    /// Number of cells.
    pub fn cells(&self) -> usize {
        self.n
    }

    pub fn grading(&self) -> f64 {
        self.grading
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn widths(&self) -> &[f64] {
        &self.widths
    }

    pub fn metric(&self) -> &[f64] {
        &self.metric
    }

    pub fn mass(&self) -> &[f64] {
        &self.mass
    }

    /// Distance to the Dirichlet boundary at every node.
    pub fn distances(&self) -> &[f64] {
        &self.dist
    }

    /// Node indices carrying unknowns: `1..n` on an interval, `0..n` on a ball.
    pub fn unknowns(&self) -> Range<usize> {
        match self.domain {
            Domain::Interval { .. } => 1..self.n,
            Domain::Ball { .. } => 0..self.n,
        }
    }

    pub fn is_dirichlet(&self, i: usize) -> bool {
        i == self.n || (i == 0 && matches!(self.domain, Domain::Interval { .. }))
    }

    /// Total measure of the 1D coordinate range (with the radial metric on a ball).
    pub fn total_measure(&self) -> f64 {
        self.mass.iter().sum()
    }

    /// Node closest to the point of maximal distance (midpoint or origin).
    pub fn probe_index(&self) -> usize {
        match self.domain {
            Domain::Ball { .. } => 0,
            Domain::Interval { .. } => {
                let c = self.domain.center();
                (0..=self.n)
                    .min_by(|&i, &j| (self.nodes[i] - c).abs().total_cmp(&(self.nodes[j] - c).abs()))
                    .unwrap_or(self.n / 2)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit() -> Domain {
        Domain::interval(0.0, 1.0).unwrap()
    }

    #[test]
    fn uniform_interval() {
        let g = make_grid(unit(), 4, 1.0).unwrap();
        assert_eq!(g.nodes(), &[0.0, 0.25, 0.5, 0.75, 1.0]);
        for i in g.unknowns() {
            assert_eq!(g.mass()[i], 0.25);
        }
        assert_eq!(g.unknowns(), 1..4);
    }

    #[test]
    fn graded_interval_follows_rational_map() {
        // t^2 / (t^2 + (1-t)^2) at t = 1/4 is 1/16 / (10/16) = 0.1
        let g = make_grid(unit(), 4, 2.0).unwrap();
        let expect = [0.0, 0.1, 0.5, 0.9, 1.0];
        for (x, e) in g.nodes().iter().zip(expect) {
            assert!((x - e).abs() < 1e-15, "{x} vs {e}");
        }
    }

    #[test]
    fn graded_spacing_shrinks_like_power() {
        let g = make_grid(unit(), 64, 3.0).unwrap();
        let h0 = g.widths()[0];
        let t: f64 = 1.0 / 64.0;
        assert!((h0 / t.powi(3) - 1.0).abs() < 0.1);
        // symmetric about the midpoint
        for i in 0..=64 {
            assert!((g.nodes()[i] + g.nodes()[64 - i] - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn ball_nodes_and_mass() {
        let g = make_grid(Domain::ball(2, 1.0).unwrap(), 4, 1.0).unwrap();
        assert_eq!(g.nodes(), &[0.0, 0.25, 0.5, 0.75, 1.0]);
        assert_eq!(g.unknowns(), 0..4);
        // dual-cell measures add up to R^N / N
        assert!((g.total_measure() - 0.5).abs() < 1e-15);
        assert!((g.mass()[0] - 0.125f64.powi(2) / 2.0).abs() < 1e-16);
        assert_eq!(g.probe_index(), 0);
    }

    #[test]
    fn ball_grading_clusters_at_boundary_only() {
        let g = make_grid(Domain::ball(3, 2.0).unwrap(), 16, 2.0).unwrap();
        let w = g.widths();
        assert!(w[0] > w[15] * 10.0);
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(make_grid(unit(), 3, 1.0).is_err());
        assert!(make_grid(unit(), 8, 0.5).is_err());
    }

    #[test]
    fn equispaced_to_round_off() {
        let d = Domain::interval(-2.0, 3.0).unwrap();
        let g = make_grid(d, 1000, 1.0).unwrap();
        for (i, x) in g.nodes().iter().enumerate() {
            let e = -2.0 + 5.0 * i as f64 / 1000.0;
            assert!((x - e).abs() <= 1e-14 * e.abs().max(1.0));
        }
    }
}
