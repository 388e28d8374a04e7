/// Coefficients of the regularised double-phase flux
/// `mu_p * phi_p(s) + phi_q(s)`, with `phi_r(s) = (s^2 + eta^2)^((r-2)/2) s`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RegularizedFluxParams {
    pub eta: f64,
    pub mu_p: f64,
}

impl Default for RegularizedFluxParams {
    fn default() -> Self {
        Self { eta: 0.0, mu_p: 1.0 }
    }
}

impl RegularizedFluxParams {
    pub fn exact() -> Self {
        Self::default()
    }

    pub fn with_eta(eta: f64) -> Self {
        Self { eta, mu_p: 1.0 }
    }
}

pub fn flux(slope: f64, r: f64, eta: f64) -> f64 {
    if slope == 0.0 {
        return 0.0;
    }
    if eta == 0.0 {
        return slope.abs().powf(r - 2.0) * slope;
    }
    (slope * slope + eta * eta).powf(0.5 * (r - 2.0)) * slope
}

/// `d flux / d slope`. Infinite for `r < 2`, `eta = 0` at zero slope.
pub fn flux_derivative(slope: f64, r: f64, eta: f64) -> f64 {
    if eta == 0.0 {
        if slope == 0.0 {
            return if r > 2.0 {
                0.0
            } else if r == 2.0 {
                1.0
            } else {
                f64::INFINITY
            };
        }
        return (r - 1.0) * slope.abs().powf(r - 2.0);
    }
    let t = slope * slope + eta * eta;
    t.powf(0.5 * (r - 4.0)) * ((r - 1.0) * slope * slope + eta * eta)
}

/// Potential of the flux, normalised to vanish at zero slope.
pub fn flux_potential(slope: f64, r: f64, eta: f64) -> f64 {
    if eta == 0.0 {
        return slope.abs().powf(r) / r;
    }
    ((slope * slope + eta * eta).powf(0.5 * r) - eta.powf(r)) / r
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn point_values() {
        assert_eq!(flux(2.0, 3.0, 0.0), 4.0);
        assert_eq!(flux(0.0, 1.3, 0.0), 0.0);
        assert_eq!(flux(0.0, 4.0, 0.1), 0.0);
        assert_eq!(flux(1.0, 1.5, 0.0), 1.0);
        assert_eq!(flux_derivative(0.0, 1.5, 0.0), f64::INFINITY);
        assert_eq!(flux_derivative(0.0, 2.0, 0.0), 1.0);
        assert_eq!(flux_derivative(0.7, 2.0, 0.3), 1.0);
    }

    #[test]
    fn derivative_matches_difference_quotient() {
        for &(s, r, eta) in &[
            (0.3f64, 1.5f64, 1e-2f64),
            (-2.0, 3.0, 0.0),
            (1e-3, 1.2, 1e-4),
            (5.0, 2.5, 1.0),
        ] {
            let h = 1e-6 * s.abs().max(1e-3);
            let fd = (flux(s + h, r, eta) - flux(s - h, r, eta)) / (2.0 * h);
            let an = flux_derivative(s, r, eta);
            assert!((fd - an).abs() <= 1e-6 * an.abs(), "{s} {r} {eta}: {fd} vs {an}");
            let fd = (flux_potential(s + h, r, eta) - flux_potential(s - h, r, eta)) / (2.0 * h);
            assert!((fd - flux(s, r, eta)).abs() <= 1e-6 * flux(s, r, eta).abs());
        }
    }

    proptest! {
        #[test]
        fn odd_and_monotone(s1 in -50.0f64..50.0, s2 in -50.0f64..50.0, r in 1.05f64..4.0, eta in 0.0f64..1.0) {
            prop_assert_eq!(flux(-s1, r, eta), -flux(s1, r, eta));
            prop_assert!((flux(s1, r, eta) - flux(s2, r, eta)) * (s1 - s2) >= 0.0);
        }

        #[test]
        fn homogeneous_without_regularization(s in -20.0f64..20.0, t in 0.01f64..100.0, r in 1.1f64..4.0) {
            let lhs = flux(t * s, r, 0.0);
            let rhs = t.powf(r - 1.0) * flux(s, r, 0.0);
            prop_assert!((lhs - rhs).abs() <= 1e-12 * rhs.abs().max(1e-300));
        }
    }
}
