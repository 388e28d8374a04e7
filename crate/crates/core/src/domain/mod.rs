//! Problem descriptions: domains, weights, reaction families and the
//! parameter checks that decide whether a problem is admissible.
//!
//! Two geometries are supported. An interval `(a, b)` carries Dirichlet
//! conditions at both ends. A ball of dimension `N` and radius `R` is reduced
//! to its radial coordinate `r in [0, R]`, with a symmetry condition at the
//! origin and the Dirichlet condition at `r = R`.

mod grid;

pub use grid::{default_grading, make_grid, Grid};

use std::fmt;

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Domain {
    Interval { a: f64, b: f64 },
    Ball { dim: u32, radius: f64 },
}

impl Domain {
    pub fn interval(a: f64, b: f64) -> Result<Self> {
        if !(a < b) || !a.is_finite() || !b.is_finite() {
            return Err(Error::Parameter(format!("interval requires a < b, got ({a}, {b})")));
        }
        Ok(Domain::Interval { a, b })
    }

    pub fn ball(dim: u32, radius: f64) -> Result<Self> {
        if dim < 1 || !(radius > 0.0) || !radius.is_finite() {
            return Err(Error::Parameter(format!(
                "ball requires N >= 1 and R > 0, got N = {dim}, R = {radius}"
            )));
        }
        Ok(Domain::Ball { dim, radius })
    }

    /// Endpoints of the 1D coordinate: `[a, b]` or `[0, R]`.
    pub fn coordinate_range(&self) -> (f64, f64) {
        match *self {
            Domain::Interval { a, b } => (a, b),
            Domain::Ball { radius, .. } => (0.0, radius),
        }
    }

    /// Largest value of the distance function over the domain.
    pub fn inradius(&self) -> f64 {
        match *self {
            Domain::Interval { a, b } => 0.5 * (b - a),
            Domain::Ball { radius, .. } => radius,
        }
    }

    /// Coordinate of the point farthest from the boundary.
    pub fn center(&self) -> f64 {
        match *self {
            Domain::Interval { a, b } => 0.5 * (a + b),
            Domain::Ball { .. } => 0.0,
        }
    }

    fn is_admissible(&self) -> bool {
        match *self {
            Domain::Interval { a, b } => a < b && a.is_finite() && b.is_finite(),
            Domain::Ball { dim, radius } => dim >= 1 && radius > 0.0 && radius.is_finite(),
        }
    }
}

/// Distance from a point (its 1D coordinate) to the Dirichlet boundary.
pub fn distance_to_boundary(x: f64, domain: &Domain) -> Result<f64> {
    let (lo, hi) = domain.coordinate_range();
    if !(x >= lo && x <= hi) {
        return Err(Error::DomainViolation { x });
    }
    Ok(match *domain {
        Domain::Interval { a, b } => (x - a).min(b - x),
        Domain::Ball { radius, .. } => radius - x,
    })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Weight {
    Constant {
        value: f64,
    },
    /// `amplitude * d(x)^(-delta)`
    Power {
        amplitude: f64,
        delta: f64,
    },
}

impl Weight {
    pub fn delta(&self) -> f64 {
        match *self {
            Weight::Constant { .. } => 0.0,
            Weight::Power { delta, .. } => delta,
        }
    }
}

pub fn weight_eval(w: &Weight, x: f64, domain: &Domain) -> Result<f64> {
    let d = distance_to_boundary(x, domain)?;
    match *w {
        Weight::Constant { value } => Ok(value),
        Weight::Power { amplitude, delta } => {
            if d <= 0.0 {
                if delta == 0.0 {
                    return Ok(amplitude);
                }
                return Err(Error::SingularEvaluation { x });
            }
            Ok(amplitude * d.powf(-delta))
        }
    }
}

/// Nonlinearity `f` in the reaction `lambda * f(u) / u^beta`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum FFamily {
    /// `f(z) = c`
    Constant { c: f64 },
    /// `f(z) = a + b exp(-z)`
    BoundedDecaying { a: f64, b: f64 },
    /// `f(z) = 1 + z^gamma` with `0 < gamma < beta`
    SubSingularGrowth { gamma: f64 },
}

impl FFamily {
    pub fn value(&self, z: f64) -> f64 {
        match *self {
            FFamily::Constant { c } => c,
            FFamily::BoundedDecaying { a, b } => a + b * (-z).exp(),
            FFamily::SubSingularGrowth { gamma } => 1.0 + z.powf(gamma),
        }
    }

    pub fn derivative(&self, z: f64) -> f64 {
        match *self {
            FFamily::Constant { .. } => 0.0,
            FFamily::BoundedDecaying { b, .. } => -b * (-z).exp(),
            FFamily::SubSingularGrowth { gamma } => gamma * z.powf(gamma - 1.0),
        }
    }

    /// `inf f` over `[0, inf)`.
    pub fn infimum(&self) -> f64 {
        match *self {
            FFamily::Constant { c } => c,
            FFamily::BoundedDecaying { a, .. } => a,
            FFamily::SubSingularGrowth { .. } => 1.0,
        }
    }

    /// `sup f` over `[0, inf)`, `None` when unbounded.
    pub fn supremum(&self) -> Option<f64> {
        match *self {
            FFamily::Constant { c } => Some(c),
            FFamily::BoundedDecaying { a, b } => Some(a + b),
            FFamily::SubSingularGrowth { .. } => None,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            FFamily::Constant { .. } => "constant",
            FFamily::BoundedDecaying { .. } => "bounded_decaying",
            FFamily::SubSingularGrowth { .. } => "sub_singular_growth",
        }
    }

    fn violations(&self, beta: f64, out: &mut Vec<Violation>) {
        match *self {
            FFamily::Constant { c } if !(c > 0.0) => out.push(Violation::FamilyParameter(format!(
                "constant f requires c > 0, got {c}"
            ))),
            FFamily::BoundedDecaying { a, b } if !(a > 0.0 && b >= 0.0) => out.push(Violation::FamilyParameter(
                format!("bounded_decaying f requires a > 0 and b >= 0, got a = {a}, b = {b}"),
            )),
            FFamily::SubSingularGrowth { gamma } if !(gamma > 0.0 && gamma < beta) => {
                out.push(Violation::FamilyParameter(format!(
                    "sub_singular_growth f requires 0 < gamma < beta, got gamma = {gamma}, beta = {beta}"
                )))
            }
            _ => {}
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ReactionSpec {
    /// `lambda * g(x) * u^(-beta)`
    PureSingular { beta: f64 },
    /// `lambda * g(x) * f(u) * u^(-beta)`
    General { beta: f64, family: FFamily },
}

impl ReactionSpec {
    pub fn beta(&self) -> f64 {
        match *self {
            ReactionSpec::PureSingular { beta } | ReactionSpec::General { beta, .. } => beta,
        }
    }

    pub fn with_beta(self, beta: f64) -> Self {
        match self {
            ReactionSpec::PureSingular { .. } => ReactionSpec::PureSingular { beta },
            ReactionSpec::General { family, .. } => ReactionSpec::General { beta, family },
        }
    }

    /// True when `sup f < inf` (pure singular reactions count as `f = 1`).
    pub fn is_bounded(&self) -> bool {
        match self {
            ReactionSpec::PureSingular { .. } => true,
            ReactionSpec::General { family, .. } => family.supremum().is_some(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ProblemSpec {
    pub p: f64,
    pub q: f64,
    pub lambda: f64,
    pub domain: Domain,
    pub weight: Weight,
    pub reaction: ReactionSpec,
}

/// Which branch of the large-lambda uniqueness result a problem falls in.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum UniquenessRegime {
    /// `0 < beta < (q-1)(1+p-q)/(1+q-p)`, any admissible f.
    General,
    /// `sup f < inf` and `0 < beta < 1-q+p`.
    BoundedF,
    /// Outside both branches: runs are allowed but carry no guarantee.
    NoGuarantee,
}

impl ProblemSpec {
    pub fn beta(&self) -> f64 {
        self.reaction.beta()
    }

    pub fn with_lambda(mut self, lambda: f64) -> Self {
        self.lambda = lambda;
        self
    }

    /// `1 / (q - 1 + beta)`
    pub fn sigma_beta(&self) -> f64 {
        1.0 / (self.q - 1.0 + self.beta())
    }

    /// `1 / (q - 1)`
    pub fn sigma_zero(&self) -> f64 {
        1.0 / (self.q - 1.0)
    }

    /// Flux coefficient of the p-term after the `lambda^(-1/(q-1))` rescaling.
    pub fn mu(&self) -> f64 {
        self.lambda.powf((self.p - self.q) / (self.q - 1.0))
    }

    /// Flux coefficient of the p-term after the `lambda^(-1/(q-1+beta))` rescaling.
    pub fn gamma(&self) -> f64 {
        self.lambda.powf((self.p - self.q) * self.sigma_beta())
    }

    pub fn beta_prime_threshold(&self) -> f64 {
        (self.q - 1.0) * (1.0 + self.p - self.q) / (1.0 + self.q - self.p)
    }

    pub fn beta_double_prime_threshold(&self) -> f64 {
        1.0 - self.q + self.p
    }

    pub fn uniqueness_regime(&self) -> UniquenessRegime {
        let beta = self.beta();
        if !(self.q <= 2.0 && self.p > self.q - 1.0 && self.p < self.q && beta > 0.0) {
            return UniquenessRegime::NoGuarantee;
        }
        if beta < self.beta_prime_threshold() {
            UniquenessRegime::General
        } else if self.reaction.is_bounded() && beta < self.beta_double_prime_threshold() {
            UniquenessRegime::BoundedF
        } else {
            UniquenessRegime::NoGuarantee
        }
    }
}

/// A violated hypothesis, reported by [`validate_spec`].
#[derive(Clone, Debug, PartialEq)]
pub enum Violation {
    ExponentRange { p: f64, q: f64 },
    PNotLessThanQ { p: f64, q: f64 },
    BetaRange { beta: f64 },
    LambdaNonPositive { lambda: f64 },
    Domain(String),
    WeightNonPositive(String),
    DeltaRange { delta: f64, beta: f64 },
    FamilyParameter(String),
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::ExponentRange { p, q } => {
                write!(f, "exponents must exceed 1 (p = {p}, q = {q})")
            }
            Violation::PNotLessThanQ { p, q } => write!(f, "p<q required (p = {p}, q = {q})"),
            Violation::BetaRange { beta } => write!(f, "β must lie in [0,1) (beta = {beta})"),
            Violation::LambdaNonPositive { lambda } => {
                write!(f, "λ must be positive (lambda = {lambda})")
            }
            Violation::Domain(m) => write!(f, "domain: {m}"),
            Violation::WeightNonPositive(m) => write!(f, "weight must be positive: {m}"),
            Violation::DeltaRange { delta, beta } => write!(
                f,
                "power weight needs 0 <= δ and δ+β<1 (delta = {delta}, beta = {beta})"
            ),
            Violation::FamilyParameter(m) => write!(f, "{m}"),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Verdict {
    pub violations: Vec<Violation>,
}

impl Verdict {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Lists every violated hypothesis. Violations are data, never an error.
pub fn validate_spec(spec: &ProblemSpec) -> Verdict {
    let mut v = Vec::new();
    let (p, q) = (spec.p, spec.q);
    if !(p > 1.0 && q > 1.0 && p.is_finite() && q.is_finite()) {
        v.push(Violation::ExponentRange { p, q });
    }
    if !(p < q) {
        v.push(Violation::PNotLessThanQ { p, q });
    }
    let beta = spec.beta();
    if !(0.0..1.0).contains(&beta) {
        v.push(Violation::BetaRange { beta });
    }
    if !(spec.lambda > 0.0 && spec.lambda.is_finite()) {
        v.push(Violation::LambdaNonPositive { lambda: spec.lambda });
    }
    if !spec.domain.is_admissible() {
        v.push(Violation::Domain(format!("{:?}", spec.domain)));
    }
    match spec.weight {
        Weight::Constant { value } if !(value > 0.0) => {
            v.push(Violation::WeightNonPositive(format!("constant value {value}")))
        }
        Weight::Power { amplitude, delta } => {
            if !(amplitude > 0.0) {
                v.push(Violation::WeightNonPositive(format!("amplitude {amplitude}")));
            }
            if !(delta >= 0.0 && delta + beta < 1.0) {
                v.push(Violation::DeltaRange { delta, beta });
            }
        }
        _ => {}
    }
    if let ReactionSpec::General { family, .. } = spec.reaction {
        family.violations(beta, &mut v);
    }
    Verdict { violations: v }
}

/// Checks what the solvers need: everything in [`validate_spec`] except the
/// strict ordering `p < q`, so single-phase (`p = q`) problems remain solvable.
pub fn check_solvable(spec: &ProblemSpec) -> Result<()> {
    let violations: Vec<_> = validate_spec(spec)
        .violations
        .into_iter()
        .filter(|v| !matches!(v, Violation::PNotLessThanQ { .. }))
        .collect();
    if violations.is_empty() {
        Ok(())
    } else {
        Err(Error::InvalidSpec(violations))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(p: f64, q: f64, beta: f64, weight: Weight) -> ProblemSpec {
        ProblemSpec {
            p,
            q,
            lambda: 1.0,
            domain: Domain::interval(0.0, 1.0).unwrap(),
            weight,
            reaction: ReactionSpec::PureSingular { beta },
        }
    }

    #[test]
    fn distances() {
        let unit = Domain::interval(0.0, 1.0).unwrap();
        assert_eq!(distance_to_boundary(0.3, &unit).unwrap(), 0.3);
        assert_eq!(distance_to_boundary(1.0, &unit).unwrap(), 0.0);
        let ball = Domain::ball(3, 1.0).unwrap();
        assert!((distance_to_boundary(0.4, &ball).unwrap() - 0.6).abs() < 1e-15);
        assert!(matches!(
            distance_to_boundary(1.5, &unit),
            Err(Error::DomainViolation { .. })
        ));
    }

    #[test]
    fn weights() {
        let unit = Domain::interval(0.0, 1.0).unwrap();
        let c = Weight::Constant { value: 2.0 };
        assert_eq!(weight_eval(&c, 0.7, &unit).unwrap(), 2.0);
        let w = Weight::Power {
            amplitude: 1.0,
            delta: 0.25,
        };
        assert!((weight_eval(&w, 0.5, &unit).unwrap() - 1.189207115002721).abs() < 1e-12);
        let flat = Weight::Power {
            amplitude: 1.0,
            delta: 0.0,
        };
        assert_eq!(weight_eval(&flat, 0.2, &unit).unwrap(), 1.0);
        assert!(matches!(
            weight_eval(&w, 0.0, &unit),
            Err(Error::SingularEvaluation { .. })
        ));
    }

    #[test]
    fn validation_verdicts() {
        let power = Weight::Power {
            amplitude: 1.0,
            delta: 0.25,
        };
        assert!(validate_spec(&spec(1.5, 2.0, 0.5, power)).is_ok());

        let v = validate_spec(&spec(2.0, 2.0, 0.5, power));
        assert_eq!(v.violations.len(), 1);
        assert!(v.violations[0].to_string().contains("p<q required"));

        let v = validate_spec(&spec(1.5, 2.0, 1.0, Weight::Constant { value: 1.0 }));
        assert!(v.violations[0].to_string().contains("β must lie in [0,1)"));

        // delta + beta must stay below one
        let v = validate_spec(&spec(1.5, 2.0, 0.8, power));
        assert!(matches!(v.violations[0], Violation::DeltaRange { .. }));

        // everything wrong at once is reported at once
        let mut bad = spec(0.5, 0.5, -0.1, Weight::Constant { value: -1.0 });
        bad.lambda = 0.0;
        assert_eq!(validate_spec(&bad).violations.len(), 5);
    }

    #[test]
    fn family_parameters() {
        let mut s = spec(1.5, 2.0, 0.08, Weight::Constant { value: 1.0 });
        s.reaction = ReactionSpec::General {
            beta: 0.08,
            family: FFamily::SubSingularGrowth { gamma: 0.05 },
        };
        assert!(validate_spec(&s).is_ok());
        s.reaction = ReactionSpec::General {
            beta: 0.08,
            family: FFamily::SubSingularGrowth { gamma: 0.1 },
        };
        assert!(!validate_spec(&s).is_ok());
        s.reaction = ReactionSpec::General {
            beta: 0.08,
            family: FFamily::BoundedDecaying { a: 0.0, b: 1.0 },
        };
        assert!(!validate_spec(&s).is_ok());
    }

    #[test]
    fn derived_exponents() {
        let s = spec(1.5, 2.0, 0.5, Weight::Constant { value: 1.0 });
        assert!((s.sigma_beta() - 2.0 / 3.0).abs() < 1e-15);
        assert_eq!(s.sigma_zero(), 1.0);
        assert!(s.sigma_beta() < s.sigma_zero());
        let big = s.with_lambda(1e6);
        assert!(big.mu() < 1e-2 && big.gamma() < 2e-2);
        assert!((big.gamma() - 0.01).abs() < 1e-12);

        let s = spec(1.9, 2.0, 0.08, Weight::Constant { value: 1.0 });
        assert!((s.beta_prime_threshold() - 0.9 / 1.1).abs() < 1e-14);
        assert!((s.beta_double_prime_threshold() - 0.9).abs() < 1e-14);
        assert_eq!(s.uniqueness_regime(), UniquenessRegime::General);
    }

    #[test]
    fn sigma_equal_when_beta_zero() {
        let s = spec(1.5, 2.0, 0.0, Weight::Constant { value: 1.0 });
        assert_eq!(s.sigma_beta(), s.sigma_zero());
    }
}
