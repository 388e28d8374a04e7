use crate::domain::{FFamily, ReactionSpec};

/// Pointwise reaction profile `rho(u)`; the discrete source at node `i` is
/// `lambda * g_i * rho(max(u_i, floor))`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Reaction {
    /// `coef * u^(-beta)`
    Power { coef: f64, beta: f64 },
    /// `f(u) * u^(-beta)`
    Family { family: FFamily, beta: f64 },
    /// `c * (1 + u^(-beta))`, the supersolution source of the monotone scheme.
    SuperBound { c: f64, beta: f64 },
}

impl From<ReactionSpec> for Reaction {
    fn from(r: ReactionSpec) -> Self {
        match r {
            ReactionSpec::PureSingular { beta } => Reaction::Power { coef: 1.0, beta },
            ReactionSpec::General { beta, family } => Reaction::Family { family, beta },
        }
    }
}

impl Reaction {
    pub fn beta(&self) -> f64 {
        match *self {
            Reaction::Power { beta, .. } | Reaction::Family { beta, .. } | Reaction::SuperBound { beta, .. } => beta,
        }
    }

    /// Whether evaluation requires `u > 0`.
    pub fn needs_positive(&self) -> bool {
        self.beta() > 0.0
            || matches!(
                self,
                Reaction::Family {
                    family: FFamily::SubSingularGrowth { .. },
                    ..
                }
            )
    }

    fn neg_pow(u: f64, beta: f64) -> f64 {
        if beta == 0.0 {
            1.0
        } else {
            u.powf(-beta)
        }
    }

    pub fn value(&self, u: f64) -> f64 {
        match *self {
            Reaction::Power { coef, beta } => coef * Self::neg_pow(u, beta),
            Reaction::Family { family, beta } => family.value(u) * Self::neg_pow(u, beta),
            Reaction::SuperBound { c, beta } => c * (1.0 + Self::neg_pow(u, beta)),
        }
    }

    pub fn derivative(&self, u: f64) -> f64 {
        match *self {
            Reaction::Power { coef, beta } => {
                if beta == 0.0 {
                    0.0
                } else {
                    -beta * coef * u.powf(-beta - 1.0)
                }
            }
            Reaction::Family { family, beta } => {
                let fp = family.derivative(u) * Self::neg_pow(u, beta);
                if beta == 0.0 {
                    fp
                } else {
                    fp - beta * family.value(u) * u.powf(-beta - 1.0)
                }
            }
            Reaction::SuperBound { c, beta } => {
                if beta == 0.0 {
                    0.0
                } else {
                    -beta * c * u.powf(-beta - 1.0)
                }
            }
        }
    }

    /// Antiderivative vanishing at `u = 0`, when it has a closed form.
    pub fn primitive(&self, u: f64) -> Option<f64> {
        let pow = |b: f64| u.abs().powf(1.0 - b).copysign(u) / (1.0 - b);
        match *self {
            Reaction::Power { coef, beta } => Some(coef * pow(beta)),
            Reaction::Family {
                family: FFamily::Constant { c },
                beta,
            } => Some(c * pow(beta)),
            Reaction::Family { .. } => None,
            Reaction::SuperBound { c, beta } => Some(c * (u + pow(beta))),
        }
    }

    pub fn has_primitive(&self) -> bool {
        self.primitive(1.0).is_some()
    }

    /// Value with the singular floor applied.
    pub fn floored_value(&self, u: f64, floor: f64) -> f64 {
        self.value(if u < floor { floor } else { u })
    }

    pub fn floored_derivative(&self, u: f64, floor: f64) -> f64 {
        if floor > 0.0 && u < floor {
            0.0
        } else {
            self.derivative(u)
        }
    }

    /// Primitive of the floored profile: continued linearly below the floor,
    /// so that its derivative is exactly [`Reaction::floored_value`].
    pub fn floored_primitive(&self, u: f64, floor: f64) -> Option<f64> {
        if floor > 0.0 && u < floor {
            Some(self.primitive(floor)? + self.value(floor) * (u - floor))
        } else {
            self.primitive(u)
        }
    }

    pub fn describe(&self) -> String {
        match self {
            Reaction::Power { .. } => "pure_singular".into(),
            Reaction::Family { family, .. } => family.name().into(),
            Reaction::SuperBound { .. } => "supersolution_bound".into(),
        }
    }
}
