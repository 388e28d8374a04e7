use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::domain::{default_grading, validate_spec, Domain, FFamily, ProblemSpec, ReactionSpec, Violation, Weight};
use crate::solve::{InitialGuess, MonotoneOptions, Schedule, SolveOptions};

/// A configuration problem, with the offending line when it can be located.
#[derive(Clone, Debug, PartialEq, thiserror::Error)]
pub struct ConfigError {
    pub path: Option<PathBuf>,
    pub line: Option<usize>,
    pub message: String,
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(p) = &self.path {
            write!(f, "{}", p.display())?;
            if let Some(l) = self.line {
                write!(f, ":{l}")?;
            }
            write!(f, ": ")?;
        } else if let Some(l) = self.line {
            write!(f, "line {l}: ")?;
        }
        write!(f, "{}", self.message)
    }
}

impl ConfigError {
    fn new(line: Option<usize>, message: impl Into<String>) -> Self {
        Self {
            path: None,
            line,
            message: message.into(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, clap::ValueEnum)]
pub enum Experiment {
    Solve,
    Sweep,
    VerifyScaling,
    VerifyLimit,
    VerifyUniqueness,
    VerifyInequality,
    All,
}

impl Experiment {
    pub fn name(&self) -> &'static str {
        match self {
            Experiment::Solve => "solve",
            Experiment::Sweep => "sweep",
            Experiment::VerifyScaling => "verify-scaling",
            Experiment::VerifyLimit => "verify-limit",
            Experiment::VerifyUniqueness => "verify-uniqueness",
            Experiment::VerifyInequality => "verify-inequality",
            Experiment::All => "all",
        }
    }
}

impl FromStr for Experiment {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        [
            Experiment::Solve,
            Experiment::Sweep,
            Experiment::VerifyScaling,
            Experiment::VerifyLimit,
            Experiment::VerifyUniqueness,
            Experiment::VerifyInequality,
            Experiment::All,
        ]
        .into_iter()
        .find(|e| e.name() == s)
        .ok_or_else(|| format!("unknown experiment '{s}'"))
    }
}

/// Experiment parameters beyond the problem itself.
#[derive(Clone, Debug, PartialEq)]
pub struct SweepConfig {
    pub lambdas: Vec<f64>,
    /// Number of largest-`lambda` records entering the exponent fit.
    pub fit_points: usize,
    pub fit_tolerance: f64,
    pub limit_lambdas: Vec<f64>,
    pub uniqueness_lambdas: Vec<f64>,
    pub n_starts: usize,
    pub inequality_exponents: Vec<f64>,
    pub inequality_samples: usize,
}

/// A fully resolved and validated run configuration.
#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub spec: ProblemSpec,
    pub n: usize,
    pub grading: f64,
    pub solver: SolveOptions,
    pub monotone: MonotoneOptions,
    pub sweep: SweepConfig,
    pub experiment: Experiment,
    pub output_dir: PathBuf,
    pub seed: u64,
    pub emit_plots: bool,
}

// Raw file layout. Every key is optional; missing keys take their defaults.

#[derive(Debug, Default, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    problem: Option<RawProblem>,
    domain: Option<RawDomain>,
    weight: Option<RawWeight>,
    reaction: Option<RawReaction>,
    grid: Option<RawGrid>,
    solver: Option<RawSolver>,
    sweep: Option<RawSweep>,
    output: Option<RawOutput>,
    run: Option<RawRun>,
}

#[derive(Debug, Default, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
struct RawProblem {
    p: Option<f64>,
    q: Option<f64>,
    lambda: Option<f64>,
}

#[derive(Debug, Default, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
struct RawDomain {
    kind: Option<String>,
    a: Option<f64>,
    b: Option<f64>,
    dim: Option<u32>,
    radius: Option<f64>,
}

#[derive(Debug, Default, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
struct RawWeight {
    kind: Option<String>,
    value: Option<f64>,
    amplitude: Option<f64>,
    delta: Option<f64>,
}

#[derive(Debug, Default, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
struct RawReaction {
    kind: Option<String>,
    beta: Option<f64>,
    family: Option<String>,
    c: Option<f64>,
    a: Option<f64>,
    b: Option<f64>,
    gamma: Option<f64>,
}

#[derive(Debug, Default, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
struct RawGrid {
    n: Option<usize>,
    s: Option<f64>,
}

#[derive(Debug, Default, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
struct RawSolver {
    tol_residual: Option<f64>,
    tol_step: Option<f64>,
    max_iter: Option<usize>,
    backtrack_factor: Option<f64>,
    max_backtracks: Option<usize>,
    theta: Option<f64>,
    eta_start: Option<f64>,
    eta_end: Option<f64>,
    floor_start: Option<f64>,
    floor_end: Option<f64>,
    schedule_factor: Option<f64>,
    initial_guess: Option<String>,
    guess_amplitude: Option<f64>,
    monotone_shift: Option<f64>,
    monotone_max_outer: Option<usize>,
    monotone_tol: Option<f64>,
    monotone_samples: Option<usize>,
}

#[derive(Debug, Default, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
struct RawSweep {
    lambdas: Option<Vec<f64>>,
    fit_points: Option<usize>,
    fit_tolerance: Option<f64>,
    limit_lambdas: Option<Vec<f64>>,
    uniqueness_lambdas: Option<Vec<f64>>,
    n_starts: Option<usize>,
    inequality_exponents: Option<Vec<f64>>,
    inequality_samples: Option<usize>,
}

#[derive(Debug, Default, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
struct RawOutput {
    dir: Option<String>,
    emit_plots: Option<bool>,
}

#[derive(Debug, Default, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
struct RawRun {
    experiment: Option<String>,
    seed: Option<u64>,
}

/// Line (1-based) of `key` inside `[section]`, or of the section header.
fn locate(src: &str, section: &str, key: Option<&str>) -> Option<usize> {
    let mut current = String::new();
    for (k, line) in src.lines().enumerate() {
        let t = line.trim();
        if let Some(name) = t.strip_prefix('[').and_then(|r| r.strip_suffix(']')) {
            current = name.trim().to_string();
            if key.is_none() && current == section {
                return Some(k + 1);
            }
            continue;
        }
        if current != section {
            continue;
        }
        if let Some(key) = key {
            if let Some(rest) = t.strip_prefix(key) {
                if rest.trim_start().starts_with('=') {
                    return Some(k + 1);
                }
            }
        }
    }
    None
}

fn line_of_offset(src: &str, offset: usize) -> usize {
    src[..offset.min(src.len())].matches('\n').count() + 1
}

struct Ctx<'a> {
    src: &'a str,
}

impl Ctx<'_> {
    fn err(&self, section: &str, key: &str, message: impl Into<String>) -> ConfigError {
        let line = locate(self.src, section, Some(key)).or_else(|| locate(self.src, section, None));
        ConfigError::new(line, message)
    }
}

fn default_lambdas() -> Vec<f64> {
    vec![1e2, 1e3, 1e4, 1e5, 1e6]
}

/// Parses and validates a configuration held in memory.
pub fn parse_config_str(src: &str) -> Result<RunConfig, ConfigError> {
    let raw: RawConfig = toml::from_str(src).map_err(|e| {
        let line = e.span().map(|s| line_of_offset(src, s.start));
        ConfigError::new(line, e.message().trim().to_string())
    })?;
    let ctx = Ctx { src };

    let problem = raw.problem.unwrap_or_default();
    let p = problem
        .p
        .ok_or_else(|| ctx.err("problem", "p", "missing key problem.p"))?;
    let q = problem
        .q
        .ok_or_else(|| ctx.err("problem", "q", "missing key problem.q"))?;
    let lambda = problem.lambda.unwrap_or(1.0);

    let d = raw.domain.unwrap_or_default();
    let domain = match d.kind.as_deref().unwrap_or("interval") {
        "interval" => Domain::Interval {
            a: d.a.unwrap_or(0.0),
            b: d.b.unwrap_or(1.0),
        },
        "ball" => Domain::Ball {
            dim: d.dim.unwrap_or(1),
            radius: d.radius.unwrap_or(1.0),
        },
        other => {
            return Err(ctx.err(
                "domain",
                "kind",
                format!("unknown domain kind '{other}' (interval | ball)"),
            ))
        }
    };

    let w = raw.weight.unwrap_or_default();
    let weight = match w.kind.as_deref().unwrap_or("constant") {
        "constant" => Weight::Constant {
            value: w.value.unwrap_or(1.0),
        },
        "power" => Weight::Power {
            amplitude: w.amplitude.unwrap_or(1.0),
            delta: w.delta.unwrap_or(0.0),
        },
        other => {
            return Err(ctx.err(
                "weight",
                "kind",
                format!("unknown weight kind '{other}' (constant | power)"),
            ))
        }
    };

    let r = raw.reaction.unwrap_or_default();
    let beta = r.beta.unwrap_or(0.0);
    let reaction = match r.kind.as_deref().unwrap_or("pure_singular") {
        "pure_singular" => ReactionSpec::PureSingular { beta },
        "general" => {
            let family = match r.family.as_deref().unwrap_or("constant") {
                "constant" => FFamily::Constant { c: r.c.unwrap_or(1.0) },
                "bounded_decaying" => FFamily::BoundedDecaying {
                    a: r.a.unwrap_or(1.0),
                    b: r.b.unwrap_or(0.0),
                },
                "sub_singular_growth" => FFamily::SubSingularGrowth {
                    gamma: r.gamma.unwrap_or(0.5 * beta),
                },
                other => {
                    return Err(ctx.err(
                        "reaction",
                        "family",
                        format!("unknown family '{other}' (constant | bounded_decaying | sub_singular_growth)"),
                    ))
                }
            };
            ReactionSpec::General { beta, family }
        }
        other => {
            return Err(ctx.err(
                "reaction",
                "kind",
                format!("unknown reaction kind '{other}' (pure_singular | general)"),
            ))
        }
    };

    let spec = ProblemSpec {
        p,
        q,
        lambda,
        domain,
        weight,
        reaction,
    };
    let verdict = validate_spec(&spec);
    if let Some(v) = verdict.violations.first() {
        let (section, key) = match v {
            Violation::ExponentRange { .. } => ("problem", "p"),
            Violation::PNotLessThanQ { .. } => ("problem", "q"),
            Violation::BetaRange { .. } => ("reaction", "beta"),
            Violation::LambdaNonPositive { .. } => ("problem", "lambda"),
            Violation::Domain(_) => ("domain", "kind"),
            Violation::WeightNonPositive(_) => ("weight", "kind"),
            Violation::DeltaRange { .. } => ("weight", "delta"),
            Violation::FamilyParameter(_) => ("reaction", "family"),
        };
        let all: Vec<String> = verdict.violations.iter().map(|v| v.to_string()).collect();
        return Err(ctx.err(section, key, all.join("; ")));
    }

    let g = raw.grid.unwrap_or_default();
    let n = g.n.unwrap_or(2048);
    let grading = g.s.unwrap_or_else(|| default_grading(&weight, beta));
    if n < 4 {
        return Err(ctx.err("grid", "n", format!("grid needs n >= 4 cells, got {n}")));
    }
    if !(grading >= 1.0) {
        return Err(ctx.err("grid", "s", format!("grading exponent must be >= 1, got {grading}")));
    }

    let s = raw.solver.unwrap_or_default();
    let defaults = SolveOptions::default();
    let factor = s.schedule_factor.unwrap_or(defaults.eta.factor);
    let initial_guess = match s.initial_guess.as_deref().unwrap_or("distance") {
        "distance" => InitialGuess::DistanceProfile {
            amplitude: s.guess_amplitude.unwrap_or(1.0),
        },
        "linearized" => InitialGuess::LinearizedQ2,
        other => {
            return Err(ctx.err(
                "solver",
                "initial_guess",
                format!("unknown initial guess '{other}' (distance | linearized)"),
            ))
        }
    };
    let solver = SolveOptions {
        // None keeps the tolerance relative to lambda * mean g at every lambda.
        tol_residual: s.tol_residual,
        tol_step: s.tol_step.unwrap_or(defaults.tol_step),
        max_iter: s.max_iter.unwrap_or(defaults.max_iter),
        backtrack_factor: s.backtrack_factor.unwrap_or(defaults.backtrack_factor),
        max_backtracks: s.max_backtracks.unwrap_or(defaults.max_backtracks),
        theta: s.theta.unwrap_or(defaults.theta),
        eta: Schedule {
            start: s.eta_start.unwrap_or(defaults.eta.start),
            end: s.eta_end.unwrap_or(defaults.eta.end),
            factor,
        },
        floor: Schedule {
            start: s.floor_start.unwrap_or(defaults.floor.start),
            end: s.floor_end.unwrap_or(defaults.floor.end),
            factor,
        },
        initial_guess,
    };
    if let Err(e) = solver.validate() {
        return Err(ctx.err("solver", "tol_residual", e.to_string()));
    }
    let mdef = MonotoneOptions::default();
    let monotone = MonotoneOptions {
        shift: s.monotone_shift.unwrap_or(mdef.shift),
        max_outer: s.monotone_max_outer.unwrap_or(mdef.max_outer),
        tol: s.monotone_tol.unwrap_or(mdef.tol),
        samples: s.monotone_samples.unwrap_or(mdef.samples),
        keep_history: false,
        ..mdef
    };

    let sw = raw.sweep.unwrap_or_default();
    let sweep = SweepConfig {
        lambdas: sw.lambdas.unwrap_or_else(default_lambdas),
        fit_points: sw.fit_points.unwrap_or(3),
        fit_tolerance: sw.fit_tolerance.unwrap_or(match weight {
            Weight::Constant { .. } => 0.02,
            Weight::Power { .. } => 0.03,
        }),
        limit_lambdas: sw.limit_lambdas.unwrap_or_else(|| vec![1e2, 1e4, 1e6, 1e8]),
        uniqueness_lambdas: sw.uniqueness_lambdas.unwrap_or_else(|| vec![1e4]),
        n_starts: sw.n_starts.unwrap_or(10),
        inequality_exponents: sw.inequality_exponents.unwrap_or_else(|| vec![1.2, 1.5, 2.0]),
        inequality_samples: sw.inequality_samples.unwrap_or(1_000_000),
    };
    for (key, list) in [
        ("lambdas", &sweep.lambdas),
        ("limit_lambdas", &sweep.limit_lambdas),
        ("uniqueness_lambdas", &sweep.uniqueness_lambdas),
    ] {
        if list.is_empty() || list.iter().any(|l| !(*l > 0.0)) || list.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(ctx.err(
                "sweep",
                key,
                format!("{key} must be a nonempty, positive, strictly increasing list"),
            ));
        }
    }
    if sweep.fit_points < 3 {
        return Err(ctx.err("sweep", "fit_points", "exponent fits need at least 3 points"));
    }
    if sweep.n_starts < 2 {
        return Err(ctx.err("sweep", "n_starts", "multi-start needs at least 2 starts"));
    }
    if sweep.inequality_exponents.iter().any(|r| !(*r > 1.0 && *r <= 2.0)) {
        return Err(ctx.err(
            "sweep",
            "inequality_exponents",
            "inequality exponents must lie in (1, 2]",
        ));
    }

    let out = raw.output.unwrap_or_default();
    let run = raw.run.unwrap_or_default();
    let experiment = match run.experiment.as_deref() {
        None => Experiment::All,
        Some(e) => e.parse().map_err(|m: String| ctx.err("run", "experiment", m))?,
    };

    Ok(RunConfig {
        spec,
        n,
        grading,
        solver,
        monotone,
        sweep,
        experiment,
        output_dir: PathBuf::from(out.dir.unwrap_or_else(|| "out".into())),
        seed: run.seed.unwrap_or(42),
        emit_plots: out.emit_plots.unwrap_or(false),
    })
}

/// Reads, parses and validates a configuration file.
pub fn parse_config(path: &Path) -> Result<RunConfig, ConfigError> {
    let src = std::fs::read_to_string(path).map_err(|e| ConfigError {
        path: Some(path.to_path_buf()),
        line: None,
        message: format!("cannot read config: {e}"),
    })?;
    parse_config_str(&src).map_err(|mut e| {
        e.path = Some(path.to_path_buf());
        e
    })
}

impl RunConfig {
    /// Every setting written out explicitly; parsing the echo gives back `self`.
    pub fn to_toml(&self) -> String {
        let spec = &self.spec;
        let domain = match spec.domain {
            Domain::Interval { a, b } => RawDomain {
                kind: Some("interval".into()),
                a: Some(a),
                b: Some(b),
                ..Default::default()
            },
            Domain::Ball { dim, radius } => RawDomain {
                kind: Some("ball".into()),
                dim: Some(dim),
                radius: Some(radius),
                ..Default::default()
            },
        };
        let weight = match spec.weight {
            Weight::Constant { value } => RawWeight {
                kind: Some("constant".into()),
                value: Some(value),
                ..Default::default()
            },
            Weight::Power { amplitude, delta } => RawWeight {
                kind: Some("power".into()),
                amplitude: Some(amplitude),
                delta: Some(delta),
                ..Default::default()
            },
        };
        let reaction = match spec.reaction {
            ReactionSpec::PureSingular { beta } => RawReaction {
                kind: Some("pure_singular".into()),
                beta: Some(beta),
                ..Default::default()
            },
            ReactionSpec::General { beta, family } => {
                let mut r = RawReaction {
                    kind: Some("general".into()),
                    beta: Some(beta),
                    family: Some(family.name().into()),
                    ..Default::default()
                };
                match family {
                    FFamily::Constant { c } => r.c = Some(c),
                    FFamily::BoundedDecaying { a, b } => {
                        r.a = Some(a);
                        r.b = Some(b);
                    }
                    FFamily::SubSingularGrowth { gamma } => r.gamma = Some(gamma),
                }
                r
            }
        };
        let o = &self.solver;
        let (initial_guess, guess_amplitude) = match o.initial_guess {
            InitialGuess::DistanceProfile { amplitude } => ("distance", Some(amplitude)),
            InitialGuess::LinearizedQ2 => ("linearized", None),
        };
        let raw = RawConfig {
            problem: Some(RawProblem {
                p: Some(spec.p),
                q: Some(spec.q),
                lambda: Some(spec.lambda),
            }),
            domain: Some(domain),
            weight: Some(weight),
            reaction: Some(reaction),
            grid: Some(RawGrid {
                n: Some(self.n),
                s: Some(self.grading),
            }),
            solver: Some(RawSolver {
                tol_residual: o.tol_residual,
                tol_step: Some(o.tol_step),
                max_iter: Some(o.max_iter),
                backtrack_factor: Some(o.backtrack_factor),
                max_backtracks: Some(o.max_backtracks),
                theta: Some(o.theta),
                eta_start: Some(o.eta.start),
                eta_end: Some(o.eta.end),
                floor_start: Some(o.floor.start),
                floor_end: Some(o.floor.end),
                schedule_factor: Some(o.eta.factor),
                initial_guess: Some(initial_guess.into()),
                guess_amplitude,
                monotone_shift: Some(self.monotone.shift),
                monotone_max_outer: Some(self.monotone.max_outer),
                monotone_tol: Some(self.monotone.tol),
                monotone_samples: Some(self.monotone.samples),
            }),
            sweep: Some(RawSweep {
                lambdas: Some(self.sweep.lambdas.clone()),
                fit_points: Some(self.sweep.fit_points),
                fit_tolerance: Some(self.sweep.fit_tolerance),
                limit_lambdas: Some(self.sweep.limit_lambdas.clone()),
                uniqueness_lambdas: Some(self.sweep.uniqueness_lambdas.clone()),
                n_starts: Some(self.sweep.n_starts),
                inequality_exponents: Some(self.sweep.inequality_exponents.clone()),
                inequality_samples: Some(self.sweep.inequality_samples),
            }),
            output: Some(RawOutput {
                dir: Some(self.output_dir.to_string_lossy().into_owned()),
                emit_plots: Some(self.emit_plots),
            }),
            run: Some(RawRun {
                experiment: Some(self.experiment.name().into()),
                seed: Some(self.seed),
            }),
        };
        toml::to_string(&raw).expect("config serializes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = "[problem]\np = 1.5\nq = 2.0\nlambda = 100.0\n\n[reaction]\nbeta = 0.5\n";

    #[test]
    fn minimal_config_takes_defaults() {
        let c = parse_config_str(MINIMAL).unwrap();
        assert_eq!(c.n, 2048);
        assert_eq!(c.grading, 1.0);
        assert_eq!(c.seed, 42);
        assert_eq!(c.sweep.lambdas, vec![1e2, 1e3, 1e4, 1e5, 1e6]);
        assert_eq!(c.solver.tol_residual, None);
        assert_eq!(c.spec.reaction, ReactionSpec::PureSingular { beta: 0.5 });
        assert_eq!(c.experiment, Experiment::All);
    }

    #[test]
    fn power_weight_grading_default() {
        let src = format!("{MINIMAL}\n[weight]\nkind = \"power\"\ndelta = 0.25\n");
        assert_eq!(parse_config_str(&src).unwrap().grading, 4.0);
    }

    #[test]
    fn equal_exponents_are_rejected_with_line() {
        let e = parse_config_str("[problem]\np = 2.0\nq = 2.0\n").unwrap_err();
        assert!(e.message.contains("p<q required"), "{e}");
        assert_eq!(e.line, Some(3));
    }

    #[test]
    fn unknown_key_is_named() {
        let e = parse_config_str("[problem]\np = 1.5\nq = 2.0\n\n[reaction]\nbetta = 0.5\n").unwrap_err();
        assert!(e.message.contains("betta"), "{e}");
        assert_eq!(e.line, Some(6));
    }

    #[test]
    fn malformed_syntax_has_line() {
        let e = parse_config_str("[problem]\np = 1.5\nq = = 2\n").unwrap_err();
        assert_eq!(e.line, Some(3));
    }

    #[test]
    fn echo_round_trips() {
        let srcs = [
            MINIMAL.to_string(),
            format!("{MINIMAL}\n[weight]\nkind = \"power\"\namplitude = 2.0\ndelta = 0.1\n[domain]\nkind = \"ball\"\ndim = 3\nradius = 0.7\n"),
            "[problem]\np = 1.5\nq = 2.0\n[reaction]\nkind = \"general\"\nbeta = 0.1\nfamily = \"bounded_decaying\"\na = 3.0\nb = 1.0\n[solver]\ntol_residual = 1e-9\ninitial_guess = \"linearized\"\n[run]\nexperiment = \"verify-uniqueness\"\nseed = 7\n".to_string(),
        ];
        for src in srcs {
            let c = parse_config_str(&src).unwrap();
            let again = parse_config_str(&c.to_toml()).unwrap();
            assert_eq!(c, again);
        }
    }
}
