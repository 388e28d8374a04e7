use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;
use std::time::{Duration, Instant};

use crate::discretization::Field;
use crate::domain::{make_grid, Grid, ProblemSpec, ReactionSpec};
use crate::error::Error;
use crate::solve::{solve_monotone, solve_newton};
use crate::verify::{
    check_monotone_in_lambda, fit_exponent, gradient_growth_check, lambda_sweep, limit_qlaplacian, ratio_profile,
    uniform_linf_check, uniqueness_experiment, vector_inequality_check, Column, SweepResult, Window,
};

use super::config::{Experiment, RunConfig};
use super::CliError;

/// Outcome of one check.
#[derive(Clone, Debug, PartialEq)]
pub struct VerdictLine {
    pub experiment: &'static str,
    pub check: &'static str,
    pub pass: bool,
    pub detail: String,
}

#[derive(Clone, Debug)]
pub struct RunSummary {
    pub experiment: Experiment,
    pub verdicts: Vec<VerdictLine>,
    pub config_echo: String,
    pub version: &'static str,
    pub wall_time: Duration,
    pub files: Vec<PathBuf>,
}

impl RunSummary {
    pub fn passed(&self) -> bool {
        self.verdicts.iter().all(|v| v.pass)
    }

    pub fn render(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "dphase {}", self.version);
        let _ = writeln!(s, "experiment: {}", self.experiment.name());
        let _ = writeln!(s, "wall_time_s: {:.3}", self.wall_time.as_secs_f64());
        let _ = writeln!(s, "\n[verdicts]");
        for v in &self.verdicts {
            let tag = if v.pass { "PASS" } else { "FAIL" };
            let _ = writeln!(s, "{tag}  {:<18} {:<22} {}", v.experiment, v.check, v.detail);
        }
        let _ = writeln!(s, "overall: {}", if self.passed() { "PASS" } else { "FAIL" });
        let _ = writeln!(s, "\n[config]\n{}", self.config_echo);
        s
    }
}

/// Formats a float with 17 significant digits, independent of locale.
pub fn fmt_num(x: f64) -> String {
    format!("{x:.16e}")
}

struct Emitter {
    dir: PathBuf,
    files: Vec<PathBuf>,
}

impl Emitter {
    fn write(&mut self, name: &str, contents: &str) -> Result<(), CliError> {
        let path = self.dir.join(name);
        fs::write(&path, contents).map_err(|source| CliError::Io {
            path: path.clone(),
            source,
        })?;
        self.files.push(path);
        Ok(())
    }
}

fn solver_err(stage: &'static str) -> impl FnOnce(Error) -> CliError {
    move |source| CliError::Solver { stage, source }
}

pub const SWEEP_HEADER: &str =
    "lambda,sup_norm,probe_value,grad_max,ratio_min,ratio_max,rescaled_sup_norm,newton_iters,residual_norm,converged";

/// `sweep.csv` contents; an empty sweep gives the header alone.
pub fn sweep_csv(sweep: &SweepResult) -> String {
    let mut s = String::from(SWEEP_HEADER);
    s.push('\n');
    for r in &sweep.records {
        let _ = writeln!(
            s,
            "{},{},{},{},{},{},{},{},{},{}",
            fmt_num(r.lambda),
            fmt_num(r.sup_norm),
            fmt_num(r.probe_value),
            fmt_num(r.grad_max),
            fmt_num(r.ratio_min),
            fmt_num(r.ratio_max),
            fmt_num(r.rescaled_sup_norm),
            r.newton_iters,
            fmt_num(r.residual_norm),
            r.converged
        );
    }
    s
}

/// Nodal dump `x, u, Du, dist, ratio`. `Du` averages the adjacent cell
/// slopes; at a Dirichlet node the ratio is the limit `|Du| / lambda^sigma`.
pub fn solution_csv(u: &Field, spec: &ProblemSpec) -> String {
    let grid = u.grid();
    let slopes = u.slopes();
    let n = grid.cells();
    let envelope = spec.lambda.powf(spec.sigma_beta());
    let ratios = ratio_profile(u, spec.lambda, spec);
    let first = grid.unknowns().start;
    let mut s = String::from("x,u,Du,dist,ratio\n");
    for i in 0..=n {
        let du = match i {
            0 if first == 0 => 0.0,
            0 => slopes[0],
            _ if i == n => slopes[n - 1],
            _ => 0.5 * (slopes[i - 1] + slopes[i]),
        };
        let ratio = if grid.is_dirichlet(i) {
            du.abs() / envelope
        } else {
            ratios[i - first]
        };
        let _ = writeln!(
            s,
            "{},{},{},{},{}",
            fmt_num(grid.nodes()[i]),
            fmt_num(u.values()[i]),
            fmt_num(du),
            fmt_num(grid.distances()[i]),
            fmt_num(ratio)
        );
    }
    s
}

fn solution_name(lambda: f64) -> String {
    format!("solution_{lambda:e}.csv")
}

const EXPONENT_PLOT: &str = "\
set datafile separator ','
set logscale xy
set key top left
set xlabel 'lambda'
set terminal pngcairo size 800,600
set output 'exponent.png'
plot 'sweep.csv' every ::1 using 1:3 with linespoints title 'probe value', \\
     'sweep.csv' every ::1 using 1:2 with linespoints title 'sup norm', \\
     'sweep.csv' every ::1 using 1:4 with linespoints title 'max slope'
";

const RATIO_PLOT: &str = "\
set datafile separator ','
set logscale x
set key top left
set xlabel 'lambda'
set ylabel 'u / (lambda^sigma d)'
set terminal pngcairo size 800,600
set output 'ratio.png'
plot 'sweep.csv' every ::1 using 1:5 with linespoints title 'ratio min', \\
     'sweep.csv' every ::1 using 1:6 with linespoints title 'ratio max'
";

struct Runner<'a> {
    cfg: &'a RunConfig,
    grid: Arc<Grid>,
    out: Emitter,
    verdicts: Vec<VerdictLine>,
}

impl Runner<'_> {
    fn verdict(&mut self, experiment: &'static str, check: &'static str, pass: bool, detail: String) {
        self.verdicts.push(VerdictLine {
            experiment,
            check,
            pass,
            detail,
        });
    }

    fn solve(&mut self) -> Result<(), CliError> {
        let spec = self.cfg.spec;
        let (u, report) = solve_newton(&spec, &self.grid, &self.cfg.solver).map_err(solver_err("solve"))?;
        self.out.write(&solution_name(spec.lambda), &solution_csv(&u, &spec))?;
        self.verdict(
            "solve",
            "converged",
            report.converged,
            format!(
                "lambda={} sup={:.6e} residual={:.3e} iterations={}",
                spec.lambda,
                u.sup_norm(),
                report.final_residual,
                report.total_iterations
            ),
        );
        Ok(())
    }

    fn sweep(&mut self) -> Result<SweepResult, CliError> {
        let spec = self.cfg.spec;
        let sweep =
            lambda_sweep(&spec, &self.cfg.sweep.lambdas, &self.grid, &self.cfg.solver).map_err(solver_err("sweep"))?;
        self.out.write("sweep.csv", &sweep_csv(&sweep))?;
        for (r, f) in sweep.records.iter().zip(&sweep.fields) {
            if let Some(u) = f {
                self.out
                    .write(&solution_name(r.lambda), &solution_csv(u, &spec.with_lambda(r.lambda)))?;
            }
        }
        if self.cfg.emit_plots {
            self.out.write("exponent.gp", EXPONENT_PLOT)?;
            self.out.write("ratio.gp", RATIO_PLOT)?;
        }
        let failed: Vec<String> = sweep
            .records
            .iter()
            .filter(|r| !r.converged)
            .map(|r| format!("{:e}", r.lambda))
            .collect();
        self.verdict(
            "sweep",
            "all_converged",
            failed.is_empty(),
            format!("{} records, failed: [{}]", sweep.records.len(), failed.join(" ")),
        );
        Ok(sweep)
    }

    fn scaling(&mut self, sweep: &SweepResult) {
        const EXP: &str = "verify-scaling";
        let spec = self.cfg.spec;
        let target = spec.sigma_beta();
        let tol = self.cfg.sweep.fit_tolerance;
        match fit_exponent(sweep, Column::ProbeValue, Window::Top(self.cfg.sweep.fit_points)) {
            Ok(fit) => self.verdict(
                EXP,
                "exponent_fit",
                (fit.slope - target).abs() <= tol,
                format!(
                    "slope={:.6} target={:.6} tol={} r2={:.6}",
                    fit.slope, target, tol, fit.r_squared
                ),
            ),
            Err(e) => self.verdict(EXP, "exponent_fit", false, e.to_string()),
        }

        let rows: Vec<_> = sweep.converged().collect();
        let positive = !rows.is_empty() && rows.iter().all(|r| r.ratio_min > 0.0 && r.ratio_min <= r.ratio_max);
        let spread = rows.iter().map(|r| r.ratio_max / r.ratio_min).fold(0.0f64, f64::max);
        let drift = if rows.len() >= 2 {
            let (a, b) = (rows[rows.len() - 2], rows[rows.len() - 1]);
            (b.ratio_median - a.ratio_median).abs() / b.ratio_median
        } else {
            f64::NAN
        };
        self.verdict(
            EXP,
            "envelope",
            positive && spread <= 10.0 && drift <= 0.05,
            format!("max r_max/r_min={spread:.4} median_drift={drift:.4e}"),
        );

        let fields: Vec<Field> = sweep.fields.iter().flatten().cloned().collect();
        match check_monotone_in_lambda(&fields) {
            Ok(v) => self.verdict(
                EXP,
                "monotone_in_lambda",
                v.ok,
                format!("worst_violation={:.3e}", v.worst_violation),
            ),
            Err(e) => self.verdict(EXP, "monotone_in_lambda", false, e.to_string()),
        }

        match uniform_linf_check(sweep) {
            Ok(v) => self.verdict(
                EXP,
                "uniform_linf",
                v.ok,
                format!(
                    "min={:.6} max={:.6} ratio={:.4} last_decade_drift={:.4e}",
                    v.min,
                    v.max,
                    v.max / v.min,
                    v.last_decade_drift
                ),
            ),
            Err(e) => self.verdict(EXP, "uniform_linf", false, e.to_string()),
        }

        match gradient_growth_check(sweep, spec.reaction.is_bounded()) {
            Ok(v) => self.verdict(
                EXP,
                "gradient_growth",
                v.ok,
                format!("slope={:.6} bound={:.6}+0.02", v.fit.slope, v.bound),
            ),
            Err(e) => self.verdict(EXP, "gradient_growth", false, e.to_string()),
        }
    }

    fn limit(&mut self) -> Result<(), CliError> {
        const EXP: &str = "verify-limit";
        let mut template = self.cfg.spec;
        template.reaction = template.reaction.with_beta(0.0);
        if let ReactionSpec::General { .. } = template.reaction {
            template.reaction = ReactionSpec::PureSingular { beta: 0.0 };
        }
        let mut csv = String::from("lambda,mu,distance,relative_distance,route_gap\n");
        let mut distances = Vec::new();
        let mut v0 = f64::NAN;
        for &lambda in &self.cfg.sweep.limit_lambdas {
            let r = limit_qlaplacian(&template, lambda, &self.grid, &self.cfg.solver)
                .map_err(solver_err("verify-limit"))?;
            v0 = r.limit.sup_norm();
            let _ = writeln!(
                csv,
                "{},{},{},{},{}",
                fmt_num(lambda),
                fmt_num(template.with_lambda(lambda).mu()),
                fmt_num(r.distance),
                fmt_num(r.distance / v0),
                fmt_num(r.route_gap)
            );
            distances.push(r.distance);
        }
        self.out.write("limit.csv", &csv)?;
        let decreasing = distances.windows(2).all(|w| w[1] < w[0]);
        let last = distances.last().copied().unwrap_or(f64::NAN) / v0;
        self.verdict(
            EXP,
            "distance_decreasing",
            decreasing,
            format!(
                "distances=[{}]",
                distances
                    .iter()
                    .map(|d| format!("{d:.4e}"))
                    .collect::<Vec<_>>()
                    .join(" ")
            ),
        );
        self.verdict(
            EXP,
            "final_distance",
            last <= 0.02,
            format!("relative={last:.4e} bound=2e-2"),
        );
        Ok(())
    }

    fn uniqueness(&mut self) -> Result<(), CliError> {
        const EXP: &str = "verify-uniqueness";
        let spec = self.cfg.spec;
        let sw = &self.cfg.sweep;
        let rows = uniqueness_experiment(
            &spec,
            &sw.uniqueness_lambdas,
            &self.grid,
            &self.cfg.solver,
            sw.n_starts,
            self.cfg.seed,
        )
        .map_err(solver_err("verify-uniqueness"))?;
        let convex = matches!(spec.reaction, ReactionSpec::PureSingular { .. });
        let mut csv = String::from("lambda,max_distance,converged,failures,regime\n");
        for r in &rows {
            let _ = writeln!(
                csv,
                "{},{},{},{},{:?}",
                fmt_num(r.lambda),
                fmt_num(r.max_distance),
                r.converged,
                r.failures,
                r.regime
            );
            let applies = convex || r.guaranteed();
            let detail = format!(
                "lambda={:e} distance={:.3e} starts={}/{} regime={:?}{}",
                r.lambda,
                r.max_distance,
                r.converged,
                r.converged + r.failures,
                r.regime,
                if applies { "" } else { " (no guarantee, informational)" }
            );
            let pass = !applies || r.max_distance <= 1e-8;
            self.verdict(EXP, "collapse", pass, detail);
        }
        self.out.write("uniqueness.csv", &csv)?;

        if matches!(spec.reaction, ReactionSpec::General { .. }) {
            let lambda = *sw.uniqueness_lambdas.last().expect("nonempty");
            let s = spec.with_lambda(lambda);
            match solve_monotone(&s, &self.grid, &self.cfg.monotone, &self.cfg.solver) {
                Ok(m) => {
                    let (u, _) =
                        solve_newton(&s, &self.grid, &self.cfg.solver).map_err(solver_err("verify-uniqueness"))?;
                    let gap = m
                        .solution
                        .relative_distance(&u)
                        .map_err(solver_err("verify-uniqueness"))?;
                    self.verdict(
                        EXP,
                        "monotone_iteration",
                        m.converged && gap <= 1e-6,
                        format!(
                            "lambda={lambda:e} outer={} K={:.4e} C={:.4e} worst_decrease={:.3e} gap_to_newton={gap:.3e}",
                            m.outer_iterations, m.shift, m.super_constant, m.worst_decrease
                        ),
                    );
                }
                Err(e @ Error::MonotonicityFailure { .. }) => {
                    self.verdict(EXP, "monotone_iteration", false, e.to_string())
                }
                Err(e) => return Err(solver_err("verify-uniqueness")(e)),
            }
        }
        Ok(())
    }

    fn inequality(&mut self) -> Result<(), CliError> {
        let sw = &self.cfg.sweep;
        let mut csv = String::from("r,samples,worst_margin,ok\n");
        let mut lines = Vec::new();
        for (k, &r) in sw.inequality_exponents.iter().enumerate() {
            let v = vector_inequality_check(r, sw.inequality_samples, self.cfg.seed.wrapping_add(k as u64));
            let _ = writeln!(csv, "{},{},{},{}", fmt_num(r), v.samples, fmt_num(v.worst_margin), v.ok);
            lines.push((r, v));
        }
        self.out.write("inequality.csv", &csv)?;
        for (r, v) in lines {
            self.verdict(
                "verify-inequality",
                "margin",
                v.ok,
                format!("r={r} samples={} worst_margin={:.3e}", v.samples, v.worst_margin),
            );
        }
        Ok(())
    }
}

/// Runs the configured experiment and writes every report into the output directory.
pub fn run(cfg: &RunConfig) -> Result<RunSummary, CliError> {
    let start = Instant::now();
    fs::create_dir_all(&cfg.output_dir).map_err(|source| CliError::Io {
        path: cfg.output_dir.clone(),
        source,
    })?;
    let grid = Arc::new(
        make_grid(cfg.spec.domain, cfg.n, cfg.grading).map_err(|e| CliError::Solver {
            stage: "grid",
            source: e,
        })?,
    );
    let mut runner = Runner {
        cfg,
        grid,
        out: Emitter {
            dir: cfg.output_dir.clone(),
            files: Vec::new(),
        },
        verdicts: Vec::new(),
    };
    let config_echo = cfg.to_toml();
    runner.out.write("config.toml", &config_echo)?;

    use Experiment::*;
    let e = cfg.experiment;
    if matches!(e, Solve | All) {
        runner.solve()?;
    }
    if matches!(e, Sweep | VerifyScaling | All) {
        let sweep = runner.sweep()?;
        if e != Sweep {
            runner.scaling(&sweep);
        }
    }
    if matches!(e, VerifyLimit | All) {
        runner.limit()?;
    }
    if matches!(e, VerifyUniqueness | All) {
        runner.uniqueness()?;
    }
    if matches!(e, VerifyInequality | All) {
        runner.inequality()?;
    }

    let mut summary = RunSummary {
        experiment: e,
        verdicts: runner.verdicts,
        config_echo,
        version: env!("CARGO_PKG_VERSION"),
        wall_time: start.elapsed(),
        files: runner.out.files,
    };
    let path = cfg.output_dir.join("summary.txt");
    fs::write(&path, summary.render()).map_err(|source| CliError::Io {
        path: path.clone(),
        source,
    })?;
    summary.files.push(path);
    Ok(summary)
}

/// Files in `dir` with a `.csv` extension, sorted by name.
pub fn csv_files(dir: &Path) -> std::io::Result<Vec<PathBuf>> {
    let mut v: Vec<PathBuf> = fs::read_dir(dir)?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "csv"))
        .collect();
    v.sort();
    Ok(v)
}
