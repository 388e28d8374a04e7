use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::domain::{make_grid, Domain, FFamily, ProblemSpec, ReactionSpec, Weight};

fn interval_spec(p: f64, q: f64, beta: f64, lambda: f64) -> ProblemSpec {
    ProblemSpec {
        p,
        q,
        lambda,
        domain: Domain::interval(0.0, 1.0).unwrap(),
        weight: Weight::Constant { value: 1.0 },
        reaction: ReactionSpec::PureSingular { beta },
    }
}

fn grid(spec: &ProblemSpec, n: usize, s: f64) -> Arc<Grid> {
    Arc::new(make_grid(spec.domain, n, s).unwrap())
}

use crate::domain::Grid;

#[test]
fn quadratic_is_exact_for_linear_operator() {
    let spec = interval_spec(2.0, 2.0, 0.0, 1.0);
    let g = grid(&spec, 1024, 1.0);
    let u = Field::from_fn(g, |x, _| x * (1.0 - x) / 4.0);
    let r = residual(&spec, &u, RegularizedFluxParams::exact(), 0.0).unwrap();
    let worst = r.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    assert!(worst <= 1e-12, "max residual {worst:e}");
}

#[test]
fn quadratic_is_exact_on_ball() {
    // -2 Δu = 1 in the unit 3-ball: u = (1 - r^2) / 12
    let mut spec = interval_spec(2.0, 2.0, 0.0, 1.0);
    spec.domain = Domain::ball(3, 1.0).unwrap();
    let g = grid(&spec, 256, 1.5);
    let u = Field::from_fn(g, |r, _| (1.0 - r * r) / 12.0);
    let r = residual(&spec, &u, RegularizedFluxParams::exact(), 0.0).unwrap();
    assert!(r.iter().all(|v| v.abs() < 1e-9), "{:?}", &r[..4]);
}

#[test]
fn zero_field_hits_singularity() {
    let spec = interval_spec(1.5, 2.0, 0.5, 1.0);
    let u = Field::zeros(grid(&spec, 16, 1.0));
    assert!(matches!(
        residual(&spec, &u, RegularizedFluxParams::exact(), 0.0),
        Err(Error::Singularity { .. })
    ));
    // a floor makes the same evaluation legal
    assert!(residual(&spec, &u, RegularizedFluxParams::exact(), 1e-3).is_ok());
}

/// Closed-form solution of -2 (|u'| u')' = 2 on (0, 1).
fn torsion3(x: f64) -> f64 {
    (2.0 / 3.0) * (0.5f64.powf(1.5) - (x - 0.5).abs().powf(1.5))
}

#[test]
fn torsion_profile_residual() {
    let spec = interval_spec(3.0, 3.0, 0.0, 2.0);
    let weak_norm = |n: usize| {
        let g = grid(&spec, n, 1.0);
        let u = Field::from_fn(Arc::clone(&g), |x, _| torsion3(x));
        let r = residual(&spec, &u, RegularizedFluxParams::exact(), 0.0).unwrap();
        let strong = r.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let weak: f64 = g.unknowns().zip(&r).map(|(i, v)| g.mass()[i] * v.abs()).sum();
        (strong, weak)
    };
    let (s1, w1) = weak_norm(1024);
    let (s2, w2) = weak_norm(4096);
    // The |x - 1/2|^(3/2) cusp keeps the centre node at R = -2/9 for every h;
    // the residual tested against hat functions decays at first order.
    assert!((s1 - 2.0 / 9.0).abs() < 1e-6 && (s2 - 2.0 / 9.0).abs() < 1e-6);
    assert!(w2 <= w1 / 4.0 * 1.01, "{w1:e} -> {w2:e}");
    assert!(w2 < 1e-3);
}

#[test]
fn laplacian_stencil_entries() {
    let spec = interval_spec(2.0, 2.0, 0.0, 1.0);
    let u = Field::from_fn(grid(&spec, 4, 1.0), |x, _| x.sin() + 0.2);
    let j = jacobian(&spec, &u, RegularizedFluxParams::exact(), 0.0).unwrap();
    assert_eq!(j.main, vec![64.0; 3]);
    assert_eq!(j.sub, vec![0.0, -32.0, -32.0]);
    assert_eq!(j.sup, vec![-32.0, -32.0, 0.0]);
}

#[test]
fn pure_q2_jacobian_is_constant() {
    let spec = interval_spec(1.5, 2.0, 0.0, 3.0);
    let g = grid(&spec, 32, 2.0);
    let fp = RegularizedFluxParams { eta: 0.0, mu_p: 0.0 };
    let a = Field::from_fn(Arc::clone(&g), |x, _| x * (1.0 - x));
    let b = Field::from_fn(g, |x, _| (3.0 * x).sin().abs() + x * (1.0 - x) * 10.0);
    assert_eq!(
        jacobian(&spec, &a, fp, 0.0).unwrap(),
        jacobian(&spec, &b, fp, 0.0).unwrap()
    );
}

pub(crate) fn fd_specs() -> Vec<ProblemSpec> {
    let mut v = vec![
        interval_spec(1.5, 2.0, 0.5, 10.0),
        interval_spec(2.5, 3.0, 0.2, 1.0),
        interval_spec(1.2, 1.9, 0.0, 100.0),
    ];
    let mut s = interval_spec(1.5, 2.0, 0.1, 50.0);
    s.reaction = ReactionSpec::General {
        beta: 0.1,
        family: FFamily::BoundedDecaying { a: 3.0, b: 1.0 },
    };
    s.weight = Weight::Power {
        amplitude: 1.0,
        delta: 0.25,
    };
    v.push(s);
    let mut s = interval_spec(1.9, 2.0, 0.08, 5.0);
    s.domain = Domain::ball(3, 1.0).unwrap();
    s.reaction = ReactionSpec::General {
        beta: 0.08,
        family: FFamily::SubSingularGrowth { gamma: 0.05 },
    };
    v.push(s);
    v
}

pub(crate) fn random_positive_field(g: &Arc<Grid>, rng: &mut ChaCha8Rng, amp: f64) -> Field {
    let bumps: Vec<f64> = (0..=g.cells()).map(|_| rng.random_range(0.5..1.5)).collect();
    Field::from_fn(Arc::clone(g), |x, d| {
        let i = g.nodes().iter().position(|&y| y == x).unwrap();
        amp * (0.05 + d) * bumps[i]
    })
}

#[test]
fn jacobian_matches_central_differences() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let fp = RegularizedFluxParams { eta: 1e-3, mu_p: 1.0 };
    for spec in fd_specs() {
        let g = grid(&spec, 24, 1.5);
        for _ in 0..4 {
            let u = random_positive_field(&g, &mut rng, 2.0);
            let j = jacobian(&spec, &u, fp, 0.0).unwrap();
            let fd = fd_jacobian(&spec, &u, fp);
            let err = compare_tridiagonal(&j, &fd);
            assert!(err <= 1e-6, "{spec:?}: {err:e}");
        }
    }
}

/// Dense central-difference Jacobian, step 1e-6 relative to each value.
pub(crate) fn fd_jacobian(spec: &ProblemSpec, u: &Field, fp: RegularizedFluxParams) -> Vec<Vec<f64>> {
    let g = u.grid();
    let idx: Vec<usize> = g.unknowns().collect();
    let mut cols = vec![vec![0.0; idx.len()]; idx.len()];
    for (c, &i) in idx.iter().enumerate() {
        let h = 1e-6 * u.values()[i].abs().max(1e-3);
        let mut plus = u.values().to_vec();
        let mut minus = u.values().to_vec();
        plus[i] += h;
        minus[i] -= h;
        let rp = residual(spec, &Field::from_values(Arc::clone(g), plus).unwrap(), fp, 0.0).unwrap();
        let rm = residual(spec, &Field::from_values(Arc::clone(g), minus).unwrap(), fp, 0.0).unwrap();
        for r in 0..idx.len() {
            cols[r][c] = (rp[r] - rm[r]) / (2.0 * h);
        }
    }
    cols
}

/// Largest entrywise relative error over the tridiagonal band (entries that
/// should vanish are compared against the row scale).
#[allow(clippy::needless_range_loop)]
pub(crate) fn compare_tridiagonal(j: &TridiagonalSystem, fd: &[Vec<f64>]) -> f64 {
    let m = j.len();
    let mut worst = 0.0f64;
    for r in 0..m {
        let row_scale = fd[r].iter().fold(0.0f64, |a, v| a.max(v.abs()));
        for c in 0..m {
            let exact = if c == r {
                j.main[r]
            } else if c + 1 == r {
                j.sub[r]
            } else if c == r + 1 {
                j.sup[r]
            } else {
                0.0
            };
            let denom = exact.abs().max(1e-8 * row_scale);
            worst = worst.max((exact - fd[r][c]).abs() / denom);
        }
    }
    worst
}

#[test]
fn energy_of_parabola() {
    let spec = interval_spec(2.0, 2.0, 0.0, 1.0);
    let u = Field::from_fn(grid(&spec, 1024, 1.0), |x, _| x * (1.0 - x));
    let j = energy(&spec, &u, RegularizedFluxParams::exact(), 0.0).unwrap();
    assert!((j - 1.0 / 6.0).abs() < 1e-4, "{j}");
}

#[test]
fn energy_of_zero_field() {
    let spec = interval_spec(1.5, 2.0, 0.0, 1.0);
    let u = Field::zeros(grid(&spec, 64, 1.0));
    assert_eq!(energy(&spec, &u, RegularizedFluxParams::exact(), 0.0).unwrap(), 0.0);
    assert_eq!(
        energy(&spec, &u, RegularizedFluxParams::with_eta(1e-2), 0.0).unwrap(),
        0.0
    );
}

#[test]
fn energy_scaling_of_linear_problem() {
    let spec = interval_spec(2.0, 2.0, 0.0, 1.0);
    let g = grid(&spec, 128, 1.0);
    let u = Field::from_fn(g, |x, _| (std::f64::consts::PI * x).sin());
    let fp = RegularizedFluxParams::exact();
    let gradient_part = energy(&spec.with_lambda(0.0), &u, fp, 0.0).unwrap();
    let reaction_part = energy(&spec, &u, fp, 0.0).unwrap() - gradient_part;
    let doubled = energy(&spec, &u.scaled(2.0), fp, 0.0).unwrap();
    assert!((doubled - (4.0 * gradient_part + 2.0 * reaction_part)).abs() < 1e-12);
}

#[test]
fn energy_unsupported_for_general_families() {
    let mut spec = interval_spec(1.5, 2.0, 0.1, 1.0);
    spec.reaction = ReactionSpec::General {
        beta: 0.1,
        family: FFamily::BoundedDecaying { a: 3.0, b: 1.0 },
    };
    let u = Field::from_fn(grid(&spec, 16, 1.0), |_, d| d + 0.1);
    assert!(matches!(
        energy(&spec, &u, RegularizedFluxParams::exact(), 0.0),
        Err(Error::UnsupportedEnergy(_))
    ));
    spec.reaction = ReactionSpec::General {
        beta: 0.1,
        family: FFamily::Constant { c: 2.0 },
    };
    assert!(energy(&spec, &u, RegularizedFluxParams::exact(), 0.0).is_ok());
}

#[test]
fn residual_is_energy_gradient() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let fp = RegularizedFluxParams { eta: 1e-3, mu_p: 1.0 };
    let mut specs: Vec<ProblemSpec> = fd_specs()
        .into_iter()
        .filter(|s| matches!(s.reaction, ReactionSpec::PureSingular { .. }))
        .collect();
    let mut ball = interval_spec(1.5, 2.5, 0.4, 3.0);
    ball.domain = Domain::ball(2, 1.0).unwrap();
    specs.push(ball);
    for spec in specs {
        let g = grid(&spec, 32, 1.0);
        let u = random_positive_field(&g, &mut rng, 1.0);
        let r = residual(&spec, &u, fp, 0.0).unwrap();
        let err = energy_gradient_error(&spec, &u, fp, &r);
        assert!(err <= 1e-6, "{spec:?}: {err:e}");
    }
}

pub(crate) fn energy_gradient_error(spec: &ProblemSpec, u: &Field, fp: RegularizedFluxParams, r: &[f64]) -> f64 {
    let g = u.grid();
    let mut worst = 0.0f64;
    for (k, i) in g.unknowns().enumerate() {
        let h = 1e-6 * u.values()[i];
        let mut plus = u.values().to_vec();
        let mut minus = u.values().to_vec();
        plus[i] += h;
        minus[i] -= h;
        let jp = energy(spec, &Field::from_values(Arc::clone(g), plus).unwrap(), fp, 0.0).unwrap();
        let jm = energy(spec, &Field::from_values(Arc::clone(g), minus).unwrap(), fp, 0.0).unwrap();
        let fd = (jp - jm) / (2.0 * h);
        let exact = g.mass()[i] * r[k];
        worst = worst.max((fd - exact).abs() / exact.abs().max(1e-10));
    }
    worst
}

#[test]
fn single_phase_flux_is_homogeneous() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let spec = interval_spec(3.0, 3.0, 0.0, 1.0).with_lambda(0.0);
    let g = grid(&spec, 40, 2.0);
    let u = random_positive_field(&g, &mut rng, 1.0);
    let fp = RegularizedFluxParams::exact();
    let t = 3.7f64;
    let r1 = residual(&spec, &u, fp, 0.0).unwrap();
    let rt = residual(&spec, &u.scaled(t), fp, 0.0).unwrap();
    for (a, b) in r1.iter().zip(&rt) {
        assert!((b - t.powf(2.0) * a).abs() <= 1e-10 * b.abs().max(1.0));
    }
}
