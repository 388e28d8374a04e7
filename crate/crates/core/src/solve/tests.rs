use std::sync::Arc;

use super::*;
use crate::discretization::Field;
use crate::domain::{make_grid, Domain, FFamily, ProblemSpec, ReactionSpec, Weight};

fn spec(p: f64, q: f64, beta: f64, lambda: f64) -> ProblemSpec {
    ProblemSpec {
        p,
        q,
        lambda,
        domain: Domain::interval(0.0, 1.0).unwrap(),
        weight: Weight::Constant { value: 1.0 },
        reaction: ReactionSpec::PureSingular { beta },
    }
}

fn grid(domain: Domain, n: usize, s: f64) -> Arc<crate::domain::Grid> {
    Arc::new(make_grid(domain, n, s).unwrap())
}

#[test]
fn linear_poisson_is_nodally_exact() {
    let s = spec(2.0, 2.0, 0.0, 1.0);
    let g = grid(s.domain, 1024, 1.0);
    let (u, report) = solve_newton(&s, &g, &SolveOptions::default()).unwrap();
    assert!(report.converged);
    let err = g
        .nodes()
        .iter()
        .zip(u.values())
        .fold(0.0f64, |m, (x, v)| m.max((v - x * (1.0 - x) / 4.0).abs()));
    assert!(err <= 1e-10, "err {err}");
}

#[test]
fn torsion_maximum() {
    let s = spec(3.0, 3.0, 0.0, 2.0);
    let g = grid(s.domain, 4096, 1.0);
    let (u, _) = solve_newton(&s, &g, &SolveOptions::default()).unwrap();
    let exact = (2.0 / 3.0) * 0.5f64.powf(1.5);
    assert!((u.sup_norm() - exact).abs() / exact <= 1e-3);
}

#[test]
fn single_phase_homogeneity() {
    let s1 = spec(3.0, 3.0, 0.5, 1.0);
    let g = grid(s1.domain, 512, 1.0);
    let opts = SolveOptions::default();
    let (u1, _) = solve_newton(&s1, &g, &opts).unwrap();
    let (u16, _) = solve_newton(&s1.with_lambda(16.0), &g, &opts).unwrap();
    let t = 16f64.powf(0.4);
    for i in g.unknowns() {
        let rel = (u16.values()[i] - t * u1.values()[i]).abs() / (t * u1.values()[i]);
        assert!(rel <= 1e-6, "node {i}: {rel}");
    }
}

#[test]
fn symmetric_data_gives_symmetric_solution() {
    let mut s = spec(1.5, 2.0, 0.5, 100.0);
    s.weight = Weight::Power {
        amplitude: 1.0,
        delta: 0.25,
    };
    let g = grid(s.domain, 256, 2.0);
    let (u, _) = solve_newton(&s, &g, &SolveOptions::default()).unwrap();
    let v = u.values();
    let n = v.len() - 1;
    let scale = u.sup_norm();
    for i in 0..=n {
        assert!((v[i] - v[n - i]).abs() <= 1e-10 * scale);
    }
}

#[test]
fn one_dimensional_ball_matches_interval() {
    let s = spec(1.5, 2.0, 0.3, 10.0);
    let g = grid(s.domain, 256, 1.0);
    let (u, _) = solve_newton(&s, &g, &SolveOptions::default()).unwrap();

    let mut b = s;
    b.domain = Domain::ball(1, 0.5).unwrap();
    let gb = grid(b.domain, 128, 1.0);
    let (ub, _) = solve_newton(&b, &gb, &SolveOptions::default()).unwrap();
    for k in 0..=128 {
        let a = u.values()[128 + k];
        assert!((a - ub.values()[k]).abs() <= 1e-9 * u.sup_norm());
    }
}

#[test]
fn energy_descends_within_each_stage() {
    let s = spec(1.5, 2.0, 0.5, 100.0);
    let g = grid(s.domain, 256, 1.0);
    let (_, report) = solve_newton(&s, &g, &SolveOptions::default()).unwrap();
    for stage in &report.stages {
        let e = &stage.energies;
        assert!(!e.is_empty());
        for w in e.windows(2) {
            assert!(w[1] <= w[0] + 1e-12 * w[0].abs().max(1.0), "{} > {}", w[1], w[0]);
        }
    }
}

#[test]
fn different_starts_agree() {
    let s = spec(1.5, 2.0, 0.5, 100.0);
    let g = grid(s.domain, 256, 1.0);
    let ms = multi_start(&s, &g, &SolveOptions::default(), 4, 7).unwrap();
    assert!(ms.failures.is_empty(), "{:?}", ms.failures);
    assert!(ms.max_distance <= 1e-8, "{}", ms.max_distance);
}

#[test]
fn identical_guesses_give_zero_distance() {
    let s = spec(1.5, 2.0, 0.5, 100.0);
    let g = grid(s.domain, 128, 1.0);
    let guess = Field::from_fn(Arc::clone(&g), |_, d| 10.0 * d);
    let ms = multi_start_from(&s, &g, &SolveOptions::default(), vec![guess.clone(), guess]).unwrap();
    assert_eq!(ms.max_distance, 0.0);
}

#[test]
fn multi_start_is_reproducible() {
    let s = spec(1.5, 2.0, 0.5, 100.0);
    let g = grid(s.domain, 128, 1.0);
    let a = multi_start(&s, &g, &SolveOptions::default(), 3, 11).unwrap();
    let b = multi_start(&s, &g, &SolveOptions::default(), 3, 11).unwrap();
    for (x, y) in a.fields.iter().zip(&b.fields) {
        assert_eq!(x.values(), y.values());
    }
}

#[test]
fn constant_family_needs_no_correction() {
    let mut s = spec(2.0, 2.0, 0.0, 5.0);
    s.reaction = ReactionSpec::General {
        beta: 0.0,
        family: FFamily::Constant { c: 2.0 },
    };
    let g = grid(s.domain, 128, 1.0);
    let r = solve_monotone(&s, &g, &MonotoneOptions::default(), &SolveOptions::default()).unwrap();
    assert!(r.converged);
    assert_eq!(r.outer_iterations, 1);
    assert_eq!(r.increments, vec![0.0]);
}

#[test]
fn monotone_iterates_increase_to_newton_solution() {
    let mut s = spec(1.5, 2.0, 0.1, 100.0);
    s.reaction = ReactionSpec::General {
        beta: 0.1,
        family: FFamily::BoundedDecaying { a: 3.0, b: 1.0 },
    };
    let g = grid(s.domain, 128, 1.0);
    let mopts = MonotoneOptions {
        max_outer: 5000,
        tol: 1e-11,
        ..MonotoneOptions::default()
    };
    let r = solve_monotone(&s, &g, &mopts, &SolveOptions::default()).unwrap();
    assert!(r.converged);
    for w in r.history.windows(2) {
        for (a, b) in w[0].values().iter().zip(w[1].values()) {
            assert!(*b >= *a - 1e-10 * r.supersolution.sup_norm());
        }
    }
    let (u, _) = solve_newton(&s, &g, &SolveOptions::default()).unwrap();
    assert!(r.solution.relative_distance(&u).unwrap() <= 1e-6);
}

#[test]
fn floor_schedule_is_reported() {
    let s = spec(1.5, 2.0, 0.5, 100.0);
    let g = grid(s.domain, 128, 1.0);
    let (_, report) = solve_newton(&s, &g, &SolveOptions::default()).unwrap();
    assert_eq!(report.stages.len(), 9);
    assert_eq!(report.stages.last().unwrap().floor, 0.0);
    assert!(report.final_residual <= report.tolerance);
}
