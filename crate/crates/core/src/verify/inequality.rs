use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Vec3 = [f64; 3];

fn dot(a: &Vec3, b: &Vec3) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &Vec3) -> f64 {
    dot(a, a).sqrt()
}

fn phi(a: &Vec3, r: f64) -> Vec3 {
    let n = norm(a);
    let w = if n == 0.0 { 0.0 } else { n.powf(r - 2.0) };
    [w * a[0], w * a[1], w * a[2]]
}

/// Sides of `(phi_r(a) - phi_r(b)).(a - b) >= (r-1) |a-b|^2 / (|a|+|b|)^(2-r)`,
/// with `phi_r(a) = |a|^(r-2) a`, and their natural scale `(|a|+|b|)^r`.
pub fn inequality_sides(a: &Vec3, b: &Vec3, r: f64) -> (f64, f64, f64) {
    let (pa, pb) = (phi(a, r), phi(b, r));
    let d = [a[0] - b[0], a[1] - b[1], a[2] - b[2]];
    let dp = [pa[0] - pb[0], pa[1] - pb[1], pa[2] - pb[2]];
    let s = norm(a) + norm(b);
    let lhs = dot(&dp, &d);
    let rhs = (r - 1.0) * dot(&d, &d) / s.powf(2.0 - r);
    (lhs, rhs, s.powf(r))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct InequalityVerdict {
    pub r: f64,
    pub samples: usize,
    /// Smallest `(lhs - rhs) / scale` over the samples.
    pub worst_margin: f64,
    pub worst_pair: (Vec3, Vec3),
    pub ok: bool,
}

/// Samples pairs in `[-10, 10]^3` and records the worst scaled margin.
pub fn vector_inequality_check(r: f64, n_samples: usize, seed: u64) -> InequalityVerdict {
    assert!(r > 1.0 && r <= 2.0, "exponent must lie in (1, 2], got {r}");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut verdict = InequalityVerdict {
        r,
        samples: 0,
        worst_margin: f64::INFINITY,
        worst_pair: ([0.0; 3], [0.0; 3]),
        ok: true,
    };
    while verdict.samples < n_samples {
        let a: Vec3 = std::array::from_fn(|_| rng.random_range(-10.0..=10.0));
        let b: Vec3 = std::array::from_fn(|_| rng.random_range(-10.0..=10.0));
        if norm(&a) + norm(&b) == 0.0 {
            continue;
        }
        verdict.samples += 1;
        let (lhs, rhs, scale) = inequality_sides(&a, &b, r);
        let margin = (lhs - rhs) / scale;
        if margin < verdict.worst_margin {
            verdict.worst_margin = margin;
            verdict.worst_pair = (a, b);
        }
    }
    verdict.ok = verdict.worst_margin >= -1e-12;
    verdict
}
