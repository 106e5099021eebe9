//! Independent oracles for the closed-form and exact routes.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use realroots::geometry::{convex_hull, unit_ball_volume, LatticePolytope};
use realroots::lattice::BodySpec;
use realroots::mixedvol::mixed_volume_polytopes;
use realroots::moments::{beta_closed_form, limit_moment_matrix};
use realroots::rational::{int, to_f64, Rational};

fn poly(points: &[&[i64]]) -> LatticePolytope {
    convex_hull(&points.iter().map(|p| p.iter().map(|&x| int(x)).collect()).collect::<Vec<_>>()).unwrap()
}

/// Rejection-sampled second moments `E[x xᵀ]` of the uniform measure on `p`.
fn sampled_moments(p: &LatticePolytope, samples: usize, seed: u64) -> (Vec<f64>, Vec<f64>) {
    let n = p.dim();
    let verts = p.vertices_f64();
    let lo: Vec<f64> = (0..n).map(|k| verts.iter().map(|v| v[k]).fold(f64::INFINITY, f64::min)).collect();
    let hi: Vec<f64> = (0..n).map(|k| verts.iter().map(|v| v[k]).fold(f64::NEG_INFINITY, f64::max)).collect();
    let planes: Vec<(Vec<f64>, f64)> =
        p.halfspaces().iter().map(|h| (h.normal.iter().map(to_f64).collect(), to_f64(&h.offset))).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut sum = vec![0.0; n * n];
    let mut sum_sq = vec![0.0; n * n];
    let mut accepted = 0usize;
    while accepted < samples {
        let x: Vec<f64> = (0..n).map(|k| rng.random_range(lo[k]..hi[k])).collect();
        if planes.iter().all(|(a, b)| a.iter().zip(&x).map(|(a, x)| a * x).sum::<f64>() <= *b) {
            accepted += 1;
            for i in 0..n {
                for j in 0..n {
                    let v = x[i] * x[j];
                    sum[i * n + j] += v;
                    sum_sq[i * n + j] += v * v;
                }
            }
        }
    }
    let mean: Vec<f64> = sum.iter().map(|s| s / samples as f64).collect();
    let se = sum_sq
        .iter()
        .zip(&mean)
        .map(|(s, m)| ((s / samples as f64 - m * m) / samples as f64).sqrt())
        .collect();
    (mean, se)
}

#[test]
fn simplex_fan_moments_match_rejection_sampling() {
    let bodies = [
        poly(&[&[3, 1], &[-3, -1], &[1, 2], &[-1, -2], &[2, -2], &[-2, 2]]),
        poly(&[&[1, 0, 0], &[-1, 0, 0], &[0, 2, 0], &[0, -2, 0], &[1, 1, 3], &[-1, -1, -3]]),
        poly(&[&[2, 1, 0], &[-2, -1, 0], &[0, 1, 1], &[0, -1, -1], &[1, -1, 1], &[-1, 1, -1], &[1, 1, 1], &[-1, -1, -1]]),
    ];
    for (k, p) in bodies.iter().enumerate() {
        let spec = BodySpec::polytope(p.vertices().to_vec());
        let exact = limit_moment_matrix(&spec).unwrap();
        let (mean, se) = sampled_moments(p, 1_000_000, 40 + k as u64);
        let n = p.dim();
        for i in 0..n {
            for j in 0..n {
                let diff = exact.shape()[(i, j)] - mean[i * n + j];
                assert!(diff.abs() <= 5.0 * se[i * n + j] + 1e-12, "body {k} entry ({i},{j}): diff {diff}, se {}", se[i * n + j]);
            }
        }
    }
}

#[test]
fn ball_second_moment_matches_rejection_sampling() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for n in 1..=4 {
        let exact = limit_moment_matrix(&BodySpec::ball(int(1), n)).unwrap().shape()[(0, 0)];
        let (mut acc, mut acc_sq, mut count) = (0.0, 0.0, 0usize);
        while count < 1_000_000 {
            let x: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
            if x.iter().map(|v| v * v).sum::<f64>() <= 1.0 {
                acc += x[0] * x[0];
                acc_sq += x[0].powi(4);
                count += 1;
            }
        }
        let mean = acc / count as f64;
        let se = ((acc_sq / count as f64 - mean * mean) / count as f64).sqrt();
        assert!((exact - mean).abs() < 5.0 * se, "n = {n}: {exact} vs {mean} ± {se}");
    }
}

#[test]
fn beta_closed_form_matches_midpoint_rule() {
    let nodes = 1_000_000;
    for n in 1..=20 {
        let h = 2.0 / nodes as f64;
        let sum: f64 = (0..nodes)
            .map(|k| {
                let x = -1.0 + (k as f64 + 0.5) * h;
                x * x * (1.0 - x * x).powf((n as f64 - 1.0) / 2.0)
            })
            .sum();
        let midpoint = sum * h;
        assert!((midpoint - beta_closed_form(n)).abs() < 1e-8, "n = {n}: {midpoint} vs {}", beta_closed_form(n));
    }
}

#[test]
fn ball_volume_matches_gamma_formula() {
    for n in 1..=10 {
        let half = n as f64 / 2.0;
        let gamma = gamma_half_integer(half + 1.0);
        assert!((unit_ball_volume(n) - PI.powf(half) / gamma).abs() < 1e-12);
    }
}

/// Γ(x) for x a positive multiple of 1/2, by the defining recurrence.
fn gamma_half_integer(x: f64) -> f64 {
    if (x - 1.0).abs() < 1e-12 {
        1.0
    } else if (x - 0.5).abs() < 1e-12 {
        PI.sqrt()
    } else {
        (x - 1.0) * gamma_half_integer(x - 1.0)
    }
}

/// `V(Q, P) = (1/2) Σ_{edges e of P} h_Q(u_e) |e|`.
fn edge_mixed_area(p: &LatticePolytope, q: &LatticePolytope) -> f64 {
    let v = p.vertices_f64();
    (0..v.len())
        .map(|i| {
            let (a, b) = (&v[i], &v[(i + 1) % v.len()]);
            let (dx, dy) = (b[0] - a[0], b[1] - a[1]);
            let len = dx.hypot(dy);
            q.support(&[dy / len, -dx / len]) * len
        })
        .sum::<f64>()
        / 2.0
}

/// `V(Q, P, P) = (1/3) Σ_{facets F of P} h_Q(u_F) area(F)`.
fn facet_mixed_volume(p: &LatticePolytope, q: &LatticePolytope) -> f64 {
    let v = p.vertices_f64();
    p.facets()
        .iter()
        .map(|f| {
            let mut twice = [0.0; 3];
            for t in 0..f.vertices.len() {
                let (a, b) = (&v[f.vertices[t]], &v[f.vertices[(t + 1) % f.vertices.len()]]);
                twice[0] += a[1] * b[2] - a[2] * b[1];
                twice[1] += a[2] * b[0] - a[0] * b[2];
                twice[2] += a[0] * b[1] - a[1] * b[0];
            }
            let area = 0.5 * twice.iter().map(|x| x * x).sum::<f64>().sqrt();
            let normal: Vec<f64> = f.normal.iter().map(to_f64).collect();
            let len = normal.iter().map(|x| x * x).sum::<f64>().sqrt();
            let unit: Vec<f64> = normal.iter().map(|x| x / len).collect();
            q.support(&unit) * area
        })
        .sum::<f64>()
        / 3.0
}

#[test]
fn polarization_matches_boundary_formulas() {
    let planar = [
        poly(&[&[1, 0], &[-1, 0], &[0, 1], &[0, -1]]),
        poly(&[&[2, 1], &[-2, -1], &[1, -1], &[-1, 1]]),
        poly(&[&[3, 0], &[-3, 0], &[1, 2], &[-1, -2]]),
        poly(&[&[1, 1], &[-1, -1]]),
    ];
    for p in &planar[..3] {
        for q in &planar {
            let exact = to_f64(&mixed_volume_polytopes(&[q.clone(), p.clone()]).unwrap());
            assert!((exact - edge_mixed_area(p, q)).abs() < 1e-12, "{exact} vs {}", edge_mixed_area(p, q));
        }
    }
    let solid = [
        poly(&[&[1, 0, 0], &[-1, 0, 0], &[0, 1, 0], &[0, -1, 0], &[0, 0, 1], &[0, 0, -1]]),
        poly(&[&[1, 1, 0], &[-1, -1, 0], &[1, -1, 1], &[-1, 1, -1], &[0, 1, 2], &[0, -1, -2]]),
        poly(&[&[2, 0, 1], &[-2, 0, -1]]),
    ];
    for p in &solid[..2] {
        for q in &solid {
            let exact = to_f64(&mixed_volume_polytopes(&[q.clone(), p.clone(), p.clone()]).unwrap());
            let oracle = facet_mixed_volume(p, q);
            assert!((exact - oracle).abs() < 1e-10 * exact.abs().max(1.0), "{exact} vs {oracle}");
        }
    }
    // Unit segments along the axes span a unit square: V = 1/2.
    let e1 = poly(&[&[0, 0], &[1, 0]]);
    let e2 = poly(&[&[0, 0], &[0, 1]]);
    assert_eq!(mixed_volume_polytopes(&[e1, e2]).unwrap(), Rational::new(1, 2));
}
