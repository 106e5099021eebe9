//! Mixed volumes of polytopes and ellipsoids, and the root statistics built on them.
//!
//! * expected real roots: `n!·V(ell Λ_1, …, ell Λ_n)`
//! * BKK count (generic complex roots): `n!·V(conv Λ_1, …, conv Λ_n)`
//! * expected real fraction: their ratio.
//!
//! Polytope mixed volumes are exact (polarization over `2ⁿ − 1` Minkowski
//! sums). Ellipsoid mixed volumes come from exact homothety shortcuts, from a
//! deterministic sphere quadrature, or from the Gaussian determinant
//! identity `V(E_1, …, E_n) = (κ_n/d_n)·E|det(X_1, …, X_n)|` with
//! `X_i ~ N(0, M_i)` and `d_n = E|det G|` for a standard Gaussian matrix.

use std::f64::consts::PI;

use nalgebra::{DMatrix, Matrix3, SymmetricEigen, Vector3};
use num_traits::Zero;
use rand_distr::{Distribution, StandardNormal};
use rustfft::num_complex::Complex;
use rustfft::FftPlanner;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{ellipsoid_volume, minkowski_sum, unit_ball_volume, Ellipsoid, LatticePolytope};
use crate::lattice::{BodySpec, SupportSet};
use crate::moments::{limit_moment_matrix, moment_matrix};
use crate::quadrature::gauss_legendre;
use crate::rational::{to_f64, Rational};
use crate::stats::{run_workers, McConfig, MVEstimate, RunningStats};

/// Minimum sample count for the Gaussian determinant estimator.
pub const MIN_ELLIPSOID_SAMPLES: usize = 10_000;

fn factorial(n: usize) -> u64 {
    (1..=n as u64).product()
}

fn check_dims(dims: impl Iterator<Item = usize>, n: usize) -> Result<()> {
    for d in dims {
        if d != n {
            return Err(Error::DimensionMismatch { expected: n, found: d });
        }
    }
    Ok(())
}

/// `V(P_1, …, P_n) = (1/n!) Σ_{∅≠S⊆[n]} (−1)^{n−|S|} vol(Σ_{i∈S} P_i)`, exactly.
pub fn mixed_volume_polytopes(polys: &[LatticePolytope]) -> Result<Rational> {
    let n = polys.len();
    if !(1..=3).contains(&n) {
        return Err(Error::UnsupportedDimension(n));
    }
    check_dims(polys.iter().map(LatticePolytope::dim), n)?;
    let mut total = Rational::zero();
    for mask in 1u32..(1 << n) {
        let mut members = (0..n).filter(|i| mask >> i & 1 == 1);
        let mut sum = polys[members.next().unwrap()].clone();
        for i in members {
            sum = minkowski_sum(&sum, &polys[i])?;
        }
        let vol = sum.volume();
        if (n as u32 - mask.count_ones()).is_multiple_of(2) {
            total += vol;
        } else {
            total -= vol;
        }
    }
    Ok(total / Rational::from_integer(factorial(n) as i128))
}

/// `d_n = E|det G|` for an n×n matrix of iid standard normals:
/// `Π_{k=1}^{n} √2 Γ((k+1)/2)/Γ(k/2)`.
pub fn gaussian_det_constant(n: usize) -> f64 {
    // g_k = Γ((k+1)/2)/Γ(k/2): g_1 = 1/√π, g_2 = √π/2, g_{k+2} = g_k (k+1)/k.
    let mut g = [1.0 / PI.sqrt(), PI.sqrt() / 2.0];
    let mut d = 1.0;
    for k in 1..=n {
        let slot = (k + 1) % 2;
        if k > 2 {
            g[slot] *= (k - 1) as f64 / (k - 2) as f64;
        }
        d *= 2f64.sqrt() * g[slot];
    }
    d
}

/// Exact value when all shapes are positive multiples of one matrix:
/// `V(c_1 E, …, c_n E) = vol(E)·Π sqrt(c_i)`.
pub fn mixed_volume_homothetic(ells: &[Ellipsoid]) -> Option<f64> {
    let reference = ells.iter().max_by(|a, b| a.shape().trace().total_cmp(&b.shape().trace()))?;
    let tr = reference.shape().trace();
    if tr <= 0.0 {
        return Some(0.0);
    }
    let mut product = 1.0;
    for e in ells {
        let c = e.shape().trace() / tr;
        let scale = e.shape().amax().max(reference.shape().amax() * c).max(f64::MIN_POSITIVE);
        if (e.shape() - reference.shape() * c).amax() > 1e-12 * scale {
            return None;
        }
        product *= c.sqrt();
    }
    Some(ellipsoid_volume(reference) * product)
}

fn ellipsoid_dims(ells: &[Ellipsoid]) -> Result<usize> {
    let n = ells.len();
    if n == 0 {
        return Err(Error::Empty);
    }
    check_dims(ells.iter().map(Ellipsoid::dim), n)?;
    Ok(n)
}

fn abs_det(cols: &[Vec<f64>]) -> f64 {
    match cols.len() {
        1 => cols[0][0].abs(),
        2 => (cols[0][0] * cols[1][1] - cols[0][1] * cols[1][0]).abs(),
        3 => {
            let (a, b, c) = (&cols[0], &cols[1], &cols[2]);
            (a[0] * (b[1] * c[2] - b[2] * c[1]) - a[1] * (b[0] * c[2] - b[2] * c[0])
                + a[2] * (b[0] * c[1] - b[1] * c[0]))
                .abs()
        }
        n => DMatrix::from_fn(n, n, |i, j| cols[j][i]).determinant().abs(),
    }
}

/// Mixed volume of ellipsoids; exact for homothetic inputs, otherwise a
/// Gaussian determinant Monte Carlo estimate.
pub fn mixed_volume_ellipsoids(ells: &[Ellipsoid], cfg: &McConfig) -> Result<MVEstimate> {
    ellipsoid_dims(ells)?;
    if let Some(v) = mixed_volume_homothetic(ells) {
        return Ok(MVEstimate::exact(v, cfg.seed));
    }
    mixed_volume_ellipsoids_mc(ells, cfg)
}

/// The Gaussian determinant estimator without shortcuts.
pub fn mixed_volume_ellipsoids_mc(ells: &[Ellipsoid], cfg: &McConfig) -> Result<MVEstimate> {
    let n = ellipsoid_dims(ells)?;
    if cfg.samples < MIN_ELLIPSOID_SAMPLES {
        return Err(Error::InvalidInput(format!(
            "ellipsoid mixed volumes need at least {MIN_ELLIPSOID_SAMPLES} samples, got {}",
            cfg.samples
        )));
    }
    let factors: Vec<DMatrix<f64>> = ells.iter().map(Ellipsoid::sqrt_factor).collect();
    let parts = run_workers(cfg, |_, rng, count| {
        let mut stats = RunningStats::default();
        let mut z = vec![0.0; n];
        let mut cols = vec![vec![0.0; n]; n];
        for _ in 0..count {
            for (col, l) in cols.iter_mut().zip(&factors) {
                for zi in z.iter_mut() {
                    *zi = StandardNormal.sample(rng);
                }
                for (r, c) in col.iter_mut().enumerate() {
                    *c = (0..n).map(|k| l[(r, k)] * z[k]).sum();
                }
            }
            stats.push(abs_det(&cols));
        }
        Ok(stats)
    })?;
    let mut all = RunningStats::default();
    parts.iter().for_each(|p| all.merge(p));
    Ok(all.estimate(cfg.seed).scaled(unit_ball_volume(n) / gaussian_det_constant(n)))
}

/// Deterministic mixed volume for n ≤ 3.
///
/// Uses the homothety shortcut when it applies; otherwise integrates
/// `(1/n) ∫_{S^{n-1}} h_1 · D(∇²h_2, …, ∇²h_n)` where `D` is the mixed
/// discriminant of support-function Hessians on the tangent space (for an
/// ellipse, `h + h'' = det M / h³`). Flat ellipsoids are moved into the
/// first slot; two or more flat ellipsoids in 3-D fall back to a
/// fixed-seed Monte Carlo run with 10⁶ samples.
pub fn mixed_volume_ellipsoids_deterministic(ells: &[Ellipsoid]) -> Result<f64> {
    let n = ellipsoid_dims(ells)?;
    if let Some(v) = mixed_volume_homothetic(ells) {
        return Ok(v);
    }
    let flat = |e: &Ellipsoid| e.rank(1e-12) < n;
    let mut order: Vec<&Ellipsoid> = ells.iter().collect();
    order.sort_by_key(|e| !flat(e));
    let flats = order.iter().filter(|e| flat(e)).count();
    match n {
        2 if flats == 2 => {
            let v1 = rank_one_generator(order[0]);
            let v2 = rank_one_generator(order[1]);
            Ok(2.0 * (v1[0] * v2[1] - v1[1] * v2[0]).abs())
        }
        2 => Ok(mixed_area_quadrature(order[0], order[1])),
        3 if flats <= 1 => Ok(mixed_volume_sphere_quadrature(order[0], order[1], order[2])),
        3 => Ok(mixed_volume_ellipsoids_mc(ells, &McConfig::new(1_000_000, 0))?.value),
        _ => Err(Error::UnsupportedDimension(n)),
    }
}

fn rank_one_generator(e: &Ellipsoid) -> Vec<f64> {
    let eig = SymmetricEigen::new(e.shape().clone());
    let i = eig.eigenvalues.imax();
    let s = eig.eigenvalues[i].max(0.0).sqrt();
    eig.eigenvectors.column(i).iter().map(|x| x * s).collect()
}

/// `(1/2) ∫ h_1 (det M_2 / h_2³) dθ`, trapezoid rule doubled until converged.
fn mixed_area_quadrature(e1: &Ellipsoid, e2: &Ellipsoid) -> f64 {
    let det2 = e2.determinant();
    let eval = |k: usize| {
        let s: f64 = (0..k)
            .map(|i| {
                let t = 2.0 * PI * i as f64 / k as f64;
                let u = [t.cos(), t.sin()];
                let h2 = e2.support(&u);
                e1.support(&u) * det2 / (h2 * h2 * h2)
            })
            .sum();
        0.5 * s * 2.0 * PI / k as f64
    };
    let mut k = 512;
    let mut prev = eval(k);
    while k < 1 << 22 {
        k *= 2;
        let next = eval(k);
        if (next - prev).abs() <= 1e-14 * next.abs() {
            return next;
        }
        prev = next;
    }
    prev
}

/// Hessian of `h(x) = sqrt(xᵀMx)` at a unit vector, restricted to `u^⊥`.
fn tangent_hessian(m: &Matrix3<f64>, u: &Vector3<f64>, e1: &Vector3<f64>, e2: &Vector3<f64>) -> [[f64; 2]; 2] {
    let g = m * u;
    let h = u.dot(&g).max(0.0).sqrt();
    let h3 = h * h * h;
    let entry = |a: &Vector3<f64>, b: &Vector3<f64>| (a.dot(&(m * b)) * h * h - a.dot(&g) * b.dot(&g)) / h3;
    [[entry(e1, e1), entry(e1, e2)], [entry(e2, e1), entry(e2, e2)]]
}

fn mixed_volume_sphere_quadrature(k1: &Ellipsoid, k2: &Ellipsoid, k3: &Ellipsoid) -> f64 {
    let to3 = |e: &Ellipsoid| Matrix3::from_fn(|i, j| e.shape()[(i, j)]);
    let (m2, m3) = (to3(k2), to3(k3));
    let eval = |nz: usize, nphi: usize| {
        let (zs, ws) = gauss_legendre(nz);
        let mut total = 0.0;
        for (&z, &w) in zs.iter().zip(&ws) {
            let r = (1.0 - z * z).max(0.0).sqrt();
            let mut ring = 0.0;
            for j in 0..nphi {
                let phi = 2.0 * PI * (j as f64 + 0.5) / nphi as f64;
                let (s, c) = phi.sin_cos();
                let u = Vector3::new(r * c, r * s, z);
                let e1 = Vector3::new(-s, c, 0.0);
                let e2 = Vector3::new(-z * c, -z * s, r);
                let a = tangent_hessian(&m2, &u, &e1, &e2);
                let b = tangent_hessian(&m3, &u, &e1, &e2);
                let mixed = 0.5 * (a[0][0] * b[1][1] + a[1][1] * b[0][0] - a[0][1] * b[1][0] - a[1][0] * b[0][1]);
                ring += k1.support(u.as_slice()) * mixed;
            }
            total += w * ring * 2.0 * PI / nphi as f64;
        }
        total / 3.0
    };
    let (mut nz, mut nphi) = (32, 64);
    let mut prev = eval(nz, nphi);
    while nz < 2048 {
        nz *= 2;
        nphi *= 2;
        let next = eval(nz, nphi);
        if (next - prev).abs() <= 1e-13 * next.abs() {
            return next;
        }
        prev = next;
    }
    prev
}

/// Independent 2-D check: `V(E_1, E_2) = (area(E_1+E_2) − area E_1 − area E_2)/2`,
/// each area from `(1/2) ∫ (h² − h'²) dθ` with `h'` by spectral differentiation.
pub fn mixed_volume_ellipsoids_oracle_2d(e1: &Ellipsoid, e2: &Ellipsoid) -> Result<f64> {
    if e1.dim() != 2 || e2.dim() != 2 {
        return Err(Error::DimensionMismatch { expected: 2, found: if e1.dim() != 2 { e1.dim() } else { e2.dim() } });
    }
    const NODES: usize = 8192;
    let angles: Vec<[f64; 2]> = (0..NODES)
        .map(|i| {
            let t = 2.0 * PI * i as f64 / NODES as f64;
            [t.cos(), t.sin()]
        })
        .collect();
    let h1: Vec<f64> = angles.iter().map(|u| e1.support(u)).collect();
    let h2: Vec<f64> = angles.iter().map(|u| e2.support(u)).collect();
    let sum: Vec<f64> = h1.iter().zip(&h2).map(|(a, b)| a + b).collect();
    let area = |h: &[f64]| {
        let dh = spectral_derivative(h);
        let s: f64 = h.iter().zip(&dh).map(|(h, d)| h * h - d * d).sum();
        0.5 * s * 2.0 * PI / NODES as f64
    };
    Ok((area(&sum) - area(&h1) - area(&h2)) / 2.0)
}

fn spectral_derivative(h: &[f64]) -> Vec<f64> {
    let n = h.len();
    let mut planner = FftPlanner::<f64>::new();
    let mut buf: Vec<Complex<f64>> = h.iter().map(|&x| Complex::new(x, 0.0)).collect();
    planner.plan_fft_forward(n).process(&mut buf);
    for (k, c) in buf.iter_mut().enumerate() {
        let freq = if k < n / 2 {
            k as f64
        } else if k == n / 2 {
            0.0
        } else {
            k as f64 - n as f64
        };
        *c *= Complex::new(0.0, freq);
    }
    planner.plan_fft_inverse(n).process(&mut buf);
    buf.iter().map(|c| c.re / n as f64).collect()
}

fn support_dims(supports: &[SupportSet]) -> Result<usize> {
    let n = supports.len();
    if n == 0 {
        return Err(Error::Empty);
    }
    if n > 3 {
        return Err(Error::UnsupportedDimension(n));
    }
    check_dims(supports.iter().map(SupportSet::dim), n)?;
    Ok(n)
}

/// Expected number of real roots, `n!·V(ell Λ_1, …, ell Λ_n)`.
pub fn expected_real_roots(supports: &[SupportSet], cfg: &McConfig) -> Result<MVEstimate> {
    let n = support_dims(supports)?;
    let ells: Vec<Ellipsoid> = supports.iter().map(moment_matrix).collect();
    Ok(mixed_volume_ellipsoids(&ells, cfg)?.scaled(factorial(n) as f64))
}

/// The same quantity through the deterministic route (no sampling).
pub fn expected_real_roots_deterministic(supports: &[SupportSet]) -> Result<f64> {
    let n = support_dims(supports)?;
    let ells: Vec<Ellipsoid> = supports.iter().map(moment_matrix).collect();
    Ok(factorial(n) as f64 * mixed_volume_ellipsoids_deterministic(&ells)?)
}

/// Generic number of complex roots in the torus, `n!·V(conv Λ_1, …, conv Λ_n)`.
pub fn bkk_count(supports: &[SupportSet]) -> Result<u64> {
    let n = support_dims(supports)?;
    let polys = supports.iter().map(SupportSet::newton_polytope).collect::<Result<Vec<_>>>()?;
    let count = mixed_volume_polytopes(&polys)? * Rational::from_integer(factorial(n) as i128);
    if !count.is_integer() {
        return Err(Error::InvalidInput(format!("non-integral BKK count {count} for lattice polytopes")));
    }
    u64::try_from(count.to_integer()).map_err(|_| Error::InvalidInput("negative BKK count".into()))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RootStatistics {
    /// Expected real roots per system.
    pub expected_real: f64,
    pub expected_real_std_error: f64,
    /// Generic complex roots per system.
    pub bkk: u64,
    /// `expected_real / bkk`.
    pub fraction: f64,
}

pub fn real_fraction(supports: &[SupportSet], cfg: &McConfig) -> Result<RootStatistics> {
    let bkk = bkk_count(supports)?;
    if bkk == 0 {
        return Err(Error::ZeroBkk);
    }
    let real = expected_real_roots(supports, cfg)?;
    Ok(RootStatistics {
        expected_real: real.value,
        expected_real_std_error: real.std_error,
        bkk,
        fraction: real.value / bkk as f64,
    })
}

/// `V(B_R, …, B_R, P, …)` style denominators for mixed ball/polytope tuples.
fn body_mixed_volume(bodies: &[BodySpec]) -> Result<f64> {
    let n = bodies.len();
    let balls: Vec<f64> = bodies
        .iter()
        .filter_map(|b| match b {
            BodySpec::Ball { radius, .. } => Some(to_f64(&radius.0)),
            _ => None,
        })
        .collect();
    let polys: Vec<LatticePolytope> = bodies.iter().filter_map(|b| b.to_polytope().transpose()).collect::<Result<_>>()?;
    if balls.len() == n {
        return Ok(unit_ball_volume(n) * balls.iter().product::<f64>());
    }
    if polys.len() == n {
        return Ok(to_f64(&mixed_volume_polytopes(&polys)?));
    }
    if n == 2 {
        // V(B_R, P) = (1/2) Σ_edges h_B(u_e)|e| = R · perimeter(P) / 2.
        let p = &polys[0];
        let perimeter = match p.intrinsic_dim() {
            2 => {
                let v = p.vertices_f64();
                (0..v.len())
                    .map(|i| {
                        let (a, b) = (&v[i], &v[(i + 1) % v.len()]);
                        ((a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2)).sqrt()
                    })
                    .sum()
            }
            1 => {
                let v = p.vertices_f64();
                2.0 * ((v[0][0] - v[1][0]).powi(2) + (v[0][1] - v[1][1]).powi(2)).sqrt()
            }
            _ => 0.0,
        };
        return Ok(balls[0] * perimeter / 2.0);
    }
    Err(Error::Unsupported("mixed ball/polytope tuples are only supported for n <= 2".into()))
}

/// Limit of the real fraction under dilation:
/// `V(ell Δ_1, …, ell Δ_n) / V(Δ_1, …, Δ_n)`.
pub fn limit_real_fraction(bodies: &[BodySpec]) -> Result<f64> {
    let n = bodies.len();
    if !(1..=3).contains(&n) {
        return Err(Error::UnsupportedDimension(n));
    }
    check_dims(bodies.iter().map(BodySpec::dim), n)?;
    let ells = bodies.iter().map(limit_moment_matrix).collect::<Result<Vec<_>>>()?;
    let numerator = mixed_volume_ellipsoids_deterministic(&ells)?;
    let denominator = body_mixed_volume(bodies)?;
    if denominator <= 0.0 {
        return Err(Error::ZeroBkk);
    }
    Ok(numerator / denominator)
}

/// Gaps of the two Alexandrov–Fenchel consequences for expected root counts `𝔐`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AfGaps {
    /// `𝔐² − 𝔐(…, Λ_{n−1}, Λ_{n−1})·𝔐(…, Λ_n, Λ_n)`.
    pub first: f64,
    /// `𝔐ⁿ − Π 𝔐(Λ_i)`.
    pub second: f64,
    pub first_scale: f64,
    pub second_scale: f64,
}

impl AfGaps {
    pub const REL_TOL: f64 = 1e-6;

    pub fn holds(&self) -> bool {
        self.first >= -Self::REL_TOL * self.first_scale && self.second >= -Self::REL_TOL * self.second_scale
    }
}

pub fn af_inequality_gap(supports: &[SupportSet]) -> Result<AfGaps> {
    let n = support_dims(supports)?;
    if n < 2 {
        return Err(Error::InvalidInput("AF gaps need n >= 2".into()));
    }
    let ells: Vec<Ellipsoid> = supports.iter().map(moment_matrix).collect();
    let nf = factorial(n) as f64;
    let roots = |idx: &[usize]| -> Result<f64> {
        let picked: Vec<Ellipsoid> = idx.iter().map(|&i| ells[i].clone()).collect();
        Ok(nf * mixed_volume_ellipsoids_deterministic(&picked)?)
    };
    let all: Vec<usize> = (0..n).collect();
    let m = roots(&all)?;
    let mut left = all.clone();
    left[n - 1] = n - 2;
    let mut right = all.clone();
    right[n - 2] = n - 1;
    let (a, b) = (roots(&left)?, roots(&right)?);
    let diag: Vec<f64> = (0..n).map(|i| roots(&vec![i; n])).collect::<Result<_>>()?;
    let prod: f64 = diag.iter().product();
    let mn = m.powi(n as i32);
    Ok(AfGaps {
        first: m * m - a * b,
        second: mn - prod,
        first_scale: (m * m).max(a * b).max(f64::MIN_POSITIVE),
        second_scale: mn.max(prod).max(f64::MIN_POSITIVE),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::convex_hull;
    use crate::lattice::validate_support;
    use crate::rational::int;
    use approx::assert_relative_eq;

    fn cross() -> SupportSet {
        validate_support(vec![vec![0, 0], vec![1, 0], vec![-1, 0], vec![0, 1], vec![0, -1]]).unwrap()
    }

    fn poly(raw: &[&[i64]]) -> LatticePolytope {
        convex_hull(&raw.iter().map(|p| p.iter().map(|&x| int(x)).collect()).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn det_constant_pinned_by_trivial_cases() {
        assert_relative_eq!(gaussian_det_constant(1), (2.0 / PI).sqrt(), epsilon = 1e-15);
        assert_relative_eq!(gaussian_det_constant(2), 1.0, epsilon = 1e-15);
        // n!κ_n/d_n = (2π)^{n/2}
        for n in 1..=6 {
            let lhs = factorial(n) as f64 * unit_ball_volume(n) / gaussian_det_constant(n);
            assert_relative_eq!(lhs, (2.0 * PI).powf(n as f64 / 2.0), max_relative = 1e-13);
        }
    }

    #[test]
    fn polytope_mixed_volume_examples() {
        let seg = poly(&[&[-3], &[3]]);
        assert_eq!(mixed_volume_polytopes(&[seg]).unwrap(), int(6));
        let e1 = poly(&[&[0, 0], &[1, 0]]);
        let e2 = poly(&[&[0, 0], &[0, 1]]);
        assert_eq!(mixed_volume_polytopes(&[e1, e2]).unwrap(), Rational::new(1, 2));
        let sq = poly(&[&[1, 1], &[1, -1], &[-1, 1], &[-1, -1]]);
        assert_eq!(mixed_volume_polytopes(&[sq.clone(), sq]).unwrap(), int(4));
    }

    #[test]
    fn ellipsoid_exact_shortcuts() {
        let cfg = McConfig::new(MIN_ELLIPSOID_SAMPLES, 1);
        let m = 5.0 * 6.0 / 3.0;
        let seg = Ellipsoid::from_diagonal(&[m]).unwrap();
        let v = mixed_volume_ellipsoids(&[seg], &cfg).unwrap();
        assert!(v.is_exact());
        assert_relative_eq!(v.value, 2.0 * m.sqrt());
        let disk = Ellipsoid::ball(2, 1.0);
        assert_relative_eq!(mixed_volume_ellipsoids(&[disk.clone(), disk.clone()], &cfg).unwrap().value, PI);
        let big = Ellipsoid::ball(2, 3.0);
        assert_relative_eq!(mixed_volume_ellipsoids(&[disk, big], &cfg).unwrap().value, 3.0 * PI, epsilon = 1e-12);
    }

    #[test]
    fn sample_floor_enforced() {
        let a = Ellipsoid::from_diagonal(&[4.0, 1.0]).unwrap();
        let b = Ellipsoid::ball(2, 1.0);
        assert!(mixed_volume_ellipsoids(&[a, b], &McConfig::new(100, 0)).is_err());
    }

    #[test]
    fn deterministic_routes_agree_with_oracle() {
        let a = Ellipsoid::from_diagonal(&[4.0, 1.0]).unwrap();
        let b = Ellipsoid::ball(2, 1.0);
        let det = mixed_volume_ellipsoids_deterministic(&[a.clone(), b.clone()]).unwrap();
        let oracle = mixed_volume_ellipsoids_oracle_2d(&a, &b).unwrap();
        assert_relative_eq!(det, oracle, max_relative = 1e-9);
        // V(E, B) = half the perimeter of E: semi-axes 2 and 1.
        assert_relative_eq!(det, 4.844_224_110_273_839, max_relative = 1e-12);
        let est = mixed_volume_ellipsoids(&[a, b], &McConfig::new(200_000, 5)).unwrap();
        assert!((est.value - det).abs() < 4.0 * est.std_error, "{est:?} vs {det}");
    }

    #[test]
    fn flat_ellipsoids_in_the_plane() {
        let s1 = Ellipsoid::from_diagonal(&[1.0, 0.0]).unwrap();
        let s2 = Ellipsoid::from_diagonal(&[0.0, 4.0]).unwrap();
        // Segments [-1,1]e1 and [-2,2]e2: V = area(sum)/2 = 8/2.
        assert_relative_eq!(mixed_volume_ellipsoids_deterministic(&[s1.clone(), s2]).unwrap(), 4.0, epsilon = 1e-12);
        let disk = Ellipsoid::ball(2, 1.0);
        // V(B, [-1,1]e1) = length = 2.
        assert_relative_eq!(mixed_volume_ellipsoids_deterministic(&[s1, disk]).unwrap(), 2.0, max_relative = 1e-10);
    }

    #[test]
    fn sphere_quadrature_matches_homothetic_and_mc() {
        let a = Ellipsoid::from_diagonal(&[1.0, 2.0, 3.0]).unwrap();
        let quad = mixed_volume_sphere_quadrature(&a, &a, &a);
        assert_relative_eq!(quad, ellipsoid_volume(&a), max_relative = 1e-11);
        let b = Ellipsoid::from_diagonal(&[2.0, 0.5, 1.0]).unwrap();
        let c = Ellipsoid::ball(3, 1.2);
        let det = mixed_volume_ellipsoids_deterministic(&[a.clone(), b.clone(), c.clone()]).unwrap();
        let perm = mixed_volume_ellipsoids_deterministic(&[c.clone(), a.clone(), b.clone()]).unwrap();
        assert_relative_eq!(det, perm, max_relative = 1e-10);
        let est = mixed_volume_ellipsoids_mc(&[a, b, c], &McConfig::new(400_000, 11)).unwrap();
        assert!((est.value - det).abs() < 4.0 * est.std_error, "{est:?} vs {det}");
    }

    #[test]
    fn root_count_examples() {
        let cfg = McConfig::new(MIN_ELLIPSOID_SAMPLES, 3);
        let v = expected_real_roots(&[SupportSet::interval(5)], &cfg).unwrap();
        assert_relative_eq!(v.value, 2.0 * 10f64.sqrt(), epsilon = 1e-12);
        let pair = validate_support(vec![vec![-4], vec![4]]).unwrap();
        assert_relative_eq!(expected_real_roots(std::slice::from_ref(&pair), &cfg).unwrap().value, 8.0);
        let v = expected_real_roots(&[cross(), cross()], &cfg).unwrap();
        assert!(v.is_exact());
        assert_relative_eq!(v.value, 4.0 * PI / 5.0, epsilon = 1e-12);

        assert_eq!(bkk_count(&[SupportSet::interval(5)]).unwrap(), 10);
        assert_eq!(bkk_count(&[cross(), cross()]).unwrap(), 4);
        let sx = validate_support(vec![vec![1, 0], vec![-1, 0]]).unwrap();
        let sy = validate_support(vec![vec![0, 1], vec![0, -1]]).unwrap();
        assert_eq!(bkk_count(&[sx.clone(), sy]).unwrap(), 4);
        assert!(matches!(real_fraction(&[sx.clone(), sx], &cfg), Err(Error::ZeroBkk)));

        let stats = real_fraction(&[pair], &cfg).unwrap();
        assert_eq!(stats.fraction, 1.0);
        let stats = real_fraction(&[cross(), cross()], &cfg).unwrap();
        assert_relative_eq!(stats.fraction, PI / 5.0, epsilon = 1e-12);
    }

    #[test]
    fn limit_fractions() {
        let f = limit_real_fraction(&[BodySpec::ball(int(1), 1)]).unwrap();
        assert_relative_eq!(f, 1.0 / 3f64.sqrt(), epsilon = 1e-15);
        let disk = BodySpec::ball(int(1), 2);
        assert_relative_eq!(limit_real_fraction(&[disk.clone(), disk.clone()]).unwrap(), 0.25, epsilon = 1e-14);
        let sq = BodySpec::cube(int(1), 2);
        assert_relative_eq!(limit_real_fraction(&[sq.clone(), sq.clone()]).unwrap(), PI / 12.0, epsilon = 1e-14);
        let scaled = limit_real_fraction(&[disk.scaled(int(3)), sq.scaled(Rational::new(1, 2))]).unwrap();
        let plain = limit_real_fraction(&[disk, sq]).unwrap();
        assert_relative_eq!(scaled, plain, max_relative = 1e-10);
    }

    #[test]
    fn af_gap_examples() {
        let g = af_inequality_gap(&[cross(), cross()]).unwrap();
        assert_eq!(g.first, 0.0);
        let diag = validate_support(vec![vec![0, 0], vec![1, 1], vec![-1, -1], vec![1, -1], vec![-1, 1]]).unwrap();
        let g = af_inequality_gap(&[cross(), diag]).unwrap();
        assert!(g.holds(), "{g:?}");
        let twice = cross().dilated(2);
        let g = af_inequality_gap(&[cross(), twice]).unwrap();
        assert!(g.first.abs() <= 1e-9 * g.first_scale, "{g:?}");
    }
}
