//! Counting actual roots of sampled systems, and the Monte Carlo estimator of
//! the expected count.
//!
//! * one variable, real: dense sign scan refined at the critical points of `f`
//! * one variable, complex: eigenvalues of the companion matrix of `z^L f(z)`
//! * two variables, real: periodic marching squares on `f_1 = 0`, sign changes
//!   of `f_2` along the contour, Newton polish.

use std::collections::BTreeMap;
use std::f64::consts::TAU;

use nalgebra::{Complex, DMatrix};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::SupportSet;
use crate::mixedvol::bkk_count;
use crate::sampler::{sample, TrigPolynomial};
use crate::stats::{run_workers, McConfig, MVEstimate, RunningStats};

/// Scan nodes per unit of the highest frequency.
pub const SCAN_DENSITY: usize = 16;
/// Grid cells per axis per unit of the highest frequency (2-D).
pub const GRID_DENSITY: usize = 32;
/// `|f| / ‖c‖` below this at a local extremum marks a tangential zero.
pub const TANGENCY_TOL: f64 = 1e-9;
pub const NEWTON_TOL: f64 = 1e-10;
pub const NEWTON_MAX_STEPS: usize = 50;
/// Roots closer than this on the torus are merged.
pub const DEDUP_DISTANCE: f64 = 1e-4;
/// Eigenvalues of smaller modulus are spurious zero roots.
pub const ZERO_ROOT_TOL: f64 = 1e-10;

fn bisect(g: impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> f64 {
    let mut ga = g(a);
    for _ in 0..200 {
        if b - a <= 1e-12 {
            break;
        }
        let m = 0.5 * (a + b);
        let gm = g(m);
        if (gm >= 0.0) == (ga >= 0.0) {
            a = m;
            ga = gm;
        } else {
            b = m;
        }
    }
    0.5 * (a + b)
}

/// Real zeros of a one-variable polynomial in `[0, 2π)`, sorted.
///
/// The scan uses `16·λ_max + 64` nodes; zeros of `f'` found on the same nodes
/// split the circle into monotone pieces, so two zeros between neighbouring
/// nodes are not missed. A local extremum with `|f| < 1e−9·‖c‖` is a
/// tangential zero and raises `DegenerateSample`.
pub fn real_roots_1d(f: &TrigPolynomial) -> Result<Vec<f64>> {
    if f.dim() != 1 {
        return Err(Error::DimensionMismatch { expected: 1, found: f.dim() });
    }
    let lmax = f.support().max_frequency() as usize;
    if lmax == 0 {
        return Ok(Vec::new());
    }
    let nodes = SCAN_DENSITY * lmax + 64;
    let value = |t: f64| f.evaluate(&[t]);
    let slope = |t: f64| f.gradient(&[t])[0];
    let grid: Vec<f64> = (0..nodes).map(|k| TAU * k as f64 / nodes as f64).collect();
    let slopes: Vec<f64> = grid.iter().map(|&t| slope(t)).collect();

    let mut breaks = grid.clone();
    let scale = f.coeff_norm();
    for k in 0..nodes {
        let (a, b) = (grid[k], if k + 1 == nodes { TAU } else { grid[k + 1] });
        let (sa, sb) = (slopes[k], slopes[(k + 1) % nodes]);
        if (sa >= 0.0) != (sb >= 0.0) {
            let c = bisect(slope, a, b);
            if value(c).abs() < TANGENCY_TOL * scale {
                return Err(Error::DegenerateSample(format!("tangential zero near θ = {c:.6}")));
            }
            breaks.push(c);
        }
    }
    breaks.sort_by(f64::total_cmp);
    let values: Vec<f64> = breaks.iter().map(|&t| value(t)).collect();
    let mut roots = Vec::new();
    for k in 0..breaks.len() {
        let (a, b) = (breaks[k], if k + 1 == breaks.len() { TAU } else { breaks[k + 1] });
        if (values[k] >= 0.0) != (values[(k + 1) % breaks.len()] >= 0.0) {
            roots.push(bisect(value, a, b).rem_euclid(TAU));
        }
    }
    roots.sort_by(f64::total_cmp);
    Ok(roots)
}

pub fn count_real_roots_1d(f: &TrigPolynomial) -> Result<usize> {
    real_roots_1d(f).map(|r| r.len())
}

/// Nonzero complex roots of `Σ a_λ z^λ`, with multiplicity.
pub fn complex_roots_1d(f: &TrigPolynomial) -> Result<Vec<Complex<f64>>> {
    if f.dim() != 1 {
        return Err(Error::DimensionMismatch { expected: 1, found: f.dim() });
    }
    let lmax = f.support().max_frequency();
    if lmax == 0 {
        return Ok(Vec::new());
    }
    let laurent = f.to_laurent();
    let degree = 2 * lmax as usize;
    // coeffs[k] multiplies z^k in z^L·f(z).
    let mut coeffs = vec![Complex::new(0.0, 0.0); degree + 1];
    for (p, a) in &laurent {
        coeffs[(p.0[0] + lmax) as usize] = *a;
    }
    let lead = coeffs[degree];
    let biggest = coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max);
    if lead.norm() <= 1e-14 * biggest {
        return Err(Error::LeadingCoefficientZero);
    }
    let companion = DMatrix::from_fn(degree, degree, |i, j| {
        if i == 0 {
            -coeffs[degree - 1 - j] / lead
        } else if i == j + 1 {
            Complex::new(1.0, 0.0)
        } else {
            Complex::new(0.0, 0.0)
        }
    });
    let eig = companion
        .try_schur(1e-15, 10_000)
        .ok_or_else(|| Error::DegenerateSample("companion eigenvalues did not converge".into()))?
        .eigenvalues()
        .ok_or_else(|| Error::DegenerateSample("companion eigenvalues did not converge".into()))?;
    Ok(eig.iter().copied().filter(|z| z.norm() >= ZERO_ROOT_TOL).collect())
}

pub fn count_complex_roots_1d(f: &TrigPolynomial) -> Result<usize> {
    complex_roots_1d(f).map(|r| r.len())
}

/// Result of a two-variable root count.
#[derive(Debug, Clone, PartialEq)]
pub struct Roots2d {
    /// Distinct roots in `[0, 2π)²`.
    pub roots: Vec<[f64; 2]>,
    /// Candidates whose Newton polish failed; they are not in `roots`.
    pub newton_failures: usize,
}

impl Roots2d {
    pub fn count(&self) -> usize {
        self.roots.len()
    }
}

fn torus_distance(a: &[f64; 2], b: &[f64; 2]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| {
            let d = (x - y).rem_euclid(TAU);
            d.min(TAU - d).powi(2)
        })
        .sum::<f64>()
        .sqrt()
}

fn newton_2d(f1: &TrigPolynomial, f2: &TrigPolynomial, start: [f64; 2], reach: f64) -> Option<[f64; 2]> {
    let mut x = start;
    for _ in 0..NEWTON_MAX_STEPS {
        let (v1, g1) = f1.value_and_gradient(&x);
        let (v2, g2) = f2.value_and_gradient(&x);
        let det = g1[0] * g2[1] - g1[1] * g2[0];
        if det == 0.0 || !det.is_finite() {
            return None;
        }
        let dx = (v1 * g2[1] - v2 * g1[1]) / det;
        let dy = (g1[0] * v2 - g2[0] * v1) / det;
        x = [x[0] - dx, x[1] - dy];
        if torus_distance(&x, &start) > reach {
            return None;
        }
        if dx.hypot(dy) < NEWTON_TOL {
            return Some([x[0].rem_euclid(TAU), x[1].rem_euclid(TAU)]);
        }
    }
    None
}

/// A zero of `f_1` on a cell edge.
#[derive(Clone, Copy)]
struct Crossing {
    point: [f64; 2],
    f2: f64,
}

/// Levels of 2×2 subdivision below the base grid.
pub const REFINE_DEPTH: u32 = 4;

/// `sup |∇f| <= √2 Σ |c_λ| ‖λ‖`.
fn gradient_bound(f: &TrigPolynomial) -> f64 {
    let sum: f64 = f
        .support()
        .points()
        .iter()
        .zip(f.coeffs())
        .map(|(p, c)| c.abs() * p.0.iter().map(|&x| (x * x) as f64).sum::<f64>().sqrt())
        .sum();
    std::f64::consts::SQRT_2 * sum
}

/// Quadtree over one base cell. A cell is dropped when the gradient bound
/// proves `f_1` or `f_2` has no zero in it; surviving cells are split down to
/// `REFINE_DEPTH`, then the `f_1 = 0` contour is extracted by marching
/// squares and sign changes of `f_2` along it become Newton starts.
fn refine_cell(
    f1: &TrigPolynomial,
    f2: &TrigPolynomial,
    bounds: [f64; 2],
    origin: [f64; 2],
    size: f64,
    depth: u32,
    candidates: &mut Vec<[f64; 2]>,
) {
    let centre = [origin[0] + 0.5 * size, origin[1] + 0.5 * size];
    let radius = size * std::f64::consts::FRAC_1_SQRT_2;
    let c1 = f1.evaluate(&centre);
    if c1.abs() > bounds[0] * radius || f2.evaluate(&centre).abs() > bounds[1] * radius {
        return;
    }
    if depth < REFINE_DEPTH {
        let half = 0.5 * size;
        for (dx, dy) in [(0.0, 0.0), (half, 0.0), (0.0, half), (half, half)] {
            refine_cell(f1, f2, bounds, [origin[0] + dx, origin[1] + dy], half, depth + 1, candidates);
        }
        return;
    }
    let pos = |x: f64| x >= 0.0;
    // Corners counter-clockwise from the origin; side k joins corner k to corner k+1.
    let corners = [origin, [origin[0] + size, origin[1]], [origin[0] + size, origin[1] + size], [origin[0], origin[1] + size]];
    let values = corners.map(|c| f1.evaluate(&c));
    let sides: Vec<Option<Crossing>> = (0..4)
        .map(|k| {
            let (a, b) = (corners[k], corners[(k + 1) % 4]);
            if pos(values[k]) == pos(values[(k + 1) % 4]) {
                return None;
            }
            let point_at = |t: f64| [a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])];
            let t = bisect(|t| f1.evaluate(&point_at(t)), 0.0, 1.0);
            let point = point_at(t);
            Some(Crossing { point, f2: f2.evaluate(&point) })
        })
        .collect();
    let present: Vec<usize> = (0..4).filter(|&k| sides[k].is_some()).collect();
    let pairs: Vec<(usize, usize)> = match present.len() {
        0 => return,
        2 => vec![(present[0], present[1])],
        4 => {
            // Pair the two sides meeting at each corner whose sign differs from the centre.
            (0..4).filter(|&k| pos(values[k]) != pos(c1)).map(|k| ((k + 3) % 4, k)).collect()
        }
        _ => unreachable!("a cell has an even number of sign changes"),
    };
    for (a, b) in pairs {
        let (p, q) = (sides[a].unwrap(), sides[b].unwrap());
        if pos(p.f2) != pos(q.f2) {
            let t = p.f2 / (p.f2 - q.f2);
            candidates.push([p.point[0] + t * (q.point[0] - p.point[0]), p.point[1] + t * (q.point[1] - p.point[1])]);
        }
    }
}

/// Real roots of `f_1 = f_2 = 0` on `T²` with `grid` cells per axis.
///
/// Roots beyond `bound` (the BKK count) mean the grid missed contour
/// structure and raise `GridTooCoarse`.
pub fn real_roots_2d_bounded(f1: &TrigPolynomial, f2: &TrigPolynomial, grid: usize, bound: Option<u64>) -> Result<Roots2d> {
    for f in [f1, f2] {
        if f.dim() != 2 {
            return Err(Error::DimensionMismatch { expected: 2, found: f.dim() });
        }
    }
    let freq = f1.support().max_frequency().max(f2.support().max_frequency()).max(1) as usize;
    if grid < GRID_DENSITY * freq {
        return Err(Error::InvalidInput(format!(
            "grid {grid} is below {GRID_DENSITY}·max frequency = {}",
            GRID_DENSITY * freq
        )));
    }
    let h = TAU / grid as f64;
    let bounds = [gradient_bound(f1), gradient_bound(f2)];
    let mut candidates: Vec<[f64; 2]> = Vec::new();
    for i in 0..grid {
        for j in 0..grid {
            refine_cell(f1, f2, bounds, [i as f64 * h, j as f64 * h], h, 0, &mut candidates);
        }
    }

    let mut roots: Vec<[f64; 2]> = Vec::new();
    let mut newton_failures = 0;
    for start in candidates {
        match newton_2d(f1, f2, start, 4.0 * h / (1 << REFINE_DEPTH) as f64) {
            Some(r) => {
                if roots.iter().all(|q| torus_distance(q, &r) >= DEDUP_DISTANCE) {
                    roots.push(r);
                }
            }
            None => {
                log::debug!("Newton polish failed from {start:?}");
                newton_failures += 1;
            }
        }
    }
    if let Some(bound) = bound {
        if roots.len() as u64 > bound {
            return Err(Error::GridTooCoarse { count: roots.len(), bound: bound as usize });
        }
    }
    roots.sort_by(|a, b| a[0].total_cmp(&b[0]).then(a[1].total_cmp(&b[1])));
    Ok(Roots2d { roots, newton_failures })
}

/// [`real_roots_2d_bounded`] with the BKK count of the two supports as bound.
pub fn count_real_roots_2d(f1: &TrigPolynomial, f2: &TrigPolynomial, grid: usize) -> Result<Roots2d> {
    let bound = bkk_count(&[f1.support().clone(), f2.support().clone()])?;
    real_roots_2d_bounded(f1, f2, grid, Some(bound))
}

/// Smallest admissible grid for a pair of supports.
pub fn default_grid(supports: &[SupportSet]) -> usize {
    GRID_DENSITY * supports.iter().map(SupportSet::max_frequency).max().unwrap_or(1).max(1) as usize
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RootKind {
    Real,
    Complex,
}

/// Per-run record of what the estimator had to work around.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Diagnostics {
    pub resamples: usize,
    pub newton_failures: usize,
    /// Grid cells per axis; 0 for one-variable runs.
    pub grid: usize,
    /// Number of samples with each root count.
    pub histogram: BTreeMap<usize, usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RootCountEstimate {
    pub estimate: MVEstimate,
    pub diagnostics: Diagnostics,
}

fn count_one(polys: &[TrigPolynomial], kind: RootKind, grid: usize, bound: u64) -> Result<(usize, usize)> {
    match (polys, kind) {
        ([f], RootKind::Real) => Ok((count_real_roots_1d(f)?, 0)),
        ([f], RootKind::Complex) => Ok((count_complex_roots_1d(f)?, 0)),
        ([f1, f2], RootKind::Real) => {
            let r = real_roots_2d_bounded(f1, f2, grid, Some(bound))?;
            Ok((r.count(), r.newton_failures))
        }
        _ => Err(Error::InvalidInput("complex counts are only available for one variable".into())),
    }
}

/// Sample mean and standard error of root counts of random systems.
///
/// Samples hitting a probability-zero degeneracy (tangential zero, vanishing
/// leading coefficient) are redrawn; more than 1% redraws aborts the run.
pub fn mc_expected_roots(supports: &[SupportSet], cfg: &McConfig, kind: RootKind, grid: Option<usize>) -> Result<RootCountEstimate> {
    let n = supports.len();
    if !(1..=2).contains(&n) {
        return Err(Error::UnsupportedDimension(n));
    }
    for s in supports {
        if s.dim() != n {
            return Err(Error::DimensionMismatch { expected: n, found: s.dim() });
        }
    }
    if kind == RootKind::Complex && n != 1 {
        return Err(Error::InvalidInput("complex counts are only available for one variable".into()));
    }
    if cfg.samples == 0 {
        return Err(Error::InvalidInput("at least one sample is required".into()));
    }
    let grid = if n == 2 { grid.unwrap_or_else(|| default_grid(supports)) } else { 0 };
    let bound = bkk_count(supports)?;
    let allowed = cfg.samples.div_ceil(100);
    let parts = run_workers(cfg, |worker, rng, quota| {
        let mut stats = RunningStats::default();
        let mut diag = Diagnostics { grid, ..Default::default() };
        while (stats.count() as usize) < quota {
            let polys: Vec<TrigPolynomial> = supports.iter().map(|s| sample(s, rng)).collect();
            match count_one(&polys, kind, grid, bound) {
                Ok((count, failures)) => {
                    stats.push(count as f64);
                    diag.newton_failures += failures;
                    *diag.histogram.entry(count).or_default() += 1;
                }
                Err(e @ (Error::DegenerateSample(_) | Error::LeadingCoefficientZero)) => {
                    log::info!("worker {worker}: resampling after {e}");
                    diag.resamples += 1;
                    if diag.resamples > allowed {
                        return Err(Error::ExcessiveDegeneracy { resamples: diag.resamples, samples: cfg.samples });
                    }
                }
                Err(e) => return Err(e),
            }
        }
        Ok((stats, diag))
    })?;
    let mut stats = RunningStats::default();
    let mut diagnostics = Diagnostics { grid, ..Default::default() };
    for (s, d) in &parts {
        stats.merge(s);
        diagnostics.resamples += d.resamples;
        diagnostics.newton_failures += d.newton_failures;
        for (k, c) in &d.histogram {
            *diagnostics.histogram.entry(*k).or_default() += c;
        }
    }
    if diagnostics.resamples > allowed {
        return Err(Error::ExcessiveDegeneracy { resamples: diagnostics.resamples, samples: cfg.samples });
    }
    Ok(RootCountEstimate { estimate: stats.estimate(cfg.seed), diagnostics })
}
