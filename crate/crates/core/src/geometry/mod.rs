//! Convex bodies in dimensions 1 to 3: exact polytopes and floating-point ellipsoids.

mod ellipsoid;
mod hull;
pub mod linalg;

use std::f64::consts::PI;

pub use ellipsoid::{ellipsoid_volume, unit_ball_volume, Ellipsoid};
pub use hull::{convex_hull, minkowski_sum, Facet, Halfspace, LatticePolytope};

use crate::error::{Error, Result};
use crate::rational::to_f64;

/// Either kind of body, behind a common support function.
#[derive(Debug, Clone, PartialEq)]
pub enum ConvexBody {
    Polytope(LatticePolytope),
    Ellipsoid(Ellipsoid),
}

impl ConvexBody {
    pub fn dim(&self) -> usize {
        match self {
            ConvexBody::Polytope(p) => p.dim(),
            ConvexBody::Ellipsoid(e) => e.dim(),
        }
    }

    pub fn support(&self, xi: &[f64]) -> f64 {
        match self {
            ConvexBody::Polytope(p) => p.support(xi),
            ConvexBody::Ellipsoid(e) => e.support(xi),
        }
    }
}

impl From<LatticePolytope> for ConvexBody {
    fn from(p: LatticePolytope) -> Self {
        ConvexBody::Polytope(p)
    }
}

impl From<Ellipsoid> for ConvexBody {
    fn from(e: Ellipsoid) -> Self {
        ConvexBody::Ellipsoid(e)
    }
}

pub fn support_function(body: &ConvexBody, xi: &[f64]) -> Result<f64> {
    if xi.len() != body.dim() {
        return Err(Error::DimensionMismatch { expected: body.dim(), found: xi.len() });
    }
    Ok(body.support(xi))
}

/// Deterministic unit directions: `±1` on the line, equally spaced angles in
/// the plane, a Fibonacci lattice on the 2-sphere.
pub fn unit_directions(dim: usize, count: usize) -> Result<Vec<Vec<f64>>> {
    match dim {
        1 => Ok(vec![vec![1.0], vec![-1.0]]),
        2 => Ok((0..count)
            .map(|i| {
                let t = 2.0 * PI * i as f64 / count as f64;
                vec![t.cos(), t.sin()]
            })
            .collect()),
        3 => {
            let golden = PI * (3.0 - 5f64.sqrt());
            Ok((0..count)
                .map(|i| {
                    let z = 1.0 - (2.0 * i as f64 + 1.0) / count as f64;
                    let r = (1.0 - z * z).max(0.0).sqrt();
                    let phi = golden * i as f64;
                    vec![r * phi.cos(), r * phi.sin(), z]
                })
                .collect())
        }
        d => Err(Error::UnsupportedDimension(d)),
    }
}

/// Largest support-function gap over `directions` sampled unit vectors.
///
/// Equals the Hausdorff distance in the limit of dense sampling; at finite
/// sampling it is a lower bound.
pub fn hausdorff_distance(a: &ConvexBody, b: &ConvexBody, directions: usize) -> Result<f64> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch { expected: a.dim(), found: b.dim() });
    }
    if directions < 64 {
        return Err(Error::InvalidInput(format!("need at least 64 directions, got {directions}")));
    }
    Ok(unit_directions(a.dim(), directions)?
        .iter()
        .map(|u| (a.support(u) - b.support(u)).abs())
        .fold(0.0, f64::max))
}

/// Whether `e ⊂ p`, checked facet by facet: `sqrt(uᵀ M u) <= h_P(u)` for every outer normal `u`.
pub fn ellipsoid_in_polytope(e: &Ellipsoid, p: &LatticePolytope) -> Result<bool> {
    if e.dim() != p.dim() {
        return Err(Error::DimensionMismatch { expected: p.dim(), found: e.dim() });
    }
    if !p.is_full_dimensional() {
        return Err(Error::DegeneratePolytope { intrinsic: p.intrinsic_dim(), ambient: p.dim() });
    }
    Ok(p.facets().iter().all(|f| {
        let u: Vec<f64> = f.normal.iter().map(to_f64).collect();
        let h = to_f64(&f.offset);
        e.support(&u) <= h + 1e-12 * h.abs().max(1.0)
    }))
}
