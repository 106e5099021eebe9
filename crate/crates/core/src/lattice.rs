//! Centrally symmetric supports in ℤⁿ and lattice points of dilated bodies.

use std::collections::BTreeSet;

use num_integer::Integer;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{convex_hull, linalg, LatticePolytope};
use crate::rational::{ExactRational, Rational};

/// A point of the integer lattice ℤⁿ.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct LatticeVector(pub Vec<i64>);

impl LatticeVector {
    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[i64] {
        &self.0
    }

    pub fn neg(&self) -> LatticeVector {
        LatticeVector(self.0.iter().map(|x| -x).collect())
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&x| x == 0)
    }

    /// Positive under the lexicographic functional: first nonzero coordinate is positive.
    pub fn is_lex_positive(&self) -> bool {
        self.0.iter().find(|&&x| x != 0).is_some_and(|&x| x > 0)
    }

    pub fn to_rational(&self) -> Vec<Rational> {
        self.0.iter().map(|&x| Rational::from_integer(x as i128)).collect()
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.0.iter().map(|&x| x as f64).collect()
    }
}

/// Finite, nonempty, centrally symmetric set of lattice vectors, sorted lexicographically.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct SupportSet {
    dim: usize,
    points: Vec<LatticeVector>,
}

#[derive(Deserialize)]
struct RawSupport {
    dim: Option<usize>,
    points: Vec<Vec<i64>>,
}

impl<'de> Deserialize<'de> for SupportSet {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = RawSupport::deserialize(d)?;
        let support = validate_support(raw.points).map_err(serde::de::Error::custom)?;
        if let Some(dim) = raw.dim {
            if dim != support.dim {
                return Err(serde::de::Error::custom(Error::DimensionMismatch {
                    expected: dim,
                    found: support.dim,
                }));
            }
        }
        Ok(support)
    }
}

impl SupportSet {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn points(&self) -> &[LatticeVector] {
        &self.points
    }

    /// N = #Λ.
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn contains(&self, p: &LatticeVector) -> bool {
        self.points.binary_search(p).is_ok()
    }

    pub fn index_of(&self, p: &LatticeVector) -> Option<usize> {
        self.points.binary_search(p).ok()
    }

    /// Largest |coordinate| over the support.
    pub fn max_frequency(&self) -> i64 {
        self.points.iter().flat_map(|p| p.0.iter().map(|x| x.abs())).max().unwrap_or(0)
    }

    pub fn is_subset(&self, other: &SupportSet) -> bool {
        self.points.iter().all(|p| other.contains(p))
    }

    /// {−λ, …, λ} in one variable.
    pub fn interval(lambda: i64) -> SupportSet {
        validate_support((-lambda..=lambda).map(|k| vec![k]).collect()).expect("symmetric")
    }

    /// Coordinatewise scaling of every point.
    pub fn dilated(&self, m: i64) -> SupportSet {
        let pts = self.points.iter().map(|p| p.0.iter().map(|x| x * m).collect()).collect();
        validate_support(pts).expect("dilation preserves symmetry")
    }

    pub fn newton_polytope(&self) -> Result<LatticePolytope> {
        let pts: Vec<_> = self.points.iter().map(LatticeVector::to_rational).collect();
        convex_hull(&pts)
    }
}

/// Validates and deduplicates a raw point list into a [`SupportSet`].
pub fn validate_support(points: Vec<Vec<i64>>) -> Result<SupportSet> {
    let dim = points.first().ok_or(Error::Empty)?.len();
    if dim == 0 {
        return Err(Error::InvalidInput("zero-dimensional lattice vector".into()));
    }
    let mut set = BTreeSet::new();
    for p in points {
        if p.len() != dim {
            return Err(Error::DimensionMismatch { expected: dim, found: p.len() });
        }
        set.insert(LatticeVector(p));
    }
    for p in &set {
        if !set.contains(&p.neg()) {
            return Err(Error::NotCentrallySymmetric { point: p.0.clone() });
        }
    }
    Ok(SupportSet { dim, points: set.into_iter().collect() })
}

/// Centrally symmetric convex body with exact rational data.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum BodySpec {
    Ball { radius: ExactRational, dim: usize },
    Polytope { vertices: Vec<Vec<ExactRational>> },
}

impl BodySpec {
    pub fn ball(radius: Rational, dim: usize) -> Self {
        BodySpec::Ball { radius: ExactRational(radius), dim }
    }

    pub fn polytope(vertices: Vec<Vec<Rational>>) -> Self {
        BodySpec::Polytope { vertices: vertices.into_iter().map(|v| v.into_iter().map(ExactRational).collect()).collect() }
    }

    /// Axis-parallel square/cube `[-a, a]^dim`.
    pub fn cube(half_side: Rational, dim: usize) -> Self {
        let vertices = (0..1usize << dim)
            .map(|mask| (0..dim).map(|i| if mask >> i & 1 == 1 { half_side } else { -half_side }).collect())
            .collect();
        Self::polytope(vertices)
    }

    pub fn dim(&self) -> usize {
        match self {
            BodySpec::Ball { dim, .. } => *dim,
            BodySpec::Polytope { vertices } => vertices.first().map_or(0, Vec::len),
        }
    }

    pub fn rational_vertices(&self) -> Vec<Vec<Rational>> {
        match self {
            BodySpec::Ball { .. } => Vec::new(),
            BodySpec::Polytope { vertices } => vertices.iter().map(|v| v.iter().map(|x| x.0).collect()).collect(),
        }
    }

    /// The body as an exact polytope; `None` for balls.
    pub fn to_polytope(&self) -> Result<Option<LatticePolytope>> {
        match self {
            BodySpec::Ball { .. } => Ok(None),
            BodySpec::Polytope { .. } => convex_hull(&self.rational_vertices()).map(Some),
        }
    }

    pub fn scaled(&self, factor: Rational) -> BodySpec {
        match self {
            BodySpec::Ball { radius, dim } => BodySpec::ball(radius.0 * factor, *dim),
            BodySpec::Polytope { .. } => Self::polytope(
                self.rational_vertices().into_iter().map(|v| v.into_iter().map(|x| x * factor).collect()).collect(),
            ),
        }
    }
}

/// Outcome of checking condition (*): a k-dimensional body must span a
/// subspace generated by lattice vectors.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConditionStar {
    pub holds: bool,
    pub ambient_dim: usize,
    pub span_dim: usize,
    /// Integer generators of the linear span.
    pub generators: Vec<Vec<i64>>,
    pub message: String,
}

pub fn check_condition_star(body: &BodySpec) -> ConditionStar {
    let n = body.dim();
    let fail = |msg: String| ConditionStar { holds: false, ambient_dim: n, span_dim: 0, generators: vec![], message: msg };
    match body {
        BodySpec::Ball { radius, dim } => {
            if *dim == 0 {
                return fail("ball of dimension 0".into());
            }
            if !radius.0.is_positive() {
                return fail(format!("ball radius must be positive, got {}", crate::rational::format(&radius.0)));
            }
            ConditionStar {
                holds: true,
                ambient_dim: n,
                span_dim: n,
                generators: (0..n).map(|i| (0..n).map(|j| (i == j) as i64).collect()).collect(),
                message: "full-dimensional ball".into(),
            }
        }
        BodySpec::Polytope { vertices } => {
            if vertices.is_empty() {
                return fail("polytope without vertices".into());
            }
            if vertices.iter().any(|v| v.len() != n) {
                return fail("vertices of mixed dimension".into());
            }
            let verts = body.rational_vertices();
            let set: BTreeSet<_> = verts.iter().cloned().collect();
            if let Some(v) = verts.iter().find(|v| !set.contains(&v.iter().map(|x| -x).collect::<Vec<_>>())) {
                return fail(format!(
                    "vertex set is not centrally symmetric: {:?}",
                    v.iter().map(crate::rational::format).collect::<Vec<_>>()
                ));
            }
            // Rational vertices scaled by their common denominator are lattice generators.
            let integral: Vec<Vec<Rational>> = verts
                .iter()
                .map(|v| {
                    let l = v.iter().fold(1i128, |acc, x| acc.lcm(x.denom()));
                    v.iter().map(|x| x * Rational::from_integer(l)).collect()
                })
                .collect();
            let idx = linalg::independent_subset(&integral);
            let generators: Vec<Vec<i64>> = idx
                .iter()
                .map(|&i| integral[i].iter().map(|x| *x.numer() as i64).collect())
                .collect();
            let k = generators.len();
            ConditionStar {
                holds: true,
                ambient_dim: n,
                span_dim: k,
                generators,
                message: if k == n {
                    "full-dimensional polytope".into()
                } else {
                    format!("{k}-dimensional span generated by lattice vectors")
                },
            }
        }
    }
}

/// Λ_m = mΔ ∩ ℤⁿ.
pub fn dilate_and_intersect(body: &BodySpec, m: i64) -> Result<SupportSet> {
    if m <= 0 {
        return Err(Error::InvalidInput(format!("dilation factor must be positive, got {m}")));
    }
    let star = check_condition_star(body);
    if !star.holds {
        return Err(Error::ConditionStarViolated(star.message));
    }
    let n = body.dim();
    let mut points = Vec::new();
    match body {
        BodySpec::Ball { radius, .. } => {
            let (p, q) = (*radius.0.numer(), *radius.0.denom());
            let bound = (m as i128 * p / q) as i64;
            let rhs = (m as i128 * p).pow(2);
            let q2 = q * q;
            for_each_in_box(n, bound, &mut |x| {
                let norm2: i128 = x.iter().map(|&c| (c as i128) * (c as i128)).sum();
                if q2 * norm2 <= rhs {
                    points.push(x.to_vec());
                }
            });
        }
        BodySpec::Polytope { .. } => {
            let poly = body.to_polytope()?.expect("polytope body");
            // Scale each inequality a·x <= b to integers, then test a·λ <= m·b.
            let rows: Vec<(Vec<i128>, i128)> = poly
                .halfspaces()
                .iter()
                .map(|h| {
                    let l = h.normal.iter().chain(std::iter::once(&h.offset)).fold(1i128, |acc, x| acc.lcm(x.denom()));
                    let a = h.normal.iter().map(|x| (x * Rational::from_integer(l)).to_integer()).collect();
                    (a, (h.offset * Rational::from_integer(l)).to_integer() * m as i128)
                })
                .collect();
            let bound = poly
                .vertices()
                .iter()
                .flat_map(|v| v.iter().map(|x| x.abs()))
                .max()
                .unwrap_or_else(Rational::zero);
            let bound = (bound * Rational::from_integer(m as i128)).floor().to_integer() as i64;
            enumerate_polytope(n, bound, &rows, &mut points);
        }
    }
    validate_support(points)
}

fn for_each_in_box(n: usize, bound: i64, f: &mut dyn FnMut(&[i64])) {
    let mut x = vec![-bound; n];
    loop {
        f(&x);
        let mut i = n;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            if x[i] < bound {
                x[i] += 1;
                break;
            }
            x[i] = -bound;
        }
    }
}

/// Enumerates integer points of `{a·x <= b}` inside the box, solving for the
/// last coordinate's range directly.
fn enumerate_polytope(n: usize, bound: i64, rows: &[(Vec<i128>, i128)], out: &mut Vec<Vec<i64>>) {
    let mut visit = |prefix: &[i64]| {
        let (mut lo, mut hi) = (-(bound as i128), bound as i128);
        for (a, b) in rows {
            let partial: i128 = prefix.iter().zip(a).map(|(&x, &c)| x as i128 * c).sum();
            let rest = b - partial;
            let c = a[n - 1];
            if c == 0 {
                if rest < 0 {
                    return;
                }
            } else if c > 0 {
                hi = hi.min(Integer::div_floor(&rest, &c));
            } else {
                lo = lo.max(Integer::div_ceil(&rest, &c));
            }
        }
        for last in lo..=hi {
            let mut p = prefix.to_vec();
            p.push(last as i64);
            out.push(p);
        }
    };
    if n == 1 {
        visit(&[]);
    } else {
        for_each_in_box(n - 1, bound, &mut visit);
    }
}
