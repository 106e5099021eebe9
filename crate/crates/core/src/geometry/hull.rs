//! Exact convex hulls in dimensions 1 to 3.
//!
//! Lower-dimensional point sets are handled in an intrinsic coordinate frame
//! of their affine span, so every hull is full-dimensional in its own frame.

use std::collections::{BTreeMap, HashSet};

use num_traits::{Signed, Zero};

use super::linalg::{self, RVec};
use crate::error::{Error, Result};
use crate::rational::{to_f64, Rational};

/// Closed half-space `normal · x <= offset`.
#[derive(Debug, Clone, PartialEq)]
pub struct Halfspace {
    pub normal: RVec,
    pub offset: Rational,
}

/// A facet in intrinsic coordinates, vertices ordered counter-clockwise
/// as seen from outside (3-D), or as the ordered edge (2-D).
#[derive(Debug, Clone, PartialEq)]
pub struct Facet {
    pub normal: RVec,
    pub offset: Rational,
    pub vertices: Vec<usize>,
}

/// Affine frame `x = origin + Σ y_i basis_i`, with `y = coords · (x - origin)`.
#[derive(Debug, Clone, PartialEq)]
struct Frame {
    origin: RVec,
    coords: Vec<RVec>,
}

impl Frame {
    fn to_intrinsic(&self, x: &[Rational]) -> RVec {
        let d = linalg::sub(x, &self.origin);
        self.coords.iter().map(|row| linalg::dot(row, &d)).collect()
    }
}

/// Convex polytope with rational vertices, stored by its extreme points.
#[derive(Debug, Clone, PartialEq)]
pub struct LatticePolytope {
    dim: usize,
    vertices: Vec<RVec>,
    intrinsic_dim: usize,
    frame: Frame,
    facets: Vec<Facet>,
    halfspaces: Vec<Halfspace>,
    vertices_f64: Vec<Vec<f64>>,
}

/// Convex hull of a finite point set in dimension 1, 2 or 3.
pub fn convex_hull(points: &[RVec]) -> Result<LatticePolytope> {
    let first = points.first().ok_or(Error::Empty)?;
    let dim = first.len();
    if !(1..=3).contains(&dim) {
        return Err(Error::UnsupportedDimension(dim));
    }
    if let Some(p) = points.iter().find(|p| p.len() != dim) {
        return Err(Error::DimensionMismatch { expected: dim, found: p.len() });
    }
    let mut pts = points.to_vec();
    pts.sort();
    pts.dedup();

    let diffs: Vec<RVec> = pts[1..].iter().map(|p| linalg::sub(p, &pts[0])).collect();
    let basis: Vec<RVec> = linalg::independent_subset(&diffs)
        .into_iter()
        .map(|i| diffs[i].clone())
        .collect();
    let k = basis.len();

    let frame = if k == dim {
        Frame { origin: vec![Rational::zero(); dim], coords: identity(dim) }
    } else {
        degenerate_frame(&pts[0], &basis, dim)
    };
    let local: Vec<RVec> = pts.iter().map(|p| frame.to_intrinsic(p)).collect();

    let (order, mut facets) = match k {
        0 => (vec![0], Vec::new()),
        1 => hull1(&local),
        2 => hull2(&local),
        _ => hull3(&local),
    };

    // Reindex onto the extreme points only.
    let mut remap = vec![usize::MAX; pts.len()];
    for (new, &old) in order.iter().enumerate() {
        remap[old] = new;
    }
    for f in &mut facets {
        for v in &mut f.vertices {
            *v = remap[*v];
        }
    }
    let vertices: Vec<RVec> = order.iter().map(|&i| pts[i].clone()).collect();

    let mut halfspaces = Vec::new();
    for f in &facets {
        // w · S (x - o) <= c  ⇔  (Sᵀ w) · x <= c + w · S o
        let normal: RVec = (0..dim)
            .map(|j| (0..k).fold(Rational::zero(), |acc, i| acc + f.normal[i] * frame.coords[i][j]))
            .collect();
        let offset = f.offset + linalg::dot(&normal, &frame.origin);
        halfspaces.push(Halfspace { normal, offset });
    }
    if k < dim {
        for z in linalg::nullspace(&basis, dim) {
            let c = linalg::dot(&z, &frame.origin);
            halfspaces.push(Halfspace { normal: z.iter().map(|x| -x).collect(), offset: -c });
            halfspaces.push(Halfspace { normal: z, offset: c });
        }
    }

    let vertices_f64 = vertices.iter().map(|v| v.iter().map(to_f64).collect()).collect();
    Ok(LatticePolytope { dim, vertices, intrinsic_dim: k, frame, facets, halfspaces, vertices_f64 })
}

fn identity(n: usize) -> Vec<RVec> {
    (0..n)
        .map(|i| (0..n).map(|j| Rational::from_integer((i == j) as i128)).collect())
        .collect()
}

fn degenerate_frame(origin: &[Rational], basis: &[RVec], dim: usize) -> Frame {
    let k = basis.len();
    // B is dim × k with the basis as columns; pick k independent rows of B.
    let rows_of_b: Vec<RVec> = (0..dim).map(|j| basis.iter().map(|b| b[j]).collect()).collect();
    let pivot_rows = linalg::independent_subset(&rows_of_b);
    let sub: Vec<RVec> = pivot_rows.iter().map(|&r| rows_of_b[r].clone()).collect();
    let inv = linalg::inverse(&sub).expect("pivot rows are independent");
    let coords = (0..k)
        .map(|i| {
            let mut row = vec![Rational::zero(); dim];
            for (r, &pr) in pivot_rows.iter().enumerate() {
                row[pr] = inv[i][r];
            }
            row
        })
        .collect();
    Frame { origin: origin.to_vec(), coords }
}

fn hull1(pts: &[RVec]) -> (Vec<usize>, Vec<Facet>) {
    let lo = (0..pts.len()).min_by(|&a, &b| pts[a][0].cmp(&pts[b][0])).unwrap();
    let hi = (0..pts.len()).max_by(|&a, &b| pts[a][0].cmp(&pts[b][0])).unwrap();
    let one = Rational::from_integer(1);
    let facets = vec![
        Facet { normal: vec![-one], offset: -pts[lo][0], vertices: vec![lo] },
        Facet { normal: vec![one], offset: pts[hi][0], vertices: vec![hi] },
    ];
    (vec![lo, hi], facets)
}

/// Andrew's monotone chain; returns counter-clockwise extreme points.
fn monotone_chain(pts: &[RVec], idx: &[usize]) -> Vec<usize> {
    let mut sorted = idx.to_vec();
    sorted.sort_by(|&a, &b| pts[a].cmp(&pts[b]));
    sorted.dedup_by(|a, b| pts[*a] == pts[*b]);
    if sorted.len() < 3 {
        return sorted;
    }
    let turn = |o: usize, a: usize, b: usize| {
        linalg::det2(&linalg::sub(&pts[a], &pts[o]), &linalg::sub(&pts[b], &pts[o]))
    };
    let mut hull: Vec<usize> = Vec::with_capacity(2 * sorted.len());
    for pass in 0..2 {
        let start = hull.len();
        let iter: Box<dyn Iterator<Item = &usize>> =
            if pass == 0 { Box::new(sorted.iter()) } else { Box::new(sorted.iter().rev()) };
        for &p in iter {
            while hull.len() >= start + 2 && turn(hull[hull.len() - 2], hull[hull.len() - 1], p) <= Rational::zero() {
                hull.pop();
            }
            hull.push(p);
        }
        hull.pop();
    }
    hull
}

fn hull2(pts: &[RVec]) -> (Vec<usize>, Vec<Facet>) {
    let all: Vec<usize> = (0..pts.len()).collect();
    let ring = monotone_chain(pts, &all);
    let m = ring.len();
    let facets = (0..m)
        .map(|i| {
            let (a, b) = (ring[i], ring[(i + 1) % m]);
            let d = linalg::sub(&pts[b], &pts[a]);
            let normal = vec![d[1], -d[0]];
            let offset = linalg::dot(&normal, &pts[a]);
            Facet { normal, offset, vertices: vec![a, b] }
        })
        .collect();
    (ring, facets)
}

fn hull3(pts: &[RVec]) -> (Vec<usize>, Vec<Facet>) {
    let orient = |a: usize, b: usize, c: usize, p: usize| {
        linalg::det3(
            &linalg::sub(&pts[b], &pts[a]),
            &linalg::sub(&pts[c], &pts[a]),
            &linalg::sub(&pts[p], &pts[a]),
        )
    };
    let n = pts.len();
    let i0 = 0;
    let i1 = 1;
    let d01 = linalg::sub(&pts[i1], &pts[i0]);
    let i2 = (2..n)
        .find(|&i| linalg::cross(&d01, &linalg::sub(&pts[i], &pts[i0])).iter().any(|x| !x.is_zero()))
        .expect("three non-collinear points");
    let i3 = (2..n).find(|&i| !orient(i0, i1, i2, i).is_zero()).expect("four non-coplanar points");
    let (b, c) = if orient(i0, i1, i2, i3) > Rational::zero() { (i1, i2) } else { (i2, i1) };
    let (a, d) = (i0, i3);
    let mut faces: Vec<[usize; 3]> = vec![[a, c, b], [a, b, d], [a, d, c], [b, c, d]];

    for p in 0..n {
        if p == i0 || p == i1 || p == i2 || p == i3 {
            continue;
        }
        let visible: Vec<bool> = faces.iter().map(|f| orient(f[0], f[1], f[2], p) > Rational::zero()).collect();
        if !visible.iter().any(|&v| v) {
            continue;
        }
        let mut edges: HashSet<(usize, usize)> = HashSet::new();
        for (f, _) in faces.iter().zip(&visible).filter(|(_, &v)| v) {
            edges.insert((f[0], f[1]));
            edges.insert((f[1], f[2]));
            edges.insert((f[2], f[0]));
        }
        let mut next: Vec<[usize; 3]> =
            faces.iter().zip(&visible).filter(|(_, &v)| !v).map(|(f, _)| *f).collect();
        for f in faces.iter().zip(&visible).filter(|(_, &v)| v).map(|(f, _)| f) {
            for (u, v) in [(f[0], f[1]), (f[1], f[2]), (f[2], f[0])] {
                if !edges.contains(&(v, u)) {
                    next.push([u, v, p]);
                }
            }
        }
        faces = next;
    }

    // Merge coplanar triangles into polygonal facets.
    let mut planes: BTreeMap<(RVec, Rational), Vec<usize>> = BTreeMap::new();
    for f in &faces {
        let normal = linalg::cross(&linalg::sub(&pts[f[1]], &pts[f[0]]), &linalg::sub(&pts[f[2]], &pts[f[0]]));
        let lead = normal.iter().find(|x| !x.is_zero()).expect("non-degenerate face").abs();
        let normal: RVec = normal.iter().map(|x| x / lead).collect();
        let offset = linalg::dot(&normal, &pts[f[0]]);
        let entry = planes.entry((normal, offset)).or_default();
        entry.extend_from_slice(f);
    }

    let mut facets = Vec::new();
    let mut extreme: Vec<usize> = Vec::new();
    for ((normal, offset), mut idx) in planes {
        idx.sort_unstable();
        idx.dedup();
        // Project along the dominant normal axis and take the planar hull.
        let drop = (0..3).max_by(|&i, &j| normal[i].abs().cmp(&normal[j].abs())).unwrap();
        let keep: Vec<usize> = (0..3).filter(|&i| i != drop).collect();
        let projected: Vec<RVec> = pts.iter().map(|p| vec![p[keep[0]], p[keep[1]]]).collect();
        let mut ring = monotone_chain(&projected, &idx);
        let (r0, r1, r2) = (ring[0], ring[1], ring[2]);
        let turn = linalg::cross(&linalg::sub(&pts[r1], &pts[r0]), &linalg::sub(&pts[r2], &pts[r0]));
        if linalg::dot(&turn, &normal) < Rational::zero() {
            ring.reverse();
        }
        extreme.extend_from_slice(&ring);
        facets.push(Facet { normal, offset, vertices: ring });
    }
    extreme.sort_unstable();
    extreme.dedup();
    (extreme, facets)
}

impl LatticePolytope {
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Extreme points.
    pub fn vertices(&self) -> &[RVec] {
        &self.vertices
    }

    pub fn vertices_f64(&self) -> &[Vec<f64>] {
        &self.vertices_f64
    }

    /// Dimension of the affine span.
    pub fn intrinsic_dim(&self) -> usize {
        self.intrinsic_dim
    }

    pub fn is_full_dimensional(&self) -> bool {
        self.intrinsic_dim == self.dim
    }

    /// Facets with outward normals in ambient coordinates. Empty for lower-dimensional polytopes.
    pub fn facets(&self) -> &[Facet] {
        if self.is_full_dimensional() {
            &self.facets
        } else {
            &[]
        }
    }

    /// Inequality description; equalities of the span appear as opposite pairs.
    pub fn halfspaces(&self) -> &[Halfspace] {
        &self.halfspaces
    }

    pub fn contains(&self, x: &[Rational]) -> bool {
        self.halfspaces.iter().all(|h| linalg::dot(&h.normal, x) <= h.offset)
    }

    /// Lebesgue volume in the ambient dimension; zero when degenerate.
    pub fn volume(&self) -> Rational {
        if !self.is_full_dimensional() {
            return Rational::zero();
        }
        match self.dim {
            1 => self.vertices[1][0] - self.vertices[0][0],
            2 => {
                let m = self.vertices.len();
                let twice = (0..m).fold(Rational::zero(), |acc, i| {
                    acc + linalg::det2(&self.vertices[i], &self.vertices[(i + 1) % m])
                });
                twice / Rational::from_integer(2)
            }
            _ => {
                let sixfold = self.facets.iter().fold(Rational::zero(), |acc, f| {
                    let v = &f.vertices;
                    (1..v.len() - 1).fold(acc, |acc, t| {
                        acc + linalg::det3(&self.vertices[v[0]], &self.vertices[v[t]], &self.vertices[v[t + 1]])
                    })
                });
                sixfold / Rational::from_integer(6)
            }
        }
    }

    pub fn volume_f64(&self) -> f64 {
        to_f64(&self.volume())
    }

    pub fn support(&self, xi: &[f64]) -> f64 {
        self.vertices_f64
            .iter()
            .map(|v| v.iter().zip(xi).map(|(a, b)| a * b).sum::<f64>())
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// Simplicial fan from `apex` over the boundary, within the affine span.
    ///
    /// Each entry is `(signed intrinsic volume, ambient simplex vertices)` where
    /// the first vertex is the apex. Volumes are in the intrinsic frame, so they
    /// are proportional (not equal) to k-volumes when the polytope is degenerate.
    pub fn fan(&self, apex: &[Rational]) -> Vec<(Rational, Vec<RVec>)> {
        let k = self.intrinsic_dim;
        let y_apex = self.frame.to_intrinsic(apex);
        let local: Vec<RVec> = self.vertices.iter().map(|v| self.frame.to_intrinsic(v)).collect();
        let rel = |i: usize| linalg::sub(&local[i], &y_apex);
        let mut out = Vec::new();
        for f in &self.facets {
            let v = &f.vertices;
            match k {
                1 => {
                    let vol = f.normal[0] * rel(v[0])[0];
                    out.push((vol, vec![apex.to_vec(), self.vertices[v[0]].clone()]));
                }
                2 => {
                    let vol = linalg::det2(&rel(v[0]), &rel(v[1])) / Rational::from_integer(2);
                    out.push((vol, vec![apex.to_vec(), self.vertices[v[0]].clone(), self.vertices[v[1]].clone()]));
                }
                3 => {
                    for t in 1..v.len() - 1 {
                        let vol = linalg::det3(&rel(v[0]), &rel(v[t]), &rel(v[t + 1])) / Rational::from_integer(6);
                        out.push((
                            vol,
                            vec![
                                apex.to_vec(),
                                self.vertices[v[0]].clone(),
                                self.vertices[v[t]].clone(),
                                self.vertices[v[t + 1]].clone(),
                            ],
                        ));
                    }
                }
                _ => {}
            }
        }
        out
    }

    pub fn scaled(&self, factor: Rational) -> Result<LatticePolytope> {
        let pts: Vec<RVec> = self.vertices.iter().map(|v| v.iter().map(|x| x * factor).collect()).collect();
        convex_hull(&pts)
    }
}

/// Minkowski sum as the hull of pairwise vertex sums.
pub fn minkowski_sum(p: &LatticePolytope, q: &LatticePolytope) -> Result<LatticePolytope> {
    if p.dim != q.dim {
        return Err(Error::DimensionMismatch { expected: p.dim, found: q.dim });
    }
    let sums: Vec<RVec> = p
        .vertices
        .iter()
        .flat_map(|a| q.vertices.iter().map(move |b| linalg::add(a, b)))
        .collect();
    convex_hull(&sums)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    fn pts(raw: &[&[i64]]) -> Vec<RVec> {
        raw.iter().map(|p| p.iter().map(|&x| int(x)).collect()).collect()
    }

    #[test]
    fn segment_from_collinear_integers() {
        let p = convex_hull(&pts(&[&[-2], &[-1], &[0], &[1], &[2]])).unwrap();
        assert_eq!(p.vertices(), &pts(&[&[-2], &[2]])[..]);
        assert_eq!(p.volume(), int(4));
    }

    #[test]
    fn cross_gives_diamond() {
        let p = convex_hull(&pts(&[&[0, 0], &[1, 0], &[-1, 0], &[0, 1], &[0, -1]])).unwrap();
        assert_eq!(p.vertices().len(), 4);
        assert!(!p.vertices().contains(&pts(&[&[0, 0]])[0]));
        assert_eq!(p.volume(), int(2));
    }

    #[test]
    fn square_drops_interior_point() {
        let p = convex_hull(&pts(&[&[0, 0], &[1, 1], &[1, -1], &[-1, 1], &[-1, -1]])).unwrap();
        let mut v = p.vertices().to_vec();
        v.sort();
        assert_eq!(v, pts(&[&[-1, -1], &[-1, 1], &[1, -1], &[1, 1]]));
        assert_eq!(p.volume(), int(4));
        assert_eq!(p.facets().len(), 4);
    }

    #[test]
    fn octahedron_volume() {
        let p = convex_hull(&pts(&[&[1, 0, 0], &[-1, 0, 0], &[0, 1, 0], &[0, -1, 0], &[0, 0, 1], &[0, 0, -1], &[0, 0, 0]]))
            .unwrap();
        assert_eq!(p.vertices().len(), 6);
        assert_eq!(p.facets().len(), 8);
        assert_eq!(p.volume(), Rational::new(4, 3));
    }

    #[test]
    fn cube_with_face_and_edge_points() {
        let mut raw = Vec::new();
        for x in -1..=1 {
            for y in -1..=1 {
                for z in -1..=1 {
                    raw.push(vec![int(x), int(y), int(z)]);
                }
            }
        }
        let p = convex_hull(&raw).unwrap();
        assert_eq!(p.vertices().len(), 8);
        assert_eq!(p.facets().len(), 6);
        assert_eq!(p.volume(), int(8));
        assert!(p.contains(&[int(1), int(0), int(-1)]));
        assert!(!p.contains(&[int(2), int(0), int(0)]));
    }

    #[test]
    fn lower_dimensional_hulls() {
        let seg = convex_hull(&pts(&[&[1, 1], &[-1, -1], &[0, 0]])).unwrap();
        assert_eq!(seg.intrinsic_dim(), 1);
        assert_eq!(seg.vertices().len(), 2);
        assert_eq!(seg.volume(), int(0));
        assert!(seg.contains(&[Rational::new(1, 2), Rational::new(1, 2)]));
        assert!(!seg.contains(&[Rational::new(1, 2), Rational::new(1, 3)]));
        assert!(!seg.contains(&[int(2), int(2)]));

        let square_in_3d = convex_hull(&pts(&[&[1, 1, 0], &[1, -1, 0], &[-1, 1, 0], &[-1, -1, 0], &[0, 0, 0]])).unwrap();
        assert_eq!(square_in_3d.intrinsic_dim(), 2);
        assert_eq!(square_in_3d.vertices().len(), 4);
        assert!(square_in_3d.contains(&[int(1), int(0), int(0)]));
        assert!(!square_in_3d.contains(&[int(0), int(0), Rational::new(1, 5)]));
    }

    #[test]
    fn unsupported_dimension() {
        assert_eq!(
            convex_hull(&pts(&[&[0, 0, 0, 0]])).unwrap_err(),
            Error::UnsupportedDimension(4)
        );
    }

    #[test]
    fn minkowski_sums() {
        let a = convex_hull(&pts(&[&[-1], &[1]])).unwrap();
        let b = convex_hull(&pts(&[&[-2], &[2]])).unwrap();
        assert_eq!(minkowski_sum(&a, &b).unwrap().vertices(), &pts(&[&[-3], &[3]])[..]);

        let e1 = convex_hull(&pts(&[&[0, 0], &[1, 0]])).unwrap();
        let e2 = convex_hull(&pts(&[&[0, 0], &[0, 1]])).unwrap();
        let sq = minkowski_sum(&e1, &e2).unwrap();
        assert_eq!(sq.volume(), int(1));
        let sq2 = minkowski_sum(&sq, &sq).unwrap();
        assert_eq!(sq2.volume(), int(4));
        assert!(minkowski_sum(&a, &sq).is_err());
    }

    #[test]
    fn fan_volumes_sum_to_volume() {
        let p = convex_hull(&pts(&[&[2, 0, 0], &[-1, 1, 0], &[0, -1, 1], &[0, 0, -3], &[1, 1, 1]])).unwrap();
        let origin = vec![Rational::zero(); 3];
        let total = p.fan(&origin).iter().fold(Rational::zero(), |acc, (v, _)| acc + v);
        assert_eq!(total, p.volume());
    }

    #[test]
    fn single_point_in_the_plane() {
        let p = convex_hull(&[vec![int(0), int(0)]]).unwrap();
        assert_eq!(p.intrinsic_dim(), 0);
        assert_eq!(p.volume(), Rational::zero());
        assert!(p.contains(&[int(0), int(0)]));
        assert!(!p.contains(&[int(1), int(0)]));
    }
}
