//! Shared fixtures for the criterion benchmarks.

use realroots::lattice::{dilate_and_intersect, validate_support, BodySpec, SupportSet};
use realroots::rational::int;

/// `{-λ, …, λ}`.
pub fn interval(lambda: i64) -> SupportSet {
    SupportSet::interval(lambda)
}

/// `{0, ±e_k}` in dimension `dim`.
pub fn cross(dim: usize) -> SupportSet {
    let mut points = vec![vec![0; dim]];
    for k in 0..dim {
        for s in [-1, 1] {
            let mut p = vec![0; dim];
            p[k] = s;
            points.push(p);
        }
    }
    validate_support(points).expect("cross is symmetric")
}

/// Lattice points of the radius-`m` ball in dimension `dim`.
pub fn ball_support(dim: usize, m: i64) -> SupportSet {
    dilate_and_intersect(&BodySpec::ball(int(1), dim), m).expect("ball satisfies condition (*)")
}

/// Lattice points of `[-m, m]^dim`.
pub fn cube_support(dim: usize, m: i64) -> SupportSet {
    dilate_and_intersect(&BodySpec::cube(int(1), dim), m).expect("cube satisfies condition (*)")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixture_sizes() {
        assert_eq!(interval(3).len(), 7);
        assert_eq!(cross(3).len(), 7);
        assert_eq!(ball_support(2, 1).len(), 5);
        assert_eq!(cube_support(2, 2).len(), 25);
    }
}
