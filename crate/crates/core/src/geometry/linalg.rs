//! Small exact linear algebra over the rationals.

#![allow(clippy::needless_range_loop)]

use num_traits::{One, Zero};

use crate::rational::Rational;

pub type RVec = Vec<Rational>;

pub fn sub(a: &[Rational], b: &[Rational]) -> RVec {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn add(a: &[Rational], b: &[Rational]) -> RVec {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter().zip(b).fold(Rational::zero(), |acc, (x, y)| acc + x * y)
}

pub fn cross(a: &[Rational], b: &[Rational]) -> RVec {
    vec![
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

pub fn det2(a: &[Rational], b: &[Rational]) -> Rational {
    a[0] * b[1] - a[1] * b[0]
}

pub fn det3(a: &[Rational], b: &[Rational], c: &[Rational]) -> Rational {
    dot(a, &cross(b, c))
}

/// Determinant of a square matrix given as rows (Gaussian elimination).
pub fn det(rows: &[RVec]) -> Rational {
    let n = rows.len();
    let mut a: Vec<RVec> = rows.to_vec();
    let mut d = Rational::one();
    for col in 0..n {
        let Some(p) = (col..n).find(|&r| !a[r][col].is_zero()) else {
            return Rational::zero();
        };
        if p != col {
            a.swap(p, col);
            d = -d;
        }
        let pivot = a[col][col];
        d *= pivot;
        for r in col + 1..n {
            if a[r][col].is_zero() {
                continue;
            }
            let f = a[r][col] / pivot;
            for c in col..n {
                let v = a[col][c];
                a[r][c] -= f * v;
            }
        }
    }
    d
}

/// Reduced row echelon form; returns the pivot columns.
fn rref(a: &mut [RVec]) -> Vec<usize> {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(p, r);
        let inv = a[r][c].recip();
        for x in a[r].iter_mut() {
            *x *= inv;
        }
        for i in 0..rows {
            if i != r && !a[i][c].is_zero() {
                let f = a[i][c];
                for j in 0..cols {
                    let v = a[r][j];
                    a[i][j] -= f * v;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// Greedy choice of linearly independent vectors, preserving input order.
pub fn independent_subset(vectors: &[RVec]) -> Vec<usize> {
    let mut chosen: Vec<usize> = Vec::new();
    let mut basis: Vec<RVec> = Vec::new();
    for (i, v) in vectors.iter().enumerate() {
        let mut trial = basis.clone();
        trial.push(v.clone());
        if rref(&mut trial).len() > basis.len() {
            basis.push(v.clone());
            chosen.push(i);
        }
    }
    chosen
}

/// Basis of `{x : rows · x = 0}`.
pub fn nullspace(rows: &[RVec], cols: usize) -> Vec<RVec> {
    if rows.is_empty() {
        return (0..cols)
            .map(|i| {
                let mut e = vec![Rational::zero(); cols];
                e[i] = Rational::one();
                e
            })
            .collect();
    }
    let mut a = rows.to_vec();
    let pivots = rref(&mut a);
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut x = vec![Rational::zero(); cols];
            x[f] = Rational::one();
            for (r, &p) in pivots.iter().enumerate() {
                x[p] = -a[r][f];
            }
            x
        })
        .collect()
}

/// Inverse of a square matrix given as rows; `None` if singular.
pub fn inverse(rows: &[RVec]) -> Option<Vec<RVec>> {
    let n = rows.len();
    if n == 0 {
        return Some(Vec::new());
    }
    let mut aug: Vec<RVec> = rows
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut row = r.clone();
            row.extend((0..n).map(|j| if i == j { Rational::one() } else { Rational::zero() }));
            row
        })
        .collect();
    let pivots = rref(&mut aug);
    if pivots.len() < n || pivots[n - 1] != n - 1 {
        return None;
    }
    Some(aug.into_iter().map(|r| r[n..].to_vec()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    fn v(xs: &[i64]) -> RVec {
        xs.iter().map(|&x| int(x)).collect()
    }

    #[test]
    fn determinant_and_inverse() {
        let m = vec![v(&[2, 1, 0]), v(&[1, 3, 1]), v(&[0, 1, 4])];
        assert_eq!(det(&m), int(18));
        let inv = inverse(&m).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                let e = dot(&m[i], &inv.iter().map(|r| r[j]).collect::<Vec<_>>());
                assert_eq!(e, if i == j { int(1) } else { int(0) });
            }
        }
        assert!(inverse(&[v(&[1, 2]), v(&[2, 4])]).is_none());
    }

    #[test]
    fn nullspace_is_orthogonal() {
        let rows = vec![v(&[1, 1, 0])];
        let ns = nullspace(&rows, 3);
        assert_eq!(ns.len(), 2);
        for z in &ns {
            assert_eq!(dot(&rows[0], z), int(0));
        }
        assert_eq!(independent_subset(&[v(&[1, 1]), v(&[2, 2]), v(&[0, 1])]), vec![0, 2]);
    }
}
