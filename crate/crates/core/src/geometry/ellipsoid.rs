use std::f64::consts::PI;

use nalgebra::{DMatrix, SymmetricEigen};

use crate::error::{Error, Result};

const SYMMETRY_TOL: f64 = 1e-12;
const EIGEN_TOL: f64 = 1e-12;

/// Origin-centred ellipsoid `{x : <x,ξ> <= sqrt(ξᵀ M ξ) for all ξ}` given by a PSD shape matrix.
///
/// A singular shape is a flat ellipsoid (or a segment, or the origin).
#[derive(Debug, Clone, PartialEq)]
pub struct Ellipsoid {
    shape: DMatrix<f64>,
}

impl Ellipsoid {
    pub fn new(shape: DMatrix<f64>) -> Result<Self> {
        let n = shape.nrows();
        if n == 0 || shape.ncols() != n {
            return Err(Error::NonPsdInput(format!("shape must be square, got {}x{}", n, shape.ncols())));
        }
        if shape.iter().any(|x| !x.is_finite()) {
            return Err(Error::NonPsdInput("non-finite entry".into()));
        }
        let scale = shape.amax().max(1.0);
        for i in 0..n {
            for j in 0..i {
                if (shape[(i, j)] - shape[(j, i)]).abs() > SYMMETRY_TOL * scale {
                    return Err(Error::NonPsdInput(format!("asymmetric at ({i},{j})")));
                }
            }
        }
        let sym = (&shape + shape.transpose()) * 0.5;
        let eig = SymmetricEigen::new(sym.clone());
        let min = eig.eigenvalues.min();
        if min < -EIGEN_TOL * scale {
            return Err(Error::NonPsdInput(format!("negative eigenvalue {min:e}")));
        }
        let shape = if min < 0.0 {
            let clamped = eig.eigenvalues.map(|l| l.max(0.0));
            &eig.eigenvectors * DMatrix::from_diagonal(&clamped) * eig.eigenvectors.transpose()
        } else {
            sym
        };
        Ok(Self { shape })
    }

    /// Ball of the given radius.
    pub fn ball(dim: usize, radius: f64) -> Self {
        Self { shape: DMatrix::identity(dim, dim) * (radius * radius) }
    }

    pub fn from_diagonal(diag: &[f64]) -> Result<Self> {
        Self::new(DMatrix::from_diagonal(&nalgebra::DVector::from_row_slice(diag)))
    }

    pub fn dim(&self) -> usize {
        self.shape.nrows()
    }

    pub fn shape(&self) -> &DMatrix<f64> {
        &self.shape
    }

    pub fn support(&self, xi: &[f64]) -> f64 {
        let n = self.dim();
        let mut q = 0.0;
        for i in 0..n {
            for j in 0..n {
                q += xi[i] * self.shape[(i, j)] * xi[j];
            }
        }
        q.max(0.0).sqrt()
    }

    /// Image under `x ↦ factor·x`.
    pub fn scaled(&self, factor: f64) -> Self {
        Self { shape: &self.shape * (factor * factor) }
    }

    /// Zero for flat ellipsoids (rank below the dimension at relative tolerance 1e−12).
    pub fn determinant(&self) -> f64 {
        if self.rank(1e-12) < self.dim() {
            return 0.0;
        }
        self.shape.determinant().max(0.0)
    }

    /// Symmetric square root `L` with `L Lᵀ = M`.
    pub fn sqrt_factor(&self) -> DMatrix<f64> {
        let eig = SymmetricEigen::new(self.shape.clone());
        let root = eig.eigenvalues.map(|l| l.max(0.0).sqrt());
        &eig.eigenvectors * DMatrix::from_diagonal(&root) * eig.eigenvectors.transpose()
    }

    pub fn rank(&self, rel_tol: f64) -> usize {
        let eig = SymmetricEigen::new(self.shape.clone());
        let max = eig.eigenvalues.amax();
        eig.eigenvalues.iter().filter(|&&l| l > rel_tol * max.max(f64::MIN_POSITIVE)).count()
    }
}

/// κ_n, the volume of the unit ball in ℝⁿ (κ_0 = 1).
pub fn unit_ball_volume(n: usize) -> f64 {
    // κ_n = κ_{n-2} · 2π / n
    let (mut k, start) = if n.is_multiple_of(2) { (1.0, 2) } else { (2.0, 3) };
    let mut m = start;
    while m <= n {
        k *= 2.0 * PI / m as f64;
        m += 2;
    }
    k
}

/// κ_n · sqrt(det M).
pub fn ellipsoid_volume(e: &Ellipsoid) -> f64 {
    unit_ball_volume(e.dim()) * e.determinant().sqrt()
}
