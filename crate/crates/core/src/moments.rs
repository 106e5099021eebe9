//! Second-moment forms of supports and bodies, and the ball constants β_n, σ_n.
//!
//! `moment_matrix(Λ)` is `(1/N) Σ λλᵀ`, whose square-rooted quadratic form is
//! the support function of `ell(Λ)`. For a body Δ the limit form is the
//! normalised second moment `(1/vol_k Δ) ∫_Δ xxᵀ dx`; dilations `Λ_m = mΔ ∩ ℤⁿ`
//! satisfy `moment_matrix(Λ_m)/m² → limit_moment_matrix(Δ)`.

use nalgebra::DMatrix;
use num_traits::Zero;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{unit_ball_volume, Ellipsoid};
use crate::lattice::{check_condition_star, BodySpec, SupportSet};
use crate::quadrature;
use crate::rational::{to_f64, Rational};

/// `ell(Λ)`: the ellipsoid with shape `(1/N) Σ_{λ∈Λ} λλᵀ`.
pub fn moment_matrix(support: &SupportSet) -> Ellipsoid {
    let n = support.dim();
    let mut sum = vec![vec![0i128; n]; n];
    for p in support.points() {
        let c = p.coords();
        for i in 0..n {
            for j in 0..n {
                sum[i][j] += c[i] as i128 * c[j] as i128;
            }
        }
    }
    let count = support.len() as f64;
    let shape = DMatrix::from_fn(n, n, |i, j| sum[i][j] as f64 / count);
    Ellipsoid::new(shape).expect("Gram matrices are PSD")
}

/// `ell(Δ)`: the ellipsoid with shape `(1/vol_k Δ) ∫_Δ xxᵀ dx`.
///
/// Balls use `R²/(n+2)·I`. Polytopes are fanned from the origin into simplices
/// inside their span; a k-simplex with vertices `v_0..v_k` contributes
/// `vol·(Σ vᵢvᵢᵀ + (Σ vᵢ)(Σ vᵢ)ᵀ)/((k+1)(k+2))`, all in exact arithmetic.
pub fn limit_moment_matrix(body: &BodySpec) -> Result<Ellipsoid> {
    let star = check_condition_star(body);
    if !star.holds {
        return Err(Error::ConditionStarViolated(star.message));
    }
    match body {
        BodySpec::Ball { radius, dim } => {
            let r = to_f64(&radius.0);
            Ok(Ellipsoid::new(DMatrix::identity(*dim, *dim) * (r * r / (*dim as f64 + 2.0)))?)
        }
        BodySpec::Polytope { .. } => {
            let poly = body.to_polytope()?.expect("polytope body");
            let n = poly.dim();
            let k = poly.intrinsic_dim();
            if k == 0 {
                return Ellipsoid::new(DMatrix::zeros(n, n));
            }
            let origin = vec![Rational::zero(); n];
            let denom = Rational::from_integer(((k + 1) * (k + 2)) as i128);
            let mut total = Rational::zero();
            let mut acc = vec![vec![Rational::zero(); n]; n];
            for (vol, verts) in poly.fan(&origin) {
                let s: Vec<Rational> = (0..n).map(|j| verts.iter().fold(Rational::zero(), |a, v| a + v[j])).collect();
                for i in 0..n {
                    for j in 0..n {
                        let vv = verts.iter().fold(Rational::zero(), |a, v| a + v[i] * v[j]);
                        acc[i][j] += vol * (vv + s[i] * s[j]) / denom;
                    }
                }
                total += vol;
            }
            let shape = DMatrix::from_fn(n, n, |i, j| to_f64(&(acc[i][j] / total)));
            Ellipsoid::new(shape)
        }
    }
}

/// σ_n, the volume of the unit n-ball.
pub fn sigma_n(n: usize) -> f64 {
    unit_ball_volume(n)
}

/// β_n = √π Γ((n+1)/2) / (2 Γ(n/2 + 2)), evaluated through the Γ-ratio
/// recurrence β_{n+2} = β_n (n+1)/(n+4) from β_1 = 2/3, β_2 = π/8.
pub fn beta_closed_form(n: usize) -> f64 {
    assert!(n >= 1, "β_n needs n >= 1");
    let (mut b, mut m) = if n % 2 == 1 { (2.0 / 3.0, 1) } else { (std::f64::consts::PI / 8.0, 2) };
    while m < n {
        b *= (m + 1) as f64 / (m + 4) as f64;
        m += 2;
    }
    b
}

/// β_n = ∫_{-1}^{1} x² (1 - x²)^((n-1)/2) dx by adaptive quadrature.
pub fn beta_quadrature(n: usize) -> f64 {
    let p = (n as f64 - 1.0) / 2.0;
    let f = move |x: f64| x * x * (1.0 - x * x).max(0.0).powf(p);
    quadrature::integrate(&f, -1.0, 1.0, 1e-14)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BetaValue {
    pub n: usize,
    pub closed_form: f64,
    pub quadrature: f64,
    pub difference: f64,
}

pub fn beta_n(n: usize) -> Result<BetaValue> {
    if !(1..=64).contains(&n) {
        return Err(Error::InvalidInput(format!("β_n is tabulated for 1 <= n <= 64, got {n}")));
    }
    let closed_form = beta_closed_form(n);
    let quadrature = beta_quadrature(n);
    Ok(BetaValue { n, closed_form, quadrature, difference: closed_form - quadrature })
}

/// Ball constants: the normalised second moment of the unit n-ball through
/// two routes, and the two candidate limit fractions built from them.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BallConstants {
    pub n: usize,
    pub beta: f64,
    pub sigma: f64,
    /// 1/(n+2), direct second moment of the unit ball.
    pub second_moment: f64,
    /// σ_{n-1} β_n / σ_n, the same moment by slicing.
    pub sliced_second_moment: f64,
    /// β_n / σ_n.
    pub literal_ratio: f64,
    /// (1/(n+2))^{n/2}.
    pub limit_fraction: f64,
    /// (β_n/σ_n)^{n/2}.
    pub literal_fraction: f64,
}

pub fn ball_constants(n: usize) -> Result<BallConstants> {
    let beta = beta_n(n)?.closed_form;
    let sigma = sigma_n(n);
    let second_moment = 1.0 / (n as f64 + 2.0);
    let literal_ratio = beta / sigma;
    let half = n as f64 / 2.0;
    Ok(BallConstants {
        n,
        beta,
        sigma,
        second_moment,
        sliced_second_moment: sigma_n(n - 1) * beta_quadrature(n) / sigma,
        literal_ratio,
        limit_fraction: second_moment.powf(half),
        literal_fraction: literal_ratio.powf(half),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::validate_support;
    use crate::rational::int;
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    #[test]
    fn moment_matrix_examples() {
        for lambda in [1i64, 2, 5, 11] {
            let m = moment_matrix(&SupportSet::interval(lambda));
            assert_relative_eq!(m.shape()[(0, 0)], (lambda * (lambda + 1)) as f64 / 3.0, epsilon = 1e-12);
            let pair = moment_matrix(&validate_support(vec![vec![-lambda], vec![lambda]]).unwrap());
            assert_relative_eq!(pair.shape()[(0, 0)], (lambda * lambda) as f64);
        }
        let cross = validate_support(vec![vec![0, 0], vec![1, 0], vec![-1, 0], vec![0, 1], vec![0, -1]]).unwrap();
        let m = moment_matrix(&cross);
        assert_relative_eq!(m.shape()[(0, 0)], 0.4);
        assert_relative_eq!(m.shape()[(1, 1)], 0.4);
        assert_eq!(m.shape()[(0, 1)], 0.0);
        let zero = moment_matrix(&validate_support(vec![vec![0, 0]]).unwrap());
        assert!(zero.shape().iter().all(|&x| x == 0.0));
    }

    #[test]
    fn limit_moment_examples() {
        let seg = limit_moment_matrix(&BodySpec::ball(int(1), 1)).unwrap();
        assert_relative_eq!(seg.shape()[(0, 0)], 1.0 / 3.0);
        let disk = limit_moment_matrix(&BodySpec::ball(int(3), 2)).unwrap();
        assert_relative_eq!(disk.shape()[(0, 0)], 9.0 / 4.0);
        let sq = limit_moment_matrix(&BodySpec::cube(int(1), 2)).unwrap();
        assert_relative_eq!(sq.shape()[(0, 0)], 1.0 / 3.0, epsilon = 1e-15);
        assert_relative_eq!(sq.shape()[(1, 1)], 1.0 / 3.0, epsilon = 1e-15);
        assert_eq!(sq.shape()[(0, 1)], 0.0);
        let interval = limit_moment_matrix(&BodySpec::cube(int(1), 1)).unwrap();
        assert_relative_eq!(interval.shape()[(0, 0)], 1.0 / 3.0, epsilon = 1e-15);
        let cube = limit_moment_matrix(&BodySpec::cube(int(2), 3)).unwrap();
        assert_relative_eq!(cube.shape()[(2, 2)], 4.0 / 3.0, epsilon = 1e-14);
    }

    #[test]
    fn degenerate_polytope_moment() {
        // Segment conv{±(1,1)}: uniform on the diagonal, E[xxᵀ] = vvᵀ/3.
        let seg = BodySpec::polytope(vec![vec![int(1), int(1)], vec![int(-1), int(-1)]]);
        let m = limit_moment_matrix(&seg).unwrap();
        for i in 0..2 {
            for j in 0..2 {
                assert_relative_eq!(m.shape()[(i, j)], 1.0 / 3.0, epsilon = 1e-15);
            }
        }
    }

    #[test]
    fn beta_examples() {
        assert_relative_eq!(beta_n(1).unwrap().closed_form, 2.0 / 3.0);
        assert_relative_eq!(beta_n(2).unwrap().closed_form, PI / 8.0);
        assert_relative_eq!(beta_n(10).unwrap().closed_form, 21.0 * PI / 1024.0, max_relative = 1e-14);
        for n in 1..=64 {
            let b = beta_n(n).unwrap();
            assert!(b.difference.abs() <= 1e-10 * b.closed_form, "n={n}: {b:?}");
        }
        assert!(beta_n(0).is_err());
        assert!(beta_n(65).is_err());
    }

    #[test]
    fn sigma_examples() {
        assert_eq!(sigma_n(1), 2.0);
        assert_relative_eq!(sigma_n(2), PI);
        assert_relative_eq!(sigma_n(3), 4.0 * PI / 3.0);
    }

    #[test]
    fn slicing_identity() {
        for n in 1..=10 {
            let c = ball_constants(n).unwrap();
            assert!((c.sliced_second_moment - c.second_moment).abs() < 1e-10, "{c:?}");
        }
        let c1 = ball_constants(1).unwrap();
        assert_relative_eq!(c1.limit_fraction, 1.0 / 3f64.sqrt(), epsilon = 1e-15);
        assert_relative_eq!(c1.literal_fraction, 1.0 / 3f64.sqrt(), epsilon = 1e-15);
        let c2 = ball_constants(2).unwrap();
        assert_relative_eq!(c2.limit_fraction, 0.25);
        assert_relative_eq!(c2.literal_fraction, 0.125, epsilon = 1e-15);
    }
}
