//! Dilation asymptotics: the real fraction of `Λ_m = mΔ ∩ ℤⁿ` as `m` grows.
//!
//! For ball bodies two candidate limit constants exist: the one from the
//! moment integral of the ball, `(1/(n+2))^{n/2}`, and the literal
//! `(β_n/σ_n)^{n/2}`. Both are reported; the verdict states which one the
//! finite-m data approaches.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{hausdorff_distance, ConvexBody};
use crate::lattice::{check_condition_star, dilate_and_intersect, BodySpec, SupportSet};
use crate::mixedvol::{bkk_count, expected_real_roots_deterministic, limit_real_fraction};
use crate::moments::{ball_constants, limit_moment_matrix, moment_matrix};
use crate::rootcount::{mc_expected_roots, RootKind};
use crate::stats::McConfig;

/// Directions used for Hausdorff distances between ellipsoids.
pub const HAUSDORFF_DIRECTIONS: usize = 4096;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AsymptoticRow {
    pub m: i64,
    /// `#Λ_m`.
    pub lattice_points: usize,
    pub expected_real: f64,
    pub bkk: u64,
    /// `None` when `Λ_m` spans a lower-dimensional set.
    pub fraction: Option<f64>,
    /// Limit from the moment integral of the body.
    pub limit: f64,
    /// Literal ball constant `(β_n/σ_n)^{n/2}`; balls only.
    pub literal_limit: Option<f64>,
    /// Distance between `(1/m)·ell(Λ_m)` and `ell(Δ)`.
    pub hausdorff: f64,
    /// Monte Carlo real fraction from actual root counts, when requested.
    pub mc_fraction: Option<f64>,
    pub mc_std_error: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SupportedConstant {
    MomentIntegral,
    Literal,
    Undetermined,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Verdict {
    pub supported: SupportedConstant,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AsymptoticsReport {
    pub dim: usize,
    pub limit: f64,
    pub literal_limit: Option<f64>,
    pub rows: Vec<AsymptoticRow>,
    /// Present for balls, where two constants compete.
    pub verdict: Option<Verdict>,
}

/// Monte Carlo column settings: rows with `m <= max_m` also get actual root counts.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McColumn {
    pub config: McConfig,
    pub max_m: i64,
}

pub fn asymptotics(body: &BodySpec, m_list: &[i64], mc: Option<McColumn>) -> Result<AsymptoticsReport> {
    let n = body.dim();
    if !(1..=3).contains(&n) {
        return Err(Error::UnsupportedDimension(n));
    }
    let star = check_condition_star(body);
    if !star.holds {
        return Err(Error::ConditionStarViolated(star.message));
    }
    let limit = limit_real_fraction(&vec![body.clone(); n])?;
    let literal_limit = match body {
        BodySpec::Ball { .. } => Some(ball_constants(n)?.literal_fraction),
        BodySpec::Polytope { .. } => None,
    };
    let limit_ellipsoid = ConvexBody::from(limit_moment_matrix(body)?);
    let mut ms = m_list.to_vec();
    ms.sort_unstable();
    ms.dedup();
    let mut rows = Vec::with_capacity(ms.len());
    for m in ms {
        let support = dilate_and_intersect(body, m)?;
        let supports: Vec<SupportSet> = vec![support.clone(); n];
        let bkk = bkk_count(&supports)?;
        let expected_real = expected_real_roots_deterministic(&supports)?;
        let fraction = (bkk > 0).then(|| expected_real / bkk as f64);
        let scaled = ConvexBody::from(moment_matrix(&support).scaled(1.0 / m as f64));
        let hausdorff = hausdorff_distance(&scaled, &limit_ellipsoid, HAUSDORFF_DIRECTIONS)?;
        let (mut mc_fraction, mut mc_std_error) = (None, None);
        if let Some(col) = mc.filter(|c| m <= c.max_m && n <= 2 && bkk > 0) {
            let est = mc_expected_roots(&supports, &col.config, RootKind::Real, None)?.estimate;
            mc_fraction = Some(est.value / bkk as f64);
            mc_std_error = Some(est.std_error / bkk as f64);
        }
        log::debug!("m = {m}: {} points, fraction {fraction:?}", support.len());
        rows.push(AsymptoticRow {
            m,
            lattice_points: support.len(),
            expected_real,
            bkk,
            fraction,
            limit,
            literal_limit,
            hausdorff,
            mc_fraction,
            mc_std_error,
        });
    }
    let verdict = literal_limit.map(|literal| verdict(&rows, limit, literal));
    Ok(AsymptoticsReport { dim: n, limit, literal_limit, rows, verdict })
}

/// Compares the largest-m fraction against both candidates; the data supports
/// a candidate when it is at least four times closer than the other.
fn verdict(rows: &[AsymptoticRow], limit: f64, literal: f64) -> Verdict {
    let Some((m, last)) = rows.iter().rev().find_map(|r| r.fraction.map(|f| (r.m, f))) else {
        return Verdict { supported: SupportedConstant::Undetermined, message: "no row has a defined fraction".into() };
    };
    if (limit - literal).abs() < 1e-12 {
        return Verdict {
            supported: SupportedConstant::MomentIntegral,
            message: format!("both constants equal {limit:.6} in this dimension; fraction at m = {m} is {last:.6}"),
        };
    }
    let (d_limit, d_literal) = ((last - limit).abs(), (last - literal).abs());
    let supported = if d_limit * 4.0 <= d_literal {
        SupportedConstant::MomentIntegral
    } else if d_literal * 4.0 <= d_limit {
        SupportedConstant::Literal
    } else {
        SupportedConstant::Undetermined
    };
    let message = match supported {
        SupportedConstant::MomentIntegral => format!(
            "fraction at m = {m} is {last:.6}: {d_limit:.2e} from the moment-integral limit {limit:.6}, \
             {d_literal:.2e} from the literal constant {literal:.6}; the data supports the moment-integral limit"
        ),
        SupportedConstant::Literal => format!(
            "fraction at m = {m} is {last:.6}: {d_literal:.2e} from the literal constant {literal:.6}, \
             {d_limit:.2e} from the moment-integral limit {limit:.6}; the data supports the literal constant"
        ),
        SupportedConstant::Undetermined => format!(
            "fraction at m = {m} is {last:.6}, not clearly closer to {limit:.6} (moment integral) \
             than to {literal:.6} (literal); use larger m"
        ),
    };
    Verdict { supported, message }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;
    use approx::assert_relative_eq;

    #[test]
    fn interval_approaches_inverse_sqrt_three() {
        let r = asymptotics(&BodySpec::ball(int(1), 1), &[1, 10, 50], None).unwrap();
        assert_relative_eq!(r.limit, 1.0 / 3f64.sqrt(), epsilon = 1e-15);
        let f50 = r.rows[2].fraction.unwrap();
        assert_relative_eq!(f50, (850f64).sqrt() / 50.0, epsilon = 1e-12);
        assert_eq!(r.verdict.unwrap().supported, SupportedConstant::MomentIntegral);
        assert!(r.rows[0].hausdorff > r.rows[2].hausdorff);
    }

    #[test]
    fn disk_discriminates_the_constants() {
        let r = asymptotics(&BodySpec::ball(int(1), 2), &[5, 20, 40], None).unwrap();
        assert_relative_eq!(r.limit, 0.25, epsilon = 1e-14);
        assert_relative_eq!(r.literal_limit.unwrap(), 0.125, epsilon = 1e-14);
        let v = r.verdict.unwrap();
        assert_eq!(v.supported, SupportedConstant::MomentIntegral, "{}", v.message);
    }

    #[test]
    fn square_has_no_literal_constant() {
        let r = asymptotics(&BodySpec::cube(int(1), 2), &[3], None).unwrap();
        assert!(r.verdict.is_none());
        assert_relative_eq!(r.rows[0].fraction.unwrap(), std::f64::consts::PI * 4.0 / 36.0, epsilon = 1e-12);
    }
}
