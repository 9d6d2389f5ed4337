use serde::Serialize;

use crate::error::{Error, Result};
use crate::quad::{integrate, QuadTol};
use crate::specfun::{log1pmx, Precision};

/// `g(ε, z) = 1 - (1 - bε)(1 - zε)^(1/ε - b - 1) e^z`.
///
/// The exponent is `ln(1 - bε) + (1/ε)·(ln(1 - zε) + zε) - (b+1) ln(1 - zε)`;
/// the middle term is formed without cancellation.
pub fn g_eps(b: f64, eps: f64, z: f64) -> f64 {
    let e = (-b * eps).ln_1p() + log1pmx(-z * eps) / eps - (b + 1.0) * (-z * eps).ln_1p();
    -e.exp_m1()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AsymptoticPoint {
    pub eps: f64,
    /// `2 ∫_0^1 g(ε, z) dz`
    pub value: f64,
    pub err: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AsymptoticReport {
    pub c: f64,
    pub b: f64,
    pub points: Vec<AsymptoticPoint>,
    /// Least-squares fit `value ≈ slope·ε + curvature·ε²`.
    pub slope: f64,
    pub curvature: f64,
    /// `b - 2/3`
    pub expected_slope: f64,
    pub slope_rel_err: f64,
    /// Largest fit residual, expected to scale like `ε³`.
    pub max_residual: f64,
    pub all_positive: bool,
    /// Slope within `slope_tol` (relative) and every value positive.
    pub passed: bool,
}

/// Relative tolerance on the fitted slope.
pub const SLOPE_TOL: f64 = 0.02;

/// Fit `2 ∫_0^1 g(ε, z) dz` against `ε` and compare the slope with `b - 2/3`.
pub fn check_asymptotic(c: f64, eps_list: &[f64], prec: Precision) -> Result<AsymptoticReport> {
    prec.validate()?;
    if !(c > -1.0 / 3.0 && c < 0.0) {
        return Err(Error::domain("check_asymptotic", format!("c = {c} must lie in (-1/3, 0)")));
    }
    if eps_list.len() < 2 {
        return Err(Error::Config("need at least two ε values for the fit".into()));
    }
    if let Some(&e) = eps_list.iter().find(|&&e| !(e > 0.0 && e < 0.2)) {
        return Err(Error::domain("check_asymptotic", format!("ε = {e} must lie in (0, 0.2)")));
    }
    let b = 1.0 + c;
    let tol = QuadTol {
        abs: 0.0,
        rel: prec.rel_tol,
        max_panels: 10_000,
    };
    let mut points = Vec::with_capacity(eps_list.len());
    for &eps in eps_list {
        let q = integrate(|z| g_eps(b, eps, z), 0.0, 1.0, tol)?;
        points.push(AsymptoticPoint {
            eps,
            value: 2.0 * q.value,
            err: 2.0 * q.err,
        });
    }
    // normal equations for value = s ε + K ε²
    let (mut s22, mut s23, mut s24, mut sy1, mut sy2) = (0.0, 0.0, 0.0, 0.0, 0.0);
    for p in &points {
        let e = p.eps;
        s22 += e * e;
        s23 += e * e * e;
        s24 += e * e * e * e;
        sy1 += p.value * e;
        sy2 += p.value * e * e;
    }
    let det = s22 * s24 - s23 * s23;
    let slope = (sy1 * s24 - sy2 * s23) / det;
    let curvature = (s22 * sy2 - s23 * sy1) / det;
    let expected_slope = b - 2.0 / 3.0;
    let slope_rel_err = (slope - expected_slope).abs() / expected_slope;
    let max_residual = points
        .iter()
        .map(|p| (p.value - slope * p.eps - curvature * p.eps * p.eps).abs())
        .fold(0.0, f64::max);
    let all_positive = points.iter().all(|p| p.value > p.err);
    Ok(AsymptoticReport {
        c,
        b,
        points,
        slope,
        curvature,
        expected_slope,
        slope_rel_err,
        max_residual,
        all_positive,
        passed: all_positive && slope_rel_err <= SLOPE_TOL,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn g_at_zero_is_linear() {
        for eps in [0.1, 0.01, 1e-4] {
            assert!((g_eps(0.8, eps, 0.0) - 0.8 * eps).abs() < 1e-15 * eps);
        }
    }

    #[test]
    fn slope_matches_the_expansion() {
        let r = check_asymptotic(-0.2, &[0.02, 0.01, 0.005, 0.0025], Precision::default())
            .unwrap();
        assert!(r.passed, "{r:?}");
        let at_001 = r.points[1].value;
        assert!((at_001 - 0.001_333).abs() < 1e-4, "{at_001}");
        assert!(check_asymptotic(-0.5, &[0.01, 0.02], Precision::default()).is_err());
    }
}
