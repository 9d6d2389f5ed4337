//! Real branches of the Lambert W function.
//!
//! On `[-1/e, 0)` both branches reduce to the inverse branches of
//! `f(x) = x e^(1-x)`: `W(v) = -x` with `f(x) = -e v`. The distance to the
//! branch point, `e v + 1`, is formed with a split constant so it keeps full
//! relative precision as `v → -1/e`. On `v > 0` the principal branch is a
//! Halley iteration on `w + ln w = ln v`, which cannot overflow.

use super::branch::{double_root_series, solve_branch, Branch};
use super::{Precision, E_HI, E_LO};
use crate::error::{Error, Result};

const EPS: f64 = f64::EPSILON;
const MAX_ITER: usize = 100;
/// Inside this distance of `-1/e` the branch-point series is returned
/// without refinement; its truncation error there is below 1e-23.
const SERIES_BAND: f64 = 1e-6;

/// `e v + 1`, accurate near `v = -1/e`.
fn branch_gap(v: f64) -> f64 {
    E_HI.mul_add(v, 1.0) + E_LO * v
}

/// Common handling of `v ∈ [-1/e, 0)`; returns `w`.
fn negative_branch(v: f64, branch: Branch, func: &'static str) -> Result<f64> {
    let gap = branch_gap(v);
    if gap < 0.0 {
        if v < -std::f64::consts::E.recip() - Precision::default().abs_tol {
            return Err(Error::domain(func, format!("v = {v} < -1/e")));
        }
        return Ok(-1.0);
    }
    if gap == 0.0 {
        return Ok(-1.0);
    }
    // z = -e v, s = -ln z; use whichever form is exact.
    let z = -(E_HI * v) - E_LO * v;
    let s = if gap < 0.5 { -(-gap).ln_1p() } else { -z.ln() };
    if (v + std::f64::consts::E.recip()).abs() < SERIES_BAND {
        let q = (2.0 * s).sqrt();
        let y = match branch {
            Branch::Lower => double_root_series(-q),
            Branch::Upper => double_root_series(q),
        };
        return Ok(-(1.0 + y));
    }
    let (x, _) = solve_branch(z, s, branch);
    Ok(-x)
}

/// Principal branch `W0(v) ≥ -1`, defined for `v ≥ -1/e`.
pub fn lambert_w0(v: f64) -> Result<f64> {
    if !v.is_finite() {
        return Err(Error::domain("lambert_w0", format!("v = {v} is not finite")));
    }
    if v == 0.0 {
        return Ok(0.0);
    }
    if v < 0.0 {
        return negative_branch(v, Branch::Lower, "lambert_w0");
    }
    // Winitzki's approximation, then Halley.
    let l = v.ln_1p();
    let mut w = l * (1.0 - l.ln_1p() / (2.0 + l));
    if v < 1.0 {
        return halley_direct(v, w);
    }
    // g(w) = w + ln w - ln v; for small v the two logs cancel, hence the
    // direct residual above.
    let ln_v = v.ln();
    for _ in 0..MAX_ITER {
        let g = w + w.ln() - ln_v;
        if g == 0.0 {
            return Ok(w);
        }
        // g' = 1 + 1/w, g'' = -1/w^2
        let newton = g * w / (w + 1.0);
        let step = newton / (1.0 + 0.5 * newton / (w * (w + 1.0)));
        let mut next = w - step;
        if next <= 0.0 {
            next = 0.5 * w;
        }
        let done = (next - w).abs() <= 2.0 * EPS * next;
        w = next;
        if done {
            return Ok(w);
        }
    }
    Err(Error::NoConvergence {
        func: "lambert_w0",
        iterations: MAX_ITER,
        achieved: (w * w.exp() - v).abs() / v,
    })
}

/// Halley on `w e^w - v` for `0 < v < 1`, where `w < 0.6`.
fn halley_direct(v: f64, mut w: f64) -> Result<f64> {
    for _ in 0..MAX_ITER {
        let ew = w.exp();
        let f = w.mul_add(ew, -v);
        if f == 0.0 {
            return Ok(w);
        }
        let d = ew * (w + 1.0);
        let next = w - f / (d - (w + 2.0) * f / (2.0 * w + 2.0));
        let done = (next - w).abs() <= 2.0 * EPS * next;
        w = next;
        if done {
            return Ok(w);
        }
    }
    Err(Error::NoConvergence {
        func: "lambert_w0",
        iterations: MAX_ITER,
        achieved: (w * w.exp() - v).abs() / v,
    })
}

/// Lower branch `W₋₁(v) ≤ -1`, defined for `-1/e ≤ v < 0`.
pub fn lambert_wm1(v: f64) -> Result<f64> {
    if !(v.is_finite() && v < 0.0) {
        return Err(Error::domain(
            "lambert_wm1",
            format!("v = {v} outside [-1/e, 0)"),
        ));
    }
    negative_branch(v, Branch::Upper, "lambert_wm1")
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::E;

    #[test]
    fn principal_branch_values() {
        assert_eq!(lambert_w0(0.0).unwrap(), 0.0);
        assert!((lambert_w0(E).unwrap() - 1.0).abs() < 1e-15);
        assert_eq!(lambert_w0(-1.0 / E).unwrap(), -1.0);
        // Ω constant: W0(1)
        assert!((lambert_w0(1.0).unwrap() - 0.567_143_290_409_783_8).abs() < 1e-16);
    }

    #[test]
    fn lower_branch_values() {
        assert_eq!(lambert_wm1(-1.0 / E).unwrap(), -1.0);
        assert!((lambert_wm1(-2.0 / (E * E)).unwrap() + 2.0).abs() < 1e-14);
        assert!((lambert_wm1(-0.1).unwrap() + 3.577_152_063_957_297).abs() < 1e-14);
    }

    #[test]
    fn branch_point_neighbourhood() {
        // W ≈ -1 ± p - p²/3 with p = sqrt(2(ev + 1))
        let v = -1.0 / E + 1e-9;
        let p = (2.0 * branch_gap(v)).sqrt();
        let w0 = lambert_w0(v).unwrap();
        let wm1 = lambert_wm1(v).unwrap();
        assert!((w0 - (-1.0 + p - p * p / 3.0)).abs() < 1e-12);
        assert!((wm1 - (-1.0 - p - p * p / 3.0)).abs() < 1e-12);
        assert!(w0 > -1.0 && wm1 < -1.0);
    }

    #[test]
    fn domain_errors() {
        assert!(lambert_w0(-0.5).is_err());
        assert!(lambert_w0(f64::NAN).is_err());
        assert!(lambert_wm1(0.0).is_err());
        assert!(lambert_wm1(0.1).is_err());
        assert!(lambert_wm1(-0.5).is_err());
        // slack at the branch point itself
        assert_eq!(lambert_w0(-1.0 / E - 1e-17).unwrap(), -1.0);
    }

    #[test]
    fn large_and_tiny_arguments() {
        for &v in &[1e-300, 1e-20, 1e-5, 1e3, 1e6, 1e300] {
            let w = lambert_w0(v).unwrap();
            // w e^w = v  <=>  w + ln w = ln v
            assert!((w + w.ln() - v.ln()).abs() <= 4e-12 * v.ln().abs().max(1.0));
        }
        let w = lambert_wm1(-1e-300).unwrap();
        assert!((w + (-w).ln() - (1e-300f64).ln()).abs() < 1e-12 * 700.0);
    }
}
