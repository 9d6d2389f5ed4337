//! Plain bisection for Lambert W and the inverse branches of `x e^(1-x)`.
//!
//! Residuals are evaluated in double-double so the bracket keeps shrinking
//! next to the double root at the branch point, where a double-precision
//! residual would stall around the square root of the unit roundoff.

use serde::Serialize;

use super::dd::Dd;
use crate::error::{Error, Result};

/// Which inverse [`oracle_root`] solves for.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RootFn {
    /// `W0(target)`, `target ≥ -1/e`.
    W0,
    /// `W₋₁(target)`, `-1/e ≤ target < 0`.
    Wm1,
    /// `x ∈ (0, 1]` with `x e^(1-x) = target`.
    X1,
    /// `x ∈ [1, ∞)` with `x e^(1-x) = target`.
    X2,
}

const MAX_BISECT: usize = 2200;

/// Bisection on `[lo, hi]`; `above(x)` says whether `x` lies on the `hi`
/// side of the root. Stops when no double separates the endpoints.
fn bisect(mut lo: f64, mut hi: f64, above: impl Fn(f64) -> bool) -> f64 {
    for _ in 0..MAX_BISECT {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if above(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    0.5 * (lo + hi)
}

fn w_residual(w: f64, v: f64) -> f64 {
    // w e^w - v
    (Dd::from(w).exp().mul_f64(w) - Dd::from(v)).hi
}

fn f_residual(x: f64, ln_z: Dd) -> f64 {
    // ln x + 1 - x - ln z, zero exactly on the branch roots
    (Dd::from(x).ln() + Dd::from(1.0 - x) - ln_z).hi
}

/// Solve the chosen inverse on its analytically known monotone bracket.
pub fn oracle_root(which: RootFn, target: f64) -> Result<f64> {
    let bad = |msg: &str| Err(Error::domain("oracle_root", format!("{which:?}: {msg} (target = {target})")));
    if !target.is_finite() {
        return bad("target not finite");
    }
    let inv_e = (-1.0f64).exp();
    match which {
        RootFn::W0 | RootFn::Wm1 => {
            // branch-point residual decides admissibility at double resolution
            if w_residual(-1.0, target) > 0.0 && target < -inv_e {
                return bad("below -1/e");
            }
            match which {
                RootFn::W0 => {
                    if target == 0.0 {
                        return Ok(0.0);
                    }
                    let hi = 1.0 + target.max(1.0).ln();
                    if w_residual(hi, target) < 0.0 {
                        return Err(Error::Bracket { func: "oracle_root", lo: -1.0, hi });
                    }
                    // w e^w increases on [-1, ∞)
                    Ok(bisect(-1.0, hi, |w| w_residual(w, target) > 0.0))
                }
                _ => {
                    if target >= 0.0 {
                        return bad("W-1 needs target < 0");
                    }
                    let lo = 2.0 * (-target).ln() - 2.0;
                    // w e^w decreases on (-∞, -1]
                    Ok(bisect(lo, -1.0, |w| w_residual(w, target) < 0.0))
                }
            }
        }
        RootFn::X1 | RootFn::X2 => {
            if !(target > 0.0 && target <= 1.0) {
                return bad("needs target in (0, 1]");
            }
            if target == 1.0 {
                return Ok(1.0);
            }
            let ln_z = Dd::from(target).ln();
            match which {
                RootFn::X1 => {
                    // z/e ≤ x1 ≤ z; the residual increases on (0, 1)
                    let lo = target * inv_e * (1.0 - 1e-15);
                    let hi = target.min(1.0);
                    Ok(bisect(lo, hi, |x| f_residual(x, ln_z) > 0.0))
                }
                _ => {
                    let s = -target.ln();
                    let hi = 2.0 + 2.0 * s;
                    // the residual decreases on (1, ∞)
                    Ok(bisect(1.0, hi, |x| f_residual(x, ln_z) < 0.0))
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_points() {
        let z = 2.0 / std::f64::consts::E;
        assert!((oracle_root(RootFn::X2, z).unwrap() - 2.0).abs() < 1e-15);
        assert!((oracle_root(RootFn::W0, std::f64::consts::E).unwrap() - 1.0).abs() < 1e-15);
        assert!((oracle_root(RootFn::Wm1, -0.1).unwrap() + 3.577_152_063_957_297).abs() < 1e-14);
    }

    #[test]
    fn near_the_double_root() {
        // x2 - x1 ≈ 2 sqrt(2 (1 - z)) as z → 1
        let z = 1.0 - 1e-10;
        let x1 = oracle_root(RootFn::X1, z).unwrap();
        let x2 = oracle_root(RootFn::X2, z).unwrap();
        let lead = 2.0 * (2.0 * (1.0 - z)).sqrt();
        assert!(((x2 - x1) / lead - 1.0).abs() < 1e-4);
    }

    #[test]
    fn rejects_out_of_range() {
        assert!(oracle_root(RootFn::W0, -0.5).is_err());
        assert!(oracle_root(RootFn::Wm1, 0.5).is_err());
        assert!(oracle_root(RootFn::X1, 1.5).is_err());
        assert!(oracle_root(RootFn::X2, 0.0).is_err());
    }
}
