//! Logarithmic mean, the threshold function λ, and the refined mean G̃.
//!
//! With `u = ln y` the numerator and denominator of
//! `λ(y) = (y - l²) / ((l - 1)(y - l))`, `l = L(1, y)`, both vanish to fourth
//! order at `y = 1`. Multiplying through by `y` turns them into
//!
//! ```text
//! -2 (cosh u - 1 - u²/2) e^u     and     (e^u - 1 - u)(u e^u - e^u + 1),
//! ```
//!
//! each a power series with positive coefficients. Summing those series
//! directly gives λ to full relative precision arbitrarily close to `y = 1`;
//! for large `u` a form scaled by `e^(-2u)` avoids overflow.

use crate::error::{Error, Result};

fn check_positive(func: &'static str, name: &str, v: f64) -> Result<()> {
    if !(v.is_finite() && v > 0.0) {
        return Err(Error::domain(func, format!("{name} = {v} must be finite and > 0")));
    }
    Ok(())
}

/// Logarithmic mean `L(x, y) = (y - x) / (ln y - ln x)`, with `L(x, x) = x`.
pub fn log_mean(x: f64, y: f64) -> Result<f64> {
    check_positive("log_mean", "x", x)?;
    check_positive("log_mean", "y", y)?;
    let (lo, hi) = if x <= y { (x, y) } else { (y, x) };
    if lo == hi {
        return Ok(lo);
    }
    let d = (hi - lo) / lo;
    let l = if d.is_finite() {
        lo * (d / d.ln_1p())
    } else {
        (hi - lo) / (hi.ln() - lo.ln())
    };
    Ok(l.clamp(lo, hi))
}

/// λ expressed through `u = ln y > 0`.
pub fn lambda_of_log_ratio(u: f64) -> f64 {
    if u <= 2.0 {
        // rounding can land an ulp or two under the infimum next to u = 0
        lambda_series(u).max(-1.0 / 3.0)
    } else {
        lambda_scaled(u)
    }
}

fn lambda_series(u: f64) -> f64 {
        // F = Σ_{k≥2} u^(2k-4)/(2k)!, A = Σ_{k≥2} u^(k-2)/k!,
        // B = Σ_{k≥2} (k-1) u^(k-2)/k!; λ = -2 F e^u / (A B).
        let u2 = u * u;
        let mut f = 0.0;
        let mut term = 1.0 / 24.0;
        let mut k = 2.0;
        while term > 1e-18 * f {
            f += term;
            term *= u2 / ((2.0 * k + 1.0) * (2.0 * k + 2.0));
            k += 1.0;
        }
        let mut a = 0.0;
        let mut b = 0.0;
        let mut t = 0.5; // u^(k-2)/k! at k = 2
        let mut k = 2.0;
        while t > 1e-18 * a {
            a += t;
            b += (k - 1.0) * t;
            t *= u / (k + 1.0);
            k += 1.0;
        }
        -2.0 * f * u.exp() / (a * b)
}

fn lambda_scaled(u: f64) -> f64 {
        let em = (-u).exp();
        let num = 1.0 + em * em - (2.0 + u * u) * em;
        let den = (1.0 - (1.0 + u) * em) * (u - 1.0 + em);
        -num / den
}

/// `λ(y) = (y - l(y)²) / ((l(y) - 1)(y - l(y)))` with `l(y) = L(1, y)`,
/// for `y > 1`. Increases from `-1/3` at `y = 1+` towards `0`.
pub fn lambda_fn(y: f64) -> Result<f64> {
    if !(y.is_finite() && y > 1.0) {
        return Err(Error::domain("lambda_fn", format!("y = {y} must be finite and > 1")));
    }
    Ok(lambda_of_log_ratio(y.ln()))
}

/// `G̃(x, y) = sqrt(xy + (L - x)(y - L)/3)`; `G̃(x, x) = x`.
pub fn g_tilde(x: f64, y: f64) -> Result<f64> {
    check_positive("g_tilde", "x", x)?;
    check_positive("g_tilde", "y", y)?;
    let (lo, hi) = if x <= y { (x, y) } else { (y, x) };
    if lo == hi {
        return Ok(lo);
    }
    let l = log_mean(lo, hi)?;
    Ok((lo * hi + (l - lo) * (hi - l) / 3.0).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::E;

    #[test]
    fn log_mean_values() {
        assert!((log_mean(1.0, E).unwrap() - (E - 1.0)).abs() < 1e-15);
        assert_eq!(log_mean(3.0, 3.0).unwrap(), 3.0);
        let want = 3.0 / 4f64.ln();
        assert!((log_mean(1.0, 4.0).unwrap() - want).abs() < 1e-15);
        assert_eq!(log_mean(1.0, 4.0).unwrap(), log_mean(4.0, 1.0).unwrap());
        assert!(log_mean(0.0, 1.0).is_err());
        assert!(log_mean(1.0, -2.0).is_err());
    }

    #[test]
    fn lambda_values() {
        assert!((lambda_fn(1.0 + 1e-8).unwrap() + 1.0 / 3.0).abs() < 1e-6);
        // 40-digit references of the defining formula
        assert!((lambda_fn(E).unwrap() + 0.326_070_637_281_712_4).abs() < 1e-15);
        let big = lambda_fn(1e12).unwrap();
        assert!((big + 0.037_550_193_622_316_65).abs() < 1e-15);
        assert!(big > -0.05 && big < 0.0);
        assert!(lambda_fn(1.0).is_err());
        assert!(lambda_fn(0.5).is_err());
    }

    #[test]
    fn lambda_series_and_scaled_forms_agree_at_switch() {
        for &u in &[1.5, 2.0, 3.0] {
            assert!((lambda_series(u) - lambda_scaled(u)).abs() < 1e-15);
        }
    }

    #[test]
    fn lambda_matches_direct_formula_away_from_one() {
        for &y in &[1.5, 3.0, 10.0, 1e3] {
            let l = (y - 1.0) / f64::ln(y);
            let direct = (y - l * l) / ((l - 1.0) * (y - l));
            assert!((lambda_fn(y).unwrap() - direct).abs() < 1e-13);
        }
    }

    #[test]
    fn g_tilde_values() {
        assert_eq!(g_tilde(3.0, 3.0).unwrap(), 3.0);
        let g = g_tilde(1.0, 4.0).unwrap();
        assert!((g - 2.170_801_127_034_641_4).abs() < 1e-15);
        assert!(2.16404 < g && g < 2.5);
        let (x, y) = (1.0, E);
        let g = g_tilde(x, y).unwrap();
        let l = log_mean(x, y).unwrap();
        assert!((x * y).sqrt() < l && l < g && g < (x + y) / 2.0);
    }
}
