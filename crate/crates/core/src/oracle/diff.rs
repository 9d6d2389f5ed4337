//! Central finite differences with a Richardson-style error estimate.

use serde::Serialize;

/// A derivative estimate and its estimated absolute error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FdEstimate {
    pub value: f64,
    pub err: f64,
}

/// `(f(x+h) - f(x-h)) / 2h`.
///
/// The error estimate combines the truncation term, read off the change
/// between steps `h` and `2h` (the leading error scales like `h²`, so the
/// change is three times it; the full change is kept as a safety factor),
/// with the rounding in the function values.
pub fn fd_derivative<F: Fn(f64) -> f64>(f: F, x: f64, h: f64) -> FdEstimate {
    let (fp, fm) = (f(x + h), f(x - h));
    let (fp2, fm2) = (f(x + 2.0 * h), f(x - 2.0 * h));
    let d1 = (fp - fm) / (2.0 * h);
    let d2 = (fp2 - fm2) / (4.0 * h);
    let scale = fp.abs().max(fm.abs()).max(fp2.abs()).max(fm2.abs());
    let rounding = 4.0 * f64::EPSILON * scale / h;
    FdEstimate {
        value: d1,
        err: (d1 - d2).abs() + rounding,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quadratic_is_exact_up_to_rounding() {
        let d = fd_derivative(|x| 3.0 * x * x - x, 2.0, 1e-3);
        assert!((d.value - 11.0).abs() <= d.err + 1e-12);
    }

    #[test]
    fn error_estimate_covers_actual_error() {
        let d = fd_derivative(f64::sin, 1.0, 1e-2);
        let actual = (d.value - 1f64.cos()).abs();
        assert!(actual <= d.err);
        assert!(d.err < 1e-4);
    }
}
