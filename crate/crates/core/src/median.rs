//! Median of the Gamma(a, 1) law and the bracket `a - 1/3 < median < a`.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::specfun::{reg_gamma, Precision};
use crate::tailprob::{tail_eval, TailQuery};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MedianResult {
    pub a: f64,
    pub median: f64,
    /// `median - a`
    pub offset: f64,
    /// `|Q(a, median) - 1/2|`
    pub residual: f64,
    pub iterations: usize,
}

/// Solve `Q(a, m) = 1/2` on the bracket `[max(a - 1/3, MIN_POSITIVE), a]`.
///
/// The bracket is checked, never widened: a sign failure at its ends is a
/// [`Error::Bracket`]. Bisection (geometric while the ends differ by more
/// than a factor of 4) narrows it to relative width 1e-3, then Brent's
/// method with inverse quadratic steps finishes to about one ulp.
pub fn gamma_median(a: f64, prec: Precision) -> Result<MedianResult> {
    prec.validate()?;
    if !(a.is_finite() && a > 0.0) {
        return Err(Error::domain("gamma_median", format!("a = {a} must be finite and > 0")));
    }
    let f = |m: f64| -> Result<f64> { Ok(reg_gamma(a, m)?.q - 0.5) };
    let mut lo = (a - 1.0 / 3.0).max(f64::MIN_POSITIVE);
    let mut hi = a;
    let mut f_lo = f(lo)?;
    let mut f_hi = f(hi)?;
    if !(f_lo > 0.0 && f_hi < 0.0) {
        return Err(Error::Bracket {
            func: "gamma_median",
            lo,
            hi,
        });
    }
    let mut iterations = 0;
    let done = |iters: usize| -> Result<()> {
        if iters >= prec.max_iter {
            return Err(Error::NoConvergence {
                func: "gamma_median",
                iterations: iters,
                achieved: f64::NAN,
            });
        }
        Ok(())
    };
    while hi - lo > 1e-3 * hi {
        done(iterations)?;
        iterations += 1;
        let mid = if hi > 4.0 * lo {
            (lo.sqrt() * hi.sqrt()).max(lo * 2.0)
        } else {
            0.5 * (lo + hi)
        };
        let fm = f(mid)?;
        if fm == 0.0 {
            return Ok(finish(a, mid, 0.0, iterations));
        }
        if fm > 0.0 {
            lo = mid;
            f_lo = fm;
        } else {
            hi = mid;
            f_hi = fm;
        }
    }
    // Brent on [lo, hi]: b is the best estimate, c the counterpoint.
    let (mut b, mut fb, mut c, mut fc) = (hi, f_hi, lo, f_lo);
    let (mut prev_a, mut fa) = (c, fc);
    let mut d = b - c;
    let mut e = d;
    loop {
        done(iterations)?;
        iterations += 1;
        if fb.abs() > fc.abs() {
            prev_a = b;
            fa = fb;
            b = c;
            fb = fc;
            c = prev_a;
            fc = fa;
        }
        let tol = 2.0 * f64::EPSILON * b.abs() + 0.5 * f64::MIN_POSITIVE;
        let half = 0.5 * (c - b);
        if half.abs() <= tol || fb == 0.0 {
            return Ok(finish(a, b, fb.abs(), iterations));
        }
        if e.abs() >= tol && fa.abs() > fb.abs() {
            let s = fb / fa;
            let (mut p, mut q);
            if prev_a == c {
                p = 2.0 * half * s;
                q = 1.0 - s;
            } else {
                let qa = fa / fc;
                let r = fb / fc;
                p = s * (2.0 * half * qa * (qa - r) - (b - prev_a) * (r - 1.0));
                q = (qa - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if p > 0.0 {
                q = -q;
            } else {
                p = -p;
            }
            if 2.0 * p < (3.0 * half * q - (tol * q).abs()).min((e * q).abs()) {
                e = d;
                d = p / q;
            } else {
                d = half;
                e = d;
            }
        } else {
            d = half;
            e = d;
        }
        prev_a = b;
        fa = fb;
        b += if d.abs() > tol { d } else { tol.copysign(half) };
        fb = f(b)?;
        if (fb > 0.0) == (fc > 0.0) {
            c = prev_a;
            fc = fa;
            d = b - prev_a;
            e = d;
        }
    }
}

fn finish(a: f64, m: f64, residual: f64, iterations: usize) -> MedianResult {
    MedianResult {
        a,
        median: m,
        offset: m - a,
        residual,
        iterations,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BracketRow {
    pub a: f64,
    /// `P(X_a > a)`
    pub p_zero: f64,
    /// `P(X_a > a - 1/3)`
    pub p_third: f64,
    /// `(1/2 - p_zero) / err` and `(p_third - 1/2) / err`.
    pub margins: [f64; 2],
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BracketReport {
    pub rows: Vec<BracketRow>,
    pub min_margin_ratio: f64,
    pub passed: bool,
}

/// `P(X_a > a) < 1/2 < P(X_a > a - 1/3)` with both gaps beyond
/// `strict_margin` times the evaluation error bound.
pub fn corollary1_check(a_grid: &[f64], prec: Precision) -> Result<BracketReport> {
    prec.validate()?;
    let rows = a_grid
        .par_iter()
        .map(|&a| {
            let zero = tail_eval(TailQuery::new(a, 0.0)?)?;
            let third = tail_eval(TailQuery::new(a, -1.0 / 3.0)?)?;
            let tiny = f64::MIN_POSITIVE;
            Ok(BracketRow {
                a,
                p_zero: zero.p,
                p_third: third.p,
                margins: [
                    (0.5 - zero.p) / zero.err_bound.max(tiny),
                    (third.p - 0.5) / third.err_bound.max(tiny),
                ],
            })
        })
        .collect::<Vec<Result<_>>>()
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
    let min_margin_ratio = rows
        .iter()
        .flat_map(|r| r.margins)
        .fold(f64::INFINITY, f64::min);
    Ok(BracketReport {
        passed: min_margin_ratio > prec.strict_margin,
        rows,
        min_margin_ratio,
    })
}

/// `n` log-spaced points on `[lo, hi]`, endpoints exact.
pub fn log_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![lo];
    }
    let span = (hi / lo).ln();
    let mut g: Vec<f64> = (0..n)
        .map(|i| lo * (span * i as f64 / (n - 1) as f64).exp())
        .collect();
    g[0] = lo;
    g[n - 1] = hi;
    g
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exponential_median() {
        let m = gamma_median(1.0, Precision::default()).unwrap();
        assert!((m.offset - (2f64.ln() - 1.0)).abs() < 1e-14, "{m:?}");
        assert!(m.residual <= 1e-15);
    }

    #[test]
    fn medians_across_scales() {
        let prec = Precision::default();
        let m = gamma_median(2.0, prec).unwrap();
        assert!((m.median - 1.678_346_990_016_661_7).abs() < 1e-14, "{m:?}");
        for a in [1e-2, 0.1, 1.0 / 3.0, 0.5, 10.0, 1e4] {
            let m = gamma_median(a, prec).unwrap();
            assert!(m.offset > -1.0 / 3.0 && m.offset < 0.0, "{m:?}");
            assert!(m.residual <= 1e-12, "{m:?}");
        }
        // Q(0.01, m) = 1/2 sits far below 1e-14
        let m = gamma_median(0.01, prec).unwrap();
        assert!(m.median > 0.0 && m.median < 1e-20, "{m:?}");
        assert!(gamma_median(0.0, prec).is_err());
    }

    #[test]
    fn median_bracket() {
        let r = corollary1_check(&log_grid(1e-2, 1e4, 30), Precision::default()).unwrap();
        assert!(r.passed, "{r:?}");
        let r = corollary1_check(&[1.0], Precision::default()).unwrap();
        assert!((r.rows[0].p_third - (-2.0f64 / 3.0).exp()).abs() < 1e-15);
    }
}
