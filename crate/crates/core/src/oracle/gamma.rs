//! `Q(a, x)` straight from its defining integral.
//!
//! With `t = a e^v` the integrand `t^(a-1) e^(-t) dt` becomes
//! `a^a e^-a · exp(ψ(v)) dv`, `ψ(v) = -a (e^v - 1 - v) ≤ 0`, a concave
//! exponent with its maximum 0 at `v = 0`. The constant cancels from
//! `Q = U / (L + U)` (upper and lower pieces of the same integral), so no
//! gamma function value enters. Each piece is cut where ψ has fallen 90
//! below its maximum on that piece, split into panels over which ψ drops by
//! at most 12, and every panel is integrated by tanh-sinh quadrature with
//! step halving until successive levels agree.

use super::dd::Dd;
use crate::error::{Error, Result};

/// Total drop of ψ kept on each piece (e^-90 ≈ 8e-40).
const WINDOW: f64 = 90.0;
/// Drop of ψ per panel.
const PANEL_DROP: f64 = 12.0;
/// Tanh-sinh abscissae run over `|t| ≤ T_MAX`; weights beyond are < 1e-35.
const T_MAX: f64 = 4.0;
const MAX_LEVEL: usize = 8;

/// `e^v - 1 - v` without cancellation near zero.
fn expm1mx(v: f64) -> f64 {
    if v.abs() < 0.5 {
        let mut term = 0.5 * v * v;
        let mut sum = term;
        let mut k = 3.0;
        while term.abs() > 1e-18 * sum.abs() {
            term *= v / k;
            sum += term;
            k += 1.0;
        }
        sum
    } else {
        v.exp_m1() - v
    }
}

struct Exponent {
    a: f64,
}

impl Exponent {
    fn psi(&self, v: f64) -> f64 {
        -self.a * expm1mx(v)
    }

    /// Point on the far side of `from` (in direction `dir`) where ψ has
    /// dropped by `drop`, stopping at `limit`. ψ is monotone away from 0.
    fn drop_point(&self, from: f64, dir: f64, drop: f64, limit: f64) -> f64 {
        let target = self.psi(from) - drop;
        let past = |v: f64| self.psi(v) <= target;
        let mut step = 1.0 / self.a.sqrt().max(1e-3);
        let mut near = from;
        let mut far = from + dir * step;
        loop {
            if (dir > 0.0 && far >= limit) || (dir < 0.0 && far <= limit) {
                if !past(limit) {
                    return limit;
                }
                far = limit;
                break;
            }
            if past(far) {
                break;
            }
            near = far;
            step *= 2.0;
            far = from + dir * step;
        }
        // Panel boundaries need not be exact.
        for _ in 0..40 {
            let mid = 0.5 * (near + far);
            if past(mid) {
                far = mid;
            } else {
                near = mid;
            }
            if (far - near).abs() <= 1e-6 * far.abs().max(1.0) {
                break;
            }
        }
        far
    }
}

/// `∫_lo^hi g` on one panel by tanh-sinh. `scale` is the size of the whole
/// integral the panel contributes to; levels stop once the change is
/// negligible against it or has hit the rounding floor of `g`.
fn tanh_sinh<F: Fn(f64) -> f64>(g: &F, lo: f64, hi: f64, scale: f64) -> Result<f64> {
    let half = 0.5 * (hi - lo);
    let centre = 0.5 * (lo + hi);
    let node = |t: f64| -> (f64, f64) {
        // x = tanh(π/2 sinh t); 1 - |x| formed directly for accuracy near ±1
        let u = std::f64::consts::FRAC_PI_2 * t.sinh();
        let e = (-2.0 * u.abs()).exp();
        let one_minus = 2.0 * e / (1.0 + e);
        let c = u.cosh();
        let w = std::f64::consts::FRAC_PI_2 * t.cosh() / (c * c);
        (one_minus, w)
    };
    let eval = |t: f64| -> f64 {
        let (om, w) = node(t);
        if w == 0.0 {
            return 0.0;
        }
        let d = half * om;
        let (xl, xr) = (lo + d, hi - d);
        let (fl, fr) = if t == 0.0 {
            (g(centre), 0.0)
        } else {
            (g(xl), g(xr))
        };
        w * (fl + fr)
    };
    let mut h = 1.0;
    let mut sum = eval(0.0);
    let mut k = 1.0;
    while k * h <= T_MAX {
        sum += eval(k * h);
        k += 1.0;
    }
    let mut prev = sum * h * half;
    let mut prev_diff = f64::INFINITY;
    for _ in 0..MAX_LEVEL {
        h *= 0.5;
        // new abscissae are the odd multiples of the halved step
        let mut k = 1.0;
        while k * h <= T_MAX {
            sum += eval(k * h);
            k += 2.0;
        }
        let cur = sum * h * half;
        let diff = (cur - prev).abs();
        let tight = diff <= (1e-14 * cur.abs()).max(1e-17 * scale);
        // ψ carries an absolute error of a few ulps of itself, which shows
        // up as relative noise of that size in far-out panels.
        let floor = diff <= 1e-12 * cur.abs() && diff >= 0.25 * prev_diff;
        if tight || floor {
            return Ok(cur);
        }
        prev = cur;
        prev_diff = diff;
    }
    Err(Error::NoConvergence {
        func: "oracle_gamma_q",
        iterations: MAX_LEVEL,
        achieved: 0.0,
    })
}

/// Log of `∫_lo^hi exp(ψ(v)) dv`, with `lo` or `hi` possibly infinite.
fn log_piece(ex: &Exponent, lo: f64, hi: f64) -> Result<f64> {
    let peak_at = 0f64.clamp(lo, hi);
    let peak = ex.psi(peak_at);
    let g = |v: f64| (ex.psi(v) - peak).exp();
    let mut total = 0.0;
    for dir in [-1.0, 1.0] {
        let limit = if dir < 0.0 { lo } else { hi };
        let mut from = peak_at;
        let mut dropped = 0.0;
        while from != limit && dropped < WINDOW {
            let to = ex.drop_point(from, dir, PANEL_DROP, limit);
            let (a, b) = if dir < 0.0 { (to, from) } else { (from, to) };
            if b > a {
                total += tanh_sinh(&g, a, b, total)?;
            }
            dropped = peak - ex.psi(to);
            from = to;
        }
    }
    Ok(peak + total.ln())
}

/// `Q(a, x)` by quadrature of the defining integral.
///
/// Relative error is about 1e-15 in the bulk. In the far upper tail it is
/// limited by the rounding of `ψ` itself, roughly `|ln Q| · 2e-16`
/// (1e-13 at `Q ≈ e^-700`).
pub fn oracle_gamma_q(a: f64, x: f64) -> Result<f64> {
    if !(a.is_finite() && a > 0.0) {
        return Err(Error::domain("oracle_gamma_q", format!("a = {a} must be finite and > 0")));
    }
    if !(x.is_finite() && x >= 0.0) {
        return Err(Error::domain("oracle_gamma_q", format!("x = {x} must be finite and >= 0")));
    }
    if x == 0.0 {
        return Ok(1.0);
    }
    let ex = Exponent { a };
    // Split point v_x = ln(x / a), carried as hi + lo; the piece boundary
    // uses hi and the sliver [hi, hi + lo] is added to first order.
    let vx = (Dd::from(x) / Dd::from(a)).ln();
    let (v_hi, v_lo) = (vx.hi, vx.lo);
    let log_lower = log_piece(&ex, f64::NEG_INFINITY, v_hi)?;
    let log_upper = log_piece(&ex, v_hi, f64::INFINITY)?;
    // sliver: ∫_{v_hi}^{v_hi+v_lo} e^ψ ≈ e^{ψ(v_hi)} v_lo, moved from U to L
    let sliver = ex.psi(v_hi);
    let adj_u = -(sliver - log_upper).exp() * v_lo;
    let adj_l = (sliver - log_lower).exp() * v_lo;
    let log_upper = log_upper + adj_u.ln_1p();
    let log_lower = log_lower + adj_l.ln_1p();
    // Q = 1 / (1 + L/U)
    let r = log_lower - log_upper;
    Ok(if r <= 0.0 {
        1.0 / (1.0 + r.exp())
    } else {
        let e = (-r).exp();
        e / (1.0 + e)
    })
}
