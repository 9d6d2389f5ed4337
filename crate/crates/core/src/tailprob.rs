//! The centered tail `p_c(a) = P(X_a - a > c) = Q(a, a + c)` for
//! `X_a ~ Gamma(a, 1)`, and the quantities used to study it.
//!
//! For `a > -c` the tail has the integral representation
//! `p_c(a) = 1 / (1 + R(a - 1))` with `R(u) = I(u) / J(u)`,
//!
//! ```text
//! I(u) = ∫_0^1 f(x)^u e^(-(1+c)x) dx,   J(u) = ∫_1^∞ f(x)^u e^(-(1+c)x) dx,
//! ```
//!
//! `f(x) = x e^(1-x)`. Its monotonicity in `a` is governed by the sign of
//! `m_c(z) = 1 - x1 x2 + c (1 - x1)(x2 - 1)` over the inverse branches
//! `x1(z) < 1 < x2(z)` of `f`.

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::oracle::two_sum;
use crate::quad::{integrate, QuadTol};
use crate::specfun::{
    branch_root_deriv, gamma_density, lambda_of_log_ratio, reg_gamma, Branch, BranchRoots,
    GammaMethod,
};

const EPS: f64 = f64::EPSILON;

/// One tail probability `p_c(a)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TailQuery {
    pub a: f64,
    pub c: f64,
}

impl TailQuery {
    pub fn new(a: f64, c: f64) -> Result<TailQuery> {
        let q = TailQuery { a, c };
        q.validate()?;
        Ok(q)
    }

    fn validate(&self) -> Result<()> {
        if !(self.a.is_finite() && self.a > 0.0) {
            return Err(Error::domain("tail_prob", format!("a = {} must be finite and > 0", self.a)));
        }
        if !self.c.is_finite() {
            return Err(Error::domain("tail_prob", format!("c = {} is not finite", self.c)));
        }
        Ok(())
    }
}

/// How a tail probability was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TailMethod {
    /// `a + c ≤ 0`: the whole support lies above `a + c`.
    Plateau,
    Gamma(GammaMethod),
}

impl TailMethod {
    pub fn as_str(self) -> &'static str {
        match self {
            TailMethod::Plateau => "plateau",
            TailMethod::Gamma(m) => m.as_str(),
        }
    }
}

impl Serialize for TailMethod {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.as_str())
    }
}

/// `p_c(a)` with an absolute error bound.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TailEval {
    pub p: f64,
    pub err_bound: f64,
    pub method: TailMethod,
}

/// `p_c(a)` with its error bound and evaluation route.
///
/// The bound covers the kernel's own estimate plus the rounding of the
/// threshold `a + c` to a double.
pub fn tail_eval(q: TailQuery) -> Result<TailEval> {
    q.validate()?;
    let (x, x_err) = two_sum(q.a, q.c);
    if x <= 0.0 {
        return Ok(TailEval {
            p: 1.0,
            err_bound: 0.0,
            method: TailMethod::Plateau,
        });
    }
    let g = reg_gamma(q.a, x)?;
    let threshold = if x_err == 0.0 {
        0.0
    } else {
        gamma_density(q.a, x) * x_err.abs()
    };
    Ok(TailEval {
        p: g.q,
        err_bound: g.err_q + threshold,
        method: TailMethod::Gamma(g.method),
    })
}

/// `p_c(a) = P(X_a - a > c)`; exactly 1 when `a + c ≤ 0`.
pub fn tail_prob(q: TailQuery) -> Result<f64> {
    tail_eval(q).map(|e| e.p)
}

/// `Δ(a) = p_c(a+1) - p_c(a)` with an error bound.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TailDelta {
    pub value: f64,
    pub err_bound: f64,
}

/// `p_c(a+1) - p_c(a)`. The subtraction itself is error-free (its rounding
/// residual is folded into the bound), so `err_bound` is the sum of the two
/// evaluation bounds; `|value| ≤ err_bound` means the sign is unresolved.
pub fn tail_delta(a: f64, c: f64) -> Result<TailDelta> {
    let lo = tail_eval(TailQuery::new(a, c)?)?;
    let hi = tail_eval(TailQuery::new(a + 1.0, c)?)?;
    let (value, residual) = two_sum(hi.p, -lo.p);
    Ok(TailDelta {
        value,
        err_bound: hi.err_bound + lo.err_bound + residual.abs(),
    })
}

/// `I(u)`, `J(u)` and `R(u) = I/J` with quadrature error estimates.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RatioParts {
    pub u: f64,
    pub c: f64,
    pub i: f64,
    pub j: f64,
    pub r: f64,
    pub i_err: f64,
    pub j_err: f64,
}

fn ratio_tol() -> QuadTol {
    QuadTol {
        abs: 0.0,
        rel: 1e-10,
        max_panels: 10_000,
    }
}

/// `I(u)` and `J(u)` by adaptive quadrature (relative target 1e-10).
///
/// Needs `u > -1`, `c > -1` and `u + c > -1` (the last makes `J` finite).
/// Power singularities at the endpoints are removed by substitution:
/// `x = s^(1/(u+1))` in `I` when `u < 0`; in `J`, `x = 1 - ln t` maps onto
/// `(0, 1]`, followed by `t = s^(1/(u+c+1))` when `u + c < 0`.
pub fn ratio_parts(u: f64, c: f64) -> Result<RatioParts> {
    if !(u.is_finite() && u > -1.0) {
        return Err(Error::domain("ratio_parts", format!("u = {u} must be > -1")));
    }
    if !(c.is_finite() && c > -1.0) {
        return Err(Error::domain("ratio_parts", format!("c = {c} must be > -1")));
    }
    let k = u + c + 1.0;
    if k <= 0.0 {
        return Err(Error::domain("ratio_parts", format!("u + c = {} must be > -1", u + c)));
    }
    let b = 1.0 + c;
    let iq = if u >= 0.0 {
        // f(x)^u e^(-bx) = exp(u (ln x + 1 - x) - b x)
        integrate(
            |x: f64| {
                if x == 0.0 {
                    return if u == 0.0 { 1.0 } else { 0.0 };
                }
                (u * (x.ln() + 1.0 - x) - b * x).exp()
            },
            0.0,
            1.0,
            ratio_tol(),
        )?
    } else {
        let p = 1.0 / (u + 1.0);
        let q = integrate(
            |s: f64| {
                let x = s.powf(p);
                (u * (1.0 - x) - b * x).exp()
            },
            0.0,
            1.0,
            ratio_tol(),
        )?;
        crate::quad::Quadrature {
            value: q.value * p,
            err: q.err * p,
            ..q
        }
    };
    let scale = (-b).exp();
    let jq = if u + c >= 0.0 {
        // e^(-b) (1 - ln t)^u t^(u+c)
        integrate(
            |t: f64| {
                if t == 0.0 {
                    return 0.0;
                }
                let lt = t.ln();
                (u * (-lt).ln_1p() + (u + c) * lt).exp()
            },
            0.0,
            1.0,
            ratio_tol(),
        )?
    } else {
        let inv_k = 1.0 / k;
        let q = integrate(
            |s: f64| {
                if s == 0.0 {
                    return 0.0;
                }
                (u * (-(s.ln() * inv_k)).ln_1p()).exp()
            },
            0.0,
            1.0,
            ratio_tol(),
        )?;
        crate::quad::Quadrature {
            value: q.value * inv_k,
            err: q.err * inv_k,
            ..q
        }
    };
    let (i, j) = (iq.value, jq.value * scale);
    Ok(RatioParts {
        u,
        c,
        i,
        j,
        r: i / j,
        i_err: iq.err,
        j_err: jq.err * scale,
    })
}

/// `m_c` with an absolute error estimate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SignValue {
    pub value: f64,
    pub err: f64,
}

/// `m_c(z) = 1 - x1 x2 + c (1 - x1)(x2 - 1)`.
pub fn m_c_fn(roots: &BranchRoots, c: f64) -> f64 {
    m_c_eval(roots, c).value
}

/// `m_c(z)` with an error estimate.
///
/// Since `L(x1, x2) = 1`, `(x1 x2 - 1) / ((1 - x1)(x2 - 1)) = λ(x2/x1)` and
/// `ln(x2/x1) = x2 - x1`, so `m_c = (1 - x1)(x2 - 1)(c - λ)`. This form keeps
/// full relative accuracy as `z → 1`, where every term of the defining
/// expression vanishes.
pub fn m_c_eval(roots: &BranchRoots, c: f64) -> SignValue {
    let spread = roots.gap_lower() * roots.gap_upper();
    let lambda = lambda_of_log_ratio(roots.log_ratio());
    let value = spread * (c - lambda);
    SignValue {
        value,
        err: 16.0 * EPS * spread * (c.abs() + lambda.abs()),
    }
}

/// `ln r(z)` for `r = p/q`, `p = e^(-(1+c) x1) x1'`, `q = -e^(-(1+c) x2) x2'`.
///
/// With `x_j' = x_j / ((1 - x_j) z)` and `x2 - x1 = ln(x2/x1)`:
/// `ln r = (1+c)(x2 - x1) + ln x1 - ln(1 - x1) + ln(x2 - 1) - ln x2`.
pub fn log_integrand_ratio(roots: &BranchRoots, c: f64) -> Result<f64> {
    // both derivatives must exist; this also rejects z too close to 1
    branch_root_deriv(roots, Branch::Lower)?;
    branch_root_deriv(roots, Branch::Upper)?;
    Ok((1.0 + c) * roots.log_ratio() + roots.x1().ln() - roots.gap_lower().ln()
        + roots.gap_upper().ln()
        - roots.x2().ln())
}

/// `r(z) = p(z)/q(z) > 0`.
pub fn integrand_ratio(roots: &BranchRoots, c: f64) -> Result<f64> {
    log_integrand_ratio(roots, c).map(f64::exp)
}

/// `β(θ) = P(X_θ - θ > c)` for `θ > 0`, `c > 0`: the power of the test that
/// rejects when `X - θ0 > c`, seen as a function of the true shape.
pub fn power_function(theta: f64, c: f64) -> Result<f64> {
    if !(c.is_finite() && c > 0.0) {
        return Err(Error::domain("power_function", format!("c = {c} must be > 0")));
    }
    tail_prob(TailQuery::new(theta, c)?)
}
