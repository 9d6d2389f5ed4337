//! Double-precision special-function kernels.
//!
//! Everything here is a pure function of its arguments: no caches, no global
//! state, bit-identical results for identical inputs on every thread.
//!
//! * [`log_gamma`], [`reg_gamma_p`], [`reg_gamma_q`]: log-gamma and the
//!   regularized incomplete gamma pair.
//! * [`lambert_w0`], [`lambert_wm1`]: the two real branches of Lambert W.
//! * [`f_map`], [`branch_roots`], [`branch_root_deriv`]: the map
//!   `f(x) = x e^(1-x)` and its two inverse branches on `(0, 1)`.
//! * [`log_mean`], [`lambda_fn`], [`g_tilde`]: the logarithmic mean, the
//!   threshold function λ and the refined mean G̃.

mod branch;
mod gamma;
mod lambert;
mod means;

pub use branch::{branch_root_deriv, branch_roots, f_map, BranchRoots, Branch, Z_MAX, Z_MIN};
pub use gamma::{log_gamma, reg_gamma, reg_gamma_p, reg_gamma_q, GammaEval, GammaMethod};
pub use lambert::{lambert_w0, lambert_wm1};
pub use means::{g_tilde, lambda_fn, lambda_of_log_ratio, log_mean};

pub(crate) use gamma::gamma_density;

use serde::Serialize;

use crate::error::{Error, Result};

/// Tolerances shared by the iterative and certifying operations.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Precision {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_iter: usize,
    /// Multiplier applied to an estimated rounding-error bound before a
    /// difference is accepted as having a definite sign.
    pub strict_margin: f64,
}

impl Default for Precision {
    fn default() -> Self {
        Precision {
            rel_tol: 1e-12,
            abs_tol: 1e-14,
            max_iter: 200,
            strict_margin: 8.0,
        }
    }
}

impl Precision {
    pub fn validate(&self) -> Result<()> {
        let positive = |v: f64| v.is_finite() && v > 0.0;
        if !positive(self.rel_tol) || !positive(self.abs_tol) || !positive(self.strict_margin) {
            return Err(Error::Config(format!(
                "tolerances must be positive and finite: {self:?}"
            )));
        }
        if self.max_iter == 0 {
            return Err(Error::Config("max_iter must be at least 1".into()));
        }
        Ok(())
    }
}

/// `ln(1 + x) - x`, accurate near zero where the direct form cancels.
pub(crate) fn log1pmx(x: f64) -> f64 {
    if x.abs() < 0.5 {
        // -x^2/2 + x^3/3 - ... ; terms shrink at least like 2^-k
        let mut pow = x * x;
        let mut sum = 0.0;
        let mut k = 2.0;
        loop {
            let term = pow / k;
            sum -= term;
            if term.abs() <= 1e-17 * sum.abs() {
                break;
            }
            pow *= -x;
            k += 1.0;
        }
        sum
    } else {
        x.ln_1p() - x
    }
}

/// `e` split into a leading double and its rounding residual.
pub(crate) const E_HI: f64 = std::f64::consts::E;
pub(crate) const E_LO: f64 = 1.445_646_891_729_250_2e-16;
