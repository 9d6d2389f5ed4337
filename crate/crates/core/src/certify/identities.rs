use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::oracle::fd_derivative;
use crate::specfun::{branch_roots, Precision};
use crate::tailprob::{log_integrand_ratio, m_c_eval, ratio_parts, tail_prob, TailQuery};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct IdentityPoint {
    pub a: f64,
    pub c: f64,
    pub tail: f64,
    /// `1 / (1 + R(a - 1))`
    pub from_ratio: f64,
    pub dev: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IdentityReport {
    pub points: Vec<IdentityPoint>,
    pub max_dev: f64,
    pub tol: f64,
    pub passed: bool,
}

/// `n` pairs with `a` uniform on `[1.1, 20]` and `c` uniform on `(-0.9, 2)`.
pub fn identity_pairs(n: usize, seed: u64) -> Vec<(f64, f64)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| (rng.gen_range(1.1..=20.0), rng.gen_range(-0.9..2.0)))
        .collect()
}

/// `p_c(a) = 1 / (1 + R(a - 1))` on each pair, within `tol`.
pub fn check_identity(pairs: &[(f64, f64)], tol: f64) -> Result<IdentityReport> {
    let points = pairs
        .par_iter()
        .map(|&(a, c)| {
            let tail = tail_prob(TailQuery::new(a, c)?)?;
            let rp = ratio_parts(a - 1.0, c)?;
            let from_ratio = 1.0 / (1.0 + rp.r);
            Ok(IdentityPoint {
                a,
                c,
                tail,
                from_ratio,
                dev: (tail - from_ratio).abs(),
            })
        })
        .collect::<Vec<Result<_>>>()
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
    let max_dev = points.iter().map(|p| p.dev).fold(0.0, f64::max);
    Ok(IdentityReport {
        passed: max_dev <= tol,
        points,
        max_dev,
        tol,
    })
}

/// `z_k = k / (n + 1)`, `k = 1..=n`.
pub fn uniform_z_grid(n: usize) -> Vec<f64> {
    (1..=n).map(|k| k as f64 / (n + 1) as f64).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DichotomyCase {
    pub c: f64,
    /// Whether `m_c` should be negative on the whole grid.
    pub expect_negative: bool,
    /// Largest certified-or-not value of `m_c` over the grid.
    pub max_m: f64,
    /// For positive cases, a `z` with `m_c(z)` certified positive.
    pub positive_at: Option<f64>,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DichotomyReport {
    pub grid_points: usize,
    pub cases: Vec<DichotomyCase>,
    pub passed: bool,
}

/// Sign of `m_c` on `z_grid`: certified negative everywhere for each `c` in
/// `negative`, certified positive somewhere for each `c` in `positive`.
pub fn check_dichotomy(
    negative: &[f64],
    positive: &[f64],
    z_grid: &[f64],
    prec: Precision,
) -> Result<DichotomyReport> {
    prec.validate()?;
    let margin = prec.strict_margin;
    let roots = z_grid
        .iter()
        .map(|&z| branch_roots(z))
        .collect::<Result<Vec<_>>>()?;
    let mut cases = Vec::new();
    let all = negative
        .iter()
        .map(|&c| (c, true))
        .chain(positive.iter().map(|&c| (c, false)));
    for (c, expect_negative) in all {
        let mut max_m = f64::NEG_INFINITY;
        let mut all_negative = true;
        let mut positive_at = None;
        for r in &roots {
            let m = m_c_eval(r, c);
            max_m = max_m.max(m.value);
            if m.value >= -margin * m.err {
                all_negative = false;
            }
            if positive_at.is_none() && m.value > margin * m.err {
                positive_at = Some(r.z());
            }
        }
        let passed = if expect_negative {
            all_negative
        } else {
            positive_at.is_some()
        };
        cases.push(DichotomyCase {
            c,
            expect_negative,
            max_m,
            positive_at,
            passed,
        });
    }
    Ok(DichotomyReport {
        grid_points: z_grid.len(),
        passed: cases.iter().all(|c| c.passed),
        cases,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SignMismatch {
    pub z: f64,
    pub c: f64,
    pub m_c: f64,
    pub fd: f64,
    pub fd_err: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SignRelationReport {
    pub points: usize,
    /// Finite difference of `ln r` resolved and of opposite sign to `m_c`.
    pub agreed: usize,
    /// `|m_c|` below the noise floor; skipped.
    pub excluded: usize,
    /// `m_c` above the floor but the difference quotient not resolved.
    pub unresolved: usize,
    pub mismatches: Vec<SignMismatch>,
    pub noise_floor: f64,
    pub passed: bool,
}

/// Below this `|m_c|` the sign comparison is skipped.
pub const SIGN_NOISE_FLOOR: f64 = 1e-6;

/// `n` points with `z` uniform on `(0.01, 0.99)` and `c` uniform on `(-2, 2)`.
pub fn sign_points(n: usize, seed: u64) -> Vec<(f64, f64)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| (rng.gen_range(0.01..0.99), rng.gen_range(-2.0..2.0)))
        .collect()
}

/// `r' = -A m_c` with `A > 0`: the central difference of `ln r` in `z`
/// must have the sign opposite to `m_c`.
pub fn check_sign_relation(points: &[(f64, f64)]) -> Result<SignRelationReport> {
    let rows = points
        .par_iter()
        .map(|&(z, c)| {
            let m = m_c_eval(&branch_roots(z)?, c).value;
            if m.abs() < SIGN_NOISE_FLOOR {
                return Ok((z, c, m, None));
            }
            let h = 1e-4 * z.min(1.0 - z);
            if h.is_nan() || h <= 0.0 {
                return Err(Error::domain("check_sign_relation", format!("z = {z}")));
            }
            let ln_r = |t: f64| {
                branch_roots(t)
                    .and_then(|r| log_integrand_ratio(&r, c))
                    .unwrap_or(f64::NAN)
            };
            Ok((z, c, m, Some(fd_derivative(ln_r, z, h))))
        })
        .collect::<Vec<Result<_>>>()
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
    let mut report = SignRelationReport {
        points: points.len(),
        agreed: 0,
        excluded: 0,
        unresolved: 0,
        mismatches: Vec::new(),
        noise_floor: SIGN_NOISE_FLOOR,
        passed: false,
    };
    for (z, c, m, fd) in rows {
        let Some(fd) = fd else {
            report.excluded += 1;
            continue;
        };
        if fd.value.is_nan() || fd.value.abs() <= fd.err {
            report.unresolved += 1;
        } else if fd.value.signum() == -m.signum() {
            report.agreed += 1;
            continue;
        }
        if report.mismatches.len() < 10 {
            report.mismatches.push(SignMismatch {
                z,
                c,
                m_c: m,
                fd: fd.value,
                fd_err: fd.err,
            });
        }
    }
    report.passed = report.agreed + report.excluded == report.points;
    Ok(report)
}
