use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::oracle::{dd_mean_gaps, dd_stage, fd_derivative, ChainStage};
use crate::specfun::{g_tilde, lambda_of_log_ratio, log_mean, Precision};

const EPS: f64 = f64::EPSILON;

/// `(sinh u - u, cosh u - 1)` for `0 < u ≤ 1`, from their Taylor series.
fn sinh_cosh_tails(u: f64) -> (f64, f64) {
    let mut term = u; // u^k / k!
    let (mut smu, mut cm1) = (0.0, 0.0);
    let mut k = 1.0;
    loop {
        k += 1.0;
        term *= u / k;
        if k % 2.0 == 0.0 {
            cm1 += term;
        } else {
            smu += term;
        }
        if term < 1e-18 * cm1 {
            return (smu, cm1);
        }
    }
}

/// One ratio of the l'Hospital chain for λ, in double precision.
///
/// With `u = ln y`:
/// `f1/g1 = -(sinh u - u) / (u (cosh u - 1))`,
/// `f2/g2 = -tanh(u/2) / (u + tanh(u/2))`,
/// `r3 = -2 / (y + 4 + 1/y)`.
pub fn chain_stage(stage: ChainStage, y: f64) -> Result<f64> {
    if !(y.is_finite() && y > 1.0) {
        return Err(Error::domain("chain_stage", format!("y = {y} must be finite and > 1")));
    }
    let u = y.ln();
    Ok(match stage {
        ChainStage::Lambda => lambda_of_log_ratio(u),
        ChainStage::F1G1 => {
            if u <= 1.0 {
                let (smu, cm1) = sinh_cosh_tails(u);
                -smu / (u * cm1)
            } else if u <= 40.0 {
                -(u.sinh() - u) / (u * (u.cosh() - 1.0))
            } else {
                -1.0 / u
            }
        }
        ChainStage::F2G2 => {
            let th = (0.5 * u).tanh();
            -th / (u + th)
        }
        ChainStage::R3 => -2.0 / (y + 4.0 + 1.0 / y),
    })
}

/// `r3'(y) = 2 (y² - 1) / (1 + 4y + y²)²`, in a form that cannot overflow.
pub fn r3_derivative(y: f64) -> f64 {
    let s = y + 4.0 + 1.0 / y;
    2.0 * ((y - 1.0) * (y + 1.0) / (y * y)) / (s * s)
}

/// `y = e^t` with `t` log-spaced over `[1e-4, ln y_max]`; the last point is
/// `y_max` itself.
pub fn lemma_grid(n: usize, y_max: f64) -> Vec<f64> {
    let (t0, t1) = (1e-4f64.ln(), y_max.ln().ln());
    let mut ys: Vec<f64> = (0..n)
        .map(|i| (t0 + (t1 - t0) * i as f64 / (n - 1) as f64).exp().exp())
        .collect();
    if let Some(last) = ys.last_mut() {
        *last = y_max;
    }
    ys
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StageReport {
    pub stage: ChainStage,
    /// Every consecutive difference positive beyond the strict margin.
    pub increasing: bool,
    /// Smallest `Δ / error bound` over the grid.
    pub min_margin_ratio: f64,
    /// Value at `y = 1 + 1e-8`.
    pub limit_value: f64,
    pub limit_ok: bool,
    /// Largest relative gap between the double and double-double values.
    pub max_rel_dev: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LemmaChainReport {
    pub grid_points: usize,
    pub stages: Vec<StageReport>,
    /// `r3'` positive at every grid point.
    pub r3_derivative_positive: bool,
    /// Largest `|fd - r3'|` over the difference quotient's own error
    /// estimate, taken where that estimate is below `1e-3 · r3'`.
    pub r3_derivative_fd_ratio: f64,
    pub passed: bool,
}

/// Where the chain ratios are compared with their common limit `-1/3`.
pub const LIMIT_POINT: f64 = 1.0 + 1e-8;

/// Increase of λ, f1/g1, f2/g2 and r3 along `y_grid`, their shared limit
/// at `1+`, and the sign of `r3'`.
///
/// The error bound of each value is its distance from the double-double
/// evaluation plus four ulps; a difference is certified when it exceeds
/// `strict_margin` times the sum of its two bounds.
pub fn check_lemma_chain(y_grid: &[f64], prec: Precision) -> Result<LemmaChainReport> {
    prec.validate()?;
    if y_grid.len() < 2 {
        return Err(Error::Config("lemma grid needs at least two points".into()));
    }
    if let Some(&y) = y_grid.iter().find(|&&y| !(y.is_finite() && y > 1.0)) {
        return Err(Error::domain("check_lemma_chain", format!("grid point {y} must be > 1")));
    }
    if y_grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::Config("lemma grid must be strictly increasing".into()));
    }
    let margin = prec.strict_margin;
    let mut stages = Vec::new();
    for stage in ChainStage::ALL {
        let vals = y_grid
            .par_iter()
            .map(|&y| {
                let v = chain_stage(stage, y)?;
                let reference = dd_stage(stage, y).to_f64();
                Ok((v, (v - reference).abs() + 4.0 * EPS * v.abs()))
            })
            .collect::<Vec<Result<(f64, f64)>>>()
            .into_iter()
            .collect::<Result<Vec<_>>>()?;
        let mut min_ratio = f64::INFINITY;
        for w in vals.windows(2) {
            let ((v0, e0), (v1, e1)) = (w[0], w[1]);
            min_ratio = min_ratio.min((v1 - v0) / (e0 + e1).max(f64::MIN_POSITIVE));
        }
        let max_rel_dev = vals
            .iter()
            .map(|&(v, e)| (e - 4.0 * EPS * v.abs()) / v.abs())
            .fold(0.0, f64::max);
        let limit_value = chain_stage(stage, LIMIT_POINT)?;
        stages.push(StageReport {
            stage,
            increasing: min_ratio > margin,
            min_margin_ratio: min_ratio,
            limit_value,
            limit_ok: (limit_value + 1.0 / 3.0).abs() <= 1e-6,
            max_rel_dev,
        });
    }
    let r3_derivative_positive = y_grid.iter().all(|&y| r3_derivative(y) > 0.0);
    let mut r3_derivative_fd_ratio: f64 = 0.0;
    for &y in y_grid {
        let h = 1e-4 * (y - 1.0).min(1.0) * y.max(1.0);
        if y - 2.0 * h <= 1.0 {
            continue;
        }
        let fd = fd_derivative(|t| chain_stage(ChainStage::R3, t).unwrap_or(f64::NAN), y, h);
        let exact = r3_derivative(y);
        if fd.err < 1e-3 * exact {
            r3_derivative_fd_ratio = r3_derivative_fd_ratio.max((fd.value - exact).abs() / fd.err);
        }
    }
    let passed = r3_derivative_positive
        && r3_derivative_fd_ratio <= 1.0
        && stages.iter().all(|s| s.increasing && s.limit_ok);
    Ok(LemmaChainReport {
        grid_points: y_grid.len(),
        stages,
        r3_derivative_positive,
        r3_derivative_fd_ratio,
        passed,
    })
}

/// `n` pairs `0 < x < y`: `x` log-uniform on `[1e-3, 1e3]`, `ln(y/x)`
/// uniform on `(0, ln ratio_max)`.
pub fn random_mean_pairs(n: usize, ratio_max: f64, seed: u64) -> Vec<(f64, f64)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let span = ratio_max.ln();
    let mut out = Vec::with_capacity(n);
    while out.len() < n {
        let x = 10f64.powf(rng.gen_range(-3.0..3.0));
        let y = x * (rng.gen_range(0.0..span)).exp();
        if y > x {
            out.push((x, y));
        }
    }
    out
}

/// A pair on which a mean-chain gap failed to certify.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MeanFailure {
    pub x: f64,
    pub y: f64,
    /// `L - G`, `G̃ - L`, `A - G̃` in double-double.
    pub gaps: [f64; 3],
    pub err: [f64; 3],
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MeanChainReport {
    pub pairs: usize,
    pub certified: usize,
    /// Smallest `gap / error bound` over all pairs and all three gaps.
    pub min_margin_ratio: f64,
    /// Pairs where the double-precision means are not strictly ordered;
    /// the double-double gaps decide certification.
    pub f64_order_ties: usize,
    pub failures: Vec<MeanFailure>,
    pub probe_factor: f64,
    /// A pair on which `L < G̃` fails with `probe_factor` in place of 1/3.
    pub probe_violation: Option<MeanFailure>,
    pub passed: bool,
}

/// Factor used by the optimality probe in place of 1/3.
pub const PROBE_FACTOR: f64 = 0.332;

/// `sqrt(xy) < L < G̃ < (x+y)/2` for each pair, certified through
/// double-double gaps, plus a probe that `L < G̃` breaks near the diagonal
/// once 1/3 is lowered to `probe_factor`.
pub fn check_mean_chain(
    pairs: &[(f64, f64)],
    probe_factor: f64,
    prec: Precision,
) -> Result<MeanChainReport> {
    prec.validate()?;
    let margin = prec.strict_margin;
    if let Some(&(x, y)) = pairs.iter().find(|&&(x, y)| !(x > 0.0 && y > x && y.is_finite())) {
        return Err(Error::domain("check_mean_chain", format!("pair ({x}, {y}) needs 0 < x < y")));
    }
    let rows = pairs
        .par_iter()
        .map(|&(x, y)| {
            let g = dd_mean_gaps(x, y, 1.0 / 3.0);
            let gaps = [g.geo_log, g.log_tilde, g.tilde_arith];
            let ratio = (0..3)
                .map(|i| gaps[i] / g.err[i])
                .fold(f64::INFINITY, f64::min);
            let geo = (x * y).sqrt();
            let l = log_mean(x, y)?;
            let gt = g_tilde(x, y)?;
            let arith = 0.5 * (x + y);
            let ordered = geo < l && l < gt && gt < arith;
            Ok((MeanFailure { x, y, gaps, err: g.err }, ratio, ordered))
        })
        .collect::<Vec<Result<_>>>()
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
    let mut report = MeanChainReport {
        pairs: pairs.len(),
        certified: 0,
        min_margin_ratio: f64::INFINITY,
        f64_order_ties: 0,
        failures: Vec::new(),
        probe_factor,
        probe_violation: None,
        passed: false,
    };
    for (row, ratio, ordered) in rows {
        report.min_margin_ratio = report.min_margin_ratio.min(ratio);
        if ratio > margin {
            report.certified += 1;
        } else if report.failures.len() < 10 {
            report.failures.push(row);
        }
        if !ordered {
            report.f64_order_ties += 1;
        }
    }
    // probe: y/x ∈ (1, 1.1)
    for k in 1..=50 {
        let y = 1.0 + 0.1 * k as f64 / 51.0;
        let g = dd_mean_gaps(1.0, y, probe_factor);
        if g.log_tilde < -margin * g.err[1] {
            report.probe_violation = Some(MeanFailure {
                x: 1.0,
                y,
                gaps: [g.geo_log, g.log_tilde, g.tilde_arith],
                err: g.err,
            });
            break;
        }
    }
    report.passed = report.certified == report.pairs
        && (probe_factor >= 1.0 / 3.0 || report.probe_violation.is_some());
    Ok(report)
}
