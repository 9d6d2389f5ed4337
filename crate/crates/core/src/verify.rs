//! The full acceptance suite as a library call, shared by the command line
//! and the test harness.
//!
//! Every criterion produces a one-line summary built only from computed
//! values (no timings), so a report is reproducible byte for byte.

use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::Serialize;

use crate::certify::{
    certify_monotone, check_asymptotic, check_dichotomy, check_identity, check_lemma_chain,
    check_mean_chain, check_sign_relation, find_witness, identity_pairs, lemma_grid,
    random_mean_pairs, sign_points, uniform_z_grid, Direction, ScanSpec, PROBE_FACTOR,
};
use crate::error::{Error, Result};
use crate::median::{corollary1_check, gamma_median, log_grid};
use crate::oracle::oracle_gamma_q;
use crate::specfun::{reg_gamma_q, Precision};

/// Number of criteria.
pub const CRITERIA: u32 = 13;

/// Short names, indexed by criterion number minus one.
pub const NAMES: [&str; 13] = [
    "kernel accuracy",
    "increasing regime",
    "decreasing regime",
    "non-monotone witnesses",
    "median bracket probabilities",
    "median offsets",
    "ratio identity",
    "sign dichotomy",
    "lambda chain",
    "mean chain",
    "small-step expansion",
    "sign relation",
    "determinism",
];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VerifyOptions {
    /// Worker threads for grid evaluation.
    pub threads: usize,
    pub prec: Precision,
    /// Corrupt the kernel-accuracy tolerance so that criterion 1 fails.
    pub inject_fault: bool,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            threads: 4,
            prec: Precision::default(),
            inject_fault: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CriterionResult {
    pub id: u32,
    pub name: &'static str,
    pub passed: bool,
    pub summary: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyReport {
    pub criteria: Vec<CriterionResult>,
    pub passed: bool,
}

fn in_pool<T: Send>(threads: usize, f: impl FnOnce() -> T + Send) -> Result<T> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads.max(1))
        .build()
        .map_err(|e| Error::Config(format!("thread pool: {e}")))?;
    Ok(pool.install(f))
}

/// Run one criterion (1..=13) on a pool of `opts.threads` workers.
pub fn run_criterion(id: u32, opts: &VerifyOptions) -> Result<CriterionResult> {
    if !(1..=CRITERIA).contains(&id) {
        return Err(Error::Config(format!("criterion {id} does not exist")));
    }
    opts.prec.validate()?;
    let outcome = if id == 13 {
        determinism(opts)
    } else {
        in_pool(opts.threads, || evaluate(id, opts))?
    };
    let (passed, summary) = match outcome {
        Ok(v) => v,
        Err(e) => (false, format!("error: {e}")),
    };
    Ok(CriterionResult {
        id,
        name: NAMES[id as usize - 1],
        passed,
        summary,
    })
}

/// Run every criterion in order.
pub fn verify_all(opts: &VerifyOptions) -> Result<VerifyReport> {
    let criteria = (1..=CRITERIA)
        .map(|id| run_criterion(id, opts))
        .collect::<Result<Vec<_>>>()?;
    Ok(VerifyReport {
        passed: criteria.iter().all(|c| c.passed),
        criteria,
    })
}

fn evaluate(id: u32, opts: &VerifyOptions) -> Result<(bool, String)> {
    let prec = opts.prec;
    match id {
        1 => kernel_accuracy(opts),
        2 => regime(&[0.0, 0.1, 1.0 / 3.0, 1.0, 5.0], Direction::Increasing, prec),
        3 => regime(&[-1.0 / 3.0 - 1e-3, -0.5, -1.0, -2.0], Direction::Decreasing, prec),
        4 => witnesses(prec),
        5 => {
            let r = corollary1_check(&log_grid(1e-2, 1e4, 200), prec)?;
            Ok((
                r.passed,
                format!("{} shapes, smallest gap/error ratio {:.3e}", r.rows.len(), r.min_margin_ratio),
            ))
        }
        6 => medians(prec),
        7 => {
            let r = check_identity(&identity_pairs(20, 7), 1e-8)?;
            Ok((r.passed, format!("{} pairs, max deviation {:.3e}", r.points.len(), r.max_dev)))
        }
        8 => {
            let r = check_dichotomy(
                &[-1.0 / 3.0, -0.4, -1.0, -3.0],
                &[-0.33, -0.2, 0.0, 1.0],
                &uniform_z_grid(1000),
                prec,
            )?;
            let failed: Vec<String> =
                r.cases.iter().filter(|c| !c.passed).map(|c| c.c.to_string()).collect();
            Ok((
                r.passed,
                format!("{} z points, {} c values, failing c: [{}]", r.grid_points, r.cases.len(), failed.join(", ")),
            ))
        }
        9 => {
            let r = check_lemma_chain(&lemma_grid(400, 1e6), prec)?;
            let worst = r
                .stages
                .iter()
                .map(|s| s.min_margin_ratio)
                .fold(f64::INFINITY, f64::min);
            let limit = r
                .stages
                .iter()
                .map(|s| (s.limit_value + 1.0 / 3.0).abs())
                .fold(0.0, f64::max);
            Ok((
                r.passed,
                format!(
                    "{} points, smallest gap/error ratio {:.3e}, limit deviation {:.3e}, r3' positive: {}",
                    r.grid_points, worst, limit, r.r3_derivative_positive
                ),
            ))
        }
        10 => {
            let r = check_mean_chain(&random_mean_pairs(10_000, 1e6, 10), PROBE_FACTOR, prec)?;
            let probe = match r.probe_violation {
                Some(v) => format!("violation at y/x = {}", v.y / v.x),
                None => "no violation".into(),
            };
            Ok((
                r.passed,
                format!(
                    "{}/{} pairs certified, smallest gap/error ratio {:.3e}; factor {}: {}",
                    r.certified, r.pairs, r.min_margin_ratio, r.probe_factor, probe
                ),
            ))
        }
        11 => {
            let r = check_asymptotic(-0.2, &[0.02, 0.01, 0.005, 0.0025], prec)?;
            Ok((
                r.passed,
                format!(
                    "slope {:.6} vs {:.6} (relative error {:.3e})",
                    r.slope, r.expected_slope, r.slope_rel_err
                ),
            ))
        }
        12 => {
            let r = check_sign_relation(&sign_points(1000, 12))?;
            Ok((
                r.passed,
                format!(
                    "{} points: {} agree, {} below floor {:e}, {} unresolved, {} mismatched",
                    r.points,
                    r.agreed,
                    r.excluded,
                    r.noise_floor,
                    r.unresolved,
                    r.points - r.agreed - r.excluded - r.unresolved
                ),
            ))
        }
        _ => unreachable!("criterion id checked by the caller"),
    }
}

const KERNEL_TOL: f64 = 1e-12;
const KERNEL_BUDGET: Duration = Duration::from_secs(10);

fn kernel_accuracy(opts: &VerifyOptions) -> Result<(bool, String)> {
    let tol = if opts.inject_fault { 1e-300 } else { KERNEL_TOL };
    let start = Instant::now();
    let shapes = log_grid(1e-3, 1e4, 50);
    let errors = shapes
        .par_iter()
        .map(|&a| {
            let x_max = a + 40.0 * a.sqrt() + 40.0;
            let mut worst: f64 = 0.0;
            for j in 0..50 {
                let x = x_max * j as f64 / 49.0;
                let q = reg_gamma_q(a, x)?;
                let o = oracle_gamma_q(a, x)?;
                worst = worst.max((q - o).abs() / o);
            }
            Ok(worst)
        })
        .collect::<Vec<Result<f64>>>()
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
    let elapsed = start.elapsed();
    let worst = errors.into_iter().fold(0.0, f64::max);
    let in_time = elapsed < KERNEL_BUDGET;
    Ok((
        worst <= tol && in_time,
        format!("2500 points, max relative error {worst:.3e} (tolerance {tol:e}), within time budget: {in_time}"),
    ))
}

fn regime(cs: &[f64], want: Direction, prec: Precision) -> Result<(bool, String)> {
    let mut ok = true;
    let mut parts = Vec::new();
    for &c in cs {
        let a_min = if want == Direction::Increasing { 0.01 } else { -c + 0.01 };
        let v = certify_monotone(c, ScanSpec::log(a_min, 200.0, 400)?, prec)?;
        let good = v.direction == want && v.margin_ratio >= prec.strict_margin;
        ok &= good;
        parts.push(format!("c={}: {} ({:.3e})", c, v.direction.as_str(), v.margin_ratio));
    }
    Ok((ok, parts.join("; ")))
}

fn witnesses(prec: Precision) -> Result<(bool, String)> {
    let mut ok = true;
    let mut parts = Vec::new();
    for c in [-0.30, -0.2, -0.1, -0.05] {
        match find_witness(c, prec) {
            Ok(w) => {
                let q = |a: f64| oracle_gamma_q(a, a + c);
                let (q1, q2, q3) = (q(w.a1)?, q(w.a2)?, q(w.a3)?);
                let oracle_ok = q1 > q2 && q3 > q2;
                let good = oracle_ok && w.a3 <= 1e6;
                ok &= good;
                parts.push(format!(
                    "c={}: a=({}, {}, {}) oracle agrees: {}",
                    c, w.a1, w.a2, w.a3, oracle_ok
                ));
            }
            Err(e) => {
                ok = false;
                parts.push(format!("c={c}: {e}"));
            }
        }
    }
    Ok((ok, parts.join("; ")))
}

fn medians(prec: Precision) -> Result<(bool, String)> {
    let grid = log_grid(1e-2, 1e4, 200);
    let rows = grid
        .par_iter()
        .map(|&a| gamma_median(a, prec))
        .collect::<Vec<_>>()
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
    let margin = prec.strict_margin;
    let mut worst_residual: f64 = 0.0;
    let mut inside = true;
    for m in &rows {
        worst_residual = worst_residual.max(m.residual);
        let err = 4.0 * f64::EPSILON * m.median;
        inside &= m.offset + 1.0 / 3.0 > margin * err && -m.offset > margin * err;
    }
    let spot = gamma_median(1.0, prec)?;
    let spot_dev = (spot.offset - (2f64.ln() - 1.0)).abs();
    Ok((
        inside && worst_residual <= 1e-12 && spot_dev <= 1e-14,
        format!(
            "{} shapes, all offsets inside: {}, max residual {:.3e}, a=1 deviation {:.3e}",
            rows.len(),
            inside,
            worst_residual,
            spot_dev
        ),
    ))
}

/// Pool size compared against a single thread; fixed so the summary does
/// not depend on the caller's thread count.
const MANY_THREADS: usize = 4;

fn determinism(opts: &VerifyOptions) -> Result<(bool, String)> {
    let many = MANY_THREADS;
    let run = |threads: usize| -> Result<String> {
        let o = VerifyOptions { threads, ..*opts };
        let mut out = String::new();
        for id in 1..CRITERIA {
            let r = in_pool(threads, || evaluate(id, &o))?;
            out.push_str(&format!("{id}: {r:?}\n"));
        }
        Ok(out)
    };
    let (one, first, second) = (run(1)?, run(many)?, run(many)?);
    let same = one == first && first == second;
    Ok((
        same,
        format!("criteria 1-12 identical on 1 and {many} threads and on repeat: {same}"),
    ))
}
