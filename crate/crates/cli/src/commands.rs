use centered_gamma::certify::{certify_monotone, find_witness, Direction, MonotoneVerdict, ScanSpec};
use centered_gamma::median::{gamma_median, MedianResult};
use centered_gamma::oracle::{dd_mean_gaps, oracle_gamma_q};
use centered_gamma::specfun::{g_tilde, log_mean, Precision};
use centered_gamma::tailprob::{tail_eval, TailQuery};
use centered_gamma::verify::{verify_all, VerifyOptions};
use centered_gamma::{Error, Result};
use rayon::prelude::*;
use serde::Serialize;

use crate::args::{Cli, Command, Grid, OptionalGrid};
use crate::format::{csv, json, num};
use crate::{Output, EXIT_INCONCLUSIVE, EXIT_OK, EXIT_VIOLATION};

pub fn run(cli: &Cli, prec: Precision, threads: usize) -> Result<Output> {
    let as_json = cli.global.json;
    match &cli.command {
        Command::Eval { a, c, use_oracle } => eval(*a, *c, *use_oracle, as_json),
        Command::Scan { c, grid } => scan(*c, grid, as_json),
        Command::Certify { c, grid } => certify(*c, grid, prec),
        Command::Median { a, grid } => median(*a, grid, prec, as_json),
        Command::Means { x, y } => means(*x, *y, prec, as_json),
        Command::VerifyAll { inject_fault } => verify(threads, prec, *inject_fault, as_json),
    }
}

fn ok(text: String) -> Output {
    Output {
        text,
        code: EXIT_OK,
    }
}

#[derive(Serialize)]
struct EvalRecord {
    a: f64,
    c: f64,
    p: f64,
    method: &'static str,
    err_bound: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    oracle_p: Option<f64>,
}

fn eval(a: f64, c: f64, use_oracle: bool, as_json: bool) -> Result<Output> {
    let e = tail_eval(TailQuery::new(a, c)?)?;
    let oracle_p = if !use_oracle {
        None
    } else if a + c <= 0.0 {
        Some(1.0)
    } else {
        Some(oracle_gamma_q(a, a + c)?)
    };
    let rec = EvalRecord {
        a,
        c,
        p: e.p,
        method: e.method.as_str(),
        err_bound: e.err_bound,
        oracle_p,
    };
    if as_json {
        return Ok(ok(json(&rec)));
    }
    let mut header = vec!["a", "c", "p", "method", "err_bound"];
    let mut row = vec![num(a), num(c), num(rec.p), rec.method.to_string(), num(rec.err_bound)];
    if let Some(o) = oracle_p {
        header.push("oracle_p");
        row.push(num(o));
    }
    Ok(ok(csv(&header, [row])))
}

#[derive(Serialize)]
struct ScanRow {
    a: f64,
    p: f64,
    delta: Option<f64>,
    err_bound: f64,
}

fn scan(c: f64, grid: &Grid, as_json: bool) -> Result<Output> {
    let spec = ScanSpec::new(grid.a_min, grid.a_max, grid.n, grid.scale.into())?;
    let evals = spec
        .points()
        .par_iter()
        .map(|&a| Ok((a, tail_eval(TailQuery::new(a, c)?)?)))
        .collect::<Vec<Result<_>>>()
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
    let mut rows = Vec::with_capacity(evals.len());
    let mut prev: Option<f64> = None;
    for (a, e) in evals {
        rows.push(ScanRow {
            a,
            p: e.p,
            delta: prev.map(|q| e.p - q),
            err_bound: e.err_bound,
        });
        prev = Some(e.p);
    }
    if as_json {
        return Ok(ok(json(&rows)));
    }
    let lines = rows.iter().map(|r| {
        vec![
            num(r.a),
            num(r.p),
            r.delta.map(num).unwrap_or_default(),
            num(r.err_bound),
        ]
    });
    Ok(ok(csv(&["a", "p", "delta", "err_bound"], lines)))
}

/// The direction `a -> p_c(a)` is known to take for this `c`.
fn expected(c: f64) -> Direction {
    if c >= 0.0 {
        Direction::Increasing
    } else if c <= -1.0 / 3.0 {
        Direction::Decreasing
    } else {
        Direction::NonMonotone
    }
}

#[derive(Serialize)]
#[serde(rename_all = "snake_case")]
enum Status {
    Consistent,
    Contradiction,
    Inconclusive,
}

#[derive(Serialize)]
struct CertifyRecord {
    expected: Direction,
    status: Status,
    /// The scan alone did not show both directions; the witness came from
    /// the dedicated search.
    witness_search: bool,
    verdict: MonotoneVerdict,
}

fn certify(c: f64, grid: &OptionalGrid, prec: Precision) -> Result<Output> {
    if !c.is_finite() {
        return Err(Error::Config(format!("c = {c} is not finite")));
    }
    let a_min = grid.a_min.unwrap_or(if c >= 0.0 { 0.01 } else { -c + 0.01 });
    let spec = ScanSpec::new(
        a_min,
        grid.a_max.unwrap_or(200.0),
        grid.n.unwrap_or(400),
        grid.scale.into(),
    )?;
    let mut verdict = certify_monotone(c, spec, prec)?;
    let want = expected(c);
    let mut witness_search = false;
    if want == Direction::NonMonotone && verdict.direction != Direction::NonMonotone {
        if let Ok(w) = find_witness(c, prec) {
            witness_search = true;
            verdict.direction = Direction::NonMonotone;
            verdict.margin_ratio = w.margin_ratio();
            verdict.inconclusive = None;
            verdict.witness = Some(w);
        }
    }
    let status = match (want, verdict.direction) {
        (w, d) if w == d => Status::Consistent,
        (_, Direction::Inconclusive) => Status::Inconclusive,
        // a monotone stretch of a non-monotone curve contradicts nothing
        (Direction::NonMonotone, _) => Status::Inconclusive,
        _ => Status::Contradiction,
    };
    let code = match status {
        Status::Consistent => EXIT_OK,
        Status::Contradiction => EXIT_VIOLATION,
        Status::Inconclusive => EXIT_INCONCLUSIVE,
    };
    let rec = CertifyRecord {
        expected: want,
        status,
        witness_search,
        verdict,
    };
    Ok(Output {
        text: json(&rec),
        code,
    })
}

fn median(a: Option<f64>, grid: &OptionalGrid, prec: Precision, as_json: bool) -> Result<Output> {
    let shapes = match (a, grid.a_min, grid.a_max, grid.n) {
        (Some(a), ..) => vec![a],
        (None, Some(lo), Some(hi), Some(n)) => ScanSpec::new(lo, hi, n, grid.scale.into())?.points(),
        _ => {
            return Err(Error::Config(
                "give --a, or all of --a-min, --a-max and --n".into(),
            ))
        }
    };
    let rows: Vec<MedianResult> = shapes
        .par_iter()
        .map(|&a| gamma_median(a, prec))
        .collect::<Vec<_>>()
        .into_iter()
        .collect::<Result<_>>()?;
    let inside = rows.iter().all(|m| m.offset > -1.0 / 3.0 && m.offset < 0.0);
    let text = if as_json {
        json(&rows)
    } else {
        let lines = rows
            .iter()
            .map(|m| vec![num(m.a), num(m.median), num(m.offset), num(m.residual)]);
        csv(&["a", "median", "offset", "residual"], lines)
    };
    Ok(Output {
        text,
        code: if inside { EXIT_OK } else { EXIT_VIOLATION },
    })
}

#[derive(Serialize)]
struct MeansRecord {
    x: f64,
    y: f64,
    geo: f64,
    log_mean: f64,
    g_tilde: f64,
    arith: f64,
    /// Each gap of the chain, computed in double-double.
    gaps: [f64; 3],
    chain_ok: bool,
}

fn means(x: f64, y: f64, prec: Precision, as_json: bool) -> Result<Output> {
    if !(x.is_finite() && y.is_finite() && x > 0.0 && y > x) {
        return Err(Error::Config(format!(
            "means need 0 < x < y with distinct values, got x = {x}, y = {y}"
        )));
    }
    let g = dd_mean_gaps(x, y, 1.0 / 3.0);
    let gaps = [g.geo_log, g.log_tilde, g.tilde_arith];
    let chain_ok = (0..3).all(|i| gaps[i] > prec.strict_margin * g.err[i]);
    let rec = MeansRecord {
        x,
        y,
        geo: (x * y).sqrt(),
        log_mean: log_mean(x, y)?,
        g_tilde: g_tilde(x, y)?,
        arith: 0.5 * (x + y),
        gaps,
        chain_ok,
    };
    let text = if as_json {
        json(&rec)
    } else {
        let row = vec![
            num(x),
            num(y),
            num(rec.geo),
            num(rec.log_mean),
            num(rec.g_tilde),
            num(rec.arith),
            chain_ok.to_string(),
        ];
        csv(&["x", "y", "geo", "log_mean", "g_tilde", "arith", "chain"], [row])
    };
    Ok(Output {
        text,
        code: if chain_ok { EXIT_OK } else { EXIT_VIOLATION },
    })
}

fn verify(threads: usize, prec: Precision, inject_fault: bool, as_json: bool) -> Result<Output> {
    let report = verify_all(&VerifyOptions {
        threads,
        prec,
        inject_fault,
    })?;
    let code = if report.passed { EXIT_OK } else { EXIT_VIOLATION };
    if as_json {
        return Ok(Output {
            text: json(&report),
            code,
        });
    }
    let mut text = String::new();
    for c in &report.criteria {
        let mark = if c.passed { "PASS" } else { "FAIL" };
        text.push_str(&format!("[{mark}] {:>2} {}: {}\n", c.id, c.name, c.summary));
    }
    if report.passed {
        text.push_str("ALL PASS\n");
    } else {
        let failed: Vec<&str> = report
            .criteria
            .iter()
            .filter(|c| !c.passed)
            .map(|c| c.name)
            .collect();
        text.push_str(&format!("FAILED: {}\n", failed.join(", ")));
    }
    Ok(Output { text, code })
}
