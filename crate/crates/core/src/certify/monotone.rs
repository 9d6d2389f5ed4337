use rayon::prelude::*;
use serde::Serialize;

use super::witness::Witness;
use crate::error::{Error, Result};
use crate::oracle::two_sum;
use crate::specfun::Precision;
use crate::tailprob::{tail_eval, TailQuery};

/// How a [`ScanSpec`] places its points.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Scale {
    Linear,
    Log,
}

/// `n` points from `a_min` to `a_max`, both included.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScanSpec {
    pub a_min: f64,
    pub a_max: f64,
    pub n: usize,
    pub scale: Scale,
}

impl ScanSpec {
    pub fn new(a_min: f64, a_max: f64, n: usize, scale: Scale) -> Result<ScanSpec> {
        let s = ScanSpec {
            a_min,
            a_max,
            n,
            scale,
        };
        s.validate()?;
        Ok(s)
    }

    pub fn log(a_min: f64, a_max: f64, n: usize) -> Result<ScanSpec> {
        ScanSpec::new(a_min, a_max, n, Scale::Log)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.a_min.is_finite() && self.a_min > 0.0) {
            return Err(Error::Config(format!("a_min = {} must be finite and > 0", self.a_min)));
        }
        if !(self.a_max.is_finite() && self.a_max > self.a_min) {
            return Err(Error::Config(format!(
                "a_max = {} must be finite and > a_min = {}",
                self.a_max, self.a_min
            )));
        }
        if self.n < 3 {
            return Err(Error::Config(format!("n = {} must be at least 3", self.n)));
        }
        Ok(())
    }

    /// The grid, with both endpoints exact.
    pub fn points(&self) -> Vec<f64> {
        let last = (self.n - 1) as f64;
        let mut pts: Vec<f64> = (0..self.n)
            .map(|i| {
                let t = i as f64 / last;
                match self.scale {
                    Scale::Linear => self.a_min + t * (self.a_max - self.a_min),
                    Scale::Log => self.a_min * (t * (self.a_max / self.a_min).ln()).exp(),
                }
            })
            .collect();
        pts[0] = self.a_min;
        pts[self.n - 1] = self.a_max;
        pts
    }

    fn midpoint(&self, lo: f64, hi: f64) -> f64 {
        match self.scale {
            Scale::Linear => 0.5 * (lo + hi),
            Scale::Log => (lo * hi).sqrt(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    Increasing,
    Decreasing,
    NonMonotone,
    Inconclusive,
}

impl Direction {
    pub fn as_str(self) -> &'static str {
        match self {
            Direction::Increasing => "increasing",
            Direction::Decreasing => "decreasing",
            Direction::NonMonotone => "non_monotone",
            Direction::Inconclusive => "inconclusive",
        }
    }
}

/// A sub-interval of the scan whose difference could not be signed.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MonotoneVerdict {
    pub direction: Direction,
    pub c: f64,
    pub scan: ScanSpec,
    pub witness: Option<Witness>,
    /// Smallest `|Δ| / error bound` among the differences the verdict rests
    /// on; for an inconclusive verdict, the worst ratio seen.
    pub margin_ratio: f64,
    /// First interval left unsigned after refinement.
    pub inconclusive: Option<Interval>,
    /// Intervals with both ends on the plateau `a ≤ -c`, where `p = 1`.
    pub plateau_intervals: usize,
    /// Grid intervals that needed bisection.
    pub refined_intervals: usize,
}

/// Bisection depth for grid intervals whose difference is not signed.
pub const REFINE_DEPTH: usize = 6;

#[derive(Debug, Clone, Copy)]
pub(crate) struct Point {
    pub a: f64,
    pub p: f64,
    pub err: f64,
    pub plateau: bool,
}

pub(crate) fn eval_point(a: f64, c: f64) -> Result<Point> {
    let e = tail_eval(TailQuery::new(a, c)?)?;
    Ok(Point {
        a,
        p: e.p,
        err: e.err_bound,
        plateau: a + c <= 0.0,
    })
}

/// `(q - p) / bound` for the difference between two evaluations; the
/// bound never vanishes, so the ratio is finite.
pub(crate) fn gap_ratio(lower: &Point, upper: &Point) -> f64 {
    let (d, r) = two_sum(upper.p, -lower.p);
    let bound = (lower.err + upper.err + r.abs()).max(f64::MIN_POSITIVE);
    d / bound
}

#[derive(Debug, Default)]
struct Outcome {
    rising: bool,
    falling: bool,
    flat: bool,
    /// Smallest ratio among signed differences.
    min_signed: f64,
    /// Smallest ratio among unsigned differences.
    min_unsigned: f64,
    unsigned: Option<Interval>,
    extra: Vec<Point>,
}

impl Outcome {
    fn new() -> Outcome {
        Outcome {
            min_signed: f64::INFINITY,
            min_unsigned: f64::INFINITY,
            ..Outcome::default()
        }
    }

    fn merge(&mut self, other: Outcome) {
        self.rising |= other.rising;
        self.falling |= other.falling;
        self.flat |= other.flat;
        self.min_signed = self.min_signed.min(other.min_signed);
        self.min_unsigned = self.min_unsigned.min(other.min_unsigned);
        if self.unsigned.is_none() {
            self.unsigned = other.unsigned;
        }
        self.extra.extend(other.extra);
    }
}

fn classify(
    scan: &ScanSpec,
    c: f64,
    lo: Point,
    hi: Point,
    depth: usize,
    margin: f64,
) -> Result<Outcome> {
    let mut out = Outcome::new();
    if lo.plateau && hi.plateau {
        out.flat = true;
        return Ok(out);
    }
    let ratio = gap_ratio(&lo, &hi);
    if ratio > margin {
        out.rising = true;
        out.min_signed = ratio;
        return Ok(out);
    }
    if ratio < -margin {
        out.falling = true;
        out.min_signed = -ratio;
        return Ok(out);
    }
    let mid = scan.midpoint(lo.a, hi.a);
    if depth >= REFINE_DEPTH || !(mid > lo.a && mid < hi.a) {
        out.min_unsigned = ratio.abs();
        out.unsigned = Some(Interval { lo: lo.a, hi: hi.a });
        return Ok(out);
    }
    let m = eval_point(mid, c)?;
    out.extra.push(m);
    out.merge(classify(scan, c, lo, m, depth + 1, margin)?);
    out.merge(classify(scan, c, m, hi, depth + 1, margin)?);
    Ok(out)
}

/// Certify the direction of `a ↦ p_c(a)` over a scan.
///
/// A difference between neighbouring points is signed only when it exceeds
/// `strict_margin` times the sum of both error bounds. Unsigned intervals are
/// bisected up to [`REFINE_DEPTH`] times. A verdict of increasing or
/// decreasing needs every difference signed the same way; differences of
/// both signs yield a [`Witness`] built from the evaluated points.
/// Intervals lying entirely on the plateau `a ≤ -c` are skipped.
pub fn certify_monotone(c: f64, scan: ScanSpec, prec: Precision) -> Result<MonotoneVerdict> {
    scan.validate()?;
    prec.validate()?;
    if !c.is_finite() {
        return Err(Error::domain("certify_monotone", format!("c = {c} is not finite")));
    }
    let margin = prec.strict_margin;
    let grid = scan.points();
    let points = grid
        .par_iter()
        .map(|&a| eval_point(a, c))
        .collect::<Vec<_>>()
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
    let outcomes = points
        .par_windows(2)
        .map(|w| classify(&scan, c, w[0], w[1], 0, margin))
        .collect::<Vec<_>>();
    let mut total = Outcome::new();
    let mut plateau_intervals = 0;
    let mut refined_intervals = 0;
    for o in outcomes {
        let o = o?;
        if o.flat && !o.rising && !o.falling && o.unsigned.is_none() {
            plateau_intervals += 1;
        }
        if !o.extra.is_empty() {
            refined_intervals += 1;
        }
        total.merge(o);
    }
    let mut verdict = MonotoneVerdict {
        direction: Direction::Inconclusive,
        c,
        scan,
        witness: None,
        margin_ratio: total.min_signed.min(total.min_unsigned),
        inconclusive: total.unsigned,
        plateau_intervals,
        refined_intervals,
    };
    if total.rising && total.falling {
        let mut all = points;
        all.extend(total.extra);
        all.sort_by(|p, q| p.a.total_cmp(&q.a));
        if let Some(w) = Witness::from_points(c, &all) {
            if w.margin_ratio() > margin {
                verdict.direction = Direction::NonMonotone;
                verdict.margin_ratio = w.margin_ratio();
                verdict.inconclusive = None;
                verdict.witness = Some(w);
            }
        }
        return Ok(verdict);
    }
    if total.unsigned.is_some() {
        return Ok(verdict);
    }
    verdict.direction = match (total.rising, total.falling) {
        (true, false) => Direction::Increasing,
        (false, true) => Direction::Decreasing,
        _ => Direction::Inconclusive,
    };
    if verdict.direction == Direction::Inconclusive {
        verdict.margin_ratio = 0.0;
    }
    Ok(verdict)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scan_points() {
        let s = ScanSpec::log(0.01, 200.0, 400).unwrap();
        let p = s.points();
        assert_eq!(p.len(), 400);
        assert_eq!((p[0], p[399]), (0.01, 200.0));
        assert!(p.windows(2).all(|w| w[1] > w[0]));
        let s = ScanSpec::new(1.0, 2.0, 5, Scale::Linear).unwrap();
        assert_eq!(s.points(), vec![1.0, 1.25, 1.5, 1.75, 2.0]);
        assert!(ScanSpec::log(0.0, 1.0, 5).is_err());
        assert!(ScanSpec::log(2.0, 1.0, 5).is_err());
        assert!(ScanSpec::log(1.0, 2.0, 2).is_err());
    }

    #[test]
    fn three_regimes() {
        let prec = Precision::default();
        let v = certify_monotone(0.0, ScanSpec::log(0.01, 200.0, 100).unwrap(), prec).unwrap();
        assert_eq!(v.direction, Direction::Increasing);
        assert!(v.margin_ratio >= 8.0);
        let v = certify_monotone(-1.0, ScanSpec::log(1.01, 200.0, 100).unwrap(), prec).unwrap();
        assert_eq!(v.direction, Direction::Decreasing);
        let v = certify_monotone(-0.2, ScanSpec::log(0.21, 500.0, 150).unwrap(), prec).unwrap();
        assert_eq!(v.direction, Direction::NonMonotone);
        let w = v.witness.unwrap();
        assert!(w.a1 < w.a2 && w.a2 < w.a3);
        assert!(w.p1 > w.p2 && w.p3 > w.p2);
    }

    #[test]
    fn plateau_is_skipped() {
        let prec = Precision::default();
        let v = certify_monotone(-2.0, ScanSpec::log(1.0, 50.0, 60).unwrap(), prec).unwrap();
        assert_eq!(v.direction, Direction::Decreasing);
        assert!(v.plateau_intervals > 0);
    }
}
