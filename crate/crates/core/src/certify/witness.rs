use serde::Serialize;

use super::monotone::{eval_point, gap_ratio, Point};
use crate::error::{Error, Result};
use crate::specfun::Precision;

/// Largest shape the witness search will try.
pub const WITNESS_A_MAX: f64 = 1e6;

/// `a1 < a2 < a3` with `p_c(a1) > p_c(a2) < p_c(a3)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Witness {
    pub c: f64,
    pub a1: f64,
    pub a2: f64,
    pub a3: f64,
    pub p1: f64,
    pub p2: f64,
    pub p3: f64,
    /// Error bounds of `p1`, `p2`, `p3`.
    pub err: [f64; 3],
}

impl Witness {
    fn from_triple(c: f64, x: Point, y: Point, z: Point) -> Witness {
        Witness {
            c,
            a1: x.a,
            a2: y.a,
            a3: z.a,
            p1: x.p,
            p2: y.p,
            p3: z.p,
            err: [x.err, y.err, z.err],
        }
    }

    fn point(&self, i: usize) -> Point {
        let (a, p) = [(self.a1, self.p1), (self.a2, self.p2), (self.a3, self.p3)][i];
        Point {
            a,
            p,
            err: self.err[i],
            plateau: a + self.c <= 0.0,
        }
    }

    /// The smaller of `(p1 - p2)` and `(p3 - p2)`, each divided by its
    /// combined error bound.
    pub fn margin_ratio(&self) -> f64 {
        let (x, y, z) = (self.point(0), self.point(1), self.point(2));
        (-gap_ratio(&x, &y)).min(gap_ratio(&y, &z))
    }

    /// Global minimum of sorted points, flanked by the largest value on each
    /// side. `None` when the minimum sits at an end.
    pub(crate) fn from_points(c: f64, pts: &[Point]) -> Option<Witness> {
        let k = pts
            .iter()
            .enumerate()
            .min_by(|(_, p), (_, q)| p.p.total_cmp(&q.p))
            .map(|(i, _)| i)?;
        if k == 0 || k + 1 == pts.len() {
            return None;
        }
        let best = |s: &[Point]| -> Point {
            *s.iter()
                .max_by(|p, q| p.p.total_cmp(&q.p).then(q.a.total_cmp(&p.a)))
                .expect("non-empty side")
        };
        Some(Witness::from_triple(c, best(&pts[..k]), pts[k], best(&pts[k + 1..])))
    }
}

/// Minimise `p_c` over `[lo, hi]` by golden-section search in `ln a`.
fn golden_min(c: f64, lo: f64, hi: f64, max_iter: usize) -> Result<Point> {
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let (mut l, mut h) = (lo.ln(), hi.ln());
    let mut x1 = h - g * (h - l);
    let mut x2 = l + g * (h - l);
    let mut p1 = eval_point(x1.exp(), c)?;
    let mut p2 = eval_point(x2.exp(), c)?;
    for _ in 0..max_iter {
        if h - l <= 1e-10 {
            break;
        }
        if p1.p <= p2.p {
            h = x2;
            x2 = x1;
            p2 = p1;
            x1 = h - g * (h - l);
            p1 = eval_point(x1.exp(), c)?;
        } else {
            l = x1;
            x1 = x2;
            p1 = p2;
            x2 = l + g * (h - l);
            p2 = eval_point(x2.exp(), c)?;
        }
    }
    Ok(if p1.p <= p2.p { p1 } else { p2 })
}

/// Certified witness of non-monotonicity for `c ∈ (-1/3, 0)`.
///
/// `a1` sits just right of the plateau edge `-c`; `a2` minimises `p_c`
/// after a coarse log scan; `a3` doubles from `4 a2` until `p_c(a3)` clears
/// `p_c(a2)` by the strict margin, giving up past [`WITNESS_A_MAX`].
pub fn find_witness(c: f64, prec: Precision) -> Result<Witness> {
    prec.validate()?;
    if !(c > -1.0 / 3.0 && c < 0.0) {
        return Err(Error::domain("find_witness", format!("c = {c} must lie in (-1/3, 0)")));
    }
    let margin = prec.strict_margin;
    let edge = -c;
    // coarse scan over [edge (1 + 1e-3), edge · 1e5]
    let n = 160;
    let (lo, hi) = ((edge * 1.001).ln(), (edge * 1e5).ln());
    let mut coarse = Vec::with_capacity(n);
    for i in 0..n {
        let a = (lo + (hi - lo) * i as f64 / (n - 1) as f64).exp();
        coarse.push(eval_point(a, c)?);
    }
    let k = coarse
        .iter()
        .enumerate()
        .min_by(|(_, p), (_, q)| p.p.total_cmp(&q.p))
        .map(|(i, _)| i)
        .expect("non-empty scan");
    let left = coarse[k.saturating_sub(1)].a;
    let right = coarse[(k + 1).min(n - 1)].a;
    let low = golden_min(c, left, right, prec.max_iter)?;
    let mut first = None;
    for delta in [1e-3, 1e-6, 1e-9] {
        let a1 = edge * (1.0 + delta);
        if a1 >= low.a {
            break;
        }
        let p = eval_point(a1, c)?;
        if -gap_ratio(&p, &low) > margin {
            first = Some(p);
            break;
        }
    }
    let first = first.ok_or_else(|| Error::Budget {
        func: "find_witness",
        detail: format!("no certified descent from the plateau edge to a = {}", low.a),
    })?;
    let mut a3 = 4.0 * low.a;
    while a3 <= WITNESS_A_MAX {
        let p = eval_point(a3, c)?;
        if gap_ratio(&low, &p) > margin {
            return Ok(Witness::from_triple(c, first, low, p));
        }
        a3 *= 2.0;
    }
    Err(Error::Budget {
        func: "find_witness",
        detail: format!("p_c(a) did not certifiably exceed p_c({}) for a ≤ {WITNESS_A_MAX:e}", low.a),
    })
}
