//! The map `f(x) = x e^(1-x)` and its two inverse branches.
//!
//! `f` rises from 0 to its maximum 1 at `x = 1` and then decays, so every
//! `z ∈ (0, 1)` has one preimage `x1 ∈ (0, 1)` and one `x2 ∈ (1, ∞)`. Taking
//! logs, both solve `(x - 1) - ln x = s` with `s = -ln z ≥ 0`; with
//! `x = 1 + y` this reads `y - ln(1 + y) = s`, a double root at `y = 0`.
//!
//! The solver works on `y` when `s` is small, so `x1 - 1` and `x2 - 1` stay
//! accurate to full relative precision as `z → 1`, and is seeded there by
//! the inversion of `y - ln(1+y) = q²/2`:
//! `y = q + q²/3 + q³/36 - q⁴/270 + q⁵/4320 + ...` with `q = ±sqrt(2s)`.

use serde::Serialize;

use super::log1pmx;
use crate::error::{Error, Result};

/// Smallest `z` accepted by [`branch_roots`].
pub const Z_MIN: f64 = 1e-300;
/// Largest `z` accepted by [`branch_roots`].
pub const Z_MAX: f64 = 1.0 - 1e-12;

const EPS: f64 = f64::EPSILON;
const MAX_ITER: usize = 100;
/// Below this `|1 - x_j|` the derivative `x_j'(z)` is treated as singular.
const DEGENERATE_GAP: f64 = 1e-14;

/// Which inverse branch of `f`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Branch {
    /// `x1 ∈ (0, 1)`.
    Lower,
    /// `x2 ∈ (1, ∞)`.
    Upper,
}

/// The two preimages of `z ∈ (0, 1)` under `f(x) = x e^(1-x)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BranchRoots {
    z: f64,
    x1: f64,
    x2: f64,
    /// `1 - x1`, carried separately for accuracy near `z = 1`.
    gap1: f64,
    /// `x2 - 1`.
    gap2: f64,
}

impl BranchRoots {
    pub fn z(&self) -> f64 {
        self.z
    }

    pub fn x1(&self) -> f64 {
        self.x1
    }

    pub fn x2(&self) -> f64 {
        self.x2
    }

    /// `1 - x1 > 0`.
    pub fn gap_lower(&self) -> f64 {
        self.gap1
    }

    /// `x2 - 1 > 0`.
    pub fn gap_upper(&self) -> f64 {
        self.gap2
    }

    /// `ln(x2 / x1)`, which equals `x2 - x1` because `f(x1) = f(x2)`.
    pub fn log_ratio(&self) -> f64 {
        self.gap1 + self.gap2
    }

    pub fn root(&self, which: Branch) -> f64 {
        match which {
            Branch::Lower => self.x1,
            Branch::Upper => self.x2,
        }
    }
}

/// `f(x) = x e^(1-x)` for finite `x ≥ 0`.
pub fn f_map(x: f64) -> Result<f64> {
    if !(x.is_finite() && x >= 0.0) {
        return Err(Error::domain("f_map", format!("x = {x} must be finite and >= 0")));
    }
    if x == 0.0 {
        return Ok(0.0);
    }
    // x e^(1-x) = exp(ln x + 1 - x) is exactly 1 at x = 1 and keeps
    // relative accuracy when x is far from 1.
    Ok((1.0 - x).exp() * x)
}

/// `y = x - 1` for `|q|` small, where `y - ln(1+y) = q²/2`.
pub(crate) fn double_root_series(q: f64) -> f64 {
    const C: [f64; 8] = [
        1.0,
        1.0 / 3.0,
        1.0 / 36.0,
        -1.0 / 270.0,
        1.0 / 4320.0,
        1.0 / 17010.0,
        -139.0 / 5_443_200.0,
        1.0 / 204_120.0,
    ];
    let mut acc = 0.0;
    for c in C.iter().rev() {
        acc = acc * q + c;
    }
    acc * q
}

/// Signed `q = ±sqrt(2s)` selecting the branch.
fn branch_q(s: f64, branch: Branch) -> f64 {
    let q = (2.0 * s).sqrt();
    match branch {
        Branch::Lower => -q,
        Branch::Upper => q,
    }
}

/// Solve `(x - 1) - ln x = s` on one branch.
///
/// `z = e^-s` is passed alongside `s` so the caller can supply whichever of
/// the two it knows to full precision. Returns `(x, x - 1)`.
pub(crate) fn solve_branch(z: f64, s: f64, branch: Branch) -> (f64, f64) {
    if s <= 0.0 {
        return (1.0, 0.0);
    }
    if s < 0.5 {
        let y = halley_offset(double_root_series(branch_q(s, branch)), s, branch);
        return (1.0 + y, y);
    }
    match branch {
        Branch::Lower if z < 0.05 => {
            // x = z e^(x-1) is a contraction with rate x1 < 0.02 here.
            let mut x = z / super::E_HI;
            for _ in 0..MAX_ITER {
                let next = z * (x - 1.0).exp();
                if next == x {
                    break;
                }
                x = next;
            }
            (x, x - 1.0)
        }
        Branch::Lower => {
            let mut x = z / super::E_HI;
            for _ in 0..4 {
                x = z * (x - 1.0).exp();
            }
            let x = halley_lower(x, s);
            (x, x - 1.0)
        }
        Branch::Upper => {
            let t = 1.0 + s;
            let y = halley_offset(t + (t + t.ln()).ln() - 1.0, s, branch);
            (1.0 + y, y)
        }
    }
}

/// Halley iteration on `h(y) = (y - ln(1+y)) - s`.
fn halley_offset(mut y: f64, s: f64, branch: Branch) -> f64 {
    for _ in 0..MAX_ITER {
        if y == 0.0 {
            break;
        }
        let h = -log1pmx(y) - s;
        let d1 = y / (1.0 + y);
        let newton = h / d1;
        // h h'' / (2 h'^2) simplifies to h / (2 y^2)
        let step = newton / (1.0 - 0.5 * h / (y * y));
        let step = if step.is_finite() { step } else { newton };
        let mut next = y - step;
        match branch {
            Branch::Lower => {
                if next <= -1.0 {
                    next = 0.5 * (y - 1.0);
                } else if next >= 0.0 {
                    next = 0.5 * y;
                }
            }
            Branch::Upper => {
                if next <= 0.0 {
                    next = 0.5 * y;
                }
            }
        }
        let done = (next - y).abs() <= 2.0 * EPS * next.abs();
        y = next;
        if done {
            break;
        }
    }
    y
}

/// Halley iteration on `h(x) = (x - 1) - ln x - s` for `x ∈ (0, 1)`.
fn halley_lower(mut x: f64, s: f64) -> f64 {
    for _ in 0..MAX_ITER {
        let h = -log1pmx(x - 1.0) - s;
        let d1 = 1.0 - 1.0 / x;
        let d2 = 1.0 / (x * x);
        let newton = h / d1;
        let step = newton / (1.0 - 0.5 * newton * d2 / d1);
        let step = if step.is_finite() { step } else { newton };
        let mut next = x - step;
        if next <= 0.0 {
            next = 0.5 * x;
        } else if next >= 1.0 {
            next = 0.5 * (x + 1.0);
        }
        let done = (next - x).abs() <= 2.0 * EPS * next;
        x = next;
        if done {
            break;
        }
    }
    x
}

/// Both preimages of `z` under `f`, for `z ∈ [Z_MIN, Z_MAX]`.
///
/// `x1 = -W0(-z/e)` and `x2 = -W₋₁(-z/e)`.
pub fn branch_roots(z: f64) -> Result<BranchRoots> {
    if !(Z_MIN..=Z_MAX).contains(&z) {
        return Err(Error::domain(
            "branch_roots",
            format!("z = {z} outside [{Z_MIN:e}, 1 - 1e-12]"),
        ));
    }
    let s = -z.ln();
    let (x1, y1) = solve_branch(z, s, Branch::Lower);
    let (x2, y2) = solve_branch(z, s, Branch::Upper);
    Ok(BranchRoots {
        z,
        x1,
        x2,
        gap1: -y1,
        gap2: y2,
    })
}

/// `x_j'(z) = x_j / ((1 - x_j) z)`: positive on the lower branch, negative
/// on the upper one.
pub fn branch_root_deriv(roots: &BranchRoots, which: Branch) -> Result<f64> {
    let (x, one_minus_x) = match which {
        Branch::Lower => (roots.x1, roots.gap1),
        Branch::Upper => (roots.x2, -roots.gap2),
    };
    if one_minus_x.abs() < DEGENERATE_GAP {
        return Err(Error::degenerate(
            "branch_root_deriv",
            format!("|1 - x| = {:e} at z = {}", one_minus_x.abs(), roots.z),
        ));
    }
    Ok(x / (one_minus_x * roots.z))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn f_map_values() {
        assert_eq!(f_map(1.0).unwrap(), 1.0);
        assert_eq!(f_map(0.0).unwrap(), 0.0);
        assert!((f_map(2.0).unwrap() - 0.735_758_882_342_884_7).abs() < 1e-16);
        assert!(f_map(-1.0).is_err());
        assert!(f_map(f64::NAN).is_err());
    }

    #[test]
    fn roots_at_two_over_e() {
        let z = 2.0 / std::f64::consts::E;
        let r = branch_roots(z).unwrap();
        assert!((r.x2() - 2.0).abs() < 1e-15);
        // 40-digit reference: -W0(-2/e^2)
        assert!((r.x1() - 0.406_375_739_959_959_9).abs() < 1e-15);
    }

    #[test]
    fn derivative_at_two_over_e() {
        let z = 2.0 / std::f64::consts::E;
        let r = branch_roots(z).unwrap();
        let d2 = branch_root_deriv(&r, Branch::Upper).unwrap();
        assert!((d2 + std::f64::consts::E).abs() < 1e-14);
        let d1 = branch_root_deriv(&r, Branch::Lower).unwrap();
        assert!((d1 - 0.930_423_387_165_181_6).abs() < 1e-14);
    }

    #[test]
    fn double_root_expansion_near_one() {
        for &gap in &[1e-12, 1e-9, 1e-6, 1e-3] {
            let z = 1.0 - gap;
            let r = branch_roots(z).unwrap();
            let width = r.x2() - r.x1();
            let lead = 2.0 * (2.0 * (1.0 - z)).sqrt();
            assert!(((width - lead) / lead).abs() < 2.0 * (2.0 * gap).sqrt());
            assert!(r.x1() < 1.0 && r.x2() > 1.0);
        }
    }

    #[test]
    fn extreme_small_z() {
        let r = branch_roots(Z_MIN).unwrap();
        // x1 ≈ z/e, x2 ≈ -ln z
        assert!(((r.x1() * std::f64::consts::E / Z_MIN) - 1.0).abs() < 1e-12);
        assert!(r.x2() > 690.0 && r.x2() < 700.0);
        let back = f_map(r.x2()).unwrap();
        assert!(((back - Z_MIN) / Z_MIN).abs() < 1e-12);
    }

    #[test]
    fn domain_is_enforced() {
        assert!(branch_roots(0.0).is_err());
        assert!(branch_roots(1.0).is_err());
        assert!(branch_roots(1.0 - 1e-13).is_err());
        assert!(branch_roots(1e-301).is_err());
    }
}
