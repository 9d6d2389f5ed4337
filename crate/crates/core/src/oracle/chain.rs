//! Double-double evaluation of λ, its derivative-ratio chain and the gaps in
//! the mean chain `sqrt(xy) < L < G̃ < (x+y)/2`.
//!
//! Everything is written in `u = ln(y/x)` through positive-coefficient
//! series, so no gap is formed by subtracting nearly equal numbers except
//! `λ + 1/3`, whose relative loss is about `u²` and harmless at 106 bits.

use serde::Serialize;

use super::dd::Dd;

/// The four ratios of the l'Hospital chain for λ, each a function of `y > 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ChainStage {
    /// `λ = f/g`.
    Lambda,
    /// `f1/g1 = (1/y - y + 2 ln y) / ((y-1)² ln y / y)`.
    F1G1,
    /// `f2/g2 = ((1-y)/(1+y)) / (ln y + (y-1)/(y+1))`.
    F2G2,
    /// `r3 = -2y / (1 + 4y + y²)`.
    R3,
}

impl ChainStage {
    pub const ALL: [ChainStage; 4] = [
        ChainStage::Lambda,
        ChainStage::F1G1,
        ChainStage::F2G2,
        ChainStage::R3,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ChainStage::Lambda => "lambda",
            ChainStage::F1G1 => "f1/g1",
            ChainStage::F2G2 => "f2/g2",
            ChainStage::R3 => "r3",
        }
    }
}

/// Tails of the exponential series in `u`, all with positive terms.
struct Sums {
    /// `cosh u - 1 - u²/2`
    f: Dd,
    /// `cosh u - 1`
    cm1: Dd,
    /// `sinh u - u`
    smu: Dd,
    /// `e^u - 1 - u`
    a: Dd,
    /// `u e^u - e^u + 1`
    b: Dd,
}

fn sums(u: Dd) -> Sums {
    let mut term = Dd::ONE; // u^k / k!
    let mut s = Sums {
        f: Dd::ZERO,
        cm1: Dd::ZERO,
        smu: Dd::ZERO,
        a: Dd::ZERO,
        b: Dd::ZERO,
    };
    let mut k = 0usize;
    loop {
        k += 1;
        term = term * u / Dd::from(k as f64);
        if k >= 2 {
            s.a = s.a + term;
            s.b = s.b + term.mul_f64((k - 1) as f64);
            if k % 2 == 0 {
                s.cm1 = s.cm1 + term;
                if k >= 4 {
                    s.f = s.f + term;
                }
            } else {
                s.smu = s.smu + term;
            }
        }
        if k > 4 && term.hi < 1e-34 * s.a.hi {
            break;
        }
    }
    s
}

/// `λ(e^u) + 1/3` and `λ(e^u)` for `u > 0`.
fn lambda_parts(u: Dd) -> (Dd, Dd) {
    let s = sums(u);
    let eu = u.exp();
    let ab = s.a * s.b;
    let lambda = -(s.f * eu).mul_f64(2.0) / ab;
    let shifted = (ab - (s.f * eu).mul_f64(6.0)) / ab.mul_f64(3.0);
    (shifted, lambda)
}

/// The chain ratio at `y > 1` in double-double.
pub fn dd_stage(stage: ChainStage, y: f64) -> Dd {
    let u = Dd::from(y).ln();
    match stage {
        ChainStage::Lambda => lambda_parts(u).1,
        ChainStage::F1G1 => {
            let s = sums(u);
            -s.smu / (u * s.cm1)
        }
        ChainStage::F2G2 => {
            // tanh(u/2) = (cosh u - 1) / sinh u
            let s = sums(u);
            let th = s.cm1 / (s.smu + u);
            -th / (u + th)
        }
        ChainStage::R3 => {
            let y = Dd::from(y);
            -y.mul_f64(2.0) / (Dd::ONE + y.mul_f64(4.0) + y * y)
        }
    }
}

/// `λ(y) + 1/3` in double-double; positive for every `y > 1`.
pub fn dd_lambda_plus_third(y: f64) -> Dd {
    lambda_parts(Dd::from(y).ln()).0
}

/// The three gaps of `sqrt(xy) < L < G̃_κ < (x+y)/2` for `0 < x < y`,
/// where `G̃_κ` uses factor `κ` in place of 1/3.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MeanGaps {
    /// `L - sqrt(xy)`
    pub geo_log: f64,
    /// `G̃_κ - L`
    pub log_tilde: f64,
    /// `(x+y)/2 - G̃_κ`
    pub tilde_arith: f64,
    /// Estimated absolute error of each gap.
    pub err: [f64; 3],
}

/// Mean-chain gaps in double-double, rounded once at the end.
pub fn dd_mean_gaps(x: f64, y: f64, kappa: f64) -> MeanGaps {
    let xd = Dd::from(x);
    let rho = Dd::from(y) / xd;
    let u = rho.ln();
    let s = sums(u);
    let eu_half = u.mul_f64(0.5).exp();
    // L - sqrt(xy) = x e^(u/2) (2 sinh(u/2)/u - 1)
    //             = x e^(u/2) Σ_{k≥1} (u/2)^(2k) / (2k+1)!
    let h = u.mul_f64(0.5);
    let mut term = Dd::ONE;
    let mut series = Dd::ZERO;
    let mut k = 1.0;
    loop {
        term = term * h * h / Dd::from((2.0 * k) * (2.0 * k + 1.0));
        series = series + term;
        if term.hi < 1e-34 * series.hi {
            break;
        }
        k += 1.0;
    }
    let geo_log = xd * eu_half * series;
    // L = x (ρ - 1)/u, (L - x)(y - L) = x² A B / u²
    let l = xd * (rho - Dd::ONE) / u;
    let spread = xd * xd * s.a * s.b / (u * u);
    // λ + κ = (λ + 1/3) + (κ - 1/3), with λ taken at ρ
    let (shift, _) = lambda_parts(u);
    let third = Dd::ONE / Dd::from(3.0);
    // the double nearest 1/3 stands for 1/3 itself
    let kappa = if kappa == 1.0 / 3.0 { third } else { Dd::from(kappa) };
    let kappa_shift = shift + kappa - third;
    // G̃_κ² - L² = xy - L² + κ (L-x)(y-L) = (λ + κ) (L-x)(y-L)
    let sq_gap = kappa_shift * spread;
    let gt_sq = l * l + sq_gap;
    let gt = gt_sq.sqrt();
    let log_tilde = sq_gap / (gt + l);
    // ((x+y)/2)² - G̃_κ² = ((y-x)/2)² - κ (L-x)(y-L)
    let half_diff = (Dd::from(y) - xd).mul_f64(0.5);
    let arith = (Dd::from(y) + xd).mul_f64(0.5);
    let tilde_arith = (half_diff * half_diff - kappa * spread) / (arith + gt);
    // About 2^-100 per operation; λ + κ carries an absolute (not relative)
    // error of a few units, scaled by (L-x)(y-L) / (G̃ + L).
    let unit = 2f64.powi(-100);
    let spread_scale = (spread / (gt + l)).hi.abs();
    MeanGaps {
        geo_log: geo_log.to_f64(),
        log_tilde: log_tilde.to_f64(),
        tilde_arith: tilde_arith.to_f64(),
        err: [
            unit * 16.0 * (geo_log.hi.abs() + y),
            unit * 16.0 * (log_tilde.hi.abs() + spread_scale + y),
            unit * 16.0 * (tilde_arith.hi.abs() + y),
        ],
    }
}

/// `1 - x1 x2 + c (1 - x1)(x2 - 1)` in double-double from double inputs.
pub fn dd_m_c(x1: f64, x2: f64, c: f64) -> f64 {
    let (a, b) = (Dd::from(x1), Dd::from(x2));
    (Dd::ONE - a * b + Dd::from(c) * (Dd::ONE - a) * (b - Dd::ONE)).to_f64()
}
