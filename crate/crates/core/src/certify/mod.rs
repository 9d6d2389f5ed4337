//! Numerical certification of monotonicity and of the identities and
//! inequalities behind it.
//!
//! A strict inequality is accepted only when the gap exceeds
//! [`Precision::strict_margin`](crate::specfun::Precision) times an estimated
//! error bound. Grid work runs on rayon and is gathered in index order, so
//! every report is the same bit for bit whatever the thread count.

mod asymptotic;
mod chains;
mod identities;
mod monotone;
mod witness;

pub use asymptotic::{check_asymptotic, g_eps, AsymptoticPoint, AsymptoticReport, SLOPE_TOL};
pub use chains::{
    chain_stage, check_lemma_chain, check_mean_chain, lemma_grid, r3_derivative,
    random_mean_pairs, LemmaChainReport, MeanChainReport, MeanFailure, StageReport, LIMIT_POINT,
    PROBE_FACTOR,
};
pub use identities::{
    check_dichotomy, check_identity, check_sign_relation, identity_pairs, sign_points,
    uniform_z_grid, DichotomyCase, DichotomyReport, IdentityPoint, IdentityReport, SignMismatch,
    SignRelationReport, SIGN_NOISE_FLOOR,
};
pub use monotone::{
    certify_monotone, Direction, Interval, MonotoneVerdict, Scale, ScanSpec, REFINE_DEPTH,
};
pub use witness::{find_witness, Witness, WITNESS_A_MAX};
