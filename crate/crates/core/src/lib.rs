//! Centered gamma tail probabilities `p_c(a) = P(X_a - a > c)` for
//! `X_a ~ Gamma(a, 1)`, the special functions behind them, and numerical
//! certification of how `p_c` moves with the shape `a`.
//!
//! Start with [`tailprob::tail_eval`] for values and
//! [`certify::certify_monotone`] for verdicts. The guide under `book/`
//! walks through each module; its code blocks run as doc-tests.

pub mod certify;
pub mod error;
pub mod median;
pub mod oracle;
pub mod quad;
pub mod specfun;
pub mod tailprob;
pub mod verify;

pub use error::{Error, Result};

#[cfg(doctest)]
#[doc = include_str!("../../../README.md")]
mod readme {}

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/tail-probability.md")]
    mod tail_probability {}
    #[doc = include_str!("../../../book/src/special-functions.md")]
    mod special_functions {}
    #[doc = include_str!("../../../book/src/certification.md")]
    mod certification {}
    #[doc = include_str!("../../../book/src/medians-and-means.md")]
    mod medians_and_means {}
    #[doc = include_str!("../../../book/src/verification.md")]
    mod verification {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
