//! Slow, independent reference implementations.
//!
//! Nothing here calls the series, continued fractions or Halley iterations
//! in [`crate::specfun`]; the only shared ingredients are IEEE arithmetic and
//! the platform `exp`/`ln`. Extended precision appears as double-double
//! arithmetic ([`Dd`]) and stays inside this module.
//!
//! * [`oracle_gamma_q`]: `Q(a, x)` by quadrature of the defining integral.
//! * [`oracle_root`]: bisection for Lambert W and the branch roots.
//! * [`fd_derivative`]: central differences with an error estimate.
//! * [`dd_stage`], [`dd_mean_gaps`], [`dd_m_c`]: double-double evaluation of
//!   the λ chain, the mean-chain gaps and the sign function.

mod chain;
mod dd;
mod diff;
mod gamma;
mod roots;

pub use chain::{dd_lambda_plus_third, dd_m_c, dd_mean_gaps, dd_stage, ChainStage, MeanGaps};
pub use dd::{two_prod, two_sum, Dd};
pub use diff::{fd_derivative, FdEstimate};
pub use gamma::oracle_gamma_q;
pub use roots::{oracle_root, RootFn};
