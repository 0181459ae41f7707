//! Search strategies for a target on the half-line that is detected with probability `p`
//! on every pass.
//!
//! * [`monotone`]: the optimal return-to-origin strategy and a numeric lower-bound check.
//! * [`submonotone`]: strategies that sweep each interval three times between returns.
//! * [`trajectory`] and [`montecarlo`]: independent evaluation of any strategy.

pub mod error;
pub mod exec;
pub mod montecarlo;
pub mod monotone;
pub mod numerics;
pub mod submonotone;
pub mod trajectory;

pub use error::{Error, Infeasibility, Result};
pub use exec::Exec;
pub use numerics::{Mp, Real};
pub use trajectory::{Placement, Strategy};

/// Probability grid `0.01, 0.015, ..., 0.99` (197 points).
pub fn p_grid() -> Vec<f64> {
    (0..197).map(|i| (10 + 5 * i) as f64 / 1000.0).collect()
}
