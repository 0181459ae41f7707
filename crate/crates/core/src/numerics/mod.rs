//! Root finding, dense linear solves, polynomials and series truncation.

mod linear;
mod poly;
mod real;
mod roots;

pub use linear::{norm_inf, pivot_threshold, residual_inf, solve_linear, PIVOT_THRESHOLD};
pub use poly::{quadratic_roots, Poly};
pub use real::{mp_precision, with_mp_precision, Mp, Real, MP_PRECISION};
pub use roots::{bisect, scan_brackets, Bracket};

use crate::error::{check_probability, Error, Result};

/// Number of terms of `sum_i (1-p)^(i-1) g_i` after which the remainder is below `eps`,
/// given `g_i <= growth^(i/2)`.
///
/// With `rho = (1-p) sqrt(growth)` the remainder after `k` terms is at most
/// `rho^(k+1) / ((1-p)(1-rho))`. Callers with a gap scale `G` pass `eps / G`.
pub fn tail_bound_terms(p: f64, growth: f64, eps: f64) -> Result<usize> {
    check_probability(p)?;
    let q = 1.0 - p;
    let limit = 1.0 / (q * q);
    if !(growth >= 1.0) {
        return Err(Error::Domain {
            what: "growth",
            value: growth,
            range: "[1, 1/(1-p)^2)",
        });
    }
    if growth >= limit {
        return Err(Error::Divergent { growth, limit });
    }
    if !(eps > 0.0) {
        return Err(Error::Domain {
            what: "eps",
            value: eps,
            range: "(0, inf)",
        });
    }
    let rho = q * growth.sqrt();
    // remainder(k) = rho^(k+1) / (q (1 - rho)) < eps
    let scale = q * (1.0 - rho);
    let k = ((eps * scale).ln() / rho.ln() - 1.0).floor() + 1.0;
    let mut k = k.max(1.0) as usize;
    while rho.powi(k as i32 + 1) / scale >= eps {
        k += 1;
    }
    while k > 1 && rho.powi(k as i32) / scale < eps {
        k -= 1;
    }
    Ok(k)
}
