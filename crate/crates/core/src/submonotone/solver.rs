use crate::error::{Error, Infeasibility, Result};
use crate::numerics::{bisect, scan_brackets, Real};
use crate::submonotone::{
    beta_in_range, char_poly, check_feasible, coefficients, gammas_from, interval_ratios, x_of,
    y_of, Feasibility, RatioReport, SubMonotoneParams,
};

/// Supported probability range (inclusive).
pub const P_RANGE: (f64, f64) = (0.01, 0.99);
/// Largest supported number of hops.
pub const MAX_T: usize = 12;

#[derive(Clone, Debug, PartialEq)]
pub struct SolverConfig {
    pub lo: f64,
    pub hi: f64,
    pub steps: usize,
    /// Bisection width; zero bisects to the full precision of the scalar type.
    pub tol: f64,
    pub max_residual: f64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            lo: 3.0,
            hi: 8.0,
            steps: 2000,
            tol: 0.0,
            max_residual: 1e-8,
        }
    }
}

/// A discriminant root and why it was or was not used.
#[derive(Clone, Debug, PartialEq)]
pub struct Candidate<T> {
    pub r: T,
    pub beta: T,
    pub rejected: Option<Infeasibility>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Solution<T> {
    pub t: usize,
    pub r: T,
    pub params: SubMonotoneParams<T>,
    pub x: T,
    pub y: T,
    pub feasibility: Feasibility<T>,
    pub report: RatioReport<T>,
    /// Every discriminant root found in the scan, in increasing order.
    pub candidates: Vec<Candidate<T>>,
}

fn classify<T: Real>(p: &T, r: &T, t: usize) -> Candidate<T> {
    let beta = char_poly(p, r, t).vertex();
    let rejected = if !beta_in_range(p, &beta) {
        Some(Infeasibility::BetaRange)
    } else {
        match check_feasible(p, &beta, r) {
            Ok(f) => f.failure(),
            Err(_) => Some(Infeasibility::BetaRange),
        }
    };
    Candidate {
        r: r.clone(),
        beta,
        rejected,
    }
}

/// Equalizing `t`-sub-monotone strategy: the smallest discriminant root `R >= 3` whose pair
/// `(beta, R)` is feasible, with `beta` the vertex of the characteristic polynomial.
///
/// The construction is sufficient, not known to be optimal among all `t`-sub-monotone
/// strategies.
pub fn solve_optimal<T: Real>(p: &T, t: usize, cfg: &SolverConfig) -> Result<Solution<T>> {
    let pf = p.to_f64();
    if !(pf >= P_RANGE.0 - 1e-12 && pf <= P_RANGE.1 + 1e-12) {
        return Err(Error::Domain {
            what: "p",
            value: pf,
            range: "[0.01, 0.99]",
        });
    }
    if t > MAX_T {
        return Err(Error::Domain {
            what: "t",
            value: t as f64,
            range: "[0, 12]",
        });
    }
    let disc = |r: &T| char_poly(p, r, t).discriminant();
    let brackets = scan_brackets(disc, T::from_f64(cfg.lo), T::from_f64(cfg.hi), cfg.steps);
    if brackets.is_empty() {
        return Err(Error::NoRoot {
            lo: cfg.lo,
            hi: cfg.hi,
        });
    }
    let tol = T::from_f64(cfg.tol);
    let mut candidates = Vec::with_capacity(brackets.len());
    for b in &brackets {
        let r = bisect(b, disc, &tol)?;
        candidates.push(classify(p, &r, t));
    }
    let Some(chosen) = candidates.iter().find(|c| c.rejected.is_none()) else {
        return Err(Error::Infeasible(
            candidates[0].rejected.expect("all candidates rejected"),
        ));
    };
    let r = chosen.r.clone();
    let beta = chosen.beta.clone();

    let k = coefficients(p, &beta)?;
    let x = x_of(p, &r);
    let y = y_of(&k, p, &r);
    let gammas = gammas_from(&x, &y, t)?;
    let params = SubMonotoneParams::new(p, beta.clone(), gammas)?;
    let feasibility = check_feasible(p, &beta, &r)?;
    let report = interval_ratios(&params, p)?;
    let residual = report.closure_residual.abs().to_f64();
    if !(residual <= cfg.max_residual) {
        return Err(Error::Residual {
            residual,
            limit: cfg.max_residual,
        });
    }
    Ok(Solution {
        t,
        r,
        params,
        x,
        y,
        feasibility,
        report,
        candidates,
    })
}
