//! t-sub-monotone strategies: per-interval ratios, the characteristic polynomial, the
//! equalizing solver, closed-form heuristics for small `t`, and the large-`t` limit.
//!
//! Everything here is generic over [`Real`]; the solver is meant to run on [`Mp`] because
//! the quantities of interest shrink geometrically in `t`.
//!
//! [`Mp`]: crate::numerics::Mp

mod charpoly;
mod heuristics;
mod params;
mod solver;

pub use charpoly::{char_poly, limit_coefficients, limit_quartic, CharPoly};
pub use heuristics::{heuristic_t1, heuristic_t1_ratio, heuristic_t2, heuristic_t2_cubic, limit_ratio, Heuristic, Limit};
pub use params::{ParamsView, SubMonotoneParams};
pub use solver::{solve_optimal, Candidate, Solution, SolverConfig, MAX_T, P_RANGE};

use crate::error::{Error, Infeasibility, Result};
use crate::numerics::Real;

/// The six coefficients of the per-interval ratio formulas.
#[derive(Clone, Debug, PartialEq)]
pub struct CoefficientSet<T> {
    pub a: T,
    pub b: T,
    pub c: T,
    pub d: T,
    pub e: T,
    pub f: T,
}

fn check_p<T: Real>(p: &T) -> Result<()> {
    if *p > T::zero() && *p < T::one() {
        Ok(())
    } else {
        Err(Error::Domain {
            what: "p",
            value: p.to_f64(),
            range: "(0, 1)",
        })
    }
}

fn beta_in_range<T: Real>(p: &T, beta: &T) -> bool {
    let q = T::one() - p.clone();
    *beta > T::one() && beta.clone() * q.clone() * q < T::one()
}

pub fn coefficients<T: Real>(p: &T, beta: &T) -> Result<CoefficientSet<T>> {
    check_p(p)?;
    if !beta_in_range(p, beta) {
        return Err(Error::Domain {
            what: "beta",
            value: beta.to_f64(),
            range: "(1, 1/(1-p)^2)",
        });
    }
    let p = p.clone();
    let b = beta.clone();
    let q = T::one() - p.clone();
    let two_p = T::from_f64(2.0) - p.clone();
    let pole = T::one() - b.clone() * q.clone() * q.clone();
    let q3 = q.powi(3);

    let a = q.clone() * 2.0;
    let bb = T::from_f64(2.0) / (b.clone() - 1.0) + q3.clone() * 2.0 / pole.clone();
    let c = p.clone() * q3 * two_p.clone() * b.clone() * 2.0 / pole.clone();
    let d = (p.powi(4) * -2.0 + p.powi(3) * 12.0 - p.powi(2) * 26.0 + p.clone() * 23.0 - 4.0)
        / two_p.clone();
    let e = p.clone() * q.clone() * two_p.clone() * b.clone() * 2.0 / pole.clone();
    let f = p.clone()
        * ((b.clone() * q + 1.0) * 2.0 / ((b - 1.0) * pole)
            + (T::from_f64(5.0) - p.clone() * 2.0) / two_p);
    Ok(CoefficientSet {
        a,
        b: bb,
        c,
        d,
        e,
        f,
    })
}

/// `x = (R/p - D)/A`; independent of beta.
pub fn x_of<T: Real>(p: &T, r: &T) -> T {
    let two_p = T::from_f64(2.0) - p.clone();
    let d = (p.powi(4) * -2.0 + p.powi(3) * 12.0 - p.powi(2) * 26.0 + p.clone() * 23.0 - 4.0)
        / two_p;
    (r.clone() / p.clone() - d) / ((T::one() - p.clone()) * 2.0)
}

/// `y = (B E/(R/p - F) + C)/A`.
pub fn y_of<T: Real>(k: &CoefficientSet<T>, p: &T, r: &T) -> T {
    let last = last_gamma(k, p, r);
    (k.b.clone() * last + k.c.clone()) / k.a.clone()
}

/// The value `E/(R/p - F)` that equalization forces on `gamma_t`.
pub fn last_gamma<T: Real>(k: &CoefficientSet<T>, p: &T, r: &T) -> T {
    k.e.clone() / (r.clone() / p.clone() - k.f.clone())
}

/// `gamma_i = (1 - y/(x-1)) x^i + y/(x-1)` for `i = 1..=t`.
pub fn gammas_from<T: Real>(x: &T, y: &T, t: usize) -> Result<Vec<T>> {
    if !(*x > T::one()) {
        return Err(Error::Domain {
            what: "x",
            value: x.to_f64(),
            range: "(1, inf)",
        });
    }
    let shift = y.clone() / (x.clone() - 1.0);
    let lead = T::one() - shift.clone();
    Ok((1..=t)
        .map(|i| lead.clone() * x.powi(i as i32) + shift.clone())
        .collect())
}

/// Gap between `gamma_t` from the recurrence and the value equalization requires.
pub fn closure_residual<T: Real>(p: &T, beta: &T, r: &T, t: usize) -> Result<T> {
    let k = coefficients(p, beta)?;
    let x = x_of(p, r);
    let y = y_of(&k, p, r);
    let shift = y / (x.clone() - 1.0);
    let gamma_t = (T::one() - shift.clone()) * x.powi(t as i32) + shift;
    Ok(gamma_t - last_gamma(&k, p, r))
}

#[derive(Clone, Debug, PartialEq)]
pub struct Feasibility<T> {
    /// `x - y - 1`
    pub spread: T,
    /// `beta - E/(R/p - F)`
    pub last_gap: T,
    pub feasible: bool,
}

impl<T: Real> Feasibility<T> {
    pub fn failure(&self) -> Option<Infeasibility> {
        if !(self.spread > T::zero()) {
            Some(Infeasibility::Spread)
        } else if !(self.last_gap > T::zero()) {
            Some(Infeasibility::LastGamma)
        } else {
            None
        }
    }
}

pub fn check_feasible<T: Real>(p: &T, beta: &T, r: &T) -> Result<Feasibility<T>> {
    let k = coefficients(p, beta)?;
    let x = x_of(p, r);
    let y = y_of(&k, p, r);
    let spread = x - y - 1.0;
    let last_gap = beta.clone() - last_gamma(&k, p, r);
    let feasible = spread > T::zero() && last_gap > T::zero();
    Ok(Feasibility {
        spread,
        last_gap,
        feasible,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct RatioReport<T> {
    /// `R_1 .. R_{t+1}`
    pub per_interval: Vec<T>,
    pub overall: T,
    pub feasible: bool,
    pub closure_residual: T,
}

impl<T: Real> RatioReport<T> {
    /// `max - min` over the intervals.
    pub fn spread(&self) -> T {
        let mut lo = self.per_interval[0].clone();
        let mut hi = lo.clone();
        for r in &self.per_interval[1..] {
            lo = lo.min(r.clone());
            hi = hi.max(r.clone());
        }
        hi - lo
    }
}

/// Worst-case ratio of each interval `[gamma_{i-1} x_r, gamma_i x_r)` in the limit `r -> inf`.
pub fn interval_ratios<T: Real>(params: &SubMonotoneParams<T>, p: &T) -> Result<RatioReport<T>> {
    let k = coefficients(p, params.beta())?;
    let t = params.t();
    let gamma_t = params.gamma(t);
    let mut per_interval = Vec::with_capacity(t + 1);
    for i in 1..=t {
        let num = k.a.clone() * params.gamma(i) + k.b.clone() * gamma_t.clone() + k.c.clone();
        per_interval.push(p.clone() * (num / params.gamma(i - 1) + k.d.clone()));
    }
    per_interval.push(p.clone() * (k.e.clone() / gamma_t + k.f.clone()));
    let overall = per_interval
        .iter()
        .cloned()
        .fold(per_interval[0].clone(), T::max);
    let feasible = check_feasible(p, params.beta(), &overall)?.feasible;
    let closure_residual = closure_residual(p, params.beta(), &overall, t)?;
    Ok(RatioReport {
        per_interval,
        overall,
        feasible,
        closure_residual,
    })
}
