use crate::error::{check_probability, Error, Infeasibility, Result};
use crate::numerics::{bisect, scan_brackets, Poly, Real};
use crate::submonotone::{
    beta_in_range, check_feasible, coefficients, gammas_from, last_gamma, limit_coefficients,
    limit_quartic, x_of, y_of, SubMonotoneParams,
};

#[derive(Clone, Debug, PartialEq)]
pub struct Heuristic<T> {
    pub r: T,
    pub params: SubMonotoneParams<T>,
}

fn check_open_p<T: Real>(p: &T) -> Result<()> {
    check_probability(p.to_f64())
}

/// Closed-form ratio of the one-hop strategy with `beta = 1/(1-p)`.
pub fn heuristic_t1_ratio<T: Real>(p: &T) -> Result<T> {
    check_open_p(p)?;
    let p = p.clone();
    let radicand = (p.clone() - 2.0)
        * (p.clone() - 1.0)
        * (p.clone() * (p.clone() * (p.clone() * 4.0 - 3.0) + 5.0) + 2.0);
    let two_p = T::from_f64(2.0) - p.clone();
    Ok(radicand.sqrt() + T::from_f64(4.0) / two_p.clone() - two_p * p)
}

/// One hop with `beta = 1/(1-p)` and `gamma_1 = E/(R/p - F)`.
pub fn heuristic_t1<T: Real>(p: &T) -> Result<Heuristic<T>> {
    let r = heuristic_t1_ratio(p)?;
    let p = p.clone();
    let beta = T::one() / (T::one() - p.clone());
    let k = coefficients(&p, &beta)?;
    let gamma1 = last_gamma(&k, &p, &r);
    let params = SubMonotoneParams::new(&p, beta, vec![gamma1])?;
    Ok(Heuristic { r, params })
}

/// The two-hop constraint at `beta = 1/(1-p)`, multiplied through by its `R`-dependent
/// denominator.
pub fn heuristic_t2_cubic<T: Real>(p: &T) -> Poly<T> {
    let p = p.clone();
    let pm1 = p.clone() - 1.0;
    let pm2 = p.clone() - 2.0;
    let p2 = p.powi(2);

    // R^2/((p-1)^2 p^2) + k1 R + k0
    let quad_r = T::one() / (pm1.powi(2) * p2.clone());
    let k1 = -((p.clone() * ((p.clone() - 6.0) * p.clone() + 13.0) - 11.0) * 2.0)
        / (pm2.clone() * pm1.powi(2));
    let inner = p.clone() * (p.clone() * ((p.clone() - 7.0) * p.clone() * -4.0 - 71.0) + 72.0) - 16.0;
    let denom = p2.clone() - p.clone() * 3.0 + 2.0;
    let k0 = -(p2.clone() * 4.0) + inner / (denom.clone() * denom) + p.clone() * 10.0
        - T::from_f64(16.0) / p.clone();
    let quadratic = Poly::new(vec![k0, k1, quad_r]);

    // the pole: p (p (p (2p - 9) - R + 12) + 2 (R - 4)), linear in R
    let pole = Poly::new(vec![
        p.clone() * (p.clone() * (p.clone() * (p.clone() * 2.0 - 9.0) + 12.0) - 8.0),
        p.clone() * (T::from_f64(2.0) - p.clone()),
    ]);
    let numer = (p.clone() * ((p.clone() - 5.0) * p.clone() + 10.0) - 7.0) * p2 + 4.0;
    let constant = numer * pm2.powi(2) * 8.0;
    quadratic.mul(&pole).add(&Poly::new(vec![-constant]))
}

/// Two hops with `beta = 1/(1-p)`: the root of [`heuristic_t2_cubic`] in `[3, 8]` that
/// yields an increasing gamma sequence.
pub fn heuristic_t2<T: Real>(p: &T) -> Result<Heuristic<T>> {
    check_open_p(p)?;
    let cubic = heuristic_t2_cubic(p);
    let beta = T::one() / (T::one() - p.clone());
    let k = coefficients(p, &beta)?;
    let f = |r: &T| cubic.eval(r);
    for b in scan_brackets(f, T::from_f64(3.0), T::from_f64(8.0), 2000) {
        let r = bisect(&b, f, &T::zero())?;
        let x = x_of(p, &r);
        let y = y_of(&k, p, &r);
        let Ok(gammas) = gammas_from(&x, &y, 2) else {
            continue;
        };
        if let Ok(params) = SubMonotoneParams::new(p, beta.clone(), gammas) {
            return Ok(Heuristic { r, params });
        }
    }
    Err(Error::NoRoot { lo: 3.0, hi: 8.0 })
}

#[derive(Clone, Debug, PartialEq)]
pub struct Limit<T> {
    pub r: T,
    pub beta: T,
    pub x: T,
    /// `beta - E/(R/p - F)` at the limit pair.
    pub last_gap: T,
    /// All roots of the quartic in `[3, 8]`, increasing.
    pub roots: Vec<T>,
}

/// Limit of the equalized ratio as the number of hops grows.
pub fn limit_ratio<T: Real>(p: &T) -> Result<Limit<T>> {
    check_open_p(p)?;
    let quartic = limit_quartic(p);
    let [_, b1, b2] = limit_coefficients(p);
    let f = |r: &T| quartic.eval(r);
    let mut roots = Vec::new();
    for b in scan_brackets(f, T::from_f64(3.0), T::from_f64(8.0), 2000) {
        roots.push(bisect(&b, f, &T::zero())?);
    }
    let mut first_failure = None;
    for r in &roots {
        let beta = -b1.eval(r) / (b2.eval(r) * 2.0);
        if !beta_in_range(p, &beta) {
            first_failure.get_or_insert(Infeasibility::BetaRange);
            continue;
        }
        let feas = check_feasible(p, &beta, r)?;
        let x = x_of(p, r);
        if !(feas.last_gap > T::zero()) || !(x > T::one()) {
            first_failure.get_or_insert(Infeasibility::LastGamma);
            continue;
        }
        return Ok(Limit {
            r: r.clone(),
            beta,
            x,
            last_gap: feas.last_gap,
            roots: roots.clone(),
        });
    }
    match first_failure {
        Some(why) => Err(Error::Infeasible(why)),
        None => Err(Error::NoRoot { lo: 3.0, hi: 8.0 }),
    }
}
