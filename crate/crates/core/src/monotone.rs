//! Monotone (return-to-origin) strategies: the optimal geometric base, its ratio, and a
//! numeric certificate that no monotone strategy does better.

use serde::Serialize;

use crate::error::{check_probability, Error, Result};
use crate::numerics::{residual_inf, solve_linear, with_mp_precision, Mp, Poly, Real, MP_PRECISION};
use crate::trajectory::MonotoneSequence;

/// Base of the optimal geometric monotone strategy.
pub fn optimal_base(p: f64) -> Result<f64> {
    check_probability(p)?;
    let s = (1.0 - p).sqrt();
    let b = 1.0 / (s * (2.0 - p - s));
    debug_assert!(b > 1.0 && b * (1.0 - p) * (1.0 - p) < 1.0);
    Ok(b)
}

/// Worst-case ratio of the geometric monotone strategy with base `b`.
pub fn monotone_cr_formula(p: f64, b: f64) -> Result<f64> {
    check_probability(p)?;
    let q = 1.0 - p;
    if !(b > 1.0 && b * q * q < 1.0) {
        return Err(Error::Domain {
            what: "b",
            value: b,
            range: "(1, 1/(1-p)^2)",
        });
    }
    Ok(p * 2.0 * b / (b - 1.0) + p * 2.0 * b * q / (1.0 - b * q * q) + p * p / (2.0 - p))
}

pub fn optimal_monotone_cr(p: f64) -> Result<f64> {
    check_probability(p)?;
    Ok((4.0 + 4.0 * (1.0 - p).sqrt()) / (2.0 - p) - p)
}

/// Limit of the ratio as the placement approaches `x_r` from the right.
pub fn worst_case_cr_interval(x: &MonotoneSequence, p: f64, r: usize) -> Result<f64> {
    check_probability(p)?;
    if r == 0 {
        return Err(Error::Domain {
            what: "r",
            value: 0.0,
            range: "[1, inf)",
        });
    }
    let q = 1.0 - p;
    let ratio = x.tail_ratio();
    if ratio * q * q >= 1.0 {
        return Err(Error::Divergent {
            growth: ratio,
            limit: 1.0 / (q * q),
        });
    }
    let xr = x.x(r);
    let head: f64 = (1..=r).map(|i| x.x(i)).sum();

    // explicit part up to the end of the prefix, closed-form geometric tail after it
    let n = x.prefix().len();
    let mut tail = 0.0;
    let mut i = 1;
    while r + i <= n {
        tail += q.powi(2 * i as i32 - 1) * x.x(r + i);
        i += 1;
    }
    // sum_{j >= i} q^(2j-1) x_{r+j}, with x_{r+j} = x_{r+i} ratio^(j-i)
    let first = q.powi(2 * i as i32 - 1) * x.x(r + i);
    tail += first / (1.0 - ratio * q * q);

    Ok(2.0 * p * head / xr + 2.0 * p * tail / xr + p * p / (2.0 - p))
}

/// `g(c)`, whose larger root is the optimal monotone ratio.
pub fn lower_bound_quadratic(p: f64) -> Poly<f64> {
    let c2 = (2.0 - p) * (2.0 - p);
    let c1 = 2.0 * ((p - 2.0) * p + 4.0) * (p - 2.0);
    let c0 = p * p * ((p - 4.0) * p + 12.0);
    Poly::new(vec![c0 / 4.0, c1 / 4.0, c2 / 4.0])
}

/// The truncated system `A f = a` for the first `ell` turning points.
#[derive(Clone, Debug, PartialEq)]
pub struct LowerBoundSystem<T> {
    pub ell: usize,
    pub p: T,
    pub c: T,
    pub alpha: T,
    /// Row `k` (0-based) holds the coefficients of `f_1 .. f_ell`.
    pub matrix: Vec<Vec<T>>,
    pub rhs: Vec<T>,
}

impl<T: Real> LowerBoundSystem<T> {
    pub fn beta(&self, i: usize, k: usize) -> T {
        let q = T::one() - self.p.clone();
        q.powi(2 * (i as i32 - k as i32) - 1)
    }

    pub fn gamma(&self, k: usize) -> T {
        let q = T::one() - self.p.clone();
        let p = self.p.clone();
        q.powi(2 * (self.ell as i32 - k as i32) + 1) / (p.clone() * (T::from_f64(2.0) - p))
    }
}

pub fn lower_bound_system<T: Real>(p: &T, c: &T, ell: usize) -> Result<LowerBoundSystem<T>> {
    check_probability(p.to_f64())?;
    if ell < 2 {
        return Err(Error::Domain {
            what: "ell",
            value: ell as f64,
            range: "[2, inf)",
        });
    }
    let two = T::from_f64(2.0);
    let alpha = T::from_f64(0.5) + T::one() / (two.clone() - p.clone())
        - c.clone() / (p.clone() * 2.0);
    let mut sys = LowerBoundSystem {
        ell,
        p: p.clone(),
        c: c.clone(),
        alpha: alpha.clone(),
        matrix: Vec::with_capacity(ell),
        rhs: Vec::with_capacity(ell),
    };
    for k in 0..ell {
        let row: Vec<T> = (1..=ell)
            .map(|i| {
                let mut v = if i < k {
                    T::one()
                } else if i == k {
                    alpha.clone()
                } else {
                    sys.beta(i, k)
                };
                if i == ell {
                    v = v + sys.gamma(k);
                }
                v
            })
            .collect();
        sys.matrix.push(row);
        sys.rhs.push(if k == 0 { -alpha.clone() } else { -T::one() });
    }
    Ok(sys)
}

#[derive(Clone, Debug, PartialEq)]
pub struct LowerBoundVerdict<T> {
    pub c: T,
    pub ell: usize,
    pub monotone: bool,
    /// `f_0 = 1` followed by the solution.
    pub f: Vec<T>,
    pub residual: T,
}

pub fn lower_bound_verdict<T: Real>(p: &T, c: &T, ell: usize) -> Result<LowerBoundVerdict<T>> {
    let sys = lower_bound_system(p, c, ell)?;
    let sol = solve_linear(&sys.matrix, &sys.rhs)?;
    let residual = residual_inf(&sys.matrix, &sol, &sys.rhs);
    let mut f = Vec::with_capacity(ell + 1);
    f.push(T::one());
    f.extend(sol);
    let monotone = f.iter().all(|v| *v > T::zero()) && f.windows(2).all(|w| w[1] > w[0]);
    Ok(LowerBoundVerdict {
        c: c.clone(),
        ell,
        monotone,
        f,
        residual,
    })
}

pub const THRESHOLD_RANGE: (f64, f64) = (3.0, 8.0);

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Threshold {
    pub p: f64,
    pub ell: usize,
    pub threshold: f64,
    pub target: f64,
    pub gap: f64,
}

/// Mantissa bits for the truncated system: its determinant shrinks roughly like
/// `(1-p)^ell`, so the precision grows with `ell` on top of the default.
pub fn lower_bound_precision(p: f64, ell: usize) -> u32 {
    let lost = ell as f64 * (1.0 / (1.0 - p)).log2();
    MP_PRECISION + lost.ceil() as u32
}

/// [`lower_bound_verdict`] for `f64` inputs at [`lower_bound_precision`].
pub fn lower_bound_verdict_mp(p: f64, c: f64, ell: usize) -> Result<LowerBoundVerdict<Mp>> {
    check_probability(p)?;
    with_mp_precision(lower_bound_precision(p, ell), || {
        lower_bound_verdict(&Mp::new(p), &Mp::new(c), ell)
    })
}

/// Smallest `c` in `[3, 8]` (to within `tol`) at which the truncated system admits an
/// increasing positive solution. Solved in multiprecision.
pub fn lower_bound_threshold(p: f64, ell: usize, tol: f64) -> Result<Threshold> {
    check_probability(p)?;
    if !(tol > 0.0) {
        return Err(Error::Domain {
            what: "tol",
            value: tol,
            range: "(0, inf)",
        });
    }
    let verdict = |c: f64| -> Result<bool> { Ok(lower_bound_verdict_mp(p, c, ell)?.monotone) };
    let (lo, hi) = THRESHOLD_RANGE;
    if verdict(lo)? || !verdict(hi)? {
        return Err(Error::NoTransition { lo, hi });
    }
    let (mut below, mut above) = (lo, hi);
    while above - below > tol {
        let mid = 0.5 * (below + above);
        if verdict(mid)? {
            above = mid;
        } else {
            below = mid;
        }
    }
    let threshold = above;
    let target = optimal_monotone_cr(p)?;
    Ok(Threshold {
        p,
        ell,
        threshold,
        target,
        gap: threshold - target,
    })
}
