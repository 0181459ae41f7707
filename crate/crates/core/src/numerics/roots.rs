use crate::error::{Error, Result};
use crate::numerics::Real;

#[derive(Clone, Debug, PartialEq)]
pub struct Bracket<T> {
    pub lo: T,
    pub hi: T,
    pub f_lo: T,
    pub f_hi: T,
}

impl<T: Real> Bracket<T> {
    pub fn new(lo: T, hi: T, f_lo: T, f_hi: T) -> Result<Self> {
        let b = Bracket { lo, hi, f_lo, f_hi };
        b.validate()?;
        Ok(b)
    }

    pub fn from_fn<F: Fn(&T) -> T>(lo: T, hi: T, f: F) -> Result<Self> {
        let f_lo = f(&lo);
        let f_hi = f(&hi);
        Bracket::new(lo, hi, f_lo, f_hi)
    }

    fn validate(&self) -> Result<()> {
        let straddles = (self.f_lo.clone() * self.f_hi.clone()) <= T::zero();
        if self.lo < self.hi && straddles {
            Ok(())
        } else {
            Err(Error::InvalidBracket {
                lo: self.lo.to_f64(),
                hi: self.hi.to_f64(),
            })
        }
    }
}

/// Every consecutive grid pair on `[lo, hi]` where `f` changes sign, in increasing order.
///
/// Grid points where `f` is not finite are skipped, so a bracket may span more than one
/// step. A grid value of exactly zero opens a bracket with the following point.
pub fn scan_brackets<T, F>(f: F, lo: T, hi: T, steps: usize) -> Vec<Bracket<T>>
where
    T: Real,
    F: Fn(&T) -> T,
{
    assert!(steps > 0 && lo < hi, "scan needs lo < hi and at least one step");
    let width = (hi.clone() - lo.clone()) / steps as f64;
    let mut out = Vec::new();
    let mut prev: Option<(T, T)> = None;
    for i in 0..=steps {
        let x = if i == steps {
            hi.clone()
        } else {
            lo.clone() + width.clone() * i as f64
        };
        let fx = f(&x);
        if !fx.is_finite() {
            continue;
        }
        if let Some((px, pf)) = prev.take() {
            let changes = if pf == T::zero() {
                fx != T::zero()
            } else {
                pf.is_sign_negative() != fx.is_sign_negative() || fx == T::zero()
            };
            // a zero at the previous point was already reported with its left neighbour
            let already = pf == T::zero() && !out.is_empty() && out_last_hi(&out) == Some(&px);
            if changes && !already {
                out.push(Bracket {
                    lo: px,
                    hi: x.clone(),
                    f_lo: pf,
                    f_hi: fx.clone(),
                });
            }
        }
        prev = Some((x, fx));
    }
    out
}

fn out_last_hi<T>(out: &[Bracket<T>]) -> Option<&T> {
    out.last().map(|b| &b.hi)
}

/// Bisection down to an interval of width `tol`.
///
/// `tol = 0` runs until the midpoint no longer splits the bracket, i.e. to the full
/// precision of `T`.
pub fn bisect<T, F>(bracket: &Bracket<T>, f: F, tol: &T) -> Result<T>
where
    T: Real,
    F: Fn(&T) -> T,
{
    bracket.validate()?;
    let mut lo = bracket.lo.clone();
    let mut hi = bracket.hi.clone();
    let lo_negative = bracket.f_lo.is_sign_negative();
    if bracket.f_lo == T::zero() {
        return Ok(lo);
    }
    if bracket.f_hi == T::zero() {
        return Ok(hi);
    }
    while hi.clone() - lo.clone() > *tol {
        let mid = (lo.clone() + hi.clone()) * 0.5;
        if mid <= lo || mid >= hi {
            break;
        }
        let fm = f(&mid);
        if fm == T::zero() {
            return Ok(mid);
        }
        if fm.is_sign_negative() == lo_negative {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok((lo + hi) * 0.5)
}
