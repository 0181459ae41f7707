use crate::error::{Error, Result};
use crate::numerics::Real;

/// Pivots smaller than this in magnitude are treated as singular in `f64`.
pub const PIVOT_THRESHOLD: f64 = 1e-13;

/// [`PIVOT_THRESHOLD`] rescaled to the precision of `T`, so it stays a fixed number of ulps.
pub fn pivot_threshold<T: Real>() -> T {
    T::from_f64(PIVOT_THRESHOLD) * (T::epsilon() / f64::EPSILON)
}

/// Gaussian elimination with partial pivoting. `a` is row-major.
pub fn solve_linear<T: Real>(a: &[Vec<T>], b: &[T]) -> Result<Vec<T>> {
    let n = a.len();
    if b.len() != n || a.iter().any(|row| row.len() != n) {
        return Err(Error::Dimension(format!(
            "expected {n}x{n} matrix and length-{n} rhs"
        )));
    }
    let mut m: Vec<Vec<T>> = a.to_vec();
    let mut x: Vec<T> = b.to_vec();
    let threshold = pivot_threshold::<T>();

    for col in 0..n {
        let mut best = col;
        let mut best_abs = m[col][col].abs();
        for row in col + 1..n {
            let v = m[row][col].abs();
            if v > best_abs {
                best = row;
                best_abs = v;
            }
        }
        if !(best_abs >= threshold) {
            return Err(Error::Singular { pivot: col });
        }
        m.swap(col, best);
        x.swap(col, best);

        let pivot = m[col][col].clone();
        for row in col + 1..n {
            let factor = m[row][col].clone() / pivot.clone();
            if factor == T::zero() {
                continue;
            }
            for k in col..n {
                let delta = factor.clone() * m[col][k].clone();
                m[row][k] = m[row][k].clone() - delta;
            }
            let delta = factor * x[col].clone();
            x[row] = x[row].clone() - delta;
        }
    }

    for col in (0..n).rev() {
        let mut acc = x[col].clone();
        for k in col + 1..n {
            acc = acc - m[col][k].clone() * x[k].clone();
        }
        x[col] = acc / m[col][col].clone();
    }
    Ok(x)
}

/// `max_i |(A x - b)_i|`.
pub fn residual_inf<T: Real>(a: &[Vec<T>], x: &[T], b: &[T]) -> T {
    a.iter()
        .zip(b)
        .map(|(row, bi)| {
            let ax = row
                .iter()
                .zip(x)
                .fold(T::zero(), |acc, (aij, xj)| acc + aij.clone() * xj.clone());
            (ax - bi.clone()).abs()
        })
        .fold(T::zero(), T::max)
}

pub fn norm_inf<T: Real>(v: &[T]) -> T {
    v.iter().fold(T::zero(), |m, x| m.max(x.abs()))
}
