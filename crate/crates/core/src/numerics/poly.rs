use crate::error::{Error, Result};
use crate::numerics::Real;

/// Dense polynomial, lowest degree first.
#[derive(Clone, Debug, PartialEq)]
pub struct Poly<T> {
    coeffs: Vec<T>,
}

impl<T: Real> Poly<T> {
    /// Trailing exact zeros are dropped; the zero polynomial keeps one coefficient.
    pub fn new(mut coeffs: Vec<T>) -> Self {
        while coeffs.len() > 1 && coeffs.last().is_some_and(|c| *c == T::zero()) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(T::zero());
        }
        Poly { coeffs }
    }

    pub fn from_f64(coeffs: &[f64]) -> Self {
        Poly::new(coeffs.iter().map(|&c| T::from_f64(c)).collect())
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn eval(&self, x: &T) -> T {
        let mut acc = T::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x.clone() + c.clone();
        }
        acc
    }

    pub fn add(&self, other: &Poly<T>) -> Poly<T> {
        let n = self.coeffs.len().max(other.coeffs.len());
        let get = |v: &[T], i: usize| v.get(i).cloned().unwrap_or_else(T::zero);
        Poly::new(
            (0..n)
                .map(|i| get(&self.coeffs, i) + get(&other.coeffs, i))
                .collect(),
        )
    }

    pub fn scale(&self, k: &T) -> Poly<T> {
        Poly::new(self.coeffs.iter().map(|c| c.clone() * k.clone()).collect())
    }

    pub fn mul(&self, other: &Poly<T>) -> Poly<T> {
        let mut out = vec![T::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].clone() + a.clone() * b.clone();
            }
        }
        Poly::new(out)
    }

    pub fn max_abs_coeff(&self) -> T {
        self.coeffs
            .iter()
            .fold(T::zero(), |m, c| m.max(c.abs()))
    }
}

/// Real roots of a degree-2 polynomial in increasing order.
///
/// Uses the cancellation-free form `q = -(b + sign(b) sqrt(disc)) / 2`.
pub fn quadratic_roots<T: Real>(poly: &Poly<T>) -> Result<Vec<T>> {
    if poly.degree() != 2 {
        return Err(Error::NotQuadratic(poly.degree()));
    }
    let c = &poly.coeffs()[0];
    let b = &poly.coeffs()[1];
    let a = &poly.coeffs()[2];
    let disc = b.clone() * b.clone() - a.clone() * c.clone() * 4.0;
    if disc.is_sign_negative() {
        return Ok(Vec::new());
    }
    let root = disc.sqrt();
    let q = if b.is_sign_negative() {
        (root - b.clone()) * 0.5
    } else {
        -(root + b.clone()) * 0.5
    };
    if q == T::zero() {
        // b == 0 and disc == 0, so c == 0 as well
        return Ok(vec![T::zero(), T::zero()]);
    }
    let r1 = q.clone() / a.clone();
    let r2 = c.clone() / q;
    Ok(if r1 <= r2 { vec![r1, r2] } else { vec![r2, r1] })
}
