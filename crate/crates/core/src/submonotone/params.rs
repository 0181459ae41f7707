use serde::Serialize;

use crate::error::{Error, Result};
use crate::numerics::Real;

/// `(beta, gamma_1..gamma_t)` with implicit `gamma_0 = 1` and `gamma_{t+1} = beta`.
#[derive(Clone, Debug, PartialEq)]
pub struct SubMonotoneParams<T> {
    beta: T,
    gammas: Vec<T>,
}

impl<T: Real> SubMonotoneParams<T> {
    /// Checks `1 < gamma_1 < ... < gamma_t < beta < 1/(1-p)^2`.
    pub fn new(p: &T, beta: T, gammas: Vec<T>) -> Result<Self> {
        let q = T::one() - p.clone();
        let limit = T::one() / (q.clone() * q);
        if !(beta < limit) {
            return Err(Error::Divergent {
                growth: beta.to_f64(),
                limit: limit.to_f64(),
            });
        }
        let mut prev = T::one();
        for g in gammas.iter().chain(std::iter::once(&beta)) {
            if !(*g > prev) {
                return Err(Error::InvalidStrategy(format!(
                    "need 1 < gamma_1 < ... < gamma_t < beta, got {} after {}",
                    g.to_f64(),
                    prev.to_f64()
                )));
            }
            prev = g.clone();
        }
        Ok(SubMonotoneParams { beta, gammas })
    }

    pub fn t(&self) -> usize {
        self.gammas.len()
    }

    pub fn beta(&self) -> &T {
        &self.beta
    }

    pub fn gammas(&self) -> &[T] {
        &self.gammas
    }

    /// `gamma_i` for `0 <= i <= t+1`.
    pub fn gamma(&self, i: usize) -> T {
        match i {
            0 => T::one(),
            i if i <= self.t() => self.gammas[i - 1].clone(),
            i if i == self.t() + 1 => self.beta.clone(),
            _ => panic!("gamma index {i} out of range for t = {}", self.t()),
        }
    }

    /// Narrow to doubles; fails when neighbouring gammas collapse.
    pub fn to_f64(&self, p: f64) -> Result<SubMonotoneParams<f64>> {
        let beta = self.beta.to_f64();
        let gammas: Vec<f64> = self.gammas.iter().map(|g| g.to_f64()).collect();
        SubMonotoneParams::new(&p, beta, gammas).map_err(|_| {
            Error::NotRepresentable(format!(
                "t = {} parameters with beta = {beta} have gammas closer than double spacing",
                self.t()
            ))
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ParamsView {
    pub t: usize,
    pub beta: f64,
    pub gammas: Vec<f64>,
}

impl<T: Real> From<&SubMonotoneParams<T>> for ParamsView {
    fn from(s: &SubMonotoneParams<T>) -> Self {
        ParamsView {
            t: s.t(),
            beta: s.beta.to_f64(),
            gammas: s.gammas.iter().map(|g| g.to_f64()).collect(),
        }
    }
}
