use std::fmt;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{what} = {value} is outside {range}")]
    Domain {
        what: &'static str,
        value: f64,
        range: &'static str,
    },
    #[error("invalid bracket [{lo}, {hi}]: endpoints do not straddle a sign change")]
    InvalidBracket { lo: f64, hi: f64 },
    #[error("matrix is singular at pivot {pivot}")]
    Singular { pivot: usize },
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("polynomial has degree {0}, expected exactly 2")]
    NotQuadratic(usize),
    #[error("series diverges: growth {growth} is not below 1/(1-p)^2 = {limit}")]
    Divergent { growth: f64, limit: f64 },
    #[error("placement d = {0} coincides with a turning point")]
    AtTurningPoint(f64),
    #[error("sup did not settle within {rounds} rounds (last round-to-round change {change:e})")]
    NotConverged { rounds: usize, change: f64 },
    #[error("worst case is not a stable one-sided limit: delta and delta/10 differ by {0:e}")]
    Unstable(f64),
    #[error("{censored} of {trials} trials were still undetected after {max_crossings} crossings")]
    Censored {
        censored: u64,
        trials: u64,
        max_crossings: usize,
    },
    #[error("verdict does not change on c in [{lo}, {hi}]")]
    NoTransition { lo: f64, hi: f64 },
    #[error("no qualifying discriminant root in [{lo}, {hi}]")]
    NoRoot { lo: f64, hi: f64 },
    #[error("pair (beta, R) is infeasible: {0}")]
    Infeasible(Infeasibility),
    #[error("constraint residual {residual:e} exceeds {limit:e}")]
    Residual { residual: f64, limit: f64 },
    #[error("invalid strategy: {0}")]
    InvalidStrategy(String),
    #[error("value {0} does not fit in a double")]
    NotRepresentable(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub enum Infeasibility {
    /// beta outside (1, 1/(1-p)^2)
    BetaRange,
    /// x - y - 1 <= 0
    Spread,
    /// beta - E/(R/p - F) <= 0
    LastGamma,
}

impl fmt::Display for Infeasibility {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Infeasibility::BetaRange => f.write_str("beta is outside (1, 1/(1-p)^2)"),
            Infeasibility::Spread => f.write_str("x - y - 1 is not positive"),
            Infeasibility::LastGamma => f.write_str("beta - E/(R/p - F) is not positive"),
        }
    }
}

pub(crate) fn check_probability(p: f64) -> Result<()> {
    if p > 0.0 && p < 1.0 {
        Ok(())
    } else {
        Err(Error::Domain {
            what: "p",
            value: p,
            range: "(0, 1)",
        })
    }
}
