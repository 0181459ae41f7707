use std::str::FromStr;

use halfline::monotone::optimal_base;
use halfline::submonotone::{solve_optimal, SolverConfig, SubMonotoneParams};
use halfline::{Mp, Strategy};

/// A strategy as given on the command line; turned into a [`Strategy`] once `p` is known.
#[derive(Clone, Debug, PartialEq)]
pub enum StrategyChoice {
    Geometric(f64),
    OptimalMonotone,
    SubMonotone { beta: f64, gammas: Vec<f64> },
    Optimize { t: usize },
}

impl StrategyChoice {
    pub fn build(&self, p: f64) -> halfline::Result<Strategy> {
        match self {
            StrategyChoice::Geometric(b) => Strategy::geometric(*b),
            StrategyChoice::OptimalMonotone => Strategy::geometric(optimal_base(p)?),
            StrategyChoice::SubMonotone { beta, gammas } => Ok(Strategy::SubMonotone(
                SubMonotoneParams::new(&p, *beta, gammas.clone())?,
            )),
            StrategyChoice::Optimize { t } => {
                let sol = solve_optimal(&Mp::new(p), *t, &SolverConfig::default())?;
                Ok(Strategy::SubMonotone(sol.params.to_f64(p)?))
            }
        }
    }
}

fn fields(s: &str) -> Result<Vec<(&str, &str)>, String> {
    s.split(',')
        .map(|kv| {
            kv.split_once('=')
                .map(|(k, v)| (k.trim(), v.trim()))
                .ok_or_else(|| format!("expected key=value, got '{kv}'"))
        })
        .collect()
}

fn number<T: FromStr>(key: &str, v: &str) -> Result<T, String> {
    v.parse().map_err(|_| format!("bad value for {key}: '{v}'"))
}

/// `t=<t>,beta=<b>,gammas=<g1:...:gt>`; `gammas` may be left out when `t=0`.
pub fn parse_submonotone(s: &str) -> Result<StrategyChoice, String> {
    let (mut t, mut beta, mut gammas) = (None, None, None);
    for (k, v) in fields(s)? {
        match k {
            "t" => t = Some(number::<usize>(k, v)?),
            "beta" => beta = Some(number::<f64>(k, v)?),
            "gammas" if v.is_empty() => gammas = Some(Vec::new()),
            "gammas" => {
                gammas = Some(
                    v.split(':')
                        .map(|g| number::<f64>(k, g))
                        .collect::<Result<Vec<_>, _>>()?,
                )
            }
            _ => return Err(format!("unknown key '{k}'")),
        }
    }
    let t = t.ok_or("missing t")?;
    let beta = beta.ok_or("missing beta")?;
    let gammas = match gammas {
        Some(g) => g,
        None if t == 0 => Vec::new(),
        None => return Err("missing gammas".into()),
    };
    if gammas.len() != t {
        return Err(format!("t={t} but {} gammas given", gammas.len()));
    }
    Ok(StrategyChoice::SubMonotone { beta, gammas })
}

/// `t=<t>`
pub fn parse_optimize(s: &str) -> Result<StrategyChoice, String> {
    match fields(s)?.as_slice() {
        [("t", v)] => Ok(StrategyChoice::Optimize { t: number("t", v)? }),
        _ => Err(format!("expected t=<hops>, got '{s}'")),
    }
}
