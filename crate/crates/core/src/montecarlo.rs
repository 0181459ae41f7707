//! Stochastic check of the expected detection time: replay the trajectory and flip a
//! Bernoulli(p) coin at every pass over the target.
//!
//! Trial `i` draws from ChaCha8 keyed by the 64-bit seed on stream `i`, and per-chunk
//! Welford accumulators are merged in chunk order, so the result is bit-identical for
//! every [`Exec`] mode.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{check_probability, Error, Result};
use crate::exec::Exec;
use crate::numerics::tail_bound_terms;
use crate::trajectory::{gap_schedule, Placement, Strategy};

const CHUNK: u64 = 4096;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SimConfig {
    pub trials: u64,
    pub seed: u64,
    /// Crossings simulated per trial; `None` picks one with censoring probability < 1e-12.
    pub max_crossings: Option<usize>,
    pub exec: Exec,
}

impl SimConfig {
    pub fn new(trials: u64, seed: u64) -> Self {
        SimConfig {
            trials,
            seed,
            max_crossings: None,
            exec: Exec::default(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SimResult {
    pub mean: f64,
    pub std_error: f64,
    pub trials: u64,
    pub censored: u64,
    /// Average number of passes until detection.
    pub mean_crossings: f64,
    pub crossings_std_error: f64,
}

#[derive(Clone, Copy, Debug, Default)]
struct Moments {
    n: u64,
    mean: f64,
    m2: f64,
}

impl Moments {
    fn push(&mut self, x: f64) {
        self.n += 1;
        let delta = x - self.mean;
        self.mean += delta / self.n as f64;
        self.m2 += delta * (x - self.mean);
    }

    fn merge(self, other: Moments) -> Moments {
        if self.n == 0 {
            return other;
        }
        if other.n == 0 {
            return self;
        }
        let n = self.n + other.n;
        let delta = other.mean - self.mean;
        let mean = self.mean + delta * other.n as f64 / n as f64;
        let m2 = self.m2 + other.m2 + delta * delta * (self.n as f64 * other.n as f64) / n as f64;
        Moments { n, mean, m2 }
    }

    fn std_error(&self) -> f64 {
        if self.n < 2 {
            return 0.0;
        }
        (self.m2 / (self.n - 1) as f64 / self.n as f64).sqrt()
    }
}

#[derive(Clone, Copy, Debug, Default)]
struct ChunkStats {
    time: Moments,
    crossings: Moments,
    censored: u64,
}

fn run_chunk(times: &[f64], p: f64, seed: u64, first: u64, last: u64) -> ChunkStats {
    let mut stats = ChunkStats::default();
    for trial in first..last {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(trial);
        match times.iter().position(|_| rng.random_bool(p)) {
            Some(i) => {
                stats.time.push(times[i]);
                stats.crossings.push((i + 1) as f64);
            }
            None => stats.censored += 1,
        }
    }
    stats
}

pub fn default_max_crossings(p: f64) -> Result<usize> {
    Ok(10 * tail_bound_terms(p, 1.0, 1e-12)?)
}

pub fn simulate_detection_time(
    s: &Strategy,
    p: f64,
    d: Placement,
    cfg: &SimConfig,
) -> Result<SimResult> {
    check_probability(p)?;
    s.check_convergent(p)?;
    if cfg.trials == 0 {
        return Err(Error::Domain {
            what: "trials",
            value: 0.0,
            range: "[1, inf)",
        });
    }
    let max_crossings = match cfg.max_crossings {
        Some(m) => m,
        None => default_max_crossings(p)?,
    };
    let times = gap_schedule(s, d, max_crossings)?.cumulative;

    let chunks = cfg.trials.div_ceil(CHUNK) as usize;
    let parts = cfg.exec.map_range(chunks, |c| {
        let first = c as u64 * CHUNK;
        let last = (first + CHUNK).min(cfg.trials);
        run_chunk(&times, p, cfg.seed, first, last)
    });
    let total = parts.into_iter().fold(ChunkStats::default(), |acc, c| ChunkStats {
        time: acc.time.merge(c.time),
        crossings: acc.crossings.merge(c.crossings),
        censored: acc.censored + c.censored,
    });
    if total.censored > 0 {
        return Err(Error::Censored {
            censored: total.censored,
            trials: cfg.trials,
            max_crossings,
        });
    }
    Ok(SimResult {
        mean: total.time.mean,
        std_error: total.time.std_error(),
        trials: cfg.trials,
        censored: 0,
        mean_crossings: total.crossings.mean,
        crossings_std_error: total.crossings.std_error(),
    })
}
