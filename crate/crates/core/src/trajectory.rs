//! Trajectory model: turning points, crossing gaps, expected detection time and
//! competitive ratios.
//!
//! Gaps are always obtained by walking the trajectory and recording every crossing of the
//! placement; the closed forms live in the tests.

use std::collections::VecDeque;

use serde::Serialize;

use crate::error::{check_probability, Error, Result};
use crate::numerics::tail_bound_terms;
use crate::submonotone::SubMonotoneParams;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Heading {
    Outward,
    Inward,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct TurningPoint {
    pub position: f64,
    /// Direction of travel after the turn.
    pub heading: Heading,
}

/// Increasing far points `x_1 < x_2 < ...`: an explicit prefix, continued geometrically.
#[derive(Clone, Debug, PartialEq)]
pub struct MonotoneSequence {
    prefix: Vec<f64>,
    tail_ratio: f64,
}

impl MonotoneSequence {
    pub fn new(prefix: Vec<f64>, tail_ratio: f64) -> Result<Self> {
        if prefix.is_empty() {
            return Err(Error::InvalidStrategy("empty turning-point prefix".into()));
        }
        if !(prefix[0] > 0.0) || prefix.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::InvalidStrategy(
                "turning points must be positive and strictly increasing".into(),
            ));
        }
        if !(tail_ratio > 1.0) || !tail_ratio.is_finite() {
            return Err(Error::InvalidStrategy(format!(
                "tail ratio {tail_ratio} must exceed 1"
            )));
        }
        Ok(MonotoneSequence { prefix, tail_ratio })
    }

    pub fn geometric(base: f64) -> Result<Self> {
        MonotoneSequence::new(vec![base], base)
    }

    pub fn prefix(&self) -> &[f64] {
        &self.prefix
    }

    pub fn tail_ratio(&self) -> f64 {
        self.tail_ratio
    }

    /// `x_i`, 1-based.
    pub fn x(&self, i: usize) -> f64 {
        assert!(i >= 1, "turning points are 1-based");
        let n = self.prefix.len();
        if i <= n {
            self.prefix[i - 1]
        } else {
            self.prefix[n - 1] * self.tail_ratio.powi((i - n) as i32)
        }
    }

    /// Smallest `K` with `2 (x_1 + ... + x_m) <= K ratio^m` for every `m`.
    fn return_scale(&self) -> f64 {
        let ratio = self.tail_ratio;
        let mut total = 0.0;
        let mut k: f64 = 0.0;
        for (m, x) in self.prefix.iter().enumerate() {
            total += 2.0 * x;
            k = k.max(total / ratio.powi(m as i32 + 1));
        }
        let n = self.prefix.len();
        let tail = (total + 2.0 * self.prefix[n - 1] * ratio / (ratio - 1.0)) / ratio.powi(n as i32);
        k.max(tail)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Strategy {
    ExplicitMonotone(MonotoneSequence),
    GeometricMonotone { base: f64 },
    SubMonotone(SubMonotoneParams<f64>),
}

impl Strategy {
    pub fn geometric(base: f64) -> Result<Self> {
        if !(base > 1.0) || !base.is_finite() {
            return Err(Error::InvalidStrategy(format!("base {base} must exceed 1")));
        }
        Ok(Strategy::GeometricMonotone { base })
    }

    /// Expansion factor of the anchor points.
    pub fn growth(&self) -> f64 {
        match self {
            Strategy::ExplicitMonotone(x) => x.tail_ratio,
            Strategy::GeometricMonotone { base } => *base,
            Strategy::SubMonotone(s) => *s.beta(),
        }
    }

    /// Anchor point of round `r >= 1`: `x_r`, or `beta^r` for sub-monotone strategies.
    pub fn anchor(&self, r: usize) -> f64 {
        match self {
            Strategy::ExplicitMonotone(x) => x.x(r),
            Strategy::GeometricMonotone { base } => base.powi(r as i32),
            Strategy::SubMonotone(s) => s.beta().powi(r as i32),
        }
    }

    /// Left endpoints of the intervals of a round, as multiples of the anchor.
    pub fn interval_starts(&self) -> Vec<f64> {
        match self {
            Strategy::SubMonotone(s) => (0..=s.t()).map(|i| s.gamma(i)).collect(),
            _ => vec![1.0],
        }
    }

    /// `K` with `T_m <= K growth^m`, where `T_m` is the time of the m-th return to the origin.
    fn return_scale(&self) -> f64 {
        match self {
            Strategy::ExplicitMonotone(x) => x.return_scale(),
            Strategy::GeometricMonotone { base } => 2.0 * base / (base - 1.0),
            Strategy::SubMonotone(s) => {
                let beta = *s.beta();
                let gamma_t = s.gamma(s.t());
                (4.0 * beta + 2.0 * gamma_t - 4.0) / (beta - 1.0)
            }
        }
    }

    pub(crate) fn check_convergent(&self, p: f64) -> Result<()> {
        let q = 1.0 - p;
        let limit = 1.0 / (q * q);
        let growth = self.growth();
        if growth < limit {
            Ok(())
        } else {
            Err(Error::Divergent { growth, limit })
        }
    }

    /// Positions visited in order, including points the searcher passes straight through.
    pub fn waypoints(&self) -> Waypoints<'_> {
        Waypoints {
            strategy: self,
            round: 0,
            buf: VecDeque::new(),
        }
    }

    /// Direction reversals, starting after the origin.
    pub fn turning_point_iter(&self) -> TurningPoints<'_> {
        TurningPoints {
            waypoints: self.waypoints(),
            pending: None,
            pos: 0.0,
        }
    }

    fn legs(&self) -> Legs<'_> {
        Legs {
            tps: self.turning_point_iter(),
            pos: 0.0,
        }
    }
}

pub fn turning_points(s: &Strategy, n: usize) -> Vec<TurningPoint> {
    s.turning_point_iter().take(n).collect()
}

pub struct Waypoints<'a> {
    strategy: &'a Strategy,
    round: usize,
    buf: VecDeque<f64>,
}

impl Waypoints<'_> {
    fn fill(&mut self) {
        let r = self.round;
        self.round += 1;
        match self.strategy {
            Strategy::SubMonotone(s) => {
                let beta = *s.beta();
                if r == 0 {
                    self.buf.extend([beta, 0.0, beta]);
                    return;
                }
                let x = beta.powi(r as i32);
                for j in 1..=s.t() {
                    let (lo, hi) = (s.gamma(j - 1) * x, s.gamma(j) * x);
                    self.buf.extend([hi, lo, hi]);
                }
                let next = beta.powi(r as i32 + 1);
                self.buf.extend([next, 0.0, next]);
            }
            s => {
                if r == 0 {
                    return;
                }
                self.buf.extend([s.anchor(r), 0.0]);
            }
        }
    }
}

impl Iterator for Waypoints<'_> {
    type Item = f64;

    fn next(&mut self) -> Option<f64> {
        while self.buf.is_empty() {
            self.fill();
        }
        self.buf.pop_front()
    }
}

pub struct TurningPoints<'a> {
    waypoints: Waypoints<'a>,
    pending: Option<f64>,
    pos: f64,
}

impl TurningPoints<'_> {
    fn pull(&mut self) -> f64 {
        match self.pending.take() {
            Some(w) => w,
            None => self.waypoints.next().expect("trajectories are unbounded"),
        }
    }
}

impl Iterator for TurningPoints<'_> {
    type Item = TurningPoint;

    fn next(&mut self) -> Option<TurningPoint> {
        loop {
            let w = self.pull();
            if w == self.pos {
                continue;
            }
            let mut next = self.pull();
            while next == w {
                next = self.pull();
            }
            self.pending = Some(next);
            let inbound_out = w > self.pos;
            let onward_out = next > w;
            if inbound_out == onward_out {
                continue;
            }
            self.pos = w;
            let heading = if onward_out {
                Heading::Outward
            } else {
                Heading::Inward
            };
            return Some(TurningPoint {
                position: w,
                heading,
            });
        }
    }
}

struct Leg {
    from: f64,
    to: f64,
}

struct Legs<'a> {
    tps: TurningPoints<'a>,
    pos: f64,
}

impl Iterator for Legs<'_> {
    type Item = Leg;

    fn next(&mut self) -> Option<Leg> {
        let tp = self.tps.next()?;
        let leg = Leg {
            from: self.pos,
            to: tp.position,
        };
        self.pos = tp.position;
        Some(leg)
    }
}

/// Event walk over the passes across `d`.
///
/// Gaps are summed from leg lengths since the previous pass rather than taken as
/// differences of absolute times, so late gaps keep full relative precision.
struct Crossings<'a> {
    legs: Legs<'a>,
    d: f64,
    returns: usize,
    first_round: Option<usize>,
    carry: f64,
}

impl<'a> Crossings<'a> {
    fn new(s: &'a Strategy, d: f64) -> Self {
        Crossings {
            legs: s.legs(),
            d,
            returns: 0,
            first_round: None,
            carry: 0.0,
        }
    }

    fn next_gap(&mut self) -> Result<f64> {
        let d = self.d;
        loop {
            let leg = self.legs.next().expect("trajectories are unbounded");
            if leg.to == d {
                return Err(Error::AtTurningPoint(d));
            }
            let crosses = (leg.from < d && d < leg.to) || (leg.to < d && d < leg.from);
            if crosses && self.first_round.is_none() {
                self.first_round = Some(self.returns + 1);
            }
            if leg.to == 0.0 {
                self.returns += 1;
            }
            if crosses {
                let gap = self.carry + (d - leg.from).abs();
                self.carry = (leg.to - d).abs();
                return Ok(gap);
            }
            self.carry += (leg.to - leg.from).abs();
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Placement {
    d: f64,
}

impl Placement {
    pub fn new(d: f64) -> Result<Self> {
        if d >= 1.0 && d.is_finite() {
            Ok(Placement { d })
        } else {
            Err(Error::Domain {
                what: "d",
                value: d,
                range: "[1, inf)",
            })
        }
    }

    pub fn d(&self) -> f64 {
        self.d
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GapSchedule {
    pub gaps: Vec<f64>,
    /// Times of the crossings, `f_i = g_1 + ... + g_i`.
    pub cumulative: Vec<f64>,
}

pub fn gap_schedule(s: &Strategy, d: Placement, k: usize) -> Result<GapSchedule> {
    let mut walk = Crossings::new(s, d.d);
    let mut gaps = Vec::with_capacity(k);
    let mut cumulative = Vec::with_capacity(k);
    let mut total = 0.0;
    for _ in 0..k {
        let g = walk.next_gap()?;
        total += g;
        gaps.push(g);
        cumulative.push(total);
    }
    Ok(GapSchedule { gaps, cumulative })
}

/// Time of the first pass over `d`.
pub fn first_passage(s: &Strategy, d: Placement) -> Result<f64> {
    Crossings::new(s, d.d).next_gap()
}

/// `sum_i (1-p)^(i-1) g_i` with truncation error below `eps`.
pub fn expected_detection_time(s: &Strategy, p: f64, d: Placement, eps: f64) -> Result<f64> {
    check_probability(p)?;
    s.check_convergent(p)?;
    let growth = s.growth();
    let mut walk = Crossings::new(s, d.d);
    let first = walk.next_gap()?;
    let round = walk.first_round.expect("set by the first crossing");
    // g_i <= f_i <= T_{round + i/2} <= K growth^round growth^(i/2)
    let scale = s.return_scale() * growth.powi(round as i32);
    let k = tail_bound_terms(p, growth, eps / scale)?;
    // positions reach about scale * growth^(k/2) before the sum is cut off
    let horizon = scale.log10() + 0.5 * k as f64 * growth.log10();
    if !(horizon < f64::MAX_EXP as f64 * std::f64::consts::LOG10_2 - 1.0) {
        return Err(Error::NotRepresentable(format!(
            "{k} terms needed; trajectory positions reach 1e{horizon:.0}"
        )));
    }

    let q = 1.0 - p;
    let mut sum = first;
    let mut weight = 1.0;
    for _ in 1..k {
        weight *= q;
        sum += weight * walk.next_gap()?;
    }
    Ok(sum)
}

/// Detection ratio at a single placement.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CrSample {
    pub d: f64,
    pub expected_time: f64,
    pub ratio: f64,
}

pub fn competitive_ratio_at(s: &Strategy, p: f64, d: Placement) -> Result<CrSample> {
    let expected_time = expected_detection_time(s, p, d, 1e-12 * d.d)?;
    Ok(CrSample {
        d: d.d,
        expected_time,
        ratio: p * expected_time / d.d,
    })
}

/// Round-to-round change below which the sup is considered settled.
pub const SUP_ROUND_TOL: f64 = 1e-9;
/// Allowed disagreement between offsets `delta` and `delta / 10` at the argmax.
pub const SUP_RICHARDSON_TOL: f64 = 1e-6;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SupReport {
    pub ratio: f64,
    pub d: f64,
    /// Round of the worst placement; 0 is the placement `d = 1`.
    pub round: usize,
    /// 1-based interval within the round.
    pub interval: usize,
    pub rounds_evaluated: usize,
    pub last_change: f64,
    pub richardson_gap: f64,
}

/// Worst ratio over placements just right of each interval start, round by round, until
/// the per-round maximum settles.
pub fn competitive_ratio_sup(s: &Strategy, p: f64, r_max: usize, delta: f64) -> Result<SupReport> {
    check_probability(p)?;
    s.check_convergent(p)?;
    if r_max < 2 {
        return Err(Error::Domain {
            what: "r_max",
            value: r_max as f64,
            range: "[2, inf)",
        });
    }
    if !(delta > 0.0 && delta < 1e-3) {
        return Err(Error::Domain {
            what: "delta",
            value: delta,
            range: "(0, 1e-3)",
        });
    }
    let starts = s.interval_starts();
    let at = |r: usize, i: usize, delta: f64| -> Option<Result<f64>> {
        let d = starts[i] * s.anchor(r) * (1.0 + delta);
        if d < 1.0 {
            return None;
        }
        Some(Placement::new(d).and_then(|d| competitive_ratio_at(s, p, d).map(|c| c.ratio)))
    };

    let mut best = match competitive_ratio_at(s, p, Placement::new(1.0)?) {
        Ok(c) => (c.ratio, 1.0, 0, 1),
        Err(Error::AtTurningPoint(_)) => (f64::NEG_INFINITY, 1.0, 0, 1),
        Err(e) => return Err(e),
    };
    let mut prev_max: Option<f64> = None;
    let mut last_change = f64::INFINITY;
    let mut rounds = 0;
    for r in 1..=r_max {
        rounds = r;
        let mut round_max = f64::NEG_INFINITY;
        for i in 0..starts.len() {
            let Some(ratio) = at(r, i, delta) else {
                continue;
            };
            let ratio = ratio?;
            round_max = round_max.max(ratio);
            if ratio > best.0 {
                best = (ratio, starts[i] * s.anchor(r) * (1.0 + delta), r, i + 1);
            }
        }
        if let Some(prev) = prev_max {
            if round_max.is_finite() && prev.is_finite() {
                last_change = (round_max - prev).abs();
                if last_change < SUP_ROUND_TOL {
                    break;
                }
            }
        }
        prev_max = Some(round_max);
    }
    if !(last_change < SUP_ROUND_TOL) {
        return Err(Error::NotConverged {
            rounds: r_max,
            change: last_change,
        });
    }

    let (ratio, d, round, interval) = best;
    let richardson_gap = if round == 0 {
        0.0
    } else {
        let finer = at(round, interval - 1, delta / 10.0).expect("d >= 1 at the argmax")?;
        (finer - ratio).abs()
    };
    if richardson_gap > SUP_RICHARDSON_TOL {
        return Err(Error::Unstable(richardson_gap));
    }
    Ok(SupReport {
        ratio,
        d,
        round,
        interval,
        rounds_evaluated: rounds,
        last_change,
        richardson_gap,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn positions(s: &Strategy, n: usize) -> Vec<f64> {
        turning_points(s, n).iter().map(|t| t.position).collect()
    }

    #[test]
    fn geometric_turning_points() {
        let s = Strategy::geometric(2.0).unwrap();
        assert_eq!(
            positions(&s, 8),
            vec![2.0, 0.0, 4.0, 0.0, 8.0, 0.0, 16.0, 0.0]
        );
        let tps = turning_points(&s, 2);
        assert_eq!(tps[0].heading, Heading::Inward);
        assert_eq!(tps[1].heading, Heading::Outward);
    }

    #[test]
    fn submonotone_waypoints_and_turns() {
        let params = SubMonotoneParams::new(&0.5, 2.0, vec![1.5]).unwrap();
        let s = Strategy::SubMonotone(params);
        let w: Vec<f64> = s.waypoints().take(10).collect();
        assert_eq!(w, vec![2.0, 0.0, 2.0, 3.0, 2.0, 3.0, 4.0, 0.0, 4.0, 6.0]);
        assert_eq!(
            positions(&s, 10),
            vec![2.0, 0.0, 3.0, 2.0, 4.0, 0.0, 6.0, 4.0, 8.0, 0.0]
        );
    }

    #[test]
    fn zero_hop_matches_geometric() {
        let b = 1.7836116;
        let params = SubMonotoneParams::new(&0.5, b, vec![]).unwrap();
        let a = positions(&Strategy::SubMonotone(params), 40);
        let g = positions(&Strategy::geometric(b).unwrap(), 40);
        assert_eq!(a, g);
    }

    #[test]
    fn geometric_gaps_at_three() {
        let s = Strategy::geometric(2.0).unwrap();
        let gs = gap_schedule(&s, Placement::new(3.0).unwrap(), 6).unwrap();
        assert_eq!(gs.gaps, vec![7.0, 2.0, 6.0, 10.0, 6.0, 26.0]);
        assert_eq!(gs.cumulative[5], 57.0);
    }

    #[test]
    fn turning_point_placement_rejected() {
        let s = Strategy::geometric(2.0).unwrap();
        assert_eq!(
            gap_schedule(&s, Placement::new(4.0).unwrap(), 3),
            Err(Error::AtTurningPoint(4.0))
        );
        assert!(Placement::new(0.5).is_err());
    }

    #[test]
    fn thirteen() {
        let s = Strategy::geometric(2.0).unwrap();
        let d = Placement::new(3.0).unwrap();
        let e = expected_detection_time(&s, 0.5, d, 1e-12).unwrap();
        assert!((e - 13.0).abs() < 1e-10, "{e}");
        let c = competitive_ratio_at(&s, 0.5, d).unwrap();
        assert!((c.ratio - 13.0 / 6.0).abs() < 1e-10);
    }

    #[test]
    fn divergent_growth() {
        let s = Strategy::geometric(5.0).unwrap();
        assert!(matches!(
            expected_detection_time(&s, 0.5, Placement::new(3.0).unwrap(), 1e-9),
            Err(Error::Divergent { .. })
        ));
    }

    #[test]
    fn explicit_sequence_extends_geometrically() {
        let x = MonotoneSequence::new(vec![1.5, 2.0, 5.0], 2.0).unwrap();
        assert_eq!(x.x(3), 5.0);
        assert_eq!(x.x(5), 20.0);
        assert!(MonotoneSequence::new(vec![2.0, 2.0], 2.0).is_err());
        assert!(MonotoneSequence::new(vec![2.0], 1.0).is_err());
    }

    #[test]
    fn explicit_return_scale_bounds_all_returns() {
        let x = MonotoneSequence::new(vec![1.1, 4.0, 4.5, 9.0], 1.5).unwrap();
        let k = x.return_scale();
        let mut total = 0.0;
        for m in 1..60 {
            total += 2.0 * x.x(m);
            assert!(total <= k * 1.5f64.powi(m as i32) * (1.0 + 1e-12), "m = {m}");
        }
    }

    #[test]
    fn sup_of_doubling() {
        // b = 2, p = 0.5: 0.5 * 4 + 0.5 * 4 * 0.5 / 0.5 + 0.25 / 1.5
        let s = Strategy::geometric(2.0).unwrap();
        let rep = competitive_ratio_sup(&s, 0.5, 80, 1e-9).unwrap();
        let want = 2.0 + 2.0 + 0.25 / 1.5;
        assert!((rep.ratio - want).abs() < 1e-6, "{rep:?}");
        assert!(rep.richardson_gap < 1e-6);
    }

    #[test]
    fn sup_needs_enough_rounds() {
        let s = Strategy::geometric(1.1).unwrap();
        assert!(matches!(
            competitive_ratio_sup(&s, 0.5, 5, 1e-9),
            Err(Error::NotConverged { .. })
        ));
    }
}
