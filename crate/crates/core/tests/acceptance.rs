//! End-to-end acceptance run. Prints one PASS/FAIL line per criterion and a summary.
//!
//! The process exits successfully even when a criterion fails so that the report is part of
//! a normal `cargo test` run; set `ACCEPTANCE_STRICT=1` to turn any FAIL into a non-zero exit.

use std::process::ExitCode;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use halfline::monotone::{lower_bound_threshold, monotone_cr_formula, optimal_base};
use halfline::montecarlo::{simulate_detection_time, SimConfig};
use halfline::submonotone::{
    char_poly, heuristic_t1, heuristic_t2, interval_ratios, limit_ratio, solve_optimal, x_of,
    Solution, SolverConfig,
};
use halfline::trajectory::{competitive_ratio_sup, expected_detection_time, gap_schedule};
use halfline::{p_grid, Exec, Mp, Placement, Real, Strategy};

const MAX_HOPS: usize = 10;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn cr_closed(p: f64) -> f64 {
    (4.0 + 4.0 * (1.0 - p).sqrt()) / (2.0 - p) - p
}

fn cr_closed_mp(p: &Mp) -> Mp {
    let s = (Mp::one() - p.clone()).sqrt();
    (s * 4.0 + 4.0) / (Mp::from_f64(2.0) - p.clone()) - p.clone()
}

fn base_closed(p: f64) -> f64 {
    let s = (1.0 - p).sqrt();
    1.0 / (s * (2.0 - p - s))
}

/// One grid point: `p` and the solver output for every `t <= MAX_HOPS`.
struct Column {
    p: f64,
    solutions: Vec<halfline::Result<Solution<Mp>>>,
}

fn sweep() -> Vec<Column> {
    let cfg = SolverConfig::default();
    Exec::default().map(&p_grid(), |&p| Column {
        p,
        solutions: (0..=MAX_HOPS)
            .map(|t| solve_optimal(&Mp::new(p), t, &cfg))
            .collect(),
    })
}

fn closed_form() -> Outcome {
    let mut worst = 0.0f64;
    for i in 1..=99 {
        let p = i as f64 / 100.0;
        let got = optimal_base(p).and_then(|b| monotone_cr_formula(p, b));
        match got {
            Ok(v) => worst = worst.max((v - cr_closed(p)).abs()),
            Err(e) => return outcome(false, format!("p={p}: {e}")),
        }
    }
    outcome(worst <= 1e-10, format!("max error {worst:.3e} over 99 values"))
}

fn series_triangle() -> Outcome {
    let (p, b, d) = (0.5, 2.0, 3.0);
    let s = Strategy::geometric(b).unwrap();
    let place = Placement::new(d).unwrap();

    // gap 1 is the first passage, then returns alternate between 2(x_{r+i} - d) and 2d,
    // with x_2 = 4 the first turning point past d
    let q = 1.0 - p;
    let oracle = 7.0 + 2.0 * 4.0 * q / (1.0 - b * q * q) - 2.0 * d * q / (1.0 - q * q)
        + 2.0 * d * q * q / (1.0 - q * q);
    let series = expected_detection_time(&s, p, place, 1e-14).unwrap();
    let gaps = gap_schedule(&s, place, 6).unwrap().gaps;
    let want_gaps = [7.0, 2.0, 6.0, 10.0, 6.0, 26.0];
    let gaps_ok = gaps.iter().zip(want_gaps).all(|(g, w)| (g - w).abs() < 1e-12);

    let mc = simulate_detection_time(&s, p, place, &SimConfig::new(1_000_000, 20240601)).unwrap();
    let z = (mc.mean - 13.0) / mc.std_error;
    let pass = (series - 13.0).abs() <= 1e-10
        && (oracle - 13.0).abs() <= 1e-10
        && gaps_ok
        && z.abs() <= 4.0;
    outcome(
        pass,
        format!(
            "series {series:.12}, gaps {gaps:?}, Monte Carlo {:.4} +- {:.4} (z = {z:.2})",
            mc.mean, mc.std_error
        ),
    )
}

fn lower_bound() -> Outcome {
    let ps: Vec<f64> = (1..=9).map(|i| i as f64 / 10.0).collect();
    let rows = Exec::default().map(&ps, |&p| {
        let a = lower_bound_threshold(p, 40, 1e-7)?;
        let b = lower_bound_threshold(p, 80, 1e-7)?;
        Ok::<_, halfline::Error>((p, a.threshold - cr_closed(p), b.threshold - cr_closed(p)))
    });
    let mut pass = true;
    let mut parts = Vec::new();
    for row in rows {
        match row {
            Ok((p, g40, g80)) => {
                pass &= g40.abs() <= 0.01 && g80.abs() < g40.abs();
                parts.push(format!("p={p}: {g40:+.4}/{g80:+.4}"));
            }
            Err(e) => {
                pass = false;
                parts.push(format!("error {e}"));
            }
        }
    }
    outcome(pass, format!("gap at l=40/l=80: {}", parts.join(", ")))
}

fn zero_hops(cols: &[Column]) -> Outcome {
    let mut worst = (0.0f64, 0.0f64);
    for col in cols {
        match &col.solutions[0] {
            Ok(s) => {
                worst.0 = worst.0.max((s.r.to_f64() - cr_closed(col.p)).abs());
                worst.1 = worst.1.max((s.params.beta().to_f64() - base_closed(col.p)).abs());
            }
            Err(e) => return outcome(false, format!("p={}: {e}", col.p)),
        }
    }
    outcome(
        worst.0 <= 1e-8 && worst.1 <= 1e-8,
        format!("max |R - CR| {:.3e}, max |beta - b*| {:.3e}", worst.0, worst.1),
    )
}

fn heuristic_one_hop() -> Outcome {
    let half = match heuristic_t1(&Mp::new(0.5)) {
        Ok(h) => h.r.to_f64(),
        Err(e) => return outcome(false, format!("p=0.5: {e}")),
    };
    let mut pass = (half - 3.702031).abs() <= 1e-5;
    let mut worst_eq = 0.0f64;
    let mut scaled = (f64::INFINITY, f64::NEG_INFINITY);
    for p in p_grid() {
        let pm = Mp::new(p);
        let rep = heuristic_t1(&pm).and_then(|h| {
            let rep = interval_ratios(&h.params, &pm)?;
            Ok((h.params.gamma(1), rep))
        });
        match rep {
            Ok((g1, rep)) => {
                let d = (rep.per_interval[0].clone() - rep.per_interval[1].clone()).abs();
                worst_eq = worst_eq.max(d.to_f64());
                let s = (g1 * (1.0 - p)).to_f64();
                scaled = (scaled.0.min(s), scaled.1.max(s));
            }
            Err(e) => {
                pass = false;
                worst_eq = f64::NAN;
                eprintln!("heuristic t=1 at p={p}: {e}");
            }
        }
    }
    pass &= worst_eq <= 1e-6 && scaled.0 > 0.0 && scaled.1 <= 1.0;
    outcome(
        pass,
        format!(
            "R(0.5) = {half:.7}, max |R1 - R2| {worst_eq:.3e}, gamma1(1-p) in [{:.4}, {:.4}]",
            scaled.0, scaled.1
        ),
    )
}

fn improvement_chain(cols: &[Column]) -> Outcome {
    let mut min_step = f64::INFINITY;
    let mut min_below = f64::INFINITY;
    for col in cols {
        let mut rs = Vec::new();
        for (t, s) in col.solutions.iter().enumerate() {
            match s {
                Ok(s) => rs.push(s.r.clone()),
                Err(e) => return outcome(false, format!("p={} t={t}: {e}", col.p)),
            }
        }
        for w in rs.windows(2) {
            min_step = min_step.min((w[0].clone() - w[1].clone()).to_f64());
        }
        let below = cr_closed_mp(&Mp::new(col.p)) - rs[1].clone();
        min_below = min_below.min(below.to_f64());
    }
    outcome(
        min_step > 0.0 && min_below > 0.0,
        format!("smallest R_t - R_(t+1) {min_step:.3e}, smallest CR - R_1 {min_below:.3e}"),
    )
}

fn limit_agreement(cols: &[Column]) -> Outcome {
    let mut diff = (f64::INFINITY, f64::NEG_INFINITY);
    let mut min_x = f64::INFINITY;
    for col in cols {
        let pm = Mp::new(col.p);
        let lim = match limit_ratio(&pm) {
            Ok(l) => l,
            Err(e) => return outcome(false, format!("limit at p={}: {e}", col.p)),
        };
        let r10 = match &col.solutions[MAX_HOPS] {
            Ok(s) => s.r.clone(),
            Err(e) => return outcome(false, format!("p={} t=10: {e}", col.p)),
        };
        let d = (r10 - lim.r.clone()).to_f64();
        diff = (diff.0.min(d), diff.1.max(d));
        min_x = min_x.min(x_of(&pm, &lim.r).to_f64());
    }
    outcome(
        diff.0 > 0.0 && diff.1 < 1e-6 && min_x > 4.0,
        format!(
            "R_10 - limit in [{:.3e}, {:.3e}], smallest x at the limit {min_x:.4}",
            diff.0, diff.1
        ),
    )
}

fn feasibility(cols: &[Column]) -> Outcome {
    let mut spread = f64::INFINITY;
    let mut last_gap = f64::INFINITY;
    let mut residual = 0.0f64;
    for col in cols {
        for (t, s) in col.solutions.iter().enumerate() {
            match s {
                Ok(s) => {
                    spread = spread.min(s.feasibility.spread.to_f64());
                    last_gap = last_gap.min(s.feasibility.last_gap.to_f64());
                    residual = residual.max(s.report.closure_residual.abs().to_f64());
                }
                Err(e) => return outcome(false, format!("p={} t={t}: {e}", col.p)),
            }
        }
    }
    outcome(
        spread > 0.0 && last_gap > 0.0 && residual <= 1e-8,
        format!(
            "{} solves, smallest x-y-1 {spread:.3e}, smallest beta-gamma_t {last_gap:.3e}, max residual {residual:.3e}",
            cols.len() * (MAX_HOPS + 1)
        ),
    )
}

fn floors(cols: &[Column]) -> Outcome {
    let mut margin = f64::INFINITY;
    let mut count = 0;
    for col in cols {
        let pm = Mp::new(col.p);
        let floor = 3.0f64.max(4.0 - col.p);
        let mut overall: Vec<f64> = col
            .solutions
            .iter()
            .flatten()
            .map(|s| s.report.overall.to_f64())
            .collect();
        for h in [heuristic_t1(&pm), heuristic_t2(&pm)].into_iter().flatten() {
            if let Ok(rep) = interval_ratios(&h.params, &pm) {
                overall.push(rep.overall.to_f64());
            }
        }
        count += overall.len();
        for r in overall {
            margin = margin.min(r - floor);
        }
    }
    outcome(
        margin >= -1e-6,
        format!("{count} strategies, smallest margin over max(3, 4-p) {margin:.4}"),
    )
}

fn cross_oracle(cols: &[Column]) -> Outcome {
    let mut cases = Vec::new();
    for i in 1..=9 {
        let p = i as f64 / 10.0;
        let col = cols
            .iter()
            .find(|c| (c.p - p).abs() < 1e-12)
            .expect("spot-check p lies on the grid");
        for t in 0..=3 {
            cases.push((p, t, col.solutions[t].as_ref().ok().cloned()));
        }
    }
    let rows = Exec::default().map(&cases, |(p, t, sol)| {
        let sol = sol.as_ref().ok_or_else(|| format!("p={p} t={t}: no solution"))?;
        let params = sol.params.to_f64(*p).map_err(|e| e.to_string())?;
        let sup = competitive_ratio_sup(&Strategy::SubMonotone(params), *p, 20_000, 1e-10)
            .map_err(|e| format!("p={p} t={t}: {e}"))?;
        Ok::<_, String>((*p, *t, sup, sol.report.overall.to_f64()))
    });
    let mut worst = (0.0f64, String::new());
    let mut off = 0;
    for row in rows {
        match row {
            Ok((p, t, sup, analytic)) => {
                let d = (sup.ratio - analytic).abs();
                if d > 1e-5 {
                    off += 1;
                }
                if d >= worst.0 {
                    worst = (
                        d,
                        format!(
                            "p={p} t={t}: sup {:.6} at d={:.4e} (round {}) vs analytic {analytic:.6}",
                            sup.ratio, sup.d, sup.round
                        ),
                    );
                }
            }
            Err(e) => return outcome(false, e),
        }
    }
    outcome(
        off == 0,
        format!(
            "{}/{} cases within 1e-5, worst |sup - analytic| {:.3e} ({})",
            cases.len() - off,
            cases.len(),
            worst.0,
            worst.1
        ),
    )
}

/// Equality residual for `gamma_t`, written out from the coefficient definitions.
fn residual_numerator(p: &Mp, r: &Mp, beta: &Mp, t: usize) -> Mp {
    let one = Mp::one();
    let q = one.clone() - p.clone();
    let two_p = Mp::from_f64(2.0) - p.clone();
    let pole = one.clone() - beta.clone() * q.powi(2);
    let a = q.clone() * 2.0;
    let b = Mp::from_f64(2.0) / (beta.clone() - 1.0) + q.powi(3) * 2.0 / pole.clone();
    let c = p.clone() * 2.0 * q.powi(3) * two_p.clone() * beta.clone() / pole.clone();
    let d = (p.powi(4) * -2.0 + p.powi(3) * 12.0 - p.powi(2) * 26.0 + p.clone() * 23.0 - 4.0)
        / two_p.clone();
    let e = p.clone() * 2.0 * q.clone() * two_p.clone() * beta.clone() / pole.clone();
    let f = p.clone()
        * ((beta.clone() * q.clone() + 1.0) * 2.0 / ((beta.clone() - 1.0) * pole.clone())
            + (Mp::from_f64(5.0) - p.clone() * 2.0) / two_p);

    let rp = r.clone() / p.clone();
    let x = (rp.clone() - d) / a.clone();
    let forced = e / (rp.clone() - f.clone());
    let y = (b * forced.clone() + c) / a;
    let shift = y / (x.clone() - 1.0);
    let gamma_t = (one - shift.clone()) * x.powi(t as i32) + shift;
    (gamma_t - forced) * (rp - f) * (beta.clone() - 1.0) * pole
}

fn transcription_guard() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let p: f64 = rng.random_range(0.05..0.95);
        let r: f64 = rng.random_range(3.0..8.0);
        let t: usize = rng.random_range(0..=3);
        let top = 1.0 / ((1.0 - p) * (1.0 - p));
        let (pm, rm) = (Mp::new(p), Mp::new(r));
        let q = char_poly(&pm, &rm, t).poly();
        let ratios: Vec<Mp> = (0..3)
            .map(|_| {
                let beta = Mp::new(1.0 + (top - 1.0) * rng.random_range(0.05..0.95));
                residual_numerator(&pm, &rm, &beta, t) / q.eval(&beta)
            })
            .collect();
        for k in &ratios[1..] {
            let rel = ((k.clone() - ratios[0].clone()) / ratios[0].clone()).abs();
            worst = worst.max(rel.to_f64());
        }
    }
    outcome(
        worst <= 1e-6,
        format!("100 points, max relative spread of the ratio {worst:.3e}"),
    )
}

fn main() -> ExitCode {
    let start = Instant::now();
    let cols = sweep();
    eprintln!(
        "grid sweep: {} points x {} hop counts in {:.1?}",
        cols.len(),
        MAX_HOPS + 1,
        start.elapsed()
    );

    let checks: Vec<(&str, Box<dyn Fn() -> Outcome + '_>)> = vec![
        ("monotone closed form", Box::new(closed_form)),
        ("series, event walk and Monte Carlo agree", Box::new(series_triangle)),
        ("lower-bound threshold at l=40 and l=80", Box::new(lower_bound)),
        ("zero hops give the optimal monotone strategy", Box::new(|| zero_hops(&cols))),
        ("one-hop heuristic", Box::new(heuristic_one_hop)),
        ("strict improvement in t", Box::new(|| improvement_chain(&cols))),
        ("t=10 against the large-t limit", Box::new(|| limit_agreement(&cols))),
        ("feasibility sweep", Box::new(|| feasibility(&cols))),
        ("global floors", Box::new(|| floors(&cols))),
        ("trajectory sup against analytic ratios", Box::new(|| cross_oracle(&cols))),
        ("characteristic polynomial transcription", Box::new(transcription_guard)),
    ];

    let mut failed = 0;
    for (i, (name, check)) in checks.iter().enumerate() {
        let t0 = Instant::now();
        let o = check();
        if !o.pass {
            failed += 1;
        }
        println!(
            "{} {:>2} {name}: {} [{:.1?}]",
            if o.pass { "PASS" } else { "FAIL" },
            i + 1,
            o.detail,
            t0.elapsed()
        );
    }
    println!(
        "acceptance: {} passed, {failed} failed in {:.1?}",
        checks.len() - failed,
        start.elapsed()
    );

    let strict = std::env::var("ACCEPTANCE_STRICT").is_ok_and(|v| v == "1");
    if strict && failed > 0 {
        ExitCode::FAILURE
    } else {
        ExitCode::SUCCESS
    }
}
