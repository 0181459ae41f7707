//! CSV data behind the plots: ratios, expansion factors and constraint margins of the
//! optimal t-hop strategies over a grid of `p`.

use std::fs;
use std::io;
use std::path::Path;

use halfline::submonotone::{
    heuristic_t1, heuristic_t2, limit_ratio, solve_optimal, Heuristic, Limit, Solution,
    SolverConfig,
};
use halfline::{Exec, Mp, Real};

use crate::fmt::sig9;

/// Largest hop count any figure needs.
pub const T_MAX: usize = 10;

pub const FIGURE_IDS: [&str; 15] = [
    "fig2",
    "fig3",
    "fig4",
    "fig5",
    "fig6",
    "fig7",
    "fig8left",
    "fig8middle",
    "fig8right",
    "fig9left",
    "fig9middle",
    "fig9right",
    "fig10left",
    "fig10middle",
    "fig10right",
];

/// Everything computed at one grid point.
struct Point {
    p: Mp,
    sols: Vec<Option<Solution<Mp>>>,
    limit: Option<Limit<Mp>>,
    h1: Option<Heuristic<Mp>>,
    h2: Option<Heuristic<Mp>>,
    errors: Vec<String>,
}

impl Point {
    fn compute(p: f64) -> Point {
        let pm = Mp::new(p);
        let mut errors = Vec::new();
        fn keep<T>(errors: &mut Vec<String>, what: String, r: halfline::Result<T>) -> Option<T> {
            r.map_err(|e| errors.push(format!("{what}: {e}"))).ok()
        }
        let cfg = SolverConfig::default();
        let sols = (0..=T_MAX)
            .map(|t| keep(&mut errors, format!("p={p} t={t}"), solve_optimal(&pm, t, &cfg)))
            .collect();
        let limit = keep(&mut errors, format!("p={p} limit"), limit_ratio(&pm));
        let h1 = keep(&mut errors, format!("p={p} heuristic t=1"), heuristic_t1(&pm));
        let h2 = keep(&mut errors, format!("p={p} heuristic t=2"), heuristic_t2(&pm));
        Point {
            p: pm,
            sols,
            limit,
            h1,
            h2,
            errors,
        }
    }

    fn q(&self) -> Mp {
        Mp::one() - self.p.clone()
    }

    fn r(&self, t: usize) -> Option<Mp> {
        Some(self.sols[t].as_ref()?.r.clone())
    }

    fn beta(&self, t: usize) -> Option<Mp> {
        Some(self.sols[t].as_ref()?.params.beta().clone())
    }
}

type Cell = Box<dyn Fn(&Point) -> Option<Mp> + Sync>;

fn columns(id: &str) -> Vec<(String, Cell)> {
    let mut cols: Vec<(String, Cell)> = Vec::new();
    match id {
        "fig2" | "fig6" => {
            let ts = if id == "fig2" { 0..=4 } else { 5..=T_MAX };
            for t in ts {
                cols.push((format!("R{t}"), Box::new(move |pt| pt.r(t))));
            }
        }
        "fig3" | "fig7" => {
            let ts = if id == "fig3" { 0..=4 } else { 5..=T_MAX };
            for t in ts {
                cols.push((format!("beta{t}"), Box::new(move |pt| pt.beta(t))));
            }
        }
        "fig4" => {
            for t in 1..=4 {
                cols.push((
                    format!("spread_t{t}"),
                    Box::new(move |pt| {
                        let s = pt.sols[t].as_ref()?.feasibility.spread.clone();
                        Some(s * pt.p.clone() * pt.q())
                    }),
                ));
            }
        }
        "fig5" => {
            for t in 1..=4 {
                cols.push((
                    format!("last_gap_t{t}"),
                    Box::new(move |pt| {
                        let g = pt.sols[t].as_ref()?.feasibility.last_gap.clone();
                        Some(g * pt.q().powi(2))
                    }),
                ));
            }
        }
        "fig8left" => {
            for t in 5..=T_MAX {
                cols.push((
                    format!("dR_t{t}"),
                    Box::new(move |pt| {
                        let d = pt.r(t - 1)? - pt.r(t)?;
                        Some(d * 4f64.powi(t as i32 - 5))
                    }),
                ));
            }
        }
        "fig8middle" => {
            for t in 5..=T_MAX {
                cols.push((
                    format!("dbeta_t{t}"),
                    Box::new(move |pt| {
                        let (b, prev) = (pt.beta(t)?, pt.beta(t - 1)?);
                        Some(pt.q().powi(11 - t as i32) * (b.clone() - prev) / b)
                    }),
                ));
            }
        }
        "fig8right" => {
            for t in 5..=T_MAX {
                cols.push((
                    format!("spread_t{t}"),
                    Box::new(move |pt| {
                        let s = pt.sols[t].as_ref()?.feasibility.spread.clone();
                        Some(s * pt.p.clone() * pt.q() * 4f64.powi(t as i32 - 5))
                    }),
                ));
            }
        }
        "fig9left" => cols.push((
            "heuristic1_minus_R1".into(),
            Box::new(|pt| Some(pt.h1.as_ref()?.r.clone() - pt.r(1)?)),
        )),
        "fig9middle" => cols.push((
            "gamma1_scaled".into(),
            Box::new(|pt| Some(pt.h1.as_ref()?.params.gamma(1) * pt.q())),
        )),
        "fig9right" => cols.push((
            "heuristic2_minus_R1".into(),
            Box::new(|pt| Some(pt.h2.as_ref()?.r.clone() - pt.r(1)?)),
        )),
        "fig10left" => cols.push((
            "R10_minus_limit".into(),
            Box::new(|pt| Some(pt.r(T_MAX)? - pt.limit.as_ref()?.r.clone())),
        )),
        "fig10middle" => cols.push((
            "x_limit".into(),
            Box::new(|pt| Some(pt.limit.as_ref()?.x.clone())),
        )),
        "fig10right" => cols.push((
            "limit_last_gap".into(),
            Box::new(|pt| Some(pt.limit.as_ref()?.last_gap.clone() * pt.q().powi(2))),
        )),
        _ => unreachable!("unknown figure {id}"),
    }
    cols
}

#[derive(Debug)]
pub struct Report {
    pub written: Vec<String>,
    /// Empty cells across all files.
    pub empty_cells: usize,
    pub errors: Vec<String>,
}

/// Grid `lo, lo + step, ...` up to `hi`, built from integer multiples so the values
/// print exactly.
pub fn grid(lo: f64, hi: f64, step: f64) -> Vec<f64> {
    let n = ((hi - lo) / step + 1e-9).floor() as usize;
    (0..=n).map(|i| lo + i as f64 * step).map(|p| (p * 1e9).round() / 1e9).collect()
}

pub fn write_figures(ids: &[&str], grid: &[f64], out: &Path, exec: Exec) -> io::Result<Report> {
    fs::create_dir_all(out)?;
    let points = exec.map(grid, |p| Point::compute(*p));
    let mut report = Report {
        written: Vec::new(),
        empty_cells: 0,
        errors: points.iter().flat_map(|pt| pt.errors.clone()).collect(),
    };
    for id in ids {
        let cols = columns(id);
        let mut csv = String::from("p");
        for (name, _) in &cols {
            csv.push(',');
            csv.push_str(name);
        }
        csv.push('\n');
        for (p, pt) in grid.iter().zip(&points) {
            csv.push_str(&p.to_string());
            for (_, cell) in &cols {
                csv.push(',');
                match cell(pt) {
                    Some(v) => csv.push_str(&sig9(v.to_f64())),
                    None => report.empty_cells += 1,
                }
            }
            csv.push('\n');
        }
        let name = format!("{id}.csv");
        fs::write(out.join(&name), csv)?;
        report.written.push(name);
    }
    Ok(report)
}
