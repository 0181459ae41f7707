use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use halfline::montecarlo::{simulate_detection_time, SimConfig};
use halfline::submonotone::{solve_optimal, SolverConfig};
use halfline::{Exec, Mp, Placement, Strategy};

const MODES: [(&str, Exec); 2] = [("sequential", Exec::Sequential), ("parallel", Exec::Parallel)];

fn monte_carlo(c: &mut Criterion) {
    let s = Strategy::geometric(2.0).unwrap();
    let d = Placement::new(3.0).unwrap();
    let mut group = c.benchmark_group("monte_carlo_200k");
    group.sample_size(10);
    for (name, exec) in MODES {
        let cfg = SimConfig {
            exec,
            ..SimConfig::new(200_000, 7)
        };
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| simulate_detection_time(&s, 0.5, d, &cfg).unwrap())
        });
    }
    group.finish();
}

fn solver_sweep(c: &mut Criterion) {
    let grid: Vec<f64> = (1..=16).map(|i| i as f64 / 17.0).collect();
    let cfg = SolverConfig::default();
    let mut group = c.benchmark_group("solver_sweep_t3");
    group.sample_size(10);
    for (name, exec) in MODES {
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| exec.map(&grid, |p| solve_optimal(&Mp::new(*p), 3, &cfg).unwrap().r))
        });
    }
    group.finish();
}

criterion_group!(benches, monte_carlo, solver_sweep);
criterion_main!(benches);
