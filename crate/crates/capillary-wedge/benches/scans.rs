use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use capillary_wedge::model::derive_contact_config;
use capillary_wedge::sweep::{axis_points, sweep, Axis};
use capillary_wedge::{case_opposite, case_same, Execution, FluidParams, SolveOptions};

fn policies() -> Vec<(&'static str, Execution)> {
    vec![
        ("sequential", Execution::Sequential),
        #[cfg(feature = "parallel")]
        ("parallel", Execution::Parallel),
    ]
}

fn opts(execution: Execution) -> SolveOptions {
    SolveOptions { execution, ..SolveOptions::default() }
}

fn prescan(c: &mut Criterion) {
    let p = FluidParams::new(1.0, 1.0, 0.5, 1.2, 1.3, 1.0);
    let config = derive_contact_config(&p).unwrap();
    let mut group = c.benchmark_group("interior_minimum_prescan");
    group.sample_size(10);
    for (name, ex) in policies() {
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| case_opposite::solve_opposite_min(&p, &config, &opts(ex)).unwrap())
        });
    }
    group.finish();
}

fn thresholds(c: &mut Criterion) {
    let p = FluidParams::new(1.0, 1.0, 0.9, 1.2, 0.4, 1.0);
    let config = derive_contact_config(&p).unwrap();
    let (fp, fc, _) = capillary_wedge::solver::solve_frame(&p, &config).unwrap();
    let mut group = c.benchmark_group("branch_thresholds");
    group.sample_size(10);
    for (name, ex) in policies() {
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| case_same::thresholds(&fc, &fp, &opts(ex)).unwrap())
        });
    }
    group.finish();
}

fn apex_sweep(c: &mut Criterion) {
    let p = FluidParams::new(1.0, 1.0, -0.5, 0.9, 0.6, 1.0);
    let xs = axis_points(-10.0, -1e-2, 64, true).unwrap();
    let mut group = c.benchmark_group("apex_sweep_64");
    group.sample_size(10);
    for (name, ex) in policies() {
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| sweep(&p, Axis::UM, &xs, &opts(ex)).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, prescan, thresholds, apex_sweep);
criterion_main!(benches);
