use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use liesoliton::catalog;
use liesoliton::flow;
use liesoliton::par;
use liesoliton::soliton;
use liesoliton::two_step;
use liesoliton::{Matrix, MetricLieAlgebra, Tolerances};

/// Diagonal metrics `diag(1 + k/count, ...)` on a fixed algebra.
fn metric_sweep(base: &MetricLieAlgebra, count: usize) -> Vec<MetricLieAlgebra> {
    let n = base.dim();
    (0..count)
        .map(|k| {
            let g = Matrix::from_fn(n, n, |i, j| {
                if i == j {
                    1.0 + ((k * (i + 1)) % count) as f64 / count as f64
                } else {
                    0.0
                }
            });
            base.with_metric(g).unwrap()
        })
        .collect()
}

fn nilsoliton_batch(c: &mut Criterion) {
    let tol = Tolerances::default();
    let metrics = metric_sweep(&catalog::quaternionic_heisenberg(), 64);
    let mut group = c.benchmark_group("nilsoliton_batch");
    let solve = |m: &MetricLieAlgebra| soliton::solve_nilsoliton(m, &tol).unwrap().residual;
    group.bench_function(BenchmarkId::new("sequential", metrics.len()), |b| {
        b.iter(|| par::map_sequential(&metrics, solve))
    });
    group.bench_function(BenchmarkId::new("parallel", metrics.len()), |b| {
        b.iter(|| par::map(&metrics, solve))
    });
    group.finish();
}

fn flow_sweep(c: &mut Criterion) {
    let tol = Tolerances::default();
    let jobs: Vec<(MetricLieAlgebra, f64, f64)> = metric_sweep(&catalog::heis5(), 16)
        .into_iter()
        .map(|m| (m, 0.05, 1e-3))
        .collect();
    let mut group = c.benchmark_group("flow_sweep");
    group.sample_size(10);
    group.bench_function(BenchmarkId::new("sequential", jobs.len()), |b| {
        b.iter(|| {
            par::map_sequential(&jobs, |(m, t, dt)| {
                flow::integrate_flow(m, *t, *dt, &tol).unwrap().len()
            })
        })
    });
    group.bench_function(BenchmarkId::new("parallel", jobs.len()), |b| {
        b.iter(|| flow::integrate_many(&jobs, &tol).len())
    });
    group.finish();
}

fn nonsingular_sampling(c: &mut Criterion) {
    let tol = Tolerances::default();
    let dec = two_step::decompose_two_step(&catalog::quaternionic_heisenberg(), &tol).unwrap();
    let points = two_step::sphere_points(3, two_step::SPHERE_SAMPLES);
    let check = |z: &Vec<f64>| liesoliton::linalg::min_singular_value(&dec.j_of(z)) > tol.rank;
    let mut group = c.benchmark_group("sphere_sampling");
    group.bench_function("sequential", |b| {
        b.iter(|| par::map_sequential(&points, check).into_iter().all(|x| x))
    });
    group.bench_function("parallel", |b| b.iter(|| par::all(&points, check)));
    group.finish();
}

criterion_group!(benches, nilsoliton_batch, flow_sweep, nonsingular_sampling);
criterion_main!(benches);
