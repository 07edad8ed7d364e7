//! Data-parallel versus sequential sweeps of the radius evaluation that
//! dominates the optimizers and oracles.
//!
//! `sequential` always uses a plain iterator. `backend` goes through
//! `opradius::par`, which is rayon with the default `parallel` feature and
//! the same plain iterator under `--no-default-features`.

use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use opradius::oracle::{grid_min_gamma, GridSpec, Sampler};
use opradius::par;
use opradius::radius::{rho_radius_value, RadiusOptions};
use opradius::{ComplexMatrix, ComplexScalar, RhoParam};

/// `A + γB` over a polar γ-grid, the oracle's inner workload.
fn gamma_points(a: &ComplexMatrix, b: &ComplexMatrix, count: usize) -> Vec<ComplexMatrix> {
    (0..count)
        .map(|k| {
            let g = ComplexScalar::from_polar(1.0 + (k % 7) as f64 / 7.0, k as f64 * 0.37);
            a.add_scaled(g, b).expect("same shape")
        })
        .collect()
}

fn radius_sweep(c: &mut Criterion) {
    let opts = RadiusOptions::fast();
    let rho = RhoParam::new(0.8).expect("valid rho");
    let backend = if par::is_parallel() {
        "backend_rayon"
    } else {
        "backend_sequential"
    };
    let mut group = c.benchmark_group("radius_sweep");
    group.sample_size(10);
    for n in [2usize, 4, 8] {
        let mut s = Sampler::new(n as u64);
        let (a, b) = (s.matrix(n), s.matrix(n));
        let points = gamma_points(&a, &b, 512);
        group.bench_with_input(BenchmarkId::new("sequential", n), &points, |bench, pts| {
            bench.iter(|| {
                let v: Vec<f64> = pts
                    .iter()
                    .map(|m| rho_radius_value(m, rho, &opts).expect("radius"))
                    .collect();
                black_box(v)
            })
        });
        group.bench_with_input(BenchmarkId::new(backend, n), &points, |bench, pts| {
            bench.iter(|| {
                black_box(par::map_slice(pts, |m| {
                    rho_radius_value(m, rho, &opts).expect("radius")
                }))
            })
        });
    }
    group.finish();
}

fn gamma_grid(c: &mut Criterion) {
    let mut group = c.benchmark_group("gamma_grid_oracle");
    group.sample_size(10);
    let grid = GridSpec {
        radial_points: 16,
        angular_points: 32,
        ..GridSpec::default()
    };
    let rho = RhoParam::new(1.3).expect("valid rho");
    for n in [2usize, 4] {
        let mut s = Sampler::new(100 + n as u64);
        let (a, b) = (s.matrix(n), s.matrix(n));
        group.bench_function(BenchmarkId::new("grid_min_gamma", n), |bench| {
            bench.iter(|| black_box(grid_min_gamma(&a, &b, rho, &grid).expect("grid")))
        });
    }
    group.finish();
}

criterion_group!(benches, radius_sweep, gamma_grid);
criterion_main!(benches);
