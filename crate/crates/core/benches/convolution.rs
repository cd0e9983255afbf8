//! Sequential against data-parallel sampling. Without the `parallel`
//! feature both policies take the sequential path.

use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion, Throughput};
use num_complex::Complex64;

use hypergroup_core::checks::{check_constant_character, check_support_bound};
use hypergroup_core::convolution::convolve_mc;
use hypergroup_core::{ChamberPoint, ExecPolicy, HypergroupElement};

const POLICIES: [(&str, ExecPolicy); 2] = [("sequential", ExecPolicy::Sequential), ("parallel", ExecPolicy::Parallel)];

fn el(x: &[f64], theta: f64) -> HypergroupElement {
    HypergroupElement::new(ChamberPoint::new(x.to_vec()).unwrap(), theta)
}

fn convolve(c: &mut Criterion) {
    let n = 50_000;
    let mut group = c.benchmark_group("convolve_mc");
    group.sample_size(10).throughput(Throughput::Elements(n as u64));
    for q in [1usize, 2, 3] {
        let s = el(&[1.0, 0.6, 0.3][..q], 0.4);
        let t = el(&[0.7, 0.45, 0.25][..q], -1.1);
        let p = 2.0 * q as f64 + 0.5;
        for (name, policy) in POLICIES {
            group.bench_with_input(BenchmarkId::new(name, q), &q, |b, _| {
                b.iter(|| convolve_mc(black_box(&s), black_box(&t), p, n, 1, policy).unwrap())
            });
        }
    }
    group.finish();
}

fn reductions(c: &mut Criterion) {
    let n = 50_000;
    let s = ChamberPoint::new(vec![0.8, 0.3]).unwrap();
    let t = ChamberPoint::new(vec![0.6, 0.2]).unwrap();
    let mut group = c.benchmark_group("reductions");
    group.sample_size(10).throughput(Throughput::Elements(n as u64));
    for (name, policy) in POLICIES {
        group.bench_function(BenchmarkId::new("constant_character", name), |b| {
            b.iter(|| check_constant_character(&s, &t, 4.0, Complex64::new(0.5, 0.0), n, 2, policy).unwrap())
        });
        group.bench_function(BenchmarkId::new("support_bound", name), |b| {
            b.iter(|| check_support_bound(2, n, 3, policy).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, convolve, reductions);
criterion_main!(benches);
