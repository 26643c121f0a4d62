use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use ndoppe_core::fitting::NbShape;
use ndoppe_core::simulate::{sample_aggregate, sample_ndoppe, SimConfig};
use ndoppe_core::{build_report, CoefficientVector, CompoundModel, Execution, NdoppeDist};

const MODES: [Execution; 2] = [Execution::Sequential, Execution::Parallel];

fn sampling(c: &mut Criterion) {
    let coeffs = CoefficientVector::new(vec![1.0, 3.35]).unwrap();
    let dist = NdoppeDist::new(coeffs.clone(), 0.6).unwrap();
    let model = CompoundModel::ndoppe(coeffs, 0.6, 1.5).unwrap();

    let mut group = c.benchmark_group("sample_ndoppe");
    group.sample_size(20);
    for mode in MODES {
        let cfg = SimConfig::new(1, 1 << 20).unwrap().with_execution(mode);
        group.bench_with_input(BenchmarkId::from_parameter(format!("{mode:?}")), &cfg, |b, cfg| {
            b.iter(|| black_box(sample_ndoppe(&dist, cfg).unwrap()))
        });
    }
    group.finish();

    let mut group = c.benchmark_group("sample_aggregate");
    group.sample_size(20);
    for mode in MODES {
        let cfg = SimConfig::new(1, 1 << 20).unwrap().with_execution(mode);
        group.bench_with_input(BenchmarkId::from_parameter(format!("{mode:?}")), &cfg, |b, cfg| {
            b.iter(|| black_box(sample_aggregate(&model, cfg).unwrap()))
        });
    }
    group.finish();
}

fn report(c: &mut Criterion) {
    let mut group = c.benchmark_group("build_report");
    for mode in MODES {
        group.bench_function(format!("{mode:?}"), |b| {
            b.iter(|| black_box(build_report(NbShape::default(), mode).unwrap()))
        });
    }
    group.finish();
}

criterion_group!(benches, sampling, report);
criterion_main!(benches);
