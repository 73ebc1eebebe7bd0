use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use sigmapoints::algebraic::{detect_algebraic, enumerate};
use sigmapoints::elliptic::tol_from_digits;
use sigmapoints::zerocount::{count_zeros, BESSON_C};
use sigmapoints::{BivariatePoly, Lattice, SigmaEvaluator};
use sigmapoints_bench::points;

fn sigma(c: &mut Criterion) {
    let ev = SigmaEvaluator::new(&Lattice::square(), tol_from_digits(30)).unwrap();
    let mut group = c.benchmark_group("log_sigma");
    for radius in [1.0, 30.0, 1e4] {
        let zs = points(256, radius, 1);
        group.bench_with_input(BenchmarkId::from_parameter(radius), &zs, |b, zs| {
            b.iter(|| zs.iter().map(|&z| ev.log_sigma(black_box(z)).map_or(0.0, |l| l.log_abs)).sum::<f64>())
        });
    }
    group.finish();
}

fn heights(c: &mut Criterion) {
    c.bench_function("enumerate d=2 H=4", |b| b.iter(|| enumerate(2, black_box(4.0)).unwrap().len()));
    let targets: Vec<_> = enumerate(2, 3.0).unwrap().into_iter().map(|a| a.approx).take(64).collect();
    c.bench_function("detect_algebraic d=2 H=3", |b| {
        b.iter(|| targets.iter().filter(|&&x| detect_algebraic(black_box(x), 2, 3.0, 1e-9).unwrap().is_some()).count())
    });
}

fn zeros(c: &mut Criterion) {
    let ev = SigmaEvaluator::new(&Lattice::square(), tol_from_digits(30)).unwrap();
    let p = BivariatePoly::parse("Y^2 - X*Y + 2").unwrap();
    let mut group = c.benchmark_group("count_zeros");
    group.sample_size(10);
    for r in [1.5, 4.0] {
        group.bench_with_input(BenchmarkId::from_parameter(r), &r, |b, &r| {
            b.iter(|| count_zeros(&ev, &p, black_box(r), 1e-8, BESSON_C).unwrap().count)
        });
    }
    group.finish();
}

criterion_group!(benches, sigma, heights, zeros);
criterion_main!(benches);
