use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use hermtop::classify::classify;
use hermtop::par::{self, Exec};
use hermtop::ring::Disc;
use hermtop::spine_geom::horosphere_tiling;
use hermtop::topograph::{sweep_forms, trace_river};

const MODES: [(&str, Exec); 2] = [("sequential", Exec::Sequential), ("parallel", Exec::Parallel)];

fn tiling(c: &mut Criterion) {
    let mut g = c.benchmark_group("horosphere_tiling_d88");
    g.sample_size(10);
    let d = Disc::new(-88).unwrap();
    for (name, exec) in MODES {
        g.bench_with_input(BenchmarkId::from_parameter(name), &exec, |b, &exec| {
            b.iter(|| horosphere_tiling(d, [-1.0, -1.0, 1.0, 1.0], exec).unwrap())
        });
    }
    g.finish();
}

fn classification(c: &mut Criterion) {
    let mut g = c.benchmark_group("classify_d4_disc30");
    g.sample_size(10);
    let d = Disc::new(-4).unwrap();
    for (name, exec) in MODES {
        g.bench_with_input(BenchmarkId::from_parameter(name), &exec, |b, &exec| {
            b.iter(|| classify(d, 30, exec).unwrap())
        });
    }
    g.finish();
}

fn river_sweep(c: &mut Criterion) {
    let mut g = c.benchmark_group("river_sweep");
    g.sample_size(10);
    let forms = sweep_forms(6, 12, 150);
    for (name, exec) in MODES {
        g.bench_with_input(BenchmarkId::from_parameter(name), &exec, |b, &exec| {
            b.iter(|| par::map(exec, &forms, |f| trace_river(f).map(|r| r.min_abs).ok()))
        });
    }
    g.finish();
}

criterion_group!(benches, tiling, classification, river_sweep);
criterion_main!(benches);
