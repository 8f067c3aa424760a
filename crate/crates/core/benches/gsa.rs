//! PAWN bootstrap throughput, data-parallel versus sequential.
//!
//! With the default `parallel` feature the same run is timed on the global
//! rayon pool and on a one-worker pool. Build with `--no-default-features`
//! to time the plain sequential code path.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use scourbench::pawn::{run_gsa, run_pawn, GsaConfig, Marginal};
use scourbench::{par, EquationId, Source};

fn config() -> GsaConfig {
    GsaConfig { n_samples: 2000, bootstrap_resamples: 200, ..GsaConfig::new(7) }
}

fn synthetic() -> Vec<Marginal> {
    (0..4).map(|i| Marginal::uniform(format!("x{i}"), 0.0, 1.0).unwrap()).collect()
}

fn run_synthetic() {
    let cfg = config();
    run_pawn(&synthetic(), &cfg, |x| Ok(x[0] + 0.5 * x[1] * x[1] + 0.1 * x[2])).unwrap();
}

fn run_equation() {
    run_gsa(EquationId::Hec18, Source::Field, &config()).unwrap();
}

fn bench(c: &mut Criterion) {
    let mode = if par::is_parallel() { "parallel" } else { "sequential" };
    let mut g = c.benchmark_group("pawn");
    g.sample_size(10);
    for (name, f) in [("synthetic", run_synthetic as fn()), ("hec18-field", run_equation)] {
        g.bench_function(BenchmarkId::new(name, mode), |b| b.iter(f));
        #[cfg(feature = "parallel")]
        {
            let pool = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
            g.bench_function(BenchmarkId::new(name, "one-worker"), |b| b.iter(|| pool.install(f)));
        }
    }
    g.finish();
}

criterion_group!(benches, bench);
criterion_main!(benches);
