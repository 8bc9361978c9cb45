use criterion::{criterion_group, criterion_main, Criterion};
use mhsim::scenario::presets;
use mhsim::{Simulation, StrategyKind, TraceMode};

fn mobile_client_run(c: &mut Criterion) {
    let params = presets::MobileClientParams {
        positions: vec![(0.6, 0.6)],
        total_chunks: 2000,
        ..Default::default()
    };
    let jobs = presets::build_mobile_client(&params).unwrap().expand().unwrap();
    let mut group = c.benchmark_group("mobile_client_2k_chunks");
    group.sample_size(10);
    for job in &jobs {
        let name = job.strategy.as_str();
        group.bench_function(name, |b| {
            b.iter(|| Simulation::new(&job.config, 1, TraceMode::Off).unwrap().run().events)
        });
    }
    group.finish();
    assert!(jobs.iter().any(|j| j.strategy == StrategyKind::Parallel));
}

criterion_group!(benches, mobile_client_run);
criterion_main!(benches);
