use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use katolab::field::{make_scenario, run_scenario, RunOptions, ScenarioName, DEFAULT_MODES};
use katolab::kato::{run_fuzz, FuzzConfig, FuzzTarget};
use katolab::rng::{complex_normal_matrix, master_rng};
use katolab::symbols::{ellipticity_constant_with, OperatorSpec, Sampling};
use katolab::tensor::{LinearMap, Space};
use katolab::Execution;

const MODES: [(&str, Execution); 2] = [("sequential", Execution::Sequential), ("parallel", Execution::Parallel)];

fn fuzz(c: &mut Criterion) {
    let mut group = c.benchmark_group("fuzz");
    group.sample_size(10);
    let targets = [
        FuzzTarget::Foldo { op: "twistor:4".parse().unwrap(), twist: 1 },
        FuzzTarget::Hodge { n: 5, k: 2, fiber_dim: 2 },
    ];
    for target in targets {
        for (label, execution) in MODES {
            let cfg = FuzzConfig { samples: 20_000, seed: 1, execution, ..FuzzConfig::default() };
            group.bench_with_input(BenchmarkId::new(label, target.to_string()), &cfg, |b, cfg| {
                b.iter(|| run_fuzz(&target, cfg).unwrap())
            });
        }
    }
    group.finish();
}

fn field(c: &mut Criterion) {
    let mut group = c.benchmark_group("field");
    group.sample_size(10);
    let scenario = make_scenario(ScenarioName::ClosedForm, 4, 2, 3, DEFAULT_MODES).unwrap();
    for (label, execution) in MODES {
        let opts = RunOptions { grid: 10, execution, ..RunOptions::default() };
        group.bench_function(BenchmarkId::new(label, "closed-form:4:2"), |b| {
            b.iter(|| run_scenario(&scenario, &opts).unwrap())
        });
    }
    group.finish();
}

fn ellipticity(c: &mut Criterion) {
    let mut group = c.benchmark_group("ellipticity");
    group.sample_size(10);
    // A random symbol has no rotation invariance, so the sphere is sampled.
    let (n, fiber, target) = (4, 3, 5);
    let entries = complex_normal_matrix(&mut master_rng(9), target, n * fiber);
    let domain = Space::tensor(&[Space::dual(n), Space::fiber("E", fiber)]);
    let symbol = LinearMap::new(domain, Space::fiber("F", target), entries).unwrap();
    let op = OperatorSpec::new("random", n, Space::fiber("E", fiber), Space::fiber("F", target), symbol, None, None)
        .unwrap();
    for (label, execution) in MODES {
        group.bench_function(BenchmarkId::new(label, "random:4"), |b| {
            b.iter(|| ellipticity_constant_with(&op, Sampling::default(), execution).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, fuzz, field, ellipticity);
criterion_main!(benches);
