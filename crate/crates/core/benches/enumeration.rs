use std::path::Path;

use cartan::pairs::{classify_pair, exhaustive_normalisers, Strategy};
use cartan::{instance, Config, Exec};
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

fn load(name: &str) -> cartan::pairs::StructuredAlgebra {
    let p = Path::new(env!("CARGO_MANIFEST_DIR")).join(format!("../../fixtures/{name}.json"));
    instance::load(&p).unwrap().algebra()
}

fn modes() -> [(&'static str, Config); 2] {
    [
        ("sequential", Config { exec: Exec::Sequential, ..Config::default() }),
        ("parallel", Config { exec: Exec::Parallel, ..Config::default() }),
    ]
}

fn normalisers(c: &mut Criterion) {
    let mut g = c.benchmark_group("normaliser scan");
    g.sample_size(10);
    for (name, strategy) in [
        ("m3_f2", Strategy::Scan),
        ("group_ring_f3_z3_trivial", Strategy::Scan),
        ("m3_f3", Strategy::Linear),
    ] {
        let alg = load(name);
        for (mode, cfg) in modes() {
            g.bench_with_input(BenchmarkId::new(mode, name), &alg, |b, a| {
                b.iter(|| exhaustive_normalisers(a, false, strategy, &cfg).unwrap())
            });
        }
    }
    g.finish();
}

fn classification(c: &mut Criterion) {
    let mut g = c.benchmark_group("classify");
    g.sample_size(10);
    for name in ["m3_f3", "r2_plus_z2"] {
        let alg = load(name);
        for (mode, cfg) in modes() {
            g.bench_with_input(BenchmarkId::new(mode, name), &alg, |b, a| b.iter(|| classify_pair(a, &cfg).unwrap()));
        }
    }
    g.finish();
}

criterion_group!(benches, normalisers, classification);
criterion_main!(benches);
