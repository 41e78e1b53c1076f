use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use fixedbitset::FixedBitSet;

use cvd_core::supermodular::{
    maximize_supermodular, FnOracle, MaximizerConfig, Method, MethodChoice,
};

/// Nonnegative pairwise bonuses minus a modular cost: supermodular.
fn pairwise() -> impl FnMut(&FixedBitSet) -> i64 {
    |s: &FixedBitSet| {
        let items: Vec<usize> = s.ones().collect();
        let mut v = 0i64;
        for (a, &i) in items.iter().enumerate() {
            v -= (3 * i % 7) as i64 + 2;
            for &j in &items[a + 1..] {
                v += ((i * 5 + j * 3) % 4) as i64;
            }
        }
        v
    }
}

fn bench_methods(c: &mut Criterion) {
    let mut group = c.benchmark_group("maximize_supermodular");
    group.sample_size(10);
    for k in [8, 12, 16] {
        for method in [Method::Exhaustive, Method::MinNormPoint] {
            let cfg = MaximizerConfig {
                method: MethodChoice::Force(method),
                fallback_cap: 0,
                ..Default::default()
            };
            group.bench_with_input(BenchmarkId::new(format!("{method:?}"), k), &k, |b, &k| {
                b.iter(|| {
                    let mut f = FnOracle::new(k, pairwise());
                    maximize_supermodular(black_box(&mut f), &cfg).unwrap()
                })
            });
        }
    }
    group.finish();
}

criterion_group!(benches, bench_methods);
criterion_main!(benches);
