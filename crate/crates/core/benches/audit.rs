use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use relconvex::audit::{audit, AuditConfig};
use relconvex::ball::ball;
use relconvex::free::{cayley_order, CayleyOrderConfig};
use relconvex::par::Parallelism;
use relconvex::Alphabet;

fn audit_modes(c: &mut Criterion) {
    let al = Alphabet::from_names(&["a", "b"]).unwrap();
    let order = cayley_order(&CayleyOrderConfig::new(al));
    let mut group = c.benchmark_group("cayley audit");
    group.sample_size(10);
    for radius in [4, 5] {
        let elems = ball(order.group().as_ref(), radius);
        for mode in [Parallelism::Sequential, Parallelism::Parallel] {
            let config = AuditConfig::default().with_samples(5_000).with_parallelism(mode);
            group.bench_with_input(BenchmarkId::new(format!("{mode:?}"), radius), &elems, |b, elems| {
                b.iter(|| audit(&order, elems, &config))
            });
        }
    }
    group.finish();
}

criterion_group!(benches, audit_modes);
criterion_main!(benches);
