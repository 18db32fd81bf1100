use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BatchSize, Criterion};
use greedypack::audit::{coquasirandomness_error, quasirandomness_error, AuditPolicy};
use greedypack::engine::matching::maximum_matching;
use greedypack::engine::{packing_process, random_embedding, split_bulk_reservoir, RunConfig};
use greedypack::generators::{gnp, random_degenerate, random_tree};
use greedypack::rng::{stream_rng, uniform_index};
use greedypack::{degeneracy_order, prepare_guest_family, PrepareOptions};

fn embedding(c: &mut Criterion) {
    let n = 500;
    let host = gnp(n, 0.5, &mut stream_rng(1, 0)).unwrap();
    let opts = PrepareOptions { delta: 0.05, auto_shrink: true };
    let tree = prepare_guest_family(&[random_tree(n, &mut stream_rng(2, 0))], n, 1, &opts).unwrap();
    let degen = prepare_guest_family(&[random_degenerate(n, 2, 40, &mut stream_rng(3, 0)).unwrap()], n, 2, &opts).unwrap();
    let mut seed = 0;
    c.bench_function("random_embedding/tree500_gnp500", |b| {
        b.iter(|| {
            seed += 1;
            black_box(random_embedding(&tree.guests[0], &host, &mut stream_rng(seed, 1)).is_ok())
        })
    });
    c.bench_function("random_embedding/degen2_500_gnp500", |b| {
        b.iter(|| {
            seed += 1;
            black_box(random_embedding(&degen.guests[0], &host, &mut stream_rng(seed, 1)).is_ok())
        })
    });
}

fn degeneracy(c: &mut Criterion) {
    let g = random_degenerate(5000, 3, 60, &mut stream_rng(4, 0)).unwrap();
    c.bench_function("degeneracy_order/degen3_5000", |b| b.iter(|| black_box(degeneracy_order(&g).degeneracy())));
}

fn audit(c: &mut Criterion) {
    let h = gnp(300, 0.5, &mut stream_rng(5, 0)).unwrap();
    let split = split_bulk_reservoir(&h, 0.2, &mut stream_rng(5, 1)).unwrap();
    let pairs = AuditPolicy::exhaustive(2);
    let sampled = AuditPolicy::for_degeneracy(2);
    let mut group = c.benchmark_group("audit");
    group.sample_size(10);
    group.bench_function("quasi_pairs_gnp300", |b| b.iter(|| black_box(quasirandomness_error(&h, &pairs).unwrap().deviation)));
    group.bench_function("coquasi_L7_gnp300", |b| {
        b.iter(|| black_box(coquasirandomness_error(&split.bulk, &split.reservoir, &sampled).unwrap().deviation))
    });
    group.finish();
}

fn matching(c: &mut Criterion) {
    let mut rng = stream_rng(6, 0);
    let (left, right) = (400, 400);
    let adj: Vec<Vec<u32>> = (0..left)
        .map(|_| {
            let mut row: Vec<u32> = (0..8).map(|_| uniform_index(&mut rng, right) as u32).collect();
            row.sort_unstable();
            row.dedup();
            row
        })
        .collect();
    c.bench_function("hopcroft_karp/400x400_deg8", |b| b.iter(|| black_box(maximum_matching(&adj, right).size)));
}

fn process(c: &mut Criterion) {
    let n = 200;
    let host = gnp(n, 0.6, &mut stream_rng(7, 0)).unwrap();
    let mut rng = stream_rng(8, 0);
    let mut guests: Vec<_> = (0..6).map(|_| random_degenerate(110, 2, 20, &mut rng).unwrap()).collect();
    guests.extend((0..6).map(|_| random_tree(140, &mut rng)));
    let fam = prepare_guest_family(&guests, n, 2, &PrepareOptions { delta: 0.04, auto_shrink: true }).unwrap();
    let mut seed = 0;
    let mut group = c.benchmark_group("packing_process");
    group.sample_size(10);
    group.bench_function("12_guests_gnp200", |b| {
        b.iter_batched(
            || {
                seed += 1;
                RunConfig::new(0.25, fam.effective_delta, seed)
            },
            |cfg| black_box(packing_process(&fam.guests, &host, &cfg).unwrap().uncovered),
            BatchSize::SmallInput,
        )
    });
    group.finish();
}

criterion_group!(benches, embedding, degeneracy, audit, matching, process);
criterion_main!(benches);
