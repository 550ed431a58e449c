use criterion::{criterion_group, criterion_main, Criterion};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::hint::black_box;

use mfwin::clifford::{center_split, clifford_algebra, pencil_strata, Part};
use mfwin::homalg::corank2_end_algebra;
use mfwin::windows::{enumerate_exceptional, reduce_to_window};
use mfwin_bench::{corner_pair, diagonal_form, pencil};

fn end_algebra(c: &mut Criterion) {
    let mut g = c.benchmark_group("homalg");
    g.sample_size(10);
    g.bench_function("corank2_end_algebra_cap6", |b| b.iter(|| corank2_end_algebra(black_box(6)).unwrap()));
    g.finish();
}

fn clifford(c: &mut Criterion) {
    for m in [4usize, 6] {
        let alg = clifford_algebra(&diagonal_form(m)).unwrap();
        c.bench_function(&format!("even_center_m{m}"), |b| b.iter(|| center_split(black_box(&alg), Part::Even).unwrap()));
    }
}

fn pencils(c: &mut Criterion) {
    for m in [3usize, 5] {
        let (a, bm) = pencil(m);
        c.bench_function(&format!("pencil_strata_m{m}"), |b| {
            b.iter(|| pencil_strata(black_box(&a), black_box(&bm), &mut ChaCha8Rng::seed_from_u64(0)).unwrap())
        });
    }
}

fn windows(c: &mut Criterion) {
    for n in [3usize, 5] {
        let wt = corner_pair(n as i64);
        c.bench_function(&format!("reduce_to_window_n{n}"), |b| b.iter(|| reduce_to_window(black_box(&wt), n).unwrap()));
    }
    c.bench_function("exceptional_n7_l0", |b| b.iter(|| enumerate_exceptional(black_box(7), 0).unwrap()));
}

criterion_group!(benches, end_algebra, clifford, pencils, windows);
criterion_main!(benches);
