use criterion::{black_box, criterion_group, criterion_main, Criterion};
use lamlab_bench::{
    church_predecessor, e_predecessor, fixed_point_church, fixed_point_e, storage_input,
    successor_chain,
};
use lamlab_core::reduce::{head_normal_form, normal_form};
use lamlab_core::zoo::{church, e_numeral};
use lamlab_core::DEFAULT_FUEL;

fn normalization(c: &mut Criterion) {
    let chain = successor_chain(20);
    c.bench_function("normalize S^20 0", |b| {
        b.iter(|| normal_form(black_box(&chain), DEFAULT_FUEL))
    });
    let pred = church_predecessor(20);
    c.bench_function("normalize P 20", |b| {
        b.iter(|| normal_form(black_box(&pred), DEFAULT_FUEL))
    });
    let pe = e_predecessor(10);
    c.bench_function("normalize Pe e10", |b| {
        b.iter(|| normal_form(black_box(&pe), DEFAULT_FUEL))
    });
}

fn storage(c: &mut Criterion) {
    let on = storage_input("O_N", church(10));
    c.bench_function("head O_N 10 f", |b| {
        b.iter(|| head_normal_form(black_box(&on), DEFAULT_FUEL))
    });
    let oe = storage_input("Oe", e_numeral(10));
    c.bench_function("head Oe e10 f", |b| {
        b.iter(|| head_normal_form(black_box(&oe), DEFAULT_FUEL))
    });
    let fp = fixed_point_church(8);
    c.bench_function("head fixed-point church 8", |b| {
        b.iter(|| head_normal_form(black_box(&fp), 1_000_000))
    });
    let fpe = fixed_point_e(4);
    c.bench_function("head fixed-point e 4", |b| {
        b.iter(|| head_normal_form(black_box(&fpe), 1_000_000))
    });
}

criterion_group!(benches, normalization, storage);
criterion_main!(benches);
