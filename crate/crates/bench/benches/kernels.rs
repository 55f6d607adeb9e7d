use criterion::{black_box, criterion_group, criterion_main, Criterion};
use simplexlab::fpdigits::verify_lemma3;
use simplexlab::survey::enumerate_empty;
use simplexlab::{canonical_form, is_empty, is_empty_general, width, width_general, CyclicSimplexSpec, GeneralSimplex};

fn emptiness(c: &mut Criterion) {
    let empty = CyclicSimplexSpec::new(101, [1, 36, 84, 87]).unwrap();
    let full = CyclicSimplexSpec::new(101, [1, 1, 1, 1]).unwrap();
    c.bench_function("is_empty/101 empty", |b| b.iter(|| is_empty(black_box(&empty))));
    c.bench_function("is_empty/101 early exit", |b| b.iter(|| is_empty(black_box(&full))));
    let lattice = empty.lattice();
    c.bench_function("is_empty_general/101", |b| b.iter(|| is_empty_general(black_box(&lattice))));
}

fn widths(c: &mut Criterion) {
    let spec = CyclicSimplexSpec::new(101, [1, 36, 84, 87]).unwrap();
    c.bench_function("width/101", |b| b.iter(|| width(black_box(&spec))));
    let s = GeneralSimplex::new([[0, 0, 0, 0], [1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [6, 14, 17, 101]]).unwrap();
    c.bench_function("width_general/101", |b| b.iter(|| width_general(black_box(&s))));
}

fn canonical(c: &mut Criterion) {
    let spec = CyclicSimplexSpec::new(997, [1, 36, 84, 87]).unwrap();
    c.bench_function("canonical_form/997", |b| b.iter(|| canonical_form(black_box(&spec))));
}

fn scans(c: &mut Criterion) {
    let mut g = c.benchmark_group("scans");
    g.sample_size(10);
    g.bench_function("lemma3/p=7", |b| b.iter(|| verify_lemma3(black_box(7))));
    g.bench_function("enumerate_empty/N=41", |b| b.iter(|| enumerate_empty(black_box(41))));
    g.finish();
}

criterion_group!(benches, emptiness, widths, canonical, scans);
criterion_main!(benches);
