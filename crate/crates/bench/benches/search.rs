use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use mcg_core::{
    derive_all, dicyclic_exists, enumerate_meta, lift_to_split, validate_meta_literal, validate_meta_oracle,
    ClassifyOptions, CyclicDataSet, MetacyclicDataSet, MetacyclicGroup, SearchBounds,
};

const DIC10: &str = "((2·20,10,-1),0;[(1,4),(0,1),4],[(1,4),(9,20),4],[(0,1),(1,20),20])";
const M4844: &str = "((4·8,4,-1),0;[(1,8),(0,1),8],[(7,8),(7,8),8],[(0,1),(1,8),8])";

fn validators(c: &mut Criterion) {
    let d = MetacyclicDataSet::parse(M4844).unwrap();
    c.bench_function("validate literal M(4,8,4,-1)", |b| {
        b.iter(|| validate_meta_literal(black_box(&d), SearchBounds::default()))
    });
    c.bench_function("validate oracle M(4,8,4,-1)", |b| b.iter(|| validate_meta_oracle(black_box(&d))));
}

fn derivation(c: &mut Criterion) {
    let d = MetacyclicDataSet::parse(DIC10).unwrap();
    let h = MetacyclicGroup::new(d.params);
    c.bench_function("derive Dic10", |b| b.iter(|| derive_all(black_box(&d), &h).unwrap()));
    c.bench_function("lift Dic10", |b| b.iter(|| lift_to_split(black_box(&d)).unwrap()));
    let df = CyclicDataSet::parse("(20,0;(1,20),(19,20),((1,2),2))").unwrap();
    c.bench_function("dicyclic (20,0;...)", |b| b.iter(|| dicyclic_exists(black_box(&df)).unwrap()));
}

fn classification(c: &mut Criterion) {
    let mut g = c.benchmark_group("classify");
    g.sample_size(10);
    let opts = ClassifyOptions { nonsplit: true, ..ClassifyOptions::default() };
    g.bench_function("genus 10 non-split", |b| b.iter(|| enumerate_meta(black_box(10), &opts).unwrap()));
    g.finish();
}

criterion_group!(benches, validators, derivation, classification);
criterion_main!(benches);
