use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use operad_core::monoid::sample_qm;
use operad_core::{
    buchberger, builtin, count_normal_forms, enumerate_trees, evaluate_tree,
    ideal_dimension_oracle, qm_mul, resolve_order, GeneratorAssignment, Qm, QmElement,
};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn monoid(c: &mut Criterion) {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let pairs: Vec<(QmElement, QmElement)> = (0..256)
        .map(|_| (sample_qm(&mut rng, 1000), sample_qm(&mut rng, 1000)))
        .collect();
    c.bench_function("qm_mul", |b| {
        b.iter(|| {
            for (x, y) in &pairs {
                black_box(qm_mul(x, y));
            }
        })
    });
}

fn evaluation(c: &mut Criterion) {
    let pois = builtin("pois").unwrap();
    let psi = GeneratorAssignment::new()
        .with(&pois.generators[0], vec![QmElement::x(); 2])
        .unwrap()
        .with(&pois.generators[1], vec![QmElement::y(); 2])
        .unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let trees = enumerate_trees(&pois.generators, 6).unwrap();
    let sample: Vec<_> = trees.choose_multiple(&mut rng, 256).cloned().collect();
    let qm = Qm::default();
    c.bench_function("evaluate_tree arity 6", |b| {
        b.iter(|| {
            for t in &sample {
                black_box(evaluate_tree(&qm, t, &psi).unwrap());
            }
        })
    });
}

fn groebner(c: &mut Criterion) {
    let pois = builtin("pois").unwrap();
    let order = resolve_order("poisson-qm", &pois.generators).unwrap();
    c.bench_function("buchberger pois arity 4", |b| {
        b.iter(|| black_box(buchberger(&pois.shuffle_relations, &order, 4).unwrap()))
    });
    let report = buchberger(&pois.shuffle_relations, &order, 4).unwrap();
    let mut group = c.benchmark_group("dimensions");
    group.sample_size(10);
    for n in [4, 5] {
        group.bench_with_input(BenchmarkId::new("count_normal_forms", n), &n, |b, &n| {
            b.iter(|| {
                black_box(count_normal_forms(&report.leading_terms, &pois.generators, n).unwrap())
            })
        });
        group.bench_with_input(BenchmarkId::new("oracle", n), &n, |b, &n| {
            b.iter(|| {
                black_box(
                    ideal_dimension_oracle(&pois.shuffle_relations, &pois.generators, n).unwrap(),
                )
            })
        });
    }
    group.finish();
}

criterion_group!(benches, monoid, evaluation, groebner);
criterion_main!(benches);
