use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use num_bigint::BigUint;
use regreal::digraph::{build_counting_digraph, build_lrs_digraph};
use regreal::filters::Filter;
use regreal::fwd::{build_equality_automaton, chp_to_pb, lrs_to_automata_pair};
use regreal::lattice::smith_normal_form;
use regreal::monoid::phi_system;
use regreal::shadow::decide;
use regreal_bench::{alternating_lrs, dense_matrix, fibonacci_chamber, hash_counter};

fn forward(c: &mut Criterion) {
    let mut g = c.benchmark_group("forward");
    for d in [2, 3, 4] {
        let s = alternating_lrs(d);
        g.bench_with_input(BenchmarkId::new("walk_weight_sum", d), &s, |b, s| {
            let dg = build_lrs_digraph(s).unwrap();
            b.iter(|| dg.walk_weight_sum(black_box(40)))
        });
        g.bench_with_input(BenchmarkId::new("automata_pair", d), &s, |b, s| {
            b.iter(|| lrs_to_automata_pair(s).unwrap())
        });
    }
    g.bench_function("counting_digraph", |b| {
        b.iter(|| build_counting_digraph(&BigUint::from(1_000_003u32), 24).unwrap())
    });
    let pair = lrs_to_automata_pair(&alternating_lrs(2)).unwrap();
    g.bench_function("equality_automaton", |b| {
        b.iter(|| build_equality_automaton(&pair))
    });
    g.bench_function("chp_to_pb", |b| {
        b.iter(|| chp_to_pb(&fibonacci_chamber(8)).unwrap())
    });
    g.finish();
}

fn reverse(c: &mut Criterion) {
    let mut g = c.benchmark_group("reverse");
    for k in [2, 3, 4] {
        let a = hash_counter(k);
        g.bench_with_input(BenchmarkId::new("phi_system", k), &a, |b, a| {
            b.iter(|| phi_system(a).unwrap())
        });
        g.bench_with_input(BenchmarkId::new("decide_sur", k), &a, |b, a| {
            b.iter(|| decide(a, Filter::Surjective).unwrap())
        });
        g.bench_with_input(BenchmarkId::new("decide_inj", k), &a, |b, a| {
            b.iter(|| decide(a, Filter::Injective).unwrap())
        });
    }
    g.finish();
}

fn lattice(c: &mut Criterion) {
    let mut g = c.benchmark_group("lattice");
    for n in [3, 5, 8] {
        let m = dense_matrix(n);
        g.bench_with_input(BenchmarkId::new("smith", n), &m, |b, m| {
            b.iter(|| smith_normal_form(m))
        });
    }
    g.finish();
}

criterion_group!(benches, forward, reverse, lattice);
criterion_main!(benches);
