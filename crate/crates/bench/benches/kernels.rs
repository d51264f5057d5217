use criterion::{criterion_group, criterion_main, Criterion};
use std::hint::black_box;

use dualgraph::{
    chabauty_bound, clifford_certificate, delta, enumerate_effective_twists, graph_divisor_rank, q_reduce,
    AugmentedCurve, ChabautyInputs, GraphDivisor, LocalArithmetic, Multigraph,
};

fn k4() -> Multigraph {
    Multigraph::from_indices(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap()
}

fn reduction(c: &mut Criterion) {
    let g = k4();
    let d = GraphDivisor::from_coefficients(vec![-7, 5, 4, 1]);
    c.bench_function("q_reduce K4", |b| b.iter(|| q_reduce(&g, black_box(&d), 0).unwrap()));
}

fn rank(c: &mut Criterion) {
    let g = k4();
    let d = GraphDivisor::from_coefficients(vec![2, 2, 1, 1]);
    c.bench_function("rank K4 degree 6", |b| b.iter(|| graph_divisor_rank(&g, black_box(&d)).unwrap()));
}

fn twists(c: &mut Criterion) {
    let g = k4();
    let d = GraphDivisor::from_coefficients(vec![6, 0, 0, 0]);
    c.bench_function("effective twists K4", |b| b.iter(|| enumerate_effective_twists(&g, black_box(&d)).unwrap()));
}

fn certificate(c: &mut Criterion) {
    let g = Multigraph::from_indices(3, &[(0, 1), (1, 2), (2, 0), (0, 1)]).unwrap();
    let ac = AugmentedCurve::new(g, vec![1, 0, 2]).unwrap();
    let d = GraphDivisor::from_coefficients(vec![1, 1, 1]);
    c.bench_function("clifford certificate", |b| b.iter(|| clifford_certificate(&ac, black_box(&d)).unwrap()));
}

fn arithmetic(c: &mut Criterion) {
    let local = LocalArithmetic::new(3, 2).unwrap();
    c.bench_function("delta n <= 200", |b| b.iter(|| (0..=200u64).map(|n| delta(local, black_box(n))).sum::<u64>()));
    let inputs = ChabautyInputs::new(3, 1, LocalArithmetic::new(5, 1).unwrap(), 5, Some(vec![1, 1])).unwrap();
    c.bench_function("chabauty bound", |b| b.iter(|| chabauty_bound(black_box(&inputs)).unwrap()));
}

criterion_group!(benches, reduction, rank, twists, certificate, arithmetic);
criterion_main!(benches);
