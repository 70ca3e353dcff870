use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use rug::Integer;

use crownvol::ngon::{ngon_volume_quadrature, QuadratureSpec};
use crownvol::{
    annulus_volume, enumerate_basis, eval_constant, recognize_value, BasisFlags, Constant, GradedMonomial, Rational,
    SymbolicValue,
};
use crownvol_bench::target;

fn quadrature(c: &mut Criterion) {
    let mut group = c.benchmark_group("ngon_quadrature");
    group.sample_size(10);
    let spec = QuadratureSpec::default();
    for n in [6, 8, 10] {
        group.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, &n| {
            b.iter(|| ngon_volume_quadrature(black_box(n), &spec).unwrap())
        });
    }
    group.finish();
}

fn annulus(c: &mut Criterion) {
    let mut group = c.benchmark_group("annulus_volume");
    for (a1, a2) in [(1, 4), (1, 12), (3, 4)] {
        group.bench_function(format!("{a1},{a2}"), |b| b.iter(|| annulus_volume(black_box(a1), black_box(a2)).unwrap()));
    }
    group.finish();
}

fn recognize(c: &mut Criterion) {
    let value = SymbolicValue::term(GradedMonomial::zeta(3), Rational::new(7, 4))
        .ring_add(&SymbolicValue::term(GradedMonomial::pi_pow(2).mul(&GradedMonomial::log2()), Rational::new(1, 2)));
    let x = target(&value, 60);
    let basis = enumerate_basis(3, &BasisFlags::default());
    let height = Integer::from(1_000_000_000u32);
    c.bench_function("recognize_degree_3", |b| b.iter(|| recognize_value(black_box(&x), &basis, &height).unwrap()));
}

fn constants(c: &mut Criterion) {
    let mut group = c.benchmark_group("eval_constant");
    for (name, k) in [("zeta3", Constant::Zeta(3)), ("beta2", Constant::Beta(2)), ("log2", Constant::Log2)] {
        for bits in [256, 1024] {
            group.bench_function(format!("{name}/{bits}"), |b| b.iter(|| eval_constant(k, black_box(bits)).unwrap()));
        }
    }
    group.finish();
}

criterion_group!(benches, quadrature, annulus, recognize, constants);
criterion_main!(benches);
