use criterion::{black_box, criterion_group, criterion_main, Criterion};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use cmcheck::algebra::ZPoly;
use cmcheck::classpoly::hilbert_class_poly;
use cmcheck::cmtest::survey_ratio;
use cmcheck::gl2galois::{generate_subgroup, GL2Elem};
use cmcheck::{CurveNF, NumberField};

fn point_counting(c: &mut Criterion) {
    let field = NumberField::new(ZPoly::from_i64s(&[-51, -22, -33, -65, -12, 1])).unwrap();
    let curve = CurveNF::from_j(&field.theta());
    let primes: Vec<_> = [10007u64, 65537, 1_000_003]
        .iter()
        .flat_map(|&p| field.split_prime(p).unwrap())
        .filter(|pr| pr.d == 1)
        .collect();
    c.bench_function("frobenius_trace_deg1", |b| {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        b.iter(|| {
            for pr in &primes {
                if let Ok(red) = curve.reduce_at_prime(pr) {
                    black_box(red.frobenius_data(&mut rng));
                }
            }
        })
    });
}

fn class_polys(c: &mut Criterion) {
    c.bench_function("hilbert_d_minus_356", |b| b.iter(|| hilbert_class_poly(black_box(-356), None).unwrap()));
}

fn survey(c: &mut Criterion) {
    let field = NumberField::new(ZPoly::from_i64s(&[1, 0, 1])).unwrap();
    let curve = CurveNF::new(field.from_int(1), field.from_int(0)).unwrap();
    let mut g = c.benchmark_group("survey");
    g.sample_size(10);
    g.bench_function("gaussian_1e4", |b| b.iter(|| survey_ratio(&curve, black_box(10_000))));
    g.finish();
}

fn subgroups(c: &mut Criterion) {
    let gens = [GL2Elem::new(7, [1, 1, 0, 1]).unwrap(), GL2Elem::new(7, [0, 1, 6, 0]).unwrap()];
    c.bench_function("sl2_f7_closure", |b| b.iter(|| generate_subgroup(7, black_box(&gens)).unwrap()));
}

criterion_group!(benches, point_counting, class_polys, survey, subgroups);
criterion_main!(benches);
