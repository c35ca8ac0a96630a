use std::hint::black_box;

use abshift::generic::{build_gamma_on, DEFAULT_ENUM_BUDGET};
use abshift::measures::{parry_measure, weak_star_distance, MassTable};
use abshift::{Diagram, Params};
use criterion::{criterion_group, criterion_main, Criterion};

fn diagram(c: &mut Criterion) {
    let exact = Params::rational(1, 2, 5, 2).unwrap();
    let float = Params::float(0.5, 2.5, 1e-12).unwrap();
    c.bench_function("diagram/exact/14", |b| b.iter(|| Diagram::build(black_box(&exact), 14).unwrap()));
    c.bench_function("diagram/float/14", |b| b.iter(|| Diagram::build(black_box(&float), 14).unwrap()));
    let d = Diagram::build(&exact, 18).unwrap();
    c.bench_function("language_count/18", |b| b.iter(|| d.language_count(black_box(18)).unwrap()));
}

fn measures(c: &mut Criterion) {
    let d = Diagram::build(&Params::rational(1, 2, 5, 2).unwrap(), 12).unwrap();
    let base = parry_measure(&[0, 1, 2], &d).unwrap();
    let pair = parry_measure(&[1, 2], &d).unwrap();
    c.bench_function("weak_star/M8", |b| b.iter(|| weak_star_distance(&base, &pair, black_box(8))));
    let table = MassTable::new(&base, 4);
    let word: Vec<u8> = (0..2000).map(|i| if i % 3 == 0 { 2 } else { 3 }).collect();
    c.bench_function("mass_table/word2000/M4", |b| b.iter(|| table.distance_to_word(black_box(&word))));
    c.bench_function("gamma/base/l14", |b| {
        b.iter(|| build_gamma_on(&base, &[0, 1, 2], black_box(14), 0.1, 2, &d, DEFAULT_ENUM_BUDGET).unwrap())
    });
}

criterion_group!(benches, diagram, measures);
criterion_main!(benches);
