use criterion::{criterion_group, criterion_main, BatchSize, Criterion};
use std::hint::black_box;

use ppcalc::corpus::small_quotients;
use ppcalc::elim::qe_search;
use ppcalc::pp::family::{formula_family, FamilyConfig};
use ppcalc::suite::five_sorts;
use ppcalc::{dual, Side, Tensor};
use ppcalc_bench::{family, modules, right, ring};

fn evaluation(c: &mut Criterion) {
    let r = ring("f2e");
    let fam = family(&r);
    let ms = modules(&r, 16);
    c.bench_function("evaluate family on f2e modules", |b| {
        b.iter(|| {
            for phi in fam.iter().filter(|f| f.free_sorts().len() == 1) {
                for m in &ms {
                    black_box(phi.evaluate(m).unwrap());
                }
            }
        })
    });
    let phi = right(&r, "E y1, y2 . x = y1*e + y2 ; y2*e = 0");
    let psi = right(&r, "x*e = 0");
    c.bench_function("implies f2e", |b| b.iter(|| black_box(phi.implies(&psi).unwrap().holds())));
    c.bench_function("dual twice f2e", |b| b.iter(|| black_box(dual(&dual(&phi)))));
}

fn families(c: &mut Criterion) {
    let r = ring("z4");
    let corpus = small_quotients(&r, Side::Right, 16).unwrap();
    let mut g = c.benchmark_group("families");
    g.sample_size(10);
    g.bench_function("z4 one and two variables", |b| {
        b.iter_batched(
            || corpus.clone(),
            |corpus| black_box(formula_family(&r, Side::Right, &FamilyConfig::default(), corpus).unwrap().len()),
            BatchSize::LargeInput,
        )
    });
    g.finish();
}

fn tensors(c: &mut Criterion) {
    let r = ring("z4");
    let rights = modules(&r, 16);
    let lefts = ppcalc::corpus::modules_up_to(&r, Side::Left, 16).unwrap();
    c.bench_function("tensor products over z4", |b| {
        b.iter(|| {
            for m in &rights {
                for n in &lefts {
                    black_box(Tensor::new(m, n).unwrap().order());
                }
            }
        })
    });
}

fn searches(c: &mut Criterion) {
    let z4 = ring("z4");
    let z6 = ring("z6");
    let div4 = right(&z4, "E y . x = y*2");
    let div6 = right(&z6, "E y . x = y*2");
    let mut g = c.benchmark_group("qe");
    g.sample_size(20);
    g.bench_function("z4 divisibility, provably none", |b| b.iter(|| black_box(qe_search(&div4, 3).unwrap().found())));
    g.bench_function("z6 divisibility", |b| b.iter(|| black_box(qe_search(&div6, 3).unwrap().found())));
    g.finish();
    c.bench_function("five sorts over F2[e]", |b| b.iter(|| black_box(five_sorts(2).unwrap().rows.len())));
}

criterion_group!(benches, evaluation, families, tensors, searches);
criterion_main!(benches);
