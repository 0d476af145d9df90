use criterion::{criterion_group, criterion_main, Criterion};
use g2v_core::graphs::{census, enumerate_graphs};
use g2v_core::modular::{run_check, CheckConfig, CheckKind};
use g2v_core::ward::{build_operator, verify_ward};

fn bench_enumeration(c: &mut Criterion) {
    c.bench_function("enumerate_graphs_n6", |b| {
        b.iter(|| enumerate_graphs(6).unwrap().len())
    });
    c.bench_function("census_n8", |b| b.iter(|| census(8).unwrap()));
}

fn bench_operator(c: &mut Criterion) {
    c.bench_function("build_operator_n4", |b| b.iter(|| build_operator(4).unwrap()));
    c.bench_function("verify_ward_n4", |b| b.iter(|| verify_ward(4).unwrap()));
}

fn bench_numeric(c: &mut Criterion) {
    c.bench_function("psi_invariance_10_trials", |b| {
        b.iter(|| {
            let mut cfg = CheckConfig::for_kind(CheckKind::PsiInvariance);
            cfg.trials = 10;
            run_check(CheckKind::PsiInvariance, &cfg)
        })
    });
}

criterion_group!(benches, bench_enumeration, bench_operator, bench_numeric);
criterion_main!(benches);
