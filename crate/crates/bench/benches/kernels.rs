use std::hint::black_box;
use std::sync::Arc;

use cosetcx_bench::cosetcx;
use cosetcx::algebra::{FieldSpec, TruncatedRing};
use cosetcx::geometry::Limits;
use cosetcx::matgroup::{enumerate_group, ElParams, TypeSet};
use cosetcx::spectra::{eig_sym, link_spectrum, DenseMatrix, EigenMethod, EigenOptions};
use criterion::{criterion_group, criterion_main, Criterion};

fn ring_mul(c: &mut Criterion) {
    let ring = TruncatedRing::new(Arc::new(FieldSpec::prime(3).unwrap()), 4).unwrap();
    let a = ring.element(&[1, 2, 0, 1]).unwrap();
    let b = ring.element(&[2, 1, 1, 2]).unwrap();
    c.bench_function("ring_mul_f3_s4", |bch| bch.iter(|| ring.mul(black_box(&a), black_box(&b))));
}

fn group_enumeration(c: &mut Criterion) {
    let mut g = c.benchmark_group("enumerate");
    g.sample_size(10);
    for (p, s) in [(2, 1), (2, 2)] {
        let params = ElParams::from_prime(p, 2, s).unwrap();
        let gens = params.k_generators(TypeSet::EMPTY);
        g.bench_function(format!("el3_f{p}_s{s}"), |b| b.iter(|| enumerate_group(params.space(), black_box(&gens), 1 << 24).unwrap().len()));
    }
    g.finish();
}

fn eigen(c: &mut Criterion) {
    let n = 64;
    let rows: Vec<Vec<f64>> = (0..n).map(|i| (0..n).map(|j| (((i * 7 + j * 7 + i * j) % 11) as f64) - 5.0).collect()).collect();
    let m = DenseMatrix::from_rows(&rows);
    let mut g = c.benchmark_group("eig_sym_64");
    for method in [EigenMethod::Jacobi, EigenMethod::Tridiagonal] {
        let opts = EigenOptions { method, ..EigenOptions::default() };
        g.bench_function(format!("{method:?}"), |b| b.iter(|| eig_sym(black_box(&m), &opts).unwrap()));
    }
    g.finish();
}

fn links(c: &mut Criterion) {
    let mut g = c.benchmark_group("link_spectrum");
    g.sample_size(10);
    for p in [2, 3] {
        let params = ElParams::from_prime(p, 2, 3).unwrap();
        g.bench_function(format!("q{p}_s3"), |b| b.iter(|| link_spectrum(&params, 0, 1, Limits::default(), &EigenOptions::default(), 1e-9).unwrap().lambda2));
    }
    g.finish();
}

criterion_group!(benches, ring_mul, group_enumeration, eigen, links);
criterion_main!(benches);
