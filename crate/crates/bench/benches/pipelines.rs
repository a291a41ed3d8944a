use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use nervelab_bench::{bench_cats, budget};
use nervelab_core::adc::{homotopy_h, oriental_complex, verify_homotopy};
use nervelab_core::homology::{betti, Completeness};
use nervelab_core::nerve::{diagonal, multinerve2, normalized_chains, street_nerve2, total_complex};

fn homotopy(c: &mut Criterion) {
    let mut g = c.benchmark_group("homotopy");
    for n in [4u32, 6, 8] {
        let k = oriental_complex(n);
        let h = homotopy_h(n);
        g.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, _| {
            b.iter(|| verify_homotopy(&k, &h).unwrap().ok)
        });
    }
    g.finish();
}

fn street_nerve(c: &mut Criterion) {
    let mut g = c.benchmark_group("street_nerve");
    for (name, cat, dmax) in bench_cats() {
        g.bench_function(BenchmarkId::new(name, dmax), |b| {
            b.iter(|| street_nerve2(&cat, dmax, &mut budget()).unwrap().card(dmax))
        });
    }
    g.finish();
}

fn nerve_comparison(c: &mut Criterion) {
    let mut g = c.benchmark_group("compare_pipeline");
    g.sample_size(10);
    for (name, cat, dmax) in bench_cats() {
        g.bench_function(BenchmarkId::new(name, dmax), |b| {
            b.iter(|| {
                let street = street_nerve2(&cat, dmax, &mut budget()).unwrap();
                let hs = betti(
                    &normalized_chains(&street, dmax - 1).unwrap(),
                    dmax - 1,
                    Completeness::Truncated,
                )
                .unwrap()
                .betti;
                let multi = multinerve2(&cat, dmax, dmax, &mut budget()).unwrap();
                let hd = betti(
                    &normalized_chains(&diagonal(&multi).unwrap(), dmax - 1).unwrap(),
                    dmax - 1,
                    Completeness::Truncated,
                )
                .unwrap()
                .betti;
                let ht = betti(
                    &total_complex(&multi, dmax - 1).unwrap(),
                    dmax - 1,
                    Completeness::Truncated,
                )
                .unwrap()
                .betti;
                assert!(hs == hd && hs == ht);
                hs
            })
        });
    }
    g.finish();
}

fn smith_betti(c: &mut Criterion) {
    let mut g = c.benchmark_group("oriental_betti");
    for n in [5u32, 7] {
        let k = oriental_complex(n);
        let ch = nervelab_core::ChainComplexZ::from_directed(&k);
        g.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, &n| {
            b.iter(|| {
                betti(&ch, n as usize, Completeness::Complete)
                    .unwrap()
                    .betti
            })
        });
    }
    g.finish();
}

criterion_group!(benches, homotopy, street_nerve, nerve_comparison, smith_betti);
criterion_main!(benches);
