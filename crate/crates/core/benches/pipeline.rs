use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use quartix_core::invariants::dixmier_ohno;
use quartix_core::weierstrass::{hyperflex_form_seeded, DEFAULT_SEED};
use quartix_core::{strata, Field, TernaryQuartic};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_quartics(n: usize) -> Vec<TernaryQuartic> {
    let q = Field::rationals();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    (0..n)
        .map(|_| {
            let mut terms = Vec::new();
            for i in 0..=4u32 {
                for j in 0..=4 - i {
                    terms.push(([i, j, 4 - i - j], q.from_i64(rng.gen_range(-9..=9))));
                }
            }
            TernaryQuartic::from_coefficients(&q, terms).unwrap()
        })
        .collect()
}

fn batch_invariants(curves: &[TernaryQuartic]) -> usize {
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        curves.par_iter().map(|f| dixmier_ohno(f).unwrap().values().len()).sum()
    }
    #[cfg(not(feature = "parallel"))]
    {
        curves.iter().map(|f| dixmier_ohno(f).unwrap().values().len()).sum()
    }
}

/// Runs `f` on rayon's global pool, then on a single worker thread.
fn both<F: Fn() + Sync>(c: &mut Criterion, name: &str, f: F) {
    let mut group = c.benchmark_group(name);
    group.sample_size(10);
    let label = if quartix_core::par::enabled() { "parallel" } else { "sequential" };
    group.bench_function(label, |b| b.iter(&f));
    #[cfg(feature = "parallel")]
    {
        let one = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
        group.bench_function("sequential", |b| one.install(|| b.iter(&f)));
    }
    group.finish();
}

fn pipeline(c: &mut Criterion) {
    let curves = random_quartics(16);
    both(c, "invariants_x16", || {
        black_box(batch_invariants(black_box(&curves)));
    });
    let psi = strata::builtin_model("Psi").unwrap();
    both(c, "hyperflexes_psi", || {
        black_box(hyperflex_form_seeded(black_box(&psi), DEFAULT_SEED).unwrap());
    });
}

criterion_group!(benches, pipeline);
criterion_main!(benches);
