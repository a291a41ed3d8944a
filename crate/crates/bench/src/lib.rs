//! Shared inputs for the pipeline benchmarks.

use nervelab_core::cat2::{oriental2, realize2, sigma_prime, Fin2Cat};
use nervelab_core::theta::parse_object;
use nervelab_core::{Budget, FinCat};

/// A fresh budget big enough that no benchmark trips it.
pub fn budget() -> Budget {
    Budget::new(u64::MAX)
}

/// The 2-categories the benchmarks grind through, with a truncation
/// level each one stays comfortable at.
pub fn bench_cats() -> Vec<(&'static str, Fin2Cat, usize)> {
    vec![
        ("oriental2", oriental2(), 4),
        (
            "theta_2_12",
            realize2(&parse_object("(Δ2; Δ1, Δ2)").unwrap()).unwrap(),
            3,
        ),
        ("suspended_pair", sigma_prime(&FinCat::parallel_pair()), 4),
    ]
}
