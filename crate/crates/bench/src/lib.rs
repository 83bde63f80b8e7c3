//! Deterministic inputs shared by the benchmarks.

use std::sync::Arc;

use divlab_core::sample::{random_admissible_function, random_diversity, random_metric};
use divlab_core::{rat, AdmissibleFunction, FiniteDiversity, MetricSpace, SubsetKey};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn rng(n: usize) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(0x5eed ^ n as u64)
}

/// A fixed random diversity on `n` points.
pub fn diversity(n: usize) -> FiniteDiversity {
    random_diversity(n, &mut rng(n))
}

/// A fixed random metric on `n` points with half-integer distances.
pub fn metric(n: usize) -> MetricSpace {
    random_metric(n, &mut rng(n), rat(1, 2), 4)
}

/// `k` admissible functions on a fixed `n`-point diversity.
pub fn family(n: usize, k: usize) -> (Arc<FiniteDiversity>, Vec<AdmissibleFunction>) {
    let mut r = rng(n + 100 * k);
    let d = Arc::new(random_diversity(n, &mut r));
    let members = (0..k).map(|_| random_admissible_function(&d, 3, &mut r)).collect();
    (d, members)
}

/// A fixed diversity, a support of `s` points and an admissible function on it.
pub fn extension_input(n: usize, s: usize) -> (Arc<FiniteDiversity>, SubsetKey, AdmissibleFunction) {
    let mut r = rng(n + 1000 * s);
    let d = Arc::new(random_diversity(n, &mut r));
    let support = SubsetKey::full(s);
    let local = Arc::new(d.restrict(support).expect("support inside ground set"));
    let f = random_admissible_function(&local, s, &mut r);
    (d, support, f)
}
