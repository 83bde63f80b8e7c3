//! Small named diversities used by tests, benches and examples.

use crate::diversity::{FiniteDiversity, MetricSpace};
use crate::rat::{rat, Rat};
use crate::subset::SubsetKey;

fn labels(names: &[&str]) -> Vec<String> {
    names.iter().map(|s| s.to_string()).collect()
}

/// Three points `a b c` with every pair at 1 and the triple at `triple`.
///
/// Valid exactly when `1 ≤ triple ≤ 2`.
pub fn unit_triangle(triple: Rat) -> FiniteDiversity {
    FiniteDiversity::from_fn(labels(&["a", "b", "c"]), |s| if s.len() == 2 { Rat::ONE } else { triple })
        .expect("fixture is well formed")
}

/// Two points `a b` at distance `d`.
pub fn pair(d: Rat) -> FiniteDiversity {
    FiniteDiversity::from_fn(labels(&["a", "b"]), |_| d).expect("fixture is well formed")
}

/// Unit equilateral metric on `a b c`.
pub fn unit_equilateral() -> MetricSpace {
    let z = Rat::ZERO;
    let o = Rat::ONE;
    MetricSpace::from_matrix(labels(&["a", "b", "c"]), vec![vec![z, o, o], vec![o, z, o], vec![o, o, z]])
        .expect("fixture is a metric")
}

/// Path metric `a – b – c` with unit steps.
pub fn unit_path() -> MetricSpace {
    let z = Rat::ZERO;
    let o = Rat::ONE;
    let t = rat(2, 1);
    MetricSpace::from_matrix(labels(&["a", "b", "c"]), vec![vec![z, o, t], vec![o, z, o], vec![t, o, z]])
        .expect("fixture is a metric")
}

/// Unit equilateral `a b c` plus a centre `z` at 1/2 from each.
pub fn equilateral_with_centre() -> MetricSpace {
    let z = Rat::ZERO;
    let o = Rat::ONE;
    let h = rat(1, 2);
    MetricSpace::from_matrix(
        labels(&["a", "b", "c", "z"]),
        vec![vec![z, o, o, h], vec![o, z, o, h], vec![o, o, z, h], vec![h, h, h, z]],
    )
    .expect("fixture is a metric")
}

/// Every subset of size ≥ 2 of an `n`-point ground set mapped to `value`.
pub fn uniform(n: usize, value: Rat) -> FiniteDiversity {
    FiniteDiversity::from_fn(crate::diversity::default_labels(n), |_| value).expect("fixture is well formed")
}

/// The subset `{a, b, c}` of a three-point fixture.
pub fn triple() -> SubsetKey {
    SubsetKey::full(3)
}
