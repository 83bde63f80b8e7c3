//! Diameter and Steiner diversities of a metric, and the sandwich check.
//!
//! Over a fixed metric the diameter diversity is the smallest diversity and
//! the Steiner diversity (lightest tree in the complete graph on `X` whose
//! vertices include `A`) is the largest.

use serde::Serialize;

use crate::diversity::{FiniteDiversity, MetricSpace};
use crate::error::{Error, Result};
use crate::exact::{lift_all, lower_all, with_scalar, Scalar};
use crate::oracle;
use crate::rat::Rat;
use crate::subset::{PointId, SubsetKey};
use crate::validate::{Collector, ValidationReport};

/// Largest ground set accepted by the exhaustive tree enumeration.
pub const EXHAUSTIVE_MAX_POINTS: usize = 6;

#[derive(Clone, Copy, PartialEq, Eq, Debug, Default)]
pub enum SteinerMethod {
    #[default]
    DreyfusWagner,
    Exhaustive,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct SteinerConfig {
    pub method: SteinerMethod,
    /// Largest terminal set accepted by [`steiner_tree`].
    pub terminal_cap: usize,
}

impl Default for SteinerConfig {
    fn default() -> SteinerConfig {
        SteinerConfig { method: SteinerMethod::DreyfusWagner, terminal_cap: 10 }
    }
}

/// `δ(A) = max_{a,b ∈ A} d(a, b)`.
pub fn diameter_diversity(m: &MetricSpace) -> FiniteDiversity {
    let n = m.len();
    let mut table = vec![Rat::ZERO; 1 << n];
    for a in 1..(1usize << n) {
        let top = PointId(usize::BITS as usize - 1 - a.leading_zeros() as usize);
        let rest = a & !(1 << top.0);
        let far = SubsetKey(rest as u32).iter().map(|p| m.d(top, p)).max().unwrap_or(Rat::ZERO);
        table[a] = table[rest].max(far);
    }
    FiniteDiversity::from_table(m.labels().to_vec(), table).expect("diameter table is well formed")
}

/// Weight of the lightest tree covering each subset, using every point of `X`
/// as a potential Steiner vertex.
pub fn steiner_diversity(m: &MetricSpace) -> FiniteDiversity {
    FiniteDiversity::from_table(m.labels().to_vec(), dreyfus_wagner_table(m)).expect("Steiner table is well formed")
}

/// [`steiner_diversity`] with an explicit method.
pub fn steiner_diversity_with(m: &MetricSpace, config: &SteinerConfig) -> Result<FiniteDiversity> {
    let table = match config.method {
        SteinerMethod::DreyfusWagner => dreyfus_wagner_table(m),
        SteinerMethod::Exhaustive => {
            if m.len() > EXHAUSTIVE_MAX_POINTS {
                return Err(Error::CapExceeded { size: m.len(), cap: EXHAUSTIVE_MAX_POINTS });
            }
            oracle::exhaustive_steiner_table(m)
        }
    };
    FiniteDiversity::from_table(m.labels().to_vec(), table)
}

fn dreyfus_wagner_table(m: &MetricSpace) -> Vec<Rat> {
    let n = m.len();
    let flat: Vec<Rat> = m.rows().into_iter().flatten().collect();
    with_scalar!(&flat, |scale: T| {
        let d: Vec<T> = lift_all(&flat, scale);
        lower_all(&dw_kernel(n, &d), scale)
    })
}

/// One pass with all of `X` as terminals. `tree[D·n + v]` is the lightest tree
/// containing `D ∪ {v}`; the subset's value is `tree[A·n + a]` for any `a ∈ A`.
fn dw_kernel<S: Scalar>(n: usize, d: &[S]) -> Vec<S> {
    let size = 1usize << n;
    let mut tree = vec![S::ZERO; size * n];
    let mut merged = vec![S::ZERO; n];
    for t in 0..n {
        for v in 0..n {
            tree[(1 << t) * n + v] = d[t * n + v];
        }
    }
    for set in 1..size {
        if set.count_ones() < 2 {
            continue;
        }
        let low = set & set.wrapping_neg();
        let rest = set & !low;
        for (u, slot) in merged.iter_mut().enumerate() {
            // splits with the lowest member on the left side, so each split is seen once
            let mut best = tree[low * n + u] + tree[rest * n + u];
            let mut sub = (rest - 1) & rest;
            while sub != 0 {
                let left = low | sub;
                let cand = tree[left * n + u] + tree[(set & !left) * n + u];
                if cand < best {
                    best = cand;
                }
                sub = (sub - 1) & rest;
            }
            *slot = best;
        }
        for v in 0..n {
            let mut best = merged[v];
            for (u, &mu) in merged.iter().enumerate() {
                let cand = mu + d[u * n + v];
                if cand < best {
                    best = cand;
                }
            }
            tree[set * n + v] = best;
        }
    }
    let mut out = vec![S::ZERO; size];
    for (set, slot) in out.iter_mut().enumerate().skip(1) {
        let a = set.trailing_zeros() as usize;
        *slot = tree[set * n + a];
    }
    out
}

/// A lightest tree covering a terminal set.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct SteinerTree {
    pub weight: Rat,
    /// Edges `(u, v)` with `u < v`, sorted.
    pub edges: Vec<(PointId, PointId)>,
}

#[derive(Clone, Copy)]
enum Step {
    Base,
    Split(usize),
}

/// Lightest tree whose vertex set contains `terminals`, with one witness tree.
///
/// Ties between equally light trees are broken towards lower point indices at
/// each step of the reconstruction.
pub fn steiner_tree(m: &MetricSpace, terminals: SubsetKey, config: &SteinerConfig) -> Result<SteinerTree> {
    let n = m.len();
    let k = terminals.len();
    if !terminals.is_subset_of(SubsetKey::full(n)) {
        return Err(Error::Structural("terminals are not inside the ground set".into()));
    }
    if k > config.terminal_cap {
        return Err(Error::CapExceeded { size: k, cap: config.terminal_cap });
    }
    if config.method == SteinerMethod::Exhaustive && n > EXHAUSTIVE_MAX_POINTS {
        return Err(Error::CapExceeded { size: n, cap: EXHAUSTIVE_MAX_POINTS });
    }
    if k <= 1 {
        return Ok(SteinerTree { weight: Rat::ZERO, edges: Vec::new() });
    }
    let term: Vec<PointId> = terminals.iter().collect();
    let size = 1usize << k;
    // merged[D][u]: lightest tree containing D ∪ {u} in which u has degree ≥ 2 or is a terminal of D
    let mut merged: Vec<Option<(Rat, Step)>> = vec![None; size * n];
    let mut tree: Vec<(Rat, usize)> = vec![(Rat::ZERO, 0); size * n];
    for set in 1..size {
        for u in 0..n {
            let entry = if set.count_ones() == 1 {
                (term[set.trailing_zeros() as usize].0 == u).then_some((Rat::ZERO, Step::Base))
            } else {
                let low = set & set.wrapping_neg();
                let rest = set & !low;
                let mut best: Option<(Rat, Step)> = None;
                let mut sub = rest;
                loop {
                    let left = low | sub;
                    if left != set {
                        let w = tree[left * n + u].0 + tree[(set & !left) * n + u].0;
                        if best.as_ref().map_or(true, |(b, _)| w < *b) {
                            best = Some((w, Step::Split(left)));
                        }
                    }
                    if sub == 0 {
                        break;
                    }
                    sub = (sub - 1) & rest;
                }
                best
            };
            merged[set * n + u] = entry;
        }
        for v in 0..n {
            let mut best: Option<(Rat, usize)> = None;
            for u in 0..n {
                if let Some((w, _)) = merged[set * n + u] {
                    let cand = w + m.d(PointId(u), PointId(v));
                    if best.map_or(true, |(b, _)| cand < b) {
                        best = Some((cand, u));
                    }
                }
            }
            tree[set * n + v] = best.expect("some vertex carries the merged tree");
        }
    }
    let root = term[0].0;
    let weight = tree[(size - 1) * n + root].0;
    let mut edges = Vec::new();
    let mut stack = vec![(size - 1, root)];
    while let Some((set, v)) = stack.pop() {
        let u = tree[set * n + v].1;
        if u != v {
            edges.push((PointId(u.min(v)), PointId(u.max(v))));
        }
        match merged[set * n + u].expect("reconstruction follows stored steps").1 {
            Step::Base => {}
            Step::Split(left) => {
                stack.push((left, u));
                stack.push((set & !left, u));
            }
        }
    }
    edges.sort();
    edges.dedup();
    Ok(SteinerTree { weight, edges })
}

/// Checks `diam(A) ≤ δ(A) ≤ steiner(A)` over the induced metric of `d`.
pub fn sandwich_check(d: &FiniteDiversity) -> ValidationReport {
    let m = d.induced_metric();
    let lower = diameter_diversity(&m);
    let upper = steiner_diversity(&m);
    let mut out = Collector::new(1);
    for a in crate::subset::all_subsets(d.len()) {
        if lower.value(a) > d.value(a) {
            out.push("diameter-bound", &[a], lower.value(a), "<=", d.value(a));
        }
        if d.value(a) > upper.value(a) {
            out.push("steiner-bound", &[a], d.value(a), "<=", upper.value(a));
        }
    }
    out.finish()
}
