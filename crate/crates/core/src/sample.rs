//! Seeded random generators for diversities, metrics, candidate tables and
//! admissible functions. Used by the tower, the test suites and the benches.

use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::bounds::{diameter_diversity, steiner_diversity};
use crate::diversity::{default_labels, FiniteDiversity, MetricSpace};
use crate::extension::{amalgamate, hub_function, is_admissible, AdmissibleFunction, Amalgamation};
use crate::rat::{rat, Rat};
use crate::subset::{all_subsets, PointId, SubsetKey};

/// A random metric: positive weights `k·step` (`1 ≤ k ≤ max_mult`) on every
/// pair, closed under shortest paths.
pub fn random_metric<R: Rng>(n: usize, rng: &mut R, step: Rat, max_mult: u32) -> MetricSpace {
    let mut w = vec![vec![Rat::ZERO; n]; n];
    for a in 0..n {
        for b in a + 1..n {
            let v = step * Rat::from(rng.gen_range(1..=max_mult) as i64);
            w[a][b] = v;
            w[b][a] = v;
        }
    }
    for k in 0..n {
        for a in 0..n {
            for b in 0..n {
                let via = w[a][k] + w[k][b];
                if via < w[a][b] {
                    w[a][b] = via;
                }
            }
        }
    }
    MetricSpace::from_matrix(default_labels(n), w).expect("shortest-path closure is a metric")
}

/// A tree metric: random tree on `n` points with positive edge weights.
pub fn random_tree_metric<R: Rng>(n: usize, rng: &mut R, step: Rat, max_mult: u32) -> MetricSpace {
    let mut w = vec![vec![None::<Rat>; n]; n];
    for (v, row) in w.iter_mut().enumerate() {
        row[v] = Some(Rat::ZERO);
    }
    for v in 1..n {
        let parent = rng.gen_range(0..v);
        let e = step * Rat::from(rng.gen_range(1..=max_mult) as i64);
        for u in 0..v {
            let through = w[u][parent].expect("parent already placed") + e;
            w[u][v] = Some(through);
            w[v][u] = Some(through);
        }
    }
    let rows = w.into_iter().map(|r| r.into_iter().map(|x| x.expect("complete")).collect()).collect();
    MetricSpace::from_matrix(default_labels(n), rows).expect("tree distances form a metric")
}

/// `Σ_k (max_{a ∈ A} x_k(a) − min_{a ∈ A} x_k(a))` for random integer points in `dims` dimensions.
///
/// Zero on pairs of coinciding points, so only valid when combined with a
/// positive diversity.
fn box_table<R: Rng>(n: usize, rng: &mut R, dims: usize) -> Vec<Rat> {
    let coords: Vec<Vec<i64>> = (0..n).map(|_| (0..dims).map(|_| rng.gen_range(0..4)).collect()).collect();
    all_subsets(n)
        .map(|a| {
            let pts: Vec<&Vec<i64>> = a.iter().map(|p| &coords[p.0]).collect();
            let total: i64 = (0..dims)
                .map(|k| {
                    let max = pts.iter().map(|c| c[k]).max().unwrap_or(0);
                    let min = pts.iter().map(|c| c[k]).min().unwrap_or(0);
                    max - min
                })
                .sum();
            Rat::from(total)
        })
        .collect()
}

fn combine(tables: &[(Rat, Vec<Rat>)]) -> Vec<Rat> {
    let len = tables[0].1.len();
    (0..len).map(|i| tables.iter().map(|(c, t)| *c * t[i]).sum()).collect()
}

fn from_table(n: usize, table: Vec<Rat>) -> FiniteDiversity {
    FiniteDiversity::from_table(default_labels(n), table).expect("generated table is well formed")
}

/// A random valid diversity on `n` points (labels `p0 …`).
///
/// Draws from a mixture: diameter and Steiner diversities of random and tree
/// metrics, positive combinations and maxima of those with box diversities,
/// and one-point extensions of smaller random diversities. Values are
/// multiples of 1/2 or 1/4.
pub fn random_diversity<R: Rng>(n: usize, rng: &mut R) -> FiniteDiversity {
    assert!(n >= 1);
    let half = rat(1, 2);
    let kind = if n >= 2 { rng.gen_range(0..7) } else { 0 };
    match kind {
        0 => diameter_diversity(&random_metric(n, rng, half, 4)),
        1 => steiner_diversity(&random_metric(n, rng, half, 4)),
        2 => steiner_diversity(&random_tree_metric(n, rng, half, 3)),
        3 => {
            let a = diameter_diversity(&random_metric(n, rng, half, 3));
            let b = steiner_diversity(&random_metric(n, rng, half, 3));
            let c = rng.gen_range(1..=2);
            from_table(n, combine(&[(Rat::ONE, a.table().to_vec()), (Rat::from(c), b.table().to_vec())]))
        }
        4 => {
            let a = diameter_diversity(&random_metric(n, rng, half, 4));
            let b = steiner_diversity(&random_tree_metric(n, rng, half, 3));
            let t = a.table().iter().zip(b.table()).map(|(x, y)| *x.max(y)).collect();
            from_table(n, t)
        }
        5 => {
            let a = diameter_diversity(&random_metric(n, rng, half, 2));
            let dims = rng.gen_range(1..=3);
            let b = box_table(n, rng, dims);
            from_table(n, combine(&[(Rat::ONE, a.table().to_vec()), (half, b)]))
        }
        _ => grown_diversity(n, rng),
    }
}

/// `n − 1` random points plus one more adjoined by a random hub function.
fn grown_diversity<R: Rng>(n: usize, rng: &mut R) -> FiniteDiversity {
    let base = Arc::new(random_diversity(n - 1, rng));
    for _ in 0..16 {
        let size = rng.gen_range(1..=(n - 1).min(3));
        let s = random_subset_of_size(n - 1, size, rng);
        let w = random_hub_weights(&base, s, rng, rat(1, 4), Rat::from(4), true);
        let f = hub_function(&base, s, &w).expect("sampled weights are feasible");
        let label = format!("p{}", n - 1);
        if let Ok(Amalgamation::Extended(d)) = amalgamate(&base, &f, &label) {
            return d;
        }
    }
    steiner_diversity(&random_metric(n, rng, rat(1, 2), 4))
}

/// Weights `w` on the members of `s` with `Σ_B w ≥ δ(B)` for every `B ⊆ S`
/// and `|w(x) − w(y)| ≤ δ({x, y})`, each drawn uniformly from the multiples of
/// `step` in its feasible interval, capped at `cap`.
///
/// The interval is never empty before the cap is applied. When the cap falls
/// below the lower bound, `saturate` picks the lower bound; otherwise the cap
/// wins and the weights may fail the sum condition.
pub fn random_hub_weights<R: Rng>(
    d: &FiniteDiversity,
    s: SubsetKey,
    rng: &mut R,
    step: Rat,
    cap: Rat,
    saturate: bool,
) -> Vec<Rat> {
    let members: Vec<PointId> = s.iter().collect();
    let mut w: Vec<Rat> = Vec::with_capacity(members.len());
    for (i, &x) in members.iter().enumerate() {
        let done = SubsetKey::full(i);
        let mut lo = Rat::ZERO;
        let mut hi: Option<Rat> = None;
        for j in 0..i {
            let dist = d.distance(x, members[j]);
            lo = lo.max(w[j] - dist);
            hi = Some(hi.map_or(w[j] + dist, |h: Rat| h.min(w[j] + dist)));
        }
        for b in done.subsets().skip(1) {
            let global = SubsetKey::from_points(b.iter().map(|j| members[j.0]));
            let sum: Rat = b.iter().map(|j| w[j.0]).sum();
            lo = lo.max(d.value(global.with(x)) - sum);
        }
        let hi = hi.map_or(cap, |h| h.min(cap));
        let pick = if lo > hi {
            if saturate {
                lo
            } else {
                hi
            }
        } else {
            grid_pick(lo, hi, step, rng)
        };
        w.push(pick);
    }
    w
}

/// Uniform multiple of `step` in `[lo, hi]`, or `lo` when there is none.
pub fn grid_pick<R: Rng>(lo: Rat, hi: Rat, step: Rat, rng: &mut R) -> Rat {
    let first = (lo / step).ceil();
    let last = (hi / step).floor();
    if first > last {
        return lo;
    }
    let count = (last - first).numer() + 1;
    let k = rng.gen_range(0..count as u64) as i128;
    (first + Rat::from_integer(k)) * step
}

/// A uniformly random subset with exactly `size` of the `n` points.
pub fn random_subset_of_size<R: Rng>(n: usize, size: usize, rng: &mut R) -> SubsetKey {
    let mut idx: Vec<usize> = (0..n).collect();
    idx.shuffle(rng);
    SubsetKey::from_indices(&idx[..size.min(n)])
}

/// A uniformly random permutation of `0..n`.
pub fn random_permutation<R: Rng>(n: usize, rng: &mut R) -> Vec<usize> {
    let mut p: Vec<usize> = (0..n).collect();
    p.shuffle(rng);
    p
}

/// A random admissible function on `d` supported on a random `S` of at most
/// `max_support` points.
pub fn random_admissible_function<R: Rng>(
    d: &Arc<FiniteDiversity>,
    max_support: usize,
    rng: &mut R,
) -> AdmissibleFunction {
    let size = rng.gen_range(1..=max_support.min(d.len()).max(1));
    let s = random_subset_of_size(d.len(), size, rng);
    let w = random_hub_weights(d, s, rng, rat(1, 4), Rat::from(4), true);
    hub_function(d, s, &w).expect("sampled weights are feasible")
}

/// Copy of `table` with `changes` random entries of size ≥ `min_size` moved by
/// `±step` (never below zero).
pub fn perturbed_table<R: Rng>(table: &[Rat], rng: &mut R, changes: usize, step: Rat, min_size: usize) -> Vec<Rat> {
    let mut t = table.to_vec();
    let eligible: Vec<usize> = (0..t.len()).filter(|&i| (i as u32).count_ones() as usize >= min_size).collect();
    if eligible.is_empty() {
        return t;
    }
    for _ in 0..changes {
        let i = *eligible.choose(rng).expect("nonempty");
        let next = if rng.gen_bool(0.5) { t[i] + step } else { t[i] - step };
        t[i] = next.max(Rat::ZERO);
    }
    t
}

/// A table on the grid `values` for every subset of size ≥ `min_size`, zero elsewhere.
pub fn grid_table<R: Rng>(n: usize, rng: &mut R, values: &[Rat], min_size: usize) -> Vec<Rat> {
    all_subsets(n)
        .map(|a| if a.len() >= min_size { *values.choose(rng).expect("nonempty grid") } else { Rat::ZERO })
        .collect()
}

/// Random walk over admissible tables that keeps every value on subsets of
/// `fixed` unchanged. Each step moves one other entry by `±step` and is kept
/// only if the result is still admissible.
pub fn admissible_walk<R: Rng>(
    d: &FiniteDiversity,
    start: &[Rat],
    fixed: SubsetKey,
    steps: usize,
    step: Rat,
    down_bias: f64,
    rng: &mut R,
) -> Vec<Rat> {
    let movable: Vec<usize> = all_subsets(d.len()).filter(|a| !a.is_subset_of(fixed)).map(|a| a.index()).collect();
    let mut t = start.to_vec();
    if movable.is_empty() {
        return t;
    }
    for _ in 0..steps {
        let i = *movable.choose(rng).expect("nonempty");
        let old = t[i];
        t[i] = if rng.gen_bool(down_bias) { old - step } else { old + step };
        if !is_admissible(d, &t).map(|r| r.ok).unwrap_or(false) {
            t[i] = old;
        }
    }
    t
}

/// Adjoins, for each point `a` of `points` in order, a near copy `a'` with
/// `δ(A ∪ {a'}) = δ(A ∪ {a}) + t` for nonempty `A`. Returns the enlarged
/// diversity and the copies' ids.
pub fn with_near_copies(d: &FiniteDiversity, points: SubsetKey, t: Rat) -> (FiniteDiversity, Vec<PointId>) {
    assert!(t.is_positive());
    let mut cur = d.clone();
    let mut copies = Vec::new();
    for a in points.iter() {
        let f: Vec<Rat> = all_subsets(cur.len())
            .map(|s| if s.is_empty() { Rat::ZERO } else { cur.value(s.with(a)) + t })
            .collect();
        let label = format!("{}'", cur.label(a));
        let base = Arc::new(cur.clone());
        let f = AdmissibleFunction::new(base.clone(), f).expect("shifted kappa is admissible");
        match amalgamate(&base, &f, &label).expect("fresh label") {
            Amalgamation::Extended(next) => {
                copies.push(PointId(cur.len()));
                cur = next;
            }
            Amalgamation::Identified(_) => unreachable!("singleton values are t > 0"),
        }
    }
    (cur, copies)
}
