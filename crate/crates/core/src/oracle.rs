//! Slow reference evaluators.
//!
//! Each function here computes the same quantity as an optimized routine
//! elsewhere in the crate by enumerating the defining expression directly.
//! They exist for differential testing and for the CLI's `--oracle` mode and
//! are only practical on very small ground sets.

use crate::diversity::{FiniteDiversity, MetricSpace};
use crate::rat::Rat;
use crate::subset::{PointId, SubsetKey};

/// Literal axiom check: `δ(A) = 0 ⇔ |A| ≤ 1`, nonnegativity, and
/// `δ(A ∪ B) + δ(B ∪ C) ≥ δ(A ∪ C)` for every triple with `B ≠ ∅`. `O(8ⁿ)`.
pub fn naive_validate(n: usize, table: &[Rat]) -> bool {
    assert_eq!(table.len(), 1 << n);
    for (a, v) in table.iter().enumerate() {
        let small = (a as u32).count_ones() <= 1;
        if v.is_negative() || (small != v.is_zero()) {
            return false;
        }
    }
    let t = scaled(table);
    let size = 1usize << n;
    for b in 1..size {
        for a in 0..size {
            let ab = t[a | b];
            for c in 0..size {
                if ab + t[b | c] < t[a | c] {
                    return false;
                }
            }
        }
    }
    true
}

/// Literal admissibility conditions (i)–(iv) over all `A, B, C`. `O(8ⁿ)`.
///
/// (i) `f(∅) = 0`; (ii) `f(A) ≥ δ(A)`; (iii) `f(A ∪ C) + δ(B ∪ C) ≥ f(A ∪ B)`
/// for `C ≠ ∅`; (iv) `f(A) + f(B) ≥ f(A ∪ B)`.
pub fn naive_admissible(d: &FiniteDiversity, f: &[Rat]) -> bool {
    let n = d.len();
    let size = 1usize << n;
    assert_eq!(f.len(), size);
    let mut joint = d.table().to_vec();
    joint.extend_from_slice(f);
    let t = scaled(&joint);
    let (delta, g) = t.split_at(size);
    if g[0] != 0 {
        return false;
    }
    for a in 0..size {
        if g[a] < delta[a] {
            return false;
        }
        for b in 0..size {
            if g[a] + g[b] < g[a | b] {
                return false;
            }
            for c in 1..size {
                if g[a | c] + delta[b | c] < g[a | b] {
                    return false;
                }
            }
        }
    }
    true
}

/// `max_j max_{A_i, i≠j} f_j(∪ A_i) − Σ_{i≠j} f_i(A_i)` by enumerating every tuple.
pub fn naive_hat_delta(n: usize, family: &[&[Rat]]) -> Rat {
    let k = family.len();
    if k <= 1 {
        return Rat::ZERO;
    }
    let size = 1usize << n;
    let mut best: Option<Rat> = None;
    for j in 0..k {
        let others: Vec<usize> = (0..k).filter(|&i| i != j).collect();
        let mut choice = vec![0usize; others.len()];
        loop {
            let union = choice.iter().fold(0, |u, &a| u | a);
            let cost: Rat = others.iter().zip(&choice).map(|(&i, &a)| family[i][a]).sum();
            let v = family[j][union] - cost;
            if best.map_or(true, |b| v > b) {
                best = Some(v);
            }
            // odometer over (2ⁿ)^(k−1)
            let mut pos = 0;
            while pos < choice.len() {
                choice[pos] += 1;
                if choice[pos] < size {
                    break;
                }
                choice[pos] = 0;
                pos += 1;
            }
            if pos == choice.len() {
                break;
            }
        }
    }
    best.unwrap_or(Rat::ZERO)
}

/// The maximal extension of `f` (a table over subsets of `s`, in local
/// indexing) to all of `d`, by enumerating every `B ⊆ S` and every tuple of
/// subsets `(A_b)` whose union is `A`.
pub fn all_covers_extension(d: &FiniteDiversity, s: SubsetKey, f: &[Rat]) -> Vec<Rat> {
    let n = d.len();
    assert_eq!(f.len(), 1 << s.len());
    let mut out = Vec::with_capacity(1 << n);
    for a in 0..(1u32 << n) {
        let a_key = SubsetKey(a);
        let a_subs: Vec<SubsetKey> = a_key.subsets().collect();
        let mut best: Option<Rat> = None;
        for b_local in 0..(1u32 << s.len()) {
            let b: Vec<PointId> = SubsetKey(b_local).expand(s).iter().collect();
            let mut choice = vec![0usize; b.len()];
            loop {
                let union = choice.iter().fold(SubsetKey::EMPTY, |u, &i| u.union(a_subs[i]));
                if union == a_key {
                    let cost: Rat = f[b_local as usize]
                        + b.iter()
                            .zip(&choice)
                            .map(|(&p, &i)| d.value(a_subs[i].with(p)))
                            .sum::<Rat>();
                    if best.map_or(true, |x| cost < x) {
                        best = Some(cost);
                    }
                }
                let mut pos = 0;
                while pos < choice.len() {
                    choice[pos] += 1;
                    if choice[pos] < a_subs.len() {
                        break;
                    }
                    choice[pos] = 0;
                    pos += 1;
                }
                if pos == choice.len() {
                    break;
                }
            }
        }
        out.push(best.expect("B = S with singleton parts always covers A"));
    }
    out
}

/// Minimum-weight tree covering each subset, found by enumerating every
/// labelled tree (via Prüfer sequences) on every vertex set. Indexed by mask.
pub fn exhaustive_steiner_table(m: &MetricSpace) -> Vec<Rat> {
    let n = m.len();
    assert!(n <= 7, "exhaustive tree enumeration is limited to 7 points");
    let size = 1usize << n;
    let mut tree = vec![Rat::ZERO; size];
    for v in 1..size {
        let verts: Vec<PointId> = SubsetKey(v as u32).iter().collect();
        tree[v] = min_spanning_by_enumeration(m, &verts);
    }
    let mut out = vec![Rat::ZERO; size];
    for a in 0..size {
        let mut best: Option<Rat> = None;
        for v in 0..size {
            if a & !v == 0 && v != 0 && best.map_or(true, |b| tree[v] < b) {
                best = Some(tree[v]);
            }
        }
        out[a] = best.unwrap_or(Rat::ZERO);
    }
    out
}

fn min_spanning_by_enumeration(m: &MetricSpace, verts: &[PointId]) -> Rat {
    let k = verts.len();
    match k {
        0 | 1 => return Rat::ZERO,
        2 => return m.d(verts[0], verts[1]),
        _ => {}
    }
    let mut best: Option<Rat> = None;
    let mut code = vec![0usize; k - 2];
    loop {
        let w: Rat = prufer_edges(&code, k).into_iter().map(|(x, y)| m.d(verts[x], verts[y])).sum();
        if best.map_or(true, |b| w < b) {
            best = Some(w);
        }
        let mut pos = 0;
        while pos < code.len() {
            code[pos] += 1;
            if code[pos] < k {
                break;
            }
            code[pos] = 0;
            pos += 1;
        }
        if pos == code.len() {
            break;
        }
    }
    best.expect("at least one tree")
}

/// Edges of the labelled tree on `0..k` with the given Prüfer code.
pub fn prufer_edges(code: &[usize], k: usize) -> Vec<(usize, usize)> {
    let mut degree = vec![1usize; k];
    for &c in code {
        degree[c] += 1;
    }
    let mut edges = Vec::with_capacity(k - 1);
    for &c in code {
        let leaf = (0..k).find(|&v| degree[v] == 1).expect("a leaf exists");
        edges.push((leaf, c));
        degree[leaf] -= 1;
        degree[c] -= 1;
    }
    let rest: Vec<usize> = (0..k).filter(|&v| degree[v] == 1).collect();
    edges.push((rest[0], rest[1]));
    edges
}

/// An isomorphism found by trying every permutation, as `target index` per source point.
pub fn brute_force_isomorphism(d1: &FiniteDiversity, d2: &FiniteDiversity) -> Option<Vec<usize>> {
    let n = d1.len();
    if n != d2.len() {
        return None;
    }
    let mut perm: Vec<usize> = (0..n).collect();
    loop {
        let preserves = (0..(1u32 << n)).all(|a| {
            let image = SubsetKey::from_points(SubsetKey(a).iter().map(|p| PointId(perm[p.0])));
            d1.value(SubsetKey(a)) == d2.value(image)
        });
        if preserves {
            return Some(perm);
        }
        if !next_permutation(&mut perm) {
            return None;
        }
    }
}

fn next_permutation(p: &mut [usize]) -> bool {
    let Some(i) = (1..p.len()).rev().find(|&i| p[i - 1] < p[i]) else {
        return false;
    };
    let j = (i..p.len()).rev().find(|&j| p[j] > p[i - 1]).expect("pivot exists");
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

/// Values multiplied by the lcm of their denominators. Tables in the oracle
/// paths are small and on coarse grids, so this never overflows in practice;
/// it panics rather than silently wrapping.
fn scaled(values: &[Rat]) -> Vec<i128> {
    let mut l: i128 = 1;
    for v in values {
        l = num_integer::lcm(l, v.denom());
        assert!(l < 1 << 60, "oracle denominators too large");
    }
    values
        .iter()
        .map(|v| v.numer().checked_mul(l / v.denom()).expect("oracle value overflow"))
        .collect()
}
