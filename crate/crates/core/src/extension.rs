//! One-point extensions: admissible functions, the extension diversity δ̂,
//! supports, maximal extension from a support, and amalgamation.
//!
//! An admissible function `f` on `(X, δ)` lists the values `δ(A ∪ {z})` of a
//! prospective new point `z`. It is admissible exactly when
//!
//! * (i) `f(∅) = 0`,
//! * (ii) `f(A) ≥ δ(A)`,
//! * (iii) `f(A ∪ C) + δ(B ∪ C) ≥ f(A ∪ B)` for nonempty `C`,
//! * (iv) `f(A) + f(B) ≥ f(A ∪ B)`.
//!
//! The checker here tests (i), (ii), monotonicity, (iii) for `A ∩ B` a single
//! point (with `C` absorbed into `A` and `B`) and (iv) for disjoint pairs.
//! Monotonicity turns those into the full conditions, in the same way as for
//! diversities.

use std::sync::Arc;

use crate::diversity::FiniteDiversity;
use crate::error::{Error, Result};
use crate::exact::{lift_all, lower_all, min_plus_convolve, with_scalar, Scalar};
use crate::rat::Rat;
use crate::subset::{all_subsets, PointId, SubsetKey};
use crate::validate::{Collector, ValidationReport};

/// A verified admissible function over a shared base diversity.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct AdmissibleFunction {
    base: Arc<FiniteDiversity>,
    table: Vec<Rat>,
    support: Option<SubsetKey>,
}

impl AdmissibleFunction {
    /// Checks admissibility and wraps the table.
    pub fn new(base: Arc<FiniteDiversity>, table: Vec<Rat>) -> Result<AdmissibleFunction> {
        let report = is_admissible(&base, &table)?;
        if !report.ok {
            return Err(Error::NotAdmissible(Box::new(report)));
        }
        Ok(AdmissibleFunction { base, table, support: None })
    }

    /// Like [`new`](Self::new), additionally verifying that `support` is a support.
    pub fn with_support(base: Arc<FiniteDiversity>, table: Vec<Rat>, support: SubsetKey) -> Result<AdmissibleFunction> {
        let f = AdmissibleFunction::new(base, table)?;
        if !has_support(&f, support)? {
            return Err(Error::Structural(format!(
                "{{{}}} is not a support of the function",
                f.base.format_subset(support)
            )));
        }
        Ok(f.declared(support))
    }

    pub(crate) fn trusted(base: Arc<FiniteDiversity>, table: Vec<Rat>, support: Option<SubsetKey>) -> AdmissibleFunction {
        debug_assert!(is_admissible(&base, &table).map(|r| r.ok).unwrap_or(false));
        AdmissibleFunction { base, table, support }
    }

    fn declared(mut self, support: SubsetKey) -> AdmissibleFunction {
        self.support = Some(support);
        self
    }

    pub fn base(&self) -> &FiniteDiversity {
        &self.base
    }

    pub fn base_arc(&self) -> &Arc<FiniteDiversity> {
        &self.base
    }

    pub fn table(&self) -> &[Rat] {
        &self.table
    }

    pub fn into_table(self) -> Vec<Rat> {
        self.table
    }

    #[inline]
    pub fn value(&self, a: SubsetKey) -> Rat {
        self.table[a.index()]
    }

    pub fn support(&self) -> Option<SubsetKey> {
        self.support
    }

    /// The restriction to `s`, as a function over `base.restrict(s)` in local indexing.
    pub fn restrict(&self, s: SubsetKey) -> Result<AdmissibleFunction> {
        let base = Arc::new(self.base.restrict(s)?);
        let table = all_subsets(s.len()).map(|local| self.value(local.expand(s))).collect();
        Ok(AdmissibleFunction { base, table, support: None })
    }
}

/// A finite list of admissible functions over one base.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ExtensionFamily {
    base: Arc<FiniteDiversity>,
    members: Vec<AdmissibleFunction>,
}

impl ExtensionFamily {
    pub fn new(base: Arc<FiniteDiversity>, members: Vec<AdmissibleFunction>) -> Result<ExtensionFamily> {
        if members.iter().any(|f| *f.base != *base) {
            return Err(Error::MixedBase);
        }
        Ok(ExtensionFamily { base, members })
    }

    /// Family from members that must all share a base; empty input needs an explicit base.
    pub fn from_members(members: Vec<AdmissibleFunction>) -> Result<ExtensionFamily> {
        let base = members.first().ok_or_else(|| Error::Structural("family has no members".into()))?.base.clone();
        ExtensionFamily::new(base, members)
    }

    pub fn base(&self) -> &FiniteDiversity {
        &self.base
    }

    pub fn members(&self) -> &[AdmissibleFunction] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// δ̂ on every subfamily, as a diversity whose points are the members.
    ///
    /// Members must be pairwise distinct, otherwise two points sit at distance 0.
    pub fn diversity(&self, labels: Vec<String>) -> Result<FiniteDiversity> {
        if labels.len() != self.members.len() {
            return Err(Error::Structural("one label per member required".into()));
        }
        let tables: Vec<&[Rat]> = self.members.iter().map(|f| f.table()).collect();
        let n = self.base.len();
        FiniteDiversity::from_fn(labels, |s| {
            let sub: Vec<&[Rat]> = s.iter().map(|p| tables[p.0]).collect();
            hat_delta_tables(n, &sub)
        })
    }
}

/// Checks the admissibility conditions for a candidate table over all subsets of `d`.
pub fn is_admissible(d: &FiniteDiversity, f: &[Rat]) -> Result<ValidationReport> {
    let n = d.len();
    if f.len() != 1 << n {
        return Err(Error::Structural(format!("table has {} entries, expected {}", f.len(), 1usize << n)));
    }
    let mut joint = d.table().to_vec();
    joint.extend_from_slice(f);
    Ok(with_scalar!(&joint, |scale: T| {
        let t: Vec<T> = lift_all(&joint, scale);
        let (delta, g) = t.split_at(1 << n);
        let mut out = Collector::new(scale);
        admissible_kernel(n, delta, g, &mut out);
        out.finish()
    }))
}

fn admissible_kernel<S: Scalar>(n: usize, delta: &[S], f: &[S], out: &mut Collector) {
    let full = (1usize << n) - 1;
    let key = |m: usize| SubsetKey(m as u32);
    if f[0] != S::ZERO {
        out.push("empty-set", &[SubsetKey::EMPTY], f[0], "=", S::ZERO);
    }
    for a in 0..=full {
        if f[a] < delta[a] {
            out.push("dominates", &[key(a)], f[a], ">=", delta[a]);
            if out.full() {
                return;
            }
        }
    }
    for a in 0..=full {
        let mut rest = full & !a;
        while rest != 0 {
            let y = rest & rest.wrapping_neg();
            rest &= rest - 1;
            if f[a] > f[a | y] {
                out.push("monotone", &[key(a), key(a | y)], f[a], "<=", f[a | y]);
                if out.full() {
                    return;
                }
            }
        }
    }
    // (iii) with A ∩ B = {x}: f(A) + δ(B) ≥ f(A ∪ B)
    for x in 0..n {
        let bx = 1usize << x;
        let others = full & !bx;
        let mut p = others;
        loop {
            let rest = others & !p;
            let mut q = rest;
            loop {
                let (a, b) = (p | bx, q | bx);
                let lhs = f[a] + delta[b];
                if lhs < f[a | b] {
                    out.push("mixed-triangle", &[key(a), key(b)], lhs, ">=", f[a | b]);
                    if out.full() {
                        return;
                    }
                }
                if q == 0 {
                    break;
                }
                q = (q - 1) & rest;
            }
            if p == 0 {
                break;
            }
            p = (p - 1) & others;
        }
    }
    // (iv) for disjoint A, B
    let mut p = full;
    loop {
        let rest = full & !p;
        let mut q = rest;
        loop {
            if q > p {
                let lhs = f[p] + f[q];
                if lhs < f[p | q] {
                    out.push("subadditive", &[key(p), key(q)], lhs, ">=", f[p | q]);
                    if out.full() {
                        return;
                    }
                }
            }
            if q == 0 {
                break;
            }
            q = (q - 1) & rest;
        }
        if p == 0 {
            break;
        }
        p = (p - 1) & full;
    }
}

/// `κ_x(A) = δ(A ∪ {x})`, with support `{x}`.
pub fn kappa(d: &Arc<FiniteDiversity>, x: PointId) -> AdmissibleFunction {
    let table = all_subsets(d.len()).map(|a| d.value(a.with(x))).collect();
    AdmissibleFunction::trusted(d.clone(), table, Some(SubsetKey::singleton(x)))
}

/// The extension diversity of a family: `0` for at most one member, otherwise
/// `max_j max_{A_i} f_j(∪_{i≠j} A_i) − Σ_{i≠j} f_i(A_i)`.
pub fn hat_delta(family: &ExtensionFamily) -> Rat {
    let tables: Vec<&[Rat]> = family.members.iter().map(|f| f.table()).collect();
    hat_delta_tables(family.base.len(), &tables)
}

/// [`hat_delta`] over raw tables on an `n`-point base.
///
/// For fixed `j`, only the union `U` of the other sets matters, and the
/// cheapest way to reach it is a min-plus subset convolution of the other
/// members (monotonicity lets partitions stand in for covers).
pub fn hat_delta_tables(n: usize, tables: &[&[Rat]]) -> Rat {
    let k = tables.len();
    if k <= 1 {
        return Rat::ZERO;
    }
    assert!(tables.iter().all(|t| t.len() == 1 << n), "tables must cover all subsets");
    let all: Vec<Rat> = tables.iter().flat_map(|t| t.iter().copied()).collect();
    with_scalar!(&all, |scale: T| {
        let lifted: Vec<Vec<T>> = tables.iter().map(|t| lift_all(t, scale)).collect();
        hat_delta_kernel(&lifted).lower(scale)
    })
}

fn hat_delta_kernel<S: Scalar>(tables: &[Vec<S>]) -> S {
    let k = tables.len();
    if k == 2 {
        let mut best = S::ZERO;
        for (&a, &b) in tables[0].iter().zip(&tables[1]) {
            let diff = if a > b { a - b } else { b - a };
            if diff > best {
                best = diff;
            }
        }
        return best;
    }
    // prefix[i] convolves members 0..i, suffix[i] members i..k; None stands for the empty product
    let mut prefix: Vec<Option<Vec<S>>> = vec![None; k + 1];
    for i in 0..k {
        prefix[i + 1] = Some(match &prefix[i] {
            None => tables[i].clone(),
            Some(prev) => min_plus_convolve(prev, &tables[i]),
        });
    }
    let mut suffix: Vec<Option<Vec<S>>> = vec![None; k + 1];
    for i in (0..k).rev() {
        suffix[i] = Some(match &suffix[i + 1] {
            None => tables[i].clone(),
            Some(next) => min_plus_convolve(&tables[i], next),
        });
    }
    let mut best = S::ZERO;
    for j in 0..k {
        let others = match (&prefix[j], &suffix[j + 1]) {
            (Some(l), Some(r)) => min_plus_convolve(l, r),
            (Some(l), None) => l.clone(),
            (None, Some(r)) => r.clone(),
            (None, None) => unreachable!("k ≥ 2"),
        };
        for (u, &g) in others.iter().enumerate() {
            let v = tables[j][u] - g;
            if v > best {
                best = v;
            }
        }
    }
    best
}

/// The maximal extension to `X` of an admissible function `f` on `(S, δ↾S)`:
/// `f_S^X(A) = min_{B ⊆ S} f(B) + min_{∪_b A_b = A} Σ_b δ(A_b ∪ {b})`.
///
/// Cost is `2^|S|` min-plus convolutions of size `3^n`.
pub fn extend_from_support(d: &Arc<FiniteDiversity>, s: SubsetKey, f: &AdmissibleFunction) -> Result<AdmissibleFunction> {
    if s.is_empty() {
        return Err(Error::EmptySupport);
    }
    let restricted = d.restrict(s)?;
    if *f.base != restricted {
        return Err(Error::MixedBase);
    }
    let table = extension_table(d, s, f.table());
    Ok(AdmissibleFunction::trusted(d.clone(), table, Some(s)))
}

/// [`extend_from_support`] for a raw local table, checking admissibility first.
pub fn extend_table_from_support(d: &Arc<FiniteDiversity>, s: SubsetKey, f_local: &[Rat]) -> Result<AdmissibleFunction> {
    if s.is_empty() {
        return Err(Error::EmptySupport);
    }
    let restricted = Arc::new(d.restrict(s)?);
    let f = AdmissibleFunction::new(restricted, f_local.to_vec())?;
    extend_from_support(d, s, &f)
}

pub(crate) fn extension_table(d: &FiniteDiversity, s: SubsetKey, f_local: &[Rat]) -> Vec<Rat> {
    let n = d.len();
    if s == d.full() {
        return f_local.to_vec();
    }
    let mut joint = d.table().to_vec();
    joint.extend_from_slice(f_local);
    with_scalar!(&joint, |scale: T| {
        let delta: Vec<T> = lift_all(d.table(), scale);
        let f: Vec<T> = lift_all(f_local, scale);
        lower_all(&extension_kernel(n, s, &delta, &f), scale)
    })
}

fn extension_kernel<S: Scalar>(n: usize, s: SubsetKey, delta: &[S], f: &[S]) -> Vec<S> {
    let size = 1usize << n;
    let members: Vec<PointId> = s.iter().collect();
    // w[i][P] = δ(P ∪ {s_i})
    let w: Vec<Vec<S>> = members
        .iter()
        .map(|&b| (0..size).map(|p| delta[p | (1 << b.0)]).collect())
        .collect();
    let mut best: Vec<Option<S>> = vec![None; size];
    best[0] = Some(S::ZERO);
    // depth-first over B ⊆ S in increasing member order; cover tables along the path
    let mut stack: Vec<(usize, usize, Vec<S>)> =
        (0..members.len()).rev().map(|i| (1usize << i, i, w[i].clone())).collect();
    while let Some((b_local, last, cover)) = stack.pop() {
        let fb = f[b_local];
        for (slot, &c) in best.iter_mut().zip(&cover) {
            let v = fb + c;
            if slot.map_or(true, |cur| v < cur) {
                *slot = Some(v);
            }
        }
        for i in (last + 1..members.len()).rev() {
            stack.push((b_local | 1 << i, i, min_plus_convolve(&cover, &w[i])));
        }
    }
    best.into_iter().map(|v| v.expect("every subset is covered by S")).collect()
}

/// The cheapest way to reach `A` from a new point joined to each `b ∈ S` at
/// cost `w(b)`: `min_{B ⊆ S} min_{∪_b A_b = A} Σ_b w(b) + δ(A_b ∪ {b})`.
///
/// Admissible, with support `S`, whenever `Σ_{b ∈ B} w(b) ≥ δ(B)` for every
/// `B ⊆ S`; its value on `{b}` is `w(b)` when `w` is also 1-Lipschitz on `S`.
/// `weights` lists `w` for the members of `S` in ascending order.
pub fn hub_function(d: &Arc<FiniteDiversity>, s: SubsetKey, weights: &[Rat]) -> Result<AdmissibleFunction> {
    if s.is_empty() {
        return Err(Error::EmptySupport);
    }
    if weights.len() != s.len() {
        return Err(Error::Structural(format!("{} weights for a support of {}", weights.len(), s.len())));
    }
    let additive: Vec<Rat> =
        all_subsets(s.len()).map(|b| b.iter().map(|i| weights[i.0]).sum()).collect();
    if let Some(b) = all_subsets(s.len()).find(|b| additive[b.index()] < d.value(b.expand(s))) {
        return Err(Error::Structural(format!(
            "weights on {{{}}} sum below its value",
            d.format_subset(b.expand(s))
        )));
    }
    let mut joint = d.table().to_vec();
    joint.extend_from_slice(&additive);
    let table = with_scalar!(&joint, |scale: T| {
        let delta: Vec<T> = lift_all(d.table(), scale);
        let g: Vec<T> = lift_all(&additive, scale);
        lower_all(&extension_kernel(d.len(), s, &delta, &g), scale)
    });
    Ok(AdmissibleFunction::trusted(d.clone(), table, Some(s)))
}

/// `f(A) = δ(A) + min_{b ∈ A} r(b)`, `f(∅) = 0`, as a raw table.
///
/// Kept for comparison: this table is not admissible in general. Two points
/// at distance 2 with `r ≡ 1` give `f(a) + f(b) = 2 < 3 = f(ab)`.
pub fn star_table(d: &FiniteDiversity, r: &[Rat]) -> Vec<Rat> {
    all_subsets(d.len())
        .map(|a| match a.iter().map(|p| r[p.0]).min() {
            None => Rat::ZERO,
            Some(m) => d.value(a) + m,
        })
        .collect()
}

/// True when re-extending `g`'s restriction to `s` gives back `g`.
pub fn has_support(g: &AdmissibleFunction, s: SubsetKey) -> Result<bool> {
    if s.is_empty() {
        return Err(Error::EmptySupport);
    }
    let local: Vec<Rat> = all_subsets(s.len()).map(|a| g.value(a.expand(s))).collect();
    Ok(extension_table(&g.base, s, &local) == g.table)
}

/// Outcome of a one-point amalgamation.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Amalgamation {
    /// `X ∪ {z}` with `δ(A ∪ {z}) = f(A)`; `z` is the last point.
    Extended(FiniteDiversity),
    /// `f({x}) = 0`, so `f = κ_x` and the new point coincides with `x`.
    Identified(PointId),
}

/// Adjoins a point realizing `f`, or reports the existing point it coincides with.
pub fn amalgamate(d: &FiniteDiversity, f: &AdmissibleFunction, label: &str) -> Result<Amalgamation> {
    if *f.base != *d {
        return Err(Error::MixedBase);
    }
    if let Some(x) = d.points().find(|&x| f.value(SubsetKey::singleton(x)).is_zero()) {
        return Ok(Amalgamation::Identified(x));
    }
    if d.point(label).is_some() {
        return Err(Error::DuplicateLabel(label.to_string()));
    }
    Ok(Amalgamation::Extended(d.extended_by(label, &f.table)?))
}

/// The raw table on `n + 1` points with `δ̂(A ∪ {z}) = f(A)`, without any checks.
pub fn amalgamated_table(d: &FiniteDiversity, f: &[Rat]) -> Vec<Rat> {
    let mut t = d.table().to_vec();
    t.extend_from_slice(f);
    t
}
