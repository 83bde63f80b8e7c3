//! Realizing one-point extensions inside a host, partial isomorphisms,
//! back-and-forth isomorphism search, embeddings, and the perturbation that
//! moves an admissible function onto nearby points.

use std::sync::Arc;

use crate::diversity::FiniteDiversity;
use crate::error::{Error, Result};
use crate::extension::{extension_table, AdmissibleFunction};
use crate::rat::Rat;
use crate::subset::{all_subsets, superset_first_order, PointId, SubsetKey};

/// An injective point map between two diversities that preserves every
/// subset value on its domain.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PartialIsomorphism {
    source: Arc<FiniteDiversity>,
    target: Arc<FiniteDiversity>,
    pairs: Vec<(PointId, PointId)>,
}

impl PartialIsomorphism {
    pub fn empty(source: Arc<FiniteDiversity>, target: Arc<FiniteDiversity>) -> PartialIsomorphism {
        PartialIsomorphism { source, target, pairs: Vec::new() }
    }

    /// Checks injectivity, ranges and value preservation on every subset of the domain.
    pub fn new(
        source: Arc<FiniteDiversity>,
        target: Arc<FiniteDiversity>,
        pairs: Vec<(PointId, PointId)>,
    ) -> Result<PartialIsomorphism> {
        let phi = PartialIsomorphism { source, target, pairs };
        phi.check()?;
        Ok(phi)
    }

    fn check(&self) -> Result<()> {
        let mut dom = SubsetKey::EMPTY;
        let mut ran = SubsetKey::EMPTY;
        for &(x, y) in &self.pairs {
            if x.0 >= self.source.len() || y.0 >= self.target.len() {
                return Err(Error::InvalidPartialIso(format!("pair ({x}, {y}) is out of range")));
            }
            if dom.contains(x) || ran.contains(y) {
                return Err(Error::InvalidPartialIso(format!("pair ({x}, {y}) repeats a point")));
            }
            dom = dom.with(x);
            ran = ran.with(y);
        }
        if let Some(a) = self.first_mismatch() {
            return Err(Error::InvalidPartialIso(format!(
                "value of {{{}}} is not preserved",
                self.source.format_subset(a)
            )));
        }
        Ok(())
    }

    fn first_mismatch(&self) -> Option<SubsetKey> {
        let k = self.pairs.len();
        (0..(1u32 << k)).find_map(|local| {
            let (a, b) = self.pair_subsets(local);
            (self.source.value(a) != self.target.value(b)).then_some(a)
        })
    }

    /// Source and target subsets picked out by a mask over `pairs`.
    fn pair_subsets(&self, local: u32) -> (SubsetKey, SubsetKey) {
        SubsetKey(local).iter().fold((SubsetKey::EMPTY, SubsetKey::EMPTY), |(a, b), i| {
            let (x, y) = self.pairs[i.0];
            (a.with(x), b.with(y))
        })
    }

    /// True when the preservation invariant holds on every subset of the domain.
    pub fn verify(&self) -> bool {
        self.check().is_ok()
    }

    pub fn source(&self) -> &FiniteDiversity {
        &self.source
    }

    pub fn target(&self) -> &FiniteDiversity {
        &self.target
    }

    pub fn pairs(&self) -> &[(PointId, PointId)] {
        &self.pairs
    }

    pub fn domain(&self) -> SubsetKey {
        SubsetKey::from_points(self.pairs.iter().map(|p| p.0))
    }

    pub fn range(&self) -> SubsetKey {
        SubsetKey::from_points(self.pairs.iter().map(|p| p.1))
    }

    pub fn image(&self, x: PointId) -> Option<PointId> {
        self.pairs.iter().find(|p| p.0 == x).map(|p| p.1)
    }

    pub fn is_total(&self) -> bool {
        self.pairs.len() == self.source.len()
    }

    /// The same map read from target to source.
    pub fn inverse(&self) -> PartialIsomorphism {
        PartialIsomorphism {
            source: self.target.clone(),
            target: self.source.clone(),
            pairs: self.pairs.iter().map(|&(x, y)| (y, x)).collect(),
        }
    }

    /// Would adding `(x, y)` keep every value on the enlarged domain?
    fn accepts(&self, x: PointId, y: PointId) -> bool {
        (0..(1u32 << self.pairs.len())).all(|local| {
            let (a, b) = self.pair_subsets(local);
            self.source.value(a.with(x)) == self.target.value(b.with(y))
        })
    }

    fn push(&mut self, x: PointId, y: PointId) {
        self.pairs.push((x, y));
    }
}

/// Finds a target point for `x`: the lowest-index `y` with
/// `δ_Y(B ∪ {y}) = δ_X(φ⁻¹(B) ∪ {x})` for every `B` in the range.
pub fn extend_partial_isomorphism(phi: &PartialIsomorphism, x: PointId) -> Result<Option<PartialIsomorphism>> {
    phi.check()?;
    if x.0 >= phi.source.len() {
        return Err(Error::InvalidPartialIso(format!("{x} is not a source point")));
    }
    if phi.domain().contains(x) {
        return Err(Error::InvalidPartialIso(format!("{x} is already mapped")));
    }
    let used = phi.range();
    Ok(phi.target.points().filter(|y| !used.contains(*y)).find(|&y| phi.accepts(x, y)).map(|y| {
        let mut next = phi.clone();
        next.push(x, y);
        next
    }))
}

/// Search options for [`find_isomorphism_with`].
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct IsoSearch {
    /// Reject candidate pairs whose sorted distance lists differ.
    pub prune: bool,
}

impl Default for IsoSearch {
    fn default() -> IsoSearch {
        IsoSearch { prune: true }
    }
}

/// A total isomorphism between `d1` and `d2`, if one exists.
pub fn find_isomorphism(d1: &Arc<FiniteDiversity>, d2: &Arc<FiniteDiversity>) -> Option<PartialIsomorphism> {
    find_isomorphism_with(d1, d2, IsoSearch::default())
}

/// Back-and-forth backtracking search. Steps alternate: even steps map the
/// lowest unmapped source point forward, odd steps pull back the lowest
/// unmapped target point. Candidates are tried in ascending index order, so
/// the result is deterministic.
pub fn find_isomorphism_with(
    d1: &Arc<FiniteDiversity>,
    d2: &Arc<FiniteDiversity>,
    opts: IsoSearch,
) -> Option<PartialIsomorphism> {
    let n = d1.len();
    if n != d2.len() {
        return None;
    }
    let sig1 = distance_profiles(d1);
    let sig2 = distance_profiles(d2);
    if opts.prune {
        let mut a = sig1.clone();
        let mut b = sig2.clone();
        a.sort();
        b.sort();
        if a != b {
            return None;
        }
    }
    let compatible = |x: PointId, y: PointId| !opts.prune || sig1[x.0] == sig2[y.0];
    let mut phi = PartialIsomorphism::empty(d1.clone(), d2.clone());
    back_and_forth(&mut phi, &compatible).then_some(phi)
}

fn back_and_forth(phi: &mut PartialIsomorphism, compatible: &dyn Fn(PointId, PointId) -> bool) -> bool {
    let n = phi.source.len();
    let k = phi.pairs.len();
    if k == n {
        return true;
    }
    let dom = phi.domain();
    let ran = phi.range();
    if k % 2 == 0 {
        let x = phi.source.points().find(|p| !dom.contains(*p)).expect("an unmapped source point");
        let candidates: Vec<PointId> = phi.target.points().filter(|p| !ran.contains(*p)).collect();
        for y in candidates {
            if compatible(x, y) && phi.accepts(x, y) {
                phi.push(x, y);
                if back_and_forth(phi, compatible) {
                    return true;
                }
                phi.pairs.pop();
            }
        }
    } else {
        let y = phi.target.points().find(|p| !ran.contains(*p)).expect("an unmapped target point");
        let candidates: Vec<PointId> = phi.source.points().filter(|p| !dom.contains(*p)).collect();
        for x in candidates {
            if compatible(x, y) && phi.accepts(x, y) {
                phi.push(x, y);
                if back_and_forth(phi, compatible) {
                    return true;
                }
                phi.pairs.pop();
            }
        }
    }
    false
}

/// Sorted distances from each point to the others.
fn distance_profiles(d: &FiniteDiversity) -> Vec<Vec<Rat>> {
    d.points()
        .map(|x| {
            let mut v: Vec<Rat> = d.points().filter(|&y| y != x).map(|y| d.distance(x, y)).collect();
            v.sort();
            v
        })
        .collect()
}

/// An injective value-preserving map of all of `small` into `big`, if one exists.
///
/// Source points are placed in index order; each tries target points in
/// ascending order.
pub fn find_embedding(small: &Arc<FiniteDiversity>, big: &Arc<FiniteDiversity>) -> Option<PartialIsomorphism> {
    if small.len() > big.len() {
        return None;
    }
    let mut phi = PartialIsomorphism::empty(small.clone(), big.clone());
    embed_from(&mut phi).then_some(phi)
}

fn embed_from(phi: &mut PartialIsomorphism) -> bool {
    let k = phi.pairs.len();
    if k == phi.source.len() {
        return true;
    }
    let x = PointId(k);
    let ran = phi.range();
    let candidates: Vec<PointId> = phi.target.points().filter(|p| !ran.contains(*p)).collect();
        for y in candidates {
        if phi.accepts(x, y) {
            phi.push(x, y);
            if embed_from(phi) {
                return true;
            }
            phi.pairs.pop();
        }
    }
    false
}

/// "Is there a host point whose values on subsets of `subset` are within
/// `epsilon` of `f`?"
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RealizationQuery {
    pub host: Arc<FiniteDiversity>,
    pub subset: SubsetKey,
    /// Admissible on `host.restrict(subset)`, in local indexing.
    pub f: AdmissibleFunction,
    pub epsilon: Rat,
}

impl RealizationQuery {
    pub fn new(host: Arc<FiniteDiversity>, subset: SubsetKey, f: AdmissibleFunction, epsilon: Rat) -> Result<RealizationQuery> {
        if epsilon.is_negative() {
            return Err(Error::Structural(format!("epsilon must be nonnegative, got {epsilon}")));
        }
        if *f.base() != host.restrict(subset)? {
            return Err(Error::MixedBase);
        }
        Ok(RealizationQuery { host, subset, f, epsilon })
    }

    /// The query asking for a copy of `x` over `subset`.
    pub fn kappa(host: &Arc<FiniteDiversity>, subset: SubsetKey, x: PointId) -> Result<RealizationQuery> {
        let base = Arc::new(host.restrict(subset)?);
        let table = all_subsets(subset.len()).map(|a| host.value(a.expand(subset).with(x))).collect();
        let f = AdmissibleFunction::new(base, table)?;
        RealizationQuery::new(host.clone(), subset, f, Rat::ZERO)
    }
}

/// `max_{A ⊆ F} |δ(A ∪ {x}) − f(A)|` for each point `x` of `d`.
fn worst_errors(d: &FiniteDiversity, subset: SubsetKey, f: &AdmissibleFunction) -> Vec<Rat> {
    d.points()
        .map(|x| {
            all_subsets(subset.len())
                .map(|a| (d.value(a.expand(subset).with(x)) - f.value(a)).abs())
                .max()
                .unwrap_or(Rat::ZERO)
        })
        .collect()
}

/// The host point realizing the query within `epsilon` with the smallest
/// worst-case error (ties to the lowest index), if any.
pub fn realize(q: &RealizationQuery) -> Option<PointId> {
    let errs = worst_errors(&q.host, q.subset, &q.f);
    let (best, err) = errs.iter().enumerate().min_by(|a, b| a.1.cmp(b.1).then(a.0.cmp(&b.0)))?;
    (*err <= q.epsilon).then_some(PointId(best))
}

/// `max_q min_x max_A |δ(A ∪ {x}) − f_q(A)|`, evaluated in `d`.
///
/// Queries may have been built on an earlier, smaller host: only their subset
/// and function are used, and `d` must agree with the query's base on the subset.
pub fn extension_deficit(d: &FiniteDiversity, queries: &[RealizationQuery]) -> Result<Rat> {
    let mut worst = Rat::ZERO;
    for q in queries {
        if !q.subset.is_subset_of(d.full()) || *q.f.base() != d.restrict(q.subset)? {
            return Err(Error::MixedBase);
        }
        let best = worst_errors(d, q.subset, &q.f).into_iter().min().unwrap_or(Rat::ZERO);
        worst = worst.max(best);
    }
    Ok(worst)
}

fn check_gamma(host: &FiniteDiversity, subset: SubsetKey, gamma: &[PointId]) -> Result<SubsetKey> {
    if gamma.len() != subset.len() {
        return Err(Error::Structural(format!("map has {} images for {} points", gamma.len(), subset.len())));
    }
    let mut image = SubsetKey::EMPTY;
    for &y in gamma {
        if y.0 >= host.len() || image.contains(y) {
            return Err(Error::Structural("map must be injective into the host".into()));
        }
        image = image.with(y);
    }
    Ok(image)
}

fn gamma_of(gamma: &[PointId], local: SubsetKey) -> SubsetKey {
    SubsetKey::from_points(local.iter().map(|i| gamma[i.0]))
}

fn check_distortion(host: &FiniteDiversity, subset: SubsetKey, gamma: &[PointId], eps0: Rat) -> Result<()> {
    for local in all_subsets(subset.len()).skip(1) {
        let a = local.expand(subset);
        let ga = gamma_of(gamma, local);
        let dist = (host.value(ga) - host.value(a)).abs();
        if dist >= eps0 {
            return Err(Error::DistortionTooLarge {
                subset: host.format_subset(a),
                distortion: dist,
                bound: eps0,
            });
        }
    }
    Ok(())
}

/// Moves an admissible function on `F` to nearby points `γF` of the same host.
///
/// The result is `g = f_F^H ↾ γF`: extend `f` maximally over the host, then
/// read it on the image. It is admissible on `γF` (restrictions of admissible
/// functions are), and when `δ({a, γa}) ≤ ε₀` for every `a` it moves each value
/// by at most `|A|·ε₀`. Preconditions: `|δ(γA) − δ(A)| < ε₀` for nonempty
/// `A ⊆ F` and `δ({a, γa}) ≤ ε₀`. The output is in the local indexing of `γF`
/// (ascending host index).
pub fn perturb_to_admissible(
    host: &Arc<FiniteDiversity>,
    subset: SubsetKey,
    f: &AdmissibleFunction,
    gamma: &[PointId],
    eps0: Rat,
) -> Result<AdmissibleFunction> {
    let image = perturbation_preconditions(host, subset, f, gamma, eps0)?;
    for (i, a) in subset.iter().enumerate() {
        let moved = host.distance(a, gamma[i]);
        if moved > eps0 {
            return Err(Error::DistortionTooLarge {
                subset: host.format_subset(SubsetKey::singleton(a).with(gamma[i])),
                distortion: moved,
                bound: eps0,
            });
        }
    }
    let lifted = extension_table(host, subset, f.table());
    let table = all_subsets(image.len()).map(|local| lifted[local.expand(image).index()]).collect();
    Ok(AdmissibleFunction::trusted(Arc::new(host.restrict(image)?), table, None))
}

fn perturbation_preconditions(
    host: &FiniteDiversity,
    subset: SubsetKey,
    f: &AdmissibleFunction,
    gamma: &[PointId],
    eps0: Rat,
) -> Result<SubsetKey> {
    if subset.is_empty() {
        return Err(Error::EmptySubset);
    }
    if !eps0.is_positive() {
        return Err(Error::Structural(format!("eps0 must be positive, got {eps0}")));
    }
    if *f.base() != host.restrict(subset)? {
        return Err(Error::MixedBase);
    }
    let image = check_gamma(host, subset, gamma)?;
    check_distortion(host, subset, gamma, eps0)?;
    Ok(image)
}

/// The additive construction `g(γA_i) = f(A_i) + i·ε₀`, with subsets of `F`
/// numbered from 1 in `order` (local masks, every superset before its subsets).
///
/// Returned as a raw table over `γF` because it is generally not admissible:
/// when `f(A) = f(A ∪ B)` the earlier superset receives the smaller offset and
/// monotonicity fails.
pub fn literal_perturbation(
    host: &FiniteDiversity,
    subset: SubsetKey,
    f: &AdmissibleFunction,
    gamma: &[PointId],
    eps0: Rat,
    order: &[SubsetKey],
) -> Result<Vec<Rat>> {
    let image = perturbation_preconditions(host, subset, f, gamma, eps0)?;
    check_superset_first(subset.len(), order)?;
    let mut table = vec![Rat::ZERO; 1 << image.len()];
    for (i, &local) in order.iter().enumerate() {
        let ga = gamma_of(gamma, local).compress(image);
        table[ga.index()] = f.value(local) + Rat::from_integer(i as i128 + 1) * eps0;
    }
    Ok(table)
}

/// [`literal_perturbation`] with descending cardinality, lexicographic within a size.
pub fn literal_perturbation_default(
    host: &FiniteDiversity,
    subset: SubsetKey,
    f: &AdmissibleFunction,
    gamma: &[PointId],
    eps0: Rat,
) -> Result<Vec<Rat>> {
    literal_perturbation(host, subset, f, gamma, eps0, &superset_first_order(subset.len()))
}

/// Checks that `order` lists every nonempty subset of `n` points once, each
/// before all of its proper subsets.
pub fn check_superset_first(n: usize, order: &[SubsetKey]) -> Result<()> {
    let mut seen = vec![false; 1 << n];
    for (i, s) in order.iter().enumerate() {
        if s.is_empty() || s.index() >= seen.len() || std::mem::replace(&mut seen[s.index()], true) {
            return Err(Error::InvalidOrdering(format!("entry {} ({s:?}) is empty, out of range or repeated", i + 1)));
        }
        if let Some(later) = order[i + 1..].iter().find(|t| s.is_subset_of(**t) && s != *t) {
            return Err(Error::InvalidOrdering(format!("{s:?} is listed before its superset {later:?}")));
        }
    }
    if seen.iter().skip(1).any(|v| !v) {
        return Err(Error::InvalidOrdering("not every nonempty subset is listed".into()));
    }
    Ok(())
}

/// `ε₀ = ε / (2(2ⁿ + n))`, the per-step slack that keeps the total realization
/// error `2ⁿε₀ + ε/2 + nε₀` within `ε`.
pub fn perturbation_step(n: usize, eps: Rat) -> Rat {
    eps / (Rat::from_integer(2) * Rat::from_integer((1i128 << n) + n as i128))
}

/// Total error bound `2ⁿε₀ + ε/2 + nε₀` for a realization within `ε/2` of the perturbed function.
pub fn perturbation_budget(n: usize, eps: Rat, eps0: Rat) -> Rat {
    Rat::from_integer(1i128 << n) * eps0 + eps / Rat::from_integer(2) + Rat::from_integer(n as i128) * eps0
}
