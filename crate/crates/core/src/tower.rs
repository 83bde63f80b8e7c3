//! Growing random finite diversities by repeated one-point extension, and
//! measuring how close they come to realizing every small extension.
//!
//! Each round picks a random support `S`, samples an admissible function on
//! `S`, extends it maximally to the whole current diversity and adjoins the
//! resulting point. All randomness for round `k` comes from a ChaCha stream
//! keyed by `(seed, k)`, so growing in several calls gives the same result as
//! growing in one.

use std::sync::Arc;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::diversity::{FiniteDiversity, MetricSpace};
use crate::error::{Error, Result};
use crate::extension::{amalgamate, extend_table_from_support, hub_function, is_admissible, AdmissibleFunction, Amalgamation};
use crate::homogeneity::{extension_deficit, RealizationQuery};
use crate::rat::{rat, Rat};
use crate::sample::{grid_pick, random_hub_weights, random_subset_of_size};
use crate::subset::{all_subsets, PointId, SubsetKey, DEFAULT_MAX_POINTS, HARD_MAX_POINTS};

/// Relative weights of the two function generators.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeneratorMix {
    /// Hub functions: a new point joined to each support point at a sampled cost.
    pub hub: u32,
    /// Hub functions with grid perturbations, kept only when still admissible.
    pub rejection: u32,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GrowthPolicy {
    pub rounds: usize,
    pub support_size_max: usize,
    pub value_granularity: Rat,
    pub diameter_cap: Rat,
    pub generator_mix: GeneratorMix,
    /// Largest ground set a tower may reach.
    pub max_points: usize,
    pub rejection_retries: usize,
}

impl Default for GrowthPolicy {
    fn default() -> GrowthPolicy {
        GrowthPolicy {
            rounds: 0,
            support_size_max: 3,
            value_granularity: rat(1, 8),
            diameter_cap: Rat::from(4),
            generator_mix: GeneratorMix { hub: 1, rejection: 1 },
            max_points: DEFAULT_MAX_POINTS,
            rejection_retries: 64,
        }
    }
}

impl GrowthPolicy {
    pub fn check(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidPolicy(m.to_string()));
        if !self.value_granularity.is_positive() {
            return bad("value_granularity must be positive");
        }
        if !self.diameter_cap.is_positive() {
            return bad("diameter_cap must be positive");
        }
        if self.generator_mix.hub == 0 && self.generator_mix.rejection == 0 {
            return bad("generator_mix weights must not all be zero");
        }
        if self.support_size_max == 0 {
            return bad("support_size_max must be at least 1");
        }
        if self.max_points == 0 || self.max_points > HARD_MAX_POINTS {
            return bad(&format!("max_points must be in 1..={HARD_MAX_POINTS}"));
        }
        Ok(())
    }
}

/// One adjoined point: its label, the support used and the function on the support.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct GrowthStep {
    pub round: usize,
    pub label: String,
    pub support: SubsetKey,
    /// Values on subsets of `support`, in local indexing.
    pub values: Vec<Rat>,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TowerState {
    pub initial: FiniteDiversity,
    pub current: FiniteDiversity,
    pub history: Vec<GrowthStep>,
    pub seed: u64,
}

impl TowerState {
    pub fn new(initial: FiniteDiversity, seed: u64) -> TowerState {
        TowerState { current: initial.clone(), initial, history: Vec::new(), seed }
    }

    /// A tower starting from a single point labelled `z0`.
    pub fn single_point(seed: u64) -> TowerState {
        TowerState::new(FiniteDiversity::single_point("z0").expect("valid label"), seed)
    }

    pub fn rounds(&self) -> usize {
        self.history.len()
    }
}

fn round_rng(seed: u64, round: usize, stream_offset: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(round as u64 + stream_offset);
    rng
}

/// A random Katětov function on `m`: `|r(x) − r(y)| ≤ d(x, y) ≤ r(x) + r(y)`.
///
/// Points are drawn in order, each uniformly from the grid multiples inside
/// `[max_y |r(y) − d(x, y)|, min(min_y r(y) + d(x, y), cap)]`, or the lower end
/// when no grid point fits.
pub fn random_katetov<R: Rng>(m: &MetricSpace, rng: &mut R, policy: &GrowthPolicy) -> Result<Vec<Rat>> {
    policy.check()?;
    let mut r: Vec<Rat> = Vec::with_capacity(m.len());
    for x in 0..m.len() {
        let mut lo = Rat::ZERO;
        let mut hi = policy.diameter_cap;
        for (y, &ry) in r.iter().enumerate() {
            let d = m.d(PointId(x), PointId(y));
            lo = lo.max((ry - d).abs());
            hi = hi.min(ry + d);
        }
        if lo > hi {
            return Err(Error::InfeasibleInterval { point: x, lower: lo, upper: hi });
        }
        r.push(grid_pick(lo, hi, policy.value_granularity, rng));
    }
    Ok(r)
}

/// A random admissible function on `d` with support `s`.
///
/// The hub generator joins a new point to each member of `s` at a sampled
/// cost (see [`random_hub_weights`]). The rejection generator then moves one
/// or two values on subsets of `s` by one grid step and keeps the result only
/// if it is admissible, retrying up to `policy.rejection_retries` times.
pub fn random_admissible<R: Rng>(
    d: &Arc<FiniteDiversity>,
    s: SubsetKey,
    rng: &mut R,
    policy: &GrowthPolicy,
) -> Result<AdmissibleFunction> {
    policy.check()?;
    if s.is_empty() {
        return Err(Error::EmptySupport);
    }
    let local = Arc::new(d.restrict(s)?);
    let w = random_hub_weights(&local, local.full(), rng, policy.value_granularity, policy.diameter_cap, true);
    let hub = hub_function(&local, local.full(), &w)?;
    let mix = policy.generator_mix;
    let use_rejection = rng.gen_range(0..mix.hub + mix.rejection) >= mix.hub;
    if !use_rejection {
        return extend_table_from_support(d, s, hub.table());
    }
    let step = policy.value_granularity;
    let n = local.len();
    for _ in 0..policy.rejection_retries.max(1) {
        let mut t = hub.table().to_vec();
        let changes = rng.gen_range(1..=2);
        for _ in 0..changes {
            let a = rng.gen_range(1..(1usize << n));
            let moved = if rng.gen_bool(0.5) { t[a] + step } else { t[a] - step };
            t[a] = moved.max(Rat::ZERO);
        }
        if t != hub.table() && is_admissible(&local, &t)?.ok {
            return extend_table_from_support(d, s, &t);
        }
    }
    Err(Error::GenerationExhausted { attempts: policy.rejection_retries.max(1) })
}

/// Attempts per round before giving up on drawing a function that does not
/// coincide with an existing point.
const ROUND_ATTEMPTS: usize = 256;

/// Grows `state` by `policy.rounds` points.
pub fn grow(state: &TowerState, policy: &GrowthPolicy) -> Result<TowerState> {
    policy.check()?;
    let target = state.current.len() + policy.rounds;
    if target > policy.max_points {
        return Err(Error::CapExceeded { size: target, cap: policy.max_points });
    }
    let mut next = state.clone();
    for _ in 0..policy.rounds {
        grow_one(&mut next, policy)?;
    }
    Ok(next)
}

fn grow_one(state: &mut TowerState, policy: &GrowthPolicy) -> Result<()> {
    let round = state.history.len() + 1;
    let label = format!("z{round}");
    if state.current.point(&label).is_some() {
        return Err(Error::DuplicateLabel(label));
    }
    let mut rng = round_rng(state.seed, round, 0);
    let base = Arc::new(state.current.clone());
    let n = base.len();
    for _ in 0..ROUND_ATTEMPTS {
        let size = rng.gen_range(1..=policy.support_size_max.min(n));
        let s = random_subset_of_size(n, size, &mut rng);
        let f = match random_admissible(&base, s, &mut rng, policy) {
            Ok(f) => f,
            Err(Error::GenerationExhausted { .. }) => continue,
            Err(e) => return Err(e),
        };
        match amalgamate(&base, &f, &label)? {
            Amalgamation::Identified(_) => continue,
            Amalgamation::Extended(d) => {
                let values = all_subsets(s.len()).map(|a| f.value(a.expand(s))).collect();
                state.history.push(GrowthStep { round, label, support: s, values });
                state.current = d;
                return Ok(());
            }
        }
    }
    Err(Error::GenerationExhausted { attempts: ROUND_ATTEMPTS })
}

/// Rebuilds the final diversity from the initial one and the recorded steps.
pub fn replay(initial: &FiniteDiversity, history: &[GrowthStep]) -> Result<FiniteDiversity> {
    let mut cur = Arc::new(initial.clone());
    for step in history {
        let f = extend_table_from_support(&cur, step.support, &step.values)?;
        match amalgamate(&cur, &f, &step.label)? {
            Amalgamation::Extended(d) => cur = Arc::new(d),
            Amalgamation::Identified(x) => {
                return Err(Error::Structural(format!(
                    "round {} coincides with existing point {}",
                    step.round,
                    cur.label(x)
                )))
            }
        }
    }
    Ok(Arc::try_unwrap(cur).unwrap_or_else(|a| (*a).clone()))
}

/// How each round's query battery is drawn.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum BatteryKind {
    /// Random admissible functions on random small subsets.
    Random,
    /// Copies of existing points: `f(A) = δ(A ∪ {x})` on a random subset.
    Kappa,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct BatterySpec {
    pub size: usize,
    pub kind: BatteryKind,
}

/// Queries against `d`, drawn from `rng`.
pub fn sample_battery<R: Rng>(
    d: &Arc<FiniteDiversity>,
    spec: &BatterySpec,
    policy: &GrowthPolicy,
    rng: &mut R,
) -> Result<Vec<RealizationQuery>> {
    let n = d.len();
    let mut out = Vec::with_capacity(spec.size);
    while out.len() < spec.size {
        let size = rng.gen_range(1..=policy.support_size_max.min(n));
        let s = random_subset_of_size(n, size, rng);
        let q = match spec.kind {
            BatteryKind::Kappa => RealizationQuery::kappa(d, s, PointId(rng.gen_range(0..n)))?,
            BatteryKind::Random => {
                let local = Arc::new(d.restrict(s)?);
                let f = match random_admissible(&local, local.full(), rng, policy) {
                    Ok(f) => f,
                    Err(Error::GenerationExhausted { .. }) => continue,
                    Err(e) => return Err(e),
                };
                RealizationQuery::new(d.clone(), s, f, Rat::ZERO)?
            }
        };
        out.push(q);
    }
    Ok(out)
}

/// Extension deficit after each round `0..=policy.rounds`, each against a
/// fresh battery drawn from a stream keyed by `(battery_seed, round)`.
pub fn deficit_trace(
    initial: &TowerState,
    policy: &GrowthPolicy,
    battery: &BatterySpec,
    battery_seed: u64,
) -> Result<Vec<(usize, Rat)>> {
    policy.check()?;
    let target = initial.current.len() + policy.rounds;
    if target > policy.max_points {
        return Err(Error::CapExceeded { size: target, cap: policy.max_points });
    }
    let mut state = initial.clone();
    let mut rows = Vec::with_capacity(policy.rounds + 1);
    for k in 0..=policy.rounds {
        if k > 0 {
            grow_one(&mut state, policy)?;
        }
        let round = state.history.len();
        rows.push((round, round_deficit(&state.current, round, policy, battery, battery_seed)?));
    }
    Ok(rows)
}

/// Deficits of an already grown tower, one row per recorded round.
///
/// Batteries are drawn exactly as in [`deficit_trace`], so a tower grown with
/// the same policy and seed gives the same rows.
pub fn recorded_deficits(
    state: &TowerState,
    policy: &GrowthPolicy,
    battery: &BatterySpec,
    battery_seed: u64,
) -> Result<Vec<(usize, Rat)>> {
    policy.check()?;
    let mut cur = Arc::new(state.initial.clone());
    let mut rows = Vec::with_capacity(state.history.len() + 1);
    rows.push((0, round_deficit(&cur, 0, policy, battery, battery_seed)?));
    for (k, step) in state.history.iter().enumerate() {
        let next = replay(&cur, std::slice::from_ref(step))?;
        cur = Arc::new(next);
        rows.push((k + 1, round_deficit(&cur, k + 1, policy, battery, battery_seed)?));
    }
    if *cur != state.current {
        return Err(Error::Structural("history does not replay to the current diversity".into()));
    }
    Ok(rows)
}

fn round_deficit(
    d: &FiniteDiversity,
    round: usize,
    policy: &GrowthPolicy,
    battery: &BatterySpec,
    battery_seed: u64,
) -> Result<Rat> {
    let d = Arc::new(d.clone());
    let mut rng = round_rng(battery_seed, round, 1 << 32);
    let queries = sample_battery(&d, battery, policy, &mut rng)?;
    extension_deficit(&d, &queries)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::extension::kappa;
    use crate::fixtures;
    use crate::validate::validate;

    fn policy(rounds: usize) -> GrowthPolicy {
        GrowthPolicy { rounds, ..GrowthPolicy::default() }
    }

    #[test]
    fn recorded_deficits_match_trace() {
        let p = policy(6);
        let spec = BatterySpec { size: 10, kind: BatteryKind::Random };
        let start = TowerState::single_point(21);
        let trace = deficit_trace(&start, &p, &spec, 5).unwrap();
        let grown = grow(&start, &p).unwrap();
        assert_eq!(recorded_deficits(&grown, &p, &spec, 5).unwrap(), trace);
    }

    #[test]
    fn zero_rounds_is_identity() {
        let s = TowerState::single_point(5);
        assert_eq!(grow(&s, &policy(0)).unwrap(), s);
    }

    #[test]
    fn two_rounds_from_a_point() {
        let s = grow(&TowerState::single_point(9), &policy(2)).unwrap();
        assert_eq!(s.current.len(), 3);
        assert!(validate(&s.current).ok);
        assert_eq!(replay(&s.initial, &s.history).unwrap(), s.current);
        assert_eq!(s.current.labels(), &["z0", "z1", "z2"]);
    }

    #[test]
    fn growth_composes() {
        let once = grow(&TowerState::single_point(42), &policy(5)).unwrap();
        let twice = grow(&grow(&TowerState::single_point(42), &policy(2)).unwrap(), &policy(3)).unwrap();
        assert_eq!(once, twice);
    }

    #[test]
    fn cap_is_enforced() {
        let p = GrowthPolicy { rounds: 20, ..GrowthPolicy::default() };
        assert!(matches!(grow(&TowerState::single_point(1), &p), Err(Error::CapExceeded { .. })));
    }

    #[test]
    fn katetov_examples() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let single = FiniteDiversity::single_point("x").unwrap().induced_metric();
        let r = random_katetov(&single, &mut rng, &GrowthPolicy::default()).unwrap();
        assert!(r[0] >= Rat::ZERO && r[0] <= Rat::from(4));
        let tight = GrowthPolicy { diameter_cap: rat(1, 2), ..GrowthPolicy::default() };
        let far = fixtures::pair(Rat::from(3)).induced_metric();
        assert!(matches!(random_katetov(&far, &mut rng, &tight), Err(Error::InfeasibleInterval { .. })));
    }

    #[test]
    fn zero_weight_hub_on_singleton_is_kappa() {
        let d = Arc::new(fixtures::unit_triangle(rat(2, 1)));
        let s = SubsetKey::from_indices(&[1]);
        let local = Arc::new(d.restrict(s).unwrap());
        let f = hub_function(&local, local.full(), &[Rat::ZERO]).unwrap();
        let lifted = extend_table_from_support(&d, s, f.table()).unwrap();
        assert_eq!(lifted.table(), kappa(&d, PointId(1)).table());
    }

    #[test]
    fn kappa_battery_has_no_deficit() {
        let spec = BatterySpec { size: 10, kind: BatteryKind::Kappa };
        let trace = deficit_trace(&TowerState::single_point(3), &policy(4), &spec, 17).unwrap();
        assert_eq!(trace.len(), 5);
        assert!(trace.iter().all(|(_, d)| d.is_zero()));
    }

    #[test]
    fn policy_checks() {
        let p = GrowthPolicy { generator_mix: GeneratorMix { hub: 0, rejection: 0 }, ..GrowthPolicy::default() };
        assert!(matches!(p.check(), Err(Error::InvalidPolicy(_))));
        let p = GrowthPolicy { value_granularity: Rat::ZERO, ..GrowthPolicy::default() };
        assert!(p.check().is_err());
    }
}
