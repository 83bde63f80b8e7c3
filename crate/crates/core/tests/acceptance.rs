//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Runs as a plain binary (`harness = false`). The process exits nonzero when
//! any criterion fails, except those listed in `KNOWN_FAILURES`, which print
//! FAIL with the reason and are expected to stay red.

use std::process::ExitCode;
use std::sync::Arc;
use std::time::Instant;

use divlab_core::bounds::{steiner_diversity_with, SteinerConfig, SteinerMethod};
use divlab_core::diversity::default_labels;
use divlab_core::extension::{extend_table_from_support, hat_delta_tables, is_admissible, kappa};
use divlab_core::homogeneity::{
    literal_perturbation_default, perturb_to_admissible, perturbation_budget, perturbation_step,
};
use divlab_core::io::{pretty, tower_to_value};
use divlab_core::oracle;
use divlab_core::sample::{
    admissible_walk, grid_table, perturbed_table, random_admissible_function, random_diversity, random_metric,
    random_permutation, random_subset_of_size, with_near_copies,
};
use divlab_core::subset::all_subsets;
use divlab_core::tower::{deficit_trace, grow, random_admissible, replay, BatteryKind, BatterySpec};
use divlab_core::validate::validate_table;
use divlab_core::{
    diameter_diversity, find_isomorphism, fixtures, rat, sandwich_check, steiner_diversity, validate, Error,
    FiniteDiversity, GrowthPolicy, PointId, Rat, SubsetKey, TowerState, HARD_MAX_POINTS,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Criteria that cannot be met within the crate's limits. Each still runs
/// in full and prints FAIL; it just does not change the exit status.
const KNOWN_FAILURES: &[(u32, &str)] = &[(
    10,
    "the trend needs 20 rounds from a single point, i.e. 21 points, above the 16-point hard cap",
)];

#[derive(Default)]
struct Tally {
    checked: u64,
    positive: u64,
    disagreements: u64,
}

impl Tally {
    fn record(&mut self, fast: bool, slow: bool) {
        self.checked += 1;
        self.positive += u64::from(slow);
        self.disagreements += u64::from(fast != slow);
    }
}

type Criterion = (u32, &'static str, fn() -> Outcome);

struct Outcome {
    pass: bool,
    detail: String,
}

impl Outcome {
    fn new(pass: bool, detail: impl Into<String>) -> Outcome {
        Outcome { pass, detail: detail.into() }
    }
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn grid() -> [Rat; 5] {
    [Rat::ZERO, rat(1, 2), Rat::ONE, rat(3, 2), rat(2, 1)]
}

/// Every table over `n` points with entries from `GRID`, including the empty
/// set and singletons, passed to `visit` one at a time.
fn for_each_grid_table(n: usize, mut visit: impl FnMut(&[Rat])) {
    let grid = grid();
    let size = 1usize << n;
    let mut digits = vec![0usize; size];
    let mut table = vec![grid[0]; size];
    loop {
        visit(&table);
        let mut pos = 0;
        while pos < size {
            digits[pos] += 1;
            if digits[pos] < grid.len() {
                table[pos] = grid[digits[pos]];
                break;
            }
            digits[pos] = 0;
            table[pos] = grid[0];
            pos += 1;
        }
        if pos == size {
            return;
        }
    }
}

fn random_candidate_table(n: usize, rng: &mut ChaCha8Rng) -> Vec<Rat> {
    match rng.gen_range(0..4) {
        0 => random_diversity(n, rng).table().to_vec(),
        1 => {
            let d = random_diversity(n, rng);
            let step = if rng.gen_bool(0.5) { rat(1, 2) } else { rat(1, 4) };
            let changes = rng.gen_range(1..=3);
            perturbed_table(d.table(), rng, changes, step, 2)
        }
        2 => grid_table(n, rng, &grid(), 2),
        _ => {
            let d = random_diversity(n, rng);
            perturbed_table(d.table(), rng, 1, rat(1, 2), 0)
        }
    }
}

fn criterion_1() -> Outcome {
    let compare = |tally: &mut Tally, n: usize, t: &[Rat]| {
        tally.record(validate_table(n, t).expect("well-formed table").ok, oracle::naive_validate(n, t));
    };
    let mut grid_tally = Tally::default();
    for n in 0..=3 {
        for_each_grid_table(n, |t| compare(&mut grid_tally, n, t));
    }
    let mut random_tally = Tally::default();
    let mut r = rng(1);
    for n in [4, 5] {
        for _ in 0..10_000 {
            let t = random_candidate_table(n, &mut r);
            compare(&mut random_tally, n, &t);
        }
    }
    let (g, x) = (&grid_tally, &random_tally);
    Outcome::new(
        g.disagreements + x.disagreements == 0,
        format!(
            "{} exhaustive grid tables (n <= 3, {} valid) + {} random (n = 4, 5, {} valid), {} disagreements",
            g.checked,
            g.positive,
            x.checked,
            x.positive,
            g.disagreements + x.disagreements
        ),
    )
}

/// Admissibility decided through the one-point amalgamation: `f` is a point
/// already in `d`, or adjoining a fresh point with `δ(A ∪ {z}) = f(A)` gives a
/// diversity.
fn amalgamation_oracle(d: &FiniteDiversity, f: &[Rat]) -> bool {
    let n = d.len();
    for x in d.points() {
        if all_subsets(n).all(|a| f[a.index()] == d.value(a.with(x))) {
            return true;
        }
    }
    let mut joint = d.table().to_vec();
    joint.extend_from_slice(f);
    oracle::naive_validate(n + 1, &joint)
}

fn three_point(pairs: [Rat; 3], triple: Rat) -> FiniteDiversity {
    FiniteDiversity::from_fn(default_labels(3), |s| match s.bits() {
        0b011 => pairs[0],
        0b101 => pairs[1],
        0b110 => pairs[2],
        _ => triple,
    })
    .expect("three-point base")
}

fn criterion_2() -> Outcome {
    let mut bases = vec![FiniteDiversity::single_point("p0").unwrap()];
    for v in [rat(1, 2), Rat::ONE, rat(2, 1)] {
        bases.push(FiniteDiversity::from_fn(default_labels(2), |_| v).unwrap());
    }
    bases.push(fixtures::unit_triangle(Rat::ONE));
    bases.push(fixtures::unit_triangle(rat(2, 1)));
    bases.push(three_point([Rat::ONE, Rat::ONE, rat(2, 1)], rat(2, 1)));
    bases.push(three_point([rat(1, 2), Rat::ONE, Rat::ONE], rat(3, 2)));
    let compare = |tally: &mut Tally, d: &FiniteDiversity, f: &[Rat]| {
        tally.record(is_admissible(d, f).expect("well-formed table").ok, amalgamation_oracle(d, f));
    };
    let mut grid_tally = Tally::default();
    for d in &bases {
        assert!(validate(d).ok);
        for_each_grid_table(d.len(), |f| compare(&mut grid_tally, d, f));
    }
    let mut random_tally = Tally::default();
    let mut r = rng(2);
    let policy = GrowthPolicy::default();
    for _ in 0..12_000 {
        let n = r.gen_range(1..=4);
        let d = Arc::new(random_diversity(n, &mut r));
        let f: Vec<Rat> = match r.gen_range(0..5) {
            0 => random_admissible_function(&d, 3, &mut r).into_table(),
            1 => {
                let f = random_admissible_function(&d, 3, &mut r);
                let step = if r.gen_bool(0.5) { rat(1, 2) } else { rat(1, 4) };
                let changes = r.gen_range(1..=2);
                perturbed_table(f.table(), &mut r, changes, step, 0)
            }
            2 => {
                let x = PointId(r.gen_range(0..n));
                let changes = r.gen_range(0..=1);
                perturbed_table(kappa(&d, x).table(), &mut r, changes, rat(1, 2), 0)
            }
            3 => {
                let s = random_subset_of_size(n, r.gen_range(1..=n.min(3)), &mut r);
                random_admissible(&d, s, &mut r, &policy).map(|f| f.into_table()).unwrap_or_else(|_| {
                    let mut t = grid_table(n, &mut r, &grid(), 1);
                    t[0] = Rat::ZERO;
                    t
                })
            }
            _ => {
                let mut t = grid_table(n, &mut r, &grid(), 1);
                t[0] = Rat::ZERO;
                t
            }
        };
        compare(&mut random_tally, &d, &f);
    }
    let (g, x) = (&grid_tally, &random_tally);
    Outcome::new(
        g.disagreements + x.disagreements == 0,
        format!(
            "{} exhaustive grid tables on {} bases (n <= 3, {} admissible) + {} random ({} admissible), {} disagreements",
            g.checked,
            bases.len(),
            g.positive,
            x.checked,
            x.positive,
            g.disagreements + x.disagreements
        ),
    )
}

fn criterion_3() -> Outcome {
    let mut r = rng(3);
    let mut subsets = 0u64;
    let mut failures = 0u64;
    for _ in 0..1_000 {
        let n = r.gen_range(1..=6);
        let d = Arc::new(random_diversity(n, &mut r));
        let kappas: Vec<_> = d.points().map(|x| kappa(&d, x)).collect();
        for a in all_subsets(n).skip(1) {
            let tables: Vec<&[Rat]> = a.iter().map(|x| kappas[x.0].table()).collect();
            subsets += 1;
            failures += u64::from(hat_delta_tables(n, &tables) != d.value(a));
        }
    }
    Outcome::new(failures == 0, format!("1000 diversities (n <= 6), {subsets} subsets, {failures} failures"))
}

fn criterion_4() -> Outcome {
    let mut r = rng(4);
    let policy = GrowthPolicy::default();
    let mut mismatches = 0u64;
    for _ in 0..1_500 {
        let n = r.gen_range(1..=4);
        let d = Arc::new(random_diversity(n, &mut r));
        let k = r.gen_range(1..=3);
        let members: Vec<Vec<Rat>> = (0..k)
            .map(|_| match r.gen_range(0..3) {
                0 => kappa(&d, PointId(r.gen_range(0..n))).into_table(),
                1 => random_admissible_function(&d, 3, &mut r).into_table(),
                _ => {
                    let s = random_subset_of_size(n, r.gen_range(1..=n.min(3)), &mut r);
                    match random_admissible(&d, s, &mut r, &policy) {
                        Ok(f) => f.into_table(),
                        Err(_) => kappa(&d, PointId(0)).into_table(),
                    }
                }
            })
            .collect();
        let tables: Vec<&[Rat]> = members.iter().map(|t| t.as_slice()).collect();
        mismatches += u64::from(hat_delta_tables(n, &tables) != oracle::naive_hat_delta(n, &tables));
    }
    Outcome::new(mismatches == 0, format!("1500 families (k <= 3, n <= 4), {mismatches} mismatches"))
}

fn criterion_5() -> Outcome {
    let mut r = rng(5);
    let policy = GrowthPolicy::default();
    let step = rat(1, 8);
    let (mut covers_checked, mut covers_bad) = (0u64, 0u64);
    let (mut restrict_bad, mut admissible_bad) = (0u64, 0u64);
    let (mut samples, mut maximality_bad) = (0u64, 0u64);
    let instances = 1_000;
    for _ in 0..instances {
        let n = r.gen_range(1..=6);
        let d = Arc::new(random_diversity(n, &mut r));
        let s = random_subset_of_size(n, r.gen_range(1..=n.min(4)), &mut r);
        let local = Arc::new(d.restrict(s).unwrap());
        let f = match random_admissible(&local, local.full(), &mut r, &policy) {
            Ok(f) => f,
            Err(_) => random_admissible_function(&local, 4, &mut r),
        };
        let ext = extend_table_from_support(&d, s, f.table()).expect("admissible input");
        if n <= 4 {
            covers_checked += 1;
            covers_bad += u64::from(ext.table() != oracle::all_covers_extension(&d, s, f.table()).as_slice());
        }
        let back: Vec<Rat> = all_subsets(s.len()).map(|a| ext.value(a.expand(s))).collect();
        restrict_bad += u64::from(back != f.table());
        if n <= 5 {
            admissible_bad += u64::from(!oracle::naive_admissible(&d, ext.table()));
        } else {
            admissible_bad += u64::from(!is_admissible(&d, ext.table()).unwrap().ok);
        }
        for i in 0..10 {
            let g = if i % 2 == 0 {
                admissible_walk(&d, ext.table(), s, 12, step, 0.5, &mut r)
            } else {
                // walk below the maximal extension on a larger support, then extend from there
                let extra = random_subset_of_size(n, r.gen_range(0..=n - s.len()), &mut r);
                let t = s.union(extra);
                let local_t = d.restrict(t).unwrap();
                let start: Vec<Rat> = all_subsets(t.len()).map(|a| ext.value(a.expand(t))).collect();
                let fixed = s.compress(t);
                let walked = admissible_walk(&local_t, &start, fixed, 12, step, 0.7, &mut r);
                extend_table_from_support(&d, t, &walked).expect("walk stays admissible").into_table()
            };
            samples += 1;
            let agrees_on_s = all_subsets(s.len()).all(|a| g[a.expand(s).index()] == f.value(a));
            let below = g.iter().zip(ext.table()).all(|(x, y)| x <= y);
            maximality_bad += u64::from(!agrees_on_s || !below);
        }
    }
    let bad = covers_bad + restrict_bad + admissible_bad + maximality_bad;
    Outcome::new(
        bad == 0,
        format!(
            "{instances} instances (n <= 6, |S| <= 4): all-covers {covers_bad}/{covers_checked} mismatches, restriction {restrict_bad}, \
             inadmissible {admissible_bad}, maximality {maximality_bad}/{samples} violations"
        ),
    )
}

fn criterion_6() -> Outcome {
    let mut r = rng(6);
    let exhaustive = SteinerConfig { method: SteinerMethod::Exhaustive, ..SteinerConfig::default() };
    let (mut sandwich_bad, mut oracle_bad, mut tree_bad) = (0u64, 0u64, 0u64);
    for _ in 0..1_000 {
        let n = r.gen_range(1..=6);
        let d = random_diversity(n, &mut r);
        sandwich_bad += u64::from(!sandwich_check(&d).ok);
        let m = d.induced_metric();
        let upper = oracle::exhaustive_steiner_table(&m);
        let lower_ok = all_subsets(n).all(|a| {
            let diam = a.iter().flat_map(|x| a.iter().map(move |y| (x, y))).map(|(x, y)| d.distance(x, y)).max();
            diam.unwrap_or(Rat::ZERO) <= d.value(a) && d.value(a) <= upper[a.index()]
        });
        oracle_bad += u64::from(!lower_ok);
        let dw = steiner_diversity(&m);
        tree_bad += u64::from(dw.table() != upper.as_slice());
        let ex = steiner_diversity_with(&m, &exhaustive).expect("n <= 6");
        tree_bad += u64::from(ex.table() != dw.table());
    }
    let mut metrics = 0;
    for _ in 0..300 {
        let n = r.gen_range(2..=6);
        let m = random_metric(n, &mut r, rat(1, 2), 4);
        metrics += 1;
        tree_bad += u64::from(steiner_diversity(&m).table() != oracle::exhaustive_steiner_table(&m).as_slice());
    }
    let bad = sandwich_bad + oracle_bad + tree_bad;
    Outcome::new(
        bad == 0,
        format!(
            "1000 diversities (n <= 6): sandwich {sandwich_bad}, oracle sandwich {oracle_bad} failures; \
             Dreyfus-Wagner vs tree enumeration on 1000 induced + {metrics} random metrics: {tree_bad} mismatches"
        ),
    )
}

fn criterion_7() -> Outcome {
    let abc = fixtures::triple();
    let mut notes = Vec::new();
    let two = fixtures::unit_triangle(rat(2, 1));
    let two_diam = diameter_diversity(&two.induced_metric());
    let a = validate(&two).ok && two_diam != two && two_diam.value(abc) == Rat::ONE;
    notes.push(format!("triple=2 validates, diameter triple {}", two_diam.value(abc)));
    let one = fixtures::unit_triangle(Rat::ONE);
    let one_steiner = steiner_diversity(&one.induced_metric());
    let b = validate(&one).ok && one.value(abc) < one_steiner.value(abc) && one_steiner.value(abc) == rat(2, 1);
    notes.push(format!("triple=1 validates, Steiner triple {}", one_steiner.value(abc)));
    // branches α, β, γ in hundredths over [0, 2]
    let mut minimum: Option<i64> = None;
    let mut counter = 0u64;
    let mut below_five_quarters = 0u64;
    for x in 0..=200i64 {
        for y in 0..=200i64 {
            for z in 0..=200i64 {
                if x + y >= 100 && y + z >= 100 && x + z >= 100 {
                    let s = x + y + z;
                    minimum = Some(minimum.map_or(s, |m| m.min(s)));
                    counter += u64::from(s < 150);
                    below_five_quarters += u64::from(s < 125);
                }
            }
        }
    }
    let minimum = Rat::new(minimum.unwrap_or(0) as i128, 100);
    let c = counter == 0 && below_five_quarters == 0 && minimum == rat(3, 2);
    notes.push(format!("branch scan at 1/100: {counter} counterexamples, minimum total {minimum}"));
    let centre = steiner_diversity(&fixtures::equilateral_with_centre());
    let d = centre.value(abc) == rat(3, 2);
    notes.push(format!("star through the centre {}", centre.value(abc)));
    Outcome::new(a && b && c && d, notes.join("; "))
}

fn criterion_8() -> Outcome {
    let mut r = rng(8);
    let (mut failures, mut oracle_failures, mut over_budget, mut literal_bad) = (0u64, 0u64, 0u64, 0u64);
    let instances = 1_000;
    for _ in 0..instances {
        let n0 = r.gen_range(1..=3);
        let base = random_diversity(n0, &mut r);
        let k = r.gen_range(1..=n0);
        let subset = random_subset_of_size(n0, k, &mut r);
        let eps = rat(r.gen_range(1..=8), r.gen_range(1..=8));
        let eps0 = perturbation_step(k, eps);
        let t = eps0 / Rat::from(k as i64 + 1);
        let (host, copies) = with_near_copies(&base, subset, t);
        let host = Arc::new(host);
        let gamma: Vec<PointId> =
            subset.iter().zip(&copies).map(|(a, &c)| if r.gen_bool(0.5) { c } else { a }).collect();
        let local = Arc::new(host.restrict(subset).unwrap());
        let f = random_admissible_function(&local, k, &mut r);
        let g = match perturb_to_admissible(&host, subset, &f, &gamma, eps0) {
            Ok(g) => g,
            Err(_) => {
                failures += 1;
                continue;
            }
        };
        failures += u64::from(!is_admissible(g.base(), g.table()).unwrap().ok);
        oracle_failures += u64::from(!oracle::naive_admissible(g.base(), g.table()));
        // g is indexed over γF in ascending host order; match each A ⊆ F to its image
        let image = SubsetKey::from_points(gamma.iter().copied());
        for a in all_subsets(k) {
            let ga = SubsetKey::from_points(a.iter().map(|i| gamma[i.0])).compress(image);
            let moved = (g.value(ga) - f.value(a)).abs();
            over_budget += u64::from(moved > Rat::from(a.len() as i64) * eps0);
        }
        if let Ok(lit) = literal_perturbation_default(&host, subset, &f, &gamma, eps0) {
            literal_bad += u64::from(!is_admissible(g.base(), &lit).unwrap().ok);
        }
    }
    let mut budget_ok = true;
    for n in 1..=HARD_MAX_POINTS {
        // the budget is linear in ε, so equality at ε = 1 and ε = 0 settles it for every ε
        for eps in [Rat::ONE, rat(3, 7), rat(1, 1000)] {
            let e0 = perturbation_step(n, eps);
            budget_ok &= perturbation_budget(n, eps, e0) == eps;
            budget_ok &= perturbation_budget(n, Rat::ZERO, perturbation_step(n, Rat::ZERO)).is_zero();
        }
    }
    Outcome::new(
        failures + oracle_failures + over_budget == 0 && budget_ok,
        format!(
            "{instances} instances: {failures} inadmissible or rejected, {oracle_failures} oracle failures, \
             {over_budget} values moved more than |A|*eps0; budget 2^n eps0 + eps/2 + n eps0 = eps for n <= {HARD_MAX_POINTS}: {budget_ok}; \
             additive construction inadmissible on {literal_bad}/{instances} (informational)"
        ),
    )
}

fn criterion_9() -> Outcome {
    let mut r = rng(9);
    let (mut found, mut bad) = (0u64, 0u64);
    for _ in 0..1_000 {
        let n = r.gen_range(1..=7);
        let d = random_diversity(n, &mut r);
        let order = random_permutation(n, &mut r);
        let labels: Vec<String> = (0..n).map(|i| format!("q{i}")).collect();
        let e = Arc::new(d.permuted(&order).unwrap().relabeled(labels).unwrap());
        let d = Arc::new(d);
        match find_isomorphism(&d, &e) {
            Some(phi) => {
                found += 1;
                let maps = phi.is_total()
                    && phi.verify()
                    && all_subsets(n).all(|a| {
                        let image = SubsetKey::from_points(a.iter().map(|x| phi.image(x).unwrap()));
                        e.value(image) == d.value(a)
                    });
                bad += u64::from(!maps);
            }
            None => bad += 1,
        }
    }
    let one = Arc::new(fixtures::unit_triangle(Rat::ONE));
    let two = Arc::new(fixtures::unit_triangle(rat(2, 1)));
    let fixture_none = find_isomorphism(&one, &two).is_none() && oracle::brute_force_isomorphism(&one, &two).is_none();
    Outcome::new(
        bad == 0 && found == 1_000 && fixture_none,
        format!("{found}/1000 relabeled pairs (n <= 7) recovered, {bad} invalid; triple=1 vs triple=2 none: {fixture_none}"),
    )
}

fn median(mut v: Vec<Rat>) -> Rat {
    v.sort();
    let m = v.len() / 2;
    if v.len() % 2 == 1 {
        v[m]
    } else {
        (v[m - 1] + v[m]) / Rat::from(2)
    }
}

fn criterion_10() -> Outcome {
    let mut notes = Vec::new();
    // determinism: same seed, same bytes; replay rebuilds the state
    let policy = GrowthPolicy { rounds: 11, ..GrowthPolicy::default() };
    let mut deterministic = true;
    let mut healthy = true;
    let grid = policy.value_granularity;
    for seed in 0..5u64 {
        let a = grow(&TowerState::single_point(seed), &policy).expect("11 rounds fit");
        let b = grow(&TowerState::single_point(seed), &policy).expect("11 rounds fit");
        deterministic &= pretty(&tower_to_value(&a, Some(&policy))) == pretty(&tower_to_value(&b, Some(&policy)));
        deterministic &= replay(&a.initial, &a.history).as_ref() == Ok(&a.current);
        // split growth composes with one-shot growth
        let first = grow(&TowerState::single_point(seed), &GrowthPolicy { rounds: 4, ..policy.clone() }).unwrap();
        let rest = grow(&first, &GrowthPolicy { rounds: 7, ..policy.clone() }).unwrap();
        deterministic &= rest == a;
        for k in 0..=a.history.len() {
            let state = replay(&a.initial, &a.history[..k]).expect("prefix replays");
            healthy &= validate(&state).ok;
            healthy &= state.table().iter().all(|v| v.is_multiple_of(grid));
        }
    }
    let battery = BatterySpec { size: 50, kind: BatteryKind::Random };
    let t1 = deficit_trace(&TowerState::single_point(7), &policy, &battery, 70);
    let t2 = deficit_trace(&TowerState::single_point(7), &policy, &battery, 70);
    deterministic &= t1.is_ok() && t1 == t2;
    let kappa_battery = BatterySpec { size: 50, kind: BatteryKind::Kappa };
    let zero = deficit_trace(&TowerState::single_point(3), &policy, &kappa_battery, 30)
        .map(|rows| rows.iter().all(|(_, d)| d.is_zero()))
        .unwrap_or(false);
    healthy &= zero;
    notes.push(format!("determinism {deterministic}, all rounds valid and on the 1/8 grid {healthy}"));

    // the stated trend: 30 seeds x 20 rounds, largest ground set the crate allows
    let full = GrowthPolicy { rounds: 20, max_points: HARD_MAX_POINTS, ..GrowthPolicy::default() };
    let trend = (0..30u64)
        .map(|seed| deficit_trace(&TowerState::single_point(seed), &full, &battery, 1000 + seed))
        .collect::<Result<Vec<_>, Error>>();
    let trend_pass = match &trend {
        Ok(traces) => {
            let at = |k: usize| median(traces.iter().map(|t| t[k].1).collect());
            let pass = at(20) < at(2);
            notes.push(format!("median deficit round 2 = {}, round 20 = {}", at(2), at(20)));
            pass
        }
        Err(e) => {
            notes.push(format!("30 seeds x 20 rounds: {e}"));
            false
        }
    };

    // diagnostic at the largest size the cap allows
    let widest = GrowthPolicy { rounds: HARD_MAX_POINTS - 1, max_points: HARD_MAX_POINTS, ..GrowthPolicy::default() };
    let diag = (0..30u64)
        .map(|seed| deficit_trace(&TowerState::single_point(seed), &widest, &battery, 1000 + seed))
        .collect::<Result<Vec<_>, Error>>();
    match diag {
        Ok(traces) => {
            let at = |k: usize| median(traces.iter().map(|t| t[k].1).collect());
            let last = widest.rounds;
            notes.push(format!(
                "diagnostic 30 seeds x {last} rounds: median round 2 = {}, round {last} = {}",
                at(2),
                at(last)
            ));
        }
        Err(e) => notes.push(format!("diagnostic run failed: {e}")),
    }
    Outcome::new(deterministic && healthy && trend_pass, notes.join("; "))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        (1, "axiom equivalence", criterion_1),
        (2, "admissibility via amalgamation", criterion_2),
        (3, "kappa embedding", criterion_3),
        (4, "extension diversity vs tuple enumeration", criterion_4),
        (5, "maximal extension contract", criterion_5),
        (6, "diameter/Steiner sandwich", criterion_6),
        (7, "three-point fixtures", criterion_7),
        (8, "perturbation to admissible", criterion_8),
        (9, "back-and-forth isomorphism", criterion_9),
        (10, "tower determinism, health and trend", criterion_10),
    ];
    let filter: Vec<u32> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let mut unexpected = Vec::new();
    for (id, name, run) in criteria {
        if !filter.is_empty() && !filter.contains(&id) {
            continue;
        }
        let start = Instant::now();
        let out = run();
        let secs = start.elapsed().as_secs_f64();
        let verdict = if out.pass { "PASS" } else { "FAIL" };
        println!("criterion {id:>2} {verdict} [{secs:6.1}s] {name}: {}", out.detail);
        let known = KNOWN_FAILURES.iter().find(|(k, _)| *k == id);
        match (out.pass, known) {
            (false, Some((_, why))) => println!("             known failure: {why}"),
            (false, None) => unexpected.push(id),
            (true, Some(_)) => {
                println!("             listed as a known failure but passed; update KNOWN_FAILURES");
                unexpected.push(id);
            }
            (true, None) => {}
        }
    }
    if unexpected.is_empty() {
        ExitCode::SUCCESS
    } else {
        println!("unexpected results for criteria {unexpected:?}");
        ExitCode::FAILURE
    }
}
