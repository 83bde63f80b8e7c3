//! Axiom checks for value tables.
//!
//! The reduced check uses an equivalent form of the axioms: values vanish on
//! sets of size ≤ 1 and are positive elsewhere, adding a point never lowers the
//! value, and `δ(A ∪ B) ≤ δ(A) + δ(B)` whenever `A` and `B` share exactly one
//! point. Sharing one point suffices: if `x ∈ A ∩ B`, replace `B` by
//! `(B ∖ A) ∪ {x}`, which has the same union with `A` and a smaller value.
//! Overlapping subadditivity plus monotonicity then gives
//! `δ(A ∪ C) ≤ δ(A ∪ B ∪ C) ≤ δ(A ∪ B) + δ(B ∪ C)` for nonempty `B`.

use serde::Serialize;

use crate::diversity::FiniteDiversity;
use crate::error::{Error, Result};
use crate::exact::{lift_all, with_scalar, Scalar};
use crate::rat::Rat;
use crate::subset::{PointId, SubsetKey, HARD_MAX_POINTS};

/// Maximum number of violations kept in a report. Checks stop early once it is reached.
pub const MAX_VIOLATIONS: usize = 64;

/// One failed inequality: `lhs relation rhs` is what the rule requires.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct Violation {
    pub rule: &'static str,
    pub witnesses: Vec<SubsetKey>,
    pub lhs: Rat,
    pub relation: &'static str,
    pub rhs: Rat,
}

impl Violation {
    /// Human-readable form using point labels.
    pub fn describe(&self, labels: &[String]) -> String {
        let sets: Vec<String> = self
            .witnesses
            .iter()
            .map(|s| {
                let names: Vec<&str> = s.iter().map(|p| labels.get(p.0).map_or("?", String::as_str)).collect();
                format!("{{{}}}", names.join(" "))
            })
            .collect();
        format!("{}: {} {} {} fails for {}", self.rule, self.lhs, self.relation, self.rhs, sets.join(", "))
    }
}

#[derive(Clone, PartialEq, Eq, Debug, Default, Serialize)]
pub struct ValidationReport {
    pub ok: bool,
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn passed() -> ValidationReport {
        ValidationReport { ok: true, violations: Vec::new() }
    }

    pub(crate) fn from_violations(violations: Vec<Violation>) -> ValidationReport {
        ValidationReport { ok: violations.is_empty(), violations }
    }

    /// Appends another report's violations (up to the cap).
    pub fn merge(mut self, other: ValidationReport) -> ValidationReport {
        let room = MAX_VIOLATIONS.saturating_sub(self.violations.len());
        self.violations.extend(other.violations.into_iter().take(room));
        self.ok = self.ok && other.ok;
        self
    }
}

/// Gathers violations, lowering scaled values back to rationals.
pub(crate) struct Collector {
    pub(crate) violations: Vec<Violation>,
    scale: i128,
}

impl Collector {
    pub(crate) fn new(scale: i128) -> Collector {
        Collector { violations: Vec::new(), scale }
    }

    #[inline]
    pub(crate) fn full(&self) -> bool {
        self.violations.len() >= MAX_VIOLATIONS
    }

    pub(crate) fn push<S: Scalar>(
        &mut self,
        rule: &'static str,
        witnesses: &[SubsetKey],
        lhs: S,
        relation: &'static str,
        rhs: S,
    ) {
        if !self.full() {
            self.violations.push(Violation {
                rule,
                witnesses: witnesses.to_vec(),
                lhs: lhs.lower(self.scale),
                relation,
                rhs: rhs.lower(self.scale),
            });
        }
    }

    pub(crate) fn finish(self) -> ValidationReport {
        ValidationReport::from_violations(self.violations)
    }
}

/// Checks the diversity axioms on `d`.
pub fn validate(d: &FiniteDiversity) -> ValidationReport {
    reduced_check(d.len(), d.table())
}

/// Checks the axioms on a raw table over `n` points, indexed by subset mask.
///
/// Unlike [`FiniteDiversity`] construction, nonzero values on small sets and
/// negative values are reported as violations rather than rejected.
pub fn validate_table(n: usize, table: &[Rat]) -> Result<ValidationReport> {
    if n > HARD_MAX_POINTS {
        return Err(Error::CapExceeded { size: n, cap: HARD_MAX_POINTS });
    }
    if table.len() != 1 << n {
        return Err(Error::Structural(format!("table has {} entries, expected {}", table.len(), 1usize << n)));
    }
    Ok(reduced_check(n, table))
}

fn reduced_check(n: usize, table: &[Rat]) -> ValidationReport {
    with_scalar!(table, |scale: T| {
        let t: Vec<T> = lift_all(table, scale);
        let mut out = Collector::new(scale);
        check_kernel(n, &t, &mut out);
        out.finish()
    })
}

fn check_kernel<S: Scalar>(n: usize, t: &[S], out: &mut Collector) {
    let full = (1usize << n) - 1;
    for a in 0..=full {
        let key = SubsetKey(a as u32);
        if key.len() <= 1 {
            if t[a] != S::ZERO {
                out.push("vanishes-on-small-sets", &[key], t[a], "=", S::ZERO);
            }
        } else if t[a] <= S::ZERO {
            out.push("positive", &[key], t[a], ">", S::ZERO);
        }
    }
    if out.full() {
        return;
    }
    for a in 0..=full {
        let mut rest = full & !a;
        while rest != 0 {
            let y = rest & rest.wrapping_neg();
            rest &= rest - 1;
            if t[a] > t[a | y] {
                out.push("monotone", &[SubsetKey(a as u32), SubsetKey((a | y) as u32)], t[a], "<=", t[a | y]);
                if out.full() {
                    return;
                }
            }
        }
    }
    for x in 0..n {
        let bx = 1usize << x;
        let others = full & !bx;
        let mut p = others;
        loop {
            let rest = others & !p;
            let mut q = rest;
            loop {
                if q >= p {
                    let (a, b) = (p | bx, q | bx);
                    let lhs = t[a | b];
                    let rhs = t[a] + t[b];
                    if lhs > rhs {
                        out.push(
                            "subadditive",
                            &[SubsetKey(a as u32), SubsetKey(b as u32)],
                            lhs,
                            "<=",
                            rhs,
                        );
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
            p = (p - 1) & others;
        }
    }
}

/// Checks `|δ(A) − δ((A ∖ {x}) ∪ {x'})| ≤ d(x, x')` for all `A`, `x ∈ A`, `x' ∈ X`.
pub fn lipschitz_check(d: &FiniteDiversity) -> ValidationReport {
    let n = d.len();
    let table = d.table();
    with_scalar!(table, |scale: T| {
        let t: Vec<T> = lift_all(table, scale);
        let mut out = Collector::new(scale);
        'outer: for a in 1..(1usize << n) {
            let key = SubsetKey(a as u32);
            for x in key.iter() {
                for x2 in 0..n {
                    if x2 == x.0 {
                        continue;
                    }
                    let b = key.without(x).with(PointId(x2));
                    let dist = t[(1 << x.0) | (1 << x2)];
                    let diff = if t[a] >= t[b.index()] { t[a] - t[b.index()] } else { t[b.index()] - t[a] };
                    if diff > dist {
                        out.push("lipschitz", &[key, b], diff, "<=", dist);
                        if out.full() {
                            break 'outer;
                        }
                    }
                }
            }
        }
        out.finish()
    })
}
