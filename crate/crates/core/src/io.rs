//! JSON file formats.
//!
//! A diversity is `{"points": [...], "values": {"a b": "1", ...}}` with one
//! entry per subset of size ≥ 2, keyed by space-separated labels. Admissible
//! functions, realization queries and tower states build on that format.
//! Serialization is canonical: subsets ordered by size and then
//! lexicographically by point index, rationals in lowest terms, so equal
//! objects always produce identical bytes.

use std::collections::HashMap;
use std::fmt;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde::de::{Deserializer, MapAccess, Visitor};
use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};

use crate::diversity::FiniteDiversity;
use crate::error::{Error, Result};
use crate::extension::AdmissibleFunction;
use crate::homogeneity::RealizationQuery;
use crate::rat::Rat;
use crate::subset::{all_subsets, SubsetKey};
use crate::tower::{GrowthPolicy, GrowthStep, TowerState};

/// Subsets of `n` points ordered by size, then lexicographically by index.
pub fn canonical_order(n: usize) -> Vec<SubsetKey> {
    let mut v: Vec<SubsetKey> = all_subsets(n).collect();
    v.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.indices().cmp(&b.indices())));
    v
}

/// Map entries in file order, keeping duplicates so they can be reported.
#[derive(Debug, Default)]
struct Entries(Vec<(String, Rat)>);

impl<'de> Deserialize<'de> for Entries {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Entries, D::Error> {
        struct EntriesVisitor;
        impl<'de> Visitor<'de> for EntriesVisitor {
            type Value = Entries;
            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("an object mapping subsets to rational values")
            }
            fn visit_map<M: MapAccess<'de>>(self, mut map: M) -> std::result::Result<Entries, M::Error> {
                let mut out = Vec::new();
                while let Some((k, v)) = map.next_entry::<String, Rat>()? {
                    out.push((k, v));
                }
                Ok(Entries(out))
            }
        }
        deserializer.deserialize_map(EntriesVisitor)
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct DiversityFile {
    points: Vec<String>,
    values: Entries,
}

fn parse_json<'a, T: Deserialize<'a>>(text: &'a str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::parse(&e))
}

fn parse_value<T: for<'a> Deserialize<'a>>(v: Value) -> Result<T> {
    serde_json::from_value(v).map_err(|e| Error::Parse { line: 0, column: 0, message: e.to_string() })
}

fn key_name(labels: &[String], s: SubsetKey) -> String {
    s.iter().map(|p| labels[p.0].as_str()).collect::<Vec<_>>().join(" ")
}

/// Resolves entries to a dense table over subsets of `labels`.
///
/// Subsets smaller than `min_size` may be omitted and default to zero; when
/// present they must be zero if `small_must_vanish` is set.
fn resolve_entries(labels: &[String], entries: Entries, min_size: usize, small_must_vanish: bool) -> Result<Vec<Rat>> {
    let n = labels.len();
    let index: HashMap<&str, usize> = labels.iter().enumerate().map(|(i, l)| (l.as_str(), i)).collect();
    let mut table: Vec<Option<Rat>> = vec![None; 1 << n];
    for (key, value) in entries.0 {
        let mut s = SubsetKey::EMPTY;
        for tok in key.split_whitespace() {
            let &i = index.get(tok).ok_or_else(|| Error::UnknownLabel(tok.to_string()))?;
            if s.contains(crate::subset::PointId(i)) {
                return Err(Error::Structural(format!("label {tok:?} repeated in key {key:?}")));
            }
            s = s.with(crate::subset::PointId(i));
        }
        if table[s.index()].is_some() {
            return Err(Error::Structural(format!("subset {:?} listed more than once", key_name(labels, s))));
        }
        if s.len() < 2 && small_must_vanish && !value.is_zero() {
            return Err(Error::Structural(format!(
                "subset {:?} has at most one point and must have value 0, found {value}",
                key_name(labels, s)
            )));
        }
        if value.is_negative() {
            return Err(Error::NegativeValue { subset: key_name(labels, s), value });
        }
        table[s.index()] = Some(value);
    }
    let missing: Vec<String> = canonical_order(n)
        .into_iter()
        .filter(|s| s.len() >= min_size && table[s.index()].is_none())
        .map(|s| key_name(labels, s))
        .collect();
    if !missing.is_empty() {
        return Err(Error::MissingSubsets(missing));
    }
    Ok(table.into_iter().map(|v| v.unwrap_or(Rat::ZERO)).collect())
}

fn diversity_from_file(file: DiversityFile) -> Result<FiniteDiversity> {
    crate::diversity::check_labels(&file.points)?;
    let table = resolve_entries(&file.points, file.values, 2, true)?;
    FiniteDiversity::from_table(file.points, table)
}

/// Parses the diversity JSON format.
pub fn parse_diversity(text: &str) -> Result<FiniteDiversity> {
    diversity_from_file(parse_json(text)?)
}

fn values_object(labels: &[String], table: &[Rat], min_size: usize) -> Value {
    let mut m = Map::new();
    for s in canonical_order(labels.len()) {
        if s.len() >= min_size {
            m.insert(key_name(labels, s), Value::String(table[s.index()].to_string()));
        }
    }
    Value::Object(m)
}

pub fn diversity_to_value(d: &FiniteDiversity) -> Value {
    json!({ "points": d.labels(), "values": values_object(d.labels(), d.table(), 2) })
}

/// Canonical pretty-printed JSON, newline-terminated.
pub fn diversity_to_string(d: &FiniteDiversity) -> String {
    pretty(&diversity_to_value(d))
}

pub fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("values serialize");
    s.push('\n');
    s
}

/// Where an embedded base may point to a file relative to this directory.
fn load_base(v: Value, base_dir: Option<&Path>) -> Result<FiniteDiversity> {
    match v {
        Value::String(path) => {
            let p = PathBuf::from(&path);
            let p = match (p.is_relative(), base_dir) {
                (true, Some(dir)) => dir.join(p),
                _ => p,
            };
            let text = std::fs::read_to_string(&p)
                .map_err(|e| Error::Structural(format!("cannot read base {}: {e}", p.display())))?;
            parse_diversity(&text)
        }
        other => diversity_from_file(parse_value(other)?),
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct AdmissibleFile {
    base: Value,
    values: Value,
    #[serde(default)]
    support: Option<String>,
}

/// Parses `{"base": <diversity or path>, "values": {"": "0", ...}, "support": "a b"}`.
///
/// Every subset of the base, including `""` for the empty set, must be listed.
/// A declared support is verified.
pub fn parse_admissible(text: &str, base_dir: Option<&Path>) -> Result<AdmissibleFunction> {
    let file: AdmissibleFile = parse_json(text)?;
    let base = Arc::new(load_base(file.base, base_dir)?);
    let entries: Entries = parse_value(file.values)?;
    let table = resolve_entries(base.labels(), entries, 0, false)?;
    match file.support {
        None => AdmissibleFunction::new(base, table),
        Some(s) => {
            let support = base.parse_subset(&s)?;
            AdmissibleFunction::with_support(base, table, support)
        }
    }
}

/// Raw table from an admissible-function file, without the admissibility check.
pub fn parse_admissible_table(text: &str, base_dir: Option<&Path>) -> Result<(FiniteDiversity, Vec<Rat>)> {
    let file: AdmissibleFile = parse_json(text)?;
    let base = load_base(file.base, base_dir)?;
    let entries: Entries = parse_value(file.values)?;
    let table = resolve_entries(base.labels(), entries, 0, false)?;
    Ok((base, table))
}

pub fn admissible_to_value(f: &AdmissibleFunction) -> Value {
    let base = f.base();
    let mut v = json!({
        "base": diversity_to_value(base),
        "values": values_object(base.labels(), f.table(), 0),
    });
    if let Some(s) = f.support() {
        v["support"] = Value::String(base.format_subset(s));
    }
    v
}

pub fn admissible_to_string(f: &AdmissibleFunction) -> String {
    pretty(&admissible_to_value(f))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct QueryFile {
    subset: String,
    values: Value,
    #[serde(default)]
    epsilon: Option<Rat>,
}

/// Parses `{"subset": "a b", "values": {...}, "epsilon": "0"}` against `host`.
/// Values are keyed by host labels and cover every subset of `subset`.
pub fn parse_query(text: &str, host: &Arc<FiniteDiversity>) -> Result<RealizationQuery> {
    let file: QueryFile = parse_json(text)?;
    let subset = host.parse_subset(&file.subset)?;
    if subset.is_empty() {
        return Err(Error::EmptySubset);
    }
    let local = Arc::new(host.restrict(subset)?);
    let entries: Entries = parse_value(file.values)?;
    let table = resolve_entries(local.labels(), entries, 0, false)?;
    let f = AdmissibleFunction::new(local, table)?;
    RealizationQuery::new(host.clone(), subset, f, file.epsilon.unwrap_or(Rat::ZERO))
}

pub fn query_to_value(q: &RealizationQuery) -> Value {
    json!({
        "subset": q.host.format_subset(q.subset),
        "values": values_object(q.f.base().labels(), q.f.table(), 0),
        "epsilon": q.epsilon.to_string(),
    })
}

pub fn parse_policy(text: &str) -> Result<GrowthPolicy> {
    let p: GrowthPolicy = parse_json(text)?;
    p.check()?;
    Ok(p)
}

pub fn policy_to_value(p: &GrowthPolicy) -> Value {
    serde_json::to_value(p).expect("policy serializes")
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct StepFile {
    round: usize,
    label: String,
    support: String,
    values: Value,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct TowerFile {
    seed: u64,
    #[serde(default)]
    policy: Option<GrowthPolicy>,
    initial: Value,
    history: Vec<StepFile>,
    current: Value,
}

/// Tower state plus the policy recorded with it, if any.
pub fn parse_tower(text: &str) -> Result<(TowerState, Option<GrowthPolicy>)> {
    let file: TowerFile = parse_json(text)?;
    let initial = diversity_from_file(parse_value(file.initial)?)?;
    let current = diversity_from_file(parse_value(file.current)?)?;
    let mut history = Vec::with_capacity(file.history.len());
    for step in file.history {
        let support = current.parse_subset(&step.support)?;
        let local_labels: Vec<String> = support.iter().map(|p| current.label(p).to_string()).collect();
        let entries: Entries = parse_value(step.values)?;
        let values = resolve_entries(&local_labels, entries, 0, false)?;
        history.push(GrowthStep { round: step.round, label: step.label, support, values });
    }
    if let Some(p) = &file.policy {
        p.check()?;
    }
    Ok((TowerState { initial, current, history, seed: file.seed }, file.policy))
}

pub fn tower_to_value(t: &TowerState, policy: Option<&GrowthPolicy>) -> Value {
    let history: Vec<Value> = t
        .history
        .iter()
        .map(|s| {
            let labels: Vec<String> = s.support.iter().map(|p| t.current.label(p).to_string()).collect();
            json!({
                "round": s.round,
                "label": s.label,
                "support": t.current.format_subset(s.support),
                "values": values_object(&labels, &s.values, 0),
            })
        })
        .collect();
    let mut v = json!({
        "seed": t.seed,
        "initial": diversity_to_value(&t.initial),
        "history": history,
        "current": diversity_to_value(&t.current),
    });
    if let Some(p) = policy {
        v["policy"] = policy_to_value(p);
    }
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::rat::rat;

    const TRIPLE: &str = r#"{"points": ["a","b","c"], "values": {"a b": "1", "a c": "1", "b c": "1", "a b c": "2"}}"#;

    #[test]
    fn parses_fixture() {
        let d = parse_diversity(TRIPLE).unwrap();
        assert_eq!(d, fixtures::unit_triangle(rat(2, 1)));
        assert!(crate::validate::validate(&d).ok);
    }

    #[test]
    fn missing_subset_is_named() {
        let text = r#"{"points": ["a","b","c"], "values": {"a b": "1", "a c": "1", "b c": "1"}}"#;
        assert_eq!(parse_diversity(text), Err(Error::MissingSubsets(vec!["a b c".into()])));
    }

    #[test]
    fn values_are_canonicalized() {
        let text = r#"{"points": ["a","b"], "values": {"b a": "2/4"}}"#;
        let d = parse_diversity(text).unwrap();
        assert_eq!(d.value(SubsetKey::full(2)), rat(1, 2));
        let out = diversity_to_string(&d);
        assert!(out.contains(r#""a b": "1/2""#));
        assert_eq!(parse_diversity(&out).unwrap(), d);
        assert_eq!(diversity_to_string(&parse_diversity(&out).unwrap()), out);
    }

    #[test]
    fn rejects_duplicates_and_bad_singletons() {
        let dup = r#"{"points": ["a","b"], "values": {"a b": "1", "b a": "1"}}"#;
        assert!(matches!(parse_diversity(dup), Err(Error::Structural(_))));
        let same_key = r#"{"points": ["a","b"], "values": {"a b": "1", "a b": "1"}}"#;
        assert!(matches!(parse_diversity(same_key), Err(Error::Structural(_))));
        let single = r#"{"points": ["a","b"], "values": {"a": "1", "a b": "1"}}"#;
        assert!(matches!(parse_diversity(single), Err(Error::Structural(_))));
        let zero_single = r#"{"points": ["a","b"], "values": {"a": "0", "a b": "1"}}"#;
        assert!(parse_diversity(zero_single).is_ok());
        let unknown = r#"{"points": ["a","b"], "values": {"a q": "1"}}"#;
        assert!(matches!(parse_diversity(unknown), Err(Error::UnknownLabel(_))));
    }

    #[test]
    fn syntax_errors_carry_position() {
        let Err(Error::Parse { line, .. }) = parse_diversity("{\n\"points\": [\"a\",\n}") else {
            panic!("expected parse error")
        };
        assert_eq!(line, 3);
    }

    #[test]
    fn admissible_round_trip() {
        let d = Arc::new(fixtures::unit_triangle(rat(2, 1)));
        let k = crate::extension::kappa(&d, crate::subset::PointId(0));
        let text = admissible_to_string(&k);
        let back = parse_admissible(&text, None).unwrap();
        assert_eq!(back, k);
        assert_eq!(admissible_to_string(&back), text);
    }

    #[test]
    fn tower_round_trip() {
        let p = GrowthPolicy { rounds: 3, ..GrowthPolicy::default() };
        let t = crate::tower::grow(&TowerState::single_point(8), &p).unwrap();
        let v = tower_to_value(&t, Some(&p));
        let (back, bp) = parse_tower(&pretty(&v)).unwrap();
        assert_eq!(back, t);
        assert_eq!(bp, Some(p));
    }
}
