//! Finite diversities and their induced metrics.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::rat::Rat;
use crate::subset::{all_subsets, PointId, SubsetKey, HARD_MAX_POINTS};

/// A value table over every subset of a finite, labelled ground set.
///
/// Values on `∅` and singletons are always zero. Construction checks the
/// table's shape and sign only; whether the axioms hold is decided by
/// [`validate`](crate::validate::validate).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FiniteDiversity {
    labels: Vec<String>,
    table: Vec<Rat>,
}

pub(crate) fn check_labels(labels: &[String]) -> Result<()> {
    if labels.is_empty() {
        return Err(Error::Structural("ground set must contain at least one point".into()));
    }
    if labels.len() > HARD_MAX_POINTS {
        return Err(Error::CapExceeded { size: labels.len(), cap: HARD_MAX_POINTS });
    }
    let mut seen = HashMap::with_capacity(labels.len());
    for l in labels {
        if l.is_empty() || l.chars().any(char::is_whitespace) {
            return Err(Error::InvalidLabel(l.clone()));
        }
        if seen.insert(l.as_str(), ()).is_some() {
            return Err(Error::DuplicateLabel(l.clone()));
        }
    }
    Ok(())
}

impl FiniteDiversity {
    /// Builds a table from a value function called on every subset of size ≥ 2.
    pub fn from_fn<F>(labels: Vec<String>, mut value: F) -> Result<FiniteDiversity>
    where
        F: FnMut(SubsetKey) -> Rat,
    {
        check_labels(&labels)?;
        let table = all_subsets(labels.len()).map(|s| if s.len() < 2 { Rat::ZERO } else { value(s) }).collect();
        FiniteDiversity::from_table(labels, table)
    }

    /// Builds from a dense table indexed by subset mask (length `2^n`).
    pub fn from_table(labels: Vec<String>, table: Vec<Rat>) -> Result<FiniteDiversity> {
        check_labels(&labels)?;
        let n = labels.len();
        if table.len() != 1 << n {
            return Err(Error::Structural(format!("table has {} entries, expected {}", table.len(), 1usize << n)));
        }
        let d = FiniteDiversity { labels, table };
        for s in all_subsets(n) {
            let v = d.table[s.index()];
            if s.len() < 2 && !v.is_zero() {
                return Err(Error::Structural(format!(
                    "subset {:?} of size {} must have value 0, found {v}",
                    d.format_subset(s),
                    s.len()
                )));
            }
            if v.is_negative() {
                return Err(Error::NegativeValue { subset: d.format_subset(s), value: v });
            }
        }
        Ok(d)
    }

    /// The diversity on a single point.
    pub fn single_point(label: &str) -> Result<FiniteDiversity> {
        FiniteDiversity::from_table(vec![label.to_string()], vec![Rat::ZERO; 2])
    }

    /// Number of points.
    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, p: PointId) -> &str {
        &self.labels[p.0]
    }

    pub fn points(&self) -> impl Iterator<Item = PointId> + '_ {
        (0..self.labels.len()).map(PointId)
    }

    pub fn point(&self, label: &str) -> Option<PointId> {
        self.labels.iter().position(|l| l == label).map(PointId)
    }

    pub fn full(&self) -> SubsetKey {
        SubsetKey::full(self.len())
    }

    /// δ(A).
    #[inline]
    pub fn value(&self, s: SubsetKey) -> Rat {
        self.table[s.index()]
    }

    /// The dense table, indexed by subset mask.
    pub fn table(&self) -> &[Rat] {
        &self.table
    }

    /// Induced distance δ({a, b}).
    pub fn distance(&self, a: PointId, b: PointId) -> Rat {
        self.value(SubsetKey::singleton(a).with(b))
    }

    /// Space-separated labels of a subset's members, in point order.
    pub fn format_subset(&self, s: SubsetKey) -> String {
        s.iter().map(|p| self.labels[p.0].as_str()).collect::<Vec<_>>().join(" ")
    }

    /// Parses a space-separated label list into a subset.
    pub fn parse_subset(&self, text: &str) -> Result<SubsetKey> {
        let mut s = SubsetKey::EMPTY;
        for tok in text.split_whitespace() {
            let p = self.point(tok).ok_or_else(|| Error::UnknownLabel(tok.to_string()))?;
            if s.contains(p) {
                return Err(Error::Structural(format!("label {tok:?} repeated in subset {text:?}")));
            }
            s = s.with(p);
        }
        Ok(s)
    }

    /// The sub-diversity on `s`, keeping point order.
    pub fn restrict(&self, s: SubsetKey) -> Result<FiniteDiversity> {
        if s.is_empty() {
            return Err(Error::EmptySubset);
        }
        if !s.is_subset_of(self.full()) {
            return Err(Error::Structural(format!("subset {s:?} is not inside the ground set")));
        }
        let labels = s.iter().map(|p| self.labels[p.0].clone()).collect();
        let table = all_subsets(s.len()).map(|local| self.value(local.expand(s))).collect();
        Ok(FiniteDiversity { labels, table })
    }

    /// The induced metric d(a, b) = δ({a, b}).
    pub fn induced_metric(&self) -> MetricSpace {
        let n = self.len();
        let mut dist = vec![Rat::ZERO; n * n];
        for a in 0..n {
            for b in 0..n {
                if a != b {
                    dist[a * n + b] = self.distance(PointId(a), PointId(b));
                }
            }
        }
        MetricSpace { labels: self.labels.clone(), dist }
    }

    /// Reorders points: new point `i` is old point `order[i]`.
    pub fn permuted(&self, order: &[usize]) -> Result<FiniteDiversity> {
        let n = self.len();
        let mut seen = vec![false; n];
        if order.len() != n || order.iter().any(|&i| i >= n || std::mem::replace(&mut seen[i], true)) {
            return Err(Error::Structural("reordering is not a permutation of the ground set".into()));
        }
        let labels = order.iter().map(|&i| self.labels[i].clone()).collect();
        let table = all_subsets(n)
            .map(|s| self.value(SubsetKey::from_points(s.iter().map(|p| PointId(order[p.0])))))
            .collect();
        Ok(FiniteDiversity { labels, table })
    }

    /// Same values under new labels.
    pub fn relabeled(&self, labels: Vec<String>) -> Result<FiniteDiversity> {
        if labels.len() != self.len() {
            return Err(Error::Structural("label count does not match ground set".into()));
        }
        check_labels(&labels)?;
        Ok(FiniteDiversity { labels, table: self.table.clone() })
    }

    /// Appends a point `label` with δ(A ∪ {z}) = `with_z[A]` for A ⊆ X.
    pub(crate) fn extended_by(&self, label: &str, with_z: &[Rat]) -> Result<FiniteDiversity> {
        let n = self.len();
        debug_assert_eq!(with_z.len(), 1 << n);
        let mut labels = self.labels.clone();
        labels.push(label.to_string());
        check_labels(&labels)?;
        let mut table = Vec::with_capacity(1 << (n + 1));
        table.extend_from_slice(&self.table);
        table.extend_from_slice(with_z);
        // δ({z}) is implicit
        table[1 << n] = Rat::ZERO;
        FiniteDiversity::from_table(labels, table)
    }
}

/// A symmetric distance matrix with zero diagonal.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct MetricSpace {
    labels: Vec<String>,
    dist: Vec<Rat>,
}

impl MetricSpace {
    /// Builds a metric from a full matrix, checking symmetry, positivity off the
    /// diagonal and the triangle inequality.
    pub fn from_matrix(labels: Vec<String>, rows: Vec<Vec<Rat>>) -> Result<MetricSpace> {
        check_labels(&labels)?;
        let n = labels.len();
        if rows.len() != n || rows.iter().any(|r| r.len() != n) {
            return Err(Error::Structural(format!("distance matrix must be {n}x{n}")));
        }
        for a in 0..n {
            if !rows[a][a].is_zero() {
                return Err(Error::Structural(format!("nonzero diagonal at {}", labels[a])));
            }
            for b in 0..n {
                if rows[a][b] != rows[b][a] {
                    return Err(Error::Structural(format!("asymmetric distance {} / {}", labels[a], labels[b])));
                }
                if a != b && !rows[a][b].is_positive() {
                    return Err(Error::Structural(format!(
                        "distance between distinct points {} and {} must be positive",
                        labels[a], labels[b]
                    )));
                }
                for c in 0..n {
                    if rows[a][c] > rows[a][b] + rows[b][c] {
                        return Err(Error::Structural(format!(
                            "triangle inequality fails for {} {} {}",
                            labels[a], labels[b], labels[c]
                        )));
                    }
                }
            }
        }
        Ok(MetricSpace { labels, dist: rows.into_iter().flatten().collect() })
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    #[inline]
    pub fn d(&self, a: PointId, b: PointId) -> Rat {
        self.dist[a.0 * self.labels.len() + b.0]
    }

    pub fn rows(&self) -> Vec<Vec<Rat>> {
        self.dist.chunks(self.len()).map(<[Rat]>::to_vec).collect()
    }
}

/// Builds `n` labels `p0, p1, …`.
pub fn default_labels(n: usize) -> Vec<String> {
    (0..n).map(|i| format!("p{i}")).collect()
}
