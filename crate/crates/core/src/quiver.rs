//! Weighted quivers: finite directed multigraphs with positive arrow degrees.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{QuiverError, ValidationErrors};

/// A vertex name. Ordering is by name, which fixes every iteration order.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct VertexId(String);

/// An arrow name such as `b`, `b'` or `b''`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct ArrowId(String);

impl VertexId {
    pub fn new(name: impl Into<String>) -> Self {
        VertexId(name.into())
    }

    pub fn name(&self) -> &str {
        &self.0
    }
}

impl ArrowId {
    pub fn new(name: impl Into<String>) -> Self {
        ArrowId(name.into())
    }

    pub fn name(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Display for ArrowId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Arrow {
    pub source: VertexId,
    pub target: VertexId,
    pub degree: u32,
}

/// Raw arrow data as read from a file, before validation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ArrowSpec {
    pub name: String,
    pub source: String,
    pub target: String,
    pub degree: i64,
}

impl ArrowSpec {
    pub fn new(name: &str, source: &str, target: &str, degree: i64) -> Self {
        ArrowSpec {
            name: name.to_string(),
            source: source.to_string(),
            target: target.to_string(),
            degree,
        }
    }
}

/// A validated weighted quiver. Immutable once built.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct WeightedQuiver {
    vertices: BTreeSet<VertexId>,
    arrows: BTreeMap<ArrowId, Arrow>,
}

/// Checks raw quiver data, reporting every violation rather than the first.
pub fn validate(vertices: &[String], arrows: &[ArrowSpec]) -> Result<(), ValidationErrors> {
    let mut errors = Vec::new();
    let mut seen_v = BTreeSet::new();
    for v in vertices {
        if !seen_v.insert(v.as_str()) {
            errors.push(QuiverError::DuplicateVertex(v.clone()));
        }
    }
    let mut seen_a = BTreeSet::new();
    for a in arrows {
        if !seen_a.insert(a.name.as_str()) {
            errors.push(QuiverError::DuplicateArrow(a.name.clone()));
        }
        if seen_v.contains(a.name.as_str()) {
            errors.push(QuiverError::NameClash(a.name.clone()));
        }
        for end in [&a.source, &a.target] {
            if !seen_v.contains(end.as_str()) {
                errors.push(QuiverError::DanglingEndpoint {
                    arrow: a.name.clone(),
                    vertex: end.clone(),
                });
            }
        }
        if a.degree < 1 {
            errors.push(QuiverError::NonpositiveDegree {
                arrow: a.name.clone(),
                degree: a.degree,
            });
        }
    }
    if errors.is_empty() {
        Ok(())
    } else {
        Err(ValidationErrors(errors))
    }
}

impl WeightedQuiver {
    pub fn new(vertices: &[String], arrows: &[ArrowSpec]) -> Result<Self, ValidationErrors> {
        validate(vertices, arrows)?;
        Ok(WeightedQuiver {
            vertices: vertices.iter().map(|v| VertexId::new(v.clone())).collect(),
            arrows: arrows
                .iter()
                .map(|a| {
                    (
                        ArrowId::new(a.name.clone()),
                        Arrow {
                            source: VertexId::new(a.source.clone()),
                            target: VertexId::new(a.target.clone()),
                            degree: a.degree as u32,
                        },
                    )
                })
                .collect(),
        })
    }

    /// Convenience constructor for literals: `(name, source, target, degree)`.
    pub fn from_parts(vertices: &[&str], arrows: &[(&str, &str, &str, i64)]) -> Result<Self, ValidationErrors> {
        let vs: Vec<String> = vertices.iter().map(|s| s.to_string()).collect();
        let as_: Vec<ArrowSpec> = arrows
            .iter()
            .map(|&(n, s, t, d)| ArrowSpec::new(n, s, t, d))
            .collect();
        WeightedQuiver::new(&vs, &as_)
    }

    pub fn vertices(&self) -> impl ExactSizeIterator<Item = &VertexId> + Clone {
        self.vertices.iter()
    }

    pub fn arrows(&self) -> impl ExactSizeIterator<Item = (&ArrowId, &Arrow)> + Clone {
        self.arrows.iter()
    }

    pub fn arrow(&self, id: &ArrowId) -> Option<&Arrow> {
        self.arrows.get(id)
    }

    pub fn arrow_named(&self, name: &str) -> Option<(&ArrowId, &Arrow)> {
        self.arrows.get_key_value(&ArrowId::new(name))
    }

    pub fn has_vertex(&self, v: &VertexId) -> bool {
        self.vertices.contains(v)
    }

    pub fn vertex_named(&self, name: &str) -> Option<&VertexId> {
        self.vertices.get(&VertexId::new(name))
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn arrow_count(&self) -> usize {
        self.arrows.len()
    }

    /// Arrows leaving `v`, in name order.
    pub fn arrows_from<'a>(&'a self, v: &'a VertexId) -> impl Iterator<Item = (&'a ArrowId, &'a Arrow)> + 'a {
        self.arrows.iter().filter(move |(_, a)| &a.source == v)
    }

    /// Arrows entering `v`, in name order.
    pub fn arrows_into<'a>(&'a self, v: &'a VertexId) -> impl Iterator<Item = (&'a ArrowId, &'a Arrow)> + 'a {
        self.arrows.iter().filter(move |(_, a)| &a.target == v)
    }

    pub fn max_degree(&self) -> u32 {
        self.arrows.values().map(|a| a.degree).max().unwrap_or(0)
    }

    /// `(Σ deg a) − |Q₁|`; zero exactly when every arrow has degree 1.
    pub fn weight_discrepancy(&self) -> u64 {
        self.arrows.values().map(|a| u64::from(a.degree) - 1).sum()
    }

    /// Re-checks the structural invariants of an already-built quiver.
    pub fn validate(&self) -> Result<(), ValidationErrors> {
        let vs: Vec<String> = self.vertices.iter().map(|v| v.0.clone()).collect();
        let as_: Vec<ArrowSpec> = self
            .arrows
            .iter()
            .map(|(id, a)| ArrowSpec::new(&id.0, &a.source.0, &a.target.0, i64::from(a.degree)))
            .collect();
        validate(&vs, &as_)
    }

    fn name_taken(&self, name: &str) -> bool {
        self.vertices.contains(&VertexId::new(name)) || self.arrows.contains_key(&ArrowId::new(name))
    }

    /// `base`, or `base1`, `base2`, … if taken.
    pub fn fresh_vertex_name(&self, base: &str) -> VertexId {
        if !self.name_taken(base) {
            return VertexId::new(base);
        }
        (1..)
            .map(|i| format!("{base}{i}"))
            .find(|n| !self.name_taken(n))
            .map(VertexId::new)
            .expect("unbounded search")
    }

    /// Names `(b', b'')` for the halves of a split of `b`. When either is
    /// taken, the stem gets a numeric suffix: `b_1'`, `b_1''`, and so on.
    pub fn fresh_split_names(&self, b: &ArrowId) -> (ArrowId, ArrowId) {
        let free = |stem: &str| {
            let first = format!("{stem}'");
            let second = format!("{stem}''");
            (!self.name_taken(&first) && !self.name_taken(&second)).then_some((first, second))
        };
        let (first, second) = free(b.name())
            .or_else(|| (1..).find_map(|i| free(&format!("{}_{i}", b.name()))))
            .expect("unbounded search");
        (ArrowId::new(first), ArrowId::new(second))
    }

    /// Builds a quiver from already-typed parts; used by constructions that
    /// preserve validity.
    pub(crate) fn from_validated(vertices: BTreeSet<VertexId>, arrows: BTreeMap<ArrowId, Arrow>) -> Self {
        let q = WeightedQuiver { vertices, arrows };
        debug_assert!(q.validate().is_ok());
        q
    }

    pub(crate) fn vertex_set(&self) -> &BTreeSet<VertexId> {
        &self.vertices
    }

    pub(crate) fn arrow_map(&self) -> &BTreeMap<ArrowId, Arrow> {
        &self.arrows
    }
}

#[cfg(test)]
mod tests {
    use super::*;


    #[test]
    fn smallest_valid_quiver() {
        let q = WeightedQuiver::from_parts(&["v"], &[("x", "v", "v", 1)]).unwrap();
        assert_eq!(q.weight_discrepancy(), 0);
    }

    #[test]
    fn degree_zero_is_rejected() {
        let err = WeightedQuiver::from_parts(&["v"], &[("x", "v", "v", 0)]).unwrap_err();
        assert_eq!(
            err.0,
            vec![QuiverError::NonpositiveDegree { arrow: "x".into(), degree: 0 }]
        );
        assert!(err.to_string().contains("nonpositive degree"));
    }

    #[test]
    fn all_violations_are_reported() {
        let err = WeightedQuiver::from_parts(
            &["v", "v"],
            &[("x", "v", "w", -1), ("x", "u", "v", 1)],
        )
        .unwrap_err();
        assert_eq!(
            err.0,
            vec![
                QuiverError::DuplicateVertex("v".into()),
                QuiverError::DanglingEndpoint { arrow: "x".into(), vertex: "w".into() },
                QuiverError::NonpositiveDegree { arrow: "x".into(), degree: -1 },
                QuiverError::DuplicateArrow("x".into()),
                QuiverError::DanglingEndpoint { arrow: "x".into(), vertex: "u".into() },
            ]
        );
    }

    #[test]
    fn example_quiver_with_loops_and_parallel_arrows() {
        let q = crate::fixtures::two_vertex_quiver(3);
        assert!(q.validate().is_ok());
        assert_eq!(q.weight_discrepancy(), 2);
        let names: Vec<_> = q.arrows().map(|(id, _)| id.name()).collect();
        assert_eq!(names, ["a", "b", "c", "d"]);
    }

    #[test]
    fn discrepancy_values() {
        let kxy = WeightedQuiver::from_parts(&["v"], &[("x", "v", "v", 1), ("y", "v", "v", 2)]).unwrap();
        assert_eq!(kxy.weight_discrepancy(), 1);
        let empty = WeightedQuiver::from_parts(&["v", "w"], &[]).unwrap();
        assert_eq!(empty.weight_discrepancy(), 0);
        assert_eq!(empty.max_degree(), 0);
    }

    #[test]
    fn fresh_names_avoid_collisions() {
        let q = WeightedQuiver::from_parts(
            &["v", "z", "z1"],
            &[("b", "v", "v", 2), ("b'", "v", "z", 1)],
        )
        .unwrap();
        assert_eq!(q.fresh_vertex_name("z").name(), "z2");
        let (first, second) = q.fresh_split_names(&ArrowId::new("b"));
        assert_eq!((first.name(), second.name()), ("b_1'", "b_1''"));
        let kxy = WeightedQuiver::from_parts(&["v"], &[("y", "v", "v", 2)]).unwrap();
        let (first, second) = kxy.fresh_split_names(&ArrowId::new("y"));
        assert_eq!((first.name(), second.name()), ("y'", "y''"));
    }
}
