//! Paths, exact linear combinations of paths, and the product of kQ.
//!
//! Paths are written left to right: `a₁⋯a_m` with `t(aᵢ) = s(aᵢ₊₁)`, and the
//! product `pq` is concatenation when `t(p) = s(q)`, zero otherwise.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{PathError, RelationError};
use crate::quiver::{ArrowId, VertexId, WeightedQuiver};
use crate::scalar::{Field, Scalar};

/// A trivial path `e_v` or a nonempty composable arrow sequence.
///
/// Endpoints and degree are cached at construction, and the derived order
/// is the canonical one: degree, source, target, then arrow names.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Path {
    degree: u32,
    source: VertexId,
    target: VertexId,
    arrows: Vec<ArrowId>,
}

impl Path {
    pub fn trivial(q: &WeightedQuiver, v: &VertexId) -> Result<Path, PathError> {
        if !q.has_vertex(v) {
            return Err(PathError::UnknownVertex(v.to_string()));
        }
        Ok(Path {
            degree: 0,
            source: v.clone(),
            target: v.clone(),
            arrows: Vec::new(),
        })
    }

    pub fn from_arrows(q: &WeightedQuiver, arrows: &[ArrowId]) -> Result<Path, PathError> {
        let (first, rest) = arrows.split_first().ok_or(PathError::Empty)?;
        let head = q
            .arrow(first)
            .ok_or_else(|| PathError::UnknownArrow(first.to_string()))?;
        let mut path = Path {
            degree: head.degree,
            source: head.source.clone(),
            target: head.target.clone(),
            arrows: vec![first.clone()],
        };
        for id in rest {
            let a = q.arrow(id).ok_or_else(|| PathError::UnknownArrow(id.to_string()))?;
            if a.source != path.target {
                let prev = path.arrows.last().expect("nonempty");
                return Err(PathError::NotComposable(prev.to_string(), id.to_string()));
            }
            path.degree += a.degree;
            path.target = a.target.clone();
            path.arrows.push(id.clone());
        }
        Ok(path)
    }

    /// Parses `"x*y*x"`-style arrow lists; convenience for tests and fixtures.
    pub fn parse(q: &WeightedQuiver, word: &str) -> Result<Path, PathError> {
        let ids: Vec<ArrowId> = word.split('*').map(|s| ArrowId::new(s.trim())).collect();
        Path::from_arrows(q, &ids)
    }

    pub fn source(&self) -> &VertexId {
        &self.source
    }

    pub fn target(&self) -> &VertexId {
        &self.target
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn is_trivial(&self) -> bool {
        self.arrows.is_empty()
    }

    pub fn arrows(&self) -> &[ArrowId] {
        &self.arrows
    }

    /// Number of arrows; 0 for trivial paths.
    pub fn len(&self) -> usize {
        self.arrows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.arrows.is_empty()
    }

    /// The product `self · rhs`, or `None` for zero.
    pub fn multiply(&self, rhs: &Path) -> Option<Path> {
        if self.target != rhs.source {
            return None;
        }
        let mut arrows = self.arrows.clone();
        arrows.extend(rhs.arrows.iter().cloned());
        Some(Path {
            degree: self.degree + rhs.degree,
            source: self.source.clone(),
            target: rhs.target.clone(),
            arrows,
        })
    }

    /// Rebuilds a path from parts known to be consistent.
    pub(crate) fn from_raw(degree: u32, source: VertexId, target: VertexId, arrows: Vec<ArrowId>) -> Path {
        Path {
            degree,
            source,
            target,
            arrows,
        }
    }

    /// Checks that this path exists, with the same cached data, in `q`.
    pub fn belongs_to(&self, q: &WeightedQuiver) -> bool {
        let rebuilt = if self.is_trivial() {
            Path::trivial(q, &self.source)
        } else {
            Path::from_arrows(q, &self.arrows)
        };
        rebuilt.as_ref() == Ok(self)
    }
}

impl fmt::Display for Path {
    /// `e_v` for trivial paths, otherwise `a*b*c`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.arrows.is_empty() {
            return write!(f, "e_{}", self.source);
        }
        for (i, a) in self.arrows.iter().enumerate() {
            if i > 0 {
                f.write_str("*")?;
            }
            write!(f, "{a}")?;
        }
        Ok(())
    }
}

/// A finite linear combination of paths with nonzero exact coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct PathSum {
    terms: BTreeMap<Path, Scalar>,
}

impl PathSum {
    pub fn zero() -> Self {
        PathSum::default()
    }

    pub fn from_path(p: Path, field: Field) -> Self {
        PathSum::from_terms([(p, field.one())])
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (Path, Scalar)>) -> Self {
        let mut s = PathSum::zero();
        for (p, c) in terms {
            s.add_term(p, c);
        }
        s
    }

    /// `Σ_v e_v`, the identity of kQ.
    pub fn identity(q: &WeightedQuiver, field: Field) -> Self {
        PathSum::from_terms(
            q.vertices()
                .map(|v| (Path::trivial(q, v).expect("own vertex"), field.one())),
        )
    }

    pub fn add_term(&mut self, p: Path, c: Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&p) {
            Some(existing) => {
                let sum = &*existing + &c;
                if sum.is_zero() {
                    self.terms.remove(&p);
                } else {
                    *existing = sum;
                }
            }
            None => {
                self.terms.insert(p, c);
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in canonical order.
    pub fn terms(&self) -> impl ExactSizeIterator<Item = (&Path, &Scalar)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, p: &Path) -> Option<&Scalar> {
        self.terms.get(p)
    }

    pub fn add(&self, rhs: &PathSum) -> PathSum {
        let mut out = self.clone();
        for (p, c) in rhs.terms() {
            out.add_term(p.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, rhs: &PathSum) -> PathSum {
        let mut out = self.clone();
        for (p, c) in rhs.terms() {
            out.add_term(p.clone(), -c);
        }
        out
    }

    pub fn scale(&self, c: &Scalar) -> PathSum {
        PathSum::from_terms(self.terms().map(|(p, x)| (p.clone(), x * c)))
    }

    /// Bilinear extension of [`Path::multiply`]; zero products drop out.
    pub fn multiply(&self, rhs: &PathSum) -> PathSum {
        let mut out = PathSum::zero();
        for (p, a) in self.terms() {
            for (q, b) in rhs.terms() {
                if let Some(pq) = p.multiply(q) {
                    out.add_term(pq, a * b);
                }
            }
        }
        out
    }

    /// Applies a coefficient-preserving map to every path.
    pub fn map_paths(&self, mut f: impl FnMut(&Path) -> Path) -> PathSum {
        PathSum::from_terms(self.terms().map(|(p, c)| (f(p), c.clone())))
    }

    /// Reads rational coefficients into `field`. Panics on residues from a
    /// different prime, or on a denominator the target prime divides.
    pub fn over(&self, field: Field) -> PathSum {
        PathSum::from_terms(self.terms().map(|(p, c)| {
            let v = match c {
                _ if c.field() == field => c.clone(),
                Scalar::Rational(r) => field
                    .from_fraction(r.numer(), r.denom())
                    .expect("denominator invertible in target field"),
                Scalar::Mod { .. } => panic!("cannot move residues to another field"),
            };
            (p.clone(), v)
        }))
    }

    /// Splits into uniform pieces by `(source, target, degree)`. The pieces
    /// sum back to `self`, and generate the same two-sided ideal, since each
    /// is `e_u · self · e_w` restricted to one degree.
    pub fn uniform_components(&self) -> Vec<UniformElement> {
        let mut groups: BTreeMap<(VertexId, VertexId, u32), PathSum> = BTreeMap::new();
        for (p, c) in self.terms() {
            groups
                .entry((p.source.clone(), p.target.clone(), p.degree))
                .or_default()
                .add_term(p.clone(), c.clone());
        }
        groups
            .into_iter()
            .map(|((source, target, degree), sum)| UniformElement {
                sum,
                source,
                target,
                degree,
            })
            .collect()
    }
}

impl fmt::Display for PathSum {
    /// `x*y - y*x`, `3/2*a + e_v`; the empty sum prints as `0`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (p, c)) in self.terms.iter().enumerate() {
            let negative = c.is_negative();
            match (i, negative) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let mag = c.abs();
            if !mag.is_one() {
                write!(f, "{mag}*")?;
            }
            write!(f, "{p}")?;
        }
        Ok(())
    }
}

/// A nonzero-or-zero combination of paths sharing one source, target and degree.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct UniformElement {
    sum: PathSum,
    source: VertexId,
    target: VertexId,
    degree: u32,
}

impl UniformElement {
    /// Fails unless `sum` is nonzero and uniform.
    pub fn new(sum: PathSum) -> Result<Self, RelationError> {
        let mut comps = sum.uniform_components();
        match comps.len() {
            0 => Err(RelationError::ZeroGenerator),
            1 => Ok(comps.pop().expect("one component")),
            _ => Err(RelationError::NotUniform),
        }
    }

    pub fn sum(&self) -> &PathSum {
        &self.sum
    }

    pub fn source(&self) -> &VertexId {
        &self.source
    }

    pub fn target(&self) -> &VertexId {
        &self.target
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.sum.is_zero()
    }

    /// Applies an endpoint- and degree-preserving path map.
    pub(crate) fn map_uniform(&self, f: impl FnMut(&Path) -> Path, source: VertexId, target: VertexId) -> Self {
        UniformElement {
            sum: self.sum.map_paths(f),
            source,
            target,
            degree: self.degree,
        }
    }
}

impl fmt::Display for UniformElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.sum.fmt(f)
    }
}

/// Generators `ρ₁,…,ρₙ` of a homogeneous ideal, each nonzero and uniform.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct IdealPresentation {
    generators: Vec<UniformElement>,
}

impl IdealPresentation {
    pub fn empty() -> Self {
        IdealPresentation::default()
    }

    pub fn new(generators: Vec<UniformElement>) -> Result<Self, RelationError> {
        if generators.iter().any(UniformElement::is_zero) {
            return Err(RelationError::ZeroGenerator);
        }
        Ok(IdealPresentation { generators })
    }

    /// Uniformizes arbitrary sums; zero sums contribute nothing.
    pub fn from_sums(sums: impl IntoIterator<Item = PathSum>) -> Self {
        IdealPresentation {
            generators: sums.into_iter().flat_map(|s| s.uniform_components()).collect(),
        }
    }

    pub fn generators(&self) -> &[UniformElement] {
        &self.generators
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    /// The same generators with coefficients read into `field`.
    pub fn over(&self, field: Field) -> IdealPresentation {
        IdealPresentation::from_sums(self.generators.iter().map(|g| g.sum.over(field)))
    }

    /// Checks every generator's paths against `q`.
    pub fn check_against(&self, q: &WeightedQuiver) -> Result<(), RelationError> {
        for g in &self.generators {
            for (p, _) in g.sum.terms() {
                if !p.belongs_to(q) {
                    return Err(RelationError::ForeignPath(crate::error::PathError::UnknownArrow(
                        p.to_string(),
                    )));
                }
            }
        }
        Ok(())
    }
}

/// All paths of total degree `d`, optionally filtered by endpoints, in
/// canonical order. Degree 0 gives the trivial paths.
pub fn enumerate_paths(
    q: &WeightedQuiver,
    d: u32,
    from: Option<&VertexId>,
    to: Option<&VertexId>,
) -> Vec<Path> {
    let mut out = Vec::new();
    let starts: Vec<&VertexId> = match from {
        Some(v) if q.has_vertex(v) => vec![v],
        Some(_) => vec![],
        None => q.vertices().collect(),
    };
    for v in starts {
        if d == 0 {
            if to.is_none_or(|w| w == v) {
                out.push(Path::trivial(q, v).expect("own vertex"));
            }
            continue;
        }
        let mut stack = Vec::new();
        extend_paths(q, v, d, &mut stack, to, &mut |arrows, target| {
            out.push(Path::from_raw(d, v.clone(), target.clone(), arrows.to_vec()));
        });
    }
    out.sort();
    out
}

fn extend_paths(
    q: &WeightedQuiver,
    at: &VertexId,
    remaining: u32,
    stack: &mut Vec<ArrowId>,
    to: Option<&VertexId>,
    emit: &mut dyn FnMut(&[ArrowId], &VertexId),
) {
    if remaining == 0 {
        if to.is_none_or(|w| w == at) {
            emit(stack, at);
        }
        return;
    }
    for (id, a) in q.arrows_from(at) {
        if a.degree <= remaining {
            stack.push(id.clone());
            extend_paths(q, &a.target, remaining - a.degree, stack, to, emit);
            stack.pop();
        }
    }
}

/// Number of degree-`d` paths, without materializing them.
pub fn count_paths(q: &WeightedQuiver, d: u32, from: Option<&VertexId>) -> u128 {
    // ways[v][k]: number of paths of degree k starting at v.
    let verts: Vec<&VertexId> = q.vertices().collect();
    let index = |v: &VertexId| verts.iter().position(|w| *w == v).expect("own vertex");
    let mut ways = vec![vec![0u128; d as usize + 1]; verts.len()];
    for row in ways.iter_mut() {
        row[0] = 1;
    }
    for k in 1..=d as usize {
        for (i, v) in verts.iter().enumerate() {
            let mut total = 0u128;
            for (_, a) in q.arrows_from(v) {
                let deg = a.degree as usize;
                if deg <= k {
                    total = total.saturating_add(ways[index(&a.target)][k - deg]);
                }
            }
            ways[i][k] = total;
        }
    }
    match from {
        Some(v) if q.has_vertex(v) => ways[index(v)][d as usize],
        Some(_) => 0,
        None => ways.iter().map(|r| r[d as usize]).fold(0u128, u128::saturating_add),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn names(paths: &[Path]) -> Vec<String> {
        paths.iter().map(|p| p.to_string()).collect()
    }

    #[test]
    fn trivial_paths_are_one_sided_identities() {
        let q = fixtures::two_vertex_quiver(2);
        let one = Path::trivial(&q, &VertexId::new("v1")).unwrap();
        let two = Path::trivial(&q, &VertexId::new("v2")).unwrap();
        let b = Path::parse(&q, "b").unwrap();
        assert_eq!(one.multiply(&b), Some(b.clone()));
        assert_eq!(two.multiply(&b), None);
        assert_eq!(b.multiply(&two), Some(b.clone()));
    }

    #[test]
    fn products_on_example_quiver() {
        let q = fixtures::two_vertex_quiver(2);
        let a = Path::parse(&q, "a").unwrap();
        let b = Path::parse(&q, "b").unwrap();
        assert_eq!(a.multiply(&b).unwrap().to_string(), "a*b");
        assert_eq!(b.multiply(&a), None);
    }

    #[test]
    fn non_composable_word_is_rejected() {
        let q = fixtures::two_vertex_quiver(2);
        assert_eq!(
            Path::parse(&q, "b*a"),
            Err(PathError::NotComposable("b".into(), "a".into()))
        );
        assert_eq!(Path::parse(&q, "b*q"), Err(PathError::UnknownArrow("q".into())));
    }

    #[test]
    fn commutator_products() {
        let (q, _) = fixtures::kxy();
        let f = Field::Rational;
        let x = PathSum::from_path(Path::parse(&q, "x").unwrap(), f);
        let y = PathSum::from_path(Path::parse(&q, "y").unwrap(), f);
        let comm = x.multiply(&y).sub(&y.multiply(&x));
        assert_eq!(comm.to_string(), "x*y - y*x");
        let e = PathSum::identity(&q, f);
        assert_eq!(comm.multiply(&e), comm);
        assert_eq!(e.multiply(&comm), comm);
    }

    #[test]
    fn characteristic_two_cancellation() {
        let (q, _) = fixtures::kxy();
        let f2 = Field::prime(2).unwrap();
        let p = PathSum::from_path(Path::parse(&q, "x*y").unwrap(), f2);
        assert!(p.add(&p).is_zero());
    }

    #[test]
    fn uniform_components_split_by_endpoints() {
        let (q, ideal) = fixtures::kxy();
        let rho = &ideal.generators()[0];
        assert_eq!(rho.degree(), 3);
        assert_eq!(rho.source().name(), "v");
        assert_eq!(rho.sum().uniform_components().len(), 1);

        let q32 = fixtures::two_vertex_quiver(1);
        let f = Field::Rational;
        let s = PathSum::from_terms([
            (Path::parse(&q32, "a").unwrap(), f.one()),
            (Path::parse(&q32, "c").unwrap(), f.one()),
        ]);
        let comps = s.uniform_components();
        assert_eq!(comps.len(), 2);
        let resum = comps.iter().fold(PathSum::zero(), |acc, c| acc.add(c.sum()));
        assert_eq!(resum, s);
        assert!(PathSum::zero().uniform_components().is_empty());
        let _ = q;
    }

    #[test]
    fn enumeration_on_kxy() {
        let (q, _) = fixtures::kxy();
        assert_eq!(names(&enumerate_paths(&q, 0, None, None)), ["e_v"]);
        assert_eq!(names(&enumerate_paths(&q, 2, None, None)), ["x*x", "y"]);
        assert_eq!(
            names(&enumerate_paths(&q, 4, None, None)),
            ["x*x*x*x", "x*x*y", "x*y*x", "y*x*x", "y*y"]
        );
        assert_eq!(count_paths(&q, 4, None), 5);
    }

    #[test]
    fn display_of_coefficients() {
        let (q, _) = fixtures::kxy();
        let f = Field::Rational;
        let s = PathSum::from_terms([
            (Path::parse(&q, "y").unwrap(), f.from_i64(-3)),
            (Path::parse(&q, "x*x").unwrap(), f.from_i64(2)),
        ]);
        assert_eq!(s.to_string(), "2*x*x - 3*y");
        assert_eq!(PathSum::zero().to_string(), "0");
    }
}
