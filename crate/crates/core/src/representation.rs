//! Graded representations truncated to a finite degree window, and the
//! functors between representations of a quiver and of its split.
//!
//! A representation assigns to each vertex `v` a run of consecutive degrees
//! where its graded pieces are known, with a dimension for each. Every
//! known run lies inside the representation's window. For an arrow `a` and
//! a degree `d` with `(s(a), d)` and `(t(a), d + deg a)` both known there is
//! a matrix `M_{a,d}`; pieces outside the known runs are unknown, not zero,
//! and nothing is ever asserted about them.
//!
//! Matrices act on columns, so a path `a₁⋯a_m` evaluates to
//! `M_{a_m} ∘ ⋯ ∘ M_{a₁}`.

use std::collections::BTreeMap;

use crate::error::RepError;
use crate::linalg::Matrix;
use crate::path::{IdealPresentation, Path, UniformElement};
use crate::quiver::{ArrowId, VertexId, WeightedQuiver};
use crate::regrade::SplitTrace;
use crate::scalar::Field;

/// Closed degree range `[lo, hi]`, never empty.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub struct DegreeWindow {
    lo: i64,
    hi: i64,
}

impl DegreeWindow {
    pub fn new(lo: i64, hi: i64) -> Result<Self, RepError> {
        if lo > hi {
            return Err(RepError::Shape(format!("empty window {lo}:{hi}")));
        }
        Ok(DegreeWindow { lo, hi })
    }

    pub fn lo(&self) -> i64 {
        self.lo
    }

    pub fn hi(&self) -> i64 {
        self.hi
    }

    pub fn contains(&self, d: i64) -> bool {
        self.lo <= d && d <= self.hi
    }

    pub fn degrees(&self) -> impl Iterator<Item = i64> {
        self.lo..=self.hi
    }

    /// The window of `M(n)`: degree `d` there is degree `d + n` here.
    pub fn shifted(&self, n: i64) -> DegreeWindow {
        DegreeWindow {
            lo: self.lo - n,
            hi: self.hi - n,
        }
    }
}

impl std::fmt::Display for DegreeWindow {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}:{}", self.lo, self.hi)
    }
}

/// Known graded pieces at one vertex: dimensions for the degrees
/// `start, start + 1, …`. An empty run knows nothing.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Spaces {
    start: i64,
    dims: Vec<usize>,
}

impl Spaces {
    pub fn new(start: i64, dims: Vec<usize>) -> Self {
        if dims.is_empty() {
            Spaces::default()
        } else {
            Spaces { start, dims }
        }
    }

    pub fn start(&self) -> i64 {
        self.start
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn get(&self, d: i64) -> Option<usize> {
        if d < self.start {
            return None;
        }
        self.dims.get((d - self.start) as usize).copied()
    }

    pub fn range(&self) -> Option<(i64, i64)> {
        (!self.dims.is_empty()).then(|| (self.start, self.start + self.dims.len() as i64 - 1))
    }

    pub fn degrees(&self) -> impl Iterator<Item = i64> {
        self.start..self.start + self.dims.len() as i64
    }

    /// Keeps the degrees in `[lo, hi]`.
    fn clip(&self, lo: i64, hi: i64) -> Spaces {
        let dims = self
            .degrees()
            .filter(|&d| lo <= d && d <= hi)
            .map(|d| self.get(d).expect("in range"))
            .collect::<Vec<_>>();
        Spaces::new(lo.max(self.start), dims)
    }

    /// Degree `d` of the result is degree `d + n` of `self`.
    fn shifted(&self, n: i64) -> Spaces {
        Spaces::new(self.start - n, self.dims.clone())
    }

    fn intersect(&self, other: &Spaces) -> (i64, i64) {
        match (self.range(), other.range()) {
            (Some((a, b)), Some((c, d))) => (a.max(c), b.min(d)),
            _ => (1, 0),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedRep {
    quiver: WeightedQuiver,
    field: Field,
    window: DegreeWindow,
    spaces: BTreeMap<VertexId, Spaces>,
    maps: BTreeMap<(ArrowId, i64), Matrix>,
}

/// One failure of `M_ρ = 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelationViolation {
    pub generator: usize,
    pub relation: String,
    pub degree: i64,
}

impl GradedRep {
    /// Builds a representation from its pieces, checking every shape.
    pub fn new(
        quiver: WeightedQuiver,
        field: Field,
        window: DegreeWindow,
        spaces: BTreeMap<VertexId, Spaces>,
        maps: BTreeMap<(ArrowId, i64), Matrix>,
    ) -> Result<Self, RepError> {
        let mut spaces = spaces;
        for (v, s) in &spaces {
            if !quiver.has_vertex(v) {
                return Err(RepError::Shape(format!("unknown vertex `{v}`")));
            }
            if let Some((lo, hi)) = s.range() {
                if !window.contains(lo) || !window.contains(hi) {
                    return Err(RepError::Shape(format!(
                        "vertex `{v}` has degrees {lo}:{hi} outside window {window}"
                    )));
                }
            }
        }
        for v in quiver.vertices() {
            spaces.entry(v.clone()).or_default();
        }
        let rep = GradedRep {
            quiver,
            field,
            window,
            spaces,
            maps,
        };
        let expected = rep.map_slots();
        if expected.len() != rep.maps.len() {
            return Err(RepError::Shape(format!(
                "expected {} arrow matrices, found {}",
                expected.len(),
                rep.maps.len()
            )));
        }
        for (a, d) in expected {
            let Some(m) = rep.maps.get(&(a.clone(), d)) else {
                return Err(RepError::Shape(format!("missing matrix for `{a}` at degree {d}")));
            };
            let arrow = rep.quiver.arrow(&a).expect("own arrow");
            let want = (
                rep.dim(&arrow.target, d + i64::from(arrow.degree)).expect("slot"),
                rep.dim(&arrow.source, d).expect("slot"),
            );
            if m.shape() != want || m.field() != field {
                return Err(RepError::Shape(format!(
                    "matrix for `{a}` at degree {d} has shape {:?}, expected {want:?}",
                    m.shape()
                )));
            }
        }
        Ok(rep)
    }

    /// Builds a representation, asking `make` for each arrow matrix.
    pub fn build(
        quiver: WeightedQuiver,
        field: Field,
        window: DegreeWindow,
        spaces: BTreeMap<VertexId, Spaces>,
        mut make: impl FnMut(&ArrowId, i64, usize, usize) -> Result<Matrix, RepError>,
    ) -> Result<Self, RepError> {
        let mut rep = GradedRep {
            quiver,
            field,
            window,
            spaces,
            maps: BTreeMap::new(),
        };
        for v in rep.quiver.vertices() {
            rep.spaces.entry(v.clone()).or_default();
        }
        let mut maps = BTreeMap::new();
        for (a, d) in rep.map_slots() {
            let arrow = rep.quiver.arrow(&a).expect("own arrow");
            let rows = rep.dim(&arrow.target, d + i64::from(arrow.degree)).expect("slot");
            let cols = rep.dim(&arrow.source, d).expect("slot");
            let m = make(&a, d, rows, cols)?;
            maps.insert((a, d), m);
        }
        GradedRep::new(rep.quiver, rep.field, rep.window, rep.spaces, maps)
    }

    /// The zero representation with every degree of the window known.
    pub fn zero(quiver: &WeightedQuiver, field: Field, window: DegreeWindow) -> Self {
        let n = (window.hi - window.lo + 1) as usize;
        let spaces = quiver
            .vertices()
            .map(|v| (v.clone(), Spaces::new(window.lo, vec![0; n])))
            .collect();
        GradedRep::build(quiver.clone(), field, window, spaces, |_, _, r, c| {
            Ok(Matrix::zeros(field, r, c))
        })
        .expect("zero representation is well formed")
    }

    /// Every `(arrow, degree)` that must carry a matrix.
    fn map_slots(&self) -> Vec<(ArrowId, i64)> {
        let mut slots = Vec::new();
        for (id, a) in self.quiver.arrows() {
            let src = &self.spaces[&a.source];
            for d in src.degrees() {
                if self.spaces[&a.target].get(d + i64::from(a.degree)).is_some() {
                    slots.push((id.clone(), d));
                }
            }
        }
        slots
    }

    pub fn quiver(&self) -> &WeightedQuiver {
        &self.quiver
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn window(&self) -> DegreeWindow {
        self.window
    }

    pub fn spaces(&self, v: &VertexId) -> &Spaces {
        &self.spaces[v]
    }

    /// Dimension of the piece at `(v, d)`, or `None` if unknown.
    pub fn dim(&self, v: &VertexId, d: i64) -> Option<usize> {
        self.spaces.get(v).and_then(|s| s.get(d))
    }

    pub fn map(&self, a: &ArrowId, d: i64) -> Option<&Matrix> {
        self.maps.get(&(a.clone(), d))
    }

    pub fn maps(&self) -> impl Iterator<Item = (&(ArrowId, i64), &Matrix)> {
        self.maps.iter()
    }

    pub fn total_dim(&self) -> usize {
        self.spaces.values().flat_map(|s| s.dims.iter()).sum()
    }

    fn overflow(v: &VertexId, d: i64) -> RepError {
        RepError::WindowOverflow {
            vertex: v.to_string(),
            degree: d,
        }
    }

    /// `M_p` at degree `d`: the composite of the arrow matrices along `p`,
    /// first arrow applied first.
    pub fn evaluate_path(&self, p: &Path, d: i64) -> Result<Matrix, RepError> {
        if !p.belongs_to(&self.quiver) {
            return Err(RepError::QuiverMismatch);
        }
        let n = self.dim(p.source(), d).ok_or_else(|| Self::overflow(p.source(), d))?;
        let mut acc = Matrix::identity(self.field, n);
        let mut deg = d;
        for a in p.arrows() {
            let arrow = self.quiver.arrow(a).expect("path belongs to quiver");
            let next = deg + i64::from(arrow.degree);
            let m = self
                .map(a, deg)
                .ok_or_else(|| Self::overflow(&arrow.target, next))?;
            acc = m.compose(&acc);
            deg = next;
        }
        Ok(acc)
    }

    /// `M_ρ = Σ αᵢ M_{pᵢ}` at degree `d`.
    pub fn evaluate_relation(&self, rho: &UniformElement, d: i64) -> Result<Matrix, RepError> {
        let rows = self
            .dim(rho.target(), d + i64::from(rho.degree()))
            .ok_or_else(|| Self::overflow(rho.target(), d + i64::from(rho.degree())))?;
        let cols = self.dim(rho.source(), d).ok_or_else(|| Self::overflow(rho.source(), d))?;
        let mut acc = Matrix::zeros(self.field, rows, cols);
        for (p, c) in rho.sum().over(self.field).terms() {
            acc = acc.add(&self.evaluate_path(p, d)?.scale(c));
        }
        Ok(acc)
    }

    /// Degrees at which every path of `rho` can be evaluated.
    pub fn interior_degrees(&self, rho: &UniformElement) -> Vec<i64> {
        self.window
            .degrees()
            .filter(|&d| {
                rho.sum()
                    .terms()
                    .all(|(p, _)| self.evaluate_path(p, d).is_ok())
                    && self.dim(rho.target(), d + i64::from(rho.degree())).is_some()
                    && self.dim(rho.source(), d).is_some()
            })
            .collect()
    }

    /// Every generator and interior degree where `M_ρ ≠ 0`.
    pub fn violations(&self, ideal: &IdealPresentation) -> Vec<RelationViolation> {
        let mut out = Vec::new();
        for (i, rho) in ideal.generators().iter().enumerate() {
            for d in self.interior_degrees(rho) {
                let m = self.evaluate_relation(rho, d).expect("interior degree");
                if !m.is_zero() {
                    out.push(RelationViolation {
                        generator: i,
                        relation: rho.to_string(),
                        degree: d,
                    });
                }
            }
        }
        out
    }

    pub fn satisfies(&self, ideal: &IdealPresentation) -> bool {
        self.violations(ideal).is_empty()
    }

    /// `M(n)`: the piece at `(v, d)` is the piece of `self` at `(v, d + n)`.
    pub fn shift(&self, n: i64) -> GradedRep {
        GradedRep {
            quiver: self.quiver.clone(),
            field: self.field,
            window: self.window.shifted(n),
            spaces: self
                .spaces
                .iter()
                .map(|(v, s)| (v.clone(), s.shifted(n)))
                .collect(),
            maps: self
                .maps
                .iter()
                .map(|((a, d), m)| ((a.clone(), d - n), m.clone()))
                .collect(),
        }
    }

    /// Componentwise direct sum; the known runs are intersected.
    pub fn direct_sum(&self, other: &GradedRep) -> Result<GradedRep, RepError> {
        if self.quiver != other.quiver || self.window != other.window || self.field != other.field {
            return Err(RepError::QuiverMismatch);
        }
        let spaces = self
            .spaces
            .iter()
            .map(|(v, s)| {
                let (lo, hi) = s.intersect(&other.spaces[v]);
                let dims = (lo..=hi)
                    .map(|d| s.get(d).expect("in range") + other.spaces[v].get(d).expect("in range"))
                    .collect();
                (v.clone(), Spaces::new(lo, dims))
            })
            .collect();
        let field = self.field;
        GradedRep::build(self.quiver.clone(), field, self.window, spaces, |a, d, r, c| {
            let x = self.map(a, d).expect("slot in both");
            let y = other.map(a, d).expect("slot in both");
            Ok(block_diagonal(field, x, y, r, c))
        })
    }
}

fn block_diagonal(field: Field, x: &Matrix, y: &Matrix, rows: usize, cols: usize) -> Matrix {
    let mut m = Matrix::zeros(field, rows, cols);
    for i in 0..x.rows() {
        for j in 0..x.cols() {
            m.set(i, j, x.get(i, j).clone());
        }
    }
    for i in 0..y.rows() {
        for j in 0..y.cols() {
            m.set(x.rows() + i, x.cols() + j, y.get(i, j).clone());
        }
    }
    m
}

/// A degree-0 map between two representations of the same quiver, given by
/// one block per known `(vertex, degree)`.
///
/// `support` records, per vertex, the degrees where the morphism is known;
/// it always lies inside the known runs of both ends.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedMorphism {
    source: GradedRep,
    target: GradedRep,
    support: BTreeMap<VertexId, (i64, i64)>,
    blocks: BTreeMap<(VertexId, i64), Matrix>,
}

impl GradedMorphism {
    /// A morphism known wherever both ends are known. Fails on a missing or
    /// misshapen block, or on a square that does not commute.
    pub fn new(
        source: GradedRep,
        target: GradedRep,
        blocks: BTreeMap<(VertexId, i64), Matrix>,
    ) -> Result<Self, RepError> {
        let support = common_support(&source, &target)?;
        GradedMorphism::with_support(source, target, support, blocks)
    }

    fn with_support(
        source: GradedRep,
        target: GradedRep,
        support: BTreeMap<VertexId, (i64, i64)>,
        blocks: BTreeMap<(VertexId, i64), Matrix>,
    ) -> Result<Self, RepError> {
        let expected: usize = support.values().map(|&(lo, hi)| (hi - lo + 1).max(0) as usize).sum();
        if expected != blocks.len() {
            return Err(RepError::Shape(format!(
                "expected {expected} morphism blocks, found {}",
                blocks.len()
            )));
        }
        for (v, &(lo, hi)) in &support {
            for d in lo..=hi {
                let m = blocks
                    .get(&(v.clone(), d))
                    .ok_or_else(|| RepError::Shape(format!("missing block at ({v}, {d})")))?;
                let want = (
                    target.dim(v, d).expect("supported"),
                    source.dim(v, d).expect("supported"),
                );
                if m.shape() != want {
                    return Err(RepError::Shape(format!(
                        "block at ({v}, {d}) has shape {:?}, expected {want:?}",
                        m.shape()
                    )));
                }
            }
        }
        let phi = GradedMorphism {
            source,
            target,
            support,
            blocks,
        };
        phi.check_squares()?;
        Ok(phi)
    }

    /// The identity of `m`.
    pub fn identity(m: &GradedRep) -> GradedMorphism {
        let blocks = m
            .spaces
            .iter()
            .flat_map(|(v, s)| {
                s.degrees()
                    .map(move |d| ((v.clone(), d), Matrix::identity(m.field, s.get(d).expect("known"))))
            })
            .collect();
        GradedMorphism::new(m.clone(), m.clone(), blocks).expect("identity is a morphism")
    }

    /// The zero morphism `m → n`.
    pub fn zero(m: &GradedRep, n: &GradedRep) -> Result<GradedMorphism, RepError> {
        let support = common_support(m, n)?;
        let blocks = support
            .iter()
            .flat_map(|(v, &(lo, hi))| {
                (lo..=hi).map(move |d| {
                    (
                        (v.clone(), d),
                        Matrix::zeros(m.field, n.dim(v, d).expect("known"), m.dim(v, d).expect("known")),
                    )
                })
            })
            .collect();
        GradedMorphism::with_support(m.clone(), n.clone(), support, blocks)
    }

    pub fn source(&self) -> &GradedRep {
        &self.source
    }

    pub fn target(&self) -> &GradedRep {
        &self.target
    }

    pub fn block(&self, v: &VertexId, d: i64) -> Option<&Matrix> {
        self.blocks.get(&(v.clone(), d))
    }

    pub fn blocks(&self) -> impl Iterator<Item = (&(VertexId, i64), &Matrix)> {
        self.blocks.iter()
    }

    pub fn support(&self) -> &BTreeMap<VertexId, (i64, i64)> {
        &self.support
    }

    /// Checks `φ_{t(a)} ∘ M_a = N_a ∘ φ_{s(a)}` wherever all four are known.
    pub fn check_squares(&self) -> Result<(), RepError> {
        for (id, a) in self.source.quiver.arrows() {
            let Some(&(lo, hi)) = self.support.get(&a.source) else { continue };
            for d in lo..=hi {
                let e = d + i64::from(a.degree);
                let (Some(m), Some(n), Some(ps), Some(pt)) = (
                    self.source.map(id, d),
                    self.target.map(id, d),
                    self.block(&a.source, d),
                    self.block(&a.target, e),
                ) else {
                    continue;
                };
                if pt.compose(m) != n.compose(ps) {
                    return Err(RepError::SquareViolation {
                        arrow: id.to_string(),
                        degree: d,
                    });
                }
            }
        }
        Ok(())
    }

    /// `self ∘ rhs`, known where both factors are.
    pub fn compose(&self, rhs: &GradedMorphism) -> Result<GradedMorphism, RepError> {
        if rhs.target != self.source {
            return Err(RepError::NotComposable);
        }
        let mut support = BTreeMap::new();
        let mut blocks = BTreeMap::new();
        for (v, &(a, b)) in &self.support {
            let Some(&(c, d)) = rhs.support.get(v) else { continue };
            let (lo, hi) = (a.max(c), b.min(d));
            if lo > hi {
                continue;
            }
            support.insert(v.clone(), (lo, hi));
            for deg in lo..=hi {
                let m = self.block(v, deg).expect("supported").compose(rhs.block(v, deg).expect("supported"));
                blocks.insert((v.clone(), deg), m);
            }
        }
        GradedMorphism::with_support(rhs.source.clone(), self.target.clone(), support, blocks)
    }

    /// Kernel object and its inclusion into the source.
    pub fn kernel(&self) -> Result<(GradedRep, GradedMorphism), RepError> {
        let field = self.source.field;
        let mut bases = BTreeMap::new();
        let mut spaces = BTreeMap::new();
        for (v, &(lo, hi)) in &self.support {
            let mut dims = Vec::new();
            for d in lo..=hi {
                let basis = self.block(v, d).expect("supported").nullspace();
                dims.push(basis.cols());
                bases.insert((v.clone(), d), basis);
            }
            spaces.insert(v.clone(), Spaces::new(lo, dims));
        }
        let src = &self.source;
        let kernel = GradedRep::build(src.quiver.clone(), field, src.window, spaces, |a, d, _, _| {
            let arrow = src.quiver.arrow(a).expect("own arrow");
            let inner = &bases[&(arrow.source.clone(), d)];
            let outer = &bases[&(arrow.target.clone(), d + i64::from(arrow.degree))];
            let image = src.map(a, d).expect("kernel slot lies in source slot").compose(inner);
            outer
                .solve(&image)
                .ok_or_else(|| RepError::Shape(format!("arrow `{a}` leaves the kernel at degree {d}")))
        })?;
        let support = spaces_support(&kernel);
        let inclusion = GradedMorphism::with_support(kernel.clone(), src.clone(), support, bases)?;
        Ok((kernel, inclusion))
    }

    /// Cokernel object and the projection from the target.
    pub fn cokernel(&self) -> Result<(GradedRep, GradedMorphism), RepError> {
        let field = self.target.field;
        let mut projections = BTreeMap::new();
        let mut sections = BTreeMap::new();
        let mut spaces = BTreeMap::new();
        for (v, &(lo, hi)) in &self.support {
            let mut dims = Vec::new();
            for d in lo..=hi {
                // Rows of P span the left nullspace, so P·φ = 0 and P is onto.
                let p = self.block(v, d).expect("supported").transpose().nullspace().transpose();
                let s = p
                    .solve(&Matrix::identity(field, p.rows()))
                    .expect("full row rank has a right inverse");
                dims.push(p.rows());
                projections.insert((v.clone(), d), p);
                sections.insert((v.clone(), d), s);
            }
            spaces.insert(v.clone(), Spaces::new(lo, dims));
        }
        let tgt = &self.target;
        let cokernel = GradedRep::build(tgt.quiver.clone(), field, tgt.window, spaces, |a, d, _, _| {
            let arrow = tgt.quiver.arrow(a).expect("own arrow");
            let section = &sections[&(arrow.source.clone(), d)];
            let proj = &projections[&(arrow.target.clone(), d + i64::from(arrow.degree))];
            Ok(proj.compose(&tgt.map(a, d).expect("cokernel slot lies in target slot").compose(section)))
        })?;
        let support = spaces_support(&cokernel);
        let projection = GradedMorphism::with_support(tgt.clone(), cokernel.clone(), support, projections)?;
        Ok((cokernel, projection))
    }

    /// Conjugates both ends: `ψ = u ∘ φ ∘ t⁻¹` where `t`, `u` are isomorphisms
    /// out of the source and target.
    pub fn transport(&self, t: &GradedMorphism, u: &GradedMorphism) -> Result<GradedMorphism, RepError> {
        let t_inv = t.inverse()?;
        u.compose(self)?.compose(&t_inv)
    }

    /// Inverse of a morphism whose blocks are all invertible.
    pub fn inverse(&self) -> Result<GradedMorphism, RepError> {
        let mut blocks = BTreeMap::new();
        for (k, m) in &self.blocks {
            let inv = m
                .inverse()
                .ok_or_else(|| RepError::Shape(format!("block at ({}, {}) is not invertible", k.0, k.1)))?;
            blocks.insert(k.clone(), inv);
        }
        GradedMorphism::with_support(self.target.clone(), self.source.clone(), self.support.clone(), blocks)
    }

    /// True when every block is square and invertible.
    pub fn is_isomorphism(&self) -> bool {
        self.blocks.values().all(|m| m.rows() == m.cols() && m.rank() == m.rows())
    }
}

fn spaces_support(m: &GradedRep) -> BTreeMap<VertexId, (i64, i64)> {
    m.spaces
        .iter()
        .filter_map(|(v, s)| s.range().map(|r| (v.clone(), r)))
        .collect()
}

fn common_support(a: &GradedRep, b: &GradedRep) -> Result<BTreeMap<VertexId, (i64, i64)>, RepError> {
    if a.quiver != b.quiver || a.field != b.field {
        return Err(RepError::QuiverMismatch);
    }
    Ok(a.spaces
        .iter()
        .filter_map(|(v, s)| {
            let (lo, hi) = s.intersect(&b.spaces[v]);
            (lo <= hi).then(|| (v.clone(), (lo, hi)))
        })
        .collect())
}

/// Direction of a split functor on morphisms.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    F,
    G,
}

/// `F(M)` on the split quiver: `F(M)_z = M_{s(b)}(−1)`, `F(M)_{b'}` the
/// identity in degree 1, `F(M)_{b''} = M_b`, everything else unchanged.
///
/// `F(M)_z` at degree `d` is `M_{s(b)}` at `d − 1`; the degree that would
/// land above the window is dropped.
pub fn functor_f(t: &SplitTrace, m: &GradedRep) -> Result<GradedRep, RepError> {
    if m.quiver != t.before {
        return Err(RepError::QuiverMismatch);
    }
    let b = t.split_data();
    let spaces = f_spaces(t, &m.spaces, m.window);
    let field = m.field;
    GradedRep::build(t.after.clone(), field, m.window, spaces, |a, d, rows, cols| {
        if *a == t.first {
            debug_assert_eq!(rows, cols);
            Ok(Matrix::identity(field, cols))
        } else if *a == t.second {
            m.map(&t.split_arrow, d - 1)
                .cloned()
                .ok_or_else(|| GradedRep::overflow(&b.target, d - 1 + i64::from(b.degree)))
        } else {
            Ok(m.map(a, d).expect("unchanged arrow keeps its slots").clone())
        }
    })
}

fn f_spaces(t: &SplitTrace, spaces: &BTreeMap<VertexId, Spaces>, window: DegreeWindow) -> BTreeMap<VertexId, Spaces> {
    let b = t.split_data();
    let mut out = spaces.clone();
    let z = spaces[&b.source].shifted(-1).clip(window.lo, window.hi);
    out.insert(t.new_vertex.clone(), z);
    out
}

/// `G(N)` on the original quiver: drops `z` and sets `G(N)_b = N_{b''} ∘ N_{b'}`.
pub fn functor_g(t: &SplitTrace, n: &GradedRep) -> Result<GradedRep, RepError> {
    if n.quiver != t.after {
        return Err(RepError::QuiverMismatch);
    }
    let mut spaces = n.spaces.clone();
    spaces.remove(&t.new_vertex);
    GradedRep::build(t.before.clone(), n.field, n.window, spaces, |a, d, _, _| {
        if *a == t.split_arrow {
            let first = n
                .map(&t.first, d)
                .ok_or_else(|| GradedRep::overflow(&t.new_vertex, d + 1))?;
            let second = n
                .map(&t.second, d + 1)
                .ok_or_else(|| GradedRep::overflow(&t.new_vertex, d + 1))?;
            Ok(second.compose(first))
        } else {
            Ok(n.map(a, d).expect("unchanged arrow keeps its slots").clone())
        }
    })
}

/// `F(φ)` or `G(ψ)`. The input's squares are checked first, and the image's
/// squares are checked again on construction.
pub fn functor_on_morphism(
    t: &SplitTrace,
    direction: Direction,
    phi: &GradedMorphism,
) -> Result<GradedMorphism, RepError> {
    phi.check_squares()?;
    match direction {
        Direction::F => {
            let source = functor_f(t, &phi.source)?;
            let target = functor_f(t, &phi.target)?;
            let s = &t.split_data().source;
            let mut support = phi.support.clone();
            let mut blocks = phi.blocks.clone();
            if let Some(&(lo, hi)) = phi.support.get(s) {
                let (lo, hi) = (lo + 1, (hi + 1).min(phi.source.window.hi));
                if lo <= hi {
                    support.insert(t.new_vertex.clone(), (lo, hi));
                    for d in lo..=hi {
                        blocks.insert((t.new_vertex.clone(), d), phi.block(s, d - 1).expect("supported").clone());
                    }
                }
            }
            GradedMorphism::with_support(source, target, support, blocks)
        }
        Direction::G => {
            let source = functor_g(t, &phi.source)?;
            let target = functor_g(t, &phi.target)?;
            let mut support = phi.support.clone();
            support.remove(&t.new_vertex);
            let blocks = phi
                .blocks
                .iter()
                .filter(|((v, _), _)| *v != t.new_vertex)
                .map(|(k, m)| (k.clone(), m.clone()))
                .collect();
            GradedMorphism::with_support(source, target, support, blocks)
        }
    }
}

/// The counit `ε_N: FG(N) → N`: identities away from `z`, and at `(z, d)`
/// the block `N_{b'}` at degree `d − 1`, read as a degree-0 map out of
/// `N_{s(b)}(−1)`.
pub fn counit_epsilon(t: &SplitTrace, n: &GradedRep) -> Result<GradedMorphism, RepError> {
    let fg = functor_f(t, &functor_g(t, n)?)?;
    let support = common_support(&fg, n)?;
    let mut blocks = BTreeMap::new();
    for (v, &(lo, hi)) in &support {
        for d in lo..=hi {
            let block = if *v == t.new_vertex {
                n.map(&t.first, d - 1)
                    .ok_or_else(|| GradedRep::overflow(v, d))?
                    .clone()
            } else {
                Matrix::identity(n.field, n.dim(v, d).expect("supported"))
            };
            blocks.insert((v.clone(), d), block);
        }
    }
    GradedMorphism::with_support(fg, n.clone(), support, blocks)
}

/// `F` along a whole trace, first split first.
pub fn functor_f_along(trace: &[SplitTrace], m: &GradedRep) -> Result<GradedRep, RepError> {
    trace.iter().try_fold(m.clone(), |acc, t| functor_f(t, &acc))
}

/// `G` along a whole trace, last split first.
pub fn functor_g_along(trace: &[SplitTrace], n: &GradedRep) -> Result<GradedRep, RepError> {
    trace.iter().rev().try_fold(n.clone(), |acc, t| functor_g(t, &acc))
}
