//! Seeded generators for quivers, relations, paths, representations and
//! morphisms. Each trial draws from its own stream of a ChaCha generator
//! keyed by `(master seed, trial index)`, so results do not depend on the
//! order in which trials run.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::RepError;
use crate::linalg::Matrix;
use crate::path::{enumerate_paths, IdealPresentation, Path, PathSum};
use crate::quiver::{ArrowId, ArrowSpec, VertexId, WeightedQuiver};
use crate::representation::{DegreeWindow, GradedMorphism, GradedRep, Spaces};
use crate::scalar::{Field, Scalar};

/// The generator for one trial.
pub fn trial_rng(master_seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
    rng.set_stream(trial);
    rng
}

/// Uniform over `-2..=2` for ℚ, uniform over all residues for F_p.
pub fn scalar(rng: &mut impl Rng, field: Field) -> Scalar {
    match field {
        Field::Rational => field.from_i64(rng.gen_range(-2..=2)),
        Field::Prime(p) => field.from_i64(rng.gen_range(0..p) as i64),
    }
}

pub fn nonzero_scalar(rng: &mut impl Rng, field: Field) -> Scalar {
    loop {
        let s = scalar(rng, field);
        if !s.is_zero() {
            return s;
        }
    }
}

pub fn matrix(rng: &mut impl Rng, field: Field, rows: usize, cols: usize) -> Matrix {
    Matrix::from_rows(
        field,
        cols,
        (0..rows)
            .map(|_| (0..cols).map(|_| scalar(rng, field)).collect())
            .collect(),
    )
}

/// An invertible matrix, as a product of random unit lower and upper
/// triangular factors with a random nonzero diagonal.
pub fn invertible(rng: &mut impl Rng, field: Field, n: usize) -> Matrix {
    let mut lower = Matrix::identity(field, n);
    let mut upper = Matrix::identity(field, n);
    for i in 0..n {
        upper.set(i, i, nonzero_scalar(rng, field));
        for j in 0..i {
            lower.set(i, j, scalar(rng, field));
            upper.set(j, i, scalar(rng, field));
        }
    }
    lower.compose(&upper)
}

/// 1..=4 vertices, 1..=6 arrows, degrees 1..=3. With `need_split`, at least
/// one arrow has degree 2 or more.
pub fn quiver(rng: &mut impl Rng, need_split: bool) -> WeightedQuiver {
    let nv = rng.gen_range(1..=4);
    let na = rng.gen_range(1..=6);
    let vertices: Vec<String> = (0..nv).map(|i| format!("v{i}")).collect();
    let mut arrows: Vec<ArrowSpec> = (0..na)
        .map(|i| {
            let s = &vertices[rng.gen_range(0..nv)];
            let t = &vertices[rng.gen_range(0..nv)];
            ArrowSpec::new(&format!("a{i}"), s, t, rng.gen_range(1..=3))
        })
        .collect();
    if need_split && arrows.iter().all(|a| a.degree < 2) {
        let i = rng.gen_range(0..na);
        arrows[i].degree = rng.gen_range(2..=3);
    }
    WeightedQuiver::new(&vertices, &arrows).expect("generated quiver is valid")
}

/// 1..=3 uniform generators, each a combination of 1..=3 distinct paths
/// sharing endpoints and degree (degree at most `max_degree`). `None` if no
/// endpoint/degree class has any path.
pub fn ideal(rng: &mut impl Rng, q: &WeightedQuiver, field: Field, max_degree: u32) -> Option<IdealPresentation> {
    let mut classes: BTreeMap<(VertexId, VertexId, u32), Vec<Path>> = BTreeMap::new();
    for d in 1..=max_degree {
        for p in enumerate_paths(q, d, None, None) {
            classes
                .entry((p.source().clone(), p.target().clone(), d))
                .or_default()
                .push(p);
        }
    }
    let keys: Vec<_> = classes.keys().cloned().collect();
    if keys.is_empty() {
        return None;
    }
    let count = rng.gen_range(1..=3);
    let sums = (0..count).map(|_| {
        let key = keys.choose(rng).expect("nonempty");
        let paths = &classes[key];
        let k = rng.gen_range(1..=3.min(paths.len()));
        PathSum::from_terms(
            paths
                .choose_multiple(rng, k)
                .map(|p| (p.clone(), nonzero_scalar(rng, field))),
        )
    });
    let ideal = IdealPresentation::from_sums(sums.collect::<Vec<_>>());
    (!ideal.is_empty()).then_some(ideal)
}

/// A random walk of up to `max_len` arrows from a random vertex; may be trivial.
pub fn path(rng: &mut impl Rng, q: &WeightedQuiver, max_len: usize) -> Path {
    let vertices: Vec<&VertexId> = q.vertices().collect();
    let start = (*vertices.choose(rng).expect("quiver has a vertex")).clone();
    path_from(rng, q, &start, max_len)
}

/// A random walk of up to `max_len` arrows starting at `start`.
pub fn path_from(rng: &mut impl Rng, q: &WeightedQuiver, start: &VertexId, max_len: usize) -> Path {
    let len = rng.gen_range(0..=max_len);
    let mut arrows = Vec::new();
    let mut at = start.clone();
    for _ in 0..len {
        let out: Vec<_> = q.arrows_from(&at).collect();
        let Some(&(id, a)) = out.choose(rng) else { break };
        arrows.push(id.clone());
        at = a.target.clone();
    }
    if arrows.is_empty() {
        Path::trivial(q, start).expect("own vertex")
    } else {
        Path::from_arrows(q, &arrows).expect("walk is composable")
    }
}

/// A uniformly chosen arrow of degree at least 2.
pub fn split_target(rng: &mut impl Rng, q: &WeightedQuiver) -> Option<ArrowId> {
    let candidates: Vec<&ArrowId> = q.arrows().filter(|(_, a)| a.degree >= 2).map(|(id, _)| id).collect();
    candidates.choose(rng).map(|id| (*id).clone())
}

/// Dimensions uniform in `0..=max_dim` at every vertex and degree of the
/// window, with random arrow matrices.
pub fn representation(
    rng: &mut impl Rng,
    q: &WeightedQuiver,
    field: Field,
    window: DegreeWindow,
    max_dim: usize,
) -> GradedRep {
    let spaces = q
        .vertices()
        .map(|v| {
            let dims = window.degrees().map(|_| rng.gen_range(0..=max_dim)).collect();
            (v.clone(), Spaces::new(window.lo(), dims))
        })
        .collect();
    GradedRep::build(q.clone(), field, window, spaces, |_, _, r, c| Ok(matrix(rng, field, r, c)))
        .expect("random representation is well formed")
}

/// A random isomorphism out of `m`, returned with its target.
pub fn isomorphism(rng: &mut impl Rng, m: &GradedRep) -> Result<GradedMorphism, RepError> {
    let field = m.field();
    let mut blocks = BTreeMap::new();
    for v in m.quiver().vertices() {
        for d in m.spaces(v).degrees() {
            blocks.insert((v.clone(), d), invertible(rng, field, m.dim(v, d).expect("known")));
        }
    }
    // Conjugated arrow matrices: T_t · M_a · T_s⁻¹.
    let inverses: BTreeMap<_, _> = blocks
        .iter()
        .map(|(k, t)| (k.clone(), t.inverse().expect("invertible by construction")))
        .collect();
    let image = GradedRep::build(
        m.quiver().clone(),
        field,
        m.window(),
        m.quiver()
            .vertices()
            .map(|v| (v.clone(), m.spaces(v).clone()))
            .collect(),
        |a, d, _, _| {
            let arrow = m.quiver().arrow(a).expect("own arrow");
            let t_out = &blocks[&(arrow.target.clone(), d + i64::from(arrow.degree))];
            let t_in = &inverses[&(arrow.source.clone(), d)];
            Ok(t_out.compose(&m.map(a, d).expect("slot").compose(t_in)))
        },
    )?;
    GradedMorphism::new(m.clone(), image, blocks)
}

/// A random morphism with nontrivial kernel, image and cokernel: the map
/// `A ⊕ B → B ⊕ C`, `(a, b) ↦ (b, 0)`, conjugated by random isomorphisms
/// at both ends.
pub fn morphism(
    rng: &mut impl Rng,
    q: &WeightedQuiver,
    field: Field,
    window: DegreeWindow,
    max_dim: usize,
) -> Result<GradedMorphism, RepError> {
    let a = representation(rng, q, field, window, max_dim);
    let b = representation(rng, q, field, window, max_dim);
    let c = representation(rng, q, field, window, max_dim);
    morphism_through(rng, &a, &b, &c)
}

/// `A ⊕ B → B ⊕ C` through `B`, conjugated at both ends.
pub fn morphism_through(
    rng: &mut impl Rng,
    a: &GradedRep,
    b: &GradedRep,
    c: &GradedRep,
) -> Result<GradedMorphism, RepError> {
    let field = a.field();
    let source = a.direct_sum(b)?;
    let target = b.direct_sum(c)?;
    let mut blocks = BTreeMap::new();
    for v in a.quiver().vertices() {
        for d in source.spaces(v).degrees() {
            let (Some(da), Some(db), Some(dc)) = (a.dim(v, d), b.dim(v, d), c.dim(v, d)) else {
                continue;
            };
            let mut m = Matrix::zeros(field, db + dc, da + db);
            for i in 0..db {
                m.set(i, da + i, field.one());
            }
            blocks.insert((v.clone(), d), m);
        }
    }
    let plain = GradedMorphism::new(source.clone(), target.clone(), blocks)?;
    let t = isomorphism(rng, &source)?;
    let u = isomorphism(rng, &target)?;
    plain.transport(&t, &u)
}

/// A representation of k[x,y] (loops `x`, `y` at `v`) satisfying `xy = yx`:
/// constant dimension with the same diagonal action in every degree.
pub fn commuting_kxy(rng: &mut impl Rng, q: &WeightedQuiver, field: Field, window: DegreeWindow, max_dim: usize) -> GradedRep {
    let n = rng.gen_range(1..=max_dim.max(1));
    let mut diag = || {
        let mut m = Matrix::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, scalar(rng, field));
        }
        m
    };
    let dx = diag();
    let dy = diag();
    let len = (window.hi() - window.lo() + 1) as usize;
    let spaces = q
        .vertices()
        .map(|v| (v.clone(), Spaces::new(window.lo(), vec![n; len])))
        .collect();
    GradedRep::build(q.clone(), field, window, spaces, |a, _, _, _| {
        Ok(if a.name() == "x" { dx.clone() } else { dy.clone() })
    })
    .expect("constant diagonal representation is well formed")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn streams_are_reproducible_and_distinct() {
        let a: u64 = trial_rng(7, 3).gen();
        let b: u64 = trial_rng(7, 3).gen();
        let c: u64 = trial_rng(7, 4).gen();
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn invertible_matrices_are_invertible() {
        let mut rng = trial_rng(1, 0);
        for n in 0..5 {
            for field in [Field::Rational, Field::Prime(5)] {
                assert_eq!(invertible(&mut rng, field, n).rank(), n);
            }
        }
    }

    #[test]
    fn random_morphisms_commute() {
        let mut rng = trial_rng(2, 0);
        let w = DegreeWindow::new(-1, 4).unwrap();
        for _ in 0..5 {
            let q = quiver(&mut rng, true);
            let phi = morphism(&mut rng, &q, Field::Rational, w, 2).unwrap();
            assert!(phi.check_squares().is_ok());
        }
    }

    #[test]
    fn commuting_kxy_satisfies_relation() {
        let (q, ideal) = fixtures::kxy();
        let mut rng = trial_rng(3, 0);
        let m = commuting_kxy(&mut rng, &q, Field::Rational, DegreeWindow::new(-2, 10).unwrap(), 3);
        assert!(m.satisfies(&ideal));
    }

    #[test]
    fn random_ideals_are_uniform() {
        let mut rng = trial_rng(4, 0);
        for _ in 0..20 {
            let q = quiver(&mut rng, false);
            if let Some(ideal) = ideal(&mut rng, &q, Field::Rational, 3) {
                for g in ideal.generators() {
                    assert!(!g.is_zero());
                    assert!(g.sum().terms().all(|(p, _)| p.degree() == g.degree()));
                }
            }
        }
    }
}
