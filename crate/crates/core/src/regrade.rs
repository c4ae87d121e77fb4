//! Arrow splitting and the induced rewrite of paths and relations.
//!
//! Splitting an arrow `b: s → t` of degree `n ≥ 2` adds a vertex `z` and
//! replaces `b` with `b': s → z` of degree 1 and `b'': z → t` of degree
//! `n − 1`. Paths map through `f`, which substitutes `b'b''` for every `b`.
//! Repeating on the largest remaining arrow reaches a quiver with every
//! arrow in degree 1 after exactly `D(Q)` steps.

use crate::error::SplitError;
use crate::path::{IdealPresentation, Path, PathSum, UniformElement};
use crate::quiver::{Arrow, ArrowId, VertexId, WeightedQuiver};

/// Record of one split, carrying both quivers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SplitTrace {
    pub split_arrow: ArrowId,
    pub new_vertex: VertexId,
    pub first: ArrowId,
    pub second: ArrowId,
    pub before: WeightedQuiver,
    pub after: WeightedQuiver,
}

impl SplitTrace {
    /// The arrow `b` as it was in `before`.
    pub fn split_data(&self) -> &Arrow {
        self.before.arrow(&self.split_arrow).expect("trace keeps its arrow")
    }

    /// Rewrites a path of `before` into `after`.
    pub fn rewrite_path(&self, p: &Path) -> Path {
        if !p.arrows().contains(&self.split_arrow) {
            return p.clone();
        }
        let mut arrows = Vec::with_capacity(p.len() + 1);
        for a in p.arrows() {
            if *a == self.split_arrow {
                arrows.push(self.first.clone());
                arrows.push(self.second.clone());
            } else {
                arrows.push(a.clone());
            }
        }
        Path::from_raw(p.degree(), p.source().clone(), p.target().clone(), arrows)
    }

    /// Linear extension of [`SplitTrace::rewrite_path`].
    pub fn rewrite_path_sum(&self, x: &PathSum) -> PathSum {
        x.map_paths(|p| self.rewrite_path(p))
    }

    /// Rewrites a uniform element; endpoints and degree are unchanged.
    pub fn rewrite_sum(&self, x: &UniformElement) -> UniformElement {
        x.map_uniform(|p| self.rewrite_path(p), x.source().clone(), x.target().clone())
    }

    pub fn rewrite_ideal(&self, ideal: &IdealPresentation) -> IdealPresentation {
        IdealPresentation::new(ideal.generators().iter().map(|g| self.rewrite_sum(g)).collect())
            .expect("rewriting is injective on paths, so generators stay nonzero")
    }
}

/// Splits `b` once.
pub fn split_arrow(q: &WeightedQuiver, b: &ArrowId) -> Result<SplitTrace, SplitError> {
    let arrow = q
        .arrow(b)
        .ok_or_else(|| SplitError::UnknownArrow(b.to_string()))?
        .clone();
    if arrow.degree < 2 {
        return Err(SplitError::DegreeOne(b.to_string()));
    }
    let z = q.fresh_vertex_name("z");
    let (first, second) = q.fresh_split_names(b);

    let mut vertices = q.vertex_set().clone();
    vertices.insert(z.clone());
    let mut arrows = q.arrow_map().clone();
    arrows.remove(b);
    arrows.insert(
        first.clone(),
        Arrow {
            source: arrow.source.clone(),
            target: z.clone(),
            degree: 1,
        },
    );
    arrows.insert(
        second.clone(),
        Arrow {
            source: z.clone(),
            target: arrow.target.clone(),
            degree: arrow.degree - 1,
        },
    );
    Ok(SplitTrace {
        split_arrow: b.clone(),
        new_vertex: z,
        first,
        second,
        before: q.clone(),
        after: WeightedQuiver::from_validated(vertices, arrows),
    })
}

/// Outcome of full regrading.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RegradeResult {
    pub final_quiver: WeightedQuiver,
    pub final_ideal: IdealPresentation,
    pub trace: Vec<SplitTrace>,
}

impl RegradeResult {
    /// Composite rewrite of a path of the input quiver.
    pub fn rewrite_path(&self, p: &Path) -> Path {
        self.trace.iter().fold(p.clone(), |acc, t| t.rewrite_path(&acc))
    }
}

/// The arrow the next regrading step splits: the smallest name among those
/// of maximal degree, if that degree is at least 2.
pub fn next_split_target(q: &WeightedQuiver) -> Option<ArrowId> {
    let max = q.max_degree();
    if max < 2 {
        return None;
    }
    q.arrows().find(|(_, a)| a.degree == max).map(|(id, _)| id.clone())
}

/// Splits until every arrow has degree 1, carrying the ideal along.
pub fn regrade(q: &WeightedQuiver, ideal: &IdealPresentation) -> RegradeResult {
    let mut quiver = q.clone();
    let mut current = ideal.clone();
    let mut trace = Vec::new();
    while let Some(b) = next_split_target(&quiver) {
        let step = split_arrow(&quiver, &b).expect("target has degree at least 2");
        current = step.rewrite_ideal(&current);
        quiver = step.after.clone();
        trace.push(step);
    }
    RegradeResult {
        final_quiver: quiver,
        final_ideal: current,
        trace,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::path::enumerate_paths;
    use proptest::prelude::*;

    fn arrow_table(q: &WeightedQuiver) -> Vec<(String, String, String, u32)> {
        q.arrows()
            .map(|(id, a)| (id.to_string(), a.source.to_string(), a.target.to_string(), a.degree))
            .collect()
    }

    fn row(n: &str, s: &str, t: &str, d: u32) -> (String, String, String, u32) {
        (n.into(), s.into(), t.into(), d)
    }

    #[test]
    fn example_quiver_split() {
        for deg in [2, 3] {
            let q = fixtures::two_vertex_quiver(deg);
            let t = split_arrow(&q, &ArrowId::new("b")).unwrap();
            assert_eq!(t.new_vertex.name(), "z");
            let vs: Vec<_> = t.after.vertices().map(|v| v.to_string()).collect();
            assert_eq!(vs, ["v1", "v2", "z"]);
            assert_eq!(
                arrow_table(&t.after),
                [
                    row("a", "v1", "v1", 1),
                    row("b'", "v1", "z", 1),
                    row("b''", "z", "v2", deg as u32 - 1),
                    row("c", "v1", "v2", 1),
                    row("d", "v2", "v2", 1),
                ]
            );
            assert_eq!(t.after.weight_discrepancy() + 1, t.before.weight_discrepancy());
        }
    }

    #[test]
    fn kxy_split_gives_two_vertex_quiver() {
        let (q, _) = fixtures::kxy();
        let t = split_arrow(&q, &ArrowId::new("y")).unwrap();
        assert_eq!(
            arrow_table(&t.after),
            [row("x", "v", "v", 1), row("y'", "v", "z", 1), row("y''", "z", "v", 1)]
        );
    }

    #[test]
    fn degree_one_split_is_an_error() {
        let (q, _) = fixtures::kxy();
        assert_eq!(
            split_arrow(&q, &ArrowId::new("x")),
            Err(SplitError::DegreeOne("x".into()))
        );
        assert_eq!(
            split_arrow(&q, &ArrowId::new("w")),
            Err(SplitError::UnknownArrow("w".into()))
        );
    }

    #[test]
    fn rewrite_goldens() {
        let q = fixtures::two_vertex_quiver(2);
        let t = split_arrow(&q, &ArrowId::new("b")).unwrap();
        let p = Path::parse(&q, "a*a*b*d").unwrap();
        let fp = t.rewrite_path(&p);
        assert_eq!(fp.to_string(), "a*a*b'*b''*d");
        assert!(fp.belongs_to(&t.after));
        let p = Path::parse(&q, "a*c*d").unwrap();
        assert_eq!(t.rewrite_path(&p), p);
        for v in q.vertices() {
            let e = Path::trivial(&q, v).unwrap();
            assert_eq!(t.rewrite_path(&e), e);
        }
    }

    #[test]
    fn kxy_relation_transport() {
        let (q, ideal) = fixtures::kxy();
        let t = split_arrow(&q, &ArrowId::new("y")).unwrap();
        let image = t.rewrite_sum(&ideal.generators()[0]);
        assert_eq!(image.to_string(), "x*y'*y'' - y'*y''*x");
        assert_eq!(image.degree(), 3);
    }

    #[test]
    fn rewrite_is_linear() {
        let q = fixtures::two_vertex_quiver(2);
        let t = split_arrow(&q, &ArrowId::new("b")).unwrap();
        let f = crate::scalar::Field::Rational;
        let b = Path::parse(&q, "b").unwrap();
        let sum = PathSum::from_terms([(b.clone(), f.from_i64(2)), (b, f.from_i64(3))]);
        let image = t.rewrite_sum(&UniformElement::new(sum).unwrap());
        assert_eq!(image.to_string(), "5*b'*b''");
        let untouched = UniformElement::new(PathSum::from_path(Path::parse(&q, "a*c").unwrap(), f)).unwrap();
        assert_eq!(t.rewrite_sum(&untouched), untouched);
    }

    #[test]
    fn kxy_regrades_in_one_step() {
        let (q, ideal) = fixtures::kxy();
        let r = regrade(&q, &ideal);
        assert_eq!(r.trace.len(), 1);
        assert_eq!(r.final_quiver.max_degree(), 1);
        assert_eq!(r.final_ideal.generators()[0].to_string(), "x*y'*y'' - y'*y''*x");
    }

    #[test]
    fn degree_one_input_is_fixed() {
        let q = fixtures::two_vertex_quiver(1);
        let r = regrade(&q, &IdealPresentation::empty());
        assert!(r.trace.is_empty());
        assert_eq!(r.final_quiver, q);
    }

    #[test]
    fn degree_three_loop_takes_two_splits() {
        let q = WeightedQuiver::from_parts(&["v"], &[("w", "v", "v", 3)]).unwrap();
        let r = regrade(&q, &IdealPresentation::empty());
        assert_eq!(r.trace.len(), 2);
        assert_eq!(r.trace[0].split_arrow.name(), "w");
        assert_eq!(r.trace[1].split_arrow.name(), "w''");
        assert_eq!(
            arrow_table(&r.final_quiver),
            [row("w'", "v", "z", 1), row("w'''", "z", "z1", 1), row("w''''", "z1", "v", 1)]
        );
        assert_eq!(r.final_quiver.vertex_count(), 3);
        assert_eq!(r.final_quiver.weight_discrepancy(), 0);
        let w = Path::parse(&q, "w").unwrap();
        assert_eq!(r.rewrite_path(&w).to_string(), "w'*w'''*w''''");
    }

    fn arb_quiver() -> impl Strategy<Value = WeightedQuiver> {
        (1usize..=4).prop_flat_map(|nv| {
            prop::collection::vec((0..nv, 0..nv, 1i64..=3), 1..=6).prop_map(move |arrows| {
                let vs: Vec<String> = (0..nv).map(|i| format!("v{i}")).collect();
                let specs: Vec<_> = arrows
                    .iter()
                    .enumerate()
                    .map(|(i, &(s, t, d))| {
                        crate::quiver::ArrowSpec::new(&format!("a{i}"), &vs[s], &vs[t], d)
                    })
                    .collect();
                WeightedQuiver::new(&vs, &specs).unwrap()
            })
        })
    }

    proptest! {
        #[test]
        fn regrade_takes_discrepancy_many_steps(q in arb_quiver()) {
            let r = regrade(&q, &IdealPresentation::empty());
            prop_assert_eq!(r.trace.len() as u64, q.weight_discrepancy());
            prop_assert!(r.final_quiver.max_degree() <= 1);
            for t in &r.trace {
                prop_assert_eq!(t.after.weight_discrepancy() + 1, t.before.weight_discrepancy());
            }
            let again = regrade(&r.final_quiver, &r.final_ideal);
            prop_assert!(again.trace.is_empty());
            prop_assert_eq!(again.final_quiver, r.final_quiver);
        }

        #[test]
        fn rewrite_preserves_endpoints_and_degree(q in arb_quiver(), d in 0u32..5) {
            let r = regrade(&q, &IdealPresentation::empty());
            for p in enumerate_paths(&q, d, None, None).into_iter().take(50) {
                let fp = r.rewrite_path(&p);
                prop_assert!(fp.belongs_to(&r.final_quiver));
                prop_assert_eq!(fp.degree(), p.degree());
                prop_assert_eq!(fp.source(), p.source());
                prop_assert_eq!(fp.target(), p.target());
            }
        }
    }
}
