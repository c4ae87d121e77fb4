//! Graded-piece dimensions of kQ/I by exact rank in the path basis.

use std::collections::BTreeMap;

use crate::linalg::Matrix;
use crate::path::{enumerate_paths, IdealPresentation, Path, PathSum};
use crate::quiver::{VertexId, WeightedQuiver};
use crate::scalar::Field;

/// `dim (kQ/I)_d`, or `dim e_v (kQ/I)_d` when `vertex` is given.
///
/// `e_v` multiplies on the left, so the vertex filter keeps paths starting
/// at `v`. The degree-`d` slice of `I` is spanned by the products `p·ρ·q`
/// with `deg p + deg ρ + deg q = d`.
pub fn graded_piece_dim(
    q: &WeightedQuiver,
    ideal: &IdealPresentation,
    d: u32,
    vertex: Option<&VertexId>,
    field: Field,
) -> usize {
    let basis = enumerate_paths(q, d, vertex, None);
    if basis.is_empty() {
        return 0;
    }
    let rows = ideal_slice(q, ideal, d, vertex, field);
    if rows.is_empty() {
        return basis.len();
    }
    let index: BTreeMap<&Path, usize> = basis.iter().enumerate().map(|(i, p)| (p, i)).collect();
    let dense = rows
        .iter()
        .map(|s| {
            let mut row = vec![field.zero(); basis.len()];
            for (p, c) in s.terms() {
                row[index[p]] = c.clone();
            }
            row
        })
        .collect();
    basis.len() - Matrix::from_rows(field, basis.len(), dense).rank()
}

/// Spanning set of `e_v I_d` (or `I_d`): every nonzero `p·ρ·q`. Rational
/// generators are reduced into `field` when it is a prime field.
pub fn ideal_slice(
    q: &WeightedQuiver,
    ideal: &IdealPresentation,
    d: u32,
    vertex: Option<&VertexId>,
    field: Field,
) -> Vec<PathSum> {
    let mut rows = Vec::new();
    for rho in ideal.generators() {
        if rho.degree() > d {
            continue;
        }
        let rho = rho.sum().clone();
        let rho = if rho.terms().next().is_some_and(|(_, c)| c.field() != field) {
            rho.over(field)
        } else {
            rho
        };
        let head = rho.terms().next().map(|(p, _)| (p.source().clone(), p.target().clone(), p.degree()));
        let Some((src, tgt, deg)) = head else { continue };
        let spare = d - deg;
        for left in 0..=spare {
            let lefts: Vec<Path> = enumerate_paths(q, left, vertex, Some(&src));
            if lefts.is_empty() {
                continue;
            }
            let rights = enumerate_paths(q, spare - left, Some(&tgt), None);
            for p in &lefts {
                let prho = PathSum::from_path(p.clone(), field).multiply(&rho);
                for r in &rights {
                    let row = prho.multiply(&PathSum::from_path(r.clone(), field));
                    if !row.is_zero() {
                        rows.push(row);
                    }
                }
            }
        }
    }
    rows
}
