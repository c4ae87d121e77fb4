//! Named example presentations used by the checks and the test suites.

use crate::path::{IdealPresentation, Path, PathSum};
use crate::quiver::WeightedQuiver;
use crate::scalar::Field;

/// k[x,y] with `deg x = 1`, `deg y = 2`, as one vertex `v` with two loops
/// and the commutator relation `xy − yx`.
pub fn kxy() -> (WeightedQuiver, IdealPresentation) {
    kxy_over(Field::Rational)
}

pub fn kxy_over(field: Field) -> (WeightedQuiver, IdealPresentation) {
    let q = WeightedQuiver::from_parts(&["v"], &[("x", "v", "v", 1), ("y", "v", "v", 2)])
        .expect("valid quiver");
    let xy = Path::parse(&q, "x*y").expect("path");
    let yx = Path::parse(&q, "y*x").expect("path");
    let rel = PathSum::from_terms([(xy, field.one()), (yx, field.from_i64(-1))]);
    (q, IdealPresentation::from_sums([rel]))
}

/// Two vertices `v1`, `v2`; loops `a` at v1 and `d` at v2; parallel arrows
/// `b`, `c` from v1 to v2, with `deg b = deg_b` and everything else degree 1.
pub fn two_vertex_quiver(deg_b: i64) -> WeightedQuiver {
    WeightedQuiver::from_parts(
        &["v1", "v2"],
        &[("a", "v1", "v1", 1), ("b", "v1", "v2", deg_b), ("c", "v1", "v2", 1), ("d", "v2", "v2", 1)],
    )
    .expect("valid quiver")
}

/// Text of the k[x,y] presentation file.
pub const KXY_FILE: &str = "[quiver]\nvertex v\narrow x v v 1\narrow y v v 2\n[relations]\nx*y - y*x\n";
