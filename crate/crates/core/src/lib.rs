//! Regrading of weighted path algebras with relations.
//!
//! A weighted quiver `Q` with homogeneous relations `I` is turned into a
//! quiver with every arrow in degree 1 and transported relations, one arrow
//! split at a time. The [`representation`] module carries graded
//! representations across each split and back, and [`verify`] runs the
//! property suites over random and named instances.

pub mod error;
pub mod fixtures;
pub mod format;
pub mod hilbert;
pub mod linalg;
pub mod path;
pub mod quiver;
pub mod random;
pub mod regrade;
pub mod representation;
pub mod scalar;
pub mod verify;

pub use error::{FieldError, PathError, QuiverError, RelationError, RepError, SplitError, ValidationErrors};
pub use linalg::Matrix;
pub use path::{enumerate_paths, IdealPresentation, Path, PathSum, UniformElement};
pub use quiver::{Arrow, ArrowId, ArrowSpec, VertexId, WeightedQuiver};
pub use regrade::{regrade, split_arrow, RegradeResult, SplitTrace};
pub use scalar::{Field, Scalar};
