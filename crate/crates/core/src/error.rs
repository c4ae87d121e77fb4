use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("unrecognized field `{0}` (expected `q` or `pN`)")]
    Unrecognized(String),
    #[error("denominator {0} vanishes in this field")]
    ZeroDenominator(String),
}

/// One structural defect of a weighted quiver.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QuiverError {
    #[error("duplicate vertex `{0}`")]
    DuplicateVertex(String),
    #[error("duplicate arrow `{0}`")]
    DuplicateArrow(String),
    #[error("arrow `{arrow}` has dangling endpoint `{vertex}`")]
    DanglingEndpoint { arrow: String, vertex: String },
    #[error("arrow `{arrow}` has nonpositive degree {degree}")]
    NonpositiveDegree { arrow: String, degree: i64 },
    #[error("name `{0}` is used for both a vertex and an arrow")]
    NameClash(String),
}

impl QuiverError {
    /// The vertex or arrow name the defect is attached to.
    pub fn subject(&self) -> &str {
        match self {
            QuiverError::DuplicateVertex(n) | QuiverError::DuplicateArrow(n) | QuiverError::NameClash(n) => n,
            QuiverError::DanglingEndpoint { arrow, .. } | QuiverError::NonpositiveDegree { arrow, .. } => arrow,
        }
    }
}

/// Every violation found while validating a quiver.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("invalid quiver: {}", .0.iter().map(|e| e.to_string()).collect::<Vec<_>>().join("; "))]
pub struct ValidationErrors(pub Vec<QuiverError>);

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PathError {
    #[error("unknown arrow `{0}`")]
    UnknownArrow(String),
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("arrows `{0}` and `{1}` do not compose")]
    NotComposable(String, String),
    #[error("a composite path needs at least one arrow")]
    Empty,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RelationError {
    #[error("element is not uniform: terms differ in source, target or degree")]
    NotUniform,
    #[error("generator is zero")]
    ZeroGenerator,
    #[error("path does not belong to this quiver: {0}")]
    ForeignPath(#[from] PathError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SplitError {
    #[error("unknown arrow `{0}`")]
    UnknownArrow(String),
    #[error("arrow `{0}` has degree 1 and cannot be split")]
    DegreeOne(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RepError {
    #[error("degree {degree} at vertex `{vertex}` lies outside the known window; enlarge the window")]
    WindowOverflow { vertex: String, degree: i64 },
    #[error("representation lives on a different quiver")]
    QuiverMismatch,
    #[error("{0}")]
    Shape(String),
    #[error("square for arrow `{arrow}` at degree {degree} does not commute")]
    SquareViolation { arrow: String, degree: i64 },
    #[error("morphisms are not composable")]
    NotComposable,
}
