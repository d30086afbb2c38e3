use thiserror::Error;

use crate::exactnum::Rational;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("total degree {degree} exceeds the limit of {limit}")]
    DegreeLimit { degree: u32, limit: u32 },

    #[error("division by zero")]
    DivisionByZero,

    #[error("X = sum of coordinates vanishes at a point where a negative power of X is required")]
    RadialSingularity,

    #[error("cannot parse rational {0:?}")]
    ParseRational(String),

    #[error("cannot parse expression: {0}")]
    ParseExpr(String),

    #[error("invalid half-space: {0}")]
    InvalidHalfSpace(String),

    #[error("polytope is unbounded")]
    Unbounded,

    #[error("polytope is empty")]
    Empty,

    #[error("polytope is degenerate: {0}")]
    Degenerate(String),

    #[error("combinatorial cap exceeded: {count} subsets (limit {limit})")]
    SubsetCap { count: u128, limit: u128 },

    #[error("facet index {index} out of range ({count} facets)")]
    FacetIndex { index: usize, count: usize },

    #[error("axis {axis} out of range for dimension {n}")]
    AxisIndex { axis: usize, n: usize },

    #[error("transversal vector is parallel to the facet (<v, w> = 0)")]
    BadTransversal,

    #[error("polytope is not a slab of the blow-up family")]
    NotSlab,

    #[error("invalid class parameter: {0}")]
    InvalidClass(String),

    #[error(
        "J-equation has no Calabi-symmetric solution; character formula inapplicable \
         (n(ab^(n-1)-1)/(b^n-1) = {value} is not > n-1 = {bound})"
    )]
    NotSolvable { value: Box<Rational>, bound: Box<Rational> },

    #[error("bulk term carries a nonzero log(b) coefficient {0}")]
    LogTermNonzero(Rational),

    #[error("per-axis terms disagree between axis {first} and axis {other}")]
    AxisDisagreement { first: usize, other: usize },

    #[error("invalid coupling constants: {0}")]
    InvalidCoupling(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("Monte Carlo sampling accepted no points in the bounding box")]
    ZeroAcceptance,
}
