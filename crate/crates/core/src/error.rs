use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not a negative fundamental discriminant")]
    NotFundamental(i64),
    #[error("discriminant mismatch: {0} vs {1}")]
    DiscMismatch(i64, i64),
    #[error("discriminant {0} is not supported here (need one of {1})")]
    UnsupportedDisc(i64, &'static str),
    #[error("division by zero")]
    DivisionByZero,
    #[error("the pair (0, 0) does not define a cusp or ideal")]
    ZeroPair,
    #[error("matrix determinant is not a unit")]
    NotInvertible,
    #[error("degenerate form (discriminant 0)")]
    Degenerate,
    #[error("linear system is singular: {0}")]
    Singular(&'static str),
    #[error("form is not indefinite (discriminant {0})")]
    NotIndefinite(i64),
    #[error("form is isotropic (represents 0)")]
    Isotropic,
    #[error("form is not positive definite, no well exists")]
    NoWell,
    #[error("step limit {0} exceeded")]
    StepLimit(usize),
    #[error("vector is not integral in the given basis")]
    NotIntegral,
    #[error("pair does not span an index-2 submodule (determinant norm {0})")]
    BadIndex(i64),
    #[error("geometric degeneracy: {0}")]
    Geometry(&'static str),
    #[error("horoballs overlap: N(ad-bc)={0} < N(I)N(J)={1}")]
    HoroballOverlap(i64, i64),
    #[error("invalid input: {0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
