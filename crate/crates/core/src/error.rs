use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid category: {0}")]
    InvalidCategory(String),
    #[error("associativity fails at triple (h={h}, g={g}, f={f})")]
    NotAssociative { h: usize, g: usize, f: usize },
    #[error("invalid functor: {0}")]
    InvalidFunctor(String),
    #[error("invalid set-valued functor: {0}")]
    InvalidSetFunctor(String),
    #[error("invalid module: {0}")]
    InvalidModule(String),
    #[error("invalid module morphism: {0}")]
    InvalidMorphism(String),
    #[error("boundary mismatch: {0}")]
    Mismatch(String),
    #[error("not a fibration: morphism {morphism} has no lift with target {target}")]
    NotFibration { morphism: usize, target: usize },
    #[error("equivariance fails at morphism {morphism}, element {element}")]
    Equivariance { morphism: usize, element: usize },
    #[error("not a half-braiding: {0}")]
    NotHalfBraiding(String),
    #[error("centre object check failed: {0}")]
    Centre(String),
    #[error("parse error at {location}: {message}")]
    Parse { location: String, message: String },
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
