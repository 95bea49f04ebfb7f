//! Noncommutative *-polynomials and normal ordering for presented *-algebras.
//!
//! A [`Presentation`] carries ordered generators (with a star pairing), a list
//! of oriented rewrite rules and a [`TermOrder`]. Normal forms are computed by
//! rewriting; termination is audited against the term order and local
//! confluence by enumerating overlaps of rule left-hand sides, so normal forms
//! are unique whenever both audits pass.

mod confluence;
mod poly;
mod presentation;
mod tensor;

use thiserror::Error;

pub use confluence::{CompletionReport, CriticalPair, TerminationReport};
pub use poly::{GenId, NcPolynomial, Word};
pub use presentation::{
    conjugate_weight, Generator, OrderKey, Presentation, PresentationBuilder, RewriteRule,
    Strategy, TermOrder, DEFAULT_STEP_LIMIT,
};
pub use tensor::{embed, tensor};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NcError {
    #[error("normalization exceeded {0} reduction steps; the rule set does not terminate")]
    StepLimit(usize),
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),
    #[error("generator `{0}` declared twice")]
    DuplicateGenerator(String),
    #[error("star pairing is not an involution at `{0}`")]
    InvalidStar(String),
    #[error("weight of `{0}` must be (holomorphic, antiholomorphic) pairs, symmetric for self-adjoint generators")]
    InvalidWeight(String),
    #[error("relation reduces to 0 = 0")]
    TrivialRelation,
    #[error("cannot orient relation {0}: leading coefficient is not a unit")]
    Unorientable(String),
    #[error("rule {0} does not decrease the term order")]
    NotDecreasing(String),
}
