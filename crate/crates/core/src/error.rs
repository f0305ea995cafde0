use std::fmt;

use thiserror::Error;

use crate::module::{Module, SortedTuple};
use crate::ringoid::Morph;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Axiom {
    Associativity,
    Bilinearity,
    Identity,
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Axiom::Associativity => "associativity",
            Axiom::Bilinearity => "bilinearity",
            Axiom::Identity => "identity",
        })
    }
}

/// A module together with a tuple from it, used as a counterexample.
#[derive(Clone, Debug)]
pub struct Counterexample {
    pub module: Module,
    pub tuple: SortedTuple,
}

#[derive(Clone, Debug, Error)]
pub enum Error {
    #[error("{axiom} axiom fails on {witness:?}")]
    AxiomViolation { axiom: Axiom, witness: Vec<Morph> },
    #[error("functoriality fails ({detail}) on {witness:?}")]
    FunctorialityViolation { detail: String, witness: Vec<Morph> },
    #[error("generator has domain {found}, expected {expected}")]
    DomainMismatch { expected: usize, found: usize },
    #[error("sort mismatch: {0}")]
    SortMismatch(String),
    #[error("left/right side mismatch")]
    SideMismatch,
    #[error("operands live over different ringoids")]
    RingoidMismatch,
    #[error("not a pp-pair: the bottom formula does not imply the top")]
    NotAPair(Box<Counterexample>),
    #[error("expected {expected} free variable(s), found {found}")]
    ArityError { expected: usize, found: usize },
    #[error("map is not a monomorphism")]
    NotMono,
    #[error("map is not an epimorphism")]
    NotEpi,
    #[error("operation needs a one-object ringoid")]
    NotOneObject,
    #[error("total hom-group size {total} exceeds the bound {limit}")]
    SizeBound { total: u128, limit: u128 },
    #[error("invalid input: {0}")]
    InvalidSpec(String),
    #[error("unknown name `{0}`")]
    UnknownName(String),
    #[error("{line}:{col}: {msg}")]
    Parse { line: usize, col: usize, msg: String },
    #[error("internal cross-check failed: {0}")]
    Inconsistency(String),
}

pub type Result<T> = std::result::Result<T, Error>;
