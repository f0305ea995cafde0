//! Exact computations with positive primitive formulas over finite rings and
//! finite preadditive categories.

pub mod corpus;
pub mod duality;
pub mod elim;
pub mod error;
pub mod fixtures;
pub mod group;
pub mod io;
pub mod module;
pub mod pairs;
pub mod pp;
pub mod purity;
pub mod suite;
pub mod ringoid;
pub mod tensor;

pub use error::{Counterexample, Error, Result};
pub use group::{Elem, FinAbGroup, GroupHom, Subgroup};
pub use duality::{dual, dual_pair, herzog_check, Herzog};
pub use pairs::{PpMorphism, PpPair};
pub use pp::PpFormula;
pub use tensor::Tensor;
pub use module::{Module, ModuleMap, Side, SortedTuple};
pub use ringoid::{LeftIdeal, Morph, ObjId, Ringoid, VnrDecision};
