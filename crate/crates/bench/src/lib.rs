//! Inputs shared by the benchmarks under `benches/`.

use std::sync::Arc;

use ppcalc::corpus::{modules_up_to, small_quotients};
use ppcalc::pp::dsl;
use ppcalc::pp::family::{formula_family, FamilyConfig};
use ppcalc::{fixtures, Module, PpFormula, Ringoid, Side};

pub fn ring(name: &str) -> Arc<Ringoid> {
    Arc::new(fixtures::ring(name).expect("built-in ring"))
}

pub fn right(r: &Arc<Ringoid>, src: &str) -> PpFormula {
    dsl::parse(src, r, Side::Right).expect("valid formula")
}

/// One- and two-variable formulas over `r`, deduplicated.
pub fn family(r: &Arc<Ringoid>) -> Vec<PpFormula> {
    let corpus = small_quotients(r, Side::Right, 16).expect("corpus");
    formula_family(r, Side::Right, &FamilyConfig::default(), corpus).expect("family")
}

/// Every right module of order at most `max`.
pub fn modules(r: &Arc<Ringoid>, max: u128) -> Vec<Module> {
    modules_up_to(r, Side::Right, max).expect("modules")
}
