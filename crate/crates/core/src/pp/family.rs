//! Families of pairwise inequivalent formulas for sweeps and property checks.
//!
//! Formulas are generated by signature (free, bound and relation sorts) and
//! matrix. Small matrix spaces are enumerated in full, larger ones are sampled
//! with a seeded generator. Candidates are bucketed by their values on a
//! corpus of modules and kept only if inequivalent to every earlier member of
//! their bucket, so the first (least) matrix of each class is the
//! representative.

use std::collections::HashMap;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::group::{Elem, FinAbGroup, Subgroup};
use crate::module::{Module, Side, SortedTuple};
use crate::pp::PpFormula;
use crate::ringoid::{Morph, ObjId, Ringoid};

#[derive(Clone, Debug)]
pub struct FamilyConfig {
    pub free: std::ops::RangeInclusive<usize>,
    pub max_bound: usize,
    pub max_cols: usize,
    /// Matrix spaces up to this size are enumerated in full.
    pub exhaustive_limit: u128,
    /// Samples drawn from each larger matrix space.
    pub samples: usize,
    pub seed: u64,
}

impl Default for FamilyConfig {
    fn default() -> Self {
        FamilyConfig { free: 1..=2, max_bound: 2, max_cols: 2, exhaustive_limit: 1 << 12, samples: 1500, seed: 0x5eed }
    }
}

impl FamilyConfig {
    /// The default bounds with up to three free variables.
    pub fn three_free() -> Self {
        FamilyConfig { free: 1..=3, ..FamilyConfig::default() }
    }
}

/// Nondecreasing `k`-tuples over `0..n`.
fn multisets(n: usize, k: usize) -> Vec<Vec<ObjId>> {
    let mut out = vec![vec![]];
    for _ in 0..k {
        out = out
            .into_iter()
            .flat_map(|v: Vec<ObjId>| {
                let lo = v.last().copied().unwrap_or(0);
                (lo..n).map(move |s| {
                    let mut w = v.clone();
                    w.push(s);
                    w
                })
            })
            .collect();
    }
    out
}

/// All `k`-tuples over `0..n`.
fn tuples(n: usize, k: usize) -> Vec<Vec<ObjId>> {
    let mut out = vec![vec![]];
    for _ in 0..k {
        out = out
            .into_iter()
            .flat_map(|v: Vec<ObjId>| {
                (0..n).map(move |s| {
                    let mut w = v.clone();
                    w.push(s);
                    w
                })
            })
            .collect();
    }
    out
}

/// Every formula with the given sorts, or a deterministic sample of them.
pub fn matrices(
    acting: &Arc<Ringoid>,
    side: Side,
    free: &[ObjId],
    bound: &[ObjId],
    rels: &[ObjId],
    cfg: &FamilyConfig,
    rng: &mut ChaCha8Rng,
) -> Vec<PpFormula> {
    let vars: Vec<ObjId> = free.iter().chain(bound).copied().collect();
    let entries: Vec<(ObjId, ObjId)> = rels.iter().flat_map(|&r| vars.iter().map(move |&v| (r, v))).collect();
    let space = FinAbGroup::product_of(entries.iter().map(|&(r, v)| acting.hom(r, v)));
    let build = |flat: &[u64]| {
        let mut at = 0;
        let mut columns = Vec::with_capacity(rels.len());
        for &r in rels {
            let mut col = Vec::with_capacity(vars.len());
            for &v in &vars {
                let k = acting.hom(r, v).rank();
                col.push(Morph { dom: r, cod: v, elem: flat[at..at + k].to_vec() });
                at += k;
            }
            columns.push(col);
        }
        PpFormula::new(acting, side, free.to_vec(), bound.to_vec(), rels.to_vec(), columns).expect("well sorted")
    };
    if space.order() <= cfg.exhaustive_limit {
        space.elements().map(|v| build(&v)).collect()
    } else {
        let mut picks: Vec<Elem> = (0..cfg.samples)
            .map(|_| space.moduli().iter().map(|&d| rng.gen_range(0..d)).collect())
            .collect();
        picks.sort();
        picks.dedup();
        picks.iter().map(|v| build(v)).collect()
    }
}

/// Deduplicates formulas up to equivalence, keeping the first of each class.
pub struct Dedup {
    corpus: Vec<Module>,
    buckets: HashMap<(Vec<ObjId>, Vec<Subgroup>), Vec<usize>>,
    reps: Vec<PpFormula>,
    realizations: Vec<(Module, SortedTuple)>,
}

impl Dedup {
    pub fn new(corpus: Vec<Module>) -> Self {
        Dedup { corpus, buckets: HashMap::new(), reps: Vec::new(), realizations: Vec::new() }
    }

    fn fingerprint(&self, f: &PpFormula) -> Result<Vec<Subgroup>> {
        self.corpus.iter().map(|m| f.evaluate(m)).collect()
    }

    /// Adds `f` unless an equivalent formula is already present; returns
    /// whether it was added.
    pub fn insert(&mut self, f: PpFormula) -> Result<bool> {
        let key = (f.free_sorts().to_vec(), self.fingerprint(&f)?);
        let (cf, tf) = f.free_realization();
        if let Some(idxs) = self.buckets.get(&key) {
            for &i in idxs {
                let (cr, tr) = &self.realizations[i];
                let rep = &self.reps[i];
                if rep.evaluate(&cf)?.contains(&tf.flatten()) && f.evaluate(cr)?.contains(&tr.flatten()) {
                    return Ok(false);
                }
            }
        }
        self.buckets.entry(key).or_default().push(self.reps.len());
        self.reps.push(f);
        self.realizations.push((cf, tf));
        Ok(true)
    }

    pub fn len(&self) -> usize {
        self.reps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.reps.is_empty()
    }

    pub fn into_formulas(self) -> Vec<PpFormula> {
        self.reps
    }
}

/// Pairwise inequivalent formulas over `acting` with signatures bounded by `cfg`.
pub fn formula_family(acting: &Arc<Ringoid>, side: Side, cfg: &FamilyConfig, corpus: Vec<Module>) -> Result<Vec<PpFormula>> {
    let n = acting.num_objects();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut dedup = Dedup::new(corpus);
    for nf in cfg.free.clone() {
        for free in tuples(n, nf) {
            for m in 0..=cfg.max_bound {
                for bound in multisets(n, m) {
                    for k in 0..=cfg.max_cols {
                        for rels in multisets(n, k) {
                            for f in matrices(acting, side, &free, &bound, &rels, cfg, &mut rng) {
                                dedup.insert(f)?;
                            }
                        }
                    }
                }
            }
        }
    }
    Ok(dedup.into_formulas())
}

/// Pairs `φ/ψ` with `ψ ≤ φ` from a formula family, at most `limit` of them,
/// in family order.
pub fn pair_family(formulas: &[PpFormula], limit: usize) -> Result<Vec<(PpFormula, PpFormula)>> {
    let mut out = Vec::new();
    for phi in formulas {
        for psi in formulas {
            if out.len() >= limit {
                return Ok(out);
            }
            if phi.free_sorts() == psi.free_sorts() && psi.implies(phi)?.holds() {
                out.push((phi.clone(), psi.clone()));
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn one_variable_classes_over_z4() {
        let r = Arc::new(fixtures::zmod(4));
        let corpus = vec![
            Module::representable(&r, Side::Right, 0),
            fixtures::cyclic_quotient(&r, Side::Right, &r.scale(2, &r.identity(0))).unwrap(),
        ];
        let cfg = FamilyConfig { free: 1..=1, ..FamilyConfig::default() };
        let fam = formula_family(&r, Side::Right, &cfg, corpus).unwrap();
        // x = x, x = 0, 2x = 0, 2 | x
        assert_eq!(fam.len(), 4);
        for (i, a) in fam.iter().enumerate() {
            for b in &fam[i + 1..] {
                assert!(!a.equivalent(b).unwrap());
            }
        }
    }

    #[test]
    fn multisets_are_sorted() {
        assert_eq!(multisets(2, 2), vec![vec![0, 0], vec![0, 1], vec![1, 1]]);
        assert_eq!(tuples(2, 2).len(), 4);
    }
}
