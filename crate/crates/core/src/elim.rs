//! Bounded searches for quantifier-free equivalents of pp formulas and for
//! embeddings of pp-pairs into products of home sorts, and a sweep relating
//! both to von Neumann regularity.
//!
//! A quantifier-free formula in free sorts `S_1..S_n` is determined up to
//! equivalence by the subfunctor of `F = ⊕ (-, S_i)` its columns generate.
//! Subfunctors are enumerated breadth first by number of generators; when a
//! level adds nothing new, every subfunctor has been seen and a failed search
//! is a proof that no quantifier-free equivalent exists.

use std::collections::HashMap;
use std::sync::Arc;

use rand_chacha::ChaCha8Rng;
use rand::SeedableRng;

use crate::corpus::small_quotients;
use crate::error::Result;
use crate::group::Subgroup;
use crate::module::{free_module, Module, Side};
use crate::pairs::{graph_morphisms, kernel_cokernel_image, MorphismCheck, PpMorphism, PpPair};
use crate::pp::family::{formula_family, matrices, pair_family, FamilyConfig};
use crate::pp::PpFormula;
use crate::ringoid::{Morph, ObjId, Ringoid, VnrDecision};

#[derive(Clone, Debug)]
pub enum QeOutcome {
    QuantifierFree(PpFormula),
    NotFoundWithinBound,
    /// Every quantifier-free class (listed) was checked.
    ProvablyNone { candidates: Vec<PpFormula> },
}

impl QeOutcome {
    pub fn found(&self) -> bool {
        matches!(self, QeOutcome::QuantifierFree(_))
    }
}

#[derive(Clone, Debug)]
struct Lattice {
    candidates: Vec<PpFormula>,
    complete: bool,
}

/// Quantifier-free candidates per free signature, computed once.
pub struct QeSearcher {
    acting: Arc<Ringoid>,
    side: Side,
    max_cols: usize,
    cache: HashMap<Vec<ObjId>, Lattice>,
}

impl QeSearcher {
    pub fn new(acting: &Arc<Ringoid>, side: Side, max_cols: usize) -> Self {
        QeSearcher { acting: acting.clone(), side, max_cols, cache: HashMap::new() }
    }

    fn lattice(&mut self, free: &[ObjId]) -> Result<&Lattice> {
        if !self.cache.contains_key(free) {
            let l = self.build(free)?;
            self.cache.insert(free.to_vec(), l);
        }
        Ok(&self.cache[free])
    }

    fn build(&self, free: &[ObjId]) -> Result<Lattice> {
        let r = &self.acting;
        let f = free_module(r, self.side, free);
        let n = r.num_objects();
        let zero: Vec<Subgroup> = (0..n).map(|p| Subgroup::zero(f.fiber(p))).collect();
        let elements = f.elements();
        let mut seen = vec![zero.clone()];
        let mut gens_of: Vec<Vec<(ObjId, Vec<u64>)>> = vec![vec![]];
        let mut frontier = vec![0usize];
        let mut complete = false;
        for level in 0..=self.max_cols {
            let mut next = Vec::new();
            for &k in &frontier {
                for e in &elements {
                    let p = e.sorts[0];
                    if seen[k][p].contains(&e.entries[0]) {
                        continue;
                    }
                    let mut g = seen[k].clone();
                    g[p].insert(e.entries[0].clone());
                    let closed = f.closure(g);
                    if !seen.contains(&closed) {
                        let mut path = gens_of[k].clone();
                        path.push((p, e.entries[0].clone()));
                        seen.push(closed);
                        gens_of.push(path);
                        next.push(seen.len() - 1);
                    }
                }
            }
            if next.is_empty() {
                complete = true;
                break;
            }
            if level == self.max_cols {
                // The last level only tests closure; its members need more columns.
                gens_of.truncate(gens_of.len() - next.len());
                break;
            }
            frontier = next;
        }
        let candidates = gens_of.iter().map(|gens| self.formula(free, gens)).collect::<Result<Vec<_>>>()?;
        Ok(Lattice { candidates, complete })
    }

    /// `Σ_i x_i · c_i = 0` for each generator `c ∈ F(R)`.
    fn formula(&self, free: &[ObjId], gens: &[(ObjId, Vec<u64>)]) -> Result<PpFormula> {
        let r = &self.acting;
        let rels: Vec<ObjId> = gens.iter().map(|g| g.0).collect();
        let columns = gens
            .iter()
            .map(|(p, v)| {
                let mut at = 0;
                free.iter()
                    .map(|&s| {
                        let k = r.hom(*p, s).rank();
                        let m = Morph { dom: *p, cod: s, elem: v[at..at + k].to_vec() };
                        at += k;
                        m
                    })
                    .collect()
            })
            .collect();
        PpFormula::new(r, self.side, free.to_vec(), vec![], rels, columns)
    }

    pub fn search(&mut self, phi: &PpFormula) -> Result<QeOutcome> {
        if phi.is_quantifier_free() {
            return Ok(QeOutcome::QuantifierFree(phi.clone()));
        }
        let lattice = self.lattice(phi.free_sorts())?.clone();
        for chi in &lattice.candidates {
            if phi.equivalent(chi)? {
                return Ok(QeOutcome::QuantifierFree(chi.clone()));
            }
        }
        if lattice.complete {
            Ok(QeOutcome::ProvablyNone { candidates: lattice.candidates })
        } else {
            Ok(QeOutcome::NotFoundWithinBound)
        }
    }
}

/// Searches quantifier-free formulas with at most `max_cols` columns for one
/// equivalent to `phi`.
pub fn qe_search(phi: &PpFormula, max_cols: usize) -> Result<QeOutcome> {
    QeSearcher::new(phi.acting(), phi.side(), max_cols).search(phi)
}

#[derive(Clone, Debug)]
pub struct EmbedBound {
    pub vars: usize,
    pub cols: usize,
    /// Candidates tried per home sort and stage.
    pub candidates: usize,
}

impl Default for EmbedBound {
    fn default() -> Self {
        EmbedBound { vars: 2, cols: 3, candidates: 4096 }
    }
}

#[derive(Clone, Debug)]
pub enum EmbedOutcome {
    Monic { home: usize, morphism: PpMorphism },
    NotFoundWithinBound,
    /// For every home sort, a test module on which the pair is larger.
    NotEmbeddable { obstructions: Vec<(usize, usize, u128, u128)> },
}

impl EmbedOutcome {
    pub fn found(&self) -> bool {
        matches!(self, EmbedOutcome::Monic { .. })
    }
}

/// Every single object and every pair of objects.
pub fn default_homes(acting: &Ringoid) -> Vec<Vec<ObjId>> {
    let n = acting.num_objects();
    let mut out: Vec<Vec<ObjId>> = (0..n).map(|p| vec![p]).collect();
    for p in 0..n {
        for q in p..n {
            out.push(vec![p, q]);
        }
    }
    out
}

fn is_monic(m: &PpMorphism) -> Result<bool> {
    let k = kernel_cokernel_image(m)?.kernel;
    Ok(k.top().implies(k.bottom())?.holds())
}

/// Searches for a morphism from `p` into some `(x̄ = x̄)/(x̄ = 0)` on the
/// home sorts with zero kernel: first graphs `ȳ = x̄ · A`, then formulas
/// with bound variables.
pub fn embed_search(p: &PpPair, homes: &[Vec<ObjId>], bound: &EmbedBound, test_modules: &[Module]) -> Result<EmbedOutcome> {
    let acting = p.acting();
    let side = p.side();
    let targets = homes.iter().map(|h| PpPair::full(acting, side, h.clone())).collect::<Result<Vec<_>>>()?;
    for (i, t) in targets.iter().enumerate() {
        for m in graph_morphisms(p, t, bound.candidates)? {
            if is_monic(&m)? {
                return Ok(EmbedOutcome::Monic { home: i, morphism: m });
            }
        }
    }
    let cfg = FamilyConfig { exhaustive_limit: bound.candidates as u128, samples: bound.candidates, ..FamilyConfig::default() };
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let n = acting.num_objects();
    for (i, t) in targets.iter().enumerate() {
        let ctx: Vec<ObjId> = p.free_sorts().iter().chain(t.free_sorts()).copied().collect();
        for nb in 1..=bound.vars {
            for bs in multisets(n, nb) {
                for nc in 1..=bound.cols {
                    for rels in multisets(n, nc) {
                        for rho in matrices(acting, side, &ctx, &bs, &rels, &cfg, &mut rng) {
                            if let MorphismCheck::Valid(m) = PpMorphism::new(rho, p, t)? {
                                if is_monic(&m)? {
                                    return Ok(EmbedOutcome::Monic { home: i, morphism: m });
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    let mut obstructions = Vec::new();
    for (i, t) in targets.iter().enumerate() {
        let mut found = None;
        for (j, m) in test_modules.iter().enumerate() {
            let (a, b) = (p.value(m)?.order(), t.value(m)?.order());
            if a > b {
                found = Some((i, j, a, b));
                break;
            }
        }
        match found {
            Some(o) => obstructions.push(o),
            None => return Ok(EmbedOutcome::NotFoundWithinBound),
        }
    }
    Ok(EmbedOutcome::NotEmbeddable { obstructions })
}

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

#[derive(Clone, Debug)]
pub struct HarnessConfig {
    pub family: FamilyConfig,
    pub pair_limit: usize,
    pub qe_cols: usize,
    pub embed: EmbedBound,
}

impl Default for HarnessConfig {
    fn default() -> Self {
        HarnessConfig {
            family: FamilyConfig::default(),
            pair_limit: 30,
            qe_cols: 3,
            embed: EmbedBound { vars: 1, cols: 2, candidates: 1024 },
        }
    }
}

#[derive(Clone, Debug)]
pub struct HarnessReport {
    pub vnr: VnrDecision,
    pub formulas: Vec<(PpFormula, QeOutcome)>,
    pub pairs: Vec<(PpPair, EmbedOutcome)>,
    /// Searches that failed although the ring is von Neumann regular.
    pub anomalies: Vec<String>,
}

/// Regularity, then quantifier elimination over a formula family and
/// embeddings of a pair family, for right modules over `ring`.
pub fn regularity_harness(ring: &Arc<Ringoid>, cfg: &HarnessConfig) -> Result<HarnessReport> {
    let vnr = ring.is_von_neumann_regular();
    let side = Side::Right;
    let corpus = small_quotients(ring, side, 64)?;
    let formulas = formula_family(ring, side, &cfg.family, corpus.clone())?;
    let mut qe = QeSearcher::new(ring, side, cfg.qe_cols);
    let mut out_f = Vec::with_capacity(formulas.len());
    let mut anomalies = Vec::new();
    for f in &formulas {
        let o = qe.search(f)?;
        if vnr.is_regular() && !o.found() {
            anomalies.push(format!("no quantifier-free equivalent found for {f}"));
        }
        out_f.push((f.clone(), o));
    }
    let homes = default_homes(ring);
    let mut out_p = Vec::new();
    for (top, bottom) in pair_family(&formulas, cfg.pair_limit)? {
        let p = PpPair::new(top, bottom)?;
        let o = embed_search(&p, &homes, &cfg.embed, &corpus)?;
        if vnr.is_regular() && !o.found() {
            anomalies.push(format!("no embedding found for {p}"));
        }
        out_p.push((p, o));
    }
    Ok(HarnessReport { vnr, formulas: out_f, pairs: out_p, anomalies })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::pp::dsl;

    #[test]
    fn divisibility_by_two() {
        let z6 = Arc::new(fixtures::zmod(6));
        let phi = dsl::parse("E y . x = y*2", &z6, Side::Right).unwrap();
        match qe_search(&phi, 3).unwrap() {
            QeOutcome::QuantifierFree(chi) => assert_eq!(dsl::print(&chi), "x*3 = 0"),
            other => panic!("{other:?}"),
        }
        let z4 = Arc::new(fixtures::zmod(4));
        let phi = dsl::parse("E y . x = y*2", &z4, Side::Right).unwrap();
        match qe_search(&phi, 3).unwrap() {
            QeOutcome::ProvablyNone { candidates } => assert_eq!(candidates.len(), 3),
            other => panic!("{other:?}"),
        }
        let qf = dsl::parse("x*2 = 0", &z4, Side::Right).unwrap();
        assert!(matches!(qe_search(&qf, 3).unwrap(), QeOutcome::QuantifierFree(c) if c == qf));
    }

    fn quotient_by_two(n: u64) -> (Arc<Ringoid>, PpPair) {
        let r = Arc::new(fixtures::zmod(n));
        let p = PpPair::new(
            PpFormula::top(&r, Side::Right, vec![0]).unwrap(),
            dsl::parse("E y . x = y*2", &r, Side::Right).unwrap(),
        )
        .unwrap();
        (r, p)
    }

    #[test]
    fn embedding_over_z6() {
        let (r, p) = quotient_by_two(6);
        match embed_search(&p, &[vec![0]], &EmbedBound::default(), &[]).unwrap() {
            EmbedOutcome::Monic { morphism, .. } => {
                let m = Module::representable(&r, Side::Right, 0);
                assert_eq!(morphism.induced(&m).unwrap().kernel().order(), 1);
                assert_eq!(dsl::print(morphism.rho()), "x1*3 + x2*5 = 0");
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn multiplication_by_two_is_not_monic_over_z4() {
        // y = x*2 is injective on Z/4 itself but its kernel (x*2 = 0)/(2 | x)
        // is nonzero on Z/2.
        let (_, p) = quotient_by_two(4);
        let bound = EmbedBound { vars: 1, cols: 1, candidates: 256 };
        assert!(matches!(embed_search(&p, &[vec![0]], &bound, &[]).unwrap(), EmbedOutcome::NotFoundWithinBound));
    }

    #[test]
    fn no_small_embedding_over_z4() {
        let r = Arc::new(fixtures::zmod(4));
        let p = PpPair::new(
            dsl::parse("x*2 = 0", &r, Side::Right).unwrap(),
            dsl::parse("E y . x = y*2", &r, Side::Right).unwrap(),
        )
        .unwrap();
        let bound = EmbedBound { vars: 1, cols: 1, candidates: 64 };
        assert!(matches!(embed_search(&p, &[vec![0]], &bound, &[]).unwrap(), EmbedOutcome::NotFoundWithinBound));
    }

    #[test]
    fn zero_ring_harness() {
        let r = Arc::new(fixtures::zero_ring());
        let rep = regularity_harness(&r, &HarnessConfig::default()).unwrap();
        assert!(rep.vnr.is_regular());
        assert!(rep.anomalies.is_empty());
    }
}
