#![allow(dead_code)]

use std::collections::BTreeSet;
use std::sync::Arc;

use ppcalc::corpus::small_quotients;
use ppcalc::{fixtures, Elem, Module, Morph, PpFormula, Ringoid, Side};
use proptest::prelude::*;

pub fn ring(name: &str) -> Arc<Ringoid> {
    Arc::new(fixtures::ring(name).unwrap())
}

/// Right modules of order at most 16 built from quotients of small free modules.
pub fn corpus(r: &Arc<Ringoid>) -> Vec<Module> {
    let mut out = vec![Module::zero(r, Side::Right)];
    out.extend(small_quotients(r, Side::Right, 16).unwrap());
    out
}

/// Every morphism of the acting ringoid between two objects.
pub fn morphs(r: &Ringoid, p: usize, q: usize) -> Vec<Morph> {
    r.morphisms(p, q).collect()
}

/// A random right formula with the given free sorts: bound sorts,
/// relation sorts and matrix entries drawn from the ringoid.
pub fn formula_on(r: Arc<Ringoid>, free: Vec<usize>) -> impl Strategy<Value = PpFormula> {
    let n = r.num_objects();
    (
        prop::collection::vec(0..n, 0..=2),
        prop::collection::vec(0..n, 0..=3),
        prop::collection::vec(any::<prop::sample::Index>(), 12),
    )
        .prop_map(move |(bound, rels, picks)| {
            let vars: Vec<usize> = free.iter().chain(&bound).copied().collect();
            let mut pick = picks.iter().cycle();
            let columns = rels
                .iter()
                .map(|&rs| {
                    vars.iter()
                        .map(|&v| {
                            let all = morphs(&r, rs, v);
                            pick.next().unwrap().get(&all).clone()
                        })
                        .collect()
                })
                .collect();
            PpFormula::new(&r, Side::Right, free.clone(), bound, rels, columns).unwrap()
        })
}

pub fn formula(r: Arc<Ringoid>, max_free: usize) -> impl Strategy<Value = PpFormula> {
    let n = r.num_objects();
    prop::collection::vec(0..n, 1..=max_free).prop_flat_map(move |free| formula_on(r.clone(), free))
}

/// Two random formulas with the same free sorts.
pub fn formula_pair(r: Arc<Ringoid>, max_free: usize) -> impl Strategy<Value = (PpFormula, PpFormula)> {
    let n = r.num_objects();
    prop::collection::vec(0..n, 1..=max_free)
        .prop_flat_map(move |free| (formula_on(r.clone(), free.clone()), formula_on(r.clone(), free)))
}

/// `φ(M)` by enumerating every assignment of the free and bound variables.
pub fn brute_eval(phi: &PpFormula, m: &Module) -> BTreeSet<Elem> {
    let vars = phi.var_sorts();
    let nf = phi.free_sorts().len();
    let fibers: Vec<Vec<Elem>> = vars.iter().map(|&s| m.fiber(s).elements().collect()).collect();
    let mut out = BTreeSet::new();
    let mut idx = vec![0usize; vars.len()];
    loop {
        let holds = phi.columns().iter().zip(phi.relation_sorts()).all(|(col, &rs)| {
            let g = m.fiber(rs);
            let mut acc = g.zero();
            for (i, c) in col.iter().enumerate() {
                acc = g.add(&acc, &m.act(&fibers[i][idx[i]], c));
            }
            acc == g.zero()
        });
        if holds {
            out.insert((0..nf).flat_map(|i| fibers[i][idx[i]].clone()).collect());
        }
        let mut k = 0;
        loop {
            if k == vars.len() {
                return out;
            }
            idx[k] += 1;
            if idx[k] < fibers[k].len() {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
    }
}
