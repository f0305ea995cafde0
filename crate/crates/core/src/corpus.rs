//! Finite test modules: isomorphism testing and enumeration of all modules
//! up to a given order.

use std::collections::HashMap;
use std::sync::Arc;

use crate::error::Result;
use crate::module::{acting_ringoid, submodules, Module, ModuleMap, Side};
use crate::ringoid::Ringoid;

fn fiber_shape(m: &Module) -> Vec<Vec<u64>> {
    m.fibers().iter().map(|g| g.invariant_factors()).collect()
}

/// Whether some module map `a -> b` is bijective.
pub fn is_isomorphic(a: &Module, b: &Module) -> Result<bool> {
    a.check_compatible(b)?;
    if fiber_shape(a) != fiber_shape(b) {
        return Ok(false);
    }
    if a.hom_count(b)? != b.hom_count(a)? || a.hom_count(a)? != b.hom_count(b)? {
        return Ok(false);
    }
    Ok(a.hom_set(b)?.iter().any(ModuleMap::is_mono))
}

/// Deduplicates modules up to isomorphism, using hom counts from a fixed
/// list of probes to bucket candidates.
pub struct IsoClasses {
    probes: Vec<Module>,
    buckets: HashMap<(Vec<Vec<u64>>, Vec<u128>), Vec<usize>>,
    reps: Vec<Module>,
}

impl IsoClasses {
    pub fn new(probes: Vec<Module>) -> Self {
        IsoClasses { probes, buckets: HashMap::new(), reps: Vec::new() }
    }

    /// Adds `m` unless an isomorphic module is present; returns its index.
    pub fn insert(&mut self, m: Module) -> Result<(usize, bool)> {
        let counts = self.probes.iter().map(|p| p.hom_count(&m)).collect::<Result<Vec<_>>>()?;
        let key = (fiber_shape(&m), counts);
        if let Some(idxs) = self.buckets.get(&key) {
            for &i in idxs {
                if is_isomorphic(&self.reps[i], &m)? {
                    return Ok((i, false));
                }
            }
        }
        self.buckets.entry(key).or_default().push(self.reps.len());
        self.reps.push(m);
        Ok((self.reps.len() - 1, true))
    }

    pub fn modules(&self) -> &[Module] {
        &self.reps
    }

    pub fn into_modules(self) -> Vec<Module> {
        self.reps
    }
}

/// Quotients of sums of at most two representables, up to isomorphism,
/// nonzero and of order at most `max_order`.
pub fn small_quotients(acting: &Arc<Ringoid>, side: Side, max_order: u128) -> Result<Vec<Module>> {
    let n = acting.num_objects();
    let mut frees = Vec::new();
    for p in 0..n {
        frees.push(Module::representable(acting, side, p));
    }
    for p in 0..n {
        for q in p..n {
            frees.push(frees[p].direct_sum(&frees[q])?);
        }
    }
    let mut classes = IsoClasses::new(vec![]);
    for f in &frees {
        for k in submodules(f) {
            let q = ModuleMap::quotient_of(f, &k);
            let m = q.target();
            if m.is_zero() || m.order() > max_order {
                continue;
            }
            classes.insert(m.clone())?;
        }
    }
    Ok(classes.into_modules())
}

/// Every direct sum of small quotients with order at most `max_order`, up to
/// isomorphism, starting with the zero module. Over rings whose
/// indecomposable modules are cyclic this is every module of that order.
pub fn modules_up_to(ring: &Arc<Ringoid>, side: Side, max_order: u128) -> Result<Vec<Module>> {
    let acting = acting_ringoid(ring, side);
    let blocks = small_quotients(&acting, side, max_order)?;
    let mut classes = IsoClasses::new(blocks.clone());
    classes.insert(Module::zero(&acting, side))?;
    // Multisets of block indices, grown in nondecreasing order.
    let mut frontier: Vec<(usize, Module)> = vec![(0, Module::zero(&acting, side))];
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for (lo, m) in &frontier {
            for (i, b) in blocks.iter().enumerate().skip(*lo) {
                if m.order() * b.order() > max_order {
                    continue;
                }
                let s = m.direct_sum(b)?;
                classes.insert(s.clone())?;
                next.push((i, s));
            }
        }
        frontier = next;
    }
    let mut out = classes.into_modules();
    out.sort_by_key(|m| m.order());
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn modules_over_z4() {
        let r = Arc::new(fixtures::zmod(4));
        let ms = modules_up_to(&r, Side::Right, 16).unwrap();
        // Abelian groups of exponent dividing 4 and order at most 16:
        // 0, Z2, Z4, Z2², Z2xZ4, Z2³, Z4², Z2²xZ4, Z2⁴.
        assert_eq!(ms.len(), 9);
        assert!(ms[0].is_zero());
    }

    #[test]
    fn modules_over_f2e() {
        let r = Arc::new(fixtures::ring("f2e").unwrap());
        let ms = modules_up_to(&r, Side::Right, 16).unwrap();
        // Sums of S and R with dimension at most 4: (a, b) with a + 2b <= 4.
        assert_eq!(ms.len(), 9);
    }

    #[test]
    fn isomorphism_test() {
        let r = Arc::new(fixtures::zmod(4));
        let reg = Module::representable(&r, Side::Right, 0);
        let z2 = fixtures::cyclic_quotient(&r, Side::Right, &r.scale(2, &r.identity(0))).unwrap();
        assert!(is_isomorphic(&reg.direct_sum(&z2).unwrap(), &z2.direct_sum(&reg).unwrap()).unwrap());
        assert!(!is_isomorphic(&reg, &z2.power(2)).unwrap());
    }
}
