//! Tensor product of a right and a left module over the same ringoid.
//!
//! `M ⊗ N` is presented as `⊕_P M(P) ⊗_Z N(P)` modulo the relations
//! `(m·r) ⊗ n - m ⊗ (r·n)` for coordinate generators `m`, `n` and basis
//! morphisms `r`.

use crate::error::{Error, Result};
use crate::group::{gcd, subquotient, Elem, FinAbGroup, GroupHom, Subgroup, Subquotient};
use crate::module::{same_ring, Module, ModuleMap, Side, SortedTuple};
use crate::ringoid::{Morph, ObjId};

#[derive(Clone, Debug)]
pub struct Tensor {
    right: Module,
    left: Module,
    ambient: FinAbGroup,
    // slot[p][i][j]: coordinate of e_i ⊗ f_j in block p, if that coordinate is nontrivial.
    slots: Vec<Vec<Vec<Option<usize>>>>,
    relations: Subgroup,
    quotient: Subquotient,
}

impl Tensor {
    pub fn new(right: &Module, left: &Module) -> Result<Tensor> {
        if right.side() != Side::Right || left.side() != Side::Left {
            return Err(Error::SideMismatch);
        }
        let ring = right.acting();
        if !same_ring(&right.ring(), &left.ring()) {
            return Err(Error::RingoidMismatch);
        }
        let n = ring.num_objects();
        let mut moduli = Vec::new();
        let mut slots = Vec::with_capacity(n);
        for p in 0..n {
            let block = right
                .fiber(p)
                .moduli()
                .iter()
                .map(|&d| {
                    left.fiber(p)
                        .moduli()
                        .iter()
                        .map(|&e| {
                            let g = gcd(d, e);
                            (g > 1).then(|| {
                                moduli.push(g);
                                moduli.len() - 1
                            })
                        })
                        .collect()
                })
                .collect();
            slots.push(block);
        }
        let ambient = FinAbGroup::new(moduli);
        let mut t = Tensor {
            right: right.clone(),
            left: left.clone(),
            relations: Subgroup::zero(&ambient),
            quotient: subquotient(&Subgroup::whole(&ambient), &Subgroup::zero(&ambient)),
            ambient,
            slots,
        };
        let mut rels = Vec::new();
        for p in 0..n {
            for q in 0..n {
                for r in ring.basis(p, q) {
                    // r: P -> Q acts M(Q) -> M(P) on the right and N(P) -> N(Q) on the left.
                    let r_left = Morph { dom: q, cod: p, elem: r.elem.clone() };
                    for a in 0..right.fiber(q).rank() {
                        let m = right.fiber(q).basis(a);
                        let mr = right.act(&m, &r);
                        for b in 0..left.fiber(p).rank() {
                            let nb = left.fiber(p).basis(b);
                            let rn = left.act(&nb, &r_left);
                            let mut v = t.simple(p, &mr, &nb);
                            let w = t.simple(q, &m, &rn);
                            t.ambient.axpy(&mut v, -1, &w);
                            rels.push(v);
                        }
                    }
                }
            }
        }
        t.relations = Subgroup::from_generators(&t.ambient, rels);
        t.quotient = subquotient(&Subgroup::whole(&t.ambient), &t.relations);
        Ok(t)
    }

    /// `x ⊗ y` for `x ∈ M(p)`, `y ∈ N(p)`, in ambient coordinates.
    fn simple(&self, p: ObjId, x: &[u64], y: &[u64]) -> Elem {
        let mut v = self.ambient.zero();
        for (i, &xi) in x.iter().enumerate() {
            if xi == 0 {
                continue;
            }
            for (j, &yj) in y.iter().enumerate() {
                if let Some(s) = self.slots[p][i][j] {
                    let d = self.ambient.moduli()[s];
                    v[s] = ((v[s] as u128 + xi as u128 * yj as u128) % d as u128) as u64;
                }
            }
        }
        v
    }

    pub fn group(&self) -> &FinAbGroup {
        &self.quotient.group
    }

    pub fn order(&self) -> u128 {
        self.quotient.group.order()
    }

    /// The class of `Σ r_i ⊗ s_i` in quotient coordinates.
    pub fn class_of(&self, r: &SortedTuple, s: &SortedTuple) -> Result<Elem> {
        if r.sorts != s.sorts {
            return Err(Error::SortMismatch("tuples have different sorts".into()));
        }
        let mut v = self.ambient.zero();
        for ((&p, x), y) in r.sorts.iter().zip(&r.entries).zip(&s.entries) {
            let w = self.simple(p, x, y);
            self.ambient.add_assign(&mut v, &w);
        }
        Ok(self.quotient.to_coords(&v).expect("whole group"))
    }

    pub fn is_zero_class(&self, r: &SortedTuple, s: &SortedTuple) -> Result<bool> {
        Ok(self.class_of(r, s)?.iter().all(|&c| c == 0))
    }

    /// The map `f ⊗ g: M ⊗ N -> M' ⊗ N'`.
    pub fn induced(&self, other: &Tensor, f: &ModuleMap, g: &ModuleMap) -> GroupHom {
        debug_assert!(f.source() == &self.right && g.source() == &self.left);
        let images = self
            .quotient
            .lifts()
            .iter()
            .map(|lift| {
                let mut v = other.ambient.zero();
                for (p, block) in self.slots.iter().enumerate() {
                    for (i, row) in block.iter().enumerate() {
                        for (j, slot) in row.iter().enumerate() {
                            let Some(s) = *slot else { continue };
                            let c = lift[s];
                            if c == 0 {
                                continue;
                            }
                            let x = f.component(p).apply(&self.right.fiber(p).basis(i));
                            let y = g.component(p).apply(&self.left.fiber(p).basis(j));
                            let w = other.simple(p, &x, &y);
                            other.ambient.axpy(&mut v, c as i128, &w);
                        }
                    }
                }
                other.quotient.to_coords(&v).expect("whole group")
            })
            .collect();
        GroupHom::new(self.group().clone(), other.group().clone(), images).expect("induced map is well defined")
    }
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::fixtures;
    use crate::module::acting_ringoid;

    fn z4_modules() -> (Module, Module, Module, Module) {
        let r = Arc::new(fixtures::zmod(4));
        let two = r.scale(2, &r.identity(0));
        let op = acting_ringoid(&r, Side::Left);
        let z2r = fixtures::cyclic_quotient(&r, Side::Right, &two).unwrap();
        let z2l = fixtures::cyclic_quotient(&op, Side::Left, &two).unwrap();
        let z4r = Module::representable(&r, Side::Right, 0);
        let z4l = Module::representable(&op, Side::Left, 0);
        (z2r, z2l, z4r, z4l)
    }

    #[test]
    fn small_tensor_products() {
        let (z2r, z2l, z4r, z4l) = z4_modules();
        assert_eq!(Tensor::new(&z2r, &z2l).unwrap().order(), 2);
        assert_eq!(Tensor::new(&z4r, &z4l).unwrap().order(), 4);
        let t = Tensor::new(&z2r, &z4l).unwrap();
        assert_eq!(t.order(), 2);
        let one = SortedTuple::new(vec![0], vec![vec![1]]);
        let two = SortedTuple::new(vec![0], vec![vec![2]]);
        assert!(t.is_zero_class(&one, &two).unwrap());
        assert!(!t.is_zero_class(&one, &one).unwrap());
    }

    #[test]
    fn tensor_with_left_representable_is_the_fiber() {
        let a2 = Arc::new(fixtures::a2(2));
        let op = acting_ringoid(&a2, Side::Left);
        let mq = Module::representable(&a2, Side::Right, 1);
        for q in 0..2 {
            let t = Tensor::new(&mq, &Module::representable(&op, Side::Left, q)).unwrap();
            assert_eq!(t.order(), mq.fiber(q).order());
        }
    }

    #[test]
    fn sides_are_checked() {
        let (z2r, _, z4r, _) = z4_modules();
        assert!(matches!(Tensor::new(&z2r, &z4r), Err(Error::SideMismatch)));
    }
}
