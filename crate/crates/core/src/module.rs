//! Finite modules over a ringoid.
//!
//! A module is stored as a right module over its *acting* ringoid: for a right
//! module that is the ringoid itself, for a left module it is the opposite.
//! A basis morphism `b: P -> Q` of the acting ringoid acts as a homomorphism
//! `M(Q) -> M(P)`, written `m·b`, and `(m·s)·r = m·(s∘r)`.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{subquotient, Elem, FinAbGroup, GroupHom, Subgroup, Subquotient};
use crate::ringoid::{Morph, ObjId, Ringoid};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Left,
    Right,
}

impl Side {
    pub fn flip(self) -> Side {
        match self {
            Side::Left => Side::Right,
            Side::Right => Side::Left,
        }
    }
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::Left => "left",
            Side::Right => "right",
        })
    }
}

/// The ringoid that acts on the right for modules or formulas of `side` over `ring`.
pub fn acting_ringoid(ring: &Arc<Ringoid>, side: Side) -> Arc<Ringoid> {
    match side {
        Side::Right => ring.clone(),
        Side::Left => Arc::new(ring.opposite()),
    }
}

pub(crate) fn same_ring(a: &Arc<Ringoid>, b: &Arc<Ringoid>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

/// A tuple of module elements, entry `i` in the fiber at `sorts[i]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SortedTuple {
    pub sorts: Vec<ObjId>,
    pub entries: Vec<Elem>,
}

impl SortedTuple {
    pub fn new(sorts: Vec<ObjId>, entries: Vec<Elem>) -> Self {
        assert_eq!(sorts.len(), entries.len());
        SortedTuple { sorts, entries }
    }

    pub fn len(&self) -> usize {
        self.sorts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sorts.is_empty()
    }

    /// Concatenated coordinates, an element of `M(sorts[0]) x ...`.
    pub fn flatten(&self) -> Elem {
        self.entries.concat()
    }

    pub fn from_flat(m: &Module, sorts: &[ObjId], v: &[u64]) -> Self {
        let mut entries = Vec::with_capacity(sorts.len());
        let mut at = 0;
        for &s in sorts {
            let r = m.fiber(s).rank();
            entries.push(v[at..at + r].to_vec());
            at += r;
        }
        SortedTuple { sorts: sorts.to_vec(), entries }
    }
}

#[derive(Clone, Debug)]
pub struct Module {
    acting: Arc<Ringoid>,
    side: Side,
    fibers: Vec<FinAbGroup>,
    // Indexed by p * n + q; one map M(q) -> M(p) per basis element of acting hom(p, q).
    actions: Vec<Vec<GroupHom>>,
}

impl PartialEq for Module {
    fn eq(&self, other: &Self) -> bool {
        self.side == other.side
            && self.fibers == other.fibers
            && self.actions == other.actions
            && same_ring(&self.acting, &other.acting)
    }
}

impl Eq for Module {}

impl Module {
    /// Builds and validates a module over `ring` (the ringoid the module is
    /// a functor on, not its acting ringoid).
    ///
    /// `actions[p * n + q][i]` is the action of the `i`-th generator of
    /// `hom(p, q)`: a map `M(q) -> M(p)` for right modules and `M(p) -> M(q)`
    /// for left modules.
    pub fn build(ring: &Arc<Ringoid>, side: Side, fibers: Vec<FinAbGroup>, actions: Vec<Vec<GroupHom>>) -> Result<Module> {
        let acting = acting_ringoid(ring, side);
        let n = ring.num_objects();
        if actions.len() != n * n || fibers.len() != n {
            return Err(Error::InvalidSpec("module tables do not match the object count".into()));
        }
        let actions = match side {
            Side::Right => actions,
            Side::Left => (0..n * n).map(|i| actions[(i % n) * n + i / n].clone()).collect(),
        };
        Module::from_acting(acting, side, fibers, actions)
    }

    pub(crate) fn from_acting(
        acting: Arc<Ringoid>,
        side: Side,
        fibers: Vec<FinAbGroup>,
        actions: Vec<Vec<GroupHom>>,
    ) -> Result<Module> {
        let n = acting.num_objects();
        for p in 0..n {
            for q in 0..n {
                let maps = &actions[p * n + q];
                let hom = acting.hom(p, q);
                if maps.len() != hom.rank() {
                    return Err(Error::InvalidSpec(format!(
                        "expected {} action maps for generators of hom({}, {})",
                        hom.rank(),
                        acting.object_name(p),
                        acting.object_name(q)
                    )));
                }
                for (i, f) in maps.iter().enumerate() {
                    let b = Morph { dom: p, cod: q, elem: hom.basis(i) };
                    if f.src() != &fibers[q] || f.dst() != &fibers[p] || GroupHom::new(f.src().clone(), f.dst().clone(), f.images().to_vec()).is_none() {
                        return Err(Error::FunctorialityViolation { detail: "action is not a homomorphism between the fibers".into(), witness: vec![b] });
                    }
                    if !f.scale(hom.moduli()[i] as i128).is_zero() {
                        return Err(Error::FunctorialityViolation { detail: "action is not additive in the morphism".into(), witness: vec![b] });
                    }
                }
            }
        }
        let m = Module { acting, side, fibers, actions };
        m.check_functorial()?;
        Ok(m)
    }

    fn check_functorial(&self) -> Result<()> {
        let r = &self.acting;
        let n = r.num_objects();
        for p in 0..n {
            if self.action(&r.identity(p)) != GroupHom::identity(&self.fibers[p]) {
                return Err(Error::FunctorialityViolation { detail: "identity does not act as the identity".into(), witness: vec![r.identity(p)] });
            }
        }
        for p in 0..n {
            for q in 0..n {
                for s in 0..n {
                    for a in r.basis(q, s) {
                        let fa = self.action(&a);
                        for b in r.basis(p, q) {
                            let lhs = self.action(&r.compose(&a, &b));
                            let rhs = self.action(&b).compose(&fa);
                            if lhs != rhs {
                                return Err(Error::FunctorialityViolation {
                                    detail: "action does not respect composition".into(),
                                    witness: vec![a.clone(), b],
                                });
                            }
                        }
                    }
                }
            }
        }
        Ok(())
    }

    pub fn acting(&self) -> &Arc<Ringoid> {
        &self.acting
    }

    /// The ringoid the module is a functor on.
    pub fn ring(&self) -> Arc<Ringoid> {
        acting_ringoid(&self.acting, self.side)
    }

    pub fn side(&self) -> Side {
        self.side
    }

    pub fn fiber(&self, p: ObjId) -> &FinAbGroup {
        &self.fibers[p]
    }

    pub fn fibers(&self) -> &[FinAbGroup] {
        &self.fibers
    }

    pub fn order(&self) -> u128 {
        self.fibers.iter().map(FinAbGroup::order).product()
    }

    pub fn is_zero(&self) -> bool {
        self.fibers.iter().all(FinAbGroup::is_trivial)
    }

    pub fn zero(acting: &Arc<Ringoid>, side: Side) -> Module {
        let n = acting.num_objects();
        let fibers = vec![FinAbGroup::trivial(); n];
        let actions = (0..n * n)
            .map(|i| {
                let (p, q) = (i / n, i % n);
                vec![GroupHom::zero(&fibers[q], &fibers[p]); acting.hom(p, q).rank()]
            })
            .collect();
        Module { acting: acting.clone(), side, fibers, actions }
    }

    /// The action of an arbitrary acting morphism `r: P -> Q`, as `M(Q) -> M(P)`.
    pub fn action(&self, r: &Morph) -> GroupHom {
        let n = self.acting.num_objects();
        let maps = &self.actions[r.dom * n + r.cod];
        let mut out = GroupHom::zero(&self.fibers[r.cod], &self.fibers[r.dom]);
        for (&c, f) in r.elem.iter().zip(maps) {
            if c != 0 {
                out = out.add(&f.scale(c as i128));
            }
        }
        out
    }

    /// `m·r` for `m` in `M(r.cod)`.
    pub fn act(&self, m: &[u64], r: &Morph) -> Elem {
        let n = self.acting.num_objects();
        let maps = &self.actions[r.dom * n + r.cod];
        let dst = &self.fibers[r.dom];
        let mut out = dst.zero();
        for (&c, f) in r.elem.iter().zip(maps) {
            if c != 0 {
                dst.axpy(&mut out, c as i128, &f.apply(m));
            }
        }
        out
    }

    /// Basis action maps for generators of acting `hom(p, q)`.
    pub fn basis_actions(&self, p: ObjId, q: ObjId) -> &[GroupHom] {
        &self.actions[p * self.acting.num_objects() + q]
    }

    pub fn check_compatible(&self, other: &Module) -> Result<()> {
        if self.side != other.side {
            return Err(Error::SideMismatch);
        }
        if !same_ring(&self.acting, &other.acting) {
            return Err(Error::RingoidMismatch);
        }
        Ok(())
    }

    /// `M(sorts[0]) x M(sorts[1]) x ...`.
    pub fn tuple_group(&self, sorts: &[ObjId]) -> FinAbGroup {
        FinAbGroup::product_of(sorts.iter().map(|&s| &self.fibers[s]))
    }

    /// The representable `(-, p)` of the acting ringoid: `hom(q, p)` at `q`
    /// with precomposition. For a left module this is `(p, -)`.
    pub fn representable(acting: &Arc<Ringoid>, side: Side, p: ObjId) -> Module {
        let r = acting;
        let n = r.num_objects();
        let fibers: Vec<FinAbGroup> = (0..n).map(|q| r.hom(q, p).clone()).collect();
        let actions = (0..n * n)
            .map(|i| {
                let (a, b) = (i / n, i % n);
                r.basis(a, b)
                    .map(|t| {
                        GroupHom::from_fn(&fibers[b], &fibers[a], |x| {
                            r.compose(&Morph { dom: b, cod: p, elem: x.clone() }, &t).elem
                        })
                    })
                    .collect()
            })
            .collect();
        Module { acting: acting.clone(), side, fibers, actions }
    }

    /// The representable on a ringoid given from the user's side.
    pub fn representable_on(ring: &Arc<Ringoid>, side: Side, p: ObjId) -> Module {
        Module::representable(&acting_ringoid(ring, side), side, p)
    }

    /// Quotient of `⊕ (-, gen_sorts[i])` by the subfunctor generated by the
    /// relation columns. Column `j` has sort `rel_sorts[j]` and entries
    /// `columns[j][i]: rel_sorts[j] -> gen_sorts[i]` in the acting ringoid.
    /// Returns the module and the images of the generators.
    pub fn finitely_presented(
        acting: &Arc<Ringoid>,
        side: Side,
        gen_sorts: &[ObjId],
        rel_sorts: &[ObjId],
        columns: &[Vec<Morph>],
    ) -> Result<(Module, SortedTuple)> {
        let r = acting;
        for (j, col) in columns.iter().enumerate() {
            if col.len() != gen_sorts.len() {
                return Err(Error::SortMismatch(format!("relation column {j} has {} entries", col.len())));
            }
            for (i, m) in col.iter().enumerate() {
                if m.dom != rel_sorts[j] || m.cod != gen_sorts[i] {
                    return Err(Error::SortMismatch(format!("relation entry ({i}, {j}) has the wrong sorts")));
                }
            }
        }
        let free = free_module(r, side, gen_sorts);
        let n = r.num_objects();
        let mut rels: Vec<Subgroup> = (0..n).map(|p| Subgroup::zero(free.fiber(p))).collect();
        for p in 0..n {
            let mut gens = Vec::new();
            for (j, col) in columns.iter().enumerate() {
                for t in r.basis(p, rel_sorts[j]) {
                    gens.push(col.iter().flat_map(|h| r.compose(h, &t).elem).collect::<Elem>());
                }
            }
            rels[p] = Subgroup::from_generators(free.fiber(p), gens);
        }
        let tops: Vec<Subgroup> = (0..n).map(|p| Subgroup::whole(free.fiber(p))).collect();
        let (module, maps) = free.sub_quotient(&tops, &rels);
        let entries = gen_sorts
            .iter()
            .enumerate()
            .map(|(i, &s)| {
                let mut v = Vec::new();
                for (k, &t) in gen_sorts.iter().enumerate() {
                    v.extend(if k == i { r.identity(s).elem } else { r.zero(s, t).elem });
                }
                maps[s].to_coords(&v).expect("whole fiber")
            })
            .collect();
        Ok((module, SortedTuple { sorts: gen_sorts.to_vec(), entries }))
    }

    /// The smallest action-closed family of subgroups containing `gens`.
    pub fn closure(&self, gens: Vec<Subgroup>) -> Vec<Subgroup> {
        let r = &self.acting;
        let n = r.num_objects();
        let mut subs = gens;
        loop {
            let mut changed = false;
            for q in 0..n {
                let rows = subs[q].generators().to_vec();
                for p in 0..n {
                    let mut next = subs[p].clone();
                    for b in r.basis(p, q) {
                        for row in &rows {
                            let v = self.act(row, &b);
                            if !next.contains(&v) {
                                next.insert(v);
                            }
                        }
                    }
                    if next != subs[p] {
                        subs[p] = next;
                        changed = true;
                    }
                }
            }
            if !changed {
                return subs;
            }
        }
    }

    pub fn is_submodule(&self, subs: &[Subgroup]) -> bool {
        let r = &self.acting;
        let n = r.num_objects();
        (0..n).all(|q| {
            subs[q].generators().iter().all(|row| {
                (0..n).all(|p| r.basis(p, q).all(|b| subs[p].contains(&self.act(row, &b))))
            })
        })
    }

    /// `top / bottom` for action-closed families `bottom ⊆ top`, with the
    /// per-object coordinate maps.
    pub fn sub_quotient(&self, top: &[Subgroup], bottom: &[Subgroup]) -> (Module, Vec<Subquotient>) {
        let r = &self.acting;
        let n = r.num_objects();
        let maps: Vec<Subquotient> = (0..n).map(|p| subquotient(&top[p], &bottom[p])).collect();
        let fibers: Vec<FinAbGroup> = maps.iter().map(|m| m.group.clone()).collect();
        let actions = (0..n * n)
            .map(|i| {
                let (p, q) = (i / n, i % n);
                r.basis(p, q)
                    .map(|b| {
                        let images = maps[q]
                            .lifts()
                            .iter()
                            .map(|l| maps[p].to_coords(&self.act(l, &b)).expect("family is action-closed"))
                            .collect();
                        GroupHom::new(fibers[q].clone(), fibers[p].clone(), images).expect("induced action")
                    })
                    .collect()
            })
            .collect();
        (Module { acting: r.clone(), side: self.side, fibers, actions }, maps)
    }

    pub fn direct_sum(&self, other: &Module) -> Result<Module> {
        self.check_compatible(other)?;
        let r = &self.acting;
        let n = r.num_objects();
        let fibers: Vec<FinAbGroup> = (0..n).map(|p| self.fibers[p].product(&other.fibers[p])).collect();
        let actions = (0..n * n)
            .map(|i| {
                let (p, q) = (i / n, i % n);
                let k = self.fibers[q].rank();
                self.actions[i]
                    .iter()
                    .zip(&other.actions[i])
                    .map(|(f, g)| {
                        GroupHom::from_fn(&fibers[q], &fibers[p], |x| {
                            let mut v = f.apply(&x[..k]);
                            v.extend(g.apply(&x[k..]));
                            v
                        })
                    })
                    .collect()
            })
            .collect();
        Ok(Module { acting: r.clone(), side: self.side, fibers, actions })
    }

    pub fn direct_sum_of(parts: &[Module], acting: &Arc<Ringoid>, side: Side) -> Result<Module> {
        let mut acc = Module::zero(acting, side);
        for m in parts {
            acc = acc.direct_sum(m)?;
        }
        Ok(acc)
    }

    pub fn power(&self, k: usize) -> Module {
        let mut acc = Module::zero(&self.acting, self.side);
        for _ in 0..k {
            acc = acc.direct_sum(self).expect("same ringoid");
        }
        acc
    }

    /// All elements of `M(sorts[0]) x ...` as tuples, in enumeration order.
    pub fn tuples(&self, sorts: &[ObjId]) -> impl Iterator<Item = SortedTuple> + '_ {
        let g = self.tuple_group(sorts);
        let sorts = sorts.to_vec();
        let elems: Vec<Elem> = g.elements().collect();
        elems.into_iter().map(move |v| SortedTuple::from_flat(self, &sorts, &v))
    }

    /// Every element of the module as a one-entry tuple, object by object.
    pub fn elements(&self) -> Vec<SortedTuple> {
        (0..self.acting.num_objects())
            .flat_map(|p| self.fibers[p].elements().map(move |e| SortedTuple { sorts: vec![p], entries: vec![e] }))
            .collect()
    }

    /// One tuple containing a coordinate generator of every fiber.
    pub fn generating_tuple(&self) -> SortedTuple {
        let mut sorts = Vec::new();
        let mut entries = Vec::new();
        for (p, f) in self.fibers.iter().enumerate() {
            for i in 0..f.rank() {
                sorts.push(p);
                entries.push(f.basis(i));
            }
        }
        SortedTuple { sorts, entries }
    }

    /// Linear map from `X = ∏_P ∏_{a} N(P)` (images of the coordinate
    /// generators of each `M(P)`) whose kernel is `Hom(M, N)`.
    fn hom_constraints(&self, target: &Module) -> (FinAbGroup, Vec<usize>, GroupHom) {
        let r = &self.acting;
        let n = r.num_objects();
        let mut offsets = Vec::with_capacity(n + 1);
        let mut moduli = Vec::new();
        for p in 0..n {
            offsets.push(moduli.len());
            for _ in 0..self.fibers[p].rank() {
                moduli.extend_from_slice(target.fibers[p].moduli());
            }
        }
        offsets.push(moduli.len());
        let x = FinAbGroup::new(moduli);
        // Image of generator a of M(P) inside X.
        let slot = |p: ObjId, a: usize| offsets[p] + a * target.fibers[p].rank();
        let mut blocks: Vec<FinAbGroup> = Vec::new();
        // Each constraint is a function X -> some N(P).
        let mut constraints: Vec<Box<dyn Fn(&[u64]) -> Elem + '_>> = Vec::new();
        for p in 0..n {
            let np = target.fibers[p].clone();
            let rk = np.rank();
            for (a, &d) in self.fibers[p].moduli().iter().enumerate() {
                let s = slot(p, a);
                let np2 = np.clone();
                blocks.push(np.clone());
                constraints.push(Box::new(move |xv: &[u64]| np2.scale(d as i128, &xv[s..s + rk])));
            }
        }
        for p in 0..n {
            for q in 0..n {
                for b in r.basis(p, q) {
                    for a in 0..self.fibers[q].rank() {
                        let np = target.fibers[p].clone();
                        let image = self.act(&self.fibers[q].basis(a), &b);
                        let (sq, rq, rp) = (slot(q, a), target.fibers[q].rank(), np.rank());
                        let b2 = b.clone();
                        let p0 = slot(p, 0);
                        blocks.push(np.clone());
                        constraints.push(Box::new(move |xv: &[u64]| {
                            // f_P(e_a·b) - f_Q(e_a)·b
                            let mut v = np.zero();
                            for (k, &c) in image.iter().enumerate() {
                                if c != 0 {
                                    let s = p0 + k * rp;
                                    np.axpy(&mut v, c as i128, &xv[s..s + rp]);
                                }
                            }
                            let rhs = target.act(&xv[sq..sq + rq], &b2);
                            np.sub(&v, &rhs)
                        }));
                    }
                }
            }
        }
        let y = FinAbGroup::product_of(blocks.iter());
        let map = GroupHom::from_fn(&x, &y, |xv| constraints.iter().flat_map(|c| c(xv)).collect());
        (x, offsets, map)
    }

    /// `Hom(self, target)` as a subgroup of the generator-image group.
    pub fn hom_group(&self, target: &Module) -> Result<(Subgroup, Vec<usize>)> {
        self.check_compatible(target)?;
        let (_, offsets, map) = self.hom_constraints(target);
        Ok((map.kernel(), offsets))
    }

    /// Converts a point of the generator-image group into a module map.
    pub(crate) fn map_from_images(&self, target: &Module, offsets: &[usize], xv: &[u64]) -> ModuleMap {
        let n = self.acting.num_objects();
        let components = (0..n)
            .map(|p| {
                let rk = target.fibers[p].rank();
                let images = (0..self.fibers[p].rank())
                    .map(|a| {
                        let s = offsets[p] + a * rk;
                        xv[s..s + rk].to_vec()
                    })
                    .collect();
                GroupHom::new(self.fibers[p].clone(), target.fibers[p].clone(), images).expect("kernel point")
            })
            .collect();
        ModuleMap { source: self.clone(), target: target.clone(), components }
    }

    /// Every module map, ordered lexicographically by generator images.
    pub fn hom_set(&self, target: &Module) -> Result<Vec<ModuleMap>> {
        let (sub, offsets) = self.hom_group(target)?;
        let mut points = sub.elements();
        points.sort();
        Ok(points.iter().map(|xv| self.map_from_images(target, &offsets, xv)).collect())
    }

    /// Number of module maps, without enumerating them.
    pub fn hom_count(&self, target: &Module) -> Result<u128> {
        Ok(self.hom_group(target)?.0.order())
    }

    /// A basis of `Hom(self, target)` as maps: the Howell generators.
    pub fn hom_generators(&self, target: &Module) -> Result<Vec<ModuleMap>> {
        let (sub, offsets) = self.hom_group(target)?;
        Ok(sub.generators().iter().map(|xv| self.map_from_images(target, &offsets, xv)).collect())
    }

    /// Describes the fibers, e.g. `P: Z/2, Q: 0`.
    pub fn describe(&self) -> String {
        let parts: Vec<String> =
            (0..self.acting.num_objects()).map(|p| format!("{}: {}", self.acting.object_name(p), self.fibers[p])).collect();
        parts.join(", ")
    }
}

impl fmt::Display for Module {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.acting.is_one_object() {
            write!(f, "{} ({} module, order {})", self.fibers[0], self.side, self.order())
        } else {
            write!(f, "[{}] ({} module, order {})", self.describe(), self.side, self.order())
        }
    }
}

/// The free module `⊕ (-, sorts[i])` in the acting ringoid.
pub(crate) fn free_module(acting: &Arc<Ringoid>, side: Side, sorts: &[ObjId]) -> Module {
    let mut acc = Module::zero(acting, side);
    for &s in sorts {
        acc = acc.direct_sum(&Module::representable(acting, side, s)).expect("same ringoid");
    }
    acc
}

/// A natural transformation between modules over the same ringoid and side.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModuleMap {
    source: Module,
    target: Module,
    components: Vec<GroupHom>,
}

/// Kernel, image and cokernel of a module map.
#[derive(Clone, Debug)]
pub struct Factorization {
    pub kernel: Module,
    pub kernel_inclusion: ModuleMap,
    pub image: Module,
    pub cokernel: Module,
    pub cokernel_projection: ModuleMap,
}

impl ModuleMap {
    pub fn new(source: &Module, target: &Module, components: Vec<GroupHom>) -> Result<ModuleMap> {
        source.check_compatible(target)?;
        let r = source.acting.clone();
        let n = r.num_objects();
        if components.len() != n {
            return Err(Error::InvalidSpec("one component per object is required".into()));
        }
        for p in 0..n {
            let c = &components[p];
            if c.src() != source.fiber(p) || c.dst() != target.fiber(p) {
                return Err(Error::InvalidSpec(format!("component at {} has the wrong fibers", r.object_name(p))));
            }
            if GroupHom::new(c.src().clone(), c.dst().clone(), c.images().to_vec()).is_none() {
                return Err(Error::InvalidSpec(format!("component at {} is not a homomorphism", r.object_name(p))));
            }
        }
        for p in 0..n {
            for q in 0..n {
                for b in r.basis(p, q) {
                    let lhs = components[p].compose(&source.action(&b));
                    let rhs = target.action(&b).compose(&components[q]);
                    if lhs != rhs {
                        return Err(Error::FunctorialityViolation { detail: "map is not natural".into(), witness: vec![b] });
                    }
                }
            }
        }
        Ok(ModuleMap { source: source.clone(), target: target.clone(), components })
    }

    pub fn identity(m: &Module) -> ModuleMap {
        let components = m.fibers.iter().map(GroupHom::identity).collect();
        ModuleMap { source: m.clone(), target: m.clone(), components }
    }

    pub fn zero(source: &Module, target: &Module) -> ModuleMap {
        let components = source.fibers.iter().zip(&target.fibers).map(|(a, b)| GroupHom::zero(a, b)).collect();
        ModuleMap { source: source.clone(), target: target.clone(), components }
    }

    pub fn source(&self) -> &Module {
        &self.source
    }

    pub fn target(&self) -> &Module {
        &self.target
    }

    pub fn component(&self, p: ObjId) -> &GroupHom {
        &self.components[p]
    }

    pub fn components(&self) -> &[GroupHom] {
        &self.components
    }

    pub fn apply(&self, t: &SortedTuple) -> SortedTuple {
        let entries = t.sorts.iter().zip(&t.entries).map(|(&s, e)| self.components[s].apply(e)).collect();
        SortedTuple { sorts: t.sorts.clone(), entries }
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &ModuleMap) -> ModuleMap {
        let components = self.components.iter().zip(&inner.components).map(|(a, b)| a.compose(b)).collect();
        ModuleMap { source: inner.source.clone(), target: self.target.clone(), components }
    }

    pub fn is_mono(&self) -> bool {
        self.components.iter().all(|c| c.kernel().is_zero())
    }

    pub fn is_epi(&self) -> bool {
        self.components.iter().all(|c| c.image().is_whole())
    }

    pub fn factor(&self) -> Factorization {
        let n = self.source.acting.num_objects();
        let kernels: Vec<Subgroup> = self.components.iter().map(GroupHom::kernel).collect();
        let zeros_src: Vec<Subgroup> = (0..n).map(|p| Subgroup::zero(self.source.fiber(p))).collect();
        let (kernel, kmaps) = self.source.sub_quotient(&kernels, &zeros_src);
        let inclusion = (0..n)
            .map(|p| GroupHom::new(kernel.fiber(p).clone(), self.source.fiber(p).clone(), kmaps[p].lifts().to_vec()).expect("inclusion"))
            .collect();
        let kernel_inclusion = ModuleMap { source: kernel.clone(), target: self.source.clone(), components: inclusion };
        let images: Vec<Subgroup> = self.components.iter().map(GroupHom::image).collect();
        let zeros_dst: Vec<Subgroup> = (0..n).map(|p| Subgroup::zero(self.target.fiber(p))).collect();
        let (image, _) = self.target.sub_quotient(&images, &zeros_dst);
        let wholes: Vec<Subgroup> = (0..n).map(|p| Subgroup::whole(self.target.fiber(p))).collect();
        let (cokernel, cmaps) = self.target.sub_quotient(&wholes, &images);
        let projection = (0..n)
            .map(|p| {
                GroupHom::from_fn(self.target.fiber(p), cokernel.fiber(p), |x| cmaps[p].to_coords(x).expect("whole fiber"))
            })
            .collect();
        let cokernel_projection = ModuleMap { source: self.target.clone(), target: cokernel.clone(), components: projection };
        Factorization { kernel, kernel_inclusion, image, cokernel, cokernel_projection }
    }

    /// The submodule inclusion of an action-closed family of subgroups.
    pub fn inclusion_of(m: &Module, subs: &[Subgroup]) -> ModuleMap {
        let n = m.acting.num_objects();
        let zeros: Vec<Subgroup> = (0..n).map(|p| Subgroup::zero(m.fiber(p))).collect();
        let (sub, maps) = m.sub_quotient(subs, &zeros);
        let components = (0..n)
            .map(|p| GroupHom::new(sub.fiber(p).clone(), m.fiber(p).clone(), maps[p].lifts().to_vec()).expect("inclusion"))
            .collect();
        ModuleMap { source: sub, target: m.clone(), components }
    }

    /// The quotient map `m -> m / subs`.
    pub fn quotient_of(m: &Module, subs: &[Subgroup]) -> ModuleMap {
        let n = m.acting.num_objects();
        let wholes: Vec<Subgroup> = (0..n).map(|p| Subgroup::whole(m.fiber(p))).collect();
        let (quo, maps) = m.sub_quotient(&wholes, subs);
        let components = (0..n)
            .map(|p| GroupHom::from_fn(m.fiber(p), quo.fiber(p), |x| maps[p].to_coords(x).expect("whole fiber")))
            .collect();
        ModuleMap { source: m.clone(), target: quo, components }
    }
}

/// Every submodule of `m`, as action-closed subgroup families, in discovery order.
pub fn submodules(m: &Module) -> Vec<Vec<Subgroup>> {
    let n = m.acting().num_objects();
    let zero: Vec<Subgroup> = (0..n).map(|p| Subgroup::zero(m.fiber(p))).collect();
    let mut found = vec![zero.clone()];
    let mut frontier = vec![zero];
    let elements = m.elements();
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for fam in &frontier {
            for e in &elements {
                let p = e.sorts[0];
                if fam[p].contains(&e.entries[0]) {
                    continue;
                }
                let mut gens = fam.clone();
                gens[p].insert(e.entries[0].clone());
                let closed = m.closure(gens);
                if !found.contains(&closed) {
                    found.push(closed.clone());
                    next.push(closed);
                }
            }
        }
        frontier = next;
    }
    found
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn z4() -> Arc<Ringoid> {
        Arc::new(fixtures::zmod(4))
    }

    #[test]
    fn z2_over_z4_and_hom_set() {
        let r = z4();
        let (z2, _) = Module::finitely_presented(&r, Side::Right, &[0], &[0], &[vec![r.scale(2, &r.identity(0))]]).unwrap();
        assert_eq!(z2.order(), 2);
        let reg = Module::representable(&r, Side::Right, 0);
        let maps = z2.hom_set(&reg).unwrap();
        assert_eq!(maps.len(), 2);
        assert!(maps[0].components()[0].is_zero());
        assert_eq!(maps[1].components()[0].images()[0], vec![2]);
        assert_eq!(z2.hom_set(&Module::zero(&r, Side::Right)).unwrap().len(), 1);
    }

    #[test]
    fn canonical_surjection_factors() {
        let r = z4();
        let reg = Module::representable(&r, Side::Right, 0);
        let sub = reg.closure(vec![Subgroup::from_generators(reg.fiber(0), [vec![2]])]);
        let q = ModuleMap::quotient_of(&reg, &sub);
        let f = q.factor();
        assert_eq!(f.kernel.order(), 2);
        assert_eq!(f.image.order(), 2);
        assert_eq!(f.cokernel.order(), 1);
    }

    #[test]
    fn a2_representables_and_yoneda() {
        let a2 = Arc::new(fixtures::a2(2));
        let p = Module::representable(&a2, Side::Right, 0);
        let q = Module::representable(&a2, Side::Right, 1);
        assert_eq!(p.fiber(0).order(), 2);
        assert_eq!(p.fiber(1).order(), 1);
        assert_eq!(p.hom_count(&q).unwrap(), q.fiber(0).order());
        assert_eq!(q.hom_count(&q).unwrap(), 2);
    }

    #[test]
    fn identity_must_act_trivially() {
        let r = z4();
        let g = FinAbGroup::new(vec![4]);
        let bad = GroupHom::new(g.clone(), g.clone(), vec![vec![3]]).unwrap();
        let err = Module::build(&r, Side::Right, vec![g], vec![vec![bad]]).unwrap_err();
        assert!(matches!(err, Error::FunctorialityViolation { .. }));
    }

    #[test]
    fn submodule_count_of_z4_squared() {
        let r = z4();
        let m = Module::representable(&r, Side::Right, 0).power(2);
        // Over Z/4 submodules are subgroups; Z/4 x Z/4 has 15.
        assert_eq!(submodules(&m).len(), 15);
    }
}
