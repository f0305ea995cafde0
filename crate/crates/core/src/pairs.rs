//! The category of pp-pairs: objects `φ/ψ`, pp-definable morphisms between
//! them, and their kernels, images and cokernels.
//!
//! A morphism `φ/ψ -> φ'/ψ'` is a formula `ρ(x̄, ȳ)` whose free variables are
//! the source variables followed by the target variables.

use std::fmt;
use std::sync::Arc;

use crate::error::{Counterexample, Error, Result};
use crate::group::{subquotient, FinAbGroup, GroupHom, LinearSystem, Subgroup, Subquotient};
use crate::module::{Module, ModuleMap, Side, SortedTuple};
use crate::pp::{Implication, PpFormula};
use crate::ringoid::{Morph, ObjId, Ringoid};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PpPair {
    top: PpFormula,
    bottom: PpFormula,
}

impl PpPair {
    /// `top / bottom`; fails with the counterexample from `implies` unless
    /// `bottom ≤ top`.
    pub fn new(top: PpFormula, bottom: PpFormula) -> Result<PpPair> {
        match bottom.implies(&top)? {
            Implication::Holds => Ok(PpPair { top, bottom }),
            Implication::Fails(c) => Err(Error::NotAPair(c)),
        }
    }

    pub fn top(&self) -> &PpFormula {
        &self.top
    }

    pub fn bottom(&self) -> &PpFormula {
        &self.bottom
    }

    pub fn acting(&self) -> &Arc<Ringoid> {
        self.top.acting()
    }

    pub fn side(&self) -> Side {
        self.top.side()
    }

    pub fn free_sorts(&self) -> &[ObjId] {
        self.top.free_sorts()
    }

    /// `(x̄ = x̄) / (x̄ = 0)`.
    pub fn full(acting: &Arc<Ringoid>, side: Side, free: Vec<ObjId>) -> Result<PpPair> {
        PpPair::new(PpFormula::top(acting, side, free.clone())?, PpFormula::bottom(acting, side, free)?)
    }

    /// `φ(M) / ψ(M)` with the coordinate map from `φ(M)`.
    pub fn subquotient(&self, m: &Module) -> Result<Subquotient> {
        Ok(subquotient(&self.top.evaluate(m)?, &self.bottom.evaluate(m)?))
    }

    pub fn value(&self, m: &Module) -> Result<FinAbGroup> {
        Ok(self.subquotient(m)?.group)
    }

    pub fn is_closed_on(&self, m: &Module) -> Result<bool> {
        Ok(self.top.evaluate(m)? == self.bottom.evaluate(m)?)
    }

    /// Whether the pair is closed on every generator and on the sums of any
    /// two of them.
    pub fn serre_membership(&self, generators: &[Module]) -> Result<bool> {
        for (i, a) in generators.iter().enumerate() {
            if !self.is_closed_on(a)? {
                return Ok(false);
            }
            for b in &generators[i..] {
                if !self.is_closed_on(&a.direct_sum(b)?)? {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// The map `(φ/ψ)(M) -> (φ/ψ)(N)` induced by a module map.
    pub fn map_on(&self, f: &ModuleMap) -> Result<GroupHom> {
        let src = self.subquotient(f.source())?;
        let dst = self.subquotient(f.target())?;
        let sorts = self.free_sorts();
        let images = src
            .lifts()
            .iter()
            .map(|l| {
                let t = SortedTuple::from_flat(f.source(), sorts, l);
                dst.to_coords(&f.apply(&t).flatten()).ok_or_else(|| Error::Inconsistency("module map does not preserve the pair".into()))
            })
            .collect::<Result<Vec<_>>>()?;
        GroupHom::new(src.group.clone(), dst.group.clone(), images)
            .ok_or_else(|| Error::Inconsistency("induced map on pair values is not well defined".into()))
    }
}

impl fmt::Display for PpPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}) / ({})", self.top, self.bottom)
    }
}

/// A validated pp-definable morphism.
#[derive(Clone, Debug)]
pub struct PpMorphism {
    source: PpPair,
    target: PpPair,
    rho: PpFormula,
}

/// Outcome of validating a candidate morphism. Conditions are numbered
/// 1: `ρ ∧ φ ≤ φ'`, 2: `ρ ∧ ψ ≤ ψ'`, 3: totality on `φ`, 4: single-valuedness
/// modulo `ψ'`.
#[derive(Clone, Debug)]
pub enum MorphismCheck {
    Valid(PpMorphism),
    Rejected { condition: u8, counterexample: Box<Counterexample> },
}

impl MorphismCheck {
    pub fn into_valid(self) -> Option<PpMorphism> {
        match self {
            MorphismCheck::Valid(m) => Some(m),
            MorphismCheck::Rejected { .. } => None,
        }
    }
}

fn joined(a: &[ObjId], b: &[ObjId]) -> Vec<ObjId> {
    a.iter().chain(b).copied().collect()
}

/// The formula in context `(x̄, ȳ)` saying `y_j = Σ_i x_i · a[i][j]`, where
/// `a[i][j]` is a morphism `sort(y_j) -> sort(x_i)` of the acting ringoid.
pub fn graph(acting: &Arc<Ringoid>, side: Side, xs: &[ObjId], ys: &[ObjId], a: &[Vec<Morph>]) -> Result<PpFormula> {
    let n = xs.len();
    let sorts = joined(xs, ys);
    let columns = ys
        .iter()
        .enumerate()
        .map(|(j, &t)| {
            let mut col: Vec<Morph> = sorts.iter().map(|&s| acting.zero(t, s)).collect();
            for i in 0..n {
                col[i] = a[i][j].clone();
            }
            col[n + j] = acting.scale(-1, &acting.identity(t));
            col
        })
        .collect();
    PpFormula::new(acting, side, sorts, vec![], ys.to_vec(), columns)
}

/// `ȳ = x̄` for tuples of equal sorts.
pub fn diagonal(acting: &Arc<Ringoid>, side: Side, sorts: &[ObjId]) -> Result<PpFormula> {
    let a: Vec<Vec<Morph>> = sorts
        .iter()
        .enumerate()
        .map(|(i, &s)| sorts.iter().enumerate().map(|(j, &t)| if i == j { acting.identity(s) } else { acting.zero(t, s) }).collect())
        .collect();
    graph(acting, side, sorts, sorts, &a)
}

fn check(cond: u8, i: Implication) -> Option<MorphismCheck> {
    match i {
        Implication::Holds => None,
        Implication::Fails(c) => Some(MorphismCheck::Rejected { condition: cond, counterexample: c }),
    }
}

impl PpMorphism {
    /// Validates `rho` as a morphism `source -> target`.
    pub fn new(rho: PpFormula, source: &PpPair, target: &PpPair) -> Result<MorphismCheck> {
        let xs = source.free_sorts();
        let ys = target.free_sorts();
        let (n, k) = (xs.len(), ys.len());
        let ctx = joined(xs, ys);
        if rho.free_sorts() != ctx.as_slice() {
            return Err(Error::SortMismatch("ρ must have the source then the target variables free".into()));
        }
        if source.side() != target.side() || rho.side() != source.side() {
            return Err(Error::SideMismatch);
        }
        let on_x: Vec<usize> = (0..n).collect();
        let on_y: Vec<usize> = (n..n + k).collect();
        let phi_x = source.top.rename(&ctx, &on_x)?;
        let psi_x = source.bottom.rename(&ctx, &on_x)?;
        let phi_y = target.top.rename(&ctx, &on_y)?;
        let psi_y = target.bottom.rename(&ctx, &on_y)?;
        if let Some(r) = check(1, rho.conj(&phi_x)?.implies(&phi_y)?) {
            return Ok(r);
        }
        if let Some(r) = check(2, rho.conj(&psi_x)?.implies(&psi_y)?) {
            return Ok(r);
        }
        let drop_y: Vec<bool> = (0..n + k).map(|i| i >= n).collect();
        let total = rho.conj(&phi_y)?.exists_project(&drop_y)?;
        if let Some(r) = check(3, source.top.implies(&total)?) {
            return Ok(r);
        }
        // Context (x̄, ȳ₁, ȳ₂).
        let ctx2 = joined(&ctx, ys);
        let r1 = rho.rename(&ctx2, &(0..n + k).collect::<Vec<_>>())?;
        let r2 = rho.rename(&ctx2, &(0..n).chain(n + k..n + 2 * k).collect::<Vec<_>>())?;
        let phi2 = source.top.rename(&ctx2, &on_x)?;
        let diff: Vec<Vec<(usize, i128)>> = (0..k).map(|j| vec![(n + j, 1), (n + k + j, -1)]).collect();
        let psi_diff = target.bottom.substitute(&ctx2, &diff)?;
        if let Some(r) = check(4, r1.conj(&r2)?.conj(&phi2)?.implies(&psi_diff)?) {
            return Ok(r);
        }
        Ok(MorphismCheck::Valid(PpMorphism { source: source.clone(), target: target.clone(), rho }))
    }

    pub fn identity(p: &PpPair) -> Result<PpMorphism> {
        let rho = diagonal(p.acting(), p.side(), p.free_sorts())?;
        PpMorphism::new(rho, p, p)?
            .into_valid()
            .ok_or_else(|| Error::Inconsistency("identity morphism failed validation".into()))
    }

    pub fn source(&self) -> &PpPair {
        &self.source
    }

    pub fn target(&self) -> &PpPair {
        &self.target
    }

    pub fn rho(&self) -> &PpFormula {
        &self.rho
    }

    /// `self ∘ inner`, i.e. `∃ȳ (inner(x̄, ȳ) ∧ self(ȳ, z̄))`.
    pub fn compose(&self, inner: &PpMorphism) -> Result<PpMorphism> {
        if inner.target != self.source {
            return Err(Error::SortMismatch("composable morphisms need a shared middle pair".into()));
        }
        let xs = inner.source.free_sorts();
        let ys = self.source.free_sorts();
        let zs = self.target.free_sorts();
        let (n, k, l) = (xs.len(), ys.len(), zs.len());
        let ctx: Vec<ObjId> = xs.iter().chain(ys).chain(zs).copied().collect();
        let a = inner.rho.rename(&ctx, &(0..n + k).collect::<Vec<_>>())?;
        let b = self.rho.rename(&ctx, &(n..n + k + l).collect::<Vec<_>>())?;
        let drop: Vec<bool> = (0..n + k + l).map(|i| i >= n && i < n + k).collect();
        let rho = a.conj(&b)?.exists_project(&drop)?;
        match PpMorphism::new(rho, &inner.source, &self.target)? {
            MorphismCheck::Valid(m) => Ok(m),
            MorphismCheck::Rejected { condition, .. } => {
                Err(Error::Inconsistency(format!("composite fails morphism condition {condition}")))
            }
        }
    }

    /// The group map `(φ/ψ)(M) -> (φ'/ψ')(M)`.
    pub fn induced(&self, m: &Module) -> Result<GroupHom> {
        let src = self.source.subquotient(m)?;
        let dst = self.target.subquotient(m)?;
        let xs = self.source.free_sorts();
        let ys = self.target.free_sorts();
        let ambient = m.tuple_group(&joined(xs, ys));
        let na = m.tuple_group(xs).rank();
        let graph = self.rho.evaluate(m)?;
        let ys_part = Subgroup::from_generators(
            &ambient,
            (na..ambient.rank()).map(|i| ambient.basis(i)),
        );
        let sys = LinearSystem::new(&ambient, graph.generators(), Some(&ys_part));
        let images = src
            .lifts()
            .iter()
            .map(|a| {
                let mut v = a.clone();
                v.resize(ambient.rank(), 0);
                let c = sys.solve(&v).ok_or_else(|| Error::Inconsistency("ρ is not total on φ(M)".into()))?;
                let mut w = ambient.zero();
                for (&ci, g) in c.iter().zip(graph.generators()) {
                    ambient.axpy(&mut w, ci as i128, g);
                }
                dst.to_coords(&w[na..]).ok_or_else(|| Error::Inconsistency("ρ leaves φ'(M)".into()))
            })
            .collect::<Result<Vec<_>>>()?;
        GroupHom::new(src.group.clone(), dst.group.clone(), images)
            .ok_or_else(|| Error::Inconsistency("ρ is not single valued on pair values".into()))
    }
}

/// Kernel, image and cokernel of a morphism `φ/ψ -> φ'/ψ'`.
#[derive(Clone, Debug)]
pub struct KernelCokernel {
    pub kernel: PpPair,
    pub inclusion: PpMorphism,
    pub image: PpPair,
    pub cokernel: PpPair,
    pub projection: PpMorphism,
}

pub fn kernel_cokernel_image(m: &PpMorphism) -> Result<KernelCokernel> {
    let (src, tgt) = (&m.source, &m.target);
    let xs = src.free_sorts();
    let ys = tgt.free_sorts();
    let (n, k) = (xs.len(), ys.len());
    let ctx = joined(xs, ys);
    let psi_y = tgt.bottom.rename(&ctx, &(n..n + k).collect::<Vec<_>>())?;
    let phi_x = src.top.rename(&ctx, &(0..n).collect::<Vec<_>>())?;
    let drop_y: Vec<bool> = (0..n + k).map(|i| i >= n).collect();
    let drop_x: Vec<bool> = (0..n + k).map(|i| i < n).collect();

    let ker_top = src.top.conj(&m.rho.conj(&psi_y)?.exists_project(&drop_y)?)?;
    let kernel = PpPair::new(ker_top, src.bottom.clone())?;
    let im_top = tgt.bottom.sum(&m.rho.conj(&phi_x)?.exists_project(&drop_x)?)?;
    let image = PpPair::new(im_top.clone(), tgt.bottom.clone())?;
    let cokernel = PpPair::new(tgt.top.clone(), im_top)?;

    let unwrap = |c: MorphismCheck, what: &str| {
        c.into_valid().ok_or_else(|| Error::Inconsistency(format!("{what} failed morphism validation")))
    };
    let inclusion = unwrap(PpMorphism::new(diagonal(src.acting(), src.side(), xs)?, &kernel, src)?, "kernel inclusion")?;
    let projection = unwrap(PpMorphism::new(diagonal(tgt.acting(), tgt.side(), ys)?, tgt, &cokernel)?, "cokernel projection")?;
    Ok(KernelCokernel { kernel, inclusion, image, cokernel, projection })
}

/// Graph formulas `ȳ = x̄ · A` between the given sorts, the first `limit`
/// matrices in enumeration order.
fn graph_candidates(acting: &Arc<Ringoid>, side: Side, xs: &[ObjId], ys: &[ObjId], limit: usize) -> Result<Vec<PpFormula>> {
    let cells: Vec<(ObjId, ObjId)> = xs.iter().flat_map(|&s| ys.iter().map(move |&t| (t, s))).collect();
    let space = FinAbGroup::product_of(cells.iter().map(|&(t, s)| acting.hom(t, s)));
    let mut out = Vec::new();
    for flat in space.elements().take(limit) {
        let mut at = 0;
        let mut a = Vec::with_capacity(xs.len());
        for &s in xs {
            let mut row = Vec::with_capacity(ys.len());
            for &t in ys {
                let r = acting.hom(t, s).rank();
                row.push(Morph { dom: t, cod: s, elem: flat[at..at + r].to_vec() });
                at += r;
            }
            a.push(row);
        }
        out.push(graph(acting, side, xs, ys, &a)?);
    }
    Ok(out)
}

/// Valid graph morphisms from `source` to `target` among the first `limit`
/// candidates, in enumeration order.
pub fn graph_morphisms(source: &PpPair, target: &PpPair, limit: usize) -> Result<Vec<PpMorphism>> {
    let mut out = Vec::new();
    for rho in graph_candidates(source.acting(), source.side(), source.free_sorts(), target.free_sorts(), limit)? {
        if let MorphismCheck::Valid(m) = PpMorphism::new(rho, source, target)? {
            out.push(m);
        }
    }
    Ok(out)
}

/// Graph candidates tried in each direction by `localized_iso`.
pub const GRAPH_LIMIT: usize = 1 << 12;

#[derive(Clone, Debug)]
pub enum LocalizedIso {
    /// A morphism (in either direction) whose kernel and cokernel are closed
    /// on the generators.
    Iso(PpMorphism),
    /// Generator `module` gives values of different orders.
    NotIso { module: usize, orders: (u128, u128) },
    NotFoundWithinBound,
}

/// Searches graph morphisms `p -> q` and `q -> p` for one that becomes an
/// isomorphism after localizing at the pairs closed on `generators`.
pub fn localized_iso(p: &PpPair, q: &PpPair, generators: &[Module]) -> Result<LocalizedIso> {
    for (i, g) in generators.iter().enumerate() {
        let (a, b) = (p.value(g)?.order(), q.value(g)?.order());
        if a != b {
            return Ok(LocalizedIso::NotIso { module: i, orders: (a, b) });
        }
    }
    for (s, t) in [(p, q), (q, p)] {
        for m in graph_morphisms(s, t, GRAPH_LIMIT)? {
            let kc = kernel_cokernel_image(&m)?;
            if kc.kernel.serre_membership(generators)? && kc.cokernel.serre_membership(generators)? {
                return Ok(LocalizedIso::Iso(m));
            }
        }
    }
    Ok(LocalizedIso::NotFoundWithinBound)
}

/// For a left pair in one free variable of sort `P0`, the right module
/// `P ↦ (φ/ψ)((P, -))`.
pub fn eval_pair_to_module(p: &PpPair) -> Result<Module> {
    if p.side() != Side::Left {
        return Err(Error::SideMismatch);
    }
    if p.free_sorts().len() != 1 {
        return Err(Error::ArityError { expected: 1, found: p.free_sorts().len() });
    }
    let acting = p.acting();
    let ring = p.top.ring();
    let n = ring.num_objects();
    let reps: Vec<Module> = (0..n).map(|q| Module::representable(acting, Side::Left, q)).collect();
    let fibers: Vec<FinAbGroup> = reps.iter().map(|m| p.value(m)).collect::<Result<_>>()?;
    let mut actions = Vec::with_capacity(n * n);
    for a in 0..n {
        for b in 0..n {
            // r: a -> b in the ring acts (b, -) -> (a, -) by precomposition.
            let homs = ring
                .basis(a, b)
                .map(|r| {
                    let comps = (0..n)
                        .map(|s| {
                            GroupHom::from_fn(reps[b].fiber(s), reps[a].fiber(s), |t| {
                                ring.compose(&Morph { dom: b, cod: s, elem: t.clone() }, &r).elem
                            })
                        })
                        .collect();
                    let f = ModuleMap::new(&reps[b], &reps[a], comps)?;
                    p.map_on(&f)
                })
                .collect::<Result<Vec<_>>>()?;
            actions.push(homs);
        }
    }
    Module::build(&ring, Side::Right, fibers, actions)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::pp::dsl;

    fn f2e() -> (Arc<Ringoid>, Module, Module) {
        let r = Arc::new(fixtures::ring("f2e").unwrap());
        let reg = Module::representable(&r, Side::Right, 0);
        let s1 = fixtures::quotient_by_named(&r, Side::Right, "e").unwrap();
        (r, reg, s1)
    }

    fn f(r: &Arc<Ringoid>, src: &str) -> PpFormula {
        dsl::parse(src, r, Side::Right).unwrap()
    }

    fn pair(r: &Arc<Ringoid>, top: &str, bottom: &str) -> PpPair {
        PpPair::new(f(r, top), f(r, bottom)).unwrap()
    }

    #[test]
    fn pair_validation() {
        let (r, _, _) = f2e();
        pair(&r, "x*e = 0", "E y . x + y*e = 0");
        let z4 = Arc::new(fixtures::zmod(4));
        let err = PpPair::new(f(&z4, "E y . x + y*2 = 0"), f(&z4, "x*2 = 0")).unwrap_err();
        let Error::NotAPair(c) = err else { panic!("expected NotAPair") };
        assert_eq!(c.module.order(), 2);
    }

    #[test]
    fn values_on_r_plus_s1() {
        let (r, reg, s1) = f2e();
        let m = reg.direct_sum(&s1).unwrap();
        assert_eq!(pair(&r, "true", "x = 0").value(&m).unwrap().order(), 8);
        assert_eq!(pair(&r, "x*e = 0", "E y . x + y*e = 0").value(&m).unwrap().order(), 2);
        let p = pair(&r, "x*e = 0", "x*e = 0");
        assert!(p.is_closed_on(&m).unwrap());
    }

    #[test]
    fn morphism_conditions() {
        let (r, _, _) = f2e();
        let full = pair(&r, "true", "x = 0");
        let eps = pair(&r, "E u . x + u*e = 0", "x = 0");
        let rho = f(&r, "[x, y] y + x*e = 0");
        assert!(matches!(PpMorphism::new(rho, &full, &eps).unwrap(), MorphismCheck::Valid(_)));
        let ann = pair(&r, "x*e = 0", "x = 0");
        let rho = f(&r, "[x, y] y + x = 0");
        match PpMorphism::new(rho, &full, &ann).unwrap() {
            MorphismCheck::Rejected { condition, .. } => assert_eq!(condition, 1),
            MorphismCheck::Valid(_) => panic!("y = -x cannot land in x*e = 0"),
        }
        PpMorphism::identity(&ann).unwrap();
    }

    #[test]
    fn kernel_of_multiplication_by_eps() {
        let (r, reg, s1) = f2e();
        let full = pair(&r, "true", "x = 0");
        let eps = pair(&r, "E u . x + u*e = 0", "x = 0");
        let m = PpMorphism::new(f(&r, "[x, y] y + x*e = 0"), &full, &eps).unwrap().into_valid().unwrap();
        let kc = kernel_cokernel_image(&m).unwrap();
        assert!(kc.kernel.top().equivalent(&f(&r, "x*e = 0")).unwrap());
        for module in [reg.clone(), reg.direct_sum(&s1).unwrap()] {
            assert!(kc.cokernel.is_closed_on(&module).unwrap());
            let h = m.induced(&module).unwrap();
            assert_eq!(h.kernel().order(), kc.kernel.value(&module).unwrap().order());
        }
    }

    #[test]
    fn localisation_example() {
        let (r, reg, _) = f2e();
        let gens = [reg];
        let t1 = pair(&r, "x*e = 0", "x = 0");
        let q2 = pair(&r, "E y . x + y*e = 0", "x = 0");
        let i2 = pair(&r, "true", "E y . x + y*e = 0");
        for (a, b) in [(&t1, &q2), (&q2, &i2), (&t1, &i2)] {
            assert!(matches!(localized_iso(a, b, &gens).unwrap(), LocalizedIso::Iso(_)));
        }
        let full = pair(&r, "true", "x = 0");
        let triv = pair(&r, "true", "true");
        assert!(matches!(
            localized_iso(&full, &triv, &gens).unwrap(),
            LocalizedIso::NotIso { orders: (4, 1), .. }
        ));
    }

    #[test]
    fn composition_of_identities() {
        let (r, reg, _) = f2e();
        let p = pair(&r, "x*e = 0", "x = 0");
        let id = PpMorphism::identity(&p).unwrap();
        let c = id.compose(&id).unwrap();
        assert_eq!(c.induced(&reg).unwrap(), id.induced(&reg).unwrap());
    }

    #[test]
    fn evaluation_to_a_module() {
        let z4 = Arc::new(fixtures::zmod(4));
        let op = crate::module::acting_ringoid(&z4, Side::Left);
        let top = dsl::parse("E y . x + 2*y = 0", &op, Side::Left).unwrap();
        let bottom = PpFormula::bottom(&op, Side::Left, vec![0]).unwrap();
        let m = eval_pair_to_module(&PpPair::new(top, bottom).unwrap()).unwrap();
        assert_eq!(m.order(), 2);
        assert_eq!(m.side(), Side::Right);
        let full = eval_pair_to_module(&PpPair::full(&op, Side::Left, vec![0]).unwrap()).unwrap();
        assert_eq!(full.order(), 4);
    }
}
