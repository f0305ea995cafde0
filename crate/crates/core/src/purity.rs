//! Purity, pure epimorphisms, flatness and absolute purity for finite
//! modules.
//!
//! Finite modules are pure-injective, so a pure embedding of finite modules
//! splits; the split test is cross-checked against the principal pp-type of a
//! generating tuple. Absolute purity of a finite module is injectivity, which
//! is decided with Baer's criterion.

use std::sync::Arc;

use crate::duality::dual;
use crate::error::{Error, Result};
use crate::group::{GroupHom, LinearSystem, Subgroup};
use crate::module::{acting_ringoid, submodules, Module, ModuleMap, Side, SortedTuple};
use crate::pp::PpFormula;
use crate::ringoid::{Morph, Ringoid};
use crate::tensor::Tensor;

#[derive(Clone, Debug)]
pub struct PurityDecision {
    pub pure: bool,
    /// A map `g: N -> M` with `g ∘ j = 1_M`, when one exists.
    pub retraction: Option<ModuleMap>,
    /// A formula with `φ(M) ≠ Mⁿ ∩ φ(N)` when the embedding is not pure.
    pub witness: Option<PpFormula>,
}

/// Point of the generator-image group of `Hom(M, N)` representing `f`.
fn map_point(f: &ModuleMap) -> Vec<u64> {
    let m = f.source();
    let mut v = Vec::new();
    for p in 0..m.fibers().len() {
        for a in 0..m.fiber(p).rank() {
            v.extend(f.component(p).apply(&m.fiber(p).basis(a)));
        }
    }
    v
}

fn combine(maps: &[ModuleMap], coeffs: &[u64], source: &Module, target: &Module) -> ModuleMap {
    let mut acc = ModuleMap::zero(source, target).components().to_vec();
    for (f, &c) in maps.iter().zip(coeffs) {
        if c != 0 {
            for (a, g) in acc.iter_mut().zip(f.components()) {
                *a = a.add(&g.scale(c as i128));
            }
        }
    }
    ModuleMap::new(source, target, acc).expect("combination of module maps")
}

/// A left inverse of `j`, if any.
pub fn retraction(j: &ModuleMap) -> Result<Option<ModuleMap>> {
    let (m, n) = (j.source(), j.target());
    let gens = n.hom_generators(m)?;
    let (ends, _) = m.hom_group(m)?;
    let points: Vec<Vec<u64>> = gens.iter().map(|g| map_point(&g.compose(j))).collect();
    let sys = LinearSystem::new(ends.ambient(), &points, None);
    Ok(sys.solve(&map_point(&ModuleMap::identity(m))).map(|c| combine(&gens, &c, n, m)))
}

/// Whether a generating tuple `ā` of the source lies in `φ(M)` for the
/// principal type `φ` of `jā` in the target.
pub fn type_test(j: &ModuleMap) -> Result<(bool, PpFormula)> {
    let m = j.source();
    let a = m.generating_tuple();
    let phi = PpFormula::principal_type(&j.apply(&a), j.target())?;
    Ok((phi.satisfied_by(m, &a)?, phi))
}

pub fn is_pure_submodule(j: &ModuleMap) -> Result<PurityDecision> {
    if !j.is_mono() {
        return Err(Error::NotMono);
    }
    let m = j.source();
    let split = retraction(j)?;
    if m.is_zero() {
        return Ok(PurityDecision { pure: true, retraction: split, witness: None });
    }
    let (typed, phi) = type_test(j)?;
    if typed != split.is_some() {
        return Err(Error::Inconsistency(format!(
            "split test says {}, type test says {}",
            split.is_some(),
            typed
        )));
    }
    Ok(PurityDecision { pure: typed, retraction: split, witness: (!typed).then_some(phi) })
}

#[derive(Clone, Debug)]
pub struct PureEpiDecision {
    pub pure: bool,
    /// The principal type of the generating tuple of the codomain.
    pub formula: Option<PpFormula>,
    pub tuple: SortedTuple,
    /// A tuple of `φ(B)` mapping onto the generating tuple, when one exists.
    pub lift: Option<SortedTuple>,
}

pub fn is_pure_epi(p: &ModuleMap) -> Result<PureEpiDecision> {
    if !p.is_epi() {
        return Err(Error::NotEpi);
    }
    let (b, c) = (p.source(), p.target());
    let tuple = c.generating_tuple();
    if c.is_zero() {
        return Ok(PureEpiDecision { pure: true, formula: None, tuple: tuple.clone(), lift: Some(tuple) });
    }
    let phi = PpFormula::principal_type(&tuple, c)?;
    let sorts = tuple.sorts.clone();
    let sol = phi.evaluate(b)?;
    let bn = b.tuple_group(&sorts);
    let cn = c.tuple_group(&sorts);
    let pn = GroupHom::from_fn(&bn, &cn, |v| p.apply(&SortedTuple::from_flat(b, &sorts, v)).flatten());
    let images: Vec<Vec<u64>> = sol.generators().iter().map(|g| pn.apply(g)).collect();
    let lift = LinearSystem::new(&cn, &images, None).solve(&tuple.flatten()).map(|coeffs| {
        let mut v = bn.zero();
        for (&k, g) in coeffs.iter().zip(sol.generators()) {
            bn.axpy(&mut v, k as i128, g);
        }
        SortedTuple::from_flat(b, &sorts, &v)
    });
    Ok(PureEpiDecision { pure: lift.is_some(), formula: Some(phi), tuple, lift })
}

fn one_object_right(m: &Module) -> Result<Arc<Ringoid>> {
    if m.side() != Side::Right {
        return Err(Error::SideMismatch);
    }
    if !m.acting().is_one_object() {
        return Err(Error::NotOneObject);
    }
    Ok(m.ring())
}

#[derive(Clone, Debug)]
pub struct FlatDecision {
    pub flat: bool,
    /// A left ideal `I` with `M ⊗ I -> M ⊗ R` not injective.
    pub failing_ideal: Option<Subgroup>,
}

/// Flatness of a right module by the ideal test: `M ⊗ I -> M ⊗ R` must be
/// injective for every left ideal `I`.
pub fn is_flat(m: &Module) -> Result<FlatDecision> {
    let ring = one_object_right(m)?;
    let op = acting_ringoid(&ring, Side::Left);
    let reg = Module::representable(&op, Side::Left, 0);
    let whole = Tensor::new(m, &reg)?;
    let id = ModuleMap::identity(m);
    for ideal in submodules(&reg) {
        let inc = ModuleMap::inclusion_of(&reg, &ideal);
        let part = Tensor::new(m, inc.source())?;
        if !part.induced(&whole, &id, &inc).kernel().is_zero() {
            return Ok(FlatDecision { flat: false, failing_ideal: Some(ideal[0].clone()) });
        }
    }
    Ok(FlatDecision { flat: true, failing_ideal: None })
}

/// Outcome of comparing `φ(M)` with a subgroup the characterization predicts.
#[derive(Clone, Debug)]
pub struct FormulaCheck {
    pub holds: bool,
    pub value: Subgroup,
    pub predicted: Subgroup,
}

fn one_variable(phi: &PpFormula, m: &Module) -> Result<()> {
    if phi.free_sorts().len() != 1 {
        return Err(Error::ArityError { expected: 1, found: phi.free_sorts().len() });
    }
    if phi.side() != m.side() {
        return Err(Error::SideMismatch);
    }
    Ok(())
}

/// `φ(M) = M · φ(R)`.
pub fn flat_formula_check(m: &Module, phi: &PpFormula) -> Result<FormulaCheck> {
    one_object_right(m)?;
    one_variable(phi, m)?;
    let value = phi.evaluate(m)?;
    let ideal = phi.pp_ideal()?;
    let g = m.fiber(0);
    let gens = (0..g.rank()).flat_map(|a| {
        let e = g.basis(a);
        ideal.part(0).generators().iter().map(move |r| m.act(&e, &Morph { dom: 0, cod: 0, elem: r.clone() })).collect::<Vec<_>>()
    });
    let predicted = Subgroup::from_generators(g, gens);
    Ok(FormulaCheck { holds: value == predicted, value, predicted })
}

#[derive(Clone, Debug)]
pub struct AbsPureDecision {
    pub absolutely_pure: bool,
    /// A right ideal and a map from it into `M` with no extension to `R`.
    pub failing: Option<(Subgroup, ModuleMap)>,
}

/// Baer's criterion over the right ideals of the ring.
pub fn is_absolutely_pure(m: &Module) -> Result<AbsPureDecision> {
    let ring = one_object_right(m)?;
    let acting = acting_ringoid(&ring, Side::Right);
    let reg = Module::representable(&acting, Side::Right, 0);
    let g = m.fiber(0);
    for ideal in submodules(&reg) {
        let inc = ModuleMap::inclusion_of(&reg, &ideal);
        let i = inc.source();
        let (homs, offsets) = i.hom_group(m)?;
        // Restrictions of r ↦ e·r for the coordinate generators e of M.
        let restrictions = (0..g.rank()).map(|a| {
            let e = g.basis(a);
            let mut v = Vec::new();
            for b in 0..i.fiber(0).rank() {
                let l = inc.component(0).apply(&i.fiber(0).basis(b));
                v.extend(m.act(&e, &Morph { dom: 0, cod: 0, elem: l }));
            }
            v
        });
        let extendable = Subgroup::from_generators(homs.ambient(), restrictions);
        if extendable.order() != homs.order() {
            let mut points = homs.elements();
            points.sort();
            let bad = points.into_iter().find(|x| !extendable.contains(x)).expect("a non-extendable map");
            let f = i.map_from_images(m, &offsets, &bad);
            return Ok(AbsPureDecision { absolutely_pure: false, failing: Some((ideal[0].clone(), f)) });
        }
    }
    Ok(AbsPureDecision { absolutely_pure: true, failing: None })
}

/// `φ(M) = ann_M Dφ(R)`, with `Dφ` evaluated on the left regular module.
pub fn abspure_formula_check(m: &Module, phi: &PpFormula) -> Result<FormulaCheck> {
    one_object_right(m)?;
    one_variable(phi, m)?;
    let value = phi.evaluate(m)?;
    let d = dual(phi);
    let t = d.evaluate(&Module::representable(d.acting(), Side::Left, 0))?;
    let g = m.fiber(0);
    let mut predicted = Subgroup::whole(g);
    for r in t.generators() {
        let k = m.action(&Morph { dom: 0, cod: 0, elem: r.clone() }).kernel();
        predicted = predicted.meet(&k);
    }
    Ok(FormulaCheck { holds: value == predicted, value, predicted })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::pp::dsl;

    struct Z4 {
        r: Arc<Ringoid>,
        reg: Module,
        z2: Module,
    }

    fn z4() -> Z4 {
        let r = Arc::new(fixtures::zmod(4));
        let reg = Module::representable(&r, Side::Right, 0);
        let z2 = fixtures::cyclic_quotient(&r, Side::Right, &r.scale(2, &r.identity(0))).unwrap();
        Z4 { r, reg, z2 }
    }

    #[test]
    fn two_z4_is_not_pure() {
        let Z4 { r, reg, .. } = z4();
        let sub = reg.closure(vec![Subgroup::from_generators(reg.fiber(0), [vec![2]])]);
        let j = ModuleMap::inclusion_of(&reg, &sub);
        let d = is_pure_submodule(&j).unwrap();
        assert!(!d.pure);
        let w = d.witness.unwrap();
        assert!(w.equivalent(&dsl::parse("E y . x = y*2", &r, Side::Right).unwrap()).unwrap());
        assert!(is_pure_submodule(&ModuleMap::identity(&reg)).unwrap().pure);
    }

    #[test]
    fn summand_is_pure() {
        let Z4 { reg, z2, .. } = z4();
        let sum = z2.direct_sum(&reg).unwrap();
        let j = ModuleMap::new(&z2, &sum, vec![GroupHom::new(z2.fiber(0).clone(), sum.fiber(0).clone(), vec![vec![1, 0]]).unwrap()])
            .unwrap();
        let d = is_pure_submodule(&j).unwrap();
        assert!(d.pure && d.retraction.is_some());
        assert!(matches!(is_pure_submodule(&ModuleMap::zero(&reg, &reg)), Err(Error::NotMono)));
    }

    #[test]
    fn pure_epis() {
        let Z4 { reg, z2, .. } = z4();
        let sub = reg.closure(vec![Subgroup::from_generators(reg.fiber(0), [vec![2]])]);
        let q = ModuleMap::quotient_of(&reg, &sub);
        assert!(!is_pure_epi(&q).unwrap().pure);
        assert!(is_pure_epi(&ModuleMap::identity(&z2)).unwrap().pure);
        let sum = reg.direct_sum(&z2).unwrap();
        let proj = ModuleMap::new(&sum, &z2, vec![GroupHom::new(sum.fiber(0).clone(), z2.fiber(0).clone(), vec![vec![0], vec![1]]).unwrap()])
            .unwrap();
        assert!(is_pure_epi(&proj).unwrap().pure);
    }

    #[test]
    fn flatness() {
        let Z4 { r, reg, z2 } = z4();
        assert!(is_flat(&reg).unwrap().flat);
        let d = is_flat(&z2).unwrap();
        assert!(!d.flat);
        assert_eq!(d.failing_ideal.unwrap().order(), 2);
        let z6 = Arc::new(fixtures::zmod(6));
        let z2_6 = fixtures::cyclic_quotient(&z6, Side::Right, &z6.scale(2, &z6.identity(0))).unwrap();
        assert!(is_flat(&z2_6).unwrap().flat);
        let ann = dsl::parse("x*2 = 0", &r, Side::Right).unwrap();
        assert!(!flat_formula_check(&z2, &ann).unwrap().holds);
        assert!(flat_formula_check(&reg, &ann).unwrap().holds);
        let top = PpFormula::top(&r, Side::Right, vec![0]).unwrap();
        assert!(flat_formula_check(&z2, &top).unwrap().holds);
    }

    #[test]
    fn absolute_purity() {
        let Z4 { r, reg, z2 } = z4();
        assert!(is_absolutely_pure(&reg).unwrap().absolutely_pure);
        let d = is_absolutely_pure(&z2).unwrap();
        assert!(!d.absolutely_pure);
        let (ideal, f) = d.failing.unwrap();
        assert_eq!(ideal.order(), 2);
        assert_eq!(f.component(0).images(), &[vec![1]]);
        assert!(is_absolutely_pure(&Module::zero(&r, Side::Right)).unwrap().absolutely_pure);
        let div = dsl::parse("E y . x = y*2", &r, Side::Right).unwrap();
        assert!(!abspure_formula_check(&z2, &div).unwrap().holds);
        assert!(abspure_formula_check(&reg, &div).unwrap().holds);
    }
}
