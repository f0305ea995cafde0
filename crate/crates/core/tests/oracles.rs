//! Solver results against brute-force enumeration.

mod common;

use std::collections::BTreeSet;

use common::{brute_eval, corpus, formula, ring};
use ppcalc::corpus::modules_up_to;
use ppcalc::pp::Implication;
use ppcalc::{Elem, Module, Side, SortedTuple};
use proptest::prelude::*;

fn small(ms: Vec<ppcalc::Module>) -> Vec<ppcalc::Module> {
    ms.into_iter().filter(|m| m.order() <= 8).collect()
}

fn as_set(phi: &ppcalc::PpFormula, m: &Module) -> BTreeSet<Elem> {
    phi.evaluate(m).unwrap().elements().into_iter().collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn evaluation_matches_enumeration_z4(phi in formula(ring("z4"), 2)) {
        for m in small(corpus(&ring("z4"))) {
            prop_assert_eq!(as_set(&phi, &m), brute_eval(&phi, &m));
        }
    }

    #[test]
    fn evaluation_matches_enumeration_f2e(phi in formula(ring("f2e"), 2)) {
        for m in small(corpus(&ring("f2e"))) {
            prop_assert_eq!(as_set(&phi, &m), brute_eval(&phi, &m));
        }
    }

    #[test]
    fn evaluation_matches_enumeration_a2(phi in formula(ring("a2f2"), 2)) {
        for m in small(corpus(&ring("a2f2"))) {
            prop_assert_eq!(as_set(&phi, &m), brute_eval(&phi, &m));
        }
    }

    /// A positive answer holds on every test module; a negative one comes
    /// with a tuple that enumeration confirms.
    #[test]
    fn implication_is_sound(phi in formula(ring("f2e"), 1), psi in formula(ring("f2e"), 1)) {
        prop_assume!(phi.free_sorts() == psi.free_sorts());
        match phi.implies(&psi).unwrap() {
            Implication::Holds => {
                for m in small(corpus(&ring("f2e"))) {
                    prop_assert!(brute_eval(&phi, &m).is_subset(&brute_eval(&psi, &m)));
                }
            }
            Implication::Fails(c) => {
                let t = c.tuple.flatten();
                prop_assert!(brute_eval(&phi, &c.module).contains(&t));
                prop_assert!(!brute_eval(&psi, &c.module).contains(&t));
            }
        }
    }
}

/// The principal type holds of its tuple and implies every formula of the
/// one-variable family that the tuple satisfies.
#[test]
fn principal_type_generates() {
    use ppcalc::pp::family::{formula_family, FamilyConfig};
    for name in ["z4", "f2e"] {
        let r = ring(name);
        let cfg = FamilyConfig { free: 1..=1, ..FamilyConfig::default() };
        let fam = formula_family(&r, Side::Right, &cfg, corpus(&r)).unwrap();
        for m in modules_up_to(&r, Side::Right, 8).unwrap() {
            for a in m.fiber(0).elements() {
                let t = SortedTuple::new(vec![0], vec![a.clone()]);
                let pt = ppcalc::PpFormula::principal_type(&t, &m).unwrap();
                assert!(brute_eval(&pt, &m).contains(&a));
                for phi in &fam {
                    if brute_eval(phi, &m).contains(&a) {
                        assert!(pt.implies(phi).unwrap().holds(), "{name}: {pt} should imply {phi} in {m}");
                    }
                }
            }
        }
    }
}

/// Module counts against the classification of finite modules over these
/// rings: abelian groups of exponent dividing 4, and sums of S and R over
/// the dual numbers.
#[test]
fn module_enumeration_counts() {
    let counts: Vec<usize> = [2u128, 4, 8, 16].iter().map(|&k| modules_up_to(&ring("z4"), Side::Right, k).unwrap().len()).collect();
    assert_eq!(counts, [2, 4, 6, 9]);
    // Z/6: Z2^a x Z3^b with 2^a 3^b <= 16.
    assert_eq!(modules_up_to(&ring("z6"), Side::Right, 16).unwrap().len(), 9);
}

/// Hom counts against enumeration of all fiber maps that commute with the
/// actions.
#[test]
fn hom_counts_by_enumeration() {
    let r = ring("z4");
    let ms = modules_up_to(&r, Side::Right, 8).unwrap();
    for a in &ms {
        for b in &ms {
            let ga = a.fiber(0);
            let gb = b.fiber(0);
            let gens: Vec<Elem> = (0..ga.rank()).map(|i| ga.basis(i)).collect();
            let images: Vec<Elem> = gb.elements().collect();
            // Z-linear maps out of Z/4-modules are automatically Z/4-linear.
            let mut count = 0u128;
            let mut idx = vec![0usize; gens.len()];
            loop {
                let imgs: Vec<Elem> = idx.iter().map(|&i| images[i].clone()).collect();
                if ppcalc::GroupHom::new(ga.clone(), gb.clone(), imgs).is_some() {
                    count += 1;
                }
                let mut k = 0;
                while k < idx.len() {
                    idx[k] += 1;
                    if idx[k] < images.len() {
                        break;
                    }
                    idx[k] = 0;
                    k += 1;
                }
                if k == idx.len() {
                    break;
                }
            }
            assert_eq!(a.hom_count(b).unwrap(), count, "{a} -> {b}");
        }
    }
}

/// Over Z/4 the one-variable quantifier-free classes, found by evaluating
/// every conjunction of annihilators on every module of order at most 16,
/// are exactly the candidates the elimination search lists, and
/// divisibility by 2 is none of them.
#[test]
fn quantifier_free_classes_by_enumeration() {
    use ppcalc::elim::{qe_search, QeOutcome};
    let r = ring("z4");
    let ms = modules_up_to(&r, Side::Right, 16).unwrap();
    let profile = |phi: &ppcalc::PpFormula| -> Vec<BTreeSet<Elem>> { ms.iter().map(|m| as_set(phi, m)).collect() };
    let scalars: Vec<ppcalc::Morph> = r.morphisms(0, 0).collect();
    let mut classes = BTreeSet::new();
    for mask in 0u32..(1 << scalars.len()) {
        let cols: Vec<Vec<ppcalc::Morph>> =
            scalars.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, s)| vec![s.clone()]).collect();
        let phi = ppcalc::PpFormula::new(&r, Side::Right, vec![0], vec![], vec![0; cols.len()], cols).unwrap();
        classes.insert(profile(&phi));
    }
    let div = ppcalc::pp::dsl::parse("E y . x = y*2", &r, Side::Right).unwrap();
    let QeOutcome::ProvablyNone { candidates } = qe_search(&div, 3).unwrap() else { panic!("expected ProvablyNone") };
    let listed: BTreeSet<_> = candidates.iter().map(&profile).collect();
    assert_eq!(listed, classes);
    assert!(!classes.contains(&profile(&div)));
}

/// Embeddings found over Z/6 have trivial kernel on every test module.
#[test]
fn monic_embeddings_are_injective() {
    use ppcalc::elim::{default_homes, embed_search, EmbedBound, EmbedOutcome};
    use ppcalc::pairs::{kernel_cokernel_image, PpPair};
    use ppcalc::pp::family::{formula_family, pair_family, FamilyConfig};
    let r = ring("z6");
    let tests = corpus(&r);
    let cfg = FamilyConfig { free: 1..=1, ..FamilyConfig::default() };
    let fam = formula_family(&r, Side::Right, &cfg, tests.clone()).unwrap();
    let bound = EmbedBound { vars: 1, cols: 2, candidates: 1024 };
    for (t, b) in pair_family(&fam, 20).unwrap() {
        let p = PpPair::new(t, b).unwrap();
        let EmbedOutcome::Monic { morphism, .. } = embed_search(&p, &default_homes(&r), &bound, &tests).unwrap() else {
            panic!("{p} should embed over a regular ring")
        };
        let k = kernel_cokernel_image(&morphism).unwrap().kernel;
        for m in &tests {
            assert_eq!(k.value(m).unwrap().order(), 1);
            assert!(morphism.induced(m).unwrap().kernel().is_zero());
        }
    }
}
