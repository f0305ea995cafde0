//! Structural invariants of the calculus on random formulas.

mod common;

use common::{corpus, formula, formula_pair, ring};
use ppcalc::corpus::modules_up_to;
use ppcalc::pairs::PpPair;
use ppcalc::pp::dsl;
use ppcalc::{dual, Side};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn duality_is_an_involution(phi in formula(ring("a2f2"), 2)) {
        let dd = dual(&dual(&phi));
        prop_assert_eq!(dd.side(), Side::Right);
        prop_assert!(dd.equivalent(&phi).unwrap());
    }

    #[test]
    fn duality_reverses_implication((phi, psi) in formula_pair(ring("z4"), 2)) {
        prop_assert_eq!(phi.implies(&psi).unwrap().holds(), dual(&psi).implies(&dual(&phi)).unwrap().holds());
    }

    #[test]
    fn duality_reverses_implication_a2((phi, psi) in formula_pair(ring("a2f2"), 2)) {
        prop_assert_eq!(phi.implies(&psi).unwrap().holds(), dual(&psi).implies(&dual(&phi)).unwrap().holds());
    }

    /// D swaps conjunction and sum.
    #[test]
    fn duality_exchanges_meet_and_join((phi, psi) in formula_pair(ring("f2e"), 1)) {
        let lhs = dual(&phi.conj(&psi).unwrap());
        let rhs = dual(&phi).sum(&dual(&psi)).unwrap();
        prop_assert!(lhs.equivalent(&rhs).unwrap());
    }

    #[test]
    fn conjunction_and_sum_evaluate_to_meet_and_join((phi, psi) in formula_pair(ring("f2e"), 2)) {
        let (c, s) = (phi.conj(&psi).unwrap(), phi.sum(&psi).unwrap());
        for m in corpus(&ring("f2e")) {
            let (a, b) = (phi.evaluate(&m).unwrap(), psi.evaluate(&m).unwrap());
            prop_assert_eq!(c.evaluate(&m).unwrap(), a.meet(&b));
            prop_assert_eq!(s.evaluate(&m).unwrap(), a.join(&b));
        }
    }

    /// Module maps send solutions to solutions.
    #[test]
    fn evaluation_is_functorial(phi in formula(ring("z4"), 1)) {
        let ms = modules_up_to(&ring("z4"), Side::Right, 8).unwrap();
        for a in &ms {
            let va = phi.evaluate(a).unwrap();
            for b in &ms {
                let vb = phi.evaluate(b).unwrap();
                for f in a.hom_set(b).unwrap() {
                    prop_assert!(va.image(f.component(0)).is_subset(&vb));
                }
            }
        }
    }

    #[test]
    fn printing_round_trips(phi in formula(ring("a2f2"), 2)) {
        let back = dsl::parse(&dsl::print(&phi), phi.acting(), Side::Right).unwrap();
        prop_assert!(back.equivalent(&phi).unwrap());
    }

    #[test]
    fn invariants_are_multiplicative((phi, psi) in formula_pair(ring("z4"), 1)) {
        let p = PpPair::new(phi.clone(), phi.conj(&psi).unwrap()).unwrap();
        let ms = modules_up_to(&ring("z4"), Side::Right, 8).unwrap();
        for a in &ms {
            for b in &ms {
                let sum = a.direct_sum(b).unwrap();
                prop_assert_eq!(p.value(&sum).unwrap().order(), p.value(a).unwrap().order() * p.value(b).unwrap().order());
            }
        }
    }

    #[test]
    fn implication_agrees_with_the_corpus((phi, psi) in formula_pair(ring("f2e"), 1)) {
        let holds = phi.implies(&psi).unwrap().holds();
        let everywhere = corpus(&ring("f2e")).iter().all(|m| phi.evaluate(m).unwrap().is_subset(&psi.evaluate(m).unwrap()));
        // Every module over the dual numbers is a sum of copies of R and
        // R/eR, so these test modules decide implication.
        prop_assert_eq!(holds, everywhere);
    }
}
