//! Elementary duality between right and left pp formulas, and the tensor
//! criterion it satisfies.
//!
//! For `φ = ∃ȳ (x̄ ȳ)(A; B) = 0` the dual is `∃z̄ (I A; 0 B)(x̄ z̄) = 0` on
//! the other side: one bound variable per relation column of `φ`, one
//! relation column per variable of `φ`.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::group::Elem;
use crate::module::{Module, SortedTuple};
use crate::pairs::PpPair;
use crate::pp::PpFormula;
use crate::ringoid::{Morph, Ringoid};
use crate::tensor::Tensor;

/// Swaps domain and codomain, reading `m` in the opposite ringoid.
fn op(m: &Morph) -> Morph {
    Morph { dom: m.cod, cod: m.dom, elem: m.elem.clone() }
}

pub fn dual(phi: &PpFormula) -> PpFormula {
    let acting: Arc<Ringoid> = Arc::new(phi.acting().opposite());
    let free = phi.free_sorts();
    let n = free.len();
    let rels = phi.relation_sorts();
    let vars = phi.var_sorts();
    let columns = vars
        .iter()
        .enumerate()
        .map(|(v, &s)| {
            let mut col: Vec<Morph> = free.iter().map(|&t| acting.zero(s, t)).collect();
            if v < n {
                col[v] = acting.identity(s);
            }
            col.extend(phi.columns().iter().map(|c| op(&c[v])));
            col
        })
        .collect();
    PpFormula::new(&acting, phi.side().flip(), free.to_vec(), rels.to_vec(), vars, columns).expect("dual is well sorted")
}

/// `φ/ψ ↦ Dψ/Dφ`.
pub fn dual_pair(p: &PpPair) -> Result<PpPair> {
    PpPair::new(dual(p.bottom()), dual(p.top()))
}

#[derive(Clone, Debug)]
pub enum Herzog {
    /// `r̄ ⊗ s̄ = 0`, with `r̄ ∈ φ(M)` and `s̄ ∈ Dφ(N)`.
    Witness(PpFormula),
    /// `r̄ ⊗ s̄ ≠ 0`; the class in the tensor group's coordinates.
    NonzeroTensor { class: Elem, order: u64 },
}

/// Decides whether `r̄ ⊗ s̄` vanishes in `M ⊗ N` and, if it does, produces
/// the principal type of `r̄` as the separating formula. Formulas in
/// `family` are used as a cross-check when the class does not vanish.
pub fn herzog_check(r: &SortedTuple, m: &Module, s: &SortedTuple, n: &Module, family: &[PpFormula]) -> Result<Herzog> {
    if r.sorts != s.sorts {
        return Err(Error::SortMismatch("tuples must have matching sorts".into()));
    }
    herzog_in(&Tensor::new(m, n)?, r, m, s, n, family)
}

/// `herzog_check` with a precomputed `M ⊗ N`.
pub fn herzog_in(t: &Tensor, r: &SortedTuple, m: &Module, s: &SortedTuple, n: &Module, family: &[PpFormula]) -> Result<Herzog> {
    let class = t.class_of(r, s)?;
    if class.iter().all(|&c| c == 0) {
        let phi = PpFormula::principal_type(r, m)?;
        if !phi.satisfied_by(m, r)? || !dual(&phi).satisfied_by(n, s)? {
            return Err(Error::Inconsistency("principal type does not separate a vanishing tensor".into()));
        }
        return Ok(Herzog::Witness(phi));
    }
    for phi in family.iter().filter(|f| f.free_sorts() == r.sorts.as_slice()) {
        if phi.satisfied_by(m, r)? && dual(phi).satisfied_by(n, s)? {
            return Err(Error::Inconsistency(format!("{phi} witnesses a nonzero tensor")));
        }
    }
    let order = t.group().element_order(&class);
    Ok(Herzog::NonzeroTensor { class, order })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::module::{acting_ringoid, Side};
    use crate::pp::dsl;

    fn z4() -> (Arc<Ringoid>, Arc<Ringoid>) {
        let r = Arc::new(fixtures::zmod(4));
        let op = acting_ringoid(&r, Side::Left);
        (r, op)
    }

    #[test]
    fn dual_of_top_is_bottom() {
        let (r, op) = z4();
        let d = dual(&PpFormula::top(&r, Side::Right, vec![0]).unwrap());
        assert_eq!(d.side(), Side::Left);
        assert!(d.equivalent(&PpFormula::bottom(&op, Side::Left, vec![0]).unwrap()).unwrap());
    }

    #[test]
    fn dual_of_divisibility_is_annihilator() {
        let (r, op) = z4();
        let phi = dsl::parse("E y . x = y*2", &r, Side::Right).unwrap();
        let d = dual(&phi);
        assert!(d.equivalent(&dsl::parse("2*x = 0", &op, Side::Left).unwrap()).unwrap());
        assert!(dual(&d).equivalent(&phi).unwrap());
        assert_eq!(dual(&d).acting().as_ref(), r.as_ref());
    }

    #[test]
    fn dual_pairs() {
        let (r, op) = z4();
        let p = PpPair::full(&r, Side::Right, vec![0]).unwrap();
        let d = dual_pair(&p).unwrap();
        assert!(d.top().equivalent(&PpFormula::top(&op, Side::Left, vec![0]).unwrap()).unwrap());
        let q = PpPair::new(
            dsl::parse("x*2 = 0", &r, Side::Right).unwrap(),
            dsl::parse("E y . x = y*2", &r, Side::Right).unwrap(),
        )
        .unwrap();
        let dq = dual_pair(&q).unwrap();
        assert!(dq.top().equivalent(&dsl::parse("2*x = 0", &op, Side::Left).unwrap()).unwrap());
        assert!(dq.bottom().equivalent(&dsl::parse("E y . x = 2*y", &op, Side::Left).unwrap()).unwrap());
    }

    #[test]
    fn herzog_examples() {
        let (r, op) = z4();
        let m = fixtures::cyclic_quotient(&r, Side::Right, &r.scale(2, &r.identity(0))).unwrap();
        let n = Module::representable(&op, Side::Left, 0);
        let t = |v: u64| SortedTuple::new(vec![0], vec![vec![v]]);
        match herzog_check(&t(1), &m, &t(2), &n, &[]).unwrap() {
            Herzog::Witness(phi) => {
                assert!(phi.equivalent(&dsl::parse("x*2 = 0", &r, Side::Right).unwrap()).unwrap());
            }
            other => panic!("expected a witness, got {other:?}"),
        }
        let fam = vec![dsl::parse("x*2 = 0", &r, Side::Right).unwrap(), dsl::parse("x = 0", &r, Side::Right).unwrap()];
        match herzog_check(&t(1), &m, &t(1), &n, &fam).unwrap() {
            Herzog::NonzeroTensor { order, .. } => assert_eq!(order, 2),
            other => panic!("expected a nonzero class, got {other:?}"),
        }
        match herzog_check(&t(0), &m, &t(1), &n, &[]).unwrap() {
            Herzog::Witness(phi) => assert!(phi.equivalent(&PpFormula::bottom(&r, Side::Right, vec![0]).unwrap()).unwrap()),
            other => panic!("expected a witness, got {other:?}"),
        }
    }

    #[test]
    fn dual_on_a2_is_involutive() {
        let a2 = Arc::new(fixtures::a2(2));
        let phi = dsl::parse("E y . x = y*r", &a2, Side::Right).unwrap();
        let d = dual(&phi);
        assert_eq!(d.free_sorts(), phi.free_sorts());
        assert!(dual(&d).equivalent(&phi).unwrap());
    }
}
