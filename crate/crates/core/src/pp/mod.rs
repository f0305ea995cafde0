//! Positive primitive formulas: syntax, evaluation, and implication.
//!
//! A formula is `∃ȳ (x̄ ȳ) H = 0`. Variables are the free ones followed by the
//! bound ones; column `j` of `H` has a sort `R_j` and its entry in the row of
//! variable `i` is a morphism `R_j -> sort(i)` of the acting ringoid, so the
//! column reads `Σ_i v_i · H_ij = 0` in `M(R_j)`.

use std::fmt;
use std::sync::Arc;

use crate::error::{Counterexample, Error, Result};
use crate::group::{Elem, GroupHom, Subgroup};
use crate::module::{acting_ringoid, same_ring, Module, Side, SortedTuple};
use crate::ringoid::{LeftIdeal, Morph, ObjId, Ringoid};

pub mod dsl;
pub mod family;

#[derive(Clone, Debug)]
pub struct PpFormula {
    acting: Arc<Ringoid>,
    side: Side,
    free: Vec<ObjId>,
    bound: Vec<ObjId>,
    rels: Vec<ObjId>,
    columns: Vec<Vec<Morph>>,
}

impl PartialEq for PpFormula {
    fn eq(&self, other: &Self) -> bool {
        self.side == other.side
            && self.free == other.free
            && self.bound == other.bound
            && self.rels == other.rels
            && self.columns == other.columns
            && same_ring(&self.acting, &other.acting)
    }
}

impl Eq for PpFormula {}

/// Outcome of an implication test.
#[derive(Clone, Debug)]
pub enum Implication {
    Holds,
    /// The free realization of the premise with its tuple outside the conclusion.
    Fails(Box<Counterexample>),
}

impl Implication {
    pub fn holds(&self) -> bool {
        matches!(self, Implication::Holds)
    }
}

impl PpFormula {
    pub fn new(
        acting: &Arc<Ringoid>,
        side: Side,
        free: Vec<ObjId>,
        bound: Vec<ObjId>,
        rels: Vec<ObjId>,
        columns: Vec<Vec<Morph>>,
    ) -> Result<PpFormula> {
        if free.is_empty() {
            return Err(Error::ArityError { expected: 1, found: 0 });
        }
        let n = acting.num_objects();
        if free.iter().chain(&bound).chain(&rels).any(|&s| s >= n) {
            return Err(Error::SortMismatch("sort out of range".into()));
        }
        if rels.len() != columns.len() {
            return Err(Error::SortMismatch("one sort per relation column is required".into()));
        }
        let vars: Vec<ObjId> = free.iter().chain(&bound).copied().collect();
        for (j, col) in columns.iter().enumerate() {
            if col.len() != vars.len() {
                return Err(Error::SortMismatch(format!("column {j} has {} entries for {} variables", col.len(), vars.len())));
            }
            for (i, m) in col.iter().enumerate() {
                if m.dom != rels[j] || m.cod != vars[i] || !acting.hom(m.dom, m.cod).is_element(&m.elem) {
                    return Err(Error::SortMismatch(format!("entry ({i}, {j}) is not a morphism of the required sorts")));
                }
            }
        }
        Ok(PpFormula { acting: acting.clone(), side, free, bound, rels, columns })
    }

    /// `x̄ = x̄`.
    pub fn top(acting: &Arc<Ringoid>, side: Side, free: Vec<ObjId>) -> Result<PpFormula> {
        PpFormula::new(acting, side, free, vec![], vec![], vec![])
    }

    /// `x̄ = 0`.
    pub fn bottom(acting: &Arc<Ringoid>, side: Side, free: Vec<ObjId>) -> Result<PpFormula> {
        let columns = (0..free.len())
            .map(|j| {
                free.iter()
                    .enumerate()
                    .map(|(i, &s)| if i == j { acting.identity(s) } else { acting.zero(free[j], s) })
                    .collect()
            })
            .collect();
        PpFormula::new(acting, side, free.clone(), vec![], free, columns)
    }

    /// `x · r = 0` for a single variable of sort `r.cod`.
    pub fn annihilator(acting: &Arc<Ringoid>, side: Side, r: &Morph) -> Result<PpFormula> {
        PpFormula::new(acting, side, vec![r.cod], vec![], vec![r.dom], vec![vec![r.clone()]])
    }

    /// `∃y (x = y · r)` for a single variable of sort `r.dom`.
    pub fn divisibility(acting: &Arc<Ringoid>, side: Side, r: &Morph) -> Result<PpFormula> {
        let col = vec![acting.identity(r.dom), acting.scale(-1, r)];
        PpFormula::new(acting, side, vec![r.dom], vec![r.cod], vec![r.dom], vec![col])
    }

    pub fn acting(&self) -> &Arc<Ringoid> {
        &self.acting
    }

    /// The ringoid of the modules this formula is about.
    pub fn ring(&self) -> Arc<Ringoid> {
        acting_ringoid(&self.acting, self.side)
    }

    pub fn side(&self) -> Side {
        self.side
    }

    pub fn free_sorts(&self) -> &[ObjId] {
        &self.free
    }

    pub fn bound_sorts(&self) -> &[ObjId] {
        &self.bound
    }

    pub fn relation_sorts(&self) -> &[ObjId] {
        &self.rels
    }

    pub fn columns(&self) -> &[Vec<Morph>] {
        &self.columns
    }

    pub fn arity(&self) -> usize {
        self.free.len()
    }

    pub fn var_sorts(&self) -> Vec<ObjId> {
        self.free.iter().chain(&self.bound).copied().collect()
    }

    pub fn is_quantifier_free(&self) -> bool {
        self.bound.is_empty()
    }

    fn same_signature(&self, other: &PpFormula) -> Result<()> {
        if self.side != other.side {
            return Err(Error::SideMismatch);
        }
        if !same_ring(&self.acting, &other.acting) {
            return Err(Error::RingoidMismatch);
        }
        if self.free != other.free {
            return Err(Error::SortMismatch("free variables have different sorts".into()));
        }
        Ok(())
    }

    fn check_module(&self, m: &Module) -> Result<()> {
        if m.side() != self.side {
            return Err(Error::SideMismatch);
        }
        if !same_ring(m.acting(), &self.acting) {
            return Err(Error::RingoidMismatch);
        }
        Ok(())
    }

    /// Places the columns of `f` into a larger variable context: free variable
    /// `i` of `f` goes to row `free_rows[i]`, bound variable `l` to
    /// `bound_rows[l]`.
    fn embed_columns(&self, nvars: usize, sorts: &[ObjId], free_rows: &[usize], bound_rows: &[usize]) -> Vec<Vec<Morph>> {
        let r = &self.acting;
        let nf = self.free.len();
        self.columns
            .iter()
            .zip(&self.rels)
            .map(|(col, &rs)| {
                let mut out: Vec<Morph> = (0..nvars).map(|i| r.zero(rs, sorts[i])).collect();
                for (i, m) in col.iter().enumerate() {
                    let row = if i < nf { free_rows[i] } else { bound_rows[i - nf] };
                    out[row] = r.add(&out[row], m);
                }
                out
            })
            .collect()
    }

    pub fn conj(&self, other: &PpFormula) -> Result<PpFormula> {
        self.same_signature(other)?;
        let n = self.free.len();
        let (ma, mb) = (self.bound.len(), other.bound.len());
        let mut bound = self.bound.clone();
        bound.extend(&other.bound);
        let sorts: Vec<ObjId> = self.free.iter().chain(&bound).copied().collect();
        let nv = sorts.len();
        let free_rows: Vec<usize> = (0..n).collect();
        let mut columns = self.embed_columns(nv, &sorts, &free_rows, &(n..n + ma).collect::<Vec<_>>());
        columns.extend(other.embed_columns(nv, &sorts, &free_rows, &(n + ma..n + ma + mb).collect::<Vec<_>>()));
        let mut rels = self.rels.clone();
        rels.extend(&other.rels);
        PpFormula::new(&self.acting, self.side, self.free.clone(), bound, rels, columns)
    }

    /// `∃ū (φ(ū) ∧ ψ(x̄ - ū))`.
    pub fn sum(&self, other: &PpFormula) -> Result<PpFormula> {
        self.same_signature(other)?;
        let r = &self.acting;
        let n = self.free.len();
        let (ma, mb) = (self.bound.len(), other.bound.len());
        let mut bound = self.free.clone();
        bound.extend(&self.bound);
        bound.extend(&other.bound);
        let sorts: Vec<ObjId> = self.free.iter().chain(&bound).copied().collect();
        let nv = sorts.len();
        let u_rows: Vec<usize> = (n..2 * n).collect();
        let mut columns = self.embed_columns(nv, &sorts, &u_rows, &(2 * n..2 * n + ma).collect::<Vec<_>>());
        let ob_rows: Vec<usize> = (2 * n + ma..2 * n + ma + mb).collect();
        for (col, &rs) in other.columns.iter().zip(&other.rels) {
            let mut out: Vec<Morph> = (0..nv).map(|i| r.zero(rs, sorts[i])).collect();
            for (i, m) in col.iter().enumerate() {
                if i < n {
                    out[i] = m.clone();
                    out[n + i] = r.scale(-1, m);
                } else {
                    out[ob_rows[i - n]] = m.clone();
                }
            }
            columns.push(out);
        }
        let mut rels = self.rels.clone();
        rels.extend(&other.rels);
        PpFormula::new(&self.acting, self.side, self.free.clone(), bound, rels, columns)
    }

    /// Moves the free variables with `drop[i]` set into the bound block.
    pub fn exists_project(&self, drop: &[bool]) -> Result<PpFormula> {
        if drop.len() != self.free.len() {
            return Err(Error::ArityError { expected: self.free.len(), found: drop.len() });
        }
        let kept: Vec<usize> = (0..self.free.len()).filter(|&i| !drop[i]).collect();
        let moved: Vec<usize> = (0..self.free.len()).filter(|&i| drop[i]).collect();
        let order: Vec<usize> =
            kept.iter().chain(&moved).copied().chain(self.free.len()..self.free.len() + self.bound.len()).collect();
        let free = kept.iter().map(|&i| self.free[i]).collect();
        let bound = moved.iter().map(|&i| self.free[i]).chain(self.bound.iter().copied()).collect();
        let columns = self.columns.iter().map(|col| order.iter().map(|&i| col[i].clone()).collect()).collect();
        PpFormula::new(&self.acting, self.side, free, bound, self.rels.clone(), columns)
    }

    /// Linear substitution: old free variable `i` becomes `Σ (k, c) in
    /// subst[i]` of `c` times new free variable `k`. Sorts must agree.
    pub fn substitute(&self, new_free: &[ObjId], subst: &[Vec<(usize, i128)>]) -> Result<PpFormula> {
        if subst.len() != self.free.len() {
            return Err(Error::ArityError { expected: self.free.len(), found: subst.len() });
        }
        let r = &self.acting;
        let n_new = new_free.len();
        let sorts: Vec<ObjId> = new_free.iter().chain(&self.bound).copied().collect();
        let nf = self.free.len();
        let mut columns = Vec::with_capacity(self.columns.len());
        for (col, &rs) in self.columns.iter().zip(&self.rels) {
            let mut out: Vec<Morph> = sorts.iter().map(|&s| r.zero(rs, s)).collect();
            for (i, terms) in subst.iter().enumerate() {
                for &(k, c) in terms {
                    if new_free.get(k) != Some(&self.free[i]) {
                        return Err(Error::SortMismatch(format!("substituted variable {k} has the wrong sort")));
                    }
                    out[k] = r.add(&out[k], &r.scale(c, &col[i]));
                }
            }
            for l in 0..self.bound.len() {
                out[n_new + l] = col[nf + l].clone();
            }
            columns.push(out);
        }
        PpFormula::new(&self.acting, self.side, new_free.to_vec(), self.bound.clone(), self.rels.clone(), columns)
    }

    /// Reads the formula in a context of `new_free` variables, old variable `i`
    /// being new variable `map[i]`.
    pub fn rename(&self, new_free: &[ObjId], map: &[usize]) -> Result<PpFormula> {
        let subst: Vec<Vec<(usize, i128)>> = map.iter().map(|&k| vec![(k, 1)]).collect();
        self.substitute(new_free, &subst)
    }

    /// `x̄ ↦ Σ_j (Σ_i v_i · H_ij)` on `∏ M(var sorts)`.
    fn linear_map(&self, m: &Module) -> GroupHom {
        let sorts = self.var_sorts();
        let src = m.tuple_group(&sorts);
        let dst = m.tuple_group(&self.rels);
        let mut offsets = Vec::with_capacity(sorts.len());
        let mut at = 0;
        for &s in &sorts {
            offsets.push(at);
            at += m.fiber(s).rank();
        }
        GroupHom::from_fn(&src, &dst, |v| {
            let mut out = Vec::with_capacity(dst.rank());
            for (col, &rs) in self.columns.iter().zip(&self.rels) {
                let g = m.fiber(rs);
                let mut acc = g.zero();
                for (i, h) in col.iter().enumerate() {
                    let part = &v[offsets[i]..offsets[i] + m.fiber(sorts[i]).rank()];
                    if part.iter().any(|&c| c != 0) && !self.acting.is_zero(h) {
                        g.add_assign(&mut acc, &m.act(part, h));
                    }
                }
                out.extend(acc);
            }
            out
        })
    }

    /// `φ(M)` as a subgroup of `M(free[0]) x ...`.
    pub fn evaluate(&self, m: &Module) -> Result<Subgroup> {
        self.check_module(m)?;
        let kernel = self.linear_map(m).kernel();
        let k: usize = self.free.iter().map(|&s| m.fiber(s).rank()).sum();
        Ok(kernel.project(0..k))
    }

    /// Membership of a tuple, by solving for the bound variables.
    pub fn satisfied_by(&self, m: &Module, t: &SortedTuple) -> Result<bool> {
        if t.sorts != self.free {
            return Err(Error::SortMismatch("tuple sorts differ from the free sorts".into()));
        }
        Ok(self.evaluate(m)?.contains(&t.flatten()))
    }

    /// The module presented by the matrix, with the tuple of free generators.
    pub fn free_realization(&self) -> (Module, SortedTuple) {
        let (m, gens) = Module::finitely_presented(&self.acting, self.side, &self.var_sorts(), &self.rels, &self.columns)
            .expect("formula columns are well sorted");
        let n = self.free.len();
        let tuple = SortedTuple::new(gens.sorts[..n].to_vec(), gens.entries[..n].to_vec());
        (m, tuple)
    }

    /// Whether `self ≤ other`, i.e. `self(M) ⊆ other(M)` in every module.
    pub fn implies(&self, other: &PpFormula) -> Result<Implication> {
        self.same_signature(other)?;
        let (c, t) = self.free_realization();
        if other.evaluate(&c)?.contains(&t.flatten()) {
            Ok(Implication::Holds)
        } else {
            Ok(Implication::Fails(Box::new(Counterexample { module: c, tuple: t })))
        }
    }

    pub fn equivalent(&self, other: &PpFormula) -> Result<bool> {
        Ok(self.implies(other)?.holds() && other.implies(self)?.holds())
    }

    /// The generator of the pp-type of `a` in `m`.
    pub fn principal_type(a: &SortedTuple, m: &Module) -> Result<PpFormula> {
        let r = m.acting();
        let n = r.num_objects();
        for (e, &s) in a.entries.iter().zip(&a.sorts) {
            if !m.fiber(s).is_element(e) {
                return Err(Error::SortMismatch("tuple entry outside its fiber".into()));
            }
        }
        let gens = m.generating_tuple();
        let nx = a.len();
        let sorts: Vec<ObjId> = a.sorts.iter().chain(&gens.sorts).copied().collect();
        let mut rels = Vec::new();
        let mut columns = Vec::new();
        // Relations among the generators: the kernel of ⊕ (-, Q_g) -> M at every object.
        for p in 0..n {
            let src = crate::group::FinAbGroup::product_of(gens.sorts.iter().map(|&q| r.hom(p, q)));
            let pi = GroupHom::from_fn(&src, m.fiber(p), |v| {
                let mut acc = m.fiber(p).zero();
                let mut at = 0;
                for (g, &q) in gens.entries.iter().zip(&gens.sorts) {
                    let k = r.hom(p, q).rank();
                    let t = Morph { dom: p, cod: q, elem: v[at..at + k].to_vec() };
                    at += k;
                    if !r.is_zero(&t) {
                        m.fiber(p).add_assign(&mut acc, &m.act(g, &t));
                    }
                }
                acc
            });
            for row in pi.kernel().generators() {
                let mut col: Vec<Morph> = a.sorts.iter().map(|&s| r.zero(p, s)).collect();
                let mut at = 0;
                for &q in &gens.sorts {
                    let k = r.hom(p, q).rank();
                    col.push(Morph { dom: p, cod: q, elem: row[at..at + k].to_vec() });
                    at += k;
                }
                rels.push(p);
                columns.push(col);
            }
        }
        // x_i = Σ_g c_g y_g for the coordinates c of a_i.
        for (i, (&s, e)) in a.sorts.iter().zip(&a.entries).enumerate() {
            let mut col: Vec<Morph> = sorts.iter().map(|&t| r.zero(s, t)).collect();
            col[i] = r.identity(s);
            let mut g = 0;
            for (k, &gs) in gens.sorts.iter().enumerate() {
                if gs == s {
                    col[nx + k] = r.scale(-(e[g] as i128), &r.identity(s));
                    g += 1;
                }
            }
            rels.push(s);
            columns.push(col);
        }
        PpFormula::new(r, m.side(), a.sorts.clone(), gens.sorts.clone(), rels, columns)
    }

    /// The subfunctor of `(P, -)` of the acting ringoid cut out by a formula in
    /// one free variable of sort `P`, evaluated on the representables.
    pub fn pp_ideal(&self) -> Result<LeftIdeal> {
        if self.free.len() != 1 {
            return Err(Error::ArityError { expected: 1, found: self.free.len() });
        }
        let r = &self.acting;
        let p = self.free[0];
        let mut parts = Vec::with_capacity(r.num_objects());
        let mut generators = Vec::new();
        for q in 0..r.num_objects() {
            let part = self.evaluate(&Module::representable(r, self.side, q))?;
            generators.extend(part.generators().iter().map(|g| Morph { dom: p, cod: q, elem: g.clone() }));
            parts.push(part);
        }
        Ok(LeftIdeal::from_parts(p, parts, generators))
    }

    /// `|φ(M)| / |ψ(M)|` for `ψ ≤ φ`.
    pub fn invariant(phi: &PpFormula, psi: &PpFormula, m: &Module) -> Result<u128> {
        if let Implication::Fails(c) = psi.implies(phi)? {
            return Err(Error::NotAPair(c));
        }
        Ok(phi.evaluate(m)?.order() / psi.evaluate(m)?.order())
    }

    /// A stable key for ordering and deduplicating formulas syntactically.
    pub fn matrix_key(&self) -> (Vec<ObjId>, Vec<ObjId>, Vec<ObjId>, Vec<Elem>) {
        let flat = self.columns.iter().flat_map(|c| c.iter().map(|m| m.elem.clone())).collect();
        (self.free.clone(), self.bound.clone(), self.rels.clone(), flat)
    }
}

impl fmt::Display for PpFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&dsl::print(self))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    struct Z4 {
        r: Arc<Ringoid>,
        z4: Module,
        z2: Module,
    }

    fn z4() -> Z4 {
        let r = Arc::new(fixtures::zmod(4));
        let z4 = Module::representable(&r, Side::Right, 0);
        let z2 = fixtures::cyclic_quotient(&r, Side::Right, &r.scale(2, &r.identity(0))).unwrap();
        Z4 { r, z4, z2 }
    }

    fn two(r: &Arc<Ringoid>) -> Morph {
        r.scale(2, &r.identity(0))
    }

    fn brute(phi: &PpFormula, m: &Module) -> Vec<Elem> {
        // Every free tuple with some bound witness, by enumeration.
        let sorts = phi.var_sorts();
        let n: usize = phi.free_sorts().iter().map(|&s| m.fiber(s).rank()).sum();
        let lin = phi.linear_map(m);
        let mut out: Vec<Elem> =
            m.tuple_group(&sorts).elements().filter(|v| lin.apply(v).iter().all(|&c| c == 0)).map(|v| v[..n].to_vec()).collect();
        out.sort();
        out.dedup();
        out
    }

    fn sorted(s: &Subgroup) -> Vec<Elem> {
        let mut v = s.elements();
        v.sort();
        v
    }

    #[test]
    fn divisibility_on_z4_and_z2() {
        let t = z4();
        let phi = PpFormula::divisibility(&t.r, Side::Right, &two(&t.r)).unwrap();
        assert_eq!(sorted(&phi.evaluate(&t.z4).unwrap()), vec![vec![0], vec![2]]);
        assert_eq!(phi.evaluate(&t.z2).unwrap().order(), 1);
        assert_eq!(sorted(&phi.evaluate(&t.z4).unwrap()), brute(&phi, &t.z4));
    }

    #[test]
    fn conj_sum_and_projection() {
        let t = z4();
        let div = PpFormula::divisibility(&t.r, Side::Right, &two(&t.r)).unwrap();
        let ann = PpFormula::annihilator(&t.r, Side::Right, &two(&t.r)).unwrap();
        assert_eq!(sorted(&div.conj(&ann).unwrap().evaluate(&t.z4).unwrap()), vec![vec![0], vec![2]]);
        let zero = PpFormula::bottom(&t.r, Side::Right, vec![0]).unwrap();
        assert!(zero.sum(&div).unwrap().equivalent(&div).unwrap());
        let top2 = PpFormula::top(&t.r, Side::Right, vec![0, 0]).unwrap();
        let proj = top2.exists_project(&[true, false]).unwrap();
        assert!(proj.equivalent(&PpFormula::top(&t.r, Side::Right, vec![0]).unwrap()).unwrap());
    }

    #[test]
    fn free_realizations() {
        let t = z4();
        let div = PpFormula::divisibility(&t.r, Side::Right, &two(&t.r)).unwrap();
        let (c, a) = div.free_realization();
        assert_eq!(c.order(), 4);
        assert_eq!(c.fiber(0).element_order(&a.entries[0]), 2);
        let ann = PpFormula::annihilator(&t.r, Side::Right, &two(&t.r)).unwrap();
        let (c, a) = ann.free_realization();
        assert_eq!(c.order(), 2);
        assert_eq!(a.entries[0], vec![1]);
        let (c, _) = PpFormula::bottom(&t.r, Side::Right, vec![0]).unwrap().free_realization();
        assert!(c.is_zero());
    }

    #[test]
    fn implication_and_counterexample() {
        let t = z4();
        let div = PpFormula::divisibility(&t.r, Side::Right, &two(&t.r)).unwrap();
        let ann = PpFormula::annihilator(&t.r, Side::Right, &two(&t.r)).unwrap();
        assert!(div.implies(&ann).unwrap().holds());
        match ann.implies(&div).unwrap() {
            Implication::Fails(c) => {
                assert_eq!(c.module.order(), 2);
                assert_eq!(c.tuple.entries[0], vec![1]);
            }
            Implication::Holds => panic!("2x=0 does not imply 2|x"),
        }
        assert!(!div.equivalent(&ann).unwrap());
    }

    #[test]
    fn divisible_by_two_is_killed_by_three_over_z6() {
        let r = Arc::new(fixtures::zmod(6));
        let div = PpFormula::divisibility(&r, Side::Right, &r.scale(2, &r.identity(0))).unwrap();
        let ann = PpFormula::annihilator(&r, Side::Right, &r.scale(3, &r.identity(0))).unwrap();
        assert!(div.equivalent(&ann).unwrap());
    }

    #[test]
    fn principal_types() {
        let t = z4();
        let div = PpFormula::divisibility(&t.r, Side::Right, &two(&t.r)).unwrap();
        let ann = PpFormula::annihilator(&t.r, Side::Right, &two(&t.r)).unwrap();
        let p = PpFormula::principal_type(&SortedTuple::new(vec![0], vec![vec![2]]), &t.z4).unwrap();
        assert!(p.equivalent(&div).unwrap());
        let p = PpFormula::principal_type(&SortedTuple::new(vec![0], vec![vec![1]]), &t.z2).unwrap();
        assert!(p.equivalent(&ann).unwrap());
        let p = PpFormula::principal_type(&SortedTuple::new(vec![0], vec![vec![0]]), &t.z4).unwrap();
        assert!(p.equivalent(&PpFormula::bottom(&t.r, Side::Right, vec![0]).unwrap()).unwrap());
    }

    #[test]
    fn ideals_and_invariants() {
        let t = z4();
        let div = PpFormula::divisibility(&t.r, Side::Right, &two(&t.r)).unwrap();
        let ann = PpFormula::annihilator(&t.r, Side::Right, &two(&t.r)).unwrap();
        let ideal = div.pp_ideal().unwrap();
        assert_eq!(ideal.part(0).order(), 2);
        assert_eq!(ideal.generators(), [Morph { dom: 0, cod: 0, elem: vec![2] }]);
        assert!(ideal.is_valid(&t.r));
        assert_eq!(PpFormula::invariant(&ann, &div, &t.z4).unwrap(), 1);
        assert_eq!(PpFormula::invariant(&ann, &div, &t.z2).unwrap(), 2);
        assert!(matches!(PpFormula::invariant(&div, &ann, &t.z2), Err(Error::NotAPair(_))));
    }

    #[test]
    fn a2_image_of_r() {
        let a2 = Arc::new(fixtures::a2(2));
        let r = a2.basis(0, 1).next().unwrap();
        let phi = PpFormula::divisibility(&a2, Side::Right, &r).unwrap();
        let mq = Module::representable(&a2, Side::Right, 1);
        assert!(phi.evaluate(&mq).unwrap().is_whole());
        let ideal = phi.pp_ideal().unwrap();
        assert_eq!(ideal.part(0).order(), 1);
        assert_eq!(ideal.part(1).order(), 2);
        let whole = PpFormula::top(&a2, Side::Right, vec![0]).unwrap().pp_ideal().unwrap();
        assert!(whole.parts().iter().enumerate().all(|(q, s)| s.order() == a2.hom(0, q).order()));
    }
}
