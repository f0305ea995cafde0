//! Reproduction suite: each criterion builds its fixtures, runs the relevant
//! computations against an independent check, and reports pass or fail
//! together with its runtime budget.

use std::sync::Arc;
use std::time::{Duration, Instant};

use crate::corpus::{is_isomorphic, modules_up_to, small_quotients};
use crate::duality::{dual, herzog_in, Herzog};
use crate::elim::{qe_search, regularity_harness, HarnessConfig, QeOutcome};
use crate::error::Result;
use crate::fixtures;
use crate::group::Subgroup;
use crate::module::{acting_ringoid, submodules, Module, ModuleMap, Side, SortedTuple};
use crate::pairs::{graph_morphisms, kernel_cokernel_image, localized_iso, LocalizedIso, PpMorphism, PpPair};
use crate::pp::family::{formula_family, pair_family, FamilyConfig};
use crate::pp::{dsl, PpFormula};
use crate::purity::{abspure_formula_check, flat_formula_check, is_absolutely_pure, is_flat, is_pure_epi, is_pure_submodule, retraction, type_test};
use crate::ringoid::Ringoid;
use crate::tensor::Tensor;

#[derive(Clone, Debug)]
pub struct CriterionOutcome {
    pub id: u8,
    pub title: &'static str,
    /// The mathematical checks passed.
    pub checks_passed: bool,
    pub detail: String,
    pub elapsed: Duration,
    pub limit: Duration,
}

impl CriterionOutcome {
    pub fn passed(&self) -> bool {
        self.checks_passed && self.elapsed <= self.limit
    }
}

pub const CRITERIA: &[(u8, &str, u64)] = &[
    (1, "five sorts on R + S1 over F2[e]", 1),
    (2, "localisation at the regular module", 10),
    (3, "duality involution and antitonicity", 120),
    (4, "tensor criterion, exhaustive", 120),
    (5, "flatness and absolute purity by formulas", 300),
    (6, "purity, split and type tests", 120),
    (7, "regularity and eliminations", 300),
    (8, "exactness of pair morphisms", 120),
    (9, "multiplicativity of invariants", 60),
];

pub fn run_criterion(id: u8) -> Result<CriterionOutcome> {
    let &(_, title, secs) = CRITERIA.iter().find(|c| c.0 == id).ok_or_else(|| crate::Error::UnknownName(format!("criterion {id}")))?;
    let start = Instant::now();
    let (checks_passed, detail) = match id {
        1 => criterion_1()?,
        2 => criterion_2()?,
        3 => criterion_3()?,
        4 => criterion_4()?,
        5 => criterion_5()?,
        6 => criterion_6()?,
        7 => criterion_7()?,
        8 => criterion_8()?,
        _ => criterion_9()?,
    };
    Ok(CriterionOutcome { id, title, checks_passed, detail, elapsed: start.elapsed(), limit: Duration::from_secs(secs) })
}

pub fn run_all() -> Result<Vec<CriterionOutcome>> {
    CRITERIA.iter().map(|c| run_criterion(c.0)).collect()
}

fn right(r: &Arc<Ringoid>, src: &str) -> Result<PpFormula> {
    dsl::parse(src, r, Side::Right)
}

fn dual_numbers(p: u64) -> Result<(Arc<Ringoid>, Module, Module)> {
    let r = Arc::new(fixtures::poly_quotient(p, &[0, 0, 1], "e")?.with_name(format!("F{p}[e]")));
    let reg = Module::representable(&r, Side::Right, 0);
    let s1 = fixtures::quotient_by_named(&r, Side::Right, "e")?;
    Ok((r, reg, s1))
}

#[derive(Clone, Debug)]
pub struct FiveSortsRow {
    pub label: &'static str,
    pub pair: PpPair,
    pub order: u128,
    pub expected_dim: u32,
    /// Closed on the regular module.
    pub serre: bool,
}

#[derive(Clone, Debug)]
pub struct FiveSorts {
    pub field: u64,
    pub rows: Vec<FiveSortsRow>,
    /// Rows `(i, j)` tested for isomorphism after localizing at `R`.
    pub isos: Vec<(usize, usize, bool)>,
}

/// The five sorts over `F_p[e]` evaluated on `R ⊕ S1`, with the pairs
/// closed on `R` and the isomorphisms that appear after localizing there.
pub fn five_sorts(p: u64) -> Result<FiveSorts> {
    let (r, reg, s1) = dual_numbers(p)?;
    let m = reg.direct_sum(&s1)?;
    let top = PpFormula::top(&r, Side::Right, vec![0])?;
    let zero = PpFormula::bottom(&r, Side::Right, vec![0])?;
    let ann = right(&r, "x*e = 0")?;
    let div = right(&r, "E y . x = y*e")?;
    let specs: [(&str, &PpFormula, &PpFormula, u32); 5] = [
        ("x = x", &top, &zero, 3),
        ("xe = 0", &ann, &zero, 2),
        ("e | x", &div, &zero, 1),
        ("(x = x)/(e | x)", &top, &div, 2),
        ("(xe = 0)/(e | x)", &ann, &div, 1),
    ];
    let gens = [reg];
    let mut rows = Vec::new();
    for (label, t, b, d) in specs {
        let pair = PpPair::new(t.clone(), b.clone())?;
        let order = pair.value(&m)?.order();
        let serre = pair.serre_membership(&gens)?;
        rows.push(FiveSortsRow { label, pair, order, expected_dim: d, serre });
    }
    let mut isos = Vec::new();
    for (i, j) in [(1, 2), (2, 3), (1, 3)] {
        let iso = matches!(localized_iso(&rows[i].pair, &rows[j].pair, &gens)?, LocalizedIso::Iso(_));
        isos.push((i, j, iso));
    }
    Ok(FiveSorts { field: p, rows, isos })
}

fn criterion_1() -> Result<(bool, String)> {
    let d = five_sorts(2)?;
    let orders: Vec<u128> = d.rows.iter().map(|r| r.order).collect();
    let ok = d.rows.iter().all(|r| r.order == 1u128 << r.expected_dim);
    Ok((ok, format!("orders {orders:?}, expected [8, 4, 2, 4, 2]")))
}

fn criterion_2() -> Result<(bool, String)> {
    let d = five_sorts(2)?;
    let serre: Vec<bool> = d.rows.iter().map(|r| r.serre).collect();
    let only_last = serre == [false, false, false, false, true];
    let all_iso = d.isos.iter().all(|t| t.2);
    Ok((only_last && all_iso, format!("closed on R: {serre:?}; isomorphic after localizing: {:?}", d.isos)))
}

/// Checks `DDφ ≡ φ` and `ψ ≤ φ ⟺ Dφ ≤ Dψ` over a formula family; returns
/// (family size, involution failures, antitone failures, pairs compared).
pub fn duality_sweep(acting: &Arc<Ringoid>, cfg: &FamilyConfig, corpus: Vec<Module>) -> Result<(usize, usize, usize, usize)> {
    let fam = formula_family(acting, Side::Right, cfg, corpus)?;
    let duals: Vec<PpFormula> = fam.iter().map(dual).collect();
    let mut involution = 0;
    for (f, d) in fam.iter().zip(&duals) {
        if !dual(d).equivalent(f)? {
            involution += 1;
        }
    }
    let real: Vec<(Module, SortedTuple)> = fam.iter().map(PpFormula::free_realization).collect();
    let dual_real: Vec<(Module, SortedTuple)> = duals.iter().map(PpFormula::free_realization).collect();
    let mut antitone = 0;
    let mut compared = 0;
    for i in 0..fam.len() {
        for j in 0..fam.len() {
            if fam[i].free_sorts() != fam[j].free_sorts() {
                continue;
            }
            compared += 1;
            // ψ = fam[i], φ = fam[j].
            let forward = fam[j].evaluate(&real[i].0)?.contains(&real[i].1.flatten());
            let backward = duals[i].evaluate(&dual_real[j].0)?.contains(&dual_real[j].1.flatten());
            if forward != backward {
                antitone += 1;
            }
        }
    }
    Ok((fam.len(), involution, antitone, compared))
}

fn criterion_3() -> Result<(bool, String)> {
    let cfg = FamilyConfig::three_free();
    let mut ok = true;
    let mut detail = Vec::new();
    for name in ["z4", "f2e", "a2f2"] {
        let r = Arc::new(fixtures::ring(name)?);
        let corpus = small_quotients(&r, Side::Right, 16)?;
        let (n, inv, anti, pairs) = duality_sweep(&r, &cfg, corpus)?;
        ok &= n >= 200 && inv == 0 && anti == 0;
        detail.push(format!("{name}: {n} formulas, {inv} involution failures, {anti}/{pairs} antitone failures"));
    }
    Ok((ok, detail.join("; ")))
}

/// Direct sums of representables of total order at most `max`, with the zero module.
fn representable_sums(acting: &Arc<Ringoid>, side: Side, max: u128) -> Result<Vec<Module>> {
    let reps: Vec<Module> = (0..acting.num_objects()).map(|p| Module::representable(acting, side, p)).collect();
    let mut out = vec![Module::zero(acting, side)];
    let mut frontier = vec![(0usize, Module::zero(acting, side))];
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for (lo, m) in &frontier {
            for (i, r) in reps.iter().enumerate().skip(*lo) {
                if m.order() * r.order() <= max {
                    let s = m.direct_sum(r)?;
                    out.push(s.clone());
                    next.push((i, s));
                }
            }
        }
        frontier = next;
    }
    Ok(out)
}

/// Every element pair of every (right, left) module pair: the tensor
/// criterion against the vanishing of the tensor class, and that against a
/// complete list of one-variable formulas. Returns (pairs, discrepancies).
pub fn herzog_sweep(rights: &[Module], lefts: &[Module], formulas: &[PpFormula]) -> Result<(usize, usize)> {
    let duals: Vec<PpFormula> = formulas.iter().map(dual).collect();
    let mut count = 0;
    let mut bad = 0;
    for m in rights {
        let vals: Vec<Subgroup> = formulas.iter().map(|f| f.evaluate(m)).collect::<Result<_>>()?;
        for n in lefts {
            let dvals: Vec<Subgroup> = duals.iter().map(|f| f.evaluate(n)).collect::<Result<_>>()?;
            let t = Tensor::new(m, n)?;
            for p in 0..m.fibers().len() {
                let here: Vec<usize> = (0..formulas.len()).filter(|&i| formulas[i].free_sorts() == [p]).collect();
                for a in m.fiber(p).elements() {
                    let r = SortedTuple::new(vec![p], vec![a.clone()]);
                    for b in n.fiber(p).elements() {
                        let s = SortedTuple::new(vec![p], vec![b.clone()]);
                        count += 1;
                        let zero = t.is_zero_class(&r, &s)?;
                        let witness = matches!(herzog_in(&t, &r, m, &s, n, &[])?, Herzog::Witness(_));
                        let separated = here.iter().any(|&i| vals[i].contains(&a) && dvals[i].contains(&b));
                        if witness != zero || separated != zero {
                            bad += 1;
                        }
                    }
                }
            }
        }
    }
    Ok((count, bad))
}

fn one_variable_family(r: &Arc<Ringoid>) -> Result<Vec<PpFormula>> {
    let cfg = FamilyConfig { free: 1..=1, ..FamilyConfig::default() };
    formula_family(r, Side::Right, &cfg, small_quotients(r, Side::Right, 16)?)
}

fn criterion_4() -> Result<(bool, String)> {
    let z4 = Arc::new(fixtures::zmod(4));
    let rights = modules_up_to(&z4, Side::Right, 8)?;
    let lefts = modules_up_to(&z4, Side::Left, 8)?;
    let (n1, bad1) = herzog_sweep(&rights, &lefts, &one_variable_family(&z4)?)?;
    let a2 = Arc::new(fixtures::a2(2));
    let op = acting_ringoid(&a2, Side::Left);
    let rights = representable_sums(&a2, Side::Right, 8)?;
    let lefts = representable_sums(&op, Side::Left, 8)?;
    let (n2, bad2) = herzog_sweep(&rights, &lefts, &one_variable_family(&a2)?)?;
    Ok((bad1 == 0 && bad2 == 0, format!("Z/4: {bad1} of {n1} element pairs disagree; A2: {bad2} of {n2}")))
}

/// For each module: the ideal test against the formula sweep, for flatness
/// and for absolute purity. Returns (flat modules, absolutely pure modules,
/// disagreements).
pub fn flat_abspure_sweep(modules: &[Module], formulas: &[PpFormula]) -> Result<(Vec<usize>, Vec<usize>, usize)> {
    let mut flat = Vec::new();
    let mut abs = Vec::new();
    let mut bad = 0;
    for (i, m) in modules.iter().enumerate() {
        let f = is_flat(m)?.flat;
        let mut f_sweep = true;
        let mut a_sweep = true;
        for phi in formulas {
            f_sweep &= flat_formula_check(m, phi)?.holds;
            a_sweep &= abspure_formula_check(m, phi)?.holds;
        }
        let a = is_absolutely_pure(m)?.absolutely_pure;
        bad += usize::from(f != f_sweep) + usize::from(a != a_sweep);
        if f {
            flat.push(i);
        }
        if a {
            abs.push(i);
        }
    }
    Ok((flat, abs, bad))
}

fn criterion_5() -> Result<(bool, String)> {
    let mut ok = true;
    let mut detail = Vec::new();
    for name in ["z4", "z6", "f2e"] {
        let r = Arc::new(fixtures::ring(name)?);
        let modules = modules_up_to(&r, Side::Right, 16)?;
        let (flat, abs, bad) = flat_abspure_sweep(&modules, &one_variable_family(&r)?)?;
        ok &= bad == 0;
        detail.push(format!("{name}: {} modules, {} flat, {} absolutely pure, {bad} disagreements", modules.len(), flat.len(), abs.len()));
        if name == "z4" {
            let reg = Module::representable(&r, Side::Right, 0);
            let frees = [Module::zero(&r, Side::Right), reg.clone(), reg.power(2)];
            for set in [&flat, &abs] {
                ok &= set.len() == frees.len();
                for &i in set.iter() {
                    let mut hit = false;
                    for f in &frees {
                        hit |= is_isomorphic(&modules[i], f)?;
                    }
                    ok &= hit;
                }
            }
        }
    }
    Ok((ok, detail.join("; ")))
}

/// Split test against type test on every submodule inclusion; returns
/// (inclusions, pure ones, disagreements).
pub fn purity_sweep(modules: &[Module]) -> Result<(usize, usize, usize)> {
    let (mut count, mut pure, mut bad) = (0, 0, 0);
    for n in modules {
        for k in submodules(n) {
            let j = ModuleMap::inclusion_of(n, &k);
            count += 1;
            let split = retraction(&j)?.is_some();
            let typed = if j.source().is_zero() { true } else { type_test(&j)?.0 };
            bad += usize::from(split != typed);
            pure += usize::from(split);
        }
    }
    Ok((count, pure, bad))
}

fn criterion_6() -> Result<(bool, String)> {
    let mut ok = true;
    let mut detail = Vec::new();
    for name in ["z4", "f2e"] {
        let r = Arc::new(fixtures::ring(name)?);
        let modules = modules_up_to(&r, Side::Right, 16)?;
        let (count, pure, bad) = purity_sweep(&modules)?;
        ok &= bad == 0;
        detail.push(format!("{name}: {count} inclusions, {pure} pure, {bad} disagreements"));
    }
    let z4 = Arc::new(fixtures::zmod(4));
    let reg = Module::representable(&z4, Side::Right, 0);
    let two = reg.closure(vec![Subgroup::from_generators(reg.fiber(0), [vec![2]])]);
    let d = is_pure_submodule(&ModuleMap::inclusion_of(&reg, &two))?;
    let witness_ok = match &d.witness {
        Some(w) => w.equivalent(&right(&z4, "E y . x = y*2")?)?,
        None => false,
    };
    let epi = is_pure_epi(&ModuleMap::quotient_of(&reg, &two))?;
    ok &= !d.pure && witness_ok && !epi.pure;
    detail.push(format!("{{0,2}} in Z/4 pure: {}, witness is 2 | x: {witness_ok}; Z/4 -> Z/2 pure epi: {}", d.pure, epi.pure));
    Ok((ok, detail.join("; ")))
}

fn criterion_7() -> Result<(bool, String)> {
    let cfg = HarnessConfig::default();
    let mut ok = true;
    let mut detail = Vec::new();
    for (name, regular) in [("z6", true), ("z2xz2", true), ("m2f2", true), ("z4", false), ("f2e", false)] {
        let r = Arc::new(fixtures::ring(name)?);
        let rep = regularity_harness(&r, &cfg)?;
        let qe = rep.formulas.iter().filter(|f| f.1.found()).count();
        let em = rep.pairs.iter().filter(|p| p.1.found()).count();
        ok &= rep.vnr.is_regular() == regular && rep.anomalies.is_empty();
        if regular {
            ok &= qe == rep.formulas.len() && em == rep.pairs.len();
        }
        detail.push(format!(
            "{name}: regular {}, {qe}/{} quantifier-free, {em}/{} embedded",
            rep.vnr.is_regular(),
            rep.formulas.len(),
            rep.pairs.len()
        ));
    }
    let z4 = Arc::new(fixtures::zmod(4));
    let none = matches!(qe_search(&right(&z4, "E y . x = y*2")?, 3)?, QeOutcome::ProvablyNone { .. });
    ok &= none;
    detail.push(format!("2 | x over Z/4 provably has no quantifier-free form: {none}"));
    Ok((ok, detail.join("; ")))
}

/// Up to `want` graph morphisms between pairs of a one-variable family, at
/// most two per (source, target).
pub fn sample_morphisms(r: &Arc<Ringoid>, want: usize) -> Result<Vec<PpMorphism>> {
    let fam = one_variable_family(r)?;
    let pairs: Vec<PpPair> =
        pair_family(&fam, 40)?.into_iter().map(|(t, b)| PpPair::new(t, b)).collect::<Result<_>>()?;
    let mut out = Vec::new();
    for (i, s) in pairs.iter().enumerate() {
        for t in pairs.iter().skip(i % 3) {
            for m in graph_morphisms(s, t, 64)?.into_iter().rev().take(2) {
                out.push(m);
                if out.len() >= want {
                    return Ok(out);
                }
            }
        }
    }
    Ok(out)
}

/// Kernel, image and cokernel pair values against the evaluated map, for
/// every morphism and module; returns the number of mismatches.
pub fn exactness_sweep(morphisms: &[PpMorphism], modules: &[Module]) -> Result<usize> {
    let mut bad = 0;
    for m in morphisms {
        let kc = kernel_cokernel_image(m)?;
        for module in modules {
            let h = m.induced(module)?;
            let img = h.image().order();
            let coker = h.dst().order() / img;
            let ok = kc.kernel.value(module)?.order() == h.kernel().order()
                && kc.image.value(module)?.order() == img
                && kc.cokernel.value(module)?.order() == coker;
            bad += usize::from(!ok);
        }
    }
    Ok(bad)
}

fn criterion_8() -> Result<(bool, String)> {
    let mut ok = true;
    let mut detail = Vec::new();
    for name in ["z4", "f2e"] {
        let r = Arc::new(fixtures::ring(name)?);
        let morphisms = sample_morphisms(&r, 30)?;
        let modules = modules_up_to(&r, Side::Right, 16)?;
        let bad = exactness_sweep(&morphisms, &modules)?;
        ok &= morphisms.len() >= 20 && bad == 0;
        detail.push(format!("{name}: {} morphisms on {} modules, {bad} mismatches", morphisms.len(), modules.len()));
    }
    Ok((ok, detail.join("; ")))
}

/// `|φ/ψ(M ⊕ N)| = |φ/ψ(M)| |φ/ψ(N)|` over all pairs and module pairs;
/// returns (checks, failures).
pub fn multiplicativity_sweep(pairs: &[PpPair], modules: &[Module]) -> Result<(usize, usize)> {
    let (mut count, mut bad) = (0, 0);
    let sums: Vec<(usize, usize, Module)> = (0..modules.len())
        .flat_map(|i| (i..modules.len()).map(move |j| (i, j)))
        .map(|(i, j)| modules[i].direct_sum(&modules[j]).map(|s| (i, j, s)))
        .collect::<Result<_>>()?;
    for p in pairs {
        let single: Vec<u128> = modules.iter().map(|m| p.value(m).map(|g| g.order())).collect::<Result<_>>()?;
        for (i, j, s) in &sums {
            count += 1;
            bad += usize::from(p.value(s)?.order() != single[*i] * single[*j]);
        }
    }
    Ok((count, bad))
}

fn criterion_9() -> Result<(bool, String)> {
    let mut ok = true;
    let mut detail = Vec::new();
    for name in ["z4", "f2e", "a2f2"] {
        let r = Arc::new(fixtures::ring(name)?);
        let corpus = small_quotients(&r, Side::Right, 16)?;
        let fam = formula_family(&r, Side::Right, &FamilyConfig::default(), corpus)?;
        let pairs: Vec<PpPair> =
            pair_family(&fam, 60)?.into_iter().map(|(t, b)| PpPair::new(t, b)).collect::<Result<_>>()?;
        let modules = if r.is_one_object() {
            modules_up_to(&r, Side::Right, 8)?
        } else {
            let mut m = small_quotients(&r, Side::Right, 8)?;
            m.insert(0, Module::zero(&r, Side::Right));
            m
        };
        let (count, bad) = multiplicativity_sweep(&pairs, &modules)?;
        ok &= bad == 0;
        detail.push(format!("{name}: {} pairs, {count} checks, {bad} failures", pairs.len()));
    }
    Ok((ok, detail.join("; ")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn demo_table() {
        let d = five_sorts(2).unwrap();
        let orders: Vec<u128> = d.rows.iter().map(|r| r.order).collect();
        assert_eq!(orders, [8, 4, 2, 4, 2]);
        let d3 = five_sorts(3).unwrap();
        let orders: Vec<u128> = d3.rows.iter().map(|r| r.order).collect();
        assert_eq!(orders, [27, 9, 3, 9, 3]);
    }

    #[test]
    fn representable_sums_of_a2() {
        let a2 = Arc::new(fixtures::a2(2));
        let orders: Vec<u128> = representable_sums(&a2, Side::Right, 8).unwrap().iter().map(Module::order).collect();
        assert_eq!(orders, [1, 2, 4, 4, 8, 8]);
    }
}
