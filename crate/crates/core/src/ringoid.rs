//! Finite preadditive categories.
//!
//! Hom groups are finite abelian groups in invariant-factor coordinates.
//! Composition is stored through its structure constants on coordinate
//! generators, so bilinearity holds by construction once the constants are
//! compatible with the generator orders.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Axiom, Error, Result};
use crate::group::{subquotient, Elem, FinAbGroup, Subgroup};

pub type ObjId = usize;

/// Upper bound on the sum of all hom-group orders.
pub const SIZE_LIMIT: u128 = 1 << 16;

/// A morphism `dom -> cod` given by its coordinates in `hom(dom, cod)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Morph {
    pub dom: ObjId,
    pub cod: ObjId,
    pub elem: Elem,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomGroup {
    pub group: FinAbGroup,
    pub names: Vec<String>,
}

#[derive(Clone, Debug)]
pub struct Ringoid {
    name: String,
    objects: Vec<String>,
    homs: Vec<HomGroup>,
    // Indexed by (p, q, s); entry [a][b] is (generator a of hom(q,s)) ∘ (generator b of hom(p,q)).
    consts: Vec<Vec<Vec<Elem>>>,
    identities: Vec<Elem>,
}

impl PartialEq for Ringoid {
    fn eq(&self, other: &Self) -> bool {
        self.objects == other.objects
            && self.homs == other.homs
            && self.consts == other.consts
            && self.identities == other.identities
    }
}

impl Eq for Ringoid {}

/// Raw construction data: hom groups in any coordinates, composition constants
/// on generators, and identities.
#[derive(Clone, Debug)]
pub struct RingoidParts {
    pub name: String,
    pub objects: Vec<String>,
    /// Indexed by `dom * n + cod`.
    pub homs: Vec<HomGroup>,
    /// Indexed by `(p * n + q) * n + s`; `[a][b]` as in [`Ringoid`].
    pub consts: Vec<Vec<Vec<Elem>>>,
    pub identities: Vec<Elem>,
}

/// Outcome of the von Neumann regularity test.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum VnrDecision {
    /// For each morphism `r` (in enumeration order), the first `s` with `r s r = r`.
    Regular(Vec<(Morph, Morph)>),
    NotRegular(Morph),
}

impl VnrDecision {
    pub fn is_regular(&self) -> bool {
        matches!(self, VnrDecision::Regular(_))
    }
}

/// A subfunctor of the representable `(base, -)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LeftIdeal {
    base: ObjId,
    parts: Vec<Subgroup>,
    generators: Vec<Morph>,
}

impl LeftIdeal {
    pub fn base(&self) -> ObjId {
        self.base
    }

    /// The subgroup of `hom(base, q)`.
    pub fn part(&self, q: ObjId) -> &Subgroup {
        &self.parts[q]
    }

    pub fn parts(&self) -> &[Subgroup] {
        &self.parts
    }

    pub fn generators(&self) -> &[Morph] {
        &self.generators
    }

    pub fn contains(&self, m: &Morph) -> bool {
        m.dom == self.base && self.parts[m.cod].contains(&m.elem)
    }

    pub fn is_zero(&self) -> bool {
        self.parts.iter().all(Subgroup::is_zero)
    }

    /// Closure under addition and postcomposition, and every generator inside.
    pub fn is_valid(&self, ring: &Ringoid) -> bool {
        if !self.generators.iter().all(|g| self.contains(g)) {
            return false;
        }
        for q in 0..ring.num_objects() {
            for row in self.parts[q].generators() {
                let m = Morph { dom: self.base, cod: q, elem: row.clone() };
                for s in 0..ring.num_objects() {
                    for t in ring.basis(q, s) {
                        if !self.contains(&ring.compose(&t, &m)) {
                            return false;
                        }
                    }
                }
            }
        }
        true
    }

    pub(crate) fn from_parts(base: ObjId, parts: Vec<Subgroup>, generators: Vec<Morph>) -> Self {
        LeftIdeal { base, parts, generators }
    }
}

impl Ringoid {
    /// Validates the axioms and normalizes hom groups to invariant-factor
    /// coordinates.
    pub fn from_parts(parts: RingoidParts) -> Result<Ringoid> {
        let n = parts.objects.len();
        if n == 0 {
            return Err(Error::InvalidSpec("a ringoid needs at least one object".into()));
        }
        if parts.homs.len() != n * n || parts.consts.len() != n * n * n || parts.identities.len() != n {
            return Err(Error::InvalidSpec("table sizes do not match the object count".into()));
        }
        let total: u128 = parts.homs.iter().map(|h| h.group.order()).sum();
        if total > SIZE_LIMIT {
            return Err(Error::SizeBound { total, limit: SIZE_LIMIT });
        }
        for (i, h) in parts.homs.iter().enumerate() {
            if h.names.len() != h.group.rank() {
                return Err(Error::InvalidSpec(format!("hom group {i}: {} names for rank {}", h.names.len(), h.group.rank())));
            }
        }
        let raw = Ringoid {
            name: parts.name,
            objects: parts.objects,
            homs: parts.homs,
            consts: parts.consts,
            identities: parts.identities,
        };
        raw.check_shapes()?;
        raw.check_bilinear()?;
        let ring = raw.normalized();
        ring.check_identities()?;
        ring.check_associative()?;
        Ok(ring)
    }

    fn check_shapes(&self) -> Result<()> {
        let n = self.num_objects();
        for p in 0..n {
            if !self.hom(p, p).is_element(&self.identities[p]) {
                return Err(Error::InvalidSpec(format!("identity of {} out of range", self.objects[p])));
            }
            for q in 0..n {
                for s in 0..n {
                    let table = &self.consts[(p * n + q) * n + s];
                    let ok = table.len() == self.hom(q, s).rank()
                        && table.iter().all(|row| {
                            row.len() == self.hom(p, q).rank()
                                && row.iter().all(|v| self.hom(p, s).is_element(v))
                        });
                    if !ok {
                        return Err(Error::InvalidSpec(format!(
                            "composition table for {} -> {} -> {} is malformed",
                            self.objects[p], self.objects[q], self.objects[s]
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    fn check_bilinear(&self) -> Result<()> {
        let n = self.num_objects();
        for p in 0..n {
            for q in 0..n {
                for s in 0..n {
                    let hps = self.hom(p, s);
                    for (a, &da) in self.hom(q, s).moduli().iter().enumerate() {
                        for (b, &db) in self.hom(p, q).moduli().iter().enumerate() {
                            let c = &self.consts[(p * n + q) * n + s][a][b];
                            if !hps.is_zero(&hps.scale(da as i128, c)) || !hps.is_zero(&hps.scale(db as i128, c)) {
                                return Err(Error::AxiomViolation {
                                    axiom: Axiom::Bilinearity,
                                    witness: vec![self.basis_morph(q, s, a), self.basis_morph(p, q, b)],
                                });
                            }
                        }
                    }
                }
            }
        }
        Ok(())
    }

    fn check_identities(&self) -> Result<()> {
        let n = self.num_objects();
        for p in 0..n {
            for q in 0..n {
                for b in self.basis(p, q) {
                    let left = self.compose(&self.identity(q), &b);
                    let right = self.compose(&b, &self.identity(p));
                    if left != b || right != b {
                        return Err(Error::AxiomViolation { axiom: Axiom::Identity, witness: vec![b] });
                    }
                }
            }
        }
        Ok(())
    }

    fn check_associative(&self) -> Result<()> {
        let n = self.num_objects();
        for p in 0..n {
            for q in 0..n {
                for s in 0..n {
                    for t in 0..n {
                        for a in self.basis(s, t) {
                            for b in self.basis(q, s) {
                                let ab = self.compose(&a, &b);
                                for c in self.basis(p, q) {
                                    if self.compose(&ab, &c) != self.compose(&a, &self.compose(&b, &c)) {
                                        return Err(Error::AxiomViolation {
                                            axiom: Axiom::Associativity,
                                            witness: vec![a.clone(), b.clone(), c],
                                        });
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// Re-coordinatizes every hom group that is not already in invariant form.
    fn normalized(self) -> Ringoid {
        let n = self.num_objects();
        let mut changes = Vec::with_capacity(n * n);
        let mut homs = Vec::with_capacity(n * n);
        for h in &self.homs {
            if h.group.is_invariant_form() || h.group.rank() == 0 {
                changes.push(None);
                homs.push(h.clone());
            } else {
                let sq = subquotient(&Subgroup::whole(&h.group), &Subgroup::zero(&h.group));
                let names = (0..sq.group.rank()).map(|i| format!("g{i}")).collect();
                homs.push(HomGroup { group: sq.group.clone(), names });
                changes.push(Some(sq));
            }
        }
        if changes.iter().all(Option::is_none) {
            return self;
        }
        let to_new = |idx: usize, v: &Elem| -> Elem {
            match &changes[idx] {
                None => v.clone(),
                Some(sq) => sq.to_coords(v).expect("whole group"),
            }
        };
        let lift = |idx: usize, i: usize| -> Elem {
            match &changes[idx] {
                None => self.homs[idx].group.basis(i),
                Some(sq) => sq.lifts()[i].clone(),
            }
        };
        let mut consts = Vec::with_capacity(n * n * n);
        for p in 0..n {
            for q in 0..n {
                for s in 0..n {
                    let table = (0..homs[q * n + s].group.rank())
                        .map(|a| {
                            (0..homs[p * n + q].group.rank())
                                .map(|b| {
                                    let x = lift(q * n + s, a);
                                    let y = lift(p * n + q, b);
                                    to_new(p * n + s, &self.compose_raw(p, q, s, &x, &y))
                                })
                                .collect()
                        })
                        .collect();
                    consts.push(table);
                }
            }
        }
        let identities = (0..n).map(|p| to_new(p * n + p, &self.identities[p])).collect();
        Ringoid { name: self.name, objects: self.objects, homs, consts, identities }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn num_objects(&self) -> usize {
        self.objects.len()
    }

    pub fn objects(&self) -> &[String] {
        &self.objects
    }

    pub fn object_name(&self, p: ObjId) -> &str {
        &self.objects[p]
    }

    pub fn object_id(&self, name: &str) -> Option<ObjId> {
        self.objects.iter().position(|o| o == name)
    }

    pub fn is_one_object(&self) -> bool {
        self.objects.len() == 1
    }

    pub fn hom(&self, p: ObjId, q: ObjId) -> &FinAbGroup {
        &self.homs[p * self.num_objects() + q].group
    }

    pub fn hom_names(&self, p: ObjId, q: ObjId) -> &[String] {
        &self.homs[p * self.num_objects() + q].names
    }

    pub fn total_size(&self) -> u128 {
        self.homs.iter().map(|h| h.group.order()).sum()
    }

    fn basis_morph(&self, p: ObjId, q: ObjId, i: usize) -> Morph {
        Morph { dom: p, cod: q, elem: self.hom(p, q).basis(i) }
    }

    /// Coordinate generators of `hom(p, q)`.
    pub fn basis(&self, p: ObjId, q: ObjId) -> impl Iterator<Item = Morph> + '_ {
        (0..self.hom(p, q).rank()).map(move |i| self.basis_morph(p, q, i))
    }

    /// All morphisms `p -> q` in enumeration order.
    pub fn morphisms(&self, p: ObjId, q: ObjId) -> impl Iterator<Item = Morph> + '_ {
        self.hom(p, q).elements().map(move |elem| Morph { dom: p, cod: q, elem })
    }

    pub fn identity(&self, p: ObjId) -> Morph {
        Morph { dom: p, cod: p, elem: self.identities[p].clone() }
    }

    pub fn zero(&self, p: ObjId, q: ObjId) -> Morph {
        Morph { dom: p, cod: q, elem: self.hom(p, q).zero() }
    }

    pub fn add(&self, a: &Morph, b: &Morph) -> Morph {
        debug_assert!(a.dom == b.dom && a.cod == b.cod);
        Morph { dom: a.dom, cod: a.cod, elem: self.hom(a.dom, a.cod).add(&a.elem, &b.elem) }
    }

    pub fn scale(&self, k: i128, a: &Morph) -> Morph {
        Morph { dom: a.dom, cod: a.cod, elem: self.hom(a.dom, a.cod).scale(k, &a.elem) }
    }

    pub fn is_zero(&self, a: &Morph) -> bool {
        a.elem.iter().all(|&x| x == 0)
    }

    fn compose_raw(&self, p: ObjId, q: ObjId, s: ObjId, outer: &[u64], inner: &[u64]) -> Elem {
        let n = self.num_objects();
        let hps = &self.homs[p * n + s].group;
        let table = &self.consts[(p * n + q) * n + s];
        let mut out = hps.zero();
        for (a, &x) in outer.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (b, &y) in inner.iter().enumerate() {
                if y == 0 {
                    continue;
                }
                hps.axpy(&mut out, x as i128 * y as i128, &table[a][b]);
            }
        }
        out
    }

    /// `outer ∘ inner`.
    pub fn compose(&self, outer: &Morph, inner: &Morph) -> Morph {
        assert_eq!(inner.cod, outer.dom, "morphisms are not composable");
        let elem = self.compose_raw(inner.dom, inner.cod, outer.cod, &outer.elem, &inner.elem);
        Morph { dom: inner.dom, cod: outer.cod, elem }
    }

    pub fn opposite(&self) -> Ringoid {
        let n = self.num_objects();
        let homs = (0..n * n).map(|i| self.homs[(i % n) * n + i / n].clone()).collect();
        let mut consts = Vec::with_capacity(n * n * n);
        for p in 0..n {
            for q in 0..n {
                for s in 0..n {
                    // In the opposite, (a: q->s) ∘op (b: p->q) = b ∘ a with b: q->p, a: s->q.
                    let orig = &self.consts[(s * n + q) * n + p];
                    let ra = self.hom(s, q).rank();
                    let rb = self.hom(q, p).rank();
                    let table = (0..ra).map(|a| (0..rb).map(|b| orig[b][a].clone()).collect()).collect();
                    consts.push(table);
                }
            }
        }
        let name = match self.name.strip_prefix("op(").and_then(|s| s.strip_suffix(')')) {
            Some(inner) => inner.to_string(),
            None => format!("op({})", self.name),
        };
        Ringoid { name, objects: self.objects.clone(), homs, consts, identities: self.identities.clone() }
    }

    pub fn is_von_neumann_regular(&self) -> VnrDecision {
        let n = self.num_objects();
        let mut witnesses = Vec::new();
        for p in 0..n {
            for q in 0..n {
                for r in self.morphisms(p, q) {
                    let found = self.morphisms(q, p).find(|s| self.compose(&self.compose(&r, s), &r) == r);
                    match found {
                        Some(s) => witnesses.push((r, s)),
                        None => return VnrDecision::NotRegular(r),
                    }
                }
            }
        }
        VnrDecision::Regular(witnesses)
    }

    /// The smallest subfunctor of `(base, -)` containing `gens`.
    pub fn ideal_generated(&self, base: ObjId, gens: &[Morph]) -> Result<LeftIdeal> {
        if let Some(g) = gens.iter().find(|g| g.dom != base) {
            return Err(Error::DomainMismatch { expected: base, found: g.dom });
        }
        let n = self.num_objects();
        let parts = (0..n)
            .map(|q| {
                let mut elems = Vec::new();
                for g in gens {
                    for t in self.basis(g.cod, q) {
                        elems.push(self.compose(&t, g).elem);
                    }
                }
                Subgroup::from_generators(self.hom(base, q), elems)
            })
            .collect();
        Ok(LeftIdeal { base, parts, generators: gens.to_vec() })
    }

    /// Every subfunctor of `(base, -)`, each with a generator list.
    pub fn left_ideals(&self, base: ObjId) -> Vec<LeftIdeal> {
        let n = self.num_objects();
        let mut found: Vec<LeftIdeal> = vec![self.ideal_generated(base, &[]).expect("empty")];
        let mut frontier = found.clone();
        while !frontier.is_empty() {
            let mut next = Vec::new();
            for ideal in &frontier {
                for q in 0..n {
                    for m in self.morphisms(base, q) {
                        if ideal.contains(&m) {
                            continue;
                        }
                        let mut gens = ideal.generators.clone();
                        gens.push(m);
                        let cand = self.ideal_generated(base, &gens).expect("domains match");
                        if !found.iter().any(|f| f.parts == cand.parts) {
                            found.push(cand.clone());
                            next.push(cand);
                        }
                    }
                }
            }
            frontier = next;
        }
        found
    }

    /// Renders a morphism using the generator names of its hom group.
    pub fn format_morph(&self, m: &Morph) -> String {
        let g = self.hom(m.dom, m.cod);
        if g.is_zero(&m.elem) {
            return "0".into();
        }
        if m.dom == m.cod {
            let one = &self.identities[m.dom];
            for k in 1..=g.exponent() as i128 {
                if g.scale(k, one) == m.elem {
                    return k.to_string();
                }
            }
        }
        let names = self.hom_names(m.dom, m.cod);
        let terms: Vec<String> = m
            .elem
            .iter()
            .zip(names)
            .filter(|(&c, _)| c != 0)
            .map(|(&c, name)| match (c, name.as_str()) {
                (c, "1") => c.to_string(),
                (1, _) => name.clone(),
                _ => format!("{c}*{name}"),
            })
            .collect();
        if terms.len() == 1 && !terms[0].contains('*') && terms[0].parse::<u64>().is_err() {
            terms[0].clone()
        } else {
            format!("({})", terms.join(" + "))
        }
    }
}

impl fmt::Display for Ringoid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ringoid {} with objects {}", self.name, self.objects.join(", "))?;
        let n = self.num_objects();
        for p in 0..n {
            for q in 0..n {
                writeln!(f, "  hom({}, {}) = {}", self.objects[p], self.objects[q], self.hom(p, q))?;
            }
        }
        Ok(())
    }
}

/// JSON-compatible ringoid document.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RingoidSpec {
    pub name: String,
    pub objects: Vec<String>,
    /// Missing pairs are trivial groups.
    #[serde(default)]
    pub homs: Vec<HomSpec>,
    #[serde(default)]
    pub compose: Vec<ComposeSpec>,
    pub identities: std::collections::BTreeMap<String, Vec<u64>>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct HomSpec {
    pub dom: String,
    pub cod: String,
    pub orders: Vec<u64>,
    #[serde(default)]
    pub names: Option<Vec<String>>,
}

/// `outer ∘ inner = value` for generator `outer` of `hom(mid, cod)` and
/// generator `inner` of `hom(dom, mid)`. Missing entries are zero.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ComposeSpec {
    pub dom: String,
    pub mid: String,
    pub cod: String,
    pub outer: usize,
    pub inner: usize,
    pub value: Vec<u64>,
}

impl RingoidSpec {
    pub fn build(&self) -> Result<Ringoid> {
        let n = self.objects.len();
        let id = |name: &str| -> Result<ObjId> {
            self.objects.iter().position(|o| o == name).ok_or_else(|| Error::UnknownName(name.to_string()))
        };
        let mut homs: Vec<HomGroup> =
            (0..n * n).map(|_| HomGroup { group: FinAbGroup::trivial(), names: Vec::new() }).collect();
        for h in &self.homs {
            let (p, q) = (id(&h.dom)?, id(&h.cod)?);
            if h.orders.iter().any(|&d| d < 2) {
                return Err(Error::InvalidSpec(format!("hom({}, {}) has an order below 2", h.dom, h.cod)));
            }
            let names = match &h.names {
                Some(names) => names.clone(),
                None => (0..h.orders.len()).map(|i| format!("{}{}_{}", h.dom, h.cod, i)).collect(),
            };
            homs[p * n + q] = HomGroup { group: FinAbGroup::new(h.orders.clone()), names };
        }
        let mut consts: Vec<Vec<Vec<Elem>>> = Vec::with_capacity(n * n * n);
        for p in 0..n {
            for q in 0..n {
                for s in 0..n {
                    let zero = homs[p * n + s].group.zero();
                    consts.push(vec![vec![zero; homs[p * n + q].group.rank()]; homs[q * n + s].group.rank()]);
                }
            }
        }
        for c in &self.compose {
            let (p, q, s) = (id(&c.dom)?, id(&c.mid)?, id(&c.cod)?);
            let table = &mut consts[(p * n + q) * n + s];
            let slot = table
                .get_mut(c.outer)
                .and_then(|row| row.get_mut(c.inner))
                .ok_or_else(|| Error::InvalidSpec(format!("composition index out of range for {}->{}->{}", c.dom, c.mid, c.cod)))?;
            let g = &homs[p * n + s].group;
            if c.value.len() != g.rank() {
                return Err(Error::InvalidSpec(format!("composition value has wrong length for {}->{}->{}", c.dom, c.mid, c.cod)));
            }
            *slot = c.value.iter().zip(g.moduli()).map(|(&x, &d)| x % d).collect();
        }
        let mut identities = Vec::with_capacity(n);
        for (p, obj) in self.objects.iter().enumerate() {
            let v = self.identities.get(obj).ok_or_else(|| Error::InvalidSpec(format!("missing identity for {obj}")))?;
            let g = &homs[p * n + p].group;
            if v.len() != g.rank() {
                return Err(Error::InvalidSpec(format!("identity of {obj} has wrong length")));
            }
            identities.push(v.iter().zip(g.moduli()).map(|(&x, &d)| x % d).collect());
        }
        Ringoid::from_parts(RingoidParts {
            name: self.name.clone(),
            objects: self.objects.clone(),
            homs,
            consts,
            identities,
        })
    }
}
