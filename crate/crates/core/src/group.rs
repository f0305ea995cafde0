//! Finite abelian groups in coordinates, homomorphisms between them, and
//! subgroups kept in Howell normal form.
//!
//! A group is `Z/d_1 x ... x Z/d_k`; an element is a coordinate vector with
//! entry `i` reduced into `[0, d_i)`. Module fibers and hom groups always use
//! invariant-factor coordinates (`d_1 | d_2 | ...`), but intermediate ambient
//! groups (products of fibers) need not.

use std::fmt;

use serde::{Deserialize, Serialize};

/// A group element in coordinates.
pub type Elem = Vec<u64>;

pub(crate) fn gcd(a: u64, b: u64) -> u64 {
    let (mut a, mut b) = (a, b);
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

pub(crate) fn lcm(a: u64, b: u64) -> u64 {
    if a == 0 || b == 0 {
        return 0;
    }
    a / gcd(a, b) * b
}

/// Returns `(g, s, t)` with `g = gcd(a, b) = s*a + t*b`.
pub(crate) fn xgcd(a: i128, b: i128) -> (i128, i128, i128) {
    let (mut old_r, mut r) = (a, b);
    let (mut old_s, mut s) = (1i128, 0i128);
    let (mut old_t, mut t) = (0i128, 1i128);
    while r != 0 {
        let q = old_r.div_euclid(r);
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
        (old_t, t) = (t, old_t - q * t);
    }
    if old_r < 0 {
        (-old_r, -old_s, -old_t)
    } else {
        (old_r, old_s, old_t)
    }
}

#[inline]
fn modp(x: i128, d: u64) -> u64 {
    x.rem_euclid(d as i128) as u64
}

/// A finite abelian group `Z/d_1 x ... x Z/d_k`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
pub struct FinAbGroup {
    moduli: Vec<u64>,
}

impl FinAbGroup {
    pub fn new(moduli: Vec<u64>) -> Self {
        assert!(moduli.iter().all(|&d| d >= 1), "moduli must be positive");
        FinAbGroup { moduli }
    }

    pub fn trivial() -> Self {
        FinAbGroup { moduli: Vec::new() }
    }

    pub fn cyclic(n: u64) -> Self {
        if n == 1 {
            Self::trivial()
        } else {
            Self::new(vec![n])
        }
    }

    pub fn moduli(&self) -> &[u64] {
        &self.moduli
    }

    pub fn rank(&self) -> usize {
        self.moduli.len()
    }

    pub fn order(&self) -> u128 {
        self.moduli.iter().map(|&d| d as u128).product()
    }

    pub fn is_trivial(&self) -> bool {
        self.moduli.iter().all(|&d| d == 1)
    }

    /// Least common multiple of the moduli (1 for the trivial group).
    pub fn exponent(&self) -> u64 {
        self.moduli.iter().fold(1, |acc, &d| lcm(acc, d))
    }

    /// True when the moduli form a divisor chain of factors `> 1`.
    pub fn is_invariant_form(&self) -> bool {
        self.moduli.iter().all(|&d| d > 1) && self.moduli.windows(2).all(|w| w[1] % w[0] == 0)
    }

    pub fn invariant_factors(&self) -> Vec<u64> {
        let whole = Subgroup::whole(self);
        subquotient(&whole, &Subgroup::zero(self)).group.moduli
    }

    pub fn zero(&self) -> Elem {
        vec![0; self.rank()]
    }

    pub fn basis(&self, i: usize) -> Elem {
        let mut e = self.zero();
        e[i] = 1 % self.moduli[i];
        e
    }

    pub fn is_element(&self, v: &[u64]) -> bool {
        v.len() == self.rank() && v.iter().zip(&self.moduli).all(|(&x, &d)| x < d)
    }

    pub fn reduce_i(&self, v: &[i128]) -> Elem {
        v.iter().zip(&self.moduli).map(|(&x, &d)| modp(x, d)).collect()
    }

    pub fn add(&self, a: &[u64], b: &[u64]) -> Elem {
        a.iter()
            .zip(b)
            .zip(&self.moduli)
            .map(|((&x, &y), &d)| ((x as u128 + y as u128) % d as u128) as u64)
            .collect()
    }

    pub fn add_assign(&self, a: &mut [u64], b: &[u64]) {
        for ((x, &y), &d) in a.iter_mut().zip(b).zip(&self.moduli) {
            *x = ((*x as u128 + y as u128) % d as u128) as u64;
        }
    }

    pub fn neg(&self, a: &[u64]) -> Elem {
        a.iter().zip(&self.moduli).map(|(&x, &d)| (d - x) % d).collect()
    }

    pub fn sub(&self, a: &[u64], b: &[u64]) -> Elem {
        self.add(a, &self.neg(b))
    }

    pub fn scale(&self, k: i128, a: &[u64]) -> Elem {
        a.iter().zip(&self.moduli).map(|(&x, &d)| modp(k * x as i128, d)).collect()
    }

    /// `a + k*b`.
    pub fn axpy(&self, a: &mut [u64], k: i128, b: &[u64]) {
        for ((x, &y), &d) in a.iter_mut().zip(b).zip(&self.moduli) {
            *x = modp(*x as i128 + k * y as i128, d);
        }
    }

    pub fn is_zero(&self, a: &[u64]) -> bool {
        a.iter().all(|&x| x == 0)
    }

    pub fn element_order(&self, a: &[u64]) -> u64 {
        a.iter().zip(&self.moduli).fold(1, |acc, (&x, &d)| lcm(acc, d / gcd(x, d)))
    }

    /// Concatenated product `self x other`.
    pub fn product(&self, other: &FinAbGroup) -> FinAbGroup {
        let mut moduli = self.moduli.clone();
        moduli.extend_from_slice(&other.moduli);
        FinAbGroup { moduli }
    }

    pub fn power(&self, n: usize) -> FinAbGroup {
        let mut moduli = Vec::with_capacity(self.rank() * n);
        for _ in 0..n {
            moduli.extend_from_slice(&self.moduli);
        }
        FinAbGroup { moduli }
    }

    pub fn product_of<'a>(groups: impl IntoIterator<Item = &'a FinAbGroup>) -> FinAbGroup {
        let mut moduli = Vec::new();
        for g in groups {
            moduli.extend_from_slice(&g.moduli);
        }
        FinAbGroup { moduli }
    }

    /// Position in lexicographic enumeration order (first coordinate most significant).
    pub fn index_of(&self, v: &[u64]) -> u128 {
        v.iter().zip(&self.moduli).fold(0u128, |acc, (&x, &d)| acc * d as u128 + x as u128)
    }

    pub fn element_at(&self, mut idx: u128) -> Elem {
        let mut v = vec![0; self.rank()];
        for (i, &d) in self.moduli.iter().enumerate().rev() {
            v[i] = (idx % d as u128) as u64;
            idx /= d as u128;
        }
        v
    }

    /// All elements in lexicographic order.
    pub fn elements(&self) -> Elements<'_> {
        Elements { group: self, next: Some(self.zero()) }
    }
}

impl fmt::Display for FinAbGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.moduli.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.moduli.iter().map(|d| format!("Z/{d}")).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

pub struct Elements<'a> {
    group: &'a FinAbGroup,
    next: Option<Elem>,
}

impl Iterator for Elements<'_> {
    type Item = Elem;

    fn next(&mut self) -> Option<Elem> {
        let cur = self.next.take()?;
        let mut succ = cur.clone();
        let mut i = succ.len();
        let mut done = true;
        while i > 0 {
            i -= 1;
            succ[i] += 1;
            if succ[i] < self.group.moduli[i] {
                done = false;
                break;
            }
            succ[i] = 0;
        }
        if !done {
            self.next = Some(succ);
        }
        Some(cur)
    }
}

/// A homomorphism given by the images of the source's coordinate generators.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GroupHom {
    src: FinAbGroup,
    dst: FinAbGroup,
    images: Vec<Elem>,
}

impl GroupHom {
    /// Returns `None` when some image is not killed by its generator's order.
    pub fn new(src: FinAbGroup, dst: FinAbGroup, images: Vec<Elem>) -> Option<Self> {
        if images.len() != src.rank() || images.iter().any(|v| !dst.is_element(v)) {
            return None;
        }
        for (img, &d) in images.iter().zip(src.moduli()) {
            if !dst.is_zero(&dst.scale(d as i128, img)) {
                return None;
            }
        }
        Some(GroupHom { src, dst, images })
    }

    /// Builds the homomorphism determined by an additive function on generators.
    pub fn from_fn(src: &FinAbGroup, dst: &FinAbGroup, f: impl Fn(&Elem) -> Elem) -> Self {
        let images = (0..src.rank()).map(|i| f(&src.basis(i))).collect();
        GroupHom { src: src.clone(), dst: dst.clone(), images }
    }

    pub fn zero(src: &FinAbGroup, dst: &FinAbGroup) -> Self {
        GroupHom { src: src.clone(), dst: dst.clone(), images: vec![dst.zero(); src.rank()] }
    }

    pub fn identity(g: &FinAbGroup) -> Self {
        Self::from_fn(g, g, |e| e.clone())
    }

    pub fn src(&self) -> &FinAbGroup {
        &self.src
    }

    pub fn dst(&self) -> &FinAbGroup {
        &self.dst
    }

    pub fn images(&self) -> &[Elem] {
        &self.images
    }

    pub fn apply(&self, x: &[u64]) -> Elem {
        let mut out = self.dst.zero();
        for (&c, img) in x.iter().zip(&self.images) {
            if c != 0 {
                self.dst.axpy(&mut out, c as i128, img);
            }
        }
        out
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &GroupHom) -> GroupHom {
        debug_assert_eq!(inner.dst, self.src);
        let images = inner.images.iter().map(|v| self.apply(v)).collect();
        GroupHom { src: inner.src.clone(), dst: self.dst.clone(), images }
    }

    pub fn add(&self, other: &GroupHom) -> GroupHom {
        let images = self.images.iter().zip(&other.images).map(|(a, b)| self.dst.add(a, b)).collect();
        GroupHom { src: self.src.clone(), dst: self.dst.clone(), images }
    }

    pub fn scale(&self, k: i128) -> GroupHom {
        let images = self.images.iter().map(|a| self.dst.scale(k, a)).collect();
        GroupHom { src: self.src.clone(), dst: self.dst.clone(), images }
    }

    pub fn is_zero(&self) -> bool {
        self.images.iter().all(|v| self.dst.is_zero(v))
    }

    pub fn kernel(&self) -> Subgroup {
        Subgroup::preimage(self, &Subgroup::zero(&self.dst))
    }

    pub fn image(&self) -> Subgroup {
        Subgroup::from_generators(&self.dst, self.images.iter().cloned())
    }
}

/// A subgroup of a coordinate group, stored as the generators it was built
/// from plus a normalized Howell basis.
///
/// Howell rows are echelon with pivots dividing the column modulus, entries
/// above pivots reduced, and the saturation property: every element whose
/// first `c` coordinates vanish lies in the span of rows with pivot `>= c`.
/// Reduction against the rows is therefore an exact membership test and the
/// row list is a canonical form.
#[derive(Clone, Debug)]
pub struct Subgroup {
    ambient: FinAbGroup,
    rows: Vec<Elem>,
    pivots: Vec<usize>,
}

impl PartialEq for Subgroup {
    fn eq(&self, other: &Self) -> bool {
        self.ambient == other.ambient && self.rows == other.rows
    }
}

impl Eq for Subgroup {}

impl std::hash::Hash for Subgroup {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.ambient.hash(state);
        self.rows.hash(state);
    }
}

impl Subgroup {
    pub fn zero(ambient: &FinAbGroup) -> Self {
        Subgroup { ambient: ambient.clone(), rows: Vec::new(), pivots: Vec::new() }
    }

    pub fn whole(ambient: &FinAbGroup) -> Self {
        Self::from_generators(ambient, (0..ambient.rank()).map(|i| ambient.basis(i)))
    }

    pub fn from_generators(ambient: &FinAbGroup, gens: impl IntoIterator<Item = Elem>) -> Self {
        let mut s = Self::zero(ambient);
        for g in gens {
            s.insert_raw(g);
        }
        s.normalize();
        s
    }

    pub fn ambient(&self) -> &FinAbGroup {
        &self.ambient
    }

    /// The Howell basis; it generates the subgroup.
    pub fn generators(&self) -> &[Elem] {
        &self.rows
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn order(&self) -> u128 {
        self.rows
            .iter()
            .zip(&self.pivots)
            .map(|(r, &c)| (self.ambient.moduli[c] / r[c]) as u128)
            .product()
    }

    pub fn index(&self) -> u128 {
        self.ambient.order() / self.order()
    }

    pub fn is_zero(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn is_whole(&self) -> bool {
        self.order() == self.ambient.order()
    }

    pub fn insert(&mut self, v: Elem) {
        self.insert_raw(v);
        self.normalize();
    }

    fn row_at(&self, c: usize) -> Option<usize> {
        self.pivots.iter().position(|&p| p == c)
    }

    fn insert_raw(&mut self, v: Elem) {
        debug_assert_eq!(v.len(), self.ambient.rank());
        let moduli = self.ambient.moduli.clone();
        let mut queue = vec![v];
        while let Some(mut v) = queue.pop() {
            for (x, &d) in v.iter_mut().zip(&moduli) {
                *x %= d;
            }
            let mut c = 0;
            while c < v.len() {
                if v[c] == 0 {
                    c += 1;
                    continue;
                }
                let d = moduli[c];
                match self.row_at(c) {
                    Some(idx) => {
                        let p = self.rows[idx][c];
                        if v[c] % p == 0 {
                            let q = (v[c] / p) as i128;
                            let row = self.rows[idx].clone();
                            self.ambient.axpy(&mut v, -q, &row);
                            c += 1;
                            continue;
                        }
                        let (g, s, t) = xgcd(p as i128, v[c] as i128);
                        let row = self.rows[idx].clone();
                        let mut w1 = self.ambient.scale(s, &row);
                        self.ambient.axpy(&mut w1, t, &v);
                        let mut w2 = self.ambient.scale(v[c] as i128 / g, &row);
                        self.ambient.axpy(&mut w2, -(p as i128 / g), &v);
                        let sat = self.ambient.scale(d as i128 / g, &w1);
                        self.rows[idx] = w1;
                        queue.push(w2);
                        queue.push(sat);
                        break;
                    }
                    None => {
                        let (g, s, _) = xgcd(v[c] as i128, d as i128);
                        let w1 = self.ambient.scale(s, &v);
                        let rest = self.ambient.scale(d as i128 / g, &v);
                        let sat = self.ambient.scale(d as i128 / g, &w1);
                        let pos = self.pivots.iter().position(|&p| p > c).unwrap_or(self.pivots.len());
                        self.pivots.insert(pos, c);
                        self.rows.insert(pos, w1);
                        queue.push(rest);
                        queue.push(sat);
                        break;
                    }
                }
            }
        }
    }

    fn normalize(&mut self) {
        for i in 0..self.rows.len() {
            let c = self.pivots[i];
            let p = self.rows[i][c];
            let row = self.rows[i].clone();
            for j in 0..i {
                let q = self.rows[j][c] / p;
                if q != 0 {
                    self.ambient.axpy(&mut self.rows[j], -(q as i128), &row);
                }
            }
        }
    }

    /// Canonical representative of the coset `v + self`.
    pub fn reduce(&self, v: &[u64]) -> Elem {
        let mut v = v.to_vec();
        for (row, &c) in self.rows.iter().zip(&self.pivots) {
            let q = v[c] / row[c];
            if q != 0 {
                self.ambient.axpy(&mut v, -(q as i128), row);
            }
        }
        v
    }

    pub fn contains(&self, v: &[u64]) -> bool {
        self.ambient.is_zero(&self.reduce(v))
    }

    /// Coefficients `q` with `v = Σ q_i * generators()[i]`, if `v` is a member.
    pub fn coefficients(&self, v: &[u64]) -> Option<Vec<i128>> {
        let mut v = v.to_vec();
        let mut coeffs = vec![0i128; self.rows.len()];
        for (i, (row, &c)) in self.rows.iter().zip(&self.pivots).enumerate() {
            if !v[c].is_multiple_of(row[c]) {
                return None;
            }
            let q = (v[c] / row[c]) as i128;
            coeffs[i] = q;
            if q != 0 {
                self.ambient.axpy(&mut v, -q, row);
            }
        }
        self.ambient.is_zero(&v).then_some(coeffs)
    }

    pub fn is_subset(&self, other: &Subgroup) -> bool {
        self.rows.iter().all(|r| other.contains(r))
    }

    pub fn join(&self, other: &Subgroup) -> Subgroup {
        let mut s = self.clone();
        for r in &other.rows {
            s.insert_raw(r.clone());
        }
        s.normalize();
        s
    }

    pub fn meet(&self, other: &Subgroup) -> Subgroup {
        // {(a - b, a)}: rows with vanishing first block give a ∈ self ∩ other.
        let g = &self.ambient;
        let big = g.product(g);
        let k = g.rank();
        let mut gens = Vec::new();
        for a in &self.rows {
            let mut v = a.clone();
            v.extend_from_slice(a);
            gens.push(v);
        }
        for b in &other.rows {
            let mut v = b.clone();
            v.extend(std::iter::repeat_n(0, k));
            gens.push(v);
        }
        let lam = Subgroup::from_generators(&big, gens);
        let tail = lam.rows.iter().zip(&lam.pivots).filter(|(_, &c)| c >= k).map(|(r, _)| r[k..].to_vec());
        Subgroup::from_generators(g, tail)
    }

    /// Image under a homomorphism whose source is the ambient group.
    pub fn image(&self, f: &GroupHom) -> Subgroup {
        debug_assert_eq!(f.src, self.ambient);
        Subgroup::from_generators(&f.dst, self.rows.iter().map(|r| f.apply(r)))
    }

    /// `f^{-1}(target)` as a subgroup of the source of `f`.
    pub fn preimage(f: &GroupHom, target: &Subgroup) -> Subgroup {
        let m = f.dst.rank();
        let big = f.dst.product(&f.src);
        let mut gens = Vec::with_capacity(f.src.rank() + target.rows.len());
        for i in 0..f.src.rank() {
            let mut v = f.images[i].clone();
            v.extend(f.src.basis(i));
            gens.push(v);
        }
        for t in &target.rows {
            let mut v = t.clone();
            v.extend(std::iter::repeat_n(0, f.src.rank()));
            gens.push(v);
        }
        let lam = Subgroup::from_generators(&big, gens);
        let tail = lam.rows.iter().zip(&lam.pivots).filter(|(_, &c)| c >= m).map(|(r, _)| r[m..].to_vec());
        Subgroup::from_generators(&f.src, tail)
    }

    /// Projection onto the coordinate range `range` of the ambient group.
    pub fn project(&self, range: std::ops::Range<usize>) -> Subgroup {
        let sub = FinAbGroup::new(self.ambient.moduli[range.clone()].to_vec());
        Subgroup::from_generators(&sub, self.rows.iter().map(|r| r[range.clone()].to_vec()))
    }

    /// Every element, in increasing coefficient order of the Howell rows.
    pub fn elements(&self) -> Vec<Elem> {
        let radices: Vec<u64> =
            self.rows.iter().zip(&self.pivots).map(|(r, &c)| self.ambient.moduli[c] / r[c]).collect();
        let coeff_group = FinAbGroup::new(radices);
        coeff_group
            .elements()
            .map(|coeffs| {
                let mut v = self.ambient.zero();
                for (&q, row) in coeffs.iter().zip(&self.rows) {
                    if q != 0 {
                        self.ambient.axpy(&mut v, q as i128, row);
                    }
                }
                v
            })
            .collect()
    }
}

/// Solves `v = Σ c_i g_i (mod S)` for fixed generators `g_i` and an optional
/// subgroup `S`.
#[derive(Clone, Debug)]
pub struct LinearSystem {
    ambient: FinAbGroup,
    ngens: usize,
    lam: Subgroup,
}

impl LinearSystem {
    pub fn new(ambient: &FinAbGroup, gens: &[Elem], modulo: Option<&Subgroup>) -> Self {
        let n = ambient.exponent();
        let tail = FinAbGroup::new(vec![n; gens.len()]);
        let big = ambient.product(&tail);
        let mut rows = Vec::new();
        for (i, g) in gens.iter().enumerate() {
            let mut v = g.clone();
            v.extend(tail.basis(i));
            rows.push(v);
        }
        if let Some(m) = modulo {
            for r in m.generators() {
                let mut v = r.clone();
                v.extend(std::iter::repeat_n(0, gens.len()));
                rows.push(v);
            }
        }
        LinearSystem { ambient: ambient.clone(), ngens: gens.len(), lam: Subgroup::from_generators(&big, rows) }
    }

    /// Coefficients (modulo the ambient exponent), or `None` if unsolvable.
    pub fn solve(&self, v: &[u64]) -> Option<Vec<u64>> {
        let k = self.ambient.rank();
        let mut w = v.to_vec();
        w.extend(std::iter::repeat_n(0, self.ngens));
        let big = self.lam.ambient();
        for (row, &c) in self.lam.rows.iter().zip(&self.lam.pivots) {
            if c >= k {
                break;
            }
            if !w[c].is_multiple_of(row[c]) {
                return None;
            }
            let q = (w[c] / row[c]) as i128;
            if q != 0 {
                big.axpy(&mut w, -q, row);
            }
        }
        if !w[..k].iter().all(|&x| x == 0) {
            return None;
        }
        let n = self.ambient.exponent();
        Some(w[k..].iter().map(|&t| (n - t % n) % n).collect())
    }
}

/// A concrete model `A/B` of a subquotient of some ambient group, in
/// invariant-factor coordinates.
#[derive(Clone, Debug)]
pub struct Subquotient {
    pub group: FinAbGroup,
    top: Subgroup,
    /// Column transform: coefficient vector (w.r.t. `top` generators) to new coordinates.
    to_new: Vec<Vec<u64>>,
    /// `lifts[i]` is an element of `top` representing new generator `i`.
    lifts: Vec<Elem>,
}

impl Subquotient {
    /// Coordinates of the class of `v`; `None` if `v` is not in the top subgroup.
    pub fn to_coords(&self, v: &[u64]) -> Option<Elem> {
        let coeffs = self.top.coefficients(v)?;
        let moduli = self.group.moduli();
        Some(
            (0..self.group.rank())
                .map(|j| {
                    let mut acc: i128 = 0;
                    for (q, row) in coeffs.iter().zip(&self.to_new) {
                        acc = (acc + q * row[j] as i128) % moduli[j] as i128;
                    }
                    modp(acc, moduli[j])
                })
                .collect(),
        )
    }

    /// An element of the top subgroup in the given class.
    pub fn lift(&self, coords: &[u64]) -> Elem {
        let amb = self.top.ambient();
        let mut v = amb.zero();
        for (&c, l) in coords.iter().zip(&self.lifts) {
            if c != 0 {
                amb.axpy(&mut v, c as i128, l);
            }
        }
        v
    }

    pub fn lifts(&self) -> &[Elem] {
        &self.lifts
    }
}

/// Builds `top / bottom` (with `bottom ⊆ top`) in invariant-factor coordinates.
pub fn subquotient(top: &Subgroup, bottom: &Subgroup) -> Subquotient {
    let amb = top.ambient();
    let r = top.rows.len();
    let n = amb.exponent();
    let k = amb.rank();
    // Relations among the top generators modulo `bottom`.
    let coeff_group = FinAbGroup::new(vec![n; r]);
    let big = amb.product(&coeff_group);
    let mut gens = Vec::new();
    for (i, a) in top.rows.iter().enumerate() {
        let mut v = a.clone();
        v.extend(coeff_group.basis(i));
        gens.push(v);
    }
    for b in &bottom.rows {
        let mut v = b.clone();
        v.extend(std::iter::repeat_n(0, r));
        gens.push(v);
    }
    let lam = Subgroup::from_generators(&big, gens);
    let rel: Vec<Vec<u64>> =
        lam.rows.iter().zip(&lam.pivots).filter(|(_, &c)| c >= k).map(|(row, _)| row[k..].to_vec()).collect();
    let snf = smith_mod(rel, r, n);
    let mut moduli = Vec::new();
    let mut keep = Vec::new();
    for (j, &f) in snf.factors.iter().enumerate() {
        if f > 1 {
            moduli.push(f);
            keep.push(j);
        }
    }
    let to_new = (0..r).map(|i| keep.iter().map(|&j| snf.v[i][j] % snf.factors[j]).collect()).collect();
    let lifts = keep
        .iter()
        .map(|&j| {
            let mut v = amb.zero();
            for (i, a) in top.rows.iter().enumerate() {
                let c = snf.vinv[j][i];
                if c != 0 {
                    amb.axpy(&mut v, c as i128, a);
                }
            }
            v
        })
        .collect();
    Subquotient { group: FinAbGroup::new(moduli), top: top.clone(), to_new, lifts }
}

struct SmithMod {
    factors: Vec<u64>,
    v: Vec<Vec<u64>>,
    vinv: Vec<Vec<u64>>,
}

fn unit_multiplier(p: u64, n: u64) -> u64 {
    // A unit u mod n with u*p ≡ gcd(p, n) (mod n).
    let g = gcd(p, n);
    let m = n / g;
    if m == 1 {
        return 1;
    }
    let (_, s, _) = xgcd((p / g) as i128, m as i128);
    let mut u = modp(s, m);
    while gcd(u, n) != 1 {
        u += m;
    }
    u % n
}

/// Smith normal form over `Z/n` of a matrix with `cols` columns, tracking the
/// column transform `v` and its inverse.
fn smith_mod(mut a: Vec<Vec<u64>>, cols: usize, n: u64) -> SmithMod {
    let rows = a.len();
    let mut v: Vec<Vec<u64>> = (0..cols).map(|i| (0..cols).map(|j| (i == j) as u64 % n.max(1)).collect()).collect();
    let mut vinv = v.clone();
    let ni = n as i128;
    let sub = |x: u64, q: i128, y: u64| -> u64 { modp(x as i128 - q * y as i128, n) };
    let add_col = |a: &mut Vec<Vec<u64>>, v: &mut Vec<Vec<u64>>, vinv: &mut Vec<Vec<u64>>, j: usize, t: usize, q: i128| {
        // col_j -= q col_t
        for row in a.iter_mut() {
            row[j] = sub(row[j], q, row[t]);
        }
        for row in v.iter_mut() {
            row[j] = sub(row[j], q, row[t]);
        }
        let (rt, rj) = (vinv[t].clone(), vinv[j].clone());
        vinv[t] = rt.iter().zip(&rj).map(|(&x, &y)| modp(x as i128 + q * y as i128, n)).collect();
    };
    let swap_cols = |a: &mut Vec<Vec<u64>>, v: &mut Vec<Vec<u64>>, vinv: &mut Vec<Vec<u64>>, i: usize, j: usize| {
        if i == j {
            return;
        }
        for row in a.iter_mut() {
            row.swap(i, j);
        }
        for row in v.iter_mut() {
            row.swap(i, j);
        }
        vinv.swap(i, j);
    };
    let mut t = 0;
    while t < rows.min(cols) {
        // Pick the smallest nonzero residue in the lower-right block.
        let mut best: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                if a[i][j] != 0 && best.is_none_or(|(bi, bj)| a[i][j] < a[bi][bj]) {
                    best = Some((i, j));
                }
            }
        }
        let Some((bi, bj)) = best else { break };
        a.swap(t, bi);
        swap_cols(&mut a, &mut v, &mut vinv, t, bj);
        loop {
            let mut clean = true;
            for i in t + 1..rows {
                if a[i][t] != 0 {
                    let q = (a[i][t] / a[t][t]) as i128;
                    let rt = a[t].clone();
                    for (x, &y) in a[i].iter_mut().zip(&rt) {
                        *x = sub(*x, q, y);
                    }
                    if a[i][t] != 0 {
                        a.swap(i, t);
                        clean = false;
                    }
                }
            }
            for j in t + 1..cols {
                if a[t][j] != 0 {
                    let q = (a[t][j] / a[t][t]) as i128;
                    add_col(&mut a, &mut v, &mut vinv, j, t, q);
                    if a[t][j] != 0 {
                        swap_cols(&mut a, &mut v, &mut vinv, t, j);
                        clean = false;
                    }
                }
            }
            if clean {
                break;
            }
        }
        // Normalize the pivot to a divisor of n (row scaling by a unit).
        let u = unit_multiplier(a[t][t], n);
        for x in a[t].iter_mut() {
            *x = modp(*x as i128 * u as i128, n);
        }
        let p = a[t][t];
        let mut fixed = true;
        'outer: for i in t + 1..rows {
            for j in t + 1..cols {
                if !a[i][j].is_multiple_of(p) {
                    let ri = a[i].clone();
                    for (x, &y) in a[t].iter_mut().zip(&ri) {
                        *x = modp(*x as i128 + y as i128, n);
                    }
                    fixed = false;
                    break 'outer;
                }
            }
        }
        if fixed {
            t += 1;
        }
    }
    let factors = (0..cols)
        .map(|j| {
            let d = if j < rows.min(cols) { a[j][j] } else { 0 };
            if d == 0 { n } else { gcd(d, n) }
        })
        .collect();
    let _ = ni;
    SmithMod { factors, v, vinv }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute_span(g: &FinAbGroup, gens: &[Elem]) -> std::collections::BTreeSet<Elem> {
        let mut set: std::collections::BTreeSet<Elem> = [g.zero()].into_iter().collect();
        loop {
            let mut grown = set.clone();
            for a in &set {
                for b in gens {
                    grown.insert(g.add(a, b));
                }
            }
            if grown.len() == set.len() {
                return set;
            }
            set = grown;
        }
    }

    #[test]
    fn howell_saturation_in_z4_squared() {
        let g = FinAbGroup::new(vec![4, 4]);
        let s = Subgroup::from_generators(&g, [vec![2, 1]]);
        assert_eq!(s.order(), 4);
        assert!(s.contains(&[0, 2]));
        assert!(!s.contains(&[0, 1]));
    }

    #[test]
    fn subquotient_of_cyclic() {
        let g = FinAbGroup::new(vec![4]);
        let top = Subgroup::whole(&g);
        let bot = Subgroup::from_generators(&g, [vec![2]]);
        let q = subquotient(&top, &bot);
        assert_eq!(q.group.moduli(), &[2]);
        assert_eq!(q.to_coords(&[3]).unwrap(), vec![1]);
        assert_eq!(q.to_coords(&[2]).unwrap(), vec![0]);
    }

    #[test]
    fn invariant_factors_of_mixed_product() {
        assert_eq!(FinAbGroup::new(vec![2, 3]).invariant_factors(), vec![6]);
        assert_eq!(FinAbGroup::new(vec![4, 2, 6]).invariant_factors(), vec![2, 2, 12]);
        assert_eq!(FinAbGroup::new(vec![1, 1]).invariant_factors(), Vec::<u64>::new());
    }

    #[test]
    fn preimage_and_kernel() {
        let z4 = FinAbGroup::new(vec![4]);
        let z2 = FinAbGroup::new(vec![2]);
        let f = GroupHom::new(z4.clone(), z2, vec![vec![1]]).unwrap();
        let k = f.kernel();
        assert_eq!(k.elements(), vec![vec![0], vec![2]]);
        assert!(GroupHom::new(FinAbGroup::new(vec![2]), z4, vec![vec![1]]).is_none());
    }

    use proptest::prelude::*;

    fn group_and_gens() -> impl Strategy<Value = (FinAbGroup, Vec<Elem>, Vec<Elem>)> {
        prop::collection::vec(prop::sample::select(vec![2u64, 3, 4, 6, 8]), 1..4).prop_flat_map(|moduli| {
            let g = FinAbGroup::new(moduli.clone());
            let elem = moduli.iter().map(|&d| 0..d).collect::<Vec<_>>();
            (Just(g), prop::collection::vec(elem.clone(), 0..4), prop::collection::vec(elem, 0..4))
        })
    }

    proptest! {
        #[test]
        fn howell_matches_brute_force((g, gens, others) in group_and_gens()) {
            let s = Subgroup::from_generators(&g, gens.clone());
            let span = brute_span(&g, &gens);
            prop_assert_eq!(s.order(), span.len() as u128);
            for v in g.elements() {
                prop_assert_eq!(s.contains(&v), span.contains(&v));
            }
            let elems: std::collections::BTreeSet<Elem> = s.elements().into_iter().collect();
            prop_assert_eq!(&elems, &span);
            // canonical form: any other generating set of the same subgroup gives identical rows
            let mut shuffled: Vec<Elem> = span.iter().cloned().collect();
            shuffled.reverse();
            prop_assert_eq!(Subgroup::from_generators(&g, shuffled), s.clone());
            // meet against brute force
            let t = Subgroup::from_generators(&g, others.clone());
            let tspan = brute_span(&g, &others);
            let meet = s.meet(&t);
            prop_assert_eq!(meet.order(), span.intersection(&tspan).count() as u128);
            let q = subquotient(&s.join(&t), &t);
            prop_assert_eq!(q.group.order() * t.order(), s.join(&t).order());
            prop_assert!(q.group.is_invariant_form() || q.group.rank() == 0);
            for v in span.iter() {
                let c = q.to_coords(v).unwrap();
                let back = q.lift(&c);
                prop_assert!(t.contains(&g.sub(&back, v)));
            }
        }
    }
}
