//! Ring and ringoid constructors, plus the named built-ins.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::group::{Elem, FinAbGroup, LinearSystem, Subgroup};
use crate::module::{Module, Side};
use crate::ringoid::{HomGroup, Morph, Ringoid, RingoidParts};

fn one_object(name: String, group: FinAbGroup, names: Vec<String>, table: Vec<Vec<Elem>>, identity: Elem) -> Result<Ringoid> {
    Ringoid::from_parts(RingoidParts {
        name,
        objects: vec!["*".into()],
        homs: vec![HomGroup { group, names }],
        consts: vec![table],
        identities: vec![identity],
    })
}

/// `Z/n`; `zmod(1)` is the zero ring.
pub fn zmod(n: u64) -> Ringoid {
    assert!(n >= 1);
    let r = if n == 1 {
        one_object("0".into(), FinAbGroup::trivial(), vec![], vec![], vec![])
    } else {
        one_object(format!("Z/{n}"), FinAbGroup::new(vec![n]), vec!["1".into()], vec![vec![vec![1]]], vec![1])
    };
    r.expect("Z/n is a ring")
}

pub fn zero_ring() -> Ringoid {
    zmod(1)
}

/// `F_p[X]/(f)` for a monic `f`, given by its coefficients from the constant
/// term up (leading 1 included).
pub fn poly_quotient(p: u64, f: &[u64], var: &str) -> Result<Ringoid> {
    let d = f.len().saturating_sub(1);
    if d == 0 || f[d] % p != 1 {
        return Err(Error::InvalidSpec("the modulus must be monic of positive degree".into()));
    }
    // Reduce X^k for k < 2d - 1 into the basis 1, X, ..., X^{d-1}.
    let mut powers: Vec<Vec<u64>> = Vec::with_capacity(2 * d);
    for k in 0..2 * d {
        let v = if k < d {
            let mut v = vec![0; d];
            v[k] = 1;
            v
        } else {
            // X^k = X * X^{k-1}
            let prev = &powers[k - 1];
            let mut v = vec![0; d];
            for i in 0..d - 1 {
                v[i + 1] = prev[i];
            }
            let top = prev[d - 1];
            for i in 0..d {
                v[i] = (v[i] + p - (top * (f[i] % p)) % p) % p;
            }
            v
        };
        powers.push(v);
    }
    let table = (0..d).map(|a| (0..d).map(|b| powers[a + b].clone()).collect()).collect();
    let names = (0..d)
        .map(|k| match k {
            0 => "1".to_string(),
            1 => var.to_string(),
            _ => format!("{var}{k}"),
        })
        .collect();
    let mut identity = vec![0; d];
    identity[0] = 1;
    let fname: Vec<String> = f
        .iter()
        .enumerate()
        .rev()
        .filter(|(_, &c)| c % p != 0)
        .map(|(k, &c)| {
            let mono = match k {
                0 => String::new(),
                1 => var.to_string(),
                _ => format!("{var}^{k}"),
            };
            match (c % p, mono.is_empty()) {
                (c, true) => c.to_string(),
                (1, false) => mono,
                (c, false) => format!("{c}{mono}"),
            }
        })
        .collect();
    one_object(format!("F{p}[{var}]/({})", fname.join("+")), FinAbGroup::new(vec![p; d]), names, table, identity)
}

/// Direct product of one-object ringoids.
pub fn product(rings: &[Ringoid]) -> Result<Ringoid> {
    if rings.iter().any(|r| !r.is_one_object()) {
        return Err(Error::NotOneObject);
    }
    let groups: Vec<&FinAbGroup> = rings.iter().map(|r| r.hom(0, 0)).collect();
    let total = FinAbGroup::product_of(groups.iter().copied());
    let mut offsets = vec![0];
    for g in &groups {
        offsets.push(offsets.last().unwrap() + g.rank());
    }
    let mut names = Vec::new();
    for (k, r) in rings.iter().enumerate() {
        for n in r.hom_names(0, 0) {
            names.push(if n == "1" { format!("e{k}") } else { format!("{n}{k}") });
        }
    }
    let rank = total.rank();
    let table = (0..rank)
        .map(|a| {
            (0..rank)
                .map(|b| {
                    let mut v = total.zero();
                    let ka = offsets.iter().rposition(|&o| o <= a).unwrap();
                    let kb = offsets.iter().rposition(|&o| o <= b).unwrap();
                    if ka == kb {
                        let r = &rings[ka];
                        let x = r.hom(0, 0).basis(a - offsets[ka]);
                        let y = r.hom(0, 0).basis(b - offsets[ka]);
                        let c = r.compose(&Morph { dom: 0, cod: 0, elem: x }, &Morph { dom: 0, cod: 0, elem: y });
                        v[offsets[ka]..offsets[ka + 1]].copy_from_slice(&c.elem);
                    }
                    v
                })
                .collect()
        })
        .collect();
    let identity = rings.iter().flat_map(|r| r.identity(0).elem).collect();
    let name = rings.iter().map(|r| r.name().to_string()).collect::<Vec<_>>().join(" x ");
    one_object(name, total, names, table, identity)
}

/// The ring of `n x n` matrices over a one-object ringoid.
pub fn matrix_ring(base: &Ringoid, n: usize) -> Result<Ringoid> {
    if !base.is_one_object() {
        return Err(Error::NotOneObject);
    }
    let g = base.hom(0, 0);
    let k = g.rank();
    let group = g.power(n * n);
    let idx = |i: usize, j: usize, a: usize| (i * n + j) * k + a;
    let mut names = vec![String::new(); n * n * k];
    for i in 0..n {
        for j in 0..n {
            for (a, gname) in base.hom_names(0, 0).iter().enumerate() {
                names[idx(i, j, a)] =
                    if gname == "1" { format!("E{}{}", i + 1, j + 1) } else { format!("E{}{}{}", i + 1, j + 1, gname) };
            }
        }
    }
    let rank = group.rank();
    let mut table = vec![vec![group.zero(); rank]; rank];
    for i in 0..n {
        for j in 0..n {
            for l in 0..n {
                for a in 0..k {
                    for b in 0..k {
                        let x = Morph { dom: 0, cod: 0, elem: g.basis(a) };
                        let y = Morph { dom: 0, cod: 0, elem: g.basis(b) };
                        let c = base.compose(&x, &y);
                        let v = &mut table[idx(i, j, a)][idx(j, l, b)];
                        v[idx(i, l, 0)..idx(i, l, 0) + k].copy_from_slice(&c.elem);
                    }
                }
            }
        }
    }
    let mut identity = group.zero();
    let one = base.identity(0).elem;
    for i in 0..n {
        identity[idx(i, i, 0)..idx(i, i, 0) + k].copy_from_slice(&one);
    }
    one_object(format!("M{n}({})", base.name()), group, names, table, identity)
}

/// An arrow of a quiver.
#[derive(Clone, Debug)]
pub struct Arrow {
    pub name: String,
    pub src: usize,
    pub dst: usize,
}

/// The path category of a quiver over `F_p`, modulo all paths longer than
/// `max_len` and the ideal generated by `relations` (linear combinations of
/// paths, each a list of arrow indices in the order they are traversed).
pub fn quiver(
    name: &str,
    p: u64,
    objects: &[&str],
    arrows: &[Arrow],
    relations: &[Vec<(u64, Vec<usize>)>],
    max_len: usize,
) -> Result<Ringoid> {
    let n = objects.len();
    // All paths of length <= max_len, grouped by (src, dst).
    let mut paths: Vec<Vec<Vec<usize>>> = vec![Vec::new(); n * n];
    let mut layer: Vec<(usize, usize, Vec<usize>)> = (0..n).map(|v| (v, v, Vec::new())).collect();
    for _ in 0..=max_len {
        let mut next = Vec::new();
        for (s, t, path) in layer {
            for (ai, a) in arrows.iter().enumerate() {
                if a.src == t {
                    let mut ext = path.clone();
                    ext.push(ai);
                    next.push((s, a.dst, ext));
                }
            }
            paths[s * n + t].push(path);
        }
        layer = next;
        if paths.iter().map(Vec::len).sum::<usize>() > 1 << 16 {
            return Err(Error::SizeBound { total: 1 << 16, limit: 1 << 16 });
        }
    }
    let endpoints = |path: &[usize], start: usize| -> (usize, usize) {
        (start, path.last().map_or(start, |&a| arrows[a].dst))
    };
    let space = |s: usize, t: usize| FinAbGroup::new(vec![p; paths[s * n + t].len()]);
    let coord = |s: usize, t: usize, path: &[usize]| -> Option<usize> { paths[s * n + t].iter().position(|q| q == path) };
    // The ideal: relations closed under pre- and postcomposition with paths.
    let mut ideal: Vec<Subgroup> = (0..n * n).map(|i| Subgroup::zero(&space(i / n, i % n))).collect();
    for rel in relations {
        let Some((_, first)) = rel.first() else { continue };
        let start = first.first().map(|&a| arrows[a].src).ok_or_else(|| Error::InvalidSpec("relations must be nonempty paths".into()))?;
        let (s, t) = endpoints(first, start);
        for (_, path) in rel {
            if path.first().map(|&a| arrows[a].src) != Some(s) || endpoints(path, s).1 != t {
                return Err(Error::InvalidSpec("relation terms have different endpoints".into()));
            }
            if path.windows(2).any(|w| arrows[w[0]].dst != arrows[w[1]].src) {
                return Err(Error::InvalidSpec("relation term is not a path".into()));
            }
        }
        for (u, left) in (0..n).flat_map(|u| paths[u * n + s].iter().map(move |l| (u, l))) {
            for (w, right) in (0..n).flat_map(|w| paths[t * n + w].iter().map(move |r| (w, r))) {
                let g = space(u, w);
                let mut v = g.zero();
                for (c, path) in rel {
                    let full: Vec<usize> = left.iter().chain(path).chain(right).copied().collect();
                    if let Some(i) = coord(u, w, &full) {
                        v[i] = (v[i] + c % p) % p;
                    }
                }
                ideal[u * n + w].insert(v);
            }
        }
    }
    // A basis of each quotient chosen greedily among paths.
    let mut homs = Vec::with_capacity(n * n);
    let mut bases: Vec<Vec<usize>> = Vec::with_capacity(n * n);
    let mut solvers: Vec<LinearSystem> = Vec::with_capacity(n * n);
    for i in 0..n * n {
        let (s, t) = (i / n, i % n);
        let g = space(s, t);
        let mut span = ideal[i].clone();
        let mut keep = Vec::new();
        for (k, _) in paths[i].iter().enumerate() {
            let e = g.basis(k);
            if !span.contains(&e) {
                span.insert(e);
                keep.push(k);
            }
        }
        let names = keep
            .iter()
            .map(|&k| {
                let path = &paths[i][k];
                if path.is_empty() {
                    format!("id{}", objects[s])
                } else {
                    path.iter().rev().map(|&a| arrows[a].name.as_str()).collect::<Vec<_>>().join("_")
                }
            })
            .collect();
        let gens: Vec<Elem> = keep.iter().map(|&k| g.basis(k)).collect();
        solvers.push(LinearSystem::new(&g, &gens, Some(&ideal[i])));
        homs.push(HomGroup { group: FinAbGroup::new(vec![p; keep.len()]), names });
        bases.push(keep);
    }
    let to_coords = |s: usize, t: usize, path: &[usize]| -> Elem {
        let i = s * n + t;
        let g = space(s, t);
        let mut v = g.zero();
        if let Some(k) = coord(s, t, path) {
            v[k] = 1 % p;
        }
        solvers[i].solve(&v).expect("paths span the quotient").iter().map(|&c| c % p).collect()
    };
    let mut consts = Vec::with_capacity(n * n * n);
    for s in 0..n {
        for q in 0..n {
            for t in 0..n {
                let table = bases[q * n + t]
                    .iter()
                    .map(|&a| {
                        bases[s * n + q]
                            .iter()
                            .map(|&b| {
                                let full: Vec<usize> =
                                    paths[s * n + q][b].iter().chain(&paths[q * n + t][a]).copied().collect();
                                to_coords(s, t, &full)
                            })
                            .collect()
                    })
                    .collect();
                consts.push(table);
            }
        }
    }
    let identities = (0..n).map(|s| to_coords(s, s, &[])).collect();
    Ringoid::from_parts(RingoidParts {
        name: name.to_string(),
        objects: objects.iter().map(|s| s.to_string()).collect(),
        homs,
        consts,
        identities,
    })
}

/// The `A_2` quiver `P --r--> Q` over `F_p`.
pub fn a2(p: u64) -> Ringoid {
    quiver(&format!("A2(F{p})"), p, &["P", "Q"], &[Arrow { name: "r".into(), src: 0, dst: 1 }], &[], 1)
        .expect("A2 is a ringoid")
}

pub const RING_NAMES: &[&str] = &["z4", "z6", "f2e", "f3e", "z2xz2", "m2f2", "a2f2", "zero"];

/// A built-in ring or ringoid by name; `zN` for any `N >= 1` is also accepted.
pub fn ring(name: &str) -> Result<Ringoid> {
    let r = match name {
        "f2e" => poly_quotient(2, &[0, 0, 1], "e")?.with_name("f2e"),
        "f3e" => poly_quotient(3, &[0, 0, 1], "e")?.with_name("f3e"),
        "z2xz2" => product(&[zmod(2), zmod(2)])?.with_name("z2xz2"),
        "m2f2" => matrix_ring(&zmod(2), 2)?.with_name("m2f2"),
        "a2f2" => a2(2).with_name("a2f2"),
        "zero" => zero_ring().with_name("zero"),
        _ => match name.strip_prefix('z').and_then(|n| n.parse::<u64>().ok()) {
            Some(n) if n >= 1 => zmod(n).with_name(name),
            _ => return Err(Error::UnknownName(name.to_string())),
        },
    };
    Ok(r)
}

/// `R / xR` for a one-object ring, as a right module (cyclic, generated by 1).
pub fn cyclic_quotient(acting: &Arc<Ringoid>, side: Side, x: &Morph) -> Result<Module> {
    let (m, _) = Module::finitely_presented(acting, side, &[x.cod], &[x.dom], &[vec![x.clone()]])?;
    Ok(m)
}

/// The simple module `S_1 = R/εR` over `F_p[ε]` and friends: the quotient of
/// the regular module by its radical generator named `gen`.
pub fn quotient_by_named(acting: &Arc<Ringoid>, side: Side, gen: &str) -> Result<Module> {
    let names = acting.hom_names(0, 0);
    let i = names.iter().position(|n| n == gen).ok_or_else(|| Error::UnknownName(gen.to_string()))?;
    let x = Morph { dom: 0, cod: 0, elem: acting.hom(0, 0).basis(i) };
    cyclic_quotient(acting, side, &x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ringoid::VnrDecision;

    #[test]
    fn builtins_validate() {
        for name in RING_NAMES {
            let r = ring(name).unwrap();
            assert_eq!(r.opposite().opposite(), r, "{name}");
        }
        assert_eq!(ring("z4").unwrap().total_size(), 4);
        assert_eq!(ring("m2f2").unwrap().total_size(), 16);
        let a2 = ring("a2f2").unwrap();
        assert_eq!(a2.hom(0, 1).order(), 2);
        assert_eq!(a2.hom(1, 0).order(), 1);
        assert_eq!(a2.opposite().hom(1, 0).order(), 2);
        assert_eq!(a2.hom_names(0, 1), ["r"]);
    }

    #[test]
    fn z2xz2_is_in_invariant_form() {
        let r = ring("z2xz2").unwrap();
        assert_eq!(r.hom(0, 0).moduli(), [2, 2]);
        assert_eq!(r.hom_names(0, 0), ["e0", "e1"]);
    }

    #[test]
    fn mixed_product_is_normalized() {
        let r = product(&[zmod(2), zmod(3)]).unwrap();
        assert_eq!(r.hom(0, 0).moduli(), [6]);
        assert!(r.is_von_neumann_regular().is_regular());
    }

    #[test]
    fn vnr_examples() {
        match zmod(6).is_von_neumann_regular() {
            VnrDecision::Regular(w) => {
                let (_, s) = w.iter().find(|(r, _)| r.elem == vec![2]).unwrap();
                assert_eq!(s.elem, vec![2]);
            }
            other => panic!("{other:?}"),
        }
        assert_eq!(zmod(4).is_von_neumann_regular(), VnrDecision::NotRegular(Morph { dom: 0, cod: 0, elem: vec![2] }));
        assert!(zero_ring().is_von_neumann_regular().is_regular());
        assert!(ring("m2f2").unwrap().is_von_neumann_regular().is_regular());
        assert!(!ring("f2e").unwrap().is_von_neumann_regular().is_regular());
    }

    #[test]
    fn quiver_with_zero_relation() {
        // P -a-> Q -b-> S with b∘a = 0.
        let arrows = [Arrow { name: "a".into(), src: 0, dst: 1 }, Arrow { name: "b".into(), src: 1, dst: 2 }];
        let r = quiver("A3", 2, &["P", "Q", "S"], &arrows, &[vec![(1, vec![0, 1])]], 2).unwrap();
        assert_eq!(r.hom(0, 2).order(), 1);
        let plain = quiver("A3", 2, &["P", "Q", "S"], &arrows, &[], 2).unwrap();
        assert_eq!(plain.hom(0, 2).order(), 2);
        assert_eq!(plain.hom_names(0, 2), ["b_a"]);
    }
}
