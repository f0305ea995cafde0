//! A one-line syntax for pp formulas.
//!
//! ```text
//! [x1:P, x2:Q] E y1:Q, y2:Q . x1*r + y1*s = 0 ; y2*t = 0
//! ```
//!
//! The bracketed header fixes the free variables and their order; without it
//! the free variables are the undeclared ones in natural name order. `E`
//! introduces bound variables. Atoms are `lhs = rhs`, separated by `;`, and
//! `true` is the empty conjunction. Right formulas write `var*morph`, left
//! formulas `morph*var`. A morphism is an integer (a multiple of the
//! identity), a generator name, or a parenthesized combination such as
//! `(1 + e)` or `(2*e + 1)`. Sorts may be omitted when they can be inferred.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::module::Side;
use crate::pp::PpFormula;
use crate::ringoid::{Morph, ObjId, Ringoid};

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Ident(String),
    Int(u64),
    Sym(char),
}

#[derive(Clone, Debug)]
struct Token {
    tok: Tok,
    line: usize,
    col: usize,
}

fn lex(src: &str) -> Result<Vec<Token>> {
    let mut out = Vec::new();
    let mut chars = src.chars().peekable();
    let (mut line, mut col) = (1, 1);
    while let Some(&c) = chars.peek() {
        let (l0, c0) = (line, col);
        if c == '\n' {
            chars.next();
            line += 1;
            col = 1;
        } else if c.is_whitespace() {
            chars.next();
            col += 1;
        } else if c.is_ascii_digit() {
            let mut s = String::new();
            while let Some(&d) = chars.peek().filter(|d| d.is_ascii_digit()) {
                s.push(d);
                chars.next();
                col += 1;
            }
            let v = s.parse().map_err(|_| Error::Parse { line: l0, col: c0, msg: "integer too large".into() })?;
            out.push(Token { tok: Tok::Int(v), line: l0, col: c0 });
        } else if c.is_alphabetic() || c == '_' {
            let mut s = String::new();
            while let Some(&d) = chars.peek().filter(|d| d.is_alphanumeric() || **d == '_' || **d == '\'') {
                s.push(d);
                chars.next();
                col += 1;
            }
            out.push(Token { tok: Tok::Ident(s), line: l0, col: c0 });
        } else if "[]:,.*+-=;()".contains(c) {
            chars.next();
            col += 1;
            out.push(Token { tok: Tok::Sym(c), line: l0, col: c0 });
        } else {
            return Err(Error::Parse { line: l0, col: c0, msg: format!("unexpected character `{c}`") });
        }
    }
    Ok(out)
}

/// A morphism as written: a combination of integers and generator names.
#[derive(Clone, Debug)]
struct MorphExpr {
    terms: Vec<(i128, Option<String>)>,
    line: usize,
    col: usize,
}

#[derive(Clone, Debug)]
struct Term {
    coef: i128,
    var: Option<String>,
    // In application order: the first factor acts first.
    factors: Vec<MorphExpr>,
    line: usize,
    col: usize,
}

struct Parser<'a> {
    toks: Vec<Token>,
    pos: usize,
    side: Side,
    acting: &'a Ringoid,
    end: (usize, usize),
}

struct Decl {
    name: String,
    sort: Option<ObjId>,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.tok)
    }

    fn here(&self) -> (usize, usize) {
        self.toks.get(self.pos).map_or(self.end, |t| (t.line, t.col))
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        let (line, col) = self.here();
        Err(Error::Parse { line, col, msg: msg.into() })
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Sym(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            self.err(format!("expected `{c}`"))
        }
    }

    fn ident(&mut self) -> Result<String> {
        match self.peek() {
            Some(Tok::Ident(s)) => {
                let s = s.clone();
                self.pos += 1;
                Ok(s)
            }
            _ => self.err("expected a name"),
        }
    }

    fn decls(&mut self, close: char) -> Result<Vec<Decl>> {
        let mut out = Vec::new();
        if self.peek() == Some(&Tok::Sym(close)) {
            return Ok(out);
        }
        loop {
            let name = self.ident()?;
            let sort = if self.eat(':') {
                let (line, col) = self.here();
                let s = self.ident()?;
                Some(self.acting.object_id(&s).ok_or(Error::Parse { line, col, msg: format!("unknown object `{s}`") })?)
            } else {
                None
            };
            out.push(Decl { name, sort });
            if !self.eat(',') {
                return Ok(out);
            }
        }
    }

    fn is_morph_name(&self, s: &str) -> bool {
        let n = self.acting.num_objects();
        (0..n * n).any(|i| self.acting.hom_names(i / n, i % n).iter().any(|m| m == s))
    }

    fn morph_sum(&mut self) -> Result<MorphExpr> {
        let (line, col) = self.here();
        let mut terms = Vec::new();
        let mut sign = if self.eat('-') { -1 } else { 1 };
        loop {
            let term = match self.peek().cloned() {
                Some(Tok::Int(k)) => {
                    self.pos += 1;
                    if self.eat('*') {
                        (sign * k as i128, Some(self.ident()?))
                    } else {
                        (sign * k as i128, None)
                    }
                }
                Some(Tok::Ident(s)) => {
                    self.pos += 1;
                    (sign, Some(s))
                }
                _ => return self.err("expected a morphism"),
            };
            terms.push(term);
            if self.eat('+') {
                sign = 1;
            } else if self.eat('-') {
                sign = -1;
            } else {
                return Ok(MorphExpr { terms, line, col });
            }
        }
    }

    fn term(&mut self, vars: &BTreeMap<String, ()>, sign: i128) -> Result<Term> {
        let (line, col) = self.here();
        let mut var: Option<String> = None;
        let mut var_at = 0;
        let mut factors: Vec<MorphExpr> = Vec::new();
        let mut coef = sign;
        loop {
            let (fl, fc) = self.here();
            match self.peek().cloned() {
                Some(Tok::Int(k)) => {
                    self.pos += 1;
                    coef *= k as i128;
                }
                Some(Tok::Sym('(')) => {
                    self.pos += 1;
                    factors.push(self.morph_sum()?);
                    self.expect(')')?;
                }
                Some(Tok::Ident(s)) => {
                    self.pos += 1;
                    if vars.contains_key(&s) || !self.is_morph_name(&s) {
                        if var.is_some() {
                            return Err(Error::Parse { line: fl, col: fc, msg: "a term has at most one variable".into() });
                        }
                        var = Some(s);
                        var_at = factors.len();
                    } else {
                        factors.push(MorphExpr { terms: vec![(1, Some(s))], line: fl, col: fc });
                    }
                }
                _ => return self.err("expected a variable, morphism or integer"),
            }
            if !self.eat('*') {
                break;
            }
        }
        if var.is_none() {
            if coef != 0 || !factors.is_empty() {
                return Err(Error::Parse { line, col, msg: "a term without a variable must be 0".into() });
            }
            return Ok(Term { coef: 0, var, factors, line, col });
        }
        match self.side {
            Side::Right if var_at != 0 => {
                return Err(Error::Parse { line, col, msg: "right formulas write `var*morph`".into() });
            }
            Side::Left if var_at != factors.len() => {
                return Err(Error::Parse { line, col, msg: "left formulas write `morph*var`".into() });
            }
            Side::Left => factors.reverse(),
            Side::Right => {}
        }
        Ok(Term { coef, var, factors, line, col })
    }

    fn side_sum(&mut self, vars: &BTreeMap<String, ()>, out: &mut Vec<Term>, flip: i128) -> Result<()> {
        let mut sign = if self.eat('-') { -1 } else { 1 };
        loop {
            out.push(self.term(vars, sign * flip)?);
            if self.eat('+') {
                sign = 1;
            } else if self.eat('-') {
                sign = -1;
            } else {
                return Ok(());
            }
        }
    }
}

fn natural_key(s: &str) -> (String, u64, String) {
    let split = s.find(|c: char| c.is_ascii_digit()).unwrap_or(s.len());
    let (head, tail) = s.split_at(split);
    let digits: String = tail.chars().take_while(|c| c.is_ascii_digit()).collect();
    let rest = tail[digits.len()..].to_string();
    (head.to_string(), digits.parse().unwrap_or(0), rest)
}

/// Parses a formula over `acting` (the ringoid acting on the right; the
/// opposite of the module ringoid for left formulas).
pub fn parse(src: &str, acting: &Arc<Ringoid>, side: Side) -> Result<PpFormula> {
    let toks = lex(src)?;
    let end = src.lines().enumerate().last().map_or((1, 1), |(i, l)| (i + 1, l.chars().count() + 1));
    let mut p = Parser { toks, pos: 0, side, acting, end };
    let header = if p.eat('[') {
        let d = p.decls(']')?;
        p.expect(']')?;
        Some(d)
    } else {
        None
    };
    let bound = if p.peek() == Some(&Tok::Ident("E".into())) {
        p.pos += 1;
        let d = p.decls('.')?;
        p.expect('.')?;
        d
    } else {
        Vec::new()
    };
    let mut declared: BTreeMap<String, ()> = BTreeMap::new();
    for d in header.iter().flatten().chain(&bound) {
        if declared.insert(d.name.clone(), ()).is_some() {
            return p.err(format!("variable `{}` declared twice", d.name));
        }
    }
    let mut atoms: Vec<Vec<Term>> = Vec::new();
    if p.peek() == Some(&Tok::Ident("true".into())) {
        p.pos += 1;
    } else {
        loop {
            let mut terms = Vec::new();
            p.side_sum(&declared, &mut terms, 1)?;
            p.expect('=')?;
            p.side_sum(&declared, &mut terms, -1)?;
            atoms.push(terms);
            if !p.eat(';') || p.peek().is_none() {
                break;
            }
        }
    }
    if p.peek().is_some() {
        return p.err("unexpected input after the formula");
    }
    // Variable order: header (or undeclared names), then bound.
    let free_decls: Vec<Decl> = match header {
        Some(h) => h,
        None => {
            let bound_names: Vec<&str> = bound.iter().map(|d| d.name.as_str()).collect();
            let mut names: Vec<String> = atoms
                .iter()
                .flatten()
                .filter_map(|t| t.var.clone())
                .filter(|v| !bound_names.contains(&v.as_str()))
                .collect();
            names.sort_by_key(|s| natural_key(s));
            names.dedup();
            if names.is_empty() && acting.is_one_object() {
                names.push("x".into());
            }
            names.into_iter().map(|name| Decl { name, sort: None }).collect()
        }
    };
    if free_decls.is_empty() {
        return Err(Error::Parse { line: 1, col: 1, msg: "a formula needs at least one free variable".into() });
    }
    let nf = free_decls.len();
    let vars: Vec<Decl> = free_decls.into_iter().chain(bound).collect();
    let index: BTreeMap<&str, usize> = vars.iter().enumerate().map(|(i, d)| (d.name.as_str(), i)).collect();
    for t in atoms.iter().flatten() {
        if let Some(v) = &t.var {
            if !index.contains_key(v.as_str()) {
                return Err(Error::Parse { line: t.line, col: t.col, msg: format!("variable `{v}` is not declared") });
            }
        }
    }
    let resolved = Resolver { acting }.resolve(&vars, &index, &atoms)?;
    let (sorts, col_sorts, named) = resolved;
    let mut columns = Vec::with_capacity(atoms.len());
    for (j, atom) in atoms.iter().enumerate() {
        let cs = col_sorts[j];
        let mut col: Vec<Morph> = sorts.iter().map(|&s| acting.zero(cs, s)).collect();
        for (k, t) in atom.iter().enumerate() {
            let Some(v) = &t.var else { continue };
            let i = index[v.as_str()];
            // x·f1·f2 = x·(f1 ∘ f2)
            let mut m = acting.identity(sorts[i]);
            for f in &named[j][k] {
                m = acting.compose(&m, f);
            }
            col[i] = acting.add(&col[i], &acting.scale(t.coef, &m));
        }
        columns.push(col);
    }
    let free = sorts[..nf].to_vec();
    let bound = sorts[nf..].to_vec();
    PpFormula::new(acting, side, free, bound, col_sorts, columns)
}

struct Resolver<'a> {
    acting: &'a Ringoid,
}

type Resolved = (Vec<ObjId>, Vec<ObjId>, Vec<Vec<Vec<Morph>>>);

impl Resolver<'_> {
    fn lookup(&self, name: &str, line: usize, col: usize) -> Result<(ObjId, ObjId, usize)> {
        let r = self.acting;
        let n = r.num_objects();
        let hits: Vec<(ObjId, ObjId, usize)> = (0..n * n)
            .flat_map(|i| {
                r.hom_names(i / n, i % n).iter().enumerate().filter(|(_, m)| *m == name).map(move |(k, _)| (i / n, i % n, k))
            })
            .collect();
        match hits.as_slice() {
            [one] => Ok(*one),
            [] => Err(Error::Parse { line, col, msg: format!("unknown morphism `{name}`") }),
            _ => Err(Error::Parse { line, col, msg: format!("morphism name `{name}` is ambiguous") }),
        }
    }

    /// The (dom, cod) fixed by the names in a factor, if any.
    fn factor_sorts(&self, f: &MorphExpr) -> Result<Option<(ObjId, ObjId)>> {
        let mut found = None;
        for (_, name) in &f.terms {
            if let Some(name) = name {
                let (d, c, _) = self.lookup(name, f.line, f.col)?;
                match found {
                    None => found = Some((d, c)),
                    Some(dc) if dc != (d, c) => {
                        return Err(Error::Parse { line: f.line, col: f.col, msg: "terms of a sum have different sorts".into() })
                    }
                    _ => {}
                }
            }
        }
        Ok(found)
    }

    fn build(&self, f: &MorphExpr, sort: Option<(ObjId, ObjId)>, at: ObjId) -> Result<Morph> {
        let r = self.acting;
        let (d, c) = sort.unwrap_or((at, at));
        let mut m = r.zero(d, c);
        for (k, name) in &f.terms {
            let part = match name {
                Some(name) => {
                    let (_, _, i) = self.lookup(name, f.line, f.col)?;
                    Morph { dom: d, cod: c, elem: r.hom(d, c).basis(i) }
                }
                None if d == c => r.identity(d),
                None => {
                    return Err(Error::Parse { line: f.line, col: f.col, msg: "an integer needs matching sorts".into() })
                }
            };
            m = r.add(&m, &r.scale(*k, &part));
        }
        Ok(m)
    }

    fn resolve(&self, vars: &[Decl], index: &BTreeMap<&str, usize>, atoms: &[Vec<Term>]) -> Result<Resolved> {
        let mut sorts: Vec<Option<ObjId>> = vars.iter().map(|d| d.sort).collect();
        let mut col_sorts: Vec<Option<ObjId>> = vec![None; atoms.len()];
        let mut fsorts: Vec<Vec<Vec<Option<(ObjId, ObjId)>>>> = Vec::with_capacity(atoms.len());
        for atom in atoms {
            let mut per_atom = Vec::with_capacity(atom.len());
            for t in atom {
                let fs = t.factors.iter().map(|f| self.factor_sorts(f)).collect::<Result<Vec<_>>>()?;
                let named: Vec<(ObjId, ObjId)> = fs.iter().flatten().copied().collect();
                // Consecutive named factors must compose: x·f·g needs f.dom = g.cod.
                if named.windows(2).any(|w| w[0].0 != w[1].1) {
                    return Err(Error::Parse { line: t.line, col: t.col, msg: "factors do not compose".into() });
                }
                per_atom.push(fs);
            }
            fsorts.push(per_atom);
        }
        let set = |slot: &mut Option<ObjId>, v: ObjId, t: &Term| -> Result<bool> {
            match *slot {
                None => {
                    *slot = Some(v);
                    Ok(true)
                }
                Some(s) if s == v => Ok(false),
                Some(_) => Err(Error::Parse { line: t.line, col: t.col, msg: "sort mismatch".into() }),
            }
        };
        loop {
            let mut changed = false;
            for (j, atom) in atoms.iter().enumerate() {
                for (k, t) in atom.iter().enumerate() {
                    let Some(v) = &t.var else { continue };
                    let i = index[v.as_str()];
                    let named: Vec<(ObjId, ObjId)> = fsorts[j][k].iter().flatten().copied().collect();
                    match (named.first(), named.last()) {
                        (Some(&(_, cod)), Some(&(dom, _))) => {
                            changed |= set(&mut sorts[i], cod, t)?;
                            changed |= set(&mut col_sorts[j], dom, t)?;
                        }
                        _ => {
                            if let Some(s) = sorts[i] {
                                changed |= set(&mut col_sorts[j], s, t)?;
                            }
                            if let Some(s) = col_sorts[j] {
                                changed |= set(&mut sorts[i], s, t)?;
                            }
                        }
                    }
                }
            }
            if !changed {
                break;
            }
        }
        let single = self.acting.is_one_object();
        let sorts: Vec<ObjId> = sorts
            .iter()
            .zip(vars)
            .map(|(s, d)| match s {
                Some(s) => Ok(*s),
                None if single => Ok(0),
                None => Err(Error::Parse { line: 1, col: 1, msg: format!("cannot infer the sort of `{}`; declare it", d.name) }),
            })
            .collect::<Result<_>>()?;
        let col_sorts: Vec<ObjId> = col_sorts
            .iter()
            .enumerate()
            .map(|(j, s)| match s {
                Some(s) => Ok(*s),
                None if single => Ok(0),
                None if atoms[j].iter().all(|t| t.var.is_none()) => Ok(0),
                None => Err(Error::Parse { line: 1, col: 1, msg: format!("cannot infer the sort of equation {}", j + 1) }),
            })
            .collect::<Result<_>>()?;
        let mut named = Vec::with_capacity(atoms.len());
        for (j, atom) in atoms.iter().enumerate() {
            let mut per_atom = Vec::with_capacity(atom.len());
            for (k, t) in atom.iter().enumerate() {
                let mut at = match &t.var {
                    Some(v) => sorts[index[v.as_str()]],
                    None => col_sorts[j],
                };
                let mut ms = Vec::with_capacity(t.factors.len());
                for (f, fs) in t.factors.iter().zip(&fsorts[j][k]) {
                    let m = self.build(f, *fs, at)?;
                    at = m.dom;
                    ms.push(m);
                }
                if t.var.is_some() && at != col_sorts[j] {
                    return Err(Error::Parse { line: t.line, col: t.col, msg: "term sorts differ within an equation".into() });
                }
                per_atom.push(ms);
            }
            named.push(per_atom);
        }
        Ok((sorts, col_sorts, named))
    }
}

fn var_names(prefix: &str, k: usize) -> Vec<String> {
    if k == 1 {
        vec![prefix.to_string()]
    } else {
        (1..=k).map(|i| format!("{prefix}{i}")).collect()
    }
}

/// Renders a formula; the output parses back to an equivalent formula.
pub fn print(f: &PpFormula) -> String {
    let r = f.acting();
    let free = var_names("x", f.free_sorts().len());
    let bound = var_names("y", f.bound_sorts().len());
    let names: Vec<&String> = free.iter().chain(&bound).collect();
    let sorts = f.var_sorts();
    let multi = !r.is_one_object();
    let mut atoms = Vec::new();
    let mut used = vec![false; names.len()];
    for col in f.columns() {
        let terms: Vec<String> = col
            .iter()
            .enumerate()
            .filter(|(_, m)| !r.is_zero(m))
            .map(|(i, m)| {
                used[i] = true;
                let ms = r.format_morph(m);
                match (ms.as_str(), f.side()) {
                    ("1", _) => names[i].clone(),
                    (_, Side::Right) => format!("{}*{ms}", names[i]),
                    (_, Side::Left) => format!("{ms}*{}", names[i]),
                }
            })
            .collect();
        if !terms.is_empty() {
            atoms.push(format!("{} = 0", terms.join(" + ")));
        }
    }
    let decl = |name: &String, s: ObjId| if multi { format!("{name}:{}", r.object_name(s)) } else { name.clone() };
    let mut out = String::new();
    if multi || used[..free.len()].iter().any(|u| !u) {
        let ds: Vec<String> = free.iter().zip(f.free_sorts()).map(|(n, &s)| decl(n, s)).collect();
        out.push_str(&format!("[{}] ", ds.join(", ")));
    }
    if !bound.is_empty() {
        let ds: Vec<String> = bound.iter().zip(&sorts[free.len()..]).map(|(n, &s)| decl(n, s)).collect();
        out.push_str(&format!("E {} . ", ds.join(", ")));
    }
    if atoms.is_empty() {
        out.push_str("true");
    } else {
        out.push_str(&atoms.join(" ; "));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::module::{acting_ringoid, Module};

    #[test]
    fn parses_divisibility() {
        let r = Arc::new(fixtures::zmod(4));
        let f = parse("E y . x = y*2", &r, Side::Right).unwrap();
        let g = PpFormula::divisibility(&r, Side::Right, &r.scale(2, &r.identity(0))).unwrap();
        assert!(f.equivalent(&g).unwrap());
        let h = parse("E y . x + y*2 = 0", &r, Side::Right).unwrap();
        assert!(h.equivalent(&g).unwrap());
    }

    #[test]
    fn print_round_trip() {
        let r = Arc::new(fixtures::ring("f2e").unwrap());
        for src in ["E y . x = y*e", "x*e = 0", "true", "E y . x = x ; y*e = 0", "[x1, x2] x1*(1 + e) = x2", "x = 0", "E y1, y2 . x = y1*e + y2 ; y2*e = 0"] {
            let f = parse(src, &r, Side::Right).unwrap();
            let back = parse(&print(&f), &r, Side::Right).unwrap();
            assert!(f.equivalent(&back).unwrap(), "{src} -> {}", print(&f));
        }
    }

    #[test]
    fn multi_sorted_with_inference() {
        let a2 = Arc::new(fixtures::a2(2));
        let f = parse("E y . x = y*r", &a2, Side::Right).unwrap();
        assert_eq!(f.free_sorts(), [0]);
        assert_eq!(f.bound_sorts(), [1]);
        let printed = print(&f);
        assert_eq!(printed, "[x:P] E y:Q . x + y*r = 0");
        assert_eq!(parse(&printed, &a2, Side::Right).unwrap(), f);
        assert!(parse("x = y", &a2, Side::Right).is_err());
        assert!(parse("[x:P, y:P] x = y", &a2, Side::Right).is_ok());
    }

    #[test]
    fn left_formulas() {
        let r = Arc::new(fixtures::zmod(4));
        let op = acting_ringoid(&r, Side::Left);
        let f = parse("2*x = 0", &op, Side::Left).unwrap();
        assert_eq!(f.evaluate(&Module::representable(&op, Side::Left, 0)).unwrap().order(), 2);
        assert!(parse("x*2*x = 0", &op, Side::Left).is_err());
        let a2 = Arc::new(fixtures::a2(2));
        let op = acting_ringoid(&a2, Side::Left);
        let f = parse("E y . x = r*y", &op, Side::Left).unwrap();
        // r: P -> Q, so x has sort Q and y sort P.
        assert_eq!(f.free_sorts(), [1]);
        assert_eq!(f.bound_sorts(), [0]);
        assert!(parse("x*r = 0", &op, Side::Left).is_err());
    }

    #[test]
    fn errors_carry_positions() {
        let r = Arc::new(fixtures::zmod(4));
        match parse("E y . x = y*2 ;\n x = q*", &r, Side::Right) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("{other:?}"),
        }
        match parse("x # 2", &r, Side::Right) {
            Err(Error::Parse { line: 1, col: 3, .. }) => {}
            other => panic!("{other:?}"),
        }
    }
}
