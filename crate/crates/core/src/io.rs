//! Input documents and named fixtures: ringoids and modules from JSON text
//! or from built-in names.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fixtures;
use crate::group::{FinAbGroup, GroupHom};
use crate::module::{acting_ringoid, Module, Side};
use crate::pp::dsl;
use crate::ringoid::{Ringoid, RingoidSpec};

/// A ringoid given by name or inline.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum RingoidRef {
    Named(String),
    Inline(Box<RingoidSpec>),
}

impl RingoidRef {
    pub fn resolve(&self) -> Result<Arc<Ringoid>> {
        match self {
            RingoidRef::Named(name) => Ok(Arc::new(fixtures::ring(name)?)),
            RingoidRef::Inline(spec) => Ok(Arc::new(spec.build()?)),
        }
    }
}

/// The action of one generator of `hom(dom, cod)`, as the images of the
/// basis elements of the source fiber (`M(cod)` for right modules, `M(dom)`
/// for left ones).
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ActionSpec {
    pub dom: String,
    pub cod: String,
    pub generator: usize,
    pub images: Vec<Vec<u64>>,
}

/// JSON-compatible module document. Either `fibers` with `actions`, or a
/// `presentation`: a quantifier-free formula whose free variables are the
/// generators and whose equations are the relations.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModuleSpec {
    pub ringoid: RingoidRef,
    #[serde(default = "right")]
    pub side: Side,
    /// Invariant factors of each fiber; missing objects get the zero group.
    #[serde(default)]
    pub fibers: Option<BTreeMap<String, Vec<u64>>>,
    #[serde(default)]
    pub actions: Vec<ActionSpec>,
    #[serde(default)]
    pub presentation: Option<String>,
}

fn right() -> Side {
    Side::Right
}

impl ModuleSpec {
    pub fn build(&self) -> Result<Module> {
        let ring = self.ringoid.resolve()?;
        self.build_over(&ring)
    }

    pub fn build_over(&self, ring: &Arc<Ringoid>) -> Result<Module> {
        match (&self.presentation, &self.fibers) {
            (Some(src), None) => {
                let acting = acting_ringoid(ring, self.side);
                let phi = dsl::parse(src, &acting, self.side)?;
                if !phi.is_quantifier_free() {
                    return Err(Error::InvalidSpec("a presentation may not quantify".into()));
                }
                let (m, _) = Module::finitely_presented(&acting, self.side, phi.free_sorts(), phi.relation_sorts(), phi.columns())?;
                Ok(m)
            }
            (None, Some(fibers)) => self.build_tables(ring, fibers),
            _ => Err(Error::InvalidSpec("give exactly one of `fibers` and `presentation`".into())),
        }
    }

    fn build_tables(&self, ring: &Arc<Ringoid>, fibers: &BTreeMap<String, Vec<u64>>) -> Result<Module> {
        let n = ring.num_objects();
        let obj = |name: &str| ring.object_id(name).ok_or_else(|| Error::UnknownName(name.to_string()));
        let mut groups = vec![FinAbGroup::trivial(); n];
        for (name, orders) in fibers {
            if orders.iter().any(|&d| d < 2) {
                return Err(Error::InvalidSpec(format!("fiber {name} has an invariant factor below 2")));
            }
            groups[obj(name)?] = FinAbGroup::new(orders.clone());
        }
        // Source and target fibers of the action of a morphism p -> q.
        let ends = |p: usize, q: usize| match self.side {
            Side::Right => (q, p),
            Side::Left => (p, q),
        };
        let mut actions: Vec<Vec<Option<GroupHom>>> =
            (0..n * n).map(|i| vec![None; ring.hom(i / n, i % n).rank()]).collect();
        for a in &self.actions {
            let (p, q) = (obj(&a.dom)?, obj(&a.cod)?);
            let (s, t) = ends(p, q);
            let slot = actions[p * n + q]
                .get_mut(a.generator)
                .ok_or_else(|| Error::InvalidSpec(format!("hom({}, {}) has no generator {}", a.dom, a.cod, a.generator)))?;
            let h = GroupHom::new(groups[s].clone(), groups[t].clone(), a.images.clone()).ok_or_else(|| {
                Error::InvalidSpec(format!("action of generator {} of hom({}, {}) is not a homomorphism", a.generator, a.dom, a.cod))
            })?;
            *slot = Some(h);
        }
        let mut tables = Vec::with_capacity(n * n);
        for (i, row) in actions.into_iter().enumerate() {
            let (p, q) = (i / n, i % n);
            let (s, t) = ends(p, q);
            let mut maps = Vec::new();
            for (k, h) in row.into_iter().enumerate() {
                match h {
                    Some(h) => maps.push(h),
                    None if groups[s].order() == 1 || groups[t].order() == 1 => {
                        maps.push(GroupHom::zero(&groups[s], &groups[t]));
                    }
                    None => {
                        return Err(Error::InvalidSpec(format!(
                            "missing action of generator {k} of hom({}, {})",
                            ring.object_name(p),
                            ring.object_name(q)
                        )))
                    }
                }
            }
            tables.push(maps);
        }
        Module::build(ring, self.side, groups, tables)
    }
}

/// Names accepted by [`builtin_module`].
pub const MODULE_NAMES: &[&str] = &["regular", "zero", "z2-over-z4", "r-plus-s1", "s1", "zK (R/kR)", "rep:P"];

/// A module over `ring` by name: `regular` (the sum of all representables),
/// `zero`, `rep:P`, `zK` for `R/kR`, `z2-over-z4`, and `s1`/`r-plus-s1` for
/// `R/eR` and `R ⊕ R/eR` over a ring with a generator named `e`.
pub fn builtin_module(name: &str, ring: &Arc<Ringoid>, side: Side) -> Result<Module> {
    let acting = acting_ringoid(ring, side);
    let regular = || {
        let parts: Vec<Module> = (0..acting.num_objects()).map(|p| Module::representable(&acting, side, p)).collect();
        Module::direct_sum_of(&parts, &acting, side)
    };
    match name {
        "regular" => regular(),
        "zero" => Ok(Module::zero(&acting, side)),
        "z2-over-z4" => {
            if !acting.is_one_object() || acting.hom(0, 0).order() != 4 || acting.hom(0, 0).rank() != 1 {
                return Err(Error::InvalidSpec("z2-over-z4 needs the ring z4".into()));
            }
            fixtures::cyclic_quotient(&acting, side, &acting.scale(2, &acting.identity(0)))
        }
        "s1" => fixtures::quotient_by_named(&acting, side, "e"),
        "r-plus-s1" => regular()?.direct_sum(&fixtures::quotient_by_named(&acting, side, "e")?),
        _ => {
            if let Some(obj) = name.strip_prefix("rep:") {
                let p = acting.object_id(obj).ok_or_else(|| Error::UnknownName(obj.to_string()))?;
                return Ok(Module::representable(&acting, side, p));
            }
            match name.strip_prefix('z').and_then(|k| k.parse::<i128>().ok()) {
                Some(k) if acting.is_one_object() => fixtures::cyclic_quotient(&acting, side, &acting.scale(k, &acting.identity(0))),
                _ => Err(Error::UnknownName(name.to_string())),
            }
        }
    }
}

/// Parses a document that is either a ringoid or a module and validates it.
pub enum Document {
    Ringoid(Ringoid),
    Module(Module),
}

pub fn parse_document(text: &str) -> Result<Document> {
    let value: serde_json::Value =
        serde_json::from_str(text).map_err(|e| Error::Parse { line: e.line(), col: e.column(), msg: e.to_string() })?;
    let shape = |e: serde_json::Error| Error::InvalidSpec(e.to_string());
    if value.get("objects").is_some() {
        let spec: RingoidSpec = serde_json::from_value(value).map_err(shape)?;
        Ok(Document::Ringoid(spec.build()?))
    } else {
        let spec: ModuleSpec = serde_json::from_value(value).map_err(shape)?;
        Ok(Document::Module(spec.build()?))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn module_from_tables() {
        let doc = r#"{"ringoid": "z4", "fibers": {"*": [2]}, "actions": [{"dom": "*", "cod": "*", "generator": 0, "images": [[1]]}]}"#;
        let Document::Module(m) = parse_document(doc).unwrap() else { panic!("expected a module") };
        assert_eq!(m.order(), 2);
    }

    #[test]
    fn module_from_presentation() {
        let doc = r#"{"ringoid": "f2e", "presentation": "[x1, x2] x2*e = 0"}"#;
        let Document::Module(m) = parse_document(doc).unwrap() else { panic!("expected a module") };
        assert_eq!(m.order(), 8);
    }

    #[test]
    fn broken_ringoid_names_the_axiom() {
        // hom(R, R) = Z/4 with identity 2: the identity axiom fails.
        let doc = r#"{"name": "bad", "objects": ["R"], "homs": [{"dom": "R", "cod": "R", "orders": [4]}],
            "compose": [{"dom": "R", "mid": "R", "cod": "R", "outer": 0, "inner": 0, "value": [1]}],
            "identities": {"R": [2]}}"#;
        let err = parse_document(doc).err().unwrap();
        assert!(matches!(err, Error::AxiomViolation { .. }), "{err}");
    }

    #[test]
    fn builtins() {
        let z4 = Arc::new(fixtures::zmod(4));
        assert_eq!(builtin_module("z2", &z4, Side::Right).unwrap().order(), 2);
        assert_eq!(builtin_module("z2-over-z4", &z4, Side::Right).unwrap().order(), 2);
        let f2e = Arc::new(fixtures::ring("f2e").unwrap());
        assert_eq!(builtin_module("r-plus-s1", &f2e, Side::Right).unwrap().order(), 8);
        let a2 = Arc::new(fixtures::a2(2));
        assert_eq!(builtin_module("regular", &a2, Side::Right).unwrap().order(), 8);
    }
}
