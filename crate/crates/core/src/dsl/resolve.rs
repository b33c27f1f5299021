//! Turn parsed declarations into a validated [`Workspace`].

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::sync::Arc;

use super::syntax::{CatStmt, ConcreteStmt, Decl, DslError, ErrorClass, Name, Span};
use super::workspace::Workspace;
use crate::category::{validate_category, CategoryBuilder, FinCategory};
use crate::concrete::ConcreteCategory;
use crate::error::Error;
use crate::functor::{validate_functor, validate_nat, Functor, NatTrans};
use crate::signature::{RelationSymbol, Signature};

fn resolution(span: Span, msg: impl Into<String>) -> DslError {
    DslError::new(ErrorClass::Resolution, span, msg)
}

fn validation(span: Span, msg: impl Into<String>) -> DslError {
    DslError::new(ErrorClass::Validation, span, msg)
}

fn from_error(span: Span, e: Error) -> DslError {
    validation(span, e.to_string())
}

/// Name the builder gives the identity of `obj` when none is declared.
pub(crate) fn default_identity_name(obj: &str, taken: &HashSet<&str>) -> String {
    let mut name = format!("id_{obj}");
    while taken.contains(name.as_str()) {
        name.push('\'');
    }
    name
}

fn category(name: &Name, body: &[CatStmt]) -> Result<FinCategory, DslError> {
    let mut objects: Vec<&Name> = Vec::new();
    let mut seen_obj = HashSet::new();
    for st in body {
        if let CatStmt::Objects(os) = st {
            for o in os {
                if !seen_obj.insert(o.0.as_str()) {
                    return Err(resolution(o.1, format!("object `{}` declared twice", o.0)));
                }
                objects.push(o);
            }
        }
    }
    let obj = |n: &Name| -> Result<(), DslError> {
        if seen_obj.contains(n.0.as_str()) {
            Ok(())
        } else {
            Err(resolution(n.1, format!("unknown object `{}` in `{}`", n.0, name.0)))
        }
    };
    let mut mors: HashSet<&str> = HashSet::new();
    let mut with_identity = HashSet::new();
    let mut b = CategoryBuilder::new(&name.0);
    for o in &objects {
        b.object(&o.0);
    }
    for st in body {
        if let CatStmt::Hom { dom, cod, names } = st {
            obj(dom)?;
            obj(cod)?;
            for m in names {
                if !mors.insert(m.0.as_str()) {
                    return Err(resolution(m.1, format!("morphism `{}` declared twice", m.0)));
                }
                b.morphism(&m.0, &dom.0, &cod.0);
            }
        }
    }
    for st in body {
        if let CatStmt::Identity { obj: o, mor } = st {
            obj(o)?;
            if !with_identity.insert(o.0.as_str()) {
                return Err(resolution(o.1, format!("object `{}` has two identities", o.0)));
            }
            mors.insert(mor.0.as_str());
            b.identity(&o.0, &mor.0);
        }
    }
    let mut defaults = Vec::new();
    for o in &objects {
        if !with_identity.contains(o.0.as_str()) {
            let taken: HashSet<&str> = mors.iter().copied().chain(defaults.iter().map(String::as_str)).collect();
            defaults.push(default_identity_name(&o.0, &taken));
        }
    }
    for st in body {
        if let CatStmt::Compose { g, f, h } = st {
            for m in [g, f, h] {
                if !mors.contains(m.0.as_str()) && !defaults.contains(&m.0) {
                    return Err(resolution(
                        m.1,
                        format!(
                            "composition entry `compose {} {} = {}` refers to unknown morphism `{}`",
                            g.0, f.0, h.0, m.0
                        ),
                    ));
                }
            }
            b.compose(&g.0, &f.0, &h.0);
        }
    }
    let cat = b.build().map_err(|e| from_error(name.1, e))?;
    let report = validate_category(&cat);
    if !report.passed() {
        return Err(validation(name.1, report.to_string()));
    }
    Ok(cat)
}

fn concrete(cat: &Arc<FinCategory>, name: &Name, body: &[ConcreteStmt]) -> Result<ConcreteCategory, DslError> {
    let mut carriers: Vec<Option<Vec<String>>> = vec![None; cat.object_count()];
    let mut actions: Vec<Option<BTreeMap<String, String>>> = vec![None; cat.morphism_count()];
    for st in body {
        match st {
            ConcreteStmt::Carrier { obj, elements } => {
                let a = cat
                    .object_id(&obj.0)
                    .ok_or_else(|| resolution(obj.1, format!("unknown object `{}` in `{}`", obj.0, name.0)))?;
                if carriers[a].is_some() {
                    return Err(resolution(obj.1, format!("carrier of `{}` given twice", obj.0)));
                }
                carriers[a] = Some(elements.iter().map(|e| e.0.clone()).collect());
            }
            ConcreteStmt::Action { mor, pairs } => {
                let f = cat
                    .morphism_id(&mor.0)
                    .ok_or_else(|| resolution(mor.1, format!("unknown morphism `{}` in `{}`", mor.0, name.0)))?;
                if actions[f].is_some() {
                    return Err(resolution(mor.1, format!("action of `{}` given twice", mor.0)));
                }
                let mut m = BTreeMap::new();
                for (x, y) in pairs {
                    if m.insert(x.0.clone(), y.0.clone()).is_some() {
                        return Err(validation(x.1, format!("action of `{}` maps `{}` twice", mor.0, x.0)));
                    }
                }
                actions[f] = Some(m);
            }
        }
    }
    let carriers = carriers.into_iter().map(Option::unwrap_or_default).collect();
    ConcreteCategory::new(cat.clone(), carriers, actions).map_err(|e| from_error(name.1, e))
}

/// Resolve declarations in dependency order: categories, concrete
/// structure, functors, transformations, signatures.
pub fn resolve(decls: &[Decl]) -> Result<Workspace, DslError> {
    let mut ws = Workspace::new();
    let mut cats: HashMap<&str, Arc<FinCategory>> = HashMap::new();
    for d in decls {
        if let Decl::Category { name, body } = d {
            if cats.contains_key(name.0.as_str()) {
                return Err(resolution(name.1, format!("category `{}` declared twice", name.0)));
            }
            let c = Arc::new(category(name, body)?);
            ws.add_category(c.clone()).map_err(|e| from_error(name.1, e))?;
            cats.insert(name.0.as_str(), c);
        }
    }
    let lookup = |n: &Name| {
        cats.get(n.0.as_str())
            .cloned()
            .ok_or_else(|| resolution(n.1, format!("unknown category `{}`", n.0)))
    };
    let mut concretes: HashMap<&str, ConcreteCategory> = HashMap::new();
    for d in decls {
        if let Decl::Concrete { cat, body } = d {
            let c = lookup(cat)?;
            if concretes.contains_key(cat.0.as_str()) {
                return Err(resolution(cat.1, format!("concrete structure on `{}` declared twice", cat.0)));
            }
            let k = concrete(&c, cat, body)?;
            ws.add_concrete(k.clone()).map_err(|e| from_error(cat.1, e))?;
            concretes.insert(cat.0.as_str(), k);
        }
    }
    let mut functors: HashMap<&str, Functor> = HashMap::new();
    for d in decls {
        if let Decl::Functor { name, source, target, objs, mors } = d {
            if functors.contains_key(name.0.as_str()) {
                return Err(resolution(name.1, format!("functor `{}` declared twice", name.0)));
            }
            let (s, t) = (lookup(source)?, lookup(target)?);
            let mut obj_map = vec![None; s.object_count()];
            for (x, y) in objs {
                let a = s
                    .object_id(&x.0)
                    .ok_or_else(|| resolution(x.1, format!("unknown object `{}` in `{}`", x.0, source.0)))?;
                let b = t
                    .object_id(&y.0)
                    .ok_or_else(|| resolution(y.1, format!("unknown object `{}` in `{}`", y.0, target.0)))?;
                if obj_map[a].replace(b).is_some() {
                    return Err(resolution(x.1, format!("object `{}` mapped twice", x.0)));
                }
            }
            let mut mor_map = vec![None; s.morphism_count()];
            for (x, y) in mors {
                let f = s
                    .morphism_id(&x.0)
                    .ok_or_else(|| resolution(x.1, format!("unknown morphism `{}` in `{}`", x.0, source.0)))?;
                let g = t
                    .morphism_id(&y.0)
                    .ok_or_else(|| resolution(y.1, format!("unknown morphism `{}` in `{}`", y.0, target.0)))?;
                if mor_map[f].replace(g).is_some() {
                    return Err(resolution(x.1, format!("morphism `{}` mapped twice", x.0)));
                }
            }
            let mut om = Vec::with_capacity(obj_map.len());
            for (a, o) in obj_map.iter().enumerate() {
                om.push(o.ok_or_else(|| {
                    validation(name.1, format!("functor `{}` leaves object `{}` unmapped", name.0, s.object_name(a)))
                })?);
            }
            let mut mm = Vec::with_capacity(mor_map.len());
            for (f, m) in mor_map.iter().enumerate() {
                let g = match m {
                    Some(g) => *g,
                    None if s.is_identity(f) => t.identity(om[s.dom(f)]),
                    None => {
                        return Err(validation(
                            name.1,
                            format!("functor `{}` leaves morphism `{}` unmapped", name.0, s.morphism_name(f)),
                        ))
                    }
                };
                mm.push(g);
            }
            let func = Functor::new(s, t, om, mm).map_err(|e| from_error(name.1, e))?;
            let report = validate_functor(&func);
            if !report.passed() {
                return Err(validation(name.1, report.to_string()));
            }
            ws.add_functor(&name.0, func.clone()).map_err(|e| from_error(name.1, e))?;
            functors.insert(name.0.as_str(), func);
        }
    }
    for d in decls {
        if let Decl::Nat { name, from, to, at } = d {
            if ws.nat(&name.0).is_some() {
                return Err(resolution(name.1, format!("transformation `{}` declared twice", name.0)));
            }
            let get = |n: &Name| {
                functors
                    .get(n.0.as_str())
                    .cloned()
                    .ok_or_else(|| resolution(n.1, format!("unknown functor `{}`", n.0)))
            };
            let (f, g) = (get(from)?, get(to)?);
            let (s, t) = (f.source().clone(), f.target().clone());
            let mut comps = vec![None; s.object_count()];
            for (x, y) in at {
                let a = s
                    .object_id(&x.0)
                    .ok_or_else(|| resolution(x.1, format!("unknown object `{}` in `{}`", x.0, s.name())))?;
                let m = t
                    .morphism_id(&y.0)
                    .ok_or_else(|| resolution(y.1, format!("unknown morphism `{}` in `{}`", y.0, t.name())))?;
                if comps[a].replace(m).is_some() {
                    return Err(resolution(x.1, format!("component at `{}` given twice", x.0)));
                }
            }
            let mut cs = Vec::with_capacity(comps.len());
            for (a, c) in comps.iter().enumerate() {
                cs.push(c.ok_or_else(|| {
                    validation(name.1, format!("`{}` has no component at `{}`", name.0, s.object_name(a)))
                })?);
            }
            let nat = NatTrans::new(f, g, cs).map_err(|e| from_error(name.1, e))?;
            let report = validate_nat(&nat);
            if !report.passed() {
                return Err(validation(name.1, report.to_string()));
            }
            ws.add_nat(&name.0, &from.0, &to.0, nat).map_err(|e| from_error(name.1, e))?;
        }
    }
    for d in decls {
        if let Decl::Signature { name, over, rels } = d {
            if ws.signature(&name.0).is_some() {
                return Err(resolution(name.1, format!("signature `{}` declared twice", name.0)));
            }
            let k = concretes
                .get(over.0.as_str())
                .ok_or_else(|| resolution(over.1, format!("`{}` has no concrete structure", over.0)))?;
            let cat = k.cat();
            let mut symbols = Vec::new();
            let mut seen = BTreeSet::new();
            for r in rels {
                if !seen.insert(r.name.0.as_str()) {
                    return Err(resolution(r.name.1, format!("symbol `{}` declared twice", r.name.0)));
                }
                let mut sym = RelationSymbol::empty(&r.name.0, r.arity, cat.object_count());
                let mut given = HashSet::new();
                for (o, tuples) in &r.clauses {
                    let a = cat
                        .object_id(&o.0)
                        .ok_or_else(|| resolution(o.1, format!("unknown object `{}` in `{}`", o.0, over.0)))?;
                    if !given.insert(a) {
                        return Err(resolution(o.1, format!("`{}` interpreted twice at `{}`", r.name.0, o.0)));
                    }
                    for t in tuples {
                        if t.len() != r.arity {
                            return Err(validation(
                                t.first().map(|e| e.1).unwrap_or(o.1),
                                format!("tuple of length {} for `{}/{}`", t.len(), r.name.0, r.arity),
                            ));
                        }
                        let mut pos = Vec::with_capacity(t.len());
                        for e in t {
                            pos.push(k.position(a, &e.0).ok_or_else(|| {
                                resolution(e.1, format!("`{}` is not in the carrier of `{}`", e.0, o.0))
                            })?);
                        }
                        sym.interp[a].insert(pos);
                    }
                }
                symbols.push(sym);
            }
            let sig = Signature::new(symbols).map_err(|e| from_error(name.1, e))?;
            ws.add_signature(&name.0, &over.0, sig).map_err(|e| from_error(name.1, e))?;
        }
    }
    Ok(ws)
}
