//! Concrete categories: a finite category with an underlying-set functor
//! into finite sets, and the concreteness predicates built on it.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::sync::Arc;

use rayon::prelude::*;

use crate::category::{FinCategory, MorId, Morphism, ObjId};
use crate::combinat::{cartesian, injections};
use crate::error::{Error, Result};
use crate::functor::Functor;
use crate::naming::map_name;
use crate::verdict::{VerdictReport, Violation};

/// Underlying-set data: a sorted carrier per object and, per morphism, the
/// image position (in the codomain carrier) of each domain element.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FinSetFunctor {
    carriers: Vec<Vec<String>>,
    actions: Vec<Vec<usize>>,
}

type LiftIndex = HashMap<(ObjId, ObjId, Vec<usize>), Vec<MorId>>;

#[derive(Clone)]
pub struct ConcreteCategory {
    cat: Arc<FinCategory>,
    u: Arc<FinSetFunctor>,
    lifts: Arc<LiftIndex>,
}

impl PartialEq for ConcreteCategory {
    fn eq(&self, other: &Self) -> bool {
        *self.cat == *other.cat && self.u == other.u
    }
}

impl Eq for ConcreteCategory {}

impl std::fmt::Debug for ConcreteCategory {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("ConcreteCategory")
            .field("cat", &self.cat)
            .field("carriers", &self.u.carriers)
            .finish()
    }
}

impl ConcreteCategory {
    /// Name-based constructor. Each action lists `element -> image` pairs
    /// for the morphism's domain carrier; identity actions may be omitted.
    pub fn new(
        cat: Arc<FinCategory>,
        carriers: Vec<Vec<String>>,
        actions: Vec<Option<BTreeMap<String, String>>>,
    ) -> Result<Self> {
        if carriers.len() != cat.object_count() || actions.len() != cat.morphism_count() {
            return Err(Error::Structure(format!(
                "concrete structure on `{}` must give one carrier per object and one action per morphism",
                cat.name()
            )));
        }
        let mut sorted = Vec::with_capacity(carriers.len());
        for (a, c) in carriers.into_iter().enumerate() {
            let set: BTreeSet<String> = c.iter().cloned().collect();
            if set.len() != c.len() {
                return Err(Error::Structure(format!(
                    "carrier of `{}` repeats an element",
                    cat.object_name(a)
                )));
            }
            sorted.push(set.into_iter().collect::<Vec<_>>());
        }
        let mut pos_actions = Vec::with_capacity(actions.len());
        for (f, act) in actions.into_iter().enumerate() {
            let (d, c) = (cat.dom(f), cat.cod(f));
            let dom = &sorted[d];
            let cod = &sorted[c];
            let act = match act {
                Some(a) => a,
                None if d == c => dom.iter().map(|x| (x.clone(), x.clone())).collect(),
                None => {
                    return Err(Error::Structure(format!(
                        "morphism `{}` has no action",
                        cat.morphism_name(f)
                    )))
                }
            };
            if act.len() != dom.len() || act.keys().any(|k| dom.binary_search(k).is_err()) {
                return Err(Error::Structure(format!(
                    "action of `{}` is not defined exactly on its domain carrier",
                    cat.morphism_name(f)
                )));
            }
            let mut v = Vec::with_capacity(dom.len());
            for x in dom {
                let y = &act[x];
                match cod.binary_search(y) {
                    Ok(p) => v.push(p),
                    Err(_) => {
                        return Err(Error::Structure(format!(
                            "action of `{}` sends {x} outside the codomain carrier",
                            cat.morphism_name(f)
                        )))
                    }
                }
            }
            pos_actions.push(v);
        }
        Self::from_positions(cat, sorted, pos_actions)
    }

    /// Position-based constructor. Carriers must be sorted and duplicate-free.
    pub fn from_positions(
        cat: Arc<FinCategory>,
        carriers: Vec<Vec<String>>,
        actions: Vec<Vec<usize>>,
    ) -> Result<Self> {
        if carriers.len() != cat.object_count() || actions.len() != cat.morphism_count() {
            return Err(Error::Structure("carrier/action count mismatch".into()));
        }
        for c in &carriers {
            if c.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::Structure("carrier is not sorted and duplicate-free".into()));
            }
        }
        for (f, act) in actions.iter().enumerate() {
            let (d, c) = (cat.dom(f), cat.cod(f));
            if act.len() != carriers[d].len() || act.iter().any(|&p| p >= carriers[c].len()) {
                return Err(Error::Structure(format!(
                    "action of `{}` is malformed",
                    cat.morphism_name(f)
                )));
            }
        }
        let u = FinSetFunctor { carriers, actions };
        if let Err(v) = u_laws(&cat, &u) {
            return Err(Error::Law(v));
        }
        let mut lifts: LiftIndex = HashMap::new();
        for f in cat.morphism_ids() {
            lifts
                .entry((cat.dom(f), cat.cod(f), u.actions[f].clone()))
                .or_default()
                .push(f);
        }
        Ok(ConcreteCategory {
            cat,
            u: Arc::new(u),
            lifts: Arc::new(lifts),
        })
    }

    pub fn cat(&self) -> &Arc<FinCategory> {
        &self.cat
    }

    pub fn name(&self) -> &str {
        self.cat.name()
    }

    pub fn carrier(&self, a: ObjId) -> &[String] {
        &self.u.carriers[a]
    }

    pub fn carriers(&self) -> &[Vec<String>] {
        &self.u.carriers
    }

    pub fn action(&self, f: MorId) -> &[usize] {
        &self.u.actions[f]
    }

    pub fn actions(&self) -> &[Vec<usize>] {
        &self.u.actions
    }

    /// `U(f)` as element-name pairs, in domain carrier order.
    pub fn function_pairs(&self, f: MorId) -> Vec<(String, String)> {
        let cod = self.carrier(self.cat.cod(f));
        self.carrier(self.cat.dom(f))
            .iter()
            .zip(self.action(f))
            .map(|(x, &p)| (x.clone(), cod[p].clone()))
            .collect()
    }

    /// Morphisms `a -> b` whose underlying function is `function`.
    pub fn lifts(&self, a: ObjId, b: ObjId, function: &[usize]) -> &[MorId] {
        self.lifts
            .get(&(a, b, function.to_vec()))
            .map(Vec::as_slice)
            .unwrap_or(&[])
    }

    pub fn is_injective(&self, f: MorId) -> bool {
        let act = self.action(f);
        let set: BTreeSet<_> = act.iter().collect();
        set.len() == act.len()
    }

    /// Every element appearing in some carrier.
    pub fn elements(&self) -> BTreeSet<String> {
        self.u.carriers.iter().flatten().cloned().collect()
    }

    pub fn position(&self, a: ObjId, element: &str) -> Option<usize> {
        self.carrier(a).binary_search_by(|x| x.as_str().cmp(element)).ok()
    }

    /// `(J, U∘p)` for a functor `p: J -> K` into this category.
    pub fn along(&self, p: &Functor) -> Result<ConcreteCategory> {
        if **p.target() != *self.cat {
            return Err(Error::Mismatch(format!(
                "functor does not land in `{}`",
                self.cat.name()
            )));
        }
        let carriers = p
            .source()
            .object_ids()
            .map(|a| self.carrier(p.obj(a)).to_vec())
            .collect();
        let actions = p
            .source()
            .morphism_ids()
            .map(|f| self.action(p.mor(f)).to_vec())
            .collect();
        ConcreteCategory::from_positions(p.source().clone(), carriers, actions)
    }

    /// Same concrete structure on a renamed copy of the category.
    pub fn renamed(&self, name: &str) -> ConcreteCategory {
        ConcreteCategory {
            cat: Arc::new((*self.cat).clone().with_name(name)),
            u: self.u.clone(),
            lifts: self.lifts.clone(),
        }
    }
}

fn u_laws(cat: &FinCategory, u: &FinSetFunctor) -> std::result::Result<(), Violation> {
    for a in cat.object_ids() {
        let id = cat.identity(a);
        if cat.dom(id) == a
            && cat.cod(id) == a
            && u.actions[id].iter().enumerate().any(|(i, &p)| i != p)
        {
            return Err(Violation::new(
                "u-identity",
                vec![cat.object_name(a).into()],
                "identity is not sent to the identity function",
            ));
        }
    }
    for (g, f, h) in cat.composition_entries() {
        if cat.cod(f) != cat.dom(g) || cat.dom(h) != cat.dom(f) || cat.cod(h) != cat.cod(g) {
            continue;
        }
        let composed: Vec<usize> = u.actions[f].iter().map(|&p| u.actions[g][p]).collect();
        if composed != u.actions[h] {
            return Err(Violation::new(
                "u-composition",
                vec![cat.morphism_name(g).into(), cat.morphism_name(f).into()],
                "U(g∘f) differs from U(g)∘U(f)",
            ));
        }
    }
    Ok(())
}

/// Two distinct parallel morphisms with the same underlying function.
pub fn faithfulness_gap_u(k: &ConcreteCategory) -> Option<(MorId, MorId)> {
    let mut keys: Vec<_> = k.lifts.iter().filter(|(_, v)| v.len() > 1).collect();
    keys.sort();
    keys.first().map(|(_, v)| (v[0], v[1]))
}

pub fn is_faithful_u(k: &ConcreteCategory) -> bool {
    k.lifts.values().all(|v| v.len() == 1)
}

/// A morphism that is not a monomorphism or whose function is not injective.
pub fn concrete_mono_gap(k: &ConcreteCategory) -> Option<MorId> {
    k.cat
        .morphism_ids()
        .find(|&f| !k.is_injective(f) || !k.cat.is_mono(f))
}

pub fn has_concrete_monos(k: &ConcreteCategory) -> bool {
    concrete_mono_gap(k).is_none()
}

/// Every commutative triangle `U(g)∘f = U(h)` over `h: A -> C`,
/// `g: B -> C` lifts to some `f̄: A -> B` with `U(f̄) = f`.
///
/// Triangles are visited by codomain, then `h`, then `g`, then `f` in
/// lexicographic order; the first unliftable one is reported.
pub fn is_coherent(k: &ConcreteCategory) -> VerdictReport {
    let cat = &*k.cat;
    let faithful = is_faithful_u(k);
    let into: Vec<Vec<MorId>> = cat.object_ids().map(|c| cat.hom_into(c)).collect();
    let failure = cat.object_ids().into_par_iter().find_map_first(|c| {
        for &h in &into[c] {
            for &g in &into[c] {
                if let Some(v) = unliftable_triangle(k, h, g, faithful) {
                    return Some(v);
                }
            }
        }
        None
    });
    match failure {
        None => VerdictReport::pass("coherent"),
        Some(v) => VerdictReport::fail("coherent", v),
    }
}

fn unliftable_triangle(k: &ConcreteCategory, h: MorId, g: MorId, faithful: bool) -> Option<Violation> {
    let cat = &*k.cat;
    let (a, b) = (cat.dom(h), cat.dom(g));
    let uh = k.action(h);
    let ug = k.action(g);
    let nb = k.carrier(b).len();
    let mut choices = Vec::with_capacity(uh.len());
    for &target in uh {
        let pre: Vec<usize> = (0..nb).filter(|&y| ug[y] == target).collect();
        if pre.is_empty() {
            return None;
        }
        choices.push(pre);
    }
    for f in cartesian(&choices) {
        let lifts = k.lifts(a, b, &f);
        if lifts.is_empty() {
            let pairs: Vec<(String, String)> = f
                .iter()
                .enumerate()
                .map(|(i, &p)| (k.carrier(a)[i].clone(), k.carrier(b)[p].clone()))
                .collect();
            return Some(Violation::new(
                "triangle",
                vec![
                    cat.morphism_name(h).into(),
                    cat.morphism_name(g).into(),
                    map_name(&pairs),
                ],
                format!(
                    "no morphism {} -> {} over the function",
                    cat.object_name(a),
                    cat.object_name(b)
                ),
            ));
        }
        debug_assert!(!faithful || lifts.len() == 1);
    }
    None
}

/// Finite stand-in for "all sets": a sorted pool of element names.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Universe(Vec<String>);

impl Universe {
    pub fn new<I: IntoIterator<Item = S>, S: Into<String>>(elements: I) -> Self {
        let set: BTreeSet<String> = elements.into_iter().map(Into::into).collect();
        Universe(set.into_iter().collect())
    }

    /// Union of all carriers.
    pub fn of(k: &ConcreteCategory) -> Self {
        Universe(k.elements().into_iter().collect())
    }

    /// Union of all carriers plus `fresh` new elements `_u0, _u1, ...`.
    pub fn with_fresh(k: &ConcreteCategory, fresh: usize) -> Self {
        let mut set = k.elements();
        let mut i = 0;
        let mut added = 0;
        while added < fresh {
            let name = format!("_u{i}");
            if set.insert(name) {
                added += 1;
            }
            i += 1;
        }
        Universe(set.into_iter().collect())
    }

    pub fn elements(&self) -> &[String] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, e: &str) -> bool {
        self.0.binary_search_by(|x| x.as_str().cmp(e)).is_ok()
    }

    pub fn covers(&self, k: &ConcreteCategory) -> bool {
        k.elements().iter().all(|e| self.contains(e))
    }
}

/// Default number of fresh elements added to a category's own elements.
pub const DEFAULT_FRESH: usize = 2;

/// For every object `A` and injection `σ: UA -> universe` there is exactly
/// one isomorphism `f̄: A -> B` with `U(f̄) = σ`.
pub fn is_transportable(k: &ConcreteCategory, universe: &Universe) -> Result<VerdictReport> {
    if !universe.covers(k) {
        return Err(Error::Universe(
            "universe does not contain every element of the category".into(),
        ));
    }
    let cat = &*k.cat;
    let mut by_carrier: HashMap<&[String], Vec<ObjId>> = HashMap::new();
    for b in cat.object_ids() {
        by_carrier.entry(k.carrier(b)).or_default().push(b);
    }
    let pool = universe.elements();
    for a in cat.object_ids() {
        let ua = k.carrier(a);
        for sigma in injections(ua.len(), pool.len()) {
            let image: Vec<(String, String)> = ua
                .iter()
                .zip(&sigma)
                .map(|(x, &p)| (x.clone(), pool[p].clone()))
                .collect();
            let mut x: Vec<String> = image.iter().map(|(_, y)| y.clone()).collect();
            x.sort();
            let mut count = 0;
            for &b in by_carrier.get(x.as_slice()).into_iter().flatten() {
                let f: Vec<usize> = image
                    .iter()
                    .map(|(_, y)| k.position(b, y).expect("carrier matches"))
                    .collect();
                count += k
                    .lifts(a, b, &f)
                    .iter()
                    .filter(|&&m| cat.is_iso(m))
                    .count();
            }
            if count != 1 {
                let law = if count == 0 {
                    "transport-missing"
                } else {
                    "transport-not-unique"
                };
                return Ok(VerdictReport::fail(
                    "transportable",
                    Violation::new(
                        law,
                        vec![cat.object_name(a).into(), map_name(&image)],
                        format!("{count} isomorphisms lie over the bijection"),
                    ),
                ));
            }
        }
    }
    Ok(VerdictReport::pass("transportable"))
}

/// Close `k` under renaming objects along injections into `universe`.
///
/// Objects of the result are classes of pairs `(A, σ)`, `σ: UA -> universe`
/// injective, where `(A, σ) ~ (B, τ)` when some iso `i: A -> B` has
/// `τ∘U(i) = σ`. A class containing `(A, id)` keeps the name `A`.
/// Requires a faithful `U`, so morphisms are determined by their functions.
pub fn make_transportable(k: &ConcreteCategory, universe: &Universe) -> Result<ConcreteCategory> {
    if !universe.covers(k) {
        return Err(Error::Universe(
            "universe does not contain every element of the category".into(),
        ));
    }
    if !is_faithful_u(k) {
        return Err(Error::Precondition(
            "make_transportable needs a faithful underlying functor".into(),
        ));
    }
    let cat = &*k.cat;
    let pool = universe.elements();
    let pool_pos = |e: &str| pool.binary_search_by(|x| x.as_str().cmp(e)).unwrap();

    // enumerate pairs (A, σ) in canonical order
    let mut pairs: Vec<(ObjId, Vec<usize>)> = Vec::new();
    let mut index: HashMap<(ObjId, Vec<usize>), usize> = HashMap::new();
    for a in cat.object_ids() {
        for sigma in injections(k.carrier(a).len(), pool.len()) {
            index.insert((a, sigma.clone()), pairs.len());
            pairs.push((a, sigma));
        }
    }
    let mut parent: Vec<usize> = (0..pairs.len()).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    for i in cat.morphism_ids().filter(|&m| cat.is_iso(m)) {
        let (a, b) = (cat.dom(i), cat.cod(i));
        let ui = k.action(i);
        for tau in injections(k.carrier(b).len(), pool.len()) {
            let sigma: Vec<usize> = ui.iter().map(|&p| tau[p]).collect();
            let x = find(&mut parent, index[&(a, sigma)]);
            let y = find(&mut parent, index[&(b, tau)]);
            if x != y {
                parent[x.max(y)] = x.min(y);
            }
        }
    }
    let identity_sigma = |a: ObjId| -> Vec<usize> {
        k.carrier(a).iter().map(|e| pool_pos(e)).collect()
    };
    // class representative: an identity pair when the class has one
    let mut class_of = vec![0usize; pairs.len()];
    let mut reps: Vec<usize> = Vec::new();
    let mut rep_of_root: HashMap<usize, usize> = HashMap::new();
    let mut identity_rep: HashMap<usize, usize> = HashMap::new();
    for a in cat.object_ids() {
        let i = index[&(a, identity_sigma(a))];
        let r = find(&mut parent, i);
        identity_rep.entry(r).or_insert(i);
    }
    // identity classes first, in object order
    for a in cat.object_ids() {
        let i = index[&(a, identity_sigma(a))];
        let r = find(&mut parent, i);
        if identity_rep[&r] == i && !rep_of_root.contains_key(&r) {
            rep_of_root.insert(r, reps.len());
            reps.push(i);
        }
    }
    for i in 0..pairs.len() {
        let r = find(&mut parent, i);
        if !rep_of_root.contains_key(&r) {
            rep_of_root.insert(r, reps.len());
            reps.push(i);
        }
    }
    for (i, slot) in class_of.iter_mut().enumerate() {
        let r = find(&mut parent, i);
        *slot = rep_of_root[&r];
    }
    let _ = class_of;

    let mut names = Vec::with_capacity(reps.len());
    let mut carriers = Vec::with_capacity(reps.len());
    let mut is_identity_class = Vec::with_capacity(reps.len());
    for &r in &reps {
        let (a, sigma) = &pairs[r];
        let ident = *sigma == identity_sigma(*a);
        is_identity_class.push(ident);
        if ident {
            names.push(cat.object_name(*a).to_string());
        } else {
            let pairs_named: Vec<(String, String)> = k
                .carrier(*a)
                .iter()
                .zip(sigma)
                .map(|(x, &p)| (x.clone(), pool[p].clone()))
                .collect();
            names.push(format!("{}~{}", cat.object_name(*a), map_name(&pairs_named)));
        }
        let mut c: Vec<String> = sigma.iter().map(|&p| pool[p].clone()).collect();
        c.sort();
        carriers.push(c);
    }

    // morphisms between classes, transported from the representatives
    let n = reps.len();
    let mut morphisms = Vec::new();
    let mut actions = Vec::new();
    let mut by_function: HashMap<(usize, usize, Vec<usize>), MorId> = HashMap::new();
    let mut origin: Vec<MorId> = Vec::new();
    for p in 0..n {
        let (a, sigma) = &pairs[reps[p]];
        for q in 0..n {
            let (b, tau) = &pairs[reps[q]];
            for &f in cat.hom(*a, *b) {
                // position in carrier(p) of each σ-image, mapped through τ∘Uf
                let act: Vec<usize> = {
                    let mut v = vec![0; carriers[p].len()];
                    for (i, &s) in sigma.iter().enumerate() {
                        let src = carriers[p].binary_search(&pool[s]).unwrap();
                        let img = &pool[tau[k.action(f)[i]]];
                        v[src] = carriers[q].binary_search(img).unwrap();
                    }
                    v
                };
                let name = if is_identity_class[p] && is_identity_class[q] {
                    cat.morphism_name(f).to_string()
                } else {
                    format!("{}@{}>{}", cat.morphism_name(f), names[p], names[q])
                };
                by_function.insert((p, q, act.clone()), morphisms.len());
                morphisms.push(Morphism { name, dom: p, cod: q });
                actions.push(act);
                origin.push(f);
            }
        }
    }
    let identities: Vec<MorId> = (0..n)
        .map(|p| {
            let id: Vec<usize> = (0..carriers[p].len()).collect();
            by_function[&(p, p, id)]
        })
        .collect();
    let mut compose = HashMap::new();
    for f in 0..morphisms.len() {
        for g in 0..morphisms.len() {
            if morphisms[f].cod != morphisms[g].dom {
                continue;
            }
            let act: Vec<usize> = actions[f].iter().map(|&x| actions[g][x]).collect();
            let key = (morphisms[f].dom, morphisms[g].cod, act);
            let h = *by_function.get(&key).ok_or_else(|| {
                Error::Structure("renaming closure is not closed under composition".into())
            })?;
            compose.insert((g, f), h);
        }
    }
    let _ = origin;
    let out = FinCategory::from_parts(cat.name(), names, morphisms, identities, compose)?;
    ConcreteCategory::from_positions(Arc::new(out), carriers, actions)
}
