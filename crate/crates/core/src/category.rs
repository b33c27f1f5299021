//! Finite categories stored as explicit composition tables.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use crate::error::{Error, Result};
use crate::verdict::{VerdictReport, Violation};

pub type ObjId = usize;
pub type MorId = usize;

/// Largest hom-set accepted by [`CategoryBuilder`] unless overridden.
pub const DEFAULT_HOM_CAP: usize = 64;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Morphism {
    pub name: String,
    pub dom: ObjId,
    pub cod: ObjId,
}

/// A finite category: objects, morphisms, chosen identities, and a partial
/// composition table keyed by `(g, f) -> g∘f`.
///
/// A `FinCategory` is only guaranteed to be *well-formed* (every id points
/// somewhere). Whether the table obeys the category laws is decided by
/// [`validate_category`].
#[derive(Clone)]
pub struct FinCategory {
    name: String,
    objects: Vec<String>,
    morphisms: Vec<Morphism>,
    identities: Vec<MorId>,
    compose: HashMap<(MorId, MorId), MorId>,
    obj_index: HashMap<String, ObjId>,
    mor_index: HashMap<String, MorId>,
    hom: Vec<Vec<MorId>>,
}

impl PartialEq for FinCategory {
    fn eq(&self, other: &Self) -> bool {
        std::ptr::eq(self, other)
            || (self.objects == other.objects
                && self.morphisms == other.morphisms
                && self.identities == other.identities
                && self.compose == other.compose)
    }
}

impl Eq for FinCategory {}

impl fmt::Debug for FinCategory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FinCategory")
            .field("name", &self.name)
            .field("objects", &self.objects.len())
            .field("morphisms", &self.morphisms.len())
            .finish()
    }
}

impl FinCategory {
    /// Build from index-based parts. Checks that every id is in range and
    /// names are unique; does not check the category laws.
    pub fn from_parts(
        name: impl Into<String>,
        objects: Vec<String>,
        morphisms: Vec<Morphism>,
        identities: Vec<MorId>,
        compose: HashMap<(MorId, MorId), MorId>,
    ) -> Result<Self> {
        let name = name.into();
        let n = objects.len();
        let m = morphisms.len();
        let mut obj_index = HashMap::with_capacity(n);
        for (i, o) in objects.iter().enumerate() {
            if obj_index.insert(o.clone(), i).is_some() {
                return Err(Error::Structure(format!("duplicate object `{o}` in `{name}`")));
            }
        }
        let mut mor_index = HashMap::with_capacity(m);
        for (i, mor) in morphisms.iter().enumerate() {
            if mor.dom >= n || mor.cod >= n {
                return Err(Error::Structure(format!(
                    "morphism `{}` has a dangling endpoint",
                    mor.name
                )));
            }
            if mor_index.insert(mor.name.clone(), i).is_some() {
                return Err(Error::Structure(format!(
                    "duplicate morphism `{}` in `{name}`",
                    mor.name
                )));
            }
        }
        if identities.len() != n {
            return Err(Error::Structure(format!(
                "`{name}` has {} identities for {n} objects",
                identities.len()
            )));
        }
        if let Some(&bad) = identities.iter().find(|&&i| i >= m) {
            return Err(Error::Structure(format!("identity id {bad} is dangling")));
        }
        for (&(g, f), &h) in &compose {
            if g >= m || f >= m || h >= m {
                return Err(Error::Structure(format!(
                    "composition entry ({g}, {f}) -> {h} is dangling"
                )));
            }
        }
        let mut hom = vec![Vec::new(); n * n];
        for (i, mor) in morphisms.iter().enumerate() {
            hom[mor.dom * n + mor.cod].push(i);
        }
        Ok(FinCategory {
            name,
            objects,
            morphisms,
            identities,
            compose,
            obj_index,
            mor_index,
            hom,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn object_count(&self) -> usize {
        self.objects.len()
    }

    pub fn morphism_count(&self) -> usize {
        self.morphisms.len()
    }

    pub fn objects(&self) -> &[String] {
        &self.objects
    }

    pub fn morphisms(&self) -> &[Morphism] {
        &self.morphisms
    }

    pub fn object_name(&self, a: ObjId) -> &str {
        &self.objects[a]
    }

    pub fn morphism(&self, f: MorId) -> &Morphism {
        &self.morphisms[f]
    }

    pub fn morphism_name(&self, f: MorId) -> &str {
        &self.morphisms[f].name
    }

    pub fn dom(&self, f: MorId) -> ObjId {
        self.morphisms[f].dom
    }

    pub fn cod(&self, f: MorId) -> ObjId {
        self.morphisms[f].cod
    }

    pub fn object_id(&self, name: &str) -> Option<ObjId> {
        self.obj_index.get(name).copied()
    }

    pub fn morphism_id(&self, name: &str) -> Option<MorId> {
        self.mor_index.get(name).copied()
    }

    pub fn identity(&self, a: ObjId) -> MorId {
        self.identities[a]
    }

    pub fn identities(&self) -> &[MorId] {
        &self.identities
    }

    pub fn is_identity(&self, f: MorId) -> bool {
        let a = self.dom(f);
        self.identities[a] == f
    }

    pub fn hom(&self, a: ObjId, b: ObjId) -> &[MorId] {
        &self.hom[a * self.objects.len() + b]
    }

    /// Raw table lookup of `g∘f`.
    pub fn composite(&self, g: MorId, f: MorId) -> Option<MorId> {
        self.compose.get(&(g, f)).copied()
    }

    /// `g∘f` in a validated category.
    ///
    /// Panics when the pair is not composable or the table has no entry;
    /// call only on categories that passed [`validate_category`].
    pub fn comp(&self, g: MorId, f: MorId) -> MorId {
        match self.compose.get(&(g, f)) {
            Some(&h) => h,
            None => panic!(
                "`{}`: no composite for {} ∘ {}",
                self.name, self.morphisms[g].name, self.morphisms[f].name
            ),
        }
    }

    /// Composition table sorted by key, for deterministic traversal.
    pub fn composition_entries(&self) -> Vec<(MorId, MorId, MorId)> {
        let mut v: Vec<_> = self.compose.iter().map(|(&(g, f), &h)| (g, f, h)).collect();
        v.sort_unstable();
        v
    }

    pub fn object_ids(&self) -> std::ops::Range<ObjId> {
        0..self.objects.len()
    }

    pub fn morphism_ids(&self) -> std::ops::Range<MorId> {
        0..self.morphisms.len()
    }

    /// The two-sided inverse of `f`, if any.
    pub fn inverse(&self, f: MorId) -> Option<MorId> {
        let (a, b) = (self.dom(f), self.cod(f));
        self.hom(b, a).iter().copied().find(|&g| {
            self.composite(g, f) == Some(self.identity(a))
                && self.composite(f, g) == Some(self.identity(b))
        })
    }

    pub fn is_iso(&self, f: MorId) -> bool {
        self.inverse(f).is_some()
    }

    /// Some isomorphism `a -> b`, if the objects are isomorphic.
    pub fn iso_between(&self, a: ObjId, b: ObjId) -> Option<MorId> {
        self.hom(a, b).iter().copied().find(|&f| self.is_iso(f))
    }

    /// `f` is a monomorphism: `f∘u = f∘v` forces `u = v` for all parallel
    /// `u, v` into `dom(f)`. Exhaustive over the table.
    pub fn is_mono(&self, f: MorId) -> bool {
        let a = self.dom(f);
        for x in self.object_ids() {
            let into = self.hom(x, a);
            for (i, &u) in into.iter().enumerate() {
                for &v in &into[i + 1..] {
                    if self.composite(f, u) == self.composite(f, v) {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Objects connected by an isomorphism, as class representatives
    /// (the smallest id in each class) indexed by object.
    pub fn iso_classes(&self) -> Vec<ObjId> {
        let n = self.object_count();
        let mut rep: Vec<ObjId> = (0..n).collect();
        for a in 0..n {
            if rep[a] != a {
                continue;
            }
            for b in a + 1..n {
                if rep[b] == b && self.iso_between(a, b).is_some() {
                    rep[b] = a;
                }
            }
        }
        rep
    }

    pub fn discrete(name: &str, objects: &[&str]) -> Self {
        let mut b = CategoryBuilder::new(name);
        for o in objects {
            b.object(o);
        }
        b.build().expect("discrete category is well-formed")
    }

    pub fn terminal(name: &str) -> Self {
        Self::discrete(name, &["*"])
    }
}

/// Name-based construction of a [`FinCategory`].
///
/// Identities are declared per object; declaring an identity also declares
/// the morphism. With [`CategoryBuilder::fill_identity_laws`], any missing
/// composition with an identity is filled by the identity law, so inputs
/// only list the interesting composites.
#[derive(Clone, Debug, Default)]
pub struct CategoryBuilder {
    name: String,
    objects: Vec<String>,
    morphisms: Vec<(String, String, String)>,
    identities: Vec<(String, String)>,
    compose: Vec<(String, String, String)>,
    fill_identities: bool,
    hom_cap: Option<usize>,
}

impl CategoryBuilder {
    pub fn new(name: &str) -> Self {
        CategoryBuilder {
            name: name.to_string(),
            fill_identities: true,
            hom_cap: Some(DEFAULT_HOM_CAP),
            ..Default::default()
        }
    }

    /// Keep the composition table exactly as given.
    pub fn raw(mut self) -> Self {
        self.fill_identities = false;
        self
    }

    pub fn fill_identity_laws(mut self, on: bool) -> Self {
        self.fill_identities = on;
        self
    }

    pub fn hom_cap(mut self, cap: Option<usize>) -> Self {
        self.hom_cap = cap;
        self
    }

    pub fn object(&mut self, name: &str) -> &mut Self {
        self.objects.push(name.to_string());
        self
    }

    pub fn morphism(&mut self, name: &str, dom: &str, cod: &str) -> &mut Self {
        self.morphisms
            .push((name.to_string(), dom.to_string(), cod.to_string()));
        self
    }

    /// Declare `mor` as the identity of `obj`. If `mor` is not declared as a
    /// morphism it is declared here as `obj -> obj`.
    pub fn identity(&mut self, obj: &str, mor: &str) -> &mut Self {
        self.identities.push((obj.to_string(), mor.to_string()));
        self
    }

    /// `g ∘ f = h`.
    pub fn compose(&mut self, g: &str, f: &str, h: &str) -> &mut Self {
        self.compose
            .push((g.to_string(), f.to_string(), h.to_string()));
        self
    }

    pub fn build(&self) -> Result<FinCategory> {
        let mut objects = Vec::new();
        let mut obj_ix = HashMap::new();
        for o in &self.objects {
            if obj_ix.insert(o.clone(), objects.len()).is_some() {
                return Err(Error::Structure(format!("duplicate object `{o}`")));
            }
            objects.push(o.clone());
        }
        let lookup_obj = |o: &str| {
            obj_ix
                .get(o)
                .copied()
                .ok_or_else(|| Error::Structure(format!("unknown object `{o}`")))
        };
        let mut morphisms: Vec<Morphism> = Vec::new();
        let mut mor_ix: HashMap<String, MorId> = HashMap::new();
        for (name, d, c) in &self.morphisms {
            let m = Morphism {
                name: name.clone(),
                dom: lookup_obj(d)?,
                cod: lookup_obj(c)?,
            };
            if mor_ix.insert(name.clone(), morphisms.len()).is_some() {
                return Err(Error::Structure(format!("duplicate morphism `{name}`")));
            }
            morphisms.push(m);
        }
        let mut identities: Vec<Option<MorId>> = vec![None; objects.len()];
        for (o, name) in &self.identities {
            let a = lookup_obj(o)?;
            let id = match mor_ix.get(name) {
                Some(&i) => i,
                None => {
                    mor_ix.insert(name.clone(), morphisms.len());
                    morphisms.push(Morphism {
                        name: name.clone(),
                        dom: a,
                        cod: a,
                    });
                    morphisms.len() - 1
                }
            };
            if identities[a].replace(id).is_some() {
                return Err(Error::Structure(format!("object `{o}` has two identities")));
            }
        }
        // objects without a declared identity get `id_<name>`
        for (a, slot) in identities.iter_mut().enumerate() {
            if slot.is_none() {
                let mut name = format!("id_{}", objects[a]);
                while mor_ix.contains_key(&name) {
                    name.push('\'');
                }
                mor_ix.insert(name.clone(), morphisms.len());
                morphisms.push(Morphism {
                    name,
                    dom: a,
                    cod: a,
                });
                *slot = Some(morphisms.len() - 1);
            }
        }
        let identities: Vec<MorId> = identities.into_iter().map(Option::unwrap).collect();
        let lookup_mor = |m: &str| {
            mor_ix
                .get(m)
                .copied()
                .ok_or_else(|| Error::Structure(format!("unknown morphism `{m}`")))
        };
        let mut compose = HashMap::new();
        for (g, f, h) in &self.compose {
            let key = (lookup_mor(g)?, lookup_mor(f)?);
            let val = lookup_mor(h)?;
            if let Some(prev) = compose.insert(key, val) {
                if prev != val {
                    return Err(Error::Structure(format!(
                        "conflicting composition entries for {g} ∘ {f}"
                    )));
                }
            }
        }
        if self.fill_identities {
            for (f, mor) in morphisms.iter().enumerate() {
                let left = identities[mor.cod];
                let right = identities[mor.dom];
                compose.entry((left, f)).or_insert(f);
                compose.entry((f, right)).or_insert(f);
            }
        }
        if let Some(cap) = self.hom_cap {
            let mut counts: BTreeMap<(ObjId, ObjId), usize> = BTreeMap::new();
            for m in &morphisms {
                *counts.entry((m.dom, m.cod)).or_default() += 1;
            }
            if let Some((&(a, b), &k)) = counts.iter().find(|(_, &k)| k > cap) {
                return Err(Error::Structure(format!(
                    "hom({}, {}) has {k} morphisms, above the cap of {cap}",
                    objects[a], objects[b]
                )));
            }
        }
        FinCategory::from_parts(self.name.clone(), objects, morphisms, identities, compose)
    }
}

/// Check the category laws on the table, in a fixed order: identity typing,
/// entries on non-composable pairs, totality, closure, unit laws,
/// associativity. The first failure is reported with its witnesses.
pub fn validate_category(c: &FinCategory) -> VerdictReport {
    VerdictReport::from_result("category", category_laws(c))
}

fn category_laws(c: &FinCategory) -> std::result::Result<(), Violation> {
    let name = |f: MorId| c.morphism_name(f).to_string();
    for a in c.object_ids() {
        let id = c.identity(a);
        if c.dom(id) != a || c.cod(id) != a {
            return Err(Violation::new(
                "identity-typing",
                vec![c.object_name(a).to_string(), name(id)],
                "identity is not an endomorphism of its object",
            ));
        }
    }
    for (g, f, _) in c.composition_entries() {
        if c.cod(f) != c.dom(g) {
            return Err(Violation::new(
                "composable",
                vec![name(g), name(f)],
                "composition entry for a non-composable pair",
            ));
        }
    }
    for (g, f, h) in c.composition_entries() {
        if c.dom(h) != c.dom(f) || c.cod(h) != c.cod(g) {
            return Err(Violation::new(
                "closure",
                vec![name(g), name(f)],
                format!("composite `{}` has the wrong endpoints", name(h)),
            ));
        }
    }
    let outs: Vec<Vec<MorId>> = c.object_ids().map(|a| c.hom_from(a)).collect();
    for f in c.morphism_ids() {
        for &g in &outs[c.cod(f)] {
            if c.composite(g, f).is_none() {
                return Err(Violation::new(
                    "totality",
                    vec![name(g), name(f)],
                    "composable pair has no composite",
                ));
            }
        }
    }
    for f in c.morphism_ids() {
        let left = c.identity(c.cod(f));
        let right = c.identity(c.dom(f));
        if c.composite(left, f) != Some(f) {
            return Err(Violation::new(
                "left-identity",
                vec![name(left), name(f)],
                "id ∘ f differs from f",
            ));
        }
        if c.composite(f, right) != Some(f) {
            return Err(Violation::new(
                "right-identity",
                vec![name(f), name(right)],
                "f ∘ id differs from f",
            ));
        }
    }
    for f in c.morphism_ids() {
        for &g in &outs[c.cod(f)] {
            let gf = c.comp(g, f);
            for &h in &outs[c.cod(g)] {
                let hg = c.comp(h, g);
                if c.comp(h, gf) != c.comp(hg, f) {
                    return Err(Violation::new(
                        "associativity",
                        vec![name(h), name(g), name(f)],
                        "h∘(g∘f) differs from (h∘g)∘f",
                    ));
                }
            }
        }
    }
    Ok(())
}

impl FinCategory {
    /// All morphisms out of `a`, in id order.
    pub fn hom_from(&self, a: ObjId) -> Vec<MorId> {
        self.morphism_ids().filter(|&g| self.dom(g) == a).collect()
    }

    /// All morphisms into `b`, in id order.
    pub fn hom_into(&self, b: ObjId) -> Vec<MorId> {
        self.morphism_ids().filter(|&g| self.cod(g) == b).collect()
    }
}

/// Two-sided inverse of `f`, if it exists.
pub fn is_isomorphism(c: &FinCategory, f: MorId) -> Option<MorId> {
    c.inverse(f)
}

pub fn is_mono(c: &FinCategory, f: MorId) -> bool {
    c.is_mono(f)
}
