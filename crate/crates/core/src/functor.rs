//! Functors and natural transformations between finite categories.

use std::sync::Arc;

use crate::category::{FinCategory, MorId, ObjId};
use crate::error::{Error, Result};
use crate::verdict::{VerdictReport, Violation};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Functor {
    source: Arc<FinCategory>,
    target: Arc<FinCategory>,
    obj_map: Vec<ObjId>,
    mor_map: Vec<MorId>,
}

fn same(a: &Arc<FinCategory>, b: &Arc<FinCategory>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

impl Functor {
    /// Checks only that the maps have the right length and land in range.
    pub fn new(
        source: Arc<FinCategory>,
        target: Arc<FinCategory>,
        obj_map: Vec<ObjId>,
        mor_map: Vec<MorId>,
    ) -> Result<Self> {
        if obj_map.len() != source.object_count() || mor_map.len() != source.morphism_count() {
            return Err(Error::Structure(format!(
                "functor {} -> {} does not map every object and morphism",
                source.name(),
                target.name()
            )));
        }
        if obj_map.iter().any(|&o| o >= target.object_count())
            || mor_map.iter().any(|&m| m >= target.morphism_count())
        {
            return Err(Error::Structure(format!(
                "functor {} -> {} has dangling images",
                source.name(),
                target.name()
            )));
        }
        Ok(Functor {
            source,
            target,
            obj_map,
            mor_map,
        })
    }

    pub fn identity(c: Arc<FinCategory>) -> Self {
        let obj_map = c.object_ids().collect();
        let mor_map = c.morphism_ids().collect();
        Functor {
            source: c.clone(),
            target: c,
            obj_map,
            mor_map,
        }
    }

    /// Everything goes to `obj` and its identity.
    pub fn constant(source: Arc<FinCategory>, target: Arc<FinCategory>, obj: ObjId) -> Self {
        let id = target.identity(obj);
        Functor {
            obj_map: vec![obj; source.object_count()],
            mor_map: vec![id; source.morphism_count()],
            source,
            target,
        }
    }

    pub fn source(&self) -> &Arc<FinCategory> {
        &self.source
    }

    pub fn target(&self) -> &Arc<FinCategory> {
        &self.target
    }

    pub fn obj(&self, a: ObjId) -> ObjId {
        self.obj_map[a]
    }

    pub fn mor(&self, f: MorId) -> MorId {
        self.mor_map[f]
    }

    pub fn obj_map(&self) -> &[ObjId] {
        &self.obj_map
    }

    pub fn mor_map(&self) -> &[MorId] {
        &self.mor_map
    }

    pub fn is_parallel(&self, other: &Functor) -> bool {
        same(&self.source, &other.source) && same(&self.target, &other.target)
    }

    /// Same maps, with a different (structurally equal) source or target.
    pub fn retarget(&self, source: Arc<FinCategory>, target: Arc<FinCategory>) -> Result<Self> {
        if !same(&source, &self.source) || !same(&target, &self.target) {
            return Err(Error::Mismatch("retarget to a different category".into()));
        }
        Ok(Functor {
            source,
            target,
            obj_map: self.obj_map.clone(),
            mor_map: self.mor_map.clone(),
        })
    }
}

/// Preservation of endpoints, identities and composition.
pub fn validate_functor(f: &Functor) -> VerdictReport {
    VerdictReport::from_result("functor", functor_laws(f))
}

fn functor_laws(fun: &Functor) -> std::result::Result<(), Violation> {
    let (s, t) = (&*fun.source, &*fun.target);
    for f in s.morphism_ids() {
        let img = fun.mor(f);
        if t.dom(img) != fun.obj(s.dom(f)) || t.cod(img) != fun.obj(s.cod(f)) {
            return Err(Violation::new(
                "endpoints",
                vec![s.morphism_name(f).into(), t.morphism_name(img).into()],
                "image does not run between the images of the endpoints",
            ));
        }
    }
    for a in s.object_ids() {
        if fun.mor(s.identity(a)) != t.identity(fun.obj(a)) {
            return Err(Violation::new(
                "identity",
                vec![s.object_name(a).into()],
                "identity not sent to an identity",
            ));
        }
    }
    for (g, f, gf) in s.composition_entries() {
        if s.cod(f) != s.dom(g) {
            continue;
        }
        let lhs = t.composite(fun.mor(g), fun.mor(f));
        if lhs != Some(fun.mor(gf)) {
            return Err(Violation::new(
                "composition",
                vec![s.morphism_name(g).into(), s.morphism_name(f).into()],
                "F(g∘f) differs from F(g)∘F(f)",
            ));
        }
    }
    Ok(())
}

/// `g ∘ f`: apply `f` first.
pub fn compose_functors(f: &Functor, g: &Functor) -> Result<Functor> {
    if !same(&f.target, &g.source) {
        return Err(Error::Mismatch(format!(
            "cannot compose: target {} is not source {}",
            f.target.name(),
            g.source.name()
        )));
    }
    Ok(Functor {
        source: f.source.clone(),
        target: g.target.clone(),
        obj_map: f.obj_map.iter().map(|&o| g.obj(o)).collect(),
        mor_map: f.mor_map.iter().map(|&m| g.mor(m)).collect(),
    })
}

/// A pair of objects and a target morphism between their images that no
/// source morphism hits.
pub fn fullness_gap(f: &Functor) -> Option<(ObjId, ObjId, MorId)> {
    let (s, t) = (&*f.source, &*f.target);
    for a in s.object_ids() {
        for b in s.object_ids() {
            for &m in t.hom(f.obj(a), f.obj(b)) {
                if !s.hom(a, b).iter().any(|&k| f.mor(k) == m) {
                    return Some((a, b, m));
                }
            }
        }
    }
    None
}

pub fn is_full(f: &Functor) -> bool {
    fullness_gap(f).is_none()
}

/// Two distinct parallel morphisms with the same image.
pub fn faithfulness_gap(f: &Functor) -> Option<(MorId, MorId)> {
    let s = &*f.source;
    for a in s.object_ids() {
        for b in s.object_ids() {
            let hom = s.hom(a, b);
            for (i, &u) in hom.iter().enumerate() {
                if let Some(&v) = hom[i + 1..].iter().find(|&&v| f.mor(v) == f.mor(u)) {
                    return Some((u, v));
                }
            }
        }
    }
    None
}

pub fn is_faithful(f: &Functor) -> bool {
    faithfulness_gap(f).is_none()
}

/// For each target object, a source object and an isomorphism
/// `F(source) -> target`, if every target object is reached up to iso.
pub fn essential_preimages(f: &Functor) -> Option<Vec<(ObjId, MorId)>> {
    let t = &*f.target;
    t.object_ids()
        .map(|b| {
            f.source
                .object_ids()
                .find_map(|a| t.iso_between(f.obj(a), b).map(|iso| (a, iso)))
        })
        .collect()
}

pub fn is_essentially_surjective(f: &Functor) -> bool {
    essential_preimages(f).is_some()
}

pub fn is_equivalence(f: &Functor) -> bool {
    is_full(f) && is_faithful(f) && is_essentially_surjective(f)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NatTrans {
    from: Functor,
    to: Functor,
    components: Vec<MorId>,
}

impl NatTrans {
    pub fn new(from: Functor, to: Functor, components: Vec<MorId>) -> Result<Self> {
        if !from.is_parallel(&to) {
            return Err(Error::Mismatch(
                "natural transformation between non-parallel functors".into(),
            ));
        }
        if components.len() != from.source.object_count()
            || components.iter().any(|&c| c >= from.target.morphism_count())
        {
            return Err(Error::Structure(
                "components must give one target morphism per source object".into(),
            ));
        }
        Ok(NatTrans {
            from,
            to,
            components,
        })
    }

    pub fn identity(f: &Functor) -> Self {
        let components = f
            .source
            .object_ids()
            .map(|a| f.target.identity(f.obj(a)))
            .collect();
        NatTrans {
            from: f.clone(),
            to: f.clone(),
            components,
        }
    }

    pub fn from(&self) -> &Functor {
        &self.from
    }

    pub fn to(&self) -> &Functor {
        &self.to
    }

    pub fn component(&self, a: ObjId) -> MorId {
        self.components[a]
    }

    pub fn components(&self) -> &[MorId] {
        &self.components
    }

    pub fn is_parallel(&self, other: &NatTrans) -> bool {
        self.from == other.from && self.to == other.to
    }

    /// Whiskering `self ∘ h`: components `self_{h X}` as a transformation
    /// `F∘h => G∘h`.
    pub fn precompose(&self, h: &Functor) -> Result<NatTrans> {
        let from = compose_functors(h, &self.from)?;
        let to = compose_functors(h, &self.to)?;
        let components = h.obj_map.iter().map(|&o| self.components[o]).collect();
        Ok(NatTrans {
            from,
            to,
            components,
        })
    }
}

/// Component typing and every naturality square `G(k)∘φ_K = φ_K'∘F(k)`.
pub fn validate_nat(t: &NatTrans) -> VerdictReport {
    VerdictReport::from_result("natural-transformation", nat_laws(t))
}

fn nat_laws(t: &NatTrans) -> std::result::Result<(), Violation> {
    let (s, l) = (&*t.from.source, &*t.from.target);
    for a in s.object_ids() {
        let c = t.components[a];
        if l.dom(c) != t.from.obj(a) || l.cod(c) != t.to.obj(a) {
            return Err(Violation::new(
                "component-typing",
                vec![s.object_name(a).into(), l.morphism_name(c).into()],
                "component does not run F K -> G K",
            ));
        }
    }
    for k in s.morphism_ids() {
        let (a, b) = (s.dom(k), s.cod(k));
        let lhs = l.composite(t.to.mor(k), t.components[a]);
        let rhs = l.composite(t.components[b], t.from.mor(k));
        if lhs.is_none() || lhs != rhs {
            return Err(Violation::new(
                "naturality",
                vec![
                    s.morphism_name(k).into(),
                    s.object_name(a).into(),
                    s.object_name(b).into(),
                ],
                "naturality square does not commute",
            ));
        }
    }
    Ok(())
}

/// A target object not isomorphic to any image object.
pub fn essential_gap(f: &Functor) -> Option<ObjId> {
    let t = &*f.target;
    t.object_ids().find(|&b| {
        !f.source
            .object_ids()
            .any(|a| t.iso_between(f.obj(a), b).is_some())
    })
}

/// Full subcategory on `objects` (kept in the given order) with its
/// inclusion. Object and morphism names are preserved.
pub fn full_subcategory(c: &Arc<FinCategory>, objects: &[ObjId], name: &str) -> Result<Functor> {
    let mut pos = vec![usize::MAX; c.object_count()];
    for (i, &o) in objects.iter().enumerate() {
        pos[o] = i;
    }
    let mut morphisms = Vec::new();
    let mut mor_map = Vec::new();
    let mut mpos = vec![usize::MAX; c.morphism_count()];
    for f in c.morphism_ids() {
        let (d, e) = (pos[c.dom(f)], pos[c.cod(f)]);
        if d != usize::MAX && e != usize::MAX {
            mpos[f] = morphisms.len();
            morphisms.push(crate::category::Morphism {
                name: c.morphism_name(f).to_string(),
                dom: d,
                cod: e,
            });
            mor_map.push(f);
        }
    }
    let identities = objects.iter().map(|&o| mpos[c.identity(o)]).collect();
    let mut compose = std::collections::HashMap::new();
    for (g, f, h) in c.composition_entries() {
        if mpos[g] != usize::MAX && mpos[f] != usize::MAX {
            compose.insert((mpos[g], mpos[f]), mpos[h]);
        }
    }
    let names = objects.iter().map(|&o| c.object_name(o).to_string()).collect();
    let sub = FinCategory::from_parts(name, names, morphisms, identities, compose)?;
    Functor::new(Arc::new(sub), c.clone(), objects.to_vec(), mor_map)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::category::CategoryBuilder;

    fn two_arrows() -> Arc<FinCategory> {
        let mut b = CategoryBuilder::new("C");
        b.object("A").object("B").morphism("f", "A", "B").morphism("g", "A", "B");
        Arc::new(b.build().unwrap())
    }

    #[test]
    fn identity_functor_is_everything() {
        let c = two_arrows();
        let id = Functor::identity(c.clone());
        assert!(validate_functor(&id).passed());
        assert!(is_full(&id) && is_faithful(&id) && is_essentially_surjective(&id));
        assert!(is_equivalence(&id));
        assert!(validate_nat(&NatTrans::identity(&id)).passed());
    }

    #[test]
    fn constant_from_discrete_pair() {
        let d = Arc::new(FinCategory::discrete("D", &["X", "Y"]));
        let t = Arc::new(FinCategory::terminal("T"));
        let k = Functor::constant(d, t, 0);
        assert!(validate_functor(&k).passed());
        // T(*,*) has the identity, D(X,Y) is empty
        assert_eq!(fullness_gap(&k).map(|g| (g.0, g.1)), Some((0, 1)));
        assert!(is_faithful(&k));
        assert!(is_essentially_surjective(&k));
    }

    #[test]
    fn non_full_inclusion_has_gap() {
        let c = two_arrows();
        let mut b = CategoryBuilder::new("S");
        b.object("A").object("B").morphism("f", "A", "B");
        let s = Arc::new(b.build().unwrap());
        let inc = Functor::new(s.clone(), c.clone(), vec![0, 1], vec![0, 2, 3]).unwrap();
        // morphism ids in c: f=0, g=1, id_A=2, id_B=3; in s: f=0, id_A=1, id_B=2
        assert!(validate_functor(&inc).passed());
        let gap = fullness_gap(&inc).unwrap();
        assert_eq!(c.morphism_name(gap.2), "g");
        assert!(!is_full(&inc));
        assert!(is_faithful(&inc));
    }

    #[test]
    fn composition_with_identity() {
        let c = two_arrows();
        let d = Arc::new(FinCategory::terminal("T"));
        let k = Functor::constant(c.clone(), d.clone(), 0);
        let left = compose_functors(&Functor::identity(c.clone()), &k).unwrap();
        let right = compose_functors(&k, &Functor::identity(d.clone())).unwrap();
        assert_eq!(left, k);
        assert_eq!(right, k);
        assert!(compose_functors(&k, &k).is_err());
    }

    #[test]
    fn broken_square_is_reported() {
        let c = two_arrows();
        let id = Functor::identity(c.clone());
        // components id_A at A and id_B at B are natural; swap in nothing else
        let f = c.morphism_id("f").unwrap();
        let g = c.morphism_id("g").unwrap();
        let ida = c.identity(0);
        let idb = c.identity(1);
        let good = NatTrans::new(id.clone(), id.clone(), vec![ida, idb]).unwrap();
        assert!(validate_nat(&good).passed());
        // a functor swapping f and g, with identity components, is not natural
        let swap = Functor::new(c.clone(), c.clone(), vec![0, 1], vec![g, f, ida, idb]).unwrap();
        assert!(validate_functor(&swap).passed());
        let bad = NatTrans::new(id, swap, vec![ida, idb]).unwrap();
        let v = validate_nat(&bad);
        assert_eq!(v.law(), Some("naturality"));
        assert_eq!(v.violation.unwrap().witness[0], "f");
    }
}
