//! Products, comma categories, inserters, equifiers, pullbacks and
//! pseudopullbacks of finite (concrete) categories.

use std::collections::HashMap;
use std::sync::Arc;

use crate::category::{FinCategory, MorId, Morphism, ObjId};
use crate::combinat::{cartesian, injections};
use crate::concrete::ConcreteCategory;
use crate::error::{Error, Result};
use crate::functor::{
    compose_functors, essential_gap, faithfulness_gap, full_subcategory, fullness_gap,
    validate_nat, Functor, NatTrans,
};
use crate::naming::{map_name, tagged, tuple_name};
use crate::verdict::{VerdictReport, Violation};

/// Componentwise product of plain categories. Objects and morphisms are
/// named by tuples of component names.
#[derive(Clone, Debug)]
pub struct CategoryProduct {
    pub cat: Arc<FinCategory>,
    pub projections: Vec<Functor>,
    /// Component object ids of each product object.
    pub object_tuples: Vec<Vec<ObjId>>,
    /// Component morphism ids of each product morphism.
    pub morphism_tuples: Vec<Vec<MorId>>,
}

impl CategoryProduct {
    pub fn object_of(&self, tuple: &[ObjId]) -> Option<ObjId> {
        self.object_tuples.iter().position(|t| t == tuple)
    }
}

pub fn product_categories(name: &str, cats: &[Arc<FinCategory>]) -> Result<CategoryProduct> {
    let obj_choices: Vec<Vec<ObjId>> = cats.iter().map(|c| c.object_ids().collect()).collect();
    let object_tuples = cartesian(&obj_choices);
    let obj_index: HashMap<Vec<ObjId>, ObjId> = object_tuples
        .iter()
        .enumerate()
        .map(|(i, t)| (t.clone(), i))
        .collect();
    let objects: Vec<String> = object_tuples
        .iter()
        .map(|t| {
            let names: Vec<&str> = t.iter().zip(cats).map(|(&o, c)| c.object_name(o)).collect();
            tuple_name(&names)
        })
        .collect();

    let mor_choices: Vec<Vec<MorId>> = cats.iter().map(|c| c.morphism_ids().collect()).collect();
    let morphism_tuples = cartesian(&mor_choices);
    let mor_index: HashMap<Vec<MorId>, MorId> = morphism_tuples
        .iter()
        .enumerate()
        .map(|(i, t)| (t.clone(), i))
        .collect();
    let mut morphisms = Vec::with_capacity(morphism_tuples.len());
    let mut outs: Vec<Vec<MorId>> = vec![Vec::new(); object_tuples.len()];
    for (i, t) in morphism_tuples.iter().enumerate() {
        let names: Vec<&str> = t.iter().zip(cats).map(|(&m, c)| c.morphism_name(m)).collect();
        let dom: Vec<ObjId> = t.iter().zip(cats).map(|(&m, c)| c.dom(m)).collect();
        let cod: Vec<ObjId> = t.iter().zip(cats).map(|(&m, c)| c.cod(m)).collect();
        outs[obj_index[&dom]].push(i);
        morphisms.push(Morphism {
            name: tuple_name(&names),
            dom: obj_index[&dom],
            cod: obj_index[&cod],
        });
    }
    let identities = object_tuples
        .iter()
        .map(|t| {
            let ids: Vec<MorId> = t.iter().zip(cats).map(|(&o, c)| c.identity(o)).collect();
            mor_index[&ids]
        })
        .collect();
    let mut compose = HashMap::new();
    for (fi, f) in morphism_tuples.iter().enumerate() {
        for &gi in &outs[morphisms[fi].cod] {
            let g = &morphism_tuples[gi];
            let mut h = Vec::with_capacity(cats.len());
            let mut total = true;
            for (i, c) in cats.iter().enumerate() {
                match c.composite(g[i], f[i]) {
                    Some(x) => h.push(x),
                    None => total = false,
                }
            }
            if total {
                compose.insert((gi, fi), mor_index[&h]);
            }
        }
    }
    let cat = Arc::new(FinCategory::from_parts(
        name, objects, morphisms, identities, compose,
    )?);
    let projections = cats
        .iter()
        .enumerate()
        .map(|(i, c)| {
            Functor::new(
                cat.clone(),
                c.clone(),
                object_tuples.iter().map(|t| t[i]).collect(),
                morphism_tuples.iter().map(|t| t[i]).collect(),
            )
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(CategoryProduct {
        cat,
        projections,
        object_tuples,
        morphism_tuples,
    })
}

#[derive(Clone, Debug)]
pub struct ProductResult {
    /// Product category with `U(A_i) = ∐ U_i A_i`, elements tagged `i:e`.
    pub prod: ConcreteCategory,
    pub projections: Vec<Functor>,
    pub object_tuples: Vec<Vec<ObjId>>,
}

/// Product of concrete categories. The empty family gives the terminal
/// category with empty underlying set.
pub fn product(ks: &[ConcreteCategory]) -> Result<ProductResult> {
    let name = if ks.is_empty() {
        "1".to_string()
    } else {
        ks.iter().map(|k| k.name()).collect::<Vec<_>>().join("×")
    };
    let cats: Vec<Arc<FinCategory>> = ks.iter().map(|k| k.cat().clone()).collect();
    let p = product_categories(&name, &cats)?;
    // layout[o][j] = (component, position) of the j-th element of U(o)
    let mut carriers = Vec::with_capacity(p.object_tuples.len());
    let mut slot: Vec<Vec<Vec<usize>>> = Vec::with_capacity(p.object_tuples.len());
    for t in &p.object_tuples {
        let mut tagged_elems: Vec<(String, usize, usize)> = Vec::new();
        for (i, (&o, k)) in t.iter().zip(ks).enumerate() {
            for (j, e) in k.carrier(o).iter().enumerate() {
                tagged_elems.push((tagged(i, e), i, j));
            }
        }
        tagged_elems.sort();
        let mut s: Vec<Vec<usize>> = t.iter().zip(ks).map(|(&o, k)| vec![0; k.carrier(o).len()]).collect();
        for (pos, (_, i, j)) in tagged_elems.iter().enumerate() {
            s[*i][*j] = pos;
        }
        slot.push(s);
        carriers.push(tagged_elems.into_iter().map(|(n, _, _)| n).collect::<Vec<_>>());
    }
    let mut actions = Vec::with_capacity(p.morphism_tuples.len());
    for (m, t) in p.morphism_tuples.iter().enumerate() {
        let (d, c) = (p.cat.dom(m), p.cat.cod(m));
        let mut act = vec![0; carriers[d].len()];
        for (i, (&f, k)) in t.iter().zip(ks).enumerate() {
            for (j, &img) in k.action(f).iter().enumerate() {
                act[slot[d][i][j]] = slot[c][i][img];
            }
        }
        actions.push(act);
    }
    let prod = ConcreteCategory::from_positions(p.cat.clone(), carriers, actions)?;
    Ok(ProductResult {
        prod,
        projections: p.projections,
        object_tuples: p.object_tuples,
    })
}

/// `F↓G` with its two projections.
#[derive(Clone, Debug)]
pub struct CommaResult {
    pub cat: Arc<FinCategory>,
    pub left: Functor,
    pub right: Functor,
    /// `(K, K', h: FK -> GK')` per object.
    pub objects: Vec<(ObjId, ObjId, MorId)>,
}

pub fn comma(f: &Functor, g: &Functor) -> Result<CommaResult> {
    if **f.target() != **g.target() {
        return Err(Error::Mismatch("comma of functors with different targets".into()));
    }
    let (a, b, c) = (&**f.source(), &**g.source(), &**f.target());
    let mut objects = Vec::new();
    for x in a.object_ids() {
        for y in b.object_ids() {
            for &h in c.hom(f.obj(x), g.obj(y)) {
                objects.push((x, y, h));
            }
        }
    }
    let names: Vec<String> = objects
        .iter()
        .map(|&(x, y, h)| tuple_name(&[a.object_name(x), b.object_name(y), c.morphism_name(h)]))
        .collect();
    let mut morphisms = Vec::new();
    let mut pairs = Vec::new();
    let mut index: HashMap<(ObjId, ObjId, MorId, MorId), MorId> = HashMap::new();
    for (i, &(x, y, h)) in objects.iter().enumerate() {
        for (j, &(x2, y2, h2)) in objects.iter().enumerate() {
            for &k in a.hom(x, x2) {
                for &l in b.hom(y, y2) {
                    let lhs = c.composite(g.mor(l), h);
                    let rhs = c.composite(h2, f.mor(k));
                    if lhs.is_some() && lhs == rhs {
                        index.insert((i, j, k, l), morphisms.len());
                        morphisms.push(Morphism {
                            name: tuple_name(&[
                                a.morphism_name(k),
                                b.morphism_name(l),
                                &names[i],
                                &names[j],
                            ]),
                            dom: i,
                            cod: j,
                        });
                        pairs.push((k, l));
                    }
                }
            }
        }
    }
    let identities = objects
        .iter()
        .enumerate()
        .map(|(i, &(x, y, _))| index[&(i, i, a.identity(x), b.identity(y))])
        .collect();
    let compose = compose_by_components(&morphisms, |m1, m2| {
        let (k1, l1) = pairs[m1];
        let (k2, l2) = pairs[m2];
        let k = a.composite(k2, k1)?;
        let l = b.composite(l2, l1)?;
        index.get(&(morphisms[m1].dom, morphisms[m2].cod, k, l)).copied()
    });
    let cat = Arc::new(FinCategory::from_parts(
        format!("{}↓{}", a.name(), b.name()),
        names,
        morphisms,
        identities,
        compose,
    )?);
    let left = Functor::new(
        cat.clone(),
        f.source().clone(),
        objects.iter().map(|o| o.0).collect(),
        pairs.iter().map(|p| p.0).collect(),
    )?;
    let right = Functor::new(
        cat.clone(),
        g.source().clone(),
        objects.iter().map(|o| o.1).collect(),
        pairs.iter().map(|p| p.1).collect(),
    )?;
    Ok(CommaResult {
        cat,
        left,
        right,
        objects,
    })
}

/// Composition table from a per-pair composite lookup.
fn compose_by_components(
    morphisms: &[Morphism],
    mut composite: impl FnMut(MorId, MorId) -> Option<MorId>,
) -> HashMap<(MorId, MorId), MorId> {
    let n = morphisms.iter().map(|m| m.dom.max(m.cod) + 1).max().unwrap_or(0);
    let mut outs = vec![Vec::new(); n];
    for (i, m) in morphisms.iter().enumerate() {
        outs[m.dom].push(i);
    }
    let mut table = HashMap::new();
    for (f, m) in morphisms.iter().enumerate() {
        for &g in &outs[m.cod] {
            if let Some(h) = composite(f, g) {
                table.insert((g, f), h);
            }
        }
    }
    table
}

#[derive(Clone, Debug)]
pub struct InserterResult {
    pub ins: Arc<FinCategory>,
    pub projection: Functor,
    /// `φ: F∘P => G∘P`, component at `(K, f)` equal to `f`.
    pub phi: NatTrans,
    /// `(K, f: FK -> GK)` per object.
    pub objects: Vec<(ObjId, MorId)>,
    f: Functor,
    g: Functor,
}

impl InserterResult {
    pub fn f(&self) -> &Functor {
        &self.f
    }

    pub fn g(&self) -> &Functor {
        &self.g
    }

    pub fn object_of(&self, k: ObjId, f: MorId) -> Option<ObjId> {
        self.objects.iter().position(|&o| o == (k, f))
    }

    /// The inserter morphism over `k` between two inserter objects.
    pub fn morphism_over(&self, dom: ObjId, cod: ObjId, k: MorId) -> Option<MorId> {
        self.ins
            .hom(dom, cod)
            .iter()
            .copied()
            .find(|&m| self.projection.mor(m) == k)
    }

    /// `(Ins(F,G), U∘P)` for a concrete source category.
    pub fn concrete(&self, k: &ConcreteCategory) -> Result<ConcreteCategory> {
        k.along(&self.projection)
    }
}

/// `Ins(F,G)` for parallel `F, G: K -> L`.
pub fn inserter(f: &Functor, g: &Functor) -> Result<InserterResult> {
    if !f.is_parallel(g) {
        return Err(Error::Mismatch("inserter of non-parallel functors".into()));
    }
    let (k, l) = (f.source().clone(), f.target().clone());
    let mut objects = Vec::new();
    for x in k.object_ids() {
        for &h in l.hom(f.obj(x), g.obj(x)) {
            objects.push((x, h));
        }
    }
    let names: Vec<String> = objects
        .iter()
        .map(|&(x, h)| tuple_name(&[k.object_name(x), l.morphism_name(h)]))
        .collect();
    let mut morphisms = Vec::new();
    let mut over = Vec::new();
    let mut index: HashMap<(ObjId, ObjId, MorId), MorId> = HashMap::new();
    for (i, &(x, h)) in objects.iter().enumerate() {
        for (j, &(y, h2)) in objects.iter().enumerate() {
            for &m in k.hom(x, y) {
                let lhs = l.composite(g.mor(m), h);
                if lhs.is_some() && lhs == l.composite(h2, f.mor(m)) {
                    index.insert((i, j, m), morphisms.len());
                    morphisms.push(Morphism {
                        name: tuple_name(&[k.morphism_name(m), l.morphism_name(h), l.morphism_name(h2)]),
                        dom: i,
                        cod: j,
                    });
                    over.push(m);
                }
            }
        }
    }
    let identities = objects
        .iter()
        .enumerate()
        .map(|(i, &(x, _))| index[&(i, i, k.identity(x))])
        .collect();
    let compose = compose_by_components(&morphisms, |m1, m2| {
        let c = k.composite(over[m2], over[m1])?;
        index.get(&(morphisms[m1].dom, morphisms[m2].cod, c)).copied()
    });
    let ins = Arc::new(FinCategory::from_parts(
        format!("Ins({},{})", k.name(), l.name()),
        names,
        morphisms,
        identities,
        compose,
    )?);
    let projection = Functor::new(
        ins.clone(),
        k.clone(),
        objects.iter().map(|o| o.0).collect(),
        over,
    )?;
    let fp = compose_functors(&projection, f)?;
    let gp = compose_functors(&projection, g)?;
    let phi = NatTrans::new(fp, gp, objects.iter().map(|o| o.1).collect())?;
    Ok(InserterResult {
        ins,
        projection,
        phi,
        objects,
        f: f.clone(),
        g: g.clone(),
    })
}

/// The unique `H̄: H -> Ins(F,G)` with `P∘H̄ = h` and `φ∘H̄ = ψ`.
pub fn inserter_factorize(ins: &InserterResult, h: &Functor, psi: &NatTrans) -> Result<Functor> {
    if **h.target() != **ins.projection.target() {
        return Err(Error::Mismatch("h does not land in the inserter's source".into()));
    }
    let fh = compose_functors(h, &ins.f)?;
    let gh = compose_functors(h, &ins.g)?;
    if *psi.from() != fh || *psi.to() != gh {
        return Err(Error::Mismatch("ψ must run F∘h => G∘h".into()));
    }
    let v = validate_nat(psi);
    if let Some(viol) = v.violation {
        return Err(Error::Law(viol));
    }
    let src = h.source();
    let obj_map: Vec<ObjId> = src
        .object_ids()
        .map(|x| ins.object_of(h.obj(x), psi.component(x)).expect("ψ component is an inserter object"))
        .collect();
    let mor_map: Vec<MorId> = src
        .morphism_ids()
        .map(|m| {
            ins.morphism_over(obj_map[src.dom(m)], obj_map[src.cod(m)], h.mor(m))
                .expect("naturality of ψ gives the inserter morphism")
        })
        .collect();
    Functor::new(src.clone(), ins.ins.clone(), obj_map, mor_map)
}

#[derive(Clone, Debug)]
pub struct EquifierResult {
    pub eq: Arc<FinCategory>,
    pub inclusion: Functor,
    phi: NatTrans,
    psi: NatTrans,
}

impl EquifierResult {
    /// `(Eq(φ,ψ), U∘inclusion)` for a concrete source category.
    pub fn concrete(&self, k: &ConcreteCategory) -> Result<ConcreteCategory> {
        k.along(&self.inclusion)
    }
}

/// Full subcategory on the objects where `φ` and `ψ` agree.
pub fn equifier(phi: &NatTrans, psi: &NatTrans) -> Result<EquifierResult> {
    if !phi.is_parallel(psi) {
        return Err(Error::Mismatch("equifier of non-parallel transformations".into()));
    }
    let k = phi.from().source().clone();
    let agree: Vec<ObjId> = k
        .object_ids()
        .filter(|&x| phi.component(x) == psi.component(x))
        .collect();
    let inclusion = full_subcategory(&k, &agree, &format!("Eq({})", k.name()))?;
    Ok(EquifierResult {
        eq: inclusion.source().clone(),
        inclusion,
        phi: phi.clone(),
        psi: psi.clone(),
    })
}

/// Corestriction of `h` to the equifier; `φ_{hX} = ψ_{hX}` must hold for all `X`.
pub fn equifier_factorize(eq: &EquifierResult, h: &Functor) -> Result<Functor> {
    let k = eq.inclusion.target();
    if **h.target() != **k {
        return Err(Error::Mismatch("h does not land in the equifier's source".into()));
    }
    let mut pos = vec![None; k.object_count()];
    for (i, &o) in eq.inclusion.obj_map().iter().enumerate() {
        pos[o] = Some(i);
    }
    let src = h.source();
    let mut obj_map = Vec::with_capacity(src.object_count());
    for x in src.object_ids() {
        let hx = h.obj(x);
        if eq.phi.component(hx) != eq.psi.component(hx) {
            return Err(Error::Precondition(format!(
                "φ and ψ disagree at {} = h({})",
                k.object_name(hx),
                src.object_name(x)
            )));
        }
        obj_map.push(pos[hx].expect("agreement object is in the equifier"));
    }
    let mut mpos = vec![usize::MAX; k.morphism_count()];
    for (i, &m) in eq.inclusion.mor_map().iter().enumerate() {
        mpos[m] = i;
    }
    let mor_map = src.morphism_ids().map(|m| mpos[h.mor(m)]).collect();
    Functor::new(src.clone(), eq.eq.clone(), obj_map, mor_map)
}

/// Strict pullback of `U₁` and `U₂`: pairs with equal underlying sets and
/// pairs of morphisms with equal underlying functions.
pub fn pullback(k1: &ConcreteCategory, k2: &ConcreteCategory) -> Result<ConcreteCategory> {
    Ok(pullback_with_legs(k1, k2)?.cat)
}

#[derive(Clone, Debug)]
pub struct Pullback {
    pub cat: ConcreteCategory,
    pub objects: Vec<(ObjId, ObjId)>,
    pub legs: (Functor, Functor),
}

pub fn pullback_with_legs(k1: &ConcreteCategory, k2: &ConcreteCategory) -> Result<Pullback> {
    let (c1, c2) = (k1.cat(), k2.cat());
    let mut objects = Vec::new();
    for a in c1.object_ids() {
        for b in c2.object_ids() {
            if k1.carrier(a) == k2.carrier(b) {
                objects.push((a, b));
            }
        }
    }
    let names = objects
        .iter()
        .map(|&(a, b)| tuple_name(&[c1.object_name(a), c2.object_name(b)]))
        .collect();
    let mut morphisms = Vec::new();
    let mut pairs = Vec::new();
    let mut index = HashMap::new();
    for (i, &(a, b)) in objects.iter().enumerate() {
        for (j, &(a2, b2)) in objects.iter().enumerate() {
            for &f1 in c1.hom(a, a2) {
                for &f2 in c2.hom(b, b2) {
                    if k1.action(f1) == k2.action(f2) {
                        index.insert((f1, f2), morphisms.len());
                        morphisms.push(Morphism {
                            name: tuple_name(&[c1.morphism_name(f1), c2.morphism_name(f2)]),
                            dom: i,
                            cod: j,
                        });
                        pairs.push((f1, f2));
                    }
                }
            }
        }
    }
    let identities = objects
        .iter()
        .map(|&(a, b)| index[&(c1.identity(a), c2.identity(b))])
        .collect();
    let compose = compose_by_components(&morphisms, |m1, m2| {
        let f = c1.composite(pairs[m2].0, pairs[m1].0)?;
        let g = c2.composite(pairs[m2].1, pairs[m1].1)?;
        index.get(&(f, g)).copied()
    });
    let carriers = objects.iter().map(|&(a, _)| k1.carrier(a).to_vec()).collect();
    let actions = pairs.iter().map(|&(f1, _)| k1.action(f1).to_vec()).collect();
    let cat = Arc::new(FinCategory::from_parts(
        format!("{}×{}", k1.name(), k2.name()),
        names,
        morphisms,
        identities,
        compose,
    )?);
    let legs = (
        Functor::new(
            cat.clone(),
            c1.clone(),
            objects.iter().map(|o| o.0).collect(),
            pairs.iter().map(|p| p.0).collect(),
        )?,
        Functor::new(
            cat.clone(),
            c2.clone(),
            objects.iter().map(|o| o.1).collect(),
            pairs.iter().map(|p| p.1).collect(),
        )?,
    );
    Ok(Pullback {
        cat: ConcreteCategory::from_positions(cat, carriers, actions)?,
        objects,
        legs,
    })
}

/// Objects of a pseudopullback: `(A₁, A₂, θ)` with `θ: U₁A₁ ≅ U₂A₂` given
/// as positions.
pub type PseudoObject = (ObjId, ObjId, Vec<usize>);

#[derive(Clone, Debug)]
pub struct PseudoPullback {
    pub cat: ConcreteCategory,
    pub objects: Vec<PseudoObject>,
    pub legs: (Functor, Functor),
}

/// Pseudopullback of `U₁` and `U₂`: triples with an explicit bijection, and
/// pairs of morphisms forming a commuting square with the bijections.
/// Underlying sets are taken from the first leg.
pub fn pseudopullback(k1: &ConcreteCategory, k2: &ConcreteCategory) -> Result<PseudoPullback> {
    let (c1, c2) = (k1.cat(), k2.cat());
    let mut objects: Vec<PseudoObject> = Vec::new();
    for a in c1.object_ids() {
        for b in c2.object_ids() {
            let (n, m) = (k1.carrier(a).len(), k2.carrier(b).len());
            if n == m {
                for theta in injections(n, m) {
                    objects.push((a, b, theta));
                }
            }
        }
    }
    let names: Vec<String> = objects
        .iter()
        .map(|(a, b, theta)| {
            let pairs: Vec<(&str, &str)> = theta
                .iter()
                .enumerate()
                .map(|(i, &j)| (k1.carrier(*a)[i].as_str(), k2.carrier(*b)[j].as_str()))
                .collect();
            tuple_name(&[c1.object_name(*a), c2.object_name(*b), &map_name(&pairs)])
        })
        .collect();
    let mut morphisms = Vec::new();
    let mut pairs = Vec::new();
    let mut index = HashMap::new();
    for (i, (a, b, t)) in objects.iter().enumerate() {
        for (j, (a2, b2, t2)) in objects.iter().enumerate() {
            for &f1 in c1.hom(*a, *a2) {
                for &f2 in c2.hom(*b, *b2) {
                    // θ'∘U₁f₁ = U₂f₂∘θ
                    let u1 = k1.action(f1);
                    let u2 = k2.action(f2);
                    if (0..u1.len()).all(|x| t2[u1[x]] == u2[t[x]]) {
                        index.insert((i, j, f1, f2), morphisms.len());
                        morphisms.push(Morphism {
                            name: tuple_name(&[
                                c1.morphism_name(f1),
                                c2.morphism_name(f2),
                                &names[i],
                                &names[j],
                            ]),
                            dom: i,
                            cod: j,
                        });
                        pairs.push((f1, f2));
                    }
                }
            }
        }
    }
    let identities = objects
        .iter()
        .enumerate()
        .map(|(i, (a, b, _))| index[&(i, i, c1.identity(*a), c2.identity(*b))])
        .collect();
    let compose = compose_by_components(&morphisms, |m1, m2| {
        let f = c1.composite(pairs[m2].0, pairs[m1].0)?;
        let g = c2.composite(pairs[m2].1, pairs[m1].1)?;
        index.get(&(morphisms[m1].dom, morphisms[m2].cod, f, g)).copied()
    });
    let carriers = objects.iter().map(|(a, _, _)| k1.carrier(*a).to_vec()).collect();
    let actions = pairs.iter().map(|&(f1, _)| k1.action(f1).to_vec()).collect();
    let cat = Arc::new(FinCategory::from_parts(
        format!("{}×~{}", k1.name(), k2.name()),
        names,
        morphisms,
        identities,
        compose,
    )?);
    let legs = (
        Functor::new(
            cat.clone(),
            c1.clone(),
            objects.iter().map(|o| o.0).collect(),
            pairs.iter().map(|p| p.0).collect(),
        )?,
        Functor::new(
            cat.clone(),
            c2.clone(),
            objects.iter().map(|o| o.1).collect(),
            pairs.iter().map(|p| p.1).collect(),
        )?,
    );
    Ok(PseudoPullback {
        cat: ConcreteCategory::from_positions(cat, carriers, actions)?,
        objects,
        legs,
    })
}

/// The comparison functor `(A₁, A₂) ↦ (A₁, A₂, id)` from the pullback into
/// the pseudopullback.
pub fn comparison_functor(pb: &Pullback, psb: &PseudoPullback) -> Result<Functor> {
    let mut obj_map = Vec::with_capacity(pb.objects.len());
    for &(a, b) in &pb.objects {
        let o = psb
            .objects
            .iter()
            .position(|(x, y, t)| (*x, *y) == (a, b) && t.iter().enumerate().all(|(i, &j)| i == j))
            .ok_or_else(|| Error::Structure("identity triple missing from pseudopullback".into()))?;
        obj_map.push(o);
    }
    let pcat = pb.cat.cat();
    let mut mor_map = Vec::with_capacity(pcat.morphism_count());
    for m in pcat.morphism_ids() {
        let (d, c) = (obj_map[pcat.dom(m)], obj_map[pcat.cod(m)]);
        let (f1, f2) = (pb.legs.0.mor(m), pb.legs.1.mor(m));
        let image = psb
            .cat
            .cat()
            .hom(d, c)
            .iter()
            .copied()
            .find(|&x| psb.legs.0.mor(x) == f1 && psb.legs.1.mor(x) == f2)
            .ok_or_else(|| Error::Structure("comparison image missing".into()))?;
        mor_map.push(image);
    }
    Functor::new(pcat.clone(), psb.cat.cat().clone(), obj_map, mor_map)
}

/// Whether the comparison from the pullback to the pseudopullback is an
/// equivalence of categories.
pub fn compare_pb_psb(k1: &ConcreteCategory, k2: &ConcreteCategory) -> Result<VerdictReport> {
    let pb = pullback_with_legs(k1, k2)?;
    let psb = pseudopullback(k1, k2)?;
    let cmp = comparison_functor(&pb, &psb)?;
    let (s, t) = (cmp.source(), cmp.target());
    let check = "pullback-equivalent-pseudopullback";
    if let Some((a, b, m)) = fullness_gap(&cmp) {
        return Ok(VerdictReport::fail(
            check,
            Violation::new(
                "full",
                vec![s.object_name(a).into(), s.object_name(b).into(), t.morphism_name(m).into()],
                "comparison misses a morphism",
            ),
        ));
    }
    if let Some((u, v)) = faithfulness_gap(&cmp) {
        return Ok(VerdictReport::fail(
            check,
            Violation::new(
                "faithful",
                vec![s.morphism_name(u).into(), s.morphism_name(v).into()],
                "comparison identifies two morphisms",
            ),
        ));
    }
    if let Some(b) = essential_gap(&cmp) {
        return Ok(VerdictReport::fail(
            check,
            Violation::new(
                "essentially-surjective",
                vec![t.object_name(b).into()],
                "pseudopullback object not isomorphic to a strict pair",
            ),
        ));
    }
    Ok(VerdictReport::pass(check))
}

/// Left fold of [`pullback`] over a family sharing the base `Set`.
pub fn multiple_pullback(ks: &[ConcreteCategory]) -> Result<ConcreteCategory> {
    let (first, rest) = ks
        .split_first()
        .ok_or_else(|| Error::Precondition("multiple pullback of an empty family".into()))?;
    rest.iter().try_fold(first.clone(), |acc, k| pullback(&acc, k))
}

/// Left fold of [`pseudopullback`]; underlying sets follow the first leg.
pub fn multiple_pseudopullback(ks: &[ConcreteCategory]) -> Result<ConcreteCategory> {
    let (first, rest) = ks
        .split_first()
        .ok_or_else(|| Error::Precondition("multiple pseudopullback of an empty family".into()))?;
    rest.iter()
        .try_fold(first.clone(), |acc, k| Ok(pseudopullback(&acc, k)?.cat))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::category::{validate_category, CategoryBuilder};
    use crate::concrete::{is_faithful_u, make_transportable, Universe};
    use crate::functor::{is_faithful, validate_functor};
    use std::collections::BTreeMap;

    fn point(name: &str, elems: &[&str]) -> ConcreteCategory {
        let cat = Arc::new(FinCategory::terminal(name));
        ConcreteCategory::new(
            cat,
            vec![elems.iter().map(|s| s.to_string()).collect()],
            vec![None],
        )
        .unwrap()
    }

    fn arrow() -> Arc<FinCategory> {
        let mut b = CategoryBuilder::new("2");
        b.object("A").object("B").morphism("f", "A", "B");
        Arc::new(b.build().unwrap())
    }

    #[test]
    fn empty_product_is_terminal_with_empty_carrier() {
        let p = product(&[]).unwrap();
        assert_eq!(p.prod.cat().object_count(), 1);
        assert_eq!(p.prod.cat().morphism_count(), 1);
        assert!(p.prod.carrier(0).is_empty());
        assert!(validate_category(p.prod.cat()).passed());
    }

    #[test]
    fn product_tags_elements() {
        let a = point("P", &["x"]);
        let b = point("Q", &["x", "y"]);
        let p = product(&[a, b]).unwrap();
        assert_eq!(p.prod.carrier(0), ["0:x", "1:x", "1:y"]);
        assert!(is_faithful_u(&p.prod));
        for pr in &p.projections {
            assert!(validate_functor(pr).passed());
        }
    }

    #[test]
    fn arrow_category_as_comma() {
        let c = arrow();
        let id = Functor::identity(c.clone());
        let r = comma(&id, &id).unwrap();
        assert_eq!(r.cat.object_count(), c.morphism_count());
        assert!(validate_category(&r.cat).passed());
        let t = Arc::new(FinCategory::terminal("T"));
        let idt = Functor::identity(t);
        assert_eq!(comma(&idt, &idt).unwrap().cat.object_count(), 1);
    }

    #[test]
    fn inserter_of_identities_on_terminal() {
        let t = Arc::new(FinCategory::terminal("T"));
        let id = Functor::identity(t);
        let r = inserter(&id, &id).unwrap();
        assert_eq!(r.ins.object_count(), 1);
        assert_eq!(r.ins.morphism_count(), 1);
        assert!(is_faithful(&r.projection));
        assert!(validate_nat(&r.phi).passed());
    }

    #[test]
    fn inserter_factorization_through_itself_is_identity() {
        let c = arrow();
        let id = Functor::identity(c.clone());
        let r = inserter(&id, &id).unwrap();
        let h = inserter_factorize(&r, &r.projection, &r.phi).unwrap();
        assert_eq!(h, Functor::identity(r.ins.clone()));
    }

    #[test]
    fn equifier_of_equal_transformations_is_everything() {
        let c = arrow();
        let id = Functor::identity(c.clone());
        let phi = NatTrans::identity(&id);
        let e = equifier(&phi, &phi).unwrap();
        assert_eq!(*e.eq, *c);
        let back = equifier_factorize(&e, &e.inclusion).unwrap();
        assert_eq!(back, Functor::identity(e.eq.clone()));
    }

    #[test]
    fn equifier_factorize_reports_disagreement() {
        // two parallel transformations Id => Id on a one-object monoid
        let mut b = CategoryBuilder::new("M");
        b.object("X").morphism("s", "X", "X").compose("s", "s", "s");
        let m = Arc::new(b.build().unwrap());
        let id = Functor::identity(m.clone());
        let s = m.morphism_id("s").unwrap();
        let phi = NatTrans::identity(&id);
        let psi = NatTrans::new(id.clone(), id.clone(), vec![s]).unwrap();
        assert!(validate_nat(&psi).passed());
        let e = equifier(&phi, &psi).unwrap();
        assert_eq!(e.eq.object_count(), 0);
        assert!(matches!(
            equifier_factorize(&e, &id),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn disjoint_points_have_empty_pullback_but_not_pseudopullback() {
        let a = point("P", &["a"]);
        let b = point("Q", &["b"]);
        assert_eq!(pullback(&a, &b).unwrap().cat().object_count(), 0);
        assert_eq!(pseudopullback(&a, &b).unwrap().cat.cat().object_count(), 1);
        let v = compare_pb_psb(&a, &b).unwrap();
        assert_eq!(v.law(), Some("essentially-surjective"));
    }

    #[test]
    fn transportable_legs_give_equivalence() {
        let u = Universe::new(["a", "b"]);
        let a = make_transportable(&point("P", &["a"]), &u).unwrap();
        let b = make_transportable(&point("Q", &["b"]), &u).unwrap();
        assert!(compare_pb_psb(&a, &b).unwrap().passed());
    }

    #[test]
    fn pullback_of_self_contains_diagonal() {
        let c = arrow();
        let carriers = vec![vec!["x".into()], vec!["x".into(), "y".into()]];
        let f = c.morphism_id("f").unwrap();
        let mut actions = vec![None; c.morphism_count()];
        actions[f] = Some(BTreeMap::from([("x".to_string(), "x".to_string())]));
        let k = ConcreteCategory::new(c, carriers, actions).unwrap();
        let pb = pullback(&k, &k).unwrap();
        assert!(pb.cat().object_id("(A,A)").is_some());
        assert!(pb.cat().object_id("(B,B)").is_some());
        assert!(validate_category(pb.cat()).passed());
        let three = multiple_pullback(&[k.clone(), k.clone(), k]).unwrap();
        assert!(three.cat().object_id(&tuple_name(&["(A,A)", "A"])).is_some());
        assert_eq!(three.cat().object_count(), 2);
    }
}
