//! Seeded random instances: categories, concrete structure, structure
//! categories closed under renaming, reducts between them, functors and
//! natural transformations.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::config::{GenError, GeneratorConfig, Requirement};
use crate::category::{FinCategory, Morphism, MorId, ObjId};
use crate::combinat::injections;
use crate::concrete::{
    has_concrete_monos, is_coherent, is_faithful_u, is_transportable, ConcreteCategory, Universe,
};
use crate::error::{Error, Result};
use crate::functor::{Functor, NatTrans};
use crate::signature::{classify_aec, EmbCategory, SigmaStructure};
use crate::signature::Tuple;

/// `a, b, ..., z, e26, e27, ...`
pub fn element_pool(n: usize) -> Vec<String> {
    (0..n)
        .map(|i| {
            if i < 26 {
                ((b'a' + i as u8) as char).to_string()
            } else {
                format!("e{i}")
            }
        })
        .collect()
}

/// `A, B, ..., Z, O26, ...`
pub fn object_label(i: usize) -> String {
    if i < 26 {
        ((b'A' + i as u8) as char).to_string()
    } else {
        format!("O{i}")
    }
}

/// Concrete category whose morphisms are named functions. Identities that
/// are missing from `arrows` are appended as `id_<object>`; composition is
/// composition of functions, so `arrows` must be closed under it.
pub fn concrete_from_functions(
    name: &str,
    objects: Vec<String>,
    carriers: Vec<Vec<String>>,
    arrows: Vec<(String, ObjId, ObjId, Vec<usize>)>,
) -> Result<ConcreteCategory> {
    let n = objects.len();
    let mut morphisms = Vec::new();
    let mut actions = Vec::new();
    let mut index: HashMap<(ObjId, ObjId, Vec<usize>), MorId> = HashMap::new();
    for (m, d, c, f) in arrows {
        if index.insert((d, c, f.clone()), morphisms.len()).is_some() {
            return Err(Error::Structure(format!("arrow `{m}` repeats a function")));
        }
        morphisms.push(Morphism { name: m, dom: d, cod: c });
        actions.push(f);
    }
    let mut identities = Vec::with_capacity(n);
    for a in 0..n {
        let id: Vec<usize> = (0..carriers[a].len()).collect();
        let i = match index.get(&(a, a, id.clone())) {
            Some(&i) => i,
            None => {
                index.insert((a, a, id.clone()), morphisms.len());
                morphisms.push(Morphism {
                    name: format!("id_{}", objects[a]),
                    dom: a,
                    cod: a,
                });
                actions.push(id);
                morphisms.len() - 1
            }
        };
        identities.push(i);
    }
    let mut outs = vec![Vec::new(); n];
    for (i, m) in morphisms.iter().enumerate() {
        outs[m.dom].push(i);
    }
    let mut compose = HashMap::new();
    for f in 0..morphisms.len() {
        for &g in &outs[morphisms[f].cod] {
            let act: Vec<usize> = actions[f].iter().map(|&x| actions[g][x]).collect();
            let key = (morphisms[f].dom, morphisms[g].cod, act);
            let h = *index
                .get(&key)
                .ok_or_else(|| Error::Structure("arrows are not closed under composition".into()))?;
            compose.insert((g, f), h);
        }
    }
    let cat = FinCategory::from_parts(name, objects, morphisms, identities, compose)?;
    ConcreteCategory::from_positions(Arc::new(cat), carriers, actions)
}

fn random_subset(rng: &mut ChaCha8Rng, pool: &[String], size: usize) -> Vec<String> {
    let mut s: Vec<String> = pool.choose_multiple(rng, size).cloned().collect();
    s.sort();
    s
}

fn random_injection(rng: &mut ChaCha8Rng, n: usize, m: usize) -> Vec<usize> {
    let mut cod: Vec<usize> = (0..m).collect();
    cod.shuffle(rng);
    cod.truncate(n);
    cod
}

fn within_bounds(k: &ConcreteCategory, cfg: &GeneratorConfig) -> bool {
    let c = k.cat();
    c.object_count() <= cfg.max_objects
        && c.morphism_count() <= cfg.max_morphisms
        && c.object_ids()
            .all(|a| c.object_ids().all(|b| c.hom(a, b).len() <= cfg.max_hom))
}

/// Random functions between random carriers, closed under composition.
/// `None` when the closure outgrows the bounds.
pub fn closure_category(rng: &mut ChaCha8Rng, cfg: &GeneratorConfig, injective: bool) -> Option<ConcreteCategory> {
    let n = rng.gen_range(1..=cfg.max_objects);
    let pool = element_pool(cfg.max_carrier);
    let carriers: Vec<Vec<String>> = (0..n)
        .map(|_| {
            let size = rng.gen_range(0..=cfg.max_carrier);
            random_subset(rng, &pool, size)
        })
        .collect();
    let is_identity = |d: usize, c: usize, f: &[usize]| d == c && f.iter().enumerate().all(|(i, &x)| i == x);
    let mut arrows: Vec<(usize, usize, Vec<usize>)> = Vec::new();
    let mut seen: HashSet<(usize, usize, Vec<usize>)> = HashSet::new();
    for _ in 0..rng.gen_range(0..=n + 2) {
        let (d, c) = (rng.gen_range(0..n), rng.gen_range(0..n));
        let (nd, nc) = (carriers[d].len(), carriers[c].len());
        let f: Vec<usize> = if injective {
            if nd > nc {
                continue;
            }
            random_injection(rng, nd, nc)
        } else {
            if nc == 0 && nd > 0 {
                continue;
            }
            (0..nd).map(|_| rng.gen_range(0..nc)).collect()
        };
        if !is_identity(d, c, &f) && seen.insert((d, c, f.clone())) {
            arrows.push((d, c, f));
        }
    }
    let budget = cfg.max_morphisms.saturating_sub(n);
    let mut i = 0;
    while i < arrows.len() {
        // compose the i-th arrow with everything before it, both ways
        for j in 0..=i {
            for (x, y) in [(i, j), (j, i)] {
                let (d1, c1, f1) = arrows[x].clone();
                let (d2, c2, f2) = arrows[y].clone();
                if c1 != d2 {
                    continue;
                }
                let h: Vec<usize> = f1.iter().map(|&p| f2[p]).collect();
                if !is_identity(d1, c2, &h) && seen.insert((d1, c2, h.clone())) {
                    arrows.push((d1, c2, h));
                    if arrows.len() > budget {
                        return None;
                    }
                }
            }
        }
        i += 1;
    }
    if arrows.len() > budget {
        return None;
    }
    let objects: Vec<String> = (0..n).map(object_label).collect();
    let named = arrows
        .into_iter()
        .enumerate()
        .map(|(i, (d, c, f))| (format!("f{i}"), d, c, f))
        .collect();
    let k = concrete_from_functions("K", objects, carriers, named).ok()?;
    within_bounds(&k, cfg).then_some(k)
}

/// A composition table that may break the category laws: a valid closure
/// category, possibly with one entry changed, dropped or added.
pub fn random_table(rng: &mut ChaCha8Rng, cfg: &GeneratorConfig) -> FinCategory {
    let k = (0..64)
        .find_map(|_| closure_category(rng, cfg, false))
        .unwrap_or_else(|| {
            ConcreteCategory::new(Arc::new(FinCategory::discrete("K", &["A"])), vec![vec![]], vec![None])
                .expect("discrete category")
        });
    let c = k.cat();
    let mut entries = c.composition_entries();
    let m = c.morphism_count();
    match rng.gen_range(0..4) {
        1 if !entries.is_empty() => {
            let i = rng.gen_range(0..entries.len());
            entries[i].2 = rng.gen_range(0..m);
        }
        2 if !entries.is_empty() => {
            let i = rng.gen_range(0..entries.len());
            entries.remove(i);
        }
        3 => {
            let (g, f) = (rng.gen_range(0..m), rng.gen_range(0..m));
            let h = rng.gen_range(0..m);
            entries.retain(|e| (e.0, e.1) != (g, f));
            entries.push((g, f, h));
        }
        _ => {}
    }
    let compose = entries.into_iter().map(|(g, f, h)| ((g, f), h)).collect();
    FinCategory::from_parts(
        "T",
        c.objects().to_vec(),
        c.morphisms().to_vec(),
        c.identities().to_vec(),
        compose,
    )
    .expect("ids stay in range")
}

/// Between zero and two relation symbols of arity 1 or 2.
pub fn random_arities(rng: &mut ChaCha8Rng) -> Vec<usize> {
    (0..rng.gen_range(0..=2)).map(|_| rng.gen_range(1..=2)).collect()
}

pub fn random_structure(
    rng: &mut ChaCha8Rng,
    pool: &[String],
    arities: &[usize],
    size: usize,
) -> SigmaStructure {
    let carrier = random_subset(rng, pool, size);
    let n = carrier.len();
    let relations = arities
        .iter()
        .map(|&r| {
            let total = n.pow(r as u32);
            (0..total)
                .filter(|_| rng.gen_bool(0.35))
                .map(|code| crate::combinat::decode_tuple(code, n, r))
                .collect()
        })
        .collect();
    SigmaStructure { carrier, relations }
}

/// Structure category on random structures (not closed under renaming).
/// With `preserve_only`, morphisms are injective maps that preserve but
/// need not reflect the relations, which is often not coherent.
pub fn emb_family(rng: &mut ChaCha8Rng, cfg: &GeneratorConfig, preserve_only: bool) -> Option<ConcreteCategory> {
    let arities = random_arities(rng);
    let pool = element_pool(cfg.max_carrier);
    let n = rng.gen_range(1..=cfg.max_objects);
    let structures: BTreeSet<SigmaStructure> = (0..n)
        .map(|_| {
            let size = rng.gen_range(0..=cfg.max_carrier);
            random_structure(rng, &pool, &arities, size)
        })
        .collect();
    let structures: Vec<SigmaStructure> = structures.into_iter().collect();
    let names: Vec<String> = (0..structures.len()).map(|i| format!("S{i}")).collect();
    let k = if preserve_only {
        let mut arrows = Vec::new();
        for (x, sx) in structures.iter().enumerate() {
            for (y, sy) in structures.iter().enumerate() {
                for phi in injections(sx.carrier.len(), sy.carrier.len()) {
                    if preserves(sx, sy, &phi) && !(x == y && phi.iter().enumerate().all(|(i, &p)| i == p)) {
                        arrows.push((format!("h{}", arrows.len()), x, y, phi));
                    }
                }
                if arrows.len() > cfg.max_morphisms {
                    return None;
                }
            }
        }
        concrete_from_functions("K", names, structures.iter().map(|s| s.carrier.clone()).collect(), arrows).ok()?
    } else {
        EmbCategory::on("K", names, structures).ok()?.cat
    };
    within_bounds(&k, cfg).then_some(k)
}

fn preserves(x: &SigmaStructure, y: &SigmaStructure, phi: &[usize]) -> bool {
    x.relations
        .iter()
        .zip(&y.relations)
        .all(|(rx, ry)| rx.iter().all(|t| ry.contains(&t.iter().map(|&e| phi[e]).collect::<Tuple>())))
}

/// A structure category closed under renaming inside `pool`, with every
/// embedding: the finite stand-in for an abstract elementary class.
#[derive(Clone, Debug)]
pub struct AecProxy {
    pub k: ConcreteCategory,
    pub arities: Vec<usize>,
    pub structures: Vec<SigmaStructure>,
    pub pool: Vec<String>,
}

impl AecProxy {
    pub fn universe(&self) -> Universe {
        Universe::new(self.pool.iter().cloned())
    }

    /// Build on the given structures (kept in sorted order), objects named
    /// `S0, S1, ...`.
    pub fn on(name: &str, arities: Vec<usize>, structures: BTreeSet<SigmaStructure>, pool: Vec<String>) -> Result<Self> {
        let structures: Vec<SigmaStructure> = structures.into_iter().collect();
        let names = (0..structures.len()).map(|i| format!("S{i}")).collect();
        let emb = EmbCategory::on(name, names, structures.clone())?;
        Ok(AecProxy {
            k: emb.cat,
            arities,
            structures,
            pool,
        })
    }

    pub fn renamed(&self, name: &str) -> AecProxy {
        AecProxy {
            k: self.k.renamed(name),
            ..self.clone()
        }
    }
}

/// Every renaming of every seed along an injection into `pool`.
pub fn iso_closure(seeds: &[SigmaStructure], pool: &[String]) -> BTreeSet<SigmaStructure> {
    let mut out = BTreeSet::new();
    for s in seeds {
        for sigma in injections(s.carrier.len(), pool.len()) {
            let names: Vec<String> = sigma.iter().map(|&p| pool[p].clone()).collect();
            out.insert(s.transport(&names));
        }
    }
    out
}

/// Random renaming-closed structure category. About one draw in seven is
/// the constructive family of all subsets of the pool with sizes in a
/// random set, with every injection.
pub fn aec_proxy(rng: &mut ChaCha8Rng, cfg: &GeneratorConfig, name: &str) -> Option<AecProxy> {
    let p = rng.gen_range(1..=cfg.max_carrier.min(3));
    let pool = element_pool(p);
    let (arities, structures) = if rng.gen_bool(1.0 / 7.0) {
        let sizes: Vec<usize> = (0..=p).filter(|_| rng.gen_bool(0.6)).collect();
        let seeds: Vec<SigmaStructure> = sizes
            .iter()
            .map(|&s| SigmaStructure {
                carrier: pool[..s].to_vec(),
                relations: vec![],
            })
            .collect();
        if seeds.is_empty() {
            return None;
        }
        (vec![], iso_closure(&seeds, &pool))
    } else {
        let arities = random_arities(rng);
        let seeds: Vec<SigmaStructure> = (0..rng.gen_range(1..=2))
            .map(|_| {
                let size = rng.gen_range(0..=p);
                random_structure(rng, &pool, &arities, size)
            })
            .collect();
        (arities.clone(), iso_closure(&seeds, &pool))
    };
    if structures.len() > cfg.max_objects {
        return None;
    }
    let aec = AecProxy::on(name, arities, structures, pool).ok()?;
    within_bounds(&aec.k, cfg).then_some(aec)
}

/// First requirement `k` fails, if any. `universe` defaults to the
/// elements of `k`.
pub fn failing_requirement(k: &ConcreteCategory, universe: Option<&Universe>, reqs: &[Requirement]) -> Option<Requirement> {
    let own;
    let universe = match universe {
        Some(u) => u,
        None => {
            own = Universe::of(k);
            &own
        }
    };
    reqs.iter().copied().find(|r| {
        !match r {
            Requirement::FaithfulU => is_faithful_u(k),
            Requirement::Coherent => is_coherent(k).passed(),
            Requirement::ConcreteMonos => has_concrete_monos(k),
            Requirement::AecProxy => classify_aec(k, 2, universe).is_ok_and(|r| r.all_passed()),
            Requirement::Transportable => is_transportable(k, universe).is_ok_and(|r| r.passed()),
        }
    })
}

/// Draw candidates until one is accepted. `draw` returns `Err(reason)` for
/// a rejected candidate.
pub fn sample<T>(
    rng: &mut ChaCha8Rng,
    max_rejections: usize,
    mut draw: impl FnMut(&mut ChaCha8Rng) -> std::result::Result<T, String>,
) -> std::result::Result<T, GenError> {
    let mut last = String::from("none");
    for _ in 0..max_rejections {
        match draw(rng) {
            Ok(t) => return Ok(t),
            Err(why) => last = why,
        }
    }
    Err(GenError {
        rejected: max_rejections,
        requirement: last,
    })
}

/// Rejection-sampled AEC-proxy, re-checked against the full ladder and
/// transportability over its pool.
pub fn sample_aec(rng: &mut ChaCha8Rng, cfg: &GeneratorConfig, name: &str) -> std::result::Result<AecProxy, GenError> {
    sample(rng, cfg.max_rejections, |rng| {
        let a = aec_proxy(rng, cfg, name).ok_or("size bounds")?;
        match failing_requirement(&a.k, Some(&a.universe()), &[Requirement::AecProxy, Requirement::Transportable]) {
            None => Ok(a),
            Some(r) => Err(r.to_string()),
        }
    })
}

/// Stream of concrete categories meeting `cfg.required`. Yields one error
/// and stops when the rejection limit is hit.
pub struct Generator {
    cfg: GeneratorConfig,
    rng: ChaCha8Rng,
    stopped: bool,
}

impl Generator {
    pub fn new(cfg: GeneratorConfig) -> Result<Self> {
        cfg.validate()?;
        let rng = cfg.rng();
        Ok(Generator {
            cfg,
            rng,
            stopped: false,
        })
    }

    fn candidate(&mut self) -> Option<(ConcreteCategory, Option<Universe>)> {
        let cfg = &self.cfg;
        let rng = &mut self.rng;
        if cfg.requires(Requirement::AecProxy) || cfg.requires(Requirement::Transportable) {
            aec_proxy(rng, cfg, "K").map(|a| {
                let u = a.universe();
                (a.k, Some(u))
            })
        } else if cfg.requires(Requirement::Coherent) || cfg.requires(Requirement::ConcreteMonos) {
            match rng.gen_range(0..3) {
                0 => emb_family(rng, cfg, false),
                1 => emb_family(rng, cfg, true),
                _ => closure_category(rng, cfg, true),
            }
            .map(|k| (k, None))
        } else {
            let injective = rng.gen_bool(0.3);
            closure_category(rng, cfg, injective).map(|k| (k, None))
        }
    }
}

impl Iterator for Generator {
    type Item = std::result::Result<ConcreteCategory, GenError>;

    fn next(&mut self) -> Option<Self::Item> {
        if self.stopped {
            return None;
        }
        let mut last = String::from("size bounds");
        for _ in 0..self.cfg.max_rejections {
            let Some((k, u)) = self.candidate() else {
                last = "size bounds".into();
                continue;
            };
            match failing_requirement(&k, u.as_ref(), &self.cfg.required) {
                None => return Some(Ok(k)),
                Some(r) => last = r.to_string(),
            }
        }
        self.stopped = true;
        Some(Err(GenError {
            rejected: self.cfg.max_rejections,
            requirement: last,
        }))
    }
}

/// Structure-level reduct: keep the symbols in `keep` and, with a
/// predicate, only the elements satisfying that unary symbol.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReductSpec {
    pub predicate: Option<usize>,
    pub keep: Vec<usize>,
}

impl ReductSpec {
    /// The reduct and the positions of its carrier inside `x`.
    pub fn apply(&self, x: &SigmaStructure) -> (SigmaStructure, Vec<usize>) {
        let positions: Vec<usize> = match self.predicate {
            Some(p) => x.relations[p].iter().map(|t| t[0]).collect(),
            None => (0..x.carrier.len()).collect(),
        };
        let mut inverse = vec![usize::MAX; x.carrier.len()];
        for (i, &p) in positions.iter().enumerate() {
            inverse[p] = i;
        }
        let relations = self
            .keep
            .iter()
            .map(|&r| {
                x.relations[r]
                    .iter()
                    .filter(|t| t.iter().all(|&e| inverse[e] != usize::MAX))
                    .map(|t| t.iter().map(|&e| inverse[e]).collect())
                    .collect()
            })
            .collect();
        let carrier = positions.iter().map(|&p| x.carrier[p].clone()).collect();
        (SigmaStructure { carrier, relations }, positions)
    }

    /// Reducts without a predicate are concrete functors.
    pub fn is_concrete(&self) -> bool {
        self.predicate.is_none()
    }
}

/// Reduct functors from one AEC-proxy into the renaming closure of their
/// joint image.
#[derive(Clone, Debug)]
pub struct ReductFamily {
    pub target: AecProxy,
    pub functors: Vec<Functor>,
    /// Carrier inclusion positions per functor and source object.
    pub inclusions: Vec<Vec<Vec<usize>>>,
}

/// All specs must keep the same symbols so the images share a signature.
pub fn reduct_family(src: &AecProxy, specs: &[ReductSpec], name: &str) -> Result<ReductFamily> {
    let keep = specs.first().map(|s| s.keep.clone()).unwrap_or_default();
    if specs.iter().any(|s| s.keep != keep) {
        return Err(Error::Precondition("reducts must keep the same symbols".into()));
    }
    for s in specs {
        if let Some(p) = s.predicate {
            if src.arities.get(p) != Some(&1) {
                return Err(Error::Precondition("predicate must be a unary symbol".into()));
            }
        }
    }
    let images: Vec<Vec<(SigmaStructure, Vec<usize>)>> = specs
        .iter()
        .map(|s| src.structures.iter().map(|x| s.apply(x)).collect())
        .collect();
    let seeds: Vec<SigmaStructure> = images.iter().flatten().map(|(s, _)| s.clone()).collect();
    let arities = keep.iter().map(|&r| src.arities[r]).collect();
    let target = AecProxy::on(name, arities, iso_closure(&seeds, &src.pool), src.pool.clone())?;
    let (c1, c2) = (src.k.cat(), target.k.cat());
    let mut functors = Vec::new();
    let mut inclusions = Vec::new();
    for imgs in &images {
        let obj_map: Vec<ObjId> = imgs
            .iter()
            .map(|(s, _)| target.structures.binary_search(s).expect("image is in the closure"))
            .collect();
        let mut mor_map = Vec::with_capacity(c1.morphism_count());
        for f in c1.morphism_ids() {
            let (a, b) = (c1.dom(f), c1.cod(f));
            let act = src.k.action(f);
            let pos_b = &imgs[b].1;
            let restricted: Vec<usize> = imgs[a]
                .1
                .iter()
                .map(|&x| pos_b.binary_search(&act[x]).expect("embeddings reflect the predicate"))
                .collect();
            let lifts = target.k.lifts(obj_map[a], obj_map[b], &restricted);
            mor_map.push(*lifts.first().ok_or_else(|| Error::Structure("restriction is not an embedding".into()))?);
        }
        functors.push(Functor::new(c1.clone(), c2.clone(), obj_map, mor_map)?);
        inclusions.push(imgs.iter().map(|(_, p)| p.clone()).collect());
    }
    Ok(ReductFamily {
        target,
        functors,
        inclusions,
    })
}

/// `count` reduct specs sharing a random set of kept symbols.
pub fn random_reduct_specs(rng: &mut ChaCha8Rng, arities: &[usize], count: usize) -> Vec<ReductSpec> {
    let keep: Vec<usize> = (0..arities.len()).filter(|_| rng.gen_bool(0.5)).collect();
    let unary: Vec<usize> = (0..arities.len()).filter(|&i| arities[i] == 1).collect();
    (0..count)
        .map(|_| ReductSpec {
            predicate: if !unary.is_empty() && rng.gen_bool(0.6) {
                unary.choose(rng).copied()
            } else {
                None
            },
            keep: keep.clone(),
        })
        .collect()
}

/// Random functor by randomized backtracking; `None` if none was found
/// within `budget` nodes per attempt.
pub fn random_functor(
    rng: &mut ChaCha8Rng,
    k: &Arc<FinCategory>,
    l: &Arc<FinCategory>,
    budget: usize,
) -> Option<Functor> {
    if l.object_count() == 0 {
        return (k.object_count() == 0)
            .then(|| Functor::new(k.clone(), l.clone(), vec![], vec![]).expect("empty functor"));
    }
    let order: Vec<MorId> = k.morphism_ids().filter(|&f| !k.is_identity(f)).collect();
    let mut involving: Vec<Vec<(MorId, MorId, MorId)>> = vec![Vec::new(); k.morphism_count()];
    for (g, f, h) in k.composition_entries() {
        for m in [g, f, h] {
            involving[m].push((g, f, h));
        }
    }
    for _ in 0..8 {
        let obj_map: Vec<ObjId> = k.object_ids().map(|_| rng.gen_range(0..l.object_count())).collect();
        let mut mor_map: Vec<Option<MorId>> = vec![None; k.morphism_count()];
        for a in k.object_ids() {
            mor_map[k.identity(a)] = Some(l.identity(obj_map[a]));
        }
        let mut nodes = 0usize;
        if assign_morphisms(rng, k, l, &obj_map, &order, 0, &mut mor_map, &involving, &mut nodes, budget) {
            let mm = mor_map.into_iter().map(Option::unwrap).collect();
            return Functor::new(k.clone(), l.clone(), obj_map, mm).ok();
        }
    }
    None
}

#[allow(clippy::too_many_arguments)]
fn assign_morphisms(
    rng: &mut ChaCha8Rng,
    k: &FinCategory,
    l: &FinCategory,
    obj_map: &[ObjId],
    order: &[MorId],
    i: usize,
    mor_map: &mut Vec<Option<MorId>>,
    involving: &[Vec<(MorId, MorId, MorId)>],
    nodes: &mut usize,
    budget: usize,
) -> bool {
    if i == order.len() {
        return true;
    }
    *nodes += 1;
    if *nodes > budget {
        return false;
    }
    let f = order[i];
    let mut cands = l.hom(obj_map[k.dom(f)], obj_map[k.cod(f)]).to_vec();
    cands.shuffle(rng);
    for c in cands {
        mor_map[f] = Some(c);
        let ok = involving[f].iter().all(|&(g, h, gh)| match (mor_map[g], mor_map[h], mor_map[gh]) {
            (Some(x), Some(y), Some(z)) => l.composite(x, y) == Some(z),
            _ => true,
        });
        if ok && assign_morphisms(rng, k, l, obj_map, order, i + 1, mor_map, involving, nodes, budget) {
            return true;
        }
        if *nodes > budget {
            break;
        }
    }
    mor_map[f] = None;
    false
}

/// Random natural transformation `f => g` by backtracking over components.
pub fn random_nat(rng: &mut ChaCha8Rng, f: &Functor, g: &Functor, budget: usize) -> Option<NatTrans> {
    let (k, l) = (f.source(), f.target());
    let mut comps: Vec<Option<MorId>> = vec![None; k.object_count()];
    let mut nodes = 0;
    fn go(
        rng: &mut ChaCha8Rng,
        f: &Functor,
        g: &Functor,
        a: usize,
        comps: &mut Vec<Option<MorId>>,
        nodes: &mut usize,
        budget: usize,
    ) -> bool {
        let (k, l) = (f.source(), f.target());
        if a == k.object_count() {
            return true;
        }
        *nodes += 1;
        if *nodes > budget {
            return false;
        }
        let mut cands = l.hom(f.obj(a), g.obj(a)).to_vec();
        cands.shuffle(rng);
        for c in cands {
            comps[a] = Some(c);
            let natural = k.morphism_ids().all(|m| {
                let (x, y) = (k.dom(m), k.cod(m));
                match (comps[x], comps[y]) {
                    (Some(cx), Some(cy)) => l.composite(g.mor(m), cx) == l.composite(cy, f.mor(m)),
                    _ => true,
                }
            });
            if natural && go(rng, f, g, a + 1, comps, nodes, budget) {
                return true;
            }
        }
        comps[a] = None;
        false
    }
    if !go(rng, f, g, 0, &mut comps, &mut nodes, budget) {
        return None;
    }
    let _ = l;
    NatTrans::new(f.clone(), g.clone(), comps.into_iter().map(Option::unwrap).collect()).ok()
}
