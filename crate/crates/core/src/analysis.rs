//! Concreteness and subconcreteness of functors between concrete
//! categories, induced signature morphisms and reducts, and functor-level
//! coherence and transportability.

use std::collections::{BTreeSet, HashMap};
use std::sync::atomic::{AtomicU64, Ordering};

use rayon::prelude::*;
use serde::Serialize;

use crate::category::{MorId, ObjId};
use crate::combinat::cartesian;
use crate::concrete::ConcreteCategory;
use crate::error::{Error, Result};
use crate::functor::{compose_functors, validate_functor, Functor};
use crate::naming::map_name;
use crate::signature::{
    check_natural_mono, symbol_laws, EmbCategory, RelationSymbol, SigmaStructure, Signature,
    Tuple,
};
use crate::verdict::{VerdictReport, Violation};

/// A functor together with the concrete structures on both ends.
#[derive(Clone, Debug)]
pub struct ConcreteFunctor {
    pub h: Functor,
    pub source: ConcreteCategory,
    pub target: ConcreteCategory,
}

impl ConcreteFunctor {
    pub fn new(h: Functor, source: ConcreteCategory, target: ConcreteCategory) -> Result<Self> {
        if **h.source() != **source.cat() || **h.target() != **target.cat() {
            return Err(Error::Mismatch(
                "functor endpoints differ from the concrete categories".into(),
            ));
        }
        Ok(ConcreteFunctor { h, source, target })
    }

    pub fn identity(k: &ConcreteCategory) -> Self {
        ConcreteFunctor {
            h: Functor::identity(k.cat().clone()),
            source: k.clone(),
            target: k.clone(),
        }
    }

    /// `U₂(H A)`.
    pub fn image_carrier(&self, a: ObjId) -> &[String] {
        self.target.carrier(self.h.obj(a))
    }

    /// `U₂(H f)`.
    pub fn image_action(&self, f: MorId) -> &[usize] {
        self.target.action(self.h.mor(f))
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &ConcreteFunctor) -> Result<ConcreteFunctor> {
        Ok(ConcreteFunctor {
            h: compose_functors(&self.h, &other.h)?,
            source: self.source.clone(),
            target: other.target.clone(),
        })
    }
}

/// `U₂∘H = U₁` on objects and morphisms.
pub fn is_concrete(cf: &ConcreteFunctor) -> bool {
    let c1 = cf.source.cat();
    c1.object_ids().all(|a| cf.image_carrier(a) == cf.source.carrier(a))
        && c1.morphism_ids().all(|f| cf.image_action(f) == cf.source.action(f))
}

/// Components `α_A: U₂HA -> U₁A` of a natural monotransformation, as
/// positions.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SubconcretenessWitness {
    pub components: Vec<Vec<usize>>,
}

impl SubconcretenessWitness {
    pub fn identity(k: &ConcreteCategory) -> Self {
        SubconcretenessWitness {
            components: k
                .cat()
                .object_ids()
                .map(|a| (0..k.carrier(a).len()).collect())
                .collect(),
        }
    }

    /// Image of `α_A` inside `U₁A`.
    pub fn image(&self, a: ObjId) -> BTreeSet<usize> {
        self.components[a].iter().copied().collect()
    }

    /// `α^H_A ∘ α^G_{HA}` for `G∘H`.
    pub fn then(&self, h: &Functor, next: &SubconcretenessWitness) -> SubconcretenessWitness {
        SubconcretenessWitness {
            components: self
                .components
                .iter()
                .enumerate()
                .map(|(a, alpha)| next.components[h.obj(a)].iter().map(|&x| alpha[x]).collect())
                .collect(),
        }
    }

    /// Element-name rendering of `α_A`.
    pub fn describe(&self, cf: &ConcreteFunctor, a: ObjId) -> String {
        let pairs: Vec<(&str, &str)> = self.components[a]
            .iter()
            .enumerate()
            .map(|(i, &p)| (cf.image_carrier(a)[i].as_str(), cf.source.carrier(a)[p].as_str()))
            .collect();
        map_name(&pairs)
    }
}

/// Injectivity, naturality and reflection of a witness.
pub fn validate_witness(cf: &ConcreteFunctor, w: &SubconcretenessWitness) -> VerdictReport {
    let r = check_natural_mono(&cf.h, &cf.source, &cf.target, &w.components)
        .and_then(|()| reflection(cf, w));
    VerdictReport::from_result("subconcrete-witness", r)
}

fn reflection(cf: &ConcreteFunctor, w: &SubconcretenessWitness) -> std::result::Result<(), Violation> {
    let c1 = cf.source.cat();
    let images: Vec<BTreeSet<usize>> = c1.object_ids().map(|a| w.image(a)).collect();
    for f in c1.morphism_ids() {
        let (a, b) = (c1.dom(f), c1.cod(f));
        let act = cf.source.action(f);
        for x in 0..act.len() {
            if !images[a].contains(&x) && images[b].contains(&act[x]) {
                return Err(Violation::new(
                    "reflection",
                    vec![c1.morphism_name(f).into(), cf.source.carrier(a)[x].clone()],
                    "element outside the image is sent into the image",
                ));
            }
        }
    }
    Ok(())
}

/// Result of a budgeted witness search.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum WitnessSearch {
    Found(SubconcretenessWitness),
    NotFound,
    /// Budget ran out before the search space was exhausted.
    Unknown { explored: u64 },
}

impl WitnessSearch {
    pub fn witness(&self) -> Option<&SubconcretenessWitness> {
        match self {
            WitnessSearch::Found(w) => Some(w),
            _ => None,
        }
    }
}

/// Default node budget of [`find_subconcrete_witness`].
pub const DEFAULT_WITNESS_BUDGET: u64 = 2_000_000;

struct Search<'a> {
    cf: &'a ConcreteFunctor,
    slots: Vec<(ObjId, usize)>,
    outs: Vec<Vec<MorId>>,
    budget: u64,
    nodes: u64,
    shared: &'a AtomicU64,
}

type Partial = Vec<Vec<Option<usize>>>;

impl Search<'_> {
    /// Assign `α_a(x) = v` and propagate along morphisms out of `a`.
    /// Returns the assignments made, or `None` on a conflict (after undoing).
    fn assign(&self, alpha: &mut Partial, a: ObjId, x: usize, v: usize) -> Option<Vec<(ObjId, usize)>> {
        let c1 = self.cf.source.cat();
        let mut made = Vec::new();
        let mut queue = vec![(a, x, v)];
        while let Some((a, x, v)) = queue.pop() {
            match alpha[a][x] {
                Some(old) if old == v => continue,
                Some(_) => {
                    undo(alpha, &made);
                    return None;
                }
                None => {}
            }
            if alpha[a].contains(&Some(v)) {
                undo(alpha, &made);
                return None;
            }
            alpha[a][x] = Some(v);
            made.push((a, x));
            for &f in &self.outs[a] {
                let b = c1.cod(f);
                queue.push((b, self.cf.image_action(f)[x], self.cf.source.action(f)[v]));
            }
        }
        Some(made)
    }

    fn complete(&self, alpha: &Partial) -> Option<SubconcretenessWitness> {
        let w = SubconcretenessWitness {
            components: alpha
                .iter()
                .map(|c| c.iter().map(|v| v.expect("complete")).collect())
                .collect(),
        };
        reflection(self.cf, &w).ok().map(|()| w)
    }

    /// Depth-first over slots in order, values ascending.
    fn run(&mut self, alpha: &mut Partial, from: usize) -> std::result::Result<Option<SubconcretenessWitness>, ()> {
        let next = (from..self.slots.len()).find(|&i| {
            let (a, x) = self.slots[i];
            alpha[a][x].is_none()
        });
        let Some(i) = next else {
            return Ok(self.complete(alpha));
        };
        let (a, x) = self.slots[i];
        for v in 0..self.cf.source.carrier(a).len() {
            self.nodes += 1;
            if self.nodes > self.budget {
                return Err(());
            }
            if let Some(made) = self.assign(alpha, a, x, v) {
                let r = self.run(alpha, i + 1);
                undo(alpha, &made);
                match r {
                    Ok(Some(w)) => return Ok(Some(w)),
                    Ok(None) => {}
                    Err(()) => return Err(()),
                }
            }
        }
        Ok(None)
    }
}

fn undo(alpha: &mut Partial, made: &[(ObjId, usize)]) {
    for &(a, x) in made {
        alpha[a][x] = None;
    }
}

/// Search for a natural monotransformation `U₂∘H => U₁` satisfying the
/// reflection condition. Components are explored in canonical order, so the
/// first witness found is the lexicographically least one.
pub fn find_subconcrete_witness(cf: &ConcreteFunctor, budget: u64) -> WitnessSearch {
    let c1 = cf.source.cat();
    if c1.object_ids().any(|a| cf.image_carrier(a).len() > cf.source.carrier(a).len()) {
        return WitnessSearch::NotFound;
    }
    let outs: Vec<Vec<MorId>> = c1.object_ids().map(|a| c1.hom_from(a)).collect();
    let slots: Vec<(ObjId, usize)> = c1
        .object_ids()
        .flat_map(|a| (0..cf.image_carrier(a).len()).map(move |x| (a, x)))
        .collect();
    let shared = AtomicU64::new(0);
    let empty: Partial = c1
        .object_ids()
        .map(|a| vec![None; cf.image_carrier(a).len()])
        .collect();
    let Some(&(a0, x0)) = slots.first() else {
        let mut s = Search { cf, slots, outs, budget, nodes: 0, shared: &shared };
        return match s.run(&mut empty.clone(), 0) {
            Ok(Some(w)) => WitnessSearch::Found(w),
            Ok(None) => WitnessSearch::NotFound,
            Err(()) => WitnessSearch::Unknown { explored: 0 },
        };
    };
    // shard by the value of the first slot
    let shards = cf.source.carrier(a0).len() as u64;
    let per_shard = budget / shards.max(1);
    let results: Vec<std::result::Result<Option<SubconcretenessWitness>, ()>> = (0..cf
        .source
        .carrier(a0)
        .len())
        .into_par_iter()
        .map(|v| {
            let mut s = Search {
                cf,
                slots: slots.clone(),
                outs: outs.clone(),
                budget: per_shard,
                nodes: 0,
                shared: &shared,
            };
            let mut alpha = empty.clone();
            s.nodes = 1;
            let r = if s.nodes > s.budget {
                Err(())
            } else {
                match s.assign(&mut alpha, a0, x0, v) {
                    Some(_) => s.run(&mut alpha, 1),
                    None => Ok(None),
                }
            };
            s.shared.fetch_add(s.nodes, Ordering::Relaxed);
            r
        })
        .collect();
    let explored = shared.load(Ordering::Relaxed);
    let mut unknown = false;
    for r in results {
        match r {
            Ok(Some(w)) => return WitnessSearch::Found(w),
            Ok(None) => {}
            Err(()) => unknown = true,
        }
    }
    if unknown {
        WitnessSearch::Unknown { explored }
    } else {
        WitnessSearch::NotFound
    }
}

/// `R ↦ RH` from `Σ_{K₂}` into `Σ_{K₁}`, with `(RH)_A = α_A^n(R_{HA})`.
#[derive(Clone, Debug)]
pub struct SignatureMorphism {
    /// `(R, RH)` pairs in the order of the source signature.
    pub map: Vec<(RelationSymbol, RelationSymbol)>,
    /// Image of the carrier, `(U₂H)_A = α_A(U₂HA)`.
    pub carrier_symbol: RelationSymbol,
    /// Image symbols that failed the symbol conditions over `K₁`.
    pub anomalies: Vec<Violation>,
}

impl SignatureMorphism {
    /// The target-side signature: the carrier symbol followed by the images.
    pub fn image_signature(&self) -> Signature {
        let mut symbols = vec![self.carrier_symbol.clone()];
        symbols.extend(self.map.iter().map(|(_, r)| r.clone()));
        Signature::new(symbols).expect("image names are distinct")
    }

    pub fn source_signature(&self) -> Signature {
        Signature::new(self.map.iter().map(|(r, _)| r.clone()).collect())
            .expect("source names are distinct")
    }
}

pub fn induced_signature_morphism(
    cf: &ConcreteFunctor,
    w: &SubconcretenessWitness,
    sigma2: &Signature,
) -> SignatureMorphism {
    let c1 = cf.source.cat();
    let push = |r: &RelationSymbol, name: String| RelationSymbol {
        name,
        arity: r.arity,
        interp: c1
            .object_ids()
            .map(|a| {
                r.interp[cf.h.obj(a)]
                    .iter()
                    .map(|t| t.iter().map(|&x| w.components[a][x]).collect())
                    .collect()
            })
            .collect(),
    };
    let mut anomalies = Vec::new();
    let mut map = Vec::with_capacity(sigma2.len());
    for r in sigma2.symbols() {
        let image = push(r, format!("{}·H", r.name));
        if let Err(v) = symbol_laws(&cf.source, &image) {
            anomalies.push(v);
        }
        map.push((r.clone(), image));
    }
    let carrier_symbol = RelationSymbol {
        name: "U₂·H".into(),
        arity: 1,
        interp: c1
            .object_ids()
            .map(|a| w.components[a].iter().map(|&x| vec![x]).collect())
            .collect(),
    };
    if let Err(v) = symbol_laws(&cf.source, &carrier_symbol) {
        anomalies.push(v);
    }
    SignatureMorphism {
        map,
        carrier_symbol,
        anomalies,
    }
}

/// `Emb(H̄)` restricted to finitely many structures.
#[derive(Clone, Debug)]
pub struct Reduct {
    pub target: EmbCategory,
    pub functor: Functor,
    /// Carrier inclusion `reduct(X) ↪ X` per source structure; witnesses
    /// that the reduct is subconcrete.
    pub inclusion: SubconcretenessWitness,
}

/// The reduct of one structure over the image signature (carrier symbol
/// first): keep the designated carrier, restrict the remaining relations.
pub fn reduct_structure(x: &SigmaStructure) -> (SigmaStructure, Vec<usize>) {
    let keep: Vec<usize> = x.relations[0].iter().map(|t| t[0]).collect();
    let mut pos = vec![usize::MAX; x.carrier.len()];
    for (i, &p) in keep.iter().enumerate() {
        pos[p] = i;
    }
    let relations = x.relations[1..]
        .iter()
        .map(|r| {
            r.iter()
                .filter(|t| t.iter().all(|&e| pos[e] != usize::MAX))
                .map(|t| t.iter().map(|&e| pos[e]).collect::<Tuple>())
                .collect()
        })
        .collect();
    (
        SigmaStructure {
            carrier: keep.iter().map(|&p| x.carrier[p].clone()).collect(),
            relations,
        },
        keep,
    )
}

/// Reduct functor from an Emb category over `sm.image_signature()` to one
/// over `sm.source_signature()`, materialized on the reducts.
pub fn reduct_functor(source: &EmbCategory) -> Result<Reduct> {
    let cat = source.cat.cat();
    let mut structures: Vec<SigmaStructure> = Vec::new();
    let mut names = Vec::new();
    let mut obj_map = Vec::new();
    let mut inclusion = Vec::new();
    for (x, s) in source.structures.iter().enumerate() {
        if s.relations.first().map_or(true, |r| r.iter().any(|t| t.len() != 1)) {
            return Err(Error::Precondition(
                "source signature must start with a unary carrier symbol".into(),
            ));
        }
        let (r, keep) = reduct_structure(s);
        inclusion.push(keep);
        match structures.iter().position(|d| *d == r) {
            Some(i) => obj_map.push(i),
            None => {
                obj_map.push(structures.len());
                structures.push(r);
                names.push(format!("red({})", cat.object_name(x)));
            }
        }
    }
    let target = EmbCategory::on(&format!("red({})", cat.name()), names, structures)?;
    let mut mor_map = Vec::with_capacity(cat.morphism_count());
    for f in cat.morphism_ids() {
        let (x, y) = (cat.dom(f), cat.cod(f));
        let act = source.cat.action(f);
        let restricted: Option<Vec<usize>> = inclusion[x]
            .iter()
            .map(|&p| inclusion[y].iter().position(|&q| q == act[p]))
            .collect();
        let restricted = restricted.ok_or_else(|| {
            Error::Structure("embedding does not preserve the carrier symbol".into())
        })?;
        let lift = target
            .cat
            .lifts(obj_map[x], obj_map[y], &restricted)
            .first()
            .copied()
            .ok_or_else(|| Error::Structure("restricted map is not an embedding".into()))?;
        mor_map.push(lift);
    }
    let functor = Functor::new(cat.clone(), target.cat.cat().clone(), obj_map, mor_map)?;
    Ok(Reduct {
        target,
        functor,
        inclusion: SubconcretenessWitness {
            components: inclusion,
        },
    })
}

/// Compares `reduct(E₁A)` with `E₂(HA)` renamed along `α_A`, for every
/// object and morphism of `K₁`. With `α` the identity this is the square
/// `U₂∘H = carrier∘reduct∘E₁` on the nose.
pub fn reduct_square(
    cf: &ConcreteFunctor,
    w: &SubconcretenessWitness,
    sm: &SignatureMorphism,
) -> VerdictReport {
    let c1 = cf.source.cat();
    let image_sig = sm.image_signature();
    let source_sig = sm.source_signature();
    for a in c1.object_ids() {
        let (red, keep) = reduct_structure(&SigmaStructure::of(&cf.source, &image_sig, a));
        let e2 = SigmaStructure::of(&cf.target, &source_sig, cf.h.obj(a));
        let names: Vec<String> = w.components[a]
            .iter()
            .map(|&p| cf.source.carrier(a)[p].clone())
            .collect();
        if red != e2.transport(&names) {
            return VerdictReport::fail(
                "reduct-square",
                Violation::new(
                    "object",
                    vec![c1.object_name(a).into()],
                    "reduct of E₁A differs from E₂HA along α",
                ),
            );
        }
        debug_assert_eq!(keep.len(), names.len());
    }
    for f in c1.morphism_ids() {
        let (a, b) = (c1.dom(f), c1.cod(f));
        // α_B ∘ U₂Hf = U₁f ∘ α_A is naturality; the reduct acts as U₁f on the image
        let ok = (0..w.components[a].len()).all(|x| {
            w.components[b][cf.image_action(f)[x]] == cf.source.action(f)[w.components[a][x]]
        });
        if !ok {
            return VerdictReport::fail(
                "reduct-square",
                Violation::new(
                    "morphism",
                    vec![c1.morphism_name(f).into()],
                    "reduct of E₁f differs from E₂Hf along α",
                ),
            );
        }
    }
    VerdictReport::pass("reduct-square")
}

/// Every triangle `U₂H(g)∘f = U₂H(h)` with `h: A -> C`, `g: B -> C` in `K₁`
/// lifts to some `f̄: A -> B` with `U₂H(f̄) = f`. The witness is required
/// (the check is only meaningful for subconcrete functors) and validated.
pub fn is_coherent_functor(cf: &ConcreteFunctor, w: &SubconcretenessWitness) -> Result<VerdictReport> {
    let v = validate_witness(cf, w);
    if let Some(viol) = v.violation {
        return Err(Error::Precondition(format!("witness rejected: {viol}")));
    }
    let c1 = cf.source.cat();
    let mut lifts: HashMap<(ObjId, ObjId, &[usize]), ()> = HashMap::new();
    for m in c1.morphism_ids() {
        lifts.insert((c1.dom(m), c1.cod(m), cf.image_action(m)), ());
    }
    let into: Vec<Vec<MorId>> = c1.object_ids().map(|c| c1.hom_into(c)).collect();
    let failure = c1.object_ids().into_par_iter().find_map_first(|c| {
        for &h in &into[c] {
            for &g in &into[c] {
                let (a, b) = (c1.dom(h), c1.dom(g));
                let uh = cf.image_action(h);
                let ug = cf.image_action(g);
                let nb = cf.image_carrier(b).len();
                let mut choices = Vec::with_capacity(uh.len());
                for &t in uh {
                    choices.push((0..nb).filter(|&y| ug[y] == t).collect::<Vec<_>>());
                }
                if choices.iter().any(Vec::is_empty) {
                    continue;
                }
                for f in cartesian(&choices) {
                    if !lifts.contains_key(&(a, b, f.as_slice())) {
                        let pairs: Vec<(&str, &str)> = f
                            .iter()
                            .enumerate()
                            .map(|(i, &p)| {
                                (cf.image_carrier(a)[i].as_str(), cf.image_carrier(b)[p].as_str())
                            })
                            .collect();
                        return Some(Violation::new(
                            "triangle",
                            vec![c1.morphism_name(h).into(), c1.morphism_name(g).into(), map_name(&pairs)],
                            format!(
                                "no morphism {} -> {} over the function",
                                c1.object_name(a),
                                c1.object_name(b)
                            ),
                        ));
                    }
                }
            }
        }
        None
    });
    Ok(match failure {
        None => VerdictReport::pass("coherent-functor"),
        Some(v) => VerdictReport::fail("coherent-functor", v),
    })
}

/// Every isomorphism `f: HA -> B` of `K₂` is `H(f̄)` for an isomorphism
/// `f̄: A -> B̄` of `K₁`.
pub fn is_transportable_functor(cf: &ConcreteFunctor) -> VerdictReport {
    let (c1, c2) = (cf.source.cat(), cf.target.cat());
    for a in c1.object_ids() {
        for &f in &c2.hom_from(cf.h.obj(a)) {
            if !c2.is_iso(f) {
                continue;
            }
            let lifted = c1
                .hom_from(a)
                .into_iter()
                .any(|m| c1.is_iso(m) && cf.h.mor(m) == f);
            if !lifted {
                return VerdictReport::fail(
                    "transportable-functor",
                    Violation::new(
                        "iso-lift",
                        vec![c1.object_name(a).into(), c2.morphism_name(f).into()],
                        "isomorphism out of HA is not the image of an isomorphism out of A",
                    ),
                );
            }
        }
    }
    VerdictReport::pass("transportable-functor")
}

/// Functor laws, then witness search; `Unknown` when the budget runs out.
pub fn classify_functor(cf: &ConcreteFunctor, budget: u64) -> (VerdictReport, WitnessSearch) {
    let laws = validate_functor(&cf.h);
    if !laws.passed() {
        return (laws, WitnessSearch::NotFound);
    }
    (laws, find_subconcrete_witness(cf, budget))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::category::{CategoryBuilder, FinCategory};
    use crate::limits::product;
    use std::collections::BTreeMap;
    use std::sync::Arc;

    fn point(name: &str, elems: &[&str]) -> ConcreteCategory {
        ConcreteCategory::new(
            Arc::new(FinCategory::terminal(name)),
            vec![elems.iter().map(|s| s.to_string()).collect()],
            vec![None],
        )
        .unwrap()
    }

    #[test]
    fn identity_is_concrete_with_identity_witness() {
        let k = point("P", &["a", "b"]);
        let cf = ConcreteFunctor::identity(&k);
        assert!(is_concrete(&cf));
        let w = find_subconcrete_witness(&cf, DEFAULT_WITNESS_BUDGET);
        assert_eq!(w.witness(), Some(&SubconcretenessWitness::identity(&k)));
        assert!(is_coherent_functor(&cf, w.witness().unwrap()).unwrap().passed());
        assert!(is_transportable_functor(&cf).passed());
    }

    #[test]
    fn product_projection_has_coproduct_injection() {
        let a = point("P", &["x"]);
        let b = point("Q", &["y", "z"]);
        let p = product(&[a.clone(), b.clone()]).unwrap();
        let cf = ConcreteFunctor::new(p.projections[1].clone(), p.prod.clone(), b).unwrap();
        assert!(!is_concrete(&cf));
        let w = find_subconcrete_witness(&cf, DEFAULT_WITNESS_BUDGET);
        // a single object: any injection is natural, the least one wins
        assert_eq!(w.witness().unwrap().components[0], vec![0, 1]);
        // U(P,Q) = {0:x, 1:y, 1:z}; the coproduct injection is a witness too
        let inj = SubconcretenessWitness {
            components: vec![vec![1, 2]],
        };
        assert!(validate_witness(&cf, &inj).passed());
    }

    #[test]
    fn too_small_source_carrier_has_no_witness() {
        let a = point("P", &["x"]);
        let b = point("Q", &["y", "z"]);
        let h = Functor::new(a.cat().clone(), b.cat().clone(), vec![0], vec![0]).unwrap();
        let cf = ConcreteFunctor::new(h, a, b).unwrap();
        assert_eq!(find_subconcrete_witness(&cf, DEFAULT_WITNESS_BUDGET), WitnessSearch::NotFound);
    }

    #[test]
    fn tiny_budget_is_unknown() {
        let a = point("P", &["x", "y", "z"]);
        let b = point("Q", &["u", "v"]);
        let h = Functor::new(a.cat().clone(), b.cat().clone(), vec![0], vec![0]).unwrap();
        let cf = ConcreteFunctor::new(h, a, b).unwrap();
        assert!(matches!(find_subconcrete_witness(&cf, 1), WitnessSearch::Unknown { .. }));
        assert!(find_subconcrete_witness(&cf, 1000).witness().is_some());
    }

    #[test]
    fn reflection_can_rule_out_witnesses() {
        // K₁: f: A -> B with A = {a}, B = {a, b}; K₂: Y = {y} (terminal)
        // α_B must hit the image of f or fail reflection
        let mut bld = CategoryBuilder::new("K");
        bld.object("A").object("B").morphism("f", "A", "B");
        let cat = Arc::new(bld.build().unwrap());
        let f = cat.morphism_id("f").unwrap();
        let mut actions = vec![None; cat.morphism_count()];
        actions[f] = Some(BTreeMap::from([("a".to_string(), "a".to_string())]));
        let k1 = ConcreteCategory::new(
            cat.clone(),
            vec![vec!["a".into()], vec!["a".into(), "b".into()]],
            actions,
        )
        .unwrap();
        let k2 = point("Y", &["y"]);
        let t = k2.cat().clone();
        let h = Functor::constant(cat, t, 0);
        let cf = ConcreteFunctor::new(h, k1, k2).unwrap();
        let w = find_subconcrete_witness(&cf, DEFAULT_WITNESS_BUDGET);
        let w = w.witness().unwrap();
        assert_eq!(w.components, vec![vec![0], vec![0]]);
        let bad = SubconcretenessWitness {
            components: vec![vec![0], vec![1]],
        };
        assert!(validate_witness(&cf, &bad).failed());
    }
}
