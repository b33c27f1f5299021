use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

use super::{sigma_basis, symbol_laws, Signature, Tuple};
use crate::category::{FinCategory, Morphism, ObjId};
use crate::combinat::injections;
use crate::concrete::{concrete_mono_gap, faithfulness_gap_u, is_coherent, ConcreteCategory, Universe};
use crate::error::{Error, Result};
use crate::functor::Functor;
use crate::naming::map_name;
use crate::verdict::{VerdictReport, Violation};

/// A finite structure for a signature: a sorted carrier and one relation
/// per symbol, in signature order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SigmaStructure {
    pub carrier: Vec<String>,
    pub relations: Vec<BTreeSet<Tuple>>,
}

impl SigmaStructure {
    pub fn of(k: &ConcreteCategory, sigma: &Signature, a: ObjId) -> Self {
        SigmaStructure {
            carrier: k.carrier(a).to_vec(),
            relations: sigma.symbols().iter().map(|s| s.interp[a].clone()).collect(),
        }
    }

    /// Rename position `i` to `names[i]` (names must be distinct).
    pub fn transport(&self, names: &[String]) -> Self {
        let mut order: Vec<usize> = (0..names.len()).collect();
        order.sort_by(|&x, &y| names[x].cmp(&names[y]));
        let mut pos = vec![0; names.len()];
        for (new, &old) in order.iter().enumerate() {
            pos[old] = new;
        }
        SigmaStructure {
            carrier: order.iter().map(|&i| names[i].clone()).collect(),
            relations: self
                .relations
                .iter()
                .map(|r| r.iter().map(|t| t.iter().map(|&x| pos[x]).collect()).collect())
                .collect(),
        }
    }

    /// Whether the injection `phi` (positions) preserves and reflects every
    /// relation.
    pub fn is_embedding(&self, other: &SigmaStructure, phi: &[usize]) -> bool {
        let mut inverse = vec![usize::MAX; other.carrier.len()];
        for (i, &p) in phi.iter().enumerate() {
            inverse[p] = i;
        }
        self.relations.iter().zip(&other.relations).all(|(rx, ry)| {
            rx.iter().all(|t| ry.contains(&t.iter().map(|&x| phi[x]).collect::<Tuple>()))
                && ry.iter().all(|u| {
                    if u.iter().any(|&y| inverse[y] == usize::MAX) {
                        return true;
                    }
                    rx.contains(&u.iter().map(|&y| inverse[y]).collect::<Tuple>())
                })
        })
    }

    fn relation_sizes(&self) -> Vec<usize> {
        self.relations.iter().map(BTreeSet::len).collect()
    }
}

/// Finitely many structures of one signature with every embedding between
/// them.
#[derive(Clone, Debug)]
pub struct EmbCategory {
    pub structures: Vec<SigmaStructure>,
    pub cat: ConcreteCategory,
}

impl EmbCategory {
    pub fn on(name: &str, names: Vec<String>, structures: Vec<SigmaStructure>) -> Result<Self> {
        let n = structures.len();
        let mut morphisms = Vec::new();
        let mut actions: Vec<Vec<usize>> = Vec::new();
        let mut index: HashMap<(usize, usize, Vec<usize>), usize> = HashMap::new();
        for x in 0..n {
            for y in 0..n {
                let (sx, sy) = (&structures[x], &structures[y]);
                for phi in injections(sx.carrier.len(), sy.carrier.len()) {
                    if sx.is_embedding(sy, &phi) {
                        let pairs: Vec<(&str, &str)> = phi
                            .iter()
                            .enumerate()
                            .map(|(i, &p)| (sx.carrier[i].as_str(), sy.carrier[p].as_str()))
                            .collect();
                        index.insert((x, y, phi.clone()), morphisms.len());
                        morphisms.push(Morphism {
                            name: format!("{}:{}>{}", map_name(&pairs), names[x], names[y]),
                            dom: x,
                            cod: y,
                        });
                        actions.push(phi);
                    }
                }
            }
        }
        let identities = (0..n)
            .map(|x| index[&(x, x, (0..structures[x].carrier.len()).collect())])
            .collect();
        let mut outs = vec![Vec::new(); n];
        for (i, m) in morphisms.iter().enumerate() {
            outs[m.dom].push(i);
        }
        let mut compose = HashMap::new();
        for f in 0..morphisms.len() {
            for &g in &outs[morphisms[f].cod] {
                let act: Vec<usize> = actions[f].iter().map(|&x| actions[g][x]).collect();
                compose.insert((g, f), index[&(morphisms[f].dom, morphisms[g].cod, act)]);
            }
        }
        let cat = FinCategory::from_parts(name, names, morphisms, identities, compose)?;
        let carriers = structures.iter().map(|s| s.carrier.clone()).collect();
        let cat = ConcreteCategory::from_positions(Arc::new(cat), carriers, actions)?;
        Ok(EmbCategory { structures, cat })
    }
}

/// `E: K -> Emb(Σ)`, `A ↦ (UA, (R_A)_R)`, with `Emb(Σ)` materialized on the
/// image structures.
#[derive(Clone, Debug)]
pub struct CanonicalEmbedding {
    pub k: ConcreteCategory,
    pub sigma: Signature,
    /// `E(A)` for every object of `k`.
    pub structures: Vec<SigmaStructure>,
    pub emb: EmbCategory,
    pub e: Functor,
}

/// Requires every symbol valid over `k` and every `U(f)` injective (so
/// that `E(f)` is an embedding).
pub fn canonical_e(k: &ConcreteCategory, sigma: &Signature) -> Result<CanonicalEmbedding> {
    for r in sigma.symbols() {
        symbol_laws(k, r).map_err(Error::Law)?;
    }
    if let Some(f) = k.cat().morphism_ids().find(|&f| !k.is_injective(f)) {
        return Err(Error::Precondition(format!(
            "U({}) is not injective, so E({0}) is not an embedding",
            k.cat().morphism_name(f)
        )));
    }
    let cat = k.cat();
    let structures: Vec<SigmaStructure> = cat
        .object_ids()
        .map(|a| SigmaStructure::of(k, sigma, a))
        .collect();
    let mut distinct: Vec<SigmaStructure> = Vec::new();
    let mut names = Vec::new();
    let mut obj_map = Vec::with_capacity(structures.len());
    for (a, s) in structures.iter().enumerate() {
        match distinct.iter().position(|d| d == s) {
            Some(i) => obj_map.push(i),
            None => {
                obj_map.push(distinct.len());
                distinct.push(s.clone());
                names.push(format!("E({})", cat.object_name(a)));
            }
        }
    }
    let emb = EmbCategory::on(&format!("Emb({})", cat.name()), names, distinct)?;
    let mor_map = cat
        .morphism_ids()
        .map(|f| {
            emb.cat.lifts(obj_map[cat.dom(f)], obj_map[cat.cod(f)], k.action(f))[0]
        })
        .collect();
    let e = Functor::new(cat.clone(), emb.cat.cat().clone(), obj_map, mor_map)?;
    Ok(CanonicalEmbedding {
        k: k.clone(),
        sigma: sigma.clone(),
        structures,
        emb,
        e,
    })
}

/// Every bijection `EA -> EB` preserving and reflecting all symbols lifts
/// to an isomorphism `A -> B` of `K`.
pub fn is_iso_full(e: &CanonicalEmbedding) -> VerdictReport {
    iso_full(&e.k, &e.structures)
}

fn iso_full(k: &ConcreteCategory, structures: &[SigmaStructure]) -> VerdictReport {
    let cat = k.cat();
    let sizes: Vec<Vec<usize>> = structures.iter().map(SigmaStructure::relation_sizes).collect();
    let failure = cat.object_ids().into_par_iter().find_map_first(|a| {
        for b in cat.object_ids() {
            let n = k.carrier(a).len();
            if k.carrier(b).len() != n || sizes[a] != sizes[b] {
                continue;
            }
            for theta in injections(n, n) {
                if !structures[a].is_embedding(&structures[b], &theta) {
                    continue;
                }
                if !k.lifts(a, b, &theta).iter().any(|&f| cat.is_iso(f)) {
                    let pairs: Vec<(&str, &str)> = theta
                        .iter()
                        .enumerate()
                        .map(|(i, &p)| (k.carrier(a)[i].as_str(), k.carrier(b)[p].as_str()))
                        .collect();
                    return Some(Violation::new(
                        "iso-lift",
                        vec![
                            cat.object_name(a).into(),
                            cat.object_name(b).into(),
                            map_name(&pairs),
                        ],
                        "structure isomorphism with no isomorphism of K over it",
                    ));
                }
            }
        }
        None
    });
    match failure {
        None => VerdictReport::pass("iso-full"),
        Some(v) => VerdictReport::fail("iso-full", v),
    }
}

/// Every renaming `X` of some `EA` inside `universe` is `EB` for an object
/// `B ≅ A`.
pub fn is_replete_e(e: &CanonicalEmbedding, universe: &Universe) -> Result<VerdictReport> {
    replete(&e.k, &e.structures, universe)
}

fn replete(
    k: &ConcreteCategory,
    structures: &[SigmaStructure],
    universe: &Universe,
) -> Result<VerdictReport> {
    if !universe.covers(k) {
        return Err(Error::Universe(
            "universe does not contain every element of the category".into(),
        ));
    }
    let cat = k.cat();
    let mut by_structure: HashMap<&SigmaStructure, Vec<ObjId>> = HashMap::new();
    for (b, s) in structures.iter().enumerate() {
        by_structure.entry(s).or_default().push(b);
    }
    let pool = universe.elements();
    let failure = cat.object_ids().into_par_iter().find_map_first(|a| {
        let mut seen = BTreeSet::new();
        for sigma in injections(k.carrier(a).len(), pool.len()) {
            let names: Vec<String> = sigma.iter().map(|&p| pool[p].clone()).collect();
            let x = structures[a].transport(&names);
            if !seen.insert(x.clone()) {
                continue;
            }
            let ok = by_structure
                .get(&x)
                .is_some_and(|bs| bs.iter().any(|&b| cat.iso_between(a, b).is_some()));
            if !ok {
                let pairs: Vec<(&str, &str)> = k
                    .carrier(a)
                    .iter()
                    .zip(&names)
                    .map(|(x, y)| (x.as_str(), y.as_str()))
                    .collect();
                return Some(Violation::new(
                    "repletion",
                    vec![cat.object_name(a).into(), map_name(&pairs)],
                    "renamed structure is not E of an isomorphic object",
                ));
            }
        }
        None
    });
    Ok(match failure {
        None => VerdictReport::pass("replete"),
        Some(v) => VerdictReport::fail("replete", v),
    })
}

/// Outcome of each rung of the finite AEC ladder.
#[derive(Clone, Debug, Serialize)]
pub struct LadderReport {
    pub category: String,
    pub rungs: Vec<VerdictReport>,
    pub notes: Vec<String>,
}

impl LadderReport {
    pub fn rung(&self, check: &str) -> Option<&VerdictReport> {
        self.rungs.iter().find(|r| r.check == check)
    }

    pub fn all_passed(&self) -> bool {
        self.rungs.iter().all(VerdictReport::passed)
    }

    pub fn failed_rungs(&self) -> Vec<&str> {
        self.rungs
            .iter()
            .filter(|r| !r.passed())
            .map(|r| r.check.as_str())
            .collect()
    }
}

impl fmt::Display for LadderReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}", self.category)?;
        for r in &self.rungs {
            writeln!(f, "  {r}")?;
        }
        for n in &self.notes {
            writeln!(f, "  note: {n}")?;
        }
        Ok(())
    }
}

/// Faithful `U`, coherence, concrete monos, iso-fullness and repleteness of
/// `E` over symbols of arity `≤ max_arity`.
pub fn classify_aec(
    k: &ConcreteCategory,
    max_arity: usize,
    universe: &Universe,
) -> Result<LadderReport> {
    let cat = k.cat();
    let faithful = match faithfulness_gap_u(k) {
        None => VerdictReport::pass("faithful"),
        Some((u, v)) => VerdictReport::fail(
            "faithful",
            Violation::new(
                "faithful",
                vec![cat.morphism_name(u).into(), cat.morphism_name(v).into()],
                "parallel morphisms with the same function",
            ),
        ),
    };
    let monos = match concrete_mono_gap(k) {
        None => VerdictReport::pass("concrete-monos"),
        Some(f) => VerdictReport::fail(
            "concrete-monos",
            Violation::new(
                "concrete-mono",
                vec![cat.morphism_name(f).into()],
                "not a monomorphism with injective underlying function",
            ),
        ),
    };
    let basis = sigma_basis(k, max_arity);
    let structures: Vec<SigmaStructure> = cat
        .object_ids()
        .map(|a| SigmaStructure::of(k, &basis, a))
        .collect();
    let rungs = vec![
        faithful,
        is_coherent(k),
        monos,
        iso_full(k, &structures),
        replete(k, &structures, universe)?,
    ];
    Ok(LadderReport {
        category: cat.name().to_string(),
        rungs,
        notes: vec![
            "directed-colimit conditions are vacuous for finite categories".into(),
            format!(
                "iso-full and replete use the {} tuple-class symbols of arity ≤ {max_arity}, which generate every symbol of Σ_K up to that arity",
                basis.len()
            ),
        ],
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::category::CategoryBuilder;
    use crate::concrete::make_transportable;
    use crate::signature::{enumerate_sigma, DEFAULT_SIGMA_BUDGET};

    fn point(name: &str, elems: &[&str]) -> ConcreteCategory {
        ConcreteCategory::new(
            Arc::new(FinCategory::terminal(name)),
            vec![elems.iter().map(|s| s.to_string()).collect()],
            vec![None],
        )
        .unwrap()
    }

    #[test]
    fn terminal_with_element_passes_every_rung() {
        let k = point("P", &["a"]);
        let r = classify_aec(&k, 2, &Universe::of(&k)).unwrap();
        assert!(r.all_passed(), "{r}");
    }

    #[test]
    fn missing_renaming_is_not_replete() {
        let k = point("P", &["a"]);
        let r = classify_aec(&k, 2, &Universe::with_fresh(&k, 1)).unwrap();
        assert_eq!(r.failed_rungs(), vec!["replete"]);
        let t = make_transportable(&k, &Universe::with_fresh(&k, 1)).unwrap();
        assert!(classify_aec(&t, 2, &Universe::with_fresh(&k, 1)).unwrap().all_passed());
    }

    #[test]
    fn missing_factorization_fails_only_coherence() {
        // {a} and {a,b} both include into {a,b,c}, with nothing between them
        let mut b = CategoryBuilder::new("K");
        b.object("A").object("B").object("C");
        b.morphism("h", "A", "C").morphism("g", "B", "C");
        let cat = Arc::new(b.build().unwrap());
        let names = |xs: &[&str]| xs.iter().map(|s| s.to_string()).collect::<Vec<_>>();
        let k = ConcreteCategory::from_positions(
            cat,
            vec![names(&["a"]), names(&["a", "b"]), names(&["a", "b", "c"])],
            vec![vec![0], vec![0, 1], vec![0], vec![0, 1], vec![0, 1, 2]],
        )
        .unwrap();
        let u = Universe::of(&k);
        let t = make_transportable(&k, &u).unwrap();
        let r = classify_aec(&t, 2, &u).unwrap();
        assert_eq!(r.failed_rungs(), vec!["coherent"], "{r}");
    }

    #[test]
    fn twins_without_iso_fail_iso_fullness() {
        let mut b = CategoryBuilder::new("K");
        b.object("A").object("B");
        let cat = Arc::new(b.build().unwrap());
        let k = ConcreteCategory::new(
            cat,
            vec![vec!["a".into()], vec!["a".into()]],
            vec![None, None],
        )
        .unwrap();
        // Σ_K tells the twins apart; the empty signature does not
        let sigma = enumerate_sigma(&k, 1, DEFAULT_SIGMA_BUDGET).unwrap();
        assert!(is_iso_full(&canonical_e(&k, &sigma).unwrap()).passed());
        let e = canonical_e(&k, &Signature::default()).unwrap();
        let v = is_iso_full(&e);
        assert_eq!(v.violation.unwrap().witness, vec!["A", "B", "{a->a}"]);
    }

    #[test]
    fn e_agrees_with_u() {
        let k = point("P", &["a", "b"]);
        let sigma = enumerate_sigma(&k, 2, DEFAULT_SIGMA_BUDGET).unwrap();
        let e = canonical_e(&k, &sigma).unwrap();
        for a in k.cat().object_ids() {
            assert_eq!(e.emb.cat.carrier(e.e.obj(a)), k.carrier(a));
        }
        for f in k.cat().morphism_ids() {
            assert_eq!(e.emb.cat.action(e.e.mor(f)), k.action(f));
        }
        // unary singleton classes make every structure rigid
        assert!(is_iso_full(&e).passed());
    }

    #[test]
    fn transport_sorts_carrier() {
        let s = SigmaStructure {
            carrier: vec!["a".into(), "b".into()],
            relations: vec![[vec![0]].into_iter().collect()],
        };
        let t = s.transport(&["z".into(), "y".into()]);
        assert_eq!(t.carrier, vec!["y", "z"]);
        assert!(t.relations[0].contains(&vec![1]));
    }
}
