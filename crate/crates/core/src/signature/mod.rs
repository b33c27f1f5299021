//! Relation symbols interpretable in a concrete category, the maximal
//! signature `Σ_K`, and the canonical functor into `Emb(Σ_K)`.
//!
//! A symbol `R` of arity `n` picks `R_A ⊆ (UA)^n` for every object so that
//! every `(Uf)^n` maps `R_A` into `R_B` and reflects membership. Both
//! conditions say `R` is a union of classes of the equivalence generated by
//! `t ~ (Uf)^n t`, which is how [`enumerate_sigma`] finds all of them.

mod emb;

pub use emb::{
    canonical_e, classify_aec, is_iso_full, is_replete_e, CanonicalEmbedding, EmbCategory,
    LadderReport, SigmaStructure,
};

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use rayon::prelude::*;

use crate::category::{MorId, ObjId};
use crate::combinat::{decode_tuple, encode_tuple, power};
use crate::concrete::ConcreteCategory;
use crate::error::{Error, Result};
use crate::functor::Functor;
use crate::limits::{InserterResult, ProductResult};
use crate::naming::tagged;
use crate::verdict::{VerdictReport, Violation};

/// Tuple of carrier positions.
pub type Tuple = Vec<usize>;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RelationSymbol {
    pub name: String,
    pub arity: usize,
    /// `R_A` for every object `A`, as tuples of carrier positions.
    pub interp: Vec<BTreeSet<Tuple>>,
}

impl RelationSymbol {
    pub fn empty(name: &str, arity: usize, objects: usize) -> Self {
        RelationSymbol {
            name: name.to_string(),
            arity,
            interp: vec![BTreeSet::new(); objects],
        }
    }

    /// `R_A = (UA)^n` everywhere.
    pub fn full(k: &ConcreteCategory, name: &str, arity: usize) -> Self {
        let interp = k
            .cat()
            .object_ids()
            .map(|a| {
                let m = k.carrier(a).len();
                (0..power(m, arity) as usize)
                    .map(|c| decode_tuple(c, m, arity))
                    .collect()
            })
            .collect();
        RelationSymbol {
            name: name.to_string(),
            arity,
            interp,
        }
    }

    pub fn with_name(mut self, name: &str) -> Self {
        self.name = name.to_string();
        self
    }

    /// `R_A` with element names.
    pub fn tuples_named(&self, k: &ConcreteCategory, a: ObjId) -> Vec<Vec<String>> {
        self.interp[a]
            .iter()
            .map(|t| t.iter().map(|&p| k.carrier(a)[p].clone()).collect())
            .collect()
    }

    /// Same interpretation, ignoring names.
    pub fn same_interp(&self, other: &RelationSymbol) -> bool {
        self.arity == other.arity && self.interp == other.interp
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Signature {
    symbols: Vec<RelationSymbol>,
}

impl Signature {
    pub fn new(symbols: Vec<RelationSymbol>) -> Result<Self> {
        let mut seen = BTreeSet::new();
        for s in &symbols {
            if !seen.insert(s.name.as_str()) {
                return Err(Error::Structure(format!("duplicate symbol `{}`", s.name)));
            }
        }
        Ok(Signature { symbols })
    }

    pub fn symbols(&self) -> &[RelationSymbol] {
        &self.symbols
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn get(&self, name: &str) -> Option<&RelationSymbol> {
        self.symbols.iter().find(|s| s.name == name)
    }

    /// A symbol with the same arity and interpretation as `r`.
    pub fn find_interp(&self, r: &RelationSymbol) -> Option<&RelationSymbol> {
        self.symbols.iter().find(|s| s.same_interp(r))
    }

    pub fn max_arity(&self) -> usize {
        self.symbols.iter().map(|s| s.arity).max().unwrap_or(0)
    }
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .symbols
            .iter()
            .map(|s| format!("{}/{}", s.name, s.arity))
            .collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}

fn image(action: &[usize], t: &[usize]) -> Tuple {
    t.iter().map(|&x| action[x]).collect()
}

/// Arity, range, subfunctor and reflection conditions of `r` over `k`.
pub fn validate_symbol(k: &ConcreteCategory, r: &RelationSymbol) -> VerdictReport {
    VerdictReport::from_result("relation-symbol", symbol_laws(k, r))
}

pub(crate) fn symbol_laws(k: &ConcreteCategory, r: &RelationSymbol) -> std::result::Result<(), Violation> {
    let cat = k.cat();
    if r.arity == 0 || r.interp.len() != cat.object_count() {
        return Err(Violation::new(
            "shape",
            vec![r.name.clone()],
            "symbol needs arity ≥ 1 and one relation per object",
        ));
    }
    for a in cat.object_ids() {
        let m = k.carrier(a).len();
        if r.interp[a]
            .iter()
            .any(|t| t.len() != r.arity || t.iter().any(|&x| x >= m))
        {
            return Err(Violation::new(
                "arity",
                vec![r.name.clone(), cat.object_name(a).into()],
                "tuple of wrong length or outside the carrier",
            ));
        }
    }
    let show = |a: ObjId, t: &[usize]| -> String {
        let names: Vec<&str> = t.iter().map(|&x| k.carrier(a)[x].as_str()).collect();
        format!("({})", names.join(","))
    };
    for f in cat.morphism_ids() {
        let (a, b) = (cat.dom(f), cat.cod(f));
        let act = k.action(f);
        for t in &r.interp[a] {
            if !r.interp[b].contains(&image(act, t)) {
                return Err(Violation::new(
                    "subfunctor",
                    vec![r.name.clone(), cat.morphism_name(f).into(), show(a, t)],
                    "image of a related tuple is not related",
                ));
            }
        }
        let m = k.carrier(a).len();
        for c in 0..power(m, r.arity) as usize {
            let t = decode_tuple(c, m, r.arity);
            if !r.interp[a].contains(&t) && r.interp[b].contains(&image(act, &t)) {
                return Err(Violation::new(
                    "reflection",
                    vec![r.name.clone(), cat.morphism_name(f).into(), show(a, &t)],
                    "unrelated tuple has a related image",
                ));
            }
        }
    }
    Ok(())
}

/// Default cap on the number of symbols [`enumerate_sigma`] will produce.
pub const DEFAULT_SIGMA_BUDGET: u128 = 1 << 16;

/// Classes of `n`-tuples under `t ~ (Uf)^n t`, each a list of
/// `(object, tuple code)` in increasing order; classes are ordered by their
/// least member.
pub fn tuple_classes(k: &ConcreteCategory, arity: usize) -> Vec<Vec<(ObjId, usize)>> {
    let cat = k.cat();
    let sizes: Vec<usize> = cat
        .object_ids()
        .map(|a| power(k.carrier(a).len(), arity) as usize)
        .collect();
    let mut offset = Vec::with_capacity(sizes.len() + 1);
    let mut total = 0;
    for &s in &sizes {
        offset.push(total);
        total += s;
    }
    let mut parent: Vec<usize> = (0..total).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    for f in cat.morphism_ids() {
        let (a, b) = (cat.dom(f), cat.cod(f));
        let act = k.action(f);
        let (ma, mb) = (k.carrier(a).len(), k.carrier(b).len());
        for c in 0..sizes[a] {
            let t = decode_tuple(c, ma, arity);
            let d = encode_tuple(&image(act, &t), mb);
            let x = find(&mut parent, offset[a] + c);
            let y = find(&mut parent, offset[b] + d);
            if x != y {
                parent[x.max(y)] = x.min(y);
            }
        }
    }
    let mut classes: Vec<Vec<(ObjId, usize)>> = Vec::new();
    let mut slot: HashMap<usize, usize> = HashMap::new();
    for a in cat.object_ids() {
        for c in 0..sizes[a] {
            let r = find(&mut parent, offset[a] + c);
            let i = *slot.entry(r).or_insert_with(|| {
                classes.push(Vec::new());
                classes.len() - 1
            });
            classes[i].push((a, c));
        }
    }
    classes
}

fn symbol_from_classes(
    k: &ConcreteCategory,
    name: String,
    arity: usize,
    classes: &[Vec<(ObjId, usize)>],
    mask: impl Fn(usize) -> bool,
) -> RelationSymbol {
    let mut interp = vec![BTreeSet::new(); k.cat().object_count()];
    for (i, class) in classes.iter().enumerate() {
        if mask(i) {
            for &(a, c) in class {
                interp[a].insert(decode_tuple(c, k.carrier(a).len(), arity));
            }
        }
    }
    RelationSymbol {
        name,
        arity,
        interp,
    }
}

/// One symbol per tuple class, arities `1..=max_arity`, named `C{n}_{i}`.
/// Every symbol of `Σ_K` up to that arity is a union of these, so a map
/// preserves and reflects all of `Σ_K` iff it does so for the basis.
pub fn sigma_basis(k: &ConcreteCategory, max_arity: usize) -> Signature {
    let mut symbols = Vec::new();
    for n in 1..=max_arity {
        let classes = tuple_classes(k, n);
        for i in 0..classes.len() {
            symbols.push(symbol_from_classes(k, format!("C{n}_{i}"), n, &classes, |j| j == i));
        }
    }
    Signature { symbols }
}

/// Number of symbols of each arity `1..=max_arity` in `Σ_K`.
pub fn sigma_size(k: &ConcreteCategory, max_arity: usize) -> Vec<u128> {
    (1..=max_arity)
        .map(|n| 1u128.checked_shl(tuple_classes(k, n).len() as u32).unwrap_or(u128::MAX))
        .collect()
}

/// All symbols of arity `1..=max_arity` interpretable in `k`, named
/// `R{n}_{mask}` where bit `i` of `mask` selects tuple class `i`.
/// Refuses when the total count exceeds `budget`.
pub fn enumerate_sigma(k: &ConcreteCategory, max_arity: usize, budget: u128) -> Result<Signature> {
    if max_arity == 0 {
        return Err(Error::Precondition("max_arity must be at least 1".into()));
    }
    let per_arity: Vec<Vec<Vec<(ObjId, usize)>>> =
        (1..=max_arity).map(|n| tuple_classes(k, n)).collect();
    let total = per_arity.iter().fold(0u128, |acc, c| {
        acc.saturating_add(1u128.checked_shl(c.len() as u32).unwrap_or(u128::MAX))
    });
    if total > budget {
        return Err(Error::BudgetExceeded {
            size: total,
            budget,
        });
    }
    let mut symbols = Vec::with_capacity(total as usize);
    for (i, classes) in per_arity.iter().enumerate() {
        let n = i + 1;
        let count = 1u64 << classes.len();
        let mut shard: Vec<RelationSymbol> = (0..count)
            .into_par_iter()
            .map(|mask| {
                symbol_from_classes(k, format!("R{n}_{mask}"), n, classes, |j| {
                    mask >> j & 1 == 1
                })
            })
            .collect();
        symbols.append(&mut shard);
    }
    Ok(Signature { symbols })
}

/// Whether `r` is interpretable in `k` (both symbol conditions hold).
pub fn is_valid_symbol(k: &ConcreteCategory, r: &RelationSymbol) -> bool {
    symbol_laws(k, r).is_ok()
}

/// `∐ R_i` over a product: at a tuple object, the tagged union of the
/// component relations.
pub fn coproduct_symbol(
    name: &str,
    prod: &ProductResult,
    components: &[ConcreteCategory],
    rs: &[RelationSymbol],
) -> Result<RelationSymbol> {
    if rs.len() != components.len() {
        return Err(Error::Mismatch("one symbol per product component".into()));
    }
    let arity = match rs.first() {
        Some(r) => r.arity,
        None => 1,
    };
    if rs.iter().any(|r| r.arity != arity) {
        return Err(Error::Mismatch("coproduct of symbols with different arities".into()));
    }
    let p = &prod.prod;
    let mut interp = vec![BTreeSet::new(); p.cat().object_count()];
    for (o, tuple) in prod.object_tuples.iter().enumerate() {
        for (i, (&a, r)) in tuple.iter().zip(rs).enumerate() {
            let k = &components[i];
            for t in &r.interp[a] {
                let moved: Option<Tuple> = t
                    .iter()
                    .map(|&x| p.position(o, &tagged(i, &k.carrier(a)[x])))
                    .collect();
                interp[o].insert(moved.ok_or_else(|| {
                    Error::Structure("product carrier lacks a tagged element".into())
                })?);
            }
        }
    }
    Ok(RelationSymbol {
        name: name.to_string(),
        arity,
        interp,
    })
}

/// `R∘p` along a functor `p: J -> K` that is concrete on the nose.
pub fn pullback_symbol(
    r: &RelationSymbol,
    k: &ConcreteCategory,
    j: &ConcreteCategory,
    p: &Functor,
) -> Result<RelationSymbol> {
    if **p.source() != **j.cat() || **p.target() != **k.cat() {
        return Err(Error::Mismatch("functor endpoints differ from the categories".into()));
    }
    for x in j.cat().object_ids() {
        if j.carrier(x) != k.carrier(p.obj(x)) {
            return Err(Error::Precondition(format!(
                "functor is not concrete at object {}",
                j.cat().object_name(x)
            )));
        }
    }
    for f in j.cat().morphism_ids() {
        if j.action(f) != k.action(p.mor(f)) {
            return Err(Error::Precondition(format!(
                "functor is not concrete at morphism {}",
                j.cat().morphism_name(f)
            )));
        }
    }
    Ok(RelationSymbol {
        name: r.name.clone(),
        arity: r.arity,
        interp: j
            .cat()
            .object_ids()
            .map(|x| r.interp[p.obj(x)].clone())
            .collect(),
    })
}

/// Checks that `alpha` (one injection `U₂FA -> U₁A` per object `A`) is a
/// natural monomorphism `U₂∘F => U₁`.
pub fn check_natural_mono(
    f: &Functor,
    k1: &ConcreteCategory,
    k2: &ConcreteCategory,
    alpha: &[Vec<usize>],
) -> std::result::Result<(), Violation> {
    let c1 = k1.cat();
    if alpha.len() != c1.object_count() {
        return Err(Violation::new("shape", vec![], "one component per object"));
    }
    for a in c1.object_ids() {
        let comp = &alpha[a];
        let distinct: BTreeSet<_> = comp.iter().collect();
        if comp.len() != k2.carrier(f.obj(a)).len()
            || comp.iter().any(|&x| x >= k1.carrier(a).len())
            || distinct.len() != comp.len()
        {
            return Err(Violation::new(
                "mono",
                vec![c1.object_name(a).into()],
                "component is not an injection U₂FA -> U₁A",
            ));
        }
    }
    for m in c1.morphism_ids() {
        let (a, b) = (c1.dom(m), c1.cod(m));
        let fm = k2.action(f.mor(m));
        let um = k1.action(m);
        if (0..alpha[a].len()).any(|x| alpha[b][fm[x]] != um[alpha[a][x]]) {
            return Err(Violation::new(
                "naturality",
                vec![c1.morphism_name(m).into()],
                "α_B∘U₂F(m) differs from U₁(m)∘α_A",
            ));
        }
    }
    Ok(())
}

/// The binary symbol on `Ins(F,G)` relating `α^F a` to `α^G((U₂g) a)` at
/// the inserter object `g: FK -> GK`, for `a ∈ U₂FK`.
pub fn inserter_pairing_symbol(
    ins: &InserterResult,
    k1: &ConcreteCategory,
    k2: &ConcreteCategory,
    alpha_f: &[Vec<usize>],
    alpha_g: &[Vec<usize>],
) -> Result<RelationSymbol> {
    for (func, alpha) in [(ins.f(), alpha_f), (ins.g(), alpha_g)] {
        if let Err(v) = check_natural_mono(func, k1, k2, alpha) {
            return Err(Error::Precondition(format!("witness rejected: {v}")));
        }
    }
    let mut interp = vec![BTreeSet::new(); ins.ins.object_count()];
    for (o, &(kobj, g)) in ins.objects.iter().enumerate() {
        let ug = k2.action(g);
        for (a, &img) in ug.iter().enumerate() {
            interp[o].insert(vec![alpha_f[kobj][a], alpha_g[kobj][img]]);
        }
    }
    let r = RelationSymbol {
        name: "pair".to_string(),
        arity: 2,
        interp,
    };
    let kins = ins.concrete(k1)?;
    if let Err(v) = symbol_laws(&kins, &r) {
        return Err(Error::Law(v));
    }
    Ok(r)
}

/// Morphisms of `k` whose underlying function is not injective.
pub fn non_injective(k: &ConcreteCategory) -> Vec<MorId> {
    k.cat().morphism_ids().filter(|&f| !k.is_injective(f)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::category::FinCategory;
    use crate::limits::product;
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
    fn singleton_has_two_unary_symbols() {
        let k = point("P", &["a"]);
        let s = enumerate_sigma(&k, 1, DEFAULT_SIGMA_BUDGET).unwrap();
        assert_eq!(s.len(), 2);
        assert!(s.symbols()[0].interp[0].is_empty());
        assert_eq!(s.symbols()[1].interp[0].len(), 1);
    }

    #[test]
    fn full_symbol_is_always_present() {
        let k = point("P", &["a", "b"]);
        let s = enumerate_sigma(&k, 2, DEFAULT_SIGMA_BUDGET).unwrap();
        for n in 1..=2 {
            assert!(s.find_interp(&RelationSymbol::full(&k, "T", n)).is_some());
        }
        for r in s.symbols() {
            assert!(is_valid_symbol(&k, r));
        }
    }

    #[test]
    fn budget_refusal_reports_size() {
        let k = point("P", &["a", "b", "c"]);
        match enumerate_sigma(&k, 2, 100) {
            Err(Error::BudgetExceeded { size, budget }) => {
                assert_eq!(size, (1 << 3) + (1 << 9));
                assert_eq!(budget, 100);
            }
            other => panic!("expected refusal, got {other:?}"),
        }
    }

    #[test]
    fn product_component_symbol() {
        let a = point("P", &["x"]);
        let b = point("Q", &["y"]);
        let p = product(&[a.clone(), b.clone()]).unwrap();
        let r = coproduct_symbol(
            "S",
            &p,
            &[a.clone(), b.clone()],
            &[RelationSymbol::full(&a, "U", 1), RelationSymbol::empty("E", 1, 1)],
        )
        .unwrap();
        assert!(is_valid_symbol(&p.prod, &r));
        let sigma = enumerate_sigma(&p.prod, 1, DEFAULT_SIGMA_BUDGET).unwrap();
        assert!(sigma.find_interp(&r).is_some());
        assert_eq!(r.tuples_named(&p.prod, 0), vec![vec!["0:x".to_string()]]);
    }

    #[test]
    fn reflection_violation_is_caught() {
        // f: A -> B with U f = a ↦ b, R_A = ∅, R_B = {b}
        let mut bld = crate::category::CategoryBuilder::new("K");
        bld.object("A").object("B").morphism("f", "A", "B");
        let cat = Arc::new(bld.build().unwrap());
        let f = cat.morphism_id("f").unwrap();
        let mut actions = vec![None; cat.morphism_count()];
        actions[f] = Some([("a".to_string(), "b".to_string())].into_iter().collect());
        let k = ConcreteCategory::new(cat, vec![vec!["a".into()], vec!["b".into()]], actions)
            .unwrap();
        let mut r = RelationSymbol::empty("R", 1, 2);
        r.interp[1].insert(vec![0]);
        assert_eq!(validate_symbol(&k, &r).law(), Some("reflection"));
        let mut r = RelationSymbol::empty("R", 1, 2);
        r.interp[0].insert(vec![0]);
        assert_eq!(validate_symbol(&k, &r).law(), Some("subfunctor"));
    }
}
