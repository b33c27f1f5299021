//! Brute-force oracles shared by the integration tests. None of these call
//! into the checkers they are compared against.
#![allow(dead_code)]

use std::collections::BTreeSet;
use std::sync::Arc;

use pie_workbench::concrete::ConcreteCategory;
use pie_workbench::harness::gen::{closure_category, random_functor, random_nat};
use pie_workbench::harness::{instance_seed, GeneratorConfig};
use pie_workbench::limits::{EquifierResult, InserterResult};
use pie_workbench::{FinCategory, Functor, MorId, NatTrans, ObjId};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64, index: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(instance_seed(seed, index))
}

/// Category laws read straight off the definition, over every triple of
/// morphisms.
pub fn laws_hold(c: &FinCategory) -> bool {
    let mors = c.morphisms();
    let ids = c.identities();
    let m = mors.len();
    for (a, &i) in ids.iter().enumerate() {
        if mors[i].dom != a || mors[i].cod != a {
            return false;
        }
    }
    for g in 0..m {
        for f in 0..m {
            let composable = mors[f].cod == mors[g].dom;
            match c.composite(g, f) {
                None if composable => return false,
                Some(_) if !composable => return false,
                Some(h) if mors[h].dom != mors[f].dom || mors[h].cod != mors[g].cod => return false,
                _ => {}
            }
        }
    }
    for f in 0..m {
        if c.composite(ids[mors[f].cod], f) != Some(f) || c.composite(f, ids[mors[f].dom]) != Some(f) {
            return false;
        }
    }
    for f in 0..m {
        for g in 0..m {
            for h in 0..m {
                if mors[f].cod != mors[g].dom || mors[g].cod != mors[h].dom {
                    continue;
                }
                let left = c.composite(g, f).and_then(|gf| c.composite(h, gf));
                let right = c.composite(h, g).and_then(|hg| c.composite(hg, f));
                if left != right {
                    return false;
                }
            }
        }
    }
    true
}

/// Every `n`-tuple over `0..size`, in lexicographic order.
pub fn all_tuples(size: usize, n: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|t| {
                (0..size).map(move |x| {
                    let mut t = t.clone();
                    t.push(x);
                    t
                })
            })
            .collect();
    }
    out
}

/// An interpretation as a flat set of `(object, tuple)` pairs.
pub type Interp = BTreeSet<(ObjId, Vec<usize>)>;

pub fn flatten(interp: &[BTreeSet<Vec<usize>>]) -> Interp {
    interp
        .iter()
        .enumerate()
        .flat_map(|(a, ts)| ts.iter().map(move |t| (a, t.clone())))
        .collect()
}

/// Every `(object, n-tuple)` pair of `k`.
pub fn tuple_space(k: &ConcreteCategory, n: usize) -> Vec<(ObjId, Vec<usize>)> {
    k.cat()
        .object_ids()
        .flat_map(|a| all_tuples(k.carrier(a).len(), n).into_iter().map(move |t| (a, t)))
        .collect()
}

/// `(domain index, image index)` in `space` for every morphism and tuple.
fn edges(k: &ConcreteCategory, space: &[(ObjId, Vec<usize>)]) -> Vec<(usize, usize)> {
    let c = k.cat();
    let mut out = Vec::new();
    for f in c.morphism_ids() {
        let act = k.action(f);
        for (i, (a, t)) in space.iter().enumerate() {
            if *a != c.dom(f) {
                continue;
            }
            let img: Vec<usize> = t.iter().map(|&x| act[x]).collect();
            let j = space
                .iter()
                .position(|(b, s)| *b == c.cod(f) && *s == img)
                .expect("image lies in the tuple space");
            out.push((i, j));
        }
    }
    out
}

/// Every subset of the `n`-tuple space that is preserved and reflected by
/// all morphisms. `None` when the space has more than 16 tuples.
pub fn sigma_oracle(k: &ConcreteCategory, n: usize) -> Option<BTreeSet<Interp>> {
    let space = tuple_space(k, n);
    if space.len() > 16 {
        return None;
    }
    let e = edges(k, &space);
    let mut out = BTreeSet::new();
    for mask in 0u32..1 << space.len() {
        let bit = |i: usize| mask >> i & 1 == 1;
        if e.iter().all(|&(i, j)| bit(i) == bit(j)) {
            out.insert((0..space.len()).filter(|&i| bit(i)).map(|i| space[i].clone()).collect());
        }
    }
    Some(out)
}

/// Smallest preserved and reflected set containing `seeds`, by fixpoint.
pub fn close_symbol(k: &ConcreteCategory, n: usize, seeds: &Interp) -> Interp {
    let space = tuple_space(k, n);
    let e = edges(k, &space);
    let mut inside: Vec<bool> = space.iter().map(|p| seeds.contains(p)).collect();
    loop {
        let mut changed = false;
        for &(i, j) in &e {
            if inside[i] != inside[j] {
                inside[i] = true;
                inside[j] = true;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    space.into_iter().zip(inside).filter(|(_, b)| *b).map(|(p, _)| p).collect()
}

pub fn symbol_holds(k: &ConcreteCategory, n: usize, r: &Interp) -> bool {
    let space = tuple_space(k, n);
    edges(k, &space)
        .iter()
        .all(|&(i, j)| r.contains(&space[i]) == r.contains(&space[j]))
}

/// Whether the given maps form a functor, checked on every pair.
fn is_functor(j: &FinCategory, t: &FinCategory, obj: &[ObjId], mor: &[MorId]) -> bool {
    j.object_ids().all(|a| mor[j.identity(a)] == t.identity(obj[a]))
        && j.morphism_ids().all(|f| t.dom(mor[f]) == obj[j.dom(f)] && t.cod(mor[f]) == obj[j.cod(f)])
        && j.morphism_ids().all(|f| {
            j.morphism_ids()
                .filter(|&g| j.cod(f) == j.dom(g))
                .all(|g| t.composite(mor[g], mor[f]) == Some(mor[j.comp(g, f)]))
        })
}

/// All functors `J -> T` whose object and morphism assignments pass the
/// pointwise filters.
fn functors_where(
    j: &Arc<FinCategory>,
    t: &Arc<FinCategory>,
    obj_ok: impl Fn(ObjId, ObjId) -> bool,
    mor_ok: impl Fn(MorId, MorId) -> bool,
) -> Vec<Functor> {
    let obj_choices: Vec<Vec<ObjId>> = j.object_ids().map(|a| t.object_ids().filter(|&x| obj_ok(a, x)).collect()).collect();
    let mor_choices: Vec<Vec<MorId>> =
        j.morphism_ids().map(|f| t.morphism_ids().filter(|&m| mor_ok(f, m)).collect()).collect();
    let mut out = Vec::new();
    for obj in product(&obj_choices) {
        let typed: Vec<Vec<MorId>> = j
            .morphism_ids()
            .map(|f| {
                mor_choices[f]
                    .iter()
                    .copied()
                    .filter(|&m| t.dom(m) == obj[j.dom(f)] && t.cod(m) == obj[j.cod(f)])
                    .collect()
            })
            .collect();
        for mor in product(&typed) {
            if is_functor(j, t, &obj, &mor) {
                out.push(Functor::new(j.clone(), t.clone(), obj.clone(), mor).expect("checked functor"));
            }
        }
    }
    out
}

fn product(choices: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for c in choices {
        out = out
            .into_iter()
            .flat_map(|p: Vec<usize>| {
                c.iter().map(move |&x| {
                    let mut p = p.clone();
                    p.push(x);
                    p
                })
            })
            .collect();
    }
    out
}

/// Every `X: J -> Ins` with `P∘X = h` and `φX = ψ`.
pub fn inserter_solutions(ins: &InserterResult, h: &Functor, psi: &NatTrans) -> Vec<Functor> {
    let p = &ins.projection;
    functors_where(
        h.source(),
        &ins.ins,
        |a, x| p.obj(x) == h.obj(a) && ins.phi.component(x) == psi.component(a),
        |f, m| p.mor(m) == h.mor(f),
    )
}

/// Every `X: J -> Eq` with `inclusion∘X = h`.
pub fn equifier_solutions(eq: &EquifierResult, h: &Functor) -> Vec<Functor> {
    let inc = &eq.inclusion;
    functors_where(h.source(), &eq.eq, |a, x| inc.obj(x) == h.obj(a), |f, m| inc.mor(m) == h.mor(f))
}

/// Small generator bounds for the brute-force oracles.
pub fn small(max_objects: usize) -> GeneratorConfig {
    GeneratorConfig {
        max_objects,
        max_carrier: 2,
        max_hom: 8,
        max_morphisms: 12,
        ..GeneratorConfig::default()
    }
}

pub fn small_category(rng: &mut ChaCha8Rng, max_objects: usize) -> Arc<FinCategory> {
    let cfg = small(max_objects);
    loop {
        let injective = rng.gen_bool(0.3);
        if let Some(k) = closure_category(rng, &cfg, injective) {
            return k.cat().clone();
        }
    }
}

/// `(F, G, h, ψ)` with `ψ: F∘h => G∘h`, or `None` when a draw has no
/// functor or transformation.
pub fn inserter_instance(rng: &mut ChaCha8Rng) -> Option<(Functor, Functor, Functor, NatTrans)> {
    let k = small_category(rng, 3);
    let l = small_category(rng, 3);
    let j = small_category(rng, 5);
    let f = random_functor(rng, &k, &l, 2000)?;
    let g = random_functor(rng, &k, &l, 2000)?;
    let h = random_functor(rng, &j, &k, 2000)?;
    let fh = pie_workbench::compose_functors(&h, &f).ok()?;
    let gh = pie_workbench::compose_functors(&h, &g).ok()?;
    let psi = random_nat(rng, &fh, &gh, 2000)?;
    Some((f, g, h, psi))
}

/// `(φ, ψ, h₀)` where `h₀` lands in the equifier's source and, on even
/// draws, inside the equifier itself.
pub fn equifier_instance(rng: &mut ChaCha8Rng) -> Option<(NatTrans, NatTrans, Arc<FinCategory>)> {
    let k = small_category(rng, 3);
    let l = small_category(rng, 3);
    let f = random_functor(rng, &k, &l, 2000)?;
    let g = random_functor(rng, &k, &l, 2000)?;
    let phi = random_nat(rng, &f, &g, 2000)?;
    let psi = if rng.gen_bool(0.3) { phi.clone() } else { random_nat(rng, &f, &g, 2000)? };
    let j = small_category(rng, 5);
    Some((phi, psi, j))
}

/// A seeded workspace with two concrete categories, a pair of functors, a
/// transformation when one exists, a signature and sometimes a product.
pub fn generated_workspace(seed: u64, index: u64) -> pie_workbench::dsl::Workspace {
    use pie_workbench::dsl::Workspace;
    use pie_workbench::signature::sigma_basis;

    let mut rng = rng(seed, index);
    let cfg = GeneratorConfig::default();
    let draw = |rng: &mut ChaCha8Rng, name: &str| loop {
        let injective = rng.gen_bool(0.5);
        if let Some(k) = closure_category(rng, &cfg, injective) {
            return k.renamed(name);
        }
    };
    let k = draw(&mut rng, "K");
    let l = draw(&mut rng, "L");
    let mut ws = Workspace::new();
    let basis = sigma_basis(&k, 1 + rng.gen_range(0..2));
    if rng.gen_bool(0.3) {
        let p = pie_workbench::limits::product(&[k.clone(), l.clone()]).expect("product of small categories");
        ws.add_concrete(p.prod).expect("fresh name");
    }
    ws.add_concrete(k.clone()).expect("fresh name");
    ws.add_concrete(l.clone()).expect("fresh name");
    if !basis.is_empty() {
        ws.add_signature("S", "K", basis).expect("basis is valid");
    }
    if let (Some(f), Some(g)) = (
        random_functor(&mut rng, k.cat(), l.cat(), 2000),
        random_functor(&mut rng, k.cat(), l.cat(), 2000),
    ) {
        match random_nat(&mut rng, &f, &g, 2000) {
            Some(t) => ws.add_nat("t", "F", "G", t).expect("fresh names"),
            None => {
                ws.add_functor("F", f).expect("fresh name");
                ws.add_functor("G", g).expect("fresh name");
            }
        }
    }
    ws
}
