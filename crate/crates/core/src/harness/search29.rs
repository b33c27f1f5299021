//! Bounded search for inserters of structure categories, along arbitrary
//! functors, whose canonical embedding is not iso-full.
//!
//! A failure found by the fast check is confirmed by
//! [`definitional_iso_full_gap`], which recomputes the tuple classes by
//! graph search and looks for isomorphisms directly in the hom-sets.

use std::collections::{HashMap, VecDeque};
use std::time::{Duration, Instant};

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::config::GeneratorConfig;
use super::gen::{random_functor, random_reduct_specs, reduct_family, sample_aec};
use super::suites::{
    concrete, errored, functor, run_instance, witness_for, Built, Checked, Suite, SuiteReport, Witnessed,
    FUNCTOR_BUDGET,
};
use crate::analysis::ConcreteFunctor;
use crate::category::ObjId;
use crate::combinat::{cartesian, injections};
use crate::concrete::ConcreteCategory;
use crate::dsl::Workspace;
use crate::error::Result;
use crate::functor::Functor;
use crate::limits::inserter;
use crate::signature::{canonical_e, is_iso_full, sigma_basis};
use crate::verdict::{VerdictReport, Violation};

/// Attached to every search report.
pub const CAVEAT: &str = "A finite failure of inserter iso-fullness, if one is reported, does not settle \
whether it extends to a genuine counterexample among accessible categories; that question is \
mathematical and outside this tool. The search only certifies the finite instances it emits.";

/// Run up to `n` instances, stopping early once `budget` has elapsed. An
/// early stop gives a partial report with `complete == false`.
pub fn run(n: usize, seed: u64, budget: Option<Duration>) -> SuiteReport {
    let start = Instant::now();
    let chunk = rayon::current_num_threads().max(1) * 2;
    let mut records = Vec::with_capacity(n);
    let mut complete = true;
    let mut i = 0;
    while i < n {
        if budget.is_some_and(|b| start.elapsed() >= b) {
            complete = false;
            break;
        }
        let hi = (i + chunk).min(n);
        let part: Vec<_> = (i as u64..hi as u64)
            .into_par_iter()
            .map(|j| run_instance(Suite::Search29, seed, j))
            .collect();
        records.extend(part);
        i = hi;
    }
    let mut notes = vec![CAVEAT.to_string()];
    if !complete {
        notes.push(format!("budget exhausted after {} of {n} instances", records.len()));
    }
    SuiteReport::from_records(Suite::Search29, seed, records, start.elapsed(), complete, notes)
}

pub(crate) fn build(rng: &mut ChaCha8Rng, cfg: &GeneratorConfig, mut ws: Workspace) -> Built {
    let k1 = sample_aec(rng, cfg, "K1")?;
    let roll = rng.gen_range(0..10);
    let (kind, k2, f, g) = if roll == 0 {
        let k2 = k1.renamed("K2");
        let id = Functor::identity(k1.k.cat().clone()).retarget(k1.k.cat().clone(), k2.k.cat().clone())?;
        ("identity", k2, id.clone(), id)
    } else if roll <= 3 {
        let specs = random_reduct_specs(rng, &k1.arities, 2);
        let fam = reduct_family(&k1, &specs, "K2")?;
        ("reduct-pair", fam.target, fam.functors[0].clone(), fam.functors[1].clone())
    } else {
        let k2 = sample_aec(rng, cfg, "K2")?;
        let (c1, c2) = (k1.k.cat(), k2.k.cat());
        let pair = (0..20).find_map(|_| {
            Some((
                random_functor(rng, c1, c2, FUNCTOR_BUDGET)?,
                random_functor(rng, c1, c2, FUNCTOR_BUDGET)?,
            ))
        });
        let (f, g) = match pair {
            Some(p) => p,
            None if c2.object_count() > 0 => {
                let x = rng.gen_range(0..c2.object_count());
                let y = rng.gen_range(0..c2.object_count());
                (Functor::constant(c1.clone(), c2.clone(), x), Functor::constant(c1.clone(), c2.clone(), y))
            }
            None => return Err("no functor into an empty category".into()),
        };
        ("arbitrary", k2, f, g)
    };
    ws.add_concrete(k1.k)?;
    ws.add_concrete(k2.k)?;
    ws.add_functor("F", f)?;
    ws.add_functor("G", g)?;
    Ok((kind.into(), ws))
}

pub(crate) fn check(ws: &Workspace) -> Result<Checked> {
    let (k1, k2) = (concrete(ws, "K1")?, concrete(ws, "K2")?);
    let (f, g) = (functor(ws, "F")?, functor(ws, "G")?);
    let ins = inserter(f, g)?;
    let kins = ins.concrete(k1)?;
    let basis = sigma_basis(&kins, 2);
    let mut iso_full = match canonical_e(&kins, &basis) {
        Ok(e) => is_iso_full(&e),
        Err(e) => errored("iso-full", &e),
    };
    let mut checks = Vec::new();
    if iso_full.failed() {
        match definitional_iso_full_gap(&kins, 2) {
            Some(v) => iso_full = iso_full.with_note(format!("confirmed by the definitional checker: {v}")),
            None => checks.push(VerdictReport::fail(
                "checker-agreement",
                Violation::new("disagreement", vec![], "definitional checker finds no gap"),
            )),
        }
    }
    // subconcrete pairs must agree with the th32 suite
    let mut subconcrete = true;
    for (label, h) in [("F", f), ("G", g)] {
        let cf = ConcreteFunctor::new(h.clone(), k1.clone(), k2.clone())?;
        match witness_for(&cf, label) {
            Witnessed::Found(_) => {}
            Witnessed::Skip(_) | Witnessed::Missing(_) => subconcrete = false,
        }
    }
    if subconcrete {
        checks.push(if iso_full.failed() {
            VerdictReport::fail(
                "consistency",
                Violation::new("subconcrete", vec![], "iso-fullness fails along subconcrete functors"),
            )
        } else {
            VerdictReport::pass("consistency").with_note("both functors are subconcrete")
        });
    }
    checks.insert(0, iso_full);
    Ok(Checked::Done(checks))
}

/// Tuple classes by breadth-first search: two tuples share a class when
/// a zig-zag of morphisms connects them. Keys are `(object, tuple)`.
fn classes_by_search(k: &ConcreteCategory, arity: usize) -> HashMap<(ObjId, Vec<usize>), usize> {
    let c = k.cat();
    let tuples = |a: ObjId| {
        let choices = vec![(0..k.carrier(a).len()).collect::<Vec<_>>(); arity];
        cartesian(&choices)
    };
    let mut class = HashMap::new();
    let mut next = 0;
    for a in c.object_ids() {
        for t in tuples(a) {
            if class.contains_key(&(a, t.clone())) {
                continue;
            }
            let mut queue = VecDeque::from([(a, t)]);
            while let Some((x, s)) = queue.pop_front() {
                if class.insert((x, s.clone()), next).is_some() {
                    continue;
                }
                for m in c.hom_from(x) {
                    let act = k.action(m);
                    queue.push_back((c.cod(m), s.iter().map(|&e| act[e]).collect()));
                }
                for m in c.hom_into(x) {
                    let act = k.action(m);
                    let y = c.dom(m);
                    for r in tuples(y) {
                        if r.iter().map(|&e| act[e]).eq(s.iter().copied()) {
                            queue.push_back((y, r));
                        }
                    }
                }
            }
            next += 1;
        }
    }
    class
}

/// A pair of objects and a bijection of carriers that preserves and
/// reflects every interpretable symbol of arity `1..=max_arity` but is not
/// the function of any isomorphism.
pub fn definitional_iso_full_gap(k: &ConcreteCategory, max_arity: usize) -> Option<Violation> {
    let c = k.cat();
    let classes: Vec<_> = (1..=max_arity).map(|n| classes_by_search(k, n)).collect();
    for a in c.object_ids() {
        for b in c.object_ids() {
            let n = k.carrier(a).len();
            if k.carrier(b).len() != n {
                continue;
            }
            for theta in injections(n, n) {
                let respects = classes.iter().all(|cls| {
                    cls.iter()
                        .filter(|((x, _), _)| *x == a)
                        .all(|((_, t), id)| {
                            let moved: Vec<usize> = t.iter().map(|&e| theta[e]).collect();
                            cls.get(&(b, moved)) == Some(id)
                        })
                });
                if !respects {
                    continue;
                }
                let lifted = c.hom(a, b).iter().any(|&m| {
                    k.action(m) == theta.as_slice()
                        && c.hom(b, a).iter().any(|&m2| {
                            c.composite(m2, m) == Some(c.identity(a)) && c.composite(m, m2) == Some(c.identity(b))
                        })
                });
                if !lifted {
                    return Some(Violation::new(
                        "iso-lift",
                        vec![c.object_name(a).into(), c.object_name(b).into(), format!("{theta:?}")],
                        "bijection respecting every symbol is not an isomorphism",
                    ));
                }
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::gen::concrete_from_functions;
    use crate::signature::EmbCategory;

    #[test]
    fn checkers_agree_on_a_known_gap() {
        // rotations of {a,b,c}: unary classes cannot tell the elements
        // apart, so a transposition respects them without being a morphism
        let abc = vec!["a".into(), "b".into(), "c".into()];
        let arrows = vec![("r".into(), 0, 0, vec![1, 2, 0]), ("r2".into(), 0, 0, vec![2, 0, 1])];
        let k = concrete_from_functions("K", vec!["X".into()], vec![abc], arrows).unwrap();
        assert!(is_iso_full(&canonical_e(&k, &sigma_basis(&k, 1)).unwrap()).failed());
        assert!(definitional_iso_full_gap(&k, 1).is_some());
        assert!(is_iso_full(&canonical_e(&k, &sigma_basis(&k, 2)).unwrap()).passed());
        assert!(definitional_iso_full_gap(&k, 2).is_none());
    }

    #[test]
    fn checkers_agree_on_structure_categories() {
        let mut rng = <ChaCha8Rng as rand::SeedableRng>::seed_from_u64(5);
        let cfg = GeneratorConfig::default();
        for _ in 0..25 {
            let Ok(a) = sample_aec(&mut rng, &cfg, "K") else { continue };
            let fast = is_iso_full(&canonical_e(&a.k, &sigma_basis(&a.k, 2)).unwrap()).passed();
            assert_eq!(fast, definitional_iso_full_gap(&a.k, 2).is_none());
        }
        let emb = EmbCategory::on("E", vec!["S".into()], vec![crate::signature::SigmaStructure { carrier: vec![], relations: vec![] }]).unwrap();
        assert!(definitional_iso_full_gap(&emb.cat, 2).is_none());
    }

    #[test]
    fn budget_zero_gives_partial_report() {
        let r = run(5, 1, Some(Duration::ZERO));
        assert!(!r.complete);
        assert_eq!(r.attempted, 0);
        assert!(r.notes.iter().any(|n| n.starts_with("A finite failure")));
    }
}
