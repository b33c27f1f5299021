mod common;

use std::collections::BTreeSet;

use pie_workbench::concrete::{is_transportable, make_transportable, Universe};
use pie_workbench::functor::{is_faithful, is_full};
use pie_workbench::harness::gen::{closure_category, random_functor, random_table};
use pie_workbench::harness::GeneratorConfig;
use pie_workbench::limits::{equifier, equifier_factorize, inserter, inserter_factorize, product};
use pie_workbench::signature::{enumerate_sigma, sigma_basis, tuple_classes};
use pie_workbench::{compose_functors, validate_category, validate_functor};
use proptest::prelude::*;
use rand::Rng;

use common::*;

fn draw(seed: u64, cfg: &GeneratorConfig) -> Option<pie_workbench::concrete::ConcreteCategory> {
    let mut r = rng(seed, 0);
    let injective = r.gen_bool(0.5);
    closure_category(&mut r, cfg, injective)
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 200, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn validator_agrees_with_brute_force(seed in any::<u64>()) {
        let t = random_table(&mut rng(seed, 1), &GeneratorConfig::default());
        prop_assert_eq!(validate_category(&t).passed(), laws_hold(&t));
    }

    #[test]
    fn closure_categories_are_lawful(seed in any::<u64>()) {
        if let Some(k) = draw(seed, &GeneratorConfig::default()) {
            prop_assert!(laws_hold(k.cat()));
        }
    }

    #[test]
    fn sigma_matches_subset_oracle(seed in any::<u64>(), n in 1usize..=2) {
        let Some(k) = draw(seed, &small(3)) else { return Ok(()) };
        let Some(oracle) = sigma_oracle(&k, n) else { return Ok(()) };
        let got: BTreeSet<Interp> = enumerate_sigma(&k, n, u128::MAX)
            .unwrap()
            .symbols()
            .iter()
            .filter(|s| s.arity == n)
            .map(|s| flatten(&s.interp))
            .collect();
        prop_assert_eq!(got, oracle);
    }

    #[test]
    fn basis_symbols_are_the_minimal_nonempty_ones(seed in any::<u64>()) {
        let Some(k) = draw(seed, &small(3)) else { return Ok(()) };
        let Some(oracle) = sigma_oracle(&k, 1) else { return Ok(()) };
        let minimal: BTreeSet<Interp> = oracle
            .iter()
            .filter(|r| !r.is_empty() && oracle.iter().all(|s| s.is_empty() || !s.is_subset(r) || s == *r))
            .cloned()
            .collect();
        let basis: BTreeSet<Interp> = sigma_basis(&k, 1).symbols().iter().map(|s| flatten(&s.interp)).collect();
        prop_assert_eq!(basis.len(), tuple_classes(&k, 1).len());
        prop_assert_eq!(basis, minimal);
    }

    #[test]
    fn inserter_factorization_is_the_unique_solution(seed in any::<u64>()) {
        let Some((f, g, h, psi)) = inserter_instance(&mut rng(seed, 2)) else { return Ok(()) };
        let ins = inserter(&f, &g).unwrap();
        prop_assert!(validate_category(&ins.ins).passed());
        prop_assert!(is_faithful(&ins.projection));
        let got = inserter_factorize(&ins, &h, &psi).unwrap();
        prop_assert_eq!(inserter_solutions(&ins, &h, &psi), vec![got]);
    }

    #[test]
    fn equifier_factorization_is_the_unique_solution(seed in any::<u64>()) {
        let mut r = rng(seed, 3);
        let Some((phi, psi, j)) = equifier_instance(&mut r) else { return Ok(()) };
        let eq = equifier(&phi, &psi).unwrap();
        prop_assert!(is_full(&eq.inclusion) && is_faithful(&eq.inclusion));
        let Some(x) = random_functor(&mut r, &j, &eq.eq, 2000) else { return Ok(()) };
        let h = compose_functors(&x, &eq.inclusion).unwrap();
        let got = equifier_factorize(&eq, &h).unwrap();
        prop_assert_eq!(&got, &x);
        prop_assert_eq!(equifier_solutions(&eq, &h), vec![got]);
    }

    #[test]
    fn product_projections_are_functors(s1 in any::<u64>(), s2 in any::<u64>()) {
        let (Some(a), Some(b)) = (draw(s1, &small(2)), draw(s2, &small(2))) else { return Ok(()) };
        let p = product(&[a.clone(), b.clone()]).unwrap();
        prop_assert!(laws_hold(p.prod.cat()));
        prop_assert_eq!(p.prod.cat().object_count(), a.cat().object_count() * b.cat().object_count());
        for pi in &p.projections {
            prop_assert!(validate_functor(pi).passed());
        }
    }

    #[test]
    fn repair_makes_categories_transportable(seed in any::<u64>(), fresh in 0usize..=1) {
        let Some(k) = draw(seed, &small(2)) else { return Ok(()) };
        let u = Universe::with_fresh(&k, fresh);
        let Ok(t) = make_transportable(&k, &u) else { return Ok(()) };
        prop_assert!(laws_hold(t.cat()));
        prop_assert!(is_transportable(&t, &u).unwrap().passed());
    }
}
