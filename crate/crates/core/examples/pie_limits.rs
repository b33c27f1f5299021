//! Product, inserter and equifier of the bundled functor pair, with the
//! universal factorizations.

use pie_workbench::dsl::parse;
use pie_workbench::limits::{equifier, equifier_factorize, inserter, inserter_factorize, product};
use pie_workbench::{validate_category, validate_functor, Functor};

fn main() -> pie_workbench::Result<()> {
    let ws = parse(include_str!("../corpus/functor_nat.cat")).expect("bundled corpus parses");
    let (k, l) = (ws.concrete("K").unwrap(), ws.concrete("L").unwrap());
    let (f, g) = (ws.functor("F").unwrap(), ws.functor("G").unwrap());
    let (phi, psi) = (&ws.nat("phi").unwrap().nat, &ws.nat("psi").unwrap().nat);

    let p = product(&[k.clone(), l.clone()])?;
    println!("product {}: {} objects", p.prod.name(), p.prod.cat().object_count());
    for (a, tuple) in p.prod.cat().objects().iter().zip(&p.object_tuples) {
        println!("  {a} = {tuple:?} carrying {:?}", p.prod.carrier(p.prod.cat().object_id(a).unwrap()));
    }

    let ins = inserter(f, g)?;
    println!("inserter: {}", validate_category(&ins.ins));
    for (i, &(x, m)) in ins.objects.iter().enumerate() {
        println!("  {} over {} via {}", ins.ins.object_name(i), k.cat().object_name(x), l.cat().morphism_name(m));
    }
    // factoring the projection through itself gives the identity
    let id = inserter_factorize(&ins, &ins.projection, &ins.phi)?;
    println!("  P factors as the identity: {}", id == Functor::identity(ins.ins.clone()));

    let eq = equifier(phi, psi)?;
    println!("equifier keeps {:?}", eq.eq.objects());
    let back = equifier_factorize(&eq, &eq.inclusion)?;
    println!("  inclusion factors: {}", validate_functor(&back));
    Ok(())
}
