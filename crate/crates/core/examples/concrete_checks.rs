//! Faithfulness, concrete monos, coherence and transportability on two
//! bundled categories, and the transportable repair of one of them.

use pie_workbench::concrete::{
    has_concrete_monos, is_coherent, is_faithful_u, is_transportable, make_transportable, Universe,
};
use pie_workbench::dsl::parse;

fn report(k: &pie_workbench::concrete::ConcreteCategory, u: &Universe) -> pie_workbench::Result<()> {
    println!("{} ({} objects, universe of {})", k.name(), k.cat().object_count(), u.len());
    println!("  faithful U      {}", is_faithful_u(k));
    println!("  concrete monos  {}", has_concrete_monos(k));
    println!("  {}", is_coherent(k));
    println!("  {}", is_transportable(k, u)?);
    Ok(())
}

fn main() -> pie_workbench::Result<()> {
    let ws = parse(include_str!("../corpus/sets_injections.cat")).expect("bundled corpus parses");
    let inj = ws.concrete("Inj").expect("declared");
    report(inj, &Universe::of(inj))?;
    // a fresh element exposes renamings with no object behind them
    let u = Universe::with_fresh(inj, 1);
    report(inj, &u)?;
    let closed = make_transportable(inj, &u)?;
    println!("repaired over the same universe: {} objects", closed.cat().object_count());
    report(&closed, &u)?;

    let ws = parse(include_str!("../corpus/idempotent.cat")).expect("bundled corpus parses");
    let idem = ws.concrete("Idem").expect("declared");
    report(idem, &Universe::of(idem))
}
