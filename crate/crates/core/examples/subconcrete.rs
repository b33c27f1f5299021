//! Witness search for subconcreteness, then functor coherence and
//! transportability. The relativized reduct shows a coherence failure.

use pie_workbench::analysis::{
    find_subconcrete_witness, is_coherent_functor, is_transportable_functor, validate_witness, ConcreteFunctor,
    WitnessSearch,
};
use pie_workbench::dsl::parse;

fn inspect(text: &str, functor: &str) -> pie_workbench::Result<()> {
    let ws = parse(text).expect("bundled corpus parses");
    let h = ws.functor(functor).unwrap().clone();
    let (src, dst) = (h.source().name().to_string(), h.target().name().to_string());
    let cf = ConcreteFunctor::new(h, ws.concrete(&src).unwrap().clone(), ws.concrete(&dst).unwrap().clone())?;
    println!("{functor}: {src} -> {dst}");
    match find_subconcrete_witness(&cf, 100_000) {
        WitnessSearch::Found(w) => {
            println!("  {}", validate_witness(&cf, &w));
            for a in cf.source.cat().object_ids() {
                println!("  {}", w.describe(&cf, a));
            }
            println!("  {}", is_coherent_functor(&cf, &w)?);
        }
        WitnessSearch::NotFound => println!("  not subconcrete"),
        WitnessSearch::Unknown { explored } => println!("  undecided after {explored} nodes"),
    }
    println!("  {}", is_transportable_functor(&cf));
    Ok(())
}

fn main() -> pie_workbench::Result<()> {
    inspect(include_str!("../corpus/reduct_pair.cat"), "F")?;
    inspect(include_str!("../corpus/relativized_reduct.cat"), "H")
}
