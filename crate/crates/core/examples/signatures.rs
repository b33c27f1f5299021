//! Tuple classes, the interpretable signature, the canonical embedding
//! into structures and the finite ladder for the bundled injections.

use pie_workbench::concrete::Universe;
use pie_workbench::dsl::parse;
use pie_workbench::signature::{
    canonical_e, classify_aec, enumerate_sigma, is_iso_full, is_replete_e, sigma_basis, sigma_size, tuple_classes,
};

fn main() -> pie_workbench::Result<()> {
    let ws = parse(include_str!("../corpus/sets_injections.cat")).expect("bundled corpus parses");
    let k = ws.concrete("Inj").unwrap();
    for n in 1..=2 {
        println!("arity {n}: {} tuple classes", tuple_classes(k, n).len());
    }
    println!("symbols per arity: {:?}", sigma_size(k, 2));

    let all = enumerate_sigma(k, 2, 1 << 16)?;
    println!("enumerated {} symbols", all.len());
    let basis = sigma_basis(k, 2);
    for r in basis.symbols() {
        let at: Vec<usize> = r.interp.iter().map(|t| t.len()).collect();
        println!("  {}/{} with tuples per object {at:?}", r.name, r.arity);
    }

    let e = canonical_e(k, &basis)?;
    println!("{}", is_iso_full(&e));
    println!("{}", is_replete_e(&e, &Universe::of(k))?);
    print!("{}", classify_aec(k, 2, &Universe::of(k))?);
    Ok(())
}
