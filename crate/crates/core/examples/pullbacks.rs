//! Strict pullback against pseudopullback over sets: equivalent for a
//! transportable pair, not for the bundled control pair.

use pie_workbench::concrete::{make_transportable, Universe};
use pie_workbench::dsl::parse;
use pie_workbench::limits::{compare_pb_psb, pseudopullback, pullback};

fn main() -> pie_workbench::Result<()> {
    let ws = parse(include_str!("../corpus/control_pair.cat")).expect("bundled corpus parses");
    let (k1, k2) = (ws.concrete("K1").unwrap(), ws.concrete("K2").unwrap());
    let pb = pullback(k1, k2)?;
    let psb = pseudopullback(k1, k2)?;
    println!("control: pullback {} objects, pseudopullback {} objects", pb.cat().object_count(), psb.cat.cat().object_count());
    println!("  {}", compare_pb_psb(k1, k2)?);

    // close both sides under renaming into their joint elements
    let u = Universe::new(k1.elements().into_iter().chain(k2.elements()));
    let (t1, t2) = (make_transportable(k1, &u)?, make_transportable(k2, &u)?);
    println!(
        "transportable: pullback {} objects, pseudopullback {} objects",
        pullback(&t1, &t2)?.cat().object_count(),
        pseudopullback(&t1, &t2)?.cat.cat().object_count()
    );
    println!("  {}", compare_pb_psb(&t1, &t2)?);
    Ok(())
}
