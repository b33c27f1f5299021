//! Build a small category, check the laws, then break one table entry and
//! see which law reports it.

use pie_workbench::{validate_category, CategoryBuilder};

fn main() -> pie_workbench::Result<()> {
    // the walking idempotent: one object, e∘e = e
    let mut b = CategoryBuilder::new("Idem");
    b.object("X").morphism("e", "X", "X").compose("e", "e", "e");
    let idem = b.build()?;
    println!("{}: {}", idem.name(), validate_category(&idem));

    // a span with a composite left out on purpose
    let mut b = CategoryBuilder::new("Broken").raw();
    b.object("A").object("B").object("C");
    b.morphism("f", "A", "B").morphism("g", "B", "C");
    let broken = b.build()?;
    println!("{}: {}", broken.name(), validate_category(&broken));
    Ok(())
}
