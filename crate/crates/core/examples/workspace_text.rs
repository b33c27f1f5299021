//! Parse a workspace, print it canonically, and show the error classes.

use pie_workbench::dsl::{parse, print};

fn main() {
    let text = "# a span\ncategory Span { objects L M R; hom M L = l; hom M R = r }\n";
    let ws = parse(text).expect("valid workspace");
    let canonical = print(&ws);
    print!("{canonical}");
    assert_eq!(print(&parse(&canonical).unwrap()), canonical);

    for bad in [
        "category K { objects A; hom A A = \"unterminated }",
        "category K { objects A B C; hom A B = f; hom B C = g }",
        "functor F : K -> L { }",
    ] {
        match parse(bad) {
            Ok(_) => println!("accepted: {bad}"),
            Err(e) => println!("{:?} at {}:{}: {}", e.class, e.span.line, e.span.col, e.message),
        }
    }
}
