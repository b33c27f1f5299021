//! Text format for workspaces of categories, concrete structure, functors,
//! natural transformations and signatures.
//!
//! ```text
//! category K { objects A B; hom A B = f }
//! concrete K { carrier A = {a}; carrier B = {b}; action f = a->b }
//! ```
//!
//! Statements end at `;` or a newline, `#` starts a comment, and names that
//! are not plain identifiers are written in double quotes.

mod print;
mod resolve;
mod syntax;
mod workspace;

pub use print::print;
pub use syntax::{is_plain_ident, render_ident, DslError, ErrorClass, Span};
pub use workspace::{NatDecl, SignatureDecl, Workspace};

/// Parse and validate a workspace.
pub fn parse(text: &str) -> Result<Workspace, DslError> {
    let decls = syntax::parse_decls(text)?;
    resolve::resolve(&decls)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::sync::Arc;

    use crate::category::{CategoryBuilder, FinCategory};
    use crate::concrete::ConcreteCategory;
    use crate::limits::product;

    #[test]
    fn terminal_sample() {
        let ws = parse("# the terminal category\ncategory terminal { objects X }\n").unwrap();
        let c = ws.category("terminal").unwrap();
        assert_eq!(c.object_count(), 1);
        assert_eq!(c.morphism_count(), 1);
        assert_eq!(print(&ws), "category terminal {\n  objects X\n}\n");
    }

    #[test]
    fn empty_workspace_prints_empty() {
        assert_eq!(print(&Workspace::new()), "");
        assert!(parse("\n# nothing\n").unwrap().is_empty());
    }

    #[test]
    fn dangling_composition_is_resolution_error() {
        let e = parse("category K {\n  objects A B\n  hom A B = f\n  compose f g = f\n}").unwrap_err();
        assert_eq!(e.class, ErrorClass::Resolution);
        assert!(e.message.contains("compose f g = f"), "{e}");
        assert_eq!(e.span, Span { line: 4, col: 13 });
    }

    #[test]
    fn law_failure_is_validation_error() {
        // g ∘ f undefined although composable
        let e = parse("category K { objects A B C; hom A B = f; hom B C = g }").unwrap_err();
        assert_eq!(e.class, ErrorClass::Validation);
    }

    #[test]
    fn full_workspace_round_trips() {
        let text = r#"
category K {
  objects A B
  hom A B = f
}
category L { objects X; hom X X = e; compose e e = e }
concrete K { carrier A = {a}; carrier B = {b1 b2}; action f = a->b1 }
concrete L { carrier X = {x y}; action e = x->x, y->x }
functor F : K -> L { obj A -> X; obj B -> X; mor f -> e }
functor G : K -> L { obj A -> X; obj B -> X; mor f -> e }
nat phi : F => G { at A = id_X; at B = id_X }
signature S over K { rel R/2 at B = {(b1,b2), (b2,b2)}; rel P/1 }
"#;
        let ws = parse(text).unwrap();
        let printed = print(&ws);
        let again = parse(&printed).unwrap();
        assert_eq!(again, ws);
        assert_eq!(print(&again), printed);
        assert!(printed.contains("rel R/2 at B = {(b1,b2), (b2,b2)}"), "{printed}");
    }

    #[test]
    fn identity_order_is_preserved() {
        // identities declared before other morphisms, with custom names
        let mut b = CategoryBuilder::new("K");
        b.object("A").object("B");
        b.identity("B", "1B").morphism("f", "A", "B");
        let c = Arc::new(b.build().unwrap());
        let mut ws = Workspace::new();
        ws.add_category(c.clone()).unwrap();
        let back = parse(&print(&ws)).unwrap();
        assert_eq!(**back.category("K").unwrap(), *c);
    }

    #[test]
    fn generated_names_are_quoted() {
        let c = Arc::new(FinCategory::discrete("D", &["A"]));
        let k = ConcreteCategory::new(c, vec![vec!["a".into(), "b".into()]], vec![None]).unwrap();
        let p = product(&[k.clone(), k]).unwrap();
        let mut ws = Workspace::new();
        ws.add_concrete(p.prod.clone()).unwrap();
        let text = print(&ws);
        assert!(text.contains('"'));
        assert_eq!(parse(&text).unwrap(), ws);
    }
}
