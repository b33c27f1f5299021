mod common;

use std::path::Path;

use pie_workbench::dsl::{parse, print, ErrorClass};
use proptest::prelude::*;

fn corpus() -> Vec<(String, String)> {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("corpus");
    let mut out: Vec<_> = std::fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|x| x == "cat"))
        .map(|p| (p.file_name().unwrap().to_string_lossy().into_owned(), std::fs::read_to_string(&p).unwrap()))
        .collect();
    out.sort();
    out
}

#[test]
fn corpus_prints_idempotently() {
    let files = corpus();
    assert!(files.len() >= 20);
    for (name, text) in files {
        let ws = parse(&text).unwrap_or_else(|e| panic!("{name}: {e}"));
        let once = print(&ws);
        assert_eq!(print(&parse(&once).unwrap()), once, "{name}");
    }
}

#[test]
fn terminal_golden() {
    let (_, text) = corpus().into_iter().find(|(n, _)| n == "terminal.cat").unwrap();
    assert_eq!(print(&parse(&text).unwrap()), "category terminal {\n  objects X\n}\n");
}

#[test]
fn error_classes() {
    let cases = [
        ("category K { objects A; hom A A = \"open }", ErrorClass::Lexical),
        ("category K { objects A B\n  hom A B = f g h = }", ErrorClass::Syntax),
        ("functor F : K -> L { }", ErrorClass::Resolution),
        ("category K { objects A A }", ErrorClass::Resolution),
        ("category K { objects A B C; hom A B = f; hom B C = g }", ErrorClass::Validation),
        (
            "category K { objects A B; hom A B = f }\nconcrete K { carrier A = {a b}; carrier B = {b}; action f = a->b }",
            ErrorClass::Validation,
        ),
    ];
    for (text, class) in cases {
        let e = parse(text).expect_err(text);
        assert_eq!(e.class, class, "{text}: {e}");
        assert!(e.span.line >= 1, "{text}");
    }
}

#[test]
fn comments_and_layout_do_not_matter() {
    let a = parse("category K { objects A B; hom A B = f }").unwrap();
    let b = parse("# arrow\ncategory K {\n\n  objects A   B  # two\n  hom A B = f\n}\n").unwrap();
    assert_eq!(print(&a), print(&b));
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 100, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn generated_workspaces_round_trip(seed in any::<u64>(), index in 0u64..1000) {
        let ws = common::generated_workspace(seed, index);
        let once = print(&ws);
        let back = parse(&once).map_err(|e| TestCaseError::fail(format!("{e}\n{once}")))?;
        prop_assert_eq!(back.declaration_count(), ws.declaration_count());
        prop_assert_eq!(print(&back), once);
    }
}
