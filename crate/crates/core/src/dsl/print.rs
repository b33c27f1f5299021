//! Canonical serialization: declarations sorted by kind then name, two-space
//! indentation, one statement per line.

use std::collections::HashSet;
use std::fmt::Write;

use super::resolve::default_identity_name;
use super::syntax::render_ident;
use super::workspace::Workspace;
use crate::category::FinCategory;
use crate::concrete::ConcreteCategory;
use crate::functor::Functor;

fn id(s: &str) -> String {
    render_ident(s)
}

/// Length of the trailing run of identities that the parser regenerates on
/// its own: default names, in object order.
fn implicit_identity_suffix(c: &FinCategory) -> usize {
    let m = c.morphism_count();
    let mut start = m;
    // grow the suffix backwards while it stays valid
    while start > 0 {
        let f = start - 1;
        if !c.is_identity(f) {
            break;
        }
        let next_obj = if start < m { Some(c.dom(start)) } else { None };
        if next_obj.is_some_and(|o| c.dom(f) >= o) {
            break;
        }
        start -= 1;
    }
    // naming must match what the builder would pick
    loop {
        let taken: HashSet<&str> = (0..start).map(|f| c.morphism_name(f)).collect();
        let mut taken = taken;
        let mut ok = true;
        for f in start..m {
            let want = default_identity_name(c.object_name(c.dom(f)), &taken);
            if want != c.morphism_name(f) {
                ok = false;
                break;
            }
            taken.insert(c.morphism_name(f));
        }
        if ok {
            return m - start;
        }
        start += 1;
    }
}

pub fn print_category(out: &mut String, c: &FinCategory) {
    writeln!(out, "category {} {{", id(c.name())).unwrap();
    if c.object_count() > 0 {
        let objs: Vec<String> = c.objects().iter().map(|o| id(o)).collect();
        writeln!(out, "  objects {}", objs.join(" ")).unwrap();
    }
    let explicit = c.morphism_count() - implicit_identity_suffix(c);
    let mut f = 0;
    while f < explicit {
        let (d, k) = (c.dom(f), c.cod(f));
        let mut names = vec![id(c.morphism_name(f))];
        let mut g = f + 1;
        while g < explicit && c.dom(g) == d && c.cod(g) == k {
            names.push(id(c.morphism_name(g)));
            g += 1;
        }
        writeln!(
            out,
            "  hom {} {} = {}",
            id(c.object_name(d)),
            id(c.object_name(k)),
            names.join(" ")
        )
        .unwrap();
        f = g;
    }
    for a in c.object_ids() {
        let i = c.identity(a);
        if i < explicit {
            writeln!(out, "  identity {} = {}", id(c.object_name(a)), id(c.morphism_name(i))).unwrap();
        }
    }
    for (g, f, h) in c.composition_entries() {
        let unit = (c.is_identity(g) && h == f && c.identity(c.cod(f)) == g)
            || (c.is_identity(f) && h == g && c.identity(c.dom(g)) == f);
        if !unit {
            writeln!(
                out,
                "  compose {} {} = {}",
                id(c.morphism_name(g)),
                id(c.morphism_name(f)),
                id(c.morphism_name(h))
            )
            .unwrap();
        }
    }
    out.push_str("}\n");
}

pub fn print_concrete(out: &mut String, k: &ConcreteCategory) {
    let c = k.cat();
    writeln!(out, "concrete {} {{", id(c.name())).unwrap();
    for a in c.object_ids() {
        let els: Vec<String> = k.carrier(a).iter().map(|e| id(e)).collect();
        writeln!(out, "  carrier {} = {{{}}}", id(c.object_name(a)), els.join(" ")).unwrap();
    }
    for f in c.morphism_ids() {
        if c.is_identity(f) && c.identities()[c.dom(f)] == f {
            continue;
        }
        let pairs: Vec<String> = k
            .function_pairs(f)
            .iter()
            .map(|(x, y)| format!("{}->{}", id(x), id(y)))
            .collect();
        if pairs.is_empty() {
            writeln!(out, "  action {} = {{}}", id(c.morphism_name(f))).unwrap();
        } else {
            writeln!(out, "  action {} = {}", id(c.morphism_name(f)), pairs.join(", ")).unwrap();
        }
    }
    out.push_str("}\n");
}

pub fn print_functor(out: &mut String, name: &str, f: &Functor) {
    let (s, t) = (f.source(), f.target());
    writeln!(out, "functor {} : {} -> {} {{", id(name), id(s.name()), id(t.name())).unwrap();
    for a in s.object_ids() {
        writeln!(out, "  obj {} -> {}", id(s.object_name(a)), id(t.object_name(f.obj(a)))).unwrap();
    }
    for m in s.morphism_ids() {
        if s.is_identity(m) {
            continue;
        }
        writeln!(out, "  mor {} -> {}", id(s.morphism_name(m)), id(t.morphism_name(f.mor(m)))).unwrap();
    }
    out.push_str("}\n");
}

/// Canonical text of a workspace. The empty workspace prints as "".
pub fn print(ws: &Workspace) -> String {
    let mut blocks: Vec<String> = Vec::new();
    for (_, c) in ws.categories() {
        let mut s = String::new();
        print_category(&mut s, c);
        blocks.push(s);
    }
    for (_, k) in ws.concrete_categories() {
        let mut s = String::new();
        print_concrete(&mut s, k);
        blocks.push(s);
    }
    for (n, f) in ws.functors() {
        let mut s = String::new();
        print_functor(&mut s, n, f);
        blocks.push(s);
    }
    for (n, d) in ws.nats() {
        let mut s = String::new();
        let (src, tgt) = (d.nat.from().source(), d.nat.from().target());
        writeln!(s, "nat {} : {} => {} {{", id(n), id(&d.from), id(&d.to)).unwrap();
        for a in src.object_ids() {
            writeln!(
                s,
                "  at {} = {}",
                id(src.object_name(a)),
                id(tgt.morphism_name(d.nat.component(a)))
            )
            .unwrap();
        }
        s.push_str("}\n");
        blocks.push(s);
    }
    for (n, d) in ws.signatures() {
        let k = ws.concrete(&d.over).expect("signature over a declared concrete category");
        let mut s = String::new();
        writeln!(s, "signature {} over {} {{", id(n), id(&d.over)).unwrap();
        for r in d.signature.symbols() {
            write!(s, "  rel {}/{}", id(&r.name), r.arity).unwrap();
            for a in k.cat().object_ids() {
                if r.interp[a].is_empty() {
                    continue;
                }
                let tuples: Vec<String> = r
                    .tuples_named(k, a)
                    .iter()
                    .map(|t| format!("({})", t.iter().map(|e| id(e)).collect::<Vec<_>>().join(",")))
                    .collect();
                write!(s, " at {} = {{{}}}", id(k.cat().object_name(a)), tuples.join(", ")).unwrap();
            }
            s.push('\n');
        }
        s.push_str("}\n");
        blocks.push(s);
    }
    blocks.join("\n")
}
