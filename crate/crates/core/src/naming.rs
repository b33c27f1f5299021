//! Identifier construction for derived objects, morphisms and elements.
//!
//! Constructions name their outputs from the names of their inputs, so the
//! encodings here must be injective: two different input tuples never
//! produce the same name.

/// `(a,b,c)`, escaping `\`, `,`, `(` and `)` inside components.
pub fn tuple_name<S: AsRef<str>>(parts: &[S]) -> String {
    let mut out = String::from("(");
    for (i, p) in parts.iter().enumerate() {
        if i > 0 {
            out.push(',');
        }
        for ch in p.as_ref().chars() {
            if matches!(ch, '\\' | ',' | '(' | ')') {
                out.push('\\');
            }
            out.push(ch);
        }
    }
    out.push(')');
    out
}

/// Element of a disjoint union: the component index is part of the name.
pub fn tagged(index: usize, element: &str) -> String {
    format!("{index}:{element}")
}

/// Inverse of [`tagged`].
pub fn untag(name: &str) -> Option<(usize, &str)> {
    let (i, rest) = name.split_once(':')?;
    Some((i.parse().ok()?, rest))
}

/// Finite function rendered as `{a->b,c->d}` (used inside derived names).
pub fn map_name<A: AsRef<str>, B: AsRef<str>>(pairs: &[(A, B)]) -> String {
    let body: Vec<String> = pairs
        .iter()
        .map(|(a, b)| format!("{}->{}", a.as_ref(), b.as_ref()))
        .collect();
    format!("{{{}}}", body.join(","))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tuple_names_are_injective_on_commas() {
        assert_ne!(tuple_name(&["a,b", "c"]), tuple_name(&["a", "b,c"]));
        assert_eq!(tuple_name::<&str>(&[]), "()");
        assert_eq!(tuple_name(&["A", "B"]), "(A,B)");
    }

    #[test]
    fn tags_round_trip() {
        let t = tagged(12, "x:y");
        assert_eq!(untag(&t), Some((12, "x:y")));
    }
}
