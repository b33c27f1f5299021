//! Small enumeration helpers shared by the exhaustive checks.

/// All injective maps `{0..n} -> {0..m}` in lexicographic order.
pub fn injections(n: usize, m: usize) -> Injections {
    Injections {
        n,
        m,
        current: if n <= m { Some((0..n).collect()) } else { None },
    }
}

pub struct Injections {
    n: usize,
    m: usize,
    current: Option<Vec<usize>>,
}

impl Iterator for Injections {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        let out = self.current.clone()?;
        self.current = advance(&out, self.n, self.m);
        Some(out)
    }
}

fn advance(cur: &[usize], n: usize, m: usize) -> Option<Vec<usize>> {
    let mut v = cur.to_vec();
    let mut i = n;
    while i > 0 {
        i -= 1;
        let mut cand = v[i] + 1;
        while cand < m && v[..i].contains(&cand) {
            cand += 1;
        }
        if cand < m {
            v[i] = cand;
            // fill the tail with the smallest unused values
            let mut next = 0;
            for j in i + 1..n {
                while v[..j].contains(&next) {
                    next += 1;
                }
                v[j] = next;
                next += 1;
            }
            return Some(v);
        }
    }
    None
}

/// All maps `{0..n} -> {0..m}` in lexicographic order.
pub fn all_functions(n: usize, m: usize) -> impl Iterator<Item = Vec<usize>> {
    let total = if n == 0 { 1 } else { (m as u128).pow(n as u32) };
    let total = total.min(u64::MAX as u128) as u64;
    (0..total).map(move |mut code| {
        let mut v = vec![0; n];
        for slot in v.iter_mut().rev() {
            *slot = (code % m as u64) as usize;
            code /= m as u64;
        }
        v
    })
}

/// Cartesian product of choice lists, in lexicographic order.
pub fn cartesian<T: Clone>(choices: &[Vec<T>]) -> Vec<Vec<T>> {
    let mut out = vec![Vec::new()];
    for options in choices {
        let mut next = Vec::with_capacity(out.len() * options.len());
        for prefix in &out {
            for o in options {
                let mut p = prefix.clone();
                p.push(o.clone());
                next.push(p);
            }
        }
        out = next;
    }
    out
}

/// `m^n` without overflow surprises.
pub fn power(m: usize, n: usize) -> u128 {
    (m as u128).saturating_pow(n as u32)
}

/// Decode a tuple code in base `m` with `n` digits (least significant first).
pub fn decode_tuple(mut code: usize, m: usize, n: usize) -> Vec<usize> {
    let mut v = Vec::with_capacity(n);
    for _ in 0..n {
        v.push(code % m);
        code /= m;
    }
    v
}

pub fn encode_tuple(t: &[usize], m: usize) -> usize {
    t.iter().rev().fold(0, |acc, &x| acc * m + x)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn injection_counts() {
        assert_eq!(injections(0, 3).count(), 1);
        assert_eq!(injections(2, 3).count(), 6);
        assert_eq!(injections(3, 3).count(), 6);
        assert_eq!(injections(3, 5).count(), 60);
        assert_eq!(injections(4, 3).count(), 0);
        for v in injections(3, 4) {
            let mut s = v.clone();
            s.sort();
            s.dedup();
            assert_eq!(s.len(), 3);
        }
    }

    #[test]
    fn function_counts() {
        assert_eq!(all_functions(0, 0).count(), 1);
        assert_eq!(all_functions(2, 0).count(), 0);
        assert_eq!(all_functions(3, 2).count(), 8);
    }

    #[test]
    fn tuple_codes_round_trip() {
        for code in 0..27 {
            assert_eq!(encode_tuple(&decode_tuple(code, 3, 3), 3), code);
        }
    }
}
