//! Plain-text family format.
//!
//! ```text
//! n=5 m=2
//! # comment
//! 1 2
//! 2 5 | w=3/2
//! ```
//!
//! Set lines hold strictly ascending element ids separated by single spaces,
//! optionally followed by ` | w=<int>/<int>`. Blank and `#` lines are
//! skipped. The writer emits sets in lexicographic order, so writing a parsed
//! canonical file reproduces it byte for byte.

use std::fmt::Write as _;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::family::{ElementSet, SetFamily, Universe};

fn perr(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, msg: msg.into() }
}

fn parse_header(line: &str, lineno: usize) -> Result<(u32, u32)> {
    let mut parts = line.split(' ');
    let (Some(a), Some(b), None) = (parts.next(), parts.next(), parts.next()) else {
        return Err(perr(lineno, "header must be `n=<int> m=<int>`"));
    };
    let field = |s: &str, key: &str| -> Result<u32> {
        s.strip_prefix(key)
            .and_then(|v| v.parse::<u32>().ok())
            .ok_or_else(|| perr(lineno, format!("expected `{key}<int>`, got `{s}`")))
    };
    Ok((field(a, "n=")?, field(b, "m=")?))
}

fn parse_weight(s: &str, lineno: usize) -> Result<BigRational> {
    let body = s.strip_prefix("w=").ok_or_else(|| perr(lineno, "weight must be `w=<int>/<int>`"))?;
    let (p, q) = body.split_once('/').ok_or_else(|| perr(lineno, "weight must be `w=<int>/<int>`"))?;
    let p: BigInt = p.parse().map_err(|_| perr(lineno, format!("bad weight numerator `{p}`")))?;
    let q: BigInt = q.parse().map_err(|_| perr(lineno, format!("bad weight denominator `{q}`")))?;
    if q.is_zero() {
        return Err(perr(lineno, "zero weight denominator"));
    }
    let w = BigRational::new(p, q);
    if w.is_negative() {
        return Err(perr(lineno, "negative weight"));
    }
    Ok(w)
}

fn parse_set(s: &str, n: u32, lineno: usize) -> Result<ElementSet> {
    let mut prev = 0u32;
    let mut elems = Vec::new();
    for tok in s.split(' ') {
        let e: u32 = tok.parse().map_err(|_| perr(lineno, format!("bad element id `{tok}`")))?;
        if e == 0 || e > n {
            return Err(perr(lineno, format!("element {e} outside 1..={n}")));
        }
        if e <= prev {
            return Err(perr(lineno, "element ids must be strictly ascending"));
        }
        prev = e;
        elems.push(e);
    }
    ElementSet::from_elements(elems)
}

pub fn parse_family(text: &str) -> Result<SetFamily> {
    let mut header: Option<(u32, u32)> = None;
    let mut sets = Vec::new();
    let mut weights: Vec<Option<BigRational>> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let lineno = i + 1;
        let line = raw.strip_suffix('\r').unwrap_or(raw);
        if line.trim().is_empty() || line.starts_with('#') {
            continue;
        }
        let Some((n, m)) = header else {
            let h = parse_header(line, lineno)?;
            if h.1 == 0 {
                return Err(perr(lineno, "m must be at least 1"));
            }
            Universe::new(h.0).map_err(|e| perr(lineno, e.to_string()))?;
            header = Some(h);
            continue;
        };
        let (set_part, weight) = match line.split_once(" | ") {
            Some((s, w)) => (s, Some(parse_weight(w, lineno)?)),
            None => (line, None),
        };
        let set = parse_set(set_part, n, lineno)?;
        if set.len() != m {
            return Err(perr(lineno, format!("set has {} elements, expected m = {m}", set.len())));
        }
        sets.push(set);
        weights.push(weight);
    }
    let (n, m) = header.ok_or_else(|| perr(1, "missing `n=<int> m=<int>` header"))?;
    let universe = Universe::new(n)?;
    if weights.iter().any(Option::is_some) {
        let w = weights.into_iter().map(|w| w.unwrap_or_else(BigRational::one)).collect();
        SetFamily::with_weights(universe, m, sets, w)
    } else {
        SetFamily::new(universe, m, sets)
    }
}

pub fn write_family(f: &SetFamily) -> Result<String> {
    if f.m() == 0 {
        return Err(Error::InvalidFamily("the text format requires m >= 1".into()));
    }
    let canon = f.canonical();
    let mut out = format!("n={} m={}\n", f.n(), f.m());
    for (i, s) in canon.sets().iter().enumerate() {
        let ids: Vec<String> = s.iter().map(|e| e.to_string()).collect();
        out.push_str(&ids.join(" "));
        if let Some(w) = canon.weights() {
            let _ = write!(out, " | w={}/{}", w[i].numer(), w[i].denom());
        }
        out.push('\n');
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_is_byte_exact() {
        let text = "n=5 m=2\n1 2\n1 3\n2 5\n";
        let f = parse_family(text).unwrap();
        assert_eq!(write_family(&f).unwrap(), text);
        let weighted = "n=4 m=2\n1 2 | w=3/2\n3 4 | w=1/1\n";
        assert_eq!(write_family(&parse_family(weighted).unwrap()).unwrap(), weighted);
    }

    #[test]
    fn writer_sorts_and_skips_comments() {
        let f = parse_family("# c\nn=4 m=2\n\n3 4\n# x\n1 2\n").unwrap();
        assert_eq!(write_family(&f).unwrap(), "n=4 m=2\n1 2\n3 4\n");
    }

    #[test]
    fn rejects_malformed() {
        for bad in [
            "",
            "n=4\n1 2\n",
            "n=4 m=2\n2 1\n",
            "n=4 m=2\n1  2\n",
            "n=4 m=2\n1 5\n",
            "n=4 m=2\n1 2 3\n",
            "n=4 m=2\n1 2\n1 2\n",
            "n=4 m=2\n1 2 | w=1/0\n",
            "n=4 m=2\n1 2 | w=-1/2\n",
            "n=4 m=0\n",
            "n=0 m=1\n",
        ] {
            assert!(parse_family(bad).is_err(), "accepted {bad:?}");
        }
    }
}
