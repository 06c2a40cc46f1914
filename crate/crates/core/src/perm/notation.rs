//! Cycle notation with 1-based points, e.g. `(1,2)(3,5,8,10,7,6,4)(9,11)`.
//!
//! `()` and `id` denote the identity. Whitespace is ignored anywhere.

use super::{PermError, Permutation};

/// Parses cycle notation on `degree` points.
pub fn parse_cycles(text: &str, degree: usize) -> Result<Permutation, PermError> {
    let cycles = parse_cycle_list(text)?;
    Permutation::from_cycles(degree, &cycles)
}

/// Parses cycle notation, taking the degree to be the largest point mentioned.
pub fn parse_cycles_auto(text: &str) -> Result<Permutation, PermError> {
    let cycles = parse_cycle_list(text)?;
    let degree = cycles.iter().flatten().map(|&p| p + 1).max().unwrap_or(0);
    Permutation::from_cycles(degree, &cycles)
}

/// Formats with 1-based points; same as `Display`.
pub fn format_cycles(p: &Permutation) -> String {
    p.to_string()
}

/// Splits the text into 0-based cycles without checking disjointness.
pub(crate) fn parse_cycle_list(text: &str) -> Result<Vec<Vec<usize>>, PermError> {
    let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    if compact == "id" || compact == "()" || compact.is_empty() {
        return Ok(Vec::new());
    }
    let bad = |msg: &str| PermError::Parse {
        text: text.to_string(),
        message: msg.to_string(),
    };
    let mut cycles = Vec::new();
    let mut rest = compact.as_str();
    while !rest.is_empty() {
        let body = rest.strip_prefix('(').ok_or_else(|| bad("expected '('"))?;
        let close = body.find(')').ok_or_else(|| bad("unclosed cycle"))?;
        let inner = &body[..close];
        rest = &body[close + 1..];
        if inner.is_empty() {
            continue;
        }
        let mut cycle = Vec::new();
        for tok in inner.split(',') {
            let v: usize = tok
                .parse()
                .map_err(|_| bad("expected a positive integer point"))?;
            if v == 0 {
                return Err(bad("points are numbered from 1"));
            }
            cycle.push(v - 1);
        }
        if cycle.len() > 1 {
            cycles.push(cycle);
        }
    }
    Ok(cycles)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_forms() {
        for s in ["()", "id", " ( ) ", ""] {
            assert!(parse_cycles(s, 4).unwrap().is_identity());
        }
    }

    #[test]
    fn whitespace_insensitive() {
        let a = parse_cycles("(1, 2) (3,5, 8)", 8).unwrap();
        assert_eq!(a.to_string(), "(1,2)(3,5,8)");
    }

    #[test]
    fn canonical_round_trip() {
        let s = "(1,2)(3,5,8,10,7,6,4)(9,11)";
        assert_eq!(format_cycles(&parse_cycles(s, 11).unwrap()), s);
    }

    #[test]
    fn non_canonical_input_is_normalized() {
        let a = parse_cycles("(5,3)(2,1)", 5).unwrap();
        assert_eq!(a.to_string(), "(1,2)(3,5)");
    }

    #[test]
    fn errors() {
        assert!(parse_cycles("(1,2", 3).is_err());
        assert!(parse_cycles("(0,1)", 3).is_err());
        assert!(parse_cycles("(1,4)", 3).is_err());
        assert!(parse_cycles("(1,2)(2,3)", 3).is_err());
        assert!(parse_cycles("1,2", 3).is_err());
    }

    #[test]
    fn auto_degree() {
        assert_eq!(parse_cycles_auto("(1,11)").unwrap().degree(), 11);
    }
}
