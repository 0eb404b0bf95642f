//! Plain-text hypergraph format.
//!
//! ```text
//! # comment
//! n m2 m3
//! 2 u v        (m2 lines)
//! 3 u v w      (m3 lines)
//! ```
//!
//! Indices are 0-based decimal; `#` starts a comment that runs to the end of
//! the line. The header edge counts are upper bounds: a file may list fewer
//! edges than announced, never more.

use std::fmt::Write as _;

use super::{HypergraphBuilder, RankedHypergraph};
use crate::error::{Error, Result};

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

fn numbers(line_no: usize, line: &str) -> Result<Vec<usize>> {
    line.split_whitespace()
        .map(|tok| {
            tok.parse::<usize>()
                .map_err(|_| parse_err(line_no, format!("not a non-negative integer: {tok:?}")))
        })
        .collect()
}

pub fn parse(text: &str) -> Result<RankedHypergraph> {
    let mut header: Option<(usize, usize, usize)> = None;
    let mut builder: Option<HypergraphBuilder> = None;
    let (mut seen2, mut seen3) = (0usize, 0usize);

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let nums = numbers(line_no, line)?;
        let Some((_, m2, m3)) = header else {
            let [n, m2, m3] = nums[..] else {
                return Err(parse_err(line_no, "header must be `n m2 m3`"));
            };
            header = Some((n, m2, m3));
            builder = Some(HypergraphBuilder::new(n));
            continue;
        };
        let b = builder.as_mut().expect("builder exists after header");
        let res = match nums[..] {
            [2, u, v] => {
                seen2 += 1;
                if seen2 > m2 {
                    return Err(parse_err(line_no, format!("more than {m2} 2-edges")));
                }
                b.add_edge2(u, v).map(|_| ())
            }
            [3, u, v, w] => {
                seen3 += 1;
                if seen3 > m3 {
                    return Err(parse_err(line_no, format!("more than {m3} 3-edges")));
                }
                b.add_edge3(u, v, w).map(|_| ())
            }
            _ => return Err(parse_err(line_no, "edge line must be `2 u v` or `3 u v w`")),
        };
        res.map_err(|e| match e {
            Error::Input(msg) => parse_err(line_no, msg),
            other => other,
        })?;
    }

    let Some((_, m2, m3)) = header else {
        return Err(parse_err(0, "missing header line"));
    };
    debug_assert!(seen2 <= m2 && seen3 <= m3);
    Ok(builder.expect("header parsed").build())
}

/// Canonical serialization: edges sorted, each edge's vertices ascending.
pub fn serialize(h: &RankedHypergraph) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{} {} {}", h.n(), h.edges2().len(), h.edges3().len());
    for [u, v] in h.edges2() {
        let _ = writeln!(out, "2 {u} {v}");
    }
    for [u, v, w] in h.edges3() {
        let _ = writeln!(out, "3 {u} {v} {w}");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_format_example() {
        let h = parse("3 2 1\n2 0 1\n3 0 1 2\n").unwrap();
        assert_eq!(h.n(), 3);
        assert_eq!(h.edges2(), &[[0, 1]]);
        assert_eq!(h.edges3(), &[[0, 1, 2]]);
    }

    #[test]
    fn more_edges_than_announced() {
        assert!(matches!(
            parse("3 0 1\n3 0 1 2\n2 0 1\n"),
            Err(Error::Parse { line: 3, .. })
        ));
    }

    #[test]
    fn empty_edge_section() {
        let h = parse("# nothing here\n7 0 0\n").unwrap();
        assert_eq!(h.n(), 7);
        assert_eq!(h.edge_count(), 0);
    }

    #[test]
    fn comments_and_blank_lines() {
        let h = parse("4 0 1 # header\n\n3 3 1 2 # an edge\n").unwrap();
        assert_eq!(h.edges3(), &[[1, 2, 3]]);
    }

    #[test]
    fn errors_carry_line_numbers() {
        match parse("3 0 2\n3 0 1 2\n3 2 1 0\n") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("expected duplicate edge error, got {other:?}"),
        }
        match parse("3 0 1\n3 0 1 3\n") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("expected range error, got {other:?}"),
        }
        match parse("3 0 1\n3 0 x 2\n") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("expected malformed error, got {other:?}"),
        }
        assert!(parse("").is_err());
    }
}
