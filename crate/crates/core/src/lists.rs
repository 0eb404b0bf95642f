//! Per-vertex color lists and the text formats for lists and colorings.
//!
//! Lists file: one line per vertex, `v c1 c2 ...`.
//! Coloring file: one line per colored vertex, `v c`.
//! Both accept `#` comments.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hypergraph::Vertex;

pub type Color = usize;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ListAssignment {
    palette: usize,
    lists: Vec<Vec<Color>>,
}

impl ListAssignment {
    /// Every vertex gets `{0, ..., colors - 1}`.
    pub fn uniform(n: usize, colors: usize) -> Self {
        Self {
            palette: colors,
            lists: vec![(0..colors).collect(); n],
        }
    }

    /// Lists are sorted and deduplicated; the palette is one past the largest
    /// color mentioned.
    pub fn from_lists(mut lists: Vec<Vec<Color>>) -> Self {
        for l in &mut lists {
            l.sort_unstable();
            l.dedup();
        }
        let palette = lists
            .iter()
            .filter_map(|l| l.last())
            .max()
            .map_or(0, |&c| c + 1);
        Self { palette, lists }
    }

    pub fn n(&self) -> usize {
        self.lists.len()
    }

    pub fn palette(&self) -> usize {
        self.palette
    }

    pub fn list(&self, u: Vertex) -> &[Color] {
        &self.lists[u]
    }

    pub fn contains(&self, u: Vertex, c: Color) -> bool {
        self.lists[u].binary_search(&c).is_ok()
    }

    /// `Some(size)` when all lists have the same size.
    pub fn uniform_size(&self) -> Option<usize> {
        let first = self.lists.first().map_or(0, Vec::len);
        self.lists.iter().all(|l| l.len() == first).then_some(first)
    }
}

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

fn data_lines(text: &str) -> impl Iterator<Item = (usize, Result<Vec<usize>>)> + '_ {
    text.lines().enumerate().filter_map(|(i, raw)| {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            return None;
        }
        let nums = line
            .split_whitespace()
            .map(|t| {
                t.parse::<usize>()
                    .map_err(|_| parse_err(i + 1, format!("bad integer {t:?}")))
            })
            .collect();
        Some((i + 1, nums))
    })
}

pub fn parse_lists(text: &str, n: usize) -> Result<ListAssignment> {
    let mut lists: Vec<Option<Vec<Color>>> = vec![None; n];
    for (line, nums) in data_lines(text) {
        let nums = nums?;
        let (&v, colors) = nums.split_first().expect("non-empty line");
        if v >= n {
            return Err(parse_err(
                line,
                format!("vertex {v} out of range (n = {n})"),
            ));
        }
        if lists[v].replace(colors.to_vec()).is_some() {
            return Err(parse_err(line, format!("vertex {v} listed twice")));
        }
    }
    let lists = lists
        .into_iter()
        .enumerate()
        .map(|(v, l)| l.ok_or_else(|| Error::input(format!("no list for vertex {v}"))))
        .collect::<Result<Vec<_>>>()?;
    Ok(ListAssignment::from_lists(lists))
}

pub fn serialize_lists(lists: &ListAssignment) -> String {
    let mut out = String::new();
    for (v, l) in lists.lists.iter().enumerate() {
        let _ = write!(out, "{v}");
        for c in l {
            let _ = write!(out, " {c}");
        }
        out.push('\n');
    }
    out
}

/// Partial coloring: vertices absent from the file are `None`.
pub fn parse_coloring(text: &str, n: usize) -> Result<Vec<Option<Color>>> {
    let mut out = vec![None; n];
    for (line, nums) in data_lines(text) {
        let [v, c] = nums?[..] else {
            return Err(parse_err(line, "coloring line must be `v c`"));
        };
        if v >= n {
            return Err(parse_err(
                line,
                format!("vertex {v} out of range (n = {n})"),
            ));
        }
        if out[v].replace(c).is_some() {
            return Err(parse_err(line, format!("vertex {v} colored twice")));
        }
    }
    Ok(out)
}

pub fn serialize_coloring(coloring: &[Option<Color>]) -> String {
    let mut out = String::new();
    for (v, c) in coloring.iter().enumerate() {
        if let Some(c) = c {
            let _ = writeln!(out, "{v} {c}");
        }
    }
    out
}
