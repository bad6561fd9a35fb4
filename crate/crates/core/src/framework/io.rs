//! Line-oriented framework files:
//!
//! ```text
//! # comment
//! dim 2
//! v 0 0 0
//! v 1 1/2 0.75
//! e 0 1
//! ```
//!
//! Coordinates are integers, decimals or `p/q` literals and are read exactly.

use std::fmt::Write as _;
use std::path::Path;

use super::{Edge, Framework, FrameworkError};
use crate::linalg::{format_rational, parse_rational, Mode, Rational};

pub fn load_framework(path: impl AsRef<Path>, mode: Mode) -> Result<Framework, FrameworkError> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|source| FrameworkError::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_framework(&text, mode)
}

pub fn parse_framework(text: &str, mode: Mode) -> Result<Framework, FrameworkError> {
    let mut dim: Option<usize> = None;
    let mut vertices: Vec<(usize, Vec<Rational>)> = Vec::new();
    let mut edges = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let err = |message: String| FrameworkError::Parse { line, message };
        let mut tokens = content.split_whitespace();
        let keyword = tokens.next().expect("non-empty line has a token");
        let args: Vec<&str> = tokens.collect();
        match (keyword, dim) {
            ("dim", None) => {
                let [n] = args[..] else {
                    return Err(err("expected `dim <n>`".into()));
                };
                let n: usize = n.parse().map_err(|_| err(format!("bad dimension `{n}`")))?;
                if !(2..=3).contains(&n) {
                    return Err(FrameworkError::UnsupportedDimension(n));
                }
                dim = Some(n);
            }
            ("dim", Some(_)) => return Err(err("repeated `dim` header".into())),
            (_, None) => return Err(err("file must start with a `dim <n>` header".into())),
            ("v", Some(n)) => {
                if args.len() != n + 1 {
                    return Err(err(format!("expected `v <id>` followed by {n} coordinates")));
                }
                let id: usize = args[0]
                    .parse()
                    .map_err(|_| err(format!("bad vertex id `{}`", args[0])))?;
                let coords = args[1..]
                    .iter()
                    .map(|t| parse_rational(t).ok_or_else(|| err(format!("bad coordinate `{t}`"))))
                    .collect::<Result<Vec<_>, _>>()?;
                vertices.push((id, coords));
            }
            ("e", Some(_)) => {
                let [t, h] = args[..] else {
                    return Err(err("expected `e <tail> <head>`".into()));
                };
                let parse_id =
                    |s: &str| s.parse::<usize>().map_err(|_| err(format!("bad vertex id `{s}`")));
                edges.push(Edge::new(parse_id(t)?, parse_id(h)?));
            }
            (other, Some(_)) => return Err(err(format!("unknown record `{other}`"))),
        }
    }

    let dim = dim.ok_or(FrameworkError::Parse {
        line: 0,
        message: "missing `dim <n>` header".into(),
    })?;
    vertices.sort_by_key(|(id, _)| *id);
    for (expected, (id, _)) in vertices.iter().enumerate() {
        if *id != expected {
            return Err(FrameworkError::VertexIds(format!(
                "ids must be dense from 0 without repeats; expected {expected}, found {id}"
            )));
        }
    }
    let positions = vertices.into_iter().map(|(_, p)| p).collect();
    Framework::new(dim, positions, edges, mode)
}

impl Framework {
    /// Serializes in the canonical file format (rationals as `p/q`).
    pub fn to_text(&self) -> String {
        let mut out = format!("dim {}\n", self.dim());
        for (v, p) in self.positions().iter().enumerate() {
            let coords: Vec<String> = p.iter().map(format_rational).collect();
            writeln!(out, "v {v} {}", coords.join(" ")).unwrap();
        }
        for e in self.edges() {
            writeln!(out, "e {} {}", e.tail, e.head).unwrap();
        }
        out
    }
}
