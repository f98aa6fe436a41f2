//! The `dg v1` graph format.
//!
//! ```text
//! # comment
//! p dg <N> <M>
//! l <l>                     (reduction graphs only)
//! v <id> X|C|Y <value>      (reduction graphs only, one per vertex)
//! e <u> <v>                 (M lines, 0-based)
//! ```
//!
//! `X`/`Y` values are evaluation masks and `C` values clause indices, all in
//! decimal. Records may appear in any order after the header; the writer
//! emits the header, then `l`, then `v` lines by id, then `e` lines sorted by
//! `(u, v)`.

use std::fmt::Write;

use super::{ParseError, ParseErrorKind};
use crate::graph::{Digraph, VertexId};
use crate::reduction::{ReductionGraph, VertexLabel};

/// Reduction metadata carried alongside a graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GraphAnnotations {
    pub l: u32,
    pub labels: Vec<VertexLabel>,
}

impl From<&ReductionGraph> for GraphAnnotations {
    fn from(rg: &ReductionGraph) -> Self {
        Self {
            l: rg.l(),
            labels: rg.labels().to_vec(),
        }
    }
}

impl GraphAnnotations {
    /// Rebuilds the reduction graph these annotations describe.
    pub fn into_reduction(
        self,
        graph: Digraph,
    ) -> Result<ReductionGraph, crate::reduction::ReductionError> {
        ReductionGraph::from_labels(graph, self.l, self.labels)
    }
}

pub fn write_graph(g: &Digraph, annotations: Option<&GraphAnnotations>) -> String {
    let mut out = String::new();
    writeln!(out, "p dg {} {}", g.n_vertices(), g.m_edges()).unwrap();
    if let Some(a) = annotations {
        assert_eq!(a.labels.len(), g.n_vertices(), "one label per vertex");
        writeln!(out, "l {}", a.l).unwrap();
        for (v, label) in a.labels.iter().enumerate() {
            match label {
                VertexLabel::X(m) => writeln!(out, "v {v} X {m}"),
                VertexLabel::Clause(c) => writeln!(out, "v {v} C {c}"),
                VertexLabel::Y(m) => writeln!(out, "v {v} Y {m}"),
            }
            .unwrap();
        }
    }
    for (u, v) in g.edges() {
        writeln!(out, "e {u} {v}").unwrap();
    }
    out
}

pub fn write_reduction(rg: &ReductionGraph) -> String {
    write_graph(rg.graph(), Some(&GraphAnnotations::from(rg)))
}

pub fn parse_graph(text: &str) -> Result<(Digraph, Option<GraphAnnotations>), ParseError> {
    let mut header: Option<(usize, usize)> = None;
    let mut edges: Vec<(VertexId, VertexId)> = Vec::new();
    let mut l: Option<u32> = None;
    let mut labels: Vec<Option<VertexLabel>> = Vec::new();
    let mut n_labels = 0usize;
    let mut last_line = 0;

    for (idx, raw) in text.lines().enumerate() {
        let lineno = idx + 1;
        last_line = lineno;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let err = |kind| ParseError::new(lineno, kind);
        let fields: Vec<&str> = line.split_whitespace().collect();

        if fields[0] == "p" {
            if header.is_some() {
                return Err(err(ParseErrorKind::DuplicateHeader));
            }
            let parsed = match fields.as_slice() {
                ["p", "dg", n, m] => n.parse().ok().zip(m.parse().ok()),
                _ => None,
            };
            let (n, m) = parsed.ok_or_else(|| err(ParseErrorKind::BadHeader(line.to_string())))?;
            header = Some((n, m));
            labels = vec![None; n];
            continue;
        }
        let Some((n, _)) = header else {
            return Err(err(ParseErrorKind::MissingHeader));
        };
        let vertex = |s: &str| -> Result<VertexId, ParseError> {
            let x: u64 = s
                .parse()
                .map_err(|_| err(ParseErrorKind::BadToken(s.to_string())))?;
            if x >= n as u64 {
                return Err(err(ParseErrorKind::EndpointOutOfRange {
                    vertex: x,
                    n_vertices: n,
                }));
            }
            Ok(x as VertexId)
        };
        let number = |s: &str| -> Result<u64, ParseError> {
            s.parse()
                .map_err(|_| err(ParseErrorKind::BadToken(s.to_string())))
        };

        match fields.as_slice() {
            ["e", u, v] => edges.push((vertex(u)?, vertex(v)?)),
            ["l", value] => {
                if l.is_some() {
                    return Err(err(ParseErrorKind::DuplicateAnnotation("l".into())));
                }
                let value = number(value)?;
                l = Some(
                    u32::try_from(value)
                        .map_err(|_| err(ParseErrorKind::BadToken(value.to_string())))?,
                );
            }
            ["v", id, kind, value] => {
                let id = vertex(id)?;
                let value = number(value)?;
                let label = match *kind {
                    "X" => VertexLabel::X(value),
                    "C" => VertexLabel::Clause(value as usize),
                    "Y" => VertexLabel::Y(value),
                    other => return Err(err(ParseErrorKind::BadToken(other.to_string()))),
                };
                if labels[id].is_some() {
                    return Err(err(ParseErrorKind::DuplicateAnnotation(format!(
                        "vertex {id}"
                    ))));
                }
                labels[id] = Some(label);
                n_labels += 1;
            }
            _ => return Err(err(ParseErrorKind::UnknownRecord(line.to_string()))),
        }
    }

    let Some((n, declared)) = header else {
        return Err(ParseError::new(
            last_line.max(1),
            ParseErrorKind::MissingHeader,
        ));
    };
    if edges.len() != declared {
        return Err(ParseError::new(
            last_line,
            ParseErrorKind::EdgeCountMismatch {
                declared,
                found: edges.len(),
            },
        ));
    }
    let graph = Digraph::new(n, &edges).expect("endpoints range-checked while parsing");

    let annotations = match (l, n_labels) {
        (None, 0) => None,
        (None, _) => {
            return Err(ParseError::new(
                last_line,
                ParseErrorKind::IncompleteAnnotations("vertex labels without an `l` record".into()),
            ))
        }
        (Some(l), k) if k == n => Some(GraphAnnotations {
            l,
            labels: labels.into_iter().map(Option::unwrap).collect(),
        }),
        (Some(_), k) => {
            return Err(ParseError::new(
                last_line,
                ParseErrorKind::IncompleteAnnotations(format!("{k} of {n} vertices labelled")),
            ))
        }
    };
    Ok((graph, annotations))
}
