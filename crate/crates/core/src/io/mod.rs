//! Text formats: DIMACS CNF and the line-oriented `dg v1` graph format.

mod dg;
mod dimacs;

use std::fmt;

use thiserror::Error;

pub use dg::{parse_graph, write_graph, write_reduction, GraphAnnotations};
pub use dimacs::{parse_dimacs, write_dimacs};

/// A parse failure at a 1-based line number.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub kind: ParseErrorKind,
}

impl ParseError {
    pub(crate) fn new(line: usize, kind: ParseErrorKind) -> Self {
        Self { line, kind }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParseErrorKind {
    MissingHeader,
    DuplicateHeader,
    BadHeader(String),
    BadToken(String),
    LiteralOutOfRange { literal: i64, n_vars: usize },
    UnterminatedClause,
    ClauseCountMismatch { declared: usize, found: usize },
    EndpointOutOfRange { vertex: u64, n_vertices: usize },
    EdgeCountMismatch { declared: usize, found: usize },
    DuplicateAnnotation(String),
    IncompleteAnnotations(String),
    UnknownRecord(String),
}

impl fmt::Display for ParseErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use ParseErrorKind::*;
        match self {
            MissingHeader => write!(f, "missing header"),
            DuplicateHeader => write!(f, "duplicate header"),
            BadHeader(s) => write!(f, "malformed header `{s}`"),
            BadToken(s) => write!(f, "unexpected token `{s}`"),
            LiteralOutOfRange { literal, n_vars } => {
                write!(
                    f,
                    "literal {literal} exceeds the declared {n_vars} variables"
                )
            }
            UnterminatedClause => write!(f, "last clause is not terminated by 0"),
            ClauseCountMismatch { declared, found } => {
                write!(
                    f,
                    "header declares {declared} clauses but {found} were found"
                )
            }
            EndpointOutOfRange { vertex, n_vertices } => {
                write!(f, "vertex {vertex} is outside [0, {n_vertices})")
            }
            EdgeCountMismatch { declared, found } => {
                write!(f, "header declares {declared} edges but {found} were found")
            }
            DuplicateAnnotation(s) => write!(f, "duplicate annotation: {s}"),
            IncompleteAnnotations(s) => write!(f, "incomplete annotations: {s}"),
            UnknownRecord(s) => write!(f, "unknown record `{s}`"),
        }
    }
}
