use std::fmt::Write;

use super::{ParseError, ParseErrorKind};
use crate::cnf::{Clause, CnfFormula, Literal};

/// Parses DIMACS CNF: `c` comment lines, a single `p cnf <n> <m>` header, then
/// zero-terminated clauses that may span lines. A lone `0` is an empty
/// clause.
pub fn parse_dimacs(text: &str) -> Result<CnfFormula, ParseError> {
    let mut header: Option<(usize, usize)> = None;
    let mut clauses: Vec<Clause> = Vec::new();
    let mut current: Clause = Vec::new();
    let mut last_line = 0;

    for (idx, raw) in text.lines().enumerate() {
        let lineno = idx + 1;
        last_line = lineno;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('c') {
            continue;
        }
        if line.starts_with('p') {
            if header.is_some() {
                return Err(ParseError::new(lineno, ParseErrorKind::DuplicateHeader));
            }
            header = Some(parse_header(line).ok_or_else(|| {
                ParseError::new(lineno, ParseErrorKind::BadHeader(line.to_string()))
            })?);
            continue;
        }
        let Some((n_vars, _)) = header else {
            return Err(ParseError::new(lineno, ParseErrorKind::MissingHeader));
        };
        for token in line.split_whitespace() {
            let lit: i64 = token.parse().map_err(|_| {
                ParseError::new(lineno, ParseErrorKind::BadToken(token.to_string()))
            })?;
            match Literal::from_dimacs(lit) {
                None => clauses.push(std::mem::take(&mut current)),
                Some(l) if l.var < n_vars => current.push(l),
                Some(_) => {
                    return Err(ParseError::new(
                        lineno,
                        ParseErrorKind::LiteralOutOfRange {
                            literal: lit,
                            n_vars,
                        },
                    ))
                }
            }
        }
    }

    let Some((n_vars, declared)) = header else {
        return Err(ParseError::new(
            last_line.max(1),
            ParseErrorKind::MissingHeader,
        ));
    };
    if !current.is_empty() {
        return Err(ParseError::new(
            last_line,
            ParseErrorKind::UnterminatedClause,
        ));
    }
    if clauses.len() != declared {
        return Err(ParseError::new(
            last_line,
            ParseErrorKind::ClauseCountMismatch {
                declared,
                found: clauses.len(),
            },
        ));
    }
    Ok(CnfFormula::new(n_vars, clauses).expect("literals range-checked while parsing"))
}

fn parse_header(line: &str) -> Option<(usize, usize)> {
    let mut parts = line.split_whitespace();
    if parts.next()? != "p" || parts.next()? != "cnf" {
        return None;
    }
    let n = parts.next()?.parse().ok()?;
    let m = parts.next()?.parse().ok()?;
    parts.next().is_none().then_some((n, m))
}

pub fn write_dimacs(f: &CnfFormula) -> String {
    let mut out = format!("p cnf {} {}\n", f.n_vars(), f.n_clauses());
    for clause in f.clauses() {
        for lit in clause {
            write!(out, "{} ", lit.to_dimacs()).unwrap();
        }
        out.push_str("0\n");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    const FIGURE: &str = "p cnf 4 3\n-1 4 0\n1 -3 4 0\n1 2 -3 0\n";

    #[test]
    fn figure_formula() {
        let f = parse_dimacs(FIGURE).unwrap();
        assert_eq!(
            f,
            CnfFormula::from_dimacs_clauses(4, &[&[-1, 4], &[1, -3, 4], &[1, 2, -3]])
        );
    }

    #[test]
    fn header_only() {
        let f = parse_dimacs("p cnf 1 0\n").unwrap();
        assert_eq!(f.n_vars(), 1);
        assert_eq!(f.n_clauses(), 0);
    }

    #[test]
    fn comments_and_multiline_clauses() {
        let f = parse_dimacs("c hello\nc p cnf 9 9\np cnf 3 2\n1 -2\n 3 0 0\n").unwrap();
        assert_eq!(
            f.clauses()[0],
            vec![Literal::pos(0), Literal::neg(1), Literal::pos(2)]
        );
        assert!(f.clauses()[1].is_empty());
    }

    #[test]
    fn clause_count_mismatch() {
        let err = parse_dimacs("p cnf 2 1\n1 0 2 0\n").unwrap_err();
        assert_eq!(
            err.kind,
            ParseErrorKind::ClauseCountMismatch {
                declared: 1,
                found: 2
            }
        );
    }

    #[test]
    fn errors_carry_line_numbers() {
        let cases: &[(&str, usize, ParseErrorKind)] = &[
            ("1 2 0\n", 1, ParseErrorKind::MissingHeader),
            ("", 1, ParseErrorKind::MissingHeader),
            ("p cnf 2 1\np cnf 2 1\n", 2, ParseErrorKind::DuplicateHeader),
            ("p cnf 2\n", 1, ParseErrorKind::BadHeader("p cnf 2".into())),
            (
                "p dnf 2 1\n",
                1,
                ParseErrorKind::BadHeader("p dnf 2 1".into()),
            ),
            (
                "p cnf 2 1 7\n",
                1,
                ParseErrorKind::BadHeader("p cnf 2 1 7".into()),
            ),
            (
                "p cnf 2 1\n1 3 0\n",
                2,
                ParseErrorKind::LiteralOutOfRange {
                    literal: 3,
                    n_vars: 2,
                },
            ),
            (
                "p cnf 2 1\nc ok\n1 -3 0\n",
                3,
                ParseErrorKind::LiteralOutOfRange {
                    literal: -3,
                    n_vars: 2,
                },
            ),
            (
                "p cnf 2 1\n1 x 0\n",
                2,
                ParseErrorKind::BadToken("x".into()),
            ),
            (
                "p cnf 2 1\n1 2 0\n%\n",
                3,
                ParseErrorKind::BadToken("%".into()),
            ),
            ("p cnf 2 1\n1 2\n", 2, ParseErrorKind::UnterminatedClause),
        ];
        for (text, line, kind) in cases {
            let err = parse_dimacs(text).unwrap_err();
            assert_eq!((err.line, &err.kind), (*line, kind), "input {text:?}");
        }
    }

    #[test]
    fn write_then_parse() {
        let f = parse_dimacs(FIGURE).unwrap();
        assert_eq!(write_dimacs(&f), FIGURE);
        let with_empty = CnfFormula::new(2, vec![vec![], vec![Literal::neg(1)]]).unwrap();
        assert_eq!(
            parse_dimacs(&write_dimacs(&with_empty)).unwrap(),
            with_empty
        );
    }
}
