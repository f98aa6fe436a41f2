//! From k-CNF formulas to tripartite reachability graphs.
//!
//! Variables are split into halves `X` (first `l`) and `Y` (last `l`). The
//! graph has one vertex per evaluation of `X`, one per clause and one per
//! evaluation of `Y`. An `X` evaluation points to every clause it leaves
//! unsatisfied, and a clause points to every `Y` evaluation that leaves it
//! unsatisfied. The formula is satisfiable exactly when some `X` vertex fails
//! to reach some `Y` vertex, and since every clause an `X` vertex reaches is a
//! direct successor, the number of `Y` vertices it reaches is its reach count
//! minus its out-degree.
//!
//! Vertex layout: `X` evaluations occupy ids `0..2^l` in mask order, clauses
//! follow in input order, then `Y` evaluations in mask order. Bit `i` of a
//! mask is the value of the side's `(i + 1)`-th variable.

use thiserror::Error;

use crate::cnf::{CnfFormula, Literal, SatVerdict, Witness};
use crate::graph::{Digraph, VertexId};
use crate::reach::{reach_targets, ReachCounts};

/// Default cap on vertices per evaluation side.
pub const DEFAULT_SIDE_CAP: u64 = 1 << 20;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReductionError {
    #[error("formula has an odd number of variables ({0}); pad it first")]
    OddVariableCount(usize),
    #[error(
        "reduction needs 2^{l} vertices per side, which reaches the cap of {cap} vertices per side"
    )]
    CapExceeded { l: u32, cap: u64 },
    #[error("reach counts cover {got} vertices but the reduction graph has {expected}")]
    CountsLengthMismatch { expected: usize, got: usize },
    #[error("X evaluation {x_mask} reaches every Y evaluation, so it has no witness")]
    NoUnreachedY { x_mask: u64 },
    #[error("invalid reduction annotations: {0}")]
    BadAnnotations(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    X,
    Y,
}

/// Role of a vertex in a reduction graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum VertexLabel {
    X(u64),
    Clause(usize),
    Y(u64),
}

/// Even split of `2l` variables: `X` is `0..l`, `Y` is `l..2l`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VariableSplit {
    l: u32,
}

impl VariableSplit {
    pub fn new(l: u32) -> Self {
        Self { l }
    }

    /// Split for a formula whose variable count has been padded to even.
    pub fn for_formula(f: &CnfFormula) -> Result<Self, ReductionError> {
        if !f.n_vars().is_multiple_of(2) {
            return Err(ReductionError::OddVariableCount(f.n_vars()));
        }
        Ok(Self::new((f.n_vars() / 2) as u32))
    }

    pub fn l(&self) -> u32 {
        self.l
    }

    pub fn x_vars(&self) -> std::ops::Range<usize> {
        0..self.l as usize
    }

    pub fn y_vars(&self) -> std::ops::Range<usize> {
        self.l as usize..2 * self.l as usize
    }

    /// Side owning `var` and its bit position within that side's mask.
    pub fn locate(&self, var: usize) -> Option<(Side, u32)> {
        let l = self.l as usize;
        if var < l {
            Some((Side::X, var as u32))
        } else if var < 2 * l {
            Some((Side::Y, (var - l) as u32))
        } else {
            None
        }
    }

    /// `2^l`, or `None` if it does not fit in a `u64`.
    pub fn side_size(&self) -> Option<u64> {
        1u64.checked_shl(self.l)
    }
}

/// Whether some literal of `clause` over `side`'s variables is made true by
/// `mask`. The reduction adds an edge exactly when this is false.
pub fn evaluate_clause_side(
    clause: &[Literal],
    mask: u64,
    side: Side,
    split: &VariableSplit,
) -> bool {
    clause.iter().any(|lit| match split.locate(lit.var) {
        Some((s, bit)) if s == side => lit.holds(mask >> bit & 1 == 1),
        _ => false,
    })
}

/// Bitmasks of a clause's positive and negative literals on one side. A side
/// evaluation `m` leaves the clause unsatisfied iff `m & pos == 0` and
/// `!m & neg == 0`.
#[derive(Clone, Copy)]
struct SidePattern {
    pos: u64,
    neg: u64,
}

impl SidePattern {
    fn of(clause: &[Literal], side: Side, split: &VariableSplit) -> Self {
        let mut p = SidePattern { pos: 0, neg: 0 };
        for lit in clause {
            if let Some((s, bit)) = split.locate(lit.var) {
                if s == side {
                    if lit.positive {
                        p.pos |= 1 << bit;
                    } else {
                        p.neg |= 1 << bit;
                    }
                }
            }
        }
        p
    }

    #[inline]
    fn unsatisfied_by(self, mask: u64) -> bool {
        mask & self.pos == 0 && !mask & self.neg == 0
    }
}

/// The reduction graph together with its vertex partition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReductionGraph {
    graph: Digraph,
    split: VariableSplit,
    x_vertices: Vec<VertexId>,
    clause_vertices: Vec<VertexId>,
    y_vertices: Vec<VertexId>,
    labels: Vec<VertexLabel>,
}

/// Builds the reduction graph of a formula already padded to an even number
/// of variables. Refuses when `2^l` reaches `side_cap`.
pub fn build_reduction(f: &CnfFormula, side_cap: u64) -> Result<ReductionGraph, ReductionError> {
    let split = VariableSplit::for_formula(f)?;
    let side = match split.side_size() {
        Some(s) if s < side_cap => s as usize,
        _ => {
            return Err(ReductionError::CapExceeded {
                l: split.l(),
                cap: side_cap,
            })
        }
    };
    let n_clauses = f.n_clauses();
    let clause_base = side;
    let y_base = side + n_clauses;
    let n = 2 * side + n_clauses;

    let x_patterns: Vec<SidePattern> = f
        .clauses()
        .iter()
        .map(|c| SidePattern::of(c, Side::X, &split))
        .collect();

    let mut adjacency: Vec<Vec<VertexId>> = Vec::with_capacity(n);
    for mask in 0..side as u64 {
        adjacency.push(
            x_patterns
                .iter()
                .enumerate()
                .filter(|(_, p)| p.unsatisfied_by(mask))
                .map(|(c, _)| clause_base + c)
                .collect(),
        );
    }
    for clause in f.clauses() {
        let p = SidePattern::of(clause, Side::Y, &split);
        adjacency.push(
            (0..side as u64)
                .filter(|&mask| p.unsatisfied_by(mask))
                .map(|mask| y_base + mask as usize)
                .collect(),
        );
    }
    adjacency.resize_with(n, Vec::new);

    let mut labels = Vec::with_capacity(n);
    labels.extend((0..side as u64).map(VertexLabel::X));
    labels.extend((0..n_clauses).map(VertexLabel::Clause));
    labels.extend((0..side as u64).map(VertexLabel::Y));

    Ok(ReductionGraph {
        graph: Digraph::from_sorted_adjacency(adjacency),
        split,
        x_vertices: (0..side).collect(),
        clause_vertices: (clause_base..y_base).collect(),
        y_vertices: (y_base..n).collect(),
        labels,
    })
}

impl ReductionGraph {
    /// Reassembles a reduction graph from a graph and per-vertex labels, as
    /// read back from an annotated graph file. Checks that the labels cover
    /// every mask and that all edges run `X -> clause -> Y`.
    pub fn from_labels(
        graph: Digraph,
        l: u32,
        labels: Vec<VertexLabel>,
    ) -> Result<Self, ReductionError> {
        let bad = |msg: String| Err(ReductionError::BadAnnotations(msg));
        let n = graph.n_vertices();
        if labels.len() != n {
            return bad(format!("{} labels for {} vertices", labels.len(), n));
        }
        let split = VariableSplit::new(l);
        let side = match split.side_size() {
            Some(s) if s <= n as u64 => s as usize,
            _ => return bad(format!("l = {l} is too large for {n} vertices")),
        };
        let n_clauses = labels
            .iter()
            .filter(|lab| matches!(lab, VertexLabel::Clause(_)))
            .count();

        const MISSING: usize = usize::MAX;
        let mut x_vertices = vec![MISSING; side];
        let mut y_vertices = vec![MISSING; side];
        let mut clause_vertices = vec![MISSING; n_clauses];
        for (v, label) in labels.iter().enumerate() {
            let (slot, what) = match *label {
                VertexLabel::X(m) => (x_vertices.get_mut(m as usize), "X mask"),
                VertexLabel::Y(m) => (y_vertices.get_mut(m as usize), "Y mask"),
                VertexLabel::Clause(c) => (clause_vertices.get_mut(c), "clause index"),
            };
            match slot {
                Some(s) if *s == MISSING => *s = v,
                Some(_) => return bad(format!("vertex {v}: {what} assigned twice")),
                None => return bad(format!("vertex {v}: {what} out of range")),
            }
        }
        if x_vertices.contains(&MISSING) || y_vertices.contains(&MISSING) {
            return bad(format!("expected 2^{l} X and Y vertices"));
        }
        for (u, v) in graph.edges() {
            let ok = matches!(
                (labels[u], labels[v]),
                (VertexLabel::X(_), VertexLabel::Clause(_))
                    | (VertexLabel::Clause(_), VertexLabel::Y(_))
            );
            if !ok {
                return bad(format!(
                    "edge ({u}, {v}) breaks the X -> clause -> Y layering"
                ));
            }
        }
        Ok(Self {
            graph,
            split,
            x_vertices,
            clause_vertices,
            y_vertices,
            labels,
        })
    }

    pub fn graph(&self) -> &Digraph {
        &self.graph
    }

    pub fn split(&self) -> VariableSplit {
        self.split
    }

    pub fn l(&self) -> u32 {
        self.split.l()
    }

    /// `2^l`.
    pub fn side_size(&self) -> usize {
        self.x_vertices.len()
    }

    pub fn n_clauses(&self) -> usize {
        self.clause_vertices.len()
    }

    pub fn x_vertex(&self, mask: u64) -> VertexId {
        self.x_vertices[mask as usize]
    }

    pub fn y_vertex(&self, mask: u64) -> VertexId {
        self.y_vertices[mask as usize]
    }

    pub fn clause_vertex(&self, clause: usize) -> VertexId {
        self.clause_vertices[clause]
    }

    /// `X` vertices indexed by mask.
    pub fn x_vertices(&self) -> &[VertexId] {
        &self.x_vertices
    }

    /// `Y` vertices indexed by mask.
    pub fn y_vertices(&self) -> &[VertexId] {
        &self.y_vertices
    }

    pub fn clause_vertices(&self) -> &[VertexId] {
        &self.clause_vertices
    }

    pub fn label(&self, v: VertexId) -> VertexLabel {
        self.labels[v]
    }

    pub fn labels(&self) -> &[VertexLabel] {
        &self.labels
    }

    /// Number of `Y` vertices reachable from the `X` vertex of `x_mask`,
    /// derived from its total reach count by subtracting its out-degree.
    pub fn reach_y(&self, counts: &ReachCounts, x_mask: u64) -> usize {
        let v = self.x_vertex(x_mask);
        counts[v].saturating_sub(self.graph.out_degree(v))
    }

    /// Mask of the first `Y` evaluation (in mask order) the `X` vertex of
    /// `x_mask` does not reach.
    pub fn extract_witness(&self, x_mask: u64) -> Result<u64, ReductionError> {
        let n = self.graph.n_vertices();
        let source = self.x_vertex(x_mask);
        let mut seen = vec![false; n];
        seen[source] = true;
        let mut todo = vec![source];
        while let Some(v) = todo.pop() {
            for &w in self.graph.out_neighbors(v) {
                if !seen[w] {
                    seen[w] = true;
                    todo.push(w);
                }
            }
        }
        self.y_vertices
            .iter()
            .position(|&y| !seen[y])
            .map(|m| m as u64)
            .ok_or(ReductionError::NoUnreachedY { x_mask })
    }

    /// Decides satisfiability from reachability counts alone: the formula is
    /// satisfiable iff some `X` vertex reaches fewer than `2^l` `Y` vertices.
    /// The witness uses the first such `X` mask.
    pub fn decide_sat(&self, counts: &ReachCounts) -> Result<SatVerdict, ReductionError> {
        if counts.len() != self.graph.n_vertices() {
            return Err(ReductionError::CountsLengthMismatch {
                expected: self.graph.n_vertices(),
                got: counts.len(),
            });
        }
        let side = self.side_size();
        let open = (0..side as u64).find(|&m| self.reach_y(counts, m) < side);
        match open {
            None => Ok(SatVerdict::unsat()),
            Some(x_mask) => {
                let y_mask = self.extract_witness(x_mask)?;
                Ok(SatVerdict {
                    satisfiable: true,
                    witness: Some(Witness { x_mask, y_mask }),
                })
            }
        }
    }

    /// Direct traversal count of `Y` vertices reachable from an `X` mask.
    pub fn reach_y_by_traversal(&self, x_mask: u64) -> usize {
        reach_targets(&self.graph, self.x_vertex(x_mask), &self.y_vertices)
    }

    /// Upper bounds `(N, M)` on the graph size: `2·2^l + |C|` vertices and
    /// `2·2^l·|C|` edges.
    pub fn size_bounds(&self) -> (usize, usize) {
        let side = self.side_size();
        let c = self.n_clauses();
        (2 * side + c, 2 * side * c)
    }
}

/// Free-function form of [`ReductionGraph::decide_sat`].
pub fn decide_sat(rg: &ReductionGraph, counts: &ReachCounts) -> Result<SatVerdict, ReductionError> {
    rg.decide_sat(counts)
}

/// Free-function form of [`ReductionGraph::extract_witness`].
pub fn extract_witness(rg: &ReductionGraph, x_mask: u64) -> Result<u64, ReductionError> {
    rg.extract_witness(x_mask)
}
