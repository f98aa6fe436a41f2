//! Immutable directed graphs in compressed sparse row form, plus the
//! structural queries the counting algorithms need: reverse graph, strongly
//! connected components and the condensation DAG.

use thiserror::Error;

/// Dense 0-based vertex identifier.
pub type VertexId = usize;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("edge #{index} ({source_vertex}, {target}) has an endpoint outside [0, {n_vertices})")]
    EndpointOutOfRange {
        index: usize,
        source_vertex: VertexId,
        target: VertexId,
        n_vertices: usize,
    },
}

/// A directed graph with `N` vertices and `M` distinct edges.
///
/// Out-neighbour lists are stored sorted, so enumeration order is stable and
/// two graphs with the same edge set compare equal. Duplicate edges are
/// collapsed on construction. Self-loops are kept but never contribute to a
/// reachability count.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Digraph {
    offsets: Vec<usize>,
    targets: Vec<VertexId>,
}

impl Digraph {
    /// Builds a graph from an edge list, rejecting out-of-range endpoints and
    /// dropping duplicates.
    pub fn new(n_vertices: usize, edges: &[(VertexId, VertexId)]) -> Result<Self, GraphError> {
        for (index, &(u, v)) in edges.iter().enumerate() {
            if u >= n_vertices || v >= n_vertices {
                return Err(GraphError::EndpointOutOfRange {
                    index,
                    source_vertex: u,
                    target: v,
                    n_vertices,
                });
            }
        }
        let mut sorted = edges.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        Ok(Self::from_sorted_edges(n_vertices, &sorted))
    }

    /// `edges` must be sorted by `(u, v)`, deduplicated and in range.
    fn from_sorted_edges(n_vertices: usize, edges: &[(VertexId, VertexId)]) -> Self {
        let mut offsets = vec![0usize; n_vertices + 1];
        for &(u, _) in edges {
            offsets[u + 1] += 1;
        }
        for i in 0..n_vertices {
            offsets[i + 1] += offsets[i];
        }
        let targets = edges.iter().map(|&(_, v)| v).collect();
        Self { offsets, targets }
    }

    /// Builds a graph from per-vertex adjacency lists that are already sorted
    /// and free of duplicates. Used by constructions that emit edges in
    /// canonical order and want to skip the global sort.
    pub(crate) fn from_sorted_adjacency(adjacency: Vec<Vec<VertexId>>) -> Self {
        let n = adjacency.len();
        let mut offsets = Vec::with_capacity(n + 1);
        let total: usize = adjacency.iter().map(Vec::len).sum();
        let mut targets = Vec::with_capacity(total);
        offsets.push(0);
        for list in adjacency {
            debug_assert!(list.windows(2).all(|w| w[0] < w[1]));
            debug_assert!(list.iter().all(|&v| v < n));
            targets.extend(list);
            offsets.push(targets.len());
        }
        Self { offsets, targets }
    }

    pub fn empty(n_vertices: usize) -> Self {
        Self {
            offsets: vec![0; n_vertices + 1],
            targets: Vec::new(),
        }
    }

    #[inline]
    pub fn n_vertices(&self) -> usize {
        self.offsets.len() - 1
    }

    #[inline]
    pub fn m_edges(&self) -> usize {
        self.targets.len()
    }

    /// Sorted out-neighbours of `v`.
    #[inline]
    pub fn out_neighbors(&self, v: VertexId) -> &[VertexId] {
        &self.targets[self.offsets[v]..self.offsets[v + 1]]
    }

    #[inline]
    pub fn out_degree(&self, v: VertexId) -> usize {
        self.offsets[v + 1] - self.offsets[v]
    }

    pub fn has_edge(&self, u: VertexId, v: VertexId) -> bool {
        u < self.n_vertices() && self.out_neighbors(u).binary_search(&v).is_ok()
    }

    pub fn has_self_loop(&self) -> bool {
        (0..self.n_vertices()).any(|v| self.has_edge(v, v))
    }

    /// All edges in `(u, v)` lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (VertexId, VertexId)> + '_ {
        (0..self.n_vertices()).flat_map(move |u| self.out_neighbors(u).iter().map(move |&v| (u, v)))
    }

    /// Graph with every edge flipped.
    pub fn reverse(&self) -> Digraph {
        let n = self.n_vertices();
        let mut offsets = vec![0usize; n + 1];
        for &v in &self.targets {
            offsets[v + 1] += 1;
        }
        for i in 0..n {
            offsets[i + 1] += offsets[i];
        }
        let mut cursor = offsets.clone();
        let mut targets = vec![0; self.targets.len()];
        // Visiting sources in increasing order keeps each reversed list sorted.
        for (u, v) in self.edges() {
            targets[cursor[v]] = u;
            cursor[v] += 1;
        }
        Digraph { offsets, targets }
    }
}

/// Strongly connected components of a graph, contracted into a DAG.
///
/// SCC ids are assigned in topological order of the condensation, so every
/// `dag` edge `(a, b)` has `a < b` and `topo_order` is the identity
/// permutation. The field is kept so callers do not rely on that detail.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Condensation {
    pub scc_of: Vec<usize>,
    pub scc_sizes: Vec<usize>,
    pub dag: Digraph,
    pub topo_order: Vec<usize>,
}

impl Condensation {
    pub fn n_components(&self) -> usize {
        self.scc_sizes.len()
    }
}

/// Computes the SCC condensation with an iterative Tarjan pass.
pub fn condense(g: &Digraph) -> Condensation {
    const UNVISITED: usize = usize::MAX;

    let n = g.n_vertices();
    let mut index = vec![UNVISITED; n];
    let mut lowlink = vec![0usize; n];
    let mut on_stack = vec![false; n];
    let mut stack: Vec<VertexId> = Vec::new();
    // (vertex, position in its neighbour list)
    let mut call_stack: Vec<(VertexId, usize)> = Vec::new();
    // Tarjan emits components sinks-first; these ids are flipped at the end.
    let mut tarjan_comp = vec![UNVISITED; n];
    let mut n_comps = 0usize;
    let mut next_index = 0usize;

    for root in 0..n {
        if index[root] != UNVISITED {
            continue;
        }
        index[root] = next_index;
        lowlink[root] = next_index;
        next_index += 1;
        stack.push(root);
        on_stack[root] = true;
        call_stack.push((root, 0));

        while let Some(&mut (v, ref mut pos)) = call_stack.last_mut() {
            let neighbors = g.out_neighbors(v);
            if *pos < neighbors.len() {
                let w = neighbors[*pos];
                *pos += 1;
                if index[w] == UNVISITED {
                    index[w] = next_index;
                    lowlink[w] = next_index;
                    next_index += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    call_stack.push((w, 0));
                } else if on_stack[w] {
                    lowlink[v] = lowlink[v].min(index[w]);
                }
                continue;
            }

            call_stack.pop();
            if let Some(&(parent, _)) = call_stack.last() {
                lowlink[parent] = lowlink[parent].min(lowlink[v]);
            }
            if lowlink[v] == index[v] {
                loop {
                    let w = stack.pop().expect("tarjan stack underflow");
                    on_stack[w] = false;
                    tarjan_comp[w] = n_comps;
                    if w == v {
                        break;
                    }
                }
                n_comps += 1;
            }
        }
    }

    let scc_of: Vec<usize> = tarjan_comp.iter().map(|&c| n_comps - 1 - c).collect();
    let mut scc_sizes = vec![0usize; n_comps];
    for &c in &scc_of {
        scc_sizes[c] += 1;
    }
    let mut dag_edges: Vec<(usize, usize)> = g
        .edges()
        .map(|(u, v)| (scc_of[u], scc_of[v]))
        .filter(|(a, b)| a != b)
        .collect();
    dag_edges.sort_unstable();
    dag_edges.dedup();
    let dag = Digraph::from_sorted_edges(n_comps, &dag_edges);

    Condensation {
        scc_of,
        scc_sizes,
        dag,
        topo_order: (0..n_comps).collect(),
    }
}

/// True when `order` is a permutation of `g`'s vertices in which every edge
/// points forward.
pub fn is_topological_order(g: &Digraph, order: &[VertexId]) -> bool {
    let n = g.n_vertices();
    if order.len() != n {
        return false;
    }
    let mut position = vec![usize::MAX; n];
    for (i, &v) in order.iter().enumerate() {
        if v >= n || position[v] != usize::MAX {
            return false;
        }
        position[v] = i;
    }
    g.edges().all(|(u, v)| position[u] < position[v])
}

/// True iff every SCC is a singleton and no vertex has a self-loop.
pub fn is_acyclic(g: &Digraph) -> bool {
    if g.has_self_loop() {
        return false;
    }
    condense(g).n_components() == g.n_vertices()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path3() -> Digraph {
        Digraph::new(3, &[(0, 1), (1, 2)]).unwrap()
    }

    #[test]
    fn build_path_graph() {
        let g = path3();
        assert_eq!(g.n_vertices(), 3);
        assert_eq!(g.m_edges(), 2);
        assert_eq!(g.out_neighbors(0), &[1]);
        assert_eq!(g.out_neighbors(2), &[] as &[usize]);
    }

    #[test]
    fn duplicates_collapse() {
        let g = Digraph::new(2, &[(0, 1), (0, 1)]).unwrap();
        assert_eq!(g.m_edges(), 1);
    }

    #[test]
    fn out_of_range_names_the_edge() {
        let err = Digraph::new(3, &[(0, 1), (1, 2), (2, 3)]).unwrap_err();
        assert_eq!(
            err,
            GraphError::EndpointOutOfRange {
                index: 2,
                source_vertex: 2,
                target: 3,
                n_vertices: 3
            }
        );
        assert!(err.to_string().contains("edge #2"));
    }

    #[test]
    fn zero_vertices() {
        let g = Digraph::new(0, &[]).unwrap();
        assert_eq!(g.n_vertices(), 0);
        let c = condense(&g);
        assert_eq!(c.n_components(), 0);
        assert!(is_acyclic(&g));
    }

    #[test]
    fn neighbours_sorted_regardless_of_input_order() {
        let g = Digraph::new(4, &[(0, 3), (0, 1), (0, 2)]).unwrap();
        assert_eq!(g.out_neighbors(0), &[1, 2, 3]);
        assert_eq!(g.edges().collect::<Vec<_>>(), vec![(0, 1), (0, 2), (0, 3)]);
    }

    #[test]
    fn reverse_graph() {
        let g = Digraph::new(3, &[(0, 2), (1, 2), (0, 1)]).unwrap();
        let r = g.reverse();
        assert_eq!(r.out_neighbors(2), &[0, 1]);
        assert_eq!(r.out_neighbors(1), &[0]);
        assert_eq!(r.reverse(), g);
    }

    #[test]
    fn condense_path_is_identity_shaped() {
        let c = condense(&path3());
        assert_eq!(c.scc_sizes, vec![1, 1, 1]);
        assert_eq!(c.dag.m_edges(), 2);
        assert!(is_topological_order(&c.dag, &c.topo_order));
        // topological ids on a path follow the path
        assert_eq!(c.scc_of, vec![0, 1, 2]);
    }

    #[test]
    fn condense_two_cycle() {
        let g = Digraph::new(2, &[(0, 1), (1, 0)]).unwrap();
        let c = condense(&g);
        assert_eq!(c.scc_sizes, vec![2]);
        assert_eq!(c.dag.n_vertices(), 1);
        assert_eq!(c.dag.m_edges(), 0);
    }

    #[test]
    fn condense_cycle_with_tail() {
        let g = Digraph::new(3, &[(0, 1), (1, 0), (1, 2)]).unwrap();
        let c = condense(&g);
        assert_eq!(c.n_components(), 2);
        assert_eq!(c.scc_of[0], c.scc_of[1]);
        assert_ne!(c.scc_of[0], c.scc_of[2]);
        assert_eq!(c.dag.m_edges(), 1);
        assert!(c.dag.has_edge(c.scc_of[0], c.scc_of[2]));
    }

    #[test]
    fn acyclicity() {
        assert!(is_acyclic(&path3()));
        assert!(!is_acyclic(&Digraph::new(2, &[(0, 1), (1, 0)]).unwrap()));
        assert!(!is_acyclic(&Digraph::new(2, &[(0, 0)]).unwrap()));
    }

    #[test]
    fn deep_path_does_not_overflow_the_stack() {
        let n = 200_000;
        let edges: Vec<_> = (0..n - 1).map(|i| (i, i + 1)).collect();
        let g = Digraph::new(n, &edges).unwrap();
        assert!(is_acyclic(&g));
        let mut cyc = edges.clone();
        cyc.push((n - 1, 0));
        let c = condense(&Digraph::new(n, &cyc).unwrap());
        assert_eq!(c.scc_sizes, vec![n]);
    }

    #[test]
    fn topological_order_checker_rejects_bad_orders() {
        let g = path3();
        assert!(is_topological_order(&g, &[0, 1, 2]));
        assert!(!is_topological_order(&g, &[1, 0, 2]));
        assert!(!is_topological_order(&g, &[0, 0, 2]));
        assert!(!is_topological_order(&g, &[0, 1]));
    }
}
