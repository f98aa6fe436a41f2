//! Exact per-vertex reachability counts.
//!
//! `counts[v]` is the number of vertices `w != v` such that a directed path
//! from `v` to `w` exists, i.e. the out-degree of `v` in the irreflexive
//! transitive closure. Every algorithm here produces the same vector.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use thiserror::Error;

use crate::graph::{condense, Digraph, VertexId};

/// Default byte budget for the closure bitmap of [`count_bitset_closure`].
pub const DEFAULT_MEM_BUDGET: u64 = 1 << 31;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("closure bitmap needs {required} bytes but the budget is {budget} bytes; use the BFS counter instead")]
pub struct MemoryBudgetExceeded {
    pub required: u64,
    pub budget: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ReachCounts(Vec<usize>);

impl ReachCounts {
    pub fn new(counts: Vec<usize>) -> Self {
        Self(counts)
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<usize> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// 64-bit FNV-1a over the little-endian `u64` encoding of each count.
    pub fn checksum(&self) -> u64 {
        const OFFSET: u64 = 0xcbf2_9ce4_8422_2325;
        const PRIME: u64 = 0x0000_0100_0000_01b3;
        let mut hash = OFFSET;
        for &c in &self.0 {
            for byte in (c as u64).to_le_bytes() {
                hash ^= u64::from(byte);
                hash = hash.wrapping_mul(PRIME);
            }
        }
        hash
    }
}

impl std::ops::Index<VertexId> for ReachCounts {
    type Output = usize;

    fn index(&self, v: VertexId) -> &usize {
        &self.0[v]
    }
}

/// Counting strategy selectable at run time.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Algorithm {
    /// One traversal per source vertex, O(N·M).
    Bfs,
    /// Bit-parallel closure DP over the SCC condensation.
    Bitset,
}

impl Algorithm {
    pub const ALL: [Algorithm; 2] = [Algorithm::Bfs, Algorithm::Bitset];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Bfs => "bfs",
            Algorithm::Bitset => "bitset",
        }
    }

    pub fn count(self, g: &Digraph, mem_budget: u64) -> Result<ReachCounts, MemoryBudgetExceeded> {
        match self {
            Algorithm::Bfs => Ok(count_bfs_all(g)),
            Algorithm::Bitset => count_bitset_closure(g, mem_budget),
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "bfs" => Ok(Algorithm::Bfs),
            "bitset" => Ok(Algorithm::Bitset),
            other => Err(format!(
                "unknown algorithm `{other}` (expected bfs or bitset)"
            )),
        }
    }
}

/// Per-source scratch: a generation-stamped visited array and a FIFO queue,
/// reused across sources so a BFS costs O(reached) rather than O(N).
struct BfsScratch {
    stamp: Vec<u32>,
    generation: u32,
    queue: Vec<VertexId>,
}

impl BfsScratch {
    fn new(n: usize) -> Self {
        Self {
            stamp: vec![0; n],
            generation: 0,
            queue: Vec::new(),
        }
    }

    fn count_from(&mut self, g: &Digraph, source: VertexId) -> usize {
        self.generation = self.generation.wrapping_add(1);
        if self.generation == 0 {
            self.stamp.fill(0);
            self.generation = 1;
        }
        let gen = self.generation;
        self.queue.clear();
        self.stamp[source] = gen;
        self.queue.push(source);
        let mut head = 0;
        while head < self.queue.len() {
            let v = self.queue[head];
            head += 1;
            for &w in g.out_neighbors(v) {
                if self.stamp[w] != gen {
                    self.stamp[w] = gen;
                    self.queue.push(w);
                }
            }
        }
        self.queue.len() - 1
    }
}

/// Breadth-first search from every vertex. Sources are processed in parallel
/// with per-thread scratch; the output does not depend on scheduling.
pub fn count_bfs_all(g: &Digraph) -> ReachCounts {
    let n = g.n_vertices();
    let counts = (0..n)
        .into_par_iter()
        .map_init(|| BfsScratch::new(n), |scratch, v| scratch.count_from(g, v))
        .collect();
    ReachCounts(counts)
}

/// Bytes the closure bitmap needs for a condensation with `n_components`
/// components.
pub fn closure_bitmap_bytes(n_components: usize) -> u64 {
    let words = (n_components as u64).div_ceil(64);
    (n_components as u64)
        .saturating_mul(words)
        .saturating_mul(8)
}

/// Transitive closure by bit-parallel dynamic programming.
///
/// The graph is condensed; walking SCCs in reverse topological order, each
/// component's row is the union of its successors' rows plus the successors
/// themselves. A vertex's count is the total size of the components in its
/// row plus its own component size minus one.
pub fn count_bitset_closure(
    g: &Digraph,
    mem_budget: u64,
) -> Result<ReachCounts, MemoryBudgetExceeded> {
    let cond = condense(g);
    let k = cond.n_components();
    let required = closure_bitmap_bytes(k);
    if required > mem_budget {
        return Err(MemoryBudgetExceeded {
            required,
            budget: mem_budget,
        });
    }

    let words = k.div_ceil(64);
    let mut rows = vec![0u64; k * words];
    for &c in cond.topo_order.iter().rev() {
        let (head, tail) = rows.split_at_mut((c + 1) * words);
        let row = &mut head[c * words..];
        for &d in cond.dag.out_neighbors(c) {
            // d comes after c in topological order, so its row lives in `tail`
            // and is already final.
            debug_assert!(d > c);
            let offset = (d - c - 1) * words;
            for (dst, src) in row.iter_mut().zip(&tail[offset..offset + words]) {
                *dst |= *src;
            }
            row[d / 64] |= 1u64 << (d % 64);
        }
    }

    let all_singletons = cond.scc_sizes.iter().all(|&s| s == 1);
    let component_reach: Vec<usize> = rows
        .chunks(words.max(1))
        .take(k)
        .enumerate()
        .map(|(c, row)| {
            let others = if all_singletons {
                row.iter().map(|w| w.count_ones() as usize).sum()
            } else {
                set_bits(row).map(|d| cond.scc_sizes[d]).sum::<usize>()
            };
            others + cond.scc_sizes[c] - 1
        })
        .collect();

    Ok(ReachCounts(
        cond.scc_of.iter().map(|&c| component_reach[c]).collect(),
    ))
}

fn set_bits(row: &[u64]) -> impl Iterator<Item = usize> + '_ {
    row.iter().enumerate().flat_map(|(i, &word)| {
        let mut w = word;
        std::iter::from_fn(move || {
            if w == 0 {
                return None;
            }
            let bit = w.trailing_zeros() as usize;
            w &= w - 1;
            Some(i * 64 + bit)
        })
    })
}

/// Reference counter: a fresh visited set and depth-first walk per source,
/// straight from the definition. Intended for tests on graphs up to roughly a
/// thousand vertices.
pub fn count_oracle(g: &Digraph) -> ReachCounts {
    let counts = (0..g.n_vertices())
        .map(|source| {
            let mut seen = HashSet::new();
            seen.insert(source);
            let mut todo = vec![source];
            while let Some(v) = todo.pop() {
                for &w in g.out_neighbors(v) {
                    if seen.insert(w) {
                        todo.push(w);
                    }
                }
            }
            seen.len() - 1
        })
        .collect();
    ReachCounts(counts)
}

/// Number of vertices in `targets` (a set; duplicates are ignored) other than
/// `source` that `source` reaches.
pub fn reach_targets(g: &Digraph, source: VertexId, targets: &[VertexId]) -> usize {
    let n = g.n_vertices();
    let mut is_target = vec![false; n];
    for &t in targets {
        is_target[t] = true;
    }
    let mut seen = vec![false; n];
    seen[source] = true;
    let mut queue = std::collections::VecDeque::from([source]);
    let mut hits = 0;
    while let Some(v) = queue.pop_front() {
        for &w in g.out_neighbors(v) {
            if !seen[w] {
                seen[w] = true;
                if is_target[w] {
                    hits += 1;
                }
                queue.push_back(w);
            }
        }
    }
    hits
}
