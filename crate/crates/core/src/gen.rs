//! Seeded random instance generators.
//!
//! Both generators draw from `ChaCha8Rng::seed_from_u64(seed)` (rand_chacha
//! 0.3) through rand 0.8's `index::sample`, `shuffle` and `gen_bool`, so a
//! given `(parameters, seed)` always yields the same instance with these
//! crate versions.

use rand::seq::index;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::cnf::{CnfFormula, Literal};
use crate::graph::Digraph;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GenError {
    #[error("clause width k = {k} exceeds the {n} available variables")]
    WidthExceedsVariables { k: usize, n: usize },
    #[error("at least one variable is required")]
    NoVariables,
    #[error("{m} edges requested but a DAG on {n} vertices has at most {max}")]
    TooManyEdges { n: usize, m: usize, max: u64 },
}

/// Random k-CNF: `m` clauses, each over `k` distinct uniformly chosen
/// variables with fair-coin polarities.
pub fn gen_ksat(n: usize, m: usize, k: usize, seed: u64) -> Result<CnfFormula, GenError> {
    if n == 0 {
        return Err(GenError::NoVariables);
    }
    if k > n {
        return Err(GenError::WidthExceedsVariables { k, n });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let clauses = (0..m)
        .map(|_| {
            index::sample(&mut rng, n, k)
                .into_iter()
                .map(|var| Literal {
                    var,
                    positive: rng.gen_bool(0.5),
                })
                .collect()
        })
        .collect();
    Ok(CnfFormula::new(n, clauses).expect("sampled variables are in range"))
}

/// Random DAG: `m` distinct forward pairs `i < j` sampled uniformly, mapped
/// through a random permutation of the vertices.
pub fn gen_dag(n: usize, m: usize, seed: u64) -> Result<Digraph, GenError> {
    let n64 = n as u64;
    let max = n64 * n64.saturating_sub(1) / 2;
    if m as u64 > max {
        return Err(GenError::TooManyEdges { n, m, max });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(&mut rng);

    let mut picks: Vec<u64> = if m == 0 {
        Vec::new()
    } else {
        index::sample(&mut rng, max as usize, m)
            .into_iter()
            .map(|i| i as u64)
            .collect()
    };
    picks.sort_unstable();

    // Pair index p enumerates (0,1), (0,2), ..., (0,n-1), (1,2), ...
    let mut edges = Vec::with_capacity(m);
    let mut row = 0usize;
    let mut row_start = 0u64;
    for p in picks {
        while p >= row_start + (n - 1 - row) as u64 {
            row_start += (n - 1 - row) as u64;
            row += 1;
        }
        let col = row + 1 + (p - row_start) as usize;
        edges.push((perm[row], perm[col]));
    }
    Ok(Digraph::new(n, &edges).expect("generated endpoints are in range"))
}
