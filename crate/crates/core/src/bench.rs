//! Benchmark harness: times the counting algorithms on generated instances
//! and emits raw CSV rows, one per (instance, algorithm, repetition).
//!
//! Only the counting call is timed. Rows are never aggregated.

use std::fmt;
use std::io::{self, Write};
use std::str::FromStr;
use std::time::Instant;

use thiserror::Error;

use crate::cnf::pad_to_even;
use crate::gen::{gen_dag, gen_ksat, GenError};
use crate::graph::Digraph;
use crate::reach::{Algorithm, MemoryBudgetExceeded, DEFAULT_MEM_BUDGET};
use crate::reduction::{build_reduction, ReductionError, DEFAULT_SIDE_CAP};

pub const CSV_HEADER: &str = "label,n,m,algo,rep,usec,checksum";

#[derive(Debug, Error)]
pub enum BenchError {
    #[error(transparent)]
    Gen(#[from] GenError),
    #[error(transparent)]
    Reduction(#[from] ReductionError),
    #[error(transparent)]
    Memory(#[from] MemoryBudgetExceeded),
    #[error("{label}: {algo} checksum {got:016x} differs from {expected:016x}")]
    ChecksumMismatch {
        label: String,
        algo: Algorithm,
        expected: u64,
        got: u64,
    },
    #[error(transparent)]
    Io(#[from] io::Error),
}

/// Instance family swept by the harness.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    /// Reduction graphs of random k-CNFs; the size is the variable count.
    Reduction,
    /// Random DAGs; the size is the vertex count.
    Dag,
}

impl FromStr for Family {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "reduction" | "ksat" => Ok(Family::Reduction),
            "dag" => Ok(Family::Dag),
            other => Err(format!(
                "unknown family `{other}` (expected reduction or dag)"
            )),
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::Reduction => "reduction",
            Family::Dag => "dag",
        })
    }
}

#[derive(Debug, Clone)]
pub struct BenchConfig {
    pub family: Family,
    pub sizes: Vec<usize>,
    pub algorithms: Vec<Algorithm>,
    pub reps: usize,
    pub seed: u64,
    pub mem_budget: u64,
    pub side_cap: u64,
    /// Clauses per variable for the reduction family.
    pub clause_ratio: f64,
    /// Clause width for the reduction family.
    pub k: usize,
    /// Edges per vertex for the DAG family.
    pub edge_factor: usize,
}

impl Default for BenchConfig {
    fn default() -> Self {
        Self {
            family: Family::Reduction,
            sizes: vec![12, 14, 16],
            algorithms: Algorithm::ALL.to_vec(),
            reps: 1,
            seed: 0,
            mem_budget: DEFAULT_MEM_BUDGET,
            side_cap: DEFAULT_SIDE_CAP,
            clause_ratio: 4.2,
            k: 3,
            edge_factor: 4,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchRecord {
    pub label: String,
    pub n: usize,
    pub m: usize,
    pub algo: Algorithm,
    pub rep: usize,
    pub usec: f64,
    pub checksum: u64,
}

impl BenchRecord {
    pub fn to_csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{:.3},{:016x}",
            self.label, self.n, self.m, self.algo, self.rep, self.usec, self.checksum
        )
    }
}

/// Generates the instance for one size of the sweep.
pub fn make_instance(config: &BenchConfig, size: usize) -> Result<(String, Digraph), BenchError> {
    match config.family {
        Family::Reduction => {
            let clauses = (config.clause_ratio * size as f64).round() as usize;
            let k = config.k.min(size);
            let f = gen_ksat(size, clauses, k, config.seed)?;
            let rg = build_reduction(&pad_to_even(&f), config.side_cap)?;
            let label = format!("ksat-n{size}-c{clauses}-k{k}-s{}", config.seed);
            Ok((label, rg.graph().clone()))
        }
        Family::Dag => {
            let max = size * size.saturating_sub(1) / 2;
            let edges = (config.edge_factor * size).min(max);
            let g = gen_dag(size, edges, config.seed)?;
            Ok((format!("dag-n{size}-m{edges}-s{}", config.seed), g))
        }
    }
}

/// Runs the sweep, streaming the CSV header and rows to `out`, and returns
/// the records. Fails if two algorithms disagree on an instance.
pub fn run_bench<W: Write>(
    config: &BenchConfig,
    mut out: W,
) -> Result<Vec<BenchRecord>, BenchError> {
    writeln!(out, "{CSV_HEADER}")?;
    let mut records = Vec::new();
    for &size in &config.sizes {
        let (label, g) = make_instance(config, size)?;
        let mut reference: Option<u64> = None;
        for &algo in &config.algorithms {
            for rep in 0..config.reps {
                let start = Instant::now();
                let counts = algo.count(&g, config.mem_budget)?;
                let elapsed = start.elapsed();
                let checksum = counts.checksum();
                match reference {
                    None => reference = Some(checksum),
                    Some(expected) if expected != checksum => {
                        return Err(BenchError::ChecksumMismatch {
                            label,
                            algo,
                            expected,
                            got: checksum,
                        })
                    }
                    Some(_) => {}
                }
                let record = BenchRecord {
                    label: label.clone(),
                    n: g.n_vertices(),
                    m: g.m_edges(),
                    algo,
                    rep,
                    usec: elapsed.as_nanos() as f64 / 1000.0,
                    checksum,
                };
                writeln!(out, "{}", record.to_csv_row())?;
                records.push(record);
            }
        }
    }
    out.flush()?;
    Ok(records)
}
