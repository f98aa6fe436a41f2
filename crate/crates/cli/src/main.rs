//! `reachcount` command-line front end.
//!
//! Exit codes: 0 success (and SAT for `solve`), 1 UNSAT, 2 bad input or I/O
//! failure, 3 closure bitmap over the memory budget, 4 reduction over the
//! per-side vertex cap.

use std::fs;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use reachcount::bench::{run_bench, BenchConfig, BenchError, Family};
use reachcount::io::{parse_dimacs, parse_graph, write_dimacs, write_graph, write_reduction};
use reachcount::{
    build_reduction, gen, pad_to_even, Algorithm, CnfFormula, MemoryBudgetExceeded, ReductionError,
    DEFAULT_MEM_BUDGET, DEFAULT_SIDE_CAP,
};

#[derive(Parser)]
#[command(
    name = "reachcount",
    version,
    about = "Per-vertex reachability counts and the k-SAT reduction"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum AlgoArg {
    Bfs,
    Bitset,
}

impl From<AlgoArg> for Algorithm {
    fn from(a: AlgoArg) -> Self {
        match a {
            AlgoArg::Bfs => Algorithm::Bfs,
            AlgoArg::Bitset => Algorithm::Bitset,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Csv,
    Jsonl,
}

#[derive(Clone, Copy, ValueEnum)]
enum GenFamily {
    Ksat,
    Dag,
}

#[derive(Clone, Copy, ValueEnum)]
enum BenchFamily {
    Reduction,
    Dag,
}

#[derive(Subcommand)]
enum Command {
    /// Count reachable vertices for every vertex of a `dg v1` graph.
    Count {
        graph: PathBuf,
        #[arg(long, value_enum, default_value = "bfs")]
        algo: AlgoArg,
        #[arg(long, value_enum, default_value = "csv")]
        format: FormatArg,
        #[arg(long, default_value_t = DEFAULT_MEM_BUDGET)]
        mem_budget: u64,
        #[arg(short = 'o')]
        output: Option<PathBuf>,
    },
    /// Build the annotated reduction graph of a DIMACS CNF file.
    Reduce {
        cnf: PathBuf,
        #[arg(short = 'o')]
        output: PathBuf,
        /// Per-side vertex cap; the reduction is refused when 2^l reaches it.
        #[arg(long, default_value_t = DEFAULT_SIDE_CAP)]
        cap: u64,
    },
    /// Decide satisfiability of a DIMACS CNF file through reach counts.
    Solve {
        cnf: PathBuf,
        #[arg(long, value_enum, default_value = "bfs")]
        algo: AlgoArg,
        /// Print a satisfying assignment, one `x<i>=T|F` line per variable.
        #[arg(long)]
        witness: bool,
        #[arg(long, default_value_t = DEFAULT_SIDE_CAP)]
        cap: u64,
        #[arg(long, default_value_t = DEFAULT_MEM_BUDGET)]
        mem_budget: u64,
    },
    /// Generate a random k-CNF (DIMACS) or random DAG (`dg v1`).
    Gen {
        #[arg(value_enum)]
        family: GenFamily,
        /// Variables (ksat) or vertices (dag).
        #[arg(long)]
        n: usize,
        /// Clauses (ksat) or edges (dag).
        #[arg(long)]
        m: usize,
        /// Clause width (ksat only).
        #[arg(long, default_value_t = 3)]
        k: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(short = 'o')]
        output: Option<PathBuf>,
    },
    /// Time the counting algorithms over a size sweep and emit CSV.
    Bench {
        #[arg(long, value_enum, default_value = "reduction")]
        family: BenchFamily,
        /// Variable counts (reduction) or vertex counts (dag).
        #[arg(long, value_delimiter = ',', default_values_t = [12usize, 14, 16])]
        sizes: Vec<usize>,
        #[arg(long, value_enum, value_delimiter = ',', default_values = ["bfs", "bitset"])]
        algo: Vec<AlgoArg>,
        #[arg(long, default_value_t = 1)]
        reps: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_SIDE_CAP)]
        cap: u64,
        #[arg(long, default_value_t = DEFAULT_MEM_BUDGET)]
        mem_budget: u64,
        /// Clauses per variable for the reduction family.
        #[arg(long, default_value_t = 4.2)]
        clause_ratio: f64,
        /// Clause width for the reduction family.
        #[arg(long, default_value_t = 3)]
        k: usize,
        /// Edges per vertex for the dag family.
        #[arg(long, default_value_t = 4)]
        edge_factor: usize,
        #[arg(short = 'o')]
        output: Option<PathBuf>,
    },
}

enum Failure {
    Input(String),
    Memory(MemoryBudgetExceeded),
    Cap(String),
}

impl Failure {
    fn exit_code(&self) -> u8 {
        match self {
            Failure::Input(_) => 2,
            Failure::Memory(_) => 3,
            Failure::Cap(_) => 4,
        }
    }

    fn message(&self) -> String {
        match self {
            Failure::Input(m) | Failure::Cap(m) => m.clone(),
            Failure::Memory(e) => e.to_string(),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Input(e.to_string())
    }
}

impl From<MemoryBudgetExceeded> for Failure {
    fn from(e: MemoryBudgetExceeded) -> Self {
        Failure::Memory(e)
    }
}

impl From<ReductionError> for Failure {
    fn from(e: ReductionError) -> Self {
        match e {
            ReductionError::CapExceeded { .. } => Failure::Cap(e.to_string()),
            other => Failure::Input(other.to_string()),
        }
    }
}

impl From<BenchError> for Failure {
    fn from(e: BenchError) -> Self {
        match e {
            BenchError::Memory(m) => Failure::Memory(m),
            BenchError::Reduction(r) => r.into(),
            other => Failure::Input(other.to_string()),
        }
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn open_output(path: Option<&Path>) -> Result<Box<dyn Write>, Failure> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(
            fs::File::create(p).map_err(|e| Failure::Input(format!("{}: {e}", p.display())))?,
        )),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn load_cnf(path: &Path) -> Result<CnfFormula, Failure> {
    parse_dimacs(&read(path)?).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

#[derive(Serialize)]
struct CountLine {
    id: usize,
    count: usize,
}

fn run(command: Command) -> Result<ExitCode, Failure> {
    match command {
        Command::Count {
            graph,
            algo,
            format,
            mem_budget,
            output,
        } => {
            let (g, _) = parse_graph(&read(&graph)?)
                .map_err(|e| Failure::Input(format!("{}: {e}", graph.display())))?;
            let counts = Algorithm::from(algo).count(&g, mem_budget)?;
            let mut out = open_output(output.as_deref())?;
            for (id, &count) in counts.as_slice().iter().enumerate() {
                match format {
                    FormatArg::Csv => writeln!(out, "{id},{count}")?,
                    FormatArg::Jsonl => {
                        let line = serde_json::to_string(&CountLine { id, count })
                            .expect("plain struct serializes");
                        writeln!(out, "{line}")?
                    }
                }
            }
            out.flush()?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Reduce { cnf, output, cap } => {
            let f = pad_to_even(&load_cnf(&cnf)?);
            let rg = build_reduction(&f, cap)?;
            fs::write(&output, write_reduction(&rg))
                .map_err(|e| Failure::Input(format!("{}: {e}", output.display())))?;
            println!(
                "N={} M={} l={}",
                rg.graph().n_vertices(),
                rg.graph().m_edges(),
                rg.l()
            );
            Ok(ExitCode::SUCCESS)
        }
        Command::Solve {
            cnf,
            algo,
            witness,
            cap,
            mem_budget,
        } => {
            let original = load_cnf(&cnf)?;
            let rg = build_reduction(&pad_to_even(&original), cap)?;
            let counts = Algorithm::from(algo).count(rg.graph(), mem_budget)?;
            let verdict = rg.decide_sat(&counts)?;
            let mut out = BufWriter::new(io::stdout().lock());
            if !verdict.satisfiable {
                writeln!(out, "UNSAT")?;
                out.flush()?;
                return Ok(ExitCode::from(1));
            }
            writeln!(out, "SAT")?;
            if witness {
                let w = verdict
                    .witness
                    .expect("satisfiable verdict carries a witness");
                for (i, value) in w
                    .assignment(rg.l(), original.n_vars())
                    .into_iter()
                    .enumerate()
                {
                    writeln!(out, "x{}={}", i + 1, if value { 'T' } else { 'F' })?;
                }
            }
            out.flush()?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Gen {
            family,
            n,
            m,
            k,
            seed,
            output,
        } => {
            let text = match family {
                GenFamily::Ksat => write_dimacs(
                    &gen::gen_ksat(n, m, k, seed).map_err(|e| Failure::Input(e.to_string()))?,
                ),
                GenFamily::Dag => write_graph(
                    &gen::gen_dag(n, m, seed).map_err(|e| Failure::Input(e.to_string()))?,
                    None,
                ),
            };
            let mut out = open_output(output.as_deref())?;
            out.write_all(text.as_bytes())?;
            out.flush()?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Bench {
            family,
            sizes,
            algo,
            reps,
            seed,
            cap,
            mem_budget,
            clause_ratio,
            k,
            edge_factor,
            output,
        } => {
            let config = BenchConfig {
                family: match family {
                    BenchFamily::Reduction => Family::Reduction,
                    BenchFamily::Dag => Family::Dag,
                },
                sizes,
                algorithms: algo.into_iter().map(Algorithm::from).collect(),
                reps,
                seed,
                mem_budget,
                side_cap: cap,
                clause_ratio,
                k,
                edge_factor,
            };
            let out = open_output(output.as_deref())?;
            run_bench(&config, out)?;
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => code,
        Err(failure) => {
            eprintln!("reachcount: {}", failure.message());
            ExitCode::from(failure.exit_code())
        }
    }
}
