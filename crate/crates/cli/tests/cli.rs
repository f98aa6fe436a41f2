use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use reachcount::io::{parse_dimacs, parse_graph, write_dimacs};
use reachcount::{brute_force_sat, gen, is_acyclic, ReachCounts};
use tempfile::TempDir;

const FIGURE_CNF: &str = "p cnf 4 3\n-1 4 0\n1 -3 4 0\n1 2 -3 0\n";

fn reachcount(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_reachcount"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let p = dir.path().join(name);
    fs::write(&p, text).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn count_path_graph() {
    let dir = TempDir::new().unwrap();
    let g = write(&dir, "path.dg", "p dg 3 2\ne 0 1\ne 1 2\n");
    let out = reachcount(&["count", s(&g), "--algo", "bfs"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), "0,2\n1,1\n2,0\n");
    assert!(out.stderr.is_empty());

    let out = reachcount(&["count", s(&g), "--format", "jsonl"]);
    assert_eq!(
        stdout(&out),
        "{\"id\":0,\"count\":2}\n{\"id\":1,\"count\":1}\n{\"id\":2,\"count\":0}\n"
    );
}

#[test]
fn count_to_file() {
    let dir = TempDir::new().unwrap();
    let g = write(&dir, "path.dg", "p dg 3 2\ne 0 1\ne 1 2\n");
    let dest = dir.path().join("counts.csv");
    let out = reachcount(&["count", s(&g), "-o", s(&dest)]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    assert_eq!(fs::read_to_string(dest).unwrap(), "0,2\n1,1\n2,0\n");
}

#[test]
fn figure_reduce_then_count() {
    let dir = TempDir::new().unwrap();
    let cnf = write(&dir, "fig.cnf", FIGURE_CNF);
    let dg = dir.path().join("fig.dg");
    let out = reachcount(&["reduce", s(&cnf), "-o", s(&dg)]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), "N=11 M=10 l=2\n");

    let bfs = reachcount(&["count", s(&dg), "--algo", "bfs"]);
    let bitset = reachcount(&["count", s(&dg), "--algo", "bitset"]);
    assert_eq!(bfs.stdout, bitset.stdout);
    // ids 0..4 are X masks (F,F),(T,F),(F,T),(T,T); 4..7 clauses; 7..11 Y masks
    assert_eq!(
        stdout(&bfs),
        "0,4\n1,3\n2,2\n3,3\n4,2\n5,1\n6,2\n7,0\n8,0\n9,0\n10,0\n"
    );
}

#[test]
fn odd_variable_count_is_padded() {
    let dir = TempDir::new().unwrap();
    let cnf = write(&dir, "odd.cnf", "p cnf 3 1\n1 -3 0\n");
    let dg = dir.path().join("odd.dg");
    let out = reachcount(&["reduce", s(&cnf), "-o", s(&dg)]);
    assert_eq!(stdout(&out), "N=9 M=4 l=2\n");
    let (_, ann) = parse_graph(&fs::read_to_string(dg).unwrap()).unwrap();
    assert_eq!(ann.unwrap().l, 2);
}

#[test]
fn cap_refusal() {
    let dir = TempDir::new().unwrap();
    let cnf = write(&dir, "big.cnf", "p cnf 40 1\n1 40 0\n");
    let dg = dir.path().join("big.dg");
    let out = reachcount(&["reduce", s(&cnf), "-o", s(&dg)]);
    assert_eq!(out.status.code(), Some(4));
    assert!(out.stdout.is_empty());
    assert!(String::from_utf8_lossy(&out.stderr).contains("2^20"));
    assert!(!dg.exists());
    assert_eq!(reachcount(&["solve", s(&cnf)]).status.code(), Some(4));

    let small = write(&dir, "small.cnf", FIGURE_CNF);
    assert_eq!(
        reachcount(&["solve", s(&small), "--cap", "4"])
            .status
            .code(),
        Some(4)
    );
    assert_eq!(
        reachcount(&["solve", s(&small), "--cap", "5"])
            .status
            .code(),
        Some(0)
    );
}

#[test]
fn solve_figure_with_witness() {
    let dir = TempDir::new().unwrap();
    let cnf = write(&dir, "fig.cnf", FIGURE_CNF);
    for algo in ["bfs", "bitset"] {
        let out = reachcount(&["solve", s(&cnf), "--algo", algo, "--witness"]);
        assert_eq!(out.status.code(), Some(0));
        let text = stdout(&out);
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some("SAT"));
        let values: Vec<bool> = lines
            .enumerate()
            .map(|(i, line)| {
                let (name, value) = line.split_once('=').unwrap();
                assert_eq!(name, format!("x{}", i + 1));
                value == "T"
            })
            .collect();
        assert_eq!(values.len(), 4);
        assert!(parse_dimacs(FIGURE_CNF).unwrap().is_satisfied_by(&values));
    }
    let out = reachcount(&["solve", s(&cnf)]);
    assert_eq!(stdout(&out), "SAT\n");
}

#[test]
fn solve_unsat() {
    let dir = TempDir::new().unwrap();
    let cnf = write(&dir, "u.cnf", "p cnf 1 2\n1 0\n-1 0\n");
    let out = reachcount(&["solve", s(&cnf), "--witness"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(stdout(&out), "UNSAT\n");
    assert!(out.stderr.is_empty());
}

#[test]
fn witness_omits_padding_variable() {
    let dir = TempDir::new().unwrap();
    let cnf = write(&dir, "odd.cnf", "p cnf 3 2\n3 0\n-1 -2 0\n");
    let out = reachcount(&["solve", s(&cnf), "--witness"]);
    let text = stdout(&out);
    assert_eq!(text.lines().count(), 4);
    assert!(text.contains("x3=T"));
}

#[test]
fn parse_failures_exit_2() {
    let dir = TempDir::new().unwrap();
    let bad_graph = write(&dir, "bad.dg", "p dg 2 1\ne 0 5\n");
    let out = reachcount(&["count", s(&bad_graph)]);
    assert_eq!(out.status.code(), Some(2));
    assert!(out.stdout.is_empty());
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2"));

    let bad_cnf = write(&dir, "bad.cnf", "p cnf 2 1\n1 0 2 0\n");
    assert_eq!(reachcount(&["solve", s(&bad_cnf)]).status.code(), Some(2));
    let missing = dir.path().join("nope.cnf");
    assert_eq!(
        reachcount(&["reduce", s(&missing), "-o", "x"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        reachcount(&["count", s(&bad_graph), "--algo", "matrix"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn memory_guard_exit_3() {
    let dir = TempDir::new().unwrap();
    let g = write(&dir, "path.dg", "p dg 3 2\ne 0 1\ne 1 2\n");
    let out = reachcount(&["count", s(&g), "--algo", "bitset", "--mem-budget", "8"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(out.stdout.is_empty());
    assert!(String::from_utf8_lossy(&out.stderr).contains("BFS"));
    let ok = reachcount(&["count", s(&g), "--algo", "bfs", "--mem-budget", "8"]);
    assert_eq!(ok.status.code(), Some(0));

    let cnf = write(&dir, "fig.cnf", FIGURE_CNF);
    let out = reachcount(&["solve", s(&cnf), "--algo", "bitset", "--mem-budget", "8"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn gen_is_deterministic_and_matches_library() {
    let a = reachcount(&[
        "gen", "ksat", "--n", "5", "--m", "10", "--k", "3", "--seed", "42",
    ]);
    let b = reachcount(&[
        "gen", "ksat", "--n", "5", "--m", "10", "--k", "3", "--seed", "42",
    ]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(
        stdout(&a),
        write_dimacs(&gen::gen_ksat(5, 10, 3, 42).unwrap())
    );

    let empty = reachcount(&["gen", "ksat", "--n", "5", "--m", "0", "--seed", "1"]);
    assert_eq!(stdout(&empty), "p cnf 5 0\n");

    let dag = reachcount(&["gen", "dag", "--n", "100", "--m", "500", "--seed", "7"]);
    let again = reachcount(&["gen", "dag", "--n", "100", "--m", "500", "--seed", "7"]);
    assert_eq!(dag.stdout, again.stdout);
    let (g, _) = parse_graph(&stdout(&dag)).unwrap();
    assert_eq!((g.n_vertices(), g.m_edges()), (100, 500));
    assert!(is_acyclic(&g));

    let dir = TempDir::new().unwrap();
    let dest = dir.path().join("d.dg");
    let out = reachcount(&[
        "gen",
        "dag",
        "--n",
        "3",
        "--m",
        "3",
        "--seed",
        "1",
        "-o",
        s(&dest),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(is_acyclic(
        &parse_graph(&fs::read_to_string(dest).unwrap()).unwrap().0
    ));
}

#[test]
fn gen_parameter_errors() {
    assert_eq!(
        reachcount(&["gen", "ksat", "--n", "2", "--m", "1", "--k", "3"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        reachcount(&["gen", "dag", "--n", "3", "--m", "4"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn bench_repetitions() {
    let out = reachcount(&["bench", "--sizes", "6,8", "--reps", "3", "--seed", "5"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let rows: Vec<&str> = text.lines().skip(1).collect();
    assert_eq!(
        text.lines().next(),
        Some("label,n,m,algo,rep,usec,checksum")
    );
    assert_eq!(rows.len(), 2 * 2 * 3);
    for label in ["ksat-n6", "ksat-n8"] {
        for algo in ["bfs", "bitset"] {
            let n = rows
                .iter()
                .filter(|r| r.starts_with(label) && r.split(',').nth(3) == Some(algo))
                .count();
            assert_eq!(n, 3);
        }
    }
}

#[test]
fn bench_dag_sweep() {
    let dir = TempDir::new().unwrap();
    let dest = dir.path().join("bench.csv");
    let out = reachcount(&[
        "bench",
        "--family",
        "dag",
        "--sizes",
        "100,250,500,1000",
        "--algo",
        "bfs,bitset",
        "-o",
        s(&dest),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let text = fs::read_to_string(dest).unwrap();
    let rows: Vec<Vec<&str>> = text
        .lines()
        .skip(1)
        .map(|l| l.split(',').collect())
        .collect();
    assert_eq!(rows.len(), 8);
    for row in &rows {
        assert_eq!(row.len(), 7);
        assert!(row[5].parse::<f64>().unwrap() > 0.0);
        assert_eq!(row[6].len(), 16);
    }
    for pair in rows.chunks(2) {
        assert_eq!(pair[0][0], pair[1][0]);
        assert_eq!(pair[0][6], pair[1][6]);
    }
}

/// `reduce`, then `count`, then subtracting out-degrees offline must give the
/// same verdict as `solve`.
#[test]
fn pipeline_matches_solve() {
    let dir = TempDir::new().unwrap();
    let mut formulas = vec![
        FIGURE_CNF.to_string(),
        "p cnf 1 2\n1 0\n-1 0\n".to_string(),
        "p cnf 2 0\n".to_string(),
        "p cnf 2 1\n0\n".to_string(),
        "p cnf 3 2\n1 -1 0\n2 3 0\n".to_string(),
    ];
    formulas.extend((0..25).map(|seed| write_dimacs(&gen::gen_ksat(7, 30, 3, seed).unwrap())));

    for (i, text) in formulas.iter().enumerate() {
        let cnf = write(&dir, &format!("f{i}.cnf"), text);
        let dg = dir.path().join(format!("f{i}.dg"));
        assert_eq!(
            reachcount(&["reduce", s(&cnf), "-o", s(&dg)]).status.code(),
            Some(0)
        );
        let counted = reachcount(&["count", s(&dg), "--algo", "bitset"]);
        let counts: Vec<usize> = stdout(&counted)
            .lines()
            .map(|l| l.split_once(',').unwrap().1.parse().unwrap())
            .collect();
        let (g, ann) = parse_graph(&fs::read_to_string(&dg).unwrap()).unwrap();
        let rg = ann.unwrap().into_reduction(g).unwrap();
        let offline = rg
            .decide_sat(&ReachCounts::new(counts))
            .unwrap()
            .satisfiable;

        let solved = reachcount(&["solve", s(&cnf)]);
        let expected_code = if offline { 0 } else { 1 };
        assert_eq!(solved.status.code(), Some(expected_code), "formula {i}");
        assert_eq!(
            offline,
            brute_force_sat(&parse_dimacs(text).unwrap()).satisfiable
        );
    }
}

#[test]
fn solve_sweep_matches_brute_force() {
    let dir = TempDir::new().unwrap();
    let mut disagreements = Vec::new();
    for seed in 0..500u64 {
        let n = 3 + (seed % 8) as usize;
        let m = (seed as usize * 7) % (5 * n + 1);
        let f = gen::gen_ksat(n, m, 3, seed).unwrap();
        let cnf = write(&dir, "sweep.cnf", &write_dimacs(&f));
        let code = reachcount(&["solve", s(&cnf)]).status.code();
        let expected = if brute_force_sat(&f).satisfiable {
            0
        } else {
            1
        };
        if code != Some(expected) {
            disagreements.push(seed);
        }
    }
    assert!(disagreements.is_empty(), "seeds {disagreements:?}");
}
