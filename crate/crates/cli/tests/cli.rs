use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

const IDENTITY: &str = "mwpb 1\nfield 7\nsize 2 2\nweights 5\n1 0\n0 1\n";
const PARALLEL: &str = "mwpb 1\nfield 7\nsize 2 4\nweights 1 2\n1 1 0 0\n0 0 1 1\n";
const ENGINEERED: &str = "mwpb 1\nfield 0\nsize 2 4\nweights 0 10\n1 0 1 0\n1 2 0 1\n";

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("mwpb-cli-{}-{name}", std::process::id()));
    fs::create_dir_all(&dir).unwrap();
    dir
}

fn write(dir: &Path, file: &str, text: &str) -> PathBuf {
    let p = dir.join(file);
    fs::write(&p, text).unwrap();
    p
}

fn mwpb(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mwpb"))
        .args(args)
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

#[test]
fn solves_identity() {
    let dir = scratch("identity");
    let inst = write(&dir, "i.txt", IDENTITY);
    let o = mwpb(&["solve", inst.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    let out = stdout(&o);
    assert!(out.contains("optimal 5"), "{out}");
    assert!(out.contains("base 0"), "{out}");
}

#[test]
fn reports_infeasible() {
    let dir = scratch("infeasible");
    let inst = write(&dir, "i.txt", PARALLEL);
    let o = mwpb(&["solve", inst.to_str().unwrap()]);
    assert_eq!(code(&o), 2);
    assert!(stdout(&o).contains("infeasible"));
}

#[test]
fn certificate_round_trip_and_tampering() {
    let dir = scratch("certificate");
    let inst = write(&dir, "i.txt", IDENTITY);
    let cert = dir.join("c.txt");
    let o = mwpb(&[
        "solve",
        inst.to_str().unwrap(),
        "--certificate",
        cert.to_str().unwrap(),
        "--verify",
    ]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let o = mwpb(&["verify", inst.to_str().unwrap(), cert.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("certificate accepted"));

    let text = fs::read_to_string(&cert).unwrap();
    assert!(text.contains("p 0 5/2"), "{text}");
    let bad = write(&dir, "bad.txt", &text.replace("p 0 5/2", "p 0 3"));
    let o = mwpb(&["verify", inst.to_str().unwrap(), bad.to_str().unwrap()]);
    assert_eq!(code(&o), 3);
    assert!(
        stdout(&o).contains("certificate rejected DF1"),
        "{}",
        stdout(&o)
    );
}

#[test]
fn malformed_input_is_an_error() {
    let dir = scratch("malformed");
    let inst = write(&dir, "i.txt", "mwpb 1\nfield 7\nsize 2 2\nweights\n");
    assert_eq!(code(&mwpb(&["solve", inst.to_str().unwrap()])), 1);
    assert_eq!(
        code(&mwpb(&["solve", dir.join("missing.txt").to_str().unwrap()])),
        1
    );
}

#[test]
fn oracles_agree_with_solver() {
    let dir = scratch("oracles");
    let g = mwpb(&[
        "gen", "--seed", "3", "--m", "4", "--n", "10", "--p", "10007",
    ]);
    assert_eq!(code(&g), 0);
    let inst = write(&dir, "i.txt", &stdout(&g));
    let solved = stdout(&mwpb(&["solve", inst.to_str().unwrap()]));
    let optimal = solved
        .lines()
        .find(|l| l.starts_with("optimal"))
        .unwrap()
        .to_string();
    let brute = stdout(&mwpb(&["oracle", inst.to_str().unwrap(), "--brute"]));
    let pf = stdout(&mwpb(&["oracle", inst.to_str().unwrap(), "--pfaffian"]));
    assert!(brute.contains(&optimal), "{brute} vs {optimal}");
    assert!(pf.contains(&optimal), "{pf} vs {optimal}");
    assert!(pf.contains("degree"));

    let inf = write(&dir, "inf.txt", PARALLEL);
    let o = mwpb(&["oracle", inf.to_str().unwrap(), "--pfaffian"]);
    assert_eq!(code(&o), 2);
    assert!(stdout(&o).contains("degree -inf"));
}

#[test]
fn generator_is_deterministic() {
    let a = mwpb(&["gen", "--seed", "9", "--m", "4", "--n", "12", "--p", "2"]);
    let b = mwpb(&["gen", "--seed", "9", "--m", "4", "--n", "12", "--p", "2"]);
    assert_eq!(code(&a), 0);
    assert_eq!(stdout(&a), stdout(&b));
    assert!(stdout(&a).starts_with("mwpb 1\nfield 2\nsize 4 12\n"));
}

#[test]
fn matching_reduction_of_a_path() {
    let dir = scratch("matching");
    let graph = write(&dir, "g.txt", "graph 4 3\n0 1 4\n1 2 1\n2 3 5\n");
    let o = mwpb(&["gen", "--matching", graph.to_str().unwrap(), "--p", "2"]);
    assert_eq!(code(&o), 0);
    let inst = write(&dir, "i.txt", &stdout(&o));
    let out = stdout(&mwpb(&["solve", inst.to_str().unwrap()]));
    assert!(out.contains("optimal 9"), "{out}");
    assert!(out.contains("base 0 2"), "{out}");
}

#[test]
fn bench_prints_csv() {
    let o = mwpb(&[
        "bench", "--m", "2", "--n", "4,8", "--p", "7", "--seeds", "2", "--csv",
    ]);
    assert_eq!(code(&o), 0);
    let out = stdout(&o);
    let mut lines = out.lines();
    assert_eq!(
        lines.next().unwrap(),
        "m,n,p,seed,augmentations,dual_updates,field_ops,wall_ms"
    );
    let rows: Vec<&str> = lines.filter(|l| !l.starts_with('#')).collect();
    assert_eq!(rows.len(), 4);
    assert!(rows.iter().all(|r| r.split(',').count() == 8));
}

#[test]
fn bench_on_square_instances_needs_no_augmentation() {
    let o = mwpb(&[
        "bench", "--m", "2", "--n", "2", "--p", "7", "--seeds", "1", "--csv",
    ]);
    assert_eq!(code(&o), 0);
    let out = stdout(&o);
    let row = out.lines().nth(1).unwrap();
    assert_eq!(row.split(',').nth(4), Some("0"), "{out}");
}

#[test]
fn rational_solve_finds_optimum_hidden_modulo_two() {
    let dir = scratch("rational");
    let inst = write(&dir, "i.txt", ENGINEERED);
    let cert = dir.join("c.txt");
    let o = mwpb(&[
        "solve",
        inst.to_str().unwrap(),
        "--rational",
        "--stats",
        "--certificate",
        cert.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let out = stdout(&o);
    assert!(out.contains("optimal 0"), "{out}");
    assert!(out.lines().any(|l| l == "prime 3"), "{out}");
    let v = mwpb(&[
        "verify",
        inst.to_str().unwrap(),
        cert.to_str().unwrap(),
        "--prime",
        "3",
    ]);
    assert_eq!(code(&v), 0, "{}", stdout(&v));
    assert_eq!(code(&mwpb(&["solve", inst.to_str().unwrap()])), 1);
}
