//! `mwpb`: command-line front end for the minimum-weight parity base solver.
//!
//! Exit codes: 0 optimal or accepted, 2 infeasible, 3 certificate rejected,
//! 1 on any error.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use mwpb_core::certificate::{parse_certificate, verify, Certificate, Verdict};
use mwpb_core::field::{format_rational, BigRational, PrimeField};
use mwpb_core::instance::{
    gen_random, gen_random_integer, parse_any, reduce_matching_over, Instance, IntegerInstance,
    ParsedInstance, WeightedGraph,
};
use mwpb_core::oracle::{
    brute_force, brute_force_integer, pfaffian_degree, pfaffian_degree_integer, BruteForce,
    DEFAULT_QFIELD, DEFAULT_TRIALS,
};
use mwpb_core::rational::{solve_rational_with, PrimeStatus};
use mwpb_core::solver::{solve_with, Outcome, SolveOptions, Stats};

const EXIT_OK: u8 = 0;
const EXIT_ERROR: u8 = 1;
const EXIT_INFEASIBLE: u8 = 2;
const EXIT_REJECT: u8 = 3;

#[derive(Parser)]
#[command(
    name = "mwpb",
    version,
    about = "Exact minimum-weight parity bases of linear matroids"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve an instance and print the optimal weight and base lines.
    Solve(SolveArgs),
    /// Check a certificate against an instance.
    Verify(VerifyArgs),
    /// Run an independent oracle on an instance.
    Oracle(OracleArgs),
    /// Print a generated instance on standard output.
    Gen(GenArgs),
    /// Run the solver over a grid of random instances and print a table.
    Bench(BenchArgs),
}

#[derive(Args)]
struct SolveArgs {
    /// Instance file.
    file: PathBuf,
    /// Solve an integer instance (`field 0`) over the rationals by the multi-prime driver.
    #[arg(long)]
    rational: bool,
    /// Write the optimality certificate to this path.
    #[arg(long, value_name = "PATH")]
    certificate: Option<PathBuf>,
    /// Check the certificate before exiting.
    #[arg(long)]
    verify: bool,
    /// Print run counters.
    #[arg(long)]
    stats: bool,
    /// Re-check every maintained invariant during the run (slow).
    #[arg(long)]
    checked: bool,
}

#[derive(Args)]
struct VerifyArgs {
    /// Instance file.
    instance: PathBuf,
    /// Certificate file.
    certificate: PathBuf,
    /// For an integer instance: the prime the certificate was produced over.
    #[arg(long)]
    prime: Option<u64>,
}

#[derive(Args)]
struct OracleArgs {
    /// Instance file.
    file: PathBuf,
    /// Enumerate every set of lines.
    #[arg(
        long,
        conflicts_with = "pfaffian",
        required_unless_present = "pfaffian"
    )]
    brute: bool,
    /// Randomized Pfaffian-degree evaluation.
    #[arg(long)]
    pfaffian: bool,
    /// Independent trials for the Pfaffian oracle.
    #[arg(long, default_value_t = DEFAULT_TRIALS)]
    trials: usize,
    /// Seed for the Pfaffian oracle.
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct GenArgs {
    /// Generator seed.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Number of rows.
    #[arg(long, default_value_t = 4)]
    m: usize,
    /// Number of columns (even).
    #[arg(long, default_value_t = 8)]
    n: usize,
    /// Field size; 0 emits an integer instance.
    #[arg(long, default_value_t = 7)]
    p: u64,
    /// Largest weight.
    #[arg(long, default_value_t = 50)]
    wmax: u64,
    /// Largest absolute entry of an integer instance.
    #[arg(long, default_value_t = 5)]
    amax: i64,
    /// Emit the matching reduction of this graph file instead.
    #[arg(long, value_name = "GRAPH")]
    matching: Option<PathBuf>,
}

#[derive(Args)]
struct BenchArgs {
    /// Row counts.
    #[arg(long, value_delimiter = ',', default_value = "8")]
    m: Vec<usize>,
    /// Column counts.
    #[arg(long, value_delimiter = ',', default_value = "16,32,64")]
    n: Vec<usize>,
    /// Field sizes.
    #[arg(long, value_delimiter = ',', default_value = "10007")]
    p: Vec<u64>,
    /// Seeds per shape.
    #[arg(long, default_value_t = 3)]
    seeds: u64,
    /// First seed.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Largest weight.
    #[arg(long, default_value_t = 50)]
    wmax: u64,
    /// Emit CSV.
    #[arg(long)]
    csv: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let res = match cli.command {
        Command::Solve(a) => cmd_solve(a),
        Command::Verify(a) => cmd_verify(a),
        Command::Oracle(a) => cmd_oracle(a),
        Command::Gen(a) => cmd_gen(a),
        Command::Bench(a) => cmd_bench(a),
    };
    match res {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_ERROR)
        }
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn load(path: &Path) -> Result<ParsedInstance> {
    parse_any(&read(path)?).with_context(|| format!("parsing {}", path.display()))
}

fn print_stats(s: &Stats) {
    println!("augmentations {}", s.augmentations);
    println!("dual_updates {}", s.dual_updates);
    println!("inner_dual_updates {}", s.inner_dual_updates);
    println!(
        "max_dual_updates_per_augmentation {}",
        s.max_dual_updates_per_augmentation
    );
    println!("blossoms {}", s.blossoms_created);
    println!("grafts {}", s.grafts);
    println!("expansions {}", s.expansions);
    println!("field_ops {}", s.field_ops);
    println!("max_universe {}", s.max_universe);
}

fn join<T: ToString>(xs: &[T]) -> String {
    xs.iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join(" ")
}

/// Prints a verdict, writes and checks the certificate as requested, and
/// returns the exit code.
fn report(args: &SolveArgs, inst: Option<&Instance>, outcome: &Outcome) -> Result<u8> {
    let sol = match outcome {
        Outcome::Infeasible(stats) => {
            println!("infeasible");
            if args.stats {
                print_stats(stats);
            }
            return Ok(EXIT_INFEASIBLE);
        }
        Outcome::Optimal(sol) => sol,
    };
    println!("optimal {}", format_rational(&sol.weight));
    println!("base {}", join(&sol.lines));
    if args.stats {
        print_stats(&sol.stats);
    }
    if let Some(path) = &args.certificate {
        fs::write(path, sol.certificate.to_text())
            .with_context(|| format!("writing {}", path.display()))?;
    }
    if let (true, Some(inst)) = (args.verify, inst) {
        return Ok(print_verdict(&verify(inst, &sol.certificate)));
    }
    Ok(EXIT_OK)
}

fn print_verdict(v: &Verdict) -> u8 {
    match v.rejection() {
        None => {
            println!("certificate accepted");
            EXIT_OK
        }
        Some(r) => {
            println!("certificate rejected {}: {}", r.tag, r.detail);
            EXIT_REJECT
        }
    }
}

fn options(checked: bool) -> SolveOptions {
    if checked {
        SolveOptions::checked()
    } else {
        SolveOptions::default()
    }
}

fn cmd_solve(args: SolveArgs) -> Result<u8> {
    let opts = options(args.checked);
    match (load(&args.file)?, args.rational) {
        (ParsedInstance::Prime(inst), false) => {
            let outcome = solve_with(&inst, &opts)?;
            report(&args, Some(&inst), &outcome)
        }
        (ParsedInstance::Integer(inst), true) => solve_integer(&args, &inst, &opts),
        (ParsedInstance::Integer(_), false) => bail!("integer instance (field 0) needs --rational"),
        (ParsedInstance::Prime(_), true) => bail!("--rational needs an integer instance (field 0)"),
    }
}

fn solve_integer(args: &SolveArgs, inst: &IntegerInstance, opts: &SolveOptions) -> Result<u8> {
    let sol = solve_rational_with(inst, opts)?;
    for run in &sol.runs {
        let status = match &run.status {
            PrimeStatus::RankLost => "rank-lost".to_string(),
            PrimeStatus::Infeasible => "infeasible".to_string(),
            PrimeStatus::Optimal(w) => format!("optimal {}", format_rational(w)),
        };
        if args.stats {
            println!("prime {} {status}", run.prime);
        }
    }
    if let Some(p) = sol.prime {
        println!("prime {p}");
    }
    report(args, sol.instance.as_ref(), &sol.outcome)
}

fn cmd_verify(args: VerifyArgs) -> Result<u8> {
    let inst = match (load(&args.instance)?, args.prime) {
        (ParsedInstance::Prime(i), None) => i,
        (ParsedInstance::Prime(_), Some(_)) => bail!("--prime applies to integer instances only"),
        (ParsedInstance::Integer(_), None) => bail!("integer instance needs --prime"),
        (ParsedInstance::Integer(i), Some(p)) => {
            let field = PrimeField::new(p)?;
            i.reduce(field)
                .with_context(|| format!("matrix loses rank modulo {p}"))?
        }
    };
    let text = read(&args.certificate)?;
    let cert: Certificate = parse_certificate(&text, &inst)
        .with_context(|| format!("parsing {}", args.certificate.display()))?;
    Ok(print_verdict(&verify(&inst, &cert)))
}

fn cmd_oracle(args: OracleArgs) -> Result<u8> {
    let parsed = load(&args.file)?;
    if args.brute {
        let res = match &parsed {
            ParsedInstance::Prime(i) => brute_force(i)?,
            ParsedInstance::Integer(i) => brute_force_integer(i)?,
        };
        return Ok(match res {
            BruteForce::Optimal { weight, lines } => {
                println!("optimal {}", format_rational(&weight));
                println!("base {}", join(&lines));
                EXIT_OK
            }
            BruteForce::Infeasible => {
                println!("infeasible");
                EXIT_INFEASIBLE
            }
        });
    }
    let (degree, total) = match &parsed {
        ParsedInstance::Prime(i) => (
            pfaffian_degree(i, args.trials, DEFAULT_QFIELD, args.seed)?,
            i.total_weight(),
        ),
        ParsedInstance::Integer(i) => (
            pfaffian_degree_integer(i, args.trials, DEFAULT_QFIELD, args.seed)?,
            i.weights.iter().sum(),
        ),
    };
    Ok(match degree {
        Some(d) => {
            println!("degree {d}");
            println!(
                "optimal {}",
                format_rational(&(total - BigRational::from_integer(d.into())))
            );
            EXIT_OK
        }
        None => {
            println!("degree -inf");
            println!("infeasible");
            EXIT_INFEASIBLE
        }
    })
}

fn cmd_gen(args: GenArgs) -> Result<u8> {
    let text = if let Some(path) = &args.matching {
        let g = WeightedGraph::parse(&read(path)?)
            .with_context(|| format!("parsing {}", path.display()))?;
        let p = if args.p == 0 { 2 } else { args.p };
        reduce_matching_over(&g, p)?.to_text()
    } else if args.p == 0 {
        if !args.n.is_multiple_of(2) || args.m > args.n {
            bail!("impossible shape: m = {}, n = {}", args.m, args.n);
        }
        gen_random_integer(args.seed, args.m, args.n, args.amax, args.wmax).to_text()
    } else {
        gen_random(args.seed, args.m, args.n, args.p, args.wmax)?.to_text()
    };
    print!("{text}");
    Ok(EXIT_OK)
}

fn cmd_bench(args: BenchArgs) -> Result<u8> {
    let header = [
        "m",
        "n",
        "p",
        "seed",
        "augmentations",
        "dual_updates",
        "field_ops",
        "wall_ms",
    ];
    let mut out = String::new();
    if args.csv {
        writeln!(out, "{}", header.join(","))?;
    } else {
        writeln!(
            out,
            "{:>4} {:>5} {:>7} {:>6} {:>13} {:>12} {:>12} {:>9}",
            header[0], header[1], header[2], header[3], header[4], header[5], header[6], header[7]
        )?;
    }
    let mut worst_ratio = 0f64;
    for &m in &args.m {
        for &n in &args.n {
            for &p in &args.p {
                for seed in args.seed..args.seed + args.seeds {
                    let inst = gen_random(seed, m, n, p, args.wmax)?;
                    let start = Instant::now();
                    let outcome = solve_with(&inst, &SolveOptions::default())?;
                    let ms = start.elapsed().as_secs_f64() * 1e3;
                    let s = outcome.stats();
                    if s.augmentations > 0 {
                        worst_ratio =
                            worst_ratio.max(s.max_dual_updates_per_augmentation as f64 / n as f64);
                    }
                    if args.csv {
                        writeln!(
                            out,
                            "{m},{n},{p},{seed},{},{},{},{ms:.3}",
                            s.augmentations, s.dual_updates, s.field_ops
                        )?;
                    } else {
                        writeln!(
                            out,
                            "{m:>4} {n:>5} {p:>7} {seed:>6} {:>13} {:>12} {:>12} {ms:>9.3}",
                            s.augmentations, s.dual_updates, s.field_ops
                        )?;
                    }
                }
            }
        }
    }
    print!("{out}");
    if !args.csv {
        println!("# max dual updates per augmentation / n = {worst_ratio:.3}");
    }
    Ok(EXIT_OK)
}
