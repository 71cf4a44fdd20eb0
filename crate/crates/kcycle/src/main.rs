//! Command-line front end: solve instances, compress them to small
//! certificate files, evaluate certificates, generate test instances,
//! and cross-check with the exhaustive oracle. Every run echoes its
//! seed, and identical arguments plus seed give byte-identical output.

use std::fs;
use std::path::PathBuf;
use std::process;

use clap::{Parser, Subcommand, ValueEnum};

use kcycle::compress::{compress, deserialize, evaluate_compressed, serialize};
use kcycle::gen::{family_instance, instance, Family};
use kcycle::graph::{format_instance, parse_instance, reduce_terminals, Graph, TerminalSet};
use kcycle::oracle::brute_kcycle;
use kcycle::solver::{solve, AlgorithmChoice, SolveConfig, Verdict};

/// Largest graph the exhaustive oracle will accept.
const ORACLE_VERTEX_LIMIT: usize = 20;

#[derive(Parser)]
#[command(
    name = "kcycle",
    version,
    about = "Decides whether a graph has a simple cycle through a given terminal set"
)]
struct Cli {
    /// Base seed for all randomness; defaults to OS entropy.
    #[arg(long, global = true, env = "KCYCLE_SEED")]
    seed: Option<u64>,

    /// Worker threads for determinant sums; defaults to all cores.
    /// The verdict never depends on this.
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum AlgoArg {
    /// Orientation sum: 2^(k-1) determinants.
    #[value(name = "2k")]
    TwoK,
    /// Inclusion-exclusion sum: 2^(2k) determinants.
    #[value(name = "4k")]
    FourK,
    /// Special-case k <= 1, otherwise 2k.
    Auto,
}

#[derive(Subcommand)]
enum Command {
    /// Decide whether the instance has a cycle through all terminals.
    Solve {
        instance: PathBuf,
        #[arg(long, value_enum, default_value_t = AlgoArg::Auto)]
        algorithm: AlgoArg,
    },
    /// Compress an instance to a certificate whose size depends only on k.
    Compress {
        instance: PathBuf,
        /// Certificate output path.
        #[arg(long)]
        out: PathBuf,
    },
    /// Decide a compressed certificate file.
    Eval { certificate: PathBuf },
    /// Generate an instance: random G(n, p) or a named family.
    Gen {
        /// Vertex count for random graphs; cycle length or grid side for
        /// those families.
        #[arg(long)]
        n: Option<usize>,
        /// Edge probability for random graphs.
        #[arg(long, default_value_t = 0.3)]
        p: f64,
        /// Named family: cycle, bowtie, two-triangles, grid.
        #[arg(long)]
        family: Option<String>,
        /// Number of terminals to sample.
        #[arg(long, default_value_t = 2)]
        k: usize,
        /// Write here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Decide the instance by exhaustive search (small graphs only).
    Oracle { instance: PathBuf },
}

fn main() {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => process::exit(code),
        Err(msg) => {
            eprintln!("error: {msg}");
            process::exit(2);
        }
    }
}

fn run(cli: Cli) -> Result<i32, String> {
    if let Some(t) = cli.threads {
        if t == 0 {
            return Err("--threads must be at least 1".to_string());
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global()
            .map_err(|e| e.to_string())?;
    }
    let seed = cli.seed.unwrap_or_else(rand::random);
    match cli.command {
        Command::Solve { instance, algorithm } => cmd_solve(&instance, algorithm, seed),
        Command::Compress { instance, out } => cmd_compress(&instance, &out, seed),
        Command::Eval { certificate } => cmd_eval(&certificate),
        Command::Gen { n, p, family, k, out } => cmd_gen(n, p, family.as_deref(), k, out, seed),
        Command::Oracle { instance } => cmd_oracle(&instance),
    }
}

fn read_instance(path: &PathBuf) -> Result<(Graph, TerminalSet), String> {
    let text =
        fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    parse_instance(&text).map_err(|e| format!("{}: {e}", path.display()))
}

fn report(seed: u64, v: &Verdict) -> i32 {
    println!("seed: {seed}");
    println!("algorithm: {}", v.algorithm.name());
    println!("determinants: {}", v.determinant_evaluations);
    println!("false-negative bound: {}", v.bound_str());
    println!("verdict: {}", v.answer_str());
    i32::from(!v.is_yes())
}

fn cmd_solve(path: &PathBuf, algorithm: AlgoArg, seed: u64) -> Result<i32, String> {
    let (g, t) = read_instance(path)?;
    let algorithm = match algorithm {
        AlgoArg::TwoK => AlgorithmChoice::TwoK,
        AlgoArg::FourK => AlgorithmChoice::FourK,
        AlgoArg::Auto => AlgorithmChoice::Auto,
    };
    let v = solve(&g, &t, &SolveConfig { seed, algorithm });
    Ok(report(seed, &v))
}

fn cmd_compress(path: &PathBuf, out: &PathBuf, seed: u64) -> Result<i32, String> {
    let (g, t) = read_instance(path)?;
    if t.k() < 2 {
        return Err(format!("compression needs at least 2 terminals, got {}", t.k()));
    }
    let reduced = reduce_terminals(&g, &t);
    let c = compress(&reduced, seed).map_err(|e| e.to_string())?;
    let text = serialize(&c);
    fs::write(out, &text).map_err(|e| format!("{}: {e}", out.display()))?;
    println!("seed: {}", c.seed);
    println!("wrote: {}", out.display());
    println!("bytes: {}", text.len());
    Ok(0)
}

fn cmd_eval(path: &PathBuf) -> Result<i32, String> {
    let text =
        fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    let c = deserialize(&text).map_err(|e| format!("{}: {e}", path.display()))?;
    let v = evaluate_compressed(&c);
    Ok(report(c.seed, &v))
}

fn cmd_gen(
    n: Option<usize>,
    p: f64,
    family: Option<&str>,
    k: usize,
    out: Option<PathBuf>,
    seed: u64,
) -> Result<i32, String> {
    if !(0.0..=1.0).contains(&p) {
        return Err(format!("edge probability {p} out of [0, 1]"));
    }
    let (g, t) = match family {
        Some(name) => {
            let f = Family::parse(name)
                .ok_or_else(|| format!("unknown family {name:?} (cycle, bowtie, two-triangles, grid)"))?;
            let size = match f {
                Family::Cycle | Family::Grid => {
                    n.ok_or_else(|| format!("--n is required for family {name}"))?
                }
                Family::Bowtie | Family::TwoTriangles => n.unwrap_or(0),
            };
            if f == Family::Cycle && size < 3 {
                return Err("cycle family needs --n of at least 3".to_string());
            }
            if f == Family::Grid && size < 1 {
                return Err("grid family needs --n of at least 1".to_string());
            }
            let vertices = match f {
                Family::Cycle => size,
                Family::Grid => size * size,
                Family::Bowtie => 5,
                Family::TwoTriangles => 6,
            };
            if k > vertices {
                return Err(format!("cannot sample {k} terminals from {vertices} vertices"));
            }
            family_instance(f, size, k, seed)
        }
        None => {
            let n = n.ok_or("either --n or --family is required")?;
            if k > n {
                return Err(format!("cannot sample {k} terminals from {n} vertices"));
            }
            instance(n, p, k, seed)
        }
    };
    let text = format!("# seed={seed}\n{}", format_instance(&g, &t));
    match out {
        Some(path) => {
            fs::write(&path, &text).map_err(|e| format!("{}: {e}", path.display()))?;
            println!("seed: {seed}");
            println!("wrote: {}", path.display());
        }
        None => print!("{text}"),
    }
    Ok(0)
}

fn cmd_oracle(path: &PathBuf) -> Result<i32, String> {
    let (g, t) = read_instance(path)?;
    if g.n() > ORACLE_VERTEX_LIMIT {
        return Err(format!(
            "exhaustive search is limited to {ORACLE_VERTEX_LIMIT} vertices, instance has {}",
            g.n()
        ));
    }
    let yes = brute_kcycle(&g, &t);
    println!("algorithm: oracle");
    println!("verdict: {}", if yes { "YES" } else { "NO" });
    Ok(i32::from(!yes))
}
