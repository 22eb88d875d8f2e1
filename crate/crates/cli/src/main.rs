//! `homre`: command-line front end for the engines and the reduction generators.

mod selftest;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use homre_core::fast::{fast_solve, FastConfig, FastError};
use homre_core::forge::{self, read_bundle, verify_reduction, write_bundle, ReductionType};
use homre_core::formula::{random_instance, FormulaPairInstance};
use homre_core::ov::{batch_ov, scalar_batch_ov, BitVec, DEFAULT_CHI_CONSTANT};
use homre_core::{classify, simplify_type, Nfa, Pattern, Problem, Symbol};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Largest pattern (in AST nodes) the CLI will load.
pub const PATTERN_CAP: usize = 10_000_000;

const DEFAULT_SEED: u64 = 1;

#[derive(Parser)]
#[command(name = "homre", version, about = "Homogeneous regular expressions: engines and hardness-instance generators")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the type and depth of a homogeneous pattern.
    Classify {
        #[arg(long)]
        pattern: String,
    },
    /// Pattern matching, fast engine when the type allows it.
    Match(SolveArgs),
    /// Membership, fast engine when the type allows it.
    Member(SolveArgs),
    /// Baseline NFA verdict only.
    Oracle {
        #[arg(long)]
        text: String,
        #[arg(long)]
        pattern: String,
        #[arg(long, default_value = "matching")]
        problem: Problem,
    },
    /// Generate a random Formula-Pair instance.
    GenFp {
        #[arg(long, default_value_t = 4)]
        s: usize,
        #[arg(long, default_value_t = 2)]
        depth: usize,
        #[arg(long, default_value_t = 2)]
        n: usize,
        #[arg(long, default_value_t = 2)]
        m: usize,
        #[arg(long, env = "HOMRE_SEED", default_value_t = DEFAULT_SEED)]
        seed: u64,
        /// Output file; stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Turn a Formula-Pair instance into a text/pattern bundle.
    Reduce {
        #[arg(long = "type")]
        ty: ReductionType,
        #[arg(long, default_value = "matching")]
        problem: Problem,
        #[arg(long = "in")]
        input: PathBuf,
        /// Bundle prefix: writes <out>.text, <out>.pattern, <out>.meta.
        #[arg(long)]
        out: PathBuf,
    },
    /// Check a bundle against brute force on its instance.
    Verify {
        #[arg(long)]
        bundle: PathBuf,
        #[arg(long = "in")]
        input: PathBuf,
    },
    /// Deterministic differential suite.
    Selftest {
        #[arg(long, env = "HOMRE_SEED", default_value_t = DEFAULT_SEED)]
        seed: u64,
        /// Random instances per fast-engine kind.
        #[arg(long, default_value_t = 200)]
        count: usize,
    },
    /// Timings for the baseline, the fast engine and batch OV.
    Bench {
        /// Text length for the engine comparison.
        #[arg(long, default_value_t = 20_000)]
        n: usize,
        /// Vectors per side and dimension for batch OV.
        #[arg(long, default_value_t = 2048)]
        ov_n: usize,
        #[arg(long, default_value_t = 256)]
        ov_d: usize,
        #[arg(long, env = "HOMRE_SEED", default_value_t = DEFAULT_SEED)]
        seed: u64,
    },
}

#[derive(Args)]
struct SolveArgs {
    #[arg(long)]
    text: String,
    #[arg(long)]
    pattern: String,
    /// Small/large split for the fast engine; default depends on the input size.
    #[arg(long)]
    threshold_f: Option<usize>,
    /// Constant in the χ dimension `c·f·ln|Σ′|`.
    #[arg(long, default_value_t = DEFAULT_CHI_CONSTANT as u32)]
    chi_c: u32,
    #[arg(long, env = "HOMRE_SEED", default_value_t = DEFAULT_SEED)]
    seed: u64,
}

enum Failure {
    Usage(String),
    Internal(String),
}

type Outcome = Result<bool, Failure>;

fn usage(e: impl std::fmt::Display) -> Failure {
    Failure::Usage(e.to_string())
}

/// `@path` reads the file, anything else is taken literally.
fn read_arg(arg: &str) -> Result<String, Failure> {
    match arg.strip_prefix('@') {
        Some(path) => fs::read_to_string(path)
            .map(|s| s.trim_end_matches(['\n', '\r']).to_string())
            .map_err(|e| usage(format!("{path}: {e}"))),
        None => Ok(arg.to_string()),
    }
}

fn load_text(arg: &str) -> Result<Vec<Symbol>, Failure> {
    Ok(read_arg(arg)?.chars().collect())
}

fn load_pattern(arg: &str) -> Result<Pattern, Failure> {
    let src = read_arg(arg)?;
    if src.chars().filter(|c| !"()|+*".contains(*c)).count() > PATTERN_CAP {
        return Err(usage(format!("pattern exceeds {PATTERN_CAP} nodes")));
    }
    let p = Pattern::parse(&src).map_err(usage)?;
    if p.size() > PATTERN_CAP {
        return Err(usage(format!("pattern has {} nodes, cap is {PATTERN_CAP}", p.size())));
    }
    Ok(p)
}

fn load_instance(path: &Path) -> Result<FormulaPairInstance, Failure> {
    let src = fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))?;
    FormulaPairInstance::parse(&src).map_err(usage)
}

fn baseline(t: &[Symbol], p: &Pattern, prob: Problem) -> bool {
    let nfa = Nfa::compile(p);
    match prob {
        Problem::Matching => nfa.matches(t),
        Problem::Membership => nfa.accepts(t),
    }
}

fn solve(args: &SolveArgs, prob: Problem) -> Outcome {
    let t = load_text(&args.text)?;
    let p = load_pattern(&args.pattern)?;
    let cfg = FastConfig {
        threshold_f: args.threshold_f,
        chi_c: args.chi_c as f64,
        seed: args.seed,
    };
    let (answer, engine) = match fast_solve(&t, &p, prob, &cfg) {
        Ok(out) => (out.answer, out.engine),
        Err(FastError::UnsupportedType(_)) => (baseline(&t, &p, prob), "baseline".to_string()),
        Err(e) => return Err(Failure::Internal(e.to_string())),
    };
    println!("{answer} (engine={engine})");
    Ok(answer)
}

fn classify_cmd(pattern: &str) -> Outcome {
    let p = load_pattern(pattern)?;
    let c = classify(&p);
    if !c.homogeneous {
        println!("not homogeneous (size={})", c.size);
        return Ok(false);
    }
    println!("{} depth={}", c.type_string, c.depth);
    for prob in [Problem::Matching, Problem::Membership] {
        println!("  {prob}: simplifies to {}", simplify_type(&c.type_string, prob));
    }
    Ok(true)
}

fn gen_fp(s: usize, depth: usize, n: usize, m: usize, seed: u64, out: Option<&Path>) -> Outcome {
    let inst = random_instance(s, depth, n, m, seed).map_err(usage)?;
    let text = inst.render();
    match out {
        Some(path) => fs::write(path, text).map_err(|e| usage(format!("{}: {e}", path.display())))?,
        None => print!("{text}"),
    }
    Ok(true)
}

fn reduce(ty: ReductionType, problem: Problem, input: &Path, out: &Path) -> Outcome {
    let inst = load_instance(input)?;
    let ri = forge::build(&inst, ty, problem).map_err(usage)?;
    if ri.pattern.size() > PATTERN_CAP {
        return Err(usage(format!("generated pattern has {} nodes, cap is {PATTERN_CAP}", ri.pattern.size())));
    }
    write_bundle(out, &ri).map_err(|e| usage(format!("{}: {e}", out.display())))?;
    print!("{}", ri.meta.render());
    Ok(true)
}

fn verify(bundle: &Path, input: &Path) -> Outcome {
    let inst = load_instance(input)?;
    let ri = read_bundle(bundle).map_err(usage)?;
    let report = verify_reduction(&ri, &inst);
    print!("{report}");
    if report.ok() {
        Ok(true)
    } else {
        Err(Failure::Internal("verification failed".into()))
    }
}

fn bench(n: usize, ov_n: usize, ov_d: usize, seed: u64) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let alphabet = ['a', 'b', 'c'];
    let t: Vec<Symbol> = (0..n).map(|_| alphabet[rng.random_range(0..3)]).collect();
    let p = Pattern::parse("(a+b|bc+|ca+|b+a|c)+").unwrap();
    let cfg = FastConfig { seed, ..FastConfig::default() };

    let start = Instant::now();
    let slow = baseline(&t, &p, Problem::Membership);
    let t_base = start.elapsed().as_secs_f64();
    let start = Instant::now();
    let fast = fast_solve(&t, &p, Problem::Membership, &cfg).map_err(|e| Failure::Internal(e.to_string()))?;
    let t_fast = start.elapsed().as_secs_f64();
    println!("membership n={n} pattern={p}: baseline {t_base:.4}s, {} {t_fast:.4}s, answers {slow}/{}", fast.engine, fast.answer);

    let gen = |rng: &mut ChaCha8Rng| -> Vec<Vec<bool>> {
        (0..ov_n).map(|_| (0..ov_d).map(|_| rng.random_bool(0.1)).collect()).collect()
    };
    let (a, b) = (gen(&mut rng), gen(&mut rng));
    let pa: Vec<BitVec> = a.iter().map(|v| BitVec::from_bools(v)).collect();
    let pb: Vec<BitVec> = b.iter().map(|v| BitVec::from_bools(v)).collect();
    let start = Instant::now();
    let packed = batch_ov(&pa, &pb).map_err(|e| Failure::Internal(e.to_string()))?;
    let t_packed = start.elapsed().as_secs_f64();
    let start = Instant::now();
    let scalar = scalar_batch_ov(&a, &b);
    let t_scalar = start.elapsed().as_secs_f64();
    println!(
        "batch OV n=m={ov_n} d={ov_d}: packed {t_packed:.4}s, scalar {t_scalar:.4}s, speedup {:.1}x",
        t_scalar / t_packed.max(1e-9)
    );
    if slow != fast.answer || packed != scalar {
        return Err(Failure::Internal("engines disagree".into()));
    }
    Ok(true)
}

fn run(cli: Cli) -> Outcome {
    match cli.command {
        Command::Classify { pattern } => classify_cmd(&pattern),
        Command::Match(args) => solve(&args, Problem::Matching),
        Command::Member(args) => solve(&args, Problem::Membership),
        Command::Oracle { text, pattern, problem } => {
            let answer = baseline(&load_text(&text)?, &load_pattern(&pattern)?, problem);
            println!("{answer} (engine=baseline)");
            Ok(answer)
        }
        Command::GenFp { s, depth, n, m, seed, out } => gen_fp(s, depth, n, m, seed, out.as_deref()),
        Command::Reduce { ty, problem, input, out } => reduce(ty, problem, &input, &out),
        Command::Verify { bundle, input } => verify(&bundle, &input),
        Command::Selftest { seed, count } => {
            let report = selftest::run(seed, count);
            print!("{}", report.text);
            if report.ok {
                Ok(true)
            } else {
                Err(Failure::Internal("selftest found disagreements".into()))
            }
        }
        Command::Bench { n, ov_n, ov_d, seed } => bench(n, ov_n, ov_d, seed),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Internal(msg)) => {
            eprintln!("check failed: {msg}");
            ExitCode::from(3)
        }
    }
}
