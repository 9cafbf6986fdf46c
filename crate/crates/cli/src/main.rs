use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use ldc_core::classify::classify;
use ldc_core::gadgets::{gfch, gsch, Polarity};
use ldc_core::io::{
    encoded_to_value, network_from_json, network_to_json, solution_from_json, solution_to_json, solution_to_value,
};
use ldc_core::lp::write_lp;
use ldc_core::mff::{self, MffOutcome};
use ldc_core::mpf::{formulate_mpf, solve_mpf, solve_tree};
use ldc_core::msf::{self, export_milp, MsfOutcome};
use ldc_core::reductions::{self, EncodingKind, ExactCover3Instance, SubsetSumInstance};
use ldc_core::{Error, Network, NodeId, Rational, Solution, SwitchSet};

const DECIMALS: usize = 12;

#[derive(Parser)]
#[command(name = "ldc", version, about = "Exact max potential, switching and FACTS flow for linear DC networks")]
struct Cli {
    /// Print machine-readable JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve MPF, MSF or MFF for a network.
    Solve {
        #[command(subcommand)]
        problem: Problem,
    },
    /// Encode a combinatorial instance as a network.
    Encode { kind: KindArg, instance: PathBuf },
    /// Read a certificate back out of an optimal solution of an encoding.
    Decode { kind: KindArg, instance: PathBuf, solution: PathBuf },
    /// Emit a generator-choice gadget network.
    Gadget {
        #[arg(value_enum)]
        which: GadgetKind,
        #[arg(long)]
        x: Rational,
        #[arg(long, default_value = "v")]
        port: String,
        #[arg(long, value_enum, default_value = "minus")]
        polarity: PolarityArg,
        #[arg(long, default_value = "")]
        prefix: String,
    },
    /// Check a solution against a network. Edges the solution omits
    /// entirely are treated as switched off.
    Verify { network: PathBuf, solution: PathBuf },
    /// Report tree/cactus membership, connectivity and maximum degree.
    Classify { network: PathBuf },
    /// Write a network's optimisation model in LP format.
    Export {
        #[arg(value_enum)]
        model: ExportKind,
        network: PathBuf,
        /// Write to this file instead of stdout.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

#[derive(Args)]
struct SolveArgs {
    network: PathBuf,
    /// Only answer whether the optimum is at least this value.
    #[arg(long)]
    decide: Option<Rational>,
    /// Also write the optimal solution as JSON to this file.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Problem {
    /// Maximum potential flow (one LP).
    Mpf {
        #[command(flatten)]
        args: SolveArgs,
        /// Use the LP-free tree algorithm (the network must be a tree).
        #[arg(long)]
        tree: bool,
    },
    /// Maximum switching flow.
    Msf {
        #[command(flatten)]
        args: SolveArgs,
        #[arg(long, value_enum, default_value = "bnb")]
        method: Method,
        /// Edge limit for the exhaustive method.
        #[arg(long, default_value_t = msf::DEFAULT_EDGE_LIMIT)]
        limit: usize,
    },
    /// Maximum FACTS flow (endpoint or grid search, a lower bound).
    Mff {
        #[command(flatten)]
        args: SolveArgs,
        /// Search k + 1 evenly spaced susceptances per FACTS edge.
        #[arg(long)]
        grid: Option<usize>,
        /// Maximum number of FACTS edges.
        #[arg(long, default_value_t = mff::DEFAULT_FACTS_LIMIT)]
        limit: usize,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    /// Branch and bound.
    Bnb,
    /// Try every switch set.
    Exhaustive,
}

#[derive(Clone, Copy, ValueEnum)]
enum GadgetKind {
    Gsch,
    Gfch,
}

#[derive(Clone, Copy, ValueEnum)]
enum PolarityArg {
    Minus,
    Plus,
    Port,
}

#[derive(Clone, Copy, ValueEnum)]
enum ExportKind {
    /// Mixed-integer switching model.
    Milp,
    /// The MPF linear program.
    Lp,
}

#[derive(Clone, Copy)]
struct KindArg(EncodingKind);

impl std::str::FromStr for KindArg {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        s.parse().map(KindArg).map_err(|_| {
            let names: Vec<_> = EncodingKind::ALL.iter().map(|k| k.name()).collect();
            format!("unknown encoding {s:?}; expected one of {}", names.join(", "))
        })
    }
}

/// An error with the exit code it maps to.
struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Parse(_)
            | Error::InvalidNetwork(_)
            | Error::InvalidInstance(_)
            | Error::UnknownEdge(_)
            | Error::EdgeOverlap(_)
            | Error::RoleConflict(_) => 3,
            Error::NotFixedSusceptance(_)
            | Error::NotATree
            | Error::TooLarge { .. }
            | Error::TooManyFactsEdges { .. }
            | Error::NonpositiveX(_)
            | Error::MalformedProgram(_) => 4,
            Error::NotACertificate(_) | Error::NotOptimal { .. } | Error::DecodingFailed(_) => 1,
        };
        Failure { code, message: e.to_string() }
    }
}

type CliResult<T = ()> = Result<T, Failure>;

fn usage(message: impl Into<String>) -> Failure {
    Failure { code: 2, message: message.into() }
}

fn read(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|e| Failure { code: 3, message: format!("{}: {e}", path.display()) })
}

fn write(path: &Path, text: &str) -> CliResult {
    fs::write(path, text).map_err(|e| Failure { code: 3, message: format!("{}: {e}", path.display()) })
}

/// Returns the `key` member of a JSON object if present, so that outputs of
/// `encode` and `solve --json` can be fed straight back in.
fn unwrap_member(text: &str, key: &str) -> CliResult<String> {
    let value: Value = serde_json::from_str(text).map_err(|e| Failure::from(Error::Parse(e.to_string())))?;
    Ok(match value.get(key) {
        Some(inner) => inner.to_string(),
        None => text.to_string(),
    })
}

fn load_network(path: &Path) -> CliResult<Network> {
    let text = unwrap_member(&read(path)?, "network")?;
    network_from_json(&text).map_err(|e| with_path(path, e))
}

fn load_solution(path: &Path) -> CliResult<Solution> {
    let text = unwrap_member(&read(path)?, "solution")?;
    solution_from_json(&text).map_err(|e| with_path(path, e))
}

fn load_instance<T: serde::de::DeserializeOwned>(path: &Path) -> CliResult<T> {
    serde_json::from_str(&read(path)?).map_err(|e| with_path(path, Error::Parse(e.to_string())))
}

fn with_path(path: &Path, e: Error) -> Failure {
    let mut f = Failure::from(e);
    f.message = format!("{}: {}", path.display(), f.message);
    f
}

fn number(x: &Rational) -> String {
    let dec = x.to_decimal_string(DECIMALS);
    if dec == x.to_string() {
        dec
    } else {
        format!("{x} ({dec})")
    }
}

fn edge_list(s: &SwitchSet) -> Vec<Value> {
    s.iter().map(|k| json!([k.a(), k.b()])).collect()
}

fn print_json(v: &Value) {
    println!("{}", serde_json::to_string_pretty(v).expect("serializable"));
}

struct Report {
    json: bool,
}

impl Report {
    fn decision(&self, problem: &str, threshold: &Rational, answer: &str) {
        if self.json {
            print_json(&json!({"problem": problem, "threshold": threshold, "answer": answer}));
        } else {
            println!("{answer}");
        }
    }

    fn value(&self, problem: &str, value: &Rational, extra: Value, lines: &[String], sol: &Solution) {
        if self.json {
            let mut out = json!({
                "problem": problem,
                "value": value,
                "value_decimal": value.to_decimal_string(DECIMALS),
                "solution": solution_to_value(sol),
            });
            if let (Value::Object(out), Value::Object(extra)) = (&mut out, extra) {
                out.extend(extra);
            }
            print_json(&out);
        } else {
            println!("{}", number(value));
            for l in lines {
                println!("{l}");
            }
        }
    }
}

fn decide_word(yes: bool) -> &'static str {
    if yes {
        "YES"
    } else {
        "NO"
    }
}

fn solve(problem: Problem, out: &Report) -> CliResult {
    match problem {
        Problem::Mpf { args, tree } => {
            let n = load_network(&args.network)?;
            let res = if tree { solve_tree(&n)? } else { solve_mpf(&n)? };
            if let Some(x) = &args.decide {
                out.decision("mpf", x, decide_word(&res.value >= x));
            } else {
                out.value("mpf", &res.value, json!({}), &[], &res.solution);
            }
            save_solution(&args, &res.solution)
        }
        Problem::Msf { args, method, limit } => {
            let n = load_network(&args.network)?;
            if let (Some(x), Method::Bnb) = (&args.decide, method) {
                if args.out.is_some() {
                    return Err(usage("--out needs --method exhaustive when combined with --decide"));
                }
                out.decision("msf", x, decide_word(msf::decide_msf(&n, x)?));
                return Ok(());
            }
            let res: MsfOutcome = match method {
                Method::Exhaustive => msf::solve_msf_exhaustive_with_limit(&n, limit)?,
                Method::Bnb => msf::solve_msf_bnb(&n)?,
            };
            if let Some(x) = &args.decide {
                out.decision("msf", x, decide_word(&res.value >= x));
            } else {
                let names: Vec<String> = res.switched.iter().map(|k| k.to_string()).collect();
                let line =
                    format!("switched: {}", if names.is_empty() { "none".to_string() } else { names.join(", ") });
                out.value("msf", &res.value, json!({"switched": edge_list(&res.switched)}), &[line], &res.solution);
            }
            save_solution(&args, &res.solution)
        }
        Problem::Mff { args, grid, limit } => {
            let n = load_network(&args.network)?;
            let res: MffOutcome = match grid {
                Some(0) => return Err(usage("--grid must be positive")),
                Some(k) => mff::solve_mff_grid_with_limit(&n, k, limit)?,
                None => mff::solve_mff_endpoints_with_limit(&n, limit)?,
            };
            if let Some(x) = &args.decide {
                out.decision("mff", x, if &res.value >= x { "YES" } else { "UNKNOWN" });
            } else {
                let mut lines: Vec<String> =
                    res.assignment.as_map().iter().map(|(k, s)| format!("susceptance {k} = {}", number(s))).collect();
                lines.push(format!(
                    "certified: {}",
                    if res.certified { "yes" } else { "no (lower bound from a finite search)" }
                ));
                let assignment: Vec<Value> =
                    res.assignment.as_map().iter().map(|(k, s)| json!({"a": k.a(), "b": k.b(), "value": s})).collect();
                out.value(
                    "mff",
                    &res.value,
                    json!({"assignment": assignment, "certified": res.certified}),
                    &lines,
                    &res.solution,
                );
            }
            save_solution(&args, &res.solution)
        }
    }
}

fn save_solution(args: &SolveArgs, sol: &Solution) -> CliResult {
    match &args.out {
        Some(path) => write(path, &(solution_to_json(sol) + "\n")),
        None => Ok(()),
    }
}

fn encode(kind: EncodingKind, instance: &Path) -> CliResult {
    let enc = match kind {
        EncodingKind::ExactCoverMff => reductions::encode_exact_cover_mff(&load_instance(instance)?)?,
        EncodingKind::ExactCoverMsf => reductions::encode_exact_cover_msf(&load_instance(instance)?)?,
        EncodingKind::Hamiltonian => reductions::encode_hamiltonian(&load_instance(instance)?)?,
        EncodingKind::SubsetSumCactusMsf => reductions::encode_subset_sum_cactus_msf(&load_instance(instance)?)?,
        EncodingKind::SubsetSumCactusMff => reductions::encode_subset_sum_cactus_mff(&load_instance(instance)?)?,
        EncodingKind::SubsetSumTree => reductions::encode_subset_sum_tree(&load_instance(instance)?)?,
    };
    print_json(&encoded_to_value(&enc));
    Ok(())
}

fn decode(kind: EncodingKind, instance: &Path, solution: &Path, out: &Report) -> CliResult {
    if kind == EncodingKind::Hamiltonian {
        return Err(usage("hamiltonian encodings have no decoder"));
    }
    let sol = load_solution(solution)?;
    match kind {
        EncodingKind::ExactCoverMff | EncodingKind::ExactCoverMsf => {
            let inst: ExactCover3Instance = load_instance(instance)?;
            let chosen = reductions::decode_exact_cover(&inst, kind, &sol)?;
            let sets: Vec<&[String; 3]> = chosen.iter().map(|&i| &inst.sets[i]).collect();
            if out.json {
                print_json(&json!({"kind": kind, "cover": sets}));
            } else {
                for s in sets {
                    println!("{{{}}}", s.join(", "));
                }
            }
        }
        EncodingKind::SubsetSumCactusMsf | EncodingKind::SubsetSumCactusMff | EncodingKind::SubsetSumTree => {
            let inst: SubsetSumInstance = load_instance(instance)?;
            let chosen = reductions::decode_subset_sum(&inst, kind, &sol)?;
            let values: Vec<u64> = chosen.iter().map(|&i| inst.elements[i]).collect();
            if out.json {
                print_json(&json!({"kind": kind, "subset": values}));
            } else {
                let text: Vec<String> = values.iter().map(u64::to_string).collect();
                println!("{{{}}}", text.join(", "));
            }
        }
        EncodingKind::Hamiltonian => unreachable!(),
    }
    Ok(())
}

fn run(cli: Cli) -> CliResult {
    let out = Report { json: cli.json };
    match cli.command {
        Command::Solve { problem } => solve(problem, &out),
        Command::Encode { kind, instance } => encode(kind.0, &instance),
        Command::Decode { kind, instance, solution } => decode(kind.0, &instance, &solution, &out),
        Command::Gadget { which, x, port, polarity, prefix } => {
            let polarity = match polarity {
                PolarityArg::Minus => Polarity::Minus,
                PolarityArg::Plus => Polarity::Plus,
                PolarityArg::Port => Polarity::Port,
            };
            let port = NodeId::new(port);
            let n = match which {
                GadgetKind::Gsch => gsch(&x, &port, polarity, &prefix)?,
                GadgetKind::Gfch => gfch(&x, &port, polarity, &prefix)?,
            };
            println!("{}", network_to_json(&n));
            Ok(())
        }
        Command::Verify { network, solution } => {
            let n = load_network(&network)?;
            let sol = load_solution(&solution)?;
            let (switched, report) = ldc_core::validate_with_switching(&n, &sol);
            if out.json {
                print_json(&json!({
                    "ok": report.is_ok(),
                    "switched": edge_list(&switched),
                    "violations": report.violations(),
                }));
            } else {
                println!("{report}");
                if report.is_ok() && !switched.is_empty() {
                    let names: Vec<String> = switched.iter().map(|k| k.to_string()).collect();
                    println!("switched off: {}", names.join(", "));
                }
            }
            if report.is_ok() {
                Ok(())
            } else {
                Err(Failure { code: 1, message: String::new() })
            }
        }
        Command::Classify { network } => {
            let c = classify(&load_network(&network)?);
            if out.json {
                print_json(&serde_json::to_value(&c).expect("serializable"));
            } else {
                let yn = |b: bool| if b { "yes" } else { "no" };
                println!("tree: {}", yn(c.tree));
                println!("cactus: {}", yn(c.cactus));
                println!("connected: {}", yn(c.connected));
                println!("max_degree: {}", c.max_degree);
            }
            Ok(())
        }
        Command::Export { model, network, output } => {
            let n = load_network(&network)?;
            let text = match model {
                ExportKind::Milp => export_milp(&n)?,
                ExportKind::Lp => write_lp(&formulate_mpf(&n)?, &[], &["Maximum potential flow.".to_string()]),
            };
            match output {
                Some(path) => write(&path, &text),
                None => {
                    print!("{text}");
                    Ok(())
                }
            }
        }
    }
}

fn configure_threads() -> CliResult {
    let Ok(raw) = std::env::var("LDC_THREADS") else {
        return Ok(());
    };
    let threads: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&t| t > 0)
        .ok_or_else(|| usage(format!("LDC_THREADS must be a positive integer, got {raw:?}")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| usage(format!("cannot configure {threads} threads: {e}")))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match configure_threads().and_then(|()| run(cli)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            if !f.message.is_empty() {
                eprintln!("ldc: {}", f.message);
            }
            ExitCode::from(f.code)
        }
    }
}
