//! `tim`: command-line front end over the topological interference management
//! toolkit. Subcommands parse a topology file, run the requested analysis,
//! and emit canonical JSON on stdout or into `--out`; short human-readable
//! summaries go to stderr. Exit codes are stable: 0 success, 1 verification
//! failure, 2 malformed input, 3 unsupported topology class or component
//! shape, 4 synthesis gave up without a feasible plan.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{ArgGroup, Parser, Subcommand};
use tim_core::bounds::{classify, upper_bound, TopologyClass};
use tim_core::graphs::{analyze, AlignmentConflictGraphs};
use tim_core::oracle::{exhaustive_survey, sampled_survey, summarize, OracleError};
use tim_core::ratio::{format_rat, parse_rat};
use tim_core::scheme::SchemeError;
use tim_core::topology::TopologyError;
use tim_core::verify::VerifyError;
use tim_core::{parse_scheme, parse_topology, synthesize_half, synthesize_two_coint};

#[derive(Parser)]
#[command(
    name = "tim",
    version,
    about = "Topological interference management: bounds, schemes, verification"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Analyze a topology: alignment and conflict graphs and derived statistics
    Analyze {
        /// Topology file (text or JSON form)
        topology: PathBuf,
        /// Also write the graphs as Graphviz DOT to this path
        #[arg(long)]
        dot: Option<PathBuf>,
        /// Write the analysis JSON here instead of stdout
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compute the linear symmetric degrees-of-freedom upper bound
    Bound {
        /// Topology file (text or JSON form)
        topology: PathBuf,
        /// Write the bound JSON here instead of stdout
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Synthesize an achievability scheme for the topology's class
    Synth {
        /// Topology file (text or JSON form)
        topology: PathBuf,
        /// Seed for beamforming values and retry randomness
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Write the scheme JSON here instead of stdout
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Verify a scheme against a topology at a target rate
    Verify {
        /// Topology file (text or JSON form)
        topology: PathBuf,
        /// Scheme file (JSON form, as produced by synth)
        scheme: PathBuf,
        /// Target rate as p/q; defaults to the topology's upper bound
        #[arg(long)]
        target: Option<String>,
        /// Independent channel draws that must all pass
        #[arg(long, default_value_t = 3)]
        trials: usize,
        /// Seed for the channel draws
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
    /// Survey many topologies: classify, bound, synthesize, and verify each
    #[command(group(ArgGroup::new("mode").required(true).args(["exhaustive", "random"])))]
    Survey {
        /// Number of users
        #[arg(long)]
        k: usize,
        /// Enumerate every topology on K users
        #[arg(long)]
        exhaustive: bool,
        /// Sample this many random topologies instead
        #[arg(long)]
        random: Option<usize>,
        /// Cross-link density p/q for random sampling
        #[arg(long, requires = "random")]
        density: Option<String>,
        /// Seed for sampling and per-record synthesis
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Write the per-record JSON lines here; the summary stays on stdout
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Export the alignment and conflict graphs as Graphviz DOT
    ExportDot {
        /// Topology file (text or JSON form)
        topology: PathBuf,
        /// Write the DOT here instead of stdout
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn parse(message: String) -> Self {
        Failure { code: 2, message }
    }
}

impl From<TopologyError> for Failure {
    fn from(e: TopologyError) -> Self {
        Failure::parse(e.to_string())
    }
}

impl From<SchemeError> for Failure {
    fn from(e: SchemeError) -> Self {
        let code = match e {
            SchemeError::Malformed(_) => 2,
            SchemeError::NotBestTopology
            | SchemeError::NotPathOrCycle
            | SchemeError::WrongClass(_) => 3,
            SchemeError::PlanInfeasible { .. } => 4,
        };
        Failure { code, message: e.to_string() }
    }
}

impl From<VerifyError> for Failure {
    fn from(e: VerifyError) -> Self {
        Failure::parse(e.to_string())
    }
}

impl From<OracleError> for Failure {
    fn from(e: OracleError) -> Self {
        Failure::parse(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => code,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn run(command: Command) -> Result<ExitCode, Failure> {
    match command {
        Command::Analyze { topology, dot, out } => {
            let t = load_topology(&topology)?;
            let a = analyze(&t);
            if let Some(path) = dot {
                write_file(&path, &with_newline(&render_dot(&a.graphs)))?;
            }
            emit(out.as_deref(), &a.to_json())?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Bound { topology, out } => {
            let t = load_topology(&topology)?;
            let a = analyze(&t);
            let class = classify(&a);
            let bound = upper_bound(&a);
            emit(out.as_deref(), &bound.to_json(class))?;
            eprintln!("class {}, bound {}", class.as_str(), format_rat(&bound.value));
            Ok(ExitCode::SUCCESS)
        }
        Command::Synth { topology, seed, out } => {
            let t = load_topology(&topology)?;
            let a = analyze(&t);
            let class = classify(&a);
            let scheme = match class {
                TopologyClass::InterferenceFree | TopologyClass::Best => {
                    synthesize_half(&t, &a, seed)?
                }
                TopologyClass::TwoCoInterferer => synthesize_two_coint(&t, &a, seed)?,
                TopologyClass::General => {
                    return Err(SchemeError::WrongClass(TopologyClass::General).into())
                }
            };
            emit(out.as_deref(), &scheme.to_json())?;
            eprintln!(
                "class {}, {} symbol extensions, {} preset modes",
                class.as_str(),
                scheme.m(),
                scheme.num_modes()
            );
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify { topology, scheme, target, trials, seed } => {
            let t = load_topology(&topology)?;
            let s = parse_scheme(&read_file(&scheme)?)?;
            let target = match target {
                Some(text) => parse_rat(&text)
                    .map_err(|e| Failure::parse(format!("invalid --target: {e}")))?,
                None => upper_bound(&analyze(&t)).value,
            };
            let report = verify(&t, &s, &target, trials, seed)?;
            emit(None, &report.to_json())?;
            if report.pass {
                eprintln!("pass at rate {} over {} trials", format_rat(&target), trials);
                Ok(ExitCode::SUCCESS)
            } else {
                eprintln!("fail at rate {} over {} trials", format_rat(&target), trials);
                Ok(ExitCode::from(1))
            }
        }
        Command::Survey { k, exhaustive, random, density, seed, out } => {
            let records = if exhaustive {
                exhaustive_survey(k, seed)?
            } else {
                let count = random.expect("clap guarantees --random in this mode");
                let density = match density {
                    Some(text) => parse_rat(&text)
                        .map_err(|e| Failure::parse(format!("invalid --density: {e}")))?,
                    None => return Err(Failure::parse("--random requires --density".into())),
                };
                sampled_survey(k, count, &density, seed)?
            };
            let lines: String = records.iter().map(|r| with_newline(&r.to_json_line())).collect();
            let summary = summarize(&records);
            match out {
                Some(path) => write_file(&path, &lines)?,
                None => print_stdout(&lines)?,
            }
            emit(None, &summary.to_json())?;
            eprintln!("{} topologies surveyed, {} flags", summary.total, summary.flag_count);
            Ok(ExitCode::SUCCESS)
        }
        Command::ExportDot { topology, out } => {
            let t = load_topology(&topology)?;
            let a = analyze(&t);
            emit(out.as_deref(), &render_dot(&a.graphs))?;
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn verify(
    t: &tim_core::NetworkTopology,
    s: &tim_core::LinearScheme,
    target: &tim_core::Rat,
    trials: usize,
    seed: u64,
) -> Result<tim_core::VerificationReport, Failure> {
    Ok(tim_core::verify_scheme(t, s, target, trials, seed)?)
}

fn load_topology(path: &Path) -> Result<tim_core::NetworkTopology, Failure> {
    Ok(parse_topology(&read_file(path)?)?)
}

fn read_file(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path)
        .map_err(|e| Failure::parse(format!("cannot read {}: {e}", path.display())))
}

fn write_file(path: &Path, text: &str) -> Result<(), Failure> {
    fs::write(path, text)
        .map_err(|e| Failure::parse(format!("cannot write {}: {e}", path.display())))
}

fn with_newline(text: &str) -> String {
    format!("{text}\n")
}

fn emit(out: Option<&Path>, payload: &str) -> Result<(), Failure> {
    match out {
        Some(path) => write_file(path, &with_newline(payload)),
        None => print_stdout(&with_newline(payload)),
    }
}

/// Writes to stdout, treating a closed pipe (e.g. `tim ... | head`) as a
/// normal early end of output rather than an error.
fn print_stdout(payload: &str) -> Result<(), Failure> {
    let mut out = io::stdout().lock();
    match out.write_all(payload.as_bytes()).and_then(|()| out.flush()) {
        Ok(()) => Ok(()),
        Err(e) if e.kind() == io::ErrorKind::BrokenPipe => std::process::exit(0),
        Err(e) => Err(Failure::parse(format!("cannot write stdout: {e}"))),
    }
}

/// Renders both graphs into one DOT digraph: alignment edges as solid
/// undirected black edges, conflict edges as dashed directed red edges.
fn render_dot(g: &AlignmentConflictGraphs) -> String {
    let mut dot = String::from("digraph network {\n");
    for v in 1..=g.k() {
        dot.push_str(&format!("    {v};\n"));
    }
    for (a, b) in g.alignment_edges() {
        dot.push_str(&format!("    {a} -> {b} [dir=none, style=solid, color=black];\n"));
    }
    for (i, j) in g.conflict_edges() {
        dot.push_str(&format!("    {i} -> {j} [style=dashed, color=red];\n"));
    }
    dot.push('}');
    dot
}
