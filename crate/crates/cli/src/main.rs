//! `paritymbqc`: JSON front end for the layout, stabiliser, engine and gflow
//! tools. Machine output goes to stdout, a short summary to stderr.
//!
//! Exit codes: 0 success or agreement, 1 verified disagreement, 2 usage,
//! IO or input error.

mod output;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use paritymbqc::gflow::{search_gflow_yz_with_cap, theorem2_sweep, verify_gflow, FlowJson, DEFAULT_SEARCH_CAP};
use paritymbqc::graph::Graph;
use paritymbqc::layout::ParityLayout;
use paritymbqc::pauli::{graph_generators, groups_equal, parity_generators};
use paritymbqc::program::{compare, run_branches, AnyProgram, Branches, MbqcProgram, ParityProgram};
use serde::de::DeserializeOwned;
use serde_json::json;

#[derive(Parser)]
#[command(name = "paritymbqc", version, about = "Parity-encoded computation and its MBQC counterpart")]
struct Cli {
    /// Worker threads for sweeps and branch enumeration; 0 means all cores.
    #[arg(long, global = true, env = "PARITYMBQC_WORKERS", default_value_t = 0)]
    workers: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parity layouts.
    #[command(subcommand)]
    Lhz(Lhz),
    /// Stabiliser checks.
    #[command(subcommand)]
    Stab(Stab),
    /// Run one engine over its outcome branches.
    #[command(subcommand)]
    Sim(Sim),
    /// Run a parity program on both engines and compare the outputs.
    Compare {
        #[arg(long)]
        program: PathBuf,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        #[command(flatten)]
        branches: BranchArgs,
    },
    /// Generalised flow tools.
    #[command(subcommand)]
    Gflow(Gflow),
    /// Flow existence against the bipartition test over all connected graphs.
    Sweep {
        #[arg(long)]
        max_n: usize,
        /// Judge the run by the bipartition test on the resource graph
        /// (edges inside I removed) instead of the graph as given.
        #[arg(long)]
        resource_graph: bool,
    },
}

#[derive(Subcommand)]
enum Lhz {
    /// All-pairs layout on n data qubits.
    Build {
        #[arg(long)]
        n: usize,
    },
    /// Bipartite graph induced by a layout.
    Graph {
        #[arg(long)]
        layout: PathBuf,
        #[arg(long, value_enum, default_value_t = GraphFormat::Json)]
        format: GraphFormat,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum GraphFormat {
    Json,
    Dot,
}

#[derive(Subcommand)]
enum Stab {
    /// Parity code equals the graph code with Hadamards on the parity qubits.
    CheckProp1 {
        #[arg(long)]
        layout: PathBuf,
    },
}

#[derive(Subcommand)]
enum Sim {
    Parity {
        #[arg(long)]
        program: PathBuf,
        #[command(flatten)]
        branches: BranchArgs,
        /// Largest allowed distance between branch outputs.
        #[arg(long, default_value_t = 1e-12)]
        tol: f64,
    },
    Mbqc {
        #[arg(long)]
        program: PathBuf,
        #[command(flatten)]
        branches: BranchArgs,
        #[arg(long, default_value_t = 1e-12)]
        tol: f64,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum BranchMode {
    All,
    Sample,
}

#[derive(clap::Args)]
struct BranchArgs {
    /// Enumerate every outcome branch or Born-sample some.
    #[arg(long, value_enum, default_value_t = BranchMode::Sample)]
    branches: BranchMode,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Number of sampled runs.
    #[arg(long, default_value_t = 64)]
    samples: usize,
}

impl BranchArgs {
    fn mode(&self) -> Branches {
        match self.branches {
            BranchMode::All => Branches::All,
            BranchMode::Sample => Branches::Sample { count: self.samples, seed: self.seed },
        }
    }
}

#[derive(Subcommand)]
enum Gflow {
    /// Check a flow witness against the five conditions.
    Verify {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        flow: PathBuf,
    },
    /// Exhaustive search for a flow with every measurement in the YZ plane.
    Search {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long, default_value_t = DEFAULT_SEARCH_CAP)]
        cap: usize,
    },
}

/// Failure that maps to exit code 2.
struct UsageError(String);

impl<E: std::fmt::Display> From<E> for UsageError {
    fn from(e: E) -> Self {
        UsageError(e.to_string())
    }
}

type Outcome = Result<bool, UsageError>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(cli.workers).build_global() {
        eprintln!("error: worker pool: {e}");
        return ExitCode::from(2);
    }
    match run(cli.command) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(UsageError(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn run(command: Command) -> Outcome {
    match command {
        Command::Lhz(Lhz::Build { n }) => {
            let layout = ParityLayout::all_pairs(n)?;
            eprintln!(
                "n = {n}: {} data + {} parity = {} qubits",
                n,
                layout.parity_qubits().len(),
                layout.total_qubits()
            );
            output::emit(&layout)?;
            Ok(true)
        }
        Command::Lhz(Lhz::Graph { layout, format }) => {
            let g = read_json::<ParityLayout>(&layout)?.induced_graph();
            eprintln!("{} vertices, {} edges", g.vertex_count(), g.edge_count());
            match format {
                GraphFormat::Json => output::emit(&g)?,
                GraphFormat::Dot => print!("{}", g.to_dot()),
            }
            Ok(true)
        }
        Command::Stab(Stab::CheckProp1 { layout }) => {
            let layout = read_json::<ParityLayout>(&layout)?;
            let parity = parity_generators(&layout);
            let parity_qubits = layout.parity_labels().into_iter().collect();
            let graph = graph_generators(&layout.induced_graph()).hadamard_conjugate(&parity_qubits)?;
            let equal = groups_equal(&parity, &graph)?;
            let constraints = layout.validate_constraints();
            eprintln!(
                "{} generators; groups equal: {equal}; constraints realise parity sets: {}",
                parity.len(),
                constraints.valid
            );
            output::emit(&json!({
                "equal": equal,
                "parity_generators": parity.rendered(),
                "conjugated_graph_generators": graph.rendered(),
                "hadamard_qubits": layout.parity_labels(),
                "constraints": constraints,
            }))?;
            Ok(equal)
        }
        Command::Sim(Sim::Parity { program, branches, tol }) => {
            let p: ParityProgram = match read_program(&program)? {
                AnyProgram::Parity(p) => p,
                AnyProgram::Mbqc(_) => {
                    return Err(UsageError("expected a parity program, found an MBQC program".into()))
                }
            };
            let summary = run_branches(p.measurement_count()?, branches.mode(), |o| p.run(o))?;
            report_branches("parity", summary, tol)
        }
        Command::Sim(Sim::Mbqc { program, branches, tol }) => {
            let p: MbqcProgram = match read_program(&program)? {
                AnyProgram::Parity(p) => p.to_mbqc()?,
                AnyProgram::Mbqc(p) => p,
            };
            let summary = run_branches(p.measurement_count()?, branches.mode(), |o| p.run(o))?;
            report_branches("mbqc", summary, tol)
        }
        Command::Compare { program, tol, branches } => {
            let p = match read_program(&program)? {
                AnyProgram::Parity(p) => p,
                AnyProgram::Mbqc(_) => return Err(UsageError("compare needs a parity program".into())),
            };
            let c = compare(&p, branches.mode(), tol)?;
            eprintln!(
                "parity: {} branches, mbqc: {} branches, distance {:.3e} (tol {tol:e}): {}",
                c.parity.branches,
                c.mbqc.branches,
                c.distance,
                if c.agree { "agree" } else { "DISAGREE" }
            );
            output::emit(&c)?;
            Ok(c.agree)
        }
        Command::Gflow(Gflow::Verify { graph, flow }) => {
            let g = read_json::<Graph>(&graph)?;
            let (flow, planes) = read_json::<FlowJson>(&flow)?.into_flow(&g);
            let verdict = verify_gflow(&g, &planes, &flow)?;
            match &verdict.violation {
                None => eprintln!("valid flow"),
                Some(v) => eprintln!("invalid: {v}"),
            }
            output::emit(&verdict)?;
            Ok(verdict.valid)
        }
        Command::Gflow(Gflow::Search { graph, cap }) => {
            let g = read_json::<Graph>(&graph)?;
            let found = search_gflow_yz_with_cap(&g, cap)?;
            let inputs = g.inputs();
            let planes = paritymbqc::gflow::PlaneAssignment::all_yz(&g);
            eprintln!("{}", if found.is_some() { "flow found" } else { "no flow" });
            output::emit(&json!({
                "found": found.is_some(),
                "flow": found.map(|f| f.to_json(&planes)),
                "bipartite": g.bipartition_check(&inputs)?,
                "resource_bipartite": g.resource_graph().bipartition_check(&inputs)?,
            }))?;
            Ok(true)
        }
        Command::Sweep { max_n, resource_graph } => {
            let r = theorem2_sweep(max_n)?;
            let t = &r.total;
            eprintln!(
                "{} graphs, {} instances, {} flows; {} mismatches with the bipartition test, {} on the resource graph",
                t.graphs, t.instances, t.flows_found, t.literal_discrepancies, t.resource_discrepancies
            );
            let passed = if resource_graph { r.passed_on_resource_graph() } else { r.passed() };
            output::emit(&json!({
                "passed": passed,
                "criterion": if resource_graph { "resource_graph" } else { "graph" },
                "discrepancies_explained_by_input_edges": r.discrepancies_explained(),
                "report": r,
            }))?;
            Ok(passed)
        }
    }
}

fn report_branches(engine: &str, s: paritymbqc::program::BranchSummary, tol: f64) -> Outcome {
    let deterministic = s.max_distance < tol;
    eprintln!(
        "{engine}: {} measurements, {} branches, max branch distance {:.3e}",
        s.measurements, s.branches, s.max_distance
    );
    output::emit(&json!({ "deterministic": deterministic, "tolerance": tol, "summary": s }))?;
    Ok(deterministic)
}

fn read(path: &Path) -> Result<String, UsageError> {
    std::fs::read_to_string(path).map_err(|e| UsageError(format!("{}: {e}", path.display())))
}

fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T, UsageError> {
    serde_json::from_str(&read(path)?).map_err(|e| UsageError(format!("{}: {e}", path.display())))
}

fn read_program(path: &Path) -> Result<AnyProgram, UsageError> {
    AnyProgram::from_json(&read(path)?).map_err(|e| UsageError(format!("{}: {e}", path.display())))
}
