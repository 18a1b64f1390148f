use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use clap::{Args, Parser, Subcommand};

use graceful_core::construct::{ConstructionSpec, Family};
use graceful_core::corpus::{default_grid, generate};
use graceful_core::descriptor::{BaseDescriptor, GraphDescriptor};
use graceful_core::document::LabeledGraphDocument;
use graceful_core::dot::export_dot;
use graceful_core::labelers::{label, LabelerError};
use graceful_core::oracle::{find_alpha, find_graceful, SearchBudget};

const EXIT_FAIL: u8 = 1;
const EXIT_USAGE: u8 = 2;

/// Graceful labelings of compound graphs: build, verify, search, export.
#[derive(Parser)]
#[command(name = "graceful", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a compound graph, label it and print the verified document.
    BuildLabel {
        /// PATH_UNION, OPEN_STAR, ONE_POINT_UNION_PATH, CYCLE_OF or STAR_OF.
        #[arg(long)]
        family: String,
        /// path:N, cycle:N, kmn:M,N, grid:M,N, g6:CODE:LABELS:LOW or
        /// edges:ORDER:A-B,...:LABELS:LOW.
        #[arg(long)]
        base: String,
        #[arg(long)]
        t: Option<u32>,
        #[arg(long)]
        n: Option<u32>,
        /// Write the document here instead of standard output.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Re-verify a document from its raw vertex labels.
    Verify { document: PathBuf },
    /// Run the backtracking oracle on a small graph.
    Search {
        /// path:N, cycle:N, kmn:M,N, grid:M,N, g6:CODE or edges:ORDER:A-B,...
        graph: String,
        /// Search for an α-labeling instead.
        #[arg(long)]
        alpha: bool,
        #[command(flatten)]
        budget: BudgetArgs,
    },
    /// Generate and verify the standard instance grid.
    Corpus {
        #[arg(long, default_value = "corpus")]
        out: PathBuf,
    },
    /// Render a document as Graphviz DOT.
    ExportDot {
        document: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct BudgetArgs {
    #[arg(long, default_value_t = 10_000_000)]
    budget_nodes: u64,
    #[arg(long, default_value_t = 60.0)]
    budget_seconds: f64,
}

/// Exit code plus the message explaining it.
struct Failure(u8, String);

fn usage(e: impl ToString) -> Failure {
    Failure(EXIT_USAGE, e.to_string())
}

fn emit(text: &str, out: Option<&Path>) -> Result<(), Failure> {
    match out {
        Some(path) => fs::write(path, text).map_err(|e| usage(format!("{}: {e}", path.display()))),
        None => io::stdout().write_all(text.as_bytes()).map_err(usage),
    }
}

fn load(path: &Path) -> Result<LabeledGraphDocument, Failure> {
    let text = fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))?;
    LabeledGraphDocument::parse(&text).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn build_label(
    family: &str,
    base: &str,
    t: Option<u32>,
    n: Option<u32>,
    out: Option<&Path>,
) -> Result<u8, Failure> {
    let family: Family = family.parse().map_err(usage)?;
    let spec = ConstructionSpec { family, t, n };
    spec.validate().map_err(usage)?;
    let descriptor: BaseDescriptor = base.parse().map_err(usage)?;
    let resolved = descriptor.resolve().map_err(usage)?;
    let report = match label(&resolved, &spec) {
        Ok(report) => report,
        Err(LabelerError::Construction(e)) => return Err(usage(e)),
        Err(e) => return Err(Failure(EXIT_FAIL, e.to_string())),
    };
    let doc = LabeledGraphDocument::from_report(&report, descriptor);
    emit(&doc.to_string(), out)?;
    Ok(0)
}

fn verify(path: &Path) -> Result<u8, Failure> {
    let doc = load(path)?;
    let check = doc.check().map_err(|e| usage(format!("{}: {e}", path.display())))?;
    print!("{check}");
    Ok(if check.passed() { 0 } else { EXIT_FAIL })
}

fn search(graph: &str, alpha: bool, budget: &BudgetArgs) -> Result<u8, Failure> {
    if !(budget.budget_seconds.is_finite() && budget.budget_seconds >= 0.0) {
        return Err(usage("--budget-seconds must be a nonnegative number"));
    }
    let descriptor: GraphDescriptor = graph.parse().map_err(usage)?;
    let topology = descriptor.topology().map_err(usage)?;
    let g = topology.to_graph().map_err(usage)?;
    let budget = SearchBudget {
        max_nodes: budget.budget_nodes,
        time_limit: Duration::from_secs_f64(budget.budget_seconds),
    };
    let outcome = if alpha {
        find_alpha(&g, budget)
    } else {
        find_graceful(&g, budget)
    };
    println!("status {}", outcome.status);
    if let Some(labels) = &outcome.labeling {
        let values: Vec<String> = g
            .vertices()
            .iter()
            .map(|v| labels.get(v).map_or("?".into(), |x| x.to_string()))
            .collect();
        println!("labels {}", values.join(" "));
    }
    println!("nodes {}", outcome.nodes_expanded);
    Ok(0)
}

fn corpus(out: &Path) -> Result<u8, Failure> {
    let summary = generate(&default_grid(), out).map_err(|e| usage(format!("{}: {e}", out.display())))?;
    let failures: Vec<_> = summary.failures().collect();
    println!(
        "{} instances, {} failed; summary in {}",
        summary.rows.len(),
        failures.len(),
        out.join("summary.tsv").display()
    );
    for row in &failures {
        eprintln!(
            "FAIL {} over {}: {}",
            row.entry.spec,
            row.entry.base,
            row.error.as_deref().unwrap_or("")
        );
    }
    Ok(if failures.is_empty() { 0 } else { EXIT_FAIL })
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::BuildLabel {
            family,
            base,
            t,
            n,
            out,
        } => build_label(family, base, *t, *n, out.as_deref()),
        Command::Verify { document } => verify(document),
        Command::Search {
            graph,
            alpha,
            budget,
        } => search(graph, *alpha, budget),
        Command::Corpus { out } => corpus(out),
        Command::ExportDot { document, out } => {
            load(document).and_then(|doc| emit(&export_dot(&doc), out.as_deref()).map(|_| 0))
        }
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(Failure(code, message)) => {
            eprintln!("error: {message}");
            ExitCode::from(code)
        }
    }
}
