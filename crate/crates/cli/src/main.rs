//! `ruliad`: build and analyze rulial multiway graphs of simple Turing
//! machines, the Turing machine group, causal graphs, deterministic
//! reachability, and the elementary CA analog.

mod cache;
mod commands;
mod verify;

use clap::{Parser, Subcommand, ValueEnum};
use ruliad_core::Error as CoreError;
use std::process::ExitCode;

/// Exit code for node/rule-step cap violations, distinct from usage
/// errors (2, from clap) and check failures (1).
pub const EXIT_CAP: u8 = 3;

#[derive(Parser)]
#[command(name = "ruliad", version, about)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Cache directory (also read from RULIAD_CACHE_DIR); caching is off
    /// when neither is set.
    #[arg(long, global = true)]
    pub cache_dir: Option<std::path::PathBuf>,

    /// Worker threads for graph expansion.
    #[arg(long, global = true, default_value_t = 1)]
    pub threads: usize,

    /// Refuse builds whose node count would exceed this cap.
    #[arg(long, global = true, default_value_t = 5_000_000)]
    pub node_cap: usize,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Dot,
    Graphml,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TapeArg {
    Unbounded,
    Cyclic,
    Bounded,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Directed,
    Undirected,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SideArg {
    Left,
    Right,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum GenArg {
    Standard,
    Minimal,
}

#[derive(Subcommand)]
pub enum Command {
    /// Build a rulial multiway graph and export it.
    Build {
        #[arg(long, default_value_t = 2)]
        s: u8,
        #[arg(long, default_value_t = 2)]
        k: u8,
        /// Head displacements, comma-separated (e.g. "-1,1" or "-1,0,1").
        #[arg(long, default_value = "-1,1", allow_hyphen_values = true)]
        moves: String,
        #[arg(long, value_enum, default_value_t = TapeArg::Unbounded)]
        tape: TapeArg,
        /// Tape length for finite models.
        #[arg(long)]
        n: Option<u32>,
        /// Layers to build.
        #[arg(long, default_value_t = 3)]
        t: u32,
        /// Build until no layer adds new configurations (finite tapes).
        #[arg(long)]
        saturate: bool,
        /// Collapse parallel edges in the export.
        #[arg(long)]
        dedup: bool,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        /// Output path (stdout when omitted).
        #[arg(long)]
        out: Option<std::path::PathBuf>,
        /// Build twice (1 vs N workers) and fail unless exports are
        /// byte-identical.
        #[arg(long)]
        check_determinism: bool,
    },
    /// Geodesic-ball growth sequence as CSV.
    Growth {
        #[arg(long, default_value_t = 2)]
        s: u8,
        #[arg(long, default_value_t = 2)]
        k: u8,
        #[arg(long, default_value = "-1,1", allow_hyphen_values = true)]
        moves: String,
        #[arg(long, value_enum, default_value_t = TapeArg::Unbounded)]
        tape: TapeArg,
        #[arg(long)]
        n: Option<u32>,
        #[arg(long, default_value_t = 8)]
        t: u32,
        #[arg(long, value_enum, default_value_t = ModeArg::Directed)]
        mode: ModeArg,
        #[arg(long)]
        out: Option<std::path::PathBuf>,
    },
    /// Turing machine group: tables, relations, Cayley graphs, structure.
    Group {
        #[arg(long, default_value_t = 3)]
        n: u32,
        #[arg(long, default_value_t = 2)]
        k: u8,
        /// Run a named check suite: relations | axioms | identify.
        #[arg(long)]
        check: Option<String>,
        /// Export the Cayley graph for a generator set.
        #[arg(long, value_enum)]
        cayley: Option<GenArg>,
        /// Generator action side for Cayley graphs.
        #[arg(long, value_enum, default_value_t = SideArg::Left)]
        side: SideArg,
        /// Export the multiplication table as CSV.
        #[arg(long)]
        table: bool,
        /// Check isomorphism against the cyclic-tape rulial graph.
        #[arg(long)]
        isomorphic: bool,
        /// Compare the undirected minimal-generator graph with CCC_n.
        #[arg(long)]
        ccc: bool,
        /// Print the permutation representation and its closure order.
        #[arg(long)]
        perm: bool,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        #[arg(long)]
        out: Option<std::path::PathBuf>,
    },
    /// Causal graphs: deterministic, multiway, and individual extraction.
    Causal {
        #[arg(long, default_value_t = 2)]
        s: u8,
        #[arg(long, default_value_t = 2)]
        k: u8,
        #[arg(long, default_value_t = 4)]
        t: u32,
        /// Deterministic rule id; exports its head/cell dependency DAG.
        #[arg(long)]
        rule: Option<u64>,
        /// Build the rulial multiway causal graph instead.
        #[arg(long)]
        multiway: bool,
        /// With --multiway: keep state nodes (combined rendering).
        #[arg(long)]
        combined: bool,
        /// With --multiway: extract the individual causal graph of a rule.
        #[arg(long)]
        individual: Option<u64>,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        #[arg(long)]
        out: Option<std::path::PathBuf>,
    },
    /// Deterministic-machine reachability: profile, overlay, paths.
    Det {
        #[arg(long, default_value_t = 2)]
        s: u8,
        #[arg(long, default_value_t = 2)]
        k: u8,
        #[arg(long, default_value_t = 8)]
        t: u32,
        /// Export the rulial graph with det_reachable annotations.
        #[arg(long)]
        overlay: bool,
        /// Report one rule's path and geodesic slack.
        #[arg(long)]
        path: Option<u64>,
        /// Print undirected geodesic layer sizes of the union graph.
        #[arg(long)]
        layers: bool,
        #[arg(long, default_value_t = 10_000_000)]
        max_rule_steps: u64,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        #[arg(long)]
        out: Option<std::path::PathBuf>,
    },
    /// Elementary CA reach graph and new-configuration counts.
    Ca {
        /// Rule subset: "all", "even", or comma-separated rule numbers.
        #[arg(long, default_value = "all")]
        rules: String,
        #[arg(long, default_value_t = 20)]
        t: u32,
        /// Print geodesic layer sizes instead of per-step counts.
        #[arg(long)]
        layers: bool,
        /// Export the reach graph.
        #[arg(long)]
        graph: bool,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        #[arg(long)]
        out: Option<std::path::PathBuf>,
    },
    /// Run the full reference-table suite; exit 0 iff every check passes.
    Verify,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::dispatch(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            for cause in err.chain() {
                if let Some(core) = cause.downcast_ref::<CoreError>() {
                    if matches!(
                        core,
                        CoreError::NodeCapExceeded { .. } | CoreError::RuleStepCapExceeded { .. }
                    ) {
                        return ExitCode::from(EXIT_CAP);
                    }
                }
            }
            ExitCode::FAILURE
        }
    }
}
