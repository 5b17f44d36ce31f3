// SPDX-License-Identifier: Apache-2.0

//! Argument parsing and dispatch. Exit status is 0 on success, 1 when a
//! verification fails and 2 on usage, format or input errors.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use removal_lab_core::{Limits, Rational};

use crate::commands::{self, HardKind, ModeArg, Outcome, RunConfig};
use crate::format::{parse_rational, GraphFormat};
use crate::{LabError, Result};

#[derive(Debug, Parser)]
#[command(
    name = "removal-lab",
    version,
    about = "Induced-freeness testing toolkit"
)]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct Global {
    /// Seed for every randomized step.
    #[arg(long, global = true, env = "REMOVAL_LAB_SEED", default_value_t = 0)]
    seed: u64,
    /// Worker threads for tester trials; 0 uses every core.
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,
    /// Output format for generated graph files.
    #[arg(long, global = true, value_enum, default_value_t = GraphFormat::Graph6)]
    format: GraphFormat,
    /// Output path. Generators write the graph here and the certificate to
    /// `<path>.cert.json`; `pack` and `gen behrend` write the certificate here.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(flatten)]
    budgets: Budgets,
}

fn positive_u64(s: &str) -> std::result::Result<u64, String> {
    match s.parse::<u64>() {
        Ok(0) => Err("budgets must be positive".into()),
        Ok(v) => Ok(v),
        Err(e) => Err(e.to_string()),
    }
}

fn positive_usize(s: &str) -> std::result::Result<usize, String> {
    positive_u64(s).map(|v| v as usize)
}

#[derive(Debug, Args)]
struct Budgets {
    /// Search-tree nodes per backtracking run.
    #[arg(long, global = true, value_parser = positive_u64)]
    budget_nodes: Option<u64>,
    /// Completions enumerated when verifying a bipartite obstruction.
    #[arg(long, global = true, value_parser = positive_u64)]
    budget_completions: Option<u64>,
    /// Largest pattern order for copy counting.
    #[arg(long, global = true, value_parser = positive_usize)]
    budget_pattern: Option<usize>,
    /// Largest source order for homomorphism search.
    #[arg(long, global = true, value_parser = positive_usize)]
    budget_hom_source: Option<usize>,
    /// Largest target order for homomorphism search.
    #[arg(long, global = true, value_parser = positive_usize)]
    budget_hom_target: Option<usize>,
    /// Largest graph order for core computation.
    #[arg(long, global = true, value_parser = positive_usize)]
    budget_core: Option<usize>,
    /// Largest graph order for exact edit distance.
    #[arg(long, global = true, value_parser = positive_usize)]
    budget_edit: Option<usize>,
    /// Largest host order for VC dimension.
    #[arg(long, global = true, value_parser = positive_usize)]
    budget_vc: Option<usize>,
    /// Tuples examined by an exhaustive convex-freeness check.
    #[arg(long, global = true, value_parser = positive_u64)]
    budget_convex: Option<u64>,
    /// Largest generated layered clique graph.
    #[arg(long, global = true, value_parser = positive_usize)]
    budget_construct: Option<usize>,
    /// Largest generated blowup instance.
    #[arg(long, global = true, value_parser = positive_usize)]
    budget_instance: Option<usize>,
}

impl Budgets {
    fn limits(&self) -> Limits {
        let d = Limits::default();
        Limits {
            backtrack_nodes: self.budget_nodes.unwrap_or(d.backtrack_nodes),
            completions: self.budget_completions.unwrap_or(d.completions),
            pattern_vertices: self.budget_pattern.unwrap_or(d.pattern_vertices),
            vc_vertices: self.budget_vc.unwrap_or(d.vc_vertices),
            hom_source: self.budget_hom_source.unwrap_or(d.hom_source),
            hom_target: self.budget_hom_target.unwrap_or(d.hom_target),
            core_vertices: self.budget_core.unwrap_or(d.core_vertices),
            edit_vertices: self.budget_edit.unwrap_or(d.edit_vertices),
            convex_work: self.budget_convex.unwrap_or(d.convex_work),
            construct_vertices: self.budget_construct.unwrap_or(d.construct_vertices),
            instance_vertices: self.budget_instance.unwrap_or(d.instance_vertices),
        }
    }
}

fn rational(s: &str) -> std::result::Result<Rational, String> {
    parse_rational(s).map_err(|e| e.to_string())
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Generate a set, a layered clique graph or a hard instance.
    #[command(subcommand)]
    Gen(Gen),
    /// Report which recognizer conditions a family meets.
    Classify {
        #[arg(long)]
        family: PathBuf,
        /// Longest materialized cycle of a `cycles` line.
        #[arg(long, default_value_t = 64)]
        cap: usize,
    },
    /// Count copies of a pattern.
    Count {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        pattern: PathBuf,
        #[arg(long, value_enum, default_value_t = ModeArg::Induced)]
        mode: ModeArg,
    },
    /// Greedy pair-disjoint packing of a pattern.
    Pack {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        pattern: PathBuf,
        #[arg(long, value_enum, default_value_t = ModeArg::Induced)]
        mode: ModeArg,
    },
    /// Core of a graph with its retraction.
    Core {
        #[arg(long)]
        graph: PathBuf,
    },
    /// Core classes of a family, their order and the chosen maximal core.
    Kf {
        #[arg(long)]
        family: PathBuf,
        #[arg(long, default_value_t = 64)]
        cap: usize,
    },
    /// Search for a homogeneous block partition.
    Partition {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long, value_parser = rational)]
        delta: Rational,
        #[arg(long, default_value_t = 8)]
        max_parts: usize,
    },
    /// Run the sampling tester.
    Test {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        family: PathBuf,
        #[arg(long)]
        q: usize,
        #[arg(long, default_value_t = 1000)]
        trials: u64,
    },
    /// Detection curves over a grid of sample sizes.
    Curve {
        #[arg(long)]
        instances: PathBuf,
        #[arg(long)]
        family: PathBuf,
        #[arg(long, value_delimiter = ',', required = true)]
        q_grid: Vec<usize>,
        #[arg(long, default_value_t = 1000)]
        trials: u64,
    },
    /// Re-check a certificate sidecar.
    Verify {
        #[arg(long)]
        graph: Option<PathBuf>,
        #[arg(long)]
        cert: PathBuf,
    },
}

#[derive(Debug, Subcommand)]
enum Gen {
    /// Set without nontrivial solutions of weighted-average equations.
    Behrend {
        #[arg(long)]
        m: u64,
        #[arg(long)]
        k: u64,
    },
    /// Layered graph of edge-disjoint cliques.
    Rs {
        #[arg(long)]
        h: usize,
        #[arg(long, value_parser = rational)]
        delta: Rational,
        /// Fixed scale instead of the search.
        #[arg(long)]
        m: Option<usize>,
        /// Largest scale the search may try.
        #[arg(long)]
        m_max: Option<usize>,
        /// Also enumerate every layered cycle.
        #[arg(long)]
        check_cycles: bool,
    },
    /// Far-but-hard blowup instance.
    Hard {
        #[arg(long, value_enum)]
        kind: HardKind,
        #[arg(long)]
        n: usize,
        #[arg(long, value_parser = rational)]
        eps: Option<Rational>,
        /// Family file with the single graph for `--kind homomorphic`.
        #[arg(long)]
        forbidden: Option<PathBuf>,
        /// Cycle length for `--kind oddcycle`.
        #[arg(long)]
        k: Option<usize>,
    },
}

fn dispatch(cli: Cli) -> Result<Outcome> {
    let g = &cli.global;
    let cfg = RunConfig {
        seed: g.seed,
        threads: g.threads,
        limits: g.budgets.limits(),
        format: g.format,
        out: g.out.clone(),
    };
    match cli.command {
        Command::Gen(Gen::Behrend { m, k }) => commands::gen_behrend(&cfg, m, k),
        Command::Gen(Gen::Rs {
            h,
            delta,
            m,
            m_max,
            check_cycles,
        }) => commands::gen_rs(&cfg, h, delta, m, m_max, check_cycles),
        Command::Gen(Gen::Hard {
            kind,
            n,
            eps,
            forbidden,
            k,
        }) => commands::gen_hard(&cfg, kind, n, eps, forbidden.as_deref(), k),
        Command::Classify { family, cap } => commands::classify(&cfg, &family, cap),
        Command::Count {
            graph,
            pattern,
            mode,
        } => commands::count(&cfg, &graph, &pattern, mode),
        Command::Pack {
            graph,
            pattern,
            mode,
        } => commands::pack(&cfg, &graph, &pattern, mode),
        Command::Core { graph } => commands::core_cmd(&cfg, &graph),
        Command::Kf { family, cap } => commands::kf(&cfg, &family, cap),
        Command::Partition {
            graph,
            delta,
            max_parts,
        } => commands::partition(&cfg, &graph, delta, max_parts),
        Command::Test {
            graph,
            family,
            q,
            trials,
        } => commands::test(&cfg, &graph, &family, q, trials),
        Command::Curve {
            instances,
            family,
            q_grid,
            trials,
        } => commands::curve(&cfg, &instances, &family, &q_grid, trials),
        Command::Verify { graph, cert } => commands::verify(&cfg, graph.as_deref(), &cert),
    }
}

/// Parses `args` (program name first), runs the command and returns the
/// exit status.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = e.exit_code();
            let text = e.render().to_string();
            let _ = if code == 0 {
                stdout.write_all(text.as_bytes())
            } else {
                stderr.write_all(text.as_bytes())
            };
            return if code == 0 { 0 } else { 2 };
        }
    };
    match dispatch(cli) {
        Ok(out) => {
            let _ = stdout.write_all(out.report.as_bytes());
            match out.failure {
                None => 0,
                Some(f) => {
                    let e = LabError::Verification(f);
                    let _ = writeln!(stderr, "error: {e}");
                    e.exit_code()
                }
            }
        }
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
    }
}
