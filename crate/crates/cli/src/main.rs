//! `edgerm` command-line front end.

mod commands;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use edgerm::code::DEFAULT_ENUMERATION_CAP;

use report::{RunReport, Runtime};

#[derive(Parser, Debug)]
#[command(
    name = "edgerm",
    version,
    about = "Exact verification of local edge removal for network codes"
)]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Global {
    /// Worker threads for enumeration (default: all cores).
    #[arg(long, global = true, env = "EDGERM_WORKERS")]
    workers: Option<usize>,
    /// Largest number of source tuples (or candidates) enumerated by one check.
    #[arg(long, global = true, env = "EDGERM_ENUM_CAP", default_value_t = DEFAULT_ENUMERATION_CAP as u64)]
    enum_cap: u64,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Add wall time and worker count to the report.
    #[arg(long, global = true)]
    timing: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Csv,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Check an instance file for structural problems.
    Validate { instance: PathBuf },
    /// Exact (eps, R, n)-feasibility of a code.
    Verify {
        instance: PathBuf,
        code: PathBuf,
        /// Error budget as p/q.
        #[arg(long, default_value = "0/1")]
        eps: String,
        /// Per-source rates: integers are bits per symbol, `#N` is an alphabet size.
        /// Defaults to the code's own source alphabets.
        #[arg(long)]
        rates: Option<String>,
    },
    /// Remove an edge using an auxiliary partition.
    RemoveEdge {
        instance: PathBuf,
        code: PathBuf,
        #[arg(long)]
        edge: String,
        /// `builtin:edge`, `builtin:thm2`, `builtin:cor3`, or a partition file.
        #[arg(long, default_value = "builtin:edge")]
        partition: String,
        #[arg(long, default_value = "0/1")]
        eps: String,
        /// Fiber to restrict to; found automatically when absent.
        #[arg(long)]
        y: Option<usize>,
        /// Group assignments tried by `builtin:thm2`.
        #[arg(long, default_value_t = 10_000)]
        budget: usize,
        /// Directory for the restricted instance and code.
        #[arg(long)]
        emit_dir: Option<PathBuf>,
    },
    /// Check whether an edge function is CWL for the given groups.
    CwlCheck {
        instance: PathBuf,
        code: PathBuf,
        #[arg(long)]
        edge: String,
        /// JSON file with `sources` and `edge` labeled groups.
        #[arg(long)]
        groups: PathBuf,
    },
    /// Remove a CWL edge.
    CwlRemove {
        instance: PathBuf,
        code: PathBuf,
        #[arg(long)]
        edge: String,
        /// Groups file; searched for when absent.
        #[arg(long)]
        groups: Option<PathBuf>,
        #[arg(long, default_value_t = 10_000)]
        budget: usize,
        #[arg(long, default_value = "0/1")]
        eps: String,
        #[arg(long)]
        emit_dir: Option<PathBuf>,
    },
    /// Remove an edge whose function is piecewise CWL on product pieces.
    PwlRemove {
        instance: PathBuf,
        code: PathBuf,
        #[arg(long)]
        edge: String,
        /// JSON list of pieces.
        #[arg(long)]
        pieces: PathBuf,
        #[arg(long)]
        emit_dir: Option<PathBuf>,
    },
    /// Search group structures and labelings that make an edge function CWL.
    CwlSearch {
        instance: PathBuf,
        code: PathBuf,
        #[arg(long)]
        edge: String,
        #[arg(long, default_value_t = 10_000)]
        budget: usize,
        #[arg(long, default_value = "0/1")]
        eps: String,
        #[arg(long)]
        rates: Option<String>,
    },
    /// Abelian edge removal for a group characterization.
    GroupRemove {
        characterization: PathBuf,
        #[arg(long)]
        edge: String,
        /// Comma-separated source subgroup names.
        #[arg(long, value_delimiter = ',', required = true)]
        sources: Vec<String>,
        #[arg(long)]
        emit_dir: Option<PathBuf>,
    },
    /// Zero-error decoder or error lower bound per terminal.
    GroupZeroError {
        characterization: PathBuf,
        /// `input:source` subgroup names; repeat for more terminals.
        #[arg(long = "terminal", required = true)]
        terminals: Vec<String>,
    },
    /// Bundled case studies.
    CaseStudy {
        #[arg(value_enum)]
        name: CaseStudy,
        #[arg(long, default_value_t = 2)]
        m: usize,
        #[arg(long, default_value_t = 2)]
        w: usize,
        /// Copy given the identity permutation; original assignment when absent.
        #[arg(long)]
        l: Option<usize>,
        #[arg(long, default_value_t = 1)]
        s: usize,
        #[arg(long, default_value_t = 1)]
        alpha: usize,
        /// Alphabet size for the decoding identities.
        #[arg(long, default_value_t = 4)]
        k: usize,
        /// Comma-separated values of t on 0..k.
        #[arg(long, value_delimiter = ',')]
        t: Option<Vec<usize>>,
        /// Search every t.
        #[arg(long)]
        search: bool,
        #[arg(long)]
        emit_dir: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum CaseStudy {
    Butterfly,
    N2,
    N3Injectivity,
    Dougherty,
}

/// Arguments echoed into the report: everything except flags that only
/// affect where or how fast the run happens.
fn echo(args: &[String]) -> Vec<String> {
    let mut out = Vec::new();
    let mut it = args.iter().skip(1);
    while let Some(a) = it.next() {
        match a.as_str() {
            "--timing" => {}
            "--workers" | "--out" => {
                it.next();
            }
            s if s.starts_with("--workers=") || s.starts_with("--out=") => {}
            _ => out.push(a.clone()),
        }
    }
    out
}

fn main() -> ExitCode {
    let args: Vec<String> = std::env::args().collect();
    let cli = match Cli::try_parse_from(&args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(&cli, echo(&args)) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: &Cli, command: Vec<String>) -> anyhow::Result<bool> {
    if let Some(n) = cli.global.workers {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()?;
    }
    let start = Instant::now();
    let outcome = commands::dispatch(&cli.command, cli.global.enum_cap as u128)?;
    let report = RunReport {
        command,
        inputs: outcome.inputs,
        verdict: outcome.verdict,
        result: outcome.result,
        certificates: outcome.certificates,
        runtime: cli.global.timing.then(|| Runtime {
            wall_time_us: start.elapsed().as_micros() as u64,
            workers: rayon::current_num_threads(),
        }),
    };
    let text = match cli.global.format {
        Format::Text => report::to_text(&report),
        Format::Csv => report::to_csv(&report.certificates)?,
    };
    match &cli.global.out {
        Some(p) => {
            std::fs::write(p, text).map_err(|e| anyhow::anyhow!("writing {}: {e}", p.display()))?
        }
        None => print!("{text}"),
    }
    Ok(report.verdict)
}
