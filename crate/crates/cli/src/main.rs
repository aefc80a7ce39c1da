use std::process::ExitCode;

use clap::{Parser, Subcommand};
use subm::commands::{cmd_eval, cmd_pathology, cmd_select, Options, SelectArgs};
use subm::demo::cmd_demo;
use subm::{load_spec_file, parse_set, CliError, Report, DEFAULT_BUDGET};

#[derive(Parser)]
#[command(name = "subm", version, about = "Exact submeasures on ℕ: evaluation, pathology and selectors")]
struct Cli {
    /// Emit the report as JSON.
    #[arg(long, global = true)]
    json: bool,
    /// Add decimal approximations next to exact values.
    #[arg(long, global = true)]
    approx: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a spec on a finite set.
    Eval {
        #[arg(long)]
        spec: String,
        /// Comma-separated elements; empty for ∅.
        #[arg(long, default_value = "", allow_hyphen_values = true)]
        set: String,
    },
    /// Pathology degree over all sets of bounded size in {0..universe-1}.
    Pathology {
        #[arg(long)]
        spec: String,
        #[arg(long)]
        universe: Option<u64>,
        #[arg(long)]
        max_size: Option<usize>,
    },
    /// Run a selector along a stream and print its certificate.
    Select {
        #[arg(long)]
        selector: String,
        #[arg(long)]
        spec: String,
        /// naturals, from:N, squares, set:a,b,c, diagonal, delta, block:N, low-blocks:N, subblocks-a:N, subblocks-b:N
        #[arg(long, default_value = "naturals")]
        stream: String,
        #[arg(long, default_value_t = 10)]
        length: usize,
        #[arg(long, env = "SUBM_BUDGET", default_value_t = DEFAULT_BUDGET)]
        budget: u64,
        /// Lower bound on the norms, for `bp` (default 1).
        #[arg(long)]
        alpha: Option<String>,
        /// Level threshold for `schreier`.
        #[arg(long, default_value_t = 0)]
        p: u32,
        /// Accept selections backed by a budgeted scan only.
        #[arg(long)]
        heuristic: bool,
    },
    /// Recompute every numeric claim of the worked examples.
    Demo {
        /// Table spec on 3 points replacing the published φ₀.
        #[arg(long)]
        phi0_table: Option<String>,
    },
}

fn run(cli: &Cli) -> Result<Report, CliError> {
    match &cli.command {
        Command::Eval { spec, set } => cmd_eval(&load_spec_file(spec)?, &parse_set(set)?),
        Command::Pathology { spec, universe, max_size } => cmd_pathology(&load_spec_file(spec)?, *universe, *max_size),
        Command::Select { selector, spec, stream, length, budget, alpha, p, heuristic } => {
            let args = SelectArgs { selector: selector.clone(), stream: stream.clone(), length: *length, budget: *budget, alpha: alpha.clone(), p: *p, heuristic: *heuristic };
            cmd_select(&load_spec_file(spec)?, &args)
        }
        Command::Demo { phi0_table } => {
            let spec = phi0_table.as_deref().map(subm::specfile::load_spec_file_unchecked).transpose()?;
            cmd_demo(spec.as_ref())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let opts = Options { json: cli.json, approx: cli.approx };
    match run(&cli) {
        Ok(report) => {
            print!("{}", report.render(opts.json, opts.approx));
            ExitCode::from(report.exit_code())
        }
        Err(e) => {
            eprintln!("subm: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
