use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use tplog_cli::{run, run_interactive, Engine, RunConfig, EXIT_USAGE};

#[derive(Parser)]
#[command(name = "tp", version, about = "Tabled evaluation of logic programs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Load a program and answer a query.
    Run(RunArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum EngineArg {
    Tp,
    Sld,
    Bottomup,
}

#[derive(clap::Args)]
struct RunArgs {
    /// Program file.
    file: PathBuf,
    /// Query, e.g. "reach(a,X)".
    #[arg(short, long, required_unless_present = "interactive", default_value = "")]
    query: String,
    #[arg(long, value_enum, default_value = "tp")]
    engine: EngineArg,
    /// Maximum branch length for the sld engine.
    #[arg(long, default_value_t = 1000)]
    depth_bound: usize,
    /// Maximum number of resolution steps for the tp engine.
    #[arg(long, default_value_t = 10_000_000)]
    step_budget: u64,
    /// Print engine events to stderr.
    #[arg(long)]
    trace: bool,
    /// Print the answer tables after evaluation.
    #[arg(long)]
    dump_tables: bool,
    /// Only complete tables at iteration nodes.
    #[arg(long)]
    strict_alg2: bool,
    #[arg(long)]
    occurs_check: bool,
    /// Read queries from stdin; `;` asks for the next answer.
    #[arg(long)]
    interactive: bool,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE as u8 } else { 0 });
        }
    };
    let Command::Run(args) = cli.command;
    let config = RunConfig {
        program: args.file,
        query: args.query,
        engine: match args.engine {
            EngineArg::Tp => Engine::Tp,
            EngineArg::Sld => Engine::Sld,
            EngineArg::Bottomup => Engine::Bottomup,
        },
        depth_bound: args.depth_bound,
        step_budget: args.step_budget,
        trace: args.trace,
        dump_tables: args.dump_tables,
        strict_alg2: args.strict_alg2,
        occurs_check: args.occurs_check,
    };
    let (mut out, mut err) = (std::io::stdout().lock(), std::io::stderr().lock());
    let code = if args.interactive {
        run_interactive(&config, &mut std::io::stdin().lock(), &mut out, &mut err)
    } else {
        run(&config, &mut out, &mut err)
    };
    ExitCode::from(code as u8)
}
