use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};

use monoflow::report::{render_json, render_table, run_analysis, RunOptions};

/// Batch dataflow analysis over SimpleHal programs.
#[derive(Parser)]
#[command(name = "monoflow", version, about)]
struct Cli {
    /// Analysis to run
    #[arg(long, value_enum)]
    analysis: AnalysisName,

    /// Maximum call-string depth (k)
    #[arg(long, default_value_t = 16, value_parser = clap::value_parser!(u64).range(1..))]
    context_depth: u64,

    /// Output format
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,

    /// Include the tagged flow set in the output
    #[arg(long)]
    dump_flow: bool,

    /// Emit the optional normal edge from each call point to its return point
    #[arg(long)]
    call_to_return_edge: bool,

    /// Program file (UTF-8, procedures before the main command)
    file: PathBuf,
}

#[derive(Clone, Copy, ValueEnum)]
enum AnalysisName {
    /// Reaching definitions (forward)
    Rd,
    /// Live variables (backward)
    Lv,
    /// Constant propagation (forward, context-sensitive)
    Cp,
}

impl AnalysisName {
    fn as_str(self) -> &'static str {
        match self {
            AnalysisName::Rd => "rd",
            AnalysisName::Lv => "lv",
            AnalysisName::Cp => "cp",
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Table,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let source = match fs::read_to_string(&cli.file) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("monoflow: cannot read {}: {e}", cli.file.display());
            return ExitCode::from(1);
        }
    };
    let opts = RunOptions {
        analysis: cli.analysis.as_str().to_string(),
        context_depth: cli.context_depth as usize,
        dump_flow: cli.dump_flow,
        call_to_return_edge: cli.call_to_return_edge,
    };
    match run_analysis(&source, &opts) {
        Ok(doc) => {
            match cli.format {
                Format::Json => println!("{}", render_json(&doc)),
                Format::Table => print!("{}", render_table(&doc)),
            }
            ExitCode::SUCCESS
        }
        Err(err) => {
            eprintln!("monoflow: {err}");
            ExitCode::from(err.exit_code())
        }
    }
}
