use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use specrig::io::{parse_problem, render_text, run_analysis};

#[derive(Parser)]
#[command(name = "specrig", version, about = "Local and global invariants of A dz on the projective line")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Analyze a problem file and print the report.
    Analyze {
        file: PathBuf,
        /// Print the table instead of the JSON document.
        #[arg(long)]
        text: bool,
        #[arg(long)]
        assume_irreducible_curve: bool,
        #[arg(long)]
        assert_irreducible_connection: bool,
        /// Truncation order of the local expansions.
        #[arg(long, value_name = "N")]
        truncation: Option<usize>,
        /// Compare Puiseux cells with the splitting reduction at every pole.
        #[arg(long)]
        check_reduction: bool,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let Command::Analyze {
        file,
        text,
        assume_irreducible_curve,
        assert_irreducible_connection,
        truncation,
        check_reduction,
    } = cli.command;
    let src = match std::fs::read_to_string(&file) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("specrig: cannot read {}: {e}", file.display());
            return ExitCode::from(2);
        }
    };
    let mut spec = match parse_problem(&src) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("specrig: {}: {e}", file.display());
            return ExitCode::from(2);
        }
    };
    let f = &mut spec.flags;
    f.text |= text;
    f.assume_irreducible_curve |= assume_irreducible_curve;
    f.assert_irreducible_connection |= assert_irreducible_connection;
    f.check_reduction |= check_reduction;
    if truncation.is_some() {
        f.truncation = truncation;
    }
    let doc = run_analysis(&spec);
    if spec.flags.text {
        print!("{}", render_text(&doc));
    } else {
        print!("{}", doc.to_json());
    }
    ExitCode::from(doc.exit_code as u8)
}
