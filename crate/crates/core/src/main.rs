use std::path::PathBuf;
use std::process::ExitCode;

use clap::{ArgAction, Parser, Subcommand};
use num_rational::BigRational;
use orbidisk::cli::{self, CliError, Format, Outcome};
use orbidisk::stacky::DiskClassKind;

#[derive(Parser)]
#[command(name = "orbidisk", version, about = "Orbi-disk invariants of toric orbifolds")]
struct Args {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check the fan, Gorenstein and semi-Fano conditions, and the box census.
    Validate { file: PathBuf },
    /// List box elements with carriers and ages.
    Box { file: PathBuf },
    /// Show the Calabi-Yau suborbifold of a basic class.
    Suborbifold {
        file: PathBuf,
        #[arg(long, value_parser = cli::parse_class)]
        class: DiskClassKind,
        #[arg(long, value_parser = parse_facet)]
        facet: Option<FacetArg>,
    },
    /// Disk invariants of a basic class.
    Invariants {
        file: PathBuf,
        #[arg(long, value_parser = cli::parse_class)]
        class: DiskClassKind,
        #[arg(long, value_parser = parse_facet)]
        facet: Option<FacetArg>,
        #[arg(long, value_parser = cli::parse_rational, default_value = "6")]
        order: BigRational,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// The disk potential W.
    Potential {
        file: PathBuf,
        #[arg(long)]
        cone: Option<usize>,
        #[arg(long, value_parser = cli::parse_rational, default_value = "4")]
        order: BigRational,
        #[arg(long, action = ArgAction::Set, default_value_t = false)]
        parallel: bool,
        #[arg(long, value_enum, default_value = "markdown")]
        format: Format,
    },
    /// Compare the P^2/Z_3 table from the pipeline, the closed form and the published values.
    VerifyP2z3 {
        #[arg(long, default_value_t = 6)]
        amax: u32,
        #[arg(long, default_value_t = 6)]
        bmax: u32,
    },
}

/// Comma-separated ray indices of a facet.
#[derive(Clone, Debug)]
struct FacetArg(Vec<usize>);

fn parse_facet(s: &str) -> Result<FacetArg, String> {
    cli::parse_int_list(s).map(FacetArg)
}

fn read(path: &PathBuf) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))
}

fn run(args: Args) -> Result<Outcome, CliError> {
    match args.command {
        Command::Validate { file } => cli::cmd_validate(&read(&file)?),
        Command::Box { file } => cli::cmd_box(&read(&file)?),
        Command::Suborbifold { file, class, facet } => cli::cmd_suborbifold(&read(&file)?, &class, facet.as_ref().map(|f| f.0.as_slice())),
        Command::Invariants {
            file,
            class,
            facet,
            order,
            format,
        } => cli::cmd_invariants(&read(&file)?, &class, facet.as_ref().map(|f| f.0.as_slice()), &order, format),
        Command::Potential {
            file,
            cone,
            order,
            parallel,
            format,
        } => cli::cmd_potential(&read(&file)?, cone, &order, parallel, format),
        Command::VerifyP2z3 { amax, bmax } => cli::cmd_verify_p2z3(amax, bmax),
    }
}

fn main() -> ExitCode {
    let args = match Args::try_parse() {
        Ok(a) => a,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(args) {
        Ok(out) => {
            print!("{}", out.text);
            ExitCode::from(out.code as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
