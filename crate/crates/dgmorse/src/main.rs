use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use dgmorse::report::{
    cmd_duality, cmd_examples, cmd_homology, cmd_map_check, cmd_ss, cmd_validate, load_bundle,
    Format,
};

/// Exact-arithmetic Morse homology and cohomology with DG local coefficients.
///
/// Bundles are loaded from a file path or, failing that, from the built-in
/// example of the same name. Set DGMORSE_WORKERS to cap the worker count;
/// computations are exact and deterministic regardless of the cap.
#[derive(Parser)]
#[command(name = "dgmorse", version, disable_help_subcommand = true)]
struct Cli {
    /// Report format.
    #[arg(long, global = true, value_enum, default_value_t = FormatArg::Plain)]
    format: FormatArg,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Plain,
    Structured,
}

impl From<FormatArg> for Format {
    fn from(f: FormatArg) -> Format {
        match f {
            FormatArg::Plain => Format::Plain,
            FormatArg::Structured => Format::Structured,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Parse a bundle and run every structural and equational check.
    Validate { bundle: String },
    /// Homology of a bundle under one of its coefficient tags.
    Homology {
        bundle: String,
        #[arg(long)]
        coeff: String,
    },
    /// Spectral sequence of the canonical filtration for a field tag.
    Ss {
        bundle: String,
        #[arg(long)]
        coeff: String,
    },
    /// Verify a declared continuation or homotopy map.
    MapCheck {
        bundle: String,
        #[arg(long)]
        map: String,
    },
    /// Certify a declared duality pairing and report both sides.
    Duality {
        bundle: String,
        #[arg(long)]
        pairing: String,
    },
    /// List the built-in examples, or print one in canonical form.
    Examples { name: Option<String> },
}

fn worker_cap() -> Result<(), String> {
    match std::env::var("DGMORSE_WORKERS") {
        Err(_) => Ok(()),
        Ok(v) => match v.parse::<usize>() {
            Ok(n) if n >= 1 => Ok(()),
            _ => Err(format!("DGMORSE_WORKERS must be a positive integer, got {v:?}")),
        },
    }
}

fn run(cli: Cli) -> Result<String, dgmorse::Error> {
    let format = cli.format.into();
    match cli.command {
        Command::Validate { bundle } => {
            let b = load_bundle(&bundle)?;
            let (report, ok) = cmd_validate(&b, format)?;
            if ok {
                Ok(report)
            } else {
                print!("{report}");
                std::process::exit(3);
            }
        }
        Command::Homology { bundle, coeff } => cmd_homology(&load_bundle(&bundle)?, &coeff, format),
        Command::Ss { bundle, coeff } => cmd_ss(&load_bundle(&bundle)?, &coeff, format),
        Command::MapCheck { bundle, map } => cmd_map_check(&load_bundle(&bundle)?, &map, format),
        Command::Duality { bundle, pairing } => {
            cmd_duality(&load_bundle(&bundle)?, &pairing, format)
        }
        Command::Examples { name } => cmd_examples(name.as_deref(), format),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // clap prints --help and --version to stdout with success.
            if e.use_stderr() {
                eprint!("{e}");
                return ExitCode::from(1);
            }
            print!("{e}");
            return ExitCode::SUCCESS;
        }
    };
    if let Err(msg) = worker_cap() {
        eprintln!("error: {msg}");
        return ExitCode::from(1);
    }
    match run(cli) {
        Ok(report) => {
            print!("{report}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
