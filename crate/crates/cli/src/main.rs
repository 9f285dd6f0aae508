use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

mod commands;
mod input;

use commands::{Format, Outcome};

/// Exact polynomial-method computations over Z_m.
#[derive(Debug, Parser)]
#[command(name = "polymethod", version)]
struct Cli {
    #[command(flatten)]
    global: GlobalArgs,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
pub struct GlobalArgs {
    /// Modulus m of the coefficient ring Z_m
    #[arg(short = 'm', long = "modulus", global = true)]
    pub modulus: Option<u64>,

    /// Comma-separated variable names, in order (default: first appearance)
    #[arg(long, global = true, value_delimiter = ',')]
    pub vars: Option<Vec<String>>,

    /// Emit JSON (keys sorted)
    #[arg(long, global = true, conflicts_with = "csv")]
    pub json: bool,

    /// Emit CSV tables with a header row
    #[arg(long, global = true)]
    pub csv: bool,

    /// Seed for sampled modes
    #[arg(long, global = true)]
    pub seed: Option<u64>,

    /// Spread sweep work across threads (output is unchanged)
    #[arg(long, global = true)]
    pub parallel: bool,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Report which Nullstellensatz hypotheses hold
    Check(CnArgs),
    /// Find a nonvanishing grid point by the inductive construction
    Witness(CnArgs),
    /// Divide by (var - a): P = (var - a) * Q + R
    Divide {
        #[arg(short = 'P', long = "poly")]
        poly: String,
        #[arg(long)]
        var: String,
        #[arg(long)]
        at: String,
    },
    /// Evaluate a polynomial at a point
    Eval {
        #[arg(short = 'P', long = "poly")]
        poly: String,
        /// Comma-separated coordinates
        #[arg(long)]
        at: String,
    },
    /// Compute the restricted sumset of A and B and check the bound
    Eh(EhArgs),
    /// Check the bound over many (A, B) pairs
    EhSweep {
        /// Comma-separated primes
        #[arg(short = 'p', long = "primes", value_delimiter = ',', required = true)]
        primes: Vec<u64>,
        /// Enumerate every pair of nonempty subsets
        #[arg(long, conflicts_with = "samples")]
        exhaustive: bool,
        /// Draw this many random pairs per prime (needs --seed)
        #[arg(long)]
        samples: Option<u64>,
    },
    /// Expand prod_{d in D} (x + y - d) and (x - y) times it
    EhPoly {
        #[arg(short = 'p', long = "prime")]
        p: u64,
        #[arg(short = 'D', long = "set-d")]
        d: String,
    },
    /// Find a in A, b in B with a != b and a + b outside D via the Nullstellensatz
    EhWitness {
        #[command(flatten)]
        sets: EhArgs,
        #[arg(short = 'D', long = "set-d")]
        d: String,
    },
    /// Check that every residue is a restricted sum when |A| + |B| - 3 >= p
    FullSumset(EhArgs),
}

#[derive(Debug, Args)]
pub struct CnArgs {
    /// Polynomial text, e.g. "x*y + 2*x^2"
    #[arg(short = 'P', long = "poly")]
    pub poly: String,
    /// Comma-separated target exponents k_1,...,k_n
    #[arg(short = 'k', long = "k")]
    pub k: String,
    /// Coordinate sets: comma-separated residues, ';' between variables
    #[arg(short = 'A', long = "sets")]
    pub sets: String,
}

#[derive(Debug, Args)]
pub struct EhArgs {
    #[arg(short = 'p', long = "prime")]
    pub p: u64,
    #[arg(short = 'A', long = "set-a")]
    pub a: String,
    #[arg(short = 'B', long = "set-b")]
    pub b: String,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let format = if cli.global.json {
        Format::Json
    } else if cli.global.csv {
        Format::Csv
    } else {
        Format::Text
    };
    let g = &cli.global;
    let result = match &cli.command {
        Command::Check(args) => commands::check(g, format, args),
        Command::Witness(args) => commands::witness(g, format, args),
        Command::Divide { poly, var, at } => commands::divide(g, format, poly, var, at),
        Command::Eval { poly, at } => commands::eval(g, format, poly, at),
        Command::Eh(args) => commands::eh(format, args),
        Command::EhSweep {
            primes,
            exhaustive,
            samples,
        } => commands::eh_sweep(g, format, primes, *exhaustive, *samples),
        Command::EhPoly { p, d } => commands::eh_poly(format, *p, d),
        Command::EhWitness { sets, d } => commands::eh_witness(format, sets, d),
        Command::FullSumset(args) => commands::full_sumset(format, args),
    };
    match result {
        Ok(Outcome { output, code }) => {
            print!("{output}");
            ExitCode::from(code)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
