mod commands;
mod report;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use gaussbound::WeightSpec;

use report::Format;

#[derive(Debug, Parser)]
#[command(name = "gaussbound", version, about = "Gauss quadrature rules and a-priori error bounds")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Debug, Args)]
struct OutputArgs {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Pretty, global = true)]
    format: Format,

    /// Write the report to this file instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Add the published table values next to the recomputed ones.
    #[arg(long, global = true)]
    paper_values: bool,

    /// Reserved. Nothing here is random, so the flag is rejected.
    #[arg(long, global = true)]
    seedless: bool,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Denominator factors beta, theta and their ratio.
    Table1 {
        /// Rule sizes, paired with --r (defaults to the six standard rows).
        #[arg(long = "N", value_delimiter = ',')]
        n: Vec<u32>,
        /// Orders matching --N entry by entry.
        #[arg(long, value_delimiter = ',')]
        r: Vec<u32>,
    },
    /// Bounds and errors for the corner function f_j with corner at t.
    Example1 {
        #[arg(long, default_value_t = 0.9, allow_negative_numbers = true)]
        t: f64,
        #[arg(long, default_value_t = 4)]
        j: u32,
        #[arg(long = "N", value_delimiter = ',', default_values_t = [5, 10, 15, 20])]
        n: Vec<u32>,
        #[command(flatten)]
        weight: WeightArgs,
    },
    /// Bounds and errors for e^x.
    Example2 {
        #[arg(long, default_value_t = 4)]
        r: u32,
        #[arg(long = "N", value_delimiter = ',', default_values_t = [5, 10, 15])]
        n: Vec<u32>,
        #[command(flatten)]
        weight: WeightArgs,
    },
    /// Run the identity and rule verification suites.
    Verify {
        #[arg(long, default_value_t = 40)]
        max_n: u32,
        #[arg(long, default_value_t = 12)]
        max_r: u32,
        /// Corrupt one ladder denominator (negative control).
        #[arg(long, hide = true)]
        perturb: bool,
    },
    /// Nodes and weights of an N-point Gauss rule.
    Rule {
        /// chebyshev1, legendre, chebyshev2 or gegenbauer:<lambda>.
        #[arg(default_value = "legendre")]
        weight: WeightSpec,
        #[arg(long = "N")]
        n: usize,
        /// Gegenbauer parameter; overrides the positional weight.
        #[arg(long, allow_negative_numbers = true)]
        lambda: Option<f64>,
    },
    /// Chebyshev coefficients a_0..a_M of a test function.
    Coeffs {
        /// exp, T<n> or corner (with --j, --t).
        function: String,
        #[arg(long = "M")]
        m: usize,
        #[arg(long, default_value_t = 4)]
        j: u32,
        #[arg(long, default_value_t = 0.9, allow_negative_numbers = true)]
        t: f64,
    },
    /// Evaluate one bound formula.
    Bound {
        kind: BoundKind,
        #[arg(long = "U")]
        u: Option<f64>,
        #[arg(long = "V")]
        v: Option<f64>,
        #[arg(long)]
        r: Option<u32>,
        /// Coefficient index for the coefficient bounds.
        #[arg(long)]
        n: Option<u32>,
        /// Rule size for the quadrature bounds.
        #[arg(long = "N")]
        rule_size: Option<u32>,
        /// ||w||_1; defaults to the norm of the --lambda weight.
        #[arg(long)]
        w_norm: Option<f64>,
        #[arg(long, default_value_t = 0.5, allow_negative_numbers = true)]
        lambda: f64,
    },
}

#[derive(Debug, Clone, Args)]
struct WeightArgs {
    /// chebyshev1, legendre, chebyshev2 or gegenbauer:<lambda>.
    #[arg(long, default_value = "legendre")]
    weight: WeightSpec,
    /// Gegenbauer parameter; overrides --weight.
    #[arg(long, allow_negative_numbers = true)]
    lambda: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum BoundKind {
    Trefethen,
    NewCoeff,
    Xiang,
    NewQuad,
    Gegenbauer,
    Table1Factor,
    WeightNorm,
}

/// Bad user input that the library itself does not reject.
#[derive(Debug)]
struct ParamError(String);

impl std::fmt::Display for ParamError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for ParamError {}

/// At least one verification suite failed.
#[derive(Debug)]
struct VerificationFailed;

const EXIT_OTHER: u8 = 1;
const EXIT_PARAMETER: u8 = 2;
const EXIT_VERIFICATION: u8 = 3;
const EXIT_NON_CONVERGENCE: u8 = 4;

fn exit_code(err: &anyhow::Error) -> u8 {
    if err.downcast_ref::<ParamError>().is_some() {
        return EXIT_PARAMETER;
    }
    match err.downcast_ref::<gaussbound::Error>() {
        Some(e) if e.is_non_convergence() => EXIT_NON_CONVERGENCE,
        Some(_) => EXIT_PARAMETER,
        None => EXIT_OTHER,
    }
}

fn run(cli: Cli) -> anyhow::Result<Result<(), VerificationFailed>> {
    if cli.output.seedless {
        return Err(ParamError("--seedless is reserved: no command uses randomness".into()).into());
    }
    let report = commands::execute(cli.command, &cli.output)?;
    let mut sink: Box<dyn Write> = match &cli.output.out {
        Some(path) => Box::new(BufWriter::new(File::create(path)?)),
        None => Box::new(io::stdout().lock()),
    };
    report.render(cli.output.format, &mut sink)?;
    sink.flush()?;
    if report.suites.iter().any(|s| !s.passed) {
        return Ok(Err(VerificationFailed));
    }
    Ok(Ok(()))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(Ok(())) => ExitCode::SUCCESS,
        Ok(Err(VerificationFailed)) => {
            eprintln!("error: verification failed");
            ExitCode::from(EXIT_VERIFICATION)
        }
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(exit_code(&err))
        }
    }
}
