//! `sfk`: continued fractions, log-term masses, parabolic stability, gluing
//! feasibility and metric verification from the command line.
//!
//! Exit codes: 0 success or feasible, 1 a verification check failed,
//! 2 malformed input, 3 obstructed/infeasible/conditional, 4 not applicable.

mod commands;
mod report;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

#[derive(Parser, Debug)]
#[command(name = "sfk", version, about = "Toric scalar-flat Kähler toolkit")]
struct Cli {
    /// Print the report as JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Continued-fraction expansion, fiber chain and resolution strings of p/q.
    Hj { fraction: String },
    /// Exact log-term coefficients and the sign of the mass.
    Mass(MassArgs),
    /// Insert an extra interval into the monopole data of p/q.
    BlowupInsert(InsertArgs),
    /// Parabolic stability of a surface document.
    Stability { document: PathBuf },
    /// Full stability, orbifold and gluing pipeline for a surface document.
    Pipeline {
        document: PathBuf,
        /// Extra blow-up points in the fiber, as "a:b" (added to the document's).
        #[arg(long = "extra", value_name = "A:B")]
        extra: Vec<String>,
    },
    /// Numerical checks of the explicit metric for p/q.
    MetricVerify(VerifyArgs),
}

#[derive(Args, Debug)]
#[command(group = clap::ArgGroup::new("input").required(true).args(["u", "levels"]))]
struct MassArgs {
    fraction: String,
    /// Positive weights u_1..u_k, comma separated.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    u: Option<Vec<String>>,
    /// Levels y_0 > ... > y_{k+1} = 0, comma separated; y_0 may be "inf".
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    levels: Option<Vec<String>>,
}

#[derive(Args, Debug)]
struct InsertArgs {
    fraction: String,
    /// Index j of the level to split, 1 <= j <= k.
    #[arg(long)]
    position: usize,
    /// Levels of the original data (default: k+1, k, ..., 0).
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    levels: Option<Vec<String>>,
    /// The new level (default: midpoint below the split level).
    #[arg(long, allow_hyphen_values = true)]
    level: Option<String>,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    fraction: String,
    /// Levels (default: k+1, k, ..., 0).
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    levels: Option<Vec<String>>,
    #[arg(long, default_value_t = 100)]
    samples: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Write the (r, residual) decay series here.
    #[arg(long)]
    csv: Option<PathBuf>,
    /// Write the (r, coeff_a, coeff_b) fit series here.
    #[arg(long)]
    fit_csv: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Hj { fraction } => commands::hj(fraction),
        Command::Mass(a) => commands::mass(&a.fraction, a.u.as_deref(), a.levels.as_deref()),
        Command::BlowupInsert(a) => commands::blowup_insert(
            &a.fraction,
            a.position,
            a.levels.as_deref(),
            a.level.as_deref(),
        ),
        Command::Stability { document } => commands::stability(document),
        Command::Pipeline { document, extra } => commands::pipeline(document, extra),
        Command::MetricVerify(a) => commands::metric_verify(&commands::VerifyRequest {
            fraction: &a.fraction,
            levels: a.levels.as_deref(),
            samples: a.samples,
            seed: a.seed,
            csv: a.csv.as_deref(),
            fit_csv: a.fit_csv.as_deref(),
        }),
    };
    match outcome {
        Ok((report, code)) => {
            let text = if cli.json {
                let mut s =
                    serde_json::to_string_pretty(&report.to_json()).expect("reports serialize");
                s.push('\n');
                s
            } else {
                report.to_text()
            };
            // a closed pipe (`| head`) is not an error worth reporting
            let _ = std::io::stdout().lock().write_all(text.as_bytes());
            ExitCode::from(code)
        }
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}
