//! `netconv`: convert, inspect, cascade and self-check network parameter
//! files.
//!
//! Exit status: 0 success, 1 I/O, parse or usage error, 2 singular
//! conversion or incompatible cascade, 3 failed self-test. Every error is a
//! single stderr line `netconv: <class>: <message>`.

mod commands;
mod failure;
mod files;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use netconv::{Cx, DataFormat, Representation, WaveConvention};

use commands::ReportFormat;
use failure::{Failure, EXIT_INPUT};
use files::NormSpec;

#[derive(Parser, Debug)]
#[command(name = "netconv", version, about = "Network parameter conversion (Z, Y, G, H, ABCD, B, S, T)")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Convert a network file to another representation.
    Convert {
        /// Target representation: z, y, g, h, a (abcd), b, s or t.
        #[arg(long, value_parser = parse_rep)]
        to: Representation,
        #[command(flatten)]
        norm: NormArgs,
        #[arg(long, value_enum, default_value_t = OutFormat::Ri)]
        format: OutFormat,
        input: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Print the matrices of a network file.
    Show {
        /// Convert before printing.
        #[arg(long, value_parser = parse_rep)]
        rep: Option<Representation>,
        #[command(flatten)]
        norm: NormArgs,
        input: PathBuf,
    },
    /// Chain two-port networks, first file nearest port 1.
    Cascade {
        /// Output representation (default: that of the first file).
        #[arg(long, value_parser = parse_rep)]
        to: Option<Representation>,
        #[command(flatten)]
        norm: NormArgs,
        #[arg(long, value_enum, default_value_t = OutFormat::Ri)]
        format: OutFormat,
        #[arg(required = true, num_args = 2..)]
        inputs: Vec<PathBuf>,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Check every generated conversion against the sampling oracle.
    Selftest {
        /// Restrict to two-port pairs, e.g. `z:g,s:y`.
        #[arg(long, value_delimiter = ',', value_parser = commands::parse_pair)]
        pairs: Vec<(Representation, Representation)>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, value_enum, default_value_t = ReportFormat::Text)]
        format: ReportFormat,
    },
}

#[derive(Args, Debug)]
struct NormArgs {
    /// Reference impedance in ohm, `re+imj` accepted; comma-separated for
    /// one value per port. Replaces the file's own normalization.
    #[arg(long, value_delimiter = ',', value_parser = parse_z0)]
    z0: Option<Vec<Cx<f64>>>,
    #[arg(long, value_enum, default_value_t = ConventionArg::Kurokawa)]
    convention: ConventionArg,
    /// Phase of the traveling-wave constant, in degrees.
    #[arg(long, requires = "convention")]
    alpha: Option<f64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum ConventionArg {
    Kurokawa,
    Traveling,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum OutFormat {
    Ri,
    Ma,
    Db,
}

impl From<OutFormat> for DataFormat {
    fn from(f: OutFormat) -> Self {
        match f {
            OutFormat::Ri => DataFormat::RI,
            OutFormat::Ma => DataFormat::MA,
            OutFormat::Db => DataFormat::DB,
        }
    }
}

fn parse_rep(s: &str) -> Result<Representation, String> {
    s.parse().map_err(|e| format!("{e}"))
}

fn parse_z0(s: &str) -> Result<Cx<f64>, String> {
    let z: Cx<f64> = s.trim().parse().map_err(|_| format!("{s:?} is not an impedance (use 50 or 50+10j)"))?;
    if !(z.re.is_finite() && z.im.is_finite() && z.re > 0.0) {
        return Err(format!("{s:?} must have a positive real part"));
    }
    Ok(z)
}

impl NormArgs {
    fn spec(&self) -> Result<NormSpec, Failure> {
        let convention = match (self.convention, self.alpha) {
            (ConventionArg::Kurokawa, None) => WaveConvention::kurokawa(),
            (ConventionArg::Kurokawa, Some(_)) => {
                return Err(Failure::usage("--alpha only applies to --convention traveling"))
            }
            (ConventionArg::Traveling, alpha) => {
                let phase = alpha.unwrap_or(0.0).to_radians();
                WaveConvention::traveling(Cx::from_polar(1.0, phase))?
            }
        };
        Ok(NormSpec {
            z0: self.z0.clone(),
            convention,
        })
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Convert {
            to,
            norm,
            format,
            input,
            output,
        } => commands::convert(&input, &output, to, &norm.spec()?, format.into()),
        Command::Show { rep, norm, input } => {
            print!("{}", commands::show(&input, rep, &norm.spec()?)?);
            Ok(())
        }
        Command::Cascade {
            to,
            norm,
            format,
            inputs,
            output,
        } => commands::cascade(&inputs, &output, to, &norm.spec()?, format.into()),
        Command::Selftest {
            pairs,
            seed,
            trials,
            format,
        } => {
            if trials == 0 {
                return Err(Failure::usage("--trials must be positive"));
            }
            commands::selftest(&pairs, seed, trials, format)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) if !err.use_stderr() => {
            let _ = err.print();
            return ExitCode::SUCCESS;
        }
        Err(err) => {
            let rendered = err.kind().to_string();
            let detail = err.to_string();
            let first = detail
                .lines()
                .next()
                .unwrap_or(&rendered)
                .trim_start_matches("error: ")
                .to_string();
            eprintln!("{}", Failure::usage(first));
            return ExitCode::from(EXIT_INPUT as u8);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            eprintln!("{failure}");
            ExitCode::from(failure.code as u8)
        }
    }
}
