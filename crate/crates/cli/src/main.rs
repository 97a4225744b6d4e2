use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use pfractal::fp_hypersurface::DEFAULT_BUDGET;

mod commands;
mod error;
mod input;

use error::CliError;

/// Hilbert-Kunz and F-signature functions, weak p-fractals and their
/// generating series.
#[derive(Parser, Debug)]
#[command(name = "pfractal", version)]
struct Cli {
    /// Emit a single JSON document instead of text.
    #[arg(long, global = true)]
    json: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct PolyArgs {
    /// Polynomial such as "x^3+y^3+x*y*z". Variables are x, y, z, w or x1, x2, ...
    pub f: String,

    #[arg(long)]
    pub p: u64,

    /// Ring variables, e.g. "x,y,z". Defaults to the variables that occur in f.
    #[arg(long)]
    pub vars: Option<String>,

    /// Largest truncated algebra dimension to build.
    #[arg(long, default_value_t = DEFAULT_BUDGET, value_parser = clap::value_parser!(u64).range(1..))]
    pub budget: u64,
}

#[derive(Args, Debug, Clone)]
pub struct ReportArgs {
    /// Search the sequence for a linear recurrence and rebuild its series.
    #[arg(long)]
    pub report: bool,

    #[arg(long, default_value_t = 3)]
    pub max_order: usize,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Hilbert-Kunz function HK_f(n) for n = 0..=nmax.
    Hk {
        #[command(flatten)]
        poly: PolyArgs,
        #[arg(long)]
        nmax: u32,
        #[command(flatten)]
        report: ReportArgs,
    },
    /// F-signature function FS_f(n) for n = 1..=nmax.
    Fs {
        #[command(flatten)]
        poly: PolyArgs,
        #[arg(long)]
        nmax: u32,
        #[command(flatten)]
        report: ReportArgs,
    },
    /// Normalized colength phi_{f,p} at dyadic points.
    Phi {
        #[command(flatten)]
        poly: PolyArgs,
        /// Comma separated points such as "1/2,3/8".
        #[arg(long, conflicts_with = "level")]
        points: Option<String>,
        /// Tabulate every point a/p^level.
        #[arg(long)]
        level: Option<u32>,
        /// Evaluate t -> phi(1 - t) instead.
        #[arg(long)]
        reflect: bool,
    },
    /// Generating series of sequences and quasi-polynomials.
    #[command(subcommand)]
    Series(SeriesCommand),
    /// Cyclotomic cancellation in quasi-polynomial series.
    #[command(subcommand)]
    Cancel(CancelCommand),
    /// Compare phi_{fg} with phi_f + phi_g - phi_f phi_g for f, g in disjoint variables.
    ProductCheck {
        f: String,
        g: String,
        #[arg(long)]
        p: u64,
        /// Comma separated points such as "1/2,1/4".
        #[arg(long)]
        points: String,
        #[arg(long)]
        f_vars: Option<String>,
        #[arg(long)]
        g_vars: Option<String>,
        #[arg(long, default_value_t = DEFAULT_BUDGET, value_parser = clap::value_parser!(u64).range(1..))]
        budget: u64,
    },
    /// Hilbert-Kunz function of the rational normal cone R_g.
    Rnc {
        #[arg(long)]
        g: u64,
        #[arg(long)]
        p: u64,
        #[arg(long)]
        nmax: u32,
        /// Fit a degree 2 quasi-polynomial and report its series.
        #[arg(long)]
        fit: bool,
        /// Period for the fit; defaults to the totient of g.
        #[arg(long)]
        m: Option<usize>,
    },
}

#[derive(Subcommand, Debug)]
enum SeriesCommand {
    /// Fit a quasi-polynomial in p^n to a sequence file.
    Fit {
        file: PathBuf,
        #[arg(long)]
        d: usize,
        #[arg(long)]
        m: usize,
        /// Allow the fit to start this many terms late.
        #[arg(long, default_value_t = 0)]
        max_offset: usize,
    },
    /// Search a sequence file for a linear recurrence.
    Detect {
        file: PathBuf,
        #[arg(long)]
        max_order: usize,
        /// Latest start index; defaults to len - 1 - 2 * max_order.
        #[arg(long)]
        max_start: Option<usize>,
    },
    /// lim (1 - p^d z) G(z) for a series or quasi-polynomial file.
    Multiplicity {
        file: PathBuf,
        #[arg(long)]
        d: u32,
        /// Required for series files; quasi-polynomial files carry their prime.
        #[arg(long)]
        p: Option<u64>,
    },
    /// First Taylor coefficients of a series or quasi-polynomial file.
    Expand {
        file: PathBuf,
        #[arg(long)]
        terms: usize,
    },
}

#[derive(Subcommand, Debug)]
enum CancelCommand {
    /// Build P/Q for a_d p^(dn) + a_0(n) and find the cyclotomic factors of P.
    Analyze {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        d: u32,
        #[arg(long, allow_hyphen_values = true)]
        ad: String,
        /// Comma separated period table, e.g. "-4,0,2,-3,-1,3".
        #[arg(long, allow_hyphen_values = true)]
        a0: String,
    },
    /// Dimension of the space S_M of tables with P(zeta_M) = 0.
    Sm {
        #[arg(long = "M", visible_alias = "m")]
        m: usize,
        #[arg(long)]
        p: u64,
        #[arg(long)]
        d: u32,
    },
    /// Compare S_M with the sum of the periodic subspaces V_l.
    Question {
        #[arg(long = "M", visible_alias = "m")]
        m: usize,
        #[arg(long)]
        p: u64,
        #[arg(long)]
        d: u32,
    },
}

fn run(cli: Cli) -> Result<commands::Output, CliError> {
    use commands as c;
    match cli.command {
        Command::Hk { poly, nmax, report } => c::hk(&poly, nmax, &report),
        Command::Fs { poly, nmax, report } => c::fs(&poly, nmax, &report),
        Command::Phi {
            poly,
            points,
            level,
            reflect,
        } => c::phi(&poly, points.as_deref(), level, reflect),
        Command::Series(s) => match s {
            SeriesCommand::Fit { file, d, m, max_offset } => c::series_fit(&file, d, m, max_offset),
            SeriesCommand::Detect {
                file,
                max_order,
                max_start,
            } => c::series_detect(&file, max_order, max_start),
            SeriesCommand::Multiplicity { file, d, p } => c::series_multiplicity(&file, d, p),
            SeriesCommand::Expand { file, terms } => c::series_expand(&file, terms),
        },
        Command::Cancel(cc) => match cc {
            CancelCommand::Analyze { p, d, ad, a0 } => c::cancel_analyze(p, d, &ad, &a0),
            CancelCommand::Sm { m, p, d } => c::cancel_sm(m, p, d),
            CancelCommand::Question { m, p, d } => c::cancel_question(m, p, d),
        },
        Command::ProductCheck {
            f,
            g,
            p,
            points,
            f_vars,
            g_vars,
            budget,
        } => c::product_check(&f, &g, p, &points, f_vars.as_deref(), g_vars.as_deref(), budget),
        Command::Rnc { g, p, nmax, fit, m } => c::rnc(g, p, nmax, fit, m),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let json = cli.json;
    match run(cli) {
        Ok(out) => {
            if json {
                println!("{}", serde_json::to_string_pretty(&out.json).expect("serializable output"));
            } else {
                print!("{}", out.text);
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
