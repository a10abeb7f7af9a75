use std::path::PathBuf;
use std::process::ExitCode;

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use upsilon_core::family::Which;
use upsilon_core::restore::{DEFAULT_MAX_SOLUTIONS, DEFAULT_STEP_BUDGET};
use upsilon_core::seifert::{decide, SeifertForm};
use upsilon_lab::report::{self, parse_count, parse_range, RestoreOptions};
use upsilon_lab::spec::KnotSpec;
use upsilon_lab::{census, plot, CliError, Result};

#[derive(Parser)]
#[command(name = "upsilon-lab", version, about = "Alexander polynomials, gap functions and Upsilon for L-space knots")]
struct Cli {
    /// Worker threads for restore and census (falls back to UPSILON_LAB_THREADS).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
#[command(group(ArgGroup::new("knot").required(true).multiple(false)))]
struct SpecArgs {
    /// Coefficient pairs as JSON, e.g. '[[0,1],[1,-1],[2,1]]'.
    #[arg(long, group = "knot")]
    alexander: Option<String>,
    /// Torus knot parameters 'p,q'.
    #[arg(long, group = "knot")]
    torus: Option<String>,
    /// Family member K1 or K2 (with --n).
    #[arg(long, group = "knot")]
    family: Option<String>,
    #[arg(long, default_value_t = 1, requires = "family")]
    n: i64,
    /// Braid letters, e.g. '1,2,1,2'; negative letters are inverses.
    #[arg(long, group = "knot", allow_hyphen_values = true)]
    braid: Option<String>,
    #[arg(long, requires = "braid")]
    strands: Option<usize>,
    /// Catalog name: pretzel_237, T(3,4), T(3,5), t09847, v2871, cable_alt_237.
    #[arg(long, group = "knot")]
    catalog: Option<String>,
}

impl SpecArgs {
    fn spec(&self) -> Result<KnotSpec> {
        if let Some(a) = &self.alexander {
            KnotSpec::parse_alexander(a)
        } else if let Some(t) = &self.torus {
            KnotSpec::parse_torus(t)
        } else if let Some(f) = &self.family {
            KnotSpec::family(f, self.n)
        } else if let Some(b) = &self.braid {
            KnotSpec::parse_braid(b, self.strands)
        } else if let Some(c) = &self.catalog {
            Ok(KnotSpec::Catalog(c.clone()))
        } else {
            Err(CliError::Usage("no knot given".into()))
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Semigroup, gap function, envelope and Upsilon of a knot.
    Invariants {
        #[command(flatten)]
        knot: SpecArgs,
    },
    /// Enumerate every gap function with the same envelope.
    Restore {
        #[command(flatten)]
        knot: SpecArgs,
        /// Report symmetric patterns only (default).
        #[arg(long, conflicts_with = "all")]
        symmetric_only: bool,
        /// Report every pattern, symmetric or not.
        #[arg(long)]
        all: bool,
        #[arg(long, default_value_t = DEFAULT_MAX_SOLUTIONS)]
        max_solutions: usize,
        /// Node budget for the search; accepts forms like 2e8.
        #[arg(long, value_parser = parse_count, default_value_t = DEFAULT_STEP_BUDGET)]
        budget: u64,
    },
    /// The K1/K2 family.
    Family {
        #[command(subcommand)]
        command: FamilyCommand,
    },
    /// Small Seifert fibered spaces.
    Seifert {
        #[command(subcommand)]
        command: SeifertCommand,
    },
    /// Alexander polynomial of a braid closure.
    Braid {
        #[command(flatten)]
        knot: SpecArgs,
    },
    /// JSON-lines knot lists.
    Census {
        #[command(subcommand)]
        command: CensusCommand,
    },
    /// Draw the gap function, envelope and Upsilon.
    Plot {
        #[command(flatten)]
        knot: SpecArgs,
        /// Comma-separated layers: gapfn, hull, upsilon.
        #[arg(long, default_value = "gapfn,hull")]
        what: String,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, value_enum, default_value_t = PlotFormat::Svg)]
        format: PlotFormat,
    },
}

#[derive(Subcommand)]
enum FamilyCommand {
    /// Check every claim about K1(n) and K2(n) over a range of n.
    Verify {
        #[arg(long, value_enum, default_value_t = WhichArg::Both)]
        which: WhichArg,
        /// Inclusive range such as 1..5.
        #[arg(long, default_value = "1..5", value_parser = parse_range)]
        n: (i64, i64),
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        /// Largest n for which the Burau derivation is also run.
        #[arg(long, default_value_t = 2)]
        burau_max: i64,
    },
}

#[derive(Subcommand)]
enum SeifertCommand {
    /// Try to certify M(e0; r1, r2, r3) as an L-space.
    Decide {
        #[arg(long, allow_hyphen_values = true)]
        e0: i64,
        /// Comma-separated ratios, e.g. '-3/7,-1/3,-1/5'.
        #[arg(long, allow_hyphen_values = true)]
        r: String,
    },
}

#[derive(Subcommand)]
enum CensusCommand {
    /// Group records by Alexander polynomial and by Upsilon.
    Scan { path: PathBuf },
}

#[derive(Clone, Copy, ValueEnum)]
enum WhichArg {
    Both,
    #[value(name = "K1", alias = "k1")]
    K1,
    #[value(name = "K2", alias = "k2")]
    K2,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Clone, Copy, ValueEnum)]
enum PlotFormat {
    Svg,
    Csv,
}

fn print_json<T: Serialize>(value: &T) {
    println!("{}", serde_json::to_string_pretty(value).expect("reports serialize"));
}

fn threads(flag: Option<usize>) -> Result<Option<usize>> {
    match flag {
        Some(n) => Ok(Some(n)),
        None => match std::env::var("UPSILON_LAB_THREADS") {
            Ok(v) if !v.trim().is_empty() => v
                .trim()
                .parse()
                .map(Some)
                .map_err(|_| CliError::Usage(format!("UPSILON_LAB_THREADS must be a positive integer, got {v:?}"))),
            _ => Ok(None),
        },
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    let threads = threads(cli.threads)?;
    if let Some(n) = threads {
        if n == 0 {
            return Err(CliError::Usage("--threads must be at least 1".into()));
        }
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global().map_err(CliError::usage)?;
    }
    let parallel = threads.is_some_and(|n| n > 1);
    match cli.command {
        Command::Invariants { knot } => {
            let k = knot.spec()?.resolve()?;
            print_json(&report::invariants(&k)?);
        }
        Command::Restore { knot, all, max_solutions, budget, .. } => {
            let k = knot.spec()?.resolve()?;
            let opts = RestoreOptions { symmetric_only: !all, max_solutions, budget, parallel };
            print_json(&report::restore(&k, opts)?);
        }
        Command::Family { command: FamilyCommand::Verify { which, n: (lo, hi), format, burau_max } } => {
            let which = match which {
                WhichArg::Both => None,
                WhichArg::K1 => Some(Which::K1),
                WhichArg::K2 => Some(Which::K2),
            };
            let out = report::family_verify(which, lo, hi, burau_max)?;
            match format {
                Format::Json => print_json(&out),
                Format::Text => print!("{}", report::family_text(&out)),
            }
            if !out.all_passed {
                return Ok(ExitCode::from(1));
            }
        }
        Command::Seifert { command: SeifertCommand::Decide { e0, r } } => {
            let form = SeifertForm::parse(e0, &r).map_err(CliError::usage)?;
            #[derive(Serialize)]
            struct Out {
                input: SeifertForm,
                #[serde(flatten)]
                verdict: upsilon_core::seifert::LSpaceVerdict,
            }
            let verdict = decide(&form);
            print_json(&Out { input: form, verdict });
        }
        Command::Braid { knot } => {
            let word = knot.spec()?.braid_word()?;
            print_json(&report::braid(&word)?);
        }
        Command::Census { command: CensusCommand::Scan { path } } => {
            let text = std::fs::read_to_string(&path)
                .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
            let r = census::scan(&text);
            for s in &r.skipped {
                eprintln!("warning: {}:{}: {}", path.display(), s.line, s.error);
            }
            print_json(&r);
        }
        Command::Plot { knot, what, out, format } => {
            let k = knot.spec()?.resolve()?;
            let layers = plot::parse_layers(&what)?;
            let f = upsilon_core::gapfn::gap_function_of(&k.alexander).map_err(CliError::usage)?;
            let body = match format {
                PlotFormat::Svg => plot::svg(&f, &layers, &k.label),
                PlotFormat::Csv => plot::csv(&f, &layers),
            };
            std::fs::write(&out, body)?;
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
