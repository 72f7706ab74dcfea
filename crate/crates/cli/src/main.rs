use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use pbfred::io::{analyze, parse_operator};
use pbfred::linalg::{format_rational, ExactMatrix};
use pbfred::model::{Atom, OperatorExpr, Point};
use pbfred::spectra::{component_index_report, scan, to_csv, to_json, GridSpec, SpectrumName};
use pbfred::structure::{drazin_axioms_hold, drazin_inverse};
use pbfred::verify::{self, Suite, VerifyConfig};
use pbfred::Error;

const EXIT_USAGE: u8 = 1;
const EXIT_PARSE: u8 = 2;
const EXIT_UNSUPPORTED: u8 = 3;
const EXIT_NOT_MATRIX: u8 = 4;
const EXIT_VIOLATION: u8 = 5;

#[derive(Parser)]
#[command(name = "pbfred", version, about = "Exact Fredholm-structure analysis of structured operators")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Classify T − λI and write a JSON analysis report.
    Analyze {
        #[arg(long = "in", value_name = "FILE")]
        input: PathBuf,
        /// Point λ as RE,IM with exact rationals, e.g. 1/2,-1/3.
        #[arg(long, value_name = "RE,IM", allow_hyphen_values = true, default_value = "0,0")]
        lambda: String,
        /// Report destination; standard output when omitted.
        #[arg(long, value_name = "FILE")]
        out: Option<PathBuf>,
    },
    /// Classify every point of a rational grid and export the scan.
    Spectrum {
        #[arg(long = "in", value_name = "FILE")]
        input: PathBuf,
        /// RE0,RE1,IM0,IM1,NR,NI with NR × NI grid points, endpoints included.
        #[arg(long, value_name = "GRID", allow_hyphen_values = true)]
        grid: String,
        /// Spectrum to summarize: upbf, lpbf, spbf, pbf, upbw, lpbw, spbw or pbw.
        #[arg(long, value_name = "NAME", default_value = "pbf")]
        set: String,
        #[arg(long, value_name = "FILE")]
        out: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
    /// Print the Drazin inverse of a matrix-only operator.
    Drazin {
        #[arg(long = "in", value_name = "FILE")]
        input: PathBuf,
    },
    /// Run the seeded property suites.
    Verify {
        #[arg(long, default_value = "all")]
        suite: String,
        #[arg(long, default_value_t = 500)]
        cases: usize,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, hide = true)]
        inject_fault: bool,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn new(code: u8, message: impl Into<String>) -> Self {
        Self { code, message: message.into() }
    }

    fn usage(e: impl std::fmt::Display) -> Self {
        Self::new(EXIT_USAGE, e.to_string())
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Parse(_) => EXIT_PARSE,
            Error::UnsupportedPoint { .. } => EXIT_UNSUPPORTED,
            Error::Internal(_) => EXIT_VIOLATION,
            Error::Invalid(_) => EXIT_USAGE,
            _ => EXIT_PARSE,
        };
        Self::new(code, e.to_string())
    }
}

fn read_operator(path: &Path) -> Result<(String, OperatorExpr), Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::new(EXIT_PARSE, format!("cannot read {}: {e}", path.display())))?;
    Ok(parse_operator(&text)?)
}

fn write_file(path: &Path, contents: &str) -> Result<(), Failure> {
    fs::write(path, contents).map_err(|e| Failure::new(EXIT_USAGE, format!("cannot write {}: {e}", path.display())))
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Analyze { input, lambda, out } => {
            let lambda = Point::parse(&lambda).map_err(Failure::usage)?;
            let (name, e) = read_operator(&input)?;
            let report = analyze(&name, &e, &lambda)?;
            let json = report.to_json() + "\n";
            match out {
                Some(path) => write_file(&path, &json)?,
                None => print!("{json}"),
            }
        }
        Command::Spectrum { input, grid, set, out, format } => {
            let grid = GridSpec::parse(&grid).map_err(Failure::usage)?;
            let which: SpectrumName = set.parse().map_err(Failure::usage)?;
            let (name, e) = read_operator(&input)?;
            let s = scan(&e, &grid)?;
            let body = match format {
                Format::Csv => to_csv(&s)?,
                Format::Json => to_json(&s)? + "\n",
            };
            write_file(&out, &body)?;
            let members = s.points.iter().filter(|p| which.contains(&p.record)).count();
            println!("{name}: σ_{which} contains {members} of {} grid points", s.points.len());
            for c in component_index_report(&e, &s, which) {
                println!("component {}: {} points from {}, index {}", c.id, c.size, c.anchor, c.index);
            }
        }
        Command::Drazin { input } => {
            let (_, e) = read_operator(&input)?;
            let mats: Vec<ExactMatrix> = e
                .atoms()
                .iter()
                .map(|a| match a {
                    Atom::FiniteMatrix(m) => Ok(m.clone()),
                    other => Err(Failure::new(EXIT_NOT_MATRIX, format!("Drazin inverse needs matrix atoms, found {}", other.type_tag()))),
                })
                .collect::<Result<_, _>>()?;
            let m = ExactMatrix::block_diagonal(&mats);
            let d = drazin_inverse(&m);
            if !drazin_axioms_hold(&m, &d) {
                return Err(Failure::new(EXIT_VIOLATION, "computed Drazin inverse fails its defining identities"));
            }
            for row in d.to_rows() {
                let cells: Vec<String> = row.iter().map(format_rational).collect();
                println!("[{}]", cells.join(", "));
            }
        }
        Command::Verify { suite, cases, seed, inject_fault } => {
            let suite: Suite = suite.parse().map_err(Failure::usage)?;
            let cfg = VerifyConfig { suite, cases, seed, inject_fault };
            let outcome = verify::run(&cfg)?;
            print!("{}", outcome.render(&cfg));
            if !outcome.ok() {
                return Err(Failure::new(EXIT_VIOLATION, "property violations found"));
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("pbfred: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
