use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use bchkit::analysis::{compute_with_progress, lyndon_zero_check, stats};
use bchkit::basis::BasisKind;
use bchkit::convergence::scan::{example_diagonal_nilpotent, example_nilpotent_pair, short_complex};
use bchkit::convergence::{radius, CMatrix, ScanParams};
use bchkit::report::{records, write_table, Format, SeriesKind, TableInfo};
use bchkit::suites::{self, Suite};
use bchkit::thompson::{free_parameters_by_degree, solve_rho};
use bchkit::Error;

#[derive(Parser)]
#[command(name = "bchkit", version, about = "Exact BCH series in Hall-Viennot bases")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum BasisArg {
    Hall,
    Lyndon,
}

impl From<BasisArg> for BasisKind {
    fn from(b: BasisArg) -> Self {
        match b {
            BasisArg::Hall => BasisKind::Hall,
            BasisArg::Lyndon => BasisKind::Lyndon,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum SeriesArg {
    Bch,
    Sbch,
}

impl From<SeriesArg> for SeriesKind {
    fn from(s: SeriesArg) -> Self {
        match s {
            SeriesArg::Bch => SeriesKind::Bch,
            SeriesArg::Sbch => SeriesKind::Sbch,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Tsv,
    Jsonl,
    Pretty,
}

impl From<FormatArg> for Format {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Tsv => Format::Tsv,
            FormatArg::Jsonl => Format::Jsonl,
            FormatArg::Pretty => Format::Pretty,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum SuiteArg {
    Tables,
    Oracle,
    LyndonZeros,
    Thompson,
    RadiusExamples,
}

impl From<SuiteArg> for Suite {
    fn from(s: SuiteArg) -> Self {
        match s {
            SuiteArg::Tables => Suite::Tables,
            SuiteArg::Oracle => Suite::Oracle,
            SuiteArg::LyndonZeros => Suite::LyndonZeros,
            SuiteArg::Thompson => Suite::Thompson,
            SuiteArg::RadiusExamples => Suite::RadiusExamples,
        }
    }
}

#[derive(clap::Args)]
struct SeriesFlags {
    #[arg(long, value_enum, default_value = "hall")]
    basis: BasisArg,
    #[arg(long, default_value_t = 9, value_parser = clap::value_parser!(u32).range(1..=40))]
    max_degree: u32,
    #[arg(long, value_enum, default_value = "bch")]
    series: SeriesArg,
    /// Stop after the first degree that leaves the process above this many MB.
    #[arg(long, value_name = "MB", value_parser = clap::value_parser!(u64).range(1..))]
    max_memory: Option<u64>,
    /// Per-degree progress on stderr.
    #[arg(long)]
    verbose: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Coefficients of the BCH or symmetric BCH series.
    Bch {
        #[command(flatten)]
        series: SeriesFlags,
        #[arg(long, value_enum, default_value = "tsv")]
        format: FormatArg,
        #[arg(long, value_name = "PATH")]
        out: Option<PathBuf>,
    },
    /// Per-degree dimension, zero count, closure-set size, time and memory.
    Stats {
        #[command(flatten)]
        series: SeriesFlags,
        #[arg(long)]
        json: bool,
    },
    /// Structural zeros of the Lyndon-basis BCH series at even degrees.
    LyndonZeroCheck {
        #[arg(long, default_value_t = 12, value_parser = clap::value_parser!(u32).range(4..=40))]
        max_degree: u32,
    },
    /// rho(X,Y) of the Thompson representation, free parameters set to 0.
    Thompson {
        #[arg(long, value_enum, default_value = "hall")]
        basis: BasisArg,
        /// Degree bound of the identity; rho is returned through degree N-1.
        #[arg(long, default_value_t = 6, value_parser = clap::value_parser!(u32).range(2..=16))]
        max_degree: u32,
        #[arg(long, value_enum, default_value = "tsv")]
        format: FormatArg,
        #[arg(long, value_name = "PATH")]
        out: Option<PathBuf>,
    },
    /// Radius of convergence of log(e^{eX} e^{eY}) from eigenvalue collisions.
    Radius {
        /// Built-in pair: 1 = diag(a,-a) with [[0,b],[0,0]], 2 = a[[0,0],[1,0]] with a[[0,1],[0,0]].
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=2), conflicts_with_all = ["x", "y"])]
        example: Option<u8>,
        #[arg(long, default_value_t = 2.0)]
        alpha: f64,
        #[arg(long, default_value_t = 1.0)]
        beta: f64,
        /// Matrix file: first line n, then n rows of n entries like 1.5-2i.
        #[arg(long, requires = "y")]
        x: Option<PathBuf>,
        #[arg(long, requires = "x")]
        y: Option<PathBuf>,
        #[arg(long, default_value_t = 4.0)]
        r_f: f64,
        #[arg(long, default_value_t = 40)]
        rings: usize,
        #[arg(long, default_value_t = 63)]
        rays: usize,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
        #[arg(long)]
        json: bool,
    },
    /// Built-in verification suites.
    Check {
        #[arg(long, value_enum)]
        suite: SuiteArg,
        #[arg(long)]
        max_degree: Option<usize>,
    },
}

const EXIT_FAILED: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_MEMORY: u8 = 3;

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(msg) = init_threads() {
        eprintln!("bchkit: {msg}");
        return ExitCode::from(EXIT_USAGE);
    }
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("bchkit: {e}");
            ExitCode::from(match e {
                Error::ResourceLimit { .. } => EXIT_MEMORY,
                Error::Parse { .. } | Error::DimensionMismatch(_) | Error::NonFinite => EXIT_USAGE,
                _ => EXIT_FAILED,
            })
        }
    }
}

fn init_threads() -> Result<(), String> {
    let Ok(v) = std::env::var("BCHKIT_THREADS") else { return Ok(()) };
    let n: usize = v.parse().ok().filter(|&n| n > 0).ok_or(format!("BCHKIT_THREADS must be a positive integer, got '{v}'"))?;
    rayon::ThreadPoolBuilder::new().num_threads(n).build_global().map_err(|e| e.to_string())
}

fn output(path: Option<&Path>) -> bchkit::Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn run(cmd: Command) -> bchkit::Result<u8> {
    match cmd {
        Command::Bch { series, format, out } => {
            let c = computed(&series)?;
            let mut w = output(out.as_deref())?;
            write_table(&mut w, format.into(), &c.info, &records(&c.coefficients))?;
            w.flush()?;
            Ok(memory_status(&c.info))
        }
        Command::Stats { series, json } => {
            let c = computed(&series)?;
            let s = stats(&c);
            if json {
                println!("{}", serde_json::to_string_pretty(&s).expect("serializable"));
            } else {
                println!("{s}");
            }
            Ok(memory_status(&c.info))
        }
        Command::LyndonZeroCheck { max_degree } => {
            let c = bchkit::analysis::compute(BasisKind::Lyndon, SeriesKind::Bch, max_degree as usize, None)?;
            let check = lyndon_zero_check(&c.coefficients);
            println!("{check}");
            Ok(if check.passed() { 0 } else { EXIT_FAILED })
        }
        Command::Thompson { basis, max_degree, format, out } => {
            let sol = solve_rho(basis.into(), max_degree as usize)?;
            let free = free_parameters_by_degree(&sol);
            eprintln!("free parameters by degree: {free:?}; indices {:?}", sol.free_indices);
            let reached = max_degree as usize - 1;
            let info = TableInfo::complete(basis.into(), SeriesKind::Bch, reached);
            let mut w = output(out.as_deref())?;
            write_table(&mut w, format.into(), &info, &records(&sol.particular.truncated(reached)))?;
            w.flush()?;
            Ok(0)
        }
        Command::Radius { example, alpha, beta, x, y, r_f, rings, rays, tol, json } => {
            let (x, y) = match (example, x, y) {
                (Some(1), _, _) => example_diagonal_nilpotent(alpha, beta),
                (Some(_), _, _) => example_nilpotent_pair(alpha),
                (None, Some(px), Some(py)) => (CMatrix::parse(&std::fs::read_to_string(px)?)?, CMatrix::parse(&std::fs::read_to_string(py)?)?),
                _ => {
                    eprintln!("bchkit: radius needs --example or both --x and --y");
                    return Ok(EXIT_USAGE);
                }
            };
            if !(r_f > 0.0 && tol > 0.0) || rings == 0 || rays < 3 {
                eprintln!("bchkit: grid needs r_f > 0, tol > 0, rings >= 1, rays >= 3");
                return Ok(EXIT_USAGE);
            }
            let rep = radius(&x, &y, &ScanParams { r_f, n: rings, m: rays, tol })?;
            if json {
                println!("{}", serde_json::to_string_pretty(&rep).expect("serializable"));
                return Ok(0);
            }
            println!("r = {}", rep.radius);
            println!("magnus bound = {}  consistent = {}", rep.magnus_bound, rep.consistent);
            for c in &rep.collisions {
                println!(
                    "  eps0 = {:<28} |eps0| = {:<12.9} cluster {} p {} q {} {:?}",
                    short_complex(c.epsilon),
                    c.epsilon.norm(),
                    c.cluster,
                    c.p,
                    c.q,
                    c.class
                );
            }
            for w in &rep.warnings {
                eprintln!("warning: {w}");
            }
            Ok(0)
        }
        Command::Check { suite, max_degree } => {
            let checks = suites::run(suite.into(), max_degree);
            for c in &checks {
                println!("{c}");
            }
            Ok(if checks.iter().all(|c| c.passed) { 0 } else { EXIT_FAILED })
        }
    }
}

fn computed(f: &SeriesFlags) -> bchkit::Result<bchkit::analysis::Computed> {
    let progress = |r: &bchkit::bch::DegreeReport| {
        eprintln!("degree {:>2}: {:>9} trees  {:>8.2}s  rss {:.1} MB", r.degree, r.trees, r.seconds, r.rss_mb);
    };
    let p: Option<&(dyn Fn(&bchkit::bch::DegreeReport) + Sync)> = if f.verbose { Some(&progress) } else { None };
    compute_with_progress(f.basis.into(), f.series.into(), f.max_degree as usize, f.max_memory, p)
}

/// Exit 3 after writing partial output when the memory cap stopped the run.
fn memory_status(info: &TableInfo) -> u8 {
    if info.is_partial() {
        eprintln!(
            "bchkit: memory cap of {} MB reached; output holds degrees <= {} only",
            info.memory_cap_mb.unwrap_or(0),
            info.degree_reached
        );
        EXIT_MEMORY
    } else {
        0
    }
}
