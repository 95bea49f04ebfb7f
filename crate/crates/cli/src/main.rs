use std::path::Path;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use qmink::dsl::{self, Document};
use qmink::oplab::PqConvention;
use qmink_cli::report::{Bundle, Report};
use qmink_cli::suites::{self, Options, SuiteError};

#[derive(Parser)]
#[command(name = "qmink", version, about = "Verify the deformed quantum Lorentz group and quantum Minkowski space")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the normal form of an expression.
    Normalize {
        /// A .qalg file, or a builtin name (lorentz, minkowski, coaction, classical).
        file: String,
        expression: String,
        /// Algebra to normalize in; defaults to the one named after the file.
        #[arg(long)]
        algebra: Option<String>,
    },
    /// Run one verification suite.
    Check {
        #[arg(value_enum)]
        which: Suite,
        /// Algebras for the presentation suite (repeatable).
        #[arg(long)]
        algebra: Vec<String>,
        /// Read algebras and morphisms from this .qalg file instead of the builtins.
        #[arg(long)]
        file: Option<String>,
        #[command(flatten)]
        common: Common,
    },
    /// Run every suite with default parameters.
    ReportAll {
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Suite {
    Presentation,
    Hopf,
    Coaction,
    Cocycle,
    Pq,
}

#[derive(Clone, Copy, ValueEnum, Default)]
enum Format {
    #[default]
    Text,
    Json,
}

#[derive(Clone, Copy, ValueEnum, Default)]
enum Convention {
    #[default]
    Plain,
    Squared,
}

#[derive(clap::Args)]
struct Common {
    #[arg(long, value_enum, default_value_t)]
    format: Format,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    samples: Option<usize>,
    #[arg(long)]
    p: Option<f64>,
    #[arg(long)]
    q: Option<f64>,
    /// Deformation parameter (repeatable).
    #[arg(long)]
    s: Vec<f64>,
    #[arg(long, default_value_t = 1e-12)]
    tol: f64,
    #[arg(long, value_enum, default_value_t)]
    pq_convention: Convention,
    /// Record wall time in each report (makes output run-dependent).
    #[arg(long)]
    timings: bool,
}

enum Failure {
    Usage(String),
}

impl From<SuiteError> for Failure {
    fn from(e: SuiteError) -> Self {
        Failure::Usage(e.0)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("qmink: {msg}");
            ExitCode::from(2)
        }
    }
}

fn load(file: &str) -> Result<Document, Failure> {
    let path = Path::new(file);
    let src = if path.exists() {
        std::fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{file}: {e}")))?
    } else {
        let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or(file);
        dsl::builtin_source(stem).map_err(|_| Failure::Usage(format!("{file}: no such file or builtin")))?
    };
    dsl::parse(&src).map_err(|e| Failure::Usage(format!("{file}:{e}")))
}

fn normalize(file: &str, expression: &str, algebra: Option<String>) -> Result<bool, Failure> {
    let doc = load(file)?;
    let stem = Path::new(file).file_stem().and_then(|s| s.to_str()).unwrap_or(file);
    let pres = match &algebra {
        Some(name) => doc.algebra(name),
        None => doc.algebra(stem).or(match doc.algebras.as_slice() {
            [only] => Some(only),
            _ => None,
        }),
    }
    .ok_or_else(|| Failure::Usage("choose an algebra with --algebra".into()))?;
    let poly = dsl::parse_poly(expression, pres).map_err(|e| Failure::Usage(format!("expression:{e}")))?;
    let nf = pres.normalize(&poly).map_err(|e| Failure::Usage(e.to_string()))?;
    println!("{}", pres.render(&nf));
    Ok(true)
}

fn options(common: &Common) -> Options {
    let mut opts = Options {
        seed: common.seed.unwrap_or(0),
        samples: common.samples,
        tol: common.tol,
        pq_convention: match common.pq_convention {
            Convention::Plain => PqConvention::Plain,
            Convention::Squared => PqConvention::Squared,
        },
        ..Options::default()
    };
    if !common.s.is_empty() {
        opts.s = common.s.clone();
    }
    if let (Some(p), Some(q)) = (common.p, common.q) {
        opts.pq = vec![(p, q)];
    }
    opts
}

fn require(ok: bool, what: &str) -> Result<(), Failure> {
    if ok {
        Ok(())
    } else {
        Err(Failure::Usage(format!("missing parameter: {what}")))
    }
}

fn timed<T>(timings: bool, f: impl FnOnce() -> T) -> (T, Option<f64>) {
    let start = Instant::now();
    let out = f();
    (out, timings.then(|| start.elapsed().as_secs_f64() * 1e3))
}

fn emit_report(report: &Report, format: Format) {
    match format {
        Format::Text => print!("{}", report.to_text()),
        Format::Json => println!("{}", serde_json::to_string_pretty(report).expect("serializable")),
    }
}

fn check(which: Suite, algebra: Vec<String>, file: Option<String>, common: &Common) -> Result<bool, Failure> {
    let mut opts = options(common);
    opts.algebras = algebra;
    let doc = match &file {
        Some(f) => load(f)?,
        None => dsl::builtin("coaction").expect("builtin coaction document"),
    };
    if matches!(which, Suite::Cocycle) {
        require(!common.s.is_empty(), "--s")?;
        require(common.seed.is_some(), "--seed")?;
    }
    if matches!(which, Suite::Pq) {
        require(common.p.is_some() && common.q.is_some(), "--p and --q")?;
        require(common.seed.is_some(), "--seed")?;
        require(common.p.unwrap_or(1.0) > 0.0 && common.q.unwrap_or(1.0) > 0.0, "positive --p and --q")?;
        if common.s.is_empty() {
            opts.s = vec![suites::DEFAULT_S[1]];
        }
    }
    if !matches!(which, Suite::Presentation) && !opts.algebras.is_empty() && file.is_none() {
        let expected = match which {
            Suite::Hopf => "lorentz",
            _ => "minkowski",
        };
        require(opts.algebras.iter().all(|a| a == expected || a == "lorentz"), "a supported --algebra")?;
    }
    let (report, ms) = timed(common.timings, || -> Result<Report, SuiteError> {
        Ok(match which {
            Suite::Presentation => suites::presentation(&doc, &opts)?,
            Suite::Hopf => suites::hopf(&doc)?,
            Suite::Coaction => suites::coaction(&doc)?,
            Suite::Cocycle => suites::cocycle(&opts),
            Suite::Pq => suites::pq(&opts),
        })
    });
    let mut report = report?;
    report.wall_time_ms = ms;
    emit_report(&report, common.format);
    Ok(report.passed())
}

fn report_all(common: &Common) -> Result<bool, Failure> {
    let opts = options(common);
    let (reports, ms) = timed(common.timings, || suites::report_all(&opts));
    let mut reports = reports?;
    if let Some(ms) = ms {
        for r in &mut reports {
            r.wall_time_ms = Some(ms);
        }
    }
    let bundle = Bundle::new(reports);
    match common.format {
        Format::Text => print!("{}", bundle.to_text()),
        Format::Json => println!("{}", serde_json::to_string_pretty(&bundle).expect("serializable")),
    }
    Ok(bundle.passed())
}

fn run(cli: Cli) -> Result<bool, Failure> {
    match cli.command {
        Command::Normalize {
            file,
            expression,
            algebra,
        } => normalize(&file, &expression, algebra),
        Command::Check {
            which,
            algebra,
            file,
            common,
        } => check(which, algebra, file, &common),
        Command::ReportAll { common } => report_all(&common),
    }
}
