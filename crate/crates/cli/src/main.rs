use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use plm_core::io::{parse_plm, parse_stochastic};
use plm_core::stochastic::recompose;
use plm_core::verify::{count, enumerate};
use plm_core::{
    classify, decompose, eigen_check, periodicity, Error, MulRegistry, Plm, SweepConfig,
    SweepRegistry, SweepReport,
};

/// Largest dimension swept exhaustively without `--force`; above it sweeps sample.
const EXHAUSTIVE_CAP: usize = 4;
/// Largest dimension `enumerate` prints without `--force`.
const ENUMERATE_CAP: usize = 8;

#[derive(Parser)]
#[command(name = "plm", version, about = "Permutation-like matrix toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    output: Output,
}

#[derive(Args)]
struct Output {
    /// Emit JSON only
    #[arg(long, global = true, conflicts_with = "text")]
    json: bool,
    /// Emit human-readable text only
    #[arg(long, global = true)]
    text: bool,
    /// Write output to PATH instead of stdout
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Format {
    Both,
    Json,
    Text,
}

#[derive(Subcommand)]
enum Command {
    /// Multiply two PLMs
    Mul {
        a: PathBuf,
        b: PathBuf,
        /// Multiplication strategy
        #[arg(long, default_value = "structural")]
        algo: String,
    },
    /// Classify a PLM (row, canonical, pseudo-canonical or irregular)
    Classify { a: PathBuf },
    /// Periodicity verdict for a PLM
    Period { a: PathBuf },
    /// Characteristic polynomial and eigenvalue checks
    Eigen {
        a: PathBuf,
        #[arg(long, default_value_t = plm_core::DEFAULT_TOL, value_parser = positive_tol)]
        tol: f64,
    },
    /// Decompose an exact left stochastic matrix into a convex combination of PLMs
    Decompose {
        m: PathBuf,
        /// Recompose and compare with the input before printing
        #[arg(long)]
        check: bool,
    },
    /// List every PLM of dimension d in lexicographic order
    Enumerate {
        #[arg(value_parser = clap::value_parser!(u64).range(1..))]
        d: u64,
        /// Allow d above the default cap
        #[arg(long)]
        force: bool,
    },
    /// Run a verification sweep
    Verify {
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        d: u64,
        #[arg(long, value_enum)]
        sweep: SweepName,
        #[arg(long, default_value_t = plm_core::DEFAULT_TOL, value_parser = positive_tol)]
        tol: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Random cases for decompose, and for sampled sweeps
        #[arg(long, default_value_t = 100, value_parser = clap::value_parser!(u64).range(1..))]
        cases: u64,
        /// Worker threads (0 picks one per core)
        #[arg(long, default_value_t = 0)]
        workers: usize,
        /// Sweep exhaustively above the default dimension cap
        #[arg(long)]
        force: bool,
        /// Report elapsed_ms as 0 so output bytes are reproducible
        #[arg(long)]
        no_timing: bool,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum SweepName {
    Mul,
    Period,
    Eigen,
    Prerow,
    Decompose,
    All,
}

impl SweepName {
    fn names(self) -> Vec<&'static str> {
        match self {
            SweepName::Mul => vec!["mul"],
            SweepName::Period => vec!["period"],
            SweepName::Eigen => vec!["eigen"],
            SweepName::Prerow => vec!["prerow"],
            SweepName::Decompose => vec!["decompose"],
            SweepName::All => vec!["mul", "period", "eigen", "prerow", "decompose"],
        }
    }
}

fn positive_tol(s: &str) -> Result<f64, String> {
    match s.parse::<f64>() {
        Ok(t) if t > 0.0 && t.is_finite() => Ok(t),
        _ => Err(format!("`{s}` is not a positive tolerance")),
    }
}

/// A failure with its exit code.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn new(code: u8, message: impl Into<String>) -> Self {
        Self {
            code,
            message: message.into(),
        }
    }

    fn from_error(path: Option<&Path>, e: Error) -> Self {
        let code = match e {
            Error::DimensionMismatch { .. } => 3,
            Error::NegativeEntry { .. }
            | Error::NotLeftStochastic { .. }
            | Error::ZeroColumn { .. } => 4,
            _ => 2,
        };
        let message = match (path, &e) {
            (Some(p), Error::Parse { line, message }) => {
                format!("{}:{line}: {message}", p.display())
            }
            (Some(p), _) => format!("{}: {e}", p.display()),
            (None, _) => e.to_string(),
        };
        Self { code, message }
    }
}

type CmdResult = Result<(String, u8), Failure>;

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::new(2, format!("{}: {e}", path.display())))
}

fn load_plm(path: &Path) -> Result<Plm, Failure> {
    parse_plm(&read(path)?).map_err(|e| Failure::from_error(Some(path), e))
}

fn json_line(v: &Value) -> String {
    format!("{v}\n")
}

fn cmd_mul(a: &Path, b: &Path, algo: &str, fmt: Format) -> CmdResult {
    let strategy = MulRegistry::builtin()
        .get(algo)
        .map_err(|e| Failure::new(2, e.to_string()))?;
    let (a, b) = (load_plm(a)?, load_plm(b)?);
    let c = strategy
        .multiply(&a, &b)
        .map_err(|e| Failure::from_error(None, e))?;
    let mut annotation = classify(&c).to_json();
    annotation["colmap"] = json!(c.one_based());
    let mut out = String::new();
    if fmt != Format::Json {
        out.push_str(&c.to_string());
    }
    if fmt != Format::Text {
        out.push_str(&json_line(&annotation));
    }
    Ok((out, 0))
}

fn cmd_verdict(
    path: &Path,
    fmt: Format,
    f: impl Fn(&Plm) -> Result<(Value, String), Error>,
) -> CmdResult {
    let a = load_plm(path)?;
    let (v, text) = f(&a).map_err(|e| Failure::from_error(Some(path), e))?;
    Ok((
        if fmt == Format::Text {
            text + "\n"
        } else {
            json_line(&v)
        },
        0,
    ))
}

fn cmd_decompose(path: &Path, check: bool, fmt: Format) -> CmdResult {
    let m = parse_stochastic(&read(path)?).map_err(|e| Failure::from_error(Some(path), e))?;
    let dec = decompose(&m).map_err(|e| Failure::from_error(Some(path), e))?;
    if check {
        let back = recompose(&dec).map_err(|e| Failure::from_error(None, e))?;
        if back != m {
            return Err(Failure::new(1, "recomposition differs from the input"));
        }
    }
    if fmt == Format::Text {
        let mut out = String::new();
        for t in &dec.terms {
            out.push_str(&format!("{}  {}\n", t.lambda, t.plm.colmap_line()));
        }
        return Ok((out, 0));
    }
    Ok((json_line(&dec.to_json()), 0))
}

fn cmd_enumerate(d: u64, force: bool, fmt: Format) -> CmdResult {
    let d = d as usize;
    if d > ENUMERATE_CAP && !force {
        return Err(Failure::new(
            2,
            format!(
                "d = {d} yields {d}^{d} lines; pass --force to enumerate above d = {ENUMERATE_CAP}"
            ),
        ));
    }
    if d >= 16 {
        return Err(Failure::new(
            2,
            format!("d = {d} is too large to enumerate"),
        ));
    }
    let mut out = String::with_capacity(count(d) as usize * (2 * d + 8));
    if fmt == Format::Json {
        let all: Vec<Vec<usize>> = enumerate(d).map(|p| p.one_based()).collect();
        out.push_str(&json_line(&json!(all)));
    } else {
        for p in enumerate(d) {
            out.push_str(&p.colmap_line());
            out.push('\n');
        }
    }
    Ok((out, 0))
}

struct VerifyArgs {
    d: usize,
    sweep: SweepName,
    tol: f64,
    seed: u64,
    cases: u64,
    workers: usize,
    force: bool,
    no_timing: bool,
}

fn cmd_verify(args: VerifyArgs, fmt: Format) -> CmdResult {
    let registry = SweepRegistry::builtin();
    let mut cfg = SweepConfig::new(args.d);
    cfg.tol = args.tol;
    cfg.seed = args.seed;
    cfg.cases = args.cases as usize;
    cfg.workers = args.workers;
    let mut reports: Vec<SweepReport> = Vec::new();
    let mut code = 0;
    for name in args.sweep.names() {
        let sweep = registry
            .get(name)
            .map_err(|e| Failure::new(2, e.to_string()))?;
        if args.d < sweep.min_dim() {
            if matches!(args.sweep, SweepName::All) {
                continue;
            }
            return Err(Failure::new(
                2,
                format!("sweep {name} needs d >= {}", sweep.min_dim()),
            ));
        }
        let mut run_cfg = cfg.clone();
        run_cfg.sampled = name != "decompose" && args.d > EXHAUSTIVE_CAP && !args.force;
        if run_cfg.sampled {
            eprintln!(
                "note: sampling {} random cases for {name} at d = {}; pass --force for an exhaustive sweep",
                args.cases, args.d
            );
        }
        let mut report = sweep.run(&run_cfg);
        if args.no_timing {
            report = report.without_timing();
        }
        if sweep.asserting(args.d) && !report.pass {
            code = 1;
        }
        reports.push(report);
    }
    let out = if fmt == Format::Text {
        reports
            .iter()
            .map(|r| {
                format!(
                    "{} d={} cases={} {} failures={}\n",
                    r.sweep,
                    r.d,
                    r.cases,
                    if r.pass { "PASS" } else { "FAIL" },
                    r.failures.len()
                )
            })
            .collect()
    } else if reports.len() == 1 {
        json_line(&reports[0].to_json())
    } else {
        json_line(&json!(reports
            .iter()
            .map(SweepReport::to_json)
            .collect::<Vec<_>>()))
    };
    Ok((out, code))
}

fn run(cli: Cli) -> CmdResult {
    let fmt = match (cli.output.json, cli.output.text) {
        (true, _) => Format::Json,
        (_, true) => Format::Text,
        _ => Format::Both,
    };
    match cli.command {
        Command::Mul { a, b, algo } => cmd_mul(&a, &b, &algo, fmt),
        Command::Classify { a } => cmd_verdict(&a, fmt, |p| {
            let c = classify(p);
            let text = match &c {
                plm_core::PlmClass::Pcplm { tau } => format!("pcplm tau={tau}"),
                plm_core::PlmClass::RowPlm { m } => format!("rowplm m={}", m + 1),
                plm_core::PlmClass::Cplm { leading } => format!("cplm leading={leading}"),
                plm_core::PlmClass::Iplm => "iplm".to_string(),
            };
            Ok((c.to_json(), text))
        }),
        Command::Period { a } => cmd_verdict(&a, fmt, |p| {
            let v = periodicity(p).to_json();
            let text = v.to_string();
            Ok((v, text))
        }),
        Command::Eigen { a, tol } => cmd_verdict(&a, fmt, |p| {
            let r = eigen_check(p, tol)?;
            let text = format!(
                "char poly {}; period {}; zero eigenvalue {}; spectral radius {:.12}; roots of unity {}",
                r.char_poly.pretty(),
                r.period,
                r.has_zero,
                r.spectral_radius_numeric,
                r.numeric_check
            );
            Ok((r.to_json(), text))
        }),
        Command::Decompose { m, check } => cmd_decompose(&m, check, fmt),
        Command::Enumerate { d, force } => cmd_enumerate(d, force, fmt),
        Command::Verify {
            d,
            sweep,
            tol,
            seed,
            cases,
            workers,
            force,
            no_timing,
        } => cmd_verify(
            VerifyArgs {
                d: d as usize,
                sweep,
                tol,
                seed,
                cases,
                workers,
                force,
                no_timing,
            },
            fmt,
        ),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let out_path = cli.output.out.clone();
    match run(cli) {
        Ok((out, code)) => {
            let written = match &out_path {
                Some(p) => fs::write(p, &out),
                None => std::io::stdout().write_all(out.as_bytes()),
            };
            if let Err(e) = written {
                eprintln!("error: {e}");
                return ExitCode::from(2);
            }
            ExitCode::from(code)
        }
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
