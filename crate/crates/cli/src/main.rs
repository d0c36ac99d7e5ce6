//! `hmk` — batch front end for the Hankel moment kit.
//!
//! Reads JSON documents, runs the requested certification or construction,
//! and writes a JSON report with the run configuration echoed in. Exit
//! codes: 0 verdict-true, 1 verdict-false or indeterminate, 2 malformed
//! input, 3 numerical failure.

mod logging;
mod selftest;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_rational::BigRational;
use serde::Serialize;

use hmk_core::decomposition::{
    strong_hankel_decompose, verify_decomposition, DEFAULT_DECOMPOSE_TOL,
};
use hmk_core::explorer::{search_counterexample, FitOptions, TruncatedFamily};
use hmk_core::json::{
    to_canonical_json, CertificateDoc, DecompositionDoc, ExploreReportDoc, FamilyDoc, FromValueDoc,
    ResidualDoc, SequenceDoc, SequenceKind, ValueDoc,
};
use hmk_core::psd::{moment_sequence_check, strong_hankel_check, PsdMode, DEFAULT_PSD_TOL};
use hmk_core::tensor::{hankel_tensor, polynomial_eval_contraction, polynomial_eval_direct};
use hmk_core::{Error as CoreError, GeneratingVector, MultidimensionalSequence};

const EXIT_TRUE: u8 = 0;
const EXIT_FALSE: u8 = 1;
const EXIT_BAD_INPUT: u8 = 2;
const EXIT_NUMERICAL: u8 = 3;

#[derive(Parser)]
#[command(
    name = "hmk",
    version,
    about = "Certify and decompose Hankel moment sequences"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check the Hankel condition and certify the moment property
    Check(CheckArgs),
    /// Decompose a strong Hankel tensor into a sum of mth powers
    Decompose(DecomposeArgs),
    /// Evaluate the homogeneous polynomial along both paths
    Eval(EvalArgs),
    /// Hunt for non-strong generating vectors whose tensors still fit
    Explore(ExploreArgs),
    /// Run the built-in oracle corpus
    Selftest,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Mode {
    Float,
    Exact,
}

impl Mode {
    fn as_str(self) -> &'static str {
        match self {
            Mode::Float => "float",
            Mode::Exact => "exact",
        }
    }
}

#[derive(Args)]
struct CheckArgs {
    /// Generating-vector document (must carry generating_vector)
    #[arg(long, conflicts_with = "sequence")]
    vector: Option<PathBuf>,
    /// Sequence document (table or hankel-rule)
    #[arg(long)]
    sequence: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Mode::Float)]
    mode: Mode,
    /// Float-mode PSD tolerance
    #[arg(long, default_value_t = DEFAULT_PSD_TOL)]
    tol: f64,
    /// Moment-check depth (default: all available data)
    #[arg(long)]
    pmax: Option<usize>,
    /// Tensor order: switches to a strong-Hankel check
    #[arg(long)]
    m: Option<usize>,
    /// Ambient dimension override
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct DecomposeArgs {
    /// Generating-vector document
    #[arg(long)]
    vector: PathBuf,
    /// Ambient dimension
    #[arg(long)]
    n: usize,
    /// Tensor order
    #[arg(long)]
    m: usize,
    #[arg(long, value_enum, default_value_t = Mode::Float)]
    mode: Mode,
    /// Verification tolerance (relative, max-norm)
    #[arg(long, default_value_t = DEFAULT_DECOMPOSE_TOL)]
    tol: f64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct EvalArgs {
    /// Sequence document
    #[arg(long)]
    sequence: PathBuf,
    /// Polynomial degree
    #[arg(long)]
    m: usize,
    /// Evaluation point: comma-separated numbers or p/q values, length n
    #[arg(long)]
    x: String,
    #[arg(long, value_enum, default_value_t = Mode::Float)]
    mode: Mode,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ExploreArgs {
    /// Family document, or the literal `preset`
    #[arg(long, default_value = "preset")]
    family: String,
    /// Orders to fit, comma separated
    #[arg(long, default_value = "3,4")]
    mlist: String,
    /// Root seed (overrides the family document's seed)
    #[arg(long)]
    seed: Option<u64>,
    /// Fit restarts
    #[arg(long, default_value_t = 20)]
    restarts: usize,
    /// Fit iteration budget per restart
    #[arg(long, default_value_t = 500)]
    iters: usize,
    /// Fit tolerance (relative, max-norm)
    #[arg(long, default_value_t = hmk_core::explorer::DEFAULT_FIT_TOL)]
    tol: f64,
    /// Preset dimension (used when --family preset)
    #[arg(long, default_value_t = 3)]
    n: usize,
    /// Preset maximal order (used when --family preset)
    #[arg(long, default_value_t = 6)]
    m_max: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

/// Config echo embedded in every output document.
#[derive(Serialize, Clone)]
struct ConfigEcho {
    command: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    input: Option<String>,
    mode: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    tolerance: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pmax: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    m: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    n: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    seed: Option<u64>,
}

#[derive(Serialize)]
struct Output<R: Serialize> {
    config: ConfigEcho,
    result: R,
}

fn main() -> ExitCode {
    logging::init();
    let cli = Cli::parse();
    let code = match cli.command {
        Command::Check(args) => cmd_check(&args),
        Command::Decompose(args) => cmd_decompose(&args),
        Command::Eval(args) => cmd_eval(&args),
        Command::Explore(args) => cmd_explore(&args),
        Command::Selftest => selftest::run(),
    };
    match code {
        Ok(code) => ExitCode::from(code),
        Err(failure) => {
            eprintln!("hmk: {}", failure.message);
            ExitCode::from(failure.code)
        }
    }
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn bad_input(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_BAD_INPUT,
            message: message.into(),
        }
    }
}

impl From<CoreError> for Failure {
    fn from(e: CoreError) -> Self {
        let code = match &e {
            CoreError::Coverage(_)
            | CoreError::Length { .. }
            | CoreError::Domain(_)
            | CoreError::Parse(_) => EXIT_BAD_INPUT,
            CoreError::Inconsistent { .. } | CoreError::Precondition(_) => EXIT_FALSE,
            CoreError::EigenFailure(_) | CoreError::NegativeCoefficient { .. } => EXIT_NUMERICAL,
        };
        Self {
            code,
            message: e.to_string(),
        }
    }
}

fn load_doc(path: &Path) -> Result<SequenceDoc, Failure> {
    let text = fs::read_to_string(path)
        .map_err(|e| Failure::bad_input(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text)
        .map_err(|e| Failure::bad_input(format!("cannot parse {}: {e}", path.display())))
}

/// Writes atomically (temp file + rename) when a path is given, otherwise
/// prints to stdout.
fn write_output(out: Option<&Path>, text: &str) -> Result<(), Failure> {
    match out {
        None => {
            println!("{text}");
            Ok(())
        }
        Some(path) => {
            let dir = path.parent().filter(|p| !p.as_os_str().is_empty());
            let mut file = tempfile::NamedTempFile::new_in(dir.unwrap_or(Path::new(".")))
                .map_err(|e| Failure::bad_input(format!("cannot create temp file: {e}")))?;
            use std::io::Write;
            file.write_all(text.as_bytes())
                .and_then(|_| file.write_all(b"\n"))
                .map_err(|e| Failure::bad_input(format!("cannot write output: {e}")))?;
            file.persist(path)
                .map_err(|e| Failure::bad_input(format!("cannot persist output: {e}")))?;
            log::info!("wrote {}", path.display());
            Ok(())
        }
    }
}

fn emit<R: Serialize>(out: Option<&Path>, config: ConfigEcho, result: R) -> Result<(), Failure> {
    let output = Output { config, result };
    let text = to_canonical_json(&output).map_err(Failure::from)?;
    write_output(out, &text)
}

#[derive(Serialize)]
struct HankelCheckDoc {
    holds: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    violation: Option<[Vec<usize>; 2]>,
}

#[derive(Serialize)]
struct CheckResultDoc {
    verdict: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    hankel_sequence: Option<HankelCheckDoc>,
    #[serde(skip_serializing_if = "Option::is_none")]
    certificate: Option<CertificateDoc>,
    #[serde(skip_serializing_if = "Option::is_none")]
    consistent_up_to_degree: Option<usize>,
}

fn cmd_check(args: &CheckArgs) -> Result<u8, Failure> {
    let (path, requires_vector) = match (&args.vector, &args.sequence) {
        (Some(p), None) => (p, true),
        (None, Some(p)) => (p, false),
        _ => {
            return Err(Failure::bad_input(
                "pass exactly one of --vector / --sequence",
            ))
        }
    };
    let doc = load_doc(path)?;
    if requires_vector && doc.generating_vector.is_none() {
        return Err(Failure::bad_input(format!(
            "{} carries no generating_vector; pass it via --sequence instead",
            path.display()
        )));
    }
    let config = ConfigEcho {
        command: "check".into(),
        input: Some(path.display().to_string()),
        mode: args.mode.as_str().into(),
        tolerance: Some(args.tol),
        pmax: args.pmax,
        m: args.m,
        n: args.n,
        seed: None,
    };
    match args.mode {
        Mode::Float => check_in_mode::<f64>(args, &doc, config),
        Mode::Exact => check_in_mode::<BigRational>(args, &doc, config),
    }
}

fn check_in_mode<T: PsdMode + FromValueDoc>(
    args: &CheckArgs,
    doc: &SequenceDoc,
    config: ConfigEcho,
) -> Result<u8, Failure> {
    let n = args.n.unwrap_or(doc.n);
    let mut hankel_sequence = None;

    let vector: GeneratingVector<T> = if doc.kind == SequenceKind::Table {
        let sequence: MultidimensionalSequence<T> = doc.to_sequence()?;
        let coverage = sequence.coverage_degree();
        let check = sequence.is_hankel_sequence(coverage)?;
        if !check.holds {
            let (rep, offender) = check.violation.expect("violations carry the pair");
            eprintln!(
                "hankel condition violated: b_{:?} != b_{:?} at weighted degree {}",
                rep.entries(),
                offender.entries(),
                rep.weighted_degree()
            );
            let result = CheckResultDoc {
                verdict: "false".into(),
                hankel_sequence: Some(HankelCheckDoc {
                    holds: false,
                    violation: Some([rep.entries().to_vec(), offender.entries().to_vec()]),
                }),
                certificate: None,
                consistent_up_to_degree: None,
            };
            emit(args.out.as_deref(), config, result)?;
            return Ok(EXIT_FALSE);
        }
        hankel_sequence = Some(HankelCheckDoc {
            holds: true,
            violation: None,
        });
        sequence.generating_vector(coverage)?
    } else {
        doc.to_generating_vector()?
    };

    let (certificate, consistent_up_to_degree, ok) = match args.m {
        Some(m) => {
            let cert = strong_hankel_check(&vector, n, m, args.tol)?;
            let doc = CertificateDoc::from_report(&cert.report, cert.p_checked);
            (doc, None, cert.is_valid())
        }
        None => {
            let pmax = args.pmax.unwrap_or(vector.upper_index() / 2 + 1);
            let report = moment_sequence_check(&vector, pmax, args.tol)?;
            let doc = CertificateDoc::from_report(&report.report, report.p);
            let degree = report.degree_checked;
            (doc, Some(degree), report.consistent)
        }
    };

    let result = CheckResultDoc {
        verdict: if ok { "true".into() } else { "false".into() },
        hankel_sequence,
        certificate: Some(certificate),
        consistent_up_to_degree,
    };
    emit(args.out.as_deref(), config, result)?;
    Ok(if ok { EXIT_TRUE } else { EXIT_FALSE })
}

fn cmd_decompose(args: &DecomposeArgs) -> Result<u8, Failure> {
    let doc = load_doc(&args.vector)?;
    let config = ConfigEcho {
        command: "decompose".into(),
        input: Some(args.vector.display().to_string()),
        mode: args.mode.as_str().into(),
        tolerance: Some(args.tol),
        pmax: None,
        m: Some(args.m),
        n: Some(args.n),
        seed: None,
    };
    match args.mode {
        Mode::Float => decompose_in_mode::<f64>(args, &doc, config),
        Mode::Exact => decompose_in_mode::<BigRational>(args, &doc, config),
    }
}

fn decompose_in_mode<T: PsdMode + FromValueDoc>(
    args: &DecomposeArgs,
    doc: &SequenceDoc,
    config: ConfigEcho,
) -> Result<u8, Failure> {
    let vector: GeneratingVector<T> = doc.to_generating_vector()?;
    let tensor = hankel_tensor(vector, args.n, args.m)?;
    let decomposition = strong_hankel_decompose(&tensor, DEFAULT_PSD_TOL, args.tol)?;
    let report = verify_decomposition(&tensor, &decomposition, args.tol)?;
    let result = DecompositionDoc {
        m: args.m,
        n: args.n,
        atoms: decomposition
            .atoms
            .atoms()
            .iter()
            .map(|&(t, w)| hmk_core::json::AtomDoc { t, w })
            .collect(),
        augmented_c: decomposition.augmented,
        residual: ResidualDoc {
            max_abs: report.max_abs,
            max_rel: report.max_rel,
        },
    };
    emit(args.out.as_deref(), config, result)?;
    Ok(if report.pass { EXIT_TRUE } else { EXIT_FALSE })
}

#[derive(Serialize)]
struct EvalResultDoc {
    path_direct: ValueDoc,
    path_contraction: ValueDoc,
    abs_diff: f64,
}

fn cmd_eval(args: &EvalArgs) -> Result<u8, Failure> {
    let doc = load_doc(&args.sequence)?;
    let config = ConfigEcho {
        command: "eval".into(),
        input: Some(args.sequence.display().to_string()),
        mode: args.mode.as_str().into(),
        tolerance: None,
        pmax: None,
        m: Some(args.m),
        n: Some(doc.n),
        seed: None,
    };
    match args.mode {
        Mode::Float => eval_in_mode::<f64>(args, &doc, config),
        Mode::Exact => eval_in_mode::<BigRational>(args, &doc, config),
    }
}

fn eval_in_mode<T: PsdMode + FromValueDoc>(
    args: &EvalArgs,
    doc: &SequenceDoc,
    config: ConfigEcho,
) -> Result<u8, Failure> {
    let sequence: MultidimensionalSequence<T> = doc.to_sequence()?;
    let point: Vec<T> = args
        .x
        .split(',')
        .map(|part| {
            let part = part.trim();
            let value = if part.contains('/') {
                ValueDoc::Text(part.to_string())
            } else {
                ValueDoc::Number(
                    part.parse::<f64>()
                        .map_err(|_| CoreError::Parse(format!("invalid coordinate {part:?}")))?,
                )
            };
            T::from_value_doc(&value)
        })
        .collect::<hmk_core::Result<Vec<T>>>()?;
    if point.len() != doc.n {
        return Err(Failure::bad_input(format!(
            "evaluation point has {} coordinates, document dimension is {}",
            point.len(),
            doc.n
        )));
    }
    let direct = polynomial_eval_direct(&sequence, args.m, &point)?;
    let contracted = polynomial_eval_contraction(&sequence, args.m, &point)?;
    let diff = (direct.to_f64() - contracted.to_f64()).abs();
    println!("direct = {direct}");
    println!("contraction = {contracted}");
    println!("abs_diff = {diff:e}");
    if args.out.is_some() {
        let result = EvalResultDoc {
            path_direct: ValueDoc::from_scalar(&direct),
            path_contraction: ValueDoc::from_scalar(&contracted),
            abs_diff: diff,
        };
        emit(args.out.as_deref(), config, result)?;
    }
    Ok(EXIT_TRUE)
}

fn cmd_explore(args: &ExploreArgs) -> Result<u8, Failure> {
    let family: TruncatedFamily = if args.family == "preset" {
        TruncatedFamily::preset(args.n, args.m_max)
    } else {
        let text = fs::read_to_string(&args.family)
            .map_err(|e| Failure::bad_input(format!("cannot read {}: {e}", args.family)))?;
        let doc: FamilyDoc = serde_json::from_str(&text)
            .map_err(|e| Failure::bad_input(format!("cannot parse {}: {e}", args.family)))?;
        doc.to_family()
    };
    let family = TruncatedFamily {
        seed: args.seed.unwrap_or(family.seed),
        ..family
    };
    let orders: Vec<usize> = args
        .mlist
        .split(',')
        .map(|part| {
            part.trim()
                .parse::<usize>()
                .map_err(|_| Failure::bad_input(format!("invalid order {part:?} in --mlist")))
        })
        .collect::<Result<Vec<_>, Failure>>()?;
    let opts = FitOptions {
        restarts: args.restarts,
        max_iterations: args.iters,
        tolerance: args.tol,
        seed: family.seed,
    };
    let config = ConfigEcho {
        command: "explore".into(),
        input: Some(args.family.clone()),
        mode: "float".into(),
        tolerance: Some(args.tol),
        pmax: None,
        m: None,
        n: Some(family.dimension),
        seed: Some(family.seed),
    };
    log::info!(
        "exploring {} pattern indices over orders {:?}",
        family.pattern.len(),
        orders
    );
    let report = search_counterexample(&family, &orders, &opts)?;
    let result = ExploreReportDoc::from_report(&report);
    emit(args.out.as_deref(), config, result)?;
    Ok(EXIT_TRUE)
}
