//! The `thindex` command line.
//!
//! Exit codes: 0 Fredholm / success, 1 not Fredholm (or a failed oracle
//! check), 2 undecided within tolerance, 3 bad input.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;

use crate::algebra::{essential_spectrum_cloud, is_fredholm, FredholmVerdict, Fredholmness};
use crate::arcs::{CompactReal, Exponent};
use crate::config::ProblemConfig;
use crate::error::{Error, Result};
use crate::extension::{
    ext, extension_equivalence_check, outer_factor_det_gap, verify_extension_factorization,
};
use crate::index::{
    doubled_matrix_of, index_system, index_with_curve, matrix_op_with_curve, IndexReport,
    OrientedCurve,
};
use crate::multiplier::PcMultiplier;
use crate::oracle::{identity_e7_check, laurent_index_oracle, BandedSpec};

pub const EXIT_OK: i32 = 0;
pub const EXIT_NOT_FREDHOLM: i32 = 1;
pub const EXIT_UNRESOLVED: i32 = 2;
pub const EXIT_INPUT: i32 = 3;

/// Residual bound for the product identities on sections.
const E7_TOL: f64 = 1e-10;
/// Residual bound for `ext = left * middle * right`.
const FACTORIZATION_TOL: f64 = 1e-9;
/// At most this many multiplier pairs go through the product identities.
const E7_MAX_PAIRS: usize = 16;

#[derive(Debug, Parser)]
#[command(
    name = "thindex",
    version,
    about = "Fredholm verdicts and indices for Toeplitz plus Hankel operators on l^p"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Decide whether the operator is Fredholm.
    Check(CommonArgs),
    /// Fredholm verdict and index.
    Index(CommonArgs),
    /// Export the index curve as CSV.
    Curve(CommonArgs),
    /// Export the essential spectrum cloud as CSV.
    Spectrum(CommonArgs),
    /// Run the independent checks that apply to the expression.
    Oracle(CommonArgs),
}

#[derive(Debug, Clone, Args)]
pub struct CommonArgs {
    /// Problem file (JSON).
    pub config: PathBuf,
    /// Override the exponent p of the config.
    #[arg(long)]
    pub p: Option<f64>,
    /// Override the number of t samples per arc.
    #[arg(long = "grid-t")]
    pub grid_t: Option<usize>,
    /// Override the number of lambda samples per sweep.
    #[arg(long = "grid-lambda")]
    pub grid_lambda: Option<usize>,
    /// Work with the 2x2 matrix operator of twice the index (single generator only).
    #[arg(long)]
    pub doubled: bool,
    /// Output file for CSV; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Exit code for an error raised while handling a command.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::NotFredholm { .. } => EXIT_NOT_FREDHOLM,
        Error::Parse { .. }
        | Error::Config(_)
        | Error::InvalidExponent(_)
        | Error::MalformedMultiplier(_)
        | Error::CapExceeded { .. }
        | Error::DimensionMismatch(_)
        | Error::Io(_) => EXIT_INPUT,
        _ => EXIT_UNRESOLVED,
    }
}

fn verdict_code(v: &FredholmVerdict) -> i32 {
    match v.status {
        Fredholmness::Yes => EXIT_OK,
        Fredholmness::No => EXIT_NOT_FREDHOLM,
        Fredholmness::Unresolved => EXIT_UNRESOLVED,
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run_from_args<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => run(&cli.command, out, err),
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let text = e.render().to_string();
            if e.use_stderr() {
                let _ = err.write_all(text.as_bytes());
            } else {
                let _ = out.write_all(text.as_bytes());
            }
            code
        }
    }
}

pub fn run(cmd: &Command, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let result = (|| {
        let args = match cmd {
            Command::Check(a)
            | Command::Index(a)
            | Command::Curve(a)
            | Command::Spectrum(a)
            | Command::Oracle(a) => a,
        };
        let cfg = load(args)?;
        let (text, code) = match cmd {
            Command::Check(_) => cmd_check(&cfg, args.doubled)?,
            Command::Index(_) => cmd_index(&cfg, args.doubled)?,
            Command::Curve(_) => {
                let (csv, code) = cmd_curve(&cfg, args.doubled)?;
                return emit(args, csv, out).map(|_| code);
            }
            Command::Spectrum(_) => {
                let csv = cmd_spectrum(&cfg)?;
                return emit(args, csv, out).map(|_| EXIT_OK);
            }
            Command::Oracle(_) => cmd_oracle(&cfg),
        };
        out.write_all(text.as_bytes())?;
        Ok(code)
    })();
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

fn emit(args: &CommonArgs, csv: String, out: &mut dyn Write) -> Result<()> {
    match &args.out {
        Some(path) => std::fs::write(path, csv)?,
        None => out.write_all(csv.as_bytes())?,
    }
    Ok(())
}

/// Reads the config and applies command-line overrides.
pub fn load(args: &CommonArgs) -> Result<ProblemConfig> {
    let text = std::fs::read_to_string(&args.config)?;
    let mut cfg = ProblemConfig::parse(&text)?;
    if let Some(p) = args.p {
        cfg.exp = Exponent::new(p)?;
    }
    if let Some(n) = args.grid_t {
        cfg.res.t_points = n.max(2);
    }
    if let Some(n) = args.grid_lambda {
        cfg.res.lambda_points = n.max(2);
    }
    Ok(cfg)
}

fn num(x: f64) -> String {
    format!("{x:.16e}")
}

fn status_word(s: Fredholmness) -> &'static str {
    match s {
        Fredholmness::Yes => "yes",
        Fredholmness::No => "no",
        Fredholmness::Unresolved => "unresolved",
    }
}

fn verdict_text(v: &FredholmVerdict) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "fredholm: {}", status_word(v.status));
    let _ = writeln!(s, "min_abs_det: {}", num(v.min_abs_det));
    let _ = writeln!(s, "max_abs_det: {}", num(v.max_abs_det));
    let _ = writeln!(s, "witness_t_angle: {}", num(v.witness.0));
    let _ = writeln!(s, "witness_lambda: {}", v.witness.1);
    s
}

fn doubled_of(cfg: &ProblemConfig) -> Result<crate::algebra::MatrixGenerator> {
    cfg.single_generator()
        .map(doubled_matrix_of)
        .ok_or_else(|| {
            Error::Config("--doubled needs an expression that is a single T(a) + H(b)".into())
        })
}

/// Index report and curve, of the doubled matrix operator when asked.
pub fn index_and_curve(
    cfg: &ProblemConfig,
    doubled: bool,
) -> Result<(IndexReport, Option<OrientedCurve>)> {
    if doubled {
        matrix_op_with_curve(&doubled_of(cfg)?, cfg.exp, cfg.res)
    } else {
        index_with_curve(&cfg.expr, cfg.exp, cfg.res)
    }
}

pub fn cmd_check(cfg: &ProblemConfig, doubled: bool) -> Result<(String, i32)> {
    let v = if doubled {
        index_and_curve(cfg, true)?.0.verdict
    } else {
        is_fredholm(&cfg.expr, cfg.exp, cfg.res)
    };
    Ok((verdict_text(&v), verdict_code(&v)))
}

pub fn cmd_index(cfg: &ProblemConfig, doubled: bool) -> Result<(String, i32)> {
    let (report, _) = index_and_curve(cfg, doubled)?;
    let mut s = verdict_text(&report.verdict);
    let opt = |x: Option<i64>| x.map_or_else(|| "none".to_string(), |v| v.to_string());
    let _ = writeln!(s, "winding: {}", opt(report.winding));
    let _ = writeln!(s, "index: {}", opt(report.index));
    if report.fredholm {
        let _ = writeln!(s, "curve_samples: {}", report.samples);
        let _ = writeln!(s, "curve_min_modulus: {}", num(report.min_modulus));
    }
    if doubled {
        let _ = writeln!(s, "doubled: true");
    }
    Ok((s, verdict_code(&report.verdict)))
}

pub const CURVE_HEADER: &str = "segment_index,segment_kind,t_angle,lambda,re_W,im_W";
pub const SPECTRUM_HEADER: &str = "re,im,t_angle,lambda";

/// Renders a traced curve, one row per sample in traversal order.
pub fn curve_csv(curve: &OrientedCurve) -> String {
    let mut s = String::with_capacity(80 * (curve.len() + 1));
    s.push_str(CURVE_HEADER);
    s.push('\n');
    for (i, seg) in curve.segments.iter().enumerate() {
        for sample in &seg.samples {
            let lambda = sample.lambda.map(|l| l.to_string()).unwrap_or_default();
            let _ = writeln!(
                s,
                "{i},{},{},{lambda},{},{}",
                seg.kind.label(),
                num(sample.theta),
                num(sample.w.re),
                num(sample.w.im)
            );
        }
    }
    s
}

/// Reads the `(re_W, im_W)` columns back from [`curve_csv`] output.
pub fn parse_curve_csv(text: &str) -> Result<Vec<Complex64>> {
    let mut lines = text.lines();
    if lines.next() != Some(CURVE_HEADER) {
        return Err(Error::Config("missing curve CSV header".into()));
    }
    lines
        .filter(|l| !l.is_empty())
        .map(|l| {
            let cols: Vec<&str> = l.split(',').collect();
            if cols.len() != 6 {
                return Err(Error::Config(format!("expected 6 columns in {l:?}")));
            }
            let f = |s: &str| {
                s.parse::<f64>()
                    .map_err(|_| Error::Config(format!("bad number {s:?}")))
            };
            Ok(Complex64::new(f(cols[4])?, f(cols[5])?))
        })
        .collect()
}

/// The curve as CSV with the verdict's exit code. Not Fredholm is an error so
/// nothing gets written.
pub fn cmd_curve(cfg: &ProblemConfig, doubled: bool) -> Result<(String, i32)> {
    let (report, curve) = index_and_curve(cfg, doubled)?;
    match curve {
        Some(c) => Ok((curve_csv(&c), EXIT_OK)),
        None => Err(Error::NotFredholm {
            theta: report.verdict.witness.0,
            lambda: report.verdict.witness.1.to_string(),
        }),
    }
}

pub fn cmd_spectrum(cfg: &ProblemConfig) -> Result<String> {
    let pts = essential_spectrum_cloud(&cfg.expr, cfg.exp, cfg.res);
    let mut s = String::with_capacity(80 * (pts.len() + 1));
    s.push_str(SPECTRUM_HEADER);
    s.push('\n');
    for p in pts {
        let lambda = p
            .lambda
            .map(|l: CompactReal| l.to_string())
            .unwrap_or_default();
        let _ = writeln!(
            s,
            "{},{},{},{lambda}",
            num(p.z.re),
            num(p.z.im),
            num(p.theta)
        );
    }
    Ok(s)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CheckOutcome {
    Pass,
    Fail,
    Skip,
}

impl CheckOutcome {
    fn label(self) -> &'static str {
        match self {
            CheckOutcome::Pass => "PASS",
            CheckOutcome::Fail => "FAIL",
            CheckOutcome::Skip => "SKIP",
        }
    }
}

/// Runs every applicable oracle; any failure gives exit code 1.
pub fn cmd_oracle(cfg: &ProblemConfig) -> (String, i32) {
    let mut results: Vec<(CheckOutcome, String, String)> = Vec::new();
    let mut push =
        |o: CheckOutcome, name: &str, detail: String| results.push((o, name.to_string(), detail));

    // Laurent polynomial index against the winding formula
    match cfg.single_generator() {
        Some(g) if g.b == PcMultiplier::zero() => match BandedSpec::from_multiplier(&g.a) {
            Some(spec) => match laurent_index_oracle(&spec) {
                Ok(expected) => match index_with_curve(&cfg.expr, cfg.exp, cfg.res) {
                    Ok((r, _)) if r.fredholm => {
                        let got = r.index.unwrap_or_default();
                        let o = if got == expected {
                            CheckOutcome::Pass
                        } else {
                            CheckOutcome::Fail
                        };
                        push(o, "laurent", format!("index {got}, oracle {expected}"));
                    }
                    Ok((r, _)) => push(
                        CheckOutcome::Fail,
                        "laurent",
                        format!(
                            "oracle index {expected} but the scan says fredholm: {}",
                            status_word(r.verdict.status)
                        ),
                    ),
                    Err(e) => push(CheckOutcome::Fail, "laurent", format!("index failed: {e}")),
                },
                Err(e) => push(CheckOutcome::Skip, "laurent", e.to_string()),
            },
            None => push(
                CheckOutcome::Skip,
                "laurent",
                "symbol is not a trigonometric polynomial".into(),
            ),
        },
        _ => push(
            CheckOutcome::Skip,
            "laurent",
            "expression is not a single Toeplitz operator".into(),
        ),
    }

    // product identities on finite sections
    let banded: Vec<(&String, &PcMultiplier)> = cfg
        .multipliers
        .iter()
        .filter(|(_, m)| m.is_trig())
        .collect();
    if banded.is_empty() {
        push(
            CheckOutcome::Skip,
            "e7",
            "no trigonometric multipliers".into(),
        );
    }
    let pairs = banded
        .iter()
        .flat_map(|a| banded.iter().map(move |b| (*a, *b)))
        .take(E7_MAX_PAIRS);
    for ((na, a), (nb, b)) in pairs {
        let w = a.bandwidth().unwrap_or(0) + b.bandwidth().unwrap_or(0);
        let n = 4 * w + 16;
        let name = format!("e7[{na},{nb}]");
        match identity_e7_check(a, b, n) {
            Ok(r) => {
                let worst = r.toeplitz.max(r.hankel);
                let o = if worst <= E7_TOL {
                    CheckOutcome::Pass
                } else {
                    CheckOutcome::Fail
                };
                push(
                    o,
                    &name,
                    format!("residuals {} {}", num(r.toeplitz), num(r.hankel)),
                );
            }
            Err(e) => push(CheckOutcome::Skip, &name, e.to_string()),
        }
    }

    // linear extension
    match cfg.generator_matrix() {
        Some(beta) => {
            let res = verify_extension_factorization(&beta, cfg.exp, cfg.res);
            let o = if res <= FACTORIZATION_TOL {
                CheckOutcome::Pass
            } else {
                CheckOutcome::Fail
            };
            push(
                o,
                "extension-factorization",
                format!("residual {}", num(res)),
            );
            let gap = outer_factor_det_gap(&beta, cfg.exp, cfg.res);
            let o = if gap <= FACTORIZATION_TOL {
                CheckOutcome::Pass
            } else {
                CheckOutcome::Fail
            };
            push(
                o,
                "extension-outer-factors",
                format!("max |det - 1| {}", num(gap)),
            );
            let eq = extension_equivalence_check(&beta, cfg.exp, cfg.res);
            let o = if eq.agrees() {
                CheckOutcome::Pass
            } else {
                CheckOutcome::Fail
            };
            push(
                o,
                "extension-invertibility",
                format!(
                    "{} points, {} disagreements",
                    eq.points,
                    eq.disagreements.len()
                ),
            );
            if eq.el_fredholm && eq.ext_fredholm {
                let pair = index_with_curve(&cfg.expr, cfg.exp, cfg.res)
                    .and_then(|(r, _)| Ok((r, index_system(&ext(&beta), cfg.exp, cfg.res)?)));
                match pair {
                    Ok((a, b)) => {
                        let o = if a.index == b.index {
                            CheckOutcome::Pass
                        } else {
                            CheckOutcome::Fail
                        };
                        let show = |x: Option<i64>| {
                            x.map_or_else(|| "none".to_string(), |v| v.to_string())
                        };
                        push(
                            o,
                            "extension-index",
                            format!("{} vs {}", show(a.index), show(b.index)),
                        );
                    }
                    Err(e) => push(CheckOutcome::Fail, "extension-index", e.to_string()),
                }
            }
        }
        None => push(
            CheckOutcome::Skip,
            "extension",
            "expression is not a sum of products of generators".into(),
        ),
    }

    let mut s = String::new();
    let mut failed = 0;
    for (o, name, detail) in &results {
        let _ = writeln!(s, "{} {name}: {detail}", o.label());
        failed += usize::from(*o == CheckOutcome::Fail);
    }
    let count = |k| results.iter().filter(|r| r.0 == k).count();
    let _ = writeln!(
        s,
        "summary: {} passed, {failed} failed, {} skipped",
        count(CheckOutcome::Pass),
        count(CheckOutcome::Skip)
    );
    (
        s,
        if failed > 0 {
            EXIT_NOT_FREDHOLM
        } else {
            EXIT_OK
        },
    )
}
