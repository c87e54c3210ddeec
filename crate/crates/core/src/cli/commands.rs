use std::ffi::OsString;
use std::fs;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::balancer::{alternating_balance_with, BalanceOptions, BoundKind, Verdict};
use crate::cli::format::{
    to_pretty_json, CertificateBody, CertificateFile, InstanceFile, Mode, OracleFile,
    CERTIFICATE_FORMAT, ORACLE_FORMAT,
};
use crate::cli::generate::{generate, GenParams, NormKind};
use crate::cli::verify::verify_certificate;
use crate::oracle::{self, Quantity};
use crate::streaming::{stream_run_with, StreamOptions};
use crate::tolerance::{Tolerances, DEFAULT_BOUND_TOLERANCE, DEFAULT_UNIT_TOLERANCE};
use crate::VERSION;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExitCode {
    Success = 0,
    Failure = 1,
    Usage = 2,
}

#[derive(Debug, Parser)]
#[command(name = "signbal", version, about = "Balance planar unit vectors with certified signed-sum bounds")]
pub struct Cli {
    /// Absolute tolerance added to every bound.
    #[arg(long, global = true, env = "SIGNBAL_TOLERANCE", default_value_t = DEFAULT_BOUND_TOLERANCE)]
    pub tolerance: f64,

    /// Admission window for unit vectors: |‖v‖ − 1| ≤ this.
    #[arg(long, global = true, default_value_t = DEFAULT_UNIT_TOLERANCE)]
    pub unit_tolerance: f64,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Sign an odd set of unit vectors so the signed sum has norm at most one.
    Balance(BalanceArgs),
    /// Sign a sequence online so every odd prefix has norm at most two.
    Stream(StreamArgs),
    /// Exhaustive minimum of a signed-sum quantity.
    Oracle(OracleArgs),
    /// Generate a seeded random instance of unit vectors.
    Gen(GenArgs),
    /// Re-check every claim in a certificate.
    Verify(VerifyArgs),
}

#[derive(Debug, Args)]
pub struct BalanceArgs {
    /// Instance file, or `-` for standard input.
    pub input: PathBuf,
    /// Also verify in the norm of the hull of ±V.
    #[arg(long)]
    pub p_norm: bool,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct StreamArgs {
    pub input: PathBuf,
    /// Accept an even-length sequence; the last vector gets sign +1 with no bound claimed.
    #[arg(long)]
    pub allow_even: bool,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct OracleArgs {
    pub input: PathBuf,
    #[arg(long, value_enum, default_value_t = QuantityArg::MinSignedSum)]
    pub quantity: QuantityArg,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum QuantityArg {
    MinSignedSum,
    MinMaxOddPrefixFixedOrder,
    MinMaxOddPrefixAnyOrder,
}

impl From<QuantityArg> for Quantity {
    fn from(q: QuantityArg) -> Quantity {
        match q {
            QuantityArg::MinSignedSum => Quantity::MinSignedSum,
            QuantityArg::MinMaxOddPrefixFixedOrder => Quantity::MinMaxOddPrefixFixedOrder,
            QuantityArg::MinMaxOddPrefixAnyOrder => Quantity::MinMaxOddPrefixAnyOrder,
        }
    }
}

#[derive(Debug, Args)]
pub struct GenArgs {
    #[arg(long, value_enum)]
    pub norm: NormKind,
    /// Exponent for `--norm lp`.
    #[arg(long, required_if_eq("norm", "lp"))]
    pub p: Option<f64>,
    #[arg(long)]
    pub n: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_enum, default_value_t = Mode::Set)]
    pub mode: Mode,
    /// Output path; standard output when absent.
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    pub certificate: PathBuf,
}

/// Error carried to the top level, tagged with its exit code.
struct Fail {
    code: ExitCode,
    message: String,
}

fn usage(message: impl std::fmt::Display) -> Fail {
    Fail {
        code: ExitCode::Usage,
        message: message.to_string(),
    }
}

struct Io<'a> {
    stdin: &'a mut dyn Read,
    stdout: &'a mut dyn Write,
}

/// Parses `args` (including the program name) and runs the subcommand.
pub fn run<I, T>(args: I, stdin: &mut dyn Read, stdout: &mut dyn Write, stderr: &mut dyn Write) -> ExitCode
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => {
                    let _ = write!(stdout, "{e}");
                    return ExitCode::Success;
                }
                _ => ExitCode::Usage,
            };
            let _ = write!(stderr, "{e}");
            return code;
        }
    };
    let mut io = Io { stdin, stdout };
    match dispatch(&cli, &mut io) {
        Ok(code) => code,
        Err(fail) => {
            let _ = writeln!(stderr, "error: {}", fail.message);
            fail.code
        }
    }
}

fn dispatch(cli: &Cli, io: &mut Io<'_>) -> Result<ExitCode, Fail> {
    if !(cli.tolerance.is_finite() && cli.tolerance >= 0.0) {
        return Err(usage(format!("invalid tolerance {}", cli.tolerance)));
    }
    if !(cli.unit_tolerance.is_finite() && cli.unit_tolerance >= 0.0) {
        return Err(usage(format!("invalid unit tolerance {}", cli.unit_tolerance)));
    }
    let tolerances = Tolerances {
        bound: cli.tolerance,
        unit: cli.unit_tolerance,
    };
    match &cli.command {
        Command::Balance(args) => cmd_balance(args, tolerances, io),
        Command::Stream(args) => cmd_stream(args, tolerances, io),
        Command::Oracle(args) => cmd_oracle(args, io),
        Command::Gen(args) => cmd_gen(args, io),
        Command::Verify(args) => cmd_verify(args, io),
    }
}

fn read_input(path: &Path, io: &mut Io<'_>) -> Result<String, Fail> {
    if path == Path::new("-") {
        let mut s = String::new();
        io.stdin
            .read_to_string(&mut s)
            .map_err(|e| usage(format!("reading standard input: {e}")))?;
        Ok(s)
    } else {
        fs::read_to_string(path).map_err(|e| usage(format!("reading {}: {e}", path.display())))
    }
}

fn read_instance(path: &Path, io: &mut Io<'_>) -> Result<InstanceFile, Fail> {
    let text = read_input(path, io)?;
    serde_json::from_str(&text).map_err(|e| usage(format!("malformed instance file: {e}")))
}

fn write_output(path: &Path, contents: &str) -> Result<(), Fail> {
    fs::write(path, contents).map_err(|e| usage(format!("writing {}: {e}", path.display())))
}

fn say(io: &mut Io<'_>, line: String) -> Result<(), Fail> {
    writeln!(io.stdout, "{line}").map_err(|e| usage(format!("writing standard output: {e}")))
}

fn cmd_balance(args: &BalanceArgs, tolerances: Tolerances, io: &mut Io<'_>) -> Result<ExitCode, Fail> {
    let instance = read_instance(&args.input, io)?;
    if instance.mode != Mode::Set {
        return Err(usage("balance expects an instance with mode \"set\""));
    }
    let norm = instance.validate().map_err(usage)?;
    let options = BalanceOptions {
        tolerances,
        hull_check: args.p_norm,
    };
    let cert = alternating_balance_with(&norm, &instance.vectors, &options).map_err(usage)?;
    let verdicts = cert.verdicts();
    let summary = format!(
        "balance: n={} norm={} signed_sum_norm={:.17} max_odd_prefix={:.17} max_prefix={:.17} {}",
        instance.vectors.len(),
        norm.label(),
        cert.prefix_norms.last().copied().unwrap_or(0.0),
        cert.max_odd_prefix_norm(),
        cert.max_prefix_norm(),
        verdict_word(&verdicts),
    );
    let file = CertificateFile {
        format: CERTIFICATE_FORMAT.into(),
        version: VERSION.into(),
        input_hash: instance.hash(),
        instance,
        tolerance: tolerances.bound,
        unit_tolerance: tolerances.unit,
        result: CertificateBody::Balance(cert),
        verdicts,
    };
    finish(file, args.output.as_deref(), summary, io)
}

fn cmd_stream(args: &StreamArgs, tolerances: Tolerances, io: &mut Io<'_>) -> Result<ExitCode, Fail> {
    let instance = read_instance(&args.input, io)?;
    if instance.mode != Mode::Sequence {
        return Err(usage("stream expects an instance with mode \"sequence\""));
    }
    let norm = instance.validate().map_err(usage)?;
    let options = StreamOptions {
        tolerances,
        allow_even: args.allow_even,
    };
    let outcome = stream_run_with(&norm, &instance.vectors, &options).map_err(usage)?;
    let verdicts = vec![stream_verdict(&outcome)];
    let summary = format!(
        "stream: n={} norm={} odd_prefixes={} max_odd_prefix={:.17} {}",
        instance.vectors.len(),
        norm.label(),
        outcome.odd_prefix_norms.len(),
        outcome.max_odd_prefix_norm(),
        verdict_word(&verdicts),
    );
    let file = CertificateFile {
        format: CERTIFICATE_FORMAT.into(),
        version: VERSION.into(),
        input_hash: instance.hash(),
        instance,
        tolerance: tolerances.bound,
        unit_tolerance: tolerances.unit,
        result: CertificateBody::Stream(outcome),
        verdicts,
    };
    finish(file, args.output.as_deref(), summary, io)
}

pub(crate) fn stream_verdict(outcome: &crate::streaming::StreamOutcome) -> Verdict {
    Verdict::new(
        BoundKind::OddPrefix,
        "input",
        outcome.bound_odd_prefix,
        outcome.tolerance + outcome.admission_slack,
        outcome.max_odd_prefix_norm(),
    )
}

fn verdict_word(verdicts: &[Verdict]) -> &'static str {
    if verdicts.iter().all(|v| v.pass) {
        "verified"
    } else {
        "VIOLATED"
    }
}

fn finish(
    file: CertificateFile,
    output: Option<&Path>,
    summary: String,
    io: &mut Io<'_>,
) -> Result<ExitCode, Fail> {
    if let Some(path) = output {
        write_output(path, &to_pretty_json(&file))?;
    }
    say(io, summary)?;
    Ok(if file.all_pass() {
        ExitCode::Success
    } else {
        ExitCode::Failure
    })
}

fn cmd_oracle(args: &OracleArgs, io: &mut Io<'_>) -> Result<ExitCode, Fail> {
    let instance = read_instance(&args.input, io)?;
    let norm = instance.validate().map_err(usage)?;
    let quantity: Quantity = args.quantity.into();
    let id = instance
        .meta
        .get("id")
        .and_then(|v| v.as_str())
        .unwrap_or_default()
        .to_string();
    let report = oracle::run(quantity, &norm, &instance.vectors)
        .map_err(usage)?
        .with_id(id);
    let summary = format!(
        "oracle: n={} norm={} quantity={} value={:.17} candidates={}",
        instance.vectors.len(),
        norm.label(),
        serde_json::to_value(quantity)
            .ok()
            .and_then(|v| v.as_str().map(String::from))
            .unwrap_or_default(),
        report.value,
        report.search_size
    );
    let file = OracleFile {
        format: ORACLE_FORMAT.into(),
        version: VERSION.into(),
        input_hash: instance.hash(),
        instance,
        report,
    };
    if let Some(path) = &args.output {
        write_output(path, &to_pretty_json(&file))?;
    }
    say(io, summary)?;
    Ok(ExitCode::Success)
}

fn cmd_gen(args: &GenArgs, io: &mut Io<'_>) -> Result<ExitCode, Fail> {
    let params = GenParams {
        norm: args.norm,
        p: args.p,
        n: args.n,
        seed: args.seed,
        mode: args.mode,
    };
    let instance = generate(&params).map_err(usage)?;
    let text = to_pretty_json(&instance);
    match &args.output {
        Some(path) => write_output(path, &text)?,
        None => io
            .stdout
            .write_all(text.as_bytes())
            .map_err(|e| usage(format!("writing standard output: {e}")))?,
    }
    Ok(ExitCode::Success)
}

fn cmd_verify(args: &VerifyArgs, io: &mut Io<'_>) -> Result<ExitCode, Fail> {
    let text = read_input(&args.certificate, io)?;
    let file: CertificateFile =
        serde_json::from_str(&text).map_err(|e| usage(format!("malformed certificate: {e}")))?;
    if file.format != CERTIFICATE_FORMAT {
        return Err(usage(format!("unknown certificate format {:?}", file.format)));
    }
    let norm = file.instance.validate().map_err(usage)?;
    match verify_certificate(&file, &norm) {
        Ok(()) => {
            let kind = match file.result {
                CertificateBody::Balance(_) => "balance",
                CertificateBody::Stream(_) => "stream",
            };
            say(
                io,
                format!(
                    "verify: ok ({kind}, n={}, {} verdicts reproduced)",
                    file.instance.vectors.len(),
                    file.verdicts.len()
                ),
            )?;
            Ok(ExitCode::Success)
        }
        Err(mismatches) => {
            say(io, format!("verify: FAILED ({} mismatches)", mismatches.len()))?;
            Err(Fail {
                code: ExitCode::Failure,
                message: mismatches.join("; "),
            })
        }
    }
}
