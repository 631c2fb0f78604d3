//! Command-line front end.
//!
//! Exit codes: 0 success, 2 usage error, 3 input parse error, 4 structural
//! validation failure, 5 I/O error, 6 invalid parameter, 7 runtime failure.

use crate::channel::SnrKind;
use crate::codec::{Algorithm, CodeEncoder, DecoderConfig, QuantFormat, Quantization};
use crate::cvr::{
    activity_power_proxy, default_schedule, latency_reduction, throughput_model, PipelineConfig,
    RatePolicy, DEFAULT_THRESHOLD_DB, REFERENCE_POWER_SAVING, REFERENCE_THROUGHPUT_FULL,
    REFERENCE_THROUGHPUT_SHORT,
};
use crate::extension::{build_extension_with, validate_structure, BandOrder, ExtendedCode};
use crate::matrix::{
    expand_base, load_base_matrix, write_alist, write_base_matrix, BaseMatrix, MatrixError,
};
use crate::sim::{
    csv_writer, run_sweep, stage_rows, FerPoint, SimCode, SimError, SnrRange, StoppingRule,
    SweepConfig, STAGE_CSV_HEADER,
};
use clap::{Args, Parser, Subcommand, ValueEnum};
use sha2::{Digest, Sha256};
use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use thiserror::Error;

const EXIT_CODES: &str = "Exit codes:
  0  success
  2  usage error (unknown flag, missing argument)
  3  input file could not be parsed
  4  structural validation failed
  5  I/O error (unreadable input, unwritable output)
  6  invalid parameter value
  7  runtime failure (encoder or simulation error)";

/// Bundled rate-3/4 WiMAX mother matrix (n = 576, z = 24).
pub const BUNDLED_MOTHER: &str = include_str!("../data/wimax_r34a_n576.txt");

#[derive(Debug, Parser)]
#[command(
    name = "cvr-ldpc",
    version,
    about = "Rate-compatible LDPC extension, decoding and FER/BER simulation",
    after_help = EXIT_CODES
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Extend a mother base matrix and validate the result.
    #[command(after_help = EXIT_CODES)]
    Build(BuildArgs),
    /// Monte Carlo FER/BER sweep of a fixed-rate code.
    #[command(after_help = EXIT_CODES)]
    Simulate(SimulateArgs),
    /// Monte Carlo sweep with incremental-parity decoding of an extended code.
    #[command(after_help = EXIT_CODES)]
    Cvr(CvrArgs),
    /// Latency, activity and throughput model of the pipelined decoder.
    #[command(after_help = EXIT_CODES)]
    Pipeline(PipelineArgs),
}

#[derive(Debug, Args)]
pub struct BuildArgs {
    /// Mother base matrix file.
    #[arg(long)]
    pub mother: PathBuf,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    /// Output base matrix; `.alist` and `.report.txt` files are written next to it.
    #[arg(long)]
    pub out: PathBuf,
    /// Placement of the identity and permutation bands under the mother parity part.
    #[arg(long, default_value = "d-above-f")]
    pub order: BandOrder,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DecoderKind {
    /// Offset min-sum.
    Oms,
    /// Sum-product (floating point only).
    Sp,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SnrKindArg {
    Ebn0,
    Esn0,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    /// SNR points in dB as `start:step:stop` or a single value.
    #[arg(long, allow_hyphen_values = true)]
    pub snr: SnrRange,
    #[arg(long, value_enum, default_value = "ebn0")]
    pub snr_kind: SnrKindArg,
    /// Code rate used to convert Eb/N0 into a noise level.
    #[arg(long)]
    pub channel_rate: Option<f64>,
    #[arg(long, default_value_t = 21)]
    pub max_iter: usize,
    #[arg(long, default_value_t = 0.5)]
    pub beta: f64,
    #[arg(long, value_enum, default_value = "oms")]
    pub decoder: DecoderKind,
    /// `float` or fixed point `total:frac`.
    #[arg(long, default_value = "6:2")]
    pub quant: String,
    #[arg(long, default_value_t = 100)]
    pub min_frame_errors: u64,
    #[arg(long, default_value_t = 1_000_000)]
    pub max_frames: u64,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    #[arg(long, default_value_t = 1)]
    pub workers: usize,
    /// Frames handed to the worker pool at a time.
    #[arg(long, default_value_t = 256)]
    pub batch_size: usize,
    /// Output CSV; a `.meta.json` sidecar is written next to it.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    /// Base matrix file (plain or extended).
    #[arg(long)]
    pub code: PathBuf,
    /// Extension rows to use when the code file is an extended code
    /// (default: all).
    #[arg(long)]
    pub k: Option<usize>,
    #[command(flatten)]
    pub sweep: SweepArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PolicyKind {
    ShortFirst,
    FullOnly,
    SnrThreshold,
}

#[derive(Debug, Args)]
pub struct CvrArgs {
    /// Extended base matrix file written by `build`.
    #[arg(long)]
    pub code: PathBuf,
    #[arg(long, value_enum, default_value = "short-first")]
    pub policy: PolicyKind,
    /// Switch point of the threshold policy in dB.
    #[arg(long, default_value_t = DEFAULT_THRESHOLD_DB, allow_hyphen_values = true)]
    pub threshold: f64,
    /// Recent frames consulted by the threshold policy.
    #[arg(long, default_value_t = 8)]
    pub window: usize,
    /// Comma-separated extension row counts (default: 0, half, all).
    #[arg(long, value_delimiter = ',')]
    pub schedule: Option<Vec<usize>>,
    #[command(flatten)]
    pub sweep: SweepArgs,
}

#[derive(Debug, Args)]
pub struct PipelineArgs {
    /// Extended code for the activity report (default: bundled mother, seed 42).
    #[arg(long)]
    pub code: Option<PathBuf>,
    #[arg(long, default_value_t = 80e6)]
    pub clock_hz: f64,
    #[arg(long, default_value_t = 256)]
    pub bus_bits: usize,
    #[arg(long, default_value_t = 6)]
    pub llr_bits: usize,
    /// Short frame length (default: mother code length).
    #[arg(long)]
    pub n_short: Option<usize>,
    /// Full frame length (default: fully extended length).
    #[arg(long)]
    pub n_full: Option<usize>,
    #[arg(long, default_value_t = 2)]
    pub frames_in_flight: usize,
    #[arg(long, default_value_t = 2)]
    pub cycles_per_iteration: usize,
    #[arg(long, default_value_t = 21)]
    pub max_iter: usize,
    #[arg(long, default_value_t = 0)]
    pub overhead_cycles: usize,
    /// Average iteration counts for the throughput table.
    #[arg(long, value_delimiter = ',', default_value = "1,5,21")]
    pub avg_iterations: Vec<f64>,
    /// Also write the tables as CSV to this file.
    #[arg(long)]
    pub csv: Option<PathBuf>,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("validation failed: {0}")]
    Validation(String),
    #[error("I/O error: {0}")]
    Io(String),
    #[error("invalid parameter: {0}")]
    InvalidParam(String),
    #[error("{0}")]
    Runtime(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Parse(_) => 3,
            CliError::Validation(_) => 4,
            CliError::Io(_) => 5,
            CliError::InvalidParam(_) => 6,
            CliError::Runtime(_) => 7,
        }
    }
}

fn io_err(path: &Path, e: io::Error) -> CliError {
    CliError::Io(format!("{}: {e}", path.display()))
}

impl From<SimError> for CliError {
    fn from(e: SimError) -> Self {
        match e {
            SimError::Config(m) => CliError::InvalidParam(m),
            SimError::Io(e) => CliError::Io(e.to_string()),
            SimError::Cvr(e) => CliError::InvalidParam(e.to_string()),
            SimError::Codec(e) => CliError::Runtime(e.to_string()),
        }
    }
}

/// Runs a parsed command, writing human-readable output to `out`.
pub fn run(cli: Cli, out: &mut dyn Write) -> Result<(), CliError> {
    match cli.command {
        Command::Build(a) => cmd_build(&a, out),
        Command::Simulate(a) => cmd_simulate(&a, out),
        Command::Cvr(a) => cmd_cvr(&a, out),
        Command::Pipeline(a) => cmd_pipeline(&a, out),
    }
}

fn say(out: &mut dyn Write, text: impl AsRef<str>) -> Result<(), CliError> {
    writeln!(out, "{}", text.as_ref()).map_err(|e| CliError::Io(e.to_string()))
}

/// A base matrix file together with its `# key: value` header comments and
/// raw bytes.
struct CodeFile {
    base: BaseMatrix,
    meta: BTreeMap<String, String>,
    bytes: Vec<u8>,
}

fn read_code_file(path: &Path) -> Result<CodeFile, CliError> {
    let bytes = fs::read(path).map_err(|e| io_err(path, e))?;
    let base = load_base_matrix(bytes.as_slice()).map_err(|e| match e {
        MatrixError::Io(e) => CliError::Io(format!("{}: {e}", path.display())),
        other => CliError::Parse(format!("{}: {other}", path.display())),
    })?;
    let text = String::from_utf8_lossy(&bytes);
    let meta = text
        .lines()
        .filter_map(|l| l.trim().strip_prefix('#'))
        .filter_map(|l| l.split_once(':'))
        .map(|(k, v)| (k.trim().to_string(), v.trim().to_string()))
        .collect();
    Ok(CodeFile { base, meta, bytes })
}

impl CodeFile {
    /// The extended code described by the header, if the file carries one.
    fn extended(&self) -> Result<Option<ExtendedCode>, CliError> {
        let Some(m1) = self.meta.get("mother-block-rows") else {
            return Ok(None);
        };
        let bad = |what: &str, v: &str| CliError::Parse(format!("invalid {what} `{v}` in header"));
        let m1: usize = m1.parse().map_err(|_| bad("mother-block-rows", m1))?;
        let seed = match self.meta.get("seed") {
            Some(s) => s.parse().map_err(|_| bad("seed", s))?,
            None => 0,
        };
        let order = match self.meta.get("band-order") {
            Some(s) => s.parse().map_err(|_| bad("band-order", s))?,
            None => BandOrder::default(),
        };
        let code = ExtendedCode::from_extended_base(self.base.clone(), m1, order, seed)
            .map_err(|e| CliError::Validation(e.to_string()))?;
        let report = validate_structure(&code);
        if !report.all_passed() {
            return Err(CliError::Validation(format!("extended code fails checks:\n{report}")));
        }
        Ok(Some(code))
    }
}

fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes)
        .iter()
        .fold(String::new(), |mut s, b| {
            let _ = write!(s, "{b:02x}");
            s
        })
}

fn with_suffix(path: &Path, suffix: &str) -> PathBuf {
    let mut s = path.as_os_str().to_owned();
    s.push(suffix);
    PathBuf::from(s)
}

fn write_file(path: &Path, contents: &[u8]) -> Result<(), CliError> {
    fs::write(path, contents).map_err(|e| io_err(path, e))
}

fn cmd_build(a: &BuildArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let file = read_code_file(&a.mother)?;
    let code = build_extension_with(&file.base, a.seed, a.order)
        .map_err(|e| CliError::Validation(e.to_string()))?;
    let report = validate_structure(&code);
    let mother_name = a
        .mother
        .file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_default();

    let mut matrix = Vec::new();
    write_base_matrix(code.base(), &code.header_comments(&mother_name), &mut matrix)
        .expect("write to memory");
    let mut alist = Vec::new();
    write_alist(code.assembled(), &mut alist).expect("write to memory");
    let h = code.assembled();
    let summary = format!(
        "mother: {mother_name} ({}x{}, z={})\nextended: {}x{} ({}x{} blocks), rate {}/{}\n{report}",
        code.mother_checks(),
        code.mother_len(),
        code.z(),
        h.m(),
        h.n(),
        code.base().rows(),
        code.base().cols(),
        code.info_len(),
        h.n(),
    );

    write_file(&a.out, &matrix)?;
    write_file(&with_suffix(&a.out, ".alist"), &alist)?;
    write_file(&with_suffix(&a.out, ".report.txt"), summary.as_bytes())?;
    say(out, summary.trim_end())?;
    if !report.all_passed() {
        let names: Vec<&str> = report.failures().map(|c| c.name).collect();
        return Err(CliError::Validation(names.join(", ")));
    }
    Ok(())
}

fn parse_quant(s: &str) -> Result<Quantization, CliError> {
    if s.eq_ignore_ascii_case("float") {
        return Ok(Quantization::Float);
    }
    s.parse::<QuantFormat>()
        .map(Quantization::Fixed)
        .map_err(|e| CliError::InvalidParam(format!("--quant {s}: {e}")))
}

fn decoder_config(s: &SweepArgs) -> Result<DecoderConfig, CliError> {
    let alg = match s.decoder {
        DecoderKind::Oms => Algorithm::OffsetMinSum,
        DecoderKind::Sp => Algorithm::SumProduct,
    };
    DecoderConfig::new(s.max_iter, s.beta, alg, parse_quant(&s.quant)?)
        .map_err(|e| CliError::InvalidParam(e.to_string()))
}

fn sweep_config(s: &SweepArgs, default_rate: f64) -> Result<SweepConfig, CliError> {
    let decoder = decoder_config(s)?;
    let rate = s.channel_rate.unwrap_or(default_rate);
    if !(rate > 0.0 && rate <= 1.0) {
        return Err(CliError::InvalidParam(format!("channel rate {rate} outside (0, 1]")));
    }
    if s.workers == 0 || s.batch_size == 0 {
        return Err(CliError::InvalidParam("workers and batch size must be positive".into()));
    }
    let mut cfg = SweepConfig::new(decoder, s.snr, rate);
    cfg.snr_kind = match s.snr_kind {
        SnrKindArg::Ebn0 => SnrKind::EbN0,
        SnrKindArg::Esn0 => SnrKind::EsN0,
    };
    cfg.stop = StoppingRule::new(s.min_frame_errors, s.max_frames)?;
    cfg.master_seed = s.seed;
    cfg.workers = s.workers;
    cfg.batch_size = s.batch_size;
    Ok(cfg)
}

fn decoder_json(d: &DecoderConfig) -> serde_json::Value {
    let (alg, quant) = (
        match d.algorithm() {
            Algorithm::OffsetMinSum => "oms",
            Algorithm::SumProduct => "sp",
        },
        match d.quantization() {
            Quantization::Float => "float".to_string(),
            Quantization::Fixed(q) => q.to_string(),
        },
    );
    serde_json::json!({
        "algorithm": alg,
        "max_iterations": d.max_iterations(),
        "beta": d.beta(),
        "quantization": quant,
    })
}

fn write_metadata(
    csv: &Path,
    command: &str,
    cfg: &SweepConfig,
    code_path: &Path,
    code_bytes: &[u8],
    extra: serde_json::Value,
) -> Result<(), CliError> {
    let created = std::time::SystemTime::now()
        .duration_since(std::time::UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0);
    let meta = serde_json::json!({
        "tool": env!("CARGO_PKG_NAME"),
        "version": env!("CARGO_PKG_VERSION"),
        "command": command,
        "created_unix": created,
        "seed": cfg.master_seed,
        "workers": cfg.workers,
        "batch_size": cfg.batch_size,
        "snr": {
            "start": cfg.snr.start,
            "step": cfg.snr.step,
            "stop": cfg.snr.stop,
            "kind": match cfg.snr_kind { SnrKind::EbN0 => "ebn0", SnrKind::EsN0 => "esn0" },
        },
        "channel_rate": cfg.channel_rate,
        "stopping": {
            "min_frame_errors": cfg.stop.min_frame_errors,
            "max_frames": cfg.stop.max_frames,
        },
        "decoder": decoder_json(&cfg.decoder),
        "code_files": [{
            "path": code_path.display().to_string(),
            "sha256": sha256_hex(code_bytes),
        }],
        "run": extra,
    });
    let text = serde_json::to_string_pretty(&meta).expect("serializable metadata") + "\n";
    write_file(&with_suffix(csv, ".meta.json"), text.as_bytes())
}

fn progress(out: &mut dyn Write, p: &FerPoint) -> Result<(), CliError> {
    say(
        out,
        format!(
            "snr {:.2} dB: frames {} frame errors {} fer {:.3e} (+/- {:.1e}) ber {:.3e} avg it {:.2}",
            p.snr_db,
            p.frames_run,
            p.frame_errors,
            p.fer(),
            p.fer_ci95(),
            p.ber(),
            p.avg_iterations()
        ),
    )
}

fn create(path: &Path) -> Result<BufWriter<fs::File>, CliError> {
    fs::File::create(path)
        .map(BufWriter::new)
        .map_err(|e| io_err(path, e))
}

/// Runs the sweep, streaming CSV rows (and per-stage rows when `stages`
/// is given) as points finish.
fn sweep_to_files(
    code: &SimCode,
    cfg: &SweepConfig,
    csv: &Path,
    stages: Option<&Path>,
    out: &mut dyn Write,
) -> Result<Vec<FerPoint>, CliError> {
    let mut row = csv_writer(create(csv)?)?;
    let mut stage_file = match stages {
        Some(p) => {
            let mut w = create(p)?;
            writeln!(w, "{STAGE_CSV_HEADER}").map_err(|e| io_err(p, e))?;
            w.flush().map_err(|e| io_err(p, e))?;
            Some(w)
        }
        None => None,
    };
    let mut progress_err = None;
    let points = run_sweep(code, cfg, |p| {
        row(p)?;
        if let Some(w) = stage_file.as_mut() {
            for line in stage_rows(p) {
                writeln!(w, "{line}")?;
            }
            w.flush()?;
        }
        if let Err(e) = progress(out, p) {
            progress_err = Some(e);
        }
        Ok(())
    })?;
    match progress_err {
        Some(e) => Err(e),
        None => Ok(points),
    }
}

fn cmd_simulate(a: &SimulateArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let file = read_code_file(&a.code)?;
    let (code, label) = match file.extended()? {
        Some(ext) => {
            let k = a.k.unwrap_or(ext.max_extension());
            if k > ext.max_extension() {
                return Err(CliError::InvalidParam(format!(
                    "--k {k} exceeds {} extension rows",
                    ext.max_extension()
                )));
            }
            (SimCode::extended(&ext, k)?, format!("extended code, k = {k}"))
        }
        None => {
            if a.k.is_some() {
                return Err(CliError::InvalidParam(
                    "--k requires an extended code file".into(),
                ));
            }
            let h = expand_base(&file.base);
            let enc = CodeEncoder::for_base(&file.base, &h)
                .map_err(|e| CliError::Runtime(e.to_string()))?;
            let label = match enc {
                CodeEncoder::Structured(_) => "structured encoder",
                CodeEncoder::Generic(_) => "generic encoder",
            };
            (SimCode::plain(h, enc, 0), label.to_string())
        }
    };
    let cfg = sweep_config(&a.sweep, code.rate())?;
    say(
        out,
        format!(
            "{}: n = {}, info = {}, {label}, channel rate {:.4}",
            a.code.display(),
            code.n(),
            code.info_len(),
            cfg.channel_rate
        ),
    )?;
    sweep_to_files(&code, &cfg, &a.sweep.out, None, out)?;
    write_metadata(
        &a.sweep.out,
        "simulate",
        &cfg,
        &a.code,
        &file.bytes,
        serde_json::json!({ "k": a.k, "n": code.n(), "info_len": code.info_len() }),
    )
}

fn cmd_cvr(a: &CvrArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let file = read_code_file(&a.code)?;
    let decoder = decoder_config(&a.sweep)?;
    let ext = file.extended()?.ok_or_else(|| {
        CliError::Validation(format!(
            "{} has no extension header; create it with `build`",
            a.code.display()
        ))
    })?;
    let policy = match a.policy {
        PolicyKind::ShortFirst => RatePolicy::ShortFirst,
        PolicyKind::FullOnly => RatePolicy::FullOnly,
        PolicyKind::SnrThreshold => RatePolicy::snr_threshold(a.threshold, a.window)
            .map_err(|e| CliError::InvalidParam(e.to_string()))?,
    };
    let schedule = a.schedule.clone().unwrap_or_else(|| default_schedule(&ext));
    let code = SimCode::cvr(&ext, &schedule, decoder, policy)?;
    // the first transmission is the mother codeword
    let cfg = sweep_config(&a.sweep, ext.rate(0))?;
    say(
        out,
        format!(
            "{}: mother n = {}, full n = {}, schedule {schedule:?}, policy {:?}, channel rate {:.4}",
            a.code.display(),
            ext.mother_len(),
            code.n(),
            policy,
            cfg.channel_rate
        ),
    )?;
    let stages = with_suffix(&a.sweep.out, ".stages.csv");
    sweep_to_files(&code, &cfg, &a.sweep.out, Some(&stages), out)?;
    let policy_json = match policy {
        RatePolicy::ShortFirst => serde_json::json!({ "kind": "short-first" }),
        RatePolicy::FullOnly => serde_json::json!({ "kind": "full-only" }),
        RatePolicy::SnrThreshold {
            threshold_db,
            window,
        } => serde_json::json!({
            "kind": "snr-threshold", "threshold_db": threshold_db, "window": window,
        }),
    };
    write_metadata(
        &a.sweep.out,
        "cvr",
        &cfg,
        &a.code,
        &file.bytes,
        serde_json::json!({ "schedule": schedule, "policy": policy_json }),
    )
}

fn pct(x: f64) -> String {
    format!("{:.2}%", 100.0 * x)
}

fn cmd_pipeline(a: &PipelineArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let code = match &a.code {
        Some(path) => read_code_file(path)?.extended()?.ok_or_else(|| {
            CliError::Validation(format!("{} has no extension header", path.display()))
        })?,
        None => {
            let mother = load_base_matrix(BUNDLED_MOTHER.as_bytes())
                .map_err(|e| CliError::Runtime(e.to_string()))?;
            build_extension_with(&mother, 42, BandOrder::default())
                .map_err(|e| CliError::Runtime(e.to_string()))?
        }
    };
    let full_len = code.mother_len() + code.max_extension();
    let p = PipelineConfig {
        clock_hz: a.clock_hz,
        bus_bits: a.bus_bits,
        llr_bits: a.llr_bits,
        n_short: a.n_short.unwrap_or(code.mother_len()),
        n_full: a.n_full.unwrap_or(full_len),
        frames_in_flight: a.frames_in_flight,
        cycles_per_iteration: a.cycles_per_iteration,
        max_iterations: a.max_iter,
        overhead_cycles: a.overhead_cycles,
    };
    p.validate()
        .map_err(|e| CliError::InvalidParam(e.to_string()))?;
    if let Some(bad) = a.avg_iterations.iter().find(|&&x| !(x >= 1.0)) {
        return Err(CliError::InvalidParam(format!("average iterations {bad} below 1")));
    }

    let lat = latency_reduction(&p);
    let mut text = String::new();
    let mut csv = String::from("section,key,value\n");
    let mut kv = |section: &str, key: &str, value: String| {
        let _ = writeln!(text, "{key}: {value}");
        let _ = writeln!(csv, "{section},{key},{value}");
    };
    kv("config", "clock_hz", format!("{}", p.clock_hz));
    kv("config", "bus_bits", p.bus_bits.to_string());
    kv("config", "llr_bits", p.llr_bits.to_string());
    kv("config", "n_short", p.n_short.to_string());
    kv("config", "n_full", p.n_full.to_string());
    kv("config", "frames_in_flight", p.frames_in_flight.to_string());
    kv("config", "cycles_per_iteration", p.cycles_per_iteration.to_string());
    kv("config", "max_iterations", p.max_iterations.to_string());
    kv("config", "overhead_cycles", p.overhead_cycles.to_string());
    for (name, l) in [("short", lat.short), ("full", lat.full)] {
        kv("latency", &format!("{name}_load_cycles"), l.load_cycles.to_string());
        kv("latency", &format!("{name}_load_cycles_exact"), format!("{:.4}", l.load_cycles_exact));
        kv("latency", &format!("{name}_total_cycles"), l.total_cycles.to_string());
        kv("latency", &format!("{name}_seconds"), format!("{:.6e}", l.seconds));
    }
    kv("latency", "load_reduction", pct(lat.load_reduction));
    kv("latency", "load_reduction_whole_cycles", pct(lat.load_reduction_cycles));
    kv("latency", "total_reduction", pct(lat.total_reduction));

    let mut ks = default_schedule(&code);
    ks.dedup();
    for k in ks {
        let r = activity_power_proxy(&code, k).map_err(|e| CliError::InvalidParam(e.to_string()))?;
        kv("activity", &format!("k{k}_active_cnus"), format!("{}/{}", r.active_cnus, r.total_cnus));
        kv("activity", &format!("k{k}_active_vnus"), format!("{}/{}", r.active_vnus, r.total_vnus));
        kv("activity", &format!("k{k}_active_edges"), format!("{}/{}", r.active_edges, r.total_edges));
        kv("activity", &format!("k{k}_cnu_reduction"), pct(r.cnu_reduction()));
        kv("activity", &format!("k{k}_vnu_reduction"), pct(r.vnu_reduction()));
        kv("activity", &format!("k{k}_edge_reduction"), pct(r.edge_reduction()));
    }
    kv(
        "reference",
        "external_reference_power_saving",
        format!("{} (FPGA power estimate; not computed here)", pct(REFERENCE_POWER_SAVING)),
    );

    let k_full = p.n_full - p.n_short;
    for &it in &a.avg_iterations {
        for (name, k) in [("short", 0), ("full", k_full)] {
            let t = throughput_model(&p, it, k).map_err(|e| CliError::InvalidParam(e.to_string()))?;
            kv("throughput", &format!("{name}_avg_it{it}_bps"), format!("{t:.6e}"));
        }
    }
    kv(
        "reference",
        "external_reference_throughput_short_bps",
        format!("{REFERENCE_THROUGHPUT_SHORT:.3e} (FPGA figure; not computed here)"),
    );
    kv(
        "reference",
        "external_reference_throughput_full_bps",
        format!("{REFERENCE_THROUGHPUT_FULL:.3e} (FPGA figure; not computed here)"),
    );

    say(out, text.trim_end())?;
    if let Some(path) = &a.csv {
        write_file(path, csv.as_bytes())?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(args: &[&str]) -> Result<Cli, clap::Error> {
        Cli::try_parse_from(std::iter::once("cvr-ldpc").chain(args.iter().copied()))
    }

    #[test]
    fn unknown_flag_is_rejected() {
        assert!(parse(&["pipeline", "--bogus"]).is_err());
    }

    #[test]
    fn negative_snr_range_parses() {
        let cli = parse(&["simulate", "--code", "x", "--snr", "-1:0.5:1", "--out", "o"]).unwrap();
        let Command::Simulate(a) = cli.command else { panic!() };
        assert_eq!(a.sweep.snr.points(), vec![-1.0, -0.5, 0.0, 0.5, 1.0]);
    }

    #[test]
    fn sp_with_fixed_point_is_invalid() {
        let cli = parse(&["simulate", "--code", "x", "--snr", "1", "--out", "o", "--decoder", "sp"])
            .unwrap();
        let Command::Simulate(a) = cli.command else { panic!() };
        assert_eq!(decoder_config(&a.sweep).unwrap_err().exit_code(), 6);
    }

    #[test]
    fn pipeline_defaults() {
        let mut buf = Vec::new();
        run(parse(&["pipeline"]).unwrap(), &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.contains("load_reduction: 33.33%"), "{text}");
        assert!(text.contains("k0_cnu_reduction: 66.67%"));
        assert!(text.contains("external_reference_power_saving: 36.00%"));
    }

    #[test]
    fn hex_digest() {
        assert_eq!(
            sha256_hex(b"abc"),
            "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad"
        );
    }
}
