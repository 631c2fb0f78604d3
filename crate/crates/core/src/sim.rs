//! Seeded Monte Carlo FER/BER sweeps.
//!
//! Frame `i` at SNR index `s` draws all of its randomness (information bits,
//! then channel noise) from the substream keyed by `(master seed, s, i)`.
//! Frames are processed in fixed-size batches, possibly in parallel, and
//! the results are folded in frame-index order; the stopping rule is checked
//! after each folded frame. The set of counted frames, and therefore every
//! reported number, depends only on the configuration and seed.

use crate::channel::{apply_awgn_in_place, channel_llr, modulate_bpsk, sigma_from_ebn0, SnrKind};
use crate::codec::{
    CodeEncoder, CodecError, Decoder, DecoderConfig, ExtendedEncoder, Quantization,
};
use crate::cvr::{CvrEngine, CvrError, RateController, RatePolicy};
use crate::extension::ExtendedCode;
use crate::matrix::ParityCheckMatrix;
use crate::rng::Stream;
use rayon::prelude::*;
use std::io::Write;
use thiserror::Error;

pub const CSV_HEADER: &str = "snr_db,frames,bit_errors,frame_errors,ber,fer,fer_ci95,avg_iterations,avg_rate_used,undetected_errors,codeword_fer";

#[derive(Debug, Error)]
pub enum SimError {
    #[error("invalid sweep configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Codec(#[from] CodecError),
    #[error(transparent)]
    Cvr(#[from] CvrError),
    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),
}

/// Inclusive SNR grid `start, start + step, ...` up to `stop`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SnrRange {
    pub start: f64,
    pub step: f64,
    pub stop: f64,
}

impl SnrRange {
    pub fn new(start: f64, step: f64, stop: f64) -> Result<Self, SimError> {
        if !(step > 0.0) || !start.is_finite() || !stop.is_finite() || !step.is_finite() {
            return Err(SimError::Config(format!(
                "SNR range {start}:{step}:{stop} needs finite bounds and a positive step"
            )));
        }
        Ok(SnrRange { start, step, stop })
    }

    pub fn single(snr: f64) -> Self {
        SnrRange {
            start: snr,
            step: 1.0,
            stop: snr,
        }
    }

    /// Grid points; the last one is `stop` when `stop - start` is a multiple
    /// of `step`, otherwise the largest point below `stop`.
    pub fn points(&self) -> Vec<f64> {
        if self.stop < self.start {
            return Vec::new();
        }
        let count = ((self.stop - self.start) / self.step + 1e-9).floor() as usize + 1;
        (0..count)
            .map(|i| {
                let x = self.start + i as f64 * self.step;
                (x * 1e9).round() / 1e9
            })
            .collect()
    }
}

impl std::str::FromStr for SnrRange {
    type Err = String;

    /// `start:step:stop`, or a single value.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parts: Vec<&str> = s.split(':').collect();
        let num = |p: &str| {
            p.trim()
                .parse::<f64>()
                .map_err(|_| format!("invalid number `{p}` in SNR range"))
        };
        let r = match parts.as_slice() {
            [one] => Ok(SnrRange::single(num(one)?)),
            [a, b, c] => SnrRange::new(num(a)?, num(b)?, num(c)?),
            _ => return Err(format!("expected `start:step:stop`, got `{s}`")),
        };
        r.map_err(|e| e.to_string())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StoppingRule {
    pub min_frame_errors: u64,
    pub max_frames: u64,
}

impl Default for StoppingRule {
    fn default() -> Self {
        StoppingRule {
            min_frame_errors: 100,
            max_frames: 1_000_000,
        }
    }
}

impl StoppingRule {
    pub fn new(min_frame_errors: u64, max_frames: u64) -> Result<Self, SimError> {
        if min_frame_errors == 0 || max_frames < min_frame_errors {
            return Err(SimError::Config(format!(
                "need 1 <= min_frame_errors ({min_frame_errors}) <= max_frames ({max_frames})"
            )));
        }
        Ok(StoppingRule {
            min_frame_errors,
            max_frames,
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub decoder: DecoderConfig,
    pub snr: SnrRange,
    pub snr_kind: SnrKind,
    /// Rate used to convert Eb/N0 to a noise level.
    pub channel_rate: f64,
    pub stop: StoppingRule,
    pub master_seed: u64,
    pub workers: usize,
    /// Frames handed to the worker pool at a time.
    pub batch_size: usize,
}

impl SweepConfig {
    pub fn new(decoder: DecoderConfig, snr: SnrRange, channel_rate: f64) -> Self {
        SweepConfig {
            decoder,
            snr,
            snr_kind: SnrKind::EbN0,
            channel_rate,
            stop: StoppingRule::default(),
            master_seed: 1,
            workers: 1,
            batch_size: 256,
        }
    }

    fn sigma(&self, snr_db: f64) -> Result<f64, SimError> {
        let rate = match self.snr_kind {
            SnrKind::EbN0 => self.channel_rate,
            SnrKind::EsN0 => 1.0,
        };
        if !(self.channel_rate > 0.0 && self.channel_rate <= 1.0) {
            return Err(SimError::Config(format!(
                "channel rate {} outside (0, 1]",
                self.channel_rate
            )));
        }
        sigma_from_ebn0(snr_db, rate).map_err(|e| SimError::Config(e.to_string()))
    }
}

/// Encoder for a fixed-rate simulation.
#[derive(Debug, Clone)]
pub enum FrameEncoder {
    Code(CodeEncoder),
    /// An extended code truncated to its first `k` extension rows.
    Extended { encoder: ExtendedEncoder, k: usize },
}

impl From<CodeEncoder> for FrameEncoder {
    fn from(e: CodeEncoder) -> Self {
        FrameEncoder::Code(e)
    }
}

impl FrameEncoder {
    pub fn info_len(&self) -> usize {
        match self {
            FrameEncoder::Code(e) => e.info_len(),
            FrameEncoder::Extended { encoder, .. } => encoder.info_len(),
        }
    }

    pub fn info_positions(&self) -> Vec<usize> {
        match self {
            FrameEncoder::Code(e) => e.info_positions(),
            FrameEncoder::Extended { encoder, .. } => (0..encoder.info_len()).collect(),
        }
    }

    pub fn encode(&self, info: &[u8]) -> Result<Vec<u8>, CodecError> {
        match self {
            FrameEncoder::Code(e) => e.encode(info),
            FrameEncoder::Extended { encoder, k } => encoder.encode(info, *k),
        }
    }
}

/// Code under simulation.
pub enum SimCode {
    /// A fixed parity check matrix.
    Plain {
        h: ParityCheckMatrix,
        encoder: FrameEncoder,
        /// Extension rows in use, reported as `avg_rate_used`.
        rate_label: usize,
    },
    /// Incremental-parity decoding of an extended code.
    Cvr {
        engine: CvrEngine,
        encoder: ExtendedEncoder,
        policy: RatePolicy,
    },
}

impl SimCode {
    pub fn plain(h: ParityCheckMatrix, encoder: impl Into<FrameEncoder>, rate_label: usize) -> Self {
        SimCode::Plain {
            h,
            encoder: encoder.into(),
            rate_label,
        }
    }

    /// An extended code used at the fixed rate given by `k` extension rows.
    pub fn extended(code: &ExtendedCode, k: usize) -> Result<Self, SimError> {
        let h = crate::extension::select_rate(code, k).map_err(CvrError::from)?;
        let encoder = FrameEncoder::Extended {
            encoder: ExtendedEncoder::new(code)?,
            k,
        };
        Ok(SimCode::plain(h, encoder, k))
    }

    pub fn cvr(
        code: &ExtendedCode,
        schedule: &[usize],
        decoder: DecoderConfig,
        policy: RatePolicy,
    ) -> Result<Self, SimError> {
        Ok(SimCode::Cvr {
            engine: CvrEngine::new(code, schedule, decoder)?,
            encoder: ExtendedEncoder::new(code)?,
            policy,
        })
    }

    pub fn info_len(&self) -> usize {
        match self {
            SimCode::Plain { encoder, .. } => encoder.info_len(),
            SimCode::Cvr { encoder, .. } => encoder.info_len(),
        }
    }

    /// Transmitted length.
    pub fn n(&self) -> usize {
        match self {
            SimCode::Plain { h, .. } => h.n(),
            SimCode::Cvr { engine, .. } => engine.full_len(),
        }
    }

    /// Rate of the transmitted word (full extension for CVR).
    pub fn rate(&self) -> f64 {
        self.info_len() as f64 / self.n() as f64
    }

    fn stages(&self) -> Vec<usize> {
        match self {
            SimCode::Plain { .. } => Vec::new(),
            SimCode::Cvr { engine, .. } => engine.schedule().to_vec(),
        }
    }
}

/// Per-stage statistics of a CVR point.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StageStat {
    pub k: usize,
    pub attempts: u64,
    pub successes: u64,
    /// Frames whose first attempt was this stage.
    pub first_attempts: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FerPoint {
    pub snr_db: f64,
    pub frames_run: u64,
    pub bit_errors: u64,
    pub frame_errors: u64,
    pub undetected_errors: u64,
    pub codeword_frame_errors: u64,
    pub total_iterations: u64,
    pub total_rate_used: u64,
    pub info_len: usize,
    pub stages: Vec<StageStat>,
}

impl FerPoint {
    fn empty(snr_db: f64, info_len: usize, stages: &[usize]) -> Self {
        FerPoint {
            snr_db,
            frames_run: 0,
            bit_errors: 0,
            frame_errors: 0,
            undetected_errors: 0,
            codeword_frame_errors: 0,
            total_iterations: 0,
            total_rate_used: 0,
            info_len,
            stages: stages
                .iter()
                .map(|&k| StageStat {
                    k,
                    attempts: 0,
                    successes: 0,
                    first_attempts: 0,
                })
                .collect(),
        }
    }

    fn ratio(num: u64, den: u64) -> f64 {
        if den == 0 {
            0.0
        } else {
            num as f64 / den as f64
        }
    }

    pub fn fer(&self) -> f64 {
        Self::ratio(self.frame_errors, self.frames_run)
    }

    pub fn ber(&self) -> f64 {
        Self::ratio(self.bit_errors, self.frames_run * self.info_len as u64)
    }

    pub fn codeword_fer(&self) -> f64 {
        Self::ratio(self.codeword_frame_errors, self.frames_run)
    }

    /// Normal-approximation 95% half-width of the FER. Unreliable below about
    /// ten frame errors.
    pub fn fer_ci95(&self) -> f64 {
        if self.frames_run == 0 {
            return 0.0;
        }
        let p = self.fer();
        1.96 * (p * (1.0 - p) / self.frames_run as f64).sqrt()
    }

    /// Normal-approximation 95% half-width of the BER, treating bits as
    /// independent trials.
    pub fn ber_ci95(&self) -> f64 {
        let bits = self.frames_run * self.info_len as u64;
        if bits == 0 {
            return 0.0;
        }
        let p = self.ber();
        1.96 * (p * (1.0 - p) / bits as f64).sqrt()
    }

    pub fn avg_iterations(&self) -> f64 {
        Self::ratio(self.total_iterations, self.frames_run)
    }

    pub fn avg_rate_used(&self) -> f64 {
        Self::ratio(self.total_rate_used, self.frames_run)
    }

    /// One CSV row matching [`CSV_HEADER`].
    pub fn csv_row(&self) -> String {
        format!(
            "{:.4},{},{},{},{:.6e},{:.6e},{:.6e},{:.4},{:.4},{},{:.6e}",
            self.snr_db,
            self.frames_run,
            self.bit_errors,
            self.frame_errors,
            self.ber(),
            self.fer(),
            self.fer_ci95(),
            self.avg_iterations(),
            self.avg_rate_used(),
            self.undetected_errors,
            self.codeword_fer(),
        )
    }
}

#[derive(Debug, Clone)]
struct FrameResult {
    bit_errors: u64,
    frame_error: bool,
    undetected: bool,
    codeword_error: bool,
    iterations: u64,
    rate_used: u64,
    first_stage: usize,
    /// `(stage index, converged)` per attempt.
    attempts: Vec<(usize, bool)>,
}

struct FrameInput {
    info: Vec<u8>,
    codeword: Vec<u8>,
    llr: Vec<f64>,
}

fn make_frame(
    encode: impl Fn(&[u8]) -> Result<Vec<u8>, CodecError>,
    info_len: usize,
    sigma: f64,
    decoder: &DecoderConfig,
    stream: &mut Stream,
) -> Result<FrameInput, CodecError> {
    let info: Vec<u8> = (0..info_len).map(|_| stream.bit()).collect();
    let codeword = encode(&info)?;
    let mut y = modulate_bpsk(&codeword);
    apply_awgn_in_place(&mut y, sigma, stream);
    let mut llr = channel_llr(&y, sigma);
    if let Quantization::Fixed(q) = decoder.quantization() {
        for v in llr.iter_mut() {
            *v = q.quantize(*v);
        }
    }
    Ok(FrameInput {
        info,
        codeword,
        llr,
    })
}

fn score(
    input: &FrameInput,
    info_positions: &[usize],
    decoded: &[u8],
    converged: bool,
) -> (u64, bool, bool, bool) {
    let bit_errors = info_positions
        .iter()
        .zip(&input.info)
        .filter(|(&p, &b)| decoded[p] != b)
        .count() as u64;
    let codeword_error = decoded
        .iter()
        .zip(&input.codeword)
        .any(|(a, b)| a != b);
    let frame_error = bit_errors > 0 || !converged;
    let undetected = converged && codeword_error;
    (bit_errors, frame_error, undetected, codeword_error)
}

fn frame_stream(cfg: &SweepConfig, snr_index: usize, frame: u64) -> Stream {
    Stream::substream(cfg.master_seed, &[snr_index as u64, frame])
}

struct PlainWorker<'a> {
    decoder: Decoder<'a>,
}

fn run_plain_frame(
    worker: &mut PlainWorker<'_>,
    encoder: &FrameEncoder,
    info_positions: &[usize],
    rate_label: usize,
    cfg: &SweepConfig,
    sigma: f64,
    snr_index: usize,
    frame: u64,
) -> Result<FrameResult, CodecError> {
    let mut stream = frame_stream(cfg, snr_index, frame);
    let input = make_frame(
        |i| encoder.encode(i),
        encoder.info_len(),
        sigma,
        &cfg.decoder,
        &mut stream,
    )?;
    let out = worker.decoder.decode(&input.llr);
    let (bit_errors, frame_error, undetected, codeword_error) =
        score(&input, info_positions, &out.bits, out.converged);
    Ok(FrameResult {
        bit_errors,
        frame_error,
        undetected,
        codeword_error,
        iterations: out.iterations as u64,
        rate_used: rate_label as u64,
        first_stage: 0,
        attempts: Vec::new(),
    })
}

fn run_cvr_frame(
    worker: &mut crate::cvr::CvrWorker<'_>,
    encoder: &ExtendedEncoder,
    schedule: &[usize],
    first_stage: usize,
    cfg: &SweepConfig,
    sigma: f64,
    snr_index: usize,
    frame: u64,
) -> Result<(FrameResult, crate::cvr::CvrOutcome), CodecError> {
    let full = *schedule.last().expect("non-empty schedule");
    let mut stream = frame_stream(cfg, snr_index, frame);
    let input = make_frame(
        |i| encoder.encode(i, full),
        encoder.info_len(),
        sigma,
        &cfg.decoder,
        &mut stream,
    )?;
    let out = worker.decode(&input.llr, first_stage);
    let n = out.outcome.bits.len();
    let truncated = FrameInput {
        info: input.info.clone(),
        codeword: input.codeword[..n].to_vec(),
        llr: Vec::new(),
    };
    let positions: Vec<usize> = (0..encoder.info_len()).collect();
    let (bit_errors, frame_error, undetected, codeword_error) =
        score(&truncated, &positions, &out.outcome.bits, out.outcome.converged);
    let attempts = out
        .attempts
        .iter()
        .map(|a| {
            let stage = schedule.iter().position(|&k| k == a.k).expect("scheduled k");
            (stage, a.converged)
        })
        .collect();
    Ok((
        FrameResult {
            bit_errors,
            frame_error,
            undetected,
            codeword_error,
            iterations: out.total_iterations() as u64,
            rate_used: out.rate_used as u64,
            first_stage,
            attempts,
        },
        out,
    ))
}

/// Folds one frame into the point; returns true when the stopping rule fires.
fn accumulate(point: &mut FerPoint, r: &FrameResult, stop: &StoppingRule) -> bool {
    point.frames_run += 1;
    point.bit_errors += r.bit_errors;
    point.frame_errors += r.frame_error as u64;
    point.undetected_errors += r.undetected as u64;
    point.codeword_frame_errors += r.codeword_error as u64;
    point.total_iterations += r.iterations;
    point.total_rate_used += r.rate_used;
    if !point.stages.is_empty() {
        point.stages[r.first_stage].first_attempts += 1;
        for &(s, ok) in &r.attempts {
            point.stages[s].attempts += 1;
            point.stages[s].successes += ok as u64;
        }
    }
    point.frame_errors >= stop.min_frame_errors || point.frames_run >= stop.max_frames
}

fn pool(workers: usize) -> Result<rayon::ThreadPool, SimError> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .map_err(|e| SimError::Config(format!("cannot start worker pool: {e}")))
}

/// Simulates one SNR point. `snr_index` selects the substream family.
pub fn run_point(
    code: &SimCode,
    cfg: &SweepConfig,
    snr_index: usize,
    snr_db: f64,
) -> Result<FerPoint, SimError> {
    let sigma = cfg.sigma(snr_db)?;
    let pool = pool(cfg.workers)?;
    let mut point = FerPoint::empty(snr_db, code.info_len(), &code.stages());
    let batch = cfg.batch_size.max(1) as u64;

    match code {
        SimCode::Plain {
            h,
            encoder,
            rate_label,
        } => {
            let positions = encoder.info_positions();
            let mut next = 0u64;
            'outer: while next < cfg.stop.max_frames {
                let end = (next + batch).min(cfg.stop.max_frames);
                let results: Vec<Result<FrameResult, CodecError>> = pool.install(|| {
                    (next..end)
                        .into_par_iter()
                        .map_init(
                            || PlainWorker {
                                decoder: Decoder::new(h, cfg.decoder),
                            },
                            |w, i| {
                                run_plain_frame(
                                    w, encoder, &positions, *rate_label, cfg, sigma, snr_index, i,
                                )
                            },
                        )
                        .collect()
                });
                for r in results {
                    if accumulate(&mut point, &r?, &cfg.stop) {
                        break 'outer;
                    }
                }
                next = end;
            }
        }
        SimCode::Cvr {
            engine,
            encoder,
            policy,
        } => {
            let schedule = engine.schedule();
            if policy.is_stateful() {
                // the first stage of each frame depends on earlier frames
                let mut controller = RateController::new(*policy);
                let mut worker = engine.worker();
                for i in 0..cfg.stop.max_frames {
                    let first = controller.first_stage(snr_db, schedule.len());
                    let (r, out) = run_cvr_frame(
                        &mut worker, encoder, schedule, first, cfg, sigma, snr_index, i,
                    )?;
                    controller.record(&out);
                    if accumulate(&mut point, &r, &cfg.stop) {
                        break;
                    }
                }
            } else {
                let first = RateController::new(*policy).first_stage(snr_db, schedule.len());
                let mut next = 0u64;
                'cvr: while next < cfg.stop.max_frames {
                    let end = (next + batch).min(cfg.stop.max_frames);
                    let results: Vec<Result<FrameResult, CodecError>> = pool.install(|| {
                        (next..end)
                            .into_par_iter()
                            .map_init(
                                || engine.worker(),
                                |w, i| {
                                    run_cvr_frame(
                                        w, encoder, schedule, first, cfg, sigma, snr_index, i,
                                    )
                                    .map(|(r, _)| r)
                                },
                            )
                            .collect()
                    });
                    for r in results {
                        if accumulate(&mut point, &r?, &cfg.stop) {
                            break 'cvr;
                        }
                    }
                    next = end;
                }
            }
        }
    }
    Ok(point)
}

/// Runs every SNR point in ascending order, handing each finished point to
/// `on_point` before starting the next one.
pub fn run_sweep(
    code: &SimCode,
    cfg: &SweepConfig,
    mut on_point: impl FnMut(&FerPoint) -> Result<(), SimError>,
) -> Result<Vec<FerPoint>, SimError> {
    let mut out = Vec::new();
    for (i, snr) in cfg.snr.points().into_iter().enumerate() {
        let p = run_point(code, cfg, i, snr)?;
        on_point(&p)?;
        out.push(p);
    }
    Ok(out)
}

/// Writes the CSV header, then flushes one row per finished point so an
/// interrupted sweep keeps its completed rows.
pub fn csv_writer<W: Write>(
    mut w: W,
) -> Result<impl FnMut(&FerPoint) -> Result<(), SimError>, SimError> {
    writeln!(w, "{CSV_HEADER}")?;
    w.flush()?;
    Ok(move |p: &FerPoint| -> Result<(), SimError> {
        writeln!(w, "{}", p.csv_row())?;
        w.flush()?;
        Ok(())
    })
}

/// Per-stage CSV for CVR sweeps.
pub const STAGE_CSV_HEADER: &str = "snr_db,k,first_attempts,attempts,successes";

pub fn stage_rows(p: &FerPoint) -> Vec<String> {
    p.stages
        .iter()
        .map(|s| {
            format!(
                "{:.4},{},{},{},{}",
                p.snr_db, s.k, s.first_attempts, s.attempts, s.successes
            )
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::{expand_base, parse_base_matrix};

    #[test]
    fn range_points() {
        let r: SnrRange = "2.0:0.2:3.6".parse().unwrap();
        let p = r.points();
        assert_eq!(p.len(), 9);
        assert_eq!(p[0], 2.0);
        assert_eq!(p[8], 3.6);
        let r: SnrRange = "1.0:0.3:2.0".parse().unwrap();
        assert_eq!(r.points(), vec![1.0, 1.3, 1.6, 1.9]);
        let r: SnrRange = "3.0:0.5:2.0".parse().unwrap();
        assert!(r.points().is_empty());
        assert!("1:0:2".parse::<SnrRange>().is_err());
        assert!("1:2".parse::<SnrRange>().is_err());
        assert_eq!("2.5".parse::<SnrRange>().unwrap().points(), vec![2.5]);
    }

    #[test]
    fn stopping_rule_validation() {
        assert!(StoppingRule::new(0, 10).is_err());
        assert!(StoppingRule::new(100, 10).is_err());
        assert!(StoppingRule::new(10, 10).is_ok());
    }

    fn small() -> SimCode {
        let base = parse_base_matrix("2 6 8\n0 3 5 -1 1 0\n2 -1 7 1 0 0\n").unwrap();
        let h = expand_base(&base);
        let enc = CodeEncoder::for_base(&base, &h).unwrap();
        SimCode::plain(h, enc, 0)
    }

    #[test]
    fn ci_formula() {
        let mut p = FerPoint::empty(1.0, 10, &[]);
        p.frames_run = 400;
        p.frame_errors = 100;
        assert!((p.fer_ci95() - 1.96 * (0.25f64 * 0.75 / 400.0).sqrt()).abs() < 1e-15);
    }

    #[test]
    fn high_snr_is_error_free() {
        let code = small();
        let mut cfg = SweepConfig::new(DecoderConfig::default(), SnrRange::single(30.0), code.rate());
        cfg.stop = StoppingRule::new(1, 300).unwrap();
        let p = run_point(&code, &cfg, 0, 30.0).unwrap();
        assert_eq!(p.frames_run, 300);
        assert_eq!(p.frame_errors, 0);
        assert!(p.avg_iterations() <= 1.0);
    }

    #[test]
    fn very_low_snr_fails_every_frame() {
        let code = small();
        let mut cfg = SweepConfig::new(DecoderConfig::default(), SnrRange::single(-10.0), code.rate());
        cfg.stop = StoppingRule::new(50, 1000).unwrap();
        let p = run_point(&code, &cfg, 0, -10.0).unwrap();
        assert_eq!(p.frame_errors, 50);
        assert!(p.fer() + p.fer_ci95() >= 0.95, "fer {}", p.fer());
        assert!(p.frames_run < 1000);
    }

    #[test]
    fn worker_count_does_not_change_results() {
        let code = small();
        let mut cfg = SweepConfig::new(DecoderConfig::default(), SnrRange::single(2.0), code.rate());
        cfg.stop = StoppingRule::new(20, 5000).unwrap();
        cfg.batch_size = 64;
        let a = run_point(&code, &cfg, 0, 2.0).unwrap();
        cfg.workers = 4;
        let b = run_point(&code, &cfg, 0, 2.0).unwrap();
        cfg.batch_size = 7;
        let c = run_point(&code, &cfg, 0, 2.0).unwrap();
        assert_eq!(a, b);
        assert_eq!(a, c);
        assert!(a.frames_run < 5000 && a.frame_errors == 20);
    }

    #[test]
    fn sweep_emits_points_in_order() {
        let code = small();
        let mut cfg = SweepConfig::new(
            DecoderConfig::default(),
            "1.0:1.0:3.0".parse().unwrap(),
            code.rate(),
        );
        cfg.stop = StoppingRule::new(5, 200).unwrap();
        let mut buf = Vec::new();
        {
            let mut sink = csv_writer(&mut buf).unwrap();
            let pts = run_sweep(&code, &cfg, &mut sink).unwrap();
            assert_eq!(pts.len(), 3);
        }
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], CSV_HEADER);
        assert_eq!(lines.len(), 4);
        assert!(lines[1].starts_with("1.0000,"));
        assert!(lines[3].starts_with("3.0000,"));
    }
}
