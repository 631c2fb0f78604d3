//! Short-code-first decoding with incremental parity.
//!
//! A frame is first decoded on a short prefix of the extended code; only if
//! that fails are more extension parities brought in, following a stage
//! schedule of extension row counts.

use super::CvrError;
use crate::codec::{DecodeOutcome, Decoder, DecoderConfig, LlrFrame};
use crate::extension::{select_rate, ExtendedCode};
use crate::matrix::ParityCheckMatrix;
use std::collections::VecDeque;

/// Default `SNR_THRESHOLD` switch point in dB.
pub const DEFAULT_THRESHOLD_DB: f64 = 3.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RatePolicy {
    /// Always start with the first stage.
    ShortFirst,
    /// Decode only the last (full) stage.
    FullOnly,
    /// Start short when the SNR estimate is at least `threshold_db` and no
    /// frame in the last `window` frames needed a retransmission; otherwise
    /// start at the full code.
    SnrThreshold { threshold_db: f64, window: usize },
}

impl RatePolicy {
    pub fn snr_threshold(threshold_db: f64, window: usize) -> Result<Self, CvrError> {
        if !threshold_db.is_finite() || window == 0 {
            return Err(CvrError::InvalidPolicy(format!(
                "threshold {threshold_db} dB with window {window}"
            )));
        }
        Ok(RatePolicy::SnrThreshold {
            threshold_db,
            window,
        })
    }

    /// True if the first stage decision depends on earlier frames.
    pub fn is_stateful(&self) -> bool {
        matches!(self, RatePolicy::SnrThreshold { .. })
    }
}

/// Rate controller: a policy plus the recent-failure history it consults.
#[derive(Debug, Clone)]
pub struct RateController {
    policy: RatePolicy,
    history: VecDeque<bool>,
}

impl RateController {
    pub fn new(policy: RatePolicy) -> Self {
        RateController {
            policy,
            history: VecDeque::new(),
        }
    }

    pub fn policy(&self) -> RatePolicy {
        self.policy
    }

    /// Index into the schedule of the first stage to try.
    pub fn first_stage(&self, snr_estimate_db: f64, stages: usize) -> usize {
        match self.policy {
            RatePolicy::ShortFirst => 0,
            RatePolicy::FullOnly => stages - 1,
            RatePolicy::SnrThreshold { threshold_db, .. } => {
                if snr_estimate_db >= threshold_db && !self.history.iter().any(|&f| f) {
                    0
                } else {
                    stages - 1
                }
            }
        }
    }

    /// Records a decoded frame. A frame counts as a failure when its first
    /// attempt did not converge.
    pub fn record(&mut self, outcome: &CvrOutcome) {
        if let RatePolicy::SnrThreshold { window, .. } = self.policy {
            let failed = !outcome.attempts[0].converged;
            self.history.push_back(failed);
            while self.history.len() > window {
                self.history.pop_front();
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Attempt {
    pub k: usize,
    pub iterations: usize,
    pub converged: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CvrOutcome {
    /// Outcome of the last attempt.
    pub outcome: DecodeOutcome,
    /// Extension rows used by the last attempt.
    pub rate_used: usize,
    pub attempts: Vec<Attempt>,
}

impl CvrOutcome {
    pub fn total_iterations(&self) -> usize {
        self.attempts.iter().map(|a| a.iterations).sum()
    }
}

/// Checks that `schedule` is strictly increasing and ends at `max`.
pub fn validate_schedule(schedule: &[usize], max: usize) -> Result<(), CvrError> {
    let increasing = schedule.windows(2).all(|w| w[0] < w[1]);
    if schedule.is_empty() || !increasing || *schedule.last().unwrap() != max {
        return Err(CvrError::InvalidSchedule {
            schedule: schedule.to_vec(),
            max,
        });
    }
    Ok(())
}

/// Default schedule: mother code, half the extension, full extension.
pub fn default_schedule(code: &ExtendedCode) -> Vec<usize> {
    let max = code.max_extension();
    vec![0, max / 2, max]
}

/// Stage matrices of an extended code for a fixed schedule.
#[derive(Debug, Clone)]
pub struct CvrEngine {
    schedule: Vec<usize>,
    stages: Vec<ParityCheckMatrix>,
    mother_len: usize,
    cfg: DecoderConfig,
}

impl CvrEngine {
    pub fn new(
        code: &ExtendedCode,
        schedule: &[usize],
        cfg: DecoderConfig,
    ) -> Result<Self, CvrError> {
        validate_schedule(schedule, code.max_extension())?;
        let stages = schedule
            .iter()
            .map(|&k| select_rate(code, k))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(CvrEngine {
            schedule: schedule.to_vec(),
            stages,
            mother_len: code.mother_len(),
            cfg,
        })
    }

    pub fn schedule(&self) -> &[usize] {
        &self.schedule
    }

    pub fn stage_matrix(&self, stage: usize) -> &ParityCheckMatrix {
        &self.stages[stage]
    }

    pub fn full_len(&self) -> usize {
        self.mother_len + self.schedule.last().copied().unwrap_or(0)
    }

    /// Per-worker decoder state.
    pub fn worker(&self) -> CvrWorker<'_> {
        CvrWorker {
            engine: self,
            decoders: self
                .stages
                .iter()
                .map(|h| Decoder::new(h, self.cfg))
                .collect(),
        }
    }
}

pub struct CvrWorker<'e> {
    engine: &'e CvrEngine,
    decoders: Vec<Decoder<'e>>,
}

impl CvrWorker<'_> {
    /// Decodes stage by stage from `first_stage` until one converges.
    pub fn decode(&mut self, llr_full: &[f64], first_stage: usize) -> CvrOutcome {
        assert_eq!(llr_full.len(), self.engine.full_len(), "full-length LLR frame");
        let mut attempts = Vec::new();
        let mut last = None;
        for stage in first_stage..self.engine.schedule.len() {
            let k = self.engine.schedule[stage];
            let n = self.engine.mother_len + k;
            let out = self.decoders[stage].decode(&llr_full[..n]);
            attempts.push(Attempt {
                k,
                iterations: out.iterations,
                converged: out.converged,
            });
            let done = out.converged;
            last = Some((k, out));
            if done {
                break;
            }
        }
        let (rate_used, outcome) = last.expect("at least one stage");
        CvrOutcome {
            outcome,
            rate_used,
            attempts,
        }
    }
}

/// Decodes one frame with incremental parity. `llr_full` must cover the
/// fully extended code; stage `k` sees only its first `n1 z + k` values.
pub fn decode_cvr(
    code: &ExtendedCode,
    llr_full: &LlrFrame,
    controller: &mut RateController,
    snr_estimate_db: f64,
    cfg: &DecoderConfig,
    schedule: &[usize],
) -> Result<CvrOutcome, CvrError> {
    let engine = CvrEngine::new(code, schedule, *cfg)?;
    if llr_full.len() != engine.full_len() {
        return Err(CvrError::FrameLength {
            expected: engine.full_len(),
            got: llr_full.len(),
        });
    }
    let first = controller.first_stage(snr_estimate_db, schedule.len());
    let out = engine.worker().decode(llr_full.values(), first);
    controller.record(&out);
    Ok(out)
}
