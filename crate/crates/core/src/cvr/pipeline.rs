//! Timing and activity arithmetic for the pipelined decoder.
//!
//! The input buffers are modelled only through the number of bus cycles
//! needed to load a frame of LLRs; decoding costs `cycles_per_iteration`
//! cycles per iteration. Power is approximated by the number of active
//! check nodes, variable nodes and edges.

use super::CvrError;
use crate::extension::{select_rate, ExtendedCode};

/// FPGA power saving quoted for the gated decoder. External reference only:
/// it comes from a hardware power estimate and is not computed here.
pub const REFERENCE_POWER_SAVING: f64 = 0.36;
/// FPGA throughputs (bits/s) quoted for the short and full codes at 80 MHz.
/// External reference only.
pub const REFERENCE_THROUGHPUT_SHORT: f64 = 2.86e9;
pub const REFERENCE_THROUGHPUT_FULL: f64 = 3.06e9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PipelineConfig {
    pub clock_hz: f64,
    pub bus_bits: usize,
    pub llr_bits: usize,
    pub n_short: usize,
    pub n_full: usize,
    pub frames_in_flight: usize,
    pub cycles_per_iteration: usize,
    pub max_iterations: usize,
    /// Fixed cycles added per decoded frame batch (pipeline fill).
    pub overhead_cycles: usize,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            clock_hz: 80e6,
            bus_bits: 256,
            llr_bits: 6,
            n_short: 576,
            n_full: 864,
            frames_in_flight: 2,
            cycles_per_iteration: 2,
            max_iterations: 21,
            overhead_cycles: 0,
        }
    }
}

impl PipelineConfig {
    pub fn validate(&self) -> Result<(), CvrError> {
        let positive = self.clock_hz > 0.0
            && self.clock_hz.is_finite()
            && self.bus_bits > 0
            && self.llr_bits > 0
            && self.n_short > 0
            && self.frames_in_flight > 0
            && self.cycles_per_iteration > 0
            && self.max_iterations > 0;
        if !positive {
            return Err(CvrError::InvalidPipeline("all parameters must be positive".into()));
        }
        if self.n_short > self.n_full {
            return Err(CvrError::InvalidPipeline(format!(
                "n_short ({}) exceeds n_full ({})",
                self.n_short, self.n_full
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrameLatency {
    pub n: usize,
    /// Bus cycles as a real number, `n * llr_bits / bus_bits`.
    pub load_cycles_exact: f64,
    /// Whole bus cycles, `ceil(n * llr_bits / bus_bits)`.
    pub load_cycles: usize,
    pub decode_cycles: usize,
    pub total_cycles: usize,
    pub seconds: f64,
}

/// Latency of the first frame: load it, then run the maximum number of
/// iterations.
pub fn first_frame_latency(p: &PipelineConfig, short_first: bool) -> FrameLatency {
    let n = if short_first { p.n_short } else { p.n_full };
    let bits = n * p.llr_bits;
    let load_cycles = bits.div_ceil(p.bus_bits);
    let decode_cycles = p.cycles_per_iteration * p.max_iterations;
    let total_cycles = load_cycles + decode_cycles;
    FrameLatency {
        n,
        load_cycles_exact: bits as f64 / p.bus_bits as f64,
        load_cycles,
        decode_cycles,
        total_cycles,
        seconds: total_cycles as f64 / p.clock_hz,
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LatencyReduction {
    pub short: FrameLatency,
    pub full: FrameLatency,
    /// `1 - load(short) / load(full)` on exact transfer time; equals
    /// `(n_full - n_short) / n_full`.
    pub load_reduction: f64,
    /// Same ratio on whole bus cycles.
    pub load_reduction_cycles: f64,
    pub total_reduction: f64,
}

pub fn latency_reduction(p: &PipelineConfig) -> LatencyReduction {
    let short = first_frame_latency(p, true);
    let full = first_frame_latency(p, false);
    LatencyReduction {
        short,
        full,
        load_reduction: 1.0 - short.load_cycles_exact / full.load_cycles_exact,
        load_reduction_cycles: 1.0 - short.load_cycles as f64 / full.load_cycles as f64,
        total_reduction: 1.0 - short.total_cycles as f64 / full.total_cycles as f64,
    }
}

/// Decoding throughput in information-carrying bits per second:
/// `frames_in_flight * n * clock / (cycles_per_iteration * avg_iterations + overhead)`
/// with `n = n_short + k`.
pub fn throughput_model(p: &PipelineConfig, avg_iterations: f64, k: usize) -> Result<f64, CvrError> {
    if !(avg_iterations >= 1.0) {
        return Err(CvrError::InvalidPipeline(format!(
            "average iterations must be >= 1, got {avg_iterations}"
        )));
    }
    let n = (p.n_short + k) as f64;
    let cycles = p.cycles_per_iteration as f64 * avg_iterations + p.overhead_cycles as f64;
    Ok(p.frames_in_flight as f64 * n * p.clock_hz / cycles)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ActivityReport {
    pub k: usize,
    pub active_cnus: usize,
    pub total_cnus: usize,
    pub active_vnus: usize,
    pub total_vnus: usize,
    pub active_edges: usize,
    pub total_edges: usize,
}

impl ActivityReport {
    pub fn cnu_reduction(&self) -> f64 {
        1.0 - self.active_cnus as f64 / self.total_cnus as f64
    }

    pub fn vnu_reduction(&self) -> f64 {
        1.0 - self.active_vnus as f64 / self.total_vnus as f64
    }

    /// Fraction of per-iteration message updates switched off; the primary
    /// power proxy.
    pub fn edge_reduction(&self) -> f64 {
        1.0 - self.active_edges as f64 / self.total_edges as f64
    }
}

/// Active units when decoding with `k` extension rows, compared with the
/// fully extended code.
pub fn activity_power_proxy(code: &ExtendedCode, k: usize) -> Result<ActivityReport, CvrError> {
    let active = select_rate(code, k)?;
    let full = code.assembled();
    Ok(ActivityReport {
        k,
        active_cnus: active.m(),
        total_cnus: full.m(),
        active_vnus: active.n(),
        total_vnus: full.n(),
        active_edges: active.num_edges(),
        total_edges: full.num_edges(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn full_load_cycles() {
        let p = PipelineConfig::default();
        assert_eq!(first_frame_latency(&p, false).load_cycles, 21);
        assert_eq!(first_frame_latency(&p, true).load_cycles, 14);
    }

    #[test]
    fn load_reduction_is_one_third() {
        let r = latency_reduction(&PipelineConfig::default());
        assert!((r.load_reduction - 1.0 / 3.0).abs() < 1e-12);
        assert!((r.load_reduction_cycles - 1.0 / 3.0).abs() < 1e-12);
        assert!(r.total_reduction > 0.0 && r.total_reduction < r.load_reduction);
    }

    #[test]
    fn equal_sizes_give_no_reduction() {
        let p = PipelineConfig {
            n_short: 864,
            ..Default::default()
        };
        let r = latency_reduction(&p);
        assert_eq!(r.load_reduction, 0.0);
        assert_eq!(r.total_reduction, 0.0);
    }

    #[test]
    fn wider_bus_halves_exact_load() {
        let a = latency_reduction(&PipelineConfig::default());
        let b = latency_reduction(&PipelineConfig {
            bus_bits: 512,
            ..Default::default()
        });
        assert_eq!(b.full.load_cycles_exact * 2.0, a.full.load_cycles_exact);
        assert_eq!(b.short.load_cycles_exact * 2.0, a.short.load_cycles_exact);
        assert!((a.load_reduction - b.load_reduction).abs() < 1e-12);
    }

    #[test]
    fn throughput_properties() {
        let p = PipelineConfig::default();
        let t = throughput_model(&p, 5.0, 288).unwrap();
        let doubled = throughput_model(
            &PipelineConfig {
                clock_hz: 160e6,
                ..p
            },
            5.0,
            288,
        )
        .unwrap();
        assert_eq!(doubled, 2.0 * t);
        let short = throughput_model(&p, 5.0, 0).unwrap();
        assert!((short / t - 576.0 / 864.0).abs() < 1e-12);
        assert!(throughput_model(&p, 0.5, 0).is_err());
    }

    #[test]
    fn validation() {
        assert!(PipelineConfig::default().validate().is_ok());
        assert!(PipelineConfig {
            bus_bits: 0,
            ..Default::default()
        }
        .validate()
        .is_err());
        assert!(PipelineConfig {
            n_short: 900,
            ..Default::default()
        }
        .validate()
        .is_err());
    }
}
