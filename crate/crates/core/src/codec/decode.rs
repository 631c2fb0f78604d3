//! Flooding-schedule message passing decoders.
//!
//! Each iteration updates every check node, then every variable node, then
//! takes hard decisions on the posterior LLRs and checks the syndrome.
//! Decoding stops as soon as the syndrome is zero; the channel hard decision
//! is checked before the first iteration, so an already-valid word is
//! returned with `iterations == 0`.
//!
//! Offset min-sum runs either in `f64` or on a saturating fixed-point grid
//! where every stored message (channel LLR, check-to-variable and
//! variable-to-check) is held as an integer number of grid steps. Sum-product
//! is `f64` only and serves as a reference.

use super::quant::QuantFormat;
use super::CodecError;
use crate::matrix::ParityCheckMatrix;

/// Magnitude at which sum-product messages are clamped before `tanh`.
pub const SP_CLAMP: f64 = 19.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Algorithm {
    OffsetMinSum,
    SumProduct,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Quantization {
    Float,
    Fixed(QuantFormat),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecoderConfig {
    max_iterations: usize,
    beta: f64,
    algorithm: Algorithm,
    quantization: Quantization,
}

impl Default for DecoderConfig {
    /// 21 iterations of offset min-sum with `beta = 0.5` on the 6:2 grid.
    fn default() -> Self {
        DecoderConfig {
            max_iterations: 21,
            beta: 0.5,
            algorithm: Algorithm::OffsetMinSum,
            quantization: Quantization::Fixed(QuantFormat::new(6, 2).unwrap()),
        }
    }
}

impl DecoderConfig {
    pub fn new(
        max_iterations: usize,
        beta: f64,
        algorithm: Algorithm,
        quantization: Quantization,
    ) -> Result<Self, CodecError> {
        if max_iterations == 0 {
            return Err(CodecError::InvalidConfig("max_iterations must be at least 1".into()));
        }
        if !(beta >= 0.0) || !beta.is_finite() {
            return Err(CodecError::InvalidConfig(format!("beta must be >= 0, got {beta}")));
        }
        match (algorithm, quantization) {
            (Algorithm::SumProduct, Quantization::Fixed(_)) => {
                return Err(CodecError::InvalidConfig(
                    "sum-product is only available in floating point".into(),
                ))
            }
            (Algorithm::OffsetMinSum, Quantization::Fixed(q)) if !q.on_grid(beta) => {
                return Err(CodecError::InvalidConfig(format!(
                    "beta {beta} is not a multiple of the {q} grid step {}",
                    q.step()
                )))
            }
            _ => {}
        }
        Ok(DecoderConfig {
            max_iterations,
            beta,
            algorithm,
            quantization,
        })
    }

    pub fn max_iterations(&self) -> usize {
        self.max_iterations
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn algorithm(&self) -> Algorithm {
        self.algorithm
    }

    pub fn quantization(&self) -> Quantization {
        self.quantization
    }
}

/// One frame of channel LLRs. Positive values favour bit 0.
#[derive(Debug, Clone, PartialEq)]
pub struct LlrFrame {
    values: Vec<f64>,
    representation: Quantization,
}

impl LlrFrame {
    pub fn float(values: Vec<f64>) -> Self {
        LlrFrame {
            values,
            representation: Quantization::Float,
        }
    }

    /// Quantizes `values` onto `format`.
    pub fn fixed(values: &[f64], format: QuantFormat) -> Self {
        LlrFrame {
            values: values.iter().map(|&v| format.quantize(v)).collect(),
            representation: Quantization::Fixed(format),
        }
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn representation(&self) -> Quantization {
        self.representation
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Frame made of the first `n` LLRs.
    pub fn prefix(&self, n: usize) -> LlrFrame {
        LlrFrame {
            values: self.values[..n].to_vec(),
            representation: self.representation,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecodeOutcome {
    pub bits: Vec<u8>,
    pub converged: bool,
    pub iterations: usize,
    pub final_syndrome_weight: usize,
}

/// Offset min-sum check node update over `f64` messages.
///
/// `input[i]` is the message arriving on edge `i`; `output[i]` receives the
/// message sent back on that edge. Uses the two smallest magnitudes so each
/// output excludes its own input without rescanning.
pub fn oms_check_update(input: &[f64], beta: f64, output: &mut [f64]) {
    let mut min1 = f64::INFINITY;
    let mut min2 = f64::INFINITY;
    let mut idx = usize::MAX;
    let mut negative = false;
    for (i, &x) in input.iter().enumerate() {
        let a = x.abs();
        negative ^= x < 0.0;
        if a < min1 {
            min2 = min1;
            min1 = a;
            idx = i;
        } else if a < min2 {
            min2 = a;
        }
    }
    for (i, (&x, out)) in input.iter().zip(output.iter_mut()).enumerate() {
        let mag = if i == idx { min2 } else { min1 };
        let mag = (mag - beta).max(0.0);
        *out = if negative ^ (x < 0.0) { -mag } else { mag };
    }
}

/// Offset min-sum check node update on integer grid levels.
pub fn oms_check_update_fixed(input: &[i32], beta: i32, output: &mut [i32]) {
    let mut min1 = i32::MAX;
    let mut min2 = i32::MAX;
    let mut idx = usize::MAX;
    let mut negative = false;
    for (i, &x) in input.iter().enumerate() {
        let a = x.abs();
        negative ^= x < 0;
        if a < min1 {
            min2 = min1;
            min1 = a;
            idx = i;
        } else if a < min2 {
            min2 = a;
        }
    }
    for (i, (&x, out)) in input.iter().zip(output.iter_mut()).enumerate() {
        let mag = if i == idx { min2 } else { min1 };
        let mag = (mag - beta).max(0);
        *out = if negative ^ (x < 0) { -mag } else { mag };
    }
}

/// Sum-product check node update, `2 atanh(prod_{k != i} tanh(x_k / 2))`,
/// with inputs clamped to `±SP_CLAMP`. Exclusion uses prefix and suffix
/// products, so zero inputs are handled without division.
pub fn sp_check_update(input: &[f64], output: &mut [f64]) {
    let d = input.len();
    let t: Vec<f64> = input
        .iter()
        .map(|&x| (x.clamp(-SP_CLAMP, SP_CLAMP) / 2.0).tanh())
        .collect();
    let mut suffix = vec![1.0; d + 1];
    for i in (0..d).rev() {
        suffix[i] = suffix[i + 1] * t[i];
    }
    let mut prefix = 1.0;
    for i in 0..d {
        output[i] = 2.0 * (prefix * suffix[i + 1]).atanh();
        prefix *= t[i];
    }
}

fn hard_syndrome_weight(h: &ParityCheckMatrix, bits: &[u8]) -> usize {
    crate::matrix::syndrome_weight(h, bits)
}

/// Reusable decoder bound to one parity check matrix.
#[derive(Debug, Clone)]
pub struct Decoder<'h> {
    h: &'h ParityCheckMatrix,
    cfg: DecoderConfig,
    v2c_f: Vec<f64>,
    c2v_f: Vec<f64>,
    v2c_q: Vec<i32>,
    c2v_q: Vec<i32>,
    scratch_in: Vec<f64>,
    scratch_out: Vec<f64>,
}

impl<'h> Decoder<'h> {
    pub fn new(h: &'h ParityCheckMatrix, cfg: DecoderConfig) -> Self {
        let e = h.num_edges();
        let fixed = matches!(cfg.quantization, Quantization::Fixed(_));
        Decoder {
            h,
            cfg,
            v2c_f: if fixed { Vec::new() } else { vec![0.0; e] },
            c2v_f: if fixed { Vec::new() } else { vec![0.0; e] },
            v2c_q: if fixed { vec![0; e] } else { Vec::new() },
            c2v_q: if fixed { vec![0; e] } else { Vec::new() },
            scratch_in: Vec::new(),
            scratch_out: Vec::new(),
        }
    }

    pub fn config(&self) -> &DecoderConfig {
        &self.cfg
    }

    pub fn matrix(&self) -> &ParityCheckMatrix {
        self.h
    }

    /// Decodes one frame. Panics if the frame length differs from `h.n()`.
    pub fn decode(&mut self, llr: &[f64]) -> DecodeOutcome {
        assert_eq!(llr.len(), self.h.n(), "LLR frame length");
        match self.cfg.quantization {
            Quantization::Float => self.decode_float(llr),
            Quantization::Fixed(q) => self.decode_fixed(llr, q),
        }
    }

    fn decode_float(&mut self, llr: &[f64]) -> DecodeOutcome {
        let h = self.h;
        let mut bits: Vec<u8> = llr.iter().map(|&l| (l < 0.0) as u8).collect();
        let mut weight = hard_syndrome_weight(h, &bits);
        if weight == 0 {
            return DecodeOutcome {
                bits,
                converged: true,
                iterations: 0,
                final_syndrome_weight: 0,
            };
        }
        for e in 0..h.num_edges() {
            self.v2c_f[e] = llr[h.edge_col(e)];
        }
        let mut iterations = 0;
        for it in 1..=self.cfg.max_iterations {
            iterations = it;
            for r in 0..h.m() {
                let range = h.row_edge_range(r);
                match self.cfg.algorithm {
                    Algorithm::OffsetMinSum => {
                        let (inp, out) = (&self.v2c_f[range.clone()], &mut self.c2v_f[range]);
                        oms_check_update(inp, self.cfg.beta, out);
                    }
                    Algorithm::SumProduct => {
                        self.scratch_in.clear();
                        self.scratch_in.extend_from_slice(&self.v2c_f[range.clone()]);
                        self.scratch_out.resize(range.len(), 0.0);
                        sp_check_update(&self.scratch_in, &mut self.scratch_out);
                        self.c2v_f[range].copy_from_slice(&self.scratch_out);
                    }
                }
            }
            for v in 0..h.n() {
                let edges = h.col_edges(v);
                let total = llr[v] + edges.iter().map(|&e| self.c2v_f[e]).sum::<f64>();
                bits[v] = (total < 0.0) as u8;
                for &e in edges {
                    self.v2c_f[e] = total - self.c2v_f[e];
                }
            }
            weight = hard_syndrome_weight(h, &bits);
            if weight == 0 {
                break;
            }
        }
        DecodeOutcome {
            bits,
            converged: weight == 0,
            iterations,
            final_syndrome_weight: weight,
        }
    }

    fn decode_fixed(&mut self, llr: &[f64], q: QuantFormat) -> DecodeOutcome {
        let h = self.h;
        let max = q.max_level();
        let beta = q.to_level(self.cfg.beta);
        let levels: Vec<i32> = llr.iter().map(|&l| q.to_level(l)).collect();
        let mut bits: Vec<u8> = levels.iter().map(|&l| (l < 0) as u8).collect();
        let mut weight = hard_syndrome_weight(h, &bits);
        if weight == 0 {
            return DecodeOutcome {
                bits,
                converged: true,
                iterations: 0,
                final_syndrome_weight: 0,
            };
        }
        for e in 0..h.num_edges() {
            self.v2c_q[e] = levels[h.edge_col(e)];
        }
        let mut iterations = 0;
        for it in 1..=self.cfg.max_iterations {
            iterations = it;
            for r in 0..h.m() {
                let range = h.row_edge_range(r);
                oms_check_update_fixed(&self.v2c_q[range.clone()], beta, &mut self.c2v_q[range]);
            }
            for v in 0..h.n() {
                let edges = h.col_edges(v);
                let total = levels[v] + edges.iter().map(|&e| self.c2v_q[e]).sum::<i32>();
                bits[v] = (total < 0) as u8;
                for &e in edges {
                    self.v2c_q[e] = (total - self.c2v_q[e]).clamp(-max, max);
                }
            }
            weight = hard_syndrome_weight(h, &bits);
            if weight == 0 {
                break;
            }
        }
        DecodeOutcome {
            bits,
            converged: weight == 0,
            iterations,
            final_syndrome_weight: weight,
        }
    }
}

/// Decodes one frame against `h`.
pub fn decode(h: &ParityCheckMatrix, llr: &LlrFrame, cfg: &DecoderConfig) -> DecodeOutcome {
    Decoder::new(h, *cfg).decode(llr.values())
}
