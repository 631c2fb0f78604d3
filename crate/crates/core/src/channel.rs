//! BPSK over AWGN: modulation, seeded noise and channel LLRs.
//!
//! Bit 0 maps to `+1` and bit 1 to `-1`, so a positive LLR favours bit 0.

use crate::rng::Stream;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ChannelError {
    #[error("code rate {0} is outside (0, 1]")]
    InvalidRate(f64),
    #[error("noise standard deviation must be positive, got {0}")]
    InvalidSigma(f64),
}

/// How the SNR axis is interpreted.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SnrKind {
    /// Energy per information bit over noise density.
    #[default]
    EbN0,
    /// Energy per transmitted symbol over noise density.
    EsN0,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ChannelConfig {
    pub snr_db: f64,
    pub kind: SnrKind,
    pub rate: f64,
    pub sigma: f64,
    pub seed: u64,
}

impl ChannelConfig {
    pub fn new(snr_db: f64, kind: SnrKind, rate: f64, seed: u64) -> Result<Self, ChannelError> {
        let sigma = match kind {
            SnrKind::EbN0 => sigma_from_ebn0(snr_db, rate)?,
            SnrKind::EsN0 => {
                check_rate(rate)?;
                sigma_from_ebn0(snr_db, 1.0)?
            }
        };
        Ok(ChannelConfig {
            snr_db,
            kind,
            rate,
            sigma,
            seed,
        })
    }
}

fn check_rate(rate: f64) -> Result<(), ChannelError> {
    if rate > 0.0 && rate <= 1.0 {
        Ok(())
    } else {
        Err(ChannelError::InvalidRate(rate))
    }
}

/// Noise standard deviation for unit-energy BPSK at the given Eb/N0 and
/// code rate: `sigma^2 = 1 / (2 R 10^(EbN0/10))`.
pub fn sigma_from_ebn0(ebn0_db: f64, rate: f64) -> Result<f64, ChannelError> {
    check_rate(rate)?;
    Ok((1.0 / (2.0 * rate * 10f64.powf(ebn0_db / 10.0))).sqrt())
}

pub fn modulate_bpsk(bits: &[u8]) -> Vec<f64> {
    bits.iter()
        .map(|&b| if b & 1 == 0 { 1.0 } else { -1.0 })
        .collect()
}

/// Adds N(0, sigma^2) noise in place, drawing from `stream`.
pub fn apply_awgn_in_place(symbols: &mut [f64], sigma: f64, stream: &mut Stream) {
    for s in symbols.iter_mut() {
        *s += sigma * stream.gaussian();
    }
}

pub fn apply_awgn(
    symbols: &[f64],
    sigma: f64,
    stream: &mut Stream,
) -> Result<Vec<f64>, ChannelError> {
    if !(sigma > 0.0) {
        return Err(ChannelError::InvalidSigma(sigma));
    }
    let mut out = symbols.to_vec();
    apply_awgn_in_place(&mut out, sigma, stream);
    Ok(out)
}

/// AWGN channel LLR, `2 y / sigma^2`.
pub fn channel_llr(received: &[f64], sigma: f64) -> Vec<f64> {
    let scale = 2.0 / (sigma * sigma);
    received.iter().map(|&y| scale * y).collect()
}
