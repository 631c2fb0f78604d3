//! Encoding and decoding.

mod decode;
mod generic;
mod quant;
pub mod structured;

pub use decode::{
    decode, oms_check_update, oms_check_update_fixed, sp_check_update, Algorithm, DecodeOutcome,
    Decoder, DecoderConfig, LlrFrame, Quantization, SP_CLAMP,
};
pub use generic::{encode_generic, GenericEncoder};
pub use quant::{quantize, QuantFormat};
pub use structured::{parity_form, ParityForm, StructuredEncoder};

use crate::extension::{ExtendedCode, ExtensionError};
use crate::matrix::{BaseMatrix, ParityCheckMatrix};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CodecError {
    #[error("information word has length {got}, expected {expected}")]
    InfoLength { expected: usize, got: usize },
    #[error("parity check matrix has rank {rank}; dependent rows {dependent_rows:?}")]
    RankDeficient {
        rank: usize,
        dependent_rows: Vec<usize>,
    },
    #[error("parity check matrix has more rows ({m}) than columns ({n})")]
    Overdetermined { m: usize, n: usize },
    #[error("invalid decoder configuration: {0}")]
    InvalidConfig(String),
    #[error(transparent)]
    Extension(#[from] ExtensionError),
}

/// Systematic encoder for an extended code at any extension depth.
///
/// The mother parity comes from the block-level dual-diagonal solver; each
/// extension parity is the XOR of the earlier bits on its row, which is
/// enough because the extension parity part is the identity.
#[derive(Debug, Clone)]
pub struct ExtendedEncoder {
    mother: StructuredEncoder,
    assembled: ParityCheckMatrix,
    mother_len: usize,
    max_extension: usize,
}

impl ExtendedEncoder {
    pub fn new(code: &ExtendedCode) -> Result<Self, CodecError> {
        let mother = StructuredEncoder::new(code.mother())
            .ok_or(CodecError::Extension(ExtensionError::NotDualDiagonal))?;
        Ok(ExtendedEncoder {
            mother,
            assembled: code.assembled().clone(),
            mother_len: code.mother_len(),
            max_extension: code.max_extension(),
        })
    }

    pub fn info_len(&self) -> usize {
        self.mother.info_len()
    }

    /// Codeword of length `n1 z + k`: `[info | mother parity | k extension parities]`.
    pub fn encode(&self, info: &[u8], k: usize) -> Result<Vec<u8>, CodecError> {
        if k > self.max_extension {
            return Err(ExtensionError::RateOutOfRange {
                k,
                max: self.max_extension,
            }
            .into());
        }
        if info.len() != self.info_len() {
            return Err(CodecError::InfoLength {
                expected: self.info_len(),
                got: info.len(),
            });
        }
        let mut word = self.mother.encode(info);
        word.reserve(k);
        let mz = self.assembled.m() - self.max_extension;
        for i in 0..k {
            let own = self.mother_len + i;
            let p = self
                .assembled
                .row(mz + i)
                .iter()
                .filter(|&&c| c != own)
                .fold(0u8, |acc, &c| acc ^ word[c]);
            word.push(p);
        }
        Ok(word)
    }
}

/// Encodes `info` for the code using the first `k` extension rows.
pub fn encode(code: &ExtendedCode, k: usize, info: &[u8]) -> Result<Vec<u8>, CodecError> {
    ExtendedEncoder::new(code)?.encode(info, k)
}

/// Encoder for a code loaded from a base matrix file: block-structured when
/// the parity part allows it, Gaussian elimination otherwise.
#[derive(Debug, Clone)]
pub enum CodeEncoder {
    Structured(StructuredEncoder),
    Generic(GenericEncoder),
}

impl CodeEncoder {
    pub fn for_base(base: &BaseMatrix, h: &ParityCheckMatrix) -> Result<Self, CodecError> {
        match StructuredEncoder::new(base) {
            Some(s) => Ok(CodeEncoder::Structured(s)),
            None => GenericEncoder::new(h).map(CodeEncoder::Generic),
        }
    }

    pub fn info_len(&self) -> usize {
        match self {
            CodeEncoder::Structured(s) => s.info_len(),
            CodeEncoder::Generic(g) => g.info_len(),
        }
    }

    /// Coordinates of the information bits in the codeword.
    pub fn info_positions(&self) -> Vec<usize> {
        match self {
            CodeEncoder::Structured(s) => (0..s.info_len()).collect(),
            CodeEncoder::Generic(g) => g.info_positions().to_vec(),
        }
    }

    pub fn encode(&self, info: &[u8]) -> Result<Vec<u8>, CodecError> {
        match self {
            CodeEncoder::Structured(s) => {
                if info.len() != s.info_len() {
                    return Err(CodecError::InfoLength {
                        expected: s.info_len(),
                        got: info.len(),
                    });
                }
                Ok(s.encode(info))
            }
            CodeEncoder::Generic(g) => g.encode(info),
        }
    }
}
