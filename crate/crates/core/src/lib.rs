//! Rate-compatible LDPC codes built by parity-check extension of a high-rate
//! quasi-cyclic mother code.
//!
//! The crate covers the whole chain: quasi-cyclic base matrices and their
//! Tanner graphs ([`matrix`]), the extension construction and rate selection
//! ([`extension`]), systematic encoding and offset min-sum / sum-product
//! decoding ([`codec`]), the BPSK/AWGN channel ([`channel`]), the
//! short-code-first decode engine with its latency and activity models
//! ([`cvr`]) and seeded Monte Carlo FER/BER sweeps ([`sim`]).

pub mod channel;
pub mod cli;
pub mod codec;
pub mod cvr;
pub mod extension;
pub mod matrix;
pub mod rng;
pub mod sim;
