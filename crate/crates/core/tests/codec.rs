mod common;

use cvr_ldpc::channel::{apply_awgn, channel_llr, modulate_bpsk, sigma_from_ebn0};
use cvr_ldpc::codec::{
    decode, encode_generic, Algorithm, CodeEncoder, CodecError, Decoder, DecoderConfig,
    ExtendedEncoder, GenericEncoder, LlrFrame, QuantFormat, Quantization,
};
use cvr_ldpc::extension::select_rate;
use cvr_ldpc::matrix::{parse_base_matrix, expand_base, syndrome, ParityCheckMatrix};
use cvr_ldpc::rng::Stream;

fn fixed62() -> Quantization {
    Quantization::Fixed(QuantFormat::new(6, 2).unwrap())
}

fn random_bits(s: &mut Stream, n: usize) -> Vec<u8> {
    (0..n).map(|_| s.bit()).collect()
}

#[test]
fn identity_coupled_code_repeats_information() {
    let h = ParityCheckMatrix::from_incidences(3, 6, (0..3).flat_map(|i| [(i, i), (i, i + 3)])).unwrap();
    assert_eq!(encode_generic(&h, &[1, 0, 1]).unwrap(), vec![1, 0, 1, 1, 0, 1]);
    assert_eq!(encode_generic(&h, &[0, 0, 0]).unwrap(), vec![0; 6]);
}

#[test]
fn rank_deficiency_names_dependent_rows() {
    // row 2 = row 0 + row 1
    let h = ParityCheckMatrix::from_incidences(
        3,
        5,
        [(0, 0), (0, 1), (1, 1), (1, 2), (2, 0), (2, 2)],
    )
    .unwrap();
    match GenericEncoder::new(&h) {
        Err(CodecError::RankDeficient { rank, dependent_rows }) => {
            assert_eq!(rank, 2);
            assert_eq!(dependent_rows.len(), 1);
        }
        other => panic!("expected rank deficiency, got {other:?}"),
    }
}

#[test]
fn wimax_half_rate_structured_matches_generic() {
    let (base, h) = common::wimax_half_864();
    let structured = CodeEncoder::for_base(&base, &h).unwrap();
    assert!(matches!(structured, CodeEncoder::Structured(_)));
    let generic = GenericEncoder::new(&h).unwrap();
    assert_eq!(generic.info_positions(), (0..432).collect::<Vec<_>>().as_slice());
    let mut s = Stream::new(11);
    for _ in 0..100 {
        let info = random_bits(&mut s, 432);
        let a = structured.encode(&info).unwrap();
        assert_eq!(a, generic.encode(&info).unwrap());
        assert!(syndrome(&h, &a).unwrap().is_zero());
    }
}

#[test]
fn extended_encoder_matches_generic_at_intermediate_rates() {
    let code = common::paper_code();
    let enc = ExtendedEncoder::new(&code).unwrap();
    let mut s = Stream::new(12);
    for k in [1, 77, 144, 250] {
        let h = select_rate(&code, k).unwrap();
        let generic = GenericEncoder::new(&h).unwrap();
        for _ in 0..20 {
            let info = random_bits(&mut s, 432);
            assert_eq!(enc.encode(&info, k).unwrap(), generic.encode(&info).unwrap());
        }
    }
}

#[test]
fn converged_outcomes_have_zero_recomputed_syndrome() {
    let code = common::paper_code();
    let h = code.assembled();
    let enc = ExtendedEncoder::new(&code).unwrap();
    let sigma = sigma_from_ebn0(2.0, 0.5).unwrap();
    for quant in [Quantization::Float, fixed62()] {
        let cfg = DecoderConfig::new(21, 0.5, Algorithm::OffsetMinSum, quant).unwrap();
        let mut dec = Decoder::new(h, cfg);
        let mut s = Stream::new(13);
        let (mut conv, mut fail) = (0, 0);
        for _ in 0..60 {
            let cw = enc.encode(&random_bits(&mut s, 432), 288).unwrap();
            let y = apply_awgn(&modulate_bpsk(&cw), sigma, &mut s).unwrap();
            let llr = match quant {
                Quantization::Fixed(q) => LlrFrame::fixed(&channel_llr(&y, sigma), q),
                Quantization::Float => LlrFrame::float(channel_llr(&y, sigma)),
            };
            let out = dec.decode(llr.values());
            let w = syndrome(h, &out.bits).unwrap().weight();
            assert_eq!(out.final_syndrome_weight, w);
            assert_eq!(out.converged, w == 0);
            assert!(out.iterations <= 21);
            if out.converged { conv += 1 } else { fail += 1 }
            assert_eq!(decode(h, &llr, &cfg), out, "decoding is deterministic");
        }
        assert!(conv > 0 && fail + conv == 60);
    }
}

#[test]
fn all_positive_frame_is_the_zero_word_at_iteration_zero() {
    let (_, h) = common::wimax_half_864();
    let out = decode(&h, &LlrFrame::float(vec![0.25; 864]), &DecoderConfig::default());
    assert!(out.converged);
    assert_eq!(out.iterations, 0);
    assert!(out.bits.iter().all(|&b| b == 0));
}

#[test]
fn sum_product_decodes_moderate_noise() {
    let base = parse_base_matrix("2 6 16\n0 3 5 -1 1 0\n2 -1 7 1 0 0\n").unwrap();
    let h = expand_base(&base);
    let enc = CodeEncoder::for_base(&base, &h).unwrap();
    let cfg = DecoderConfig::new(30, 0.0, Algorithm::SumProduct, Quantization::Float).unwrap();
    let sigma = sigma_from_ebn0(6.0, 4.0 / 6.0).unwrap();
    let mut s = Stream::new(14);
    let mut ok = 0;
    for _ in 0..50 {
        let cw = enc.encode(&random_bits(&mut s, 64)).unwrap();
        let y = apply_awgn(&modulate_bpsk(&cw), sigma, &mut s).unwrap();
        let out = decode(&h, &LlrFrame::float(channel_llr(&y, sigma)), &cfg);
        ok += (out.converged && out.bits == cw) as usize;
    }
    assert!(ok >= 45, "{ok}/50");
}

#[test]
fn sum_product_with_fixed_point_is_rejected() {
    assert!(DecoderConfig::new(21, 0.5, Algorithm::SumProduct, fixed62()).is_err());
    // beta must be a grid multiple
    assert!(DecoderConfig::new(21, 0.3, Algorithm::OffsetMinSum, fixed62()).is_err());
    assert!(DecoderConfig::new(0, 0.5, Algorithm::OffsetMinSum, Quantization::Float).is_err());
}
