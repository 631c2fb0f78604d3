mod common;

use cvr_ldpc::codec::{CodeEncoder, DecoderConfig, ExtendedEncoder, LlrFrame};
use cvr_ldpc::cvr::{decode_cvr, CvrEngine, RateController, RatePolicy};
use cvr_ldpc::extension::select_rate;
use cvr_ldpc::matrix::syndrome;
use cvr_ldpc::rng::Stream;
use cvr_ldpc::sim::{run_point, run_sweep, SimCode, SnrRange, StoppingRule, SweepConfig};

fn strong(cw: &[u8]) -> Vec<f64> {
    cw.iter().map(|&b| if b == 0 { 7.75 } else { -7.75 }).collect()
}

#[test]
fn converged_stage_satisfies_its_prefix_code() {
    let code = common::paper_code();
    let enc = ExtendedEncoder::new(&code).unwrap();
    let engine = CvrEngine::new(&code, &[0, 144, 288], DecoderConfig::default()).unwrap();
    let mut worker = engine.worker();
    let mut s = Stream::new(21);
    for i in 0..30 {
        let info: Vec<u8> = (0..432).map(|_| s.bit()).collect();
        let cw = enc.encode(&info, 288).unwrap();
        let mut llr = strong(&cw);
        // heavier corruption of the mother part on every other frame
        for j in 0..(if i % 2 == 0 { 20 } else { 60 }) {
            let p = s.below(576) as usize;
            llr[p] = -llr[p] * 0.25 * (j % 3) as f64;
        }
        let out = worker.decode(&llr, 0);
        let ks: Vec<usize> = out.attempts.iter().map(|a| a.k).collect();
        assert!(ks.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(ks[0], 0);
        if out.outcome.converged {
            let h = select_rate(&code, out.rate_used).unwrap();
            assert!(syndrome(&h, &out.outcome.bits).unwrap().is_zero());
        }
    }
}

#[test]
fn full_only_consumes_all_parity_regardless_of_noise() {
    let code = common::paper_code();
    let enc = ExtendedEncoder::new(&code).unwrap();
    let cw = enc.encode(&vec![0; 432], 288).unwrap();
    for llr in [strong(&cw), vec![0.0; 864]] {
        let mut ctl = RateController::new(RatePolicy::FullOnly);
        let out = decode_cvr(
            &code,
            &LlrFrame::float(llr),
            &mut ctl,
            0.0,
            &DecoderConfig::default(),
            &[0, 144, 288],
        )
        .unwrap();
        assert_eq!(out.attempts.len(), 1);
        assert_eq!(out.rate_used, 288);
    }
}

#[test]
fn short_first_never_consumes_more_than_full_only_on_easy_frames() {
    let code = common::paper_code();
    let enc = ExtendedEncoder::new(&code).unwrap();
    let mut s = Stream::new(22);
    let info: Vec<u8> = (0..432).map(|_| s.bit()).collect();
    let llr = LlrFrame::float(strong(&enc.encode(&info, 288).unwrap()));
    let cfg = DecoderConfig::default();
    let mut short = RateController::new(RatePolicy::ShortFirst);
    let mut full = RateController::new(RatePolicy::FullOnly);
    let a = decode_cvr(&code, &llr, &mut short, 5.0, &cfg, &[0, 144, 288]).unwrap();
    let b = decode_cvr(&code, &llr, &mut full, 5.0, &cfg, &[0, 144, 288]).unwrap();
    assert_eq!(a.rate_used, 0);
    assert!(a.rate_used <= b.rate_used);
}

fn paper_cvr(policy: RatePolicy) -> SimCode {
    SimCode::cvr(&common::paper_code(), &[0, 144, 288], DecoderConfig::default(), policy).unwrap()
}

#[test]
fn threshold_policy_first_stage_flips_at_threshold() {
    let code = paper_cvr(RatePolicy::snr_threshold(3.0, 4).unwrap());
    let mut cfg = SweepConfig::new(DecoderConfig::default(), "2.5:0.5:3.5".parse().unwrap(), 0.75);
    cfg.stop = StoppingRule::new(50, 50).unwrap();
    let pts = run_sweep(&code, &cfg, |_| Ok(())).unwrap();
    assert_eq!(pts.len(), 3);
    // below the threshold every frame starts on the full code
    assert_eq!(pts[0].stages[2].first_attempts, 50);
    assert_eq!(pts[0].stages[0].first_attempts, 0);
    for p in &pts[1..] {
        assert!(p.stages[0].first_attempts > 0, "{:?}", p.stages);
    }
}

#[test]
fn full_only_rate_used_is_exactly_maximum() {
    let code = paper_cvr(RatePolicy::FullOnly);
    let mut cfg = SweepConfig::new(DecoderConfig::default(), SnrRange::single(4.0), 0.75);
    cfg.stop = StoppingRule::new(20, 40).unwrap();
    let p = run_point(&code, &cfg, 0, 4.0).unwrap();
    assert_eq!(p.avg_rate_used(), 288.0);
}

#[test]
fn high_snr_short_first_matches_plain_mother_code() {
    let cvr = paper_cvr(RatePolicy::ShortFirst);
    let mother = common::mother();
    let h = cvr_ldpc::matrix::expand_base(&mother);
    let plain = SimCode::plain(h.clone(), CodeEncoder::for_base(&mother, &h).unwrap(), 0);
    let mut cfg = SweepConfig::new(DecoderConfig::default(), SnrRange::single(6.0), 0.75);
    cfg.stop = StoppingRule::new(10, 300).unwrap();
    let a = run_point(&cvr, &cfg, 0, 6.0).unwrap();
    let b = run_point(&plain, &cfg, 0, 6.0).unwrap();
    assert_eq!(a.frame_errors, 0);
    assert_eq!(b.frame_errors, 0);
    assert_eq!(a.avg_rate_used(), 0.0);
}

#[test]
fn single_point_sweep_equals_run_point_and_empty_range_is_empty() {
    let code = SimCode::extended(&common::paper_code(), 288).unwrap();
    let mut cfg = SweepConfig::new(DecoderConfig::default(), SnrRange::single(2.2), 0.5);
    cfg.stop = StoppingRule::new(5, 100).unwrap();
    let pts = run_sweep(&code, &cfg, |_| Ok(())).unwrap();
    assert_eq!(pts, vec![run_point(&code, &cfg, 0, 2.2).unwrap()]);
    cfg.snr = "3:0.5:2".parse().unwrap();
    assert!(run_sweep(&code, &cfg, |_| Ok(())).unwrap().is_empty());
}

#[test]
fn fer_does_not_increase_with_snr_beyond_confidence() {
    let code = SimCode::extended(&common::paper_code(), 288).unwrap();
    let mut cfg = SweepConfig::new(DecoderConfig::default(), "1.0:0.5:2.5".parse().unwrap(), 0.5);
    cfg.stop = StoppingRule::new(30, 3000).unwrap();
    let pts = run_sweep(&code, &cfg, |_| Ok(())).unwrap();
    for w in pts.windows(2) {
        assert!(
            w[1].fer() - w[1].fer_ci95() <= w[0].fer() + w[0].fer_ci95(),
            "{} dB: {} vs {} dB: {}",
            w[0].snr_db,
            w[0].fer(),
            w[1].snr_db,
            w[1].fer()
        );
    }
}

#[test]
fn stopping_rule_invariants_hold() {
    let code = SimCode::extended(&common::paper_code(), 288).unwrap();
    let mut cfg = SweepConfig::new(DecoderConfig::default(), "1.0:1.0:3.0".parse().unwrap(), 0.5);
    cfg.stop = StoppingRule::new(10, 400).unwrap();
    for p in run_sweep(&code, &cfg, |_| Ok(())).unwrap() {
        assert!(p.frames_run <= 400);
        if p.frames_run < 400 {
            assert!(p.frame_errors >= 10);
        }
        assert!(p.fer() <= 1.0);
        assert!(p.undetected_errors <= p.frame_errors);
    }
}

#[test]
fn worker_count_does_not_change_cvr_points() {
    let code = paper_cvr(RatePolicy::ShortFirst);
    let mut cfg = SweepConfig::new(DecoderConfig::default(), SnrRange::single(3.0), 0.75);
    cfg.stop = StoppingRule::new(5, 300).unwrap();
    cfg.batch_size = 32;
    let a = run_point(&code, &cfg, 0, 3.0).unwrap();
    cfg.workers = 3;
    let b = run_point(&code, &cfg, 0, 3.0).unwrap();
    assert_eq!(a, b);
}
