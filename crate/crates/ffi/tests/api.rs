use std::ffi::CStr;
use std::ptr;

use lzdawg::factor::{expand, Factor};
use lzdawg::oracle::check_against_oracle;
use lzdawg_ffi::*;
use rand::{rngs::StdRng, Rng, SeedableRng};

const FIG1: &[u8] = b"abaabababaaaaabbabab";

fn new(cfg: LzConfig) -> *mut LzFactorizer {
    let mut h = ptr::null_mut();
    assert_eq!(unsafe { lz_factorizer_new(&cfg, &mut h) }, LzStatus::Ok);
    assert!(!h.is_null());
    h
}

fn take_all(h: *mut LzFactorizer) -> Vec<Factor> {
    let mut out = Vec::new();
    let mut buf = [LzFactor::default(); 3];
    loop {
        let mut got = 0;
        assert_eq!(unsafe { lz_take(h, buf.as_mut_ptr(), buf.len(), &mut got) }, LzStatus::Ok);
        if got == 0 {
            return out;
        }
        for f in &buf[..got] {
            out.push(if f.is_literal == 1 {
                Factor::literal(f.start, f.byte)
            } else {
                Factor::copy(f.start, f.src, f.len)
            });
        }
    }
}

fn run(mode: LzMode, s: &[u8], chunks: usize) -> Vec<Factor> {
    let h = new(LzConfig {
        mode: mode as u32,
        ..lz_config_default()
    });
    let mut out = Vec::new();
    let step = (s.len() / chunks.max(1)).max(1);
    for c in s.chunks(step) {
        assert_eq!(unsafe { lz_push(h, c.as_ptr(), c.len()) }, LzStatus::Ok);
        out.extend(take_all(h));
    }
    assert_eq!(unsafe { lz_finish(h) }, LzStatus::Ok);
    out.extend(take_all(h));
    unsafe { lz_factorizer_free(h) };
    out
}

#[test]
fn figure_one_both_modes() {
    for mode in [LzMode::Packed, LzMode::Rle] {
        let f = run(mode, FIG1, 3);
        let lens: Vec<u64> = f.iter().map(|f| f.len()).collect();
        assert_eq!(lens, vec![1, 1, 1, 3, 4, 4, 1, 5]);
        assert_eq!(expand(&f), FIG1);
    }
}

#[test]
fn random_inputs_match_oracle() {
    let mut rng = StdRng::seed_from_u64(11);
    for i in 0..300 {
        let n = rng.gen_range(0..400);
        let s: Vec<u8> = (0..n).map(|_| rng.gen_range(0..4u8)).collect();
        let mode = if i % 2 == 0 { LzMode::Packed } else { LzMode::Rle };
        let f = run(mode, &s, rng.gen_range(1..5));
        check_against_oracle(&s, &f).unwrap();
    }
}

#[test]
fn push_run_and_stats() {
    let h = new(LzConfig {
        mode: LzMode::Rle as u32,
        ..lz_config_default()
    });
    unsafe {
        assert_eq!(lz_push_run(h, b'a', 5), LzStatus::Ok);
        assert_eq!(lz_push_run(h, b'a', 1), LzStatus::BadRun);
        assert_eq!(lz_push_run(h, b'b', 0), LzStatus::BadRun);
        assert_eq!(lz_finish(h), LzStatus::Ok);
        assert_eq!(lz_finish(h), LzStatus::Ok);
        let mut st = LzStats::default();
        assert_eq!(lz_stats(h, &mut st), LzStatus::Ok);
        assert_eq!((st.n, st.z, st.m), (5, 2, 1));
        assert_eq!(lz_push_run(h, b'b', 1), LzStatus::Finished);
        assert_eq!(lz_push(h, b"x".as_ptr(), 1), LzStatus::Finished);
        lz_factorizer_free(h);
    }
    let p = new(lz_config_default());
    unsafe {
        assert_eq!(lz_push_run(p, b'a', 1), LzStatus::WrongMode);
        let mut st = LzStats::default();
        assert_eq!(lz_push(p, FIG1.as_ptr(), FIG1.len()), LzStatus::Ok);
        assert_eq!(lz_finish(p), LzStatus::Ok);
        assert_eq!(lz_stats(p, &mut st), LzStatus::Ok);
        assert_eq!((st.n, st.z), (20, 8));
        assert!(st.block_chars >= 1);
        lz_factorizer_free(p);
    }
}

#[test]
fn errors() {
    unsafe {
        let mut h = ptr::null_mut();
        let bad_sigma = LzConfig { sigma: 1, ..lz_config_default() };
        assert_eq!(lz_factorizer_new(&bad_sigma, &mut h), LzStatus::InvalidArgument);
        assert!(h.is_null());
        let bad_mode = LzConfig { mode: 7, ..lz_config_default() };
        assert_eq!(lz_factorizer_new(&bad_mode, &mut h), LzStatus::InvalidArgument);
        let tiny = LzConfig { block_chars: 8, mem_budget: 16, ..lz_config_default() };
        assert_eq!(lz_factorizer_new(&tiny, &mut h), LzStatus::MemoryBudget);
        assert_eq!(lz_factorizer_new(ptr::null(), ptr::null_mut()), LzStatus::NullPointer);

        assert_eq!(lz_factorizer_new(ptr::null(), &mut h), LzStatus::Ok);
        assert_eq!(lz_push(h, ptr::null(), 0), LzStatus::Ok);
        assert_eq!(lz_push(h, ptr::null(), 3), LzStatus::NullPointer);
        let mut got = 9;
        assert_eq!(lz_take(h, ptr::null_mut(), 0, &mut got), LzStatus::Ok);
        assert_eq!(got, 0);
        assert_eq!(lz_take(h, ptr::null_mut(), 1, &mut got), LzStatus::NullPointer);
        assert_eq!(lz_stats(h, ptr::null_mut()), LzStatus::NullPointer);
        lz_factorizer_free(h);

        let two = LzConfig { sigma: 2, ..lz_config_default() };
        assert_eq!(lz_factorizer_new(&two, &mut h), LzStatus::Ok);
        assert_eq!(lz_push(h, b"abc".as_ptr(), 3), LzStatus::AlphabetOverflow);
        lz_factorizer_free(h);

        assert_eq!(lz_finish(ptr::null_mut()), LzStatus::NullPointer);
        assert_eq!(lz_pending(ptr::null()), 0);
        lz_factorizer_free(ptr::null_mut());
    }
}

#[test]
fn status_messages() {
    for code in 0..=10 {
        let msg = unsafe { CStr::from_ptr(lz_status_message(code)) };
        assert!(!msg.to_str().unwrap().is_empty());
    }
    let ok = unsafe { CStr::from_ptr(lz_status_message(LzStatus::Ok as i32)) };
    assert_eq!(ok.to_str().unwrap(), "ok");
}
