//! C interface to the factorizers.
//!
//! A handle is created with `lz_factorizer_new`, fed with `lz_push` (or
//! `lz_push_run` in RLE mode), closed with `lz_finish` and released with
//! `lz_factorizer_free`. Committed factors queue inside the handle until
//! drained with `lz_take`. Every call returns an `LzStatus`; a handle whose
//! call panicked is poisoned and rejects further use.

use std::ffi::c_char;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use lzdawg::error::{FactorizeError, RleError};
use lzdawg::factor::{Factor, FactorKind};
use lzdawg::oracle::RLFactor;
use lzdawg::packed::{PackedConfig, PackedFactorizer};
use lzdawg::rle::{RleFactorizer, MAX_EXP};

/// Result code of every call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LzStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    AlphabetOverflow = 3,
    MemoryBudget = 4,
    Finished = 5,
    BadRun = 6,
    WrongMode = 7,
    Poisoned = 8,
    Panic = 9,
}

/// Values of `LzConfig::mode`.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LzMode {
    Packed = 0,
    Rle = 1,
}

#[repr(C)]
#[derive(Clone, Copy, Debug)]
pub struct LzConfig {
    /// An `LzMode` value.
    pub mode: u32,
    /// Distinct byte values accepted by the packed mode (2..=256).
    pub sigma: u32,
    /// Characters per meta-character; 0 chooses automatically.
    pub block_chars: u32,
    /// Initial text length bound of the packed mode.
    pub initial_capacity: u64,
    /// Bit-array memory budget in bytes; 0 uses the library default.
    pub mem_budget: u64,
}

/// One factor. `is_literal` is 1 for a literal `byte`, 0 for a copy of
/// `len` bytes from 1-based position `src`.
#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct LzFactor {
    pub start: u64,
    pub src: u64,
    pub len: u64,
    pub byte: u8,
    pub is_literal: u8,
}

impl From<&Factor> for LzFactor {
    fn from(f: &Factor) -> Self {
        match f.kind {
            FactorKind::Literal(b) => LzFactor {
                start: f.start,
                src: 0,
                len: 1,
                byte: b,
                is_literal: 1,
            },
            FactorKind::Copy { src, len } => LzFactor {
                start: f.start,
                src,
                len,
                byte: 0,
                is_literal: 0,
            },
        }
    }
}

#[repr(C)]
#[derive(Clone, Copy, Debug, Default)]
pub struct LzStats {
    pub n: u64,
    pub z: u64,
    /// Runs pushed so far (RLE mode only).
    pub m: u64,
    /// Current block size (packed mode only).
    pub block_chars: u32,
    pub rebuilds: u32,
    pub dawg_states: u64,
    pub dawg_edges: u64,
    pub points: u64,
}

enum Backend {
    Packed(Box<PackedFactorizer>),
    Rle(Box<RleFactorizer>),
}

/// Opaque factorizer handle.
pub struct LzFactorizer {
    backend: Backend,
    queue: Vec<Factor>,
    head: usize,
    poisoned: bool,
}

impl LzFactorizer {
    fn enqueue(&mut self, fs: Vec<Factor>) {
        if self.head == self.queue.len() {
            self.queue.clear();
            self.head = 0;
        }
        self.queue.extend(fs);
    }
}

fn factorize_status(e: FactorizeError) -> LzStatus {
    match e {
        FactorizeError::Alphabet(_) => LzStatus::InvalidArgument,
        FactorizeError::AlphabetOverflow { .. } => LzStatus::AlphabetOverflow,
        FactorizeError::MemoryBudget { .. } => LzStatus::MemoryBudget,
        FactorizeError::Finished => LzStatus::Finished,
    }
}

fn rle_status(e: RleError) -> LzStatus {
    match e {
        RleError::Finished => LzStatus::Finished,
        RleError::AdjacentEqualRuns { .. } | RleError::ZeroExponent { .. } => LzStatus::BadRun,
    }
}

/// Runs `f` on a live handle, converting panics into `Panic` and poisoning.
fn with_handle(h: *mut LzFactorizer, f: impl FnOnce(&mut LzFactorizer) -> LzStatus) -> LzStatus {
    // SAFETY: the caller passes a handle from `lz_factorizer_new` that has not
    // been freed, or null.
    let Some(h) = (unsafe { h.as_mut() }) else {
        return LzStatus::NullPointer;
    };
    if h.poisoned {
        return LzStatus::Poisoned;
    }
    match catch_unwind(AssertUnwindSafe(|| f(&mut *h))) {
        Ok(s) => s,
        Err(_) => {
            h.poisoned = true;
            LzStatus::Panic
        }
    }
}

/// Defaults: packed mode, 256 symbols, automatic block size.
#[no_mangle]
pub extern "C" fn lz_config_default() -> LzConfig {
    let d = PackedConfig::default();
    LzConfig {
        mode: LzMode::Packed as u32,
        sigma: d.sigma,
        block_chars: 0,
        initial_capacity: d.initial_capacity,
        mem_budget: 0,
    }
}

/// Creates a factorizer. On success `*out` receives the handle; otherwise it
/// is set to null.
///
/// # Safety
/// `config` must be null or point to a valid `LzConfig`; `out` must be null
/// or writable.
#[no_mangle]
pub unsafe extern "C" fn lz_factorizer_new(config: *const LzConfig, out: *mut *mut LzFactorizer) -> LzStatus {
    if out.is_null() {
        return LzStatus::NullPointer;
    }
    *out = ptr::null_mut();
    let cfg = if config.is_null() { lz_config_default() } else { *config };
    let made = catch_unwind(|| -> Result<Backend, LzStatus> {
        match cfg.mode {
            m if m == LzMode::Packed as u32 => {
                if !(2..=256).contains(&cfg.sigma) || cfg.block_chars > 64 {
                    return Err(LzStatus::InvalidArgument);
                }
                let mut pc = PackedConfig {
                    sigma: cfg.sigma,
                    block_chars: (cfg.block_chars > 0).then_some(cfg.block_chars),
                    initial_capacity: cfg.initial_capacity,
                    ..PackedConfig::default()
                };
                if cfg.mem_budget > 0 {
                    pc.mem_budget = cfg.mem_budget;
                }
                PackedFactorizer::new(pc).map(|p| Backend::Packed(Box::new(p))).map_err(factorize_status)
            }
            m if m == LzMode::Rle as u32 => Ok(Backend::Rle(Box::new(RleFactorizer::new()))),
            _ => Err(LzStatus::InvalidArgument),
        }
    });
    match made {
        Ok(Ok(backend)) => {
            *out = Box::into_raw(Box::new(LzFactorizer {
                backend,
                queue: Vec::new(),
                head: 0,
                poisoned: false,
            }));
            LzStatus::Ok
        }
        Ok(Err(s)) => s,
        Err(_) => LzStatus::Panic,
    }
}

/// Releases a handle; null is ignored.
///
/// # Safety
/// `h` must be null or a handle from `lz_factorizer_new` not yet freed.
#[no_mangle]
pub unsafe extern "C" fn lz_factorizer_free(h: *mut LzFactorizer) {
    if !h.is_null() {
        drop(Box::from_raw(h));
    }
}

/// Appends bytes. In RLE mode they are merged into runs.
///
/// # Safety
/// `data` must point to `len` readable bytes (it may be null when `len` is 0).
#[no_mangle]
pub unsafe extern "C" fn lz_push(h: *mut LzFactorizer, data: *const u8, len: usize) -> LzStatus {
    if data.is_null() && len > 0 {
        return LzStatus::NullPointer;
    }
    let bytes: &[u8] = if len == 0 { &[] } else { std::slice::from_raw_parts(data, len) };
    with_handle(h, |h| {
        let res = match &mut h.backend {
            Backend::Packed(p) => p.push(bytes).map_err(factorize_status),
            Backend::Rle(r) => r.push_chars(bytes).map_err(rle_status),
        };
        match res {
            Ok(fs) => {
                h.enqueue(fs);
                LzStatus::Ok
            }
            Err(s) => s,
        }
    })
}

/// Appends the run `ch^exp` (RLE mode only).
///
/// # Safety
/// `h` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn lz_push_run(h: *mut LzFactorizer, ch: u8, exp: u64) -> LzStatus {
    with_handle(h, |h| {
        let Backend::Rle(r) = &mut h.backend else {
            return LzStatus::WrongMode;
        };
        if exp > MAX_EXP {
            return LzStatus::InvalidArgument;
        }
        match r.push_run(RLFactor { ch, exp }) {
            Ok(fs) => {
                h.enqueue(fs);
                LzStatus::Ok
            }
            Err(e) => rle_status(e),
        }
    })
}

/// Ends the input and commits the remaining factors. Repeated calls are
/// no-ops.
///
/// # Safety
/// `h` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn lz_finish(h: *mut LzFactorizer) -> LzStatus {
    with_handle(h, |h| {
        let res = match &mut h.backend {
            Backend::Packed(p) => p.finish().map_err(factorize_status),
            Backend::Rle(r) => r.finish().map_err(rle_status),
        };
        match res {
            Ok(fs) => {
                h.enqueue(fs);
                LzStatus::Ok
            }
            Err(s) => s,
        }
    })
}

/// Number of committed factors not yet taken, or 0 for a null handle.
///
/// # Safety
/// `h` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn lz_pending(h: *const LzFactorizer) -> usize {
    h.as_ref().map_or(0, |h| h.queue.len() - h.head)
}

/// Moves up to `cap` committed factors into `buf`, oldest first, and stores
/// the count in `*written`.
///
/// # Safety
/// `buf` must have room for `cap` factors (it may be null when `cap` is 0);
/// `written` must be writable.
#[no_mangle]
pub unsafe extern "C" fn lz_take(h: *mut LzFactorizer, buf: *mut LzFactor, cap: usize, written: *mut usize) -> LzStatus {
    if written.is_null() || (buf.is_null() && cap > 0) {
        return LzStatus::NullPointer;
    }
    *written = 0;
    with_handle(h, |h| {
        let k = cap.min(h.queue.len() - h.head);
        for (i, f) in h.queue[h.head..h.head + k].iter().enumerate() {
            buf.add(i).write(LzFactor::from(f));
        }
        h.head += k;
        *written = k;
        LzStatus::Ok
    })
}

/// Fills `*out` with the current statistics.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn lz_stats(h: *mut LzFactorizer, out: *mut LzStats) -> LzStatus {
    if out.is_null() {
        return LzStatus::NullPointer;
    }
    with_handle(h, |h| {
        let s = match &h.backend {
            Backend::Packed(p) => {
                let s = p.stats();
                LzStats {
                    n: s.n,
                    z: s.z,
                    m: 0,
                    block_chars: s.r,
                    rebuilds: s.rebuilds,
                    dawg_states: s.dawg_states,
                    dawg_edges: s.dawg_edges,
                    points: s.points,
                }
            }
            Backend::Rle(r) => {
                let s = r.stats();
                LzStats {
                    n: s.n,
                    z: s.z,
                    m: s.m,
                    block_chars: 0,
                    rebuilds: 0,
                    dawg_states: s.dawg_states,
                    dawg_edges: s.dawg_edges,
                    points: s.dom_points,
                }
            }
        };
        out.write(s);
        LzStatus::Ok
    })
}

/// Static, NUL-terminated description of an `LzStatus` value.
#[no_mangle]
pub extern "C" fn lz_status_message(status: i32) -> *const c_char {
    let s: &'static [u8] = match status {
        0 => b"ok\0",
        1 => b"null pointer argument\0",
        2 => b"invalid argument\0",
        3 => b"input has more distinct bytes than the configured alphabet\0",
        4 => b"memory budget too small for the block size\0",
        5 => b"input already finished\0",
        6 => b"run has exponent 0 or repeats the previous character\0",
        7 => b"operation not available in this mode\0",
        8 => b"handle unusable after an internal panic\0",
        9 => b"internal panic\0",
        _ => b"unknown status\0",
    };
    s.as_ptr().cast()
}
