//! Online s-factorization over packed strings.
//!
//! Characters are grouped into meta-characters of `r` characters. Windows of
//! `r` characters starting at already factorized positions are recorded in
//! a bit array `M` over the meta-character space (short factors), and the
//! meta-blocks of the text are indexed by a DAWG whose states carry point
//! sets of `(reversed preceding block, edge label)` pairs (long factors).
//!
//! The factorizer is a resumable state machine: work happens only when the
//! characters it needs have arrived, and every decision depends on the text
//! and the factorization position alone, so the committed factors do not
//! depend on how the input is chunked.

use serde::Serialize;

use crate::alphabet::{bits_for_sigma, low_mask, AlphabetCfg, BitInterval, MetaChar};
use crate::bitvec::DynBitArray;
use crate::block_tree::BlockTree;
use crate::dawg::{Dawg, DawgEvent, StateId};
use crate::error::FactorizeError;
use crate::factor::Factor;
use crate::points::PointSet;

/// Environment variable holding the memory budget in bytes for the bit arrays.
pub const MEM_BUDGET_ENV: &str = "LZDAWG_MEM_BUDGET";

const DEFAULT_MEM_BUDGET: u64 = 1 << 30;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PackedConfig {
    /// Number of distinct byte values accepted.
    pub sigma: u32,
    /// Fixed characters per meta-character; chosen from the capacity if `None`.
    pub block_chars: Option<u32>,
    /// Initial text length bound; doubled as the input grows.
    pub initial_capacity: u64,
    /// Byte budget for the two meta-character bit arrays.
    pub mem_budget: u64,
}

impl Default for PackedConfig {
    fn default() -> Self {
        PackedConfig {
            sigma: 256,
            block_chars: None,
            initial_capacity: 1 << 16,
            mem_budget: std::env::var(MEM_BUDGET_ENV)
                .ok()
                .and_then(|v| v.trim().parse().ok())
                .unwrap_or(DEFAULT_MEM_BUDGET),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct PackedStats {
    pub n: u64,
    pub z: u64,
    pub r: u32,
    pub dawg_states: u64,
    pub dawg_edges: u64,
    pub points: u64,
    pub rebuilds: u32,
}

/// Approximate bytes used by one bit array over `2^meta_bits` values.
fn bitarray_bytes(meta_bits: u32) -> u128 {
    let cap = 1u128 << meta_bits;
    cap / 8 + cap / 4096 * 12
}

fn choose_r(bits: u32, bound: u64, budget: u64) -> Result<u32, FactorizeError> {
    let log = 63 - bound.max(2).leading_zeros();
    let mut r = (log / bits).max(1).min(64 / bits);
    while 2 * bitarray_bytes(r * bits) > budget as u128 {
        if r == 1 {
            return Err(FactorizeError::MemoryBudget { budget });
        }
        r -= 1;
    }
    Ok(r)
}

/// Structures that depend on the block size and are rebuilt when it changes.
struct Engine {
    cfg: AlphabetCfg,
    occ: DynBitArray,
    tree: BlockTree,
    dawg: Dawg<MetaChar>,
    points: Vec<PointSet>,
    // Windows starting at 1..=windows are in `occ`.
    windows: u64,
    last_window: MetaChar,
    // Windows starting at 1..=tree_windows are in `tree`; each lies inside
    // the factorized prefix.
    tree_windows: u64,
    last_tree_window: MetaChar,
    events: Vec<DawgEvent<MetaChar>>,
}

impl Engine {
    fn new(cfg: AlphabetCfg) -> Self {
        let cap = 1u64 << cfg.meta_bits();
        let points = vec![PointSet::new(cfg.r(), cfg.bits_per_char())];
        Engine {
            cfg,
            occ: DynBitArray::new(cap),
            tree: BlockTree::new(cfg.r(), cfg.bits_per_char(), cap),
            dawg: Dawg::new(),
            points,
            windows: 0,
            last_window: 0,
            tree_windows: 0,
            last_tree_window: 0,
            events: Vec::new(),
        }
    }

    fn points_total(&self) -> u64 {
        self.points.iter().map(|p| p.len() as u64).sum()
    }
}

/// Position of the long-scan traversal inside the DAWG.
#[derive(Clone, Copy, Debug)]
struct Cursor {
    state: StateId,
    depth: u64,
}

#[derive(Clone, Copy, Debug)]
enum Phase {
    Walk,
    Gamma,
}

/// Progress of a factor that needs the DAWG.
#[derive(Clone, Copy, Debug)]
struct LongScan {
    m: u32,
    cur: Cursor,
    phase: Phase,
    best: u64,
    src: u64,
}

pub struct PackedFactorizer {
    config: PackedConfig,
    bits: u32,
    codes: Vec<u8>,
    code_of: [Option<u8>; 256],
    byte_of: Vec<u8>,
    eng: Engine,
    bound: u64,
    rebuilds: u32,
    l: u64,
    z: u64,
    finished: bool,
    open: Option<LongScan>,
}

impl PackedFactorizer {
    pub fn new(config: PackedConfig) -> Result<Self, FactorizeError> {
        let sigma = config.sigma.max(2);
        let bits = bits_for_sigma(sigma);
        let bound = config.initial_capacity.max(2).next_power_of_two();
        let r = match config.block_chars {
            Some(r) => r,
            None => choose_r(bits, bound, config.mem_budget)?,
        };
        let cfg = AlphabetCfg::new(sigma, r)?;
        if 2 * bitarray_bytes(cfg.meta_bits()) > config.mem_budget as u128 {
            return Err(FactorizeError::MemoryBudget {
                budget: config.mem_budget,
            });
        }
        Ok(PackedFactorizer {
            config,
            bits,
            codes: Vec::new(),
            code_of: [None; 256],
            byte_of: Vec::new(),
            eng: Engine::new(cfg),
            bound,
            rebuilds: 0,
            l: 0,
            z: 0,
            finished: false,
            open: None,
        })
    }

    pub fn config(&self) -> &PackedConfig {
        &self.config
    }

    /// Current characters per meta-character.
    pub fn block_chars(&self) -> u32 {
        self.eng.cfg.r()
    }

    pub fn stats(&self) -> PackedStats {
        PackedStats {
            n: self.codes.len() as u64,
            z: self.z,
            r: self.eng.cfg.r(),
            dawg_states: self.eng.dawg.state_count() as u64,
            dawg_edges: self.eng.dawg.edge_count() as u64,
            points: self.eng.points_total(),
            rebuilds: self.rebuilds,
        }
    }

    /// Total points over all DAWG states and the number of DAWG symbols.
    pub fn points_and_blocks(&self) -> (u64, u64) {
        (self.eng.points_total(), self.eng.dawg.symbol_count() as u64)
    }

    pub fn push(&mut self, bytes: &[u8]) -> Result<Vec<Factor>, FactorizeError> {
        if self.finished {
            return Err(FactorizeError::Finished);
        }
        self.codes.reserve(bytes.len());
        for &b in bytes {
            let c = match self.code_of[b as usize] {
                Some(c) => c,
                None => {
                    let next = self.byte_of.len() as u32;
                    if next >= self.eng.cfg.sigma() {
                        return Err(FactorizeError::AlphabetOverflow {
                            byte: b,
                            sigma: self.eng.cfg.sigma(),
                        });
                    }
                    self.code_of[b as usize] = Some(next as u8);
                    self.byte_of.push(b);
                    next as u8
                }
            };
            self.codes.push(c);
        }
        let mut out = Vec::new();
        self.run(&mut out);
        Ok(out)
    }

    pub fn finish(&mut self) -> Result<Vec<Factor>, FactorizeError> {
        let mut out = Vec::new();
        if self.finished {
            return Ok(out);
        }
        self.finished = true;
        self.run(&mut out);
        debug_assert_eq!(self.l, self.codes.len() as u64);
        Ok(out)
    }

    fn n(&self) -> u64 {
        self.codes.len() as u64
    }

    fn r(&self) -> u64 {
        self.eng.cfg.r() as u64
    }

    /// Whether character `i` can be read (past the end reads as 0 once finished).
    fn available(&self, i: u64) -> bool {
        self.finished || i <= self.n()
    }

    #[inline]
    fn code(&self, i: u64) -> u8 {
        self.codes.get(i as usize - 1).copied().unwrap_or(0)
    }

    /// Meta-character of the `r` characters starting at `p`.
    fn meta(&self, p: u64) -> MetaChar {
        let r = self.r();
        let n = self.n();
        if p + r - 1 <= n {
            self.eng.cfg.concat(&self.codes[p as usize - 1..(p + r - 1) as usize])
        } else {
            (p..p + r).fold(0u64, |acc, i| (acc << self.bits) | self.code(i) as u64)
        }
    }

    fn maybe_rebuild(&mut self) {
        if self.config.block_chars.is_some() || self.l < self.bound {
            return;
        }
        while self.bound <= self.l {
            self.bound *= 2;
        }
        // Keep the current block size if the budget refuses a larger one.
        let r = choose_r(self.bits, self.bound, self.config.mem_budget).unwrap_or(self.eng.cfg.r());
        if r != self.eng.cfg.r() {
            let cfg = AlphabetCfg::new(self.eng.cfg.sigma(), r).expect("block size fits a word");
            self.eng = Engine::new(cfg);
            self.rebuilds += 1;
        }
    }

    /// Records the windows starting at positions up to `l` in `occ`, and
    /// those ending at or before `l` in the block tree.
    fn add_windows(&mut self) {
        let r = self.r();
        let mask = low_mask(self.eng.cfg.meta_bits());
        while self.eng.windows < self.l {
            let p = self.eng.windows + 1;
            let a = if p == 1 {
                self.meta(1)
            } else {
                ((self.eng.last_window << self.bits) | self.code(p + r - 1) as u64) & mask
            };
            self.eng.occ.set_unchecked(a + 1);
            self.eng.last_window = a;
            self.eng.windows = p;
        }
        while self.eng.tree_windows + r <= self.l {
            let p = self.eng.tree_windows + 1;
            let prev = self.eng.last_tree_window;
            let a = if p == 1 {
                self.meta(1)
            } else {
                ((prev << self.bits) | self.code(p + r - 1) as u64) & mask
            };
            self.eng.tree.update(p, a, (p > 1).then_some(prev));
            self.eng.last_tree_window = a;
            self.eng.tree_windows = p;
        }
    }

    /// Whether the whole block containing character `upto` can be read.
    fn block_available(&self, upto: u64) -> bool {
        self.available(upto.div_ceil(self.r()) * self.r())
    }

    /// Extends the DAWG to the block containing character `upto`.
    fn ensure_dawg(&mut self, upto: u64, mut cursor: Option<&mut Cursor>) {
        let r = self.r();
        let mut target = upto.div_ceil(r);
        if self.finished {
            target = target.min(self.n().div_ceil(r));
        }
        while (self.eng.dawg.symbol_count() as u64) < target {
            let b = self.eng.dawg.symbol_count() as u64 + 1;
            debug_assert!(self.available(b * r));
            let sym = self.meta((b - 1) * r + 1);
            let mut events = std::mem::take(&mut self.eng.events);
            events.clear();
            self.eng.dawg.extend_into(sym, &mut events);
            for ev in &events {
                self.apply_event(ev, cursor.as_deref_mut());
            }
            self.eng.events = events;
        }
    }

    fn apply_event(&mut self, ev: &DawgEvent<MetaChar>, cursor: Option<&mut Cursor>) {
        let cfg = self.eng.cfg;
        let eng = &mut self.eng;
        while eng.points.len() < eng.dawg.state_count() {
            eng.points.push(PointSet::new(cfg.r(), cfg.bits_per_char()));
        }
        match *ev {
            DawgEvent::NewSink { .. } => {}
            DawgEvent::SecondaryEdgeAdded {
                from,
                symbol,
                preceding,
                ..
            }
            | DawgEvent::SplitCopiedEdge {
                from,
                symbol,
                preceding,
                ..
            } => {
                eng.points[from.index()].insert((cfg.reverse_meta(preceding), symbol));
            }
            DawgEvent::SuffixLinkSet {
                target,
                label,
                target_parent: Some(v),
                ..
            } => {
                let edge = eng.dawg.symbol_at(eng.dawg.pos(target));
                eng.points[v.index()].insert((cfg.reverse_meta(label), edge));
            }
            DawgEvent::SuffixLinkSet { .. } => {}
            DawgEvent::StateSplit { old, new } => {
                if let Some(c) = cursor {
                    if c.state == old && c.depth <= eng.dawg.len(new) as u64 {
                        c.state = new;
                    }
                }
            }
        }
    }

    fn run(&mut self, out: &mut Vec<Factor>) {
        loop {
            let n = self.n();
            if self.l >= n {
                return;
            }
            if self.open.is_none() {
                self.maybe_rebuild();
            }
            let avail = n - self.l;
            let r = self.r();
            // Enough lookahead for the short path and its DAWG coverage.
            if !self.finished && avail < 3 * r {
                return;
            }
            self.add_windows();
            let factor = match self.open.take() {
                Some(scan) => match self.long_scan(scan) {
                    Some(f) => f,
                    None => return,
                },
                None => {
                    let t_r = self.meta(self.l + 1);
                    if avail >= r && self.eng.occ.get_unchecked(t_r + 1) {
                        let scan = LongScan {
                            m: 0,
                            cur: Cursor {
                                state: Dawg::<MetaChar>::SOURCE,
                                depth: 0,
                            },
                            phase: Phase::Walk,
                            best: 0,
                            src: 0,
                        };
                        match self.long_scan(scan) {
                            Some(f) => f,
                            None => return,
                        }
                    } else {
                        self.short_factor(avail.min(r - 1))
                    }
                }
            };
            self.l += factor.len();
            self.z += 1;
            out.push(factor);
        }
    }

    fn short_factor(&mut self, cap: u64) -> Factor {
        let start = self.l + 1;
        let mut mi = 0u64;
        let mut t: Vec<u8> = Vec::with_capacity(cap as usize);
        for m in 1..=cap {
            t.push(self.code(self.l + m));
            let iv = self.eng.cfg.prefix_interval_unchecked(&t);
            if self.eng.occ.pc_unchecked(iv.lo + 1, iv.hi + 1) > 0 {
                mi = m;
            } else {
                t.pop();
                break;
            }
        }
        if mi == 0 {
            let b = self.byte_of[self.code(start) as usize];
            return Factor::literal(start, b);
        }
        let src = self.prev_occurrence_short(&t);
        Factor::copy(start, src, mi)
    }

    /// End block of the occurrence of `A longest(u) X` for an edge `u -X-> v`.
    fn end_block(&self, u: StateId, v: StateId, a: MetaChar) -> Option<u64> {
        let d = &self.eng.dawg;
        if d.is_primary(u, v) {
            d.suffix_link_reverse_lookup(v, a).map(|w| d.pos(w) as u64)
        } else {
            Some(d.pos(v) as u64)
        }
    }

    /// Start of an occurrence whose last of `blocks` blocks is `e`, preceded
    /// by `m` characters; `None` if it does not start at or before `l`.
    #[inline]
    fn valid_start(&self, e: u64, blocks: u64, m: u64) -> Option<u64> {
        let r = self.r();
        let s = ((e - blocks) * r + 1).checked_sub(m)?;
        (s >= 1 && s <= self.l).then_some(s)
    }

    /// Start of some occurrence of `t` (`|t| < r`) beginning at or before `l`.
    fn prev_occurrence_short(&mut self, t: &[u8]) -> u64 {
        let k = t.len() as u64;
        let r = self.r();
        self.ensure_dawg(self.l + k + r - 1, None);
        let cfg = self.eng.cfg;
        let source = Dawg::<MetaChar>::SOURCE;
        // Occurrences crossing a block border.
        for m in 1..k {
            let hr = cfg.suffix_interval_unchecked(&t[..m as usize]);
            let tr = cfg.prefix_interval_unchecked(&t[m as usize..]);
            let cands = self.eng.points[source.index()].find_up_to(hr, tr, 3);
            for (x, y) in cands {
                let Some(v) = self.eng.dawg.transition(source, y) else { continue };
                let a = cfg.reverse_meta(x);
                if let Some(s) = self.end_block(source, v, a).and_then(|e| self.valid_start(e, 1, m)) {
                    return s;
                }
            }
        }
        // Occurrences starting in the last r - 1 positions, whose windows
        // are not in the block tree yet.
        let l = self.l;
        for q in (l + 2).saturating_sub(r).max(1)..=l {
            if (0..k).all(|i| self.code(q + i) == t[i as usize]) {
                return q;
            }
        }
        // Otherwise every window starting with t lies inside the prefix, and
        // t sits inside one block of each of its occurrences.
        let iv = cfg.prefix_interval_unchecked(t);
        let cnt = self.eng.occ.rank_unchecked(iv.hi + 1);
        let a = self.eng.occ.select(cnt).expect("a window with this prefix exists") - 1;
        debug_assert!(iv.contains(a));
        let (a2, d) = self.eng.tree.locate(a).expect("window was recorded");
        let v = self
            .eng
            .dawg
            .transition(source, a2)
            .expect("aligned window is a DAWG block");
        let s = (self.eng.dawg.pos(v) as u64 - 1) * r + 1 + d as u64;
        assert!(s <= self.l, "in-block occurrence at {s} lies after {}", self.l);
        debug_assert!((0..k).all(|i| self.code(s + i) == t[i as usize]));
        s
    }

    /// Runs (or resumes) the offset sweep; `None` means more input is needed.
    fn long_scan(&mut self, mut scan: LongScan) -> Option<Factor> {
        let r = self.r();
        let cfg = self.eng.cfg;
        let l = self.l;
        let n = self.n();
        while scan.m < r as u32 {
            let m = scan.m as u64;
            match scan.phase {
                Phase::Walk => {
                    let done = m + scan.cur.depth * r;
                    if self.finished && l + done >= n {
                        self.next_offset(&mut scan);
                        continue;
                    }
                    if !self.block_available(l + done + r) {
                        self.open = Some(scan);
                        return None;
                    }
                    let x = self.meta(l + done + 1);
                    self.ensure_dawg(l + done + r - 1, Some(&mut scan.cur));
                    match self.walk_step(&scan, x) {
                        Some((v, s)) => {
                            scan.cur = Cursor {
                                state: v,
                                depth: scan.cur.depth + 1,
                            };
                            if done + r > scan.best {
                                scan.best = done + r;
                                scan.src = s;
                            }
                        }
                        None => scan.phase = Phase::Gamma,
                    }
                }
                Phase::Gamma => {
                    let fhat = m + scan.cur.depth * r;
                    if fhat + r - 1 <= scan.best || (self.finished && l + fhat >= n) {
                        self.next_offset(&mut scan);
                        continue;
                    }
                    if !self.block_available(l + fhat + r) {
                        self.open = Some(scan);
                        return None;
                    }
                    let b = self.meta(l + fhat + 1);
                    if fhat + r >= 2 {
                        self.ensure_dawg(l + fhat + r - 2, Some(&mut scan.cur));
                    }
                    let mut j = (scan.best + 1).saturating_sub(fhat);
                    while j < r {
                        let free = (r - j) as u32 * self.bits;
                        let lo = b & !low_mask(free);
                        let tr = BitInterval::new(lo, lo | low_mask(free));
                        match self.gamma_probe(&scan, tr) {
                            Some(s) => {
                                if fhat + j > scan.best {
                                    scan.best = fhat + j;
                                    scan.src = s;
                                }
                                j += 1;
                            }
                            None => break,
                        }
                    }
                    self.next_offset(&mut scan);
                }
            }
        }
        let mut len = scan.best;
        if self.finished {
            len = len.min(n - l);
        }
        debug_assert!(len >= r.min(n - l), "long scan found {len} < r");
        let _ = cfg;
        Some(Factor::copy(l + 1, scan.src, len))
    }

    fn next_offset(&self, scan: &mut LongScan) {
        scan.m += 1;
        scan.cur = Cursor {
            state: Dawg::<MetaChar>::SOURCE,
            depth: 0,
        };
        scan.phase = Phase::Walk;
    }

    fn alpha_interval(&self, m: u64) -> BitInterval {
        let a = &self.codes[self.l as usize..(self.l + m) as usize];
        self.eng.cfg.suffix_interval_unchecked(a)
    }

    /// One traversal step by block `x`; returns the next state and a valid start.
    fn walk_step(&mut self, scan: &LongScan, x: MetaChar) -> Option<(StateId, u64)> {
        let u = scan.cur.state;
        let depth = scan.cur.depth;
        let m = scan.m as u64;
        let v = self.eng.dawg.transition(u, x)?;
        let longest = depth == self.eng.dawg.len(u) as u64;
        if longest && m > 0 {
            let hr = self.alpha_interval(m);
            let cands = self.eng.points[u.index()].find_up_to(hr, BitInterval::point(x), 3);
            for (px, _) in cands {
                let a = self.eng.cfg.reverse_meta(px);
                if let Some(s) = self.end_block(u, v, a).and_then(|e| self.valid_start(e, depth + 1, m)) {
                    return Some((v, s));
                }
            }
            None
        } else {
            let e = self.eng.dawg.pos(v) as u64;
            self.valid_start(e, depth + 1, m).map(|s| (v, s))
        }
    }

    /// Valid start of an occurrence extending the current match by a block
    /// prefix in `tr`, if any.
    fn gamma_probe(&mut self, scan: &LongScan, tr: BitInterval) -> Option<u64> {
        let u = scan.cur.state;
        let depth = scan.cur.depth;
        let m = scan.m as u64;
        let longest = depth == self.eng.dawg.len(u) as u64;
        if longest && m > 0 {
            let hr = self.alpha_interval(m);
            let cands = self.eng.points[u.index()].find_up_to(hr, tr, 3);
            for (px, y) in cands {
                let Some(v) = self.eng.dawg.transition(u, y) else { continue };
                let a = self.eng.cfg.reverse_meta(px);
                if let Some(s) = self.end_block(u, v, a).and_then(|e| self.valid_start(e, depth + 1, m)) {
                    return Some(s);
                }
            }
            None
        } else {
            let d = &self.eng.dawg;
            d.edges_in(u, tr.lo..=tr.hi)
                .take(3)
                .find_map(|(_, v)| self.valid_start(d.pos(v) as u64, depth + 1, m))
        }
    }
}

/// Factorizes a whole byte string.
pub fn factorize(bytes: &[u8], config: PackedConfig) -> Result<Vec<Factor>, FactorizeError> {
    let mut f = PackedFactorizer::new(config)?;
    let mut out = f.push(bytes)?;
    out.extend(f.finish()?);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::{check_against_oracle, naive_factorize};
    use rand::{rngs::StdRng, Rng, SeedableRng};

    fn cfg(sigma: u32, r: Option<u32>) -> PackedConfig {
        PackedConfig {
            sigma,
            block_chars: r,
            initial_capacity: 1 << 10,
            mem_budget: 1 << 30,
        }
    }

    #[test]
    fn figure_one() {
        let s = b"abaabababaaaaabbabab";
        for r in 1..=6 {
            let f = factorize(s, cfg(2, Some(r))).unwrap();
            check_against_oracle(s, &f).unwrap_or_else(|e| panic!("r={r}: {e}"));
        }
        let f = factorize(s, cfg(2, None)).unwrap();
        let lens: Vec<u64> = f.iter().map(|f| f.len()).collect();
        assert_eq!(lens, vec![1, 1, 1, 3, 4, 4, 1, 5]);
    }

    #[test]
    fn aligned_copy_after_the_shifted_window() {
        // The only window starting with the short factor `abab` occurs early,
        // but its aligned block-tree ancestor is first aligned in the last block.
        let s = b"abbababaaaabbbbbabbaabaaaaaabbaaaaaaaaabbbabab";
        let f = factorize(s, cfg(2, Some(8))).unwrap();
        check_against_oracle(s, &f).unwrap();
    }

    #[test]
    fn small_examples() {
        assert!(factorize(b"", cfg(2, None)).unwrap().is_empty());
        let f = factorize(b"aaaa", cfg(2, Some(2))).unwrap();
        assert_eq!(f, vec![Factor::literal(1, b'a'), Factor::copy(2, 1, 3)]);
        let f = factorize(b"ab", cfg(2, Some(3))).unwrap();
        assert_eq!(f, vec![Factor::literal(1, b'a'), Factor::literal(2, b'b')]);
        let mut p = PackedFactorizer::new(cfg(2, None)).unwrap();
        assert!(p.push(b"").unwrap().is_empty());
        assert!(p.finish().unwrap().is_empty());
        assert!(p.finish().unwrap().is_empty());
        assert_eq!(p.push(b"a"), Err(FactorizeError::Finished));
    }

    #[test]
    fn alphabet_overflow() {
        let mut p = PackedFactorizer::new(cfg(2, None)).unwrap();
        assert!(matches!(
            p.push(b"abc"),
            Err(FactorizeError::AlphabetOverflow { byte: b'c', .. })
        ));
    }

    #[test]
    fn random_against_oracle() {
        let mut rng = StdRng::seed_from_u64(99);
        for it in 0..1500 {
            let sigma = [2u32, 3, 4, 16][it % 4];
            let n = rng.gen_range(0..300);
            let s: Vec<u8> = (0..n).map(|_| rng.gen_range(0..sigma) as u8).collect();
            let r = if it % 3 == 0 { None } else { Some(rng.gen_range(1..=5)) };
            let f = factorize(&s, cfg(sigma, r)).unwrap();
            if let Err(e) = check_against_oracle(&s, &f) {
                panic!("sigma={sigma} r={r:?} s={s:?}: {e}\n got {f:?}\n want {:?}", naive_factorize(&s));
            }
        }
    }

    #[test]
    fn chunked_push_is_stable() {
        let mut rng = StdRng::seed_from_u64(4);
        for _ in 0..300 {
            let n = rng.gen_range(0..400);
            let s: Vec<u8> = (0..n).map(|_| rng.gen_range(0..3u8)).collect();
            let r = Some(rng.gen_range(1..=4));
            let whole = factorize(&s, cfg(3, r)).unwrap();
            let mut p = PackedFactorizer::new(cfg(3, r)).unwrap();
            let mut got = Vec::new();
            let mut i = 0;
            while i < n {
                let k = rng.gen_range(1..=7).min(n - i);
                got.extend(p.push(&s[i..i + k]).unwrap());
                i += k;
            }
            got.extend(p.finish().unwrap());
            assert_eq!(got, whole);
        }
    }

    #[test]
    fn rebuild_keeps_lengths() {
        let mut rng = StdRng::seed_from_u64(8);
        let s: Vec<u8> = (0..5000).map(|_| rng.gen_range(0..2u8)).collect();
        let mut small = PackedFactorizer::new(PackedConfig {
            initial_capacity: 4,
            ..cfg(2, None)
        })
        .unwrap();
        let mut f = small.push(&s).unwrap();
        f.extend(small.finish().unwrap());
        assert!(small.stats().rebuilds > 0);
        check_against_oracle(&s, &f).unwrap();
    }

    #[test]
    fn choose_r_respects_budget() {
        assert_eq!(choose_r(8, 1 << 20, 1 << 30).unwrap(), 2);
        assert_eq!(choose_r(1, 1 << 20, 1 << 30).unwrap(), 20);
        assert_eq!(choose_r(1, 1 << 20, 1 << 10).unwrap(), 11);
        assert!(choose_r(8, 1 << 20, 10).is_err());
    }
}
