//! Online s-factorization of run-length encoded input.
//!
//! The DAWG is built over runs, each run a symbol `(char, exponent)`. A
//! factor starting inside a run begins with the rest of that run, so the
//! search only has to decide how far an occurrence preceded by a long
//! enough run of the same character extends. For every state and pair of
//! characters `(a, b)` the factorizer keeps the dominant points
//! `(exponent of the preceding a-run, exponent of the b-run edge)`, which
//! answer both extremum queries of the search.
//!
//! When run `t` is matched the DAWG holds exactly runs `1..t-1`: every
//! occurrence it contains starts before the factor, and the factor's own
//! position is excluded.

use std::collections::{BTreeMap, HashMap};

use serde::Serialize;

use crate::dawg::{Dawg, DawgEvent, StateId};
use crate::error::RleError;
use crate::factor::Factor;
use crate::oracle::RLFactor;

const EXP_BITS: u32 = 40;
const EXP_MASK: u64 = (1 << EXP_BITS) - 1;

/// Largest exponent a single run may have.
pub const MAX_EXP: u64 = EXP_MASK;

#[inline]
fn sym(ch: u8, exp: u64) -> u64 {
    ((ch as u64) << EXP_BITS) | exp
}

#[inline]
fn sym_ch(s: u64) -> u8 {
    (s >> EXP_BITS) as u8
}

#[inline]
fn sym_exp(s: u64) -> u64 {
    s & EXP_MASK
}

/// Point of a dominant set with the run index that witnesses it.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DomPoint {
    pub x: u64,
    pub y: u64,
    pub witness: usize,
}

/// Points not dominated coordinate-wise by another point. Stored points are
/// strictly decreasing in `y` as `x` increases.
#[derive(Clone, Debug, Default)]
pub struct DomSet {
    by_x: BTreeMap<u64, (u64, usize)>,
    by_y: BTreeMap<u64, u64>,
}

impl DomSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.by_x.len()
    }

    pub fn is_empty(&self) -> bool {
        self.by_x.is_empty()
    }

    pub fn points(&self) -> impl Iterator<Item = DomPoint> + '_ {
        self.by_x.iter().map(|(&x, &(y, witness))| DomPoint { x, y, witness })
    }

    /// Inserts `(x, y)` unless dominated; returns whether it was stored.
    pub fn insert(&mut self, x: u64, y: u64, witness: usize) -> bool {
        if let Some((_, &(y2, _))) = self.by_x.range(x..).next() {
            if y2 >= y {
                return false;
            }
        }
        let dominated: Vec<(u64, u64)> = self
            .by_x
            .range(..=x)
            .rev()
            .take_while(|(_, &(y2, _))| y2 <= y)
            .map(|(&x2, &(y2, _))| (x2, y2))
            .collect();
        for (x2, y2) in dominated {
            self.by_x.remove(&x2);
            self.by_y.remove(&y2);
        }
        self.by_x.insert(x, (y, witness));
        self.by_y.insert(y, x);
        true
    }

    fn at_x(&self, x: u64) -> DomPoint {
        let (y, witness) = self.by_x[&x];
        DomPoint { x, y, witness }
    }

    /// Point with the largest `x` among points with `y >= q`.
    pub fn max_x_with_y_at_least(&self, q: u64) -> Option<DomPoint> {
        self.by_y.range(q..).next().map(|(_, &x)| self.at_x(x))
    }

    /// Point with the largest `y` among points with `x >= p`.
    pub fn max_y_with_x_at_least(&self, p: u64) -> Option<DomPoint> {
        self.by_x.range(p..).next().map(|(&x, _)| self.at_x(x))
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct RleStats {
    pub n: u64,
    pub m: u64,
    pub z: u64,
    pub dawg_states: u64,
    pub dawg_edges: u64,
    pub dom_points: u64,
}

#[derive(Clone, Copy, Debug)]
struct Cursor {
    state: StateId,
    depth: u64,
}

/// A factor that begins with `a^p` and has matched whole runs after it.
#[derive(Clone, Copy, Debug)]
struct Open {
    p: u64,
    a: u8,
    cur: Cursor,
    wchars: u64,
    // Next run to match.
    t: usize,
    best: u64,
    src: u64,
}

#[derive(Default)]
pub struct RleFactorizer {
    runs: Vec<RLFactor>,
    // run_end[i]: 1-based position of the last character of run i; run_end[0] = 0.
    run_end: Vec<u64>,
    // Run being collected by `push_chars`.
    pending: Option<RLFactor>,
    dawg: Dawg<u64>,
    dom: HashMap<(StateId, u8, u8), DomSet>,
    dom_points: u64,
    events: Vec<DawgEvent<u64>>,
    l: u64,
    // Run containing position l + 1.
    k: usize,
    z: u64,
    open: Option<Open>,
    finished: bool,
}

impl RleFactorizer {
    pub fn new() -> Self {
        RleFactorizer {
            run_end: vec![0],
            k: 1,
            ..Default::default()
        }
    }

    pub fn stats(&self) -> RleStats {
        RleStats {
            n: *self.run_end.last().unwrap() + self.pending.map_or(0, |r| r.exp),
            m: (self.runs.len() + self.pending.is_some() as usize) as u64,
            z: self.z,
            dawg_states: self.dawg.state_count() as u64,
            dawg_edges: self.dawg.edge_count() as u64,
            dom_points: self.dom.values().map(|d| d.len() as u64).sum(),
        }
    }

    /// Points ever stored in a dominant set (before later removals).
    pub fn dom_inserts(&self) -> u64 {
        self.dom_points
    }

    fn n(&self) -> u64 {
        *self.run_end.last().unwrap()
    }

    fn last_char(&self) -> Option<u8> {
        self.pending.or(self.runs.last().copied()).map(|r| r.ch)
    }

    /// Appends one complete run.
    pub fn push_run(&mut self, run: RLFactor) -> Result<Vec<Factor>, RleError> {
        if self.finished {
            return Err(RleError::Finished);
        }
        let index = self.runs.len() + self.pending.is_some() as usize + 1;
        if run.exp == 0 {
            return Err(RleError::ZeroExponent { index });
        }
        if self.last_char() == Some(run.ch) {
            return Err(RleError::AdjacentEqualRuns { index });
        }
        let mut out = Vec::new();
        if let Some(p) = self.pending.take() {
            self.commit_run(p, &mut out);
        }
        self.commit_run(run, &mut out);
        Ok(out)
    }

    /// Appends raw characters, merging them into runs.
    pub fn push_chars(&mut self, bytes: &[u8]) -> Result<Vec<Factor>, RleError> {
        if self.finished {
            return Err(RleError::Finished);
        }
        let mut out = Vec::new();
        for &c in bytes {
            match &mut self.pending {
                Some(p) if p.ch == c => p.exp += 1,
                _ => {
                    if let Some(p) = self.pending.take() {
                        self.commit_run(p, &mut out);
                    }
                    self.pending = Some(RLFactor { ch: c, exp: 1 });
                }
            }
        }
        Ok(out)
    }

    pub fn finish(&mut self) -> Result<Vec<Factor>, RleError> {
        let mut out = Vec::new();
        if self.finished {
            return Ok(out);
        }
        if let Some(p) = self.pending.take() {
            self.commit_run(p, &mut out);
        }
        self.finished = true;
        self.run(&mut out);
        debug_assert_eq!(self.l, self.n());
        Ok(out)
    }

    fn commit_run(&mut self, run: RLFactor, out: &mut Vec<Factor>) {
        assert!(run.exp <= MAX_EXP, "run exponent exceeds {MAX_EXP}");
        self.runs.push(run);
        let end = self.n() + run.exp;
        self.run_end.push(end);
        self.run(out);
    }

    #[inline]
    fn run_at(&self, i: usize) -> RLFactor {
        self.runs[i - 1]
    }

    /// Grows the DAWG to exactly `upto` runs.
    fn ensure_dawg(&mut self, upto: usize, mut cursor: Option<&mut Cursor>) {
        while self.dawg.symbol_count() < upto {
            let r = self.run_at(self.dawg.symbol_count() + 1);
            let mut events = std::mem::take(&mut self.events);
            events.clear();
            self.dawg.extend_into(sym(r.ch, r.exp), &mut events);
            for ev in &events {
                self.apply_event(ev, cursor.as_deref_mut());
            }
            self.events = events;
        }
    }

    fn add_point(&mut self, u: StateId, preceding: u64, edge: u64, witness: usize) {
        let set = self
            .dom
            .entry((u, sym_ch(preceding), sym_ch(edge)))
            .or_default();
        if set.insert(sym_exp(preceding), sym_exp(edge), witness) {
            self.dom_points += 1;
        }
    }

    fn apply_event(&mut self, ev: &DawgEvent<u64>, cursor: Option<&mut Cursor>) {
        match *ev {
            DawgEvent::NewSink { .. } => {}
            DawgEvent::SecondaryEdgeAdded {
                from,
                symbol,
                preceding,
                end,
                ..
            }
            | DawgEvent::SplitCopiedEdge {
                from,
                symbol,
                preceding,
                end,
                ..
            } => self.add_point(from, preceding, symbol, end),
            DawgEvent::SuffixLinkSet {
                target,
                label,
                target_parent: Some(v),
                end,
                ..
            } => {
                let edge = self.dawg.symbol_at(self.dawg.pos(target));
                self.add_point(v, label, edge, end);
            }
            DawgEvent::SuffixLinkSet { .. } => {}
            DawgEvent::StateSplit { old, new } => {
                if let Some(c) = cursor {
                    if c.state == old && c.depth <= self.dawg.len(new) as u64 {
                        c.state = new;
                    }
                }
            }
        }
    }

    fn run(&mut self, out: &mut Vec<Factor>) {
        loop {
            let f = match self.open.take() {
                Some(o) => match self.extend(o) {
                    Some(f) => f,
                    None => return,
                },
                None => {
                    if self.l >= self.n() {
                        return;
                    }
                    match self.begin() {
                        Ok(f) => f,
                        Err(o) => match self.extend(o) {
                            Some(f) => f,
                            None => return,
                        },
                    }
                }
            };
            self.l += f.len();
            self.z += 1;
            while self.k < self.runs.len() && self.run_end[self.k] <= self.l {
                self.k += 1;
            }
            if self.run_end[self.k] <= self.l {
                self.k += 1;
            }
            out.push(f);
        }
    }

    /// Starts the factor at `l + 1`: either decides it directly or returns
    /// the open state for the run-by-run search.
    fn begin(&mut self) -> Result<Factor, Open> {
        let k = self.k;
        let RLFactor { ch: a, exp: d } = self.run_at(k);
        let start = self.l + 1;
        let j = start - self.run_end[k - 1];
        let source = self.dawg.source();
        if j >= 2 {
            let p = d - j + 1;
            return Err(Open {
                p,
                a,
                cur: Cursor { state: source, depth: 0 },
                wchars: 0,
                t: k + 1,
                best: p,
                src: self.l,
            });
        }
        self.ensure_dawg(k - 1, None);
        let edge = self
            .dawg
            .edges_in(source, sym(a, 1)..=sym(a, MAX_EXP))
            .next_back();
        match edge {
            None => Ok(Factor::literal(start, a)),
            Some((s, v)) => {
                let g = sym_exp(s);
                let e = self.dawg.pos(v);
                if g < d {
                    Ok(Factor::copy(start, self.run_end[e - 1] + 1, g))
                } else {
                    Err(Open {
                        p: d,
                        a,
                        cur: Cursor { state: source, depth: 0 },
                        wchars: 0,
                        t: k + 1,
                        best: d,
                        src: self.run_end[e] - d + 1,
                    })
                }
            }
        }
    }

    /// Source position for an occurrence whose `a`-run has index `pred`.
    #[inline]
    fn src_from(&self, pred: usize, p: u64) -> u64 {
        self.run_end[pred] - p + 1
    }

    /// Continues the search; `None` means the next run has not arrived.
    fn extend(&mut self, mut o: Open) -> Option<Factor> {
        loop {
            if o.t > self.runs.len() {
                if self.finished {
                    break;
                }
                self.open = Some(o);
                return None;
            }
            self.ensure_dawg(o.t - 1, Some(&mut o.cur));
            let RLFactor { ch: b, exp: q } = self.run_at(o.t);
            let u = o.cur.state;
            let depth = o.cur.depth;
            let longest = depth == self.dawg.len(u) as u64;
            let exact = self.dawg.transition(u, sym(b, q));
            if longest {
                let set = self.dom.get(&(u, o.a, b));
                let q1 = set.and_then(|s| s.max_x_with_y_at_least(q));
                match q1 {
                    Some(pt) if pt.x >= o.p => {
                        o.best = o.p + o.wchars + q;
                        o.src = self.src_from(pt.witness - depth as usize - 1, o.p);
                        let Some(v) = exact else { break };
                        if depth + 1 < self.dawg.len(v) as u64 {
                            // All occurrences of the extended string share one preceding run.
                            let pred = self.dawg.pos(v) - depth as usize - 1;
                            let r = self.run_at(pred);
                            if r.ch != o.a || r.exp < o.p {
                                break;
                            }
                        }
                        o.cur = Cursor { state: v, depth: depth + 1 };
                    }
                    _ => {
                        if let Some(pt) = set.and_then(|s| s.max_y_with_x_at_least(o.p)) {
                            debug_assert!(pt.y < q);
                            o.best = o.p + o.wchars + pt.y;
                            o.src = self.src_from(pt.witness - depth as usize - 1, o.p);
                        }
                        break;
                    }
                }
            } else {
                match exact {
                    Some(v) => {
                        o.best = o.p + o.wchars + q;
                        o.src = self.src_from(self.dawg.pos(v) - depth as usize - 1, o.p);
                        o.cur = Cursor { state: v, depth: depth + 1 };
                    }
                    None => {
                        let widest = self
                            .dawg
                            .edges_in(u, sym(b, 1)..=sym(b, MAX_EXP))
                            .next_back();
                        if let Some((s, v)) = widest {
                            o.best = o.p + o.wchars + sym_exp(s).min(q);
                            o.src = self.src_from(self.dawg.pos(v) - depth as usize - 1, o.p);
                        }
                        break;
                    }
                }
            }
            o.wchars += q;
            o.t += 1;
        }
        Some(Factor::copy(self.l + 1, o.src, o.best))
    }
}

/// Factorizes a whole byte string through its run-length encoding.
pub fn factorize(bytes: &[u8]) -> Vec<Factor> {
    let mut f = RleFactorizer::new();
    let mut out = f.push_chars(bytes).expect("fresh factorizer");
    out.extend(f.finish().expect("fresh factorizer"));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::{check_against_oracle, rle_encode};
    use rand::{rngs::StdRng, Rng, SeedableRng};

    #[test]
    fn dom_examples() {
        let mut d = DomSet::new();
        d.insert(5, 5, 0);
        assert!(!d.insert(3, 3, 0));
        assert_eq!(d.points().map(|p| (p.x, p.y)).collect::<Vec<_>>(), vec![(5, 5)]);

        let mut d = DomSet::new();
        d.insert(3, 5, 0);
        d.insert(5, 3, 0);
        assert_eq!(d.len(), 2);

        let mut d = DomSet::new();
        d.insert(3, 3, 0);
        d.insert(5, 5, 0);
        assert_eq!(d.points().map(|p| (p.x, p.y)).collect::<Vec<_>>(), vec![(5, 5)]);

        let mut d = DomSet::new();
        d.insert(5, 2, 0);
        d.insert(3, 4, 0);
        assert_eq!(d.max_x_with_y_at_least(3).map(|p| (p.x, p.y)), Some((3, 4)));
        assert_eq!(d.max_x_with_y_at_least(5), None);
        assert_eq!(d.max_y_with_x_at_least(4).map(|p| (p.x, p.y)), Some((5, 2)));
    }

    #[test]
    fn dom_against_full_history() {
        let mut rng = StdRng::seed_from_u64(31);
        for _ in 0..200 {
            let mut d = DomSet::new();
            let mut all: Vec<(u64, u64)> = Vec::new();
            for _ in 0..500 {
                if rng.gen_bool(0.4) {
                    let p = (rng.gen_range(1..40), rng.gen_range(1..40));
                    d.insert(p.0, p.1, 0);
                    all.push(p);
                } else {
                    let q = rng.gen_range(0..45);
                    let want = all.iter().filter(|p| p.1 >= q).map(|p| p.0).max();
                    assert_eq!(d.max_x_with_y_at_least(q).map(|p| p.x), want);
                    let want = all.iter().filter(|p| p.0 >= q).map(|p| p.1).max();
                    assert_eq!(d.max_y_with_x_at_least(q).map(|p| p.y), want);
                }
            }
        }
    }

    #[test]
    fn figure_one() {
        let s = b"abaabababaaaaabbabab";
        assert_eq!(rle_encode(s).len(), 14);
        let f = factorize(s);
        let lens: Vec<u64> = f.iter().map(|f| f.len()).collect();
        assert_eq!(lens, vec![1, 1, 1, 3, 4, 4, 1, 5]);
        check_against_oracle(s, &f).unwrap();
    }

    #[test]
    fn single_run() {
        assert_eq!(
            factorize(b"aaaaa"),
            vec![Factor::literal(1, b'a'), Factor::copy(2, 1, 4)]
        );
        assert!(factorize(b"").is_empty());
    }

    #[test]
    fn protocol_errors() {
        let mut f = RleFactorizer::new();
        f.push_run(RLFactor { ch: b'a', exp: 2 }).unwrap();
        assert_eq!(
            f.push_run(RLFactor { ch: b'a', exp: 1 }),
            Err(RleError::AdjacentEqualRuns { index: 2 })
        );
        assert_eq!(
            f.push_run(RLFactor { ch: b'b', exp: 0 }),
            Err(RleError::ZeroExponent { index: 2 })
        );
        f.finish().unwrap();
        assert!(f.finish().unwrap().is_empty());
        assert_eq!(f.push_chars(b"x"), Err(RleError::Finished));
    }

    #[test]
    fn random_against_oracle() {
        let mut rng = StdRng::seed_from_u64(77);
        for it in 0..3000 {
            let sigma = [2u8, 3, 4][it % 3];
            let n = rng.gen_range(0..250);
            let s: Vec<u8> = if it % 2 == 0 {
                (0..n).map(|_| b'a' + rng.gen_range(0..sigma)).collect()
            } else {
                let mut s = Vec::new();
                while s.len() < n {
                    let c = b'a' + rng.gen_range(0..sigma);
                    let e = rng.gen_range(1..6);
                    s.extend(std::iter::repeat_n(c, e));
                }
                s
            };
            let f = factorize(&s);
            if let Err(e) = check_against_oracle(&s, &f) {
                panic!("{:?}: {e}\n{f:?}", String::from_utf8_lossy(&s));
            }
        }
    }

    #[test]
    fn runs_and_chars_agree() {
        let mut rng = StdRng::seed_from_u64(2);
        for _ in 0..200 {
            let n = rng.gen_range(0..300);
            let s: Vec<u8> = (0..n).map(|_| rng.gen_range(0..2u8)).collect();
            let mut f = RleFactorizer::new();
            let mut got = Vec::new();
            for r in rle_encode(&s) {
                got.extend(f.push_run(r).unwrap());
            }
            got.extend(f.finish().unwrap());
            assert_eq!(got, factorize(&s));
        }
    }
}
