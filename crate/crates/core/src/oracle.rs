//! Reference implementations used as ground truth by the test suites.

use std::collections::BTreeSet;

use crate::factor::{Factor, FactorKind};

/// One run `ch^exp` of a run-length encoding.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct RLFactor {
    pub ch: u8,
    pub exp: u64,
}

/// Quadratic s-factorization straight from the definition. Among equally
/// long previous occurrences the leftmost is reported.
pub fn naive_factorize(s: &[u8]) -> Vec<Factor> {
    let n = s.len();
    let mut out = Vec::new();
    let mut l = 0usize; // characters already factorized
    while l < n {
        let mut best_len = 0usize;
        let mut best_src = 0usize;
        for src in 0..l {
            let mut t = 0;
            while l + t < n && s[src + t] == s[l + t] {
                t += 1;
            }
            if t > best_len {
                best_len = t;
                best_src = src;
                if l + t == n {
                    break;
                }
            }
        }
        if best_len == 0 {
            out.push(Factor::literal(l as u64 + 1, s[l]));
            l += 1;
        } else {
            out.push(Factor::copy(l as u64 + 1, best_src as u64 + 1, best_len as u64));
            l += best_len;
        }
    }
    out
}

pub fn rle_encode(s: &[u8]) -> Vec<RLFactor> {
    let mut out: Vec<RLFactor> = Vec::new();
    for &c in s {
        match out.last_mut() {
            Some(run) if run.ch == c => run.exp += 1,
            _ => out.push(RLFactor { ch: c, exp: 1 }),
        }
    }
    out
}

pub fn rle_decode(runs: &[RLFactor]) -> Vec<u8> {
    let mut out = Vec::new();
    for r in runs {
        out.extend(std::iter::repeat_n(r.ch, r.exp as usize));
    }
    out
}

/// 1-based end positions of all occurrences of `w` in `s`.
pub fn brute_endpos<T: PartialEq>(s: &[T], w: &[T]) -> BTreeSet<usize> {
    if w.len() > s.len() {
        return BTreeSet::new();
    }
    (w.len()..=s.len())
        .filter(|&j| s[j - w.len()..j] == *w)
        .collect()
}

/// Smallest `(l - 1) mod r` over window starts `l <= k - r + 1` where `a`
/// occurs; `None` if it does not occur in `s[..k]`.
pub fn brute_block_distance(s: &[u8], k: usize, r: usize, a: &[u8]) -> Option<usize> {
    if k < r {
        return None;
    }
    (1..=k - r + 1)
        .filter(|&l| &s[l - 1..l - 1 + r] == a)
        .map(|l| (l - 1) % r)
        .min()
}

/// Checks tiling, the copy invariant and the literal invariant.
pub fn check_valid(s: &[u8], factors: &[Factor]) -> Result<(), String> {
    let mut at = 1u64;
    for (i, f) in factors.iter().enumerate() {
        if f.start != at {
            return Err(format!("factor {i} starts at {} instead of {at}", f.start));
        }
        let l = (at - 1) as usize;
        match f.kind {
            FactorKind::Literal(b) => {
                if l >= s.len() || s[l] != b {
                    return Err(format!("factor {i}: literal {b} does not match the text"));
                }
                if s[..l].contains(&b) {
                    return Err(format!("factor {i}: literal {b} occurred earlier"));
                }
            }
            FactorKind::Copy { src, len } => {
                if len == 0 || src == 0 || src >= at {
                    return Err(format!("factor {i}: bad copy ({src}, {len}) at {at}"));
                }
                let end = l + len as usize;
                if end > s.len() {
                    return Err(format!("factor {i}: copy runs past the end"));
                }
                let from = src as usize - 1;
                if (0..len as usize).any(|t| s[from + t] != s[l + t]) {
                    return Err(format!("factor {i}: copy ({src}, {len}) content differs"));
                }
            }
        }
        at += f.len();
    }
    if at - 1 != s.len() as u64 {
        return Err(format!("factors cover {} of {} bytes", at - 1, s.len()));
    }
    Ok(())
}

/// Checks validity and that the length sequence equals the oracle's.
pub fn check_against_oracle(s: &[u8], factors: &[Factor]) -> Result<(), String> {
    check_valid(s, factors)?;
    let want = naive_factorize(s);
    if want.len() != factors.len() {
        return Err(format!("{} factors, oracle has {}", factors.len(), want.len()));
    }
    for (i, (a, b)) in factors.iter().zip(&want).enumerate() {
        if a.len() != b.len() || a.is_literal() != b.is_literal() {
            return Err(format!("factor {i}: got {a:?}, oracle {b:?}"));
        }
    }
    Ok(())
}
