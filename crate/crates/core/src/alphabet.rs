//! Packing of character codes into meta-characters.
//!
//! A meta-character is `r` consecutive character codes of `bits` bits each,
//! concatenated big-endian into one `u64`. Because the first character lands
//! in the most significant bits, integer order on packed values equals
//! lexicographic order on the underlying strings, which is what makes the
//! prefix and suffix constraints below contiguous integer intervals.

use crate::error::AlphabetError;

/// Packed value of `r` characters.
pub type MetaChar = u64;

/// Closed integer interval `[lo, hi]` over meta-character values.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct BitInterval {
    pub lo: MetaChar,
    pub hi: MetaChar,
}

impl BitInterval {
    pub fn new(lo: MetaChar, hi: MetaChar) -> Self {
        debug_assert!(lo <= hi);
        BitInterval { lo, hi }
    }

    pub fn point(v: MetaChar) -> Self {
        BitInterval { lo: v, hi: v }
    }

    #[inline]
    pub fn contains(&self, v: MetaChar) -> bool {
        self.lo <= v && v <= self.hi
    }
}

/// Alphabet and block-size configuration.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct AlphabetCfg {
    sigma: u32,
    bits: u32,
    r: u32,
}

/// Bits needed for a dense code space of size `sigma` (at least 1).
pub fn bits_for_sigma(sigma: u32) -> u32 {
    let sigma = sigma.max(2);
    32 - (sigma - 1).leading_zeros()
}

#[inline]
pub(crate) fn low_mask(nbits: u32) -> u64 {
    if nbits >= 64 {
        u64::MAX
    } else {
        (1u64 << nbits) - 1
    }
}

impl AlphabetCfg {
    pub fn new(sigma: u32, r: u32) -> Result<Self, AlphabetError> {
        if sigma < 2 {
            return Err(AlphabetError::SigmaTooSmall(sigma));
        }
        let bits = bits_for_sigma(sigma);
        if r == 0 || r * bits > 64 {
            return Err(AlphabetError::BlockTooWide { r, bits });
        }
        Ok(AlphabetCfg { sigma, bits, r })
    }

    pub fn sigma(&self) -> u32 {
        self.sigma
    }

    pub fn bits_per_char(&self) -> u32 {
        self.bits
    }

    /// Characters per meta-character.
    pub fn r(&self) -> u32 {
        self.r
    }

    /// Total bits of one meta-character.
    pub fn meta_bits(&self) -> u32 {
        self.r * self.bits
    }

    /// Size of the meta-character code space, `2^(r * bits)`.
    pub fn capacity(&self) -> u128 {
        1u128 << self.meta_bits()
    }

    /// Largest meta-character value.
    pub fn max_value(&self) -> MetaChar {
        low_mask(self.meta_bits())
    }

    fn check_codes(&self, chars: &[u8]) -> Result<(), AlphabetError> {
        match chars.iter().find(|&&c| c as u32 >= self.sigma) {
            Some(&c) => Err(AlphabetError::InvalidCharacter {
                code: c as u32,
                sigma: self.sigma,
            }),
            None => Ok(()),
        }
    }

    /// Concatenates codes without validation; callers guarantee `chars.len() <= r`.
    #[inline]
    pub(crate) fn concat(&self, chars: &[u8]) -> u64 {
        chars
            .iter()
            .fold(0u64, |acc, &c| (acc << self.bits) | c as u64)
    }

    /// Packs exactly `r` character codes.
    pub fn pack(&self, chars: &[u8]) -> Result<MetaChar, AlphabetError> {
        if chars.len() != self.r as usize {
            return Err(AlphabetError::Length {
                got: chars.len(),
                expected: self.r as usize,
            });
        }
        self.check_codes(chars)?;
        Ok(self.concat(chars))
    }

    pub fn unpack(&self, a: MetaChar) -> Vec<u8> {
        (0..self.r).map(|i| self.char_at(a, i)).collect()
    }

    /// The `i`-th (0-based) character of a meta-character.
    #[inline]
    pub fn char_at(&self, a: MetaChar, i: u32) -> u8 {
        let shift = (self.r - 1 - i) * self.bits;
        ((a >> shift) & low_mask(self.bits)) as u8
    }

    /// Meta-character spelling the characters of `a` in reverse order.
    pub fn reverse_meta(&self, a: MetaChar) -> MetaChar {
        let mask = low_mask(self.bits);
        let mut src = a;
        let mut out = 0u64;
        for _ in 0..self.r {
            out = (out << self.bits) | (src & mask);
            src >>= self.bits;
        }
        out
    }

    #[inline]
    pub(crate) fn prefix_interval_unchecked(&self, t: &[u8]) -> BitInterval {
        let free = (self.r - t.len() as u32) * self.bits;
        let head = if t.is_empty() {
            0
        } else {
            self.concat(t) << free
        };
        BitInterval {
            lo: head,
            hi: head | low_mask(free),
        }
    }

    /// Interval of meta-characters having `t` as a character prefix.
    pub fn prefix_interval(&self, t: &[u8]) -> Result<BitInterval, AlphabetError> {
        if t.len() > self.r as usize {
            return Err(AlphabetError::Length {
                got: t.len(),
                expected: self.r as usize,
            });
        }
        self.check_codes(t)?;
        Ok(self.prefix_interval_unchecked(t))
    }

    #[inline]
    pub(crate) fn suffix_interval_unchecked(&self, t: &[u8]) -> BitInterval {
        let mut head = 0u64;
        for &c in t.iter().rev() {
            head = (head << self.bits) | c as u64;
        }
        let free = (self.r - t.len() as u32) * self.bits;
        let head = if t.is_empty() { 0 } else { head << free };
        BitInterval {
            lo: head,
            hi: head | low_mask(free),
        }
    }

    /// Interval containing `reverse_meta(m)` for exactly those `m` that have
    /// `t` as a character suffix. Requires `|t| < r`.
    pub fn suffix_interval(&self, t: &[u8]) -> Result<BitInterval, AlphabetError> {
        if t.len() >= self.r as usize {
            return Err(AlphabetError::Length {
                got: t.len(),
                expected: self.r as usize - 1,
            });
        }
        self.check_codes(t)?;
        Ok(self.suffix_interval_unchecked(t))
    }

    /// Number of leading characters two meta-characters share.
    #[inline]
    pub fn lcp(&self, a: MetaChar, b: MetaChar) -> u32 {
        let diff = a ^ b;
        if diff == 0 {
            return self.r;
        }
        let top = 64 - self.meta_bits();
        (diff.leading_zeros() - top) / self.bits
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn pack_examples() {
        let c = AlphabetCfg::new(4, 3).unwrap();
        assert_eq!(c.pack(&[2, 0, 0]).unwrap(), 32);
        let c = AlphabetCfg::new(2, 1).unwrap();
        assert_eq!(c.pack(&[1]).unwrap(), 1);
        let c = AlphabetCfg::new(256, 2).unwrap();
        assert_eq!(c.pack(&[0x41, 0x42]).unwrap(), 0x4142);
    }

    #[test]
    fn pack_errors() {
        let c = AlphabetCfg::new(4, 3).unwrap();
        assert!(matches!(
            c.pack(&[4, 0, 0]),
            Err(AlphabetError::InvalidCharacter { code: 4, .. })
        ));
        assert!(matches!(c.pack(&[1, 0]), Err(AlphabetError::Length { .. })));
        assert!(AlphabetCfg::new(1, 3).is_err());
        assert!(AlphabetCfg::new(256, 9).is_err());
        assert!(AlphabetCfg::new(256, 8).is_ok());
    }

    #[test]
    fn reverse_examples() {
        let c = AlphabetCfg::new(4, 3).unwrap();
        let abc = c.pack(&[0, 1, 2]).unwrap();
        let cba = c.pack(&[2, 1, 0]).unwrap();
        assert_eq!(c.reverse_meta(abc), cba);
        let aaa = c.pack(&[0, 0, 0]).unwrap();
        assert_eq!(c.reverse_meta(aaa), aaa);
        assert_eq!(c.reverse_meta(0b100100), 0b000110);
    }

    #[test]
    fn prefix_interval_examples() {
        let c = AlphabetCfg::new(4, 3).unwrap();
        assert_eq!(c.prefix_interval(&[2, 0]).unwrap(), BitInterval::new(32, 35));
        assert_eq!(c.prefix_interval(&[]).unwrap(), BitInterval::new(0, 63));
        let full = c.pack(&[1, 2, 3]).unwrap();
        assert_eq!(c.prefix_interval(&[1, 2, 3]).unwrap(), BitInterval::point(full));
        assert!(c.prefix_interval(&[1, 2, 3, 0]).is_err());
    }

    #[test]
    fn suffix_interval_examples() {
        let c = AlphabetCfg::new(4, 3).unwrap();
        assert_eq!(c.suffix_interval(&[2, 1]).unwrap(), BitInterval::new(24, 27));
        assert_eq!(c.suffix_interval(&[]).unwrap(), BitInterval::new(0, 63));
        assert!(c.suffix_interval(&[0, 0, 0]).is_err());
        let c = AlphabetCfg::new(2, 2).unwrap();
        assert_eq!(c.suffix_interval(&[1]).unwrap(), BitInterval::new(2, 3));
    }

    #[test]
    fn full_word_width() {
        let c = AlphabetCfg::new(256, 8).unwrap();
        assert_eq!(c.max_value(), u64::MAX);
        assert_eq!(c.prefix_interval(&[]).unwrap(), BitInterval::new(0, u64::MAX));
        let v = c.pack(&[1, 2, 3, 4, 5, 6, 7, 8]).unwrap();
        assert_eq!(c.unpack(c.reverse_meta(v)), vec![8, 7, 6, 5, 4, 3, 2, 1]);
    }

    #[test]
    fn lcp_examples() {
        let c = AlphabetCfg::new(4, 3).unwrap();
        let a = c.pack(&[1, 2, 3]).unwrap();
        let b = c.pack(&[1, 2, 0]).unwrap();
        assert_eq!(c.lcp(a, b), 2);
        assert_eq!(c.lcp(a, a), 3);
    }

    fn cfg_and_strings() -> impl Strategy<Value = (AlphabetCfg, Vec<u8>, Vec<u8>)> {
        (2u32..=16, 1u32..=6).prop_flat_map(|(sigma, r)| {
            let cfg = AlphabetCfg::new(sigma, r).unwrap();
            let s = prop::collection::vec(0..sigma as u8, r as usize);
            (Just(cfg), s.clone(), s)
        })
    }

    proptest! {
        #[test]
        fn order_embedding((cfg, x, y) in cfg_and_strings()) {
            prop_assert_eq!(x <= y, cfg.pack(&x).unwrap() <= cfg.pack(&y).unwrap());
        }

        #[test]
        fn reverse_is_involution((cfg, x, _y) in cfg_and_strings()) {
            let m = cfg.pack(&x).unwrap();
            prop_assert_eq!(cfg.reverse_meta(cfg.reverse_meta(m)), m);
            let mut rx = x.clone();
            rx.reverse();
            prop_assert_eq!(cfg.unpack(cfg.reverse_meta(m)), rx);
        }

        #[test]
        fn membership_matches_interval((cfg, x, y) in cfg_and_strings(), cut in 0usize..8) {
            let m = cfg.pack(&x).unwrap();
            let k = cut.min(cfg.r() as usize);
            let t = &y[..k];
            let pre = cfg.prefix_interval(t).unwrap();
            prop_assert_eq!(x.starts_with(t), pre.contains(m));
            if k < cfg.r() as usize {
                let t = &y[y.len() - k..];
                let suf = cfg.suffix_interval(t).unwrap();
                prop_assert_eq!(x.ends_with(t), suf.contains(cfg.reverse_meta(m)));
            }
        }
    }
}
