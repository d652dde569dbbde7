//! Set-only dynamic bit array with rank, select and range popcount.
//!
//! Bits live in lazily allocated pages of `PAGE_BITS` bits, so an array sized
//! to the whole meta-character space only commits memory for pages that hold
//! a set bit. A Fenwick tree over per-page popcounts gives logarithmic rank
//! and select; within a page the work is at most `PAGE_WORDS` popcounts.
//! Positions are 1-based.

use crate::error::BitvecError;

const PAGE_WORDS: usize = 64;
const PAGE_BITS: u64 = (PAGE_WORDS * 64) as u64;

#[derive(Clone, Debug)]
pub struct DynBitArray {
    len: u64,
    ones: u64,
    pages: Vec<Option<Box<[u64; PAGE_WORDS]>>>,
    // Fenwick tree over page popcounts, 1-based.
    tree: Vec<u32>,
}

impl DynBitArray {
    pub fn new(len: u64) -> Self {
        let npages = len.div_ceil(PAGE_BITS) as usize;
        DynBitArray {
            len,
            ones: 0,
            pages: vec![None; npages],
            tree: vec![0; npages + 1],
        }
    }

    pub fn len(&self) -> u64 {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn ones(&self) -> u64 {
        self.ones
    }

    /// Approximate heap footprint in bytes.
    pub fn heap_bytes(&self) -> usize {
        let live = self.pages.iter().filter(|p| p.is_some()).count();
        live * PAGE_WORDS * 8 + self.pages.len() * 8 + self.tree.len() * 4
    }

    #[inline]
    fn locate(i: u64) -> (usize, usize, u32) {
        let z = i - 1;
        let page = (z / PAGE_BITS) as usize;
        let within = z % PAGE_BITS;
        (page, (within / 64) as usize, (within % 64) as u32)
    }

    fn check(&self, i: u64) -> Result<(), BitvecError> {
        if i == 0 || i > self.len {
            Err(BitvecError::OutOfRange {
                pos: i,
                len: self.len,
            })
        } else {
            Ok(())
        }
    }

    pub fn get(&self, i: u64) -> Result<bool, BitvecError> {
        self.check(i)?;
        Ok(self.get_unchecked(i))
    }

    #[inline]
    pub(crate) fn get_unchecked(&self, i: u64) -> bool {
        let (p, w, b) = Self::locate(i);
        match &self.pages[p] {
            Some(page) => page[w] >> b & 1 == 1,
            None => false,
        }
    }

    /// Sets bit `i`; returns whether it was previously clear.
    pub fn set(&mut self, i: u64) -> Result<bool, BitvecError> {
        self.check(i)?;
        Ok(self.set_unchecked(i))
    }

    pub(crate) fn set_unchecked(&mut self, i: u64) -> bool {
        let (p, w, b) = Self::locate(i);
        let page = self.pages[p].get_or_insert_with(|| Box::new([0u64; PAGE_WORDS]));
        if page[w] >> b & 1 == 1 {
            return false;
        }
        page[w] |= 1 << b;
        self.ones += 1;
        let mut k = p + 1;
        while k < self.tree.len() {
            self.tree[k] += 1;
            k += k & k.wrapping_neg();
        }
        true
    }

    fn pages_prefix(&self, npages: usize) -> u64 {
        let mut k = npages;
        let mut s = 0u64;
        while k > 0 {
            s += self.tree[k] as u64;
            k &= k - 1;
        }
        s
    }

    /// Number of set bits in `[1, i]`; `rank(0) = 0`.
    pub fn rank(&self, i: u64) -> Result<u64, BitvecError> {
        if i > self.len {
            return Err(BitvecError::OutOfRange {
                pos: i,
                len: self.len,
            });
        }
        Ok(self.rank_unchecked(i))
    }

    pub(crate) fn rank_unchecked(&self, i: u64) -> u64 {
        if i == 0 {
            return 0;
        }
        let (p, w, b) = Self::locate(i);
        let mut s = self.pages_prefix(p);
        if let Some(page) = &self.pages[p] {
            s += page[..w].iter().map(|x| x.count_ones() as u64).sum::<u64>();
            let mask = if b == 63 { u64::MAX } else { (1u64 << (b + 1)) - 1 };
            s += (page[w] & mask).count_ones() as u64;
        }
        s
    }

    /// Position of the `j`-th set bit (1-based).
    pub fn select(&self, j: u64) -> Result<u64, BitvecError> {
        if j == 0 || j > self.ones {
            return Err(BitvecError::NoSuchBit(j));
        }
        // Fenwick descent to the page holding the j-th one.
        let n = self.tree.len() - 1;
        let mut pos = 0usize;
        let mut rem = j;
        let mut step = if n == 0 { 0 } else { 1usize << (usize::BITS - 1 - n.leading_zeros()) };
        while step > 0 {
            let next = pos + step;
            if next <= n && (self.tree[next] as u64) < rem {
                pos = next;
                rem -= self.tree[next] as u64;
            }
            step >>= 1;
        }
        let page = self.pages[pos]
            .as_ref()
            .expect("page with a positive count is allocated");
        for (w, &word) in page.iter().enumerate() {
            let c = word.count_ones() as u64;
            if rem <= c {
                let mut x = word;
                for _ in 1..rem {
                    x &= x - 1;
                }
                let bit = x.trailing_zeros() as u64;
                return Ok(pos as u64 * PAGE_BITS + w as u64 * 64 + bit + 1);
            }
            rem -= c;
        }
        unreachable!("fenwick counts disagree with page contents")
    }

    /// Popcount of `[x, y]`.
    pub fn pc(&self, x: u64, y: u64) -> Result<u64, BitvecError> {
        if x == 0 || x > y || y > self.len {
            return Err(BitvecError::BadInterval { x, y, len: self.len });
        }
        Ok(self.pc_unchecked(x, y))
    }

    #[inline]
    pub(crate) fn pc_unchecked(&self, x: u64, y: u64) -> u64 {
        self.rank_unchecked(y) - self.rank_unchecked(x - 1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{rngs::StdRng, Rng, SeedableRng};

    fn with_bits(len: u64, bits: &[u64]) -> DynBitArray {
        let mut b = DynBitArray::new(len);
        for &i in bits {
            b.set(i).unwrap();
        }
        b
    }

    #[test]
    fn set_examples() {
        let mut b = DynBitArray::new(10);
        b.set(3).unwrap();
        assert_eq!(b.rank(3).unwrap(), 1);
        assert!(!b.set(3).unwrap());
        assert_eq!(b.ones(), 1);
        let b = with_bits(10, &[1, 10]);
        assert_eq!(b.pc(1, 10).unwrap(), 2);
        assert!(DynBitArray::new(10).clone().set(11).is_err());
        assert!(DynBitArray::new(10).set(0).is_err());
    }

    #[test]
    fn rank_select_pc_examples() {
        let e = DynBitArray::new(100);
        assert_eq!(e.rank(0).unwrap(), 0);
        assert_eq!(e.rank(57).unwrap(), 0);
        assert_eq!(e.select(1), Err(BitvecError::NoSuchBit(1)));
        let b = with_bits(10, &[2, 5, 7]);
        assert_eq!(b.rank(5).unwrap(), 2);
        assert_eq!(b.rank(7).unwrap(), 3);
        assert_eq!(b.select(2).unwrap(), 5);
        assert_eq!(b.select(3).unwrap(), 7);
        assert!(b.select(0).is_err());
        assert!(b.select(4).is_err());
        assert_eq!(b.pc(3, 6).unwrap(), 1);
        assert_eq!(b.pc(1, 7).unwrap(), 3);
        assert_eq!(b.pc(5, 5).unwrap(), 1);
        assert_eq!(b.pc(6, 6).unwrap(), 0);
        assert!(b.pc(6, 5).is_err());
        assert!(b.pc(1, 11).is_err());
        assert!(b.rank(11).is_err());
    }

    #[test]
    fn differential_against_sorted_positions() {
        let mut rng = StdRng::seed_from_u64(7);
        for &len in &[1u64, 63, 64, 65, 4096, 4097, 50_000] {
            let mut b = DynBitArray::new(len);
            // Oracle: plain flags plus the sorted list of set positions.
            let mut flags = vec![false; len as usize + 1];
            let mut sorted: Vec<u64> = Vec::new();
            let ops = if len > 1000 { 100_000 } else { 5_000 };
            for _ in 0..ops {
                match rng.gen_range(0..4) {
                    0 => {
                        let i = rng.gen_range(1..=len);
                        assert_eq!(b.set(i).unwrap(), !flags[i as usize]);
                        if !flags[i as usize] {
                            flags[i as usize] = true;
                            let at = sorted.partition_point(|&p| p < i);
                            sorted.insert(at, i);
                        }
                    }
                    1 => {
                        let i = rng.gen_range(0..=len);
                        let want = sorted.partition_point(|&p| p <= i) as u64;
                        assert_eq!(b.rank(i).unwrap(), want);
                    }
                    2 => {
                        assert_eq!(b.ones(), sorted.len() as u64);
                        if !sorted.is_empty() {
                            let j = rng.gen_range(1..=sorted.len());
                            assert_eq!(b.select(j as u64).unwrap(), sorted[j - 1]);
                        }
                    }
                    _ => {
                        let x = rng.gen_range(1..=len);
                        let y = rng.gen_range(x..=len);
                        let want = if y - x < 200 {
                            flags[x as usize..=y as usize].iter().filter(|&&v| v).count() as u64
                        } else {
                            (sorted.partition_point(|&p| p <= y) - sorted.partition_point(|&p| p < x)) as u64
                        };
                        assert_eq!(b.pc(x, y).unwrap(), want);
                        assert_eq!(b.get(x).unwrap(), flags[x as usize]);
                    }
                }
            }
        }
    }

    #[test]
    fn large_sparse_array_is_lazy() {
        let mut b = DynBitArray::new(1 << 32);
        b.set(1 << 31).unwrap();
        b.set((1 << 32) - 1).unwrap();
        assert_eq!(b.select(2).unwrap(), (1 << 32) - 1);
        assert_eq!(b.rank(1 << 31).unwrap(), 1);
        assert!(b.heap_bytes() < 64 << 20);
    }
}
