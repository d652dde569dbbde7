//! Tree over the distinct length-`r` windows of the text, used to turn any
//! seen window into a block-aligned one that contains a shifted copy of it.
//!
//! A node's parent is a window that occurred immediately before one of its
//! occurrences, so the parent's characters `2..r` equal the node's `1..r-1`
//! and only the parent's first character needs storing. Walking `d` steps up
//! therefore shifts the window right by `d`.

use std::collections::HashMap;

use crate::alphabet::MetaChar;
use crate::bitvec::DynBitArray;
use crate::error::BlockTreeError;

#[derive(Clone, Debug)]
pub struct BlockTree {
    r: u32,
    bits: u32,
    // First character of the parent; `None` for nodes first seen aligned.
    parent_char: HashMap<MetaChar, Option<u8>>,
    aligned: DynBitArray,
}

impl BlockTree {
    /// `capacity` is the size of the window value space.
    pub fn new(r: u32, bits: u32, capacity: u64) -> Self {
        BlockTree {
            r,
            bits,
            parent_char: HashMap::new(),
            aligned: DynBitArray::new(capacity),
        }
    }

    pub fn node_count(&self) -> usize {
        self.parent_char.len()
    }

    pub fn heap_bytes(&self) -> usize {
        self.aligned.heap_bytes() + self.parent_char.capacity() * 24
    }

    pub fn contains(&self, a: MetaChar) -> bool {
        self.parent_char.contains_key(&a)
    }

    #[inline]
    fn is_aligned(&self, a: MetaChar) -> bool {
        self.aligned.get_unchecked(a + 1)
    }

    #[inline]
    fn parent_of(&self, a: MetaChar, c: u8) -> MetaChar {
        ((c as u64) << ((self.r - 1) * self.bits)) | (a >> self.bits)
    }

    #[inline]
    fn first_char(&self, b: MetaChar) -> u8 {
        (b >> ((self.r - 1) * self.bits)) as u8
    }

    fn up(&self, a: MetaChar) -> Option<MetaChar> {
        match self.parent_char.get(&a) {
            Some(Some(c)) => Some(self.parent_of(a, *c)),
            _ => None,
        }
    }

    /// Records the window `a` starting at 1-based text position `p`;
    /// `prev` is the window starting at `p - 1` (required when `p > 1`).
    pub fn update(&mut self, p: u64, a: MetaChar, prev: Option<MetaChar>) {
        if self.is_aligned(a) {
            return;
        }
        let shift = (p - 1) % self.r as u64;
        if shift == 0 {
            self.aligned.set_unchecked(a + 1);
            self.parent_char.entry(a).or_insert(None);
            return;
        }
        if let Some(&Some(c)) = self.parent_char.get(&a) {
            // Distance from the current parent to an aligned ancestor.
            let mut x_c = 0u64;
            let mut cur = self.parent_of(a, c);
            while !self.is_aligned(cur) {
                cur = self.up(cur).expect("unaligned node has a parent");
                x_c += 1;
                debug_assert!(x_c <= self.r as u64);
            }
            if shift > x_c {
                return;
            }
        }
        let b = prev.expect("unaligned window has a predecessor");
        assert_ne!(a, b, "a window cannot be its own parent");
        self.parent_char.insert(a, Some(self.first_char(b)));
    }

    /// Aligned ancestor `a2` of `a` and the number of steps `d` to it, so that
    /// characters `1+d..r` of `a2` equal characters `1..r-d` of `a`.
    pub fn locate(&self, a: MetaChar) -> Result<(MetaChar, u32), BlockTreeError> {
        if !self.contains(a) {
            return Err(BlockTreeError::NotFound(a));
        }
        let mut cur = a;
        let mut d = 0u32;
        while !self.is_aligned(cur) {
            cur = self.up(cur).expect("unaligned node has a parent");
            d += 1;
            assert!(d <= self.r, "aligned ancestor lies more than r steps up");
        }
        Ok((cur, d))
    }
}
