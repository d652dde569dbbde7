//! Dynamic 2D point sets with rectangle queries.
//!
//! Coordinates are meta-characters of `r` characters at `bits` bits each.
//! Small sets are scanned linearly. Larger sets keep an x-major ordered set
//! and, per x-prefix length `a`, a lazily built index keyed by
//! `(top a characters of x, y)`. A rectangle whose x-side is the set of
//! values sharing an `a`-character prefix (every `hr` interval is) becomes a
//! single range scan on that index; other rectangles fall back to walking
//! the x-major set.

use std::collections::BTreeSet;

use crate::alphabet::{low_mask, BitInterval};

pub type Point = (u64, u64);

const SMALL_MAX: usize = 32;

#[derive(Clone, Debug)]
pub struct PointSet {
    r: u8,
    bits: u8,
    repr: Repr,
}

#[derive(Clone, Debug)]
enum Repr {
    Small(Vec<Point>),
    Large(Box<Large>),
}

#[derive(Clone, Debug)]
struct Large {
    by_x: BTreeSet<Point>,
    // prefix[a]: entries (x_top_a << meta_bits | y, x).
    prefix: Vec<Option<BTreeSet<(u128, u64)>>>,
}

impl PointSet {
    pub fn new(r: u32, bits: u32) -> Self {
        debug_assert!(r >= 1 && r * bits <= 64);
        PointSet {
            r: r as u8,
            bits: bits as u8,
            repr: Repr::Small(Vec::new()),
        }
    }

    pub fn len(&self) -> usize {
        match &self.repr {
            Repr::Small(v) => v.len(),
            Repr::Large(l) => l.by_x.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn meta_bits(&self) -> u32 {
        self.r as u32 * self.bits as u32
    }

    #[inline]
    fn key(&self, a: u32, (x, y): Point) -> u128 {
        let top = if a == 0 {
            0
        } else {
            x >> ((self.r as u32 - a) * self.bits as u32)
        };
        ((top as u128) << self.meta_bits()) | y as u128
    }

    /// Character prefix length whose value set is exactly `iv`.
    fn prefix_len(&self, iv: BitInterval) -> Option<u32> {
        let width = iv.hi.wrapping_sub(iv.lo);
        (0..=self.r as u32).find(|&a| {
            let mask = low_mask((self.r as u32 - a) * self.bits as u32);
            width == mask && iv.lo & mask == 0
        })
    }

    /// Inserts `p`; returns whether it was new.
    pub fn insert(&mut self, p: Point) -> bool {
        match &mut self.repr {
            Repr::Small(v) => {
                if v.contains(&p) {
                    return false;
                }
                if v.len() < SMALL_MAX {
                    v.push(p);
                    return true;
                }
                let mut by_x: BTreeSet<Point> = v.drain(..).collect();
                by_x.insert(p);
                self.repr = Repr::Large(Box::new(Large {
                    by_x,
                    prefix: vec![None; self.r as usize + 1],
                }));
                true
            }
            Repr::Large(_) => {
                let keys: Vec<(usize, u128)> = {
                    let Repr::Large(l) = &self.repr else { unreachable!() };
                    if l.by_x.contains(&p) {
                        return false;
                    }
                    l.prefix
                        .iter()
                        .enumerate()
                        .filter(|(_, ix)| ix.is_some())
                        .map(|(a, _)| (a, self.key(a as u32, p)))
                        .collect()
                };
                let Repr::Large(l) = &mut self.repr else { unreachable!() };
                l.by_x.insert(p);
                for (a, k) in keys {
                    l.prefix[a].as_mut().unwrap().insert((k, p.0));
                }
                true
            }
        }
    }

    pub fn contains(&self, p: Point) -> bool {
        match &self.repr {
            Repr::Small(v) => v.contains(&p),
            Repr::Large(l) => l.by_x.contains(&p),
        }
    }

    fn ensure_index(&mut self, a: u32) {
        let built = match &self.repr {
            Repr::Large(l) => l.prefix[a as usize].is_some(),
            Repr::Small(_) => true,
        };
        if built {
            return;
        }
        let index: BTreeSet<(u128, u64)> = match &self.repr {
            Repr::Large(l) => l.by_x.iter().map(|&p| (self.key(a, p), p.0)).collect(),
            Repr::Small(_) => unreachable!(),
        };
        if let Repr::Large(l) = &mut self.repr {
            l.prefix[a as usize] = Some(index);
        }
    }

    /// Calls `f` on points of `xr × yr` until it returns `false`.
    pub fn for_each_in(&mut self, xr: BitInterval, yr: BitInterval, mut f: impl FnMut(Point) -> bool) {
        if let Repr::Small(v) = &self.repr {
            for &p in v {
                if xr.contains(p.0) && yr.contains(p.1) && !f(p) {
                    return;
                }
            }
            return;
        }
        match self.prefix_len(xr) {
            Some(a) => {
                self.ensure_index(a);
                let lo = self.key(a, (xr.lo, yr.lo));
                let hi = self.key(a, (xr.lo, yr.hi));
                let Repr::Large(l) = &self.repr else { unreachable!() };
                let ix = l.prefix[a as usize].as_ref().unwrap();
                for &(k, x) in ix.range((lo, 0)..=(hi, u64::MAX)) {
                    let y = (k & low_mask(self.meta_bits()) as u128) as u64;
                    if !f((x, y)) {
                        return;
                    }
                }
            }
            None => {
                let Repr::Large(l) = &self.repr else { unreachable!() };
                for &p in l.by_x.range((xr.lo, 0)..=(xr.hi, u64::MAX)) {
                    if yr.contains(p.1) && !f(p) {
                        return;
                    }
                }
            }
        }
    }

    pub fn find_any(&mut self, xr: BitInterval, yr: BitInterval) -> Option<Point> {
        let mut out = None;
        self.for_each_in(xr, yr, |p| {
            out = Some(p);
            false
        });
        out
    }

    pub fn find_up_to(&mut self, xr: BitInterval, yr: BitInterval, k: usize) -> Vec<Point> {
        let mut out = Vec::with_capacity(k);
        if k == 0 {
            return out;
        }
        self.for_each_in(xr, yr, |p| {
            out.push(p);
            out.len() < k
        });
        out
    }
}
