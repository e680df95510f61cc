//! Bit-packed binary words.
//!
//! Symbol `i` lives in bit `i % 64` of limb `i / 64`. Bits past `len` are
//! always zero so limb-wise equality and popcounts are exact.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::{Error, Result};

#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct Word {
    limbs: Vec<u64>,
    len: usize,
}

impl Word {
    pub fn new() -> Self {
        Word::default()
    }

    pub fn with_capacity(symbols: usize) -> Self {
        Word {
            limbs: Vec::with_capacity(symbols.div_ceil(64)),
            len: 0,
        }
    }

    pub fn zeros(len: usize) -> Self {
        Word {
            limbs: vec![0; len.div_ceil(64)],
            len,
        }
    }

    /// Word whose first `len` symbols are the low bits of `bits`.
    pub fn from_bits(bits: u128, len: usize) -> Self {
        assert!(len <= 128);
        let mut w = Word::with_capacity(len);
        w.push_bits(bits, len);
        w
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn get(&self, i: usize) -> u8 {
        debug_assert!(i < self.len);
        ((self.limbs[i >> 6] >> (i & 63)) & 1) as u8
    }

    pub fn set(&mut self, i: usize, symbol: u8) {
        assert!(i < self.len);
        let mask = 1u64 << (i & 63);
        if symbol & 1 == 1 {
            self.limbs[i >> 6] |= mask;
        } else {
            self.limbs[i >> 6] &= !mask;
        }
    }

    pub fn push(&mut self, symbol: u8) {
        if self.len & 63 == 0 {
            self.limbs.push(0);
        }
        if symbol & 1 == 1 {
            self.limbs[self.len >> 6] |= 1 << (self.len & 63);
        }
        self.len += 1;
    }

    pub fn push_zeros(&mut self, count: usize) {
        self.len += count;
        self.limbs.resize(self.len.div_ceil(64), 0);
    }

    /// Appends the low `count` bits of `bits`, lowest first.
    pub fn push_bits(&mut self, bits: u128, count: usize) {
        debug_assert!(count <= 128);
        let bits = if count == 128 { bits } else { bits & ((1u128 << count) - 1) };
        let mut done = 0;
        while done < count {
            let off = self.len & 63;
            if off == 0 {
                self.limbs.push(0);
            }
            let take = (64 - off).min(count - done);
            let chunk = (bits >> done) as u64 & low_mask(take);
            *self.limbs.last_mut().unwrap() |= chunk << off;
            self.len += take;
            done += take;
        }
    }

    /// Appends symbols `lo..hi` of `src`.
    pub fn extend_from(&mut self, src: &Word, lo: usize, hi: usize) {
        assert!(lo <= hi && hi <= src.len);
        let mut pos = lo;
        while pos < hi {
            let take = (hi - pos).min(64);
            let chunk = src.read_u64(pos, take);
            self.push_bits(chunk as u128, take);
            pos += take;
        }
    }

    pub fn append(&mut self, other: &Word) {
        self.extend_from(other, 0, other.len);
    }

    /// Reads up to 64 symbols starting at `start` as the low bits of a u64.
    #[inline]
    pub fn read_u64(&self, start: usize, count: usize) -> u64 {
        debug_assert!(count <= 64 && start + count <= self.len);
        if count == 0 {
            return 0;
        }
        let limb = start >> 6;
        let off = start & 63;
        let mut v = self.limbs[limb] >> off;
        if off != 0 && off + count > 64 {
            v |= self.limbs[limb + 1] << (64 - off);
        }
        v & low_mask(count)
    }

    /// Reads up to 128 symbols starting at `start` as the low bits of a u128.
    #[inline]
    pub fn window(&self, start: usize, count: usize) -> u128 {
        debug_assert!(count <= 128);
        if count <= 64 {
            self.read_u64(start, count) as u128
        } else {
            let lo = self.read_u64(start, 64) as u128;
            let hi = self.read_u64(start + 64, count - 64) as u128;
            lo | (hi << 64)
        }
    }

    pub fn slice(&self, lo: usize, hi: usize) -> Word {
        let mut w = Word::with_capacity(hi - lo);
        w.extend_from(self, lo, hi);
        w
    }

    pub fn count_ones(&self) -> u64 {
        self.limbs.iter().map(|l| l.count_ones() as u64).sum()
    }

    pub fn count_ones_in(&self, lo: usize, hi: usize) -> u64 {
        let mut total = 0;
        let mut pos = lo;
        while pos < hi {
            let take = (hi - pos).min(64);
            total += self.read_u64(pos, take).count_ones() as u64;
            pos += take;
        }
        total
    }

    /// The word read right to left.
    pub fn reversed(&self) -> Word {
        let mut out = Word::with_capacity(self.len);
        let mut end = self.len;
        while end > 0 {
            let take = end.min(64);
            let chunk = self.read_u64(end - take, take);
            out.push_bits((chunk.reverse_bits() >> (64 - take)) as u128, take);
            end -= take;
        }
        out
    }

    pub fn is_all_zero(&self) -> bool {
        self.limbs.iter().all(|&l| l == 0)
    }

    /// True when `self` occurs in `other` starting at `at`.
    pub fn matches_at(&self, other: &Word, at: usize) -> bool {
        if at + self.len > other.len {
            return false;
        }
        let mut pos = 0;
        while pos < self.len {
            let take = (self.len - pos).min(64);
            if self.read_u64(pos, take) != other.read_u64(at + pos, take) {
                return false;
            }
            pos += take;
        }
        true
    }

    pub fn is_prefix_of(&self, other: &Word) -> bool {
        self.matches_at(other, 0)
    }

    pub fn is_suffix_of(&self, other: &Word) -> bool {
        other.len >= self.len && self.matches_at(other, other.len - self.len)
    }

    /// Contains `run` consecutive zeros somewhere (vacuously true for `run == 0`).
    pub fn has_zero_run(&self, run: usize) -> bool {
        if run == 0 {
            return true;
        }
        let mut current = 0;
        for s in self.iter() {
            if s == 0 {
                current += 1;
                if current >= run {
                    return true;
                }
            } else {
                current = 0;
            }
        }
        false
    }

    pub fn iter(&self) -> impl Iterator<Item = u8> + '_ {
        (0..self.len).map(move |i| self.get(i))
    }

    /// Packs the whole word into a u128 (length at most 128).
    pub fn to_bits(&self) -> u128 {
        assert!(self.len <= 128);
        self.window(0, self.len)
    }
}

#[inline]
fn low_mask(count: usize) -> u64 {
    if count >= 64 {
        u64::MAX
    } else {
        (1u64 << count) - 1
    }
}

impl Ord for Word {
    /// Shorter words first; equal lengths compare lexicographically.
    fn cmp(&self, other: &Self) -> Ordering {
        self.len.cmp(&other.len).then_with(|| {
            let mut pos = 0;
            while pos < self.len {
                let take = (self.len - pos).min(64);
                // reverse so the earliest symbol is most significant
                let a = self.read_u64(pos, take).reverse_bits();
                let b = other.read_u64(pos, take).reverse_bits();
                match a.cmp(&b) {
                    Ordering::Equal => pos += take,
                    ord => return ord,
                }
            }
            Ordering::Equal
        })
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: String = self.iter().map(|b| if b == 1 { '1' } else { '0' }).collect();
        f.write_str(&s)
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.len <= 256 {
            write!(f, "Word(\"{self}\")")
        } else {
            write!(f, "Word(len={})", self.len)
        }
    }
}

impl FromStr for Word {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut w = Word::with_capacity(s.len());
        for c in s.chars() {
            match c {
                '0' => w.push(0),
                '1' => w.push(1),
                other => {
                    return Err(Error::InvalidArgument(format!(
                        "symbol {other:?} is not in the alphabet {{0,1}}"
                    )))
                }
            }
        }
        Ok(w)
    }
}

impl Serialize for Word {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Word {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
