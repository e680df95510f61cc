//! The words `ω_n`, the sequence `ξ` and the points built from it.
//!
//! `ω_1 = 1` and `ω_{n+1} = ω_n 0^n ω_n`. The sequence `ξ` is zero on the
//! negative integers and has every `ω_n` as its prefix at index 0. Lengths
//! satisfy `ℓ_{n+1} = 2ℓ_n + n`, which closes to `ℓ_n = 3·2^(n-1) - n - 1`.
//!
//! Coordinates are `i128`. Evaluation never materializes a word: an index is
//! resolved by walking down the left-copy / gap / right-copy decomposition of
//! the smallest enclosing `ω_n`, so a query costs `O(log i)` steps and only the
//! length table is shared state.

use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::{Error, Limits, Result, Word};

/// Largest `n` whose length fits a u128.
pub const MAX_OMEGA_N: u32 = 127;

/// Words up to this index are kept materialized as copy sources for block generation.
const CACHED_WORDS: u32 = 16;

/// Memoized `ℓ_n` for `1 ≤ n ≤ 127`.
#[derive(Debug)]
pub struct LengthTable {
    // entries[n] = ℓ_n, entries[0] unused
    entries: Vec<u128>,
}

impl LengthTable {
    fn build() -> Self {
        let mut entries = vec![0u128, 1];
        for n in 1..MAX_OMEGA_N {
            let prev = entries[n as usize];
            let next = prev
                .checked_mul(2)
                .and_then(|v| v.checked_add(n as u128))
                .expect("lengths up to n = 127 fit in u128");
            entries.push(next);
        }
        LengthTable { entries }
    }

    /// The process-wide table; built once on first use and read-only afterwards.
    pub fn global() -> &'static LengthTable {
        static TABLE: OnceLock<LengthTable> = OnceLock::new();
        TABLE.get_or_init(LengthTable::build)
    }

    pub fn get(&self, n: u32) -> Result<u128> {
        match n {
            0 => Err(Error::InvalidArgument("omega index starts at 1".into())),
            n if n > MAX_OMEGA_N => Err(Error::CapacityExceeded { n }),
            n => Ok(self.entries[n as usize]),
        }
    }

    #[inline]
    fn at(&self, n: u32) -> u128 {
        self.entries[n as usize]
    }

    /// Smallest `n` with `ℓ_n > i`; 128 when `i ≥ ℓ_127`.
    pub fn enclosing(&self, i: u128) -> u32 {
        self.entries[1..].partition_point(|&len| len <= i) as u32 + 1
    }
}

/// `ℓ_n`, the length of `ω_n`.
pub fn omega_length(n: u32) -> Result<u128> {
    LengthTable::global().get(n)
}

fn cached_words() -> &'static [Word] {
    static WORDS: OnceLock<Vec<Word>> = OnceLock::new();
    WORDS.get_or_init(|| {
        let mut words = vec![Word::new(), "1".parse().unwrap()];
        for n in 1..CACHED_WORDS {
            let prev = &words[n as usize];
            let mut next = Word::with_capacity(2 * prev.len() + n as usize);
            next.append(prev);
            next.push_zeros(n as usize);
            next.append(prev);
            words.push(next);
        }
        words
    })
}

/// Materializes `ω_n`, refusing when `ℓ_n > cap`.
pub fn omega_word(n: u32, cap: u64) -> Result<Word> {
    let len = omega_length(n)?;
    if len > cap as u128 {
        return Err(Error::CapExceeded { requested: len, cap });
    }
    if n <= CACHED_WORDS {
        return Ok(cached_words()[n as usize].clone());
    }
    let mut out = Word::with_capacity(len as usize);
    emit(&mut out, n, 0, len);
    Ok(out)
}

/// Appends `ω_n[lo..hi)` to `out`.
fn emit(out: &mut Word, n: u32, lo: u128, hi: u128) {
    if lo >= hi {
        return;
    }
    if n <= CACHED_WORDS {
        out.extend_from(&cached_words()[n as usize], lo as usize, hi as usize);
        return;
    }
    let table = LengthTable::global();
    let left = table.at(n - 1);
    let gap_end = left + (n - 1) as u128;
    if lo < left {
        emit(out, n - 1, lo, hi.min(left));
    }
    if hi > left && lo < gap_end {
        out.push_zeros((hi.min(gap_end) - lo.max(left)) as usize);
    }
    if hi > gap_end {
        emit(out, n - 1, lo.max(gap_end) - gap_end, hi - gap_end);
    }
}

/// Walks `ω_n` down to the symbol at `i`; requires `i < ℓ_n` (always true for n = 128).
fn descend(mut i: u128, mut n: u32) -> u8 {
    let table = LengthTable::global();
    loop {
        if n == 1 {
            return 1;
        }
        let left = table.at(n - 1);
        if i < left {
            n = table.enclosing(i);
            continue;
        }
        let gap_end = left + (n - 1) as u128;
        if i < gap_end {
            return 0;
        }
        i -= gap_end;
        n -= 1;
    }
}

fn xi_at_nonneg(i: u128) -> u8 {
    descend(i, LengthTable::global().enclosing(i))
}

/// `ξ(i)` for any integer index.
pub fn xi_at(i: i128) -> u8 {
    if i < 0 {
        0
    } else {
        xi_at_nonneg(i as u128)
    }
}

/// An exact sum of two i128 values in sign-magnitude form with a 129th bit.
#[derive(Debug, Clone, Copy)]
struct Wide {
    negative: bool,
    carry: bool,
    magnitude: u128,
}

impl Wide {
    fn sum(a: i128, b: i128) -> Wide {
        let (ma, mb) = (a.unsigned_abs(), b.unsigned_abs());
        if (a < 0) == (b < 0) {
            let (magnitude, carry) = ma.overflowing_add(mb);
            Wide { negative: a < 0, carry, magnitude }
        } else if ma >= mb {
            Wide { negative: a < 0, carry: false, magnitude: ma - mb }
        } else {
            Wide { negative: b < 0, carry: false, magnitude: mb - ma }
        }
    }

    fn neg(self) -> Wide {
        Wide { negative: !self.negative, ..self }
    }

    fn xi(self) -> u8 {
        if self.negative && (self.magnitude != 0 || self.carry) {
            return 0;
        }
        if !self.carry {
            return xi_at_nonneg(self.magnitude);
        }
        // 2^128 + m sits past the gap of ω_128; step into its right copy of ω_127.
        let gap_end = LengthTable::global().at(MAX_OMEGA_N) + MAX_OMEGA_N as u128;
        let offset = self.magnitude + (u128::MAX - gap_end) + 1;
        descend(offset, MAX_OMEGA_N)
    }
}

/// `ξ(a)ξ(a+1)…ξ(b)`, generated block-wise from the cached small words.
pub fn xi_segment(a: i128, b: i128, limits: &Limits) -> Result<Word> {
    if a > b {
        return Err(Error::InvalidArgument(format!("empty segment [{a}, {b}]")));
    }
    let len = b.checked_sub(a).map(|d| d as u128 + 1).unwrap_or(u128::MAX);
    limits.check(len)?;
    let mut out = Word::with_capacity(len as usize);
    if a < 0 {
        out.push_zeros((b.min(-1) - a + 1) as usize);
    }
    if b >= 0 {
        let lo = a.max(0) as u128;
        let hi = b as u128 + 1;
        let n = LengthTable::global().enclosing(b as u128);
        emit(&mut out, n, lo, hi);
    }
    Ok(out)
}

/// A finitely described point of the subshift.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PointDescriptor {
    /// The fixed point `…000…`.
    Zero,
    /// `T^n ξ`.
    XiShift(i128),
    /// `T^n ξ̄` where `ξ̄(i) = ξ(-i)`.
    XiReflectShift(i128),
}

impl PointDescriptor {
    /// Symbol at coordinate `i`.
    pub fn at(&self, i: i128) -> u8 {
        match *self {
            PointDescriptor::Zero => 0,
            PointDescriptor::XiShift(n) => Wide::sum(n, i).xi(),
            PointDescriptor::XiReflectShift(n) => Wide::sum(n, i).neg().xi(),
        }
    }

    /// The reflection `x̄(i) = x(-i)`.
    pub fn reflect(&self) -> Result<PointDescriptor> {
        let neg = |n: i128| {
            n.checked_neg()
                .ok_or(Error::IndexOverflow("reflection of i128::MIN shift"))
        };
        Ok(match *self {
            PointDescriptor::Zero => PointDescriptor::Zero,
            PointDescriptor::XiShift(n) => PointDescriptor::XiReflectShift(neg(n)?),
            PointDescriptor::XiReflectShift(n) => PointDescriptor::XiShift(neg(n)?),
        })
    }

    /// `T^by` applied to the point.
    pub fn shift(&self, by: i128) -> Result<PointDescriptor> {
        let add = |n: i128| n.checked_add(by).ok_or(Error::IndexOverflow("shift offset"));
        Ok(match *self {
            PointDescriptor::Zero => PointDescriptor::Zero,
            PointDescriptor::XiShift(n) => PointDescriptor::XiShift(add(n)?),
            PointDescriptor::XiReflectShift(n) => PointDescriptor::XiReflectShift(add(n)?),
        })
    }

    /// Coordinates strictly below the returned bound are all zero.
    pub fn zero_below(&self) -> Option<i128> {
        match *self {
            PointDescriptor::XiShift(n) => n.checked_neg(),
            _ => None,
        }
    }

    /// Coordinates strictly above the returned bound are all zero.
    pub fn zero_above(&self) -> Option<i128> {
        match *self {
            PointDescriptor::XiReflectShift(n) => n.checked_neg(),
            _ => None,
        }
    }

    /// The point on `[lo, hi]` as a word (symbol 0 is coordinate `lo`).
    pub fn segment(&self, lo: i128, hi: i128, limits: &Limits) -> Result<Word> {
        if lo > hi {
            return Err(Error::InvalidArgument(format!("empty segment [{lo}, {hi}]")));
        }
        let overflow = || Error::IndexOverflow("segment bounds");
        match *self {
            PointDescriptor::Zero => {
                let len = hi.checked_sub(lo).map(|d| d as u128 + 1).unwrap_or(u128::MAX);
                limits.check(len)?;
                Ok(Word::zeros(len as usize))
            }
            PointDescriptor::XiShift(n) => xi_segment(
                lo.checked_add(n).ok_or_else(overflow)?,
                hi.checked_add(n).ok_or_else(overflow)?,
                limits,
            ),
            PointDescriptor::XiReflectShift(n) => {
                // coordinate i reads ξ(-n-i)
                let a = n.checked_add(hi).and_then(i128::checked_neg).ok_or_else(overflow)?;
                let b = n.checked_add(lo).and_then(i128::checked_neg).ok_or_else(overflow)?;
                Ok(xi_segment(a, b, limits)?.reversed())
            }
        }
    }
}

/// `x(i)` for the point described by `p`.
pub fn point_at(p: &PointDescriptor, i: i128) -> u8 {
    p.at(i)
}

pub fn reflect(p: &PointDescriptor) -> Result<PointDescriptor> {
    p.reflect()
}

impl fmt::Display for PointDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PointDescriptor::Zero => f.write_str("zero"),
            PointDescriptor::XiShift(n) => write!(f, "xi:{n}"),
            PointDescriptor::XiReflectShift(n) => write!(f, "rxi:{n}"),
        }
    }
}

impl FromStr for PointDescriptor {
    type Err = Error;

    /// Parses `zero`, `xi:<n>` or `rxi:<n>`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidArgument(format!("bad point {s:?}; expected zero | xi:<n> | rxi:<n>"));
        if s == "zero" {
            return Ok(PointDescriptor::Zero);
        }
        let (kind, n) = s.split_once(':').ok_or_else(bad)?;
        let n: i128 = n.parse().map_err(|_| bad())?;
        match kind {
            "xi" => Ok(PointDescriptor::XiShift(n)),
            "rxi" => Ok(PointDescriptor::XiReflectShift(n)),
            _ => Err(bad()),
        }
    }
}

impl Serialize for PointDescriptor {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for PointDescriptor {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use PointDescriptor::*;

    /// String-concatenation oracle for ω_n, independent of the packed generator.
    fn naive_omega(n: u32) -> String {
        let mut w = String::from("1");
        for k in 1..n {
            w = format!("{w}{}{w}", "0".repeat(k as usize));
        }
        w
    }

    #[test]
    fn lengths() {
        assert_eq!(omega_length(1).unwrap(), 1);
        assert_eq!(omega_length(2).unwrap(), 3);
        assert_eq!(omega_length(3).unwrap(), 8);
        assert_eq!(omega_length(4).unwrap(), 19);
        assert_eq!(omega_length(5).unwrap(), 42);
        assert_eq!(naive_omega(4).len(), 19);
        assert!(matches!(omega_length(0), Err(Error::InvalidArgument(_))));
        assert!(matches!(omega_length(128), Err(Error::CapacityExceeded { n: 128 })));
        // past 64 bits
        assert!(omega_length(70).unwrap() > u64::MAX as u128);
    }

    #[test]
    fn closed_form_matches_recurrence() {
        for n in 1..=MAX_OMEGA_N {
            let closed = 3u128 * (1u128 << (n - 1)) - n as u128 - 1;
            assert_eq!(omega_length(n).unwrap(), closed, "n = {n}");
        }
    }

    #[test]
    fn small_words() {
        assert_eq!(omega_word(1, 100).unwrap().to_string(), "1");
        assert_eq!(omega_word(2, 100).unwrap().to_string(), "101");
        assert_eq!(omega_word(3, 100).unwrap().to_string(), "10100101");
        assert_eq!(omega_word(4, 100).unwrap().to_string(), "1010010100010100101");
        assert!(matches!(omega_word(4, 18), Err(Error::CapExceeded { requested: 19, cap: 18 })));
    }

    #[test]
    fn generated_words_match_oracle() {
        for n in 1..=20 {
            assert_eq!(omega_word(n, 1 << 24).unwrap().to_string(), naive_omega(n), "n = {n}");
        }
    }

    #[test]
    fn lazy_evaluation_matches_words() {
        for n in 1..=20u32 {
            let w = omega_word(n, 1 << 24).unwrap();
            for i in 0..w.len() {
                assert_eq!(xi_at(i as i128), w.get(i), "n = {n}, i = {i}");
            }
        }
    }

    #[test]
    fn xi_examples() {
        assert_eq!(xi_at(-5), 0);
        assert_eq!(xi_at(0), 1);
        assert_eq!(xi_at(11), 1);
        assert_eq!(xi_at(i128::MIN), 0);
        // the last symbol of ω_126 is 1
        let last = omega_length(126).unwrap() - 1;
        assert_eq!(xi_at(last as i128), 1);
        assert_eq!(xi_at(last as i128 + 1), 0);
    }

    #[test]
    fn segments() {
        let lim = Limits::default();
        assert_eq!(xi_segment(0, 7, &lim).unwrap().to_string(), "10100101");
        assert_eq!(xi_segment(8, 10, &lim).unwrap().to_string(), "000");
        assert_eq!(xi_segment(-3, 2, &lim).unwrap().to_string(), "000101");
        assert!(xi_segment(3, 2, &lim).is_err());
        let small = Limits::default().with_max_materialize(5);
        assert!(matches!(xi_segment(0, 5, &small), Err(Error::CapExceeded { .. })));
    }

    #[test]
    fn segments_far_out_match_lazy_evaluation() {
        let lim = Limits::default();
        let base = omega_length(90).unwrap() as i128 - 3000;
        let seg = xi_segment(base, base + 5000, &lim).unwrap();
        for k in 0..seg.len() {
            assert_eq!(seg.get(k), xi_at(base + k as i128));
        }
    }

    #[test]
    fn point_examples() {
        assert_eq!(point_at(&Zero, 17), 0);
        assert_eq!(point_at(&XiShift(2), 0), 1);
        assert_eq!(point_at(&XiReflectShift(0), -1), 0);
        assert_eq!(point_at(&XiShift(0), 0), 1);
        assert_eq!(reflect(&Zero).unwrap(), Zero);
        assert_eq!(reflect(&XiShift(3)).unwrap(), XiReflectShift(-3));
        assert!(XiShift(i128::MIN).reflect().is_err());
    }

    #[test]
    fn extreme_indices_terminate() {
        for p in [XiShift(i128::MAX), XiShift(i128::MIN), XiReflectShift(i128::MIN), XiReflectShift(i128::MAX)] {
            for i in [i128::MIN, -1, 0, 1, i128::MAX] {
                let s = p.at(i);
                assert!(s <= 1);
            }
        }
        // ξ(2^127) through an overflowing sum equals a direct u128 descent
        assert_eq!(XiShift(i128::MAX).at(1), xi_at_nonneg(1u128 << 127));
        assert_eq!(XiReflectShift(i128::MIN).at(i128::MIN), Wide { negative: false, carry: true, magnitude: 0 }.xi());
    }

    #[test]
    fn point_segments() {
        let lim = Limits::default();
        for p in [Zero, XiShift(-4), XiShift(9), XiReflectShift(5), XiReflectShift(-7)] {
            let seg = p.segment(-20, 30, &lim).unwrap();
            for k in 0..seg.len() {
                assert_eq!(seg.get(k), p.at(-20 + k as i128), "{p} at {}", -20 + k as i128);
            }
        }
    }

    #[test]
    fn descriptor_syntax() {
        for s in ["zero", "xi:0", "xi:-12", "rxi:7"] {
            assert_eq!(s.parse::<PointDescriptor>().unwrap().to_string(), s);
        }
        assert!("xi".parse::<PointDescriptor>().is_err());
        assert!("yi:3".parse::<PointDescriptor>().is_err());
    }

    #[test]
    fn prefix_and_suffix_stability() {
        for n in 1..20 {
            let a = omega_word(n, 1 << 24).unwrap();
            let b = omega_word(n + 1, 1 << 24).unwrap();
            assert!(a.is_prefix_of(&b) && a.is_suffix_of(&b));
        }
    }

    #[test]
    fn length_law() {
        for n in 1..40 {
            assert_eq!(omega_length(n + 1).unwrap(), 2 * omega_length(n).unwrap() + n as u128);
        }
        for n in 3..=40 {
            assert!(omega_length(n).unwrap() >= 1u128 << n);
        }
    }

    fn descriptor() -> impl Strategy<Value = PointDescriptor> {
        prop_oneof![
            Just(Zero),
            (-1000i128..1000).prop_map(XiShift),
            (-1000i128..1000).prop_map(XiReflectShift),
        ]
    }

    proptest! {
        #[test]
        fn reflection_is_an_involution(p in descriptor()) {
            prop_assert_eq!(p.reflect().unwrap().reflect().unwrap(), p);
        }

        #[test]
        fn reflection_mirrors_coordinates(p in descriptor(), i in -1_000_000i128..=1_000_000) {
            prop_assert_eq!(p.reflect().unwrap().at(i), p.at(-i));
        }

        #[test]
        fn shifting_moves_coordinates(p in descriptor(), by in -5000i128..5000, i in -5000i128..5000) {
            prop_assert_eq!(p.shift(by).unwrap().at(i), p.at(i + by));
        }
    }
}
