//! Packed bit strings used for Pauli X/Z parts and computational basis labels.

use std::fmt;

/// Fixed-length bit string packed into 64-bit words. Bit `i` corresponds to
/// qubit `i` (0-based); the textual form lists qubit 0 first.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct BitString {
    len: usize,
    words: Vec<u64>,
}

fn word_count(len: usize) -> usize {
    len.div_ceil(64)
}

impl BitString {
    pub fn zeros(len: usize) -> Self {
        BitString {
            len,
            words: vec![0; word_count(len)],
        }
    }

    pub fn from_bools<I: IntoIterator<Item = bool>>(bits: I) -> Self {
        let bits: Vec<bool> = bits.into_iter().collect();
        let mut out = BitString::zeros(bits.len());
        for (i, b) in bits.into_iter().enumerate() {
            if b {
                out.set(i, true);
            }
        }
        out
    }

    /// Parses a string of `0`/`1` characters, qubit 0 first.
    pub fn parse(s: &str) -> Option<Self> {
        let mut bits = Vec::with_capacity(s.len());
        for ch in s.chars() {
            match ch {
                '0' => bits.push(false),
                '1' => bits.push(true),
                _ => return None,
            }
        }
        Some(BitString::from_bools(bits))
    }

    /// Builds the bit string whose qubit `q` equals bit `len - 1 - q` of
    /// `index` (qubit 0 is the most significant digit).
    pub fn from_index(index: usize, len: usize) -> Self {
        let mut out = BitString::zeros(len);
        for q in 0..len {
            if (index >> (len - 1 - q)) & 1 == 1 {
                out.set(q, true);
            }
        }
        out
    }

    /// Inverse of [`BitString::from_index`].
    pub fn to_index(&self) -> usize {
        let mut idx = 0usize;
        for q in 0..self.len {
            idx = (idx << 1) | self.get(q) as usize;
        }
        idx
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn words(&self) -> &[u64] {
        &self.words
    }

    #[inline]
    pub fn words_mut(&mut self) -> &mut [u64] {
        &mut self.words
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        debug_assert!(i < self.len);
        (self.words[i / 64] >> (i % 64)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, value: bool) {
        debug_assert!(i < self.len);
        let mask = 1u64 << (i % 64);
        if value {
            self.words[i / 64] |= mask;
        } else {
            self.words[i / 64] &= !mask;
        }
    }

    #[inline]
    pub fn flip(&mut self, i: usize) {
        self.words[i / 64] ^= 1u64 << (i % 64);
    }

    #[inline]
    pub fn xor_assign(&mut self, other: &BitString) {
        debug_assert_eq!(self.len, other.len);
        for (w, o) in self.words.iter_mut().zip(&other.words) {
            *w ^= o;
        }
    }

    pub fn xor(&self, other: &BitString) -> BitString {
        let mut out = self.clone();
        out.xor_assign(other);
        out
    }

    pub fn and(&self, other: &BitString) -> BitString {
        let mut out = self.clone();
        for (w, o) in out.words.iter_mut().zip(&other.words) {
            *w &= o;
        }
        out
    }

    /// Number of positions where both strings are 1.
    #[inline]
    pub fn and_count(&self, other: &BitString) -> u32 {
        self.words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a & b).count_ones())
            .sum()
    }

    /// Inner product over GF(2).
    #[inline]
    pub fn dot(&self, other: &BitString) -> bool {
        self.and_count(other) & 1 == 1
    }

    #[inline]
    pub fn count_ones(&self) -> u32 {
        self.words.iter().map(|w| w.count_ones()).sum()
    }

    #[inline]
    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len).filter(move |&i| self.get(i))
    }

    /// Lowest set index, if any.
    pub fn first_one(&self) -> Option<usize> {
        for (wi, &w) in self.words.iter().enumerate() {
            if w != 0 {
                return Some(wi * 64 + w.trailing_zeros() as usize);
            }
        }
        None
    }
}

impl fmt::Display for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.len {
            f.write_str(if self.get(i) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitString({self})")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_display() {
        let b = BitString::parse("0110").unwrap();
        assert!(!b.get(0) && b.get(1) && b.get(2) && !b.get(3));
        assert_eq!(b.to_string(), "0110");
        assert!(BitString::parse("01a").is_none());
    }

    #[test]
    fn index_round_trip_is_big_endian() {
        let b = BitString::parse("100").unwrap();
        assert_eq!(b.to_index(), 4);
        for i in 0..32 {
            assert_eq!(BitString::from_index(i, 5).to_index(), i);
        }
    }

    #[test]
    fn wide_strings_cross_word_boundaries() {
        let mut a = BitString::zeros(130);
        a.set(0, true);
        a.set(64, true);
        a.set(129, true);
        let mut b = BitString::zeros(130);
        b.set(64, true);
        b.set(129, true);
        assert_eq!(a.and_count(&b), 2);
        assert!(!a.dot(&b));
        a.xor_assign(&b);
        assert_eq!(a.ones().collect::<Vec<_>>(), vec![0]);
        assert_eq!(b.first_one(), Some(64));
    }
}
