//! Packed bitstring representation and the word-level kernels everything
//! else is built on: seeded Bernoulli generation, cyclic rotation, XOR,
//! popcount and partition into substrings.
//!
//! Bit `i` of the logical string lives at bit `i % 64` (LSB-first) of word
//! `i / 64`. Padding bits past the logical length are kept zero at all
//! times, so whole-word popcounts and XORs need no per-bit masking.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::{Error, Result};

/// Identifies the bit-generation scheme written into sidecar headers.
/// Bump on any change that alters generated bits for a given spec.
pub const GENERATOR_VERSION: &str = "chacha8/1";

const WORD_BITS: usize = 64;
/// Bits generated per independent RNG block; blocks can run in parallel
/// because the generator is repositioned by absolute bit index.
const GEN_BLOCK_BITS: usize = 1 << 16;

/// Parameters for deterministic source-string generation.
///
/// Equal specs produce bit-identical strings, independent of thread count.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SourceSpec {
    pub length_bits: usize,
    /// Probability of a set bit.
    pub p: f64,
    pub seed: u64,
}

impl SourceSpec {
    pub fn new(length_bits: usize, p: f64, seed: u64) -> Result<Self> {
        let spec = SourceSpec { length_bits, p, seed };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if self.length_bits == 0 {
            return Err(Error::InvalidParameter(
                "length_bits must be at least 1".into(),
            ));
        }
        if !self.p.is_finite() || !(0.0..=1.0).contains(&self.p) {
            return Err(Error::InvalidParameter(format!(
                "p must be in [0, 1], got {}",
                self.p
            )));
        }
        Ok(())
    }
}

/// Fixed-length packed bit sequence.
///
/// Immutable in practice: every operation returns a fresh value, so
/// instances can be shared freely across threads.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitString {
    bits: usize,
    words: Vec<u64>,
}

impl std::fmt::Debug for BitString {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "BitString({} bits, popcount {})", self.bits, self.popcount())
    }
}

fn word_count(bits: usize) -> usize {
    bits.div_ceil(WORD_BITS)
}

/// Mask selecting the live bits of the final word, or all ones if the
/// length is word-aligned.
fn tail_mask(bits: usize) -> u64 {
    let rem = bits % WORD_BITS;
    if rem == 0 {
        u64::MAX
    } else {
        (1u64 << rem) - 1
    }
}

impl BitString {
    pub fn zeros(bits: usize) -> Result<Self> {
        if bits == 0 {
            return Err(Error::InvalidParameter("bit length must be positive".into()));
        }
        Ok(BitString {
            bits,
            words: vec![0; word_count(bits)],
        })
    }

    pub fn ones(bits: usize) -> Result<Self> {
        let mut b = Self::zeros(bits)?;
        for w in &mut b.words {
            *w = u64::MAX;
        }
        *b.words.last_mut().unwrap() &= tail_mask(bits);
        Ok(b)
    }

    /// Parse from a string of '0'/'1' characters; the leftmost character is
    /// bit 0.
    pub fn from_binary_str(s: &str) -> Result<Self> {
        if s.is_empty() {
            return Err(Error::InvalidParameter("empty bit pattern".into()));
        }
        let mut b = Self::zeros(s.len())?;
        for (i, c) in s.chars().enumerate() {
            match c {
                '0' => {}
                '1' => b.set_bit(i, true),
                other => {
                    return Err(Error::Parse(format!("invalid bit character `{other}`")))
                }
            }
        }
        Ok(b)
    }

    pub fn len(&self) -> usize {
        self.bits
    }

    pub fn is_empty(&self) -> bool {
        false // length is always >= 1
    }

    pub fn bit(&self, i: usize) -> bool {
        assert!(i < self.bits, "bit index {i} out of range for {} bits", self.bits);
        (self.words[i / WORD_BITS] >> (i % WORD_BITS)) & 1 == 1
    }

    pub fn set_bit(&mut self, i: usize, v: bool) {
        assert!(i < self.bits, "bit index {i} out of range for {} bits", self.bits);
        let mask = 1u64 << (i % WORD_BITS);
        if v {
            self.words[i / WORD_BITS] |= mask;
        } else {
            self.words[i / WORD_BITS] &= !mask;
        }
    }

    /// True when every padding bit past the logical length is zero.
    pub fn is_canonical(&self) -> bool {
        match self.words.last() {
            Some(&w) => w & !tail_mask(self.bits) == 0,
            None => true,
        }
    }

    /// Number of set bits among the logical bits.
    pub fn popcount(&self) -> u64 {
        self.words.iter().map(|w| w.count_ones() as u64).sum()
    }

    /// Load up to 64 bits starting at `start`, without wrap.
    /// Requires `start + k <= len` and `k <= 64`.
    fn load_bits(&self, start: usize, k: usize) -> u64 {
        debug_assert!(k >= 1 && k <= WORD_BITS);
        debug_assert!(start + k <= self.bits);
        let q = start / WORD_BITS;
        let r = start % WORD_BITS;
        let mut v = self.words[q] >> r;
        if r != 0 && q + 1 < self.words.len() {
            v |= self.words[q + 1] << (WORD_BITS - r);
        }
        if k < WORD_BITS {
            v &= (1u64 << k) - 1;
        }
        v
    }

    /// Load `k <= 64` logical bits starting at `pos < len`, wrapping past
    /// the end of the string. Requires `len >= k` so the wrap happens at
    /// most once.
    fn cyclic_load(&self, pos: usize, k: usize) -> u64 {
        debug_assert!(pos < self.bits && k <= self.bits);
        let first = (self.bits - pos).min(k);
        let mut v = self.load_bits(pos, first);
        if first < k {
            v |= self.load_bits(0, k - first) << first;
        }
        v
    }

    /// Number of set bits among logical bits `[start, start + len)`.
    pub fn popcount_range(&self, start: usize, len: usize) -> Result<u64> {
        if start + len > self.bits {
            return Err(Error::InvalidParameter(format!(
                "range [{start}, {}) exceeds {} bits",
                start + len,
                self.bits
            )));
        }
        let mut acc = 0u64;
        let mut pos = start;
        let end = start + len;
        while pos < end {
            let k = (end - pos).min(WORD_BITS);
            acc += self.load_bits(pos, k).count_ones() as u64;
            pos += k;
        }
        Ok(acc)
    }

    /// Cyclic left shift: bit `i` of the result is bit `(i + n) mod len`
    /// of the input.
    pub fn rotate(&self, n: usize) -> Result<BitString> {
        self.check_shift(n)?;
        if n == 0 {
            return Ok(self.clone());
        }
        let m = self.bits;
        let mut out = BitString::zeros(m)?;
        if m <= WORD_BITS {
            let w = self.words[0];
            out.words[0] = ((w >> n) | (w << (m - n))) & tail_mask(m);
            return Ok(out);
        }
        for j in 0..out.words.len() {
            let start = j * WORD_BITS;
            let k = (m - start).min(WORD_BITS);
            out.words[j] = self.cyclic_load((start + n) % m, k);
        }
        Ok(out)
    }

    /// Bitwise XOR of two equal-length strings.
    pub fn xor(&self, other: &BitString) -> Result<BitString> {
        if self.bits != other.bits {
            return Err(Error::InvalidParameter(format!(
                "length mismatch: {} vs {} bits",
                self.bits, other.bits
            )));
        }
        let mut out = self.clone();
        for (w, o) in out.words.iter_mut().zip(&other.words) {
            *w ^= o;
        }
        Ok(out)
    }

    /// Cyclic autocorrelation Hamming distance: the number of positions at
    /// which the string differs from itself rotated by `n` bits.
    ///
    /// Streams word-aligned reads of the rotated image instead of
    /// materializing a rotated copy.
    pub fn hamming_cyclic(&self, n: usize) -> Result<u64> {
        self.check_shift(n)?;
        if n == 0 {
            return Ok(0);
        }
        let m = self.bits;
        if m <= WORD_BITS {
            let w = self.words[0];
            let rot = ((w >> n) | (w << (m - n))) & tail_mask(m);
            return Ok((w ^ rot).count_ones() as u64);
        }
        let mut acc = 0u64;
        for j in 0..self.words.len() {
            let start = j * WORD_BITS;
            let k = (m - start).min(WORD_BITS);
            let b = self.cyclic_load((start + n) % m, k);
            acc += (self.words[j] ^ b).count_ones() as u64;
        }
        Ok(acc)
    }

    fn check_shift(&self, n: usize) -> Result<()> {
        if n >= self.bits {
            return Err(Error::InvalidParameter(format!(
                "shift {n} out of range for {} bits",
                self.bits
            )));
        }
        Ok(())
    }

    /// Cut `count` non-overlapping substrings of `sub_len` bits off the
    /// front of the string; substring `j` covers bits
    /// `[j * sub_len, (j + 1) * sub_len)`.
    pub fn split_substrings(&self, count: usize, sub_len: usize) -> Result<Vec<BitString>> {
        if count == 0 || sub_len == 0 {
            return Err(Error::InvalidParameter(
                "count and sub_len must be at least 1".into(),
            ));
        }
        let needed = count
            .checked_mul(sub_len)
            .ok_or_else(|| Error::InvalidParameter("count * sub_len overflows".into()))?;
        if needed > self.bits {
            return Err(Error::InvalidParameter(format!(
                "need {needed} bits for {count} substrings of {sub_len}, have {}",
                self.bits
            )));
        }
        let mut out = Vec::with_capacity(count);
        for j in 0..count {
            let base = j * sub_len;
            let mut sub = BitString::zeros(sub_len)?;
            for (wi, w) in sub.words.iter_mut().enumerate() {
                let start = base + wi * WORD_BITS;
                let k = (base + sub_len - start).min(WORD_BITS);
                *w = self.load_bits(start, k);
            }
            out.push(sub);
        }
        Ok(out)
    }

    /// Serialize to raw bytes: bit `i` at byte `i / 8`, bit `i % 8`,
    /// LSB-first; trailing padding bits zero.
    pub fn to_bytes(&self) -> Vec<u8> {
        let nbytes = self.bits.div_ceil(8);
        let mut out = Vec::with_capacity(nbytes);
        for w in &self.words {
            out.extend_from_slice(&w.to_le_bytes());
        }
        out.truncate(nbytes);
        out
    }

    pub fn from_bytes(bytes: &[u8], bits: usize) -> Result<BitString> {
        if bytes.len() != bits.div_ceil(8) {
            return Err(Error::Parse(format!(
                "expected {} bytes for {bits} bits, got {}",
                bits.div_ceil(8),
                bytes.len()
            )));
        }
        let mut b = BitString::zeros(bits)?;
        for (i, chunk) in bytes.chunks(8).enumerate() {
            let mut buf = [0u8; 8];
            buf[..chunk.len()].copy_from_slice(chunk);
            b.words[i] = u64::from_le_bytes(buf);
        }
        if !b.is_canonical() {
            return Err(Error::Parse("nonzero padding bits in serialized string".into()));
        }
        Ok(b)
    }
}

/// Draw a source string of independent Bernoulli(p) bits.
///
/// Bit `i` is decided by the `i`-th 64-bit draw of a ChaCha8 stream seeded
/// from `spec.seed`; blocks of the stream are generated in parallel by
/// repositioning the stream, so output is identical for any thread count.
pub fn generate_source(spec: &SourceSpec) -> Result<BitString> {
    spec.validate()?;
    if spec.p == 0.0 {
        return BitString::zeros(spec.length_bits);
    }
    if spec.p == 1.0 {
        return BitString::ones(spec.length_bits);
    }
    let m = spec.length_bits;
    // Set bit iff the top 53 bits of the draw fall below p * 2^53.
    let threshold = (spec.p * (1u64 << 53) as f64) as u64;
    let seed = spec.seed;
    let mut out = BitString::zeros(m)?;
    let words_per_block = GEN_BLOCK_BITS / WORD_BITS;
    out.words
        .par_chunks_mut(words_per_block)
        .enumerate()
        .for_each(|(bi, chunk)| {
            let base_bit = bi * GEN_BLOCK_BITS;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            // Each bit consumes one u64 draw = two 32-bit stream words.
            rng.set_word_pos(2 * base_bit as u128);
            for (wi, w) in chunk.iter_mut().enumerate() {
                let start = base_bit + wi * WORD_BITS;
                let k = (m - start).min(WORD_BITS);
                let mut v = 0u64;
                for b in 0..k {
                    let draw: u64 = rng.random();
                    v |= (((draw >> 11) < threshold) as u64) << b;
                }
                *w = v;
            }
        });
    Ok(out)
}
