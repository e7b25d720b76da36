//! Plain bit vectors with constant-time rank and sampled select, plus a
//! fixed-width packed integer array.
//!
//! Positions and ranks are 1-based at the public surface: `rank1(i)` counts
//! the ones among the first `i` bits (so `rank1(0) == 0`) and `select1(k)`
//! returns the 1-based position of the `k`-th one.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const WORD: usize = 64;
/// Words per rank block.
const BLOCK_WORDS: usize = 8;
const BLOCK_BITS: usize = WORD * BLOCK_WORDS;
/// One select sample is kept for every `SELECT_SAMPLE` ones.
const SELECT_SAMPLE: usize = 512;

/// Anything whose memory footprint can be reported in bits.
pub trait SpaceUsage {
    fn size_in_bits(&self) -> u64;
}

impl SpaceUsage for Vec<u32> {
    fn size_in_bits(&self) -> u64 {
        self.len() as u64 * 32
    }
}

impl SpaceUsage for Vec<u64> {
    fn size_in_bits(&self) -> u64 {
        self.len() as u64 * 64
    }
}

/// Number of bits needed to write `v` in binary (at least 1).
pub fn bit_width(v: u64) -> u32 {
    (64 - v.leading_zeros()).max(1)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BitVec {
    words: Vec<u64>,
    len: usize,
    /// Ones strictly before each block; one extra trailing entry holds the total.
    block_ranks: Vec<u64>,
    /// Block containing the `(s * SELECT_SAMPLE + 1)`-th one.
    select_samples: Vec<u32>,
}

impl BitVec {
    pub fn from_bits<I: IntoIterator<Item = bool>>(bits: I) -> Self {
        let mut words = Vec::new();
        let mut len = 0usize;
        for b in bits {
            if len.is_multiple_of(WORD) {
                words.push(0u64);
            }
            if b {
                words[len / WORD] |= 1u64 << (len % WORD);
            }
            len += 1;
        }
        Self::from_words(words, len)
    }

    /// Builds from raw little-endian words; bits past `len` are ignored.
    pub fn from_words(mut words: Vec<u64>, len: usize) -> Self {
        words.resize(len.div_ceil(WORD), 0);
        if !len.is_multiple_of(WORD) {
            let last = words.len() - 1;
            words[last] &= (1u64 << (len % WORD)) - 1;
        }
        let nblocks = words.len().div_ceil(BLOCK_WORDS);
        let mut block_ranks = Vec::with_capacity(nblocks + 1);
        let mut select_samples = Vec::new();
        let mut acc = 0u64;
        for b in 0..nblocks {
            block_ranks.push(acc);
            let lo = b * BLOCK_WORDS;
            let hi = (lo + BLOCK_WORDS).min(words.len());
            let ones: u64 = words[lo..hi].iter().map(|w| w.count_ones() as u64).sum();
            // every sample whose target one falls in this block
            while ((select_samples.len() * SELECT_SAMPLE) as u64) < acc + ones {
                select_samples.push(b as u32);
            }
            acc += ones;
        }
        block_ranks.push(acc);
        BitVec {
            words,
            len,
            block_ranks,
            select_samples,
        }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn count_ones(&self) -> usize {
        *self.block_ranks.last().unwrap_or(&0) as usize
    }

    /// Bit at 1-based position `i`.
    pub fn get(&self, i: usize) -> Result<bool> {
        if i == 0 || i > self.len {
            return Err(Error::OutOfBounds {
                index: i,
                len: self.len,
            });
        }
        Ok(self.bit(i))
    }

    #[inline]
    pub(crate) fn bit(&self, i: usize) -> bool {
        let b = i - 1;
        (self.words[b / WORD] >> (b % WORD)) & 1 == 1
    }

    /// Eight bits starting at 0-based bit offset `start` (must be byte aligned).
    #[inline]
    pub(crate) fn byte_at(&self, start: usize) -> u8 {
        (self.words[start / WORD] >> (start % WORD)) as u8
    }

    pub fn rank1(&self, i: usize) -> Result<usize> {
        if i > self.len {
            return Err(Error::OutOfBounds {
                index: i,
                len: self.len,
            });
        }
        Ok(self.rank(i))
    }

    pub fn rank0(&self, i: usize) -> Result<usize> {
        Ok(i - self.rank1(i)?)
    }

    #[inline]
    pub(crate) fn rank(&self, i: usize) -> usize {
        let block = i / BLOCK_BITS;
        let mut r = self.block_ranks[block] as usize;
        let full = i / WORD;
        for w in &self.words[block * BLOCK_WORDS..full] {
            r += w.count_ones() as usize;
        }
        if !i.is_multiple_of(WORD) {
            r += (self.words[full] & ((1u64 << (i % WORD)) - 1)).count_ones() as usize;
        }
        r
    }

    pub fn select1(&self, k: usize) -> Result<usize> {
        let ones = self.count_ones();
        if k == 0 || k > ones {
            return Err(Error::NoSuchOccurrence { k, available: ones });
        }
        Ok(self.select(k))
    }

    #[inline]
    pub(crate) fn select(&self, k: usize) -> usize {
        let target = k as u64;
        let mut block = self.select_samples[(k - 1) / SELECT_SAMPLE] as usize;
        while self.block_ranks[block + 1] < target {
            block += 1;
        }
        let mut remaining = target - self.block_ranks[block];
        let mut w = block * BLOCK_WORDS;
        loop {
            let c = self.words[w].count_ones() as u64;
            if c >= remaining {
                break;
            }
            remaining -= c;
            w += 1;
        }
        let mut word = self.words[w];
        for _ in 1..remaining {
            word &= word - 1;
        }
        w * WORD + word.trailing_zeros() as usize + 1
    }

    /// Bits of the raw sequence (excluding directories).
    pub fn raw_bits(&self) -> u64 {
        self.len as u64
    }

    /// Bits of the rank/select directories.
    pub fn directory_bits(&self) -> u64 {
        // word padding of the last word belongs to the directory overhead
        (self.words.len() * WORD - self.len) as u64
            + self.block_ranks.size_in_bits()
            + self.select_samples.size_in_bits()
    }
}

impl SpaceUsage for BitVec {
    fn size_in_bits(&self) -> u64 {
        self.raw_bits() + self.directory_bits()
    }
}

/// Fixed-width packed array of unsigned integers.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntVec {
    words: Vec<u64>,
    width: u32,
    len: usize,
}

impl IntVec {
    pub fn from_values(values: &[u64], width: u32) -> Self {
        assert!((1..=64).contains(&width));
        let total = values.len() * width as usize;
        let mut words = vec![0u64; total.div_ceil(WORD)];
        for (i, &v) in values.iter().enumerate() {
            debug_assert!(width == 64 || v < (1u64 << width));
            let bit = i * width as usize;
            let (w, off) = (bit / WORD, bit % WORD);
            words[w] |= v << off;
            if off + width as usize > WORD {
                words[w + 1] |= v >> (WORD - off);
            }
        }
        IntVec {
            words,
            width,
            len: values.len(),
        }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    /// Value at 0-based index `i`.
    #[inline]
    pub fn get(&self, i: usize) -> u64 {
        let width = self.width as usize;
        let bit = i * width;
        let (w, off) = (bit / WORD, bit % WORD);
        let mask = if width == 64 {
            u64::MAX
        } else {
            (1u64 << width) - 1
        };
        let mut v = self.words[w] >> off;
        if off + width > WORD {
            v |= self.words[w + 1] << (WORD - off);
        }
        v & mask
    }
}

impl SpaceUsage for IntVec {
    fn size_in_bits(&self) -> u64 {
        (self.len * self.width as usize) as u64
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn small() -> BitVec {
        BitVec::from_bits([true, false, true, true])
    }

    #[test]
    fn empty() {
        let bv = BitVec::from_bits(std::iter::empty());
        assert_eq!(bv.len(), 0);
        assert_eq!(bv.rank1(0), Ok(0));
        assert!(bv.select1(1).is_err());
    }

    #[test]
    fn rank_small() {
        let bv = small();
        assert_eq!(bv.len(), 4);
        assert_eq!(bv.rank1(0), Ok(0));
        assert_eq!(bv.rank1(3), Ok(2));
        assert_eq!(bv.rank1(4), Ok(3));
        assert_eq!(bv.rank0(4), Ok(1));
        assert!(matches!(bv.rank1(5), Err(Error::OutOfBounds { .. })));
    }

    #[test]
    fn select_small() {
        let bv = small();
        assert_eq!(bv.select1(1), Ok(1));
        assert_eq!(bv.select1(2), Ok(3));
        assert_eq!(bv.select1(3), Ok(4));
        assert!(matches!(
            bv.select1(4),
            Err(Error::NoSuchOccurrence { k: 4, available: 3 })
        ));
        assert!(bv.select1(0).is_err());
    }

    #[test]
    fn random_against_scan() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for density in [0.01, 0.5, 0.97] {
            let bits: Vec<bool> = (0..100_000).map(|_| rng.random_bool(density)).collect();
            let bv = BitVec::from_bits(bits.iter().copied());
            let mut prefix = vec![0usize; bits.len() + 1];
            for (i, &b) in bits.iter().enumerate() {
                prefix[i + 1] = prefix[i] + b as usize;
            }
            for _ in 0..1000 {
                let i = rng.random_range(0..=bits.len());
                assert_eq!(bv.rank1(i).unwrap(), prefix[i]);
            }
            let ones: Vec<usize> = (1..=bits.len()).filter(|&p| bits[p - 1]).collect();
            for (k, &p) in ones.iter().enumerate() {
                assert_eq!(bv.select1(k + 1).unwrap(), p);
                assert_eq!(bv.rank1(p).unwrap(), k + 1);
            }
        }
    }

    #[test]
    fn intvec_roundtrip() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for width in [1u32, 3, 7, 13, 31, 64] {
            let max = if width == 64 {
                u64::MAX
            } else {
                (1u64 << width) - 1
            };
            let vals: Vec<u64> = (0..1000).map(|_| rng.random_range(0..=max)).collect();
            let iv = IntVec::from_values(&vals, width);
            for (i, &v) in vals.iter().enumerate() {
                assert_eq!(iv.get(i), v);
            }
            assert_eq!(iv.size_in_bits(), 1000 * width as u64);
        }
    }

    mod props {
        use super::super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn rank_select_inverse(bits in proptest::collection::vec(any::<bool>(), 0..3000)) {
                let bv = BitVec::from_bits(bits.iter().copied());
                let total = bv.rank1(bits.len()).unwrap();
                prop_assert_eq!(total, bits.iter().filter(|&&b| b).count());
                for k in 1..=total {
                    prop_assert_eq!(bv.rank1(bv.select1(k).unwrap()).unwrap(), k);
                }
                for i in 0..=bits.len() {
                    prop_assert_eq!(bv.rank0(i).unwrap() + bv.rank1(i).unwrap(), i);
                }
            }
        }
    }
}
