//! Range minimum over an array that keeps only per-block summaries.
//!
//! The array is cut into blocks of `L` entries. The structure stores the
//! minimum of every block, the offset of a minimal entry inside the block,
//! and a sparse table over the block minima. Queries must start right after
//! a block boundary and end on one; the partial blocks around an arbitrary
//! range are the caller's business.

use serde::{Deserialize, Serialize};

use crate::bits::SpaceUsage;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SampledRmq {
    block: u32,
    len: u32,
    block_min: Vec<u32>,
    /// 1-based offset of a minimum inside each block.
    offsets: Vec<u32>,
    core: SparseTable,
}

impl SampledRmq {
    pub fn new(values: &[u32], block: usize) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::ParameterInfeasible("empty array".into()));
        }
        if block == 0 {
            return Err(Error::ParameterInfeasible(
                "block length must be positive".into(),
            ));
        }
        let (block_min, offsets): (Vec<u32>, Vec<u32>) = values
            .chunks(block)
            .map(|chunk| {
                let (off, &min) = chunk
                    .iter()
                    .enumerate()
                    .min_by_key(|&(i, &v)| (v, i))
                    .unwrap();
                (min, off as u32 + 1)
            })
            .unzip();
        let core = SparseTable::new(&block_min);
        Ok(SampledRmq {
            block: block as u32,
            len: values.len() as u32,
            block_min,
            offsets,
            core,
        })
    }

    pub fn block_len(&self) -> usize {
        self.block as usize
    }

    pub fn len(&self) -> usize {
        self.len as usize
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn block_minima(&self) -> &[u32] {
        &self.block_min
    }

    pub fn block_offsets(&self) -> &[u32] {
        &self.offsets
    }

    /// 1-based index of a minimum of `A[i..=j]`. `i - 1` and `j` must be
    /// multiples of the block length.
    pub fn rmq_aligned(&self, i: usize, j: usize) -> Result<usize> {
        let l = self.block as usize;
        if i == 0 || i > j || j > self.len as usize {
            return Err(Error::OutOfBounds {
                index: j,
                len: self.len as usize,
            });
        }
        if !(i - 1).is_multiple_of(l) || !j.is_multiple_of(l) {
            return Err(Error::AlignmentViolation { i, j, block: l });
        }
        let b = self.core.argmin(&self.block_min, (i - 1) / l, j / l - 1);
        Ok(b * l + self.offsets[b] as usize)
    }
}

impl SpaceUsage for SampledRmq {
    fn size_in_bits(&self) -> u64 {
        64 + self.block_min.size_in_bits() + self.offsets.size_in_bits() + self.core.size_in_bits()
    }
}

/// Sparse table of argmin block indices; level `k` covers windows of `2^k`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
struct SparseTable {
    levels: Vec<Vec<u32>>,
}

impl SparseTable {
    fn new(values: &[u32]) -> Self {
        let n = values.len();
        let better = |a: u32, b: u32| {
            if values[b as usize] < values[a as usize] {
                b
            } else {
                a
            }
        };
        let mut levels = vec![(0..n as u32).collect::<Vec<u32>>()];
        let mut width = 1;
        while 2 * width <= n {
            let prev = levels.last().unwrap();
            let next = (0..=n - 2 * width)
                .map(|i| better(prev[i], prev[i + width]))
                .collect();
            levels.push(next);
            width *= 2;
        }
        SparseTable { levels }
    }

    /// Block minima are passed in because the table stores indices only.
    fn argmin(&self, values: &[u32], lo: usize, hi: usize) -> usize {
        let k = (hi - lo + 1).ilog2() as usize;
        let a = self.levels[k][lo];
        let b = self.levels[k][hi + 1 - (1 << k)];
        if values[b as usize] < values[a as usize] {
            b as usize
        } else {
            a as usize
        }
    }
}

impl SpaceUsage for SparseTable {
    fn size_in_bits(&self) -> u64 {
        self.levels.iter().map(|l| l.len() as u64 * 32).sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const A: [u32; 6] = [4, 2, 7, 1, 3, 9];

    #[test]
    fn summaries() {
        let r = SampledRmq::new(&A, 2).unwrap();
        assert_eq!(r.block_minima(), &[2, 1, 3]);
        assert_eq!(r.block_offsets(), &[2, 2, 1]);

        let one = SampledRmq::new(&A, 10).unwrap();
        assert_eq!(one.block_minima(), &[1]);

        let unit = SampledRmq::new(&A, 1).unwrap();
        assert_eq!(unit.block_minima(), &A);
        assert!(unit.block_offsets().iter().all(|&b| b == 1));
    }

    #[test]
    fn aligned_queries() {
        let r = SampledRmq::new(&A, 2).unwrap();
        assert_eq!(r.rmq_aligned(1, 6), Ok(4));
        assert_eq!(r.rmq_aligned(3, 4), Ok(4));
        assert_eq!(r.rmq_aligned(5, 6), Ok(5));
        assert_eq!(
            r.rmq_aligned(1, 3),
            Err(Error::AlignmentViolation {
                i: 1,
                j: 3,
                block: 2
            })
        );
        assert!(matches!(
            r.rmq_aligned(2, 4),
            Err(Error::AlignmentViolation { .. })
        ));
        assert!(r.rmq_aligned(1, 8).is_err());
    }

    #[test]
    fn empty_rejected() {
        assert!(SampledRmq::new(&[], 2).is_err());
    }
}
