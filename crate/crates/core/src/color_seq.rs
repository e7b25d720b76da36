//! The preorder color string with per-color rank/select and empirical entropy.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::bits::{bit_width, IntVec, SpaceUsage};
use crate::error::{Error, Result};

/// Colors are integers in `1..=sigma`.
pub type Color = u32;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ColorSeq {
    /// `color - 1`, packed.
    symbols: IntVec,
    sigma: u32,
    /// Occurrences of color `a` are `positions[offsets[a-1]..offsets[a]]`.
    offsets: Vec<u32>,
    positions: Vec<u32>,
}

impl ColorSeq {
    pub fn new(colors: &[Color], sigma: u32) -> Result<Self> {
        if sigma == 0 {
            return Err(Error::ParameterInfeasible(
                "alphabet must be nonempty".into(),
            ));
        }
        let mut counts = vec![0u32; sigma as usize + 1];
        for &c in colors {
            if c == 0 || c > sigma {
                return Err(Error::InvalidColor { color: c, sigma });
            }
            counts[c as usize] += 1;
        }
        let mut offsets = vec![0u32; sigma as usize + 1];
        for a in 1..=sigma as usize {
            offsets[a] = offsets[a - 1] + counts[a];
        }
        let mut fill: Vec<u32> = offsets[..sigma as usize].to_vec();
        let mut positions = vec![0u32; colors.len()];
        for (i, &c) in colors.iter().enumerate() {
            let slot = &mut fill[c as usize - 1];
            positions[*slot as usize] = i as u32 + 1;
            *slot += 1;
        }
        let raw: Vec<u64> = colors.iter().map(|&c| (c - 1) as u64).collect();
        Ok(ColorSeq {
            symbols: IntVec::from_values(&raw, bit_width(sigma as u64 - 1)),
            sigma,
            offsets,
            positions,
        })
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn sigma(&self) -> u32 {
        self.sigma
    }

    pub fn check_color(&self, alpha: Color) -> Result<()> {
        if alpha == 0 || alpha > self.sigma {
            return Err(Error::InvalidColor {
                color: alpha,
                sigma: self.sigma,
            });
        }
        Ok(())
    }

    fn check_pos(&self, i: usize) -> Result<()> {
        if i == 0 || i > self.len() {
            return Err(Error::OutOfBounds {
                index: i,
                len: self.len(),
            });
        }
        Ok(())
    }

    pub fn access(&self, i: usize) -> Result<Color> {
        self.check_pos(i)?;
        Ok(self.at(i))
    }

    #[inline]
    pub(crate) fn at(&self, i: usize) -> Color {
        self.symbols.get(i - 1) as Color + 1
    }

    pub fn to_vec(&self) -> Vec<Color> {
        (1..=self.len()).map(|i| self.at(i)).collect()
    }

    #[inline]
    pub(crate) fn occurrences(&self, alpha: Color) -> &[u32] {
        let a = alpha as usize;
        &self.positions[self.offsets[a - 1] as usize..self.offsets[a] as usize]
    }

    pub fn count(&self, alpha: Color) -> Result<usize> {
        self.check_color(alpha)?;
        Ok(self.occurrences(alpha).len())
    }

    /// Occurrences of `alpha` among positions `1..=i`.
    pub fn rank_color(&self, alpha: Color, i: usize) -> Result<usize> {
        self.check_color(alpha)?;
        if i > self.len() {
            return Err(Error::OutOfBounds {
                index: i,
                len: self.len(),
            });
        }
        Ok(self.rank_of(alpha, i))
    }

    #[inline]
    pub(crate) fn rank_of(&self, alpha: Color, i: usize) -> usize {
        self.occurrences(alpha)
            .partition_point(|&p| p as usize <= i)
    }

    /// Position of the `k`-th occurrence of `alpha`.
    pub fn select_color(&self, alpha: Color, k: usize) -> Result<usize> {
        self.check_color(alpha)?;
        let occ = self.occurrences(alpha);
        if k == 0 || k > occ.len() {
            return Err(Error::NoSuchOccurrence {
                k,
                available: occ.len(),
            });
        }
        Ok(occ[k - 1] as usize)
    }

    #[inline]
    pub(crate) fn select_of(&self, alpha: Color, k: usize) -> usize {
        self.occurrences(alpha)[k - 1] as usize
    }

    /// Largest position `p <= i` holding `alpha`.
    pub fn pred_alpha(&self, alpha: Color, i: usize) -> Result<Option<usize>> {
        self.check_color(alpha)?;
        self.check_pos(i)?;
        Ok(self.pred_of(alpha, i))
    }

    #[inline]
    pub(crate) fn pred_of(&self, alpha: Color, i: usize) -> Option<usize> {
        match self.rank_of(alpha, i) {
            0 => None,
            r => Some(self.select_of(alpha, r)),
        }
    }

    /// Smallest position `p >= i` holding `alpha`.
    pub fn succ_alpha(&self, alpha: Color, i: usize) -> Result<Option<usize>> {
        self.check_color(alpha)?;
        self.check_pos(i)?;
        Ok(self.succ_of(alpha, i))
    }

    #[inline]
    pub(crate) fn succ_of(&self, alpha: Color, i: usize) -> Option<usize> {
        let r = self.rank_of(alpha, i - 1);
        self.occurrences(alpha).get(r).map(|&p| p as usize)
    }

    /// Empirical zeroth-order entropy in bits per symbol.
    pub fn entropy_h0(&self) -> f64 {
        entropy_h0(&self.to_vec())
    }

    /// Empirical `k`-th order entropy in bits per symbol.
    pub fn entropy_hk(&self, k: usize) -> f64 {
        entropy_hk(&self.to_vec(), k)
    }

    pub fn raw_bits(&self) -> u64 {
        self.symbols.size_in_bits()
    }

    pub fn directory_bits(&self) -> u64 {
        self.offsets.size_in_bits() + self.positions.size_in_bits()
    }
}

/// `n * H0` of a frequency table, in bits.
fn weighted_entropy<I: IntoIterator<Item = usize>>(counts: I) -> f64 {
    let counts: Vec<usize> = counts.into_iter().filter(|&c| c > 0).collect();
    let total: usize = counts.iter().sum();
    if total == 0 {
        return 0.0;
    }
    let t = total as f64;
    counts
        .iter()
        .map(|&c| {
            let c = c as f64;
            c * (t / c).log2()
        })
        .sum()
}

pub fn entropy_h0(seq: &[Color]) -> f64 {
    if seq.is_empty() {
        return 0.0;
    }
    let mut counts: BTreeMap<Color, usize> = BTreeMap::new();
    for &c in seq {
        *counts.entry(c).or_default() += 1;
    }
    weighted_entropy(counts.into_values()) / seq.len() as f64
}

/// Contexts are the `k` preceding symbols; the first `k` symbols have no
/// context and contribute nothing.
pub fn entropy_hk(seq: &[Color], k: usize) -> f64 {
    if k == 0 {
        return entropy_h0(seq);
    }
    if seq.len() <= k {
        return 0.0;
    }
    let mut contexts: BTreeMap<&[Color], BTreeMap<Color, usize>> = BTreeMap::new();
    for i in k..seq.len() {
        *contexts
            .entry(&seq[i - k..i])
            .or_default()
            .entry(seq[i])
            .or_default() += 1;
    }
    let bits: f64 = contexts
        .into_values()
        .map(|followers| weighted_entropy(followers.into_values()))
        .sum();
    bits / seq.len() as f64
}
