//! Ordinal trees stored as balanced parentheses.
//!
//! Node `i` is the node with preorder rank `i` (1-based); its opening
//! parenthesis is the `i`-th one bit. Navigation reduces to searches on the
//! excess sequence `E(p) = #open - #close` over the first `p` parentheses,
//! accelerated by a min-tree over fixed-size blocks of the sequence and
//! byte lookup tables inside a block.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::bits::{BitVec, SpaceUsage};
use crate::error::{Error, Result};

/// Preorder rank of a node, starting at 1 for the root.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct NodeId(u32);

impl NodeId {
    pub const ROOT: NodeId = NodeId(1);

    /// Panics if `rank` is zero or does not fit in 32 bits.
    pub fn new(rank: usize) -> Self {
        assert!(
            rank >= 1 && rank <= u32::MAX as usize,
            "invalid preorder rank {rank}"
        );
        NodeId(rank as u32)
    }

    #[inline]
    pub fn rank(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

const BLOCK: usize = 256;

struct ByteTables {
    /// `#ones - #zeros` over the byte.
    total: [i8; 256],
    /// Minimum excess over prefixes of length 1..=8.
    min_prefix: [i8; 256],
    /// Minimum excess over prefixes of length 0..=7.
    min_prefix_excl: [i8; 256],
}

const fn byte_tables() -> ByteTables {
    let mut t = ByteTables {
        total: [0; 256],
        min_prefix: [0; 256],
        min_prefix_excl: [0; 256],
    };
    let mut v = 0;
    while v < 256 {
        let mut e: i8 = 0;
        let mut min_incl: i8 = i8::MAX;
        let mut min_excl: i8 = 0;
        let mut b = 0;
        while b < 8 {
            if b > 0 && e < min_excl {
                min_excl = e;
            }
            e += if (v >> b) & 1 == 1 { 1 } else { -1 };
            if e < min_incl {
                min_incl = e;
            }
            b += 1;
        }
        t.total[v] = e;
        t.min_prefix[v] = min_incl;
        t.min_prefix_excl[v] = min_excl;
        v += 1;
    }
    t
}

static TABLES: ByteTables = byte_tables();

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BPTree {
    bp: BitVec,
    n: usize,
    /// Segment tree over per-block minimum excess; leaves start at `leaves`.
    min_tree: Vec<i32>,
    leaves: usize,
}

impl BPTree {
    /// Builds from a parenthesis bit sequence (`true` = open).
    pub fn from_bits(bits: &[bool]) -> Result<Self> {
        if bits.is_empty() {
            return Err(Error::MalformedTree("empty parenthesis sequence".into()));
        }
        let mut e = 0i64;
        for (p, &b) in bits.iter().enumerate() {
            e += if b { 1 } else { -1 };
            if e < 0 {
                return Err(Error::MalformedTree(format!(
                    "excess drops below zero at position {}",
                    p + 1
                )));
            }
            if e == 0 && p + 1 != bits.len() {
                return Err(Error::MalformedTree(format!(
                    "sequence closes the root at position {} before its end",
                    p + 1
                )));
            }
        }
        if e != 0 {
            return Err(Error::MalformedTree(format!("{e} unclosed parentheses")));
        }
        Ok(Self::build_unchecked(BitVec::from_bits(
            bits.iter().copied(),
        )))
    }

    /// Parses `(` / `)` characters.
    pub fn parse(s: &str) -> Result<Self> {
        let bits = s
            .chars()
            .map(|c| match c {
                '(' => Ok(true),
                ')' => Ok(false),
                other => Err(Error::MalformedTree(format!(
                    "unexpected character {other:?}"
                ))),
            })
            .collect::<Result<Vec<bool>>>()?;
        Self::from_bits(&bits)
    }

    /// Builds from a preorder parent array: `parents[0]` is `None` and
    /// `parents[i] < i` otherwise (0-based).
    pub fn from_parents(parents: &[Option<usize>]) -> Result<Self> {
        if parents.is_empty() || parents[0].is_some() {
            return Err(Error::MalformedTree(
                "parent array must start with the root".into(),
            ));
        }
        let mut bits = Vec::with_capacity(parents.len() * 2);
        let mut stack: Vec<usize> = Vec::new();
        for (i, &p) in parents.iter().enumerate() {
            if i > 0 {
                let p = p.filter(|&p| p < i).ok_or_else(|| {
                    Error::MalformedTree(format!("node {i} lacks a preceding parent"))
                })?;
                while stack.last().is_some_and(|&top| top != p) {
                    stack.pop();
                    bits.push(false);
                }
                if stack.is_empty() {
                    return Err(Error::MalformedTree(format!(
                        "parent of node {i} is not on the current root path"
                    )));
                }
            }
            stack.push(i);
            bits.push(true);
        }
        bits.extend(std::iter::repeat_n(false, stack.len()));
        Ok(Self::build_unchecked(BitVec::from_bits(bits)))
    }

    fn build_unchecked(bp: BitVec) -> Self {
        let n = bp.len() / 2;
        let nblocks = bp.len().div_ceil(BLOCK);
        let leaves = nblocks.next_power_of_two();
        let mut min_tree = vec![i32::MAX; 2 * leaves];
        let mut e = 0i32;
        for p in 1..=bp.len() {
            e += if bp.bit(p) { 1 } else { -1 };
            let leaf = leaves + (p - 1) / BLOCK;
            min_tree[leaf] = min_tree[leaf].min(e);
        }
        for v in (1..leaves).rev() {
            min_tree[v] = min_tree[2 * v].min(min_tree[2 * v + 1]);
        }
        BPTree {
            bp,
            n,
            min_tree,
            leaves,
        }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn bits(&self) -> &BitVec {
        &self.bp
    }

    pub fn to_paren_string(&self) -> String {
        (1..=self.bp.len())
            .map(|p| if self.bp.bit(p) { '(' } else { ')' })
            .collect()
    }

    /// Preorder parent array (0-based), inverse of [`BPTree::from_parents`].
    pub fn to_parents(&self) -> Vec<Option<usize>> {
        let mut parents = Vec::with_capacity(self.n);
        let mut stack: Vec<usize> = Vec::new();
        for p in 1..=self.bp.len() {
            if self.bp.bit(p) {
                parents.push(stack.last().copied());
                stack.push(parents.len() - 1);
            } else {
                stack.pop();
            }
        }
        parents
    }

    pub fn check(&self, x: NodeId) -> Result<()> {
        if x.rank() > self.n {
            return Err(Error::OutOfBounds {
                index: x.rank(),
                len: self.n,
            });
        }
        Ok(())
    }

    #[inline]
    fn excess(&self, p: usize) -> i64 {
        2 * self.bp.rank(p) as i64 - p as i64
    }

    #[inline]
    fn open(&self, x: NodeId) -> usize {
        self.bp.select(x.rank())
    }

    /// Matching close of the open parenthesis at `p`.
    #[inline]
    fn close(&self, p: usize) -> usize {
        let target = self.excess(p) - 1;
        self.fwd_search(p, target)
            .expect("balanced sequence always closes")
    }

    /// Smallest `q > p` with `E(q) <= target`.
    fn fwd_search(&self, p: usize, target: i64) -> Option<usize> {
        let len = self.bp.len();
        let block_end = ((p / BLOCK + 1) * BLOCK).min(len);
        let mut e = self.excess(p);
        if let Some(q) = self.scan_fwd(p, block_end, &mut e, target) {
            return Some(q);
        }
        let b = self.first_block_at_most(p / BLOCK + 1, target)?;
        let start = b * BLOCK;
        let mut e = self.excess(start);
        self.scan_fwd(start, ((b + 1) * BLOCK).min(len), &mut e, target)
    }

    /// Scans positions `q+1..=end` for the first with `E <= target`, where
    /// `E(q) = *e`. On failure `*e` holds `E(end)`.
    #[inline]
    fn scan_fwd(&self, mut q: usize, end: usize, e: &mut i64, target: i64) -> Option<usize> {
        while q < end {
            if q.is_multiple_of(8) && q + 8 <= end {
                let byte = self.bp.byte_at(q) as usize;
                if *e + TABLES.min_prefix[byte] as i64 > target {
                    *e += TABLES.total[byte] as i64;
                    q += 8;
                    continue;
                }
            }
            q += 1;
            *e += if self.bp.bit(q) { 1 } else { -1 };
            if *e <= target {
                return Some(q);
            }
        }
        None
    }

    /// Largest `j < p` with `E(j) <= target`, treating `E(0) = 0`.
    fn bwd_search(&self, p: usize, target: i64) -> Option<usize> {
        let j = p - 1;
        let mut e = self.excess(j);
        if e <= target {
            return Some(j);
        }
        let block_start = (j.saturating_sub(1) / BLOCK) * BLOCK;
        if let Some(found) = self.scan_bwd(j, block_start, &mut e, target) {
            return Some(found);
        }
        let searched_from = j.saturating_sub(1) / BLOCK;
        match self.last_block_at_most(searched_from, target) {
            Some(b) => {
                let end = ((b + 1) * BLOCK).min(self.bp.len());
                let mut e = self.excess(end);
                if e <= target {
                    return Some(end);
                }
                self.scan_bwd(end, b * BLOCK, &mut e, target)
            }
            None => (target >= 0).then_some(0),
        }
    }

    /// Walks left from `j` (with `E(j) = *e > target`) down to position
    /// `start + 1`, returning the first position with `E <= target`.
    #[inline]
    fn scan_bwd(&self, mut j: usize, start: usize, e: &mut i64, target: i64) -> Option<usize> {
        while j > start + 1 {
            if j.is_multiple_of(8) && j > start + 8 {
                // byte covers bit indices j-8..j-1, i.e. positions j-7..=j
                let byte = self.bp.byte_at(j - 8) as usize;
                let before = *e - TABLES.total[byte] as i64;
                if before + TABLES.min_prefix_excl[byte] as i64 > target {
                    *e = before;
                    j -= 8;
                    continue;
                }
            }
            *e -= if self.bp.bit(j) { 1 } else { -1 };
            j -= 1;
            if *e <= target {
                return Some(j);
            }
        }
        None
    }

    fn first_block_at_most(&self, from: usize, target: i64) -> Option<usize> {
        let nblocks = self.bp.len().div_ceil(BLOCK);
        if from >= nblocks {
            return None;
        }
        self.descend_first(1, 0, self.leaves, from, target)
    }

    fn descend_first(
        &self,
        v: usize,
        lo: usize,
        hi: usize,
        from: usize,
        target: i64,
    ) -> Option<usize> {
        if hi <= from || (self.min_tree[v] as i64) > target {
            return None;
        }
        if hi - lo == 1 {
            return Some(lo);
        }
        let mid = (lo + hi) / 2;
        self.descend_first(2 * v, lo, mid, from, target)
            .or_else(|| self.descend_first(2 * v + 1, mid, hi, from, target))
    }

    /// Last block strictly before `before` whose minimum is `<= target`.
    fn last_block_at_most(&self, before: usize, target: i64) -> Option<usize> {
        if before == 0 {
            return None;
        }
        self.descend_last(1, 0, self.leaves, before, target)
    }

    fn descend_last(
        &self,
        v: usize,
        lo: usize,
        hi: usize,
        before: usize,
        target: i64,
    ) -> Option<usize> {
        if lo >= before || (self.min_tree[v] as i64) > target {
            return None;
        }
        if hi - lo == 1 {
            return Some(lo);
        }
        let mid = (lo + hi) / 2;
        self.descend_last(2 * v + 1, mid, hi, before, target)
            .or_else(|| self.descend_last(2 * v, lo, mid, before, target))
    }

    /// Minimum of `E` over positions `a..=b`.
    fn range_min(&self, a: usize, b: usize) -> i64 {
        let (ba, bb) = ((a - 1) / BLOCK, (b - 1) / BLOCK);
        if ba == bb {
            return self.scan_min(a, b);
        }
        let mut m = self
            .scan_min(a, (ba + 1) * BLOCK)
            .min(self.scan_min(bb * BLOCK + 1, b));
        let (mut lo, mut hi) = (ba + 1 + self.leaves, bb + self.leaves);
        while lo < hi {
            if lo & 1 == 1 {
                m = m.min(self.min_tree[lo] as i64);
                lo += 1;
            }
            if hi & 1 == 1 {
                hi -= 1;
                m = m.min(self.min_tree[hi] as i64);
            }
            lo /= 2;
            hi /= 2;
        }
        m
    }

    fn scan_min(&self, a: usize, b: usize) -> i64 {
        let mut q = a - 1;
        let mut e = self.excess(q);
        let mut m = i64::MAX;
        while q < b {
            if q.is_multiple_of(8) && q + 8 <= b {
                let byte = self.bp.byte_at(q) as usize;
                m = m.min(e + TABLES.min_prefix[byte] as i64);
                e += TABLES.total[byte] as i64;
                q += 8;
                continue;
            }
            q += 1;
            e += if self.bp.bit(q) { 1 } else { -1 };
            m = m.min(e);
        }
        m
    }

    pub fn depth(&self, x: NodeId) -> Result<usize> {
        self.check(x)?;
        Ok(self.depth_of(x))
    }

    #[inline]
    pub(crate) fn depth_of(&self, x: NodeId) -> usize {
        (self.excess(self.open(x)) - 1) as usize
    }

    pub fn subtree_size(&self, x: NodeId) -> Result<usize> {
        self.check(x)?;
        Ok(self.size_of(x))
    }

    #[inline]
    pub(crate) fn size_of(&self, x: NodeId) -> usize {
        let p = self.open(x);
        (self.close(p) - p).div_ceil(2)
    }

    /// Last preorder rank in the subtree of `x`.
    #[inline]
    pub(crate) fn subtree_end(&self, x: NodeId) -> usize {
        x.rank() + self.size_of(x) - 1
    }

    /// True when `x` is an ancestor of `y` (a node is its own ancestor).
    pub fn is_ancestor(&self, x: NodeId, y: NodeId) -> Result<bool> {
        self.check(x)?;
        self.check(y)?;
        Ok(self.is_ancestor_of(x, y))
    }

    #[inline]
    pub(crate) fn is_ancestor_of(&self, x: NodeId, y: NodeId) -> bool {
        x <= y && y.rank() <= self.subtree_end(x)
    }

    pub fn parent(&self, x: NodeId) -> Result<Option<NodeId>> {
        self.check(x)?;
        Ok(self.parent_of(x))
    }

    pub(crate) fn parent_of(&self, x: NodeId) -> Option<NodeId> {
        let p = self.open(x);
        let j = self.bwd_search(p, self.excess(p) - 2)?;
        Some(NodeId::new(self.bp.rank(j + 1)))
    }

    /// Rightmost leaf in the subtree of `x`, which is the last node of the
    /// subtree in preorder.
    pub fn rleaf(&self, x: NodeId) -> Result<NodeId> {
        self.check(x)?;
        Ok(NodeId::new(self.subtree_end(x)))
    }

    pub fn is_leaf(&self, x: NodeId) -> Result<bool> {
        self.check(x)?;
        let p = self.open(x);
        Ok(!self.bp.bit(p + 1))
    }

    pub fn lca(&self, x: NodeId, y: NodeId) -> Result<NodeId> {
        self.check(x)?;
        self.check(y)?;
        Ok(self.lca_of(x, y))
    }

    pub(crate) fn lca_of(&self, x: NodeId, y: NodeId) -> NodeId {
        let (x, y) = if x <= y { (x, y) } else { (y, x) };
        if self.is_ancestor_of(x, y) {
            return x;
        }
        let (px, py) = (self.open(x), self.open(y));
        let m = self.range_min(px, py);
        let j = self.bwd_search(px, m - 1).expect("common ancestor exists");
        NodeId::new(self.bp.rank(j + 1))
    }

    pub fn distance(&self, x: NodeId, y: NodeId) -> Result<usize> {
        self.check(x)?;
        self.check(y)?;
        Ok(self.distance_of(x, y))
    }

    #[inline]
    pub(crate) fn distance_of(&self, x: NodeId, y: NodeId) -> usize {
        let l = self.lca_of(x, y);
        self.depth_of(x) + self.depth_of(y) - 2 * self.depth_of(l)
    }

    /// Bits of the parenthesis sequence proper: exactly `2n`.
    pub fn topology_bits(&self) -> u64 {
        self.bp.raw_bits()
    }

    /// Bits of the navigation directories.
    pub fn directory_bits(&self) -> u64 {
        self.bp.directory_bits() + self.min_tree.len() as u64 * 32
    }
}

impl SpaceUsage for BPTree {
    fn size_in_bits(&self) -> u64 {
        self.topology_bits() + self.directory_bits()
    }
}
