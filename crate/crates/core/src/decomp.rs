//! Edge-disjoint cover of a tree by small connected pieces, and the macro
//! tree whose nodes are those pieces.
//!
//! Each piece has at most two nodes shared with other pieces: its root and
//! possibly one leaf (the boundary leaf). The non-root nodes of a piece are
//! therefore the union of at most two preorder intervals, which is how
//! membership is stored.
//!
//! Construction is a bottom-up greedy. Every node carries a pending
//! component rooted at itself that has not been emitted yet, of size below
//! `L`, holding at most one boundary leaf. A node either absorbs the pending
//! components of all its children and passes the result up, or emits them
//! in consecutive groups as pieces rooted at itself and passes only itself
//! up (now a boundary leaf of whatever piece eventually takes it).

use serde::{Deserialize, Serialize};

use crate::bits::SpaceUsage;
use crate::bp::{BPTree, NodeId};
use crate::error::{Error, Result};

/// A piece of the decomposition. Node ids are 1-based preorder ranks of the
/// decomposed tree.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Piece {
    pub root: u32,
    pub boundary_leaf: Option<u32>,
    /// First interval of non-root members (inclusive bounds).
    pub first: (u32, u32),
    pub second: Option<(u32, u32)>,
}

impl Piece {
    pub fn intervals(&self) -> impl Iterator<Item = (u32, u32)> {
        std::iter::once(self.first).chain(self.second)
    }

    /// Number of non-root members.
    pub fn member_count(&self) -> usize {
        self.intervals().map(|(a, b)| (b - a + 1) as usize).sum()
    }

    /// Total node count including the root.
    pub fn size(&self) -> usize {
        self.member_count() + 1
    }

    pub fn members(&self) -> impl Iterator<Item = u32> {
        self.intervals().flat_map(|(a, b)| a..=b)
    }

    pub fn contains_member(&self, u: u32) -> bool {
        self.intervals().any(|(a, b)| a <= u && u <= b)
    }

    /// 1-based position of member `u` within the piece's preorder, where the
    /// piece root is position 1.
    pub fn local_rank(&self, u: u32) -> Option<usize> {
        let (a, b) = self.first;
        if a <= u && u <= b {
            return Some((u - a) as usize + 2);
        }
        let (c, d) = self.second?;
        (c <= u && u <= d).then(|| (b - a + 1) as usize + (u - c) as usize + 2)
    }

    /// Inverse of [`Piece::local_rank`].
    pub fn node_at(&self, local: usize) -> u32 {
        if local == 1 {
            return self.root;
        }
        let k = (local - 2) as u32;
        let (a, b) = self.first;
        if k <= b - a {
            a + k
        } else {
            let (c, _) = self.second.expect("local rank within piece");
            c + k - (b - a + 1)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Decomposition {
    n: u32,
    max_size: u32,
    /// Sorted by first member, which is a preorder of the macro tree.
    pieces: Vec<Piece>,
    /// Sorted interval starts and the piece owning each interval.
    starts: Vec<u32>,
    owners: Vec<u32>,
}

/// Decomposes the tree given as a preorder parent array (0-based,
/// `parents[0] == None`, `parents[i] < i`).
pub fn decompose_parents(parents: &[Option<usize>], max_size: usize) -> Result<Decomposition> {
    let n = parents.len();
    if n < 2 {
        return Err(Error::DegenerateTree);
    }
    if max_size < 2 {
        return Err(Error::ParameterInfeasible(format!(
            "piece size bound must be at least 2, got {max_size}"
        )));
    }
    let mut child_start = vec![0usize; n + 1];
    for p in parents.iter().skip(1) {
        child_start[p.expect("non-root has a parent") + 1] += 1;
    }
    for v in 0..n {
        child_start[v + 1] += child_start[v];
    }
    let mut fill = child_start.clone();
    let mut children = vec![0usize; n - 1];
    for (i, p) in parents.iter().enumerate().skip(1) {
        let p = p.unwrap();
        children[fill[p]] = i;
        fill[p] += 1;
    }
    let mut end: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        let p = parents[i].unwrap();
        end[p] = end[p].max(end[i]);
    }

    let mut pending = vec![0usize; n];
    let mut dirty: Vec<Option<usize>> = vec![None; n];
    let mut pieces = Vec::new();
    let emit = |pieces: &mut Vec<Piece>, root: usize, group: &[usize], leaf: Option<usize>| {
        let (a, z) = (group[0], end[*group.last().unwrap()]);
        let (first, second) = match leaf {
            None => ((a, z), None),
            Some(b) => ((a, b), (end[b] < z).then(|| (end[b] + 1, z))),
        };
        let one = |i: usize| i as u32 + 1;
        pieces.push(Piece {
            root: one(root),
            boundary_leaf: leaf.map(one),
            first: (one(first.0), one(first.1)),
            second: second.map(|(c, d)| (one(c), one(d))),
        });
    };

    for v in (0..n).rev() {
        let kids = &children[child_start[v]..child_start[v + 1]];
        if kids.is_empty() {
            pending[v] = 1;
            continue;
        }
        let total = 1 + kids.iter().map(|&c| pending[c]).sum::<usize>();
        let mut leaves = kids.iter().filter_map(|&c| dirty[c]);
        let leaf = leaves.next();
        let single_leaf = leaves.next().is_none();
        if v != 0 && total < max_size && single_leaf {
            pending[v] = total;
            dirty[v] = leaf;
            continue;
        }
        if v == 0 && total <= max_size && single_leaf {
            emit(&mut pieces, 0, kids, leaf);
            continue;
        }
        let mut group_start = 0;
        let mut size = 1;
        let mut group_leaf: Option<usize> = None;
        for (k, &c) in kids.iter().enumerate() {
            if size + pending[c] > max_size || (group_leaf.is_some() && dirty[c].is_some()) {
                emit(&mut pieces, v, &kids[group_start..k], group_leaf);
                group_start = k;
                size = 1;
                group_leaf = None;
            }
            size += pending[c];
            group_leaf = group_leaf.or(dirty[c]);
        }
        emit(&mut pieces, v, &kids[group_start..], group_leaf);
        pending[v] = 1;
        dirty[v] = Some(v);
    }

    pieces.sort_unstable_by_key(|p| p.first.0);
    let mut index: Vec<(u32, u32)> = pieces
        .iter()
        .enumerate()
        .flat_map(|(i, p)| p.intervals().map(move |(a, _)| (a, i as u32)))
        .collect();
    index.sort_unstable();
    Ok(Decomposition {
        n: n as u32,
        max_size: max_size as u32,
        pieces,
        starts: index.iter().map(|&(s, _)| s).collect(),
        owners: index.iter().map(|&(_, p)| p).collect(),
    })
}

/// Decomposes a succinct tree into pieces of at most `max_size` nodes.
pub fn decompose(t: &BPTree, max_size: usize) -> Result<Decomposition> {
    if t.len() < 2 {
        return Err(Error::DegenerateTree);
    }
    decompose_parents(&t.to_parents(), max_size)
}

impl Decomposition {
    pub fn node_count(&self) -> usize {
        self.n as usize
    }

    pub fn max_size(&self) -> usize {
        self.max_size as usize
    }

    pub fn pieces(&self) -> &[Piece] {
        &self.pieces
    }

    pub fn piece(&self, p: usize) -> &Piece {
        &self.pieces[p]
    }

    /// Index of the unique piece holding `u` as a non-root node.
    pub fn map_node(&self, u: usize) -> Result<usize> {
        if u == 0 || u > self.n as usize {
            return Err(Error::OutOfBounds {
                index: u,
                len: self.n as usize,
            });
        }
        if u == 1 {
            return Err(Error::NoOwningPiece(u));
        }
        Ok(self.owner_of(u as u32))
    }

    #[inline]
    pub(crate) fn owner_of(&self, u: u32) -> usize {
        let i = self.starts.partition_point(|&s| s <= u) - 1;
        self.owners[i] as usize
    }

    /// Non-root nodes of piece `p`, in preorder.
    pub fn piece_members(&self, p: usize) -> Vec<u32> {
        self.pieces[p].members().collect()
    }

    /// Pieces rooted at the tree root.
    pub fn root_piece_count(&self) -> usize {
        self.pieces.iter().filter(|p| p.root == 1).count()
    }

    pub fn macro_tree(&self) -> MacroTree {
        MacroTree::new(self)
    }
}

impl SpaceUsage for Decomposition {
    fn size_in_bits(&self) -> u64 {
        // root, leaf, and two intervals per piece
        self.pieces.len() as u64 * 6 * 32 + self.starts.size_in_bits() + self.owners.size_in_bits()
    }
}

/// The tree of pieces. Macro node ids are 0-based preorder ranks; when the
/// tree root is shared by several pieces, id 0 is the added singleton piece
/// holding just the root and piece `p` has id `p + 1`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MacroTree {
    tree: BPTree,
    singleton: bool,
}

impl MacroTree {
    fn new(d: &Decomposition) -> Self {
        let singleton = d.root_piece_count() > 1;
        let offset = singleton as usize;
        let mut parents: Vec<Option<usize>> = Vec::with_capacity(d.pieces.len() + offset);
        if singleton {
            parents.push(None);
        }
        for piece in &d.pieces {
            let parent = if piece.root == 1 {
                singleton.then_some(0)
            } else {
                Some(d.owner_of(piece.root) + offset)
            };
            parents.push(parent);
        }
        let tree = BPTree::from_parents(&parents)
            .expect("pieces sorted by first member form a macro preorder");
        MacroTree { tree, singleton }
    }

    pub fn len(&self) -> usize {
        self.tree.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tree.is_empty()
    }

    pub fn has_singleton_root(&self) -> bool {
        self.singleton
    }

    /// Piece index behind macro node `v`, or `None` for the singleton root.
    #[inline]
    pub fn piece_of(&self, v: usize) -> Option<usize> {
        if self.singleton {
            v.checked_sub(1)
        } else {
            Some(v)
        }
    }

    #[inline]
    pub fn node_of_piece(&self, p: usize) -> usize {
        p + self.singleton as usize
    }

    #[inline]
    fn id(v: usize) -> NodeId {
        NodeId::new(v + 1)
    }

    pub fn parent(&self, v: usize) -> Option<usize> {
        self.tree.parent_of(Self::id(v)).map(|p| p.rank() - 1)
    }

    pub fn depth(&self, v: usize) -> usize {
        self.tree.depth_of(Self::id(v))
    }

    pub fn lca(&self, u: usize, v: usize) -> usize {
        self.tree.lca_of(Self::id(u), Self::id(v)).rank() - 1
    }

    /// `u` is an ancestor of `v` (inclusive).
    pub fn is_ancestor(&self, u: usize, v: usize) -> bool {
        self.tree.is_ancestor_of(Self::id(u), Self::id(v))
    }

    /// Parent array (0-based) in macro preorder.
    pub fn parents(&self) -> Vec<Option<usize>> {
        self.tree.to_parents()
    }
}

impl SpaceUsage for MacroTree {
    fn size_in_bits(&self) -> u64 {
        self.tree.size_in_bits() + 1
    }
}
