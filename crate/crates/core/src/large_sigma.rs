//! Nearest colored node for large alphabets.
//!
//! Colors with fewer than `L` occurrences are answered by scanning their
//! occurrences. For a frequent color `alpha`, the query node `x` (not an
//! `alpha`-node) is answered by the closest of
//!
//! 1. the nearest `alpha`-descendant of `x`,
//! 2. the nearest `alpha`-descendant of `y`,
//! 3. the nearest `alpha`-node of `y` that is not its descendant,
//!
//! where `z` is the lowest ancestor of `x` with an `alpha`-descendant outside
//! the subtree of `x`, and `y` is the topmost node of the subtree of `z` in
//! the LCA closure `Y_alpha` of the `alpha`-nodes.
//!
//! Nearest descendants come from a sampled range-minimum structure over the
//! depths of the `alpha`-nodes in preorder. Nearest non-descendants come
//! from a decomposition of the compressed tree `T_alpha` (the tree induced
//! on `Y_alpha`) into pieces of at most `L` nodes. Each macro node carries
//! three weights, and the macro node at minimum weighted distance among its
//! descendants and among its non-descendants is precomputed.

use std::ops::Add;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bits::SpaceUsage;
use crate::bp::{BPTree, NodeId};
use crate::color_seq::{Color, ColorSeq};
use crate::decomp::{decompose_parents, Decomposition, MacroTree};
use crate::error::{Error, Result};
use crate::sampled_rmq::SampledRmq;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct LargeParams {
    /// Frequency threshold `L`, also the piece size and the RMQ sampling rate.
    pub threshold: usize,
}

impl LargeParams {
    /// `L = max(2, ceil(sqrt(lg n)))`.
    pub fn defaults(n: usize) -> Self {
        let lg = (n.max(2) as f64).log2();
        LargeParams {
            threshold: (lg.sqrt().ceil() as usize).max(2),
        }
    }
}

/// Path cost with a saturating infinity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Weight(u64);

impl Weight {
    pub const INFINITY: Weight = Weight(u64::MAX);
    pub const ZERO: Weight = Weight(0);

    pub fn finite(v: u64) -> Self {
        debug_assert!(v < u64::MAX);
        Weight(v)
    }

    pub fn is_infinite(self) -> bool {
        self == Self::INFINITY
    }

    pub fn value(self) -> Option<u64> {
        (!self.is_infinite()).then_some(self.0)
    }

    /// Raw value with `u64::MAX` standing for infinity.
    pub fn raw(self) -> u64 {
        self.0
    }
}

impl Add for Weight {
    type Output = Weight;

    fn add(self, rhs: Weight) -> Weight {
        Weight(self.0.saturating_add(rhs.0))
    }
}

const NONE: u32 = u32::MAX;

/// The tree induced on `Y_alpha`: node `i` (0-based) is `nodes[i]`, and its
/// parent is the lowest proper ancestor in `Y_alpha`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlphaTree {
    alpha: Color,
    nodes: Vec<u32>,
    parent: Vec<u32>,
}

impl AlphaTree {
    /// `alpha`-nodes plus the LCAs of preorder-adjacent `alpha`-nodes, with
    /// parents assigned by a stack sweep in preorder.
    pub fn build(tree: &BPTree, colors: &ColorSeq, alpha: Color) -> Result<Self> {
        colors.check_color(alpha)?;
        let occ = colors.occurrences(alpha);
        if occ.is_empty() {
            return Err(Error::ColorAbsent(alpha));
        }
        let mut nodes: Vec<u32> = occ.to_vec();
        nodes.extend(occ.windows(2).map(|w| {
            tree.lca_of(NodeId::new(w[0] as usize), NodeId::new(w[1] as usize))
                .rank() as u32
        }));
        nodes.sort_unstable();
        nodes.dedup();
        let mut parent = Vec::with_capacity(nodes.len());
        let mut stack: Vec<usize> = Vec::new();
        for (i, &v) in nodes.iter().enumerate() {
            let v = NodeId::new(v as usize);
            while let Some(&top) = stack.last() {
                if tree.is_ancestor_of(NodeId::new(nodes[top] as usize), v) {
                    break;
                }
                stack.pop();
            }
            parent.push(stack.last().map_or(NONE, |&p| p as u32));
            stack.push(i);
        }
        Ok(AlphaTree {
            alpha,
            nodes,
            parent,
        })
    }

    pub fn alpha(&self) -> Color {
        self.alpha
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Members of `Y_alpha` in preorder.
    pub fn nodes(&self) -> &[u32] {
        &self.nodes
    }

    pub fn root(&self) -> NodeId {
        NodeId::new(self.nodes[0] as usize)
    }

    /// Parent in `T_alpha` of the member with 0-based index `i`.
    pub fn parent(&self, i: usize) -> Option<usize> {
        (self.parent[i] != NONE).then(|| self.parent[i] as usize)
    }

    /// 0-based index of `v` in `Y_alpha`.
    pub fn index_of(&self, v: NodeId) -> Option<usize> {
        self.nodes.binary_search(&(v.rank() as u32)).ok()
    }

    pub fn contains(&self, v: NodeId) -> bool {
        self.index_of(v).is_some()
    }

    fn parents(&self) -> Vec<Option<usize>> {
        (0..self.len()).map(|i| self.parent(i)).collect()
    }
}

/// The macro tree of `T_alpha` with its weights and precomputed nearest
/// weighted descendant / non-descendant.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeightedMacro {
    tree: MacroTree,
    w1: Vec<Weight>,
    w2: Vec<Weight>,
    w3: Vec<Weight>,
    nearest_desc: Vec<u32>,
    nearest_nondesc: Vec<u32>,
}

impl WeightedMacro {
    fn build(tree: &BPTree, colors: &ColorSeq, at: &AlphaTree, decomp: &Decomposition) -> Self {
        let macro_tree = decomp.macro_tree();
        let m = macro_tree.len();
        let global = |local: u32| NodeId::new(at.nodes[local as usize - 1] as usize);
        let mut w1 = vec![Weight::ZERO; m];
        let mut w2 = vec![Weight::INFINITY; m];
        let mut w3 = vec![Weight::INFINITY; m];
        let homed = (colors.at(at.nodes[0] as usize) == at.alpha).then(|| global(1));
        for v in 0..m {
            let Some(p) = macro_tree.piece_of(v) else {
                // singleton root: entered from below or above at the same node
                if homed.is_some() {
                    w2[v] = Weight::ZERO;
                    w3[v] = Weight::ZERO;
                }
                continue;
            };
            let piece = decomp.piece(p);
            let root = global(piece.root);
            let leaf = piece.boundary_leaf.map(global);
            if let Some(leaf) = leaf {
                w1[v] = Weight::finite(tree.distance_of(root, leaf) as u64);
            }
            let home = if v == 0 { homed } else { None };
            for u in piece.members().map(global).chain(home) {
                if colors.at(u.rank()) != at.alpha {
                    continue;
                }
                w2[v] = w2[v].min(Weight::finite(tree.distance_of(root, u) as u64));
                if let Some(leaf) = leaf {
                    w3[v] = w3[v].min(Weight::finite(tree.distance_of(leaf, u) as u64));
                }
            }
        }
        let (nearest_desc, nearest_nondesc) =
            precompute_nearest(&macro_tree.parents(), &w1, &w2, &w3);
        WeightedMacro {
            tree: macro_tree,
            w1,
            w2,
            w3,
            nearest_desc,
            nearest_nondesc,
        }
    }

    pub fn macro_tree(&self) -> &MacroTree {
        &self.tree
    }

    pub fn w1(&self) -> &[Weight] {
        &self.w1
    }

    pub fn w2(&self) -> &[Weight] {
        &self.w2
    }

    pub fn w3(&self) -> &[Weight] {
        &self.w3
    }

    /// Proper descendant of `v` with minimum finite weighted distance.
    pub fn nearest_desc(&self, v: usize) -> Option<usize> {
        (self.nearest_desc[v] != NONE).then(|| self.nearest_desc[v] as usize)
    }

    /// Non-descendant of `v` with minimum finite weighted distance.
    pub fn nearest_nondesc(&self, v: usize) -> Option<usize> {
        (self.nearest_nondesc[v] != NONE).then(|| self.nearest_nondesc[v] as usize)
    }

    /// Weighted distance from macro node `v` to macro node `target != v`.
    pub fn weighted_distance(&self, v: usize, target: usize) -> Weight {
        let meet = self.tree.lca(v, target);
        let mut total = Weight::ZERO;
        for start in [v, target] {
            let mut u = start;
            while u != meet {
                if u != start {
                    total = total + self.w1[u];
                }
                u = self.tree.parent(u).expect("meet is an ancestor");
            }
        }
        let entry = if meet == target {
            self.w3[target]
        } else {
            self.w2[target]
        };
        total + entry
    }
}

impl SpaceUsage for WeightedMacro {
    fn size_in_bits(&self) -> u64 {
        self.tree.size_in_bits()
            + (self.w1.len() + self.w2.len() + self.w3.len()) as u64 * 64
            + (self.nearest_desc.len() + self.nearest_nondesc.len()) as u64 * 32
    }
}

/// Tree DP over the macro tree (0-based preorder parent array): best proper
/// descendant bottom-up, then best non-descendant top-down.
fn precompute_nearest(
    parents: &[Option<usize>],
    w1: &[Weight],
    w2: &[Weight],
    w3: &[Weight],
) -> (Vec<u32>, Vec<u32>) {
    let m = parents.len();
    type Best = (Weight, u32);
    let worst: Best = (Weight::INFINITY, NONE);
    let mut children: Vec<Vec<usize>> = vec![Vec::new(); m];
    for (v, p) in parents.iter().enumerate() {
        if let Some(p) = p {
            children[*p].push(v);
        }
    }
    // cost of reaching the best macro node in the branch of child c, seen
    // from c's parent: c itself (entered at its root) or something below c
    let mut down: Vec<Best> = vec![worst; m];
    let mut branch: Vec<Best> = vec![worst; m];
    for v in (0..m).rev() {
        for &c in &children[v] {
            down[v] = down[v].min(branch[c]);
        }
        let below = (w1[v] + down[v].0, down[v].1);
        branch[v] = (w2[v], v as u32).min(below);
    }
    let mut up: Vec<Best> = vec![worst; m];
    for p in 0..m {
        let kids = &children[p];
        let k = kids.len();
        let mut suffix = vec![worst; k + 1];
        for i in (0..k).rev() {
            suffix[i] = suffix[i + 1].min(branch[kids[i]]);
        }
        let through_parent = (w3[p], p as u32).min((w1[p] + up[p].0, up[p].1));
        let mut prefix = worst;
        for i in 0..k {
            up[kids[i]] = through_parent.min(prefix).min(suffix[i + 1]);
            prefix = prefix.min(branch[kids[i]]);
        }
    }
    let finish = |b: &Best| if b.0.is_infinite() { NONE } else { b.1 };
    (
        down.iter().map(finish).collect(),
        up.iter().map(finish).collect(),
    )
}

/// Everything stored for one frequent color.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FrequentColor {
    alpha_tree: AlphaTree,
    decomp: Decomposition,
    weighted: WeightedMacro,
    depths: SampledRmq,
}

impl FrequentColor {
    fn build(tree: &BPTree, colors: &ColorSeq, alpha: Color, threshold: usize) -> Result<Self> {
        let alpha_tree = AlphaTree::build(tree, colors, alpha)?;
        let decomp = decompose_parents(&alpha_tree.parents(), threshold)?;
        let weighted = WeightedMacro::build(tree, colors, &alpha_tree, &decomp);
        let depths: Vec<u32> = colors
            .occurrences(alpha)
            .iter()
            .map(|&p| tree.depth_of(NodeId::new(p as usize)) as u32)
            .collect();
        let depths = SampledRmq::new(&depths, threshold)?;
        Ok(FrequentColor {
            alpha_tree,
            decomp,
            weighted,
            depths,
        })
    }

    pub fn alpha_tree(&self) -> &AlphaTree {
        &self.alpha_tree
    }

    /// Decomposition of `T_alpha`, in 1-based indices into `Y_alpha`.
    pub fn decomposition(&self) -> &Decomposition {
        &self.decomp
    }

    pub fn weighted(&self) -> &WeightedMacro {
        &self.weighted
    }

    pub fn depth_rmq(&self) -> &SampledRmq {
        &self.depths
    }

    /// Macro node owning `Y_alpha` member `u` as a non-root node.
    pub fn map(&self, u: NodeId) -> Option<usize> {
        let i = self.alpha_tree.index_of(u)?;
        let p = self.decomp.map_node(i + 1).ok()?;
        Some(self.weighted.tree.node_of_piece(p))
    }

    /// `alpha`-nodes owned by macro node `v`: the non-root members of its
    /// piece, plus the root of `T_alpha` for the macro root.
    pub fn alpha_members(&self, colors: &ColorSeq, v: usize) -> Vec<NodeId> {
        let members = self
            .weighted
            .tree
            .piece_of(v)
            .into_iter()
            .flat_map(|p| self.decomp.piece(p).members());
        let home = (v == 0).then_some(1);
        members
            .chain(home)
            .map(|i| NodeId::new(self.alpha_tree.nodes[i as usize - 1] as usize))
            .filter(|u| colors.at(u.rank()) == self.alpha_tree.alpha)
            .collect()
    }

    fn size_bits(&self) -> u64 {
        (self.alpha_tree.nodes.len() + self.alpha_tree.parent.len()) as u64 * 32
            + self.decomp.size_in_bits()
            + self.weighted.size_in_bits()
            + self.depths.size_in_bits()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LargeSigmaIndex {
    tree: BPTree,
    colors: ColorSeq,
    params: LargeParams,
    frequent: Vec<Option<FrequentColor>>,
}

impl LargeSigmaIndex {
    pub fn build(tree: BPTree, colors: ColorSeq, params: LargeParams) -> Result<Self> {
        if tree.len() != colors.len() {
            return Err(Error::MalformedTree(format!(
                "{} nodes but {} colors",
                tree.len(),
                colors.len()
            )));
        }
        if params.threshold < 2 {
            return Err(Error::ParameterInfeasible(format!(
                "frequency threshold must be at least 2, got {}",
                params.threshold
            )));
        }
        let frequent = (1..=colors.sigma())
            .into_par_iter()
            .map(|alpha| {
                if colors.occurrences(alpha).len() >= params.threshold {
                    FrequentColor::build(&tree, &colors, alpha, params.threshold).map(Some)
                } else {
                    Ok(None)
                }
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(LargeSigmaIndex {
            tree,
            colors,
            params,
            frequent,
        })
    }

    /// Everything but the tree and the colors, for the index file.
    pub(crate) fn body_bytes(&self) -> Vec<u8> {
        crate::index::encode(&(&self.params, &self.frequent))
    }

    pub(crate) fn from_body(tree: BPTree, colors: ColorSeq, body: &[u8]) -> Result<Self> {
        let (params, frequent): (LargeParams, Vec<Option<FrequentColor>>) =
            crate::index::decode(body)?;
        Ok(LargeSigmaIndex {
            tree,
            colors,
            params,
            frequent,
        })
    }

    pub fn tree(&self) -> &BPTree {
        &self.tree
    }

    pub fn colors(&self) -> &ColorSeq {
        &self.colors
    }

    pub fn params(&self) -> LargeParams {
        self.params
    }

    pub fn is_frequent(&self, alpha: Color) -> bool {
        self.frequent(alpha).is_some()
    }

    pub fn frequent(&self, alpha: Color) -> Option<&FrequentColor> {
        self.frequent
            .get((alpha as usize).checked_sub(1)?)?
            .as_ref()
    }

    fn check(&self, x: NodeId, alpha: Color) -> Result<()> {
        self.tree.check(x)?;
        self.colors.check_color(alpha)?;
        if self.colors.occurrences(alpha).is_empty() {
            return Err(Error::ColorAbsent(alpha));
        }
        Ok(())
    }

    /// Lowest ancestor of `x` with an `alpha`-descendant outside the subtree
    /// of `x`, computed from the closest `alpha`-nodes before and after the
    /// subtree of `x` in preorder. Returns `x` itself when every `alpha`-node lies in its
    /// subtree.
    pub fn z_node(&self, x: NodeId, alpha: Color) -> Result<NodeId> {
        self.check(x, alpha)?;
        Ok(self.z_of(x, alpha))
    }

    fn z_of(&self, x: NodeId, alpha: Color) -> NodeId {
        let t = &self.tree;
        let end = t.subtree_end(x);
        let before = self.colors.pred_of(alpha, x.rank() - 1);
        let after = (end < t.len())
            .then(|| self.colors.succ_of(alpha, end + 1))
            .flatten();
        [before, after]
            .into_iter()
            .flatten()
            .map(|p| t.lca_of(NodeId::new(p), x))
            .max_by_key(|&a| t.depth_of(a))
            .unwrap_or(x)
    }

    /// Topmost `Y_alpha` node in the subtree of `z`.
    pub fn y_node(&self, z: NodeId, alpha: Color) -> Result<NodeId> {
        self.check(z, alpha)?;
        self.y_of(z, alpha)
            .ok_or(Error::NoAlphaDescendant(z.rank()))
    }

    fn y_of(&self, z: NodeId, alpha: Color) -> Option<NodeId> {
        let (first, last) = self.span(z, alpha)?;
        Some(self.tree.lca_of(first, last))
    }

    /// First and last `alpha`-descendants of `z` in preorder.
    fn span(&self, z: NodeId, alpha: Color) -> Option<(NodeId, NodeId)> {
        let end = self.tree.subtree_end(z);
        let first = self.colors.succ_of(alpha, z.rank()).filter(|&s| s <= end)?;
        let last = self.colors.pred_of(alpha, end).expect("first exists");
        Some((NodeId::new(first), NodeId::new(last)))
    }

    /// Nearest `alpha`-descendant of `v` (inclusive) and its distance.
    pub fn nearest_desc(&self, v: NodeId, alpha: Color) -> Result<Option<(NodeId, usize)>> {
        self.check(v, alpha)?;
        Ok(self.nearest_desc_of(v, alpha))
    }

    fn nearest_desc_of(&self, v: NodeId, alpha: Color) -> Option<(NodeId, usize)> {
        let t = &self.tree;
        let c = &self.colors;
        let i = c.rank_of(alpha, v.rank() - 1) + 1;
        let j = c.rank_of(alpha, t.subtree_end(v));
        if i > j {
            return None;
        }
        let mut ranks: Vec<usize> = Vec::new();
        match self.frequent(alpha) {
            Some(fc) => {
                let l = fc.depths.block_len();
                let i2 = (i - 1).div_ceil(l) * l + 1;
                let j2 = j / l * l;
                if i2 > j2 {
                    ranks.extend(i..=j);
                } else {
                    ranks.extend(i..i2);
                    ranks.extend(j2 + 1..=j);
                    ranks.push(
                        fc.depths
                            .rmq_aligned(i2, j2)
                            .expect("aligned by construction"),
                    );
                }
            }
            None => ranks.extend(i..=j),
        }
        let base = t.depth_of(v);
        ranks
            .into_iter()
            .map(|k| {
                let u = NodeId::new(c.select_of(alpha, k));
                (t.depth_of(u) - base, u)
            })
            .min()
            .map(|(d, u)| (u, d))
    }

    /// The candidate `alpha`-nodes for the nearest non-descendant of
    /// `y = y_node(z)`: members of the macro node holding `y`, of its best
    /// weighted descendant and non-descendant, of its parent and of the
    /// parent's best non-descendant, minus the descendants of `y`.
    pub fn nondesc_candidates(&self, z: NodeId, alpha: Color) -> Result<Vec<NodeId>> {
        self.check(z, alpha)?;
        let fc = self
            .frequent(alpha)
            .ok_or_else(|| Error::ParameterInfeasible(format!("color {alpha} is not frequent")))?;
        let (first, last) = self
            .span(z, alpha)
            .ok_or(Error::NoAlphaDescendant(z.rank()))?;
        Ok(self.nondesc_candidates_of(fc, first, last))
    }

    fn nondesc_candidates_of(
        &self,
        fc: &FrequentColor,
        first: NodeId,
        last: NodeId,
    ) -> Vec<NodeId> {
        let y = self.tree.lca_of(first, last);
        if y == fc.alpha_tree.root() {
            return Vec::new();
        }
        let wm = &fc.weighted;
        let (a, b) = (
            fc.map(first).expect("alpha-node below the T_alpha root"),
            fc.map(last).expect("alpha-node below the T_alpha root"),
        );
        let y1 = wm.tree.lca(a, b);
        let y2 = wm.tree.parent(y1);
        let sets = [
            Some(y1),
            wm.nearest_nondesc(y1),
            wm.nearest_desc(y1),
            y2,
            y2.and_then(|p| wm.nearest_nondesc(p)),
        ];
        let mut seen: Vec<usize> = Vec::with_capacity(5);
        let mut out = Vec::new();
        for v in sets.into_iter().flatten() {
            if seen.contains(&v) {
                continue;
            }
            seen.push(v);
            out.extend(
                fc.alpha_members(&self.colors, v)
                    .into_iter()
                    .filter(|&u| !self.tree.is_ancestor_of(y, u)),
            );
        }
        out
    }

    /// Nearest `alpha`-node to `y = y_node(z)` outside the subtree of `y`.
    pub fn nearest_nondesc(&self, z: NodeId, alpha: Color) -> Result<Option<(NodeId, usize)>> {
        let candidates = self.nondesc_candidates(z, alpha)?;
        let y = self.y_of(z, alpha).expect("checked by nondesc_candidates");
        Ok(candidates
            .into_iter()
            .map(|u| (self.tree.distance_of(y, u), u))
            .min()
            .map(|(d, u)| (u, d)))
    }

    /// Nearest `alpha`-node to `x` and its distance; ties go to the smaller
    /// preorder rank among the candidates examined.
    pub fn query(&self, x: NodeId, alpha: Color) -> Result<(NodeId, usize)> {
        self.check(x, alpha)?;
        let t = &self.tree;
        if self.colors.at(x.rank()) == alpha {
            return Ok((x, 0));
        }
        let Some(fc) = self.frequent(alpha) else {
            return self
                .colors
                .occurrences(alpha)
                .iter()
                .map(|&p| {
                    let u = NodeId::new(p as usize);
                    (t.distance_of(x, u), u)
                })
                .min()
                .map(|(d, u)| (u, d))
                .ok_or(Error::ColorAbsent(alpha));
        };
        let mut best: Option<(usize, NodeId)> = None;
        let mut offer = |u: NodeId| {
            let cand = (t.distance_of(x, u), u);
            if best.is_none_or(|b| cand < b) {
                best = Some(cand);
            }
        };
        if let Some((u, _)) = self.nearest_desc_of(x, alpha) {
            offer(u);
        }
        let z = self.z_of(x, alpha);
        let (first, last) = self.span(z, alpha).expect("z has an alpha-descendant");
        let y = t.lca_of(first, last);
        if let Some((u, _)) = self.nearest_desc_of(y, alpha) {
            offer(u);
        }
        let nondesc = self
            .nondesc_candidates_of(fc, first, last)
            .into_iter()
            .min_by_key(|&u| (t.distance_of(y, u), u));
        if let Some(u) = nondesc {
            offer(u);
        }
        best.map(|(d, u)| (u, d)).ok_or(Error::ColorAbsent(alpha))
    }

    /// Bits per component, excluding the tree and the color string.
    pub fn component_bits(&self) -> Vec<(&'static str, u64)> {
        let per_color: u64 = self
            .frequent
            .iter()
            .flatten()
            .map(|fc| fc.size_bits())
            .sum();
        vec![
            ("large.params", 64 + self.frequent.len() as u64),
            ("large.frequent_colors", per_color),
        ]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const T1: &str = "(((())(()))(()()))";
    const T1_COLORS: [Color; 9] = [1, 2, 3, 1, 2, 3, 2, 1, 3];

    fn t1(threshold: usize) -> LargeSigmaIndex {
        LargeSigmaIndex::build(
            BPTree::parse(T1).unwrap(),
            ColorSeq::new(&T1_COLORS, 3).unwrap(),
            LargeParams { threshold },
        )
        .unwrap()
    }

    fn id(r: usize) -> NodeId {
        NodeId::new(r)
    }

    #[test]
    fn alpha_tree_t1() {
        let idx = t1(2);
        let at = idx.frequent(1).unwrap().alpha_tree();
        assert_eq!(at.nodes(), &[1, 4, 8]);
        assert_eq!(at.parent(0), None);
        assert_eq!(at.parent(1), Some(0));
        assert_eq!(at.parent(2), Some(0));
    }

    #[test]
    fn alpha_tree_edge_cases() {
        let t = BPTree::parse(T1).unwrap();
        let single = ColorSeq::new(&[2, 2, 2, 2, 1, 2, 2, 2, 2], 2).unwrap();
        let at = AlphaTree::build(&t, &single, 1).unwrap();
        assert_eq!(at.nodes(), &[5]);
        assert_eq!(at.parent(0), None);

        let all = ColorSeq::new(&[1; 9], 2).unwrap();
        let at = AlphaTree::build(&t, &all, 1).unwrap();
        assert_eq!(at.len(), 9);
        let parents = t.to_parents();
        for (i, p) in parents.iter().enumerate() {
            assert_eq!(at.parent(i), *p);
        }
        assert_eq!(AlphaTree::build(&t, &all, 2), Err(Error::ColorAbsent(2)));
    }

    #[test]
    fn z_and_y_t1() {
        let idx = t1(2);
        assert_eq!(idx.z_node(id(5), 1), Ok(id(2)));
        assert_eq!(idx.z_node(id(9), 1), Ok(id(7)));
        assert_eq!(idx.z_node(id(1), 2), Ok(id(1)));
        assert_eq!(idx.y_node(id(2), 1), Ok(id(4)));
        assert_eq!(idx.y_node(id(4), 1), Ok(id(4)));
        assert_eq!(idx.y_node(id(1), 1), Ok(id(1)));
        assert_eq!(idx.y_node(id(6), 1), Err(Error::NoAlphaDescendant(6)));
    }

    #[test]
    fn nearest_desc_t1() {
        let idx = LargeSigmaIndex::build(
            BPTree::parse(T1).unwrap(),
            ColorSeq::new(&T1_COLORS, 3).unwrap(),
            LargeParams { threshold: 2 },
        )
        .unwrap();
        assert_eq!(idx.nearest_desc(id(2), 1), Ok(Some((id(4), 2))));
        assert_eq!(idx.nearest_desc(id(4), 1), Ok(Some((id(4), 0))));
        assert_eq!(idx.nearest_desc(id(9), 1), Ok(None));
        assert_eq!(idx.nearest_desc(id(1), 2), Ok(Some((id(2), 1))));
    }

    #[test]
    fn nearest_nondesc_t1() {
        let idx = t1(2);
        assert_eq!(idx.nearest_nondesc(id(4), 1), Ok(Some((id(1), 3))));
        // everything lies under the T_alpha root
        assert_eq!(idx.nearest_nondesc(id(1), 1), Ok(None));
    }

    #[test]
    fn queries_t1() {
        let idx = t1(2);
        assert_eq!(idx.query(id(6), 1), Ok((id(1), 3)));
        assert_eq!(idx.query(id(9), 2), Ok((id(7), 1)));
        assert_eq!(idx.query(id(8), 1), Ok((id(8), 0)));
        // infrequent path: threshold above every count
        let idx = t1(4);
        assert!(!idx.is_frequent(1));
        assert_eq!(idx.query(id(6), 1), Ok((id(1), 3)));
        assert_eq!(idx.query(id(9), 2), Ok((id(7), 1)));
    }

    #[test]
    fn errors() {
        let idx = LargeSigmaIndex::build(
            BPTree::parse(T1).unwrap(),
            ColorSeq::new(&[1; 9], 2).unwrap(),
            LargeParams { threshold: 2 },
        )
        .unwrap();
        assert_eq!(idx.query(id(3), 2), Err(Error::ColorAbsent(2)));
        assert!(matches!(
            idx.query(id(3), 3),
            Err(Error::InvalidColor { .. })
        ));
        assert!(LargeSigmaIndex::build(
            BPTree::parse(T1).unwrap(),
            ColorSeq::new(&[1; 9], 2).unwrap(),
            LargeParams { threshold: 1 },
        )
        .is_err());
    }

    #[test]
    fn weight_arithmetic() {
        let inf = Weight::INFINITY;
        assert_eq!(inf + Weight::finite(3), inf);
        assert!(Weight::finite(1_000_000) < inf);
        assert_eq!(Weight::finite(2) + Weight::finite(3), Weight::finite(5));
        assert_eq!(inf.value(), None);
    }

    #[test]
    fn weighted_macro_small_cases() {
        // single macro node: nothing to point at
        let parents = [None];
        let (d, nd) = precompute_nearest(
            &parents,
            &[Weight::ZERO],
            &[Weight::finite(1)],
            &[Weight::INFINITY],
        );
        assert_eq!((d[0], nd[0]), (NONE, NONE));
        // two nodes, child has alpha members
        let parents = [None, Some(0)];
        let w1 = [Weight::finite(2), Weight::ZERO];
        let w2 = [Weight::INFINITY, Weight::finite(1)];
        let w3 = [Weight::INFINITY, Weight::INFINITY];
        let (d, nd) = precompute_nearest(&parents, &w1, &w2, &w3);
        assert_eq!(d[0], 1);
        assert_eq!(nd[1], NONE);
    }
}
