//! Nearest colored node for small alphabets.
//!
//! The tree is cut into mini-trees of at most `L'` nodes and every mini-tree
//! into micro-trees of at most `L` nodes. A query for `(x, alpha)` looks at
//! five candidates:
//!
//! 1. the nearest `alpha`-node inside the micro-tree of `x`, read from a
//!    table indexed by the micro-tree's shape and coloring;
//! 2. and 3. the `alpha`-nodes of the enclosing mini-tree nearest to the
//!    micro-tree's root and boundary leaf;
//! 4. and 5. the `alpha`-nodes of the whole tree nearest to the mini-tree's
//!    root and boundary leaf.
//!
//! A shortest path that leaves a piece crosses one of its boundary nodes,
//! so the closest of these candidates is a nearest `alpha`-node.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::bits::SpaceUsage;
use crate::bp::{BPTree, NodeId};
use crate::color_seq::{Color, ColorSeq};
use crate::decomp::{decompose_parents, Decomposition, Piece};
use crate::error::{Error, Result};

/// Upper bound on `sigma^L`, the number of colorings per micro shape.
pub const MAX_COLORINGS: f64 = (1u64 << 20) as f64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SmallParams {
    /// Micro-tree size bound `L`.
    pub micro: usize,
    /// Mini-tree size bound `L'`.
    pub mini: usize,
}

impl SmallParams {
    /// `L = max(2, floor(lg n / (2 lg sigma)))`, `L' = max(L, ceil(lg^2 n))`.
    pub fn defaults(n: usize, sigma: u32) -> Self {
        let lg_n = (n.max(1) as f64).log2();
        let lg_sigma = (sigma.max(2) as f64).log2();
        let micro = ((lg_n / (2.0 * lg_sigma)).floor() as usize).max(2);
        let mini = ((lg_n * lg_n).ceil() as usize).max(micro);
        SmallParams { micro, mini }
    }
}

/// Nearest in-shape node for every (node, color) of one micro shape.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
struct ShapeTable {
    /// Entry `(u - 1) * sigma + (alpha - 1)` is the 1-based local rank of
    /// the nearest `alpha`-node to local node `u`, 0 if none.
    nearest: Vec<u8>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
struct Layout {
    mini: Decomposition,
    /// Micro decomposition of each mini-tree, in the mini-tree's local ranks.
    micro: Vec<Decomposition>,
    /// Global index of the first micro piece of each mini-tree.
    micro_base: Vec<u32>,
    shape_of: Vec<u32>,
    shapes: Vec<ShapeTable>,
    /// `[mini piece][alpha][root, leaf]`, node rank or 0.
    mini_table: Vec<u32>,
    /// `[micro piece][alpha][root, leaf]`, node rank or 0.
    micro_table: Vec<u32>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SmallSigmaIndex {
    tree: BPTree,
    colors: ColorSeq,
    params: SmallParams,
    /// Absent for a single-node tree.
    layout: Option<Layout>,
}

type Nearest = Option<(u32, u32)>;

/// For every node of a tree given by its 0-based preorder parent array, the
/// nearest marked node as `(distance, node)`, ties to the smaller node.
fn nearest_marked(parents: &[Option<usize>], marked: impl Fn(usize) -> bool) -> Vec<Nearest> {
    let n = parents.len();
    let mut best: Vec<Nearest> = (0..n).map(|u| marked(u).then_some((0, u as u32))).collect();
    for u in (1..n).rev() {
        let p = parents[u].unwrap();
        if let Some((d, v)) = best[u] {
            let cand = Some((d + 1, v));
            if best[p].is_none() || cand < best[p] {
                best[p] = cand;
            }
        }
    }
    for u in 1..n {
        let p = parents[u].unwrap();
        if let Some((d, v)) = best[p] {
            let cand = Some((d + 1, v));
            if best[u].is_none() || cand < best[u] {
                best[u] = cand;
            }
        }
    }
    best
}

/// Parenthesis bits for nodes listed in preorder by depth.
fn parens_from_depths(depths: &[usize]) -> Vec<bool> {
    let mut bits = Vec::with_capacity(depths.len() * 2);
    let mut open = 0usize;
    for &d in depths {
        while open > d {
            bits.push(false);
            open -= 1;
        }
        bits.push(true);
        open += 1;
    }
    bits.extend(std::iter::repeat_n(false, open));
    bits
}

fn shape_table(bp: &[bool], colors: &[Color], sigma: u32) -> ShapeTable {
    let mut parent: Vec<Option<usize>> = Vec::with_capacity(colors.len());
    let mut stack: Vec<usize> = Vec::new();
    for &b in bp {
        if b {
            parent.push(stack.last().copied());
            stack.push(parent.len() - 1);
        } else {
            stack.pop();
        }
    }
    let s = parent.len();
    let mut adj = vec![Vec::new(); s];
    for (u, p) in parent.iter().enumerate() {
        if let Some(p) = *p {
            adj[u].push(p);
            adj[p].push(u);
        }
    }
    let sigma = sigma as usize;
    let mut nearest = vec![0u8; s * sigma];
    for src in 0..s {
        let mut dist = vec![usize::MAX; s];
        dist[src] = 0;
        let mut queue = std::collections::VecDeque::from([src]);
        while let Some(u) = queue.pop_front() {
            for &v in &adj[u] {
                if dist[v] == usize::MAX {
                    dist[v] = dist[u] + 1;
                    queue.push_back(v);
                }
            }
        }
        for u in 0..s {
            let slot = &mut nearest[src * sigma + colors[u] as usize - 1];
            let better = *slot == 0 || dist[u] < dist[*slot as usize - 1];
            if better {
                *slot = u as u8 + 1;
            }
        }
    }
    ShapeTable { nearest }
}

impl SmallSigmaIndex {
    pub fn build(tree: BPTree, colors: ColorSeq, params: SmallParams) -> Result<Self> {
        if tree.len() != colors.len() {
            return Err(Error::MalformedTree(format!(
                "{} nodes but {} colors",
                tree.len(),
                colors.len()
            )));
        }
        let sigma = colors.sigma();
        let SmallParams { micro, mini } = params;
        if micro < 2 || micro > mini {
            return Err(Error::ParameterInfeasible(format!(
                "need 2 <= L <= L', got L = {micro}, L' = {mini}"
            )));
        }
        if micro > u8::MAX as usize || (sigma as f64).powi(micro as i32) > MAX_COLORINGS {
            return Err(Error::ParameterInfeasible(format!(
                "sigma^L = {sigma}^{micro} exceeds the lookup table bound 2^20"
            )));
        }
        let layout = if tree.len() < 2 {
            None
        } else {
            Some(Self::build_layout(&tree, &colors, params)?)
        };
        Ok(SmallSigmaIndex {
            tree,
            colors,
            params,
            layout,
        })
    }

    fn build_layout(tree: &BPTree, colors: &ColorSeq, params: SmallParams) -> Result<Layout> {
        let sigma = colors.sigma() as usize;
        let parents = tree.to_parents();
        let mini = decompose_parents(&parents, params.mini)?;

        let slots = |count: usize| vec![0u32; count * sigma * 2];
        let mut mini_table = slots(mini.pieces().len());
        for alpha in 1..=sigma {
            if colors.occurrences(alpha as Color).is_empty() {
                continue;
            }
            let near = nearest_marked(&parents, |u| colors.at(u + 1) as usize == alpha);
            for (p, piece) in mini.pieces().iter().enumerate() {
                let base = (p * sigma + alpha - 1) * 2;
                let at = |u: u32| near[u as usize - 1].map_or(0, |(_, v)| v + 1);
                for (slot, u) in [Some(piece.root), piece.boundary_leaf]
                    .into_iter()
                    .enumerate()
                {
                    mini_table[base + slot] = u.map_or(0, at);
                }
            }
        }

        let mut micro_decomps = Vec::with_capacity(mini.pieces().len());
        let mut micro_base = Vec::with_capacity(mini.pieces().len());
        let mut micro_table = Vec::new();
        let mut shape_of = Vec::new();
        let mut shapes = Vec::new();
        let mut shape_ids: HashMap<(Vec<bool>, Vec<Color>), u32> = HashMap::new();

        for piece in mini.pieces() {
            let nodes: Vec<u32> = std::iter::once(piece.root).chain(piece.members()).collect();
            let local_parents: Vec<Option<usize>> = nodes
                .iter()
                .enumerate()
                .map(|(k, &u)| {
                    (k > 0).then(|| {
                        let par = parents[u as usize - 1].unwrap() as u32 + 1;
                        if par == piece.root {
                            0
                        } else {
                            piece.local_rank(par).expect("piece is connected") - 1
                        }
                    })
                })
                .collect();
            let mut local_depth = vec![0usize; nodes.len()];
            for k in 1..nodes.len() {
                local_depth[k] = local_depth[local_parents[k].unwrap()] + 1;
            }
            let local_color = |k: usize| colors.at(nodes[k] as usize);
            let decomp = decompose_parents(&local_parents, params.micro)?;

            micro_base.push(shape_of.len() as u32);
            let mut entries = slots(decomp.pieces().len());
            for alpha in 1..=sigma {
                if colors.occurrences(alpha as Color).is_empty() {
                    continue;
                }
                let near = nearest_marked(&local_parents, |k| local_color(k) as usize == alpha);
                for (m, mp) in decomp.pieces().iter().enumerate() {
                    let base = (m * sigma + alpha - 1) * 2;
                    let at = |u: u32| near[u as usize - 1].map_or(0, |(_, v)| nodes[v as usize]);
                    for (slot, u) in [Some(mp.root), mp.boundary_leaf].into_iter().enumerate() {
                        entries[base + slot] = u.map_or(0, at);
                    }
                }
            }
            micro_table.extend(entries);

            for mp in decomp.pieces() {
                let locals: Vec<usize> = std::iter::once(mp.root)
                    .chain(mp.members())
                    .map(|u| u as usize - 1)
                    .collect();
                let top = local_depth[locals[0]];
                let depths: Vec<usize> = locals.iter().map(|&k| local_depth[k] - top).collect();
                let key = (
                    parens_from_depths(&depths),
                    locals.iter().map(|&k| local_color(k)).collect::<Vec<_>>(),
                );
                let next = shapes.len() as u32;
                let id = *shape_ids.entry(key).or_insert_with_key(|(bp, cs)| {
                    shapes.push(shape_table(bp, cs, sigma as u32));
                    next
                });
                shape_of.push(id);
            }
            micro_decomps.push(decomp);
        }

        Ok(Layout {
            mini,
            micro: micro_decomps,
            micro_base,
            shape_of,
            shapes,
            mini_table,
            micro_table,
        })
    }

    /// Everything but the tree and the colors, for the index file.
    pub(crate) fn body_bytes(&self) -> Vec<u8> {
        crate::index::encode(&(&self.params, &self.layout))
    }

    pub(crate) fn from_body(tree: BPTree, colors: ColorSeq, body: &[u8]) -> Result<Self> {
        let (params, layout): (SmallParams, Option<Layout>) = crate::index::decode(body)?;
        Ok(SmallSigmaIndex {
            tree,
            colors,
            params,
            layout,
        })
    }

    pub fn tree(&self) -> &BPTree {
        &self.tree
    }

    pub fn colors(&self) -> &ColorSeq {
        &self.colors
    }

    pub fn params(&self) -> SmallParams {
        self.params
    }

    pub fn mini_decomposition(&self) -> Option<&Decomposition> {
        self.layout.as_ref().map(|l| &l.mini)
    }

    /// Number of distinct micro shapes materialized in the lookup table.
    pub fn shape_count(&self) -> usize {
        self.layout.as_ref().map_or(0, |l| l.shapes.len())
    }

    /// The mini piece `x` belongs to, its 1-based rank inside that mini-tree,
    /// the micro piece (index inside the mini-tree's decomposition) and its
    /// rank inside that micro-tree. The root is homed in the first pieces,
    /// which are rooted at it.
    fn home(&self, layout: &Layout, x: NodeId) -> (usize, usize, usize, usize) {
        let (mini_p, in_mini) = if x == NodeId::ROOT {
            (0, 1)
        } else {
            let p = layout.mini.owner_of(x.rank() as u32);
            (p, layout.mini.piece(p).local_rank(x.rank() as u32).unwrap())
        };
        let decomp = &layout.micro[mini_p];
        let (micro_p, in_micro) = if in_mini == 1 {
            (0, 1)
        } else {
            let m = decomp.owner_of(in_mini as u32);
            (m, decomp.piece(m).local_rank(in_mini as u32).unwrap())
        };
        (mini_p, in_mini, micro_p, in_micro)
    }

    fn micro_piece(layout: &Layout, mini_p: usize, micro_p: usize) -> (&Piece, &Piece) {
        (
            layout.mini.piece(mini_p),
            layout.micro[mini_p].piece(micro_p),
        )
    }

    /// Encoding of the micro-tree containing `x`: its parenthesis string,
    /// its colors in preorder and the 1-based rank of `x` inside it.
    pub fn micro_shape(&self, x: NodeId) -> Result<(String, Vec<Color>, usize)> {
        self.tree.check(x)?;
        let Some(layout) = &self.layout else {
            return Ok(("()".into(), vec![self.colors.at(1)], 1));
        };
        let (nodes, in_micro) = self.micro_nodes_of(layout, x);
        let top = self.tree.depth_of(nodes[0]);
        let depths: Vec<usize> = nodes.iter().map(|&u| self.tree.depth_of(u) - top).collect();
        let bp = parens_from_depths(&depths)
            .into_iter()
            .map(|b| if b { '(' } else { ')' })
            .collect();
        let cs = nodes.iter().map(|u| self.colors.at(u.rank())).collect();
        Ok((bp, cs, in_micro))
    }

    /// Nodes of the micro-tree containing `x`, in preorder.
    pub fn micro_nodes(&self, x: NodeId) -> Result<Vec<NodeId>> {
        self.tree.check(x)?;
        Ok(match &self.layout {
            Some(layout) => self.micro_nodes_of(layout, x).0,
            None => vec![x],
        })
    }

    fn micro_nodes_of(&self, layout: &Layout, x: NodeId) -> (Vec<NodeId>, usize) {
        let (mini_p, _, micro_p, in_micro) = self.home(layout, x);
        let (mini_piece, micro_piece) = Self::micro_piece(layout, mini_p, micro_p);
        let nodes = std::iter::once(micro_piece.root)
            .chain(micro_piece.members())
            .map(|k| NodeId::new(mini_piece.node_at(k as usize) as usize))
            .collect();
        (nodes, in_micro)
    }

    /// The up-to-five candidate nodes for `(x, alpha)` with their distances.
    pub fn candidates(&self, x: NodeId, alpha: Color) -> Result<Vec<(NodeId, usize)>> {
        self.tree.check(x)?;
        self.colors.check_color(alpha)?;
        if self.colors.occurrences(alpha).is_empty() {
            return Err(Error::ColorAbsent(alpha));
        }
        let Some(layout) = &self.layout else {
            return Ok(vec![(x, 0)]);
        };
        let sigma = self.colors.sigma() as usize;
        let (mini_p, _, micro_p, in_micro) = self.home(layout, x);
        let global_micro = layout.micro_base[mini_p] as usize + micro_p;
        let (mini_piece, micro_piece) = Self::micro_piece(layout, mini_p, micro_p);

        let mut nodes: Vec<u32> = Vec::with_capacity(5);
        let table = &layout.shapes[layout.shape_of[global_micro] as usize];
        let local = table.nearest[(in_micro - 1) * sigma + alpha as usize - 1];
        if local != 0 {
            let in_mini = micro_piece.node_at(local as usize);
            nodes.push(mini_piece.node_at(in_mini as usize));
        }
        let slot = (alpha as usize - 1) * 2;
        let micro_at = (global_micro * sigma) * 2 + slot;
        let mini_at = (mini_p * sigma) * 2 + slot;
        nodes.extend_from_slice(&layout.micro_table[micro_at..micro_at + 2]);
        nodes.extend_from_slice(&layout.mini_table[mini_at..mini_at + 2]);
        Ok(nodes
            .into_iter()
            .filter(|&u| u != 0)
            .map(|u| {
                let u = NodeId::new(u as usize);
                (u, self.tree.distance_of(x, u))
            })
            .collect())
    }

    /// Nearest `alpha`-node to `x` and its distance; ties go to the smaller
    /// preorder rank among the candidates.
    pub fn query(&self, x: NodeId, alpha: Color) -> Result<(NodeId, usize)> {
        self.candidates(x, alpha)?
            .into_iter()
            .min_by_key(|&(u, d)| (d, u))
            .ok_or(Error::ColorAbsent(alpha))
    }

    /// Bits per component, excluding the tree and the color string.
    pub fn component_bits(&self) -> Vec<(&'static str, u64)> {
        let Some(l) = &self.layout else {
            return vec![("small.params", 128)];
        };
        let micro: u64 = l.micro.iter().map(|d| d.size_in_bits()).sum();
        let table: u64 = l.shapes.iter().map(|s| s.nearest.len() as u64 * 8).sum();
        vec![
            ("small.params", 128),
            ("small.mini_decomposition", l.mini.size_in_bits()),
            (
                "small.micro_decompositions",
                micro + l.micro_base.size_in_bits(),
            ),
            ("small.lookup_table", table + l.shape_of.size_in_bits()),
            ("small.mini_table", l.mini_table.size_in_bits()),
            ("small.micro_table", l.micro_table.size_in_bits()),
        ]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const T1: &str = "(((())(()))(()()))";
    const T1_COLORS: [Color; 9] = [1, 2, 3, 1, 2, 3, 2, 1, 3];

    fn t1(params: SmallParams) -> SmallSigmaIndex {
        SmallSigmaIndex::build(
            BPTree::parse(T1).unwrap(),
            ColorSeq::new(&T1_COLORS, 3).unwrap(),
            params,
        )
        .unwrap()
    }

    fn id(r: usize) -> NodeId {
        NodeId::new(r)
    }

    #[test]
    fn t1_queries() {
        for params in [
            SmallParams { micro: 3, mini: 5 },
            SmallParams { micro: 2, mini: 2 },
            SmallParams { micro: 9, mini: 9 },
        ] {
            let idx = t1(params);
            assert_eq!(idx.query(id(6), 1), Ok((id(1), 3)));
            assert_eq!(idx.query(id(5), 3), Ok((id(6), 1)));
            for x in 1..=9 {
                assert_eq!(idx.query(id(x), T1_COLORS[x - 1]), Ok((id(x), 0)));
            }
        }
    }

    #[test]
    fn infeasible_parameters() {
        let colors: Vec<Color> = (0..9).map(|i| i % 10 + 1).collect();
        let err = SmallSigmaIndex::build(
            BPTree::parse(T1).unwrap(),
            ColorSeq::new(&colors, 10).unwrap(),
            SmallParams {
                micro: 10,
                mini: 10,
            },
        );
        assert!(matches!(err, Err(Error::ParameterInfeasible(_))));
        let err = SmallSigmaIndex::build(
            BPTree::parse(T1).unwrap(),
            ColorSeq::new(&T1_COLORS, 3).unwrap(),
            SmallParams { micro: 4, mini: 3 },
        );
        assert!(matches!(err, Err(Error::ParameterInfeasible(_))));
    }

    #[test]
    fn absent_and_invalid_colors() {
        let idx = SmallSigmaIndex::build(
            BPTree::parse(T1).unwrap(),
            ColorSeq::new(&[1; 9], 3).unwrap(),
            SmallParams { micro: 3, mini: 5 },
        )
        .unwrap();
        assert_eq!(idx.query(id(2), 2), Err(Error::ColorAbsent(2)));
        assert!(matches!(
            idx.query(id(2), 4),
            Err(Error::InvalidColor { .. })
        ));
        assert!(matches!(
            idx.query(id(10), 1),
            Err(Error::OutOfBounds { .. })
        ));
    }

    #[test]
    fn tiny_trees() {
        let one = SmallSigmaIndex::build(
            BPTree::parse("()").unwrap(),
            ColorSeq::new(&[2], 2).unwrap(),
            SmallParams { micro: 2, mini: 2 },
        )
        .unwrap();
        assert_eq!(one.query(id(1), 2), Ok((id(1), 0)));
        assert_eq!(one.query(id(1), 1), Err(Error::ColorAbsent(1)));

        let two = SmallSigmaIndex::build(
            BPTree::parse("(())").unwrap(),
            ColorSeq::new(&[1, 2], 2).unwrap(),
            SmallParams { micro: 2, mini: 2 },
        )
        .unwrap();
        assert_eq!(two.mini_decomposition().unwrap().pieces().len(), 1);
        assert_eq!(two.micro_shape(id(2)), Ok(("(())".into(), vec![1, 2], 2)));
        assert_eq!(two.query(id(2), 1), Ok((id(1), 1)));
    }

    #[test]
    fn parens_from_depth_sequences() {
        let s = |d: &[usize]| -> String {
            parens_from_depths(d)
                .into_iter()
                .map(|b| if b { '(' } else { ')' })
                .collect()
        };
        assert_eq!(s(&[0]), "()");
        assert_eq!(s(&[0, 1, 1]), "(()())");
        assert_eq!(s(&[0, 1, 2]), "((()))");
        assert_eq!(s(&[0, 1, 2, 3, 2, 3, 1, 2, 2]), T1);
    }

    #[test]
    fn nearest_marked_on_path() {
        let parents = vec![None, Some(0), Some(1), Some(2), Some(3)];
        let near = nearest_marked(&parents, |u| u == 0 || u == 4);
        assert_eq!(
            near,
            vec![
                Some((0, 0)),
                Some((1, 0)),
                Some((2, 0)),
                Some((1, 4)),
                Some((0, 4))
            ]
        );
    }
}
