//! Brute-force reference implementations.
//!
//! Nothing here calls into the succinct structures: trees are rebuilt from
//! the raw parenthesis string into adjacency lists and every answer comes
//! straight from its definition. Intended for test-scale inputs only.

use std::collections::{BTreeSet, VecDeque};

use crate::color_seq::Color;
use crate::decomp::Piece;

/// Adjacency-list tree with nodes numbered by preorder rank (index 0 unused).
#[derive(Debug, Clone)]
pub struct PointerTree {
    parent: Vec<Option<usize>>,
    children: Vec<Vec<usize>>,
    colors: Vec<Color>,
}

impl PointerTree {
    /// Panics on malformed input; oracles only see validated fixtures.
    pub fn from_parens(bp: &str, colors: &[Color]) -> Self {
        let mut parent = vec![None];
        let mut children = vec![Vec::new()];
        let mut stack: Vec<usize> = Vec::new();
        for ch in bp.chars() {
            match ch {
                '(' => {
                    let id = parent.len();
                    let p = stack.last().copied();
                    parent.push(p);
                    children.push(Vec::new());
                    if let Some(p) = p {
                        children[p].push(id);
                    }
                    stack.push(id);
                }
                ')' => {
                    stack.pop().expect("balanced input");
                }
                other => panic!("unexpected character {other:?}"),
            }
        }
        let n = parent.len() - 1;
        assert_eq!(colors.len(), n, "one color per node");
        let mut c = vec![0];
        c.extend_from_slice(colors);
        PointerTree {
            parent,
            children,
            colors: c,
        }
    }

    /// Same tree, given as a 0-based preorder parent array.
    pub fn from_parents(parents: &[Option<usize>], colors: &[Color]) -> Self {
        let n = parents.len();
        let mut parent = vec![None; n + 1];
        let mut children = vec![Vec::new(); n + 1];
        for (i, p) in parents.iter().enumerate() {
            if let Some(p) = p {
                parent[i + 1] = Some(p + 1);
                children[p + 1].push(i + 1);
            }
        }
        let mut c = vec![0];
        c.extend_from_slice(colors);
        PointerTree {
            parent,
            children,
            colors: c,
        }
    }

    pub fn len(&self) -> usize {
        self.parent.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn parent(&self, x: usize) -> Option<usize> {
        self.parent[x]
    }

    pub fn children(&self, x: usize) -> &[usize] {
        &self.children[x]
    }

    pub fn color(&self, x: usize) -> Color {
        self.colors[x]
    }

    pub fn depth(&self, x: usize) -> usize {
        let mut d = 0;
        let mut v = x;
        while let Some(p) = self.parent[v] {
            d += 1;
            v = p;
        }
        d
    }

    /// `a` is an ancestor of `b`, inclusive.
    pub fn is_ancestor(&self, a: usize, b: usize) -> bool {
        let mut v = Some(b);
        while let Some(u) = v {
            if u == a {
                return true;
            }
            v = self.parent[u];
        }
        false
    }

    pub fn lca(&self, a: usize, b: usize) -> usize {
        let mut v = a;
        loop {
            if self.is_ancestor(v, b) {
                return v;
            }
            v = self.parent[v].expect("root is a common ancestor");
        }
    }

    /// BFS distances from `x` to every node.
    pub fn distances_from(&self, x: usize) -> Vec<usize> {
        let mut dist = vec![usize::MAX; self.parent.len()];
        dist[x] = 0;
        let mut queue = VecDeque::from([x]);
        while let Some(u) = queue.pop_front() {
            let next = self.children[u].iter().copied().chain(self.parent[u]);
            for v in next {
                if dist[v] == usize::MAX {
                    dist[v] = dist[u] + 1;
                    queue.push_back(v);
                }
            }
        }
        dist
    }

    pub fn distance(&self, a: usize, b: usize) -> usize {
        self.distances_from(a)[b]
    }

    pub fn subtree(&self, x: usize) -> Vec<usize> {
        let mut out = Vec::new();
        let mut stack = vec![x];
        while let Some(u) = stack.pop() {
            out.push(u);
            stack.extend(self.children[u].iter().rev());
        }
        out
    }

    fn has_alpha_descendant(&self, x: usize, alpha: Color) -> bool {
        self.subtree(x).iter().any(|&u| self.colors[u] == alpha)
    }
}

/// Nearest `alpha`-node to `x` by breadth-first search; ties go to the
/// smallest preorder rank.
pub fn bfs_nearest(pt: &PointerTree, x: usize, alpha: Color) -> Option<(usize, usize)> {
    let dist = pt.distances_from(x);
    (1..=pt.len())
        .filter(|&u| pt.color(u) == alpha)
        .map(|u| (dist[u], u))
        .min()
        .map(|(d, u)| (u, d))
}

/// All `alpha`-nodes at minimum distance from `x`.
pub fn all_nearest(pt: &PointerTree, x: usize, alpha: Color) -> Vec<usize> {
    let dist = pt.distances_from(x);
    let best = (1..=pt.len())
        .filter(|&u| pt.color(u) == alpha)
        .map(|u| dist[u])
        .min();
    match best {
        None => Vec::new(),
        Some(b) => (1..=pt.len())
            .filter(|&u| pt.color(u) == alpha && dist[u] == b)
            .collect(),
    }
}

/// 1-based index of the first minimum of `a[i..=j]` (1-based, inclusive).
pub fn naive_rmq(a: &[u32], i: usize, j: usize) -> usize {
    (i..=j).min_by_key(|&k| (a[k - 1], k)).unwrap()
}

/// Lowest ancestor of `x` having an `alpha`-descendant outside `x`'s subtree.
pub fn naive_z(pt: &PointerTree, x: usize, alpha: Color) -> Option<usize> {
    let below_x: BTreeSet<usize> = pt.subtree(x).into_iter().collect();
    let mut v = pt.parent(x);
    while let Some(a) = v {
        if pt
            .subtree(a)
            .iter()
            .any(|u| pt.color(*u) == alpha && !below_x.contains(u))
        {
            return Some(a);
        }
        v = pt.parent(a);
    }
    None
}

/// `alpha`-nodes plus nodes with at least two children that have an
/// `alpha`-descendant.
pub fn naive_y_set(pt: &PointerTree, alpha: Color) -> BTreeSet<usize> {
    let in_z: Vec<bool> = (0..=pt.len())
        .map(|u| u > 0 && pt.has_alpha_descendant(u, alpha))
        .collect();
    (1..=pt.len())
        .filter(|&u| {
            in_z[u]
                && (pt.color(u) == alpha
                    || pt.children(u).iter().filter(|&&c| in_z[c]).count() >= 2)
        })
        .collect()
}

/// Topmost member of `Y_alpha` inside the subtree of `z`.
pub fn naive_y(pt: &PointerTree, z: usize, alpha: Color) -> Option<usize> {
    let ys = naive_y_set(pt, alpha);
    pt.subtree(z)
        .into_iter()
        .filter(|u| ys.contains(u))
        .min_by_key(|&u| pt.depth(u))
}

/// Outcome of checking a decomposition against the five defining properties.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct DecompositionReport {
    pub edges_once: bool,
    pub sizes_ok: bool,
    pub piece_count: usize,
    pub boundary_count_ok: bool,
    pub boundary_placement_ok: bool,
    pub problems: Vec<String>,
}

impl DecompositionReport {
    pub fn all_ok(&self) -> bool {
        self.edges_once && self.sizes_ok && self.boundary_count_ok && self.boundary_placement_ok
    }
}

/// Exhaustive check of a decomposition. Piece node sets are read straight
/// from the stored intervals, the rest is recomputed from `pt`.
pub fn validate_decomposition(
    pt: &PointerTree,
    pieces: &[Piece],
    max_size: usize,
) -> DecompositionReport {
    let n = pt.len();
    let mut report = DecompositionReport {
        edges_once: true,
        sizes_ok: true,
        piece_count: pieces.len(),
        boundary_count_ok: true,
        boundary_placement_ok: true,
        problems: Vec::new(),
    };
    let node_sets: Vec<BTreeSet<usize>> = pieces
        .iter()
        .map(|p| {
            let mut s: BTreeSet<usize> = p.members().map(|u| u as usize).collect();
            s.insert(p.root as usize);
            s
        })
        .collect();

    // every piece must be a connected subtree rooted at its root: each
    // member's parent lies in the piece
    let mut edge_owner = vec![0usize; n + 1];
    for (i, (p, set)) in pieces.iter().zip(&node_sets).enumerate() {
        for u in p.members().map(|u| u as usize) {
            match pt.parent(u) {
                Some(par) if set.contains(&par) => edge_owner[u] += 1,
                _ => {
                    report.edges_once = false;
                    report
                        .problems
                        .push(format!("piece {i}: member {u} detached from piece"));
                }
            }
        }
        if set.len() < 2 || set.len() > max_size {
            report.sizes_ok = false;
            report
                .problems
                .push(format!("piece {i}: size {}", set.len()));
        }
    }
    for (u, &owners) in edge_owner.iter().enumerate().skip(2) {
        if owners != 1 {
            report.edges_once = false;
            report
                .problems
                .push(format!("edge above {u} covered {owners} times"));
        }
    }

    let mut appearances = vec![0usize; n + 1];
    for set in &node_sets {
        for &u in set {
            appearances[u] += 1;
        }
    }
    for (i, (p, set)) in pieces.iter().zip(&node_sets).enumerate() {
        let boundary: Vec<usize> = set
            .iter()
            .copied()
            .filter(|&u| appearances[u] > 1)
            .collect();
        if boundary.len() > 2 {
            report.boundary_count_ok = false;
            report
                .problems
                .push(format!("piece {i}: {} boundary nodes", boundary.len()));
        }
        for &b in &boundary {
            if b == p.root as usize {
                continue;
            }
            let leaf_in_piece = !pt.children(b).iter().any(|c| set.contains(c));
            if !leaf_in_piece || p.boundary_leaf != Some(b as u32) {
                report.boundary_placement_ok = false;
                report
                    .problems
                    .push(format!("piece {i}: boundary node {b} misplaced"));
            }
        }
        if let Some(b) = p.boundary_leaf {
            if !set.contains(&(b as usize)) || b == p.root {
                report.boundary_placement_ok = false;
                report
                    .problems
                    .push(format!("piece {i}: bad boundary leaf {b}"));
            }
        }
    }
    report
}

/// Weighted distance by walking the macro path explicitly.
///
/// `parents` is the macro tree (0-based); weights use `u64::MAX` as
/// infinity.
pub fn naive_weighted_distance(
    parents: &[Option<usize>],
    w1: &[u64],
    w2: &[u64],
    w3: &[u64],
    v: usize,
    target: usize,
) -> u64 {
    let ancestors = |mut a: usize| {
        let mut out = vec![a];
        while let Some(p) = parents[a] {
            out.push(p);
            a = p;
        }
        out
    };
    let up_v = ancestors(v);
    let up_t = ancestors(target);
    let meet = *up_v.iter().find(|a| up_t.contains(a)).unwrap();
    let mut path: Vec<usize> = up_v.iter().copied().take_while(|&a| a != meet).collect();
    path.push(meet);
    let down: Vec<usize> = up_t.iter().copied().take_while(|&a| a != meet).collect();
    path.extend(down.into_iter().rev());

    let on_path: BTreeSet<usize> = path.iter().copied().collect();
    let mut total: u64 = 0;
    for &u in &path {
        if u == v || u == target {
            continue;
        }
        if parents[u].is_some_and(|p| on_path.contains(&p)) {
            total = total.saturating_add(w1[u]);
        }
    }
    let target_is_ancestor = up_v.contains(&target);
    let entry = if target_is_ancestor {
        w3[target]
    } else {
        w2[target]
    };
    total.saturating_add(entry)
}
