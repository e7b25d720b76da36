#![allow(dead_code)]

use nct::oracle::PointerTree;
use nct::{BPTree, Color, ColorSeq};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub struct Instance {
    pub tree: BPTree,
    pub colors: ColorSeq,
    pub raw: Vec<Color>,
    pub sigma: u32,
    /// 0-based preorder parent array.
    pub parents: Vec<Option<usize>>,
    pub pt: PointerTree,
}

impl Instance {
    pub fn new(parens: &str, raw: Vec<Color>, sigma: u32) -> Self {
        let tree = BPTree::parse(parens).unwrap();
        let colors = ColorSeq::new(&raw, sigma).unwrap();
        let pt = PointerTree::from_parens(parens, &raw);
        let parents = tree.to_parents();
        Instance {
            tree,
            colors,
            raw,
            sigma,
            parents,
            pt,
        }
    }

    pub fn n(&self) -> usize {
        self.raw.len()
    }
}

/// Renumbers a tree given in insertion order (`parent[i] < i`) by preorder.
pub fn to_preorder(insert_parent: &[Option<usize>]) -> Vec<Option<usize>> {
    let n = insert_parent.len();
    let mut children = vec![Vec::new(); n];
    for (i, p) in insert_parent.iter().enumerate() {
        if let Some(p) = p {
            children[*p].push(i);
        }
    }
    let mut out = Vec::with_capacity(n);
    let mut stack = vec![(0usize, None)];
    while let Some((v, p)) = stack.pop() {
        let id = out.len();
        out.push(p);
        stack.extend(children[v].iter().rev().map(|&c| (c, Some(id))));
    }
    out
}

fn parens_of(parents: &[Option<usize>]) -> String {
    BPTree::from_parents(parents).unwrap().to_paren_string()
}

/// Node `i` attaches to a uniform node among the previous `window`; a window
/// of 1 gives a path, a window of `n` uniform attachment.
pub fn random_instance(seed: u64, n: usize, sigma: u32, window: usize) -> Instance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let insert: Vec<Option<usize>> = (0..n)
        .map(|i| (i > 0).then(|| rng.random_range(i.saturating_sub(window.max(1))..i)))
        .collect();
    let raw: Vec<Color> = (0..n).map(|_| rng.random_range(1..=sigma)).collect();
    Instance::new(&parens_of(&to_preorder(&insert)), raw, sigma)
}

/// Colors drawn with weight proportional to `1/c`, so low colors are
/// frequent and high colors rare.
pub fn skewed_instance(seed: u64, n: usize, sigma: u32, window: usize) -> Instance {
    let mut inst = random_instance(seed, n, sigma, window);
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
    let weights: Vec<f64> = (1..=sigma).map(|c| 1.0 / c as f64).collect();
    let total: f64 = weights.iter().sum();
    let raw: Vec<Color> = (0..n)
        .map(|_| {
            let mut r = rng.random::<f64>() * total;
            for (i, w) in weights.iter().enumerate() {
                if r < *w {
                    return i as Color + 1;
                }
                r -= w;
            }
            sigma
        })
        .collect();
    inst = Instance::new(&inst.tree.to_paren_string(), raw, sigma);
    inst
}

/// Every balanced parenthesis string with `n` pairs that encodes one tree.
pub fn all_shapes(n: usize) -> Vec<String> {
    fn go(open: usize, close: usize, n: usize, cur: &mut String, out: &mut Vec<String>) {
        if cur.len() == 2 * n {
            out.push(cur.clone());
            return;
        }
        if open < n {
            cur.push('(');
            go(open + 1, close, n, cur, out);
            cur.pop();
        }
        // the root must stay open until the very end
        if close < open && (close + 1 < open || cur.len() + 1 == 2 * n) {
            cur.push(')');
            go(open, close + 1, n, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, 0, n, &mut String::new(), &mut out);
    out
}
