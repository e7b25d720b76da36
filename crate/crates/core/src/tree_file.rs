//! Plain-text tree files and random tree generation.
//!
//! ```text
//! n sigma
//! <2n parentheses>
//! <n colors in preorder>
//! ```

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Zipf};

use crate::bp::BPTree;
use crate::color_seq::{Color, ColorSeq};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreeFile {
    pub tree: BPTree,
    pub colors: ColorSeq,
}

impl TreeFile {
    pub fn new(tree: BPTree, colors: ColorSeq) -> Result<Self> {
        if tree.len() != colors.len() {
            return Err(Error::Parse(format!(
                "{} nodes but {} colors",
                tree.len(),
                colors.len()
            )));
        }
        Ok(TreeFile { tree, colors })
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text.lines();
        let mut next = |what: &str| {
            lines
                .next()
                .ok_or_else(|| Error::Parse(format!("missing {what} line")))
        };
        let header: Vec<&str> = next("header")?.split_whitespace().collect();
        let [n, sigma] = header[..] else {
            return Err(Error::Parse("header must be \"n sigma\"".into()));
        };
        let n: usize = n
            .parse()
            .map_err(|_| Error::Parse(format!("bad node count {n:?}")))?;
        let sigma: u32 = sigma
            .parse()
            .map_err(|_| Error::Parse(format!("bad alphabet size {sigma:?}")))?;
        let parens = next("parenthesis")?.trim();
        if parens.len() != 2 * n {
            return Err(Error::Parse(format!(
                "expected {} parentheses, found {}",
                2 * n,
                parens.len()
            )));
        }
        let tree = BPTree::parse(parens)?;
        let colors = next("color")?
            .split_whitespace()
            .map(|c| {
                c.parse::<Color>()
                    .map_err(|_| Error::Parse(format!("bad color {c:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        if let Some(extra) = lines.find(|l| !l.trim().is_empty()) {
            return Err(Error::Parse(format!("trailing content {extra:?}")));
        }
        if colors.len() != n {
            return Err(Error::Parse(format!(
                "expected {n} colors, found {}",
                colors.len()
            )));
        }
        TreeFile::new(tree, ColorSeq::new(&colors, sigma)?)
    }

    pub fn to_text(&self) -> String {
        let colors: Vec<String> = self.colors.to_vec().iter().map(|c| c.to_string()).collect();
        format!(
            "{} {}\n{}\n{}\n",
            self.tree.len(),
            self.colors.sigma(),
            self.tree.to_paren_string(),
            colors.join(" ")
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ColorModel {
    Uniform,
    /// Zipf-distributed colors with exponent `s`; color 1 is the most common.
    Zipf(f64),
}

/// Random tree by uniform attachment: node `i` picks its parent uniformly
/// among nodes `1..i`. Nodes are then renumbered in preorder, children kept
/// in insertion order.
pub fn generate(n: usize, sigma: u32, seed: u64, model: ColorModel) -> Result<TreeFile> {
    if n == 0 || sigma == 0 {
        return Err(Error::ParameterInfeasible(
            "n and sigma must be positive".into(),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut children: Vec<Vec<usize>> = vec![Vec::new(); n];
    for i in 1..n {
        let p = rng.random_range(0..i);
        children[p].push(i);
    }
    let mut preorder_parent: Vec<Option<usize>> = Vec::with_capacity(n);
    let mut stack = vec![(0usize, None)];
    while let Some((v, p)) = stack.pop() {
        let id = preorder_parent.len();
        preorder_parent.push(p);
        stack.extend(children[v].iter().rev().map(|&c| (c, Some(id))));
    }
    let tree = BPTree::from_parents(&preorder_parent)?;
    let colors: Vec<Color> = match model {
        ColorModel::Uniform => (0..n).map(|_| rng.random_range(1..=sigma)).collect(),
        ColorModel::Zipf(s) => {
            let zipf = Zipf::new(sigma as f64, s)
                .map_err(|e| Error::ParameterInfeasible(format!("zipf: {e}")))?;
            (0..n).map(|_| zipf.sample(&mut rng) as Color).collect()
        }
    };
    TreeFile::new(tree, ColorSeq::new(&colors, sigma)?)
}
