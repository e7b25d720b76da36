//! Verification against the brute-force oracle, and latency benchmarks.

use std::fmt;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::bp::NodeId;
use crate::color_seq::Color;
use crate::error::{Error, Result};
use crate::index::{BuildParams, Index, SpaceReport, Structure};
use crate::oracle::{all_nearest, PointerTree};
use crate::tree_file::TreeFile;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QuerySet {
    /// Every node against every color.
    All,
    Random {
        count: usize,
        seed: u64,
    },
}

/// Queries in a fixed order. Random queries draw the node uniformly and the
/// color uniformly from `1..=sigma`.
pub fn query_list(n: usize, sigma: u32, set: QuerySet) -> Vec<(NodeId, Color)> {
    match set {
        QuerySet::All => (1..=n)
            .flat_map(|x| (1..=sigma).map(move |a| (NodeId::new(x), a)))
            .collect(),
        QuerySet::Random { count, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            (0..count)
                .map(|_| {
                    (
                        NodeId::new(rng.random_range(1..=n)),
                        rng.random_range(1..=sigma),
                    )
                })
                .collect()
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mismatch {
    pub x: NodeId,
    pub alpha: Color,
    /// Oracle distance, `None` when the color is absent.
    pub expected: Option<usize>,
    pub got: Result<(NodeId, usize)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerifyReport {
    pub checked: usize,
    pub mismatches: Vec<Mismatch>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.mismatches.is_empty()
    }
}

impl fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for m in self.mismatches.iter().take(20) {
            let got = match &m.got {
                Ok((u, d)) => format!("{u} {d}"),
                Err(e) => format!("error: {e}"),
            };
            let expected = m.expected.map_or("none".to_string(), |d| d.to_string());
            writeln!(
                f,
                "mismatch x={} alpha={} expected={expected} got={got}",
                m.x, m.alpha
            )?;
        }
        let verdict = if self.passed() { "PASS" } else { "FAIL" };
        writeln!(
            f,
            "{verdict} checked={} mismatches={}",
            self.checked,
            self.mismatches.len()
        )
    }
}

/// Checks `index` against a BFS over `file`. A returned node must be an
/// `alpha`-node at the oracle's minimum distance; absent colors must be
/// reported as errors.
pub fn verify(file: &TreeFile, index: &Index, queries: &[(NodeId, Color)]) -> Result<VerifyReport> {
    if index.tree() != &file.tree || index.colors() != &file.colors {
        return Err(Error::Format(
            "index was built from a different tree".into(),
        ));
    }
    let pt = PointerTree::from_parens(&file.tree.to_paren_string(), &file.colors.to_vec());
    let mismatches: Vec<Mismatch> = queries
        .par_iter()
        .filter_map(|&(x, alpha)| {
            let best = all_nearest(&pt, x.rank(), alpha);
            let expected = best.first().map(|&u| pt.distance(x.rank(), u));
            let got = index.query(x, alpha);
            let ok = match (&got, expected) {
                (Err(Error::ColorAbsent(_)), None) => true,
                (Ok((u, d)), Some(e)) => *d == e && best.contains(&u.rank()),
                _ => false,
            };
            (!ok).then_some(Mismatch {
                x,
                alpha,
                expected,
                got,
            })
        })
        .collect();
    Ok(VerifyReport {
        checked: queries.len(),
        mismatches,
    })
}

#[derive(Debug, Clone)]
pub struct BenchReport {
    pub structure: Structure,
    pub n: usize,
    pub sigma: u32,
    pub queries: usize,
    pub build_ms: f64,
    pub median_ns: u64,
    pub p99_ns: u64,
    pub space: SpaceReport,
}

impl fmt::Display for BenchReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let structure = match self.structure {
            Structure::Small => "small",
            _ => "large",
        };
        writeln!(f, "structure={structure}")?;
        writeln!(f, "n={}", self.n)?;
        writeln!(f, "sigma={}", self.sigma)?;
        writeln!(f, "queries={}", self.queries)?;
        writeln!(f, "build_ms={:.3}", self.build_ms)?;
        writeln!(f, "query_median_ns={}", self.median_ns)?;
        writeln!(f, "query_p99_ns={}", self.p99_ns)?;
        write!(f, "{}", self.space)
    }
}

/// Builds once, then times `count` queries one at a time. The query node is
/// uniform; the color is that of a uniformly drawn node, so frequent colors
/// are asked about in proportion to their frequency.
pub fn bench(
    file: &TreeFile,
    structure: Structure,
    params: BuildParams,
    count: usize,
    seed: u64,
    k: usize,
) -> Result<BenchReport> {
    let start = Instant::now();
    let index = Index::build(file.tree.clone(), file.colors.clone(), structure, params)?;
    let build_ms = start.elapsed().as_secs_f64() * 1e3;
    let n = file.tree.len();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let queries: Vec<(NodeId, Color)> = (0..count)
        .map(|_| {
            let x = NodeId::new(rng.random_range(1..=n));
            let alpha = file.colors.at(rng.random_range(1..=n));
            (x, alpha)
        })
        .collect();
    let mut times = time_queries(&index, &queries)?;
    times.sort_unstable();
    let pick =
        |q: f64| times.get(((times.len() as f64 * q) as usize).min(times.len().saturating_sub(1)));
    Ok(BenchReport {
        structure: index.structure(),
        n,
        sigma: file.colors.sigma(),
        queries: count,
        build_ms,
        median_ns: pick(0.5).copied().unwrap_or(0),
        p99_ns: pick(0.99).copied().unwrap_or(0),
        space: index.space_report(k),
    })
}

/// Wall time of each query in nanoseconds, in query order.
pub fn time_queries(index: &Index, queries: &[(NodeId, Color)]) -> Result<Vec<u64>> {
    queries
        .iter()
        .map(|&(x, alpha)| {
            let start = Instant::now();
            let answer = index.query(x, alpha);
            let ns = start.elapsed().as_nanos() as u64;
            std::hint::black_box(answer?);
            Ok(ns)
        })
        .collect()
}
