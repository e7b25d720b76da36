//! Either index behind one type, its on-disk format and its space report.
//!
//! Index file layout (all integers little-endian):
//!
//! ```text
//! magic    8 bytes  "NCTIDX\0\0"
//! version  u32      1
//! kind     u8       1 = small alphabet, 2 = large alphabet
//! tree     u64 length + bincode(BPTree)
//! colors   u64 length + bincode(ColorSeq)
//! body     u64 length + bincode(SmallSigmaIndex or LargeSigmaIndex without
//!          the tree and colors)
//! ```

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::bp::{BPTree, NodeId};
use crate::color_seq::{Color, ColorSeq};
use crate::error::{Error, Result};
use crate::large_sigma::{LargeParams, LargeSigmaIndex};
use crate::small_sigma::{SmallParams, SmallSigmaIndex};

pub const MAGIC: &[u8; 8] = b"NCTIDX\0\0";
pub const VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Structure {
    Small,
    Large,
    /// Small when `sigma <= 8`, large otherwise.
    Auto,
}

impl Structure {
    pub fn resolve(self, sigma: u32) -> Structure {
        match self {
            Structure::Auto if sigma <= 8 => Structure::Small,
            Structure::Auto => Structure::Large,
            s => s,
        }
    }
}

/// Optional overrides; `None` means the structure's default.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct BuildParams {
    pub micro: Option<usize>,
    pub mini: Option<usize>,
    pub threshold: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
#[allow(clippy::large_enum_variant)]
pub enum Index {
    Small(SmallSigmaIndex),
    Large(LargeSigmaIndex),
}

impl Index {
    pub fn build(
        tree: BPTree,
        colors: ColorSeq,
        structure: Structure,
        params: BuildParams,
    ) -> Result<Self> {
        let n = tree.len();
        match structure.resolve(colors.sigma()) {
            Structure::Small => {
                let d = SmallParams::defaults(n, colors.sigma());
                let micro = params.micro.unwrap_or(d.micro);
                let mini = params.mini.unwrap_or(d.mini.max(micro));
                SmallSigmaIndex::build(tree, colors, SmallParams { micro, mini }).map(Index::Small)
            }
            _ => {
                let d = LargeParams::defaults(n);
                let threshold = params.threshold.unwrap_or(d.threshold);
                LargeSigmaIndex::build(tree, colors, LargeParams { threshold }).map(Index::Large)
            }
        }
    }

    pub fn structure(&self) -> Structure {
        match self {
            Index::Small(_) => Structure::Small,
            Index::Large(_) => Structure::Large,
        }
    }

    pub fn tree(&self) -> &BPTree {
        match self {
            Index::Small(i) => i.tree(),
            Index::Large(i) => i.tree(),
        }
    }

    pub fn colors(&self) -> &ColorSeq {
        match self {
            Index::Small(i) => i.colors(),
            Index::Large(i) => i.colors(),
        }
    }

    pub fn query(&self, x: NodeId, alpha: Color) -> Result<(NodeId, usize)> {
        match self {
            Index::Small(i) => i.query(x, alpha),
            Index::Large(i) => i.query(x, alpha),
        }
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let (kind, body) = match self {
            Index::Small(i) => (1u8, i.body_bytes()),
            Index::Large(i) => (2u8, i.body_bytes()),
        };
        let mut out = Vec::new();
        out.extend_from_slice(MAGIC);
        out.extend_from_slice(&VERSION.to_le_bytes());
        out.push(kind);
        for blob in [encode(self.tree()), encode(self.colors()), body] {
            out.extend_from_slice(&(blob.len() as u64).to_le_bytes());
            out.extend_from_slice(&blob);
        }
        out
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self> {
        let mut r = Reader { bytes };
        if r.take(8)? != MAGIC {
            return Err(Error::Format("not an index file".into()));
        }
        let version = u32::from_le_bytes(r.take(4)?.try_into().unwrap());
        if version != VERSION {
            return Err(Error::Format(format!("unsupported version {version}")));
        }
        let kind = r.take(1)?[0];
        let tree: BPTree = decode(r.blob()?)?;
        let colors: ColorSeq = decode(r.blob()?)?;
        let body = r.blob()?;
        if !r.bytes.is_empty() {
            return Err(Error::Format("trailing bytes".into()));
        }
        if tree.len() != colors.len() {
            return Err(Error::Format("tree and colors disagree in length".into()));
        }
        match kind {
            1 => SmallSigmaIndex::from_body(tree, colors, body).map(Index::Small),
            2 => LargeSigmaIndex::from_body(tree, colors, body).map(Index::Large),
            k => Err(Error::Format(format!("unknown index kind {k}"))),
        }
    }

    /// Space report with entropy references for order `k`.
    pub fn space_report(&self, k: usize) -> SpaceReport {
        let tree = self.tree();
        let colors = self.colors();
        let mut components = vec![
            ("topology".to_string(), tree.topology_bits()),
            ("topology.directory".to_string(), tree.directory_bits()),
            ("colors.raw".to_string(), colors.raw_bits()),
            ("colors.directory".to_string(), colors.directory_bits()),
        ];
        let extra = match self {
            Index::Small(i) => i.component_bits(),
            Index::Large(i) => i.component_bits(),
        };
        components.extend(
            extra
                .into_iter()
                .map(|(name, bits)| (name.to_string(), bits)),
        );
        let n = tree.len() as f64;
        SpaceReport {
            n: tree.len(),
            k,
            total: components.iter().map(|c| c.1).sum(),
            components,
            nh0: n * colors.entropy_h0(),
            nhk: n * colors.entropy_hk(k),
        }
    }
}

pub(crate) fn encode<T: Serialize>(value: &T) -> Vec<u8> {
    bincode::serialize(value).expect("in-memory serialization cannot fail")
}

pub(crate) fn decode<'a, T: Deserialize<'a>>(bytes: &'a [u8]) -> Result<T> {
    bincode::deserialize(bytes).map_err(|e| Error::Format(e.to_string()))
}

struct Reader<'a> {
    bytes: &'a [u8],
}

impl<'a> Reader<'a> {
    fn take(&mut self, len: usize) -> Result<&'a [u8]> {
        if self.bytes.len() < len {
            return Err(Error::Format("truncated index file".into()));
        }
        let (head, rest) = self.bytes.split_at(len);
        self.bytes = rest;
        Ok(head)
    }

    fn blob(&mut self) -> Result<&'a [u8]> {
        let len = u64::from_le_bytes(self.take(8)?.try_into().unwrap());
        let len = usize::try_from(len).map_err(|_| Error::Format("blob too large".into()))?;
        self.take(len)
    }
}

/// Measured bits per component plus entropy references.
#[derive(Debug, Clone, PartialEq)]
pub struct SpaceReport {
    pub n: usize,
    pub k: usize,
    pub components: Vec<(String, u64)>,
    pub total: u64,
    /// `n * H0(P_T)` in bits.
    pub nh0: f64,
    /// `n * Hk(P_T)` in bits.
    pub nhk: f64,
}

impl SpaceReport {
    pub fn component(&self, name: &str) -> Option<u64> {
        self.components.iter().find(|c| c.0 == name).map(|c| c.1)
    }

    /// Everything except the raw color string.
    pub fn auxiliary(&self) -> u64 {
        self.total - self.component("colors.raw").unwrap_or(0)
    }
}

impl fmt::Display for SpaceReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (name, bits) in &self.components {
            writeln!(f, "space.{name}={bits}")?;
        }
        writeln!(f, "space.total={}", self.total)?;
        writeln!(f, "ref.2n={}", 2 * self.n)?;
        writeln!(f, "ref.nH0={:.3}", self.nh0)?;
        writeln!(f, "ref.nH{}={:.3}", self.k, self.nhk)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t1() -> (BPTree, ColorSeq) {
        (
            BPTree::parse("(((())(()))(()()))").unwrap(),
            ColorSeq::new(&[1, 2, 3, 1, 2, 3, 2, 1, 3], 3).unwrap(),
        )
    }

    #[test]
    fn auto_selection() {
        assert_eq!(Structure::Auto.resolve(8), Structure::Small);
        assert_eq!(Structure::Auto.resolve(9), Structure::Large);
        assert_eq!(Structure::Large.resolve(2), Structure::Large);
    }

    #[test]
    fn bytes_round_trip() {
        for s in [Structure::Small, Structure::Large] {
            let (t, c) = t1();
            let idx = Index::build(t, c, s, BuildParams::default()).unwrap();
            let bytes = idx.to_bytes();
            assert_eq!(&bytes[..8], MAGIC);
            let back = Index::from_bytes(&bytes).unwrap();
            assert_eq!(back, idx);
            assert_eq!(back.query(NodeId::new(6), 1), Ok((NodeId::new(1), 3)));
        }
    }

    #[test]
    fn corrupt_bytes_rejected() {
        let (t, c) = t1();
        let bytes = Index::build(t, c, Structure::Large, BuildParams::default())
            .unwrap()
            .to_bytes();
        assert!(Index::from_bytes(&bytes[..bytes.len() - 1]).is_err());
        assert!(Index::from_bytes(b"garbage").is_err());
        let mut wrong_kind = bytes.clone();
        wrong_kind[12] = 9;
        assert!(Index::from_bytes(&wrong_kind).is_err());
    }

    #[test]
    fn report_sums() {
        let (t, c) = t1();
        let r = Index::build(t, c, Structure::Small, BuildParams::default())
            .unwrap()
            .space_report(1);
        assert_eq!(r.component("topology"), Some(18));
        assert_eq!(r.total, r.components.iter().map(|c| c.1).sum::<u64>());
        assert!(r.nhk <= r.nh0 + 1e-9);
        assert!(r.to_string().contains("space.total="));
    }
}
