//! Colored ordinal trees with nearest-colored-node queries.
//!
//! A tree is stored as balanced parentheses plus its colors in preorder.
//! Given a node `x` and a color `alpha`, the indexes return an `alpha`-node
//! at minimum tree distance from `x`. [`SmallSigmaIndex`] targets small
//! alphabets and [`LargeSigmaIndex`] everything else.

pub mod bits;
pub mod bp;
pub mod color_seq;
pub mod decomp;
pub mod error;
pub mod harness;
pub mod index;
pub mod large_sigma;
pub mod oracle;
pub mod sampled_rmq;
pub mod small_sigma;
pub mod tree_file;

pub use bp::{BPTree, NodeId};
pub use color_seq::{Color, ColorSeq};
pub use error::{Error, Result};
pub use index::{BuildParams, Index, SpaceReport, Structure};
pub use large_sigma::{LargeParams, LargeSigmaIndex};
pub use small_sigma::{SmallParams, SmallSigmaIndex};
pub use tree_file::{ColorModel, TreeFile};
