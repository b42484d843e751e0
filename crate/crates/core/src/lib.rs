//! Semi-dynamic minimizer data structures.
//!
//! A *semi-dynamic string* is a string that can only be modified at its
//! borders: a letter may be prepended, appended, or removed from either end.
//! The engines in this crate maintain the minimizer of such a string, i.e.
//! the leftmost starting position of the smallest length-`k` fragment under a
//! fixed order on `k`-mers, across arbitrary sequences of border
//! modifications:
//!
//! - [`OracleEngine`]: linear rescan on every query; ground truth.
//! - [`HeapEngine`]: ordered set of all fragments, `O(log ℓ)` per update.
//! - [`DequeEngine`]: the classic sliding-window deque. Supports only three of
//!   the four border modifications.
//! - [`TwoStackEngine`]: two stacks split at a pivot position with a full
//!   rebuild when one side runs dry; all four modifications in amortized
//!   `O(1)`.
//! - [`TwoLayerEngine`]: the two-stack idea applied to blocks of fragments,
//!   using `O(c + ℓ/c)` or `O(√ℓ)` space depending on the [`BlockLayout`].
//!
//! On top of the engines, [`scan`] computes the set of window minimizers of a
//! whole string (including an `O(√w)` working-space variant) and [`trie`]
//! computes minimizers of all root-ward paths of a fixed length in a trie.
//!
//! The crate is `no_std` and only needs `alloc`.

#![no_std]
#![warn(missing_debug_implementations, rust_2018_idioms)]

extern crate alloc;

#[cfg(test)]
extern crate std;

mod blocks;
mod deque;
mod engine;
mod error;
mod hash;
mod heap;
mod oracle;
pub mod scan;
mod sdstring;
mod stacks;
pub mod trie;
mod two_layer;
mod two_stack;

pub use blocks::{BlockLayout, BlockScheme};
pub use deque::{DequeEngine, Orientation};
pub use engine::{
    build_engine, replay, BorderOp, EngineKind, EngineStats, FragmentPair, InvariantViolation,
    MinimizerEngine,
};
pub use error::Error;
pub use hash::{HashConfig, KmerOrder, LexKey, OrderMode, OrderValue, MERSENNE_61};
pub use heap::HeapEngine;
pub use oracle::{oracle_minimizer, OracleEngine};
pub use sdstring::{FragmentWalk, LetterBuffer, SemiDynamicString, TextWindow};
pub use two_layer::{BlockStack, SideView, TwoLayerEngine};
pub use two_stack::TwoStackEngine;
