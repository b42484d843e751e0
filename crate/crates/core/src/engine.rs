use alloc::boxed::Box;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;
use core::str::FromStr;

use crate::hash::{KmerOrder, OrderValue};
use crate::{
    BlockLayout, DequeEngine, Error, HeapEngine, OracleEngine, TwoLayerEngine, TwoStackEngine,
};

/// One length-`k` fragment: its absolute starting position and its value.
///
/// Pairs are ordered by value first and position second, so the minimum of
/// any set of pairs is the leftmost occurrence of the smallest fragment.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FragmentPair {
    pub pos: i64,
    pub value: OrderValue,
}

impl FragmentPair {
    pub fn new(pos: i64, value: OrderValue) -> Self {
        FragmentPair { pos, value }
    }
}

impl Ord for FragmentPair {
    fn cmp(&self, other: &Self) -> Ordering {
        self.value
            .cmp(&other.value)
            .then_with(|| self.pos.cmp(&other.pos))
    }
}

impl PartialOrd for FragmentPair {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A border modification.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BorderOp {
    Prepend(u8),
    Append(u8),
    DeleteFirst,
    DeleteLast,
}

impl BorderOp {
    pub fn name(&self) -> &'static str {
        match self {
            BorderOp::Prepend(_) => "prepend",
            BorderOp::Append(_) => "append",
            BorderOp::DeleteFirst => "delete_first",
            BorderOp::DeleteLast => "delete_last",
        }
    }
}

impl fmt::Display for BorderOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BorderOp::Prepend(a) => write!(f, "P{}", *a as char),
            BorderOp::Append(a) => write!(f, "A{}", *a as char),
            BorderOp::DeleteFirst => f.write_str("F"),
            BorderOp::DeleteLast => f.write_str("L"),
        }
    }
}

/// Stable engine names used on the command line and in CSV output.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum EngineKind {
    Oracle,
    Heap,
    Deque,
    TwoStack,
    TwoLayer,
}

impl EngineKind {
    pub const ALL: [EngineKind; 5] = [
        EngineKind::Oracle,
        EngineKind::Heap,
        EngineKind::Deque,
        EngineKind::TwoStack,
        EngineKind::TwoLayer,
    ];

    pub fn name(self) -> &'static str {
        match self {
            EngineKind::Oracle => "oracle",
            EngineKind::Heap => "heap",
            EngineKind::Deque => "deque",
            EngineKind::TwoStack => "two-stack",
            EngineKind::TwoLayer => "two-layer",
        }
    }
}

impl fmt::Display for EngineKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for EngineKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        EngineKind::ALL
            .into_iter()
            .find(|kind| kind.name() == s)
            .ok_or(Error::InvalidParameter(
                "engine must be one of oracle, heap, deque, two-stack, two-layer",
            ))
    }
}

/// Instrumentation shared by all engines.
///
/// `work` counts elementary structure steps (pair pushes, pops and pair
/// computations during rebuilds); `witness_violations` counts amortization
/// charges that did not hold and must stay zero.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct EngineStats {
    pub ops: u64,
    pub work: u64,
    pub rebuilds: u64,
    pub rebuild_work: u64,
    pub recomputes: u64,
    pub flushes: u64,
    pub live_pairs: usize,
    pub max_live_pairs: usize,
    pub witness_violations: u64,
}

/// A structural invariant that a full scan found broken.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InvariantViolation(pub &'static str);

impl fmt::Display for InvariantViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.0)
    }
}

/// The common contract of all minimizer engines: border modifications on an
/// owned semi-dynamic string plus an `O(1)` minimizer query.
pub trait MinimizerEngine {
    fn kind(&self) -> EngineKind;

    fn prepend(&mut self, a: u8) -> Result<(), Error>;
    fn append(&mut self, a: u8) -> Result<(), Error>;
    fn delete_first(&mut self) -> Result<(), Error>;
    fn delete_last(&mut self) -> Result<(), Error>;

    /// The minimal fragment by (value, position); `None` while the string is
    /// shorter than `k`.
    fn minimizer(&self) -> Option<FragmentPair>;

    fn start_pos(&self) -> i64;
    fn len(&self) -> usize;
    fn fragment_count(&self) -> usize;

    fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn stats(&self) -> EngineStats;

    /// Full scan of the internal structure against the string. Test-only in
    /// spirit: costs `O(ℓ)` or more.
    fn check_invariants(&self) -> Result<(), InvariantViolation> {
        Ok(())
    }

    fn apply(&mut self, op: BorderOp) -> Result<(), Error> {
        match op {
            BorderOp::Prepend(a) => self.prepend(a),
            BorderOp::Append(a) => self.append(a),
            BorderOp::DeleteFirst => self.delete_first(),
            BorderOp::DeleteLast => self.delete_last(),
        }
    }
}

/// Builds a boxed engine of the given kind over an empty string.
/// `layout` only matters for [`EngineKind::TwoLayer`].
pub fn build_engine(
    kind: EngineKind,
    order: KmerOrder,
    layout: BlockLayout,
) -> Box<dyn MinimizerEngine + Send> {
    match kind {
        EngineKind::Oracle => Box::new(OracleEngine::new(order)),
        EngineKind::Heap => Box::new(HeapEngine::new(order)),
        EngineKind::Deque => Box::new(DequeEngine::new(order)),
        EngineKind::TwoStack => Box::new(TwoStackEngine::new(order)),
        EngineKind::TwoLayer => Box::new(TwoLayerEngine::new(order, layout)),
    }
}

/// Applies `ops` in order, querying the minimizer after each one.
pub fn replay(
    engine: &mut dyn MinimizerEngine,
    ops: &[BorderOp],
) -> Result<Vec<Option<FragmentPair>>, Error> {
    ops.iter()
        .enumerate()
        .map(|(index, &op)| {
            engine.apply(op).map_err(|source| Error::AtOp {
                index,
                source: Box::new(source),
            })?;
            Ok(engine.minimizer())
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hash::LexKey;

    #[test]
    fn pairs_order_by_value_then_position() {
        let a = FragmentPair::new(5, OrderValue::Krf(3));
        let b = FragmentPair::new(2, OrderValue::Krf(3));
        let c = FragmentPair::new(9, OrderValue::Krf(1));
        assert!(b < a);
        assert!(c < b);
        let x = FragmentPair::new(0, OrderValue::Lex(LexKey::new(b"AC")));
        let y = FragmentPair::new(-4, OrderValue::Lex(LexKey::new(b"CA")));
        assert!(x < y);
    }

    #[test]
    fn engine_names_round_trip() {
        for kind in EngineKind::ALL {
            assert_eq!(kind.name().parse::<EngineKind>().unwrap(), kind);
        }
        assert!("stack".parse::<EngineKind>().is_err());
    }

    #[test]
    fn replay_reports_failing_index() {
        let mut engine = build_engine(
            EngineKind::Deque,
            KmerOrder::lex(1).unwrap(),
            BlockLayout::Progressing,
        );
        let ops = [BorderOp::Append(b'a'), BorderOp::Append(b'b'), BorderOp::DeleteLast];
        match replay(engine.as_mut(), &ops) {
            Err(Error::AtOp { index: 2, source }) => {
                assert!(matches!(*source, Error::Unsupported { .. }))
            }
            other => panic!("unexpected {other:?}"),
        }
    }
}
