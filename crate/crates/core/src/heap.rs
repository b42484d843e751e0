use alloc::collections::BTreeSet;

use crate::engine::{EngineKind, EngineStats, FragmentPair, InvariantViolation, MinimizerEngine};
use crate::hash::KmerOrder;
use crate::{Error, SemiDynamicString};

/// Baseline engine: every current fragment lives in an ordered set keyed by
/// (value, position). Border modifications cost `O(log ℓ)`.
#[derive(Clone, Debug)]
pub struct HeapEngine {
    s: SemiDynamicString,
    set: BTreeSet<FragmentPair>,
    stats: EngineStats,
}

impl HeapEngine {
    pub fn new(order: KmerOrder) -> Self {
        HeapEngine {
            s: SemiDynamicString::new(order),
            set: BTreeSet::new(),
            stats: EngineStats::default(),
        }
    }

    pub fn string(&self) -> &SemiDynamicString {
        &self.s
    }

    fn insert(&mut self, created: Option<FragmentPair>) {
        self.stats.ops += 1;
        if let Some(pair) = created {
            self.stats.work += 1;
            self.set.insert(pair);
            self.stats.max_live_pairs = self.stats.max_live_pairs.max(self.set.len());
        }
    }

    fn remove(&mut self, removed: Option<FragmentPair>) {
        self.stats.ops += 1;
        if let Some(pair) = removed {
            self.stats.work += 1;
            let present = self.set.remove(&pair);
            debug_assert!(present);
        }
    }
}

impl MinimizerEngine for HeapEngine {
    fn kind(&self) -> EngineKind {
        EngineKind::Heap
    }

    fn prepend(&mut self, a: u8) -> Result<(), Error> {
        let created = self.s.prepend(a);
        self.insert(created);
        Ok(())
    }

    fn append(&mut self, a: u8) -> Result<(), Error> {
        let created = self.s.append(a);
        self.insert(created);
        Ok(())
    }

    fn delete_first(&mut self) -> Result<(), Error> {
        let removed = self.s.delete_first()?;
        self.remove(removed);
        Ok(())
    }

    fn delete_last(&mut self) -> Result<(), Error> {
        let removed = self.s.delete_last()?;
        self.remove(removed);
        Ok(())
    }

    fn minimizer(&self) -> Option<FragmentPair> {
        self.set.first().cloned()
    }

    fn start_pos(&self) -> i64 {
        self.s.start_pos()
    }

    fn len(&self) -> usize {
        self.s.len()
    }

    fn fragment_count(&self) -> usize {
        self.s.fragment_count()
    }

    fn stats(&self) -> EngineStats {
        EngineStats {
            live_pairs: self.set.len(),
            ..self.stats
        }
    }

    fn check_invariants(&self) -> Result<(), InvariantViolation> {
        if self.set.len() != self.s.fragment_count() {
            return Err(InvariantViolation("set size differs from fragment count"));
        }
        if !self.s.fragments().all(|pair| self.set.contains(&pair)) {
            return Err(InvariantViolation("a current fragment is missing from the set"));
        }
        Ok(())
    }
}
