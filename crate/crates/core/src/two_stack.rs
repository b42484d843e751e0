use alloc::vec::Vec;

use crate::engine::{EngineKind, EngineStats, FragmentPair, InvariantViolation, MinimizerEngine};
use crate::hash::KmerOrder;
use crate::stacks::{check_stack, push, Side};
use crate::{Error, SemiDynamicString};

/// Minimizer engine supporting all four border modifications in amortized
/// `O(1)`.
///
/// Fragments starting before the pivot position are kept in a left stack,
/// the others in a right stack, each holding only the pairs that can still
/// become the minimum of its side. Insertions touch one stack in `O(1)`.
/// Deleting from a side whose fragments are all gone moves the pivot back
/// to the middle of the string and rebuilds both stacks by streaming
/// insertions outward from it; the `O(ℓ)` rebuild is paid for by the
/// modifications since the previous one.
#[derive(Clone, Debug)]
pub struct TwoStackEngine {
    s: SemiDynamicString,
    /// top is the leftmost stored pair
    left: Vec<FragmentPair>,
    right: Vec<FragmentPair>,
    pivot: i64,
    left_count: usize,
    right_count: usize,
    ops_since_rebuild: u64,
    stats: EngineStats,
}

impl TwoStackEngine {
    pub fn new(order: KmerOrder) -> Self {
        TwoStackEngine {
            s: SemiDynamicString::new(order),
            left: Vec::new(),
            right: Vec::new(),
            pivot: 0,
            left_count: 0,
            right_count: 0,
            ops_since_rebuild: 0,
            stats: EngineStats::default(),
        }
    }

    /// Engine over `letters`, built by appends; the first letter sits at
    /// position 0.
    pub fn from_letters(order: KmerOrder, letters: &[u8]) -> Self {
        let mut e = Self::new(order);
        for &a in letters {
            e.push_back(a);
        }
        e
    }

    pub fn string(&self) -> &SemiDynamicString {
        &self.s
    }

    pub fn pivot(&self) -> i64 {
        self.pivot
    }

    /// Left stack from bottom to top; the top has the smallest position.
    pub fn left_stack(&self) -> &[FragmentPair] {
        &self.left
    }

    /// Right stack from bottom to top; the top has the largest position.
    pub fn right_stack(&self) -> &[FragmentPair] {
        &self.right
    }

    pub fn left_count(&self) -> usize {
        self.left_count
    }

    pub fn right_count(&self) -> usize {
        self.right_count
    }

    fn record_live(&mut self) {
        let live = self.left.len() + self.right.len();
        self.stats.max_live_pairs = self.stats.max_live_pairs.max(live);
    }

    fn push_back(&mut self, a: u8) {
        self.stats.ops += 1;
        self.ops_since_rebuild += 1;
        if let Some(pair) = self.s.append(a) {
            if self.left_count + self.right_count == 0 {
                self.pivot = pair.pos;
            }
            self.right_count += 1;
            if push(Side::Right, &mut self.right, pair) {
                self.stats.work += 1;
            }
            self.record_live();
        }
    }

    /// Rebuilds both stacks around the middle of the string. Triggered
    /// automatically; exposed for tests and for callers that want a balanced
    /// structure after bulk loading.
    pub fn rebuild(&mut self) {
        match self.s.first_fragment_pos() {
            Some(first) => {
                let spread = (self.s.fragment_count() - 1) as i64;
                self.fill(first + spread / 2);
            }
            None => self.fill(0),
        }
    }

    /// Rebuilds both stacks with an explicit pivot, which must lie in
    /// `[first fragment, last fragment + 1]`.
    pub fn rebuild_at(&mut self, pivot: i64) -> Result<(), Error> {
        match (self.s.first_fragment_pos(), self.s.last_fragment_pos()) {
            (Some(lo), Some(hi)) if lo <= pivot && pivot <= hi + 1 => {
                self.fill(pivot);
                Ok(())
            }
            _ => Err(Error::InvalidParameter("pivot outside the fragment range")),
        }
    }

    fn fill(&mut self, pivot: i64) {
        self.left.clear();
        self.right.clear();
        self.pivot = pivot;
        let (Some(first), Some(last)) = (self.s.first_fragment_pos(), self.s.last_fragment_pos())
        else {
            self.left_count = 0;
            self.right_count = 0;
            return;
        };
        if pivot > first {
            for pair in self.s.walk_left(pivot - 1) {
                push(Side::Left, &mut self.left, pair);
            }
        }
        if pivot <= last {
            for pair in self.s.walk_right(pivot) {
                push(Side::Right, &mut self.right, pair);
            }
        }
        self.left_count = (pivot - first) as usize;
        self.right_count = (last + 1 - pivot) as usize;
        let work = self.s.fragment_count() as u64;
        self.stats.work += work;
        self.stats.rebuild_work += work;
        self.record_live();
    }

    /// A deletion hit an empty side: the fragment it removed belonged to the
    /// other side, whose contents are no longer trustworthy, so everything is
    /// rebuilt from the string that remains.
    fn drained_rebuild(&mut self) {
        self.stats.rebuilds += 1;
        let cost = self.s.fragment_count() as u64;
        if cost > self.ops_since_rebuild {
            self.stats.witness_violations += 1;
        }
        self.rebuild();
        self.ops_since_rebuild = 0;
    }
}

impl MinimizerEngine for TwoStackEngine {
    fn kind(&self) -> EngineKind {
        EngineKind::TwoStack
    }

    fn prepend(&mut self, a: u8) -> Result<(), Error> {
        self.stats.ops += 1;
        self.ops_since_rebuild += 1;
        if let Some(pair) = self.s.prepend(a) {
            if self.left_count + self.right_count == 0 {
                self.pivot = pair.pos;
                self.right_count = 1;
                self.right.push(pair);
                self.stats.work += 1;
            } else {
                self.left_count += 1;
                if push(Side::Left, &mut self.left, pair) {
                    self.stats.work += 1;
                }
            }
            self.record_live();
        }
        Ok(())
    }

    fn append(&mut self, a: u8) -> Result<(), Error> {
        self.push_back(a);
        Ok(())
    }

    fn delete_first(&mut self) -> Result<(), Error> {
        let removed = self.s.delete_first()?;
        self.stats.ops += 1;
        self.ops_since_rebuild += 1;
        if let Some(removed) = removed {
            if self.left_count > 0 {
                self.left_count -= 1;
                if self.left.last().is_some_and(|top| top.pos == removed.pos) {
                    self.left.pop();
                    self.stats.work += 1;
                }
            } else {
                self.drained_rebuild();
            }
        }
        Ok(())
    }

    fn delete_last(&mut self) -> Result<(), Error> {
        let removed = self.s.delete_last()?;
        self.stats.ops += 1;
        self.ops_since_rebuild += 1;
        if let Some(removed) = removed {
            if self.right_count > 0 {
                self.right_count -= 1;
                if self.right.last().is_some_and(|top| top.pos == removed.pos) {
                    self.right.pop();
                    self.stats.work += 1;
                }
            } else {
                self.drained_rebuild();
            }
        }
        Ok(())
    }

    fn minimizer(&self) -> Option<FragmentPair> {
        match (self.left.last(), self.right.last()) {
            (Some(l), Some(r)) => Some(if r < l { r } else { l }.clone()),
            (Some(top), None) | (None, Some(top)) => Some(top.clone()),
            (None, None) => None,
        }
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
            live_pairs: self.left.len() + self.right.len(),
            ..self.stats
        }
    }

    fn check_invariants(&self) -> Result<(), InvariantViolation> {
        if !self.s.caches_consistent() {
            return Err(InvariantViolation("cached border fingerprints are stale"));
        }
        let fragments: Vec<FragmentPair> = self.s.fragments().collect();
        if fragments.is_empty() {
            if self.left_count + self.right_count > 0 || !self.left.is_empty() || !self.right.is_empty() {
                return Err(InvariantViolation("structure not empty without fragments"));
            }
            return Ok(());
        }
        let split = fragments.partition_point(|p| p.pos < self.pivot);
        if split != self.left_count || fragments.len() - split != self.right_count {
            return Err(InvariantViolation("side counts disagree with the pivot"));
        }
        let first = fragments[0].pos;
        let last = fragments[fragments.len() - 1].pos;
        if self.pivot < first || self.pivot > last + 1 {
            return Err(InvariantViolation("pivot outside the fragment range"));
        }
        check_stack(Side::Left, &self.left, &fragments[..split])?;
        check_stack(Side::Right, &self.right, &fragments[split..])
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hash::{LexKey, OrderValue};
    use crate::oracle::oracle_minimizer;
    use alloc::vec;

    const PIVOT_SAMPLE: &[u8] = b"AAGGAGGCTCCTCCTA";

    fn ranks(stack: &[FragmentPair]) -> Vec<(i64, usize)> {
        // dense lexicographic rank among the distinct 3-mers of PIVOT_SAMPLE
        let mut kmers: Vec<&[u8]> = PIVOT_SAMPLE.windows(3).collect();
        kmers.sort();
        kmers.dedup();
        stack
            .iter()
            .map(|p| match &p.value {
                OrderValue::Lex(key) => {
                    (p.pos, kmers.iter().position(|k| *k == key.as_bytes()).unwrap())
                }
                OrderValue::Krf(_) => unreachable!(),
            })
            .collect()
    }

    #[test]
    fn stacks_split_at_pivot_7() {
        let mut e = TwoStackEngine::from_letters(KmerOrder::lex(3).unwrap(), PIVOT_SAMPLE);
        e.rebuild_at(7).unwrap();
        e.check_invariants().unwrap();
        assert_eq!(ranks(e.left_stack()), vec![(6, 6), (4, 1), (1, 1), (0, 0)]);
        assert_eq!(ranks(e.right_stack()), vec![(7, 4), (9, 2)]);
        assert_eq!(
            e.minimizer(),
            Some(FragmentPair::new(0, OrderValue::Lex(LexKey::new(b"AAG"))))
        );

        e.delete_first().unwrap();
        e.check_invariants().unwrap();
        assert_eq!(ranks(&e.left_stack()[e.left_stack().len() - 1..]), vec![(1, 1)]);
        let m = e.minimizer().unwrap();
        assert_eq!(ranks(core::slice::from_ref(&m)), vec![(1, 1)]);
        assert_eq!(Some(m), oracle_minimizer(&PIVOT_SAMPLE[1..], 1, e.string().order()));
    }

    #[test]
    fn draining_the_right_side_rebuilds() {
        let order = KmerOrder::lex(3).unwrap();
        let mut e = TwoStackEngine::from_letters(order.clone(), PIVOT_SAMPLE);
        e.rebuild_at(7).unwrap();
        let mut letters = PIVOT_SAMPLE.to_vec();
        while e.right_count() > 0 {
            e.delete_last().unwrap();
            letters.pop();
        }
        assert_eq!(e.stats().rebuilds, 0);
        e.delete_last().unwrap();
        letters.pop();
        assert_eq!(e.stats().rebuilds, 1);
        e.check_invariants().unwrap();
        assert_eq!(e.minimizer(), oracle_minimizer(&letters, 0, &order));
        assert_eq!(e.stats().witness_violations, 0);
    }

    #[test]
    fn rebuild_places_pivot_in_the_middle() {
        let mut e = TwoStackEngine::from_letters(KmerOrder::lex(3).unwrap(), PIVOT_SAMPLE);
        e.rebuild();
        // 16 letters, k = 3: pivot = 0 + floor(13 / 2)
        assert_eq!(e.pivot(), 6);
        assert_eq!((e.left_count(), e.right_count()), (6, 8));
        e.check_invariants().unwrap();
        assert!(e.rebuild_at(20).is_err());
    }

    #[test]
    fn one_fragment_and_empty() {
        let mut e = TwoStackEngine::new(KmerOrder::lex(2).unwrap());
        assert_eq!(e.minimizer(), None);
        e.prepend(b'b').unwrap();
        e.prepend(b'a').unwrap();
        assert_eq!(e.minimizer().unwrap().pos, -2);
        e.check_invariants().unwrap();
        e.delete_first().unwrap();
        assert_eq!(e.minimizer(), None);
        e.check_invariants().unwrap();
        e.delete_last().unwrap();
        assert_eq!(e.delete_last(), Err(Error::EmptyString));
    }
}
