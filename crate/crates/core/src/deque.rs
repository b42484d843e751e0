use alloc::collections::VecDeque;
use alloc::vec::Vec;

use crate::engine::{EngineKind, EngineStats, FragmentPair, InvariantViolation, MinimizerEngine};
use crate::hash::KmerOrder;
use crate::stacks::{check_stack, Side};
use crate::{Error, SemiDynamicString};

/// Which three border modifications a [`DequeEngine`] supports.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Orientation {
    /// Prepend, append and delete-first: the usual left-to-right slide.
    #[default]
    LeftToRight,
    /// Prepend, append and delete-last: the mirror image.
    RightToLeft,
}

/// The sliding-window deque of undominated pairs.
///
/// Left to right, the deque keeps a pair unless a pair further right has a
/// strictly smaller value; the front is then the minimizer. Appends pop the
/// dominated tail (amortized `O(1)`), prepends compare against the front
/// only. Deleting at the far end is impossible: any fragment could become the
/// minimizer once both ends shrink, which the deque has already discarded.
#[derive(Clone, Debug)]
pub struct DequeEngine {
    s: SemiDynamicString,
    pairs: VecDeque<FragmentPair>,
    orientation: Orientation,
    pushes: u64,
    pops: u64,
    stats: EngineStats,
}

impl DequeEngine {
    pub fn new(order: KmerOrder) -> Self {
        Self::with_orientation(order, Orientation::LeftToRight)
    }

    pub fn with_orientation(order: KmerOrder, orientation: Orientation) -> Self {
        DequeEngine {
            s: SemiDynamicString::new(order),
            pairs: VecDeque::new(),
            orientation,
            pushes: 0,
            pops: 0,
            stats: EngineStats::default(),
        }
    }

    pub fn orientation(&self) -> Orientation {
        self.orientation
    }

    pub fn string(&self) -> &SemiDynamicString {
        &self.s
    }

    /// Stored pairs from the front (smallest position) to the back.
    pub fn pairs(&self) -> impl Iterator<Item = &FragmentPair> {
        self.pairs.iter()
    }

    pub fn pushes(&self) -> u64 {
        self.pushes
    }

    pub fn pops(&self) -> u64 {
        self.pops
    }

    fn note_push(&mut self) {
        self.pushes += 1;
        self.stats.work += 1;
        self.stats.max_live_pairs = self.stats.max_live_pairs.max(self.pairs.len());
    }

    fn note_pop(&mut self) {
        self.pops += 1;
        self.stats.work += 1;
    }

    fn unsupported(&self, op: &'static str) -> Error {
        Error::Unsupported {
            engine: EngineKind::Deque,
            op,
        }
    }
}

impl MinimizerEngine for DequeEngine {
    fn kind(&self) -> EngineKind {
        EngineKind::Deque
    }

    fn prepend(&mut self, a: u8) -> Result<(), Error> {
        self.stats.ops += 1;
        let Some(pair) = self.s.prepend(a) else {
            return Ok(());
        };
        match self.orientation {
            Orientation::LeftToRight => {
                if self.pairs.front().is_none_or(|front| pair.value <= front.value) {
                    self.pairs.push_front(pair);
                    self.note_push();
                }
            }
            Orientation::RightToLeft => {
                while self.pairs.front().is_some_and(|front| front.value >= pair.value) {
                    self.pairs.pop_front();
                    self.note_pop();
                }
                self.pairs.push_front(pair);
                self.note_push();
            }
        }
        Ok(())
    }

    fn append(&mut self, a: u8) -> Result<(), Error> {
        self.stats.ops += 1;
        let Some(pair) = self.s.append(a) else {
            return Ok(());
        };
        match self.orientation {
            Orientation::LeftToRight => {
                while self.pairs.back().is_some_and(|back| back.value > pair.value) {
                    self.pairs.pop_back();
                    self.note_pop();
                }
                self.pairs.push_back(pair);
                self.note_push();
            }
            Orientation::RightToLeft => {
                if self.pairs.back().is_none_or(|back| pair.value < back.value) {
                    self.pairs.push_back(pair);
                    self.note_push();
                }
            }
        }
        Ok(())
    }

    fn delete_first(&mut self) -> Result<(), Error> {
        if self.orientation == Orientation::RightToLeft {
            return Err(self.unsupported("delete_first"));
        }
        let removed = self.s.delete_first()?;
        self.stats.ops += 1;
        if let Some(removed) = removed {
            if self.pairs.front().is_some_and(|front| front.pos == removed.pos) {
                self.pairs.pop_front();
                self.note_pop();
            }
        }
        Ok(())
    }

    fn delete_last(&mut self) -> Result<(), Error> {
        if self.orientation == Orientation::LeftToRight {
            return Err(self.unsupported("delete_last"));
        }
        let removed = self.s.delete_last()?;
        self.stats.ops += 1;
        if let Some(removed) = removed {
            if self.pairs.back().is_some_and(|back| back.pos == removed.pos) {
                self.pairs.pop_back();
                self.note_pop();
            }
        }
        Ok(())
    }

    fn minimizer(&self) -> Option<FragmentPair> {
        match self.orientation {
            Orientation::LeftToRight => self.pairs.front().cloned(),
            Orientation::RightToLeft => self.pairs.back().cloned(),
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
            live_pairs: self.pairs.len(),
            ..self.stats
        }
    }

    fn check_invariants(&self) -> Result<(), InvariantViolation> {
        if self.pops > self.pushes {
            return Err(InvariantViolation("more pops than pushes"));
        }
        let fragments: Vec<FragmentPair> = self.s.fragments().collect();
        match self.orientation {
            Orientation::LeftToRight => {
                let as_left_stack: Vec<FragmentPair> = self.pairs.iter().rev().cloned().collect();
                check_stack(Side::Left, &as_left_stack, &fragments)
            }
            Orientation::RightToLeft => {
                let as_right_stack: Vec<FragmentPair> = self.pairs.iter().cloned().collect();
                check_stack(Side::Right, &as_right_stack, &fragments)
            }
        }
    }
}
