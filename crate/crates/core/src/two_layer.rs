use alloc::collections::VecDeque;
use alloc::vec::Vec;

use crate::blocks::{BlockLayout, BlockScheme};
use crate::engine::{EngineKind, EngineStats, FragmentPair, InvariantViolation, MinimizerEngine};
use crate::hash::KmerOrder;
use crate::sdstring::LetterBuffer;
use crate::stacks::{check_stack, push, Side};
use crate::{Error, SemiDynamicString};

/// A first-layer stack: the undominated fragments of one block.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockStack {
    pub block: i64,
    /// bottom to top, same orientation rules as the two-stack engine
    pub pairs: Vec<FragmentPair>,
}

#[derive(Clone, Debug, Default)]
struct SideState {
    /// at most two after every operation; innermost first
    first: Vec<BlockStack>,
    second: Vec<FragmentPair>,
    count: usize,
    ops_since_event: u64,
    /// the next recompute/flush is paid for by the last full rebuild
    charged: bool,
}

impl SideState {
    fn live_pairs(&self) -> usize {
        self.first.iter().map(|b| b.pairs.len()).sum::<usize>() + self.second.len()
    }

    fn clear(&mut self) {
        self.first.clear();
        self.second.clear();
        self.count = 0;
    }
}

/// Read-only view of one side of a [`TwoLayerEngine`].
#[derive(Clone, Copy, Debug)]
pub struct SideView<'a> {
    /// innermost block first
    pub first_layer: &'a [BlockStack],
    /// one representative per internal block that can still matter
    pub second_layer: &'a [FragmentPair],
    pub fragment_count: usize,
}

/// Space-efficient variant of the two-stack engine.
///
/// Fragment positions are grouped into blocks around an anchor. Only the
/// (at most two) outermost blocks on each side keep a full first-layer stack;
/// every other block is represented by its minimal fragment in a
/// second-layer stack, which follows the same domination rules one level
/// up. When a third first-layer stack would appear on a side, the innermost
/// one is flushed to the second layer. When deletions exhaust the first
/// layer, the next block's stack is recomputed from the read-only string.
/// Crossing the anchor triggers a full rebuild, exactly as in
/// [`TwoStackEngine`](crate::TwoStackEngine).
///
/// Live pairs stay within `O(c + ℓ/c)` for [`BlockLayout::Fixed`] and
/// `O(√ℓ)` for [`BlockLayout::Progressing`].
#[derive(Clone, Debug)]
pub struct TwoLayerEngine<B = VecDeque<u8>> {
    s: SemiDynamicString<B>,
    scheme: BlockScheme,
    left: SideState,
    right: SideState,
    ops_since_rebuild: u64,
    stats: EngineStats,
}

impl TwoLayerEngine<VecDeque<u8>> {
    pub fn new(order: KmerOrder, layout: BlockLayout) -> Self {
        Self::over_buffer(order, layout, VecDeque::new(), 0)
    }
}

impl<B: LetterBuffer> TwoLayerEngine<B> {
    /// Engine over an existing buffer whose first letter sits at `start`.
    /// Any fragments already present are loaded by a full rebuild.
    pub fn over_buffer(order: KmerOrder, layout: BlockLayout, buffer: B, start: i64) -> Self {
        let mut e = TwoLayerEngine {
            s: SemiDynamicString::with_buffer(order, buffer, start),
            scheme: BlockScheme::new(layout, 0),
            left: SideState::default(),
            right: SideState::default(),
            ops_since_rebuild: 0,
            stats: EngineStats::default(),
        };
        e.full_rebuild();
        e
    }

    pub fn string(&self) -> &SemiDynamicString<B> {
        &self.s
    }

    pub fn scheme(&self) -> BlockScheme {
        self.scheme
    }

    pub fn left_view(&self) -> SideView<'_> {
        view(&self.left)
    }

    pub fn right_view(&self) -> SideView<'_> {
        view(&self.right)
    }

    pub fn live_pairs(&self) -> usize {
        self.left.live_pairs() + self.right.live_pairs()
    }

    fn record_live(&mut self) {
        let live = self.live_pairs();
        self.stats.max_live_pairs = self.stats.max_live_pairs.max(live);
    }

    fn side_mut(&mut self, side: Side) -> &mut SideState {
        match side {
            Side::Left => &mut self.left,
            Side::Right => &mut self.right,
        }
    }

    /// Recomputes the whole structure around a fresh anchor in the middle
    /// of the string, streaming fragments outward from it.
    pub fn full_rebuild(&mut self) {
        self.left.clear();
        self.right.clear();
        let (Some(first), Some(last)) = (self.s.first_fragment_pos(), self.s.last_fragment_pos())
        else {
            return;
        };
        let anchor = first + (last - first) / 2;
        self.scheme.anchor = anchor;
        if anchor <= last {
            for pair in self.s.walk_right(anchor) {
                insert(Side::Right, &mut self.right, &self.scheme, &mut self.stats, pair, false);
                let live = self.left.live_pairs() + self.right.live_pairs();
                self.stats.max_live_pairs = self.stats.max_live_pairs.max(live);
            }
        }
        if anchor > first {
            for pair in self.s.walk_left(anchor - 1) {
                insert(Side::Left, &mut self.left, &self.scheme, &mut self.stats, pair, false);
                let live = self.left.live_pairs() + self.right.live_pairs();
                self.stats.max_live_pairs = self.stats.max_live_pairs.max(live);
            }
        }
        for side in [Side::Left, Side::Right] {
            let st = match side {
                Side::Left => &mut self.left,
                Side::Right => &mut self.right,
            };
            while st.first.len() > 1 {
                let inner = st.first.remove(0);
                flush(side, st, &self.scheme, &mut self.stats, inner, false);
            }
            st.ops_since_event = 0;
            st.charged = true;
        }
        let work = self.s.fragment_count() as u64;
        self.stats.work += work;
        self.stats.rebuild_work += work;
    }

    fn drained_rebuild(&mut self) {
        self.stats.rebuilds += 1;
        if self.s.fragment_count() as u64 > self.ops_since_rebuild {
            self.stats.witness_violations += 1;
        }
        self.full_rebuild();
        self.ops_since_rebuild = 0;
    }

    fn on_created(&mut self, side: Side, pair: FragmentPair) {
        if self.left.count + self.right.count == 0 {
            // first fragment of an empty structure: anchor it here
            self.scheme.anchor = pair.pos;
            self.right.charged = true;
            self.left.charged = true;
            insert(Side::Right, &mut self.right, &self.scheme, &mut self.stats, pair, true);
        } else {
            let st = match side {
                Side::Left => &mut self.left,
                Side::Right => &mut self.right,
            };
            insert(side, st, &self.scheme, &mut self.stats, pair, true);
        }
        self.record_live();
    }

    fn on_removed(&mut self, side: Side, removed: FragmentPair) {
        if self.side_mut(side).count == 0 {
            self.drained_rebuild();
            return;
        }
        let st = match side {
            Side::Left => &mut self.left,
            Side::Right => &mut self.right,
        };
        st.count -= 1;
        st.ops_since_event += 1;
        let block = self.scheme.block_of(removed.pos);
        if st.first.last().map(|b| b.block) == Some(block) {
            let top = st.first.last_mut().unwrap();
            if top.pairs.last().is_some_and(|p| p.pos == removed.pos) {
                top.pairs.pop();
                self.stats.work += 1;
            }
        } else {
            // the block was only represented in the second layer
            let pairs = recompute(side, &self.s, &self.scheme, block);
            self.stats.recomputes += 1;
            self.stats.work += pairs.len() as u64 + 1;
            if st
                .second
                .last()
                .is_some_and(|rep| self.scheme.block_of(rep.pos) == block)
            {
                st.second.pop();
            }
            st.first.push(BlockStack { block, pairs });
            event(st, &mut self.stats, self.scheme.len(block));
        }
        if st.first.last().is_some_and(|b| b.pairs.is_empty()) {
            st.first.pop();
        }
        if st.count == 0 {
            st.clear();
        }
        self.record_live();
    }
}

fn view(st: &SideState) -> SideView<'_> {
    SideView {
        first_layer: &st.first,
        second_layer: &st.second,
        fragment_count: st.count,
    }
}

/// Amortization bookkeeping for a recompute or flush of a block with `len`
/// positions: at least `len` operations must have hit this side since the
/// previous such event, unless the event is charged to a full rebuild.
fn event(st: &mut SideState, stats: &mut EngineStats, len: usize) {
    if st.charged {
        st.charged = false;
    } else if st.ops_since_event < len as u64 {
        stats.witness_violations += 1;
    }
    st.ops_since_event = 0;
}

/// Adds a fragment at the outer end of a side.
fn insert(
    side: Side,
    st: &mut SideState,
    scheme: &BlockScheme,
    stats: &mut EngineStats,
    pair: FragmentPair,
    tracked: bool,
) {
    st.count += 1;
    st.ops_since_event += 1;
    let block = scheme.block_of(pair.pos);
    if st.first.last().map(|b| b.block) != Some(block) {
        st.first.push(BlockStack {
            block,
            pairs: Vec::new(),
        });
        if st.first.len() > 2 {
            let inner = st.first.remove(0);
            flush(side, st, scheme, stats, inner, tracked);
        }
    }
    let outer = st.first.last_mut().unwrap();
    if push(side, &mut outer.pairs, pair) {
        stats.work += 1;
    }
}

/// Moves a complete block out of the first layer, keeping only its minimum.
fn flush(
    side: Side,
    st: &mut SideState,
    scheme: &BlockScheme,
    stats: &mut EngineStats,
    inner: BlockStack,
    tracked: bool,
) {
    stats.work += inner.pairs.len() as u64;
    if let Some(rep) = inner.pairs.last() {
        push(side, &mut st.second, rep.clone());
    }
    if tracked {
        stats.flushes += 1;
        event(st, stats, scheme.len(inner.block));
    }
}

/// First-layer stack of `block` over the fragments currently present, read
/// from the string with locally rolled fingerprints.
fn recompute<B: LetterBuffer>(
    side: Side,
    s: &SemiDynamicString<B>,
    scheme: &BlockScheme,
    block: i64,
) -> Vec<FragmentPair> {
    let (lo, hi) = scheme.range(block);
    let mut pairs = Vec::new();
    let (Some(first), Some(last)) = (s.first_fragment_pos(), s.last_fragment_pos()) else {
        return pairs;
    };
    let (lo, hi) = (lo.max(first), hi.min(last));
    if lo > hi {
        return pairs;
    }
    let span = (hi - lo + 1) as usize;
    match side {
        Side::Right => {
            for pair in s.walk_right(lo).take(span) {
                push(side, &mut pairs, pair);
            }
        }
        Side::Left => {
            for pair in s.walk_left(hi).take(span) {
                push(side, &mut pairs, pair);
            }
        }
    }
    pairs
}

impl<B: LetterBuffer> MinimizerEngine for TwoLayerEngine<B> {
    fn kind(&self) -> EngineKind {
        EngineKind::TwoLayer
    }

    fn prepend(&mut self, a: u8) -> Result<(), Error> {
        self.stats.ops += 1;
        self.ops_since_rebuild += 1;
        if let Some(pair) = self.s.prepend(a) {
            self.on_created(Side::Left, pair);
        }
        Ok(())
    }

    fn append(&mut self, a: u8) -> Result<(), Error> {
        self.stats.ops += 1;
        self.ops_since_rebuild += 1;
        if let Some(pair) = self.s.append(a) {
            self.on_created(Side::Right, pair);
        }
        Ok(())
    }

    fn delete_first(&mut self) -> Result<(), Error> {
        let removed = self.s.delete_first()?;
        self.stats.ops += 1;
        self.ops_since_rebuild += 1;
        if let Some(pair) = removed {
            self.on_removed(Side::Left, pair);
        }
        Ok(())
    }

    fn delete_last(&mut self) -> Result<(), Error> {
        let removed = self.s.delete_last()?;
        self.stats.ops += 1;
        self.ops_since_rebuild += 1;
        if let Some(pair) = removed {
            self.on_removed(Side::Right, pair);
        }
        Ok(())
    }

    fn minimizer(&self) -> Option<FragmentPair> {
        [&self.left, &self.right]
            .into_iter()
            .flat_map(|st| {
                st.first
                    .iter()
                    .filter_map(|b| b.pairs.last())
                    .chain(st.second.last())
            })
            .min()
            .cloned()
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
            live_pairs: self.live_pairs(),
            ..self.stats
        }
    }

    fn check_invariants(&self) -> Result<(), InvariantViolation> {
        if !self.s.caches_consistent() {
            return Err(InvariantViolation("cached border fingerprints are stale"));
        }
        let fragments: Vec<FragmentPair> = self.s.fragments().collect();
        if fragments.is_empty() {
            if self.live_pairs() > 0 || self.left.count + self.right.count > 0 {
                return Err(InvariantViolation("structure not empty without fragments"));
            }
            return Ok(());
        }
        let anchor = self.scheme.anchor;
        let split = fragments.partition_point(|p| p.pos < anchor);
        if split != self.left.count || fragments.len() - split != self.right.count {
            return Err(InvariantViolation("side counts disagree with the anchor"));
        }
        if anchor < fragments[0].pos || anchor > fragments[fragments.len() - 1].pos + 1 {
            return Err(InvariantViolation("anchor outside the fragment range"));
        }
        check_side(Side::Left, &self.left, &self.scheme, &fragments[..split])?;
        check_side(Side::Right, &self.right, &self.scheme, &fragments[split..])
    }
}

/// `fragments` are the side's fragments, left to right.
fn check_side(
    side: Side,
    st: &SideState,
    scheme: &BlockScheme,
    fragments: &[FragmentPair],
) -> Result<(), InvariantViolation> {
    if st.first.len() > 2 {
        return Err(InvariantViolation("more than two first-layer stacks on a side"));
    }
    if fragments.is_empty() {
        return if st.first.is_empty() && st.second.is_empty() {
            Ok(())
        } else {
            Err(InvariantViolation("stacks left on an empty side"))
        };
    }
    let outward: i64 = match side {
        Side::Left => -1,
        Side::Right => 1,
    };
    let outermost_fragment = match side {
        Side::Left => &fragments[0],
        Side::Right => &fragments[fragments.len() - 1],
    };
    let outermost_block = scheme.block_of(outermost_fragment.pos);
    if let Some(outer) = st.first.last() {
        if outer.block != outermost_block {
            return Err(InvariantViolation("outer first-layer stack is not the border block"));
        }
        if st.first.len() == 2 && st.first[0].block + outward != outer.block {
            return Err(InvariantViolation("first-layer stacks are not adjacent blocks"));
        }
    }
    for stack in &st.first {
        let (lo, hi) = scheme.range(stack.block);
        let members: Vec<FragmentPair> = fragments
            .iter()
            .filter(|p| lo <= p.pos && p.pos <= hi)
            .cloned()
            .collect();
        check_stack(side, &stack.pairs, &members)?;
    }
    // internal blocks: from the anchor outward up to the first-layer ones
    let innermost = match side {
        Side::Left => -1,
        Side::Right => 0,
    };
    let stop = st.first.first().map_or(outermost_block + outward, |b| b.block);
    let mut reps: Vec<FragmentPair> = Vec::new();
    let mut block = innermost;
    while block != stop {
        let (lo, hi) = scheme.range(block);
        let members = fragments.iter().filter(|p| lo <= p.pos && p.pos <= hi);
        if members.clone().count() != scheme.len(block) {
            return Err(InvariantViolation("internal block is incomplete"));
        }
        reps.push(members.min().unwrap().clone());
        block += outward;
    }
    reps.sort_by_key(|p| p.pos);
    check_stack(side, &st.second, &reps)
}
