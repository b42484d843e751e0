use alloc::collections::VecDeque;
use alloc::vec::Vec;

use crate::engine::FragmentPair;
use crate::hash::{KmerOrder, LexKey, OrderMode, OrderValue};
use crate::Error;

/// Storage behind a [`SemiDynamicString`]: a double-ended sequence of
/// letters with `O(1)` random access.
pub trait LetterBuffer {
    fn len(&self) -> usize;
    fn get(&self, index: usize) -> u8;
    fn push_front(&mut self, letter: u8);
    fn push_back(&mut self, letter: u8);
    fn pop_front(&mut self) -> Option<u8>;
    fn pop_back(&mut self) -> Option<u8>;

    fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

impl LetterBuffer for VecDeque<u8> {
    fn len(&self) -> usize {
        VecDeque::len(self)
    }

    #[inline]
    fn get(&self, index: usize) -> u8 {
        self[index]
    }

    fn push_front(&mut self, letter: u8) {
        VecDeque::push_front(self, letter)
    }

    fn push_back(&mut self, letter: u8) {
        VecDeque::push_back(self, letter)
    }

    fn pop_front(&mut self) -> Option<u8> {
        VecDeque::pop_front(self)
    }

    fn pop_back(&mut self) -> Option<u8> {
        VecDeque::pop_back(self)
    }
}

/// A window `[lo, hi)` over a read-only text. Border modifications move the
/// window ends; the letters pushed must be the ones the text holds at the new
/// end, so nothing is ever copied.
#[derive(Clone, Copy, Debug)]
pub struct TextWindow<'a> {
    text: &'a [u8],
    lo: usize,
    hi: usize,
}

impl<'a> TextWindow<'a> {
    /// An empty window positioned just before `text[at]`.
    pub fn new(text: &'a [u8], at: usize) -> Self {
        assert!(at <= text.len());
        TextWindow {
            text,
            lo: at,
            hi: at,
        }
    }

    pub fn bounds(&self) -> (usize, usize) {
        (self.lo, self.hi)
    }
}

impl LetterBuffer for TextWindow<'_> {
    fn len(&self) -> usize {
        self.hi - self.lo
    }

    #[inline]
    fn get(&self, index: usize) -> u8 {
        debug_assert!(self.lo + index < self.hi);
        self.text[self.lo + index]
    }

    fn push_front(&mut self, letter: u8) {
        assert!(self.lo > 0, "window already at the start of the text");
        self.lo -= 1;
        assert_eq!(self.text[self.lo], letter, "letter differs from the text");
    }

    fn push_back(&mut self, letter: u8) {
        assert!(self.hi < self.text.len(), "window already at the end of the text");
        assert_eq!(self.text[self.hi], letter, "letter differs from the text");
        self.hi += 1;
    }

    fn pop_front(&mut self) -> Option<u8> {
        (self.lo < self.hi).then(|| {
            self.lo += 1;
            self.text[self.lo - 1]
        })
    }

    fn pop_back(&mut self) -> Option<u8> {
        (self.lo < self.hi).then(|| {
            self.hi -= 1;
            self.text[self.hi]
        })
    }
}

/// A string modified only at its borders.
///
/// Letters keep the absolute position they were created with: `letters[i]`
/// sits at `start_pos + i`, and `start_pos` decreases on every prepend, so
/// positions may become negative. The fingerprints of the leftmost and
/// rightmost length-`k` fragments are cached so that every modification
/// produces the value of the fragment it creates or destroys in `O(1)` (KRF
/// mode) or `O(k)` (lexicographic mode).
#[derive(Clone, Debug)]
pub struct SemiDynamicString<B = VecDeque<u8>> {
    letters: B,
    start: i64,
    order: KmerOrder,
    front_krf: Option<u64>,
    back_krf: Option<u64>,
}

impl SemiDynamicString<VecDeque<u8>> {
    pub fn new(order: KmerOrder) -> Self {
        Self::with_buffer(order, VecDeque::new(), 0)
    }

    /// Builds the string by appending `letters` one by one, so the first
    /// letter lands at position 0.
    pub fn from_letters(order: KmerOrder, letters: &[u8]) -> Self {
        let mut s = Self::new(order);
        for &a in letters {
            s.append(a);
        }
        s
    }
}

impl<B: LetterBuffer> SemiDynamicString<B> {
    /// Wraps an existing buffer whose first letter sits at `start`.
    pub fn with_buffer(order: KmerOrder, letters: B, start: i64) -> Self {
        let mut s = SemiDynamicString {
            letters,
            start,
            order,
            front_krf: None,
            back_krf: None,
        };
        s.refresh_caches();
        s
    }

    fn refresh_caches(&mut self) {
        let k = self.k();
        let len = self.len();
        if len >= k {
            let hash = self.order.hash();
            self.front_krf = Some(hash.krf_of((0..k).map(|i| self.letters.get(i))));
            self.back_krf = Some(hash.krf_of((len - k..len).map(|i| self.letters.get(i))));
        } else {
            self.front_krf = None;
            self.back_krf = None;
        }
    }

    pub fn order(&self) -> &KmerOrder {
        &self.order
    }

    pub fn k(&self) -> usize {
        self.order.k()
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// Absolute position of the first letter.
    pub fn start_pos(&self) -> i64 {
        self.start
    }

    /// One past the absolute position of the last letter.
    pub fn end_pos(&self) -> i64 {
        self.start + self.len() as i64
    }

    pub fn fragment_count(&self) -> usize {
        (self.len() + 1).saturating_sub(self.k())
    }

    pub fn first_fragment_pos(&self) -> Option<i64> {
        (self.fragment_count() > 0).then_some(self.start)
    }

    pub fn last_fragment_pos(&self) -> Option<i64> {
        (self.fragment_count() > 0).then(|| self.end_pos() - self.k() as i64)
    }

    pub fn front_krf(&self) -> Option<u64> {
        self.front_krf
    }

    pub fn back_krf(&self) -> Option<u64> {
        self.back_krf
    }

    pub fn letter_at(&self, pos: i64) -> Result<u8, Error> {
        if pos < self.start || pos >= self.end_pos() {
            return Err(Error::OutOfRange { pos });
        }
        Ok(self.letters.get((pos - self.start) as usize))
    }

    #[inline]
    fn at(&self, pos: i64) -> u8 {
        self.letters.get((pos - self.start) as usize)
    }

    pub fn letters(&self) -> impl Iterator<Item = u8> + '_ {
        (0..self.len()).map(|i| self.letters.get(i))
    }

    pub fn to_vec(&self) -> Vec<u8> {
        self.letters().collect()
    }

    pub fn buffer(&self) -> &B {
        &self.letters
    }

    #[inline]
    fn value(&self, pos: i64, krf: u64) -> OrderValue {
        match self.order.mode() {
            OrderMode::Krf => OrderValue::Krf(krf),
            OrderMode::Lex => {
                let k = self.k();
                OrderValue::Lex(LexKey::from_letters((0..k).map(|j| self.at(pos + j as i64)), k))
            }
        }
    }

    /// Direct fingerprint of the fragment at `pos`, `O(k)`.
    fn krf_at(&self, pos: i64) -> u64 {
        self.order
            .hash()
            .krf_of((0..self.k()).map(|j| self.at(pos + j as i64)))
    }

    /// Value of the fragment starting at `pos`, recomputed in `O(k)`.
    pub fn value_at(&self, pos: i64) -> Result<OrderValue, Error> {
        match (self.first_fragment_pos(), self.last_fragment_pos()) {
            (Some(lo), Some(hi)) if lo <= pos && pos <= hi => Ok(self.value(pos, self.krf_at(pos))),
            _ => Err(Error::OutOfRange { pos }),
        }
    }

    /// Inserts `a` in front and returns the fragment this created, if any.
    pub fn prepend(&mut self, a: u8) -> Option<FragmentPair> {
        self.letters.push_front(a);
        self.start -= 1;
        let k = self.k();
        let len = self.len();
        if len < k {
            return None;
        }
        let krf = if len == k {
            self.refresh_caches();
            self.front_krf.unwrap()
        } else {
            let outgoing = self.letters.get(k);
            self.order
                .hash()
                .roll_left(self.front_krf.unwrap(), a, outgoing)
        };
        self.front_krf = Some(krf);
        Some(FragmentPair::new(self.start, self.value(self.start, krf)))
    }

    /// Inserts `a` at the back and returns the fragment this created, if any.
    pub fn append(&mut self, a: u8) -> Option<FragmentPair> {
        self.letters.push_back(a);
        let k = self.k();
        let len = self.len();
        if len < k {
            return None;
        }
        let krf = if len == k {
            self.refresh_caches();
            self.back_krf.unwrap()
        } else {
            let outgoing = self.letters.get(len - 1 - k);
            self.order
                .hash()
                .roll_right(self.back_krf.unwrap(), outgoing, a)
        };
        self.back_krf = Some(krf);
        let pos = self.end_pos() - k as i64;
        Some(FragmentPair::new(pos, self.value(pos, krf)))
    }

    /// Removes the first letter and returns the fragment that ceased to
    /// exist, if any.
    pub fn delete_first(&mut self) -> Result<Option<FragmentPair>, Error> {
        if self.is_empty() {
            return Err(Error::EmptyString);
        }
        let k = self.k();
        let removed = self
            .front_krf
            .map(|krf| FragmentPair::new(self.start, self.value(self.start, krf)));
        let outgoing = self.letters.pop_front().unwrap();
        self.start += 1;
        if self.len() >= k {
            let incoming = self.letters.get(k - 1);
            self.front_krf = Some(
                self.order
                    .hash()
                    .roll_right(self.front_krf.unwrap(), outgoing, incoming),
            );
        } else {
            self.front_krf = None;
            self.back_krf = None;
        }
        Ok(removed)
    }

    /// Removes the last letter and returns the fragment that ceased to
    /// exist, if any.
    pub fn delete_last(&mut self) -> Result<Option<FragmentPair>, Error> {
        if self.is_empty() {
            return Err(Error::EmptyString);
        }
        let k = self.k();
        let removed = self.back_krf.map(|krf| {
            let pos = self.end_pos() - k as i64;
            FragmentPair::new(pos, self.value(pos, krf))
        });
        let outgoing = self.letters.pop_back().unwrap();
        if self.len() >= k {
            let incoming = self.letters.get(self.len() - k);
            self.back_krf = Some(
                self.order
                    .hash()
                    .roll_left(self.back_krf.unwrap(), incoming, outgoing),
            );
        } else {
            self.front_krf = None;
            self.back_krf = None;
        }
        Ok(removed)
    }

    /// Fragments from `from` rightwards to the last one, with fingerprints
    /// rolled from a single direct evaluation.
    pub fn walk_right(&self, from: i64) -> FragmentWalk<'_, B> {
        FragmentWalk::new(self, from, self.last_fragment_pos(), true)
    }

    /// Fragments from `from` leftwards to the first one.
    pub fn walk_left(&self, from: i64) -> FragmentWalk<'_, B> {
        FragmentWalk::new(self, from, self.first_fragment_pos(), false)
    }

    /// All fragments, left to right.
    pub fn fragments(&self) -> FragmentWalk<'_, B> {
        self.walk_right(self.start)
    }

    /// Recomputes both cached fingerprints and reports whether they matched.
    pub fn caches_consistent(&self) -> bool {
        let k = self.k();
        if self.len() < k {
            return self.front_krf.is_none() && self.back_krf.is_none();
        }
        let last = self.end_pos() - k as i64;
        self.front_krf == Some(self.krf_at(self.start)) && self.back_krf == Some(self.krf_at(last))
    }
}

/// Iterator over consecutive fragments of a [`SemiDynamicString`] in one
/// direction. Uses `O(1)` space.
#[derive(Debug)]
pub struct FragmentWalk<'a, B> {
    s: &'a SemiDynamicString<B>,
    next: Option<(i64, u64)>,
    stop: i64,
    rightwards: bool,
}

impl<'a, B: LetterBuffer> FragmentWalk<'a, B> {
    fn new(s: &'a SemiDynamicString<B>, from: i64, stop: Option<i64>, rightwards: bool) -> Self {
        let in_range = match (s.first_fragment_pos(), s.last_fragment_pos()) {
            (Some(lo), Some(hi)) => lo <= from && from <= hi,
            _ => false,
        };
        let next = in_range.then(|| {
            let krf = if Some(from) == s.first_fragment_pos() {
                s.front_krf.unwrap()
            } else if Some(from) == s.last_fragment_pos() {
                s.back_krf.unwrap()
            } else {
                s.krf_at(from)
            };
            (from, krf)
        });
        FragmentWalk {
            s,
            next,
            stop: stop.unwrap_or(from),
            rightwards,
        }
    }
}

impl<B: LetterBuffer> Iterator for FragmentWalk<'_, B> {
    type Item = FragmentPair;

    fn next(&mut self) -> Option<FragmentPair> {
        let (pos, krf) = self.next?;
        let s = self.s;
        let k = s.k() as i64;
        self.next = if pos == self.stop {
            None
        } else if self.rightwards {
            let rolled = s.order.hash().roll_right(krf, s.at(pos), s.at(pos + k));
            Some((pos + 1, rolled))
        } else {
            let rolled = s.order.hash().roll_left(krf, s.at(pos - 1), s.at(pos + k - 1));
            Some((pos - 1, rolled))
        };
        Some(FragmentPair::new(pos, s.value(pos, krf)))
    }
}
