//! Push rules and invariant scans shared by the stack-based engines.

use alloc::vec::Vec;

use crate::engine::{FragmentPair, InvariantViolation};
use crate::hash::OrderValue;

/// Which side of the split a stack serves.
///
/// A left stack receives fragments in decreasing position order and loses
/// them from the left end; it keeps a pair unless some pair to its right has
/// a strictly smaller value. A right stack is the mirror image, except that
/// ties go to the leftmost pair, so equal values are never stored twice.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Side {
    Left,
    Right,
}

#[inline]
pub(crate) fn admits(side: Side, top: Option<&FragmentPair>, value: &OrderValue) -> bool {
    match (side, top) {
        (_, None) => true,
        (Side::Left, Some(top)) => *value <= top.value,
        (Side::Right, Some(top)) => *value < top.value,
    }
}

/// Pushes `pair` if the side's rule admits it; returns whether it did.
#[inline]
pub(crate) fn push(side: Side, stack: &mut Vec<FragmentPair>, pair: FragmentPair) -> bool {
    if admits(side, stack.last(), &pair.value) {
        stack.push(pair);
        true
    } else {
        false
    }
}

/// Checks `stack` (bottom to top) against the fragments of its range, given
/// left to right. The expected content is derived from prefix/suffix minima
/// rather than from the push rule.
pub(crate) fn check_stack(
    side: Side,
    stack: &[FragmentPair],
    fragments: &[FragmentPair],
) -> Result<(), InvariantViolation> {
    let mut expected: Vec<&FragmentPair> = Vec::new();
    match side {
        Side::Left => {
            // kept iff no fragment to the right is strictly smaller
            let mut suffix_min: Option<&OrderValue> = None;
            for pair in fragments.iter().rev() {
                if suffix_min.is_none_or(|m| pair.value <= *m) {
                    expected.push(pair);
                }
                if suffix_min.is_none_or(|m| pair.value < *m) {
                    suffix_min = Some(&pair.value);
                }
            }
        }
        Side::Right => {
            // kept iff every fragment to the left is strictly larger
            let mut prefix_min: Option<&OrderValue> = None;
            for pair in fragments {
                if prefix_min.is_none_or(|m| pair.value < *m) {
                    expected.push(pair);
                    prefix_min = Some(&pair.value);
                }
            }
        }
    }
    if stack.len() != expected.len() || stack.iter().zip(&expected).any(|(a, b)| a != *b) {
        return Err(InvariantViolation("stack content differs from its undominated fragments"));
    }
    for pair in stack.windows(2) {
        let (below, above) = (&pair[0], &pair[1]);
        let ordered = match side {
            Side::Left => above.pos < below.pos && above.value <= below.value,
            Side::Right => above.pos > below.pos && above.value < below.value,
        };
        if !ordered {
            return Err(InvariantViolation("stack is not monotone"));
        }
    }
    Ok(())
}
