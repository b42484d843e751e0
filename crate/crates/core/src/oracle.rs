use alloc::vec::Vec;

use crate::engine::{EngineKind, EngineStats, FragmentPair, MinimizerEngine};
use crate::hash::KmerOrder;
use crate::Error;

/// Brute-force minimizer of `letters` (whose first letter sits at absolute
/// position `start`): every fragment's value is computed from scratch.
pub fn oracle_minimizer(letters: &[u8], start: i64, order: &KmerOrder) -> Option<FragmentPair> {
    let k = order.k();
    if letters.len() < k {
        return None;
    }
    letters
        .windows(k)
        .enumerate()
        .map(|(i, window)| {
            let value = order.direct_value(window).expect("window has length k");
            FragmentPair::new(start + i as i64, value)
        })
        .min()
}

/// Ground-truth engine: a plain letter vector and a full rescan per query.
#[derive(Clone, Debug)]
pub struct OracleEngine {
    letters: Vec<u8>,
    start: i64,
    order: KmerOrder,
    ops: u64,
}

impl OracleEngine {
    pub fn new(order: KmerOrder) -> Self {
        OracleEngine {
            letters: Vec::new(),
            start: 0,
            order,
            ops: 0,
        }
    }

    pub fn letters(&self) -> &[u8] {
        &self.letters
    }
}

impl MinimizerEngine for OracleEngine {
    fn kind(&self) -> EngineKind {
        EngineKind::Oracle
    }

    fn prepend(&mut self, a: u8) -> Result<(), Error> {
        self.ops += 1;
        self.letters.insert(0, a);
        self.start -= 1;
        Ok(())
    }

    fn append(&mut self, a: u8) -> Result<(), Error> {
        self.ops += 1;
        self.letters.push(a);
        Ok(())
    }

    fn delete_first(&mut self) -> Result<(), Error> {
        if self.letters.is_empty() {
            return Err(Error::EmptyString);
        }
        self.ops += 1;
        self.letters.remove(0);
        self.start += 1;
        Ok(())
    }

    fn delete_last(&mut self) -> Result<(), Error> {
        self.letters.pop().ok_or(Error::EmptyString)?;
        self.ops += 1;
        Ok(())
    }

    fn minimizer(&self) -> Option<FragmentPair> {
        oracle_minimizer(&self.letters, self.start, &self.order)
    }

    fn start_pos(&self) -> i64 {
        self.start
    }

    fn len(&self) -> usize {
        self.letters.len()
    }

    fn fragment_count(&self) -> usize {
        (self.letters.len() + 1).saturating_sub(self.order.k())
    }

    fn stats(&self) -> EngineStats {
        EngineStats {
            ops: self.ops,
            ..EngineStats::default()
        }
    }
}
