//! Minimizers of all root-ward paths of a fixed length in a trie.
//!
//! A single engine follows a depth-first traversal. Descending into a node
//! prepends its letter (the window reads from the node toward the root) and
//! trims the far end; backtracking undoes both. This needs all four border
//! modifications, so the deque engine cannot be used.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use crate::engine::{build_engine, EngineKind, EngineStats};
use crate::hash::{KmerOrder, OrderMode};
use crate::oracle::oracle_minimizer;
use crate::{BlockLayout, Error};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TrieNode {
    pub parent: Option<usize>,
    /// letter on the edge from the parent; `None` for the root
    pub letter: Option<u8>,
    pub depth: usize,
    /// sorted by letter
    pub children: Vec<usize>,
}

/// Trie with node ids assigned in depth-first preorder, children visited in
/// ascending letter order. The root is node 0.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Trie {
    nodes: Vec<TrieNode>,
}

impl Trie {
    pub const ROOT: usize = 0;

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn edge_count(&self) -> usize {
        self.nodes.len() - 1
    }

    pub fn node(&self, id: usize) -> &TrieNode {
        &self.nodes[id]
    }

    pub fn nodes(&self) -> &[TrieNode] {
        &self.nodes
    }

    pub fn max_depth(&self) -> usize {
        self.nodes.iter().map(|n| n.depth).max().unwrap_or(0)
    }

    /// Ancestor of `id` at distance `j`.
    pub fn ancestor(&self, mut id: usize, j: usize) -> usize {
        for _ in 0..j {
            id = self.nodes[id].parent.expect("ancestor above the root");
        }
        id
    }

    /// The `len` letters read from `id` toward the root, if the path is
    /// long enough.
    pub fn spell_rootward(&self, mut id: usize, len: usize) -> Option<Vec<u8>> {
        if self.nodes[id].depth < len {
            return None;
        }
        let mut out = Vec::with_capacity(len);
        for _ in 0..len {
            let node = &self.nodes[id];
            out.push(node.letter?);
            id = node.parent?;
        }
        Some(out)
    }
}

/// Inserts every string into a trie.
pub fn build_trie<I, S>(strings: I) -> Trie
where
    I: IntoIterator<Item = S>,
    S: AsRef<[u8]>,
{
    let mut children: Vec<BTreeMap<u8, usize>> = vec![BTreeMap::new()];
    for s in strings {
        let mut at = 0;
        for &a in s.as_ref() {
            at = match children[at].get(&a) {
                Some(&next) => next,
                None => {
                    children.push(BTreeMap::new());
                    let next = children.len() - 1;
                    children[at].insert(a, next);
                    next
                }
            };
        }
    }

    // renumber in preorder; (temporary id, final parent id, letter)
    let mut order: Vec<(usize, Option<usize>, Option<u8>)> = Vec::new();
    let mut pending: Vec<(usize, Option<usize>, Option<u8>)> = vec![(0, None, None)];
    while let Some((tmp, parent, letter)) = pending.pop() {
        let id = order.len();
        order.push((tmp, parent, letter));
        for (&a, &child) in children[tmp].iter().rev() {
            pending.push((child, Some(id), Some(a)));
        }
    }
    let mut nodes: Vec<TrieNode> = Vec::with_capacity(order.len());
    for &(_, parent, letter) in &order {
        let depth = parent.map_or(0, |p: usize| nodes[p].depth + 1);
        nodes.push(TrieNode {
            parent,
            letter,
            depth,
            children: Vec::new(),
        });
        if let Some(p) = parent {
            let id = nodes.len() - 1;
            nodes[p].children.push(id);
        }
    }
    Trie { nodes }
}

/// Result of a trie path-minimizer computation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TrieReport {
    /// sorted, distinct ids of nodes where some window's minimal k-mer starts
    pub reported: Vec<usize>,
    /// `(window node, offset)` for every node of depth at least `ℓ`, by node id
    pub windows: Vec<(usize, usize)>,
    pub ell: usize,
    pub k: usize,
    pub mode: OrderMode,
    pub seed: u64,
    /// border modifications performed
    pub ops: u64,
    /// most fragments held by the engine at once
    pub peak_fragments: usize,
    /// counters of the engine that ran the traversal; zero for the oracle
    pub engine_stats: EngineStats,
}

fn check_ell(ell: usize, order: &KmerOrder) -> Result<(), Error> {
    if ell < order.k() {
        return Err(Error::InvalidParameter("path length l must be at least k"));
    }
    Ok(())
}

fn finish(
    mut windows: Vec<(usize, usize)>,
    mut reported: Vec<usize>,
    ell: usize,
    order: &KmerOrder,
    ops: u64,
    peak_fragments: usize,
    engine_stats: EngineStats,
) -> TrieReport {
    windows.sort_unstable();
    reported.sort_unstable();
    reported.dedup();
    TrieReport {
        reported,
        windows,
        ell,
        k: order.k(),
        mode: order.mode(),
        seed: order.hash().seed(),
        ops,
        peak_fragments,
        engine_stats,
    }
}

/// Minimizers of every length-`ell` root-ward path, by one DFS with a
/// single engine.
pub fn trie_path_minimizers(
    trie: &Trie,
    ell: usize,
    order: &KmerOrder,
    kind: EngineKind,
    layout: BlockLayout,
) -> Result<TrieReport, Error> {
    check_ell(ell, order)?;
    if kind == EngineKind::Deque {
        return Err(Error::Unsupported {
            engine: kind,
            op: "delete_last",
        });
    }
    let mut engine = build_engine(kind, order.clone(), layout);
    let depth = trie.max_depth();
    // letters and node ids along the current root path, by depth
    let mut path_letters = vec![0u8; depth + 1];
    let mut path_nodes = vec![Trie::ROOT; depth + 1];
    let mut windows = Vec::new();
    let mut reported = Vec::new();
    let mut ops = 0u64;
    let mut peak = 0usize;

    let mut stack: Vec<(usize, usize)> = vec![(Trie::ROOT, 0)];
    while let Some(top) = stack.last_mut() {
        let (v, i) = *top;
        if let Some(&child) = trie.nodes[v].children.get(i) {
            top.1 += 1;
            let node = &trie.nodes[child];
            let d = node.depth;
            let a = node.letter.expect("non-root node has a letter");
            path_letters[d] = a;
            path_nodes[d] = child;
            engine.prepend(a)?;
            ops += 1;
            if d > ell {
                engine.delete_last()?;
                ops += 1;
            }
            peak = peak.max(engine.fragment_count());
            if d >= ell {
                let min = engine.minimizer().expect("a full window has fragments");
                let j = (min.pos - engine.start_pos()) as usize;
                windows.push((child, j));
                reported.push(path_nodes[d - j]);
            }
            stack.push((child, 0));
        } else {
            stack.pop();
            if v != Trie::ROOT {
                let d = trie.nodes[v].depth;
                engine.delete_first()?;
                ops += 1;
                if d > ell {
                    engine.append(path_letters[d - ell])?;
                    ops += 1;
                }
            }
        }
    }
    Ok(finish(windows, reported, ell, order, ops, peak, engine.stats()))
}

/// Brute force: spell every window and scan it.
pub fn oracle_trie_minimizers(
    trie: &Trie,
    ell: usize,
    order: &KmerOrder,
) -> Result<TrieReport, Error> {
    check_ell(ell, order)?;
    let windows: Vec<(usize, usize)> = (0..trie.len())
        .filter_map(|v| {
            let letters = trie.spell_rootward(v, ell)?;
            let min = oracle_minimizer(&letters, 0, order)?;
            Some((v, min.pos as usize))
        })
        .collect();
    let reported = windows.iter().map(|&(v, j)| trie.ancestor(v, j)).collect();
    Ok(finish(windows, reported, ell, order, 0, 0, EngineStats::default()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scan::minimizer_set;
    use rand::rngs::SmallRng;
    use rand::{Rng, SeedableRng};

    const BRANCHY: [&str; 8] = [
        "ATCAATAG", "ATCAATAA", "ACC", "ACT", "ATT", "ATCACG", "ATCACT", "ATCAAG",
    ];

    #[test]
    fn small_tries() {
        let empty = build_trie(Vec::<&str>::new());
        assert_eq!(empty.len(), 1);
        let t = build_trie(["AB", "AC"]);
        assert_eq!(t.len(), 4);
        assert_eq!(t.node(1).letter, Some(b'A'));
        assert_eq!(t.node(0).children, vec![1]);
        assert_eq!(t.node(1).children, vec![2, 3]);
        assert_eq!(t.node(3).depth, 2);
    }

    #[test]
    fn reports_the_ac_node() {
        let t = build_trie(BRANCHY);
        assert_eq!(t.len(), 18);
        assert_eq!(t.spell_rootward(15, 5).unwrap(), b"GCACT");
        let order = KmerOrder::lex(2).unwrap();
        for kind in [EngineKind::Heap, EngineKind::TwoStack, EngineKind::TwoLayer] {
            let r = trie_path_minimizers(&t, 5, &order, kind, BlockLayout::Progressing).unwrap();
            assert!(r.windows.contains(&(15, 2)));
            assert!(r.reported.contains(&7));
            assert_eq!(t.spell_rootward(7, 2).unwrap(), b"AC");
            let oracle = oracle_trie_minimizers(&t, 5, &order).unwrap();
            assert_eq!(r.reported, oracle.reported);
            assert_eq!(r.windows, oracle.windows);
            assert!(r.ops <= 4 * t.edge_count() as u64);
        }
    }

    #[test]
    fn deque_is_rejected_and_short_tries_report_nothing() {
        let t = build_trie(BRANCHY);
        let order = KmerOrder::lex(2).unwrap();
        let err = trie_path_minimizers(&t, 5, &order, EngineKind::Deque, BlockLayout::default());
        assert!(matches!(err, Err(Error::Unsupported { .. })));
        let r = trie_path_minimizers(&t, 9, &order, EngineKind::TwoStack, BlockLayout::default());
        assert!(r.unwrap().reported.is_empty());
        assert!(trie_path_minimizers(&t, 1, &order, EngineKind::Heap, BlockLayout::default()).is_err());
    }

    #[test]
    fn single_path_matches_reversed_scan() {
        let mut rng = SmallRng::seed_from_u64(5);
        let s: Vec<u8> = (0..300).map(|_| b"ACGT"[rng.random_range(0..4)]).collect();
        let t = build_trie([&s]);
        let (ell, order) = (12, KmerOrder::seeded(3, 8, OrderMode::Krf).unwrap());
        let r = trie_path_minimizers(&t, ell, &order, EngineKind::TwoLayer, BlockLayout::Fixed(3))
            .unwrap();
        let reversed: Vec<u8> = s.iter().rev().cloned().collect();
        let set = minimizer_set(&reversed, ell - 2, &order, EngineKind::Deque, BlockLayout::default())
            .unwrap();
        // on a path, node ids equal depths and depth d sits at reversed index n - d
        let mut expected: Vec<usize> = set.positions.iter().map(|p| s.len() - p).collect();
        expected.sort_unstable();
        assert_eq!(r.reported, expected);
        assert!(r.peak_fragments <= ell - 2);
    }
}
