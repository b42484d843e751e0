//! Minimizer sets of whole strings.
//!
//! The minimizer set of `S` for window `w` and order `ρ` holds every
//! position that is the minimizer of some window of `w + k − 1` letters.

use alloc::vec::Vec;

use crate::engine::{build_engine, EngineKind, EngineStats, MinimizerEngine};
use crate::hash::{KmerOrder, OrderMode};
use crate::sdstring::TextWindow;
use crate::{BlockLayout, Error, TwoLayerEngine};

/// Sorted, distinct 0-based positions plus the parameters that produced them.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MinimizerSet {
    pub positions: Vec<usize>,
    pub w: usize,
    pub k: usize,
    pub mode: OrderMode,
    pub seed: u64,
}

fn check_params(text: &[u8], w: usize, k: usize) -> Result<(), Error> {
    if w < 2 {
        return Err(Error::InvalidParameter("window size w must be at least 2"));
    }
    let needed = w + k - 1;
    if text.len() < needed {
        return Err(Error::TooShort {
            needed,
            got: text.len(),
        });
    }
    Ok(())
}

/// Slides a window of `w + k − 1` letters over `text` with an engine that
/// starts empty at absolute position 0, calling `emit` with every new
/// window minimizer.
fn slide(
    engine: &mut dyn MinimizerEngine,
    text: &[u8],
    w: usize,
    k: usize,
    mut emit: impl FnMut(usize),
) -> Result<(), Error> {
    let span = w + k - 1;
    let mut last: Option<usize> = None;
    let mut report = |engine: &dyn MinimizerEngine| {
        let pos = engine.minimizer().expect("window holds w fragments").pos as usize;
        // window minimizers never move left, so this deduplicates
        if last.is_none_or(|l| pos > l) {
            last = Some(pos);
            emit(pos);
        }
    };
    for &a in &text[..span] {
        engine.append(a)?;
    }
    report(engine);
    for &a in &text[span..] {
        engine.append(a)?;
        engine.delete_first()?;
        report(engine);
    }
    Ok(())
}

/// Minimizer set of `text` computed with an engine of the given kind.
/// `layout` only matters for [`EngineKind::TwoLayer`].
pub fn minimizer_set(
    text: &[u8],
    w: usize,
    order: &KmerOrder,
    kind: EngineKind,
    layout: BlockLayout,
) -> Result<MinimizerSet, Error> {
    check_params(text, w, order.k())?;
    let mut engine = build_engine(kind, order.clone(), layout);
    let mut positions = Vec::new();
    slide(engine.as_mut(), text, w, order.k(), |p| positions.push(p))?;
    Ok(make_set(positions, w, order))
}

fn make_set(positions: Vec<usize>, w: usize, order: &KmerOrder) -> MinimizerSet {
    MinimizerSet {
        positions,
        w,
        k: order.k(),
        mode: order.mode(),
        seed: order.hash().seed(),
    }
}

/// Streams the minimizer set of `text` to `emit` while keeping only
/// `O(√w)` pairs of working space: the letters are read in place from
/// `text` and the engine is a progressing-block [`TwoLayerEngine`].
///
/// Returns the engine's counters; `max_live_pairs` is the peak working
/// space in pairs.
pub fn minimizer_set_streamed(
    text: &[u8],
    w: usize,
    order: &KmerOrder,
    emit: impl FnMut(usize),
) -> Result<EngineStats, Error> {
    check_params(text, w, order.k())?;
    let mut engine = TwoLayerEngine::over_buffer(
        order.clone(),
        BlockLayout::Progressing,
        TextWindow::new(text, 0),
        0,
    );
    slide(&mut engine, text, w, order.k(), emit)?;
    Ok(engine.stats())
}

/// [`minimizer_set_streamed`] collected into a [`MinimizerSet`].
pub fn minimizer_set_space_efficient(
    text: &[u8],
    w: usize,
    order: &KmerOrder,
) -> Result<(MinimizerSet, EngineStats), Error> {
    let mut positions = Vec::new();
    let stats = minimizer_set_streamed(text, w, order, |p| positions.push(p))?;
    Ok((make_set(positions, w, order), stats))
}
