//! Desk-scale timing of the engines on synthetic DNA-like strings.

use std::fmt;
use std::hint::black_box;
use std::io::Write;
use std::str::FromStr;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use semimin_core::trie::{build_trie, trie_path_minimizers};
use semimin_core::{
    BlockLayout, DequeEngine, EngineKind, EngineStats, Error, HeapEngine, KmerOrder,
    MinimizerEngine, OracleEngine, OrderMode, TwoLayerEngine, TwoStackEngine,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Scenario {
    /// prime one window, then append + delete-first per step
    OneWaySlide,
    /// slide right `w` steps, back left `w/2` steps, repeat
    OscillatingWindow,
    /// path minimizers over a trie of text chunks
    TrieDfs,
}

impl Scenario {
    pub const ALL: [Scenario; 3] = [
        Scenario::OneWaySlide,
        Scenario::OscillatingWindow,
        Scenario::TrieDfs,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Scenario::OneWaySlide => "one-way-slide",
            Scenario::OscillatingWindow => "oscillating-window",
            Scenario::TrieDfs => "trie-dfs",
        }
    }
}

impl fmt::Display for Scenario {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Scenario {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Scenario::ALL
            .into_iter()
            .find(|sc| sc.name() == s)
            .ok_or_else(|| {
                format!("unknown scenario `{s}` (expected one-way-slide, oscillating-window or trie-dfs)")
            })
    }
}

/// One CSV row. `elapsed_ns` is the mean over repetitions.
#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct BenchRecord {
    pub engine: String,
    pub n: usize,
    pub w: usize,
    pub k: usize,
    pub seed: u64,
    pub total_ops: u64,
    pub elapsed_ns: u64,
    pub ns_per_op: f64,
    pub max_live_pairs: usize,
    pub rebuild_count: u64,
    pub scenario: String,
}

#[derive(Clone, Copy, Debug)]
pub struct BenchParams {
    pub n: usize,
    pub w: usize,
    pub k: usize,
    pub seed: u64,
    pub reps: usize,
    pub mode: OrderMode,
    pub layout: BlockLayout,
}

/// `k ≈ 4 log w / log σ` for σ = 4, the usual choice for DNA.
pub fn default_k(w: usize) -> usize {
    ((w.max(2) as f64).log2() * 2.0).round() as usize
}

/// Seeded uniform string over `ACGT`.
pub fn synthetic_text(n: usize, seed: u64) -> Vec<u8> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n).map(|_| b"ACGT"[rng.random_range(0..4)]).collect()
}

#[inline]
fn query(e: &impl MinimizerEngine) {
    black_box(e.minimizer().map(|p| p.pos));
}

fn one_way_slide(e: &mut impl MinimizerEngine, text: &[u8], span: usize) -> Result<u64, Error> {
    let mut ops = 0u64;
    for &a in &text[..span] {
        e.append(a)?;
        query(e);
        ops += 1;
    }
    for &a in &text[span..] {
        e.append(a)?;
        e.delete_first()?;
        query(e);
        ops += 2;
    }
    Ok(ops)
}

fn oscillating_window(
    e: &mut impl MinimizerEngine,
    text: &[u8],
    span: usize,
    w: usize,
) -> Result<u64, Error> {
    let mut ops = 0u64;
    for &a in &text[..span] {
        e.append(a)?;
        query(e);
        ops += 1;
    }
    let (mut lo, mut hi) = (0usize, span);
    let back = (w / 2).max(1);
    while hi < text.len() {
        for _ in 0..w {
            if hi == text.len() {
                break;
            }
            e.append(text[hi])?;
            e.delete_first()?;
            query(e);
            hi += 1;
            lo += 1;
            ops += 2;
        }
        for _ in 0..back {
            if lo == 0 || hi == text.len() {
                break;
            }
            e.prepend(text[lo - 1])?;
            e.delete_last()?;
            query(e);
            hi -= 1;
            lo -= 1;
            ops += 2;
        }
    }
    Ok(ops)
}

fn time_engine<E: MinimizerEngine>(
    make: impl Fn() -> E,
    scenario: Scenario,
    text: &[u8],
    p: &BenchParams,
) -> Result<(u64, Duration, EngineStats), Error> {
    let span = p.w + p.k - 1;
    let mut e = make();
    let start = Instant::now();
    let ops = match scenario {
        Scenario::OneWaySlide => one_way_slide(&mut e, text, span)?,
        Scenario::OscillatingWindow => oscillating_window(&mut e, text, span, p.w)?,
        Scenario::TrieDfs => unreachable!("trie traversal is timed separately"),
    };
    let elapsed = start.elapsed();
    Ok((ops, elapsed, e.stats()))
}

fn time_trie(
    kind: EngineKind,
    text: &[u8],
    p: &BenchParams,
    order: &KmerOrder,
) -> Result<(u64, Duration, EngineStats), Error> {
    let ell = p.w + p.k - 1;
    let chunk = (2 * ell).max(64);
    let trie = build_trie(text.chunks(chunk));
    let start = Instant::now();
    let report = trie_path_minimizers(&trie, ell, order, kind, p.layout)?;
    let elapsed = start.elapsed();
    black_box(&report.reported);
    Ok((report.ops, elapsed, report.engine_stats))
}

/// Times one engine on one scenario, averaging over `p.reps` repetitions.
pub fn run(kind: EngineKind, scenario: Scenario, p: &BenchParams, text: &[u8]) -> Result<BenchRecord, Error> {
    if p.w < 2 || p.k == 0 {
        return Err(Error::InvalidParameter("bench needs w >= 2 and k >= 1"));
    }
    if text.len() < p.w + p.k - 1 {
        return Err(Error::TooShort {
            needed: p.w + p.k - 1,
            got: text.len(),
        });
    }
    let order = KmerOrder::seeded(p.k, p.seed, p.mode)?;
    let reps = p.reps.max(1);
    let mut total = Duration::ZERO;
    let mut ops = 0;
    let mut stats = EngineStats::default();
    for _ in 0..reps {
        let o = order.clone();
        let (n_ops, elapsed, s) = match (scenario, kind) {
            (Scenario::TrieDfs, _) => time_trie(kind, text, p, &order)?,
            (_, EngineKind::Oracle) => time_engine(|| OracleEngine::new(o.clone()), scenario, text, p)?,
            (_, EngineKind::Heap) => time_engine(|| HeapEngine::new(o.clone()), scenario, text, p)?,
            (_, EngineKind::Deque) => time_engine(|| DequeEngine::new(o.clone()), scenario, text, p)?,
            (_, EngineKind::TwoStack) => {
                time_engine(|| TwoStackEngine::new(o.clone()), scenario, text, p)?
            }
            (_, EngineKind::TwoLayer) => {
                time_engine(|| TwoLayerEngine::new(o.clone(), p.layout), scenario, text, p)?
            }
        };
        total += elapsed;
        ops = n_ops;
        stats = s;
    }
    let elapsed_ns = (total.as_nanos() / reps as u128) as u64;
    Ok(BenchRecord {
        engine: kind.name().to_string(),
        n: text.len(),
        w: p.w,
        k: p.k,
        seed: p.seed,
        total_ops: ops,
        elapsed_ns,
        ns_per_op: if ops == 0 { 0.0 } else { elapsed_ns as f64 / ops as f64 },
        max_live_pairs: stats.max_live_pairs,
        rebuild_count: stats.rebuilds,
        scenario: scenario.name().to_string(),
    })
}

/// Comma-separated, header row, LF line endings.
pub fn write_csv<W: Write>(records: &[BenchRecord], out: W) -> csv::Result<()> {
    let mut wtr = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(out);
    if records.is_empty() {
        wtr.write_record([
            "engine",
            "n",
            "w",
            "k",
            "seed",
            "total_ops",
            "elapsed_ns",
            "ns_per_op",
            "max_live_pairs",
            "rebuild_count",
            "scenario",
        ])?;
    }
    for r in records {
        wtr.serialize(r)?;
    }
    wtr.flush()?;
    Ok(())
}
