//! Seeded randomized cross-checks of every engine against brute force.
//!
//! Each suite derives one seed per case from the run seed, so a failing case
//! can be replayed on its own from the printed case seed.

use std::collections::BTreeMap;
use std::fmt::{self, Write as _};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use semimin_core::scan::{minimizer_set, minimizer_set_space_efficient};
use semimin_core::trie::{build_trie, oracle_trie_minimizers, trie_path_minimizers};
use semimin_core::{
    oracle_minimizer, replay, BlockLayout, BorderOp, DequeEngine, EngineKind, EngineStats,
    FragmentPair, HeapEngine, KmerOrder, MinimizerEngine, OracleEngine, OrderMode, Orientation,
    TwoLayerEngine, TwoStackEngine,
};

#[derive(Clone, Debug)]
pub struct VerifyConfig {
    pub seed: u64,
    /// cases per suite
    pub cases: usize,
    /// longest border-op sequence in the engine suite
    pub max_ops: usize,
    /// engines under test; the oracle is always the reference
    pub engines: Vec<EngineKind>,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            seed: 0,
            cases: 200,
            max_ops: 2_000,
            engines: vec![
                EngineKind::Heap,
                EngineKind::Deque,
                EngineKind::TwoStack,
                EngineKind::TwoLayer,
            ],
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Failure {
    pub case_seed: u64,
    pub detail: String,
    /// everything needed to replay the failure by hand
    pub reproducer: String,
}

#[derive(Clone, Debug, Default)]
pub struct SuiteReport {
    pub suite: &'static str,
    pub passed: usize,
    pub failed: usize,
    /// individual comparisons performed
    pub checks: u64,
    /// engine counters summed over all cases, by engine label
    pub stats: BTreeMap<String, EngineStats>,
    /// first few failures
    pub failures: Vec<Failure>,
}

impl SuiteReport {
    fn new(suite: &'static str) -> Self {
        SuiteReport {
            suite,
            ..Default::default()
        }
    }

    fn record(&mut self, outcome: Result<(), Failure>) {
        match outcome {
            Ok(()) => self.passed += 1,
            Err(f) => {
                self.failed += 1;
                if self.failures.len() < 5 {
                    self.failures.push(f);
                }
            }
        }
    }

    fn absorb(&mut self, label: &str, s: EngineStats) {
        let t = self.stats.entry(label.to_string()).or_default();
        t.ops += s.ops;
        t.work += s.work;
        t.rebuilds += s.rebuilds;
        t.rebuild_work += s.rebuild_work;
        t.recomputes += s.recomputes;
        t.flushes += s.flushes;
        t.max_live_pairs = t.max_live_pairs.max(s.max_live_pairs);
        t.witness_violations += s.witness_violations;
    }

    pub fn witness_violations(&self) -> u64 {
        self.stats.values().map(|s| s.witness_violations).sum()
    }

    pub fn ok(&self) -> bool {
        self.failed == 0
    }
}

impl fmt::Display for SuiteReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{:<8} passed {:>5}  failed {:>3}  checks {:>10}  witness violations {}",
            self.suite,
            self.passed,
            self.failed,
            self.checks,
            self.witness_violations()
        )
    }
}

/// Seed of case `index` in a run seeded with `seed` (SplitMix64 step).
pub fn case_seed(seed: u64, index: usize) -> u64 {
    let mut z = seed
        .wrapping_add((index as u64 + 1).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn pick<T: Copy>(rng: &mut ChaCha8Rng, xs: &[T]) -> T {
    xs[rng.random_range(0..xs.len())]
}

fn mode_of(rng: &mut ChaCha8Rng) -> OrderMode {
    if rng.random_bool(0.5) {
        OrderMode::Lex
    } else {
        OrderMode::Krf
    }
}

fn letter(rng: &mut ChaCha8Rng, sigma: u8) -> u8 {
    b'a' + rng.random_range(0..sigma)
}

/// A random border-op sequence together with its parameters.
#[derive(Clone, Debug)]
pub struct OpCase {
    pub case_seed: u64,
    pub k: usize,
    pub sigma: u8,
    pub mode: OrderMode,
    /// block length for the fixed two-layer engine
    pub c: usize,
    /// string length cap
    pub cap: usize,
    pub ops: Vec<BorderOp>,
}

impl OpCase {
    pub fn order(&self) -> KmerOrder {
        KmerOrder::seeded(self.k, self.case_seed, self.mode).expect("valid k")
    }
}

/// Random op sequence made of phases, each with its own growth and side
/// bias, so that strings grow, shrink and drift in both directions.
pub fn op_case(case_seed: u64, max_ops: usize) -> OpCase {
    let mut rng = ChaCha8Rng::seed_from_u64(case_seed);
    let k = pick(&mut rng, &[1, 2, 4, 8]);
    let sigma = pick(&mut rng, &[2, 4, 26]);
    let mode = mode_of(&mut rng);
    let c = rng.random_range(2..=16);
    let cap = pick(&mut rng, &[8, 32, 128, 256]);
    let total = rng.random_range(1..=max_ops.max(1));
    let mut ops = Vec::with_capacity(total);
    let mut len = 0usize;
    while ops.len() < total {
        let phase = rng.random_range(1..=(total / 8).max(16));
        let grow = pick(&mut rng, &[0.85, 0.5, 0.2]);
        let left = pick(&mut rng, &[0.1, 0.5, 0.9]);
        for _ in 0..phase.min(total - ops.len()) {
            let insert = len == 0 || (len < cap && rng.random_bool(grow));
            let at_left = rng.random_bool(left);
            let op = match (insert, at_left) {
                (true, true) => BorderOp::Prepend(letter(&mut rng, sigma)),
                (true, false) => BorderOp::Append(letter(&mut rng, sigma)),
                (false, true) => BorderOp::DeleteFirst,
                (false, false) => BorderOp::DeleteLast,
            };
            if insert {
                len += 1;
            } else {
                len -= 1;
            }
            ops.push(op);
        }
    }
    OpCase {
        case_seed,
        k,
        sigma,
        mode,
        c,
        cap,
        ops,
    }
}

/// `ops` with every `from` replaced by `to`.
fn substitute(ops: &[BorderOp], from: BorderOp, to: BorderOp) -> Vec<BorderOp> {
    ops.iter().map(|&op| if op == from { to } else { op }).collect()
}

fn format_ops(ops: &[BorderOp]) -> String {
    let mut s = String::new();
    for (i, op) in ops.iter().enumerate() {
        if i > 0 {
            s.push(' ');
        }
        let _ = write!(s, "{op}");
    }
    s
}

/// Replays `ops` on `engine`, comparing with `expected` after every op and
/// checking structural invariants periodically.
fn check_engine(
    engine: &mut dyn MinimizerEngine,
    ops: &[BorderOp],
    expected: &[Option<FragmentPair>],
) -> Result<u64, (usize, String)> {
    for (i, &op) in ops.iter().enumerate() {
        engine
            .apply(op)
            .map_err(|e| (i, format!("{op} failed: {e}")))?;
        let got = engine.minimizer();
        if got != expected[i] {
            return Err((i, format!("after {op}: got {got:?}, expected {:?}", expected[i])));
        }
        if i % 16 == 15 || i + 1 == ops.len() {
            engine
                .check_invariants()
                .map_err(|v| (i, format!("invariant broken after {op}: {v}")))?;
        }
    }
    Ok(ops.len() as u64)
}

fn oracle_answers(order: &KmerOrder, ops: &[BorderOp]) -> Vec<Option<FragmentPair>> {
    let mut oracle = OracleEngine::new(order.clone());
    replay(&mut oracle, ops).expect("generated sequences never delete from an empty string")
}

/// Runs one op case through every selected engine.
pub fn run_op_case(case: &OpCase, engines: &[EngineKind], report: &mut SuiteReport) -> Result<(), Failure> {
    let order = case.order();
    let full = &case.ops;
    let expected = oracle_answers(&order, full);
    let mut runs: Vec<(String, Box<dyn MinimizerEngine>, Vec<BorderOp>)> = Vec::new();
    let has = |kind| engines.contains(&kind);
    if has(EngineKind::Oracle) {
        runs.push(("oracle".into(), Box::new(OracleEngine::new(order.clone())), full.clone()));
    }
    if has(EngineKind::Heap) {
        runs.push(("heap".into(), Box::new(HeapEngine::new(order.clone())), full.clone()));
    }
    if has(EngineKind::TwoStack) {
        runs.push(("two-stack".into(), Box::new(TwoStackEngine::new(order.clone())), full.clone()));
    }
    if has(EngineKind::TwoLayer) {
        runs.push((
            "two-layer/progressing".into(),
            Box::new(TwoLayerEngine::new(order.clone(), BlockLayout::Progressing)),
            full.clone(),
        ));
        runs.push((
            "two-layer/fixed".into(),
            Box::new(TwoLayerEngine::new(order.clone(), BlockLayout::Fixed(case.c))),
            full.clone(),
        ));
    }
    if has(EngineKind::Deque) {
        let ltr = substitute(full, BorderOp::DeleteLast, BorderOp::DeleteFirst);
        let rtl = substitute(full, BorderOp::DeleteFirst, BorderOp::DeleteLast);
        runs.push((
            "deque/ltr".into(),
            Box::new(DequeEngine::with_orientation(order.clone(), Orientation::LeftToRight)),
            ltr,
        ));
        runs.push((
            "deque/rtl".into(),
            Box::new(DequeEngine::with_orientation(order.clone(), Orientation::RightToLeft)),
            rtl,
        ));
    }

    let mut outcome = Ok(());
    for (label, mut engine, ops) in runs {
        let answers = if &ops == full {
            None
        } else {
            Some(oracle_answers(&order, &ops))
        };
        let expected = answers.as_deref().unwrap_or(&expected);
        match check_engine(engine.as_mut(), &ops, expected) {
            Ok(n) => report.checks += n,
            Err((i, detail)) => {
                if outcome.is_ok() {
                    outcome = Err(Failure {
                        case_seed: case.case_seed,
                        detail: format!("{label} at op {i}: {detail}"),
                        reproducer: format!(
                            "case seed {}: engine={label} k={} mode={} sigma={} c={}\nops: {}",
                            case.case_seed,
                            case.k,
                            case.mode,
                            case.sigma,
                            case.c,
                            format_ops(&ops[..=i])
                        ),
                    });
                }
            }
        }
        report.absorb(&label, engine.stats());
    }
    outcome
}

/// Border-op replay of every engine against the oracle.
pub fn engine_suite(cfg: &VerifyConfig) -> SuiteReport {
    let mut report = SuiteReport::new("engines");
    for i in 0..cfg.cases {
        let case = op_case(case_seed(cfg.seed, i), cfg.max_ops);
        let outcome = run_op_case(&case, &cfg.engines, &mut report);
        report.record(outcome);
    }
    report
}

pub const SCAN_WINDOWS: [usize; 4] = [2, 4, 16, 64];
pub const SCAN_KS: [usize; 3] = [1, 3, 8];

/// Per-window brute force.
pub fn brute_force_minimizer_set(text: &[u8], w: usize, order: &KmerOrder) -> Vec<usize> {
    let span = w + order.k() - 1;
    if text.len() < span {
        return Vec::new();
    }
    let mut out: Vec<usize> = (0..=text.len() - span)
        .map(|i| {
            let m = oracle_minimizer(&text[i..i + span], 0, order).expect("window has fragments");
            i + m.pos as usize
        })
        .collect();
    out.sort_unstable();
    out.dedup();
    out
}

/// Minimizer sets of random strings from every engine and the
/// space-efficient scanner, against per-window brute force.
pub fn scan_suite(cfg: &VerifyConfig) -> SuiteReport {
    let mut report = SuiteReport::new("scan");
    for i in 0..cfg.cases {
        let seed = case_seed(cfg.seed ^ 0x5CA9, i);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = rng.random_range(1..=4096);
        let sigma = pick(&mut rng, &[2, 4, 26]);
        let mode = mode_of(&mut rng);
        let c = rng.random_range(2..=16);
        let text: Vec<u8> = (0..n).map(|_| letter(&mut rng, sigma)).collect();
        let outcome = scan_case(seed, &text, mode, c, &cfg.engines, &mut report);
        report.record(outcome);
    }
    report
}

fn scan_case(
    seed: u64,
    text: &[u8],
    mode: OrderMode,
    c: usize,
    engines: &[EngineKind],
    report: &mut SuiteReport,
) -> Result<(), Failure> {
    for w in SCAN_WINDOWS {
        for k in SCAN_KS {
            if text.len() < w + k - 1 {
                continue;
            }
            let order = KmerOrder::seeded(k, seed, mode).expect("valid k");
            let expected = brute_force_minimizer_set(text, w, &order);
            let mut results: Vec<(String, Vec<usize>)> = Vec::new();
            for &kind in engines {
                let layouts: &[BlockLayout] = if kind == EngineKind::TwoLayer {
                    &[BlockLayout::Progressing, BlockLayout::Fixed(c)]
                } else {
                    &[BlockLayout::Progressing]
                };
                for &layout in layouts {
                    let set = minimizer_set(text, w, &order, kind, layout).map_err(|e| Failure {
                        case_seed: seed,
                        detail: format!("{kind}: {e}"),
                        reproducer: String::new(),
                    })?;
                    results.push((format!("{kind}/{layout}"), set.positions));
                }
            }
            let (set, stats) = minimizer_set_space_efficient(text, w, &order).map_err(|e| Failure {
                case_seed: seed,
                detail: format!("space-efficient: {e}"),
                reproducer: String::new(),
            })?;
            report.absorb("space-efficient", stats);
            results.push(("space-efficient".into(), set.positions));
            for (label, got) in results {
                report.checks += 1;
                if got != expected {
                    return Err(Failure {
                        case_seed: seed,
                        detail: format!("{label} differs from brute force for w={w} k={k}"),
                        reproducer: format!(
                            "case seed {seed}: w={w} k={k} mode={mode} c={c}\ntext: {}",
                            String::from_utf8_lossy(text)
                        ),
                    });
                }
            }
        }
    }
    Ok(())
}

pub const TRIE_ELLS: [usize; 3] = [4, 8, 16];
pub const TRIE_KS: [usize; 3] = [2, 3, 4];

/// Trie path minimizers by DFS against the per-node brute force.
pub fn trie_suite(cfg: &VerifyConfig) -> SuiteReport {
    let mut report = SuiteReport::new("trie");
    for i in 0..cfg.cases {
        let seed = case_seed(cfg.seed ^ 0x7A1E, i);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let sigma = pick(&mut rng, &[2, 4]);
        let mode = mode_of(&mut rng);
        let count = rng.random_range(0..=200);
        let strings: Vec<Vec<u8>> = (0..count)
            .map(|_| {
                let len = rng.random_range(0..=64);
                (0..len).map(|_| letter(&mut rng, sigma)).collect()
            })
            .collect();
        let outcome = trie_case(seed, &strings, mode, &cfg.engines, &mut report);
        report.record(outcome);
    }
    report
}

fn trie_case(
    seed: u64,
    strings: &[Vec<u8>],
    mode: OrderMode,
    engines: &[EngineKind],
    report: &mut SuiteReport,
) -> Result<(), Failure> {
    let trie = build_trie(strings);
    let reproducer = || {
        let lines: Vec<String> = strings
            .iter()
            .map(|s| String::from_utf8_lossy(s).into_owned())
            .collect();
        format!("case seed {seed}: mode={mode}\nstrings:\n{}", lines.join("\n"))
    };
    for ell in TRIE_ELLS {
        for k in TRIE_KS {
            let order = KmerOrder::seeded(k, seed, mode).expect("valid k");
            let expected = oracle_trie_minimizers(&trie, ell, &order).expect("l >= k");
            for &kind in engines {
                if matches!(kind, EngineKind::Deque | EngineKind::Oracle) {
                    continue;
                }
                let got = trie_path_minimizers(&trie, ell, &order, kind, BlockLayout::Progressing)
                    .map_err(|e| Failure {
                        case_seed: seed,
                        detail: format!("{kind}: {e}"),
                        reproducer: reproducer(),
                    })?;
                report.checks += 1;
                if got.reported != expected.reported || got.windows != expected.windows {
                    return Err(Failure {
                        case_seed: seed,
                        detail: format!("{kind} differs from brute force for l={ell} k={k}"),
                        reproducer: reproducer(),
                    });
                }
            }
        }
    }
    Ok(())
}

pub const SUITES: [&str; 3] = ["engines", "scan", "trie"];

/// Runs the named suites in the order given.
pub fn run_suites(cfg: &VerifyConfig, suites: &[String]) -> Result<Vec<SuiteReport>, String> {
    suites
        .iter()
        .map(|name| match name.as_str() {
            "engines" => Ok(engine_suite(cfg)),
            "scan" => Ok(scan_suite(cfg)),
            "trie" => Ok(trie_suite(cfg)),
            other => Err(format!("unknown suite `{other}` (expected engines, scan or trie)")),
        })
        .collect()
}

pub fn run_all(cfg: &VerifyConfig) -> Vec<SuiteReport> {
    vec![engine_suite(cfg), scan_suite(cfg), trie_suite(cfg)]
}
