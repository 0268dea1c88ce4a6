//! Seeded random-graph generation, oracle-vs-classifier conformance
//! runs, the property suite, the odd-walk lemma check, and the fixed
//! regression table shared by the CLI and the acceptance tests.

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::catalog::catalog;
use crate::classify::{classify, rule_hypothesis_check, ClassValue, Classification};
use crate::graph::Graph;
use crate::ideal::{edge_ideal, stanley_reisner, Monomial};
use crate::search::{analyze, A0Value, Analysis};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ProfileKind {
    TriangleFreeComplex,
    Girth3Complex,
    Alpha2Complement,
}

impl ProfileKind {
    pub const ALL: [ProfileKind; 3] = [
        ProfileKind::TriangleFreeComplex,
        ProfileKind::Girth3Complex,
        ProfileKind::Alpha2Complement,
    ];

    fn default_density(&self) -> f64 {
        match self {
            ProfileKind::TriangleFreeComplex => 0.3,
            ProfileKind::Girth3Complex => 0.4,
            // density of the complement graph, which must be dense to
            // keep its independence number at 2
            ProfileKind::Alpha2Complement => 0.72,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct FuzzProfile {
    pub kind: ProfileKind,
    pub s_range: (usize, usize),
    pub edge_density: f64,
    pub seed: u64,
}

impl FuzzProfile {
    pub fn new(kind: ProfileKind, s_range: (usize, usize), seed: u64) -> FuzzProfile {
        FuzzProfile {
            kind,
            s_range,
            edge_density: kind.default_density(),
            seed,
        }
    }
}

const REJECTION_BUDGET: u32 = 10_000;

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("rejection budget exhausted for {kind:?} with s in {s_range:?}")]
    BudgetExhausted {
        kind: ProfileKind,
        s_range: (usize, usize),
    },
    #[error("failed to write reproducer: {0}")]
    Io(#[from] std::io::Error),
}

/// Deterministic profile-conforming random graph.
pub fn random_graph(profile: &FuzzProfile) -> Result<Graph, HarnessError> {
    let mut rng = ChaCha8Rng::seed_from_u64(profile.seed);
    random_graph_with(profile, &mut rng)
}

fn random_graph_with(profile: &FuzzProfile, rng: &mut ChaCha8Rng) -> Result<Graph, HarnessError> {
    let (lo, hi) = profile.s_range;
    for _ in 0..REJECTION_BUDGET {
        let s = rng.gen_range(lo..=hi);
        let mut edges = Vec::new();
        for i in 1..s {
            for j in (i + 1)..=s {
                if rng.gen_bool(profile.edge_density) {
                    edges.push((i, j));
                }
            }
        }
        let candidate = match Graph::new(s, edges) {
            Ok(g) => g,
            Err(_) => continue,
        };
        let delta = match profile.kind {
            ProfileKind::TriangleFreeComplex => {
                if candidate.has_triangle() {
                    continue;
                }
                candidate
            }
            ProfileKind::Girth3Complex => {
                if !candidate.has_triangle() {
                    continue;
                }
                candidate
            }
            ProfileKind::Alpha2Complement => {
                // the sample plays the complement role
                if candidate.independence_number() > 2 {
                    continue;
                }
                candidate.complement()
            }
        };
        if delta.is_valid_complex() {
            return Ok(delta);
        }
    }
    Err(HarnessError::BudgetExhausted {
        kind: profile.kind,
        s_range: profile.s_range,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct CrossRow {
    pub n: u32,
    pub safe: A0Value,
    pub pruned: A0Value,
    pub formula: Classification,
    pub ok: bool,
    pub failures: Vec<String>,
}

/// Runs both oracle modes and the classifier for n = 2..=n_max and
/// records every check that the combination must satisfy.
pub fn cross_check(delta: &Graph, n_max: u32) -> Vec<CrossRow> {
    (2..=n_max).map(|n| cross_check_one(delta, n)).collect()
}

fn cross_check_one(delta: &Graph, n: u32) -> CrossRow {
    let analysis = analyze(delta, n).expect("valid complex within search budget");
    let class = classify(delta, n).expect("valid complex");
    let mut failures = instance_failures(delta, n, &analysis, &class);
    failures.extend(property_failures(delta, n, &analysis));
    CrossRow {
        n,
        safe: analysis.safe.value,
        pruned: analysis.pruned.value,
        ok: failures.is_empty(),
        failures,
        formula: class,
    }
}

fn instance_failures(
    delta: &Graph,
    n: u32,
    analysis: &Analysis,
    class: &Classification,
) -> Vec<String> {
    let mut out = Vec::new();
    if analysis.safe.value != analysis.pruned.value {
        out.push(format!(
            "safe scan found {} but pruned scan found {}",
            analysis.safe.value, analysis.pruned.value
        ));
    }
    if !class.value.agrees_with(analysis.safe.value) {
        out.push(format!(
            "classifier committed to {} but oracle found {}",
            class.value, analysis.safe.value
        ));
    }
    if class.value == ClassValue::Unknown {
        let (lo, hi) = class.bounds.unwrap_or((0, u32::MAX));
        if let A0Value::Finite(v) = analysis.safe.value {
            if v < lo || v > hi {
                out.push(format!(
                    "oracle value {v} escapes abstention bounds [{lo}, {hi}]"
                ));
            }
        }
    }
    if !rule_hypothesis_check(delta, n, class) {
        out.push(format!("witness replay failed for rule {:?}", class.rule));
    }
    out
}

/// Per-critical cap keeping property checks affordable on dense
/// critical sets; the kept prefix is deterministic (lex order).
const CRITICALS_CHECKED: usize = 40;

/// Properties of oracle output alone, aggregated per instance:
/// decomposition shape, value windows, the n+1 floor, the exponent
/// box, and the odd-cycle-pair pattern equivalence.
fn property_failures(delta: &Graph, n: u32, analysis: &Analysis) -> Vec<String> {
    let mut out = Vec::new();
    let ideal = stanley_reisner(delta).expect("valid complex");
    let girth = delta.girth();
    let triangle_free = girth != Some(3);

    for u in analysis.criticals.iter().take(CRITICALS_CHECKED) {
        // exponent box
        if u.exps().iter().any(|&e| e > n) {
            out.push(format!("critical monomial {u} leaves the [0, n] box"));
        }
        // decomposition shape; squarefree remainders are an edge-ideal
        // phenomenon, so only the triangle-free branch asserts them
        for d in ideal.all_good_decompositions(u) {
            if d.factors.len() >= n as usize {
                out.push(format!(
                    "good decomposition of {u} uses {} factors at power {n}",
                    d.factors.len()
                ));
            }
            if triangle_free && !d.remainder.is_squarefree() {
                out.push(format!(
                    "good decomposition of {u} has non-squarefree remainder {}",
                    d.remainder
                ));
            }
        }
    }

    match analysis.safe.value {
        A0Value::Finite(v) => {
            if triangle_free && v != 2 * n - 1 && v != 2 * n {
                out.push(format!("triangle-free value {v} outside {{2n-1, 2n}}"));
            }
            if !triangle_free {
                if v > 3 * n - 1 {
                    out.push(format!("girth-3 value {v} above the 3n-1 ceiling"));
                }
                let has_k4 = delta.clique_number() >= 4;
                if v == 3 * n - 1 && !has_k4 {
                    out.push("value meets the 3n-1 ceiling without a 4-clique".to_string());
                }
                if n >= 3 && has_k4 && v != 3 * n - 1 {
                    out.push(format!("4-clique at n = {n} should force 3n-1, got {v}"));
                }
            }
            if n >= 2 && v < n + 1 {
                out.push(format!("finite value {v} below the n+1 floor"));
            }
        }
        A0Value::MinusInfinity => {
            if !triangle_free && n >= 3 && delta.clique_number() >= 4 {
                out.push("4-clique at n >= 3 should force 3n-1, got -inf".to_string());
            }
        }
    }

    // the two detectors of a non-adjacent odd cycle pair must agree on
    // any connected complement with independence number at most 2
    let g = delta.complement();
    if g.is_connected() && g.independence_number() <= 2 {
        let by_cycles = g.nonadjacent_odd_cycles().is_some();
        let by_pattern = ["G3", "G4", "G5"].iter().any(|p| {
            let pattern = catalog(p, true).expect("catalog pattern");
            crate::graph::find_induced(p, &pattern, &g).is_some()
        });
        if by_cycles != by_pattern {
            out.push(format!(
                "cycle-pair detector ({by_cycles}) disagrees with pattern detector ({by_pattern})"
            ));
        }
    }

    out
}

#[derive(Debug, Clone, Serialize)]
pub struct SuiteConfig {
    pub trials_per_profile: usize,
    pub s_range: (usize, usize),
    pub n_values: Vec<u32>,
    pub seed: u64,
    pub include_catalog: bool,
    #[serde(skip)]
    pub repro_dir: Option<PathBuf>,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            trials_per_profile: 200,
            s_range: (4, 8),
            n_values: vec![2, 3, 4],
            seed: 1,
            include_catalog: true,
            repro_dir: None,
        }
    }
}

#[derive(Debug, Clone, Serialize, Default)]
pub struct SuiteReport {
    pub graphs: u64,
    pub checks: u64,
    pub agreements: u64,
    pub abstentions: u64,
    pub generation_failures: u64,
    pub rule_counts: BTreeMap<String, u64>,
    pub failures: Vec<String>,
    /// Slowest instances as (label, milliseconds), capped at five.
    pub slowest: Vec<(String, f64)>,
}

#[derive(Serialize)]
struct Reproducer<'a> {
    graph: &'a Graph,
    n: u32,
    seed: u64,
    mode: &'a str,
    expected: String,
    got: String,
}

const CATALOG_NAMES: [&str; 16] = [
    "K3", "K4", "K5", "C4", "C5", "C6", "P3", "P4", "K3uK3", "K2uK3", "G1", "G6", "G7", "E_3",
    "F_2", "F_3",
];

/// Runs the full property suite: every catalog graph plus seeded
/// random graphs from all three profiles, each cross-checked at every
/// requested power. Trials run in parallel and merge in a fixed order.
pub fn property_suite(config: &SuiteConfig) -> SuiteReport {
    let mut inputs: Vec<(String, u64, Option<Graph>)> = Vec::new();
    if config.include_catalog {
        for name in CATALOG_NAMES {
            inputs.push((
                format!("catalog {name}"),
                config.seed,
                Some(catalog(name, false).expect("catalog name")),
            ));
        }
        // not G5: its complement has an isolated vertex (7 is
        // universal in G5), so it is out of complex role
        for name in ["G3", "G4"] {
            inputs.push((
                format!("catalog co:{name}"),
                config.seed,
                Some(catalog(name, false).expect("catalog name").complement()),
            ));
        }
    }
    let mut generation_failures = 0u64;
    for (pi, kind) in ProfileKind::ALL.iter().enumerate() {
        for t in 0..config.trials_per_profile {
            let seed = config
                .seed
                .wrapping_add((pi as u64) << 32)
                .wrapping_add(t as u64);
            let profile = FuzzProfile {
                seed,
                ..FuzzProfile::new(*kind, config.s_range, seed)
            };
            match random_graph(&profile) {
                Ok(g) => inputs.push((format!("{kind:?} seed {seed}"), seed, Some(g))),
                Err(_) => {
                    generation_failures += 1;
                    inputs.push((format!("{kind:?} seed {seed}"), seed, None));
                }
            }
        }
    }

    let n_max = config.n_values.iter().copied().max().unwrap_or(2);
    let results: Vec<(usize, Vec<CrossRow>, f64)> = inputs
        .par_iter()
        .enumerate()
        .map(|(i, (_, _, graph))| {
            let start = Instant::now();
            let rows = match graph {
                Some(g) => config
                    .n_values
                    .iter()
                    .map(|&n| cross_check_one(g, n.min(n_max)))
                    .collect(),
                None => Vec::new(),
            };
            (i, rows, start.elapsed().as_secs_f64() * 1e3)
        })
        .collect();

    let mut report = SuiteReport {
        generation_failures,
        ..SuiteReport::default()
    };
    let mut sorted = results;
    sorted.sort_by_key(|(i, _, _)| *i);
    let mut timings: Vec<(String, f64)> = Vec::new();
    for (i, rows, ms) in sorted {
        let (label, seed, graph) = &inputs[i];
        if graph.is_some() {
            report.graphs += 1;
            timings.push((label.clone(), ms));
        }
        for row in rows {
            report.checks += 1;
            match row.formula.value {
                ClassValue::Unknown => report.abstentions += 1,
                _ => report.agreements += u64::from(row.ok),
            }
            if let Some(rule) = row.formula.rule {
                *report.rule_counts.entry(format!("{rule:?}")).or_insert(0) += 1;
            }
            if !row.ok {
                for f in &row.failures {
                    report.failures.push(format!("{label} n={}: {f}", row.n));
                }
                if let (Some(dir), Some(g)) = (&config.repro_dir, graph.as_ref()) {
                    let file = dir.join(format!("repro-{}-n{}.json", seed, row.n));
                    let bundle = Reproducer {
                        graph: g,
                        n: row.n,
                        seed: *seed,
                        mode: "both",
                        expected: row.formula.value.to_string(),
                        got: row.safe.to_string(),
                    };
                    let _ = std::fs::write(
                        file,
                        serde_json::to_string_pretty(&bundle).expect("serializable"),
                    );
                }
            }
        }
    }
    timings.sort_by(|a, b| b.1.total_cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
    timings.truncate(5);
    report.slowest = timings;
    report
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum OddWalkOutcome {
    Holds,
    Violated,
    Skipped,
}

/// Samples a multiset of m edges and a monomial v with
/// e_1...e_m * v in I^{m+1}, then searches for vertices w, y with
/// wy | v joined by an odd walk whose interior edge multiset lies in
/// the sample. The lemma says the search always succeeds.
pub fn odd_walk_check(g: &Graph, m: usize, seed: u64) -> OddWalkOutcome {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let edges: Vec<(usize, usize)> = g.edges().iter().copied().collect();
    if edges.is_empty() {
        return OddWalkOutcome::Skipped;
    }
    let ideal = edge_ideal(g);
    let s = g.s();

    let pool: Vec<(usize, usize)> = (0..m)
        .map(|_| edges[rng.gen_range(0..edges.len())])
        .collect();
    let mut pool_product = Monomial::one(s);
    for &(a, b) in &pool {
        pool_product = pool_product.mul(&Monomial::squarefree(s, &[a, b]));
    }

    // half the trials draw v freely and keep it only when the
    // membership precondition holds; the rest force membership by
    // making v itself a product of edges
    let v = if rng.gen_bool(0.5) {
        let exps: Vec<u32> = (0..s).map(|_| rng.gen_range(0..=2)).collect();
        Monomial::new(exps)
    } else {
        let mut v = Monomial::one(s);
        for _ in 0..rng.gen_range(1..=2) {
            let (a, b) = edges[rng.gen_range(0..edges.len())];
            v = v.mul(&Monomial::squarefree(s, &[a, b]));
        }
        v
    };
    if !ideal.in_power(&pool_product.mul(&v), m as u32 + 1) {
        return OddWalkOutcome::Skipped;
    }

    for w in 1..=s {
        for y in w..=s {
            let pair_divides = if w == y {
                v.deg(w) >= 2
            } else {
                v.deg(w) >= 1 && v.deg(y) >= 1
            };
            if pair_divides && odd_walk_exists(g, &pool, w, y) {
                return OddWalkOutcome::Holds;
            }
        }
    }
    OddWalkOutcome::Violated
}

/// Walk shape: one host edge, then rounds of (pool edge, host edge),
/// ending at y. Exhaustive search over (vertex, remaining pool mask).
fn odd_walk_exists(g: &Graph, pool: &[(usize, usize)], w: usize, y: usize) -> bool {
    let full_mask: u32 = (1 << pool.len()) - 1;
    let mut stack: Vec<(usize, u32)> = g.neighbors(w).map(|a| (a, full_mask)).collect();
    let mut seen = std::collections::HashSet::new();
    while let Some((at, mask)) = stack.pop() {
        if at == y {
            return true;
        }
        if !seen.insert((at, mask)) {
            continue;
        }
        for (idx, &(p, q)) in pool.iter().enumerate() {
            if mask & (1 << idx) == 0 {
                continue;
            }
            let other = if p == at {
                q
            } else if q == at {
                p
            } else {
                continue;
            };
            for c in g.neighbors(other) {
                stack.push((c, mask & !(1 << idx)));
            }
        }
    }
    false
}

#[derive(Debug, Clone, Serialize)]
pub struct RegressionRow {
    pub label: String,
    #[serde(skip)]
    pub delta: Graph,
    pub n: u32,
    pub expected: A0Value,
}

/// The fixed table of known values verified by the CLI check command
/// and the acceptance suite.
pub fn regression_rows() -> Vec<RegressionRow> {
    let inf = A0Value::MinusInfinity;
    let fin = A0Value::Finite;
    let named = |name: &str| catalog(name, false).expect("catalog name");
    let co = |name: &str| named(name).complement();
    let chain_g1p = Graph::new(5, [(1, 2), (2, 3), (1, 3), (4, 5), (1, 5)]).unwrap();
    let k33 = co("K3uK3");
    let k23 = co("K2uK3");

    let mut rows = Vec::new();
    let mut push = |label: &str, delta: &Graph, n: u32, expected: A0Value| {
        rows.push(RegressionRow {
            label: label.to_string(),
            delta: delta.clone(),
            n,
            expected,
        });
    };

    // a lone 4-clique has no torsion at the square; the ceiling needs
    // the third power
    push("K4", &named("K4"), 2, inf);
    push("K4", &named("K4"), 3, fin(8));
    push("K4", &named("K4"), 4, fin(11));
    for n in 1..=4 {
        push("G1", &named("G1"), n, inf);
    }
    for n in 2..=4 {
        push("E_3", &named("E_3"), n, inf);
    }
    push("F_2", &named("F_2"), 3, fin(7));
    push("F_2", &named("F_2"), 4, fin(10));
    push("F_3", &named("F_3"), 3, fin(7));
    push("F_3", &named("F_3"), 4, fin(10));
    push("triangle+detached edge", &chain_g1p, 3, fin(7));
    for name in ["G6", "G7"] {
        push(name, &named(name), 3, fin(6));
        push(name, &named(name), 4, fin(9));
    }
    push("C5", &named("C5"), 2, inf);
    push("C5", &named("C5"), 3, fin(5));
    push("C5", &named("C5"), 4, fin(7));
    push("co:G3", &co("G3"), 2, inf);
    push("co:G3", &co("G3"), 3, fin(6));
    push("co:G3", &co("G3"), 4, fin(8));
    push("co:G4", &co("G4"), 2, fin(3));
    push("K3,3", &k33, 2, inf);
    push("K3,3", &k33, 3, fin(6));
    push("K3,3", &k33, 4, fin(8));
    for n in 2..=4 {
        push("K2,3", &k23, n, inf);
    }
    rows
}
