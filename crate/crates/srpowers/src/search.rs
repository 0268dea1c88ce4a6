//! Brute-force detection of 0-th critical monomials of I_Delta^n and
//! the a0 value, by exhaustive scan of the exponent box [0,n]^s.
//!
//! The scan is backed by capped order tables computed over the whole
//! box by dynamic programming: one table for `order`, plus one table
//! per variable with that variable's constraint dropped. Because every
//! generator is squarefree, n generators use at most x_i^n, so
//! "x_i^k u in I^n for some k" is equivalent to "n generators fit into
//! u ignoring coordinate i", which is exactly what the per-variable
//! table answers. The tables are read-only after construction, so
//! partitioned scans stay deterministic.
//!
//! `is_critical` is kept on an independent route (the memoized
//! branch-and-bound membership test of the ideal module) and the two
//! routes are cross-checked on every reported witness.

use std::time::{Duration, Instant};

use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::graph::{Graph, GraphError};
use crate::ideal::{stanley_reisner, Monomial, MonomialIdeal};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SearchMode {
    Safe,
    Pruned,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SearchError {
    #[error(transparent)]
    InvalidComplex(#[from] GraphError),
    #[error("power must be >= 1")]
    BadPower,
    #[error("search box has {states} states, too large for an exhaustive scan")]
    SearchSpaceTooLarge { states: u128 },
}

/// The a0 value: top degree of a critical monomial, or minus infinity
/// when no critical monomial exists.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum A0Value {
    MinusInfinity,
    Finite(u32),
}

impl A0Value {
    pub fn is_finite(&self) -> bool {
        matches!(self, A0Value::Finite(_))
    }
}

impl std::fmt::Display for A0Value {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            A0Value::MinusInfinity => write!(f, "-inf"),
            A0Value::Finite(v) => write!(f, "{v}"),
        }
    }
}

// JSON has no minus infinity; the schema uses the string "-inf".
impl Serialize for A0Value {
    fn serialize<S: Serializer>(&self, ser: S) -> Result<S::Ok, S::Error> {
        match self {
            A0Value::MinusInfinity => ser.serialize_str("-inf"),
            A0Value::Finite(v) => ser.serialize_u32(*v),
        }
    }
}

/// A critical monomial with its order and per-variable saturation
/// witnesses (minimal k with x_i^k u in I^n; always <= n).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CriticalReport {
    pub monomial: Monomial,
    pub degree: u32,
    pub order: u32,
    pub saturation_exponents: Vec<u32>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchStats {
    pub scanned: u64,
    pub elapsed: Duration,
}

impl Serialize for SearchStats {
    fn serialize<S: Serializer>(&self, ser: S) -> Result<S::Ok, S::Error> {
        let mut st = ser.serialize_struct("SearchStats", 2)?;
        st.serialize_field("elapsed_ms", &(self.elapsed.as_secs_f64() * 1e3))?;
        st.serialize_field("scanned", &self.scanned)?;
        st.end()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct A0Result {
    pub value: A0Value,
    pub witness: Option<CriticalReport>,
    pub search_mode: SearchMode,
    /// Timing and scan counts; excluded from JSON so output stays byte-stable.
    #[serde(skip)]
    pub stats: SearchStats,
}

/// Both scan modes plus the full critical set, sharing one table build.
#[derive(Debug, Clone)]
pub struct Analysis {
    pub safe: A0Result,
    pub pruned: A0Result,
    /// All critical monomials in the box, lexicographic order.
    pub criticals: Vec<Monomial>,
}

const MAX_BOX_STATES: u128 = 50_000_000;

/// Capped order tables over the exponent box [0,n]^s.
struct BoxTables {
    s: usize,
    n: u32,
    strides: Vec<usize>, // strides[0] largest: ascending index = lex ascending
    size: usize,
    order: Vec<u8>,           // min(order_I(u), n)
    sat: Vec<Vec<u8>>,        // per variable: order ignoring that coordinate, capped
    degree_buckets: Vec<Vec<u32>>, // indices by total degree, ascending within bucket
}

impl BoxTables {
    fn build(ideal: &MonomialIdeal, n: u32) -> Result<BoxTables, SearchError> {
        let s = ideal.s();
        let base = (n + 1) as usize;
        let states = (base as u128).pow(s as u32);
        if states > MAX_BOX_STATES {
            return Err(SearchError::SearchSpaceTooLarge { states });
        }
        let size = states as usize;
        let mut strides = vec![1usize; s];
        for i in (0..s.saturating_sub(1)).rev() {
            strides[i] = strides[i + 1] * base;
        }
        for g in ideal.gens() {
            assert!(g.is_squarefree(), "search requires squarefree generators");
        }
        let gen_specs: Vec<(u32, usize)> = ideal
            .gens()
            .iter()
            .map(|g| {
                let mut mask = 0u32;
                let mut delta = 0usize;
                for i in g.support() {
                    mask |= 1 << (i - 1);
                    delta += strides[i - 1];
                }
                (mask, delta)
            })
            .collect();

        let order = Self::dp(size, s, &strides, n, &gen_specs);
        let mut sat = Vec::with_capacity(s);
        for i in 0..s {
            let projected: Vec<(u32, usize)> = gen_specs
                .iter()
                .map(|&(mask, delta)| {
                    if mask & (1 << i) != 0 {
                        (mask & !(1 << i), delta - strides[i])
                    } else {
                        (mask, delta)
                    }
                })
                .collect();
            sat.push(Self::dp(size, s, &strides, n, &projected));
        }

        let mut degree_buckets = vec![Vec::new(); (n as usize) * s + 1];
        for idx in 0..size {
            let mut rem = idx;
            let mut deg = 0usize;
            for &st in &strides {
                deg += rem / st;
                rem %= st;
            }
            degree_buckets[deg].push(idx as u32);
        }

        Ok(BoxTables {
            s,
            n,
            strides,
            size,
            order,
            sat,
            degree_buckets,
        })
    }

    fn dp(size: usize, s: usize, strides: &[usize], cap: u32, gens: &[(u32, usize)]) -> Vec<u8> {
        let cap = cap as u8;
        let mut table = vec![0u8; size];
        for idx in 0..size {
            let mut rem = idx;
            let mut umask = 0u32;
            for (i, &st) in strides.iter().enumerate().take(s) {
                if rem / st > 0 {
                    umask |= 1 << i;
                }
                rem %= st;
            }
            let mut best = 0u8;
            for &(gmask, gdelta) in gens {
                if gmask & !umask == 0 {
                    let v = table[idx - gdelta].saturating_add(1).min(cap);
                    if v > best {
                        best = v;
                        if best == cap {
                            break;
                        }
                    }
                }
            }
            table[idx] = best;
        }
        table
    }

    fn is_critical_idx(&self, idx: usize) -> bool {
        let n = self.n as u8;
        self.order[idx] < n && self.sat.iter().all(|t| t[idx] >= n)
    }

    fn monomial_at(&self, idx: usize) -> Monomial {
        let mut rem = idx;
        let mut exps = Vec::with_capacity(self.s);
        for &st in &self.strides {
            exps.push((rem / st) as u32);
            rem %= st;
        }
        Monomial::new(exps)
    }
}

fn build_report(ideal: &MonomialIdeal, n: u32, u: &Monomial, order: u32) -> CriticalReport {
    let sat_exps: Vec<u32> = (1..=ideal.s())
        .map(|i| {
            let k = (1..=n).find(|&k| ideal.in_power(&u.mul_var_pow(i, k), n));
            // cross-check of the table route against branch-and-bound
            k.expect("critical monomial saturates in every variable")
        })
        .collect();
    CriticalReport {
        monomial: u.clone(),
        degree: u.degree(),
        order,
        saturation_exponents: sat_exps,
    }
}

/// Degree cutoff below which all critical monomials must lie, used by
/// the pruned scan: 3n-1 when the complex has a triangle, 2n otherwise.
fn pruned_cutoff(delta: &Graph, n: u32) -> u32 {
    if delta.has_triangle() {
        3 * n - 1
    } else {
        2 * n
    }
}

/// Runs both scan modes over a single table build and collects the
/// full critical set.
pub fn analyze(delta: &Graph, n: u32) -> Result<Analysis, SearchError> {
    if n == 0 {
        return Err(SearchError::BadPower);
    }
    let ideal = stanley_reisner(delta)?;
    let tables = BoxTables::build(&ideal, n)?;

    // Safe: full box, decreasing degree, lex ascending within a degree.
    let start = Instant::now();
    let mut scanned = 0u64;
    let mut best: Option<usize> = None;
    let mut critical_indices: Vec<u32> = Vec::new();
    for deg in (0..tables.degree_buckets.len()).rev() {
        for &idx in &tables.degree_buckets[deg] {
            scanned += 1;
            if tables.is_critical_idx(idx as usize) {
                if best.is_none() {
                    best = Some(idx as usize);
                }
                critical_indices.push(idx);
            }
        }
    }
    let safe = finish(&ideal, &tables, n, best, SearchMode::Safe, scanned, start.elapsed());

    // Pruned: skip degrees above the cutoff, stop at the first hit.
    let start = Instant::now();
    let mut scanned = 0u64;
    let mut best: Option<usize> = None;
    let cutoff = (pruned_cutoff(delta, n) as usize).min(tables.degree_buckets.len() - 1);
    'outer: for deg in (0..=cutoff).rev() {
        for &idx in &tables.degree_buckets[deg] {
            scanned += 1;
            if tables.is_critical_idx(idx as usize) {
                best = Some(idx as usize);
                break 'outer;
            }
        }
    }
    let pruned = finish(&ideal, &tables, n, best, SearchMode::Pruned, scanned, start.elapsed());

    critical_indices.sort_unstable();
    let criticals = critical_indices
        .iter()
        .map(|&idx| tables.monomial_at(idx as usize))
        .collect();

    Ok(Analysis {
        safe,
        pruned,
        criticals,
    })
}

fn finish(
    ideal: &MonomialIdeal,
    tables: &BoxTables,
    n: u32,
    best: Option<usize>,
    search_mode: SearchMode,
    scanned: u64,
    elapsed: Duration,
) -> A0Result {
    let (value, witness) = match best {
        None => (A0Value::MinusInfinity, None),
        Some(idx) => {
            let u = tables.monomial_at(idx);
            let report = build_report(ideal, n, &u, tables.order[idx] as u32);
            (A0Value::Finite(report.degree), Some(report))
        }
    };
    A0Result {
        value,
        witness,
        search_mode,
        stats: SearchStats { scanned, elapsed },
    }
}

/// Exhaustive a0 computation in the requested mode.
pub fn a0_oracle(delta: &Graph, n: u32, mode: SearchMode) -> Result<A0Result, SearchError> {
    let analysis = analyze(delta, n)?;
    Ok(match mode {
        SearchMode::Safe => analysis.safe,
        SearchMode::Pruned => analysis.pruned,
    })
}

/// All critical monomials in the search box, lexicographic order, with
/// full per-monomial reports.
pub fn enumerate_critical(
    delta: &Graph,
    n: u32,
    mode: SearchMode,
) -> Result<Vec<CriticalReport>, SearchError> {
    if n == 0 {
        return Err(SearchError::BadPower);
    }
    let ideal = stanley_reisner(delta)?;
    let tables = BoxTables::build(&ideal, n)?;
    let cutoff = match mode {
        SearchMode::Safe => (tables.n as usize) * tables.s,
        SearchMode::Pruned => pruned_cutoff(delta, n) as usize,
    };
    let mut out = Vec::new();
    for idx in 0..tables.size {
        if tables.is_critical_idx(idx) {
            let u = tables.monomial_at(idx);
            if u.degree() as usize <= cutoff {
                out.push(build_report(&ideal, n, &u, tables.order[idx] as u32));
            }
        }
    }
    Ok(out)
}

/// A maximal-degree critical monomial (lexicographically least among
/// the maxima), if any exists.
pub fn witness_extremal(delta: &Graph, n: u32) -> Result<Option<CriticalReport>, SearchError> {
    Ok(a0_oracle(delta, n, SearchMode::Safe)?.witness)
}

/// Criticality test on the independent branch-and-bound route:
/// u is outside I^n yet every variable has a power pushing it in.
pub fn is_critical(ideal: &MonomialIdeal, n: u32, u: &Monomial) -> bool {
    assert!(n >= 1);
    !ideal.in_power(u, n) && (1..=ideal.s()).all(|i| ideal.saturates(u, n, i))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::catalog;
    use crate::graph::Graph;

    fn delta(name: &str) -> Graph {
        catalog(name, false).unwrap()
    }

    #[test]
    fn is_critical_examples() {
        let k4 = stanley_reisner(&delta("K4")).unwrap();
        for n in 3..=4u32 {
            let u = Monomial::new(vec![n - 1, n - 1, n - 1, 2]);
            assert!(is_critical(&k4, n, &u), "n = {n}");
        }
        // at n = 2 a 4-vertex clique admits no critical monomial: any
        // two triangle generators need four slots among three vertices
        let u = Monomial::new(vec![1, 1, 1, 2]);
        assert!(!is_critical(&k4, 2, &u));
        let k5 = stanley_reisner(&delta("K5")).unwrap();
        assert!(is_critical(&k5, 2, &Monomial::new(vec![1; 5])));

        let g6 = stanley_reisner(&delta("G6")).unwrap();
        let u = Monomial::new(vec![1, 2, 1, 1, 1]);
        assert!(is_critical(&g6, 3, &u));

        let g1 = stanley_reisner(&delta("G1")).unwrap();
        for n in 1..=3u32 {
            for idx in 0..(n as usize + 1).pow(4) {
                let base = n as usize + 1;
                let exps: Vec<u32> = (0..4)
                    .map(|p| ((idx / base.pow(p)) % base) as u32)
                    .collect();
                assert!(!is_critical(&g1, n, &Monomial::new(exps)));
            }
        }
    }

    #[test]
    fn a0_oracle_examples() {
        assert_eq!(
            a0_oracle(&delta("K4"), 2, SearchMode::Safe).unwrap().value,
            A0Value::MinusInfinity
        );
        assert_eq!(
            a0_oracle(&delta("K4"), 3, SearchMode::Safe).unwrap().value,
            A0Value::Finite(8)
        );
        assert_eq!(
            a0_oracle(&delta("K5"), 2, SearchMode::Pruned).unwrap().value,
            A0Value::Finite(5)
        );
        assert_eq!(
            a0_oracle(&delta("G1"), 3, SearchMode::Safe).unwrap().value,
            A0Value::MinusInfinity
        );
        assert_eq!(
            a0_oracle(&delta("E_3"), 3, SearchMode::Pruned).unwrap().value,
            A0Value::MinusInfinity
        );
        assert_eq!(
            a0_oracle(&delta("C5"), 3, SearchMode::Safe).unwrap().value,
            A0Value::Finite(5)
        );
    }

    #[test]
    fn enumerate_critical_examples() {
        assert!(enumerate_critical(&delta("G1"), 2, SearchMode::Safe)
            .unwrap()
            .is_empty());

        assert!(enumerate_critical(&delta("K4"), 2, SearchMode::Safe)
            .unwrap()
            .is_empty());
        let reports = enumerate_critical(&delta("K4"), 3, SearchMode::Safe).unwrap();
        let mons: Vec<String> = reports.iter().map(|r| r.monomial.to_string()).collect();
        assert_eq!(mons, vec!["x1^2*x2^2*x3^2*x4^2".to_string()]);

        let reports = enumerate_critical(&delta("F_2"), 3, SearchMode::Safe).unwrap();
        let expected = Monomial::new(vec![1, 1, 2, 2, 1]);
        assert!(reports.iter().any(|r| r.monomial == expected));
    }

    #[test]
    fn witness_extremal_examples() {
        let w = witness_extremal(&delta("G6"), 3).unwrap().unwrap();
        assert_eq!(w.degree, 6);

        let co_g3 = delta("G3").complement();
        let w = witness_extremal(&co_g3, 3).unwrap().unwrap();
        assert_eq!(w.degree, 6);

        assert!(witness_extremal(&delta("C4"), 3).unwrap().is_none());
    }

    #[test]
    fn safe_and_pruned_agree() {
        for name in ["K4", "G1", "G6", "C5", "E_3", "F_2"] {
            for n in 1..=4 {
                let a = analyze(&delta(name), n).unwrap();
                assert_eq!(a.safe.value, a.pruned.value, "{name} n={n}");
                assert_eq!(
                    a.safe.witness.as_ref().map(|w| &w.monomial),
                    a.pruned.witness.as_ref().map(|w| &w.monomial)
                );
            }
        }
    }

    #[test]
    fn n_one_is_minus_infinity() {
        for name in ["K4", "G1", "G3", "G6", "C5", "F_2", "K3uK3"] {
            assert_eq!(
                a0_oracle(&delta(name), 1, SearchMode::Safe).unwrap().value,
                A0Value::MinusInfinity,
                "{name}"
            );
        }
    }

    #[test]
    fn table_route_matches_branch_and_bound() {
        for name in ["G1", "G6", "C5", "E_3"] {
            let d = delta(name);
            let ideal = stanley_reisner(&d).unwrap();
            for n in 1..=3u32 {
                let reports = enumerate_critical(&d, n, SearchMode::Safe).unwrap();
                for r in reports.iter().take(20) {
                    assert!(is_critical(&ideal, n, &r.monomial));
                    assert_eq!(ideal.order(&r.monomial), r.order);
                }
            }
        }
    }

    #[test]
    fn rejects_bad_inputs() {
        assert_eq!(
            a0_oracle(&delta("K4"), 0, SearchMode::Safe).unwrap_err(),
            SearchError::BadPower
        );
        let star = Graph::new(3, [(1, 2)]).unwrap();
        assert!(matches!(
            a0_oracle(&star, 2, SearchMode::Safe),
            Err(SearchError::InvalidComplex(_))
        ));
    }
}
