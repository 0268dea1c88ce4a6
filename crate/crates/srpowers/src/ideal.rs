//! Monomials, Stanley-Reisner and edge ideals, exact order computation,
//! power membership and saturation tests.
//!
//! `order(I, u)` is the largest `m` such that some multiset of `m`
//! generators has product dividing `u`; it is computed by memoized
//! branch-and-bound over generator choices with divisibility pruning.
//! All arithmetic is exact on machine integers.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{Graph, GraphError};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MonomialParseError {
    #[error("bad monomial token {0:?}")]
    BadToken(String),
    #[error("variable index {0} outside 1..={1}")]
    IndexOutOfRange(usize, usize),
}

/// An exponent vector in N^s.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Monomial {
    exps: Vec<u32>,
}

impl Monomial {
    pub fn new(exps: Vec<u32>) -> Monomial {
        Monomial { exps }
    }

    /// The unit monomial 1 in s variables.
    pub fn one(s: usize) -> Monomial {
        Monomial { exps: vec![0; s] }
    }

    pub fn variable(s: usize, i: usize) -> Monomial {
        assert!(i >= 1 && i <= s);
        let mut exps = vec![0; s];
        exps[i - 1] = 1;
        Monomial { exps }
    }

    /// Squarefree monomial with the given support.
    pub fn squarefree(s: usize, vars: &[usize]) -> Monomial {
        let mut exps = vec![0; s];
        for &v in vars {
            assert!(v >= 1 && v <= s);
            exps[v - 1] = 1;
        }
        Monomial { exps }
    }

    pub fn ambient(&self) -> usize {
        self.exps.len()
    }

    pub fn exps(&self) -> &[u32] {
        &self.exps
    }

    pub fn degree(&self) -> u32 {
        self.exps.iter().sum()
    }

    pub fn deg(&self, i: usize) -> u32 {
        self.exps[i - 1]
    }

    pub fn support(&self) -> Vec<usize> {
        (1..=self.ambient()).filter(|&i| self.deg(i) > 0).collect()
    }

    pub fn is_one(&self) -> bool {
        self.exps.iter().all(|&e| e == 0)
    }

    pub fn is_squarefree(&self) -> bool {
        self.exps.iter().all(|&e| e <= 1)
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        debug_assert_eq!(self.ambient(), other.ambient());
        self.exps.iter().zip(&other.exps).all(|(a, b)| a <= b)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        debug_assert_eq!(self.ambient(), other.ambient());
        Monomial {
            exps: self
                .exps
                .iter()
                .zip(&other.exps)
                .map(|(a, b)| a.checked_add(*b).expect("exponent overflow"))
                .collect(),
        }
    }

    pub fn mul_var_pow(&self, i: usize, k: u32) -> Monomial {
        let mut exps = self.exps.clone();
        exps[i - 1] = exps[i - 1].checked_add(k).expect("exponent overflow");
        Monomial { exps }
    }

    /// Exact quotient; panics if `divisor` does not divide `self`.
    pub fn div(&self, divisor: &Monomial) -> Monomial {
        assert!(divisor.divides(self), "non-exact monomial division");
        Monomial {
            exps: self
                .exps
                .iter()
                .zip(&divisor.exps)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    /// Parses the text form `x1^2*x2*x4^3` (or `1` for the unit).
    pub fn parse(text: &str, s: usize) -> Result<Monomial, MonomialParseError> {
        let t = text.trim();
        if t == "1" {
            return Ok(Monomial::one(s));
        }
        let mut exps = vec![0u32; s];
        for part in t.split('*') {
            let part = part.trim();
            let rest = part
                .strip_prefix('x')
                .ok_or_else(|| MonomialParseError::BadToken(part.to_string()))?;
            let (idx, pow) = match rest.split_once('^') {
                Some((i, p)) => (i, p),
                None => (rest, "1"),
            };
            let i: usize = idx
                .parse()
                .map_err(|_| MonomialParseError::BadToken(part.to_string()))?;
            let p: u32 = pow
                .parse()
                .map_err(|_| MonomialParseError::BadToken(part.to_string()))?;
            if i < 1 || i > s {
                return Err(MonomialParseError::IndexOutOfRange(i, s));
            }
            exps[i - 1] += p;
        }
        Ok(Monomial { exps })
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return write!(f, "1");
        }
        let mut first = true;
        for (idx, &e) in self.exps.iter().enumerate() {
            if e == 0 {
                continue;
            }
            if !first {
                write!(f, "*")?;
            }
            first = false;
            if e == 1 {
                write!(f, "x{}", idx + 1)?;
            } else {
                write!(f, "x{}^{}", idx + 1, e)?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// A decomposition `u = M * N` where `M` is a product of
/// `order_I(u)` generators.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GoodDecomposition {
    pub factors: Vec<Monomial>,
    pub remainder: Monomial,
}

impl GoodDecomposition {
    pub fn product(&self) -> Monomial {
        let s = self.remainder.ambient();
        self.factors
            .iter()
            .fold(Monomial::one(s), |acc, f| acc.mul(f))
            .mul(&self.remainder)
    }
}

/// A monomial ideal given by its minimal generating set (an antichain
/// under divisibility), generators sorted by exponent vector.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MonomialIdeal {
    s: usize,
    gens: Vec<Monomial>,
    #[serde(skip)]
    min_gen_degree: u32,
}

impl MonomialIdeal {
    /// Minimizes, deduplicates and sorts the given generators.
    pub fn new(s: usize, gens: impl IntoIterator<Item = Monomial>) -> MonomialIdeal {
        let mut gens: Vec<Monomial> = gens.into_iter().collect();
        for g in &gens {
            assert_eq!(g.ambient(), s, "generator in wrong ambient ring");
            assert!(!g.is_one(), "unit generator");
        }
        gens.sort();
        gens.dedup();
        let minimal: Vec<Monomial> = gens
            .iter()
            .filter(|g| !gens.iter().any(|h| h != *g && h.divides(g)))
            .cloned()
            .collect();
        let min_gen_degree = minimal.iter().map(|g| g.degree()).min().unwrap_or(0);
        MonomialIdeal {
            s,
            gens: minimal,
            min_gen_degree,
        }
    }

    pub fn zero(s: usize) -> MonomialIdeal {
        MonomialIdeal::new(s, [])
    }

    pub fn s(&self) -> usize {
        self.s
    }

    pub fn gens(&self) -> &[Monomial] {
        &self.gens
    }

    pub fn is_zero(&self) -> bool {
        self.gens.is_empty()
    }

    /// Max exponent of variable `i` over the minimal generators
    /// (0 for the zero ideal).
    pub fn rho(&self, i: usize) -> u32 {
        self.gens.iter().map(|g| g.deg(i)).max().unwrap_or(0)
    }

    /// `max { n >= 0 : u in I^n }` by memoized branch-and-bound.
    pub fn order(&self, u: &Monomial) -> u32 {
        assert_eq!(u.ambient(), self.s);
        let mut memo = HashMap::new();
        self.order_rec(u.exps().to_vec(), 0, &mut memo)
    }

    fn order_rec(
        &self,
        rem: Vec<u32>,
        idx: usize,
        memo: &mut HashMap<(Vec<u32>, usize), u32>,
    ) -> u32 {
        if idx >= self.gens.len() {
            return 0;
        }
        if let Some(&v) = memo.get(&(rem.clone(), idx)) {
            return v;
        }
        // either skip generator idx for good, or use it once and retry it
        let mut best = self.order_rec(rem.clone(), idx + 1, memo);
        let g = &self.gens[idx];
        if g.exps().iter().zip(&rem) .all(|(a, b)| a <= b) {
            let next: Vec<u32> = rem.iter().zip(g.exps()).map(|(b, a)| b - a).collect();
            best = best.max(1 + self.order_rec(next, idx, memo));
        }
        memo.insert((rem, idx), best);
        best
    }

    /// `u in I^n`, short-circuiting the search at depth `n`.
    pub fn in_power(&self, u: &Monomial, n: u32) -> bool {
        assert_eq!(u.ambient(), self.s);
        if n == 0 {
            return true;
        }
        if self.gens.is_empty() {
            return false;
        }
        let mut failed = HashSet::new();
        self.member_rec(u.exps().to_vec(), 0, n, &mut failed)
    }

    fn member_rec(
        &self,
        rem: Vec<u32>,
        idx: usize,
        depth: u32,
        failed: &mut HashSet<(Vec<u32>, usize, u32)>,
    ) -> bool {
        if depth == 0 {
            return true;
        }
        if idx >= self.gens.len() {
            return false;
        }
        if rem.iter().sum::<u32>() < self.min_gen_degree * depth {
            return false;
        }
        let key = (rem.clone(), idx, depth);
        if failed.contains(&key) {
            return false;
        }
        let g = &self.gens[idx];
        if g.exps().iter().zip(&rem).all(|(a, b)| a <= b) {
            let next: Vec<u32> = rem.iter().zip(g.exps()).map(|(b, a)| b - a).collect();
            if self.member_rec(next, idx, depth - 1, failed) {
                return true;
            }
        }
        if self.member_rec(rem, idx + 1, depth, failed) {
            return true;
        }
        failed.insert(key);
        false
    }

    /// Whether `x_i^k * u in I^n` for some `k >= 1`. Testing `k = n`
    /// suffices: every minimal generator of I^n is a product of n
    /// squarefree generators, so its i-degree is at most n.
    pub fn saturates(&self, u: &Monomial, n: u32, i: usize) -> bool {
        assert!(n >= 1);
        self.in_power(&u.mul_var_pow(i, n), n)
    }

    /// A good decomposition of `u`: factors realize `order(u)`, chosen
    /// as the lexicographically least generator multiset.
    pub fn good_decomposition(&self, u: &Monomial) -> GoodDecomposition {
        let ord = self.order(u);
        let mut picked = Vec::new();
        let found = self.pick_factors(u.exps().to_vec(), 0, ord, &mut picked);
        assert!(found, "order is realizable");
        let factors: Vec<Monomial> = picked.iter().map(|&j| self.gens[j].clone()).collect();
        let product = factors
            .iter()
            .fold(Monomial::one(self.s), |acc, f| acc.mul(f));
        GoodDecomposition {
            remainder: u.div(&product),
            factors,
        }
    }

    fn pick_factors(&self, rem: Vec<u32>, idx: usize, k: u32, acc: &mut Vec<usize>) -> bool {
        if k == 0 {
            return true;
        }
        for j in idx..self.gens.len() {
            let g = &self.gens[j];
            if g.exps().iter().zip(&rem).all(|(a, b)| a <= b) {
                let next: Vec<u32> = rem.iter().zip(g.exps()).map(|(b, a)| b - a).collect();
                acc.push(j);
                if self.pick_factors(next, j, k - 1, acc) {
                    return true;
                }
                acc.pop();
            }
        }
        false
    }

    /// Every decomposition `u = M * N` with `M` a product of `order(u)`
    /// generators.
    pub fn all_good_decompositions(&self, u: &Monomial) -> Vec<GoodDecomposition> {
        let ord = self.order(u);
        let mut out = Vec::new();
        let mut acc = Vec::new();
        self.collect_factors(u, u.exps().to_vec(), 0, ord, &mut acc, &mut out);
        out
    }

    fn collect_factors(
        &self,
        u: &Monomial,
        rem: Vec<u32>,
        idx: usize,
        k: u32,
        acc: &mut Vec<usize>,
        out: &mut Vec<GoodDecomposition>,
    ) {
        if k == 0 {
            let factors: Vec<Monomial> = acc.iter().map(|&j| self.gens[j].clone()).collect();
            let product = factors
                .iter()
                .fold(Monomial::one(self.s), |a, f| a.mul(f));
            out.push(GoodDecomposition {
                remainder: u.div(&product),
                factors,
            });
            return;
        }
        for j in idx..self.gens.len() {
            let g = &self.gens[j];
            if g.exps().iter().zip(&rem).all(|(a, b)| a <= b) {
                let next: Vec<u32> = rem.iter().zip(g.exps()).map(|(b, a)| b - a).collect();
                acc.push(j);
                self.collect_factors(u, next, j, k - 1, acc, out);
                acc.pop();
            }
        }
    }

    /// Generators whose support lies inside `v`, same ambient ring.
    pub fn restrict(&self, v: &BTreeSet<usize>) -> MonomialIdeal {
        MonomialIdeal::new(
            self.s,
            self.gens
                .iter()
                .filter(|g| g.support().iter().all(|i| v.contains(i)))
                .cloned(),
        )
    }
}

/// The Stanley-Reisner ideal of a one-dimensional complex: one
/// squarefree degree-2 generator per non-edge and one degree-3
/// generator per triangle (exactly the minimal non-faces).
pub fn stanley_reisner(delta: &Graph) -> Result<MonomialIdeal, GraphError> {
    delta.validate_complex()?;
    let s = delta.s();
    let mut gens = Vec::new();
    for i in 1..s {
        for j in (i + 1)..=s {
            if !delta.has_edge(i, j) {
                gens.push(Monomial::squarefree(s, &[i, j]));
            }
        }
    }
    for t in delta.triangles() {
        gens.push(Monomial::squarefree(s, &t));
    }
    Ok(MonomialIdeal::new(s, gens))
}

/// The edge ideal of a graph: one degree-2 generator per edge.
pub fn edge_ideal(g: &Graph) -> MonomialIdeal {
    MonomialIdeal::new(
        g.s(),
        g.edges()
            .iter()
            .map(|&(i, j)| Monomial::squarefree(g.s(), &[i, j])),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::catalog;

    fn m(text: &str, s: usize) -> Monomial {
        Monomial::parse(text, s).unwrap()
    }

    #[test]
    fn stanley_reisner_examples() {
        let i_g1 = stanley_reisner(&catalog("G1", false).unwrap()).unwrap();
        let gens: BTreeSet<String> = i_g1.gens().iter().map(|g| g.to_string()).collect();
        assert_eq!(
            gens,
            BTreeSet::from(["x1*x4".into(), "x2*x4".into(), "x1*x2*x3".into()])
        );

        let c5 = catalog("C5", false).unwrap();
        let i_c5 = stanley_reisner(&c5).unwrap();
        assert_eq!(i_c5.gens().len(), 5);
        assert!(i_c5.gens().iter().all(|g| g.degree() == 2));
        assert_eq!(i_c5, edge_ideal(&c5.complement()));

        let i_k4 = stanley_reisner(&catalog("K4", false).unwrap()).unwrap();
        assert_eq!(i_k4.gens().len(), 4);
        assert!(i_k4.gens().iter().all(|g| g.degree() == 3));

        let star = Graph::new(3, [(1, 2)]).unwrap();
        assert!(stanley_reisner(&star).is_err());
    }

    #[test]
    fn edge_ideal_examples() {
        let i_k3 = edge_ideal(&catalog("K3", false).unwrap());
        assert_eq!(i_k3.gens().len(), 3);
        let edgeless = Graph::new(2, []).unwrap();
        assert!(edge_ideal(&edgeless).is_zero());
    }

    #[test]
    fn order_examples() {
        let i = MonomialIdeal::new(3, [m("x1*x2*x3", 3)]);
        assert_eq!(i.order(&m("x1^2*x2^2*x3", 3)), 1);

        let k3 = edge_ideal(&catalog("K3", false).unwrap());
        assert_eq!(k3.order(&m("x1^2*x2^2*x3^2", 3)), 3);
        assert_eq!(k3.order(&Monomial::one(3)), 0);
    }

    #[test]
    fn in_power_examples() {
        let i = stanley_reisner(&catalog("K4", false).unwrap()).unwrap();
        assert!(!i.in_power(&m("x1*x2*x3*x4^2", 4), 2));
        assert!(i.in_power(&m("x1^2*x2*x3*x4^2", 4), 2));
        assert!(i.in_power(&m("x1*x4", 4), 0));
        assert!(MonomialIdeal::zero(2).in_power(&Monomial::one(2), 0));
        assert!(!MonomialIdeal::zero(2).in_power(&m("x1^3", 2), 1));
    }

    #[test]
    fn rho_examples() {
        let i_g1 = stanley_reisner(&catalog("G1", false).unwrap()).unwrap();
        assert_eq!(i_g1.rho(4), 1);
        let i_k4 = stanley_reisner(&catalog("K4", false).unwrap()).unwrap();
        assert_eq!(i_k4.rho(1), 1);
        assert_eq!(MonomialIdeal::zero(3).rho(2), 0);
    }

    #[test]
    fn saturates_examples() {
        let i_k4 = stanley_reisner(&catalog("K4", false).unwrap()).unwrap();
        let u = m("x1*x2*x3*x4^2", 4);
        assert!(i_k4.saturates(&u, 2, 1));

        // order is x4-stable for this ideal along x4 powers
        let i_g1 = stanley_reisner(&catalog("G1", false).unwrap()).unwrap();
        let u = m("x1*x2^2*x4^4", 4);
        assert_eq!(i_g1.order(&u), i_g1.order(&u.mul_var_pow(4, 5)));
        assert!(!i_g1.saturates(&u, 4, 4));

        let k3 = edge_ideal(&catalog("K3", false).unwrap());
        assert!(k3.saturates(&m("x1*x2", 3), 1, 3));
    }

    #[test]
    fn good_decomposition_examples() {
        let k3 = edge_ideal(&catalog("K3", false).unwrap());
        let d = k3.good_decomposition(&m("x1^2*x2^2*x3^2", 3));
        assert_eq!(d.factors.len(), 3);
        assert!(d.remainder.is_one());
        assert_eq!(d.product(), m("x1^2*x2^2*x3^2", 3));

        let i_g1 = stanley_reisner(&catalog("G1", false).unwrap()).unwrap();
        let u = m("x1*x2*x3*x4", 4);
        let d = i_g1.good_decomposition(&u);
        assert_eq!(d.factors.len(), 1);
        assert_eq!(d.product(), u);
        assert_eq!(i_g1.order(&u), 1);

        let d = k3.good_decomposition(&Monomial::one(3));
        assert!(d.factors.is_empty());
        assert!(d.remainder.is_one());
    }

    #[test]
    fn restrict_examples() {
        let i_g1 = stanley_reisner(&catalog("G1", false).unwrap()).unwrap();
        let v: BTreeSet<usize> = [1, 2, 3].into();
        let r = i_g1.restrict(&v);
        assert_eq!(r.gens(), &[m("x1*x2*x3", 4)]);
        let all: BTreeSet<usize> = (1..=4).collect();
        assert_eq!(i_g1.restrict(&all), i_g1);

        // membership consistency on supported monomials
        let u = m("x1^2*x2*x3^2", 4);
        for n in 0..4 {
            assert_eq!(i_g1.in_power(&u, n), r.in_power(&u, n));
        }
    }

    #[test]
    fn monomial_text_roundtrip() {
        let u = m("x1^2*x2*x4^3", 4);
        assert_eq!(u.exps(), &[2, 1, 0, 3]);
        assert_eq!(u.to_string(), "x1^2*x2*x4^3");
        assert_eq!(Monomial::one(3).to_string(), "1");
        assert!(Monomial::parse("x9", 4).is_err());
        assert!(Monomial::parse("y2", 4).is_err());
    }

    #[test]
    fn minimization() {
        let i = MonomialIdeal::new(3, [m("x1*x2", 3), m("x1*x2*x3", 3), m("x1*x2", 3)]);
        assert_eq!(i.gens(), &[m("x1*x2", 3)]);
    }
}
