//! Named graphs used by the classifier and the test harness: complete
//! graphs, cycles, paths, disjoint unions of completes, the fixed
//! 4-to-7 vertex graphs G1..G7 and G1', and the parameterized families
//! E_k and F_k.

use thiserror::Error;

use crate::graph::{Graph, GraphError};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CatalogError {
    #[error("unknown catalog name {0:?}")]
    UnknownName(String),
    #[error("invalid parameter for {name}: {msg}")]
    InvalidParam { name: String, msg: String },
    #[error("{0:?} is a pattern-only graph (it has an isolated vertex); pass pattern_ok to emit it")]
    PatternOnly(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CatalogName {
    Complete(usize),
    Cycle(usize),
    /// Path of length `k` (so `k+1` vertices), matching the convention
    /// where P3 has 4 vertices.
    Path(usize),
    DisjointCompletes(usize, usize),
    G1,
    G2,
    G1Prime,
    G3,
    G4,
    G5,
    G6,
    G7,
    E(usize),
    F(usize),
}

impl CatalogName {
    pub fn parse(name: &str) -> Result<CatalogName, CatalogError> {
        let bad = || CatalogError::UnknownName(name.to_string());
        let t = name.trim();
        match t {
            "G1" => return Ok(CatalogName::G1),
            "G2" => return Ok(CatalogName::G2),
            "G1'" => return Ok(CatalogName::G1Prime),
            "G3" => return Ok(CatalogName::G3),
            "G4" => return Ok(CatalogName::G4),
            "G5" => return Ok(CatalogName::G5),
            "G6" => return Ok(CatalogName::G6),
            "G7" => return Ok(CatalogName::G7),
            _ => {}
        }
        let num = |s: &str| s.parse::<usize>().ok();
        if let Some(rest) = t.strip_prefix('K') {
            if let Some((a, b)) = rest.split_once('u').or_else(|| rest.split_once('+')) {
                let a = num(a).ok_or_else(bad)?;
                let b = num(b.strip_prefix('K').ok_or_else(bad)?).ok_or_else(bad)?;
                return Ok(CatalogName::DisjointCompletes(a, b));
            }
            return Ok(CatalogName::Complete(num(rest).ok_or_else(bad)?));
        }
        if let Some(rest) = t.strip_prefix('C') {
            return Ok(CatalogName::Cycle(num(rest).ok_or_else(bad)?));
        }
        if let Some(rest) = t.strip_prefix('P') {
            return Ok(CatalogName::Path(num(rest).ok_or_else(bad)?));
        }
        if let Some(rest) = t.strip_prefix('E') {
            let rest = rest.strip_prefix('_').unwrap_or(rest);
            return Ok(CatalogName::E(num(rest).ok_or_else(bad)?));
        }
        if let Some(rest) = t.strip_prefix('F') {
            let rest = rest.strip_prefix('_').unwrap_or(rest);
            return Ok(CatalogName::F(num(rest).ok_or_else(bad)?));
        }
        Err(bad())
    }

    pub fn build(&self) -> Result<Graph, CatalogError> {
        let param_err = |name: &str, msg: &str| CatalogError::InvalidParam {
            name: name.to_string(),
            msg: msg.to_string(),
        };
        let g = match *self {
            CatalogName::Complete(s) => {
                if s == 0 {
                    return Err(param_err("K_s", "s must be >= 1"));
                }
                let mut edges = Vec::new();
                for i in 1..s {
                    for j in (i + 1)..=s {
                        edges.push((i, j));
                    }
                }
                Graph::new(s, edges)?
            }
            CatalogName::Cycle(s) => {
                if s < 3 {
                    return Err(param_err("C_s", "s must be >= 3"));
                }
                let mut edges: Vec<_> = (1..s).map(|i| (i, i + 1)).collect();
                edges.push((1, s));
                Graph::new(s, edges)?
            }
            CatalogName::Path(k) => {
                if k == 0 {
                    return Err(param_err("P_k", "length must be >= 1"));
                }
                Graph::new(k + 1, (1..=k).map(|i| (i, i + 1)))?
            }
            CatalogName::DisjointCompletes(a, b) => {
                if a == 0 || b == 0 {
                    return Err(param_err("K_a u K_b", "both parts must be >= 1"));
                }
                let mut edges = Vec::new();
                for i in 1..a {
                    for j in (i + 1)..=a {
                        edges.push((i, j));
                    }
                }
                for i in (a + 1)..(a + b) {
                    for j in (i + 1)..=(a + b) {
                        edges.push((i, j));
                    }
                }
                Graph::new(a + b, edges)?
            }
            CatalogName::G1 => Graph::new(4, [(1, 2), (2, 3), (1, 3), (3, 4)])?,
            CatalogName::G2 => Graph::new(4, [(1, 2), (2, 3), (1, 3), (3, 4), (1, 4)])?,
            CatalogName::G1Prime => Graph::new(4, [(1, 2), (2, 3), (1, 3)])?,
            CatalogName::G3 => Graph::new(
                7,
                [
                    (1, 2),
                    (2, 3),
                    (1, 3),
                    (4, 5),
                    (5, 6),
                    (4, 6),
                    (3, 7),
                    (4, 7),
                    (5, 7),
                    (6, 7),
                ],
            )?,
            CatalogName::G4 => {
                let mut e: Vec<_> = CatalogName::G3.build()?.edges().iter().copied().collect();
                e.push((2, 7));
                Graph::new(7, e)?
            }
            CatalogName::G5 => {
                let mut e: Vec<_> = CatalogName::G4.build()?.edges().iter().copied().collect();
                e.push((1, 7));
                Graph::new(7, e)?
            }
            CatalogName::G6 => Graph::new(5, [(1, 2), (2, 3), (1, 3), (3, 4), (1, 5)])?,
            CatalogName::G7 => Graph::new(5, [(1, 2), (2, 3), (1, 3), (3, 4), (1, 5), (4, 5)])?,
            CatalogName::E(k) => {
                if k < 2 {
                    return Err(param_err("E_k", "k must be >= 2"));
                }
                let mut edges = vec![(k + 1, k + 2)];
                for i in 1..=k {
                    edges.push((i, k + 1));
                    edges.push((i, k + 2));
                }
                Graph::new(k + 2, edges)?
            }
            CatalogName::F(k) => {
                if k < 1 {
                    return Err(param_err("F_k", "k must be >= 1"));
                }
                let mut edges = vec![(k + 1, k + 2)];
                for i in 1..=k {
                    for j in (k + 1)..=(k + 3) {
                        edges.push((i, j));
                    }
                }
                Graph::new(k + 3, edges)?
            }
        };
        Ok(g)
    }
}

/// Builds a catalog graph by name, e.g. `K4`, `C5`, `P3`, `K3uK3`,
/// `G1'`, `E_3`, `F_2`. Unless `pattern_ok` is set, the result must be
/// valid in complex role (no isolated vertices).
pub fn catalog(name: &str, pattern_ok: bool) -> Result<Graph, CatalogError> {
    let parsed = CatalogName::parse(name)?;
    let g = parsed.build()?;
    if !pattern_ok && !g.is_valid_complex() {
        return Err(CatalogError::PatternOnly(name.to_string()));
    }
    Ok(g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::find_induced;

    #[test]
    fn fixed_graphs() {
        assert_eq!(catalog("G1", false).unwrap().edge_count(), 4);
        assert_eq!(catalog("G3", false).unwrap().edge_count(), 10);
        assert_eq!(catalog("G5", false).unwrap().edge_count(), 12);
        assert_eq!(catalog("G7", false).unwrap().edge_count(), 6);
    }

    #[test]
    fn f1_isomorphic_to_g1() {
        let f1 = catalog("F_1", false).unwrap();
        let g1 = catalog("G1", false).unwrap();
        assert_eq!(f1.s(), g1.s());
        assert_eq!(f1.edge_count(), g1.edge_count());
        assert!(find_induced("F_1", &f1, &g1).is_some());
    }

    #[test]
    fn e2_shape() {
        let e2 = catalog("E_2", false).unwrap();
        assert_eq!(e2.s(), 4);
        assert_eq!(e2.edge_count(), 5);
    }

    #[test]
    fn pattern_only_guard() {
        assert!(matches!(
            catalog("G1'", false),
            Err(CatalogError::PatternOnly(_))
        ));
        assert!(catalog("G1'", true).is_ok());
    }

    #[test]
    fn param_validation() {
        assert!(catalog("E_1", true).is_err());
        assert!(catalog("F_0", true).is_err());
        assert!(catalog("C2", true).is_err());
        assert!(matches!(
            catalog("Zq", true),
            Err(CatalogError::UnknownName(_))
        ));
    }

    #[test]
    fn disjoint_completes() {
        let g = catalog("K3uK3", false).unwrap();
        assert_eq!(g.s(), 6);
        assert_eq!(g.edge_count(), 6);
        assert_eq!(g.connected_components().len(), 2);
        let g = catalog("K2+K3", false).unwrap();
        assert_eq!(g.s(), 5);
        assert_eq!(g.edge_count(), 4);
    }
}
