//! Simple undirected graphs on vertex set `1..=s`, together with the
//! structural queries the rest of the crate needs: girth, clique and
//! independence numbers, triangles, dominating triangles, induced
//! pattern matching and non-adjacent odd cycle pairs.
//!
//! Vertices are 1-based throughout. All outputs are ordered
//! lexicographically so reruns are byte-identical.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Hard cap on the vertex count. Cliques and induced odd cycles are
/// found by subset enumeration, so the universe must stay small.
pub const MAX_VERTICES: usize = 16;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("vertex count must be between 1 and {MAX_VERTICES}, got {0}")]
    BadVertexCount(usize),
    #[error("edge {{{0},{1}}} is a loop")]
    Loop(usize, usize),
    #[error("edge {{{0},{1}}} has an endpoint outside 1..={2}")]
    OutOfRange(usize, usize, usize),
    #[error("duplicate edge {{{0},{1}}}")]
    DuplicateEdge(usize, usize),
    #[error("vertex {0} is isolated, which is not allowed in complex role")]
    IsolatedVertex(usize),
    #[error("graph has no edges, which is not allowed in complex role")]
    NoEdges,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ParseError {
    #[error("invalid graph JSON: {0}")]
    Json(String),
    #[error("line {line}: {msg}")]
    Line { line: usize, msg: String },
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// A simple undirected graph on `[s] = {1,..,s}`. No loops, no
/// duplicate edges. Depending on context it plays the role of the
/// one-dimensional complex Delta or of the complementary graph G.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    s: usize,
    edges: BTreeSet<(usize, usize)>,
    adj: Vec<u32>, // adj[i-1] has bit j-1 set iff {i,j} is an edge
}

#[derive(Serialize, Deserialize)]
struct GraphFile {
    s: usize,
    edges: Vec<(usize, usize)>,
}

impl Serialize for Graph {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> Result<S::Ok, S::Error> {
        GraphFile {
            s: self.s,
            edges: self.edges.iter().copied().collect(),
        }
        .serialize(ser)
    }
}

impl Graph {
    pub fn new(
        s: usize,
        edges: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Self, GraphError> {
        if s == 0 || s > MAX_VERTICES {
            return Err(GraphError::BadVertexCount(s));
        }
        let mut set = BTreeSet::new();
        let mut adj = vec![0u32; s];
        for (a, b) in edges {
            if a == b {
                return Err(GraphError::Loop(a, b));
            }
            if a < 1 || a > s || b < 1 || b > s {
                return Err(GraphError::OutOfRange(a, b, s));
            }
            let (i, j) = (a.min(b), a.max(b));
            if !set.insert((i, j)) {
                return Err(GraphError::DuplicateEdge(a, b));
            }
            adj[i - 1] |= 1 << (j - 1);
            adj[j - 1] |= 1 << (i - 1);
        }
        Ok(Graph { s, edges: set, adj })
    }

    pub fn s(&self) -> usize {
        self.s
    }

    pub fn edges(&self) -> &BTreeSet<(usize, usize)> {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        debug_assert!(i >= 1 && i <= self.s && j >= 1 && j <= self.s);
        i != j && self.adj[i - 1] & (1 << (j - 1)) != 0
    }

    pub fn degree(&self, i: usize) -> usize {
        self.adj[i - 1].count_ones() as usize
    }

    /// Bitmask of neighbors of `i` (bit `j-1` for vertex `j`).
    pub fn neighbors_mask(&self, i: usize) -> u32 {
        self.adj[i - 1]
    }

    pub fn neighbors(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        let mask = self.adj[i - 1];
        (1..=self.s).filter(move |j| mask & (1 << (j - 1)) != 0)
    }

    /// Standing assumption for the complex role: every vertex lies on an
    /// edge, and there is at least one edge.
    pub fn validate_complex(&self) -> Result<(), GraphError> {
        if self.edges.is_empty() {
            return Err(GraphError::NoEdges);
        }
        for i in 1..=self.s {
            if self.adj[i - 1] == 0 {
                return Err(GraphError::IsolatedVertex(i));
            }
        }
        Ok(())
    }

    pub fn is_valid_complex(&self) -> bool {
        self.validate_complex().is_ok()
    }

    pub fn complement(&self) -> Graph {
        let mut edges = BTreeSet::new();
        let mut adj = vec![0u32; self.s];
        for i in 1..self.s {
            for j in (i + 1)..=self.s {
                if !self.has_edge(i, j) {
                    edges.insert((i, j));
                    adj[i - 1] |= 1 << (j - 1);
                    adj[j - 1] |= 1 << (i - 1);
                }
            }
        }
        Graph {
            s: self.s,
            edges,
            adj,
        }
    }

    /// Length of a shortest cycle, or `None` if the graph is acyclic.
    /// The shortest cycle is always induced, so this agrees with the
    /// induced-cycle definition of girth.
    pub fn girth(&self) -> Option<usize> {
        let mut best = usize::MAX;
        for root in 1..=self.s {
            let mut dist = vec![usize::MAX; self.s + 1];
            let mut parent = vec![0usize; self.s + 1];
            let mut queue = std::collections::VecDeque::new();
            dist[root] = 0;
            queue.push_back(root);
            while let Some(u) = queue.pop_front() {
                for v in self.neighbors(u) {
                    if dist[v] == usize::MAX {
                        dist[v] = dist[u] + 1;
                        parent[v] = u;
                        queue.push_back(v);
                    } else if parent[u] != v {
                        // closed walk through the root; any closed walk
                        // contains a cycle, so this never undercounts
                        best = best.min(dist[u] + dist[v] + 1);
                    }
                }
            }
        }
        if best == usize::MAX {
            None
        } else {
            Some(best)
        }
    }

    pub fn has_triangle(&self) -> bool {
        self.girth() == Some(3)
    }

    fn is_clique_mask(&self, mask: u32) -> bool {
        let mut m = mask;
        while m != 0 {
            let v = m.trailing_zeros() as usize + 1;
            m &= m - 1;
            let others = mask & !(1u32 << (v - 1));
            if others & !self.adj[v - 1] != 0 {
                return false;
            }
        }
        true
    }

    fn is_independent_mask(&self, mask: u32) -> bool {
        let mut m = mask;
        while m != 0 {
            let v = m.trailing_zeros() as usize + 1;
            m &= m - 1;
            if self.adj[v - 1] & mask != 0 {
                return false;
            }
        }
        true
    }

    pub fn clique_number(&self) -> usize {
        let mut best = 1;
        for mask in 1u32..(1 << self.s) {
            let k = mask.count_ones() as usize;
            if k > best && self.is_clique_mask(mask) {
                best = k;
            }
        }
        best
    }

    pub fn independence_number(&self) -> usize {
        let mut best = 1;
        for mask in 1u32..(1 << self.s) {
            let k = mask.count_ones() as usize;
            if k > best && self.is_independent_mask(mask) {
                best = k;
            }
        }
        best
    }

    pub fn is_connected(&self) -> bool {
        self.connected_components().len() == 1
    }

    /// Partition of `[s]` into components, each sorted, ordered by
    /// smallest vertex.
    pub fn connected_components(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.s + 1];
        let mut out = Vec::new();
        for start in 1..=self.s {
            if seen[start] {
                continue;
            }
            let mut comp = Vec::new();
            let mut stack = vec![start];
            seen[start] = true;
            while let Some(u) = stack.pop() {
                comp.push(u);
                for v in self.neighbors(u) {
                    if !seen[v] {
                        seen[v] = true;
                        stack.push(v);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    /// All triangles `{i,j,k}`, sorted lexicographically.
    pub fn triangles(&self) -> Vec<[usize; 3]> {
        let mut out = Vec::new();
        for i in 1..=self.s {
            for j in (i + 1)..=self.s {
                if !self.has_edge(i, j) {
                    continue;
                }
                for k in (j + 1)..=self.s {
                    if self.has_edge(i, k) && self.has_edge(j, k) {
                        out.push([i, j, k]);
                    }
                }
            }
        }
        out
    }

    /// First triangle (lex order) such that every vertex outside it is
    /// adjacent to at least one of its corners.
    pub fn dominating_triangle(&self) -> Option<[usize; 3]> {
        for t in self.triangles() {
            let tmask = (1u32 << (t[0] - 1)) | (1 << (t[1] - 1)) | (1 << (t[2] - 1));
            let dominated = (1..=self.s)
                .filter(|v| tmask & (1 << (v - 1)) == 0)
                .all(|v| self.adj[v - 1] & tmask != 0);
            if dominated {
                return Some(t);
            }
        }
        None
    }

    /// Vertex masks of induced odd cycles (chordless, length >= 3),
    /// ascending. A subset induces a cycle iff the induced subgraph is
    /// connected and 2-regular.
    fn induced_odd_cycle_masks(&self) -> Vec<u32> {
        let mut out = Vec::new();
        'subsets: for mask in 0u32..(1 << self.s) {
            let k = mask.count_ones();
            if k < 3 || k % 2 == 0 {
                continue;
            }
            let mut m = mask;
            while m != 0 {
                let v = m.trailing_zeros() as usize + 1;
                m &= m - 1;
                if (self.adj[v - 1] & mask).count_ones() != 2 {
                    continue 'subsets;
                }
            }
            // connectivity inside the subset
            let start = mask.trailing_zeros() as usize + 1;
            let mut seen = 1u32 << (start - 1);
            let mut stack = vec![start];
            while let Some(u) = stack.pop() {
                let mut nb = self.adj[u - 1] & mask & !seen;
                while nb != 0 {
                    let v = nb.trailing_zeros() as usize + 1;
                    nb &= nb - 1;
                    seen |= 1 << (v - 1);
                    stack.push(v);
                }
            }
            if seen == mask {
                out.push(mask);
            }
        }
        out
    }

    fn cycle_sequence(&self, mask: u32) -> Vec<usize> {
        let start = mask.trailing_zeros() as usize + 1;
        let mut seq = vec![start];
        let mut prev = 0usize;
        let mut cur = start;
        loop {
            let next = self
                .neighbors(cur)
                .find(|&v| mask & (1 << (v - 1)) != 0 && v != prev && (seq.len() == 1 || v != start))
                .or_else(|| {
                    self.neighbors(cur)
                        .find(|&v| mask & (1 << (v - 1)) != 0 && v != prev)
                });
            let next = next.expect("2-regular subset");
            if next == start {
                break;
            }
            seq.push(next);
            prev = cur;
            cur = next;
        }
        seq
    }

    /// A pair of vertex-disjoint odd cycles with no edge between them,
    /// if one exists. Reducing each cycle to an induced odd cycle on a
    /// subset of its vertices preserves disjointness and non-adjacency,
    /// so scanning induced odd cycles is exhaustive.
    pub fn nonadjacent_odd_cycles(&self) -> Option<CyclePair> {
        let masks = self.induced_odd_cycle_masks();
        for (ai, &a) in masks.iter().enumerate() {
            for &b in &masks[ai + 1..] {
                if a & b != 0 {
                    continue;
                }
                let mut joined = false;
                let mut m = a;
                while m != 0 {
                    let v = m.trailing_zeros() as usize + 1;
                    m &= m - 1;
                    if self.adj[v - 1] & b != 0 {
                        joined = true;
                        break;
                    }
                }
                if !joined {
                    return Some(CyclePair {
                        cycle1: self.cycle_sequence(a),
                        cycle2: self.cycle_sequence(b),
                    });
                }
            }
        }
        None
    }

    // --- serialization -------------------------------------------------

    pub fn to_json(&self) -> String {
        let file = GraphFile {
            s: self.s,
            edges: self.edges.iter().copied().collect(),
        };
        serde_json::to_string(&file).expect("graph serializes")
    }

    pub fn from_json(text: &str) -> Result<Graph, ParseError> {
        let file: GraphFile =
            serde_json::from_str(text).map_err(|e| ParseError::Json(e.to_string()))?;
        Ok(Graph::new(file.s, file.edges)?)
    }

    /// Text format: first line `s`, then one `i j` pair per line.
    pub fn from_text(text: &str) -> Result<Graph, ParseError> {
        let mut lines = text.lines().enumerate();
        let (_, first) = lines.next().ok_or(ParseError::Line {
            line: 1,
            msg: "empty input, expected vertex count".into(),
        })?;
        let s: usize = first.trim().parse().map_err(|_| ParseError::Line {
            line: 1,
            msg: format!("expected vertex count, got {first:?}"),
        })?;
        let mut edges = Vec::new();
        for (idx, line) in lines {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let mut parts = line.split_whitespace();
            let parse = |tok: Option<&str>| -> Result<usize, ParseError> {
                tok.and_then(|t| t.parse().ok()).ok_or(ParseError::Line {
                    line: idx + 1,
                    msg: format!("expected \"i j\", got {line:?}"),
                })
            };
            let i = parse(parts.next())?;
            let j = parse(parts.next())?;
            if parts.next().is_some() {
                return Err(ParseError::Line {
                    line: idx + 1,
                    msg: format!("expected \"i j\", got {line:?}"),
                });
            }
            edges.push((i, j));
        }
        Ok(Graph::new(s, edges)?)
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("{}\n", self.s);
        for (i, j) in &self.edges {
            out.push_str(&format!("{i} {j}\n"));
        }
        out
    }
}

/// An induced embedding of a named pattern graph into a host graph.
/// `embedding[k]` is the host vertex assigned to pattern vertex `k+1`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PatternMatch {
    pub pattern_name: String,
    pub embedding: Vec<usize>,
}

impl PatternMatch {
    /// Replays the embedding: injective, preserves edges and non-edges.
    pub fn verify(&self, pattern: &Graph, host: &Graph) -> bool {
        if self.embedding.len() != pattern.s() {
            return false;
        }
        let mut seen = BTreeSet::new();
        for &h in &self.embedding {
            if h < 1 || h > host.s() || !seen.insert(h) {
                return false;
            }
        }
        for i in 1..=pattern.s() {
            for j in (i + 1)..=pattern.s() {
                if pattern.has_edge(i, j) != host.has_edge(self.embedding[i - 1], self.embedding[j - 1])
                {
                    return false;
                }
            }
        }
        true
    }
}

/// Two vertex-disjoint odd cycles with no edge between them.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CyclePair {
    pub cycle1: Vec<usize>,
    pub cycle2: Vec<usize>,
}

impl CyclePair {
    pub fn verify(&self, host: &Graph) -> bool {
        for c in [&self.cycle1, &self.cycle2] {
            if c.len() < 3 || c.len() % 2 == 0 {
                return false;
            }
            for w in 0..c.len() {
                if !host.has_edge(c[w], c[(w + 1) % c.len()]) {
                    return false;
                }
            }
            let distinct: BTreeSet<_> = c.iter().collect();
            if distinct.len() != c.len() {
                return false;
            }
        }
        for &u in &self.cycle1 {
            for &v in &self.cycle2 {
                if u == v || host.has_edge(u, v) {
                    return false;
                }
            }
        }
        true
    }
}

/// Lexicographically least induced embedding of `pattern` into `host`,
/// found by exact backtracking over injections. Exhaustive: returns
/// `None` only when no induced embedding exists.
pub fn find_induced(pattern_name: &str, pattern: &Graph, host: &Graph) -> Option<PatternMatch> {
    if pattern.s() > host.s() {
        return None;
    }
    let mut map = Vec::with_capacity(pattern.s());
    if extend(pattern, host, &mut map, 0) {
        Some(PatternMatch {
            pattern_name: pattern_name.to_string(),
            embedding: map,
        })
    } else {
        None
    }
}

fn extend(pattern: &Graph, host: &Graph, map: &mut Vec<usize>, used: u32) -> bool {
    let p = map.len() + 1;
    if p > pattern.s() {
        return true;
    }
    for cand in 1..=host.s() {
        if used & (1 << (cand - 1)) != 0 {
            continue;
        }
        let consistent = (1..p)
            .all(|q| pattern.has_edge(p, q) == host.has_edge(cand, map[q - 1]));
        if consistent {
            map.push(cand);
            if extend(pattern, host, map, used | (1 << (cand - 1))) {
                return true;
            }
            map.pop();
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::catalog;

    fn g(name: &str) -> Graph {
        catalog(name, true).unwrap()
    }

    #[test]
    fn complement_examples() {
        let c5 = g("C5");
        let co = c5.complement();
        // C5 is self-complementary (up to relabeling)
        assert!(find_induced("C5", &c5, &co).is_some());
        assert_eq!(co.edge_count(), 5);

        let k4 = g("K4");
        assert_eq!(k4.complement().edge_count(), 0);

        let g3 = g("G3");
        assert_eq!(g3.complement().complement(), g3);
    }

    #[test]
    fn girth_examples() {
        assert_eq!(g("K4").girth(), Some(3));
        assert_eq!(g("C5").girth(), Some(5));
        assert_eq!(g("P3").girth(), None);
        assert_eq!(g("C4").girth(), Some(4));
    }

    #[test]
    fn clique_examples() {
        assert_eq!(g("K4").clique_number(), 4);
        assert_eq!(g("G1").clique_number(), 3);
        // exhaustive subset check happens inside clique_number itself;
        // cross-check F_2 against an independent scan
        let f2 = g("F_2");
        let mut best = 0;
        for mask in 1u32..(1 << f2.s()) {
            let verts: Vec<usize> = (1..=f2.s()).filter(|v| mask & (1 << (v - 1)) != 0).collect();
            let complete = verts
                .iter()
                .enumerate()
                .all(|(a, &u)| verts[a + 1..].iter().all(|&v| f2.has_edge(u, v)));
            if complete {
                best = best.max(verts.len());
            }
        }
        assert_eq!(best, 3);
        assert_eq!(f2.clique_number(), 3);
    }

    #[test]
    fn independence_examples() {
        assert_eq!(g("K4").independence_number(), 1);
        assert_eq!(g("G3").independence_number(), 2);
        assert_eq!(g("C5").independence_number(), 2);
    }

    #[test]
    fn connectivity_examples() {
        let two_k3 = g("K3uK3");
        assert!(!two_k3.is_connected());
        let comps = two_k3.connected_components();
        assert_eq!(comps, vec![vec![1, 2, 3], vec![4, 5, 6]]);
        assert!(g("G3").is_connected());
        assert!(Graph::new(2, [(1, 2)]).unwrap().is_connected());
    }

    #[test]
    fn triangle_examples() {
        assert_eq!(g("K4").triangles().len(), 4);
        assert!(g("C5").triangles().is_empty());
        assert_eq!(g("G6").triangles(), vec![[1, 2, 3]]);
    }

    #[test]
    fn dominating_triangle_examples() {
        let g4 = g("G4");
        let t = g4.dominating_triangle().expect("G4 has one");
        let tmask: u32 = t.iter().map(|v| 1u32 << (v - 1)).sum();
        for v in 1..=g4.s() {
            if tmask & (1 << (v - 1)) == 0 {
                assert!(g4.neighbors_mask(v) & tmask != 0);
            }
        }
        assert_eq!(g("G3").dominating_triangle(), None);
        assert!(g("K4").dominating_triangle().is_some());
    }

    #[test]
    fn find_induced_examples() {
        assert!(find_induced("G1", &g("G1"), &g("G2")).is_none());
        assert!(find_induced("K3", &g("K3"), &g("K4")).is_some());
        assert!(find_induced("G3", &g("G3"), &g("G4")).is_none());
        let m = find_induced("G3", &g("G3"), &g("G3")).unwrap();
        assert!(m.verify(&g("G3"), &g("G3")));
        assert_eq!(m.embedding, vec![1, 2, 3, 4, 5, 6, 7]);
    }

    #[test]
    fn nonadjacent_odd_cycles_examples() {
        let pair = g("G3").nonadjacent_odd_cycles().expect("G3 has a pair");
        assert!(pair.verify(&g("G3")));
        let sets: Vec<BTreeSet<usize>> = [&pair.cycle1, &pair.cycle2]
            .iter()
            .map(|c| c.iter().copied().collect())
            .collect();
        assert_eq!(sets[0], BTreeSet::from([1, 2, 3]));
        assert_eq!(sets[1], BTreeSet::from([4, 5, 6]));
        assert!(g("G5").nonadjacent_odd_cycles().is_some());
        assert!(g("K6").nonadjacent_odd_cycles().is_none());
    }

    #[test]
    fn girth_triangle_equivalence() {
        for name in ["K4", "C4", "C5", "G1", "G3", "G6", "P3"] {
            let gr = g(name);
            assert_eq!(gr.girth() == Some(3), !gr.triangles().is_empty(), "{name}");
        }
    }

    #[test]
    fn parse_rejects_bad_edges() {
        assert!(matches!(
            Graph::new(3, [(1, 1)]),
            Err(GraphError::Loop(1, 1))
        ));
        assert!(matches!(
            Graph::new(3, [(1, 4)]),
            Err(GraphError::OutOfRange(1, 4, 3))
        ));
        assert!(matches!(
            Graph::new(3, [(1, 2), (2, 1)]),
            Err(GraphError::DuplicateEdge(2, 1))
        ));
    }

    #[test]
    fn json_and_text_roundtrip() {
        let g1 = Graph::from_json(r#"{"s":4,"edges":[[1,2],[2,3],[1,3],[3,4]]}"#).unwrap();
        assert_eq!(g1, g("G1"));
        let g1t = Graph::from_text("4\n1 2\n2 3\n1 3\n3 4\n").unwrap();
        assert_eq!(g1t, g1);
        assert_eq!(Graph::from_json(&g1.to_json()).unwrap(), g1);
        assert_eq!(Graph::from_text(&g1.to_text()).unwrap(), g1);
        assert!(Graph::from_json(r#"{"s":2,"edges":[[1,1]]}"#).is_err());
        let err = Graph::from_text("3\n1 2\nbogus\n").unwrap_err();
        assert!(matches!(err, ParseError::Line { line: 3, .. }));
    }

    #[test]
    fn complex_role_validation() {
        let star = Graph::new(3, [(1, 2)]).unwrap();
        assert_eq!(
            star.validate_complex(),
            Err(GraphError::IsolatedVertex(3))
        );
        assert!(g("G1").is_valid_complex());
    }
}
