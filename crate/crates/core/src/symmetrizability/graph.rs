//! Bipartite confusion graphs between `I` spoofed user-1 words and `J`
//! spoofed user-2 words. Vertices are numbered from 0.

use std::collections::BTreeSet;

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest edge count enumerated by default.
pub const DEFAULT_CAP: usize = 4;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct BipartiteGraph {
    pub i: usize,
    pub j: usize,
    /// Sorted, duplicate-free `(left, right)` pairs.
    pub edges: Vec<(usize, usize)>,
}

impl BipartiteGraph {
    pub fn new(i: usize, j: usize, mut edges: Vec<(usize, usize)>) -> Result<Self> {
        if i == 0 || j == 0 {
            return Err(Error::InvalidGraph("both sides need at least one vertex".into()));
        }
        edges.sort_unstable();
        if edges.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidGraph("duplicate edge".into()));
        }
        if let Some(&(a, b)) = edges.iter().find(|&&(a, b)| a >= i || b >= j) {
            return Err(Error::InvalidGraph(format!("edge ({a}, {b}) outside {i} x {j}")));
        }
        let left: BTreeSet<usize> = edges.iter().map(|e| e.0).collect();
        let right: BTreeSet<usize> = edges.iter().map(|e| e.1).collect();
        if left.len() != i || right.len() != j {
            return Err(Error::InvalidGraph("isolated vertex".into()));
        }
        Ok(Self { i, j, edges })
    }

    pub fn single_edge() -> Self {
        Self { i: 1, j: 1, edges: vec![(0, 0)] }
    }

    /// `K_{i,j}`.
    pub fn complete(i: usize, j: usize) -> Self {
        Self { i, j, edges: (0..i).cartesian_product(0..j).collect() }
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    /// Image of the edge set under vertex relabelings, sorted.
    pub fn relabel(&self, sigma: &[usize], pi: &[usize]) -> Vec<(usize, usize)> {
        let mut e: Vec<_> = self.edges.iter().map(|&(a, b)| (sigma[a], pi[b])).collect();
        e.sort_unstable();
        e
    }

    /// Lexicographically smallest relabeled edge list; sides are not swapped.
    pub fn canonical(&self) -> Self {
        let mut best = self.edges.clone();
        for sigma in (0..self.i).permutations(self.i) {
            for pi in (0..self.j).permutations(self.j) {
                let e = self.relabel(&sigma, &pi);
                if e < best {
                    best = e;
                }
            }
        }
        Self { i: self.i, j: self.j, edges: best }
    }
}

impl std::fmt::Display for BipartiteGraph {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "I={} J={} E={{", self.i, self.j)?;
        for (k, (a, b)) in self.edges.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "({a},{b})")?;
        }
        write!(f, "}}")
    }
}

/// One representative per isomorphism class of graphs with exactly
/// `l_exact` edges and no isolated vertex.
///
/// Classes are grown one edge at a time: deleting an edge (and any vertex it
/// leaves isolated) from an `l`-edge graph gives an `(l-1)`-edge graph, so
/// extending every `(l-1)`-edge class by one edge reaches every `l`-edge class.
pub fn enumerate_graphs(l_exact: usize, cap: usize) -> Result<Vec<BipartiteGraph>> {
    if l_exact > cap {
        return Err(Error::EdgeCountAboveCap { requested: l_exact, cap });
    }
    if l_exact == 0 {
        return Err(Error::InvalidGraph("graphs need at least one edge".into()));
    }
    let mut level = BTreeSet::from([BipartiteGraph::single_edge()]);
    for _ in 1..l_exact {
        let mut next = BTreeSet::new();
        for g in &level {
            for a in 0..=g.i {
                for b in 0..=g.j {
                    if g.edges.contains(&(a, b)) {
                        continue;
                    }
                    let mut edges = g.edges.clone();
                    edges.push((a, b));
                    let grown = BipartiteGraph::new(g.i + usize::from(a == g.i), g.j + usize::from(b == g.j), edges)
                        .expect("extension keeps every vertex covered");
                    next.insert(grown.canonical());
                }
            }
        }
        level = next;
    }
    Ok(level.into_iter().collect())
}

/// Side-preserving relabelings `(sigma, pi)` that map the edge set onto itself.
pub fn edge_preserving_permutations(b: &BipartiteGraph) -> Vec<(Vec<usize>, Vec<usize>)> {
    let mut out = Vec::new();
    for sigma in (0..b.i).permutations(b.i) {
        for pi in (0..b.j).permutations(b.j) {
            if b.relabel(&sigma, &pi) == b.edges {
                out.push((sigma.clone(), pi));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Independent oracle: labeled graphs, then pairwise isomorphism testing
    /// by brute force (no canonical forms).
    fn oracle_class_count(l: usize) -> usize {
        let mut reps: Vec<BipartiteGraph> = Vec::new();
        for i in 1..=l {
            for j in 1..=l {
                let cells: Vec<(usize, usize)> = (0..i).flat_map(|a| (0..j).map(move |b| (a, b))).collect();
                let n = cells.len();
                if n < l || n > 20 {
                    continue;
                }
                for mask in 0u32..(1 << n) {
                    if mask.count_ones() as usize != l {
                        continue;
                    }
                    let edges: Vec<_> = (0..n).filter(|k| mask >> k & 1 == 1).map(|k| cells[k]).collect();
                    let Ok(g) = BipartiteGraph::new(i, j, edges) else { continue };
                    let iso = reps.iter().any(|r| {
                        r.i == g.i
                            && r.j == g.j
                            && (0..g.i).permutations(g.i).any(|s| {
                                (0..g.j).permutations(g.j).any(|p| g.relabel(&s, &p) == r.edges)
                            })
                    });
                    if !iso {
                        reps.push(g);
                    }
                }
            }
        }
        reps.len()
    }

    #[test]
    fn one_and_two_edges() {
        assert_eq!(enumerate_graphs(1, 4).unwrap(), vec![BipartiteGraph::single_edge()]);
        let two = enumerate_graphs(2, 4).unwrap();
        assert_eq!(two.len(), 3);
        assert!(two.contains(&BipartiteGraph::new(2, 1, vec![(0, 0), (1, 0)]).unwrap()));
        assert!(two.contains(&BipartiteGraph::new(1, 2, vec![(0, 0), (0, 1)]).unwrap()));
        assert!(two.contains(&BipartiteGraph::new(2, 2, vec![(0, 0), (1, 1)]).unwrap()));
    }

    #[test]
    fn class_counts_match_brute_force() {
        for l in 1..=4 {
            assert_eq!(enumerate_graphs(l, 4).unwrap().len(), oracle_class_count(l), "l={l}");
        }
    }

    #[test]
    fn cap_is_enforced() {
        assert!(matches!(enumerate_graphs(5, 4), Err(Error::EdgeCountAboveCap { requested: 5, cap: 4 })));
    }

    #[test]
    fn automorphisms() {
        let e = edge_preserving_permutations(&BipartiteGraph::single_edge());
        assert_eq!(e, vec![(vec![0], vec![0])]);
        let matching = BipartiteGraph::new(2, 2, vec![(0, 0), (1, 1)]).unwrap();
        let m = edge_preserving_permutations(&matching);
        assert_eq!(m, vec![(vec![0, 1], vec![0, 1]), (vec![1, 0], vec![1, 0])]);
        let star = BipartiteGraph::new(3, 1, vec![(0, 0), (1, 0), (2, 0)]).unwrap();
        let s = edge_preserving_permutations(&star);
        assert_eq!(s.len(), 6);
        assert!(s.iter().all(|(_, pi)| pi == &vec![0]));
    }

    #[test]
    fn invalid_graphs() {
        assert!(BipartiteGraph::new(2, 1, vec![(0, 0)]).is_err());
        assert!(BipartiteGraph::new(1, 1, vec![(0, 0), (0, 0)]).is_err());
        assert!(BipartiteGraph::new(1, 1, vec![(0, 1)]).is_err());
    }
}
