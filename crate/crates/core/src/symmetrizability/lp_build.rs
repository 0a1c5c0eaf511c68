//! The linear system whose nonnegative solutions are the symmetrizing
//! jammer laws `Q(s | x^{I-1}, y^{J-1})` of a confusion graph.
//!
//! For an edge `e = (i, j)` and full tuples `(x^I, y^J)` write
//!
//! ```text
//! F_e(x^I, y^J)(z) = sum_s W(z | x_i, y_j, s) Q(s | x_{-i}, y_{-j})
//! ```
//!
//! where `x_{-i}` lists the remaining coordinates in increasing index order.
//! `Q` symmetrizes the graph when `F_e = F_e'` for the edge pairs selected by
//! the [`SymmetryRule`].

use crate::channel::DiscreteAvmac;
use crate::dist::CondDistribution;
use crate::error::Result;
use crate::lp::{Constraints, FeasibleBasis, RowSpace};

use super::graph::{edge_preserving_permutations, BipartiteGraph};

/// Which edge pairs must produce identical mixed output laws.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SymmetryRule {
    /// Every pair of edges. This is the condition under which a receiver
    /// cannot tell which edge carried the true message pair.
    #[default]
    AllEdgePairs,
    /// Only edges related by a side-preserving graph automorphism. Weaker
    /// than [`SymmetryRule::AllEdgePairs`]; the two coincide on
    /// edge-transitive graphs.
    EdgeAutomorphisms,
}

/// Equality system over the variables `q(s, x^{I-1}, y^{J-1}) >= 0`, with
/// variable index `(xt * |Y|^{J-1} + yt) * |S| + s`.
#[derive(Debug, Clone)]
pub struct SymmetrizingLp {
    pub graph: BipartiteGraph,
    pub rule: SymmetryRule,
    pub card_s: usize,
    pub card_x: usize,
    pub card_y: usize,
    /// `|X|^{I-1}` and `|Y|^{J-1}`.
    pub x_tuples: usize,
    pub y_tuples: usize,
    pub constraints: Constraints,
    pub normalization_rows: usize,
    /// Symmetry rows kept after discarding linearly dependent ones.
    pub symmetry_rows: usize,
    feasible: Option<FeasibleBasis>,
}

impl SymmetrizingLp {
    pub fn num_vars(&self) -> usize {
        self.x_tuples * self.y_tuples * self.card_s
    }

    pub fn num_conditionings(&self) -> usize {
        self.x_tuples * self.y_tuples
    }

    pub fn var(&self, s: usize, cond: usize) -> usize {
        cond * self.card_s + s
    }

    /// True when at least one symmetrizing law exists.
    pub fn is_feasible(&self) -> bool {
        self.feasible.is_some()
    }

    pub fn basis(&self) -> Option<&FeasibleBasis> {
        self.feasible.as_ref()
    }

    /// Product-law probability of each conditioning tuple.
    pub fn tuple_weights(&self, px: &[f64], py: &[f64]) -> Vec<f64> {
        let wx = tuple_probs(px, self.graph.i - 1);
        let wy = tuple_probs(py, self.graph.j - 1);
        let mut w = Vec::with_capacity(self.num_conditionings());
        for a in &wx {
            for b in &wy {
                w.push(a * b);
            }
        }
        w
    }

    /// Objective of the weak problem: `E[g(s)]` with the spoofed words drawn
    /// from the product law.
    pub fn product_cost(&self, px: &[f64], py: &[f64], g: &[f64]) -> Vec<f64> {
        let mut c = Vec::with_capacity(self.num_vars());
        for w in self.tuple_weights(px, py) {
            c.extend(g.iter().map(|gs| w * gs));
        }
        c
    }

    pub fn conditioning_arity(&self) -> Vec<usize> {
        let mut a = vec![self.card_x; self.graph.i - 1];
        a.extend(std::iter::repeat_n(self.card_y, self.graph.j - 1));
        a
    }

    /// Reads a solver point back as a conditional law.
    pub fn law_from_point(&self, point: &[f64]) -> Result<CondDistribution> {
        CondDistribution::from_solver(self.conditioning_arity(), self.card_s, point[..self.num_vars()].to_vec())
    }
}

/// `p^{(x) k}` over `|p|^k` tuples, row-major.
pub(crate) fn tuple_probs(p: &[f64], k: usize) -> Vec<f64> {
    let mut out = vec![1.0];
    for _ in 0..k {
        out = out.iter().flat_map(|a| p.iter().map(move |b| a * b)).collect();
    }
    out
}

pub(crate) fn encode(digits: impl Iterator<Item = usize>, base: usize) -> usize {
    digits.fold(0, |acc, d| acc * base + d)
}

pub(crate) fn decode(mut index: usize, base: usize, len: usize) -> Vec<usize> {
    let mut d = vec![0; len];
    for k in (0..len).rev() {
        d[k] = index % base;
        index /= base;
    }
    d
}

/// Conditioning index used by edge `(i, j)` at full tuples `(x, y)`.
pub(crate) fn edge_conditioning(x: &[usize], y: &[usize], e: (usize, usize), cx: usize, cy: usize) -> usize {
    let xt = encode(x.iter().enumerate().filter(|(k, _)| *k != e.0).map(|(_, v)| *v), cx);
    let yt = encode(y.iter().enumerate().filter(|(k, _)| *k != e.1).map(|(_, v)| *v), cy);
    xt * cy.pow(y.len() as u32 - 1) + yt
}

/// Edge pairs `(e, e')` whose mixed output laws must agree.
pub fn constrained_pairs(graph: &BipartiteGraph, rule: SymmetryRule) -> Vec<((usize, usize), (usize, usize))> {
    let mut pairs = Vec::new();
    match rule {
        SymmetryRule::AllEdgePairs => {
            for a in 0..graph.edges.len() {
                for b in a + 1..graph.edges.len() {
                    pairs.push((graph.edges[a], graph.edges[b]));
                }
            }
        }
        SymmetryRule::EdgeAutomorphisms => {
            let autos = edge_preserving_permutations(graph);
            for &e in &graph.edges {
                for (sigma, pi) in &autos {
                    let image = (sigma[e.0], pi[e.1]);
                    if image > e && !pairs.contains(&(e, image)) {
                        pairs.push((e, image));
                    }
                }
            }
        }
    }
    pairs
}

pub fn build_symmetrizing_lp(ch: &DiscreteAvmac, graph: &BipartiteGraph, rule: SymmetryRule) -> Result<SymmetrizingLp> {
    let (cx, cy, cs, cz) = (ch.card_x, ch.card_y, ch.card_s, ch.card_z);
    let x_tuples = cx.pow(graph.i as u32 - 1);
    let y_tuples = cy.pow(graph.j as u32 - 1);
    let nvars = x_tuples * y_tuples * cs;
    let mut constraints = Constraints::new(nvars);
    let mut space = RowSpace::new(1e-9);
    // rows are reduced together with their right-hand side (last entry), so
    // an inconsistent row is never mistaken for a redundant one
    let mut row = vec![0.0; nvars + 1];

    for cond in 0..x_tuples * y_tuples {
        row.iter_mut().for_each(|v| *v = 0.0);
        row[cond * cs..(cond + 1) * cs].iter_mut().for_each(|v| *v = 1.0);
        row[nvars] = 1.0;
        space.insert(&row);
        constraints.push_dense(&row[..nvars], 1.0);
    }
    let normalization_rows = constraints.rows();

    // With the chain of pairs (e0, e) the system already implies every other
    // pair, but the full pair list is cheap and the row space discards the
    // dependent rows anyway.
    for (e, f) in constrained_pairs(graph, rule) {
        for xi in 0..cx.pow(graph.i as u32) {
            let x = decode(xi, cx, graph.i);
            for yi in 0..cy.pow(graph.j as u32) {
                let y = decode(yi, cy, graph.j);
                let ce = edge_conditioning(&x, &y, e, cx, cy);
                let cf = edge_conditioning(&x, &y, f, cx, cy);
                for z in 0..cz {
                    row.iter_mut().for_each(|v| *v = 0.0);
                    for s in 0..cs {
                        row[ce * cs + s] += ch.w(x[e.0], y[e.1], s, z);
                        row[cf * cs + s] -= ch.w(x[f.0], y[f.1], s, z);
                    }
                    if space.insert(&row) {
                        constraints.push_dense(&row[..nvars], 0.0);
                    }
                }
            }
        }
    }
    let symmetry_rows = constraints.rows() - normalization_rows;
    let feasible = FeasibleBasis::find(&constraints)?;
    Ok(SymmetrizingLp {
        graph: graph.clone(),
        rule,
        card_s: cs,
        card_x: cx,
        card_y: cy,
        x_tuples,
        y_tuples,
        constraints,
        normalization_rows,
        symmetry_rows,
        feasible,
    })
}

/// Largest violation of the symmetry conditions by `q`, recomputed from the
/// channel (independently of the reduced row set).
pub fn symmetry_residual(ch: &DiscreteAvmac, graph: &BipartiteGraph, rule: SymmetryRule, q: &CondDistribution) -> f64 {
    let (cx, cy, cs) = (ch.card_x, ch.card_y, ch.card_s);
    let mut worst: f64 = 0.0;
    for (e, f) in constrained_pairs(graph, rule) {
        for xi in 0..cx.pow(graph.i as u32) {
            let x = decode(xi, cx, graph.i);
            for yi in 0..cy.pow(graph.j as u32) {
                let y = decode(yi, cy, graph.j);
                let qe = q.row(edge_conditioning(&x, &y, e, cx, cy));
                let qf = q.row(edge_conditioning(&x, &y, f, cx, cy));
                for z in 0..ch.card_z {
                    let mut d = 0.0;
                    for s in 0..cs {
                        d += ch.w(x[e.0], y[e.1], s, z) * qe[s] - ch.w(x[f.0], y[f.1], s, z) * qf[s];
                    }
                    worst = worst.max(d.abs());
                }
            }
        }
    }
    worst
}
