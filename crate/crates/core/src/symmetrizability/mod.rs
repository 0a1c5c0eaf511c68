//! Symmetrizability orders: the largest number of confusable message pairs
//! a cost-limited jammer can create.
//!
//! A confusion graph with `L` edges is *symmetrizable* for an input law when
//! some family of symmetrizing laws `Q^(u)` keeps the jammer's expected cost
//! strictly below the state budget. In *weak* mode the spoofed codewords
//! follow the product law. In *strong* mode they follow the worst coupled law
//! with the same marginals. The order is the largest symmetrizable edge count
//! up to the enumeration cap.

pub mod coupling;
pub mod graph;
pub mod lp_build;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::channel::{DiscreteAvmac, InputDistribution};
use crate::dist::CondDistribution;
use crate::error::Result;
use crate::grid::{GridInput, InputGrid};

pub use graph::{edge_preserving_permutations, enumerate_graphs, BipartiteGraph, DEFAULT_CAP};
pub use lp_build::{build_symmetrizing_lp, symmetry_residual, SymmetrizingLp, SymmetryRule};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Weak,
    Strong,
}

impl std::fmt::Display for Mode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Mode::Weak => "weak",
            Mode::Strong => "strong",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SymmetrizabilityReport {
    pub mode: Mode,
    pub order: usize,
    pub witness_graph: Option<BipartiteGraph>,
    /// One law per time-sharing symbol.
    pub witness_q: Option<Vec<CondDistribution>>,
    pub witness_cost: Option<f64>,
}

/// Symmetrizing systems for every graph class up to a cap, built once per
/// channel and reused across input laws.
#[derive(Debug, Clone)]
pub struct Symmetrizer {
    pub ch: DiscreteAvmac,
    pub rule: SymmetryRule,
    pub cap: usize,
    /// Sorted by edge count.
    pub lps: Vec<SymmetrizingLp>,
}

impl Symmetrizer {
    pub fn new(ch: &DiscreteAvmac, cap: usize, rule: SymmetryRule) -> Result<Self> {
        ch.validate()?;
        let mut graphs = Vec::new();
        for l in 1..=cap {
            graphs.extend(enumerate_graphs(l, cap)?);
        }
        let lps = graphs
            .par_iter()
            .map(|g| build_symmetrizing_lp(ch, g, rule))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { ch: ch.clone(), rule, cap, lps })
    }

    /// Per-`u` cost of graph `k` and the minimizing law (as a solver point);
    /// `None` when the graph admits no symmetrizing law.
    pub fn cost_u(&self, k: usize, mode: Mode, px: &[f64], py: &[f64]) -> Result<Option<(f64, Vec<f64>)>> {
        let lp = &self.lps[k];
        match mode {
            Mode::Weak => {
                let Some(basis) = lp.basis() else { return Ok(None) };
                let sol = basis.minimize(&lp.product_cost(px, py, &self.ch.g))?;
                Ok(Some((sol.value, sol.point)))
            }
            Mode::Strong => coupling::strong_cost(lp, px, py, &self.ch.g),
        }
    }

    /// Total expected cost `sum_u P(u) cost_u` of graph `k` with its laws.
    pub fn graph_cost(
        &self,
        k: usize,
        mode: Mode,
        input: &InputDistribution,
    ) -> Result<Option<(f64, Vec<CondDistribution>)>> {
        let mut total = 0.0;
        let mut laws = Vec::with_capacity(input.card_u());
        for u in 0..input.card_u() {
            let Some((c, point)) = self.cost_u(k, mode, &input.p_x_given_u[u], &input.p_y_given_u[u])? else {
                return Ok(None);
            };
            total += input.p_u[u] * c;
            laws.push(self.lps[k].law_from_point(&point)?);
        }
        Ok(Some((total, laws)))
    }

    pub fn report(&self, input: &InputDistribution, mode: Mode) -> Result<SymmetrizabilityReport> {
        input.check_against(&self.ch)?;
        let threshold = self.ch.strict_state_threshold();
        for l in (1..=self.cap).rev() {
            let mut best: Option<(usize, f64, Vec<CondDistribution>)> = None;
            for k in self.graph_indices(l) {
                if let Some((cost, laws)) = self.graph_cost(k, mode, input)? {
                    if cost <= threshold && best.as_ref().is_none_or(|b| cost < b.1) {
                        best = Some((k, cost, laws));
                    }
                }
            }
            if let Some((k, cost, laws)) = best {
                return Ok(SymmetrizabilityReport {
                    mode,
                    order: l,
                    witness_graph: Some(self.lps[k].graph.clone()),
                    witness_q: Some(laws),
                    witness_cost: Some(cost),
                });
            }
        }
        Ok(SymmetrizabilityReport { mode, order: 0, witness_graph: None, witness_q: None, witness_cost: None })
    }

    pub fn graph_indices(&self, edges: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.lps.len()).filter(move |&k| self.lps[k].graph.num_edges() == edges)
    }

    /// Per-`u` costs of every graph at every pair of grid conditionals.
    pub fn cost_table(&self, grid: &InputGrid, mode: Mode) -> Result<CostTable> {
        let nx = grid.x_points.len();
        let ny = grid.y_points.len();
        let cells: Vec<Vec<Option<f64>>> = (0..nx * ny)
            .into_par_iter()
            .map(|cell| {
                let (px, py) = (&grid.x_points[cell / ny], &grid.y_points[cell % ny]);
                (0..self.lps.len())
                    .map(|k| Ok(self.cost_u(k, mode, px, py)?.map(|c| c.0)))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<_>>()?;
        Ok(CostTable { mode, ny, cells })
    }

    /// Order of a grid input from precomputed per-`u` costs.
    pub fn order_from_table(&self, table: &CostTable, gi: &GridInput) -> usize {
        (1..=self.cap).rev().find(|&l| self.symmetrizable_from_table(table, gi, l)).unwrap_or(0)
    }

    /// Whether some graph with exactly `l` edges is symmetrizable.
    pub fn symmetrizable_from_table(&self, table: &CostTable, gi: &GridInput, l: usize) -> bool {
        let threshold = self.ch.strict_state_threshold();
        self.graph_indices(l).any(|k| {
            let mut total = 0.0;
            for (u, pu) in gi.input.p_u.iter().enumerate() {
                match table.get(gi.x_index[u], gi.y_index[u], k) {
                    Some(c) => total += pu * c,
                    None => return false,
                }
            }
            total <= threshold
        })
    }
}

/// Per-`u` symmetrizing costs indexed by grid conditionals and graph.
#[derive(Debug, Clone)]
pub struct CostTable {
    pub mode: Mode,
    ny: usize,
    cells: Vec<Vec<Option<f64>>>,
}

impl CostTable {
    pub fn get(&self, ix: usize, iy: usize, graph: usize) -> Option<f64> {
        self.cells[ix * self.ny + iy][graph]
    }
}

pub fn weak_symmetrizability(ch: &DiscreteAvmac, input: &InputDistribution, cap: usize) -> Result<SymmetrizabilityReport> {
    Symmetrizer::new(ch, cap, SymmetryRule::default())?.report(input, Mode::Weak)
}

pub fn strong_symmetrizability(
    ch: &DiscreteAvmac,
    input: &InputDistribution,
    cap: usize,
) -> Result<SymmetrizabilityReport> {
    Symmetrizer::new(ch, cap, SymmetryRule::default())?.report(input, Mode::Strong)
}

/// Smallest order over a grid of factorized inputs meeting the input budgets,
/// with the first grid input attaining it.
pub fn min_symmetrizability(
    sym: &Symmetrizer,
    mode: Mode,
    step: f64,
    card_u: usize,
) -> Result<(usize, InputDistribution)> {
    let grid = InputGrid::new(&sym.ch, step, card_u)?;
    let table = sym.cost_table(&grid, mode)?;
    let orders: Vec<usize> = grid.inputs.par_iter().map(|gi| sym.order_from_table(&table, gi)).collect();
    let (best, order) = orders
        .iter()
        .enumerate()
        .min_by_key(|(k, o)| (**o, *k))
        .expect("grid is nonempty");
    Ok((*order, grid.inputs[best].input.clone()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::library;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_binary_channel(rng: &mut impl Rng, lambda: f64) -> DiscreteAvmac {
        let mut w = Vec::new();
        for _ in 0..8 {
            let p = rng.random::<f64>();
            w.extend([p, 1.0 - p]);
        }
        DiscreteAvmac {
            card_x: 2,
            card_y: 2,
            card_s: 2,
            card_z: 2,
            w,
            f1: vec![0.0; 2],
            f2: vec![0.0; 2],
            g: vec![0.0, 1.0],
            gamma1: 0.0,
            gamma2: 0.0,
            lambda,
            name: None,
        }
    }

    #[test]
    fn budget_below_cheapest_state() {
        let mut ch = library::binary_xor(0.5);
        ch.g = vec![0.3, 1.0];
        ch.lambda = 0.2;
        let input = InputDistribution::uniform(2, 2);
        assert_eq!(weak_symmetrizability(&ch, &input, 3).unwrap().order, 0);
        assert_eq!(strong_symmetrizability(&ch, &input, 3).unwrap().order, 0);
    }

    #[test]
    fn single_edge_when_budget_allows() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let ch = random_binary_channel(&mut rng, 0.01);
        let r = weak_symmetrizability(&ch, &InputDistribution::uniform(2, 2), 3).unwrap();
        assert!(r.order >= 1);
        assert!(r.witness_cost.unwrap() < 0.01);
    }

    #[test]
    fn xor_channel_is_two_symmetrizable() {
        let ch = library::binary_xor(0.6);
        let r = weak_symmetrizability(&ch, &InputDistribution::uniform(2, 2), DEFAULT_CAP).unwrap();
        assert!(r.order >= 2, "order {}", r.order);
        // certificate: the copy law on the 2-path costs exactly 1/2
        let sym = Symmetrizer::new(&ch, 2, SymmetryRule::AllEdgePairs).unwrap();
        let path = sym.lps.iter().position(|lp| lp.graph.i == 2 && lp.graph.j == 1).unwrap();
        let (cost, laws) = sym.graph_cost(path, Mode::Weak, &InputDistribution::uniform(2, 2)).unwrap().unwrap();
        assert!((cost - 0.5).abs() < 1e-12);
        assert!(symmetry_residual(&ch, &sym.lps[path].graph, sym.rule, &laws[0]) < 1e-12);
    }

    #[test]
    fn witnesses_are_valid() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for _ in 0..10 {
            let lambda = rng.random_range(0.2..1.2);
            let ch = random_binary_channel(&mut rng, lambda);
            let p = rng.random_range(0.1..0.9);
            let input = InputDistribution::product(vec![p, 1.0 - p], vec![0.5, 0.5]).unwrap();
            let sym = Symmetrizer::new(&ch, 3, SymmetryRule::AllEdgePairs).unwrap();
            for mode in [Mode::Weak, Mode::Strong] {
                let r = sym.report(&input, mode).unwrap();
                if r.order == 0 {
                    continue;
                }
                assert!(r.witness_cost.unwrap() < ch.lambda - 1e-9 * ch.lambda.max(1.0) + 1e-15);
                let g = r.witness_graph.unwrap();
                for q in r.witness_q.unwrap() {
                    assert!(symmetry_residual(&ch, &g, sym.rule, &q) <= 1e-8);
                }
            }
        }
    }

    #[test]
    fn strong_never_exceeds_weak() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        for _ in 0..10 {
            let lambda = rng.random_range(0.0..1.0);
            let ch = random_binary_channel(&mut rng, lambda);
            let sym = Symmetrizer::new(&ch, 3, SymmetryRule::AllEdgePairs).unwrap();
            let p = rng.random_range(0.0..1.0);
            let q = rng.random_range(0.0..1.0);
            let input = InputDistribution::product(vec![p, 1.0 - p], vec![q, 1.0 - q]).unwrap();
            let w = sym.report(&input, Mode::Weak).unwrap();
            let s = sym.report(&input, Mode::Strong).unwrap();
            assert!(s.order <= w.order);
            if let (Some(ws), Some(ss)) = (w.witness_cost, s.witness_cost) {
                if w.order == s.order {
                    assert!(ws <= ss + 1e-9);
                }
            }
        }
    }

    #[test]
    fn weak_order_grows_with_budget() {
        let ch = library::binary_xor(0.1);
        let sym_for = |lambda: f64| Symmetrizer::new(&ch.with_lambda(lambda), 3, SymmetryRule::AllEdgePairs).unwrap();
        let mut last = 0;
        for k in 1..=9 {
            let lambda = k as f64 / 10.0;
            let (order, _) = min_symmetrizability(&sym_for(lambda), Mode::Weak, 0.25, 1).unwrap();
            assert!(order >= last, "lambda {lambda}: {order} < {last}");
            last = order;
        }
    }

    #[test]
    fn slack_budgets_collapse_orders() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        for _ in 0..5 {
            let ch = random_binary_channel(&mut rng, 0.0).unconstrained();
            let sym = Symmetrizer::new(&ch, 3, SymmetryRule::AllEdgePairs).unwrap();
            let grid = InputGrid::new(&ch, 0.25, 1).unwrap();
            let weak = sym.cost_table(&grid, Mode::Weak).unwrap();
            let strong = sym.cost_table(&grid, Mode::Strong).unwrap();
            for gi in &grid.inputs {
                assert_eq!(sym.order_from_table(&weak, gi), sym.order_from_table(&strong, gi));
            }
        }
    }

    #[test]
    fn table_orders_match_direct_reports() {
        let ch = library::shifted_adder(0.4);
        let sym = Symmetrizer::new(&ch, 3, SymmetryRule::AllEdgePairs).unwrap();
        let grid = InputGrid::new(&ch, 0.5, 2).unwrap();
        for mode in [Mode::Weak, Mode::Strong] {
            let table = sym.cost_table(&grid, mode).unwrap();
            for gi in &grid.inputs {
                assert_eq!(sym.order_from_table(&table, gi), sym.report(&gi.input, mode).unwrap().order);
            }
        }
    }
}
