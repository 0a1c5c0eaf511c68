//! Inner and outer capacity-region bounds.
//!
//! Each admissible input law contributes a pentagon whose three sides are
//! the worst-case conditional informations. The inner bound admits inputs
//! whose weak order is below the list size; the outer bound uses the strong
//! order. Both are finite-grid approximations of the unions over all inputs.

pub mod frontier;
pub mod jammer;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::channel::{DiscreteAvmac, InputDistribution};
use crate::dist::CondDistribution;
use crate::error::{Error, Result};
use crate::grid::InputGrid;
use crate::symmetrizability::{Mode, Symmetrizer, SymmetryRule, DEFAULT_CAP};

pub use frontier::{pareto_frontier, support};
pub use jammer::{evaluate_objective, grid_jammer_oracle, worst_case_jammer, JammerSolution, Objective};

#[derive(Debug, Clone, PartialEq)]
pub struct Pentagon {
    pub r1: f64,
    pub r2: f64,
    /// Sum-rate side, capped at `r1 + r2` where it would be inactive.
    pub r12: f64,
    /// Uncapped worst-case `I(x,y;z|u)`.
    pub sum_information: f64,
    pub input: InputDistribution,
    /// Worst-case `P(s|u)` for `r1`, `r2` and the sum, in that order.
    pub jammers: [CondDistribution; 3],
}

impl Pentagon {
    /// Corner points, counterclockwise from the origin.
    pub fn corners(&self) -> [(f64, f64); 5] {
        let (r1, r2, r12) = (self.r1, self.r2, self.r12);
        [
            (0.0, 0.0),
            (r1, 0.0),
            (r1, (r12 - r1).clamp(0.0, r2)),
            ((r12 - r2).clamp(0.0, r1), r2),
            (0.0, r2),
        ]
    }

    pub fn contains(&self, r1: f64, r2: f64, tol: f64) -> bool {
        r1 >= -tol && r2 >= -tol && r1 <= self.r1 + tol && r2 <= self.r2 + tol && r1 + r2 <= self.r12 + tol
    }
}

pub fn pentagon(ch: &DiscreteAvmac, input: &InputDistribution) -> Result<Pentagon> {
    let a = worst_case_jammer(ch, input, Objective::R1)?;
    let b = worst_case_jammer(ch, input, Objective::R2)?;
    let c = worst_case_jammer(ch, input, Objective::Sum)?;
    Ok(Pentagon {
        r1: a.value,
        r2: b.value,
        r12: c.value.min(a.value + b.value),
        sum_information: c.value,
        input: input.clone(),
        jammers: [a.witness, b.witness, c.witness],
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Bound {
    Inner,
    Outer,
}

impl Bound {
    pub fn mode(self) -> Mode {
        match self {
            Bound::Inner => Mode::Weak,
            Bound::Outer => Mode::Strong,
        }
    }
}

impl std::fmt::Display for Bound {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Bound::Inner => "inner",
            Bound::Outer => "outer",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RegionBound {
    pub list_size: usize,
    pub bound: Bound,
    pub pentagons: Vec<Pentagon>,
    /// Upper-right frontier of the union, `R1` increasing; `[(0, 0)]` when
    /// no input is admitted.
    pub boundary: Vec<(f64, f64)>,
    pub grid_step: f64,
    pub card_u: usize,
    /// Inputs on the grid that met the cost budgets.
    pub grid_inputs: usize,
}

impl RegionBound {
    pub fn is_degenerate(&self) -> bool {
        self.boundary.iter().all(|&(a, b)| a <= 1e-12 && b <= 1e-12)
    }

    /// Support function `max (cos t) R1 + (sin t) R2` of the region.
    pub fn support(&self, theta: f64) -> f64 {
        support(&self.boundary, theta)
    }

    /// Whether every point of `self` lies in `other` (up to `tol`), tested
    /// through support functions on a fan of directions.
    pub fn is_subset_of(&self, other: &RegionBound, tol: f64) -> bool {
        directions().all(|t| self.support(t) <= other.support(t) + tol)
    }

    pub fn max_support_gap(&self, other: &RegionBound) -> f64 {
        directions().map(|t| (self.support(t) - other.support(t)).abs()).fold(0.0, f64::max)
    }
}

fn directions() -> impl Iterator<Item = f64> {
    (0..=180).map(|k| k as f64 / 180.0 * std::f64::consts::FRAC_PI_2)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegionOptions {
    pub step: f64,
    pub card_u: usize,
    /// Largest confusion-graph size enumerated for the order filter; raised
    /// to the list size when smaller.
    pub cap: usize,
    pub rule: SymmetryRule,
}

impl Default for RegionOptions {
    fn default() -> Self {
        Self { step: 0.1, card_u: 2, cap: DEFAULT_CAP, rule: SymmetryRule::AllEdgePairs }
    }
}

impl RegionOptions {
    pub fn new(step: f64, card_u: usize) -> Self {
        Self { step, card_u, ..Self::default() }
    }
}

/// Computes the requested bounds in one pass: pentagons are evaluated once
/// for every input admitted by any of them.
pub fn regions(ch: &DiscreteAvmac, list_size: usize, opts: RegionOptions, bounds: &[Bound]) -> Result<Vec<RegionBound>> {
    if list_size == 0 {
        return Err(Error::InvalidParameter("list size must be at least 1".into()));
    }
    ch.validate()?;
    let grid = InputGrid::new(ch, opts.step, opts.card_u)?;
    let cap = opts.cap.max(list_size);
    let sym = Symmetrizer::new(ch, cap, opts.rule)?;
    let tables = bounds.iter().map(|b| sym.cost_table(&grid, b.mode())).collect::<Result<Vec<_>>>()?;

    // input k is admitted by bound b when no graph with L..=cap edges is symmetrizable
    let admitted: Vec<Vec<bool>> = grid
        .inputs
        .par_iter()
        .map(|gi| {
            tables
                .iter()
                .map(|t| !(list_size..=cap).any(|l| sym.symmetrizable_from_table(t, gi, l)))
                .collect()
        })
        .collect();
    let pentagons: Vec<Option<Pentagon>> = grid
        .inputs
        .par_iter()
        .zip(&admitted)
        .map(|(gi, adm)| if adm.iter().any(|&a| a) { pentagon(ch, &gi.input).map(Some) } else { Ok(None) })
        .collect::<Result<_>>()?;

    Ok(bounds
        .iter()
        .enumerate()
        .map(|(b, &bound)| {
            let kept: Vec<Pentagon> = pentagons
                .iter()
                .zip(&admitted)
                .filter(|(_, adm)| adm[b])
                .filter_map(|(p, _)| p.clone())
                .collect();
            let corners: Vec<(f64, f64)> = kept.iter().flat_map(|p| p.corners()).collect();
            RegionBound {
                list_size,
                bound,
                boundary: pareto_frontier(&corners),
                pentagons: kept,
                grid_step: opts.step,
                card_u: opts.card_u,
                grid_inputs: grid.len(),
            }
        })
        .collect())
}

pub fn inner_region(ch: &DiscreteAvmac, list_size: usize, opts: RegionOptions) -> Result<RegionBound> {
    Ok(regions(ch, list_size, opts, &[Bound::Inner])?.remove(0))
}

pub fn outer_region(ch: &DiscreteAvmac, list_size: usize, opts: RegionOptions) -> Result<RegionBound> {
    Ok(regions(ch, list_size, opts, &[Bound::Outer])?.remove(0))
}

/// Region with every budget slack, where inner and outer bounds coincide;
/// fails with [`Error::CollapseViolation`] if they do not.
pub fn unconstrained_region(ch: &DiscreteAvmac, list_size: usize, opts: RegionOptions) -> Result<RegionBound> {
    let free = ch.unconstrained();
    let mut both = regions(&free, list_size, opts, &[Bound::Inner, Bound::Outer])?;
    let outer = both.pop().expect("two bounds");
    let inner = both.pop().expect("two bounds");
    let same_inputs = inner.pentagons.len() == outer.pentagons.len()
        && inner.pentagons.iter().zip(&outer.pentagons).all(|(a, b)| a.input == b.input);
    if !same_inputs || inner.boundary != outer.boundary {
        return Err(Error::CollapseViolation(format!(
            "inner bound has {} pentagons, outer bound {}",
            inner.pentagons.len(),
            outer.pentagons.len()
        )));
    }
    Ok(inner)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::library;
    use crate::dist::binary_entropy;

    #[test]
    fn xor_sum_bound() {
        let ch = library::binary_xor(0.11);
        let p = pentagon(&ch, &InputDistribution::uniform(2, 2)).unwrap();
        assert!((p.sum_information - (1.0 - binary_entropy(0.11))).abs() < 1e-6);
        assert!(p.r12 <= p.r1 + p.r2 + 1e-9);
        for (k, j) in p.jammers.iter().enumerate() {
            let cost = crate::channel::dot(j.row(0), &ch.g);
            assert!(cost <= ch.lambda + 1e-9, "jammer {k} cost {cost}");
        }
    }

    #[test]
    fn adder_pentagon_corners() {
        let ch = library::noiseless_adder();
        let p = pentagon(&ch, &InputDistribution::uniform(2, 2)).unwrap();
        let c = p.corners();
        assert!((c[2].0 - 1.0).abs() < 1e-9 && (c[2].1 - 0.5).abs() < 1e-9);
        assert!((c[3].0 - 0.5).abs() < 1e-9 && (c[3].1 - 1.0).abs() < 1e-9);
        assert!(p.contains(0.75, 0.75, 1e-12));
        assert!(!p.contains(1.0, 0.6, 1e-12));
    }

    #[test]
    fn degenerate_when_list_too_short() {
        // the xor channel with a generous budget symmetrizes every single edge
        let ch = library::binary_xor(0.6);
        let r = inner_region(&ch, 1, RegionOptions::new(0.5, 1)).unwrap();
        assert!(r.pentagons.is_empty());
        assert_eq!(r.boundary, vec![(0.0, 0.0)]);
        assert!(r.is_degenerate());
    }

    #[test]
    fn stateless_channel_gives_the_mac_region() {
        let ch = library::noiseless_adder();
        let r = inner_region(&ch, 1, RegionOptions::new(0.25, 1)).unwrap();
        assert_eq!(r.pentagons.len(), r.grid_inputs);
        // the sum-rate corner of the classic region
        assert!((r.support(std::f64::consts::FRAC_PI_4) * 2f64.sqrt() - 1.5).abs() < 1e-9);
        let o = outer_region(&ch, 1, RegionOptions::new(0.25, 1)).unwrap();
        assert!(r.max_support_gap(&o) < 1e-12);
    }

    #[test]
    fn inner_inside_outer_and_monotone_in_budget() {
        let ch = library::shifted_adder(0.3);
        let opts = RegionOptions::new(0.25, 1);
        let mut last: Option<RegionBound> = None;
        for lambda in [0.1, 0.3, 0.5] {
            let c = ch.with_lambda(lambda);
            let both = regions(&c, 3, opts, &[Bound::Inner, Bound::Outer]).unwrap();
            assert!(both[0].is_subset_of(&both[1], 1e-9));
            for p in &both[0].pentagons {
                assert!(both[1].pentagons.iter().any(|q| q.input == p.input));
            }
            if let Some(prev) = &last {
                assert!(both[0].is_subset_of(prev, 1e-6));
            }
            last = Some(both[0].clone());
        }
    }

    #[test]
    fn unconstrained_bounds_collapse() {
        let ch = library::binary_xor(0.2);
        let r = unconstrained_region(&ch, 3, RegionOptions::new(0.25, 1)).unwrap();
        assert!(r.bound == Bound::Inner);
        // the copy-state xor channel is symmetrizable for every list size
        assert!(r.is_degenerate());
        let adder = unconstrained_region(&library::noiseless_adder(), 2, RegionOptions::new(0.5, 1)).unwrap();
        assert!(!adder.is_degenerate());
    }
}
