//! Simplex grids over factorized input laws `P_u P_{x|u} P_{y|u}`.

use crate::channel::{dot, DiscreteAvmac, InputDistribution};
use crate::error::{Error, Result};
use crate::types::enumerate_types;

/// All points of the probability simplex on `k` symbols whose entries are
/// multiples of `step`.
pub fn simplex_grid(k: usize, step: f64) -> Result<Vec<Vec<f64>>> {
    let parts = resolution(step)?;
    Ok(enumerate_types(parts, k)
        .into_iter()
        .map(|c| c.into_iter().map(|v| v as f64 / parts as f64).collect())
        .collect())
}

fn resolution(step: f64) -> Result<usize> {
    if !(step > 0.0 && step <= 1.0) {
        return Err(Error::InvalidParameter(format!("grid step {step} not in (0, 1]")));
    }
    let parts = (1.0 / step).round();
    if ((1.0 / step) - parts).abs() > 1e-6 {
        return Err(Error::InvalidParameter(format!("grid step {step} does not divide 1")));
    }
    Ok(parts as usize)
}

/// A grid input together with the grid indices of its conditionals, which
/// lets callers memoize per-`u` quantities.
#[derive(Debug, Clone, PartialEq)]
pub struct GridInput {
    pub input: InputDistribution,
    pub x_index: Vec<usize>,
    pub y_index: Vec<usize>,
}

/// The factorized inputs on a grid that meet the input cost budgets.
#[derive(Debug, Clone)]
pub struct InputGrid {
    pub step: f64,
    pub card_u: usize,
    pub x_points: Vec<Vec<f64>>,
    pub y_points: Vec<Vec<f64>>,
    pub inputs: Vec<GridInput>,
}

impl InputGrid {
    /// Time-sharing labels are interchangeable, so only one ordering of the
    /// per-`u` components is kept; conditionals of unused `u` symbols are
    /// pinned to the first grid point.
    pub fn new(ch: &DiscreteAvmac, step: f64, card_u: usize) -> Result<Self> {
        if card_u == 0 {
            return Err(Error::InvalidParameter("time-sharing alphabet must be nonempty".into()));
        }
        let parts = resolution(step)?;
        let x_points = simplex_grid(ch.card_x, step)?;
        let y_points = simplex_grid(ch.card_y, step)?;
        let x_cost: Vec<f64> = x_points.iter().map(|p| dot(p, &ch.f1)).collect();
        let y_cost: Vec<f64> = y_points.iter().map(|p| dot(p, &ch.f2)).collect();
        let mut inputs = Vec::new();
        for counts in enumerate_types(parts, card_u) {
            let p_u: Vec<f64> = counts.iter().map(|&c| c as f64 / parts as f64).collect();
            let mut choice = vec![(0usize, 0usize); card_u];
            let mut emit = |choice: &[(usize, usize)]| {
                // canonical ordering: (count, x, y) nonincreasing across u
                let key: Vec<(usize, usize, usize)> =
                    counts.iter().zip(choice).map(|(&c, &(a, b))| (c, a, b)).collect();
                if key.windows(2).any(|w| w[0] < w[1]) {
                    return;
                }
                let c1: f64 = p_u.iter().zip(choice).map(|(p, &(a, _))| p * x_cost[a]).sum();
                let c2: f64 = p_u.iter().zip(choice).map(|(p, &(_, b))| p * y_cost[b]).sum();
                if c1 > ch.gamma1 + 1e-12 || c2 > ch.gamma2 + 1e-12 {
                    return;
                }
                inputs.push(GridInput {
                    input: InputDistribution {
                        p_u: p_u.clone(),
                        p_x_given_u: choice.iter().map(|&(a, _)| x_points[a].clone()).collect(),
                        p_y_given_u: choice.iter().map(|&(_, b)| y_points[b].clone()).collect(),
                    },
                    x_index: choice.iter().map(|c| c.0).collect(),
                    y_index: choice.iter().map(|c| c.1).collect(),
                });
            };
            sweep(&counts, x_points.len(), y_points.len(), 0, &mut choice, &mut emit);
        }
        if inputs.is_empty() {
            return Err(Error::EmptyGrid(format!(
                "no grid input at step {step} meets gamma1 = {}, gamma2 = {}",
                ch.gamma1, ch.gamma2
            )));
        }
        Ok(Self { step, card_u, x_points, y_points, inputs })
    }

    pub fn len(&self) -> usize {
        self.inputs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.inputs.is_empty()
    }
}

fn sweep(
    counts: &[usize],
    nx: usize,
    ny: usize,
    u: usize,
    choice: &mut [(usize, usize)],
    emit: &mut impl FnMut(&[(usize, usize)]),
) {
    if u == counts.len() {
        emit(choice);
        return;
    }
    if counts[u] == 0 {
        choice[u] = (0, 0);
        sweep(counts, nx, ny, u + 1, choice, emit);
        return;
    }
    for a in 0..nx {
        for b in 0..ny {
            choice[u] = (a, b);
            sweep(counts, nx, ny, u + 1, choice, emit);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::library;

    #[test]
    fn simplex_points() {
        let g = simplex_grid(2, 0.25).unwrap();
        assert_eq!(g.len(), 5);
        assert!(g.iter().all(|p| (p.iter().sum::<f64>() - 1.0).abs() < 1e-12));
        assert!(simplex_grid(2, 0.3).is_err());
        assert!(simplex_grid(2, 0.0).is_err());
    }

    #[test]
    fn single_time_sharing_symbol() {
        let ch = library::binary_xor(0.5);
        let grid = InputGrid::new(&ch, 0.5, 1).unwrap();
        assert_eq!(grid.len(), 9);
    }

    #[test]
    fn labels_of_u_are_deduplicated() {
        let ch = library::binary_xor(0.5);
        let grid = InputGrid::new(&ch, 0.5, 2).unwrap();
        // P_u = (1, 0): 9 inputs; P_u = (0.5, 0.5): unordered pairs of 9 = 45
        assert_eq!(grid.len(), 9 + 45);
        for gi in &grid.inputs {
            gi.input.check_against(&ch).unwrap();
        }
    }

    #[test]
    fn budgets_filter_the_grid() {
        let mut ch = library::binary_xor(0.5);
        ch.f1 = vec![0.0, 1.0];
        ch.gamma1 = 0.25;
        let grid = InputGrid::new(&ch, 0.25, 1).unwrap();
        assert!(grid.inputs.iter().all(|g| g.input.p_x_given_u[0][1] <= 0.25));
        assert_eq!(grid.len(), 2 * 5);
        // only reachable for an unvalidated channel: every valid channel
        // admits the cheapest point mass
        ch.f1 = vec![0.5, 1.0];
        ch.gamma1 = 0.4;
        assert!(matches!(InputGrid::new(&ch, 0.5, 1), Err(Error::EmptyGrid(_))));
    }
}
