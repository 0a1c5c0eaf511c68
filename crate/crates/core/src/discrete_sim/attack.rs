//! Oblivious jammers. None of them sees the transmitted messages: they act
//! on the codebooks, the time-sharing sequence and their own randomness.

use rand::seq::index::sample;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::channel::DiscreteAvmac;
use crate::dist::CondDistribution;
use crate::error::{Error, Result};
use crate::symmetrizability::BipartiteGraph;
use crate::types::average_cost;

use super::codebook::DiscreteCodebookPair;

pub const MAX_REDRAWS: usize = 100;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AttackOutcome {
    pub state: Vec<usize>,
    /// The budget-safe constant word was sent instead of the drawn one.
    pub used_fallback: bool,
    /// Draws rejected for exceeding the budget before the one sent.
    pub redraws: usize,
    /// Spoofing codewords of user 1 (ascending); empty for i.i.d. attacks.
    pub sampled_s: Vec<usize>,
    pub sampled_t: Vec<usize>,
}

impl AttackOutcome {
    pub fn cost(&self, ch: &DiscreteAvmac) -> f64 {
        average_cost(&self.state, &ch.g).expect("states are in range")
    }
}

/// The constant minimum-cost word.
pub fn fallback_word(ch: &DiscreteAvmac, n: usize) -> Vec<usize> {
    vec![ch.argmin_g(); n]
}

pub(crate) fn sample_index(row: &[f64], rng: &mut impl Rng) -> usize {
    let r: f64 = rng.random();
    let mut acc = 0.0;
    for (k, &p) in row.iter().enumerate() {
        acc += p;
        if r < acc {
            return k;
        }
    }
    // rounding left a sliver of mass: take the last supported symbol
    row.iter().rposition(|&p| p > 0.0).unwrap_or(0)
}

/// Letterwise draws from `P(s|u(i))`, redrawn while over budget.
pub fn iid_attack_state(
    ch: &DiscreteAvmac,
    u: &[usize],
    p_s_given_u: &CondDistribution,
    rng: &mut impl Rng,
) -> Result<AttackOutcome> {
    if p_s_given_u.target_arity() != ch.card_s {
        return Err(Error::DimensionMismatch(format!(
            "state law over {} symbols, channel has {}",
            p_s_given_u.target_arity(),
            ch.card_s
        )));
    }
    if let Some(&bad) = u.iter().find(|&&s| s >= p_s_given_u.num_rows()) {
        return Err(Error::SymbolOutOfRange { symbol: bad, size: p_s_given_u.num_rows() });
    }
    for redraws in 0..MAX_REDRAWS {
        let state: Vec<usize> = u.iter().map(|&k| sample_index(p_s_given_u.row(k), rng)).collect();
        if average_cost(&state, &ch.g)? <= ch.lambda {
            return Ok(AttackOutcome { state, used_fallback: false, redraws, sampled_s: vec![], sampled_t: vec![] });
        }
    }
    Ok(AttackOutcome {
        state: fallback_word(ch, u.len()),
        used_fallback: true,
        redraws: MAX_REDRAWS,
        sampled_s: vec![],
        sampled_t: vec![],
    })
}

/// Picks `I-1` codewords of user 1 and `J-1` of user 2 uniformly at random
/// and draws the state letterwise from the symmetrizing law of `u(i)` given
/// their letters; sends the constant minimum-cost word if the draw is over
/// budget.
pub fn symmetrizing_attack_state(
    ch: &DiscreteAvmac,
    cb: &DiscreteCodebookPair,
    graph: &BipartiteGraph,
    laws: &[CondDistribution],
    rng: &mut impl Rng,
) -> Result<AttackOutcome> {
    let (ni, nj) = (graph.i - 1, graph.j - 1);
    if ni > cb.m() || nj > cb.w() {
        return Err(Error::InvalidParameter(format!(
            "graph needs {ni} + {nj} spoofing codewords, codebooks have {} and {}",
            cb.m(),
            cb.w()
        )));
    }
    if laws.len() != cb.card_u() {
        return Err(Error::DimensionMismatch(format!("{} laws for {} time-sharing symbols", laws.len(), cb.card_u())));
    }
    let mut arity = vec![ch.card_x; ni];
    arity.extend(std::iter::repeat_n(ch.card_y, nj));
    if let Some(q) = laws.iter().find(|q| q.conditioning_arity() != arity.as_slice() || q.target_arity() != ch.card_s) {
        return Err(Error::DimensionMismatch(format!(
            "law conditioned on {:?}, graph needs {:?}",
            q.conditioning_arity(),
            arity
        )));
    }
    let mut sampled_s = sample(rng, cb.m(), ni).into_vec();
    let mut sampled_t = sample(rng, cb.w(), nj).into_vec();
    sampled_s.sort_unstable();
    sampled_t.sort_unstable();
    let mut cond = vec![0; ni + nj];
    let state: Vec<usize> = (0..cb.n)
        .map(|i| {
            for (k, &m) in sampled_s.iter().enumerate() {
                cond[k] = cb.c1[m][i];
            }
            for (k, &w) in sampled_t.iter().enumerate() {
                cond[ni + k] = cb.c2[w][i];
            }
            sample_index(laws[cb.u[i]].row_for(&cond), rng)
        })
        .collect();
    if average_cost(&state, &ch.g)? <= ch.lambda {
        Ok(AttackOutcome { state, used_fallback: false, redraws: 0, sampled_s, sampled_t })
    } else {
        Ok(AttackOutcome { state: fallback_word(ch, cb.n), used_fallback: true, redraws: 0, sampled_s, sampled_t })
    }
}

/// Expected per-letter cost of the symmetrizing attack given the sampled
/// codewords.
pub fn conditional_attack_cost(
    ch: &DiscreteAvmac,
    cb: &DiscreteCodebookPair,
    laws: &[CondDistribution],
    sampled_s: &[usize],
    sampled_t: &[usize],
) -> f64 {
    let mut cond = vec![0; sampled_s.len() + sampled_t.len()];
    let total: f64 = (0..cb.n)
        .map(|i| {
            for (k, &m) in sampled_s.iter().enumerate() {
                cond[k] = cb.c1[m][i];
            }
            for (k, &w) in sampled_t.iter().enumerate() {
                cond[sampled_s.len() + k] = cb.c2[w][i];
            }
            crate::channel::dot(laws[cb.u[i]].row_for(&cond), &ch.g)
        })
        .sum();
    total / cb.n as f64
}

/// Chebyshev bound `g*^2 / (n delta^2)` on the probability that a letterwise
/// independent draw with mean cost `Lambda - delta` exceeds `Lambda`.
pub fn chebyshev_bound(ch: &DiscreteAvmac, n: usize, delta: f64) -> f64 {
    ch.g_max().powi(2) / (n as f64 * delta * delta)
}
