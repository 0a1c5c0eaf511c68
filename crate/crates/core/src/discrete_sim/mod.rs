//! Monte Carlo harness for discrete channels: random constant-composition
//! codes, oblivious jammers and the typicality list decoder.

pub mod attack;
pub mod codebook;
pub mod decoder;

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::channel::{DiscreteAvmac, InputDistribution};
use crate::dist::CondDistribution;
use crate::error::{Error, Result};
use crate::rng::{stream, Stream};
use crate::symmetrizability::{BipartiteGraph, Mode, Symmetrizer};

pub use attack::{
    chebyshev_bound, conditional_attack_cost, fallback_word, iid_attack_state, symmetrizing_attack_state,
    AttackOutcome,
};
pub use codebook::{constant_composition_codebook, rounded_counts, timesharing_sequence, DiscreteCodebookPair};
pub use decoder::{completion_divergence, typicality_list_decode, Candidate, DecoderParams};

#[derive(Debug, Clone, PartialEq)]
pub enum JammerSpec {
    /// The same state on every letter.
    Constant(usize),
    /// Letterwise `P(s|u)`.
    Iid(CondDistribution),
    /// Symmetrizing attack with one law per time-sharing symbol.
    Symmetrizing { graph: BipartiteGraph, laws: Vec<CondDistribution> },
}

impl JammerSpec {
    /// Draws a state sequence from the codebooks alone.
    pub fn attack(&self, ch: &DiscreteAvmac, cb: &DiscreteCodebookPair, rng: &mut impl Rng) -> Result<AttackOutcome> {
        match self {
            JammerSpec::Constant(s) => {
                if *s >= ch.card_s {
                    return Err(Error::SymbolOutOfRange { symbol: *s, size: ch.card_s });
                }
                let state = vec![*s; cb.n];
                let over = ch.g[*s] > ch.lambda;
                Ok(AttackOutcome {
                    state: if over { fallback_word(ch, cb.n) } else { state },
                    used_fallback: over,
                    redraws: 0,
                    sampled_s: vec![],
                    sampled_t: vec![],
                })
            }
            JammerSpec::Iid(law) => iid_attack_state(ch, &cb.u, law, rng),
            JammerSpec::Symmetrizing { graph, laws } => symmetrizing_attack_state(ch, cb, graph, laws, rng),
        }
    }
}

/// The cheapest symmetrizing attack within budget on a graph with `edges`
/// edges, or on the largest symmetrizable graph when `edges` is `None`;
/// returns the attack and its expected cost.
pub fn symmetrizing_jammer(
    sym: &Symmetrizer,
    mode: Mode,
    input: &InputDistribution,
    edges: Option<usize>,
) -> Result<Option<(JammerSpec, f64)>> {
    let Some(l) = edges else {
        let report = sym.report(input, mode)?;
        return Ok(report.witness_graph.zip(report.witness_q).zip(report.witness_cost).map(|((graph, laws), cost)| {
            (JammerSpec::Symmetrizing { graph, laws }, cost)
        }));
    };
    input.check_against(&sym.ch)?;
    let threshold = sym.ch.strict_state_threshold();
    let mut best: Option<(JammerSpec, f64)> = None;
    for k in sym.graph_indices(l) {
        if let Some((cost, laws)) = sym.graph_cost(k, mode, input)? {
            if cost <= threshold && best.as_ref().is_none_or(|b| cost < b.1) {
                best = Some((JammerSpec::Symmetrizing { graph: sym.lps[k].graph.clone(), laws }, cost));
            }
        }
    }
    Ok(best)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialReport {
    pub trial: usize,
    pub sent: (usize, usize),
    pub decoded: Vec<(usize, usize)>,
    pub error: bool,
    pub state_cost: f64,
    pub used_fallback: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimulationSummary {
    pub trials: usize,
    pub errors: usize,
    pub error_rate: f64,
    /// Binomial standard error of `error_rate`.
    pub std_error: f64,
    pub fallback_rate: f64,
    pub mean_list_size: f64,
}

impl SimulationSummary {
    pub(crate) fn from_counts(trials: usize, errors: usize, fallbacks: usize, list_total: usize) -> Self {
        let t = trials as f64;
        let p = errors as f64 / t;
        Self {
            trials,
            errors,
            error_rate: p,
            std_error: (p * (1.0 - p) / t).sqrt(),
            fallback_rate: fallbacks as f64 / t,
            mean_list_size: list_total as f64 / t,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteRun {
    pub summary: SimulationSummary,
    pub reports: Vec<TrialReport>,
}

/// Passes `x`, `y` and `s` letterwise through the channel.
pub fn channel_output(ch: &DiscreteAvmac, x: &[usize], y: &[usize], s: &[usize], rng: &mut impl Rng) -> Vec<usize> {
    (0..x.len()).map(|i| attack::sample_index(ch.row(x[i], y[i], s[i]), rng)).collect()
}

/// Runs independent trials: a uniform message pair, an oblivious state, a
/// channel draw and a list decoding. Every trial has its own random streams,
/// so the result does not depend on the thread count.
pub fn run_discrete_trials(
    ch: &DiscreteAvmac,
    cb: &DiscreteCodebookPair,
    jammer: &JammerSpec,
    params: &DecoderParams,
    trials: usize,
    seed: u64,
) -> Result<DiscreteRun> {
    if trials == 0 {
        return Err(Error::InvalidParameter("at least one trial is required".into()));
    }
    ch.validate()?;
    let reports = (0..trials)
        .into_par_iter()
        .map(|t| {
            let mut msg_rng = stream(seed, Stream::Messages, t as u64);
            let sent = (msg_rng.random_range(0..cb.m()), msg_rng.random_range(0..cb.w()));
            let attack = jammer.attack(ch, cb, &mut stream(seed, Stream::Jammer, t as u64))?;
            let state_cost = attack.cost(ch);
            assert!(state_cost <= ch.lambda, "state budget violated: {state_cost} > {}", ch.lambda);
            let z = channel_output(
                ch,
                &cb.c1[sent.0],
                &cb.c2[sent.1],
                &attack.state,
                &mut stream(seed, Stream::Noise, t as u64),
            );
            let list = typicality_list_decode(cb, ch, &z, params)?;
            let decoded: Vec<(usize, usize)> = list.iter().map(|c| (c.m, c.w)).collect();
            Ok(TrialReport {
                trial: t,
                sent,
                error: !decoded.contains(&sent),
                decoded,
                state_cost,
                used_fallback: attack.used_fallback,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let errors = reports.iter().filter(|r| r.error).count();
    let fallbacks = reports.iter().filter(|r| r.used_fallback).count();
    let lists = reports.iter().map(|r| r.decoded.len()).sum();
    Ok(DiscreteRun { summary: SimulationSummary::from_counts(trials, errors, fallbacks, lists), reports })
}

/// The error floor `(1/I - 1/M + 1/(MI)) (1/J - 1/W + 1/(WJ))` of the
/// symmetrizing attack with graph sides `I`, `J`.
pub fn symmetrizing_error_floor(i: usize, j: usize, m: usize, w: usize) -> f64 {
    let (i, j, m, w) = (i as f64, j as f64, m as f64, w as f64);
    (1.0 / i - 1.0 / m + 1.0 / (m * i)) * (1.0 / j - 1.0 / w + 1.0 / (w * j))
}
