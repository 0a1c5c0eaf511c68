//! Typicality list decoder.
//!
//! A message pair passes when the joint type of `(u, x_m, y_w, z)` can be
//! completed by some state law `V(s|u,x,y,z)` meeting the state budget so that
//! the completed law is within `eta` bits (in divergence) of the reference
//! `P_u P_{x|u} P_{y|u} P_{s|u} W`, with `P_{s|u}` the state marginal of the
//! completed law itself. Passing pairs are ranked by that divergence and the
//! list is cut to `L`.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::channel::DiscreteAvmac;
use crate::error::{Error, Result};

use super::codebook::DiscreteCodebookPair;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DecoderParams {
    pub eta: f64,
    /// Accepted for completeness and recorded; ranking by divergence stands
    /// in for the pairwise disambiguation test.
    pub eta_prime: f64,
    pub list_size: usize,
}

impl Default for DecoderParams {
    fn default() -> Self {
        Self { eta: 0.05, eta_prime: 0.05, list_size: 1 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Candidate {
    pub m: usize,
    pub w: usize,
    pub divergence: f64,
}

const MAX_ROUNDS: usize = 200;
const ROUND_TOLERANCE: f64 = 1e-10;

/// Smallest divergence over budget-feasible completions of a joint type.
///
/// `counts` is indexed `((u * |X| + x) * |Y| + y) * |Z| + z`; `reference` is
/// the input law `P_u P_{x|u} P_{y|u}` flattened the same way over
/// `(u, x, y)`. Returns `+inf` when no completion is feasible.
pub fn completion_divergence(ch: &DiscreteAvmac, counts: &[u32], reference: &[f64]) -> f64 {
    let (cx, cy, cs, cz) = (ch.card_x, ch.card_y, ch.card_s, ch.card_z);
    let cu = reference.len() / (cx * cy);
    let n: f64 = counts.iter().map(|&c| c as f64).sum();
    let cells: Vec<(usize, f64)> =
        counts.iter().enumerate().filter(|(_, &c)| c > 0).map(|(k, &c)| (k, c as f64 / n)).collect();

    // D(tau_{u,x,y} || reference) - H(z | u, x, y)
    let mut input_part = 0.0;
    let mut tau_uxy = vec![0.0; cu * cx * cy];
    let mut tau_u = vec![0.0; cu];
    for &(k, t) in &cells {
        tau_uxy[k / cz] += t;
        tau_u[k / (cx * cy * cz)] += t;
    }
    for (k, &t) in tau_uxy.iter().enumerate() {
        if t > 0.0 {
            if reference[k] <= 0.0 {
                return f64::INFINITY;
            }
            input_part += t * (t / reference[k]).log2();
        }
    }
    for &(k, t) in &cells {
        input_part += t * (t / tau_uxy[k / cz]).log2();
    }

    // per cell: channel rows W(z|x,y,s) and cell coordinates
    let info: Vec<(usize, f64, Vec<f64>)> = cells
        .iter()
        .map(|&(k, t)| {
            let z = k % cz;
            let y = (k / cz) % cy;
            let x = (k / (cz * cy)) % cx;
            let u = k / (cz * cy * cx);
            (u, t, (0..cs).map(|s| ch.w(x, y, s, z)).collect())
        })
        .collect();
    if info.iter().any(|(_, _, w)| w.iter().all(|&v| v == 0.0)) {
        return f64::INFINITY;
    }

    let mut r = vec![1.0 / cs as f64; cu * cs];
    let mut best = f64::INFINITY;
    let mut v = vec![0.0; info.len() * cs];
    for _ in 0..MAX_ROUNDS {
        let Some(d) = completion_step(ch, &info, &r, &mut v) else {
            return f64::INFINITY;
        };
        let total = input_part + d;
        let improved = best - total;
        best = best.min(total);
        // state marginal of the completion
        let mut next = vec![0.0; cu * cs];
        for (c, (u, t, _)) in info.iter().enumerate() {
            for s in 0..cs {
                next[u * cs + s] += t * v[c * cs + s];
            }
        }
        for u in 0..cu {
            if tau_u[u] > 0.0 {
                for s in 0..cs {
                    r[u * cs + s] = next[u * cs + s] / tau_u[u];
                }
            }
        }
        if improved.is_finite() && improved < ROUND_TOLERANCE {
            break;
        }
    }
    best.max(0.0)
}

/// Best completion `V` for a fixed state reference `r`: `V ∝ r W 2^{-beta g}`
/// with the smallest `beta >= 0` meeting the budget. Returns the channel part
/// of the divergence, or `None` when the budget is unreachable.
fn completion_step(ch: &DiscreteAvmac, info: &[(usize, f64, Vec<f64>)], r: &[f64], v: &mut [f64]) -> Option<f64> {
    let cs = ch.card_s;
    let fill = |beta: f64, v: &mut [f64]| -> (f64, f64) {
        // returns (expected cost, divergence part)
        let (mut cost, mut div) = (0.0, 0.0);
        for (c, (u, t, w)) in info.iter().enumerate() {
            let row = &mut v[c * cs..(c + 1) * cs];
            let gmin = (0..cs).filter(|&s| r[u * cs + s] * w[s] > 0.0).map(|s| ch.g[s]).fold(f64::INFINITY, f64::min);
            let mut z = 0.0;
            for s in 0..cs {
                let base = r[u * cs + s] * w[s];
                row[s] = if base > 0.0 { base * (-(beta * (ch.g[s] - gmin))).exp2() } else { 0.0 };
                z += row[s];
            }
            if z <= 0.0 {
                return (f64::INFINITY, f64::INFINITY);
            }
            let mut mean_g = 0.0;
            for s in 0..cs {
                row[s] /= z;
                mean_g += row[s] * ch.g[s];
            }
            cost += t * mean_g;
            // sum_s V log(V / (r W)) = -beta (E_V g - gmin) - log2 z
            div += t * (-beta * (mean_g - gmin) - z.log2());
        }
        (cost, div)
    };
    let (cost0, div0) = fill(0.0, v);
    if !cost0.is_finite() {
        return None;
    }
    if cost0 <= ch.lambda {
        return Some(div0);
    }
    // budget needs tilting toward cheaper states
    let floor: f64 = info
        .iter()
        .map(|(u, t, w)| t * (0..cs).filter(|&s| r[u * cs + s] * w[s] > 0.0).map(|s| ch.g[s]).fold(f64::INFINITY, f64::min))
        .sum();
    if floor > ch.lambda + 1e-12 {
        return None;
    }
    let mut hi = 1.0;
    while fill(hi, v).0 > ch.lambda && hi < 1e6 {
        hi *= 2.0;
    }
    let mut lo = 0.0;
    for _ in 0..80 {
        let mid = 0.5 * (lo + hi);
        if fill(mid, v).0 > ch.lambda {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Some(fill(hi, v).1)
}

/// Decodes `z`: every candidate pair within `eta`, ranked by divergence (then
/// by index) and truncated to the list size. When the list size covers all
/// pairs, every pair is returned.
pub fn typicality_list_decode(
    cb: &DiscreteCodebookPair,
    ch: &DiscreteAvmac,
    z: &[usize],
    params: &DecoderParams,
) -> Result<Vec<Candidate>> {
    if z.len() != cb.n {
        return Err(Error::LengthMismatch { expected: cb.n, found: z.len() });
    }
    if let Some(&bad) = z.iter().find(|&&s| s >= ch.card_z) {
        return Err(Error::SymbolOutOfRange { symbol: bad, size: ch.card_z });
    }
    if params.list_size == 0 {
        return Err(Error::InvalidParameter("list size must be at least 1".into()));
    }
    let (cx, cy, cz) = (ch.card_x, ch.card_y, ch.card_z);
    let comp = &cb.composition;
    let cu = comp.card_u();
    let mut reference = vec![0.0; cu * cx * cy];
    for u in 0..cu {
        for x in 0..cx {
            for y in 0..cy {
                reference[(u * cx + x) * cy + y] = comp.p_u[u] * comp.p_x_given_u[u][x] * comp.p_y_given_u[u][y];
            }
        }
    }
    let everyone = params.list_size >= cb.m() * cb.w();

    // partial cell indices: user-1 part and user-2/output part
    let a: Vec<Vec<usize>> =
        cb.c1.iter().map(|x| (0..cb.n).map(|i| (cb.u[i] * cx + x[i]) * cy * cz).collect()).collect();
    let b: Vec<Vec<usize>> = cb.c2.iter().map(|y| (0..cb.n).map(|i| y[i] * cz + z[i]).collect()).collect();

    let mut memo: HashMap<Vec<u32>, f64> = HashMap::new();
    let mut counts = vec![0u32; cu * cx * cy * cz];
    let mut passed = Vec::new();
    for (m, am) in a.iter().enumerate() {
        for (w, bw) in b.iter().enumerate() {
            counts.iter_mut().for_each(|c| *c = 0);
            for i in 0..cb.n {
                counts[am[i] + bw[i]] += 1;
            }
            let d = match memo.get(&counts) {
                Some(&d) => d,
                None => {
                    let d = completion_divergence(ch, &counts, &reference);
                    memo.insert(counts.clone(), d);
                    d
                }
            };
            if everyone || d <= params.eta {
                passed.push(Candidate { m, w, divergence: d });
            }
        }
    }
    passed.sort_by(|p, q| p.divergence.total_cmp(&q.divergence).then(p.m.cmp(&q.m)).then(p.w.cmp(&q.w)));
    passed.truncate(params.list_size);
    assert!(passed.len() <= params.list_size);
    Ok(passed)
}
