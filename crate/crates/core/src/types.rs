//! Method-of-types helpers: empirical joint types, per-letter costs and type
//! enumeration.

use crate::dist::JointDistribution;
use crate::error::{Error, Result};

/// A joint type: a [`JointDistribution`] whose entries are multiples of `1/n`.
#[derive(Debug, Clone, PartialEq)]
pub struct EmpiricalType {
    pub dist: JointDistribution,
    pub counts: Vec<usize>,
    pub n: usize,
}

impl EmpiricalType {
    pub fn arity(&self) -> &[usize] {
        self.dist.arity()
    }
}

/// Joint type of equal-length sequences over alphabets of the given sizes.
pub fn empirical_joint_type(seqs: &[&[usize]], arity: &[usize]) -> Result<EmpiricalType> {
    if seqs.is_empty() || seqs.len() != arity.len() {
        return Err(Error::DimensionMismatch(format!(
            "{} sequences for {} alphabets",
            seqs.len(),
            arity.len()
        )));
    }
    let n = seqs[0].len();
    if n == 0 {
        return Err(Error::LengthMismatch { expected: 1, found: 0 });
    }
    for s in seqs {
        if s.len() != n {
            return Err(Error::LengthMismatch { expected: n, found: s.len() });
        }
    }
    let mut counts = vec![0usize; arity.iter().product()];
    for t in 0..n {
        let mut flat = 0;
        for (seq, &a) in seqs.iter().zip(arity) {
            let sym = seq[t];
            if sym >= a {
                return Err(Error::SymbolOutOfRange { symbol: sym, size: a });
            }
            flat = flat * a + sym;
        }
        counts[flat] += 1;
    }
    let probs = counts.iter().map(|&c| c as f64 / n as f64).collect();
    Ok(EmpiricalType { dist: JointDistribution::new(arity.to_vec(), probs)?, counts, n })
}

/// Mean per-letter cost of a sequence.
pub fn average_cost(seq: &[usize], cost: &[f64]) -> Result<f64> {
    if seq.is_empty() {
        return Ok(0.0);
    }
    let mut total = 0.0;
    for &s in seq {
        total += *cost.get(s).ok_or(Error::SymbolOutOfRange { symbol: s, size: cost.len() })?;
    }
    Ok(total / seq.len() as f64)
}

/// All count vectors of length `k` summing to `n`, in lexicographic order.
pub fn enumerate_types(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(rest: usize, slots: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if slots == 1 {
            cur.push(rest);
            out.push(cur.clone());
            cur.pop();
            return;
        }
        for c in 0..=rest {
            cur.push(c);
            rec(rest - c, slots - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if k > 0 {
        rec(n, k, &mut Vec::with_capacity(k), &mut out);
    }
    out
}

/// Number of types of length-`n` sequences over `k` symbols:
/// the multiset coefficient `C(n + k - 1, k - 1)`.
pub fn type_count(n: usize, k: usize) -> u128 {
    if k == 0 {
        return 0;
    }
    let (top, r) = ((n + k - 1) as u128, (k - 1) as u128);
    (1..=r).fold(1u128, |acc, i| acc * (top - r + i) / i)
}
