//! Dense joint and conditional distributions over small product alphabets,
//! with the information measures (in bits) the bounds are built from.

use crate::error::{Error, Result};

const BUILD_TOL: f64 = 1e-12;

/// A probability table over `arity[0] x arity[1] x ...`, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct JointDistribution {
    arity: Vec<usize>,
    probs: Vec<f64>,
}

impl JointDistribution {
    pub fn new(arity: Vec<usize>, probs: Vec<f64>) -> Result<Self> {
        let size: usize = arity.iter().product();
        if arity.is_empty() || size == 0 {
            return Err(Error::DimensionMismatch("joint distribution needs nonempty alphabets".into()));
        }
        if probs.len() != size {
            return Err(Error::DimensionMismatch(format!(
                "expected {size} probabilities, found {}",
                probs.len()
            )));
        }
        if let Some(i) = probs.iter().position(|p| !p.is_finite() || *p < 0.0) {
            return Err(Error::NotADistribution(format!("entry {i} is {}", probs[i])));
        }
        let sum: f64 = probs.iter().sum();
        if (sum - 1.0).abs() > BUILD_TOL {
            return Err(Error::NotADistribution(format!("entries sum to {sum}")));
        }
        Ok(Self { arity, probs })
    }

    /// Wraps a table computed from already-normalized inputs. Rounding in
    /// derived quantities is tolerated up to 1e-9.
    pub(crate) fn derived(arity: Vec<usize>, probs: Vec<f64>) -> Self {
        debug_assert_eq!(arity.iter().product::<usize>(), probs.len());
        debug_assert!((probs.iter().sum::<f64>() - 1.0).abs() < 1e-9);
        Self { arity, probs }
    }

    /// Evaluates `f` on every multi-index and normalizes nothing: `f` must
    /// already describe a distribution.
    pub fn from_fn(arity: Vec<usize>, mut f: impl FnMut(&[usize]) -> f64) -> Result<Self> {
        let mut probs = Vec::with_capacity(arity.iter().product());
        for_each_index(&arity, |idx| probs.push(f(idx)));
        Self::new(arity, probs)
    }

    /// The product law of independent marginals.
    pub fn product(marginals: &[&[f64]]) -> Result<Self> {
        let arity: Vec<usize> = marginals.iter().map(|m| m.len()).collect();
        let mut probs = Vec::with_capacity(arity.iter().product());
        for_each_index(&arity, |idx| {
            probs.push(idx.iter().zip(marginals).map(|(&i, m)| m[i]).product());
        });
        Self::new(arity, probs)
    }

    pub fn uniform(arity: Vec<usize>) -> Self {
        let size: usize = arity.iter().product();
        Self { arity, probs: vec![1.0 / size as f64; size] }
    }

    pub fn arity(&self) -> &[usize] {
        &self.arity
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn num_vars(&self) -> usize {
        self.arity.len()
    }

    pub fn flat_index(&self, idx: &[usize]) -> usize {
        idx.iter().zip(&self.arity).fold(0, |acc, (&i, &a)| acc * a + i)
    }

    pub fn prob(&self, idx: &[usize]) -> f64 {
        self.probs[self.flat_index(idx)]
    }

    /// Sums out every coordinate not in `keep`; the result lists the kept
    /// variables in the order given.
    pub fn marginalize(&self, keep: &[usize]) -> Result<Self> {
        if keep.is_empty() {
            return Err(Error::InvalidIndexSet("keep set is empty".into()));
        }
        self.check_indices(keep)?;
        let arity: Vec<usize> = keep.iter().map(|&k| self.arity[k]).collect();
        let mut probs = vec![0.0; arity.iter().product()];
        let mut flat = 0;
        for_each_index(&self.arity, |idx| {
            let j = keep.iter().fold(0, |acc, &k| acc * self.arity[k] + idx[k]);
            probs[j] += self.probs[flat];
            flat += 1;
        });
        Ok(Self::derived(arity, probs))
    }

    /// Shannon entropy of the listed variables (bits); empty set gives 0.
    pub fn entropy_of(&self, vars: &[usize]) -> Result<f64> {
        if vars.is_empty() {
            return Ok(0.0);
        }
        Ok(entropy(self.marginalize(vars)?.probs()))
    }

    pub fn entropy(&self) -> f64 {
        entropy(&self.probs)
    }

    /// Product of the single-variable marginals.
    pub fn product_of_marginals(&self) -> Self {
        let marginals: Vec<Vec<f64>> = (0..self.num_vars())
            .map(|k| self.marginalize(&[k]).expect("valid index").probs)
            .collect();
        let refs: Vec<&[f64]> = marginals.iter().map(Vec::as_slice).collect();
        let mut probs = Vec::with_capacity(self.probs.len());
        for_each_index(&self.arity, |idx| {
            probs.push(idx.iter().zip(&refs).map(|(&i, m)| m[i]).product());
        });
        Self::derived(self.arity.clone(), probs)
    }

    fn check_indices(&self, vars: &[usize]) -> Result<()> {
        let mut seen = vec![false; self.num_vars()];
        for &v in vars {
            if v >= self.num_vars() {
                return Err(Error::InvalidIndexSet(format!("variable {v} out of {}", self.num_vars())));
            }
            if std::mem::replace(&mut seen[v], true) {
                return Err(Error::InvalidIndexSet(format!("variable {v} repeated")));
            }
        }
        Ok(())
    }
}

/// A conditional law: one probability row over `target_arity` symbols per
/// tuple of the conditioning alphabets (row-major).
#[derive(Debug, Clone, PartialEq)]
pub struct CondDistribution {
    conditioning_arity: Vec<usize>,
    target_arity: usize,
    rows: Vec<f64>,
}

impl CondDistribution {
    pub fn new(conditioning_arity: Vec<usize>, target_arity: usize, rows: Vec<f64>) -> Result<Self> {
        let cond = Self { conditioning_arity, target_arity, rows };
        cond.check(BUILD_TOL)?;
        Ok(cond)
    }

    /// Like [`CondDistribution::new`] but with the looser tolerance used for
    /// laws recovered from an LP or an iterative solver; rows are then
    /// clipped at zero and renormalized.
    pub fn from_solver(conditioning_arity: Vec<usize>, target_arity: usize, mut rows: Vec<f64>) -> Result<Self> {
        for row in rows.chunks_mut(target_arity.max(1)) {
            for p in row.iter_mut() {
                if *p < 0.0 && *p > -1e-9 {
                    *p = 0.0;
                }
            }
        }
        let mut cond = Self { conditioning_arity, target_arity, rows };
        cond.check(1e-8)?;
        for row in cond.rows.chunks_mut(target_arity) {
            let s: f64 = row.iter().sum();
            row.iter_mut().for_each(|p| *p /= s);
        }
        Ok(cond)
    }

    /// Every row equal to `row`.
    pub fn constant(conditioning_arity: Vec<usize>, row: &[f64]) -> Result<Self> {
        let count: usize = conditioning_arity.iter().product();
        Self::new(conditioning_arity, row.len(), row.repeat(count))
    }

    pub fn from_fn(
        conditioning_arity: Vec<usize>,
        target_arity: usize,
        mut f: impl FnMut(&[usize], usize) -> f64,
    ) -> Result<Self> {
        let mut rows = Vec::new();
        for_each_index(&conditioning_arity, |idx| {
            for t in 0..target_arity {
                rows.push(f(idx, t));
            }
        });
        Self::new(conditioning_arity, target_arity, rows)
    }

    fn check(&self, tol: f64) -> Result<()> {
        if self.target_arity == 0 {
            return Err(Error::DimensionMismatch("empty target alphabet".into()));
        }
        let count: usize = self.conditioning_arity.iter().product();
        if self.rows.len() != count * self.target_arity {
            return Err(Error::DimensionMismatch(format!(
                "expected {} conditional entries, found {}",
                count * self.target_arity,
                self.rows.len()
            )));
        }
        for (r, row) in self.rows.chunks(self.target_arity).enumerate() {
            if row.iter().any(|p| !p.is_finite() || *p < 0.0) {
                return Err(Error::NotADistribution(format!("row {r} has a negative entry")));
            }
            let sum: f64 = row.iter().sum();
            if (sum - 1.0).abs() > tol {
                return Err(Error::NotADistribution(format!("row {r} sums to {sum}")));
            }
        }
        Ok(())
    }

    pub fn conditioning_arity(&self) -> &[usize] {
        &self.conditioning_arity
    }

    pub fn target_arity(&self) -> usize {
        self.target_arity
    }

    pub fn num_rows(&self) -> usize {
        self.rows.len() / self.target_arity
    }

    pub fn rows(&self) -> &[f64] {
        &self.rows
    }

    /// Row for a flat conditioning index.
    pub fn row(&self, cond: usize) -> &[f64] {
        &self.rows[cond * self.target_arity..(cond + 1) * self.target_arity]
    }

    pub fn row_for(&self, cond: &[usize]) -> &[f64] {
        let flat = cond.iter().zip(&self.conditioning_arity).fold(0, |acc, (&i, &a)| acc * a + i);
        self.row(flat)
    }
}

/// Calls `f` on every multi-index of `arity` in row-major order.
pub fn for_each_index(arity: &[usize], mut f: impl FnMut(&[usize])) {
    if arity.contains(&0) {
        return;
    }
    let mut idx = vec![0usize; arity.len()];
    loop {
        f(&idx);
        let mut k = arity.len();
        loop {
            if k == 0 {
                return;
            }
            k -= 1;
            idx[k] += 1;
            if idx[k] < arity[k] {
                break;
            }
            idx[k] = 0;
        }
    }
}

/// `-sum p log2 p`, with `0 log 0 = 0`.
pub fn entropy(p: &[f64]) -> f64 {
    -p.iter().filter(|&&v| v > 0.0).map(|&v| v * v.log2()).sum::<f64>()
}

/// Binary entropy in bits.
pub fn binary_entropy(p: f64) -> f64 {
    entropy(&[p, 1.0 - p])
}

/// `D(p || q)` in bits over raw tables; `+inf` when `p` is not absolutely
/// continuous with respect to `q`.
pub fn kl_raw(p: &[f64], q: &[f64]) -> f64 {
    let mut d = 0.0;
    for (&a, &b) in p.iter().zip(q) {
        if a > 0.0 {
            if b <= 0.0 {
                return f64::INFINITY;
            }
            d += a * (a / b).log2();
        }
    }
    d.max(0.0)
}

pub fn kl_divergence(p: &JointDistribution, q: &JointDistribution) -> Result<f64> {
    if p.arity != q.arity {
        return Err(Error::DimensionMismatch(format!(
            "divergence between shapes {:?} and {:?}",
            p.arity, q.arity
        )));
    }
    Ok(kl_raw(&p.probs, &q.probs))
}

/// `I(A; B | C)` in bits; `c` may be empty.
pub fn cond_mutual_information(d: &JointDistribution, a: &[usize], b: &[usize], c: &[usize]) -> Result<f64> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::InvalidIndexSet("mutual information needs nonempty A and B".into()));
    }
    let all: Vec<usize> = a.iter().chain(b).chain(c).copied().collect();
    d.check_indices(&all)?;
    let ac: Vec<usize> = a.iter().chain(c).copied().collect();
    let bc: Vec<usize> = b.iter().chain(c).copied().collect();
    let i = d.entropy_of(&ac)? + d.entropy_of(&bc)? - d.entropy_of(&all)? - d.entropy_of(c)?;
    Ok(i.max(0.0))
}
