//! Random spherical codes and the exhaustive minimum-distance list decoder.

use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SphericalCodebook {
    pub vectors: Vec<Vec<f64>>,
    pub power: f64,
}

/// `m` independent points uniform on the sphere of radius `sqrt(n P)`.
pub fn spherical_codebook(n: usize, m: usize, power: f64, rng: &mut impl Rng) -> Result<SphericalCodebook> {
    if n == 0 || m == 0 {
        return Err(Error::InvalidParameter("blocklength and codebook size must be positive".into()));
    }
    if !(power > 0.0 && power.is_finite()) {
        return Err(Error::InvalidParameter(format!("codeword power must be positive, got {power}")));
    }
    let radius = (n as f64 * power).sqrt();
    let vectors = (0..m)
        .map(|_| loop {
            let v: Vec<f64> = (0..n).map(|_| rng.sample(StandardNormal)).collect();
            let norm = norm2(&v).sqrt();
            if norm > 0.0 {
                break v.into_iter().map(|a| a * radius / norm).collect();
            }
        })
        .collect();
    Ok(SphericalCodebook { vectors, power })
}

impl SphericalCodebook {
    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn blocklength(&self) -> usize {
        self.vectors.first().map_or(0, Vec::len)
    }

    pub fn centroid(&self) -> Vec<f64> {
        let mut c = vec![0.0; self.blocklength()];
        for v in &self.vectors {
            axpy(1.0, v, &mut c);
        }
        c.iter_mut().for_each(|a| *a /= self.len() as f64);
        c
    }
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub(crate) fn norm2(a: &[f64]) -> f64 {
    dot(a, a)
}

pub(crate) fn axpy(alpha: f64, x: &[f64], y: &mut [f64]) {
    y.iter_mut().zip(x).for_each(|(b, a)| *b += alpha * a);
}

/// Exhaustive minimum-distance decoder with the cross inner products of the
/// two codebooks precomputed, so one decoding costs `O(n(M+W) + MW)`.
#[derive(Debug, Clone)]
pub struct MinDistanceDecoder<'a> {
    c1: &'a SphericalCodebook,
    c2: &'a SphericalCodebook,
    /// `||x_m||^2 + ||y_w||^2 + 2 <x_m, y_w>`, row-major in `(m, w)`.
    pair_norms: Vec<f64>,
}

impl<'a> MinDistanceDecoder<'a> {
    pub fn new(c1: &'a SphericalCodebook, c2: &'a SphericalCodebook) -> Self {
        let n1: Vec<f64> = c1.vectors.iter().map(|x| norm2(x)).collect();
        let n2: Vec<f64> = c2.vectors.iter().map(|y| norm2(y)).collect();
        let mut pair_norms = Vec::with_capacity(c1.len() * c2.len());
        for (x, a) in c1.vectors.iter().zip(&n1) {
            for (y, b) in c2.vectors.iter().zip(&n2) {
                pair_norms.push(a + b + 2.0 * dot(x, y));
            }
        }
        Self { c1, c2, pair_norms }
    }

    /// Squared distances `||z - x_m - y_w||^2`, row-major in `(m, w)`.
    pub fn distances(&self, z: &[f64]) -> Vec<f64> {
        let zz = norm2(z);
        let zx: Vec<f64> = self.c1.vectors.iter().map(|x| dot(z, x)).collect();
        let zy: Vec<f64> = self.c2.vectors.iter().map(|y| dot(z, y)).collect();
        let w = self.c2.len();
        self.pair_norms.iter().enumerate().map(|(k, p)| zz + p - 2.0 * (zx[k / w] + zy[k % w])).collect()
    }

    /// The `list_size` closest pairs, nearest first, distance ties broken
    /// by `(m, w)`.
    pub fn decode(&self, z: &[f64], list_size: usize) -> Vec<(usize, usize)> {
        let d = self.distances(z);
        let w = self.c2.len();
        let mut idx: Vec<usize> = (0..d.len()).collect();
        let cmp = |a: &usize, b: &usize| d[*a].total_cmp(&d[*b]).then(a.cmp(b));
        let l = list_size.min(idx.len());
        if l == 0 {
            return vec![];
        }
        if l < idx.len() {
            idx.select_nth_unstable_by(l - 1, cmp);
            idx.truncate(l);
        }
        idx.sort_unstable_by(cmp);
        idx.into_iter().map(|k| (k / w, k % w)).collect()
    }
}

/// One-shot convenience wrapper around [`MinDistanceDecoder`].
pub fn min_distance_list_decode(
    c1: &SphericalCodebook,
    c2: &SphericalCodebook,
    z: &[f64],
    list_size: usize,
) -> Vec<(usize, usize)> {
    MinDistanceDecoder::new(c1, c2).decode(z, list_size)
}
