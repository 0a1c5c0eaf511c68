//! Time-sharing sequences and constant-composition random codebooks.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::channel::{DiscreteAvmac, InputDistribution};
use crate::error::{Error, Result};
use crate::rng::{stream, Stream};
use crate::types::average_cost;

/// Largest-remainder rounding of `n * p` to integer counts summing to `n`;
/// ties go to the lower index.
pub fn rounded_counts(p: &[f64], n: usize) -> Vec<usize> {
    let exact: Vec<f64> = p.iter().map(|&q| q * n as f64).collect();
    let mut counts: Vec<usize> = exact.iter().map(|e| (e + 1e-9).floor() as usize).collect();
    let assigned: usize = counts.iter().sum();
    let mut order: Vec<usize> = (0..p.len()).collect();
    // remainders equal up to rounding noise count as ties
    let remainder = |k: usize| ((exact[k] - counts[k] as f64) * 1e9).round() as i64;
    order.sort_by(|&a, &b| remainder(b).cmp(&remainder(a)).then(a.cmp(&b)));
    for &k in order.iter().take(n.saturating_sub(assigned)) {
        counts[k] += 1;
    }
    counts
}

/// Deterministic sequence of type `p_u` (after rounding), symbols in blocks.
pub fn timesharing_sequence(p_u: &[f64], n: usize) -> Vec<usize> {
    rounded_counts(p_u, n)
        .into_iter()
        .enumerate()
        .flat_map(|(u, c)| std::iter::repeat_n(u, c))
        .collect()
}

/// `m` codewords, each a uniformly random arrangement (within the positions
/// of every `u`) of the multiset fixed by the rounded conditionals.
pub fn constant_composition_codebook(
    u: &[usize],
    conditionals: &[Vec<f64>],
    m: usize,
    rng: &mut impl Rng,
) -> Result<Vec<Vec<usize>>> {
    let positions = positions_by_symbol(u, conditionals.len())?;
    let multisets: Vec<Vec<usize>> = positions
        .iter()
        .zip(conditionals)
        .map(|(pos, p)| {
            rounded_counts(p, pos.len())
                .into_iter()
                .enumerate()
                .flat_map(|(x, c)| std::iter::repeat_n(x, c))
                .collect()
        })
        .collect();
    Ok((0..m)
        .map(|_| {
            let mut word = vec![0; u.len()];
            for (pos, multiset) in positions.iter().zip(&multisets) {
                let mut letters = multiset.clone();
                letters.shuffle(rng);
                pos.iter().zip(letters).for_each(|(&i, x)| word[i] = x);
            }
            word
        })
        .collect())
}

fn positions_by_symbol(u: &[usize], card_u: usize) -> Result<Vec<Vec<usize>>> {
    let mut positions = vec![Vec::new(); card_u];
    for (i, &s) in u.iter().enumerate() {
        positions.get_mut(s).ok_or(Error::SymbolOutOfRange { symbol: s, size: card_u })?.push(i);
    }
    Ok(positions)
}

#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteCodebookPair {
    pub n: usize,
    pub u: Vec<usize>,
    pub c1: Vec<Vec<usize>>,
    pub c2: Vec<Vec<usize>>,
    /// The realized (rounded) composition, which the decoder uses as its
    /// reference law.
    pub composition: InputDistribution,
}

impl DiscreteCodebookPair {
    /// Draws both codebooks from the codebook stream of `seed`. Fails when
    /// rounding the composition at this blocklength breaks an input budget.
    pub fn generate(
        ch: &DiscreteAvmac,
        input: &InputDistribution,
        n: usize,
        m: usize,
        w: usize,
        seed: u64,
    ) -> Result<Self> {
        input.check_against(ch)?;
        if n == 0 || m == 0 || w == 0 {
            return Err(Error::InvalidParameter("blocklength and codebook sizes must be positive".into()));
        }
        let u = timesharing_sequence(&input.p_u, n);
        let c1 = constant_composition_codebook(&u, &input.p_x_given_u, m, &mut stream(seed, Stream::Codebook, 0))?;
        let c2 = constant_composition_codebook(&u, &input.p_y_given_u, w, &mut stream(seed, Stream::Codebook, 1))?;
        for (words, cost, budget, user) in [(&c1, &ch.f1, ch.gamma1, 1), (&c2, &ch.f2, ch.gamma2, 2)] {
            let c = average_cost(&words[0], cost)?;
            if c > budget + 1e-12 {
                return Err(Error::CompositionInfeasible {
                    n,
                    reason: format!("user {user} codewords cost {c} after rounding, budget {budget}"),
                });
            }
        }
        let composition = realized_composition(&u, &c1[0], &c2[0], input.card_u(), ch.card_x, ch.card_y);
        Ok(Self { n, u, c1, c2, composition })
    }

    pub fn card_u(&self) -> usize {
        self.composition.card_u()
    }

    pub fn m(&self) -> usize {
        self.c1.len()
    }

    pub fn w(&self) -> usize {
        self.c2.len()
    }

    /// Rates `log2(M)/n` and `log2(W)/n`.
    pub fn rates(&self) -> (f64, f64) {
        ((self.m() as f64).log2() / self.n as f64, (self.w() as f64).log2() / self.n as f64)
    }
}

/// Conditional types of one codeword pair given `u`; every codeword of a
/// constant-composition book has the same ones.
fn realized_composition(u: &[usize], x: &[usize], y: &[usize], cu: usize, cx: usize, cy: usize) -> InputDistribution {
    let n = u.len() as f64;
    let mut nu = vec![0usize; cu];
    let mut nx = vec![vec![0usize; cx]; cu];
    let mut ny = vec![vec![0usize; cy]; cu];
    for i in 0..u.len() {
        nu[u[i]] += 1;
        nx[u[i]][x[i]] += 1;
        ny[u[i]][y[i]] += 1;
    }
    let cond = |counts: &[usize], total: usize| -> Vec<f64> {
        if total == 0 {
            let mut p = vec![0.0; counts.len()];
            p[0] = 1.0;
            p
        } else {
            counts.iter().map(|&c| c as f64 / total as f64).collect()
        }
    };
    InputDistribution {
        p_u: nu.iter().map(|&c| c as f64 / n).collect(),
        p_x_given_u: (0..cu).map(|k| cond(&nx[k], nu[k])).collect(),
        p_y_given_u: (0..cu).map(|k| cond(&ny[k], nu[k])).collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::library;
    use crate::types::empirical_joint_type;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn rounding_examples() {
        assert_eq!(timesharing_sequence(&[1.0], 10), vec![0; 10]);
        assert_eq!(rounded_counts(&[0.5, 0.5], 10), vec![5, 5]);
        assert_eq!(rounded_counts(&[0.3, 0.7], 20), vec![6, 14]);
        assert_eq!(rounded_counts(&[1.0 / 3.0; 3], 10), vec![4, 3, 3]);
        assert_eq!(rounded_counts(&[0.25, 0.25, 0.5], 3), vec![1, 1, 1]);
        assert_eq!(rounded_counts(&[0.7, 0.3], 5), vec![4, 1]);
    }

    #[test]
    fn largest_remainder_oracle() {
        // brute force: the count vector closest to n p in max-norm with ties
        // resolved toward larger remainders then lower indices is unique for
        // two symbols; compare against rounding half up of the first share
        for n in 1..40 {
            for k in 0..=20 {
                let p = k as f64 / 20.0;
                let c = rounded_counts(&[p, 1.0 - p], n);
                assert_eq!(c[0] + c[1], n);
                let first = (p * n as f64 + 0.5 + 1e-9).floor() as usize;
                assert_eq!(c[0], first, "p={p} n={n}");
            }
        }
    }

    #[test]
    fn single_constant_word() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let book = constant_composition_codebook(&[0; 7], &[vec![0.0, 1.0]], 1, &mut rng).unwrap();
        assert_eq!(book, vec![vec![1; 7]]);
    }

    #[test]
    fn codewords_have_exact_composition() {
        let ch = library::shifted_adder(0.3);
        let input = InputDistribution::new(
            vec![0.4, 0.6],
            vec![vec![0.25, 0.75], vec![0.5, 0.5]],
            vec![vec![0.5, 0.5], vec![1.0, 0.0]],
        )
        .unwrap();
        let cb = DiscreteCodebookPair::generate(&ch, &input, 40, 20, 10, 3).unwrap();
        let comp = &cb.composition;
        assert_eq!(comp.p_u, vec![0.4, 0.6]);
        assert_eq!(comp.p_x_given_u[0], vec![0.25, 0.75]);
        for word in &cb.c1 {
            for (u, target) in comp.p_x_given_u.iter().enumerate() {
                let letters: Vec<usize> = (0..40).filter(|&i| cb.u[i] == u).map(|i| word[i]).collect();
                let t = empirical_joint_type(&[&letters], &[2]).unwrap();
                assert_eq!(t.dist.probs(), target.as_slice());
            }
        }
        assert_eq!(cb, DiscreteCodebookPair::generate(&ch, &input, 40, 20, 10, 3).unwrap());
    }

    #[test]
    fn independent_codewords_look_independent() {
        let u = vec![0; 200];
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let book = constant_composition_codebook(&u, &[vec![0.3, 0.7]], 200, &mut rng).unwrap();
        for pair in book.chunks(2).take(100) {
            let t = empirical_joint_type(&[&pair[0], &pair[1]], &[2, 2]).unwrap();
            let product = t.dist.product_of_marginals();
            let tv: f64 = t.dist.probs().iter().zip(product.probs()).map(|(a, b)| (a - b).abs()).sum::<f64>() / 2.0;
            assert!(tv <= 0.1, "tv {tv}");
        }
    }

    #[test]
    fn rounding_can_break_a_budget() {
        let mut ch = library::binary_xor(0.1);
        ch.f1 = vec![1.0, 0.0];
        ch.gamma1 = 0.5;
        let input = InputDistribution::product(vec![0.5, 0.5], vec![0.5, 0.5]).unwrap();
        assert!(DiscreteCodebookPair::generate(&ch, &input, 10, 2, 2, 0).is_ok());
        assert!(matches!(
            DiscreteCodebookPair::generate(&ch, &input, 9, 2, 2, 0),
            Err(Error::CompositionInfeasible { n: 9, .. })
        ));
    }
}
