//! Gaussian-channel jammers: honest Gaussian noise and the superposition
//! attack that makes `L + 1` transmissions indistinguishable.

use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

use super::codebook::{axpy, norm2, SphericalCodebook};

/// I.i.d. `N(0, N - eta)` letters, scaled back onto the ball of radius
/// `sqrt(n N)` in the rare case they leave it. The flag reports the rescale.
pub fn gaussian_jammer_state(state_power: f64, eta: f64, n: usize, rng: &mut impl Rng) -> Result<(Vec<f64>, bool)> {
    if !(eta > 0.0 && eta < state_power) {
        return Err(Error::InvalidParameter(format!("need 0 < eta < N, got eta = {eta}, N = {state_power}")));
    }
    let sd = (state_power - eta).sqrt();
    let mut s: Vec<f64> = (0..n).map(|_| sd * rng.sample::<f64, _>(StandardNormal)).collect();
    let limit = n as f64 * state_power;
    let power = norm2(&s);
    if power > limit {
        let scale = (limit / power).sqrt() * (1.0 - 1e-12);
        s.iter_mut().for_each(|a| *a *= scale);
        return Ok((s, true));
    }
    Ok((s, false))
}

/// The positive root `gamma` of `gamma/2 + (L-1) sqrt(gamma (eta* + gamma/2)) = delta/2`,
/// capped at `eta*`.
pub fn compute_gamma(delta: f64, list_size: usize, eta_star: f64) -> Result<f64> {
    if !(delta > 0.0 && delta.is_finite()) {
        return Err(Error::InvalidParameter(format!("delta must be positive, got {delta}")));
    }
    if list_size == 0 || eta_star < 0.0 {
        return Err(Error::InvalidParameter(format!("need L >= 1 and eta* >= 0, got L = {list_size}, eta* = {eta_star}")));
    }
    let l = list_size as f64;
    let b = delta + 2.0 * (l - 1.0).powi(2) * eta_star;
    let a = 2.0 * l * l - 4.0 * l + 1.0;
    // (sqrt(b^2 + a delta^2) - b) / a without the cancellation; exact for L = 1
    let root = delta * delta / (b + (b * b + a * delta * delta).sqrt());
    Ok(if list_size == 1 { delta.min(eta_star) } else { root.min(eta_star) })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Center {
    Origin,
    Centroid,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EtaStarOptions {
    pub centers: Vec<Center>,
    /// Smallest covered fraction that counts as "bounded away from zero".
    pub floor: f64,
    pub step: f64,
}

impl Default for EtaStarOptions {
    fn default() -> Self {
        Self { centers: vec![Center::Origin, Center::Centroid], floor: 0.01, step: 0.01 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EtaStarEstimate {
    pub eta_star: f64,
    /// Fraction of codewords within `sqrt(n P eta*)` of the shift.
    pub epsilon: f64,
    pub center: Center,
    pub shift: Vec<f64>,
}

fn center_vector(cb: &SphericalCodebook, c: Center) -> Vec<f64> {
    match c {
        Center::Origin => vec![0.0; cb.blocklength()],
        Center::Centroid => cb.centroid(),
    }
}

/// Normalized squared distances `||x - u||^2 / (n P)`.
fn normalized_distances(cb: &SphericalCodebook, shift: &[f64]) -> Vec<f64> {
    let scale = cb.blocklength() as f64 * cb.power;
    cb.vectors
        .iter()
        .map(|x| x.iter().zip(shift).map(|(a, b)| (a - b) * (a - b)).sum::<f64>() / scale)
        .collect()
}

/// Fraction of codewords in the ball of radius `sqrt(n P eta)` around `shift`.
pub fn coverage(cb: &SphericalCodebook, shift: &[f64], eta: f64) -> f64 {
    let d = normalized_distances(cb, shift);
    d.iter().filter(|&&v| v <= eta + 1e-9).count() as f64 / d.len() as f64
}

/// Smallest grid value of `eta` at which some candidate center covers at
/// least `floor` of the codebook; the best-covering center (earliest on ties)
/// becomes the shift.
pub fn estimate_eta_star(cb: &SphericalCodebook, opts: &EtaStarOptions) -> Result<EtaStarEstimate> {
    if cb.is_empty() || opts.centers.is_empty() {
        return Err(Error::InvalidParameter("need a codeword and a candidate center".into()));
    }
    if !(opts.step > 0.0 && opts.floor > 0.0 && opts.floor <= 1.0) {
        return Err(Error::InvalidParameter(format!("bad grid: step {}, floor {}", opts.step, opts.floor)));
    }
    let candidates: Vec<(Center, Vec<f64>, Vec<f64>)> = opts
        .centers
        .iter()
        .map(|&c| {
            let shift = center_vector(cb, c);
            let d = normalized_distances(cb, &shift);
            (c, shift, d)
        })
        .collect();
    let max = candidates.iter().flat_map(|c| c.2.iter().copied()).fold(0.0, f64::max);
    let m = cb.len() as f64;
    for k in 0..=((max / opts.step).ceil() as usize + 1) {
        // k * step carries representation noise (95 * 0.01 = 0.9500000000000001)
        let eta = (k as f64 * opts.step * 1e12).round() / 1e12;
        let mut best: Option<(usize, f64)> = None;
        for (i, (_, _, d)) in candidates.iter().enumerate() {
            let frac = d.iter().filter(|&&v| v <= eta + 1e-9).count() as f64 / m;
            if frac >= opts.floor && best.is_none_or(|(_, f)| frac > f) {
                best = Some((i, frac));
            }
        }
        if let Some((i, epsilon)) = best {
            let (center, shift, _) = candidates[i].clone();
            return Ok(EtaStarEstimate { eta_star: eta, epsilon, center, shift });
        }
    }
    unreachable!("the largest grid value covers every codeword")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum User {
    User1,
    User2,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuperpositionAttackConfig {
    pub target: User,
    /// The center `u` (user 1) or `v` (user 2).
    pub shift: Vec<f64>,
    pub eta_star: f64,
    /// Fraction of codewords within `sqrt(n P (eta* + gamma/2))` of the shift.
    pub epsilon: f64,
    pub gamma: f64,
    /// Power slack `delta` in `L P (1 + delta) = N`.
    pub delta: f64,
}

impl SuperpositionAttackConfig {
    /// Estimates the shift and `eta*` from the target codebook and derives
    /// `gamma` and `epsilon`. Requires `L P < N`.
    pub fn estimate(
        target: User,
        cb: &SphericalCodebook,
        list_size: usize,
        state_power: f64,
        opts: &EtaStarOptions,
    ) -> Result<Self> {
        let delta = state_power / (list_size as f64 * cb.power) - 1.0;
        if delta <= 0.0 {
            return Err(Error::InvalidParameter(format!(
                "superposition attack needs L P < N, got L P = {}, N = {state_power}",
                list_size as f64 * cb.power
            )));
        }
        let est = estimate_eta_star(cb, opts)?;
        let gamma = compute_gamma(delta, list_size, est.eta_star)?;
        let epsilon = coverage(cb, &est.shift, est.eta_star + gamma / 2.0);
        Ok(Self { target, shift: est.shift, eta_star: est.eta_star, epsilon, gamma, delta })
    }
}

/// Fraction of ordered codeword pairs `(x', x'')`, `x' != x''`, with
/// `||x' - (u + sqrt(gamma/eta)(x'' - u))||^2 < n P (eta* - gamma/2)` where
/// `eta = eta* + gamma/2`: the concentration defect of the argument.
pub fn concentration_defect(cb: &SphericalCodebook, cfg: &SuperpositionAttackConfig) -> f64 {
    let m = cb.len();
    if m < 2 {
        return 0.0;
    }
    let eta = cfg.eta_star + cfg.gamma / 2.0;
    let a = if eta > 0.0 { (cfg.gamma / eta).sqrt() } else { 0.0 };
    let threshold = cb.blocklength() as f64 * cb.power * (cfg.eta_star - cfg.gamma / 2.0);
    let mut hits = 0usize;
    for (i, x1) in cb.vectors.iter().enumerate() {
        for (j, x2) in cb.vectors.iter().enumerate() {
            if i != j {
                let d: f64 = (0..x1.len()).map(|k| (x1[k] - cfg.shift[k] - a * (x2[k] - cfg.shift[k])).powi(2)).sum();
                hits += usize::from(d < threshold);
            }
        }
    }
    hits as f64 / (m * (m - 1)) as f64
}

/// Probability that `L` uniform draws and an independent uniform message are
/// not all distinct: `1 - prod_{k=1..L} (M - k)/M`.
pub fn collision_probability(m: usize, list_size: usize) -> f64 {
    1.0 - (1..=list_size).map(|k| (m as f64 - k as f64).max(0.0) / m as f64).product::<f64>()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuperpositionAttack {
    pub list_size: usize,
    pub state_power: f64,
    pub user1: SuperpositionAttackConfig,
    pub user2: SuperpositionAttackConfig,
}

impl SuperpositionAttack {
    pub fn estimate(
        c1: &SphericalCodebook,
        c2: &SphericalCodebook,
        list_size: usize,
        state_power: f64,
        opts: &EtaStarOptions,
    ) -> Result<Self> {
        Ok(Self {
            list_size,
            state_power,
            user1: SuperpositionAttackConfig::estimate(User::User1, c1, list_size, state_power, opts)?,
            user2: SuperpositionAttackConfig::estimate(User::User2, c2, list_size, state_power, opts)?,
        })
    }

    pub fn config(&self, user: User) -> &SuperpositionAttackConfig {
        match user {
            User::User1 => &self.user1,
            User::User2 => &self.user2,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuperpositionDraw {
    pub state: Vec<f64>,
    /// The user whose codebook was superposed.
    pub target: User,
    pub sampled: Vec<usize>,
    /// The sum was over the power budget and zero was sent instead.
    pub used_fallback: bool,
}

/// `sum_i x_{idx_i} - |idx| shift`.
pub fn shifted_sum(cb: &SphericalCodebook, idx: &[usize], shift: &[f64]) -> Vec<f64> {
    let mut s = vec![0.0; cb.blocklength()];
    for &i in idx {
        axpy(1.0, &cb.vectors[i], &mut s);
    }
    axpy(-(idx.len() as f64), shift, &mut s);
    s
}

/// A fair coin picks the target user; `L` codewords of that user are drawn
/// i.i.d. uniformly and `sum x_i - L u` is sent if it fits the state budget,
/// zero otherwise. The coin comes from its own stream.
pub fn superposition_attack_state(
    attack: &SuperpositionAttack,
    c1: &SphericalCodebook,
    c2: &SphericalCodebook,
    coin: &mut impl Rng,
    rng: &mut impl Rng,
) -> SuperpositionDraw {
    let target = if coin.random::<bool>() { User::User1 } else { User::User2 };
    let cb = match target {
        User::User1 => c1,
        User::User2 => c2,
    };
    let sampled: Vec<usize> = (0..attack.list_size).map(|_| rng.random_range(0..cb.len())).collect();
    let s = shifted_sum(cb, &sampled, &attack.config(target).shift);
    if norm2(&s) > cb.blocklength() as f64 * attack.state_power {
        SuperpositionDraw { state: vec![0.0; cb.blocklength()], target, sampled, used_fallback: true }
    } else {
        SuperpositionDraw { state: s, target, sampled, used_fallback: false }
    }
}

/// The `L + 1` codewords (transmitted plus sampled) are pairwise distinct and
/// every `L`-subset, shifted by `L u`, fits the state budget: each of them
/// could have been the transmitted one.
pub fn confusability_certificate(
    cb: &SphericalCodebook,
    shift: &[f64],
    sampled: &[usize],
    transmitted: usize,
    state_power: f64,
) -> bool {
    let mut all = vec![transmitted];
    all.extend_from_slice(sampled);
    for (i, &a) in all.iter().enumerate() {
        if all[..i].iter().any(|&b| cb.vectors[a] == cb.vectors[b]) {
            return false;
        }
    }
    let limit = cb.blocklength() as f64 * state_power;
    // leaving the transmitted word out reproduces the state computation exactly
    (0..all.len()).all(|skip| {
        let subset: Vec<usize> = all.iter().enumerate().filter(|&(i, _)| i != skip).map(|(_, &k)| k).collect();
        norm2(&shifted_sum(cb, &subset, shift)) <= limit
    })
}

#[cfg(test)]
mod tests {
    use super::super::codebook::spherical_codebook;
    use super::*;
    use crate::rng::{stream, Stream};
    use proptest::prelude::*;

    fn book(n: usize, m: usize, p: f64, seed: u64) -> SphericalCodebook {
        spherical_codebook(n, m, p, &mut stream(seed, Stream::Codebook, 0)).unwrap()
    }

    fn residual(gamma: f64, delta: f64, l: usize, eta: f64) -> f64 {
        (gamma / 2.0 + (l as f64 - 1.0) * (gamma * (eta + gamma / 2.0)).sqrt() - delta / 2.0).abs()
    }

    #[test]
    fn gamma_root_and_limits() {
        let g = compute_gamma(0.2, 2, 1.0).unwrap();
        assert!(g > 0.0 && g < 0.2);
        assert!(residual(g, 0.2, 2, 1.0) <= 1e-9);
        assert_eq!(compute_gamma(0.3, 1, 1.0).unwrap(), 0.3);
        assert_eq!(compute_gamma(1.7, 1, 0.8).unwrap(), 0.8);
        assert!(compute_gamma(0.0, 2, 1.0).is_err());
        assert!(compute_gamma(-1.0, 1, 1.0).is_err());
    }

    proptest! {
        #[test]
        fn gamma_is_capped_and_solves_the_root_equation(delta in 1e-4f64..5.0, l in 1usize..6, eta in 0.01f64..1.0) {
            let g = compute_gamma(delta, l, eta).unwrap();
            prop_assert!(g > 0.0 && g <= eta);
            if g < eta {
                prop_assert!(residual(g, delta, l, eta) <= 1e-9);
            }
        }
    }

    #[test]
    fn gaussian_jammer_power() {
        let (n, big_n, eta) = (10_000, 2.0, 0.5);
        let (s, rescaled) = gaussian_jammer_state(big_n, eta, n, &mut stream(1, Stream::Jammer, 0)).unwrap();
        assert!(!rescaled);
        let var = norm2(&s) / n as f64;
        assert!((var - (big_n - eta)).abs() <= 0.05 * (big_n - eta), "var {var}");
        for t in 0..200 {
            let (s, _) = gaussian_jammer_state(1.0, 1e-3, 8, &mut stream(2, Stream::Jammer, t)).unwrap();
            assert!(norm2(&s) <= 8.0);
        }
        let (quiet, _) = gaussian_jammer_state(1.0, 1.0 - 1e-10, 100, &mut stream(3, Stream::Jammer, 0)).unwrap();
        assert!(norm2(&quiet) / 100.0 < 1e-8);
        assert!(gaussian_jammer_state(1.0, 1.0, 4, &mut stream(0, Stream::Jammer, 0)).is_err());
    }

    #[test]
    fn origin_covers_a_spherical_code_at_one() {
        let cb = book(64, 128, 1.0, 4);
        let opts = EtaStarOptions { centers: vec![Center::Origin], ..EtaStarOptions::default() };
        let est = estimate_eta_star(&cb, &opts).unwrap();
        assert_eq!((est.eta_star, est.epsilon, est.center), (1.0, 1.0, Center::Origin));
        assert!(est.shift.iter().all(|&a| a == 0.0));
    }

    #[test]
    fn the_centroid_sees_finite_sample_clustering() {
        // at desk scale each codeword pulls the centroid toward itself, so a
        // ball around it covers 1% of the code slightly inside radius 1
        let cb = book(64, 128, 1.0, 4);
        let est = estimate_eta_star(&cb, &EtaStarOptions::default()).unwrap();
        assert_eq!(est.center, Center::Centroid);
        assert!(est.eta_star > 0.9 && est.eta_star < 1.0, "{}", est.eta_star);
        assert!(est.epsilon >= 0.01);
    }

    #[test]
    fn identical_codewords_collapse_to_a_point() {
        let v = book(10, 1, 1.0, 5).vectors[0].clone();
        let cb = SphericalCodebook { vectors: vec![v; 6], power: 1.0 };
        let est = estimate_eta_star(&cb, &EtaStarOptions::default()).unwrap();
        assert_eq!((est.eta_star, est.epsilon, est.center), (0.0, 1.0, Center::Centroid));
    }

    #[test]
    fn eta_star_matches_a_quantile_oracle() {
        let cb = book(50, 256, 1.0, 6);
        let opts = EtaStarOptions::default();
        let est = estimate_eta_star(&cb, &opts).unwrap();
        // the ceil(0.01 M)-th smallest distance, rounded up to the grid
        let need = (0.01f64 * 256.0).ceil() as usize;
        let oracle = [vec![0.0; 50], cb.centroid()]
            .iter()
            .map(|c| {
                let mut d: Vec<f64> = cb
                    .vectors
                    .iter()
                    .map(|x| x.iter().zip(c).map(|(a, b)| (a - b).powi(2)).sum::<f64>() / 50.0)
                    .collect();
                d.sort_by(f64::total_cmp);
                ((d[need - 1] - 1e-9) / 0.01).ceil() * 0.01
            })
            .fold(f64::INFINITY, f64::min);
        assert!((est.eta_star - oracle).abs() < 1e-9, "{} vs {oracle}", est.eta_star);
    }

    fn origin_attack(l: usize, big_n: f64, c1: &SphericalCodebook, c2: &SphericalCodebook) -> SuperpositionAttack {
        let opts = EtaStarOptions { centers: vec![Center::Origin], ..EtaStarOptions::default() };
        SuperpositionAttack::estimate(c1, c2, l, big_n, &opts).unwrap()
    }

    #[test]
    fn attack_requires_a_power_advantage() {
        let cb = book(8, 4, 1.0, 7);
        let opts = EtaStarOptions::default();
        assert!(SuperpositionAttackConfig::estimate(User::User1, &cb, 2, 2.0, &opts).is_err());
        let cfg = SuperpositionAttackConfig::estimate(User::User1, &cb, 2, 2.5, &opts).unwrap();
        assert!((cfg.delta - 0.25).abs() < 1e-12);
        assert!(residual(cfg.gamma, cfg.delta, 2, cfg.eta_star) <= 1e-9);
    }

    #[test]
    fn single_codeword_attack_replays_a_codeword() {
        let (c1, c2) = (book(20, 16, 1.0, 8), book(20, 16, 1.0, 9));
        let attack = origin_attack(1, 1.5, &c1, &c2);
        let mut seen = [0usize; 2];
        for t in 0..400 {
            let d = superposition_attack_state(
                &attack,
                &c1,
                &c2,
                &mut stream(10, Stream::Coin, t),
                &mut stream(10, Stream::Jammer, t),
            );
            assert!(!d.used_fallback);
            let cb = if d.target == User::User1 { &c1 } else { &c2 };
            assert_eq!(d.state, cb.vectors[d.sampled[0]]);
            seen[usize::from(d.target == User::User1)] += 1;
            // the transmitted word and the replayed one are interchangeable
            let other = (d.sampled[0] + 1) % 16;
            assert!(confusability_certificate(cb, &attack.user1.shift, &d.sampled, other, 1.5));
            assert!(!confusability_certificate(cb, &attack.user1.shift, &d.sampled, d.sampled[0], 1.5));
        }
        assert!(seen[0].abs_diff(seen[1]) < 60, "coin {seen:?}");
    }

    #[test]
    fn state_always_fits_the_budget() {
        let (c1, c2) = (book(16, 32, 1.0, 11), book(16, 32, 1.0, 12));
        for big_n in [2.1, 2.5, 4.0] {
            let attack = origin_attack(2, big_n, &c1, &c2);
            for t in 0..200 {
                let d = superposition_attack_state(
                    &attack,
                    &c1,
                    &c2,
                    &mut stream(13, Stream::Coin, t),
                    &mut stream(13, Stream::Jammer, t),
                );
                assert!(norm2(&d.state) <= 16.0 * big_n);
            }
        }
    }

    #[test]
    fn non_fallback_rate_beats_the_geometric_floor() {
        // L P (1 + delta) = N: the chain of norm bounds keeps most sums inside
        let (l, n) = (2, 64);
        let (c1, c2) = (book(n, 256, 1.0, 14), book(n, 256, 1.0, 15));
        let attack = SuperpositionAttack::estimate(&c1, &c2, l, 2.5, &EtaStarOptions::default()).unwrap();
        let (mut hits, mut total) = (0, 0);
        for t in 0..2000 {
            let d = superposition_attack_state(
                &attack,
                &c1,
                &c2,
                &mut stream(16, Stream::Coin, t),
                &mut stream(16, Stream::Jammer, t),
            );
            if d.target == User::User1 {
                total += 1;
                hits += usize::from(!d.used_fallback);
            }
        }
        let cfg = &attack.user1;
        let floor = (cfg.epsilon / 2.0).powi(l as i32) - concentration_defect(&c1, cfg) - 0.05;
        assert!(hits as f64 / total as f64 >= floor, "{hits}/{total} vs {floor}");
    }

    #[test]
    fn duplicates_void_the_certificate() {
        let cb = book(8, 4, 1.0, 17);
        assert!(!confusability_certificate(&cb, &[0.0; 8], &[1, 1], 0, 100.0));
        assert!(!confusability_certificate(&cb, &[0.0; 8], &[1, 2], 2, 100.0));
        assert!(confusability_certificate(&cb, &[0.0; 8], &[1, 2], 3, 100.0));
    }

    #[test]
    fn collision_probability_examples() {
        assert_eq!(collision_probability(10, 0), 0.0);
        assert!((collision_probability(128, 2) - (1.0 - 127.0 * 126.0 / (128.0 * 128.0))).abs() < 1e-15);
        assert_eq!(collision_probability(1, 1), 1.0);
    }
}
