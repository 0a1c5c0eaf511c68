//! Monte Carlo harness for the Gaussian channel `z = x + y + s + g`:
//! spherical codes, the minimum-distance list decoder, and the jammers.

pub mod attack;
pub mod codebook;

use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::discrete_sim::SimulationSummary;
use crate::error::{Error, Result};
use crate::rng::{stream, Stream};

pub use attack::{
    collision_probability, compute_gamma, concentration_defect, confusability_certificate, coverage,
    estimate_eta_star, gaussian_jammer_state, shifted_sum, superposition_attack_state, Center, EtaStarEstimate,
    EtaStarOptions, SuperpositionAttack, SuperpositionAttackConfig, SuperpositionDraw, User,
};
pub use codebook::{min_distance_list_decode, spherical_codebook, MinDistanceDecoder, SphericalCodebook};

use codebook::{axpy, norm2};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GaussianParams {
    pub p1: f64,
    pub p2: f64,
    /// State power budget `N`.
    pub state_power: f64,
    pub sigma2: f64,
    pub n: usize,
    pub list_size: usize,
    /// Codebook sizes; the rates are `log2(M)/n` and `log2(W)/n`.
    pub m: usize,
    pub w: usize,
}

impl GaussianParams {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("P1", self.p1), ("P2", self.p2), ("N", self.state_power)] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::InvalidParameter(format!("{name} must be positive, got {v}")));
            }
        }
        if !(self.sigma2 >= 0.0 && self.sigma2.is_finite()) {
            return Err(Error::InvalidParameter(format!("noise variance must be nonnegative, got {}", self.sigma2)));
        }
        if self.n < 2 || self.list_size == 0 || self.m == 0 || self.w == 0 {
            return Err(Error::InvalidParameter("need n >= 2, L >= 1 and nonempty codebooks".into()));
        }
        Ok(())
    }

    pub fn rates(&self) -> (f64, f64) {
        ((self.m as f64).log2() / self.n as f64, (self.w as f64).log2() / self.n as f64)
    }

    /// The rate bounds with the state treated as extra noise of power `N`.
    pub fn rate_bounds(&self) -> GaussianRateBounds {
        gaussian_rate_bounds(self.p1, self.p2, self.state_power, self.sigma2)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GaussianRateBounds {
    pub r1: f64,
    pub r2: f64,
    pub r12: f64,
}

impl GaussianRateBounds {
    /// Strict membership of `(r1, r2)` in the pentagon scaled by `fraction`.
    pub fn contains(&self, r1: f64, r2: f64, fraction: f64) -> bool {
        r1 < fraction * self.r1 && r2 < fraction * self.r2 && r1 + r2 < fraction * self.r12
    }
}

/// `1/2 log2(1 + P/(N + sigma^2))` for each user and for the sum.
pub fn gaussian_rate_bounds(p1: f64, p2: f64, state_power: f64, sigma2: f64) -> GaussianRateBounds {
    let noise = state_power + sigma2;
    let c = |p: f64| 0.5 * (1.0 + p / noise).log2();
    GaussianRateBounds { r1: c(p1), r2: c(p2), r12: c(p1 + p2) }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum GaussianJammer {
    None,
    /// I.i.d. Gaussian state of power `N - eta`.
    Gaussian { eta: f64 },
    /// The superposition attack with shifts estimated from the codebooks.
    Superposition { options: EtaStarOptions },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GaussianTrialReport {
    pub trial: usize,
    pub sent: (usize, usize),
    pub decoded: Vec<(usize, usize)>,
    pub error: bool,
    /// `||s||^2 / n`.
    pub state_power: f64,
    pub used_fallback: bool,
    pub target: Option<User>,
    pub certificate: bool,
    /// On certificate trials: re-decoding with the transmitted and a sampled
    /// codeword swapped gave a different list.
    pub symmetry_violation: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GaussianSummary {
    #[serde(flatten)]
    pub base: SimulationSummary,
    pub certificate_rate: f64,
    pub symmetry_checks: usize,
    pub symmetry_violations: usize,
}

/// In-run ingredients of the converse floors for the superposition attack.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConverseFloor {
    pub epsilon: [f64; 2],
    pub delta_prime: [f64; 2],
    pub delta_n: [f64; 2],
    /// Mean over the two coin outcomes of
    /// `(eps/2)^(L+1) - (L+1)L/2 delta' - delta_n`.
    pub certificate_floor: f64,
}

impl ConverseFloor {
    pub fn new(attack: &SuperpositionAttack, c1: &SphericalCodebook, c2: &SphericalCodebook) -> Self {
        let l = attack.list_size;
        let epsilon = [attack.user1.epsilon, attack.user2.epsilon];
        let delta_prime = [concentration_defect(c1, &attack.user1), concentration_defect(c2, &attack.user2)];
        let delta_n = [collision_probability(c1.len(), l), collision_probability(c2.len(), l)];
        let pairs = ((l + 1) * l / 2) as f64;
        let certificate_floor = (0..2)
            .map(|k| (epsilon[k] / 2.0).powi(l as i32 + 1) - pairs * delta_prime[k] - delta_n[k])
            .sum::<f64>()
            / 2.0;
        Self { epsilon, delta_prime, delta_n, certificate_floor }
    }

    /// `certRate / (2 (L+1)) - 3 sigma`: at least half of the certificate
    /// trials leave the decoder unable to tell `L + 1` hypotheses apart.
    pub fn error_floor(summary: &GaussianSummary, list_size: usize) -> f64 {
        0.5 * summary.certificate_rate / (list_size + 1) as f64 - 3.0 * summary.base.std_error
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GaussianRun {
    pub summary: GaussianSummary,
    pub attack: Option<SuperpositionAttack>,
    pub floor: Option<ConverseFloor>,
    pub reports: Vec<GaussianTrialReport>,
}

/// Draws the two codebooks of a run.
pub fn gaussian_codebooks(params: &GaussianParams, seed: u64) -> Result<(SphericalCodebook, SphericalCodebook)> {
    params.validate()?;
    Ok((
        spherical_codebook(params.n, params.m, params.p1, &mut stream(seed, Stream::Codebook, 0))?,
        spherical_codebook(params.n, params.w, params.p2, &mut stream(seed, Stream::Codebook, 1))?,
    ))
}

fn sum_output(x: &[f64], y: &[f64], s: &[f64], g: &[f64]) -> Vec<f64> {
    let mut z = g.to_vec();
    axpy(1.0, x, &mut z);
    axpy(1.0, y, &mut z);
    axpy(1.0, s, &mut z);
    z
}

/// Runs independent trials against one codebook pair: a uniform message pair,
/// an oblivious state, Gaussian noise and minimum-distance list decoding.
pub fn run_gaussian_trials(params: &GaussianParams, jammer: &GaussianJammer, trials: usize, seed: u64) -> Result<GaussianRun> {
    if trials == 0 {
        return Err(Error::InvalidParameter("at least one trial is required".into()));
    }
    let (c1, c2) = gaussian_codebooks(params, seed)?;
    let attack = match jammer {
        GaussianJammer::Superposition { options } => {
            Some(SuperpositionAttack::estimate(&c1, &c2, params.list_size, params.state_power, options)?)
        }
        GaussianJammer::Gaussian { eta } if !(*eta > 0.0 && *eta < params.state_power) => {
            return Err(Error::InvalidParameter(format!("need 0 < eta < N, got {eta}")));
        }
        _ => None,
    };
    let decoder = MinDistanceDecoder::new(&c1, &c2);
    let n = params.n;
    let budget = n as f64 * params.state_power;
    let sd = params.sigma2.sqrt();
    let reports: Vec<GaussianTrialReport> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let mut msg_rng = stream(seed, Stream::Messages, t as u64);
            let sent = (msg_rng.random_range(0..params.m), msg_rng.random_range(0..params.w));
            let mut jam_rng = stream(seed, Stream::Jammer, t as u64);
            let (state, used_fallback, draw) = match (jammer, &attack) {
                (GaussianJammer::Superposition { .. }, Some(a)) => {
                    let d = superposition_attack_state(a, &c1, &c2, &mut stream(seed, Stream::Coin, t as u64), &mut jam_rng);
                    (d.state.clone(), d.used_fallback, Some(d))
                }
                (GaussianJammer::Gaussian { eta }, _) => {
                    let (s, rescaled) = gaussian_jammer_state(params.state_power, *eta, n, &mut jam_rng)
                        .expect("eta was checked above");
                    (s, rescaled, None)
                }
                _ => (vec![0.0; n], false, None),
            };
            let power = norm2(&state);
            assert!(power <= budget, "state power budget violated: {power} > {budget}");
            let mut noise_rng = stream(seed, Stream::Noise, t as u64);
            let g: Vec<f64> = (0..n).map(|_| sd * noise_rng.sample::<f64, _>(StandardNormal)).collect();
            let z = sum_output(&c1.vectors[sent.0], &c2.vectors[sent.1], &state, &g);
            let decoded = decoder.decode(&z, params.list_size);
            let error = !decoded.contains(&sent);
            let (mut certificate, mut symmetry_violation) = (false, false);
            if let (Some(d), Some(a)) = (&draw, &attack) {
                let (cb, own) = match d.target {
                    User::User1 => (&c1, sent.0),
                    User::User2 => (&c2, sent.1),
                };
                certificate =
                    confusability_certificate(cb, &a.config(d.target).shift, &d.sampled, own, params.state_power);
                if certificate {
                    // swap the transmitted codeword with the first sampled one
                    let mut swapped_set = d.sampled.clone();
                    swapped_set[0] = own;
                    let s2 = shifted_sum(cb, &swapped_set, &a.config(d.target).shift);
                    let swapped = match d.target {
                        User::User1 => (d.sampled[0], sent.1),
                        User::User2 => (sent.0, d.sampled[0]),
                    };
                    let z2 = sum_output(&c1.vectors[swapped.0], &c2.vectors[swapped.1], &s2, &g);
                    symmetry_violation = decoder.decode(&z2, params.list_size) != decoded;
                }
            }
            GaussianTrialReport {
                trial: t,
                sent,
                decoded,
                error,
                state_power: power / n as f64,
                used_fallback,
                target: draw.map(|d| d.target),
                certificate,
                symmetry_violation,
            }
        })
        .collect();
    let errors = reports.iter().filter(|r| r.error).count();
    let fallbacks = reports.iter().filter(|r| r.used_fallback).count();
    let lists = reports.iter().map(|r| r.decoded.len()).sum();
    let certs = reports.iter().filter(|r| r.certificate).count();
    let summary = GaussianSummary {
        base: SimulationSummary::from_counts(trials, errors, fallbacks, lists),
        certificate_rate: certs as f64 / trials as f64,
        symmetry_checks: certs,
        symmetry_violations: reports.iter().filter(|r| r.symmetry_violation).count(),
    };
    let floor = attack.as_ref().map(|a| ConverseFloor::new(a, &c1, &c2));
    Ok(GaussianRun { summary, attack, floor, reports })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(state_power: f64, sigma2: f64, m: usize, w: usize, list_size: usize) -> GaussianParams {
        GaussianParams { p1: 1.0, p2: 1.0, state_power, sigma2, n: 32, list_size, m, w }
    }

    #[test]
    fn rate_bound_values() {
        let b = gaussian_rate_bounds(1.0, 1.0, 0.2, 0.3);
        assert!((b.r1 - 0.5 * 3f64.log2()).abs() < 1e-12);
        assert!((b.r1 - 0.7925).abs() < 1e-4);
        assert!((b.r12 - 0.5 * 5f64.log2()).abs() < 1e-12);
        assert!(b.contains(0.1, 0.1, 0.9));
        assert!(!b.contains(0.72, 0.0, 0.9));
    }

    #[test]
    fn quiet_channel_never_errs() {
        let run = run_gaussian_trials(&params(0.5, 1e-6, 4, 4, 1), &GaussianJammer::None, 100, 1).unwrap();
        assert_eq!(run.summary.base.errors, 0);
        assert!(run.attack.is_none() && run.floor.is_none());
    }

    #[test]
    fn strong_users_beat_the_gaussian_jammer() {
        let p = GaussianParams { n: 64, ..params(0.2, 0.3, 16, 16, 2) };
        let run = run_gaussian_trials(&p, &GaussianJammer::Gaussian { eta: 0.01 }, 200, 2).unwrap();
        assert!(run.summary.base.error_rate <= 0.05, "{:?}", run.summary);
        assert!(run.reports.iter().all(|r| r.state_power <= 0.2));
    }

    #[test]
    fn superposition_attack_confuses_the_decoder() {
        let p = GaussianParams { n: 48, ..params(2.5, 0.3, 64, 64, 2) };
        let run = run_gaussian_trials(&p, &GaussianJammer::Superposition { options: EtaStarOptions::default() }, 300, 3)
            .unwrap();
        let s = &run.summary;
        assert!(s.certificate_rate >= run.floor.as_ref().unwrap().certificate_floor);
        assert!(s.certificate_rate > 0.5, "{s:?}");
        assert!(s.base.error_rate >= ConverseFloor::error_floor(s, 2), "{s:?}");
        assert_eq!(s.symmetry_violations, 0);
        assert!(run.reports.iter().all(|r| r.state_power <= 2.5));
    }

    #[test]
    fn runs_are_reproducible_and_validated() {
        let p = params(2.5, 0.3, 8, 8, 2);
        let j = GaussianJammer::Superposition { options: EtaStarOptions::default() };
        assert_eq!(run_gaussian_trials(&p, &j, 20, 9).unwrap(), run_gaussian_trials(&p, &j, 20, 9).unwrap());
        assert!(run_gaussian_trials(&p, &j, 0, 9).is_err());
        assert!(run_gaussian_trials(&params(1.5, 0.3, 8, 8, 2), &j, 5, 9).is_err());
        assert!(run_gaussian_trials(&p, &GaussianJammer::Gaussian { eta: 3.0 }, 5, 9).is_err());
        assert!(run_gaussian_trials(&GaussianParams { n: 1, ..p }, &GaussianJammer::None, 5, 9).is_err());
    }
}
