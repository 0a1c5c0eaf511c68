//! Spherical codes on the Gaussian channel: a weak i.i.d. jammer versus the
//! superposition attack when the state power exceeds L P.

use avmac::gaussian_sim::{run_gaussian_trials, ConverseFloor, EtaStarOptions, GaussianJammer, GaussianParams};

fn main() -> avmac::Result<()> {
    let quiet = GaussianParams { p1: 1.0, p2: 1.0, state_power: 0.2, sigma2: 0.3, n: 100, list_size: 2, m: 128, w: 128 };
    let b = quiet.rate_bounds();
    let run = run_gaussian_trials(&quiet, &GaussianJammer::Gaussian { eta: 0.01 }, 500, 1)?;
    println!(
        "N = 0.2: rate bounds ({:.4}, {:.4}, {:.4}), list error {:.4}",
        b.r1, b.r2, b.r12, run.summary.base.error_rate
    );

    let loud = GaussianParams { state_power: 2.5, n: 64, ..quiet };
    let jammer = GaussianJammer::Superposition { options: EtaStarOptions::default() };
    let run = run_gaussian_trials(&loud, &jammer, 1000, 1)?;
    let (attack, floor) = (run.attack.as_ref().unwrap(), run.floor.as_ref().unwrap());
    for cfg in [&attack.user1, &attack.user2] {
        println!(
            "{:?}: eta* {:.3}, epsilon {:.3}, gamma {:.3}, delta {:.3}",
            cfg.target, cfg.eta_star, cfg.epsilon, cfg.gamma, cfg.delta
        );
    }
    let s = &run.summary;
    println!(
        "N = 2.5: error {:.4} (floor {:.4}), certificates {:.4} (floor {:.4}), symmetry violations {}",
        s.base.error_rate,
        ConverseFloor::error_floor(s, loud.list_size),
        s.certificate_rate,
        floor.certificate_floor,
        s.symmetry_violations
    );
    Ok(())
}
