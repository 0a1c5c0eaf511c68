//! Inner and outer list-decoding regions of the shifted adder for growing
//! list sizes.

use avmac::channel::library;
use avmac::region::{regions, Bound, RegionOptions};

fn main() -> avmac::Result<()> {
    let ch = library::shifted_adder(0.3);
    let opts = RegionOptions::new(0.1, 1);
    for list_size in 1..=3 {
        for r in regions(&ch, list_size, opts, &[Bound::Inner, Bound::Outer])? {
            let sum = r.boundary.iter().map(|p| p.0 + p.1).fold(0.0, f64::max);
            println!(
                "L = {list_size} {:?}: {} of {} inputs admitted, max sum rate {sum:.4}, frontier {:?}",
                r.bound,
                r.pentagons.len(),
                r.grid_inputs,
                r.boundary.iter().map(|p| (round(p.0), round(p.1))).collect::<Vec<_>>()
            );
        }
    }
    Ok(())
}

fn round(v: f64) -> f64 {
    (v * 1e4).round() / 1e4
}
