//! Worst-case i.i.d. state laws for the xor channel: the sum-rate term
//! approaches 1 - h(lambda) as the budget tightens.

use avmac::channel::{library, InputDistribution};
use avmac::dist::binary_entropy;
use avmac::region::{worst_case_jammer, Objective};

fn main() -> avmac::Result<()> {
    let input = InputDistribution::uniform(2, 2);
    for lambda in [0.05, 0.11, 0.25, 0.5] {
        let ch = library::binary_xor(lambda);
        let sum = worst_case_jammer(&ch, &input, Objective::Sum)?;
        let r1 = worst_case_jammer(&ch, &input, Objective::R1)?;
        println!(
            "lambda {lambda:.2}: sum {:.6} (1 - h = {:.6}), R1 {:.6}, P(s=1) = {:.4}, {} iterations",
            sum.value,
            1.0 - binary_entropy(lambda),
            r1.value,
            sum.witness.row(0)[1],
            sum.iterations
        );
    }
    Ok(())
}
