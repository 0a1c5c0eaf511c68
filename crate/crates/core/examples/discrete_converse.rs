//! A symmetrizing jammer against random constant-composition codes on the
//! xor channel: once the list is no larger than the symmetrizable graph, the
//! error rate stays above the combinatorial floor.

use avmac::channel::{library, InputDistribution};
use avmac::discrete_sim::{
    run_discrete_trials, symmetrizing_error_floor, symmetrizing_jammer, DecoderParams, DiscreteCodebookPair,
    JammerSpec,
};
use avmac::symmetrizability::{Mode, Symmetrizer, SymmetryRule};

fn main() -> avmac::Result<()> {
    let ch = library::binary_xor(0.6);
    let (n, m, w, seed) = (48, 64, 64, 1);
    let cb = DiscreteCodebookPair::generate(&ch, &InputDistribution::uniform(2, 2), n, m, w, seed)?;
    let sym = Symmetrizer::new(&ch, 4, SymmetryRule::AllEdgePairs)?;
    for edges in 2..=4 {
        let Some((jammer, cost)) = symmetrizing_jammer(&sym, Mode::Strong, &cb.composition, Some(edges))? else {
            println!("{edges} edges: no attack within budget");
            continue;
        };
        let JammerSpec::Symmetrizing { graph, .. } = &jammer else { unreachable!() };
        let floor = symmetrizing_error_floor(graph.i, graph.j, m, w);
        for list_size in [edges, edges + 2] {
            let params = DecoderParams { list_size, ..DecoderParams::default() };
            let s = run_discrete_trials(&ch, &cb, &jammer, &params, 1000, seed)?.summary;
            // the floor only binds when the list cannot hold every spoofed pair
            let floor = if list_size <= edges { format!("{floor:.3}") } else { "-".into() };
            println!(
                "{}x{} graph (cost {cost:.3}), L = {list_size}: error {:.3} +- {:.3}, floor {floor}, fallback {:.3}",
                graph.i, graph.j, s.error_rate, s.std_error, s.fallback_rate
            );
        }
    }
    Ok(())
}
