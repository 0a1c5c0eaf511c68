//! Weak and strong symmetrizability orders of the binary xor channel as the
//! state budget grows.

use avmac::channel::{library, InputDistribution};
use avmac::symmetrizability::{Mode, Symmetrizer, SymmetryRule};

fn main() -> avmac::Result<()> {
    let input = InputDistribution::uniform(2, 2);
    println!("lambda  weak  strong  witness");
    for lambda in [0.0, 0.2, 0.4, 0.6, 1.0] {
        let sym = Symmetrizer::new(&library::binary_xor(lambda), 4, SymmetryRule::AllEdgePairs)?;
        let weak = sym.report(&input, Mode::Weak)?;
        let strong = sym.report(&input, Mode::Strong)?;
        let witness = match (&strong.witness_graph, strong.witness_cost) {
            (Some(g), Some(c)) => format!("{}x{} graph, {} edges, cost {c:.3}", g.i, g.j, g.num_edges()),
            _ => "-".into(),
        };
        println!("{lambda:>6.1}  {:>4}  {:>6}  {witness}", weak.order, strong.order);
    }
    Ok(())
}
