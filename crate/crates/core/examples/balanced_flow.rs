//! Computes a balanced flow, one that spreads the unmet demand (surplus)
//! over goods as evenly as the edges allow, and checks it against the
//! independent oracle.

use capped_fisher::flow::{balanced_flow, is_balanced, max_flow, FlowNetwork};
use capped_fisher::oracle::equalize_balanced;
use capped_fisher::rational::int;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    // buyer 0 reaches both goods, buyer 1 only good 1
    let net = FlowNetwork::new(vec![int(3), int(1)], vec![int(4), int(4)], vec![(0, 0), (0, 1), (1, 1)])?;
    let plain = max_flow(&net);
    let balanced = balanced_flow(&net)?;
    let oracle = equalize_balanced(&net)?;
    println!("max flow surplus:      {:?}", strings(&plain.surplus(&net)));
    println!("balanced flow surplus: {:?}", strings(&balanced.surplus(&net)));
    println!("oracle surplus:        {:?}", strings(&oracle.surplus(&net)));
    println!("certified balanced: {}", is_balanced(&net, &balanced));
    Ok(())
}

fn strings<T: ToString>(xs: &[T]) -> Vec<String> {
    xs.iter().map(ToString::to_string).collect()
}
