//! Walks from the highest to the lowest equilibrium prices, printing every
//! intermediate equilibrium. Utilities stay fixed along the way.

use capped_fisher::rational::int;
use capped_fisher::{lowering_steps, solve_max_revenue, Extended, Market};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    // buyer 0 is capped at 1 and only likes good 0; buyer 1 prefers good 1
    // but would buy good 0 if it became cheap enough
    let market = Market::new(
        vec![int(4), int(2)],
        vec![Extended::Finite(int(1)), Extended::Infinite],
        vec![vec![int(1), int(0)], vec![int(1), int(2)]],
    )?;
    let top = solve_max_revenue(&market)?.equilibrium;
    for (k, eq) in lowering_steps(&market, &top)?.iter().enumerate() {
        let prices: Vec<String> = eq.prices.iter().map(ToString::to_string).collect();
        let utils: Vec<String> = eq.utilities.iter().map(ToString::to_string).collect();
        println!("step {k}: prices {prices:?} utilities {utils:?} revenue {}", eq.revenue());
    }
    Ok(())
}
