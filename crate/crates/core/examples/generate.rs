//! Generates a random instance, prints it as JSON and solves it.

use capped_fisher::generate::{generate, MarketShape};
use capped_fisher::io::{equilibrium_to_json, instance_to_json};
use capped_fisher::solve_max_revenue;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let seed = std::env::args().nth(1).map(|s| s.parse()).transpose()?.unwrap_or(1);
    let market = generate(&MarketShape::new(3, 3, 9, seed))?;
    println!("{}", instance_to_json(&market));
    println!("{}", equilibrium_to_json(&solve_max_revenue(&market)?.equilibrium));
    Ok(())
}
