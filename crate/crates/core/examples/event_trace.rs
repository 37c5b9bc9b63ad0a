//! Prints the solver's event log and per-phase statistics.

use capped_fisher::generate::{generate, MarketShape};
use capped_fisher::solve_max_revenue;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let market = generate(&MarketShape::new(4, 3, 12, 5))?;
    let solution = solve_max_revenue(&market)?;
    for rec in &solution.trace {
        let prices: Vec<String> = rec.prices.iter().map(ToString::to_string).collect();
        println!(
            "phase {} iteration {}: {:<10} x = {:<8} prices {prices:?}",
            rec.phase,
            rec.iteration,
            rec.kind.name(),
            rec.scale.to_string()
        );
    }
    let stats = &solution.stats;
    for (k, phase) in stats.phases.iter().enumerate() {
        println!(
            "phase {}: {} iterations, squared surplus norm {} -> {}",
            k + 1,
            phase.iterations,
            phase.start_norm2,
            phase.end_norm2
        );
    }
    println!("largest price numerator or denominator: {} bits", stats.max_price_bits);
    Ok(())
}
