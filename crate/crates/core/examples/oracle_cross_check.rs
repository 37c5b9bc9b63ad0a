//! Compares exact utilities with a floating-point convex-program solution on
//! a few generated markets.

use capped_fisher::generate::{generate, MarketShape};
use capped_fisher::oracle::solve_eg_numeric;
use capped_fisher::solve_max_revenue;
use num_traits::ToPrimitive;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for seed in 0..5 {
        let market = generate(&MarketShape::new(4, 4, 10, seed))?;
        let exact = solve_max_revenue(&market)?.equilibrium;
        let approx = solve_eg_numeric(&market, 1e-9)?;
        let worst = exact
            .utilities
            .iter()
            .zip(&approx.utilities)
            .map(|(u, v)| {
                let u = u.to_f64().unwrap();
                (u - v).abs() / u.abs().max(f64::MIN_POSITIVE)
            })
            .fold(0.0, f64::max);
        println!("seed {seed}: worst relative error {worst:.2e} after {} Newton steps", approx.newton_steps);
    }
    Ok(())
}
