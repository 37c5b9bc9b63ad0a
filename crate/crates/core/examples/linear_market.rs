//! With every cap unbounded the model is the classic linear Fisher market,
//! and the solver returns its unique prices.

use capped_fisher::rational::int;
use capped_fisher::{solve_max_revenue, Extended, Market};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let capped = Market::new(
        vec![int(3), int(1)],
        vec![Extended::Finite(int(1)), Extended::Infinite],
        vec![vec![int(5), int(1)], vec![int(2), int(1)]],
    )?;
    let linear = capped.linear();
    let a = solve_max_revenue(&capped)?.equilibrium;
    let b = solve_max_revenue(&linear)?.equilibrium;
    println!("capped prices: {} {}", a.prices[0], a.prices[1]);
    println!("linear prices: {} {}", b.prices[0], b.prices[1]);
    Ok(())
}
