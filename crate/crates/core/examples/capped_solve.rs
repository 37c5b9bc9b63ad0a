//! Solves a two-buyer market where the first buyer's cap binds, and prints
//! prices, bundles and how much of each budget is actually spent.

use capped_fisher::rational::int;
use capped_fisher::{solve_max_revenue, Extended, Market};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let market = Market::new(
        vec![int(3), int(1)],
        vec![Extended::Finite(int(1)), Extended::Infinite],
        vec![vec![int(5), int(1)], vec![int(2), int(1)]],
    )?;
    let eq = solve_max_revenue(&market)?.equilibrium;

    for (j, p) in eq.prices.iter().enumerate() {
        println!("price of good {j}: {p}");
    }
    for i in 0..market.num_buyers() {
        println!(
            "buyer {i}: bundle {:?}, utility {}, spends {} of {}{}",
            eq.allocation[i].iter().map(ToString::to_string).collect::<Vec<_>>(),
            eq.utilities[i],
            eq.active_budgets[i],
            market.budget(i),
            if eq.capped[i] { " (capped)" } else { "" }
        );
    }
    println!("revenue: {}", eq.revenue());
    Ok(())
}
