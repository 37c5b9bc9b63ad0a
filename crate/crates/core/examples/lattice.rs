//! Classifies goods by comparing two equilibria and combines them into their
//! meet (pointwise lower prices) and join (pointwise higher prices).

use capped_fisher::rational::int;
use capped_fisher::{join, meet, min_revenue, partition, solve_max_revenue, verify, Extended, Market};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let market = Market::new(
        vec![int(1), int(1)],
        vec![Extended::Finite(int(1)), Extended::Infinite],
        vec![vec![int(1), int(1)], vec![int(0), int(1)]],
    )?;
    let high = solve_max_revenue(&market)?.equilibrium;
    let low = min_revenue(&market, &high)?;

    let parts = partition(&market, &low, &high)?;
    println!("equal prices on {:?}, lower in the first on {:?}", parts.equal, parts.lower);

    let m = meet(&market, &high, &low)?;
    let j = join(&market, &low, &high)?;
    println!("meet prices {:?}, verified: {}", strings(&m.prices), verify(&market, &m)?.all_ok());
    println!("join prices {:?}, verified: {}", strings(&j.prices), verify(&market, &j)?.all_ok());
    Ok(())
}

fn strings<T: ToString>(xs: &[T]) -> Vec<String> {
    xs.iter().map(ToString::to_string).collect()
}
