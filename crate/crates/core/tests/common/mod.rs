#![allow(dead_code)]

use capped_fisher::flow::FlowNetwork;
use capped_fisher::generate::{generate, MarketShape};
use capped_fisher::rational::{int, ratio, Rational};
use capped_fisher::{Equilibrium, Extended, Market};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn example1() -> Market {
    Market::new(
        vec![int(3), int(1)],
        vec![Extended::Finite(int(1)), Extended::Infinite],
        vec![vec![int(5), int(1)], vec![int(2), int(1)]],
    )
    .unwrap()
}

pub fn example2() -> Market {
    Market::new(
        vec![int(1), int(1)],
        vec![Extended::Finite(int(1)), Extended::Infinite],
        vec![vec![int(1), int(1)], vec![int(0), int(1)]],
    )
    .unwrap()
}

pub fn identical_buyers() -> Market {
    Market::new(
        vec![int(5), int(5)],
        vec![Extended::Finite(int(1)), Extended::Finite(int(1))],
        vec![vec![int(1), int(1)], vec![int(1), int(1)]],
    )
    .unwrap()
}

/// Both goods at price `p`, each buyer holding half of each.
pub fn identical_at(p: i64) -> Equilibrium {
    let h = ratio(1, 2);
    Equilibrium::from_allocation(
        &identical_buyers(),
        vec![int(p), int(p)],
        vec![vec![h.clone(), h.clone()], vec![h.clone(), h]],
    )
}

/// Random market with `1..=max_side` buyers and goods and values up to
/// `1..=max_value`; about a fifth of the caps are unbounded.
pub fn random_market(seed: u64, max_side: usize, max_value: u32) -> Market {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
    let shape = MarketShape {
        unbounded_share: 0.2,
        ..MarketShape::new(
            rng.gen_range(1..=max_side),
            rng.gen_range(1..=max_side),
            rng.gen_range(1..=max_value),
            seed,
        )
    };
    generate(&shape).unwrap()
}

/// A network whose budgets can all be routed: random edges carry random
/// flows, buyers' budgets are their outflow and prices exceed the inflow by
/// a random surplus.
pub fn random_saturable_network(seed: u64) -> FlowNetwork {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.gen_range(1..=5);
    let m = rng.gen_range(1..=5);
    let mut edges = Vec::new();
    let mut budgets = vec![Rational::from_integer(0.into()); n];
    let mut inflow = vec![Rational::from_integer(0.into()); m];
    for i in 0..n {
        for j in 0..m {
            if rng.gen_bool(0.45) {
                edges.push((i, j));
                let f = ratio(rng.gen_range(0..=12), rng.gen_range(1..=4));
                budgets[i] += &f;
                inflow[j] += &f;
            }
        }
    }
    let prices = inflow
        .into_iter()
        .map(|f| f + ratio(rng.gen_range(0..=8), rng.gen_range(1..=3)))
        .collect();
    FlowNetwork::new(budgets, prices, edges).unwrap()
}

/// Markets with up to `max_side` buyers and goods, integer values up to
/// `max_value`, some unbounded caps and possibly buyers or goods with no
/// positive utility at all.
pub fn market_strategy(max_side: usize, max_value: i64) -> impl proptest::strategy::Strategy<Value = Market> {
    use proptest::prelude::*;
    (1..=max_side, 1..=max_side).prop_flat_map(move |(n, m)| {
        let row = proptest::collection::vec(prop_oneof![1 => Just(0i64), 2 => 1..=max_value], m);
        let buyer = (1..=max_value, prop_oneof![1 => Just(None), 3 => (1..=max_value).prop_map(Some)], row);
        proptest::collection::vec(buyer, n).prop_map(|buyers| {
            let budgets = buyers.iter().map(|b| int(b.0)).collect();
            let caps = buyers
                .iter()
                .map(|b| b.1.map_or(Extended::Infinite, |c| Extended::Finite(int(c))))
                .collect();
            let utilities = buyers.iter().map(|b| b.2.iter().map(|&u| int(u)).collect()).collect();
            Market::new(budgets, caps, utilities).unwrap()
        })
    })
}
