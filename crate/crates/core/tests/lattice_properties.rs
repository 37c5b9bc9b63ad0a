mod common;

use capped_fisher::rational::int;
use capped_fisher::{join, lowering_steps, meet, min_revenue, partition, solve_max_revenue, verify, Equilibrium, Market};
use proptest::prelude::*;

use common::{example2, identical_at, identical_buyers, market_strategy};

/// Top, bottom and every intermediate equilibrium met while lowering.
fn chain(market: &Market) -> Vec<Equilibrium> {
    let top = solve_max_revenue(market).unwrap().equilibrium;
    lowering_steps(market, &top).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(150))]

    #[test]
    fn every_lowering_step_is_an_equilibrium(market in market_strategy(5, 10)) {
        let steps = chain(&market);
        for pair in steps.windows(2) {
            prop_assert!(pair[1].prices.iter().zip(&pair[0].prices).all(|(a, b)| a <= b));
        }
        for eq in &steps {
            prop_assert!(verify(&market, eq).unwrap().all_ok());
            prop_assert_eq!(&eq.utilities, &steps[0].utilities);
        }
    }

    #[test]
    fn min_revenue_is_idempotent(market in market_strategy(5, 10)) {
        let top = solve_max_revenue(&market).unwrap().equilibrium;
        let low = min_revenue(&market, &top).unwrap();
        prop_assert_eq!(min_revenue(&market, &low).unwrap(), low);
    }

    #[test]
    fn lattice_laws(market in market_strategy(4, 8), picks in (0usize..8, 0usize..8, 0usize..8)) {
        let steps = chain(&market);
        let pick = |k: usize| &steps[k % steps.len()];
        let (a, b, c) = (pick(picks.0), pick(picks.1), pick(picks.2));
        let m = |x: &Equilibrium, y: &Equilibrium| meet(&market, x, y).unwrap();
        let j = |x: &Equilibrium, y: &Equilibrium| join(&market, x, y).unwrap();

        prop_assert_eq!(&m(a, b).prices, &m(b, a).prices);
        prop_assert_eq!(&j(a, b).prices, &j(b, a).prices);
        prop_assert_eq!(&m(&m(a, b), c).prices, &m(a, &m(b, c)).prices);
        prop_assert_eq!(&j(&j(a, b), c).prices, &j(a, &j(b, c)).prices);
        prop_assert_eq!(&m(a, &j(a, b)).prices, &a.prices);
        prop_assert_eq!(&j(a, &m(a, b)).prices, &a.prices);
        for (x, y) in a.prices.iter().zip(&b.prices).zip(&m(a, b).prices).map(|((p, q), r)| (p.min(q), r)) {
            prop_assert_eq!(x, y);
        }
    }

    #[test]
    fn partition_classes_cover_the_goods(market in market_strategy(5, 10)) {
        let steps = chain(&market);
        let (top, low) = (steps.first().unwrap(), steps.last().unwrap());
        let parts = partition(&market, top, low).unwrap();
        prop_assert!(parts.lower.is_empty());
        prop_assert_eq!(parts.equal.len() + parts.higher.len(), market.num_goods());
    }
}

#[test]
fn identical_buyers_meet_and_min() {
    let market = identical_buyers();
    let m = meet(&market, &identical_at(5), &identical_at(2)).unwrap();
    assert_eq!(m.prices, vec![int(2), int(2)]);
    assert!(verify(&market, &m).unwrap().all_ok());
    let low = min_revenue(&market, &identical_at(5)).unwrap();
    assert_eq!(low.prices, vec![int(0), int(0)]);
}

#[test]
fn example2_min_is_below_max() {
    let market = example2();
    let top = solve_max_revenue(&market).unwrap().equilibrium;
    let low = min_revenue(&market, &top).unwrap();
    assert_eq!(join(&market, &low, &top).unwrap(), top);
    assert_eq!(meet(&market, &top, &low).unwrap(), low);
}
