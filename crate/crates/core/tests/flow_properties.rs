mod common;

use std::collections::BTreeSet;

use capped_fisher::flow::{balanced_flow, is_balanced, max_flow, min_cut, residual_reach, Flow};
use capped_fisher::oracle::{balanced_surplus_targets, equalize_balanced, equalize_from};
use proptest::prelude::*;

use common::random_saturable_network;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn balanced_flow_matches_the_oracle(seed in any::<u64>()) {
        let net = random_saturable_network(seed);
        let ours = balanced_flow(&net).unwrap();
        prop_assert!(is_balanced(&net, &ours));
        prop_assert_eq!(ours.surplus(&net), balanced_surplus_targets(&net));
        let theirs = equalize_balanced(&net).unwrap();
        prop_assert_eq!(ours.surplus(&net), theirs.surplus(&net));
    }

    #[test]
    fn rebalancing_a_balanced_flow_changes_nothing(seed in any::<u64>()) {
        let net = random_saturable_network(seed);
        let ours = balanced_flow(&net).unwrap();
        prop_assert_eq!(equalize_from(&net, ours.clone()).unwrap(), ours);
    }

    #[test]
    fn max_flow_equals_min_cut(seed in any::<u64>()) {
        let net = random_saturable_network(seed);
        let flow = max_flow(&net);
        prop_assert!(flow.check_feasible(&net).is_ok());
        let cut = min_cut(&net, &flow).unwrap();
        prop_assert_eq!(cut.capacity, flow.value());
        prop_assert_eq!(flow.value(), net.total_budget());
    }

    /// Goods that reach a good of maximal surplus share that surplus.
    #[test]
    fn reach_of_the_top_good_is_level(seed in any::<u64>()) {
        let net = random_saturable_network(seed);
        let flow = balanced_flow(&net).unwrap();
        let r = flow.surplus(&net);
        let top = r.iter().max().unwrap().clone();
        let j = r.iter().position(|v| v == &top).unwrap();
        for k in residual_reach(&net, &flow, &BTreeSet::from([j])) {
            prop_assert_eq!(&r[k], &top);
        }
    }
}

#[test]
fn zero_flow_is_not_balanced_when_budgets_exist() {
    for seed in 0..20 {
        let net = random_saturable_network(seed);
        let zero = Flow::zero(&net);
        assert_eq!(is_balanced(&net, &zero), net.total_budget() == num_traits::Zero::zero());
    }
}
