use std::collections::BTreeSet;

use num_traits::{One, Signed, Zero};

use super::maxflow::Bipartite;
use super::{FlowError, FlowNetwork};
use crate::rational::Rational;

/// Result of the tight-set search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TightSet {
    /// Largest scale `x ∈ [0, 1]` at which some buyer set becomes tight.
    pub scale: Rational,
    /// The smallest tight buyer set at `scale`.
    pub buyers: BTreeSet<usize>,
    /// Set when no uncapped buyer is involved: nothing becomes tight before
    /// the prices reach zero.
    pub zero_price: bool,
}

/// Finds the scale at which a subset of `buyers` becomes tight when the prices
/// of `goods` and the active budgets of the capped buyers are multiplied by a
/// decreasing factor `x`.
///
/// `network` holds the unscaled (`x = 1`) budgets and prices. Only edges
/// between `buyers` and `goods` are used. With `U` the uncapped budget, `V`
/// the capped budget and `P` the price total, the whole set goes tight at
/// `U/(P − V)`; if a max-flow at that scale cannot route every budget, the
/// overdemanded side of the minimum cut goes tight earlier and the search
/// recurses into it. At most `|buyers|` max-flow computations are made.
pub fn tight_set_scale(
    network: &FlowNetwork,
    goods: &BTreeSet<usize>,
    buyers: &BTreeSet<usize>,
    capped: &[bool],
) -> Result<TightSet, FlowError> {
    let mut cur_buyers: Vec<usize> = buyers.iter().copied().collect();
    let mut cur_goods: Vec<usize> = goods.iter().copied().collect();
    let mut top_level = true;
    loop {
        let mut uncapped = Rational::zero();
        let mut capped_sum = Rational::zero();
        for &i in &cur_buyers {
            if capped[i] {
                capped_sum += &network.source_caps()[i];
            } else {
                uncapped += &network.source_caps()[i];
            }
        }
        let price: Rational = cur_goods
            .iter()
            .fold(Rational::zero(), |acc, &j| acc + &network.sink_caps()[j]);

        if uncapped.is_zero() && top_level {
            return Ok(TightSet {
                scale: Rational::zero(),
                buyers: cur_buyers.into_iter().collect(),
                zero_price: true,
            });
        }
        let slack = &price - &capped_sum;
        if !uncapped.is_positive() || slack < uncapped {
            return Err(FlowError::NoSurplus {
                prices: price,
                budgets: uncapped + capped_sum,
            });
        }
        let scale = &uncapped / &slack;
        if scale.is_one() {
            return Ok(TightSet {
                scale,
                buyers: cur_buyers.into_iter().collect(),
                zero_price: false,
            });
        }

        let local_good = |j: usize| cur_goods.binary_search(&j).ok();
        let mut local_edges = Vec::new();
        for (bi, &i) in cur_buyers.iter().enumerate() {
            for &e in network.buyer_edges(i) {
                if let Some(gj) = local_good(network.edges()[e].1) {
                    local_edges.push((bi, gj));
                }
            }
        }
        let budgets: Vec<Rational> = cur_buyers
            .iter()
            .map(|&i| {
                let b = &network.source_caps()[i];
                if capped[i] {
                    b * &scale
                } else {
                    b.clone()
                }
            })
            .collect();
        let prices: Vec<Rational> = cur_goods.iter().map(|&j| &network.sink_caps()[j] * &scale).collect();
        let solved = Bipartite {
            source: &budgets,
            sink: &prices,
            source_to_good: None,
            edges: &local_edges,
        }
        .solve();
        let demand = budgets.iter().fold(Rational::zero(), |acc, b| acc + b);
        if solved.value == demand {
            return Ok(TightSet {
                scale,
                buyers: cur_buyers.into_iter().collect(),
                zero_price: false,
            });
        }
        let next_buyers: Vec<usize> = cur_buyers
            .iter()
            .zip(&solved.buyer_reached)
            .filter(|(_, &r)| r)
            .map(|(&i, _)| i)
            .collect();
        let next_goods: Vec<usize> = cur_goods
            .iter()
            .zip(&solved.good_reached)
            .filter(|(_, &r)| r)
            .map(|(&j, _)| j)
            .collect();
        debug_assert!(next_buyers.len() < cur_buyers.len() || next_goods.len() < cur_goods.len());
        cur_buyers = next_buyers;
        cur_goods = next_goods;
        top_level = false;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    #[test]
    fn example1_first_tight_set() {
        // p = (4, 2), buyer 0 capped with 4/5, buyer 1 uncapped with 1;
        // S = {good 0}
        let net = FlowNetwork::new(
            vec![ratio(4, 5), int(1)],
            vec![int(4), int(2)],
            vec![(0, 0), (1, 0), (1, 1)],
        )
        .unwrap();
        let ts = tight_set_scale(&net, &BTreeSet::from([0]), &BTreeSet::from([0, 1]), &[true, false]).unwrap();
        assert_eq!(ts.scale, ratio(5, 16));
        assert_eq!(ts.buyers, BTreeSet::from([0, 1]));
        assert!(!ts.zero_price);
    }

    #[test]
    fn example1_final_tight_set() {
        let net = FlowNetwork::new(
            vec![ratio(1, 4), int(1)],
            vec![ratio(5, 4), ratio(5, 8)],
            vec![(0, 0), (1, 0), (1, 1)],
        )
        .unwrap();
        let ts = tight_set_scale(&net, &BTreeSet::from([0, 1]), &BTreeSet::from([0, 1]), &[true, false]).unwrap();
        assert_eq!(ts.scale, ratio(8, 13));
    }

    #[test]
    fn all_capped_goes_to_zero() {
        let net = FlowNetwork::new(vec![int(1)], vec![int(3)], vec![(0, 0)]).unwrap();
        let ts = tight_set_scale(&net, &BTreeSet::from([0]), &BTreeSet::from([0]), &[true]).unwrap();
        assert_eq!(ts.scale, int(0));
        assert!(ts.zero_price);
    }

    #[test]
    fn recursion_finds_inner_tight_set() {
        // buyer 0 (budget 3) only likes good 0 (price 4); buyer 1 (budget 1)
        // likes both, good 1 has price 8. The whole set goes tight at
        // 4/12 = 1/3 but {buyer 0} at 3/4 already.
        let net = FlowNetwork::new(
            vec![int(3), int(1)],
            vec![int(4), int(8)],
            vec![(0, 0), (1, 0), (1, 1)],
        )
        .unwrap();
        let ts = tight_set_scale(&net, &BTreeSet::from([0, 1]), &BTreeSet::from([0, 1]), &[false, false]).unwrap();
        assert_eq!(ts.scale, ratio(3, 4));
        assert_eq!(ts.buyers, BTreeSet::from([0]));
    }

    #[test]
    fn no_surplus_is_an_error() {
        let net = FlowNetwork::new(vec![int(5)], vec![int(3)], vec![(0, 0)]).unwrap();
        assert!(tight_set_scale(&net, &BTreeSet::from([0]), &BTreeSet::from([0]), &[false]).is_err());
    }
}
