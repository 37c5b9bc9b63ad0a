//! Lowering prices to the minimum-revenue modest MBB equilibrium.
//!
//! Goods whose equality edges all lead to capped buyers can lose value
//! without changing anyone's utility: a capped buyer that keeps its bundle
//! simply spends less. The prices of such a set are scaled down together
//! until they reach zero or some outside buyer starts to find one of them
//! attractive, and the process repeats until every positive-price good is
//! tied to an uncapped buyer.

use std::collections::BTreeSet;

use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::equilibrium::Equilibrium;
use crate::market::{active_budget_for, equality_edges_over, mbb_over, Market};
use crate::rational::{Extended, Rational};
use crate::verify::{verify, Condition, VerifyError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MinRevenueError {
    #[error(transparent)]
    Dimensions(#[from] VerifyError),
    #[error("input is not a modest MBB equilibrium (first failed check: {0})")]
    NotAnEquilibrium(Condition),
    #[error("price lowering did not finish within {0} rounds")]
    RoundLimit(usize),
    #[error("lowered prices fail verification ({0})")]
    Broken(Condition),
}

/// Lowers the prices of `eq` to the pointwise smallest modest MBB
/// equilibrium prices. The allocation is kept as is.
pub fn min_revenue(market: &Market, eq: &Equilibrium) -> Result<Equilibrium, MinRevenueError> {
    let mut steps = lowering_steps(market, eq)?;
    Ok(steps.pop().expect("at least the input"))
}

/// Every intermediate equilibrium of [`min_revenue`], starting with `eq`
/// itself and ending with the minimum-revenue equilibrium. Each one is
/// verified.
pub fn lowering_steps(market: &Market, eq: &Equilibrium) -> Result<Vec<Equilibrium>, MinRevenueError> {
    let report = verify(market, eq)?;
    if let Some(v) = report.violations.first() {
        return Err(MinRevenueError::NotAnEquilibrium(v.condition));
    }
    let n = market.num_buyers();
    let m = market.num_goods();
    let x = &eq.allocation;
    let mut prices = eq.prices.clone();
    let limit = m * (n + 1);
    let mut steps = vec![eq.clone()];

    for _ in 0..=limit {
        let edges = equality_edges_over(market, &prices, 0..n, || 0..m);
        let uncapped: Vec<bool> = (0..n)
            .map(|i| {
                let alpha = mbb_over(market, &prices, i, 0..m);
                !alpha.is_zero() && !active_budget_for(market.budget(i), market.cap(i), &alpha).1
            })
            .collect();

        let mut focus: BTreeSet<usize> = (0..m).filter(|&j| prices[j].is_positive()).collect();
        for &(i, j) in &edges {
            if uncapped[i] {
                focus.remove(&j);
            }
        }
        // a buyer that also buys outside the set would stop buying there
        // once the set gets cheaper, so its goods have to stay put
        loop {
            let blocked: Vec<usize> = edges
                .iter()
                .filter(|(i, j)| focus.contains(j) && (0..m).any(|k| x[*i][k].is_positive() && !focus.contains(&k)))
                .map(|&(_, j)| j)
                .collect();
            if blocked.is_empty() {
                break;
            }
            for j in blocked {
                focus.remove(&j);
            }
        }
        if focus.is_empty() {
            return Ok(steps);
        }

        let members: BTreeSet<usize> = edges
            .iter()
            .filter(|(_, j)| focus.contains(j))
            .map(|&(i, _)| i)
            .collect();
        let mut scale = Rational::zero();
        for h in (0..n).filter(|h| !members.contains(h)) {
            let Extended::Finite(alpha) = mbb_over(market, &prices, h, 0..m) else { continue };
            if alpha.is_zero() {
                continue;
            }
            for &j in &focus {
                let u = market.utility(h, j);
                if u.is_positive() {
                    let cand = u / (&alpha * &prices[j]);
                    if cand > scale {
                        scale = cand;
                    }
                }
            }
        }
        for &j in &focus {
            prices[j] *= &scale;
        }
        let out = Equilibrium::from_allocation(market, prices.clone(), x.clone());
        let report = verify(market, &out)?;
        if let Some(v) = report.violations.first() {
            return Err(MinRevenueError::Broken(v.condition));
        }
        steps.push(out);
    }
    Err(MinRevenueError::RoundLimit(limit))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    fn example2() -> Market {
        Market::new(
            vec![int(1), int(1)],
            vec![Extended::Finite(int(1)), Extended::Infinite],
            vec![vec![int(1), int(1)], vec![int(0), int(1)]],
        )
        .unwrap()
    }

    fn identity() -> Vec<Vec<Rational>> {
        vec![vec![int(1), int(0)], vec![int(0), int(1)]]
    }

    #[test]
    fn example2_drops_first_price() {
        let eq = Equilibrium::from_allocation(&example2(), vec![int(1), int(1)], identity());
        let low = min_revenue(&example2(), &eq).unwrap();
        assert_eq!(low.prices, vec![int(0), int(1)]);
        assert_eq!(low.allocation, identity());
        assert_eq!(low.utilities, eq.utilities);
    }

    #[test]
    fn uncapped_everywhere_is_unchanged() {
        let m = Market::new(
            vec![int(3), int(1)],
            vec![Extended::Infinite, Extended::Infinite],
            vec![vec![int(5), int(1)], vec![int(2), int(1)]],
        )
        .unwrap();
        let eq = Equilibrium::from_allocation(&m, vec![int(3), int(1)], identity());
        assert_eq!(min_revenue(&m, &eq).unwrap(), eq);
    }

    #[test]
    fn identical_capped_buyers_go_to_zero() {
        let m = Market::new(
            vec![int(5), int(5)],
            vec![Extended::Finite(int(1)), Extended::Finite(int(1))],
            vec![vec![int(1), int(1)], vec![int(1), int(1)]],
        )
        .unwrap();
        let half = ratio(1, 2);
        let x = vec![vec![half.clone(), half.clone()], vec![half.clone(), half]];
        let eq = Equilibrium::from_allocation(&m, vec![int(5), int(5)], x);
        let low = min_revenue(&m, &eq).unwrap();
        assert_eq!(low.prices, vec![int(0), int(0)]);
        assert_eq!(low.utilities, vec![int(1), int(1)]);
    }

    #[test]
    fn stops_at_new_edge() {
        // buyer 0 capped at 1 likes good 0 only; buyer 1 uncapped buys good 1
        // but values good 0 at half the rate
        let m = Market::new(
            vec![int(4), int(2)],
            vec![Extended::Finite(int(1)), Extended::Infinite],
            vec![vec![int(1), int(0)], vec![int(1), int(2)]],
        )
        .unwrap();
        let eq = Equilibrium::from_allocation(&m, vec![int(4), int(2)], identity());
        assert!(verify(&m, &eq).unwrap().all_ok());
        let low = min_revenue(&m, &eq).unwrap();
        assert_eq!(low.prices, vec![int(1), int(2)]);
        let again = min_revenue(&m, &low).unwrap();
        assert_eq!(again, low);
        assert_eq!(lowering_steps(&m, &eq).unwrap().len(), 2);
    }

    #[test]
    fn rejects_non_equilibrium() {
        let eq = Equilibrium::from_allocation(&example2(), vec![int(2), int(1)], identity());
        assert!(matches!(
            min_revenue(&example2(), &eq),
            Err(MinRevenueError::NotAnEquilibrium(_))
        ));
    }
}
