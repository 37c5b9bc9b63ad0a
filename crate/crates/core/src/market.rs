//! The market model: buyers with budgets and happiness caps, divisible goods
//! of unit supply, and the bang-per-buck quantities derived from prices.

use num_integer::Integer;
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::rational::{Extended, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MarketError {
    #[error("market has no buyers")]
    NoBuyers,
    #[error("market has no goods")]
    NoGoods,
    #[error("buyer {buyer} has {found} utilities, expected {expected}")]
    RaggedUtilities {
        buyer: usize,
        expected: usize,
        found: usize,
    },
    #[error("budget of buyer {0} is not positive")]
    NonPositiveBudget(usize),
    #[error("cap of buyer {0} is not positive")]
    NonPositiveCap(usize),
    #[error("utility of buyer {buyer} for good {good} is negative")]
    NegativeUtility { buyer: usize, good: usize },
    #[error("price vector has {found} entries, expected {expected}")]
    PriceDimension { expected: usize, found: usize },
    #[error("price of good {0} is negative")]
    NegativePrice(usize),
    #[error("buyer {0} values no good at these prices")]
    BuyerValuesNothing(usize),
    #[error("no buyer values any good")]
    EmptyAfterPreprocessing,
}

/// A Fisher market with budget-additive utilities
/// `u_i(x) = min(c_i, Σ_j u_ij x_ij)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Market {
    budgets: Vec<Rational>,
    caps: Vec<Extended>,
    utilities: Vec<Vec<Rational>>,
}

impl Market {
    pub fn new(
        budgets: Vec<Rational>,
        caps: Vec<Extended>,
        utilities: Vec<Vec<Rational>>,
    ) -> Result<Self, MarketError> {
        let n = budgets.len();
        if n == 0 {
            return Err(MarketError::NoBuyers);
        }
        if caps.len() != n || utilities.len() != n {
            return Err(MarketError::RaggedUtilities {
                buyer: n.min(caps.len()).min(utilities.len()),
                expected: n,
                found: caps.len().min(utilities.len()),
            });
        }
        let m = utilities[0].len();
        if m == 0 {
            return Err(MarketError::NoGoods);
        }
        for (i, row) in utilities.iter().enumerate() {
            if row.len() != m {
                return Err(MarketError::RaggedUtilities {
                    buyer: i,
                    expected: m,
                    found: row.len(),
                });
            }
            if let Some(j) = row.iter().position(|u| u.is_negative()) {
                return Err(MarketError::NegativeUtility { buyer: i, good: j });
            }
            if !budgets[i].is_positive() {
                return Err(MarketError::NonPositiveBudget(i));
            }
            if let Extended::Finite(c) = &caps[i] {
                if !c.is_positive() {
                    return Err(MarketError::NonPositiveCap(i));
                }
            }
        }
        Ok(Market {
            budgets,
            caps,
            utilities,
        })
    }

    pub fn num_buyers(&self) -> usize {
        self.budgets.len()
    }

    pub fn num_goods(&self) -> usize {
        self.utilities[0].len()
    }

    pub fn budget(&self, buyer: usize) -> &Rational {
        &self.budgets[buyer]
    }

    pub fn budgets(&self) -> &[Rational] {
        &self.budgets
    }

    pub fn cap(&self, buyer: usize) -> &Extended {
        &self.caps[buyer]
    }

    pub fn caps(&self) -> &[Extended] {
        &self.caps
    }

    pub fn utility(&self, buyer: usize, good: usize) -> &Rational {
        &self.utilities[buyer][good]
    }

    pub fn utilities(&self) -> &[Vec<Rational>] {
        &self.utilities
    }

    /// True when every budget, finite cap and utility is an integer.
    pub fn is_integral(&self) -> bool {
        self.budgets.iter().all(|v| v.is_integer())
            && self.caps.iter().filter_map(Extended::finite).all(|v| v.is_integer())
            && self.utilities.iter().flatten().all(|v| v.is_integer())
    }

    /// The largest budget, finite cap or utility, rounded up to an integer
    /// and at least 1. For a normalized market this is the `U` of the running
    /// time and bit-length bounds.
    pub fn max_value(&self) -> BigInt {
        self.budgets
            .iter()
            .chain(self.caps.iter().filter_map(Extended::finite))
            .chain(self.utilities.iter().flatten())
            .map(|v| v.ceil().to_integer())
            .fold(BigInt::one(), |a, b| a.max(b))
    }

    /// A buyer is inert when it has zero utility for every good.
    pub fn is_inert_buyer(&self, buyer: usize) -> bool {
        self.utilities[buyer].iter().all(Zero::is_zero)
    }

    /// A good nobody values.
    pub fn is_unvalued_good(&self, good: usize) -> bool {
        self.utilities.iter().all(|row| row[good].is_zero())
    }

    /// Same market with every cap replaced by the unbounded sentinel.
    pub fn linear(&self) -> Market {
        Market {
            caps: vec![Extended::Infinite; self.budgets.len()],
            ..self.clone()
        }
    }
}

/// A market rescaled to integer data, with the factors needed to map its
/// equilibria back.
///
/// Budgets are multiplied by a common `budget_scale`; buyer `i`'s utilities
/// and cap by `utility_scales[i]`. Prices of the scaled market are
/// `budget_scale` times the original prices; allocations are unchanged.
#[derive(Debug, Clone)]
pub struct Normalized {
    pub market: Market,
    pub budget_scale: Rational,
    pub utility_scales: Vec<Rational>,
}

fn denominator_lcm<'a>(values: impl IntoIterator<Item = &'a Rational>) -> BigInt {
    values
        .into_iter()
        .fold(BigInt::one(), |acc, v| acc.lcm(v.denom()))
}

/// Rescales a market with rational entries to one with integer entries.
pub fn normalize(market: &Market) -> Normalized {
    let budget_scale = Rational::from_integer(denominator_lcm(&market.budgets));
    let budgets = market.budgets.iter().map(|b| b * &budget_scale).collect();
    let mut caps = Vec::with_capacity(market.num_buyers());
    let mut utilities = Vec::with_capacity(market.num_buyers());
    let mut utility_scales = Vec::with_capacity(market.num_buyers());
    for (row, cap) in market.utilities.iter().zip(&market.caps) {
        let k = Rational::from_integer(denominator_lcm(row.iter().chain(cap.finite())));
        utilities.push(row.iter().map(|u| u * &k).collect());
        caps.push(match cap {
            Extended::Finite(c) => Extended::Finite(c * &k),
            Extended::Infinite => Extended::Infinite,
        });
        utility_scales.push(k);
    }
    Normalized {
        market: Market {
            budgets,
            caps,
            utilities,
        },
        budget_scale,
        utility_scales,
    }
}

/// A market with inert buyers and unvalued goods removed, plus the index maps
/// back into the original market.
#[derive(Debug, Clone)]
pub struct Reduced {
    pub market: Market,
    pub buyers: Vec<usize>,
    pub goods: Vec<usize>,
}

/// Removes buyers valuing nothing and goods valued by nobody.
pub fn strip_inert(market: &Market) -> Result<Reduced, MarketError> {
    let buyers: Vec<usize> = (0..market.num_buyers())
        .filter(|&i| !market.is_inert_buyer(i))
        .collect();
    let goods: Vec<usize> = (0..market.num_goods())
        .filter(|&j| !market.is_unvalued_good(j))
        .collect();
    if buyers.is_empty() || goods.is_empty() {
        return Err(MarketError::EmptyAfterPreprocessing);
    }
    let reduced = Market {
        budgets: buyers.iter().map(|&i| market.budgets[i].clone()).collect(),
        caps: buyers.iter().map(|&i| market.caps[i].clone()).collect(),
        utilities: buyers
            .iter()
            .map(|&i| goods.iter().map(|&j| market.utilities[i][j].clone()).collect())
            .collect(),
    };
    Ok(Reduced {
        market: reduced,
        buyers,
        goods,
    })
}

/// `u / p` under the conventions `0/0 = 0` and `u/0 = ∞` for `u > 0`.
pub(crate) fn bang_per_buck(utility: &Rational, price: &Rational) -> Extended {
    if utility.is_zero() {
        Extended::Finite(Rational::zero())
    } else if price.is_zero() {
        Extended::Infinite
    } else {
        Extended::Finite(utility / price)
    }
}

/// MBB ratio of `buyer` over the goods yielded by `goods`.
pub(crate) fn mbb_over(
    market: &Market,
    prices: &[Rational],
    buyer: usize,
    goods: impl IntoIterator<Item = usize>,
) -> Extended {
    goods
        .into_iter()
        .map(|j| bang_per_buck(&market.utilities[buyer][j], &prices[j]))
        .max()
        .unwrap_or(Extended::Finite(Rational::zero()))
}

fn check_prices(market: &Market, prices: &[Rational]) -> Result<(), MarketError> {
    if prices.len() != market.num_goods() {
        return Err(MarketError::PriceDimension {
            expected: market.num_goods(),
            found: prices.len(),
        });
    }
    if let Some(j) = prices.iter().position(|p| p.is_negative()) {
        return Err(MarketError::NegativePrice(j));
    }
    Ok(())
}

/// The maximum bang-per-buck ratio `α_i = max_j u_ij / p_j`.
pub fn mbb_ratio(market: &Market, prices: &[Rational], buyer: usize) -> Result<Extended, MarketError> {
    check_prices(market, prices)?;
    Ok(mbb_over(market, prices, buyer, 0..market.num_goods()))
}

/// `min(M_i, c_i / α)` together with whether the cap binds. Ties count as
/// capped.
pub(crate) fn active_budget_for(budget: &Rational, cap: &Extended, alpha: &Extended) -> (Rational, bool) {
    match (cap, alpha) {
        (Extended::Infinite, _) => (budget.clone(), false),
        (Extended::Finite(_), Extended::Infinite) => (Rational::zero(), true),
        (Extended::Finite(c), Extended::Finite(a)) => {
            let needed = c / a;
            if &needed <= budget {
                (needed, true)
            } else {
                (budget.clone(), false)
            }
        }
    }
}

/// Active budget `M^a_i = min(M_i, c_i/α_i)` and the capped flag.
pub fn active_budget(
    market: &Market,
    prices: &[Rational],
    buyer: usize,
) -> Result<(Rational, bool), MarketError> {
    let alpha = mbb_ratio(market, prices, buyer)?;
    if alpha.is_zero() {
        return Err(MarketError::BuyerValuesNothing(buyer));
    }
    Ok(active_budget_for(&market.budgets[buyer], &market.caps[buyer], &alpha))
}

/// Buyer-good pairs attaining the buyer's MBB ratio with positive utility,
/// sorted by buyer then good.
pub fn equality_graph(market: &Market, prices: &[Rational]) -> Result<Vec<(usize, usize)>, MarketError> {
    check_prices(market, prices)?;
    let all = || 0..market.num_goods();
    Ok(equality_edges_over(market, prices, 0..market.num_buyers(), all))
}

pub(crate) fn equality_edges_over<G>(
    market: &Market,
    prices: &[Rational],
    buyers: impl IntoIterator<Item = usize>,
    goods: impl Fn() -> G,
) -> Vec<(usize, usize)>
where
    G: Iterator<Item = usize>,
{
    let mut edges = Vec::new();
    for i in buyers {
        let alpha = mbb_over(market, prices, i, goods());
        if alpha.is_zero() {
            continue;
        }
        for j in goods() {
            let u = &market.utilities[i][j];
            if !u.is_zero() && bang_per_buck(u, &prices[j]) == alpha {
                edges.push((i, j));
            }
        }
    }
    edges
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    pub(crate) fn example1() -> Market {
        Market::new(
            vec![int(3), int(1)],
            vec![Extended::Finite(int(1)), Extended::Infinite],
            vec![vec![int(5), int(1)], vec![int(2), int(1)]],
        )
        .unwrap()
    }

    fn example2() -> Market {
        Market::new(
            vec![int(1), int(1)],
            vec![Extended::Finite(int(1)), Extended::Infinite],
            vec![vec![int(1), int(1)], vec![int(0), int(1)]],
        )
        .unwrap()
    }

    #[test]
    fn rejects_bad_markets() {
        let bad_budget = Market::new(vec![int(0)], vec![Extended::Infinite], vec![vec![int(1)]]);
        assert_eq!(bad_budget, Err(MarketError::NonPositiveBudget(0)));
        let bad_cap = Market::new(vec![int(1)], vec![Extended::Finite(int(-1))], vec![vec![int(1)]]);
        assert_eq!(bad_cap, Err(MarketError::NonPositiveCap(0)));
        let bad_util = Market::new(vec![int(1)], vec![Extended::Infinite], vec![vec![int(-1)]]);
        assert_eq!(bad_util, Err(MarketError::NegativeUtility { buyer: 0, good: 0 }));
        assert_eq!(Market::new(vec![], vec![], vec![]), Err(MarketError::NoBuyers));
    }

    #[test]
    fn normalize_integral_is_identity() {
        let m = example1();
        let norm = normalize(&m);
        assert_eq!(norm.market, m);
        assert_eq!(norm.budget_scale, int(1));
    }

    #[test]
    fn normalize_common_budget_denominator() {
        let m = Market::new(
            vec![ratio(3, 2), ratio(1, 2)],
            vec![Extended::Finite(int(1)), Extended::Infinite],
            vec![vec![int(5), int(1)], vec![int(2), int(1)]],
        )
        .unwrap();
        let norm = normalize(&m);
        assert_eq!(norm.market.budgets(), &[int(3), int(1)]);
        assert_eq!(norm.budget_scale, int(2));
    }

    #[test]
    fn normalize_per_buyer_utility_scale() {
        let m = Market::new(
            vec![int(1)],
            vec![Extended::Finite(ratio(1, 2))],
            vec![vec![ratio(5, 2), ratio(1, 2)]],
        )
        .unwrap();
        let norm = normalize(&m);
        assert_eq!(norm.market.utilities()[0], vec![int(5), int(1)]);
        assert_eq!(norm.market.cap(0), &Extended::Finite(int(1)));
        assert_eq!(norm.utility_scales, vec![int(2)]);
        assert!(norm.market.is_integral());
    }

    #[test]
    fn mbb_examples() {
        let m = example1();
        assert_eq!(
            mbb_ratio(&m, &[int(3), int(1)], 0).unwrap(),
            Extended::Finite(ratio(5, 3))
        );
        assert_eq!(
            mbb_ratio(&m, &[int(4), int(4)], 0).unwrap(),
            Extended::Finite(ratio(5, 4))
        );
        let inert = Market::new(vec![int(1)], vec![Extended::Infinite], vec![vec![int(0), int(0)]]).unwrap();
        assert_eq!(mbb_ratio(&inert, &[int(1), int(0)], 0).unwrap(), Extended::Finite(int(0)));
        assert_eq!(mbb_ratio(&m, &[int(0), int(1)], 0).unwrap(), Extended::Infinite);
    }

    #[test]
    fn active_budget_examples() {
        let m = example1();
        let prices = [int(4), int(4)];
        assert_eq!(active_budget(&m, &prices, 0).unwrap(), (ratio(4, 5), true));
        assert_eq!(active_budget(&m, &prices, 1).unwrap(), (int(1), false));

        let boundary = Market::new(
            vec![int(1)],
            vec![Extended::Finite(int(1))],
            vec![vec![int(1), int(1)]],
        )
        .unwrap();
        assert_eq!(active_budget(&boundary, &[int(1), int(1)], 0).unwrap(), (int(1), true));

        let inert = Market::new(vec![int(1)], vec![Extended::Infinite], vec![vec![int(0)]]).unwrap();
        assert_eq!(
            active_budget(&inert, &[int(1)], 0),
            Err(MarketError::BuyerValuesNothing(0))
        );
    }

    #[test]
    fn equality_graph_examples() {
        assert_eq!(
            equality_graph(&example1(), &[int(4), int(4)]).unwrap(),
            vec![(0, 0), (1, 0)]
        );
        assert_eq!(
            equality_graph(&example2(), &[int(2), int(2)]).unwrap(),
            vec![(0, 0), (0, 1), (1, 1)]
        );
        let single = Market::new(vec![int(1)], vec![Extended::Infinite], vec![vec![int(7)]]).unwrap();
        assert_eq!(equality_graph(&single, &[int(3)]).unwrap(), vec![(0, 0)]);
        // a zero price on a valued good makes it the only equality edge
        assert_eq!(
            equality_graph(&example1(), &[int(0), int(4)]).unwrap(),
            vec![(0, 0), (1, 0)]
        );
    }

    #[test]
    fn strip_inert_removes_dead_rows_and_columns() {
        let m = Market::new(
            vec![int(1), int(2)],
            vec![Extended::Infinite, Extended::Infinite],
            vec![vec![int(0), int(0), int(0)], vec![int(1), int(0), int(3)]],
        )
        .unwrap();
        let r = strip_inert(&m).unwrap();
        assert_eq!(r.buyers, vec![1]);
        assert_eq!(r.goods, vec![0, 2]);
        assert_eq!(r.market.utilities()[0], vec![int(1), int(3)]);
    }
}
