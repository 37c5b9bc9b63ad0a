use num_traits::Zero;

use crate::market::{active_budget_for, mbb_over, Market};
use crate::rational::{sum, Extended, Rational};

/// Prices and an allocation, together with the per-buyer quantities derived
/// from them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Equilibrium {
    pub prices: Vec<Rational>,
    /// `allocation[i][j]` is the fraction of good `j` held by buyer `i`.
    pub allocation: Vec<Vec<Rational>>,
    /// Money spent by each buyer, `Σ_j p_j x_ij`.
    pub active_budgets: Vec<Rational>,
    pub capped: Vec<bool>,
    /// Budget-additive utility `min(c_i, Σ_j u_ij x_ij)`.
    pub utilities: Vec<Rational>,
}

impl Equilibrium {
    /// Derives spending, utilities and capped flags from prices and an
    /// allocation. A buyer is capped when `c_i/α_i ≤ M_i` at these prices;
    /// buyers valuing nothing are never capped.
    ///
    /// Panics if the dimensions do not match the market.
    pub fn from_allocation(market: &Market, prices: Vec<Rational>, allocation: Vec<Vec<Rational>>) -> Self {
        let n = market.num_buyers();
        let m = market.num_goods();
        assert_eq!(prices.len(), m, "price vector length");
        assert_eq!(allocation.len(), n, "allocation rows");
        let mut active_budgets = Vec::with_capacity(n);
        let mut capped = Vec::with_capacity(n);
        let mut utilities = Vec::with_capacity(n);
        for (i, row) in allocation.iter().enumerate() {
            assert_eq!(row.len(), m, "allocation row {i} length");
            let spend = row
                .iter()
                .zip(&prices)
                .fold(Rational::zero(), |acc, (x, p)| acc + x * p);
            let linear = linear_utility(market, i, row);
            let utility = match market.cap(i) {
                Extended::Finite(c) if c < &linear => c.clone(),
                _ => linear,
            };
            let alpha = mbb_over(market, &prices, i, 0..m);
            let is_capped = !alpha.is_zero() && active_budget_for(market.budget(i), market.cap(i), &alpha).1;
            active_budgets.push(spend);
            capped.push(is_capped);
            utilities.push(utility);
        }
        Equilibrium {
            prices,
            allocation,
            active_budgets,
            capped,
            utilities,
        }
    }

    /// Total money collected by the seller.
    pub fn revenue(&self) -> Rational {
        sum(&self.active_budgets)
    }

    pub fn num_buyers(&self) -> usize {
        self.allocation.len()
    }

    pub fn num_goods(&self) -> usize {
        self.prices.len()
    }
}

pub(crate) fn linear_utility(market: &Market, buyer: usize, row: &[Rational]) -> Rational {
    row.iter()
        .enumerate()
        .fold(Rational::zero(), |acc, (j, x)| acc + market.utility(buyer, j) * x)
}
