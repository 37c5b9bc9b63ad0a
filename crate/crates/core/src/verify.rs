//! Exact equilibrium checking.
//!
//! Every condition is evaluated in rationals. Market-clearing and demand
//! optimality establish a market equilibrium; modesty and the MBB property
//! make it a modest MBB equilibrium; the convex-program optimality conditions
//! are checked with the multipliers `γ_i = M_i/u_i − 1/α_i` and the prices as
//! the good multipliers.

use std::fmt;

use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::equilibrium::{linear_utility, Equilibrium};
use crate::market::{bang_per_buck, mbb_over, Market};
use crate::rational::{Extended, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Condition {
    NegativePrice,
    NegativeAllocation,
    Overallocation,
    /// A good with positive price is not completely sold.
    WalrasLaw,
    OverBudget,
    /// The bundle does not maximize the buyer's utility within its budget.
    NotDemandBundle,
    NotModest,
    NotMbb,
    /// Uncapped buyers must spend `M_i`, capped buyers `c_i/α_i`.
    Spending,
    /// The buyer has zero utility although it values some good.
    ZeroUtility,
    Kkt1,
    Kkt2,
    Kkt3,
    Kkt4,
}

impl Condition {
    pub fn id(self) -> &'static str {
        match self {
            Condition::NegativePrice => "negative-price",
            Condition::NegativeAllocation => "negative-allocation",
            Condition::Overallocation => "overallocation",
            Condition::WalrasLaw => "walras-law",
            Condition::OverBudget => "over-budget",
            Condition::NotDemandBundle => "not-demand-bundle",
            Condition::NotModest => "not-modest",
            Condition::NotMbb => "not-mbb",
            Condition::Spending => "spending",
            Condition::ZeroUtility => "zero-utility",
            Condition::Kkt1 => "kkt-1",
            Condition::Kkt2 => "kkt-2",
            Condition::Kkt3 => "kkt-3",
            Condition::Kkt4 => "kkt-4",
        }
    }

    fn flag(self) -> Flag {
        match self {
            Condition::NegativePrice
            | Condition::NegativeAllocation
            | Condition::Overallocation
            | Condition::WalrasLaw
            | Condition::OverBudget
            | Condition::NotDemandBundle => Flag::Equilibrium,
            Condition::NotModest => Flag::Modest,
            Condition::NotMbb => Flag::Mbb,
            Condition::Spending
            | Condition::ZeroUtility
            | Condition::Kkt1
            | Condition::Kkt2
            | Condition::Kkt3
            | Condition::Kkt4 => Flag::Kkt,
        }
    }
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

enum Flag {
    Equilibrium,
    Modest,
    Mbb,
    Kkt,
}

/// One failed check: `lhs` is the offending quantity and `rhs` the bound or
/// value it should have satisfied.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub condition: Condition,
    pub buyer: Option<usize>,
    pub good: Option<usize>,
    pub lhs: Extended,
    pub rhs: Extended,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerificationReport {
    pub is_equilibrium: bool,
    pub is_modest: bool,
    pub is_mbb: bool,
    pub kkt_ok: bool,
    pub violations: Vec<Violation>,
}

impl VerificationReport {
    pub fn all_ok(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn has(&self, condition: Condition) -> bool {
        self.violations.iter().any(|v| v.condition == condition)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum VerifyError {
    #[error("equilibrium has {found} prices but the market has {expected} goods")]
    PriceDimension { expected: usize, found: usize },
    #[error("allocation has {found} rows but the market has {expected} buyers")]
    AllocationRows { expected: usize, found: usize },
    #[error("allocation row {buyer} has {found} entries, expected {expected}")]
    AllocationColumns {
        buyer: usize,
        expected: usize,
        found: usize,
    },
}

struct Collector {
    violations: Vec<Violation>,
}

impl Collector {
    fn push(
        &mut self,
        condition: Condition,
        buyer: Option<usize>,
        good: Option<usize>,
        lhs: impl Into<Extended>,
        rhs: impl Into<Extended>,
    ) {
        self.violations.push(Violation {
            condition,
            buyer,
            good,
            lhs: lhs.into(),
            rhs: rhs.into(),
        });
    }
}

fn reciprocal(alpha: &Extended) -> Rational {
    match alpha {
        Extended::Infinite => Rational::zero(),
        Extended::Finite(a) => a.recip(),
    }
}

fn mul_ext(a: &Extended, b: &Rational) -> Extended {
    match a {
        Extended::Finite(a) => Extended::Finite(a * b),
        Extended::Infinite if b.is_zero() => Extended::Finite(Rational::zero()),
        Extended::Infinite => Extended::Infinite,
    }
}

/// Checks whether `eq` is a modest MBB equilibrium of `market`.
///
/// Only the prices and allocation of `eq` are inspected; its derived fields
/// are recomputed. Inert buyers (valuing nothing) are exempt from the
/// spending and optimality-condition checks.
pub fn verify(market: &Market, eq: &Equilibrium) -> Result<VerificationReport, VerifyError> {
    let n = market.num_buyers();
    let m = market.num_goods();
    if eq.prices.len() != m {
        return Err(VerifyError::PriceDimension {
            expected: m,
            found: eq.prices.len(),
        });
    }
    if eq.allocation.len() != n {
        return Err(VerifyError::AllocationRows {
            expected: n,
            found: eq.allocation.len(),
        });
    }
    for (i, row) in eq.allocation.iter().enumerate() {
        if row.len() != m {
            return Err(VerifyError::AllocationColumns {
                buyer: i,
                expected: m,
                found: row.len(),
            });
        }
    }

    let prices = &eq.prices;
    let x = &eq.allocation;
    let mut out = Collector { violations: Vec::new() };
    let zero = Rational::zero();
    let one = Rational::one();

    for (j, p) in prices.iter().enumerate() {
        if p.is_negative() {
            out.push(Condition::NegativePrice, None, Some(j), p.clone(), zero.clone());
        }
    }
    for (i, row) in x.iter().enumerate() {
        for (j, v) in row.iter().enumerate() {
            if v.is_negative() {
                out.push(Condition::NegativeAllocation, Some(i), Some(j), v.clone(), zero.clone());
            }
        }
    }
    for j in 0..m {
        let sold = x.iter().fold(Rational::zero(), |acc, row| acc + &row[j]);
        if sold > one {
            out.push(Condition::Overallocation, None, Some(j), sold.clone(), one.clone());
        }
        if prices[j].is_positive() && sold != one {
            out.push(Condition::WalrasLaw, None, Some(j), sold.clone(), one.clone());
            out.push(Condition::Kkt3, None, Some(j), sold, one.clone());
        }
    }

    for i in 0..n {
        let row = &x[i];
        let budget = market.budget(i);
        let cap = market.cap(i);
        let alpha = mbb_over(market, prices, i, 0..m);
        let linear = linear_utility(market, i, row);
        let spend = row
            .iter()
            .zip(prices)
            .fold(Rational::zero(), |acc, (v, p)| acc + v * p);

        if &spend > budget {
            out.push(Condition::OverBudget, Some(i), None, spend.clone(), budget.clone());
        }
        if let Extended::Finite(c) = cap {
            if &linear > c {
                out.push(Condition::NotModest, Some(i), None, linear.clone(), c.clone());
            }
        }
        for (j, v) in row.iter().enumerate() {
            if v.is_positive() && bang_per_buck(market.utility(i, j), &prices[j]) != alpha {
                out.push(
                    Condition::NotMbb,
                    Some(i),
                    Some(j),
                    bang_per_buck(market.utility(i, j), &prices[j]),
                    alpha.clone(),
                );
            }
        }

        if alpha.is_zero() {
            // values nothing: every affordable bundle is optimal
            continue;
        }

        // best utility affordable at these prices: min(c_i, α_i M_i)
        let best = match (cap, mul_ext(&alpha, budget)) {
            (Extended::Finite(c), Extended::Finite(b)) => Extended::Finite(c.clone().min(b)),
            (Extended::Finite(c), Extended::Infinite) => Extended::Finite(c.clone()),
            (Extended::Infinite, b) => b,
        };
        let achieved = match cap {
            Extended::Finite(c) => c.clone().min(linear.clone()),
            Extended::Infinite => linear.clone(),
        };
        if Extended::Finite(achieved.clone()) != best {
            out.push(Condition::NotDemandBundle, Some(i), None, achieved, best);
        }

        let beta = reciprocal(&alpha);
        let capped = match (cap, &alpha) {
            (Extended::Infinite, _) => false,
            (Extended::Finite(_), Extended::Infinite) => true,
            (Extended::Finite(c), Extended::Finite(a)) => &(c / a) <= budget,
        };
        let expected_spend = match (capped, cap) {
            (true, Extended::Finite(c)) => c * &beta,
            _ => budget.clone(),
        };
        if spend != expected_spend {
            out.push(Condition::Spending, Some(i), None, spend.clone(), expected_spend);
        }

        if !linear.is_positive() {
            out.push(Condition::ZeroUtility, Some(i), None, linear.clone(), zero.clone());
            continue;
        }
        let gamma = budget / &linear - &beta;
        if gamma.is_negative() {
            out.push(Condition::Kkt4, Some(i), None, gamma.clone(), zero.clone());
        } else if gamma.is_positive() {
            match cap {
                Extended::Finite(c) if c == &linear => {}
                _ => out.push(Condition::Kkt4, Some(i), None, linear.clone(), cap.clone()),
            }
        }
        let threshold = budget / &linear - &gamma;
        for j in 0..m {
            let u = market.utility(i, j);
            if u.is_zero() {
                if row[j].is_positive() {
                    out.push(Condition::Kkt2, Some(i), Some(j), row[j].clone(), zero.clone());
                }
                continue;
            }
            let ratio = &prices[j] / u;
            if ratio < threshold {
                out.push(Condition::Kkt1, Some(i), Some(j), ratio.clone(), threshold.clone());
            }
            if row[j].is_positive() && ratio != threshold {
                out.push(Condition::Kkt2, Some(i), Some(j), ratio, threshold.clone());
            }
        }
    }

    let violations = out.violations;
    let flagged = |f: fn(&Flag) -> bool| !violations.iter().any(|v| f(&v.condition.flag()));
    Ok(VerificationReport {
        is_equilibrium: flagged(|f| matches!(f, Flag::Equilibrium)),
        is_modest: flagged(|f| matches!(f, Flag::Modest)),
        is_mbb: flagged(|f| matches!(f, Flag::Mbb)),
        kkt_ok: flagged(|f| matches!(f, Flag::Kkt)),
        violations,
    })
}
