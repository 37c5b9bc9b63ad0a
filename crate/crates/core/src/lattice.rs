//! Meet and join of modest MBB equilibria.
//!
//! Comparing two equilibria `E = (x, p)` and `E' = (x', p')` splits the goods
//! into `S0` (equal prices), `S1` (`p < p'`) and `S2` (`p > p'`). The buyers
//! purchasing in each class are the same under both equilibria, the three
//! buyer sets are disjoint, and the buyers of `S1` and `S2` are capped. The
//! classes can therefore be recombined freely: the join takes the higher
//! side of every class, the meet the lower one.

use std::collections::BTreeSet;

use num_traits::Signed;
use thiserror::Error;

use crate::equilibrium::Equilibrium;
use crate::market::Market;
use crate::rational::Rational;
use crate::verify::{verify, Condition, VerifyError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LatticeError {
    #[error(transparent)]
    Dimensions(#[from] VerifyError),
    #[error("equilibrium {which} is not a modest MBB equilibrium (first failed check: {condition})")]
    NotAnEquilibrium { which: usize, condition: Condition },
    #[error("buyers of price class {class} differ between the two equilibria")]
    BuyerSetsDiffer { class: usize },
    #[error("buyer {buyer} purchases in price classes {first} and {second}")]
    BuyerSetsOverlap { buyer: usize, first: usize, second: usize },
    #[error("buyer {buyer} purchases in price class {class} but is not capped")]
    UncappedBuyer { buyer: usize, class: usize },
    #[error("combined equilibrium fails verification ({0})")]
    Broken(Condition),
}

/// The three price classes of a pair of equilibria and the buyers
/// purchasing in each.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PricePartition {
    /// `S0`: goods priced equally.
    pub equal: BTreeSet<usize>,
    /// `S1`: goods cheaper in the first equilibrium.
    pub lower: BTreeSet<usize>,
    /// `S2`: goods dearer in the first equilibrium.
    pub higher: BTreeSet<usize>,
    /// Buyers purchasing in `S0`, `S1` and `S2`.
    pub buyers: [BTreeSet<usize>; 3],
}

impl PricePartition {
    fn classes(&self) -> [&BTreeSet<usize>; 3] {
        [&self.equal, &self.lower, &self.higher]
    }
}

fn purchasers(eq: &Equilibrium, goods: &BTreeSet<usize>) -> BTreeSet<usize> {
    eq.allocation
        .iter()
        .enumerate()
        .filter(|(_, row)| goods.iter().any(|&j| row[j].is_positive()))
        .map(|(i, _)| i)
        .collect()
}

fn check(market: &Market, eq: &Equilibrium, which: usize) -> Result<(), LatticeError> {
    let report = verify(market, eq)?;
    match report.violations.first() {
        Some(v) => Err(LatticeError::NotAnEquilibrium {
            which,
            condition: v.condition,
        }),
        None => Ok(()),
    }
}

/// Splits the goods by price comparison and checks the structure of the
/// buyer sets.
pub fn partition(market: &Market, first: &Equilibrium, second: &Equilibrium) -> Result<PricePartition, LatticeError> {
    check(market, first, 1)?;
    check(market, second, 2)?;
    let mut classes: [BTreeSet<usize>; 3] = Default::default();
    for (j, (p, q)) in first.prices.iter().zip(&second.prices).enumerate() {
        let k = match p.cmp(q) {
            std::cmp::Ordering::Equal => 0,
            std::cmp::Ordering::Less => 1,
            std::cmp::Ordering::Greater => 2,
        };
        classes[k].insert(j);
    }
    let mut buyers: [BTreeSet<usize>; 3] = Default::default();
    for (class, goods) in classes.iter().enumerate() {
        let here = purchasers(first, goods);
        if here != purchasers(second, goods) {
            return Err(LatticeError::BuyerSetsDiffer { class });
        }
        buyers[class] = here;
    }
    for a in 0..3 {
        for b in a + 1..3 {
            if let Some(&buyer) = buyers[a].intersection(&buyers[b]).next() {
                return Err(LatticeError::BuyerSetsOverlap {
                    buyer,
                    first: a,
                    second: b,
                });
            }
        }
    }
    for class in 1..3 {
        if let Some(&buyer) = buyers[class]
            .iter()
            .find(|&&i| !first.capped[i] || !second.capped[i])
        {
            return Err(LatticeError::UncappedBuyer { buyer, class });
        }
    }
    let [equal, lower, higher] = classes;
    Ok(PricePartition {
        equal,
        lower,
        higher,
        buyers,
    })
}

/// Takes prices and allocation columns from `first` on the goods in
/// `from_first` and from `second` elsewhere.
fn combine(
    market: &Market,
    first: &Equilibrium,
    second: &Equilibrium,
    from_first: &dyn Fn(usize) -> bool,
) -> Result<Equilibrium, LatticeError> {
    let m = market.num_goods();
    let pick = |j: usize| if from_first(j) { first } else { second };
    let prices: Vec<Rational> = (0..m).map(|j| pick(j).prices[j].clone()).collect();
    let allocation: Vec<Vec<Rational>> = (0..market.num_buyers())
        .map(|i| (0..m).map(|j| pick(j).allocation[i][j].clone()).collect())
        .collect();
    let out = Equilibrium::from_allocation(market, prices, allocation);
    let report = verify(market, &out)?;
    match report.violations.first() {
        Some(v) => Err(LatticeError::Broken(v.condition)),
        None => Ok(out),
    }
}

/// The equilibrium with prices `max(p, p')`.
pub fn join(market: &Market, first: &Equilibrium, second: &Equilibrium) -> Result<Equilibrium, LatticeError> {
    let parts = partition(market, first, second)?;
    combine(market, first, second, &|j| !parts.classes()[1].contains(&j))
}

/// The equilibrium with prices `min(p, p')`.
pub fn meet(market: &Market, first: &Equilibrium, second: &Equilibrium) -> Result<Equilibrium, LatticeError> {
    let parts = partition(market, first, second)?;
    combine(market, first, second, &|j| !parts.classes()[2].contains(&j))
}
