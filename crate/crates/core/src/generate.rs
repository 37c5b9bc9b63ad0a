//! Deterministic random integer markets.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::market::Market;
use crate::rational::{int, Extended};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GenerateError {
    #[error("need at least one buyer and one good")]
    Empty,
    #[error("max value must be at least 1")]
    MaxValue,
    #[error("unbounded-cap share must lie in [0, 1]")]
    Share,
}

/// Parameters of [`generate`].
#[derive(Debug, Clone, PartialEq)]
pub struct MarketShape {
    pub buyers: usize,
    pub goods: usize,
    /// Budgets and caps are drawn from `1..=max_value`, utilities from
    /// `0..=max_value`.
    pub max_value: u32,
    pub seed: u64,
    /// Every cap unbounded.
    pub linear: bool,
    /// Chance that an individual cap is unbounded when not `linear`.
    pub unbounded_share: f64,
}

impl MarketShape {
    pub fn new(buyers: usize, goods: usize, max_value: u32, seed: u64) -> Self {
        MarketShape {
            buyers,
            goods,
            max_value,
            seed,
            linear: false,
            unbounded_share: 0.0,
        }
    }
}

/// Draws a market. About 30% of utilities are zero, but every buyer values
/// some good and every good is valued by some buyer. The same shape always
/// yields the same market.
pub fn generate(shape: &MarketShape) -> Result<Market, GenerateError> {
    if shape.buyers == 0 || shape.goods == 0 {
        return Err(GenerateError::Empty);
    }
    if shape.max_value == 0 {
        return Err(GenerateError::MaxValue);
    }
    if !(0.0..=1.0).contains(&shape.unbounded_share) {
        return Err(GenerateError::Share);
    }
    let u = i64::from(shape.max_value);
    let mut rng = ChaCha8Rng::seed_from_u64(shape.seed);
    let mut utilities: Vec<Vec<i64>> = (0..shape.buyers)
        .map(|_| {
            (0..shape.goods)
                .map(|_| if rng.gen_bool(0.3) { 0 } else { rng.gen_range(1..=u) })
                .collect()
        })
        .collect();
    for row in utilities.iter_mut() {
        if row.iter().all(|&v| v == 0) {
            let j = rng.gen_range(0..shape.goods);
            row[j] = rng.gen_range(1..=u);
        }
    }
    for j in 0..shape.goods {
        if utilities.iter().all(|row| row[j] == 0) {
            let i = rng.gen_range(0..shape.buyers);
            utilities[i][j] = rng.gen_range(1..=u);
        }
    }
    let budgets = (0..shape.buyers).map(|_| int(rng.gen_range(1..=u))).collect();
    let caps = (0..shape.buyers)
        .map(|_| {
            let cap = rng.gen_range(1..=u);
            if shape.linear || rng.gen_bool(shape.unbounded_share) {
                Extended::Infinite
            } else {
                Extended::Finite(int(cap))
            }
        })
        .collect();
    let utilities = utilities
        .into_iter()
        .map(|row| row.into_iter().map(int).collect())
        .collect();
    Ok(Market::new(budgets, caps, utilities).expect("generated values are valid"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic() {
        let shape = MarketShape::new(3, 4, 10, 7);
        assert_eq!(generate(&shape).unwrap(), generate(&shape).unwrap());
        let other = MarketShape { seed: 8, ..shape };
        assert_ne!(generate(&other).unwrap(), generate(&MarketShape::new(3, 4, 10, 7)).unwrap());
    }

    #[test]
    fn no_inert_rows_or_columns() {
        for seed in 0..50 {
            let m = generate(&MarketShape::new(4, 5, 3, seed)).unwrap();
            assert!((0..4).all(|i| !m.is_inert_buyer(i)));
            assert!((0..5).all(|j| !m.is_unvalued_good(j)));
        }
    }

    #[test]
    fn linear_flag() {
        let shape = MarketShape {
            linear: true,
            ..MarketShape::new(3, 2, 5, 1)
        };
        assert!(generate(&shape).unwrap().caps().iter().all(Extended::is_infinite));
    }

    #[test]
    fn invalid_parameters() {
        assert_eq!(generate(&MarketShape::new(0, 2, 5, 1)), Err(GenerateError::Empty));
        assert_eq!(generate(&MarketShape::new(2, 2, 0, 1)), Err(GenerateError::MaxValue));
    }
}
