//! Log-barrier Newton method for the capped Eisenberg-Gale program
//!
//! ```text
//! max Σ_i M_i log v_i   where v_i = Σ_j u_ij x_ij
//! s.t. v_i ≤ c_i,  Σ_i x_ij ≤ 1,  x ≥ 0.
//! ```
//!
//! The optimal utilities `min(c_i, v_i)` are unique, which makes them a good
//! target for comparison with the exact solver.

use nalgebra::{DMatrix, DVector};
use num_traits::{ToPrimitive, Zero};

use super::OracleError;
use crate::market::Market;
use crate::rational::{Extended, Rational};

/// Approximate optimum of the convex program.
#[derive(Debug, Clone)]
pub struct EgSolution {
    pub utilities: Vec<f64>,
    pub allocation: Vec<Vec<f64>>,
    /// Multipliers of the supply constraints, in budget units.
    pub prices: Vec<f64>,
    /// Duality gap bound at exit, relative to the total budget.
    pub gap: f64,
    pub newton_steps: usize,
}

fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

struct Problem {
    /// (buyer, good, scaled utility) per variable.
    vars: Vec<(usize, usize, f64)>,
    budgets: Vec<f64>,
    caps: Vec<Option<f64>>,
    by_buyer: Vec<Vec<usize>>,
    by_good: Vec<Vec<usize>>,
}

impl Problem {
    fn values(&self, z: &DVector<f64>) -> (Vec<f64>, Vec<f64>) {
        let mut v = vec![0.0; self.budgets.len()];
        let mut s = vec![0.0; self.by_good.len()];
        for (e, &(i, j, u)) in self.vars.iter().enumerate() {
            v[i] += u * z[e];
            s[j] += z[e];
        }
        (v, s)
    }

    fn feasible(&self, z: &DVector<f64>) -> bool {
        if z.iter().any(|&x| x <= 0.0) {
            return false;
        }
        let (v, s) = self.values(z);
        s.iter().all(|&x| x < 1.0)
            && v.iter().enumerate().all(|(i, &vi)| {
                (self.by_buyer[i].is_empty() || vi > 0.0) && self.caps[i].map_or(true, |c| vi < c)
            })
    }

    /// Barrier objective to minimize; `None` outside the domain.
    fn value(&self, z: &DVector<f64>, t: f64) -> Option<f64> {
        if !self.feasible(z) {
            return None;
        }
        let (v, s) = self.values(z);
        let mut f = 0.0;
        for (i, &vi) in v.iter().enumerate() {
            if self.by_buyer[i].is_empty() {
                continue;
            }
            f -= t * self.budgets[i] * vi.ln();
            if let Some(c) = self.caps[i] {
                f -= (c - vi).ln();
            }
        }
        for (j, &sj) in s.iter().enumerate() {
            if !self.by_good[j].is_empty() {
                f -= (1.0 - sj).ln();
            }
        }
        f -= z.iter().map(|x| x.ln()).sum::<f64>();
        Some(f)
    }

    fn derivatives(&self, z: &DVector<f64>, t: f64) -> (DVector<f64>, DMatrix<f64>) {
        let k = self.vars.len();
        let (v, s) = self.values(z);
        let mut g = DVector::zeros(k);
        let mut h = DMatrix::zeros(k, k);
        for (i, members) in self.by_buyer.iter().enumerate() {
            if members.is_empty() {
                continue;
            }
            let mut a = -t * self.budgets[i] / v[i];
            let mut b = t * self.budgets[i] / (v[i] * v[i]);
            if let Some(c) = self.caps[i] {
                let slack = c - v[i];
                a += 1.0 / slack;
                b += 1.0 / (slack * slack);
            }
            for &e in members {
                let ue = self.vars[e].2;
                g[e] += a * ue;
                for &e2 in members {
                    h[(e, e2)] += b * ue * self.vars[e2].2;
                }
            }
        }
        for (j, members) in self.by_good.iter().enumerate() {
            let slack = 1.0 - s[j];
            for &e in members {
                g[e] += 1.0 / slack;
                for &e2 in members {
                    h[(e, e2)] += 1.0 / (slack * slack);
                }
            }
        }
        for e in 0..k {
            g[e] -= 1.0 / z[e];
            h[(e, e)] += 1.0 / (z[e] * z[e]);
        }
        (g, h)
    }
}

const MAX_NEWTON_STEPS: usize = 20_000;
const MAX_CENTERING_STEPS: usize = 100;

/// Solves the program to a duality gap of at most `tol` times the total
/// budget.
pub fn solve_eg_numeric(market: &Market, tol: f64) -> Result<EgSolution, OracleError> {
    if !(tol >= 1e-9) {
        return Err(OracleError::Tolerance);
    }
    let n = market.num_buyers();
    let m = market.num_goods();

    // budgets as shares of the total; utilities per buyer relative to the
    // largest, so every v_i is O(1)
    let total: Rational = market.budgets().iter().fold(Rational::zero(), |a, b| a + b);
    let mut vars = Vec::new();
    let mut utility_scale = vec![1.0; n];
    let mut caps = vec![None; n];
    let mut by_buyer = vec![Vec::new(); n];
    let mut by_good = vec![Vec::new(); m];
    for i in 0..n {
        let top = market.utilities()[i].iter().max().cloned().unwrap_or_else(Rational::zero);
        if top.is_zero() {
            continue;
        }
        utility_scale[i] = to_f64(&top);
        for j in 0..m {
            let u = market.utility(i, j);
            if !u.is_zero() {
                by_buyer[i].push(vars.len());
                by_good[j].push(vars.len());
                vars.push((i, j, to_f64(&(u / &top))));
            }
        }
        if let Extended::Finite(c) = market.cap(i) {
            caps[i] = Some(to_f64(&(c / &top)));
        }
    }
    let budgets: Vec<f64> = market.budgets().iter().map(|b| to_f64(&(b / &total))).collect();
    let problem = Problem {
        vars,
        budgets,
        caps,
        by_buyer,
        by_good,
    };
    let k = problem.vars.len();

    // strictly feasible start: split each good evenly with a spare share,
    // shrunk until every cap has room
    let mut z = DVector::from_iterator(
        k,
        problem.vars.iter().map(|&(_, j, _)| 1.0 / (problem.by_good[j].len() as f64 + 1.0)),
    );
    while !problem.feasible(&z) {
        z *= 0.5;
    }

    let barrier_terms = (k
        + problem.by_good.iter().filter(|g| !g.is_empty()).count()
        + problem.caps.iter().zip(&problem.by_buyer).filter(|(c, b)| c.is_some() && !b.is_empty()).count())
        as f64;
    let target_gap = tol;
    let mut t = 1.0;
    let mut steps = 0usize;
    loop {
        // centering; near the boundary at large t the decrement can stall
        // at rounding level, so each centering gets a bounded step count
        for _ in 0..MAX_CENTERING_STEPS {
            if steps >= MAX_NEWTON_STEPS {
                return Err(OracleError::NonConvergence(steps));
            }
            steps += 1;
            let (g, mut h) = problem.derivatives(&z, t);
            let scale = h.diagonal().max().max(1.0);
            let mut chol = h.clone().cholesky();
            let mut ridge = 1e-14 * scale;
            while chol.is_none() && ridge < scale {
                for e in 0..k {
                    h[(e, e)] += ridge;
                }
                chol = h.clone().cholesky();
                ridge *= 10.0;
            }
            let Some(chol) = chol else {
                return Err(OracleError::NonConvergence(steps));
            };
            let d = chol.solve(&(-&g));
            let decrement = -g.dot(&d);
            if !(decrement / 2.0 > 1e-12) {
                break;
            }
            let f0 = problem.value(&z, t).expect("iterate stays feasible");
            let mut step = 1.0;
            let mut moved = false;
            while step > 1e-20 {
                let cand = &z + step * &d;
                if let Some(f) = problem.value(&cand, t) {
                    if f <= f0 - 0.25 * step * decrement {
                        z = cand;
                        moved = true;
                        break;
                    }
                }
                step *= 0.5;
            }
            if !moved {
                break;
            }
        }
        if barrier_terms / t <= target_gap {
            break;
        }
        t *= 8.0;
    }

    let (v, s) = problem.values(&z);
    let mut allocation = vec![vec![0.0; m]; n];
    for (e, &(i, j, _)) in problem.vars.iter().enumerate() {
        allocation[i][j] = z[e];
    }
    let total_f = to_f64(&total);
    let prices = (0..m)
        .map(|j| {
            if problem.by_good[j].is_empty() {
                0.0
            } else {
                total_f / (t * (1.0 - s[j]))
            }
        })
        .collect();
    let utilities = (0..n)
        .map(|i| {
            let vi = v[i] * utility_scale[i];
            match market.cap(i) {
                Extended::Finite(c) => vi.min(to_f64(c)),
                Extended::Infinite => vi,
            }
        })
        .collect();
    Ok(EgSolution {
        utilities,
        allocation,
        prices,
        gap: barrier_terms / t,
        newton_steps: steps,
    })
}
