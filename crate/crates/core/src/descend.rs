//! The descending-price algorithm for the maximum-revenue modest MBB
//! equilibrium.
//!
//! Prices start high enough that every budget can be spent. Each phase
//! computes a balanced flow, picks the set `S` of goods that can reach a good
//! of maximum surplus, and scales the prices of `S` (and the active budgets of
//! the capped buyers `B'` adjacent to it) down by a factor `x` until one of
//! three events: an uncapped buyer of `B'` reaches its cap, a buyer outside
//! `B'` gains an equality edge into `S`, or a subset of `B'` becomes tight.
//! A tight set ends the phase. When nothing can stop the descent the goods of
//! `S` drop to price zero and are removed together with their (capped) buyers.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::{One, Pow, Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::equilibrium::Equilibrium;
use crate::flow::{balanced_flow, residual_reach, tight_set_scale, Flow, FlowError, FlowNetwork, TightSet};
use crate::market::{active_budget_for, equality_edges_over, mbb_over, normalize, strip_inert, Market, MarketError};
use crate::rational::{bit_lengths, Extended, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SolveError {
    #[error(transparent)]
    Market(#[from] MarketError),
    #[error(transparent)]
    Flow(#[from] FlowError),
    #[error("solver needs an integral market without inert buyers or unvalued goods")]
    NotNormalized,
    #[error("phase limit {limit} exceeded")]
    PhaseLimit { limit: u64 },
    #[error("phase {phase} exceeded {limit} iterations")]
    IterationLimit { phase: usize, limit: usize },
    #[error("surplus {total} left after termination")]
    SurplusNotCleared { total: Rational },
    #[error("solver invariant violated: {0}")]
    Invariant(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EventKind {
    /// An uncapped buyer reached its cap.
    Cap,
    /// A buyer outside `B'` gained an equality edge into `S`.
    NewEdge,
    /// A subset of `B'` became tight; ends the phase.
    TightSet,
    /// Prices of `S` reached zero; `S` and its buyers are removed.
    ZeroPrice,
}

impl EventKind {
    pub fn name(self) -> &'static str {
        match self {
            EventKind::Cap => "cap",
            EventKind::NewEdge => "new-edge",
            EventKind::TightSet => "tight-set",
            EventKind::ZeroPrice => "zero-price",
        }
    }
}

/// One committed event.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EventRecord {
    pub phase: usize,
    pub iteration: usize,
    pub kind: EventKind,
    /// The factor applied to the prices of `goods`.
    pub scale: Rational,
    /// Newly capped buyers, buyers gaining an edge, the tight set, or the
    /// removed buyers, depending on `kind`.
    pub buyers: Vec<usize>,
    /// The set `S` whose prices were scaled.
    pub goods: Vec<usize>,
    pub prices: Vec<Rational>,
    pub active_budgets: Vec<Rational>,
    /// Surplus vector of the most recent balanced flow.
    pub surpluses: Vec<Rational>,
}

/// Event candidates for the current iteration.
#[derive(Debug, Clone)]
pub struct NextEvent {
    pub kind: EventKind,
    pub scale: Rational,
    /// Buyers of `B'` that reach their cap at `scale`, if any do.
    pub capping: Vec<usize>,
    /// Buyers outside `B'` gaining an edge at `scale`.
    pub joining: Vec<usize>,
    pub tight: TightSet,
    pub cap_scale: Option<Rational>,
    pub edge_scale: Option<Rational>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PhaseStats {
    /// All iterations, including the one that ends the phase.
    pub iterations: usize,
    /// Iterations ending in a cap or a new edge, so not ending the phase.
    pub open_iterations: usize,
    /// `‖r‖²` of the balanced flow at the start of the phase.
    pub start_norm2: Rational,
    /// `‖r‖²` of the balanced flow at the start of the next phase.
    pub end_norm2: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SolveStats {
    pub buyers: usize,
    pub goods: usize,
    /// Largest normalized budget, cap or utility.
    pub max_value: BigInt,
    pub phases: Vec<PhaseStats>,
    /// Largest numerator or denominator bit length among committed prices.
    pub max_price_bits: u64,
    /// Largest numerator or denominator among committed prices.
    pub max_price_component: BigInt,
}

impl SolveStats {
    /// `log₂(m+n) + 3(m+n)·log₂ U`, the bit-length bound for committed prices.
    pub fn price_bit_bound(&self) -> f64 {
        let size = (self.buyers + self.goods) as f64;
        size.log2() + 3.0 * size * log2_big(&self.max_value)
    }

    /// `(m+n)·U^{3(m+n)}`: the bit-length bound as a bound on magnitudes.
    pub fn price_magnitude_bound(&self) -> BigInt {
        let size = self.buyers + self.goods;
        BigInt::from(size) * Pow::pow(&self.max_value, (3 * size) as u32)
    }

    /// Whether every committed price had numerator and denominator within
    /// [`price_magnitude_bound`](Self::price_magnitude_bound).
    pub fn prices_within_bound(&self) -> bool {
        self.max_price_component <= self.price_magnitude_bound()
    }
}

fn log2_big(v: &BigInt) -> f64 {
    let bits = v.bits();
    if bits <= 52 {
        v.to_f64().unwrap_or(1.0).log2()
    } else {
        let shift = bits - 52;
        (v >> shift).to_f64().unwrap_or(1.0).log2() + shift as f64
    }
}

/// Phase guard `8mn(log₂(m+n) + (m+n)·log₂U + 1)`.
fn phase_limit(n: usize, m: usize, u: &BigInt) -> u64 {
    let size = (n + m) as f64;
    (8.0 * (n * m) as f64 * (size.log2() + size * log2_big(u) + 1.0)).ceil() as u64
}

fn norm2(v: &[Rational]) -> Rational {
    v.iter().fold(Rational::zero(), |acc, r| acc + r * r)
}

/// Descending-price solver over a normalized market.
pub struct Solver {
    market: Market,
    prices: Vec<Rational>,
    active: Vec<Rational>,
    capped: Vec<bool>,
    buyer_deleted: Vec<bool>,
    good_deleted: Vec<bool>,
    /// Allocation rows of removed buyers, fixed when their goods hit zero.
    frozen: Vec<Vec<Rational>>,
    network: FlowNetwork,
    flow: Flow,
    surplus: Vec<Rational>,
    focus: BTreeSet<usize>,
    phase: usize,
    iteration: usize,
    epsilon: Rational,
    phase_limit: u64,
    trace: Vec<EventRecord>,
    stats: SolveStats,
}

/// Output of [`Solver::solve`], in the solver's (normalized) units.
#[derive(Debug, Clone)]
pub struct SolverOutput {
    pub prices: Vec<Rational>,
    pub allocation: Vec<Vec<Rational>>,
    pub trace: Vec<EventRecord>,
    pub stats: SolveStats,
}

impl Solver {
    /// Sets every price to the total budget and computes the active budgets.
    pub fn new(market: &Market) -> Result<Self, SolveError> {
        let n = market.num_buyers();
        let m = market.num_goods();
        if !market.is_integral()
            || (0..n).any(|i| market.is_inert_buyer(i))
            || (0..m).any(|j| market.is_unvalued_good(j))
        {
            return Err(SolveError::NotNormalized);
        }
        let total: Rational = market.budgets().iter().fold(Rational::zero(), |a, b| a + b);
        let prices = vec![total; m];
        let mut active = Vec::with_capacity(n);
        let mut capped = Vec::with_capacity(n);
        for i in 0..n {
            let alpha = mbb_over(market, &prices, i, 0..m);
            let (budget, is_capped) = active_budget_for(market.budget(i), market.cap(i), &alpha);
            active.push(budget);
            capped.push(is_capped);
        }
        let u = market.max_value();
        let size = n + m;
        let epsilon = Rational::new(
            BigInt::one(),
            BigInt::from(size) * Pow::pow(&u, (4 * size) as u32),
        );
        let mut solver = Solver {
            market: market.clone(),
            network: FlowNetwork::new(vec![], vec![], vec![])?,
            flow: Flow::zero(&FlowNetwork::new(vec![], vec![], vec![])?),
            surplus: prices.clone(),
            prices,
            active,
            capped,
            buyer_deleted: vec![false; n],
            good_deleted: vec![false; m],
            frozen: vec![vec![Rational::zero(); m]; n],
            focus: BTreeSet::new(),
            phase: 0,
            iteration: 0,
            epsilon,
            phase_limit: phase_limit(n, m, &u),
            trace: Vec::new(),
            stats: SolveStats {
                buyers: n,
                goods: m,
                max_value: u,
                ..SolveStats::default()
            },
        };
        solver.rebuild()?;
        solver.flow = Flow::zero(&solver.network);
        solver.note_price_bits();
        Ok(solver)
    }

    pub fn market(&self) -> &Market {
        &self.market
    }

    pub fn prices(&self) -> &[Rational] {
        &self.prices
    }

    pub fn active_budgets(&self) -> &[Rational] {
        &self.active
    }

    pub fn capped(&self) -> &[bool] {
        &self.capped
    }

    /// The current `S`.
    pub fn focus(&self) -> &BTreeSet<usize> {
        &self.focus
    }

    /// Surplus vector of the most recent balanced flow.
    pub fn surplus(&self) -> &[Rational] {
        &self.surplus
    }

    pub fn flow(&self) -> &Flow {
        &self.flow
    }

    pub fn network(&self) -> &FlowNetwork {
        &self.network
    }

    pub fn epsilon(&self) -> &Rational {
        &self.epsilon
    }

    pub fn phase(&self) -> usize {
        self.phase
    }

    pub fn trace(&self) -> &[EventRecord] {
        &self.trace
    }

    pub fn stats(&self) -> &SolveStats {
        &self.stats
    }

    fn live_goods(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.market.num_goods()).filter(|&j| !self.good_deleted[j])
    }

    fn live_buyers(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.market.num_buyers()).filter(|&i| !self.buyer_deleted[i])
    }

    fn alpha(&self, buyer: usize) -> Extended {
        mbb_over(&self.market, &self.prices, buyer, self.live_goods())
    }

    /// Rebuilds `N_p` from the current prices and active budgets.
    fn rebuild(&mut self) -> Result<(), SolveError> {
        let edges = equality_edges_over(&self.market, &self.prices, self.live_buyers(), || self.live_goods());
        self.network = FlowNetwork::new(self.active.clone(), self.prices.clone(), edges)?;
        Ok(())
    }

    fn rebalance(&mut self) -> Result<(), SolveError> {
        self.flow = balanced_flow(&self.network)?;
        self.surplus = self.flow.surplus(&self.network);
        Ok(())
    }

    fn note_price_bits(&mut self) {
        for p in &self.prices {
            let (num, den) = bit_lengths(p);
            self.stats.max_price_bits = self.stats.max_price_bits.max(num).max(den);
            for part in [p.numer(), p.denom()] {
                if part > &self.stats.max_price_component {
                    self.stats.max_price_component = part.clone();
                }
            }
        }
    }

    /// Recomputes the balanced flow; if the total surplus exceeds `ε`, opens a
    /// new phase with `S` the goods that can reach the lowest-index good of
    /// maximum surplus. Returns `false` once the surplus is below `ε`.
    pub fn start_phase(&mut self) -> Result<bool, SolveError> {
        self.rebuild()?;
        self.rebalance()?;
        let norm = norm2(&self.surplus);
        if let Some(last) = self.stats.phases.last_mut() {
            last.end_norm2 = norm.clone();
        }
        let total = self.surplus.iter().fold(Rational::zero(), |a, r| a + r);
        if total <= self.epsilon {
            return Ok(false);
        }
        if self.stats.phases.len() as u64 >= self.phase_limit {
            return Err(SolveError::PhaseLimit { limit: self.phase_limit });
        }
        let delta = self.surplus.iter().max().expect("market has goods").clone();
        let top = self
            .surplus
            .iter()
            .position(|r| r == &delta)
            .expect("maximum is attained");
        self.focus = residual_reach(&self.network, &self.flow, &BTreeSet::from([top]));
        self.phase += 1;
        self.iteration = 0;
        self.stats.phases.push(PhaseStats {
            iterations: 0,
            open_iterations: 0,
            start_norm2: norm.clone(),
            end_norm2: norm,
        });
        Ok(true)
    }

    /// `B'`: live buyers with an equality edge into `S`.
    pub fn focus_buyers(&self) -> BTreeSet<usize> {
        self.network.neighbors_of_goods(&self.focus)
    }

    /// Computes the three event scales and picks the largest. Ties go to the
    /// tight set, then to capping, then to a new edge.
    pub fn next_event(&self) -> Result<NextEvent, SolveError> {
        let buyers = self.focus_buyers();

        let mut cap_scale: Option<Rational> = None;
        let mut capping = Vec::new();
        for &i in buyers.iter().filter(|&&i| !self.capped[i]) {
            let Extended::Finite(cap) = self.market.cap(i) else { continue };
            let Extended::Finite(alpha) = self.alpha(i) else {
                return Err(SolveError::Invariant(format!("buyer {i} faces a zero price")));
            };
            let x = self.market.budget(i) * alpha / cap;
            match &cap_scale {
                Some(best) if &x < best => {}
                Some(best) if &x == best => capping.push(i),
                _ => {
                    cap_scale = Some(x);
                    capping = vec![i];
                }
            }
        }

        let mut edge_scale: Option<Rational> = None;
        let mut joining = Vec::new();
        for h in self.live_buyers().filter(|h| !buyers.contains(h)) {
            let Extended::Finite(alpha) = self.alpha(h) else {
                return Err(SolveError::Invariant(format!("buyer {h} faces a zero price")));
            };
            let mut best_here: Option<Rational> = None;
            for &j in &self.focus {
                let u = self.market.utility(h, j);
                if u.is_zero() {
                    continue;
                }
                let x = u / (&alpha * &self.prices[j]);
                if best_here.as_ref().map_or(true, |b| &x > b) {
                    best_here = Some(x);
                }
            }
            let Some(x) = best_here else { continue };
            match &edge_scale {
                Some(best) if &x < best => {}
                Some(best) if &x == best => joining.push(h),
                _ => {
                    edge_scale = Some(x);
                    joining = vec![h];
                }
            }
        }

        let tight = tight_set_scale(&self.network, &self.focus, &buyers, &self.capped)?;

        let zero = Rational::zero();
        let best = [Some(&tight.scale), cap_scale.as_ref(), edge_scale.as_ref()]
            .into_iter()
            .flatten()
            .max()
            .cloned()
            .unwrap_or(zero);
        let kind = if best.is_zero() {
            EventKind::ZeroPrice
        } else if tight.scale == best {
            EventKind::TightSet
        } else if cap_scale.as_ref() == Some(&best) {
            EventKind::Cap
        } else {
            EventKind::NewEdge
        };
        if cap_scale.as_ref() != Some(&best) {
            capping.clear();
        }
        if edge_scale.as_ref() != Some(&best) {
            joining.clear();
        }
        Ok(NextEvent {
            kind,
            scale: best,
            capping,
            joining,
            tight,
            cap_scale,
            edge_scale,
        })
    }

    /// Applies `event`: scales `S` and the capped budgets of `B'`, then
    /// performs every structural change that happens at that scale. Returns
    /// whether the phase continues.
    pub fn commit_event(&mut self, event: &NextEvent) -> Result<bool, SolveError> {
        let buyers = self.focus_buyers();
        self.iteration += 1;
        if let Some(stats) = self.stats.phases.last_mut() {
            stats.iterations = self.iteration;
        }
        let x = &event.scale;

        if event.kind == EventKind::ZeroPrice {
            self.remove_zero_priced(&buyers)?;
        } else {
            for &j in &self.focus {
                self.prices[j] *= x;
            }
            for &i in buyers.iter().filter(|&&i| self.capped[i]) {
                self.active[i] *= x;
            }
            for &i in &event.capping {
                self.capped[i] = true;
            }
            self.rebuild()?;
        }
        self.note_price_bits();

        let continues = match event.kind {
            EventKind::TightSet | EventKind::ZeroPrice => false,
            EventKind::Cap | EventKind::NewEdge => {
                if !event.joining.is_empty() {
                    self.rebalance()?;
                    let reach = residual_reach(&self.network, &self.flow, &self.focus);
                    self.focus.extend(reach);
                }
                true
            }
        };

        let affected: Vec<usize> = match event.kind {
            EventKind::Cap => event.capping.clone(),
            EventKind::NewEdge => event.joining.clone(),
            EventKind::TightSet => event.tight.buyers.iter().copied().collect(),
            EventKind::ZeroPrice => buyers.iter().copied().collect(),
        };
        self.trace.push(EventRecord {
            phase: self.phase,
            iteration: self.iteration,
            kind: event.kind,
            scale: x.clone(),
            buyers: affected,
            goods: self.focus.iter().copied().collect(),
            prices: self.prices.clone(),
            active_budgets: self.active.clone(),
            surpluses: self.surplus.clone(),
        });

        if continues {
            if let Some(stats) = self.stats.phases.last_mut() {
                stats.open_iterations += 1;
            }
        }
        let limit = 2 * self.market.num_buyers() + 1;
        if continues && self.iteration >= limit {
            return Err(SolveError::IterationLimit {
                phase: self.phase,
                limit,
            });
        }
        Ok(continues)
    }

    /// Prices of `S` fall to zero. Every buyer of `B'` is capped and spends
    /// only on `S`; their bundles are fixed from a flow at the unscaled prices,
    /// where each spends exactly `c_i/α_i` on MBB goods.
    fn remove_zero_priced(&mut self, buyers: &BTreeSet<usize>) -> Result<(), SolveError> {
        if let Some(&i) = buyers.iter().find(|&&i| !self.capped[i]) {
            return Err(SolveError::Invariant(format!("uncapped buyer {i} adjacent to zero-priced goods")));
        }
        let goods: Vec<usize> = self.focus.iter().copied().collect();
        let members: Vec<usize> = buyers.iter().copied().collect();
        let edges: Vec<(usize, usize)> = self
            .network
            .edges()
            .iter()
            .filter(|(i, j)| buyers.contains(i) && self.focus.contains(j))
            .map(|&(i, j)| {
                (
                    members.binary_search(&i).expect("member"),
                    goods.binary_search(&j).expect("member"),
                )
            })
            .collect();
        let sub = FlowNetwork::new(
            members.iter().map(|&i| self.active[i].clone()).collect(),
            goods.iter().map(|&j| self.prices[j].clone()).collect(),
            edges,
        )?;
        let flow = balanced_flow(&sub)?;
        for (e, &(bi, gj)) in sub.edges().iter().enumerate() {
            let (i, j) = (members[bi], goods[gj]);
            self.frozen[i][j] = &flow.edge_flows()[e] / &self.prices[j];
        }
        for &j in &goods {
            self.prices[j] = Rational::zero();
            self.good_deleted[j] = true;
        }
        for &i in &members {
            self.active[i] = Rational::zero();
            self.buyer_deleted[i] = true;
        }
        self.rebuild()
    }

    /// Runs iterations until the current phase ends.
    pub fn run_phase(&mut self) -> Result<(), SolveError> {
        loop {
            let event = self.next_event()?;
            if !self.commit_event(&event)? {
                return Ok(());
            }
        }
    }

    /// Runs phases until the surplus is cleared and returns the final prices
    /// and allocation.
    pub fn solve(mut self) -> Result<SolverOutput, SolveError> {
        while self.start_phase()? {
            self.run_phase()?;
        }
        if let Some(r) = self.surplus.iter().find(|r| !r.is_zero()) {
            let _ = r;
            let total = self.surplus.iter().fold(Rational::zero(), |a, r| a + r);
            return Err(SolveError::SurplusNotCleared { total });
        }
        let n = self.market.num_buyers();
        let m = self.market.num_goods();
        let mut allocation = self.frozen.clone();
        for (e, &(i, j)) in self.network.edges().iter().enumerate() {
            let f = &self.flow.edge_flows()[e];
            if f.is_positive() {
                allocation[i][j] = f / &self.prices[j];
            }
        }
        debug_assert_eq!(allocation.len(), n);
        debug_assert!(allocation.iter().all(|row| row.len() == m));
        Ok(SolverOutput {
            prices: self.prices,
            allocation,
            trace: self.trace,
            stats: self.stats,
        })
    }
}

/// Maximum-revenue modest MBB equilibrium with the event trace and run
/// statistics.
#[derive(Debug, Clone)]
pub struct Solution {
    pub equilibrium: Equilibrium,
    /// Events in original units and indices.
    pub trace: Vec<EventRecord>,
    /// Statistics of the normalized, reduced market actually solved.
    pub stats: SolveStats,
}

/// Computes the modest MBB equilibrium with coordinate-wise highest prices.
///
/// The market is rescaled to integers and stripped of buyers valuing nothing
/// (they get the empty bundle) and goods nobody values (price zero, unsold).
pub fn solve_max_revenue(market: &Market) -> Result<Solution, SolveError> {
    let n = market.num_buyers();
    let m = market.num_goods();
    if (0..n).all(|i| market.is_inert_buyer(i)) {
        let zeros = vec![vec![Rational::zero(); m]; n];
        return Ok(Solution {
            equilibrium: Equilibrium::from_allocation(market, vec![Rational::zero(); m], zeros),
            trace: Vec::new(),
            stats: SolveStats::default(),
        });
    }
    let normalized = normalize(market);
    let reduced = strip_inert(&normalized.market)?;
    let output = Solver::new(&reduced.market)?.solve()?;

    let scale = &normalized.budget_scale;
    let expand_goods = |values: &[Rational]| -> Vec<Rational> {
        let mut full = vec![Rational::zero(); m];
        for (k, &j) in reduced.goods.iter().enumerate() {
            full[j] = &values[k] / scale;
        }
        full
    };
    let expand_buyers = |values: &[Rational]| -> Vec<Rational> {
        let mut full = vec![Rational::zero(); n];
        for (k, &i) in reduced.buyers.iter().enumerate() {
            full[i] = &values[k] / scale;
        }
        full
    };

    let prices = expand_goods(&output.prices);
    let mut allocation = vec![vec![Rational::zero(); m]; n];
    for (k, &i) in reduced.buyers.iter().enumerate() {
        for (l, &j) in reduced.goods.iter().enumerate() {
            allocation[i][j] = output.allocation[k][l].clone();
        }
    }
    let trace = output
        .trace
        .iter()
        .map(|rec| EventRecord {
            phase: rec.phase,
            iteration: rec.iteration,
            kind: rec.kind,
            scale: rec.scale.clone(),
            buyers: rec.buyers.iter().map(|&k| reduced.buyers[k]).collect(),
            goods: rec.goods.iter().map(|&l| reduced.goods[l]).collect(),
            prices: expand_goods(&rec.prices),
            active_budgets: expand_buyers(&rec.active_budgets),
            surpluses: expand_goods(&rec.surpluses),
        })
        .collect();
    Ok(Solution {
        equilibrium: Equilibrium::from_allocation(market, prices, allocation),
        trace,
        stats: output.stats,
    })
}
