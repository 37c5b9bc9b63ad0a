//! The money-flow network: source to buyers with their active budgets,
//! unbounded buyer-to-good equality edges, goods to sink with their prices.

mod balanced;
pub(crate) mod maxflow;
mod tight;

use std::collections::{BTreeSet, VecDeque};

use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::rational::{sum, Rational};

pub use balanced::balanced_flow;
pub use tight::{tight_set_scale, TightSet};

use maxflow::Bipartite;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FlowError {
    #[error("invalid network: {0}")]
    InvalidNetwork(String),
    #[error("flow has {found} edge values, network has {expected} edges")]
    FlowDimension { expected: usize, found: usize },
    #[error("flow is infeasible: {0}")]
    Infeasible(String),
    #[error("flow is not maximum")]
    NotMaximum,
    #[error("source edges cannot be saturated: routed {routed}, budgets total {required}")]
    NotSaturable { routed: Rational, required: Rational },
    #[error("tight-set search needs positive surplus: prices {prices}, budgets {budgets}")]
    NoSurplus { prices: Rational, budgets: Rational },
}

/// `N_p` for given active budgets and prices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FlowNetwork {
    source_caps: Vec<Rational>,
    sink_caps: Vec<Rational>,
    edges: Vec<(usize, usize)>,
    buyer_edges: Vec<Vec<usize>>,
    good_edges: Vec<Vec<usize>>,
}

impl FlowNetwork {
    /// `source_caps[i]` is buyer `i`'s active budget, `sink_caps[j]` good
    /// `j`'s price and `edges` the buyer-good equality edges.
    pub fn new(
        source_caps: Vec<Rational>,
        sink_caps: Vec<Rational>,
        mut edges: Vec<(usize, usize)>,
    ) -> Result<Self, FlowError> {
        if let Some(i) = source_caps.iter().position(Signed::is_negative) {
            return Err(FlowError::InvalidNetwork(format!("negative source capacity at buyer {i}")));
        }
        if let Some(j) = sink_caps.iter().position(Signed::is_negative) {
            return Err(FlowError::InvalidNetwork(format!("negative sink capacity at good {j}")));
        }
        edges.sort_unstable();
        edges.dedup();
        let mut buyer_edges = vec![Vec::new(); source_caps.len()];
        let mut good_edges = vec![Vec::new(); sink_caps.len()];
        for (e, &(i, j)) in edges.iter().enumerate() {
            if i >= source_caps.len() || j >= sink_caps.len() {
                return Err(FlowError::InvalidNetwork(format!("edge ({i}, {j}) out of range")));
            }
            buyer_edges[i].push(e);
            good_edges[j].push(e);
        }
        Ok(FlowNetwork {
            source_caps,
            sink_caps,
            edges,
            buyer_edges,
            good_edges,
        })
    }

    pub fn num_buyers(&self) -> usize {
        self.source_caps.len()
    }

    pub fn num_goods(&self) -> usize {
        self.sink_caps.len()
    }

    pub fn source_caps(&self) -> &[Rational] {
        &self.source_caps
    }

    pub fn sink_caps(&self) -> &[Rational] {
        &self.sink_caps
    }

    /// Equality edges, sorted by buyer then good.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn total_budget(&self) -> Rational {
        sum(&self.source_caps)
    }

    /// Index of edge `(buyer, good)` if present.
    pub fn edge_index(&self, buyer: usize, good: usize) -> Option<usize> {
        self.edges.binary_search(&(buyer, good)).ok()
    }

    pub(crate) fn buyer_edges(&self, buyer: usize) -> &[usize] {
        &self.buyer_edges[buyer]
    }

    /// Buyers adjacent to any good of `goods`.
    pub fn neighbors_of_goods(&self, goods: &BTreeSet<usize>) -> BTreeSet<usize> {
        goods
            .iter()
            .flat_map(|&j| self.good_edges[j].iter().map(|&e| self.edges[e].0))
            .collect()
    }
}

/// A flow in a [`FlowNetwork`], stored per equality edge; source and sink
/// edge flows follow by conservation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Flow {
    edge_flows: Vec<Rational>,
    from_source: Vec<Rational>,
    to_sink: Vec<Rational>,
}

impl Flow {
    pub fn zero(network: &FlowNetwork) -> Flow {
        Flow::from_edge_flows(network, vec![Rational::zero(); network.edges.len()])
            .expect("zero flow matches its network")
    }

    /// Builds a flow from per-edge values aligned with [`FlowNetwork::edges`].
    pub fn from_edge_flows(network: &FlowNetwork, edge_flows: Vec<Rational>) -> Result<Flow, FlowError> {
        if edge_flows.len() != network.edges.len() {
            return Err(FlowError::FlowDimension {
                expected: network.edges.len(),
                found: edge_flows.len(),
            });
        }
        let mut from_source = vec![Rational::zero(); network.num_buyers()];
        let mut to_sink = vec![Rational::zero(); network.num_goods()];
        for (&(i, j), f) in network.edges.iter().zip(&edge_flows) {
            from_source[i] += f;
            to_sink[j] += f;
        }
        Ok(Flow {
            edge_flows,
            from_source,
            to_sink,
        })
    }

    pub fn edge_flows(&self) -> &[Rational] {
        &self.edge_flows
    }

    /// `f_ij`, zero when `(i, j)` is not an edge.
    pub fn on_edge(&self, network: &FlowNetwork, buyer: usize, good: usize) -> Rational {
        network
            .edge_index(buyer, good)
            .map(|e| self.edge_flows[e].clone())
            .unwrap_or_else(Rational::zero)
    }

    /// `f_si`.
    pub fn from_source(&self) -> &[Rational] {
        &self.from_source
    }

    /// `f_jt`.
    pub fn to_sink(&self) -> &[Rational] {
        &self.to_sink
    }

    pub fn value(&self) -> Rational {
        sum(&self.from_source)
    }

    /// Surplus `r_j = p_j − f_jt`.
    pub fn surplus(&self, network: &FlowNetwork) -> Vec<Rational> {
        network
            .sink_caps
            .iter()
            .zip(&self.to_sink)
            .map(|(p, f)| p - f)
            .collect()
    }

    /// Checks nonnegativity and the source and sink capacities.
    pub fn check_feasible(&self, network: &FlowNetwork) -> Result<(), FlowError> {
        if self.edge_flows.len() != network.edges.len() {
            return Err(FlowError::FlowDimension {
                expected: network.edges.len(),
                found: self.edge_flows.len(),
            });
        }
        if let Some(e) = self.edge_flows.iter().position(Signed::is_negative) {
            return Err(FlowError::Infeasible(format!("negative flow on edge {:?}", network.edges[e])));
        }
        for (i, (f, c)) in self.from_source.iter().zip(&network.source_caps).enumerate() {
            if f > c {
                return Err(FlowError::Infeasible(format!("buyer {i} sends {f} > {c}")));
            }
        }
        for (j, (f, c)) in self.to_sink.iter().zip(&network.sink_caps).enumerate() {
            if f > c {
                return Err(FlowError::Infeasible(format!("good {j} receives {f} > {c}")));
            }
        }
        Ok(())
    }

    pub fn saturates_sources(&self, network: &FlowNetwork) -> bool {
        self.from_source == network.source_caps
    }
}

/// A maximum `s`–`t` flow. Augmenting paths are breadth-first with nodes
/// scanned in index order, so the result is deterministic.
pub fn max_flow(network: &FlowNetwork) -> Flow {
    let solved = Bipartite {
        source: &network.source_caps,
        sink: &network.sink_caps,
        source_to_good: None,
        edges: &network.edges,
    }
    .solve();
    Flow::from_edge_flows(network, solved.edge_flows).expect("edge flows align with network")
}

/// An `s`–`t` cut; `s` and `t` are implicit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cut {
    pub source_buyers: BTreeSet<usize>,
    pub source_goods: BTreeSet<usize>,
    pub sink_buyers: BTreeSet<usize>,
    pub sink_goods: BTreeSet<usize>,
    pub capacity: Rational,
}

/// The canonical minimum cut: the source side is everything reachable from
/// `s` in the residual network of `flow`.
pub fn min_cut(network: &FlowNetwork, flow: &Flow) -> Result<Cut, FlowError> {
    flow.check_feasible(network)?;
    let n = network.num_buyers();
    let m = network.num_goods();
    let mut buyer_seen = vec![false; n];
    let mut good_seen = vec![false; m];
    let mut queue: VecDeque<Node> = VecDeque::new();
    for i in 0..n {
        if flow.from_source[i] < network.source_caps[i] {
            buyer_seen[i] = true;
            queue.push_back(Node::Buyer(i));
        }
    }
    while let Some(node) = queue.pop_front() {
        match node {
            Node::Buyer(i) => {
                for &e in &network.buyer_edges[i] {
                    let j = network.edges[e].1;
                    if !good_seen[j] {
                        good_seen[j] = true;
                        queue.push_back(Node::Good(j));
                    }
                }
            }
            Node::Good(j) => {
                if flow.to_sink[j] < network.sink_caps[j] {
                    return Err(FlowError::NotMaximum);
                }
                for &e in &network.good_edges[j] {
                    let i = network.edges[e].0;
                    if !buyer_seen[i] && flow.edge_flows[e].is_positive() {
                        buyer_seen[i] = true;
                        queue.push_back(Node::Buyer(i));
                    }
                }
            }
        }
    }
    let capacity = (0..n)
        .filter(|&i| !buyer_seen[i])
        .fold(Rational::zero(), |acc, i| acc + &network.source_caps[i])
        + (0..m)
            .filter(|&j| good_seen[j])
            .fold(Rational::zero(), |acc, j| acc + &network.sink_caps[j]);
    let split = |seen: &[bool], side: bool| -> BTreeSet<usize> {
        seen.iter()
            .enumerate()
            .filter(|(_, &s)| s == side)
            .map(|(k, _)| k)
            .collect()
    };
    Ok(Cut {
        source_buyers: split(&buyer_seen, true),
        source_goods: split(&good_seen, true),
        sink_buyers: split(&buyer_seen, false),
        sink_goods: split(&good_seen, false),
        capacity,
    })
}

enum Node {
    Buyer(usize),
    Good(usize),
}

/// Goods that can reach `targets` in the residual network without passing
/// through `s` or `t`. A good `k` steps to buyer `i` when `f_ik > 0`; a
/// buyer steps to any good it has an equality edge to. Targets are included.
pub fn residual_reach(network: &FlowNetwork, flow: &Flow, targets: &BTreeSet<usize>) -> BTreeSet<usize> {
    let mut good_seen = vec![false; network.num_goods()];
    let mut buyer_seen = vec![false; network.num_buyers()];
    let mut queue: VecDeque<usize> = VecDeque::new();
    for &j in targets {
        good_seen[j] = true;
        queue.push_back(j);
    }
    // walk arcs backwards: into good j from buyers adjacent to j, into buyer
    // i from goods i sends money to
    while let Some(j) = queue.pop_front() {
        for &e in &network.good_edges[j] {
            let i = network.edges[e].0;
            if buyer_seen[i] {
                continue;
            }
            buyer_seen[i] = true;
            for &e2 in &network.buyer_edges[i] {
                let k = network.edges[e2].1;
                if !good_seen[k] && flow.edge_flows[e2].is_positive() {
                    good_seen[k] = true;
                    queue.push_back(k);
                }
            }
        }
    }
    good_seen
        .iter()
        .enumerate()
        .filter(|(_, &s)| s)
        .map(|(j, _)| j)
        .collect()
}

/// Certifies a balanced flow: feasible, every source edge saturated, and no
/// residual good-to-good path `k → j` with `r_j > r_k`.
pub fn is_balanced(network: &FlowNetwork, flow: &Flow) -> bool {
    if flow.check_feasible(network).is_err() || !flow.saturates_sources(network) {
        return false;
    }
    let r = flow.surplus(network);
    (0..network.num_goods()).all(|j| {
        residual_reach(network, flow, &BTreeSet::from([j]))
            .iter()
            .all(|&k| r[k] >= r[j])
    })
}
