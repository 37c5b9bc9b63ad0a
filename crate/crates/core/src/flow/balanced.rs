//! Balanced flows: maximum flows minimizing the Euclidean norm of the
//! surplus vector.
//!
//! The surplus vector of a balanced flow is unique and splits the goods into
//! level classes. For a level `λ` the goods strictly below it form the
//! smallest minimizer of `h(T) = Σ_{j∈T} (p_j − λ) − M(B_T)`, where `B_T`
//! are the buyers whose equality edges all lie in `T`. Those buyers spend
//! only on `T` and nobody else does, so the two sides can be balanced
//! independently. Starting from the average level of a block, a single
//! max-flow either shows the block is uniform or splits off the goods below
//! the average; each split removes at least one good.

use std::collections::BTreeSet;

use num_traits::{Signed, Zero};

use super::maxflow::Bipartite;
use super::{max_flow, Flow, FlowError, FlowNetwork};
use crate::rational::{sum, Rational};

/// Computes the balanced flow of `network`.
///
/// Fails with [`FlowError::NotSaturable`] when no flow routes every active
/// budget. Blocks are processed in ascending good order, so the returned flow
/// is deterministic.
pub fn balanced_flow(network: &FlowNetwork) -> Result<Flow, FlowError> {
    let required = network.total_budget();
    let probe = max_flow(network);
    if probe.value() != required {
        return Err(FlowError::NotSaturable {
            routed: probe.value(),
            required,
        });
    }
    let mut edge_flows = vec![Rational::zero(); network.edges().len()];
    let mut pending = vec![Block {
        buyers: (0..network.num_buyers()).collect(),
        goods: (0..network.num_goods()).collect(),
    }];
    while let Some(block) = pending.pop() {
        if block.goods.is_empty() {
            continue;
        }
        match split(network, &block, &mut edge_flows)? {
            None => {}
            Some((low, high)) => {
                // pop order: low block first
                pending.push(high);
                pending.push(low);
            }
        }
    }
    let flow = Flow::from_edge_flows(network, edge_flows)?;
    debug_assert!(flow.saturates_sources(network));
    Ok(flow)
}

struct Block {
    buyers: Vec<usize>,
    goods: Vec<usize>,
}

/// Either writes the uniform-surplus flow of `block` into `edge_flows` and
/// returns `None`, or returns the split into goods below the block's average
/// level and the rest.
fn split(
    network: &FlowNetwork,
    block: &Block,
    edge_flows: &mut [Rational],
) -> Result<Option<(Block, Block)>, FlowError> {
    let good_set: BTreeSet<usize> = block.goods.iter().copied().collect();
    let local_good = |j: usize| block.goods.binary_search(&j).ok();

    let mut local_edges = Vec::new();
    let mut global_edges = Vec::new();
    for (bi, &i) in block.buyers.iter().enumerate() {
        for &e in network.buyer_edges(i) {
            let j = network.edges()[e].1;
            if let Some(gj) = local_good(j) {
                local_edges.push((bi, gj));
                global_edges.push(e);
            }
        }
    }
    let budgets: Vec<Rational> = block.buyers.iter().map(|&i| network.source_caps()[i].clone()).collect();
    let prices: Vec<Rational> = block.goods.iter().map(|&j| network.sink_caps()[j].clone()).collect();
    let demand = sum(&budgets);
    let supply = sum(&prices);
    let level = (&supply - &demand) / Rational::from_integer(block.goods.len().into());

    // Minimize h(T): goods above the level pay p_j − λ to join T, goods below
    // it are paid λ − p_j; a buyer joins T only if all its edges do.
    let above: Vec<Rational> = prices
        .iter()
        .map(|p| if p > &level { p - &level } else { Rational::zero() })
        .collect();
    let below: Vec<Rational> = prices
        .iter()
        .map(|p| if p < &level { &level - p } else { Rational::zero() })
        .collect();
    let cut = Bipartite {
        source: &budgets,
        sink: &above,
        source_to_good: Some(&below),
        edges: &local_edges,
    }
    .solve();
    let low_goods: Vec<usize> = block
        .goods
        .iter()
        .zip(&cut.good_reached)
        .filter(|(_, &r)| r)
        .map(|(&j, _)| j)
        .collect();

    if low_goods.is_empty() {
        // every good sits exactly at `level`
        if level.is_negative() || cut.value != demand {
            return Err(FlowError::NotSaturable {
                routed: cut.value,
                required: demand,
            });
        }
        for (e, f) in global_edges.iter().zip(cut.edge_flows) {
            edge_flows[*e] = f;
        }
        return Ok(None);
    }

    let low_set: BTreeSet<usize> = low_goods.iter().copied().collect();
    let (low_buyers, high_buyers): (Vec<usize>, Vec<usize>) = block.buyers.iter().partition(|&&i| {
        network
            .buyer_edges(i)
            .iter()
            .map(|&e| network.edges()[e].1)
            .filter(|j| good_set.contains(j))
            .all(|j| low_set.contains(&j))
    });
    let high_goods: Vec<usize> = block.goods.iter().copied().filter(|j| !low_set.contains(j)).collect();
    if high_goods.is_empty() {
        // the whole block below its own average is impossible unless the
        // budgets exceed what the block can absorb
        return Err(FlowError::NotSaturable {
            routed: cut.value,
            required: demand,
        });
    }
    Ok(Some((
        Block {
            buyers: low_buyers,
            goods: low_goods,
        },
        Block {
            buyers: high_buyers,
            goods: high_goods,
        },
    )))
}
