use std::collections::{BTreeSet, VecDeque};

use num_traits::{Signed, Zero};

use super::OracleError;
use crate::flow::{is_balanced, max_flow, Flow, FlowNetwork};
use crate::rational::Rational;

/// Surplus vector of the balanced flow, by brute force over good subsets.
///
/// The goods with the highest balanced surplus form the largest set `T`
/// maximizing `(p(T) − M(N(T))) / |T|`, where `N(T)` are the buyers adjacent
/// to `T`; those buyers spend only on `T`. Removing `T` and `N(T)` and
/// repeating yields every level. Exponential in the number of goods.
pub fn balanced_surplus_targets(network: &FlowNetwork) -> Vec<Rational> {
    let m = network.num_goods();
    assert!(m < 24, "subset enumeration over {m} goods");
    let mut target = vec![Rational::zero(); m];
    let mut goods: Vec<usize> = (0..m).collect();
    let mut gone_buyers: BTreeSet<usize> = BTreeSet::new();
    let neighbors = |subset: &[usize], gone: &BTreeSet<usize>| -> BTreeSet<usize> {
        let set: BTreeSet<usize> = subset.iter().copied().collect();
        network
            .neighbors_of_goods(&set)
            .into_iter()
            .filter(|i| !gone.contains(i))
            .collect()
    };
    while !goods.is_empty() {
        let mut best: Option<(Rational, Vec<usize>)> = None;
        for mask in 1u32..(1u32 << goods.len()) {
            let subset: Vec<usize> = (0..goods.len()).filter(|b| mask >> b & 1 == 1).map(|b| goods[b]).collect();
            let price = subset.iter().fold(Rational::zero(), |a, &j| a + &network.sink_caps()[j]);
            let budget = neighbors(&subset, &gone_buyers)
                .iter()
                .fold(Rational::zero(), |a, &i| a + &network.source_caps()[i]);
            let density = (price - budget) / Rational::from_integer(subset.len().into());
            let better = match &best {
                None => true,
                Some((d, s)) => density > *d || (density == *d && subset.len() > s.len()),
            };
            if better {
                best = Some((density, subset));
            }
        }
        let (level, top) = best.expect("nonempty good set");
        for &j in &top {
            target[j] = level.clone();
        }
        gone_buyers.extend(neighbors(&top, &gone_buyers));
        goods.retain(|j| !top.contains(j));
    }
    target
}

const MAX_REROUTES: usize = 100_000;

/// Balances a maximum flow by moving money along residual paths from goods
/// receiving more than their balanced share to goods receiving less.
///
/// Each reroute either empties a reverse arc on its path or brings an
/// endpoint to its target surplus. The result is certified with
/// [`is_balanced`].
pub fn equalize_balanced(network: &FlowNetwork) -> Result<Flow, OracleError> {
    let start = max_flow(network);
    if !start.saturates_sources(network) {
        return Err(OracleError::NotSaturable);
    }
    equalize_from(network, start)
}

/// Same as [`equalize_balanced`] but starting from the given source-saturating
/// flow.
pub fn equalize_from(network: &FlowNetwork, start: Flow) -> Result<Flow, OracleError> {
    if start.check_feasible(network).is_err() || !start.saturates_sources(network) {
        return Err(OracleError::NotSaturable);
    }
    let target = balanced_surplus_targets(network);
    let edges = network.edges();
    let mut f: Vec<Rational> = start.edge_flows().to_vec();
    let mut surplus = start.surplus(network);
    let n = network.num_buyers();
    let m = network.num_goods();

    for _ in 0..MAX_REROUTES {
        let sources: Vec<usize> = (0..m).filter(|&k| surplus[k] < target[k]).collect();
        if sources.is_empty() {
            let flow = Flow::from_edge_flows(network, f).map_err(|_| OracleError::NotBalanced)?;
            if flow.surplus(network) != target || !is_balanced(network, &flow) {
                return Err(OracleError::NotBalanced);
            }
            return Ok(flow);
        }
        // BFS over goods: k → j through buyer i when f_ik > 0 and (i, j) is
        // an edge; remember the arc pair used to reach each good
        let mut via: Vec<Option<(usize, usize, usize)>> = vec![None; m];
        let mut seen = vec![false; m];
        let mut buyer_seen = vec![false; n];
        let mut queue: VecDeque<usize> = VecDeque::new();
        for &k in &sources {
            seen[k] = true;
            queue.push_back(k);
        }
        let mut sink = None;
        'search: while let Some(k) = queue.pop_front() {
            for (e_in, &(i, kk)) in edges.iter().enumerate() {
                if kk != k || !f[e_in].is_positive() || buyer_seen[i] {
                    continue;
                }
                buyer_seen[i] = true;
                for (e_out, &(i2, j)) in edges.iter().enumerate() {
                    if i2 != i || seen[j] {
                        continue;
                    }
                    seen[j] = true;
                    via[j] = Some((k, e_in, e_out));
                    if surplus[j] > target[j] {
                        sink = Some(j);
                        break 'search;
                    }
                    queue.push_back(j);
                }
            }
        }
        let Some(sink) = sink else {
            return Err(OracleError::NotBalanced);
        };
        let mut path = Vec::new();
        let mut cur = sink;
        while let Some((prev, e_in, e_out)) = via[cur] {
            path.push((e_in, e_out));
            cur = prev;
        }
        let origin = cur;
        let mut delta = (&surplus[sink] - &target[sink]).min(&target[origin] - &surplus[origin]);
        for &(e_in, _) in &path {
            if f[e_in] < delta {
                delta = f[e_in].clone();
            }
        }
        for &(e_in, e_out) in &path {
            f[e_in] -= &delta;
            f[e_out] += &delta;
        }
        surplus[origin] += &delta;
        surplus[sink] -= &delta;
    }
    Err(OracleError::IterationLimit(MAX_REROUTES))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::flow::balanced_flow;
    use crate::rational::{int, ratio};

    #[test]
    fn example2_from_skewed_start() {
        let net = FlowNetwork::new(
            vec![int(1), int(1)],
            vec![int(2), int(2)],
            vec![(0, 0), (0, 1), (1, 1)],
        )
        .unwrap();
        let skewed = Flow::from_edge_flows(&net, vec![int(0), int(1), int(1)]).unwrap();
        let f = equalize_from(&net, skewed).unwrap();
        assert_eq!(f.surplus(&net), vec![int(1), int(1)]);
    }

    #[test]
    fn balanced_input_unchanged() {
        let net = FlowNetwork::new(
            vec![int(1), int(1)],
            vec![int(2), int(2)],
            vec![(0, 0), (0, 1), (1, 1)],
        )
        .unwrap();
        let even = Flow::from_edge_flows(&net, vec![int(1), int(0), int(1)]).unwrap();
        assert_eq!(equalize_from(&net, even.clone()).unwrap(), even);
    }

    #[test]
    fn example1_init() {
        let net = FlowNetwork::new(vec![ratio(4, 5), int(1)], vec![int(4), int(4)], vec![(0, 0), (1, 0)]).unwrap();
        assert_eq!(balanced_surplus_targets(&net), vec![ratio(11, 5), int(4)]);
        let f = equalize_balanced(&net).unwrap();
        assert_eq!(f.surplus(&net), vec![ratio(11, 5), int(4)]);
    }

    #[test]
    fn agrees_with_balanced_flow() {
        let net = FlowNetwork::new(
            vec![int(3), int(2), int(4)],
            vec![int(3), int(2), int(4), int(5)],
            vec![(0, 0), (0, 1), (1, 1), (1, 2), (2, 2), (2, 3), (0, 3)],
        )
        .unwrap();
        let a = equalize_balanced(&net).unwrap();
        let b = balanced_flow(&net).unwrap();
        assert_eq!(a.surplus(&net), b.surplus(&net));
    }

    #[test]
    fn unsaturable() {
        let net = FlowNetwork::new(vec![int(3)], vec![int(2)], vec![(0, 0)]).unwrap();
        assert_eq!(equalize_balanced(&net).unwrap_err(), OracleError::NotSaturable);
    }
}
