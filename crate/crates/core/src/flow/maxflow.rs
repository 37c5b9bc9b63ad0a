//! Shortest-augmenting-path max-flow over rational capacities.
//!
//! Breadth-first augmentation terminates after O(VE) augmentations regardless
//! of the capacity values, so exact rationals are safe here.

use std::collections::VecDeque;

use num_traits::{Signed, Zero};

use crate::rational::Rational;

/// `None` is an unbounded capacity.
pub(crate) type Capacity = Option<Rational>;

pub(crate) struct Graph {
    head: Vec<usize>,
    cap: Vec<Capacity>,
    flow: Vec<Rational>,
    adj: Vec<Vec<usize>>,
}

impl Graph {
    pub(crate) fn new(nodes: usize) -> Self {
        Graph {
            head: Vec::new(),
            cap: Vec::new(),
            flow: Vec::new(),
            adj: vec![Vec::new(); nodes],
        }
    }

    /// Adds `u → v` and its reverse arc; returns the forward arc index.
    pub(crate) fn add_edge(&mut self, u: usize, v: usize, cap: Capacity) -> usize {
        let e = self.head.len();
        self.head.push(v);
        self.cap.push(cap);
        self.flow.push(Rational::zero());
        self.adj[u].push(e);
        self.head.push(u);
        self.cap.push(Some(Rational::zero()));
        self.flow.push(Rational::zero());
        self.adj[v].push(e + 1);
        e
    }

    pub(crate) fn flow(&self, e: usize) -> &Rational {
        &self.flow[e]
    }

    fn residual(&self, e: usize) -> Capacity {
        self.cap[e].as_ref().map(|c| c - &self.flow[e])
    }

    fn has_residual(&self, e: usize) -> bool {
        match &self.cap[e] {
            None => true,
            Some(c) => c > &self.flow[e],
        }
    }

    fn bfs(&self, s: usize) -> Vec<Option<usize>> {
        let mut parent: Vec<Option<usize>> = vec![None; self.adj.len()];
        let mut seen = vec![false; self.adj.len()];
        seen[s] = true;
        let mut queue = VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            for &e in &self.adj[u] {
                let v = self.head[e];
                if !seen[v] && self.has_residual(e) {
                    seen[v] = true;
                    parent[v] = Some(e);
                    queue.push_back(v);
                }
            }
        }
        parent
    }

    /// Augments to a maximum `s`–`t` flow and returns the added value.
    pub(crate) fn max_flow(&mut self, s: usize, t: usize) -> Rational {
        let mut total = Rational::zero();
        loop {
            let parent = self.bfs(s);
            if parent[t].is_none() {
                return total;
            }
            let mut bottleneck: Capacity = None;
            let mut v = t;
            while v != s {
                let e = parent[v].expect("path arc");
                if let Some(r) = self.residual(e) {
                    bottleneck = Some(match bottleneck {
                        Some(b) if b <= r => b,
                        _ => r,
                    });
                }
                v = self.head[e ^ 1];
            }
            let delta = bottleneck.expect("augmenting path of unbounded capacity");
            debug_assert!(delta.is_positive());
            let mut v = t;
            while v != s {
                let e = parent[v].expect("path arc");
                self.flow[e] += &delta;
                self.flow[e ^ 1] -= &delta;
                v = self.head[e ^ 1];
            }
            total += delta;
        }
    }

    /// Nodes reachable from `s` in the residual graph.
    pub(crate) fn reachable(&self, s: usize) -> Vec<bool> {
        let parent = self.bfs(s);
        let mut seen: Vec<bool> = parent.iter().map(Option::is_some).collect();
        seen[s] = true;
        seen
    }
}

/// A bipartite buyer/good network in local indices: `s → buyer` with
/// `source` capacity, unbounded `buyer → good` arcs, `good → t` with `sink`
/// capacity and optional `s → good` arcs.
pub(crate) struct Bipartite<'a> {
    pub source: &'a [Rational],
    pub sink: &'a [Rational],
    pub source_to_good: Option<&'a [Rational]>,
    pub edges: &'a [(usize, usize)],
}

pub(crate) struct BipartiteFlow {
    pub value: Rational,
    pub edge_flows: Vec<Rational>,
    /// Source side of the canonical (minimal) minimum cut.
    pub buyer_reached: Vec<bool>,
    pub good_reached: Vec<bool>,
}

impl Bipartite<'_> {
    pub(crate) fn solve(&self) -> BipartiteFlow {
        let n = self.source.len();
        let m = self.sink.len();
        let s = 0;
        let t = n + m + 1;
        let buyer = |i: usize| 1 + i;
        let good = |j: usize| 1 + n + j;
        let mut g = Graph::new(n + m + 2);
        for (i, c) in self.source.iter().enumerate() {
            g.add_edge(s, buyer(i), Some(c.clone()));
        }
        if let Some(extra) = self.source_to_good {
            for (j, c) in extra.iter().enumerate() {
                if c.is_positive() {
                    g.add_edge(s, good(j), Some(c.clone()));
                }
            }
        }
        let arcs: Vec<usize> = self
            .edges
            .iter()
            .map(|&(i, j)| g.add_edge(buyer(i), good(j), None))
            .collect();
        for (j, c) in self.sink.iter().enumerate() {
            g.add_edge(good(j), t, Some(c.clone()));
        }
        let value = g.max_flow(s, t);
        let reached = g.reachable(s);
        BipartiteFlow {
            value,
            edge_flows: arcs.iter().map(|&e| g.flow(e).clone()).collect(),
            buyer_reached: (0..n).map(|i| reached[buyer(i)]).collect(),
            good_reached: (0..m).map(|j| reached[good(j)]).collect(),
        }
    }
}
