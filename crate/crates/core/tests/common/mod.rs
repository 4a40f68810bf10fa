#![allow(dead_code)]

use linkrank::{fixtures, NodeSet, RankingContext, WebGraph};
use rand::Rng;

pub fn fixture(name: &str) -> WebGraph {
    fixtures::load(name).unwrap_or_else(|| panic!("no fixture {name}"))
}

pub fn uniform(g: &WebGraph) -> RankingContext {
    RankingContext::uniform(g.n(), 0.85).unwrap()
}

pub fn set(s: &str) -> NodeSet {
    s.parse().unwrap()
}

/// Positive stochastic vector with entries bounded away from zero.
pub fn random_z(rng: &mut impl Rng, n: usize) -> Vec<f64> {
    let raw: Vec<f64> = (0..n).map(|_| rng.random_range(0.1..1.0)).collect();
    let sum: f64 = raw.iter().sum();
    raw.into_iter().map(|x| x / sum).collect()
}

/// Random graph on `n` nodes in which every node has at least one outlink.
pub fn random_graph(rng: &mut impl Rng, n: usize, p: f64) -> WebGraph {
    let mut edges = Vec::new();
    for i in 1..=n {
        let before = edges.len();
        for j in 1..=n {
            if rng.random_bool(p) {
                edges.push((i, j));
            }
        }
        if edges.len() == before {
            edges.push((i, rng.random_range(1..=n)));
        }
    }
    WebGraph::new(n, edges).unwrap()
}

/// Random nonempty subset of `1..=n`, proper when `proper` is set and n > 1.
pub fn random_set(rng: &mut impl Rng, n: usize, proper: bool) -> NodeSet {
    loop {
        let s: NodeSet = (1..=n).filter(|_| rng.random_bool(0.4)).collect();
        if !s.is_empty() && (!proper || s.len() < n || n == 1) {
            return s;
        }
    }
}

/// A search instance: `I = {1..k}` with no links of its own, and random
/// outlinks for every external node.
pub struct Instance {
    pub g: WebGraph,
    pub set: NodeSet,
    pub ctx: RankingContext,
}

pub fn random_instance(
    rng: &mut impl Rng,
    index: usize,
    max_in: usize,
    max_out: usize,
) -> Instance {
    let k = rng.random_range(1..=max_in);
    let m = rng.random_range(1..=max_out);
    let n = k + m;
    let mut edges = Vec::new();
    for j in k + 1..=n {
        let before = edges.len();
        for t in 1..=n {
            if rng.random_bool(0.4) {
                edges.push((j, t));
            }
        }
        if edges.len() == before {
            edges.push((j, rng.random_range(1..=n)));
        }
    }
    let c = if index.is_multiple_of(2) { 0.85 } else { 0.5 };
    let ctx = if index % 4 < 2 {
        RankingContext::uniform(n, c).unwrap()
    } else {
        RankingContext::new(c, random_z(rng, n)).unwrap()
    };
    Instance {
        g: WebGraph::new(n, edges).unwrap(),
        set: (1..=k).collect(),
        ctx,
    }
}
