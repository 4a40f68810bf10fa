//! Exhaustive search over the internal links and external outlinks of a set
//! on small instances.
//!
//! Candidate links are numbered in lexicographic order, internal pairs
//! first. A configuration is a pair of bitmasks `(internal, external)` and is
//! visited with the internal mask in the outer loop. Configurations where
//! some node of `I` cannot reach the complement are skipped before any solve.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{Edge, NodeId, NodeSet, WebGraph};
use crate::linalg::solve_in_place;
use crate::pagerank::{self, RankingContext};
use crate::structures::{self, StructureConstraints};
use crate::tolerance;

/// Default limit on the number of free links.
pub const DEFAULT_CAP: u32 = 25;
/// Configurations within this distance of the maximum are all optimal.
pub const ARGMAX_TOL: f64 = 1e-12;

/// Which links of `I` the search may choose. The others are taken from the
/// input graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Scope {
    #[default]
    All,
    /// Internal links only, external outlinks fixed.
    Internal,
    /// External outlinks only, internal links fixed.
    Outlinks,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Configuration {
    pub internal: Vec<Edge>,
    pub external_out: Vec<Edge>,
    pub value: Option<f64>,
}

impl Configuration {
    /// The full graph: this configuration plus the fixed links of `g_fixed`
    /// that start outside `I`.
    pub fn graph(&self, g_fixed: &WebGraph, set: &NodeSet) -> Result<WebGraph> {
        let fixed = g_fixed
            .edges()
            .into_iter()
            .filter(|&(i, _)| !set.contains(i));
        WebGraph::new(
            g_fixed.n(),
            fixed
                .chain(self.internal.iter().copied())
                .chain(self.external_out.iter().copied()),
        )
    }
}

struct Space {
    n: usize,
    members: Vec<NodeId>,
    internal: Vec<Edge>,
    external: Vec<Edge>,
    /// `(local source, local target)` for each internal bit.
    internal_local: Vec<(usize, usize)>,
    /// Local source for each external bit.
    external_local: Vec<usize>,
    /// Children of nodes outside `I`, 0-based.
    fixed_children: Vec<Vec<usize>>,
    min_outlinks: u32,
    internal_range: std::ops::Range<u64>,
    external_range: std::ops::Range<u64>,
}

impl Space {
    fn new(
        g_fixed: &WebGraph,
        set: &NodeSet,
        constraints: &StructureConstraints,
        scope: Scope,
        cap: u32,
    ) -> Result<Self> {
        let n = g_fixed.n();
        set.check_range(n)?;
        if set.is_empty() {
            return Err(Error::EmptySet);
        }
        let comp = set.complement(n);
        if comp.is_empty() {
            return Err(Error::EmptyComplement);
        }
        for j in comp.iter() {
            if g_fixed.outdegree(j) == 0 {
                return Err(Error::Dangling(vec![j]));
            }
        }
        let members: Vec<NodeId> = set.iter().collect();
        let mut internal = Vec::new();
        let mut internal_local = Vec::new();
        let mut external = Vec::new();
        let mut external_local = Vec::new();
        for (a, &i) in members.iter().enumerate() {
            for (b, &j) in members.iter().enumerate() {
                if i != j || constraints.allow_self_links {
                    internal.push((i, j));
                    internal_local.push((a, b));
                }
            }
        }
        for (a, &i) in members.iter().enumerate() {
            for j in comp.iter() {
                external.push((i, j));
                external_local.push(a);
            }
        }
        let fixed_mask = |pairs: &[Edge], inside: bool| -> Result<u64> {
            let mut mask = 0u64;
            let links = g_fixed
                .edges()
                .into_iter()
                .filter(|&(i, j)| set.contains(i) && set.contains(j) == inside);
            for (i, j) in links {
                match pairs.iter().position(|&e| e == (i, j)) {
                    Some(bit) => mask |= 1 << bit,
                    None => {
                        return Err(Error::Precondition(format!(
                            "fixed link ({i},{j}) violates the constraints"
                        )))
                    }
                }
            }
            Ok(mask)
        };
        let full = |pairs: &[Edge]| 0..1u64 << pairs.len();
        let single = |m: u64| m..m + 1;
        let (internal_range, external_range, bits) = match scope {
            Scope::All => (
                full(&internal),
                full(&external),
                internal.len() + external.len(),
            ),
            Scope::Internal => (
                full(&internal),
                single(fixed_mask(&external, false)?),
                internal.len(),
            ),
            Scope::Outlinks => (
                single(fixed_mask(&internal, true)?),
                full(&external),
                external.len(),
            ),
        };
        let bits = bits as u32;
        if bits > cap {
            return Err(Error::CapExceeded { bits, cap });
        }
        let fixed_children = (1..=n)
            .map(|k| {
                if set.contains(k) {
                    Vec::new()
                } else {
                    g_fixed.children(k).map(|j| j - 1).collect()
                }
            })
            .collect();
        Ok(Space {
            n,
            members,
            internal,
            external,
            internal_local,
            external_local,
            fixed_children,
            min_outlinks: constraints.outlinks() as u32,
            internal_range,
            external_range,
        })
    }

    fn internal_masks(&self) -> std::ops::Range<u64> {
        self.internal_range.clone()
    }

    fn external_masks(&self) -> std::ops::Range<u64> {
        self.external_range.clone()
    }

    /// Assumption A and the outlink count, using bit operations only.
    fn admissible(&self, im: u64, em: u64) -> bool {
        if em.count_ones() < self.min_outlinks {
            return false;
        }
        let m = self.members.len();
        let mut reach = 0u32;
        for (bit, &a) in self.external_local.iter().enumerate() {
            if em >> bit & 1 == 1 {
                reach |= 1 << a;
            }
        }
        let full = (1u32 << m) - 1;
        loop {
            let before = reach;
            for (bit, &(a, b)) in self.internal_local.iter().enumerate() {
                if im >> bit & 1 == 1 && reach >> b & 1 == 1 {
                    reach |= 1 << a;
                }
            }
            if reach == full {
                return true;
            }
            if reach == before {
                return false;
            }
        }
    }

    fn decode(&self, im: u64, em: u64, value: Option<f64>) -> Configuration {
        let pick = |pairs: &[Edge], mask: u64| {
            pairs
                .iter()
                .enumerate()
                .filter(|(bit, _)| mask >> bit & 1 == 1)
                .map(|(_, &e)| e)
                .collect()
        };
        Configuration {
            internal: pick(&self.internal, im),
            external_out: pick(&self.external, em),
            value,
        }
    }

    /// `(1 − c) zᵀ (I − cP)^-1 e_S` for one configuration.
    fn evaluate(
        &self,
        im: u64,
        em: u64,
        ctx: &RankingContext,
        target: &[bool],
        scratch: &mut Scratch,
    ) -> Result<f64> {
        let n = self.n;
        let c = ctx.c();
        let Scratch { a, b, children } = scratch;
        for row in children.iter_mut() {
            row.clear();
        }
        for (bit, &(i, j)) in self.internal.iter().enumerate() {
            if im >> bit & 1 == 1 {
                children[i - 1].push(j - 1);
            }
        }
        for (bit, &(i, j)) in self.external.iter().enumerate() {
            if em >> bit & 1 == 1 {
                children[i - 1].push(j - 1);
            }
        }
        a.iter_mut().for_each(|x| *x = 0.0);
        for i in 0..n {
            a[i * n + i] = 1.0;
            let ch = if children[i].is_empty() {
                &self.fixed_children[i]
            } else {
                &children[i]
            };
            let w = c / ch.len() as f64;
            for &j in ch {
                a[i * n + j] -= w;
            }
            b[i] = if target[i] { 1.0 } else { 0.0 };
        }
        solve_in_place(a, b, n)?;
        Ok((1.0 - c) * b.iter().zip(ctx.z()).map(|(x, z)| x * z).sum::<f64>())
    }
}

struct Scratch {
    a: Vec<f64>,
    b: Vec<f64>,
    children: Vec<Vec<usize>>,
}

impl Scratch {
    fn new(n: usize) -> Self {
        Scratch {
            a: vec![0.0; n * n],
            b: vec![0.0; n],
            children: vec![Vec::new(); n],
        }
    }
}

/// Every admissible configuration in enumeration order, without values.
pub fn enumerate_admissible(
    g_fixed: &WebGraph,
    set: &NodeSet,
    constraints: &StructureConstraints,
    cap: u32,
) -> Result<impl Iterator<Item = Configuration>> {
    let space = Space::new(g_fixed, set, constraints, Scope::All, cap)?;
    let (ni, ne) = (space.internal_masks(), space.external_masks());
    Ok(ni
        .flat_map(move |im| ne.clone().map(move |em| (im, em)))
        .filter_map(move |(im, em)| {
            if space.admissible(im, em) {
                Some(space.decode(im, em, None))
            } else {
                None
            }
        }))
}

/// Number of admissible configurations.
pub fn count_admissible(
    g_fixed: &WebGraph,
    set: &NodeSet,
    constraints: &StructureConstraints,
    cap: u32,
) -> Result<usize> {
    let space = Space::new(g_fixed, set, constraints, Scope::All, cap)?;
    let ne = space.external_masks();
    Ok(space
        .internal_masks()
        .into_par_iter()
        .map(|im| ne.clone().filter(|&em| space.admissible(im, em)).count())
        .sum())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BruteForceResult {
    pub optima: Vec<Configuration>,
    pub value: f64,
    pub count_enumerated: usize,
    /// Distance from the maximum to the best non-optimal value.
    pub top2_gap: Option<f64>,
    /// The maximum recomputed from the full PageRank vector of the first
    /// optimum.
    pub second_path_value: f64,
    pub argmax_tolerance: f64,
}

#[derive(Default)]
struct Acc {
    max: f64,
    best: Vec<(u64, u64, f64)>,
    below: f64,
    count: usize,
}

impl Acc {
    fn empty() -> Self {
        Acc {
            max: f64::NEG_INFINITY,
            best: Vec::new(),
            below: f64::NEG_INFINITY,
            count: 0,
        }
    }

    fn push(&mut self, im: u64, em: u64, value: f64) {
        self.count += 1;
        if value > self.max {
            self.max = value;
            let threshold = self.max - ARGMAX_TOL;
            let mut below = self.below;
            self.best.retain(|e| {
                if e.2 >= threshold {
                    true
                } else {
                    below = below.max(e.2);
                    false
                }
            });
            self.below = below;
        }
        if value >= self.max - ARGMAX_TOL {
            self.best.push((im, em, value));
        } else {
            self.below = self.below.max(value);
        }
    }

    fn merge(mut self, other: Acc) -> Acc {
        let max = self.max.max(other.max);
        let threshold = max - ARGMAX_TOL;
        let mut below = self.below.max(other.below);
        let mut best = Vec::with_capacity(self.best.len() + other.best.len());
        for e in self.best.drain(..).chain(other.best) {
            if e.2 >= threshold {
                best.push(e);
            } else {
                below = below.max(e.2);
            }
        }
        Acc {
            max,
            best,
            below,
            count: self.count + other.count,
        }
    }
}

fn search(
    g_fixed: &WebGraph,
    set: &NodeSet,
    objective: &NodeSet,
    ctx: &RankingContext,
    constraints: &StructureConstraints,
    scope: Scope,
    cap: u32,
) -> Result<BruteForceResult> {
    if ctx.z().len() != g_fixed.n() {
        return Err(Error::LengthMismatch {
            expected: g_fixed.n(),
            got: ctx.z().len(),
        });
    }
    let space = Space::new(g_fixed, set, constraints, scope, cap)?;
    let target = objective.mask(g_fixed.n());
    let ne = space.external_masks();
    let acc = space
        .internal_masks()
        .into_par_iter()
        .try_fold(
            || (Acc::empty(), Scratch::new(space.n)),
            |(mut acc, mut scratch), im| -> Result<_> {
                for em in ne.clone() {
                    if space.admissible(im, em) {
                        let value = space.evaluate(im, em, ctx, &target, &mut scratch)?;
                        acc.push(im, em, value);
                    }
                }
                Ok((acc, scratch))
            },
        )
        .map(|r| r.map(|(acc, _)| acc))
        .try_reduce(Acc::empty, |a, b| Ok(a.merge(b)))?;
    if acc.count == 0 {
        return Err(Error::Inapplicable("no admissible configuration".into()));
    }
    let mut best = acc.best;
    best.sort_by_key(|&(im, em, _)| (im, em));
    let optima: Vec<Configuration> = best
        .iter()
        .map(|&(im, em, value)| space.decode(im, em, Some(value)))
        .collect();
    let first = optima[0].graph(g_fixed, set)?;
    let second_path_value = pagerank::pagerank(&first, ctx)?.set_sum(objective);
    Ok(BruteForceResult {
        value: acc.max,
        top2_gap: acc.below.is_finite().then_some(acc.max - acc.below),
        count_enumerated: acc.count,
        optima,
        second_path_value,
        argmax_tolerance: ARGMAX_TOL,
    })
}

/// All admissible configurations of maximal set PageRank.
pub fn brute_force_optimum(
    g_fixed: &WebGraph,
    set: &NodeSet,
    ctx: &RankingContext,
    constraints: &StructureConstraints,
    cap: u32,
) -> Result<BruteForceResult> {
    brute_force_scoped(g_fixed, set, ctx, constraints, Scope::All, cap)
}

/// Like [`brute_force_optimum`], choosing only the links named by `scope`.
pub fn brute_force_scoped(
    g_fixed: &WebGraph,
    set: &NodeSet,
    ctx: &RankingContext,
    constraints: &StructureConstraints,
    scope: Scope,
    cap: u32,
) -> Result<BruteForceResult> {
    let objective = match &constraints.target_set {
        Some(s) if !s.is_subset(set) => return Err(Error::TargetNotSubset),
        Some(s) => s.clone(),
        None => set.clone(),
    };
    search(g_fixed, set, &objective, ctx, constraints, scope, cap)
}

/// Maximum over all admissible configurations, each evaluated by summing
/// the PageRank vector of the explicitly built graph.
pub fn second_path_max(
    g_fixed: &WebGraph,
    set: &NodeSet,
    ctx: &RankingContext,
    constraints: &StructureConstraints,
    cap: u32,
) -> Result<f64> {
    let objective = constraints
        .target_set
        .clone()
        .unwrap_or_else(|| set.clone());
    let mut max = f64::NEG_INFINITY;
    for config in enumerate_admissible(g_fixed, set, constraints, cap)? {
        let g = config.graph(g_fixed, set)?;
        max = max.max(pagerank::pagerank(&g, ctx)?.set_sum(&objective));
    }
    Ok(max)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TargetResult {
    #[serde(flatten)]
    pub result: BruteForceResult,
    /// Per optimum: the optimal website shape holds on `I`.
    pub shape_on_set: Vec<bool>,
    /// Per optimum: the optimal website shape holds on `S`.
    pub shape_on_target: Vec<bool>,
}

/// Maximizes the PageRank of `target ⊆ I` over the links of `I`.
pub fn brute_force_target(
    g_fixed: &WebGraph,
    set: &NodeSet,
    target: &NodeSet,
    ctx: &RankingContext,
    constraints: &StructureConstraints,
    cap: u32,
) -> Result<TargetResult> {
    if target.is_empty() {
        return Err(Error::EmptySet);
    }
    if !target.is_subset(set) {
        return Err(Error::TargetNotSubset);
    }
    let result = search(g_fixed, set, target, ctx, constraints, Scope::All, cap)?;
    let mut shape_on_set = Vec::new();
    let mut shape_on_target = Vec::new();
    for config in &result.optima {
        let g = config.graph(g_fixed, set)?;
        let on = |s: &NodeSet| -> Result<bool> {
            match structures::verify_website_opt_shape_with(&g, s, ctx, constraints) {
                Ok(cert) => Ok(cert.satisfied),
                Err(Error::AssumptionViolated(_)) => Ok(false),
                Err(e) => Err(e),
            }
        };
        shape_on_set.push(on(set)?);
        shape_on_target.push(on(target)?);
    }
    Ok(TargetResult {
        result,
        shape_on_set,
        shape_on_target,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConjectureRow {
    pub optimum: Configuration,
    /// `argmax_k v_k` in the optimal graph.
    pub head: Vec<NodeId>,
    pub head_has_external_parent: bool,
    pub parent_in_v: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConjectureReport {
    pub rows: Vec<ConjectureRow>,
    /// Optima whose chain head has no parent outside `I`.
    pub counterexample_candidates: usize,
}

/// For each optimum, whether the node of largest `v` has a parent outside
/// `I` and whether such a parent lies in `V`. Nothing is asserted.
pub fn conjecture_probe(
    g_fixed: &WebGraph,
    set: &NodeSet,
    ctx: &RankingContext,
    cap: u32,
) -> Result<ConjectureReport> {
    if !ctx.is_uniform() {
        return Err(Error::Precondition(
            "the probe requires a uniform personalization vector".into(),
        ));
    }
    if g_fixed.partition_links(set)?.external_in.is_empty() {
        return Err(Error::Precondition("I has no external inlink".into()));
    }
    let result = brute_force_optimum(g_fixed, set, ctx, &StructureConstraints::default(), cap)?;
    let mut rows = Vec::new();
    for optimum in result.optima {
        let g = optimum.graph(g_fixed, set)?;
        let v = pagerank::visit_vector(&g, set, ctx)?;
        let top = pagerank::top_set_of(&g, &v)?;
        let max = v.v.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let head: Vec<NodeId> = (1..=g.n())
            .filter(|&k| tolerance::approx_eq(v.get(k), max))
            .collect();
        let parents: Vec<NodeId> = head
            .iter()
            .flat_map(|&h| g.parents(h).collect::<Vec<_>>())
            .filter(|&j| !set.contains(j))
            .collect();
        rows.push(ConjectureRow {
            optimum,
            head,
            head_has_external_parent: !parents.is_empty(),
            parent_in_v: parents.iter().any(|&j| top.nodes.contains(j)),
        });
    }
    let counterexample_candidates = rows.iter().filter(|r| !r.head_has_external_parent).count();
    Ok(ConjectureReport {
        rows,
        counterexample_candidates,
    })
}
