//! Rank-one outlink mutations.
//!
//! Replacing the child set of one node changes a single row of `P`, so the
//! new set PageRank follows from the old one by a Sherman–Morrison update:
//!
//! ```text
//! π̃ᵀe_I = πᵀe_I + c π_i (δᵀv) / (1 − c δᵀ(I − cP)^-1 e_i)
//! ```
//!
//! [`MutationAnalyzer`] caches the factorization, `v`, `π` and the columns
//! `(I − cP)^-1 e_i` so that scanning many mutations costs no extra
//! factorizations.

use std::cmp::Ordering;
use std::sync::OnceLock;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{NodeId, NodeSet, WebGraph};
use crate::pagerank::{
    self, set_pagerank_from, PageRankVector, RankingContext, VisitSystem, VisitVector,
};
use crate::tolerance;

/// Replacement of the whole child set of one node.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OutlinkMutation {
    node: NodeId,
    new_children: NodeSet,
}

impl OutlinkMutation {
    pub fn new(node: NodeId, new_children: NodeSet) -> Result<Self> {
        if new_children.is_empty() {
            return Err(Error::EmptyChildren);
        }
        Ok(OutlinkMutation { node, new_children })
    }

    /// The mutation that adds `(i, j)`.
    pub fn add_link(g: &WebGraph, i: NodeId, j: NodeId) -> Result<Self> {
        g.check_node(i)?;
        g.check_node(j)?;
        if g.has_edge(i, j) {
            return Err(Error::EdgePresent(i, j));
        }
        Self::new(i, g.children(i).chain([j]).collect())
    }

    /// The mutation that removes `(i, j)`.
    pub fn remove_link(g: &WebGraph, i: NodeId, j: NodeId) -> Result<Self> {
        if !g.has_edge(i, j) {
            return Err(Error::EdgeAbsent(i, j));
        }
        Self::new(i, g.children(i).filter(|&k| k != j).collect())
    }

    pub fn node(&self) -> NodeId {
        self.node
    }

    pub fn new_children(&self) -> &NodeSet {
        &self.new_children
    }

    pub fn apply(&self, g: &WebGraph) -> Result<WebGraph> {
        g.with_children(self.node, &self.new_children)
    }

    fn check(&self, g: &WebGraph) -> Result<()> {
        g.check_node(self.node)?;
        self.new_children.check_range(g.n())?;
        if g.outdegree(self.node) == 0 {
            return Err(Error::Dangling(vec![self.node]));
        }
        Ok(())
    }
}

/// Correction applied to row `i` of `P`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DeltaVector {
    pub delta: Vec<f64>,
}

impl DeltaVector {
    pub fn dot(&self, x: &[f64]) -> f64 {
        self.delta.iter().zip(x).map(|(a, b)| a * b).sum()
    }
}

/// `δ = Σ_{j new} e_j / d̃_i − Σ_{j old} e_j / d_i`.
pub fn delta_vector(g: &WebGraph, m: &OutlinkMutation) -> Result<DeltaVector> {
    m.check(g)?;
    let mut delta = vec![0.0; g.n()];
    let d_new = m.new_children.len() as f64;
    for j in m.new_children.iter() {
        delta[j - 1] += 1.0 / d_new;
    }
    let d_old = g.outdegree(m.node) as f64;
    for j in g.children(m.node) {
        delta[j - 1] -= 1.0 / d_old;
    }
    Ok(DeltaVector { delta })
}

/// Direction of the change of the set PageRank.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Change {
    Increase,
    Decrease,
    Unchanged,
}

impl Change {
    pub fn as_str(self) -> &'static str {
        match self {
            Change::Increase => "increase",
            Change::Decrease => "decrease",
            Change::Unchanged => "unchanged",
        }
    }
}

/// Outcome of evaluating one mutation through the rank-one update.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MutationReport {
    pub old_value: f64,
    pub new_value: f64,
    /// `δᵀv`.
    pub delta_v: f64,
    /// `1 − c δᵀ(I − cP)^-1 e_i`, bounded below by `1 − c`.
    pub denominator: f64,
    pub change: Change,
    /// Set when `|δᵀv|` fell inside the equality band and the sign was
    /// resolved to `unchanged`.
    pub at_tolerance: bool,
}

/// A proposition's predicted effect next to the computed one.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PropositionCheck {
    pub predicted: Change,
    pub report: MutationReport,
}

impl PropositionCheck {
    pub fn agrees(&self) -> bool {
        self.predicted == self.report.change
    }
}

/// Cached state for evaluating mutations of one `(graph, I, ctx)` triple.
pub struct MutationAnalyzer<'g> {
    sys: VisitSystem<'g>,
    ctx: RankingContext,
    v: VisitVector,
    pi: PageRankVector,
    value: f64,
    no_access: Vec<bool>,
    columns: Vec<OnceLock<Vec<f64>>>,
}

impl<'g> MutationAnalyzer<'g> {
    pub fn new(g: &'g WebGraph, set: &NodeSet, ctx: &RankingContext) -> Result<Self> {
        let sys = VisitSystem::new(g, ctx.c())?;
        let v = sys.visit_vector(set)?;
        let pi = sys.pagerank(ctx)?;
        let value = set_pagerank_from(&v, ctx);
        let comp = set.complement(g.n());
        let no_access = if comp.is_empty() {
            vec![true; g.n()]
        } else {
            g.reaches_set(&comp.mask(g.n()))
                .into_iter()
                .map(|r| !r)
                .collect()
        };
        Ok(MutationAnalyzer {
            sys,
            ctx: ctx.clone(),
            v,
            pi,
            value,
            no_access,
            columns: (0..g.n()).map(|_| OnceLock::new()).collect(),
        })
    }

    pub fn graph(&self) -> &'g WebGraph {
        self.sys.graph()
    }

    pub fn set(&self) -> &NodeSet {
        &self.v.set
    }

    pub fn visit_vector(&self) -> &VisitVector {
        &self.v
    }

    pub fn pagerank(&self) -> &PageRankVector {
        &self.pi
    }

    /// Current set PageRank `(1 − c) zᵀv`.
    pub fn value(&self) -> f64 {
        self.value
    }

    fn has_access_out(&self, i: NodeId) -> bool {
        !self.no_access[i - 1]
    }

    /// `(I − cP)^-1 e_i`, computed once per node.
    fn column(&self, i: NodeId) -> Result<&[f64]> {
        let cell = &self.columns[i - 1];
        if let Some(col) = cell.get() {
            return Ok(col);
        }
        let mut e = vec![0.0; self.graph().n()];
        e[i - 1] = 1.0;
        let col = self.sys.solve(&e)?;
        Ok(cell.get_or_init(|| col))
    }

    /// Mean of `v` over a child set.
    fn mean_v(&self, nodes: impl Iterator<Item = NodeId>) -> f64 {
        let (sum, count) = nodes.fold((0.0, 0usize), |(s, k), j| (s + self.v.get(j), k + 1));
        sum / count as f64
    }

    pub fn evaluate(&self, m: &OutlinkMutation) -> Result<MutationReport> {
        let g = self.graph();
        let delta = delta_vector(g, m)?;
        let i = m.node;
        let delta_v = delta.dot(&self.v.v);
        let denominator = 1.0 - self.ctx.c() * delta.dot(self.column(i)?);
        let new_value = self.value + self.ctx.c() * self.pi.get(i) * delta_v / denominator;
        let mean_new = self.mean_v(m.new_children.iter());
        let mean_old = self.mean_v(g.children(i));
        let (change, at_tolerance) = match tolerance::compare(mean_new, mean_old) {
            Ordering::Greater => (Change::Increase, false),
            Ordering::Less => (Change::Decrease, false),
            Ordering::Equal => (Change::Unchanged, delta_v != 0.0),
        };
        Ok(MutationReport {
            old_value: self.value,
            new_value,
            delta_v,
            denominator,
            change,
            at_tolerance,
        })
    }

    pub fn updated_set_pagerank(&self, m: &OutlinkMutation) -> Result<f64> {
        Ok(self.evaluate(m)?.new_value)
    }

    pub fn change_sign(&self, m: &OutlinkMutation) -> Result<Change> {
        Ok(self.evaluate(m)?.change)
    }

    /// Adding `(i, j)` from `i ∈ I` towards a node with `v_j ≥ v_i` never
    /// lowers the set PageRank, and leaves it unchanged exactly when `i`
    /// cannot reach the complement.
    pub fn add_link_effect(&self, i: NodeId, j: NodeId) -> Result<PropositionCheck> {
        let g = self.graph();
        g.check_node(i)?;
        g.check_node(j)?;
        if !self.set().contains(i) {
            return Err(Error::Precondition(format!("node {i} is not in I")));
        }
        if g.has_edge(i, j) {
            return Err(Error::EdgePresent(i, j));
        }
        if tolerance::strictly_greater(self.v.get(i), self.v.get(j)) {
            return Err(Error::Inapplicable(format!(
                "v_{i} = {} exceeds v_{j} = {}",
                self.v.get(i),
                self.v.get(j)
            )));
        }
        let predicted = if self.has_access_out(i) {
            Change::Increase
        } else {
            Change::Unchanged
        };
        let report = self.evaluate(&OutlinkMutation::add_link(g, i, j)?)?;
        Ok(PropositionCheck { predicted, report })
    }

    /// Removing a link towards a child of minimal `v` never lowers the set
    /// PageRank, and leaves it unchanged exactly when all children tie.
    pub fn remove_link_effect(&self, i: NodeId, j: NodeId) -> Result<PropositionCheck> {
        let g = self.graph();
        if !g.has_edge(i, j) {
            return Err(Error::EdgeAbsent(i, j));
        }
        if g.outdegree(i) < 2 {
            return Err(Error::EmptyChildren);
        }
        let vj = self.v.get(j);
        if let Some(k) = g
            .children(i)
            .find(|&k| tolerance::strictly_greater(vj, self.v.get(k)))
        {
            return Err(Error::Inapplicable(format!(
                "{j} is not a child of minimal v: v_{k} = {} < v_{j} = {vj}",
                self.v.get(k)
            )));
        }
        let predicted = if g
            .children(i)
            .all(|k| tolerance::approx_eq(self.v.get(k), vj))
        {
            Change::Unchanged
        } else {
            Change::Increase
        };
        let report = self.evaluate(&OutlinkMutation::remove_link(g, i, j)?)?;
        Ok(PropositionCheck { predicted, report })
    }

    /// For a node without access to the complement, deleting any one of its
    /// links leaves the set PageRank unchanged. Returns whether every such
    /// deletion evaluates to `unchanged`.
    pub fn removal_no_access_noop(&self, i: NodeId) -> Result<bool> {
        let g = self.graph();
        g.check_node(i)?;
        if self.has_access_out(i) {
            return Err(Error::Precondition(format!(
                "node {i} has access to the complement"
            )));
        }
        if g.outdegree(i) < 2 {
            return Ok(true);
        }
        for j in g.children(i) {
            let report = self.evaluate(&OutlinkMutation::remove_link(g, i, j)?)?;
            if report.change != Change::Unchanged {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Path from `i0 ∈ I` into the complement along which `v` strictly
    /// decreases, following a child of minimal `v` at every step.
    pub fn decreasing_path(&self, i0: NodeId) -> Result<Vec<NodeId>> {
        let g = self.graph();
        g.check_node(i0)?;
        if !self.set().contains(i0) {
            return Err(Error::Precondition(format!("node {i0} is not in I")));
        }
        if !self.has_access_out(i0) {
            return Err(Error::Precondition(format!(
                "node {i0} has no access to the complement"
            )));
        }
        let mut path = vec![i0];
        let mut k = i0;
        while self.set().contains(k) {
            if path.len() > g.n() {
                return Err(Error::Precondition(
                    "no strictly decreasing path found".into(),
                ));
            }
            k = g
                .children(k)
                .min_by(|&a, &b| self.v.get(a).total_cmp(&self.v.get(b)).then(a.cmp(&b)))
                .expect("validated graph has no dangling node");
            path.push(k);
        }
        Ok(path)
    }
}

pub fn updated_set_pagerank(
    g: &WebGraph,
    set: &NodeSet,
    ctx: &RankingContext,
    m: &OutlinkMutation,
) -> Result<f64> {
    MutationAnalyzer::new(g, set, ctx)?.updated_set_pagerank(m)
}

pub fn change_sign(
    g: &WebGraph,
    set: &NodeSet,
    ctx: &RankingContext,
    m: &OutlinkMutation,
) -> Result<Change> {
    MutationAnalyzer::new(g, set, ctx)?.change_sign(m)
}

pub fn add_link_effect(
    g: &WebGraph,
    set: &NodeSet,
    ctx: &RankingContext,
    i: NodeId,
    j: NodeId,
) -> Result<PropositionCheck> {
    MutationAnalyzer::new(g, set, ctx)?.add_link_effect(i, j)
}

pub fn remove_link_effect(
    g: &WebGraph,
    set: &NodeSet,
    ctx: &RankingContext,
    i: NodeId,
    j: NodeId,
) -> Result<PropositionCheck> {
    MutationAnalyzer::new(g, set, ctx)?.remove_link_effect(i, j)
}

pub fn removal_no_access_noop(
    g: &WebGraph,
    set: &NodeSet,
    ctx: &RankingContext,
    i: NodeId,
) -> Result<bool> {
    MutationAnalyzer::new(g, set, ctx)?.removal_no_access_noop(i)
}

pub fn decreasing_path(
    g: &WebGraph,
    set: &NodeSet,
    ctx: &RankingContext,
    i0: NodeId,
) -> Result<Vec<NodeId>> {
    MutationAnalyzer::new(g, set, ctx)?.decreasing_path(i0)
}

/// Set PageRank of the explicitly mutated graph, the recompute path.
pub fn recomputed_set_pagerank(
    g: &WebGraph,
    set: &NodeSet,
    ctx: &RankingContext,
    m: &OutlinkMutation,
) -> Result<f64> {
    pagerank::set_pagerank(&m.apply(g)?, set, ctx)
}
