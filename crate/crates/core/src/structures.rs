//! Necessary shapes of PageRank-optimal link structures, their certificates,
//! and a constructor that searches over the admissible shapes.

use rayon::prelude::*;
use serde::Serialize;

use crate::calculus::{Change, MutationAnalyzer, OutlinkMutation};
use crate::error::{Error, Result};
use crate::graph::{Edge, NodeId, NodeSet, WebGraph};
use crate::pagerank::{self, RankingContext, TopSet, VisitSystem, VisitVector};
use crate::tolerance;

/// Default bound on `|I|` for the ordering search.
pub const MAX_PERM: usize = 8;
/// Largest number of candidate shapes the constructor will evaluate.
pub const MAX_CANDIDATES: usize = 5_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StructureConstraints {
    pub allow_self_links: bool,
    /// Minimum number of external outlinks `r`.
    pub min_external_outlinks: usize,
    pub target_set: Option<NodeSet>,
}

impl Default for StructureConstraints {
    fn default() -> Self {
        StructureConstraints {
            allow_self_links: true,
            min_external_outlinks: 1,
            target_set: None,
        }
    }
}

impl StructureConstraints {
    pub fn no_self_links() -> Self {
        StructureConstraints {
            allow_self_links: false,
            ..Self::default()
        }
    }

    pub fn min_outlinks(r: usize) -> Self {
        StructureConstraints {
            min_external_outlinks: r,
            ..Self::default()
        }
    }

    pub(crate) fn outlinks(&self) -> usize {
        self.min_external_outlinks.max(1)
    }
}

/// A failed rule, with the nodes or edges that witness it.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Violation {
    pub rule: &'static str,
    pub nodes: Vec<NodeId>,
    pub edges: Vec<Edge>,
    /// Signed distance to satisfying the rule, when it is a numeric one.
    pub margin: Option<f64>,
}

/// An informational check that does not affect `satisfied`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Note {
    pub name: &'static str,
    pub holds: bool,
    pub nodes: Vec<NodeId>,
    pub margin: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StructureCertificate {
    pub satisfied: bool,
    /// Nodes of `I` in the order that realizes the shape.
    pub ordering: Option<Vec<NodeId>>,
    pub violations: Vec<Violation>,
    pub leaking_nodes: NodeSet,
    pub v_snapshot: VisitVector,
    pub notes: Vec<Note>,
    /// Groups of nodes of `I` whose `v` values tie.
    pub tie_classes: Vec<NodeSet>,
}

impl StructureCertificate {
    pub fn note(&self, name: &str) -> Option<&Note> {
        self.notes.iter().find(|n| n.name == name)
    }

    pub fn has_violation(&self, rule: &str) -> bool {
        self.violations.iter().any(|v| v.rule == rule)
    }
}

fn violation(
    rule: &'static str,
    nodes: Vec<NodeId>,
    edges: Vec<Edge>,
    margin: Option<f64>,
) -> Violation {
    Violation {
        rule,
        nodes,
        edges,
        margin,
    }
}

fn require_assumption_a(g: &WebGraph, set: &NodeSet) -> Result<()> {
    if !g.check_accessibility(set)? {
        return Err(Error::AssumptionViolated(g.nodes_without_access(set)?));
    }
    Ok(())
}

/// Nodes of `set` by decreasing `v`, ties broken by id.
fn order_by_v(set: &NodeSet, v: &VisitVector) -> Vec<NodeId> {
    let mut order: Vec<NodeId> = set.iter().collect();
    order.sort_by(|&a, &b| v.get(b).total_cmp(&v.get(a)).then(a.cmp(&b)));
    order
}

/// Maximal runs of tied values in an ordering by decreasing `v`.
fn tie_classes(order: &[NodeId], v: &VisitVector) -> Vec<NodeSet> {
    let mut classes: Vec<Vec<NodeId>> = Vec::new();
    for &k in order {
        match classes.last_mut() {
            Some(last) if tolerance::approx_eq(v.get(last[0]), v.get(k)) => last.push(k),
            _ => classes.push(vec![k]),
        }
    }
    classes.into_iter().map(NodeSet::new).collect()
}

fn leaking(g: &WebGraph, set: &NodeSet) -> NodeSet {
    set.iter()
        .filter(|&i| g.children(i).any(|j| !set.contains(j)))
        .collect()
}

fn separation_note(v: &VisitVector) -> Note {
    let min_in = v.min_inside().unwrap_or(f64::NAN);
    let max_out = v.max_outside().unwrap_or(f64::NAN);
    Note {
        name: "separation",
        holds: tolerance::strictly_greater(min_in, max_out),
        nodes: Vec::new(),
        margin: Some(min_in - max_out),
    }
}

fn finish(
    ordering: Vec<NodeId>,
    violations: Vec<Violation>,
    leaking_nodes: NodeSet,
    v: VisitVector,
    notes: Vec<Note>,
) -> StructureCertificate {
    let tie_classes = tie_classes(&order_by_v(&v.set, &v), &v);
    StructureCertificate {
        satisfied: violations.is_empty(),
        ordering: Some(ordering),
        violations,
        leaking_nodes,
        v_snapshot: v,
        notes,
        tie_classes,
    }
}

/// The internal links of the optimal shape along `order`: every backward
/// link, the forward chain, and self-links when allowed.
pub fn website_internal_links(order: &[NodeId], allow_self_links: bool) -> Vec<Edge> {
    let mut edges = Vec::new();
    for (a, &i) in order.iter().enumerate() {
        for (b, &j) in order.iter().enumerate() {
            if b < a || b == a + 1 || (b == a && allow_self_links) {
                edges.push((i, j));
            }
        }
    }
    edges.sort_unstable();
    edges
}

/// Checks the external outlinks of `set` against the final classes of
/// `(I, E_I)`: outlinks leave final classes only, from a node of minimal
/// `v` in its class, towards `V`, and a class with internal links leaks
/// through exactly one link.
pub fn verify_outlink_structure(
    g: &WebGraph,
    set: &NodeSet,
    ctx: &RankingContext,
) -> Result<StructureCertificate> {
    require_assumption_a(g, set)?;
    let v = pagerank::visit_vector(g, set, ctx)?;
    let top = pagerank::top_set_of(g, &v)?;
    let classes = g.final_classes(set)?;
    let mut violations = Vec::new();
    let out = g.partition_links(set)?.external_out;

    for &(i, j) in &out {
        match classes.iter().find(|f| f.contains(i)) {
            None => violations.push(violation("final-class", vec![i], vec![(i, j)], None)),
            Some(f) => {
                let min = f.iter().map(|k| v.get(k)).fold(f64::INFINITY, f64::min);
                if tolerance::strictly_greater(v.get(i), min) {
                    violations.push(violation(
                        "argmin-leak",
                        vec![i],
                        vec![(i, j)],
                        Some(v.get(i) - min),
                    ));
                }
            }
        }
        if !top.nodes.contains(j) {
            violations.push(violation(
                "target-in-v",
                vec![j],
                vec![(i, j)],
                Some(top.max - v.get(j)),
            ));
        }
    }
    for f in &classes {
        let internal = f.iter().any(|i| g.children(i).any(|k| f.contains(k)));
        let leaks: Vec<Edge> = out
            .iter()
            .copied()
            .filter(|&(i, _)| f.contains(i))
            .collect();
        if internal && leaks.len() != 1 {
            violations.push(violation("single-leak", f.as_slice().to_vec(), leaks, None));
        }
    }
    let notes = vec![
        separation_note(&v),
        Note {
            name: "final-classes",
            holds: true,
            nodes: classes.iter().flat_map(|f| f.iter()).collect(),
            margin: None,
        },
    ];
    let ordering = order_by_v(set, &v);
    Ok(finish(ordering, violations, leaking(g, set), v, notes))
}

/// Lower and upper bounds on the internal links for an ordering whose last
/// `n_leak` nodes are the leaking ones.
pub fn internal_bounds(order: &[NodeId], n_leak: usize) -> (Vec<Edge>, Vec<Edge>) {
    let n_i = order.len();
    let first_leak = n_i - n_leak;
    let mut lower = Vec::new();
    let mut upper = Vec::new();
    for (a, &i) in order.iter().enumerate() {
        for (b, &j) in order.iter().enumerate() {
            let in_lower = b <= a || (a < first_leak && b == a + 1);
            let in_upper = in_lower || (a >= first_leak && b >= first_leak);
            if in_lower {
                lower.push((i, j));
            }
            if in_upper {
                upper.push((i, j));
            }
        }
    }
    lower.sort_unstable();
    upper.sort_unstable();
    (lower, upper)
}

fn sorted_difference(a: &[Edge], b: &[Edge]) -> Vec<Edge> {
    a.iter()
        .copied()
        .filter(|e| b.binary_search(e).is_err())
        .collect()
}

fn permutations(items: &[NodeId]) -> Vec<Vec<NodeId>> {
    if items.len() <= 1 {
        return vec![items.to_vec()];
    }
    let mut out = Vec::new();
    for k in 0..items.len() {
        let mut rest = items.to_vec();
        let head = rest.remove(k);
        for mut tail in permutations(&rest) {
            tail.insert(0, head);
            out.push(tail);
        }
    }
    out
}

/// Orderings of `order` obtained by permuting within each tie class.
fn tie_permutations(order: &[NodeId], v: &VisitVector) -> Vec<Vec<NodeId>> {
    let mut result = vec![Vec::new()];
    for class in tie_classes(order, v) {
        let perms = permutations(class.as_slice());
        result = result
            .into_iter()
            .flat_map(|prefix| {
                perms.iter().map(move |p| {
                    let mut next = prefix.clone();
                    next.extend_from_slice(p);
                    next
                })
            })
            .collect();
    }
    result
}

/// Checks `E_I^L ⊆ E_I ⊆ E_I^U` for an ordering with non-leaking nodes
/// first, strictly decreasing in `v`, followed by the leaking nodes.
pub fn verify_internal_structure(
    g: &WebGraph,
    set: &NodeSet,
    ctx: &RankingContext,
) -> Result<StructureCertificate> {
    require_assumption_a(g, set)?;
    let part = g.partition_links(set)?;
    if part.external_out.is_empty() {
        return Err(Error::Precondition("I has no external outlink".into()));
    }
    let v = pagerank::visit_vector(g, set, ctx)?;
    let leak = leaking(g, set);
    let mut violations = Vec::new();

    let inner: Vec<NodeId> = order_by_v(&set.iter().filter(|&i| !leak.contains(i)).collect(), &v);
    let tail: Vec<NodeId> = order_by_v(&leak, &v);
    for w in inner.windows(2) {
        if !tolerance::strictly_greater(v.get(w[0]), v.get(w[1])) {
            violations.push(violation(
                "strict-order",
                w.to_vec(),
                Vec::new(),
                Some(v.get(w[0]) - v.get(w[1])),
            ));
        }
    }
    if let (Some(&a), Some(&b)) = (inner.last(), tail.first()) {
        if !tolerance::strictly_greater(v.get(a), v.get(b)) {
            violations.push(violation(
                "leaking-last",
                vec![a, b],
                Vec::new(),
                Some(v.get(a) - v.get(b)),
            ));
        }
    }

    let actual = part.internal.clone();
    type Fit = (Vec<NodeId>, Vec<Edge>, Vec<Edge>, Vec<Edge>, Vec<Edge>);
    let mut best: Option<Fit> = None;
    for tail_order in tie_permutations(&tail, &v) {
        let mut order = inner.clone();
        order.extend(tail_order);
        let (lower, upper) = internal_bounds(&order, leak.len());
        let missing = sorted_difference(&lower, &actual);
        let extra = sorted_difference(&actual, &upper);
        let fits = missing.is_empty() && extra.is_empty();
        let score = missing.len() + extra.len();
        let better = match &best {
            None => true,
            Some((_, _, _, m, e)) => score < m.len() + e.len(),
        };
        if better {
            best = Some((order, lower, upper, missing, extra));
        }
        if fits {
            break;
        }
    }
    let (order, lower, upper, missing, extra) = best.expect("at least one ordering");
    if !missing.is_empty() {
        violations.push(violation("lower-bound", Vec::new(), missing, None));
    }
    if !extra.is_empty() {
        violations.push(violation("upper-bound", Vec::new(), extra, None));
    }
    let notes = vec![
        Note {
            name: "equals-lower",
            holds: actual == lower,
            nodes: Vec::new(),
            margin: None,
        },
        Note {
            name: "equals-upper",
            holds: actual == upper,
            nodes: Vec::new(),
            margin: None,
        },
        separation_note(&v),
    ];
    Ok(finish(order, violations, leak, v, notes))
}

/// Checks the optimal website shape under default constraints.
pub fn verify_website_opt_shape(
    g: &WebGraph,
    set: &NodeSet,
    ctx: &RankingContext,
) -> Result<StructureCertificate> {
    verify_website_opt_shape_with(g, set, ctx, &StructureConstraints::default())
}

/// Checks that some ordering of `I` has `v` strictly decreasing, all
/// backward links, the forward chain, self-links exactly when allowed,
/// and `r` external outlinks all leaving the last node of the chain.
///
/// A singleton without self-links may leak through any nonempty set of
/// at least `r` links.
pub fn verify_website_opt_shape_with(
    g: &WebGraph,
    set: &NodeSet,
    ctx: &RankingContext,
    constraints: &StructureConstraints,
) -> Result<StructureCertificate> {
    require_assumption_a(g, set)?;
    let v = pagerank::visit_vector(g, set, ctx)?;
    let top = pagerank::top_set_of(g, &v)?;
    let part = g.partition_links(set)?;
    let order = order_by_v(set, &v);
    let mut violations = Vec::new();

    for w in order.windows(2) {
        if !tolerance::strictly_greater(v.get(w[0]), v.get(w[1])) {
            violations.push(violation(
                "strict-order",
                w.to_vec(),
                Vec::new(),
                Some(v.get(w[0]) - v.get(w[1])),
            ));
        }
    }
    let expected = website_internal_links(&order, constraints.allow_self_links);
    let missing = sorted_difference(&expected, &part.internal);
    let extra = sorted_difference(&part.internal, &expected);
    if !missing.is_empty() {
        violations.push(violation("internal-missing", Vec::new(), missing, None));
    }
    if !extra.is_empty() {
        violations.push(violation("internal-extra", Vec::new(), extra, None));
    }

    let last = *order.last().expect("nonempty set");
    let r = constraints.outlinks();
    let off_chain: Vec<Edge> = part
        .external_out
        .iter()
        .copied()
        .filter(|&(i, _)| i != last)
        .collect();
    if !off_chain.is_empty() {
        violations.push(violation("outlink-source", vec![last], off_chain, None));
    }
    let loose = set.len() == 1 && !constraints.allow_self_links;
    let count = part.external_out.len();
    if (loose && count < r) || (!loose && count != r) {
        violations.push(violation(
            "outlink-count",
            Vec::new(),
            part.external_out.clone(),
            Some(count as f64 - r as f64),
        ));
    }

    let targets: Vec<NodeId> = part.external_out.iter().map(|&(_, j)| j).collect();
    let mut notes = vec![
        Note {
            name: "target-in-v",
            holds: targets.iter().all(|&j| top.nodes.contains(j)),
            nodes: targets.clone(),
            margin: targets.iter().map(|&j| top.max - v.get(j)).reduce(f64::max),
        },
        separation_note(&v),
    ];
    if r > 1 {
        notes.push(top_r_note(set, &v, &targets, r));
    }
    Ok(finish(order, violations, leaking(g, set), v, notes))
}

/// Whether every target is among the `r` largest values of `v` outside `I`.
fn top_r_note(set: &NodeSet, v: &VisitVector, targets: &[NodeId], r: usize) -> Note {
    let mut outside: Vec<f64> = set.complement(v.v.len()).iter().map(|j| v.get(j)).collect();
    outside.sort_by(|a, b| b.total_cmp(a));
    let threshold = outside
        .get(r - 1)
        .or(outside.last())
        .copied()
        .unwrap_or(f64::NAN);
    let worst = targets
        .iter()
        .map(|&j| v.get(j))
        .fold(f64::INFINITY, f64::min);
    Note {
        name: "targets-top-r",
        holds: !tolerance::strictly_greater(threshold, worst),
        nodes: targets.to_vec(),
        margin: Some(worst - threshold),
    }
}

/// True when the single external outlink of `I` points at a parent of `I`.
pub fn linking_to_parents_check(g: &WebGraph, set: &NodeSet) -> Result<bool> {
    let part = g.partition_links(set)?;
    if part.external_in.is_empty() {
        return Err(Error::Inapplicable("I has no external inlink".into()));
    }
    Ok(match part.external_out.as_slice() {
        [(_, j)] => part.external_in.iter().any(|&(p, _)| p == *j),
        _ => false,
    })
}

/// Effect of adding the external inlink `(j, i)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InlinkEffect {
    pub change: Change,
    pub old_value: f64,
    pub new_value: f64,
    /// `min_I v > max_Ī v` and `j` is not yet a parent of `I`.
    pub premise: bool,
}

pub fn external_inlink_effect(
    g: &WebGraph,
    set: &NodeSet,
    ctx: &RankingContext,
    j: NodeId,
    i: NodeId,
) -> Result<InlinkEffect> {
    g.check_node(i)?;
    g.check_node(j)?;
    if set.contains(j) || !set.contains(i) {
        return Err(Error::Precondition(format!(
            "({j},{i}) is not an external inlink"
        )));
    }
    let analyzer = MutationAnalyzer::new(g, set, ctx)?;
    let report = analyzer.evaluate(&OutlinkMutation::add_link(g, j, i)?)?;
    let v = analyzer.visit_vector();
    let separated = match (v.min_inside(), v.max_outside()) {
        (Some(a), Some(b)) => tolerance::strictly_greater(a, b),
        _ => false,
    };
    let is_parent = g.children(j).any(|k| set.contains(k));
    Ok(InlinkEffect {
        change: report.change,
        old_value: report.old_value,
        new_value: report.new_value,
        premise: separated && !is_parent,
    })
}

/// Best configuration found by [`build_optimal_structure`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OptimalStructure {
    #[serde(skip)]
    pub graph: WebGraph,
    pub value: f64,
    pub ordering: Vec<NodeId>,
    pub targets: Vec<NodeId>,
    pub internal: Vec<Edge>,
    pub external_out: Vec<Edge>,
    pub candidates: usize,
}

fn combinations(items: &[NodeId], k: usize) -> Vec<Vec<NodeId>> {
    if k == 0 {
        return vec![Vec::new()];
    }
    if items.len() < k {
        return Vec::new();
    }
    let mut out = Vec::new();
    for (idx, &head) in items.iter().enumerate() {
        for mut rest in combinations(&items[idx + 1..], k - 1) {
            rest.insert(0, head);
            out.push(rest);
        }
    }
    out
}

/// Searches the optimal shape over every ordering of `I` and every choice of
/// external targets, keeping the links that start outside `I` fixed.
///
/// With a single outlink the targets range over the parents of `I`, or over
/// all of `Ī` when `I` has no external inlink. A singleton uses the top set
/// of the basic absorbing graph. Equal values are resolved towards the
/// lexicographically smallest edge list.
pub fn build_optimal_structure(
    g_fixed: &WebGraph,
    set: &NodeSet,
    ctx: &RankingContext,
    constraints: &StructureConstraints,
    max_perm: usize,
) -> Result<OptimalStructure> {
    set.check_range(g_fixed.n())?;
    if set.is_empty() {
        return Err(Error::EmptySet);
    }
    let comp = set.complement(g_fixed.n());
    if comp.is_empty() {
        return Err(Error::EmptyComplement);
    }
    if set.len() > max_perm {
        return Err(Error::SearchTooLarge {
            size: set.len(),
            bound: max_perm,
        });
    }
    let objective = match &constraints.target_set {
        Some(s) if !s.is_subset(set) => return Err(Error::TargetNotSubset),
        Some(s) => s.clone(),
        None => set.clone(),
    };
    let r = constraints.outlinks();
    let part = g_fixed.partition_links(set)?;
    let fixed: Vec<Edge> = part
        .external_in
        .iter()
        .chain(&part.external)
        .copied()
        .collect();

    let pool: Vec<NodeId> = if set.len() == 1 && r == 1 {
        let absorbing = pagerank::basic_absorbing(g_fixed, set)?;
        let TopSet { nodes, .. } = pagerank::v_top_set(&absorbing, set, ctx)?;
        nodes.as_slice().to_vec()
    } else if r == 1 && !part.external_in.is_empty() {
        let parents: NodeSet = part.external_in.iter().map(|&(p, _)| p).collect();
        parents.as_slice().to_vec()
    } else {
        comp.as_slice().to_vec()
    };
    let target_sets = combinations(&pool, r);
    if target_sets.is_empty() {
        return Err(Error::Inapplicable(format!(
            "fewer than {r} external nodes available as targets"
        )));
    }
    let orders = permutations(set.as_slice());
    let total = orders.len().saturating_mul(target_sets.len());
    if total > MAX_CANDIDATES {
        return Err(Error::SearchTooLarge {
            size: total,
            bound: MAX_CANDIDATES,
        });
    }

    let candidates: Vec<(usize, usize)> = (0..orders.len())
        .flat_map(|o| (0..target_sets.len()).map(move |t| (o, t)))
        .collect();
    let evaluated: Vec<(f64, Vec<Edge>, usize, usize)> = candidates
        .par_iter()
        .map(|&(o, t)| {
            let order = &orders[o];
            let last = *order.last().expect("nonempty");
            let mut edges = website_internal_links(order, constraints.allow_self_links);
            edges.extend(target_sets[t].iter().map(|&j| (last, j)));
            edges.extend_from_slice(&fixed);
            edges.sort_unstable();
            let g = WebGraph::new(g_fixed.n(), edges.iter().copied())?;
            let sys = VisitSystem::new(&g, ctx.c())?;
            let v = sys.visit_vector(&objective)?;
            Ok((pagerank::set_pagerank_from(&v, ctx), edges, o, t))
        })
        .collect::<Result<_>>()?;

    let max = evaluated
        .iter()
        .map(|e| e.0)
        .fold(f64::NEG_INFINITY, f64::max);
    let (value, edges, o, t) = evaluated
        .into_iter()
        .filter(|e| e.0 >= max - tolerance::ABS)
        .min_by(|a, b| a.1.cmp(&b.1))
        .expect("at least one candidate");
    let graph = WebGraph::new(g_fixed.n(), edges.iter().copied())?;
    let part = graph.partition_links(set)?;
    Ok(OptimalStructure {
        graph,
        value,
        ordering: orders[o].clone(),
        targets: target_sets[t].clone(),
        internal: part.internal,
        external_out: part.external_out,
        candidates: total,
    })
}
