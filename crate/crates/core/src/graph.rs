//! Directed webgraphs, node sets and the link partition induced by a set of
//! pages.
//!
//! Node ids are 1-based everywhere in the public API and in every file format.
//! Storage is 0-based; the conversion never leaks out of this module except
//! through the `*_idx` accessors used by the numerical code.

use std::collections::VecDeque;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// 1-based node identifier.
pub type NodeId = usize;

/// Directed link `(from, to)` with 1-based ids.
pub type Edge = (NodeId, NodeId);

/// A sorted, duplicate-free set of node ids.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct NodeSet(Vec<NodeId>);

impl NodeSet {
    pub fn new(members: impl IntoIterator<Item = NodeId>) -> Self {
        let mut v: Vec<NodeId> = members.into_iter().collect();
        v.sort_unstable();
        v.dedup();
        NodeSet(v)
    }

    pub fn empty() -> Self {
        NodeSet(Vec::new())
    }

    /// All nodes `1..=n`.
    pub fn all(n: usize) -> Self {
        NodeSet((1..=n).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, node: NodeId) -> bool {
        self.0.binary_search(&node).is_ok()
    }

    pub fn iter(&self) -> impl Iterator<Item = NodeId> + '_ {
        self.0.iter().copied()
    }

    pub fn as_slice(&self) -> &[NodeId] {
        &self.0
    }

    pub fn complement(&self, n: usize) -> NodeSet {
        NodeSet((1..=n).filter(|&i| !self.contains(i)).collect())
    }

    pub fn is_subset(&self, other: &NodeSet) -> bool {
        self.iter().all(|i| other.contains(i))
    }

    /// Membership mask indexed by 0-based position.
    pub fn mask(&self, n: usize) -> Vec<bool> {
        let mut m = vec![false; n];
        for i in self.iter() {
            if i >= 1 && i <= n {
                m[i - 1] = true;
            }
        }
        m
    }

    /// Checks that every member lies in `1..=n`.
    pub fn check_range(&self, n: usize) -> Result<()> {
        match self.0.iter().find(|&&i| i == 0 || i > n) {
            Some(&node) => Err(Error::NodeOutOfRange { node, n }),
            None => Ok(()),
        }
    }
}

impl FromIterator<NodeId> for NodeSet {
    fn from_iter<T: IntoIterator<Item = NodeId>>(iter: T) -> Self {
        NodeSet::new(iter)
    }
}

impl FromStr for NodeSet {
    type Err = Error;

    /// Parses the comma-separated CLI syntax, e.g. `1,2,3`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() {
            return Ok(NodeSet::empty());
        }
        s.split(',')
            .map(|tok| {
                tok.trim().parse::<NodeId>().map_err(|_| Error::Parse {
                    line: 1,
                    message: format!("invalid node id {tok:?} in node set"),
                })
            })
            .collect::<Result<Vec<_>>>()
            .map(NodeSet::new)
    }
}

impl fmt::Display for NodeSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|i| i.to_string()).collect();
        write!(f, "{}", parts.join(","))
    }
}

/// The four link buckets induced by a node set `I`.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct LinkPartition {
    /// Links inside `I`.
    pub internal: Vec<Edge>,
    /// Links leaving `I`.
    pub external_out: Vec<Edge>,
    /// Links entering `I`.
    pub external_in: Vec<Edge>,
    /// Links inside the complement.
    pub external: Vec<Edge>,
}

/// Immutable directed graph on nodes `1..=n` with set semantics for edges.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WebGraph {
    children: Vec<Vec<usize>>,
    parents: Vec<Vec<usize>>,
    edge_count: usize,
}

impl WebGraph {
    /// Builds a graph; duplicate edges collapse.
    pub fn new(n: usize, edges: impl IntoIterator<Item = Edge>) -> Result<Self> {
        if n == 0 {
            return Err(Error::EmptyGraph);
        }
        let mut children = vec![Vec::new(); n];
        for (i, j) in edges {
            for node in [i, j] {
                if node == 0 || node > n {
                    return Err(Error::NodeOutOfRange { node, n });
                }
            }
            children[i - 1].push(j - 1);
        }
        Ok(Self::from_children(children))
    }

    pub(crate) fn from_children(mut children: Vec<Vec<usize>>) -> Self {
        let n = children.len();
        let mut parents = vec![Vec::new(); n];
        let mut edge_count = 0;
        for (i, ch) in children.iter_mut().enumerate() {
            ch.sort_unstable();
            ch.dedup();
            edge_count += ch.len();
            for &j in ch.iter() {
                parents[j].push(i);
            }
        }
        WebGraph {
            children,
            parents,
            edge_count,
        }
    }

    pub fn n(&self) -> usize {
        self.children.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    /// All edges in lexicographic order.
    pub fn edges(&self) -> Vec<Edge> {
        self.children
            .iter()
            .enumerate()
            .flat_map(|(i, ch)| ch.iter().map(move |&j| (i + 1, j + 1)))
            .collect()
    }

    pub fn has_edge(&self, i: NodeId, j: NodeId) -> bool {
        i >= 1 && i <= self.n() && j >= 1 && self.children[i - 1].binary_search(&(j - 1)).is_ok()
    }

    pub fn children(&self, i: NodeId) -> impl Iterator<Item = NodeId> + '_ {
        self.children[i - 1].iter().map(|&j| j + 1)
    }

    pub fn children_set(&self, i: NodeId) -> NodeSet {
        NodeSet(self.children(i).collect())
    }

    pub fn parents(&self, j: NodeId) -> impl Iterator<Item = NodeId> + '_ {
        self.parents[j - 1].iter().map(|&i| i + 1)
    }

    pub fn outdegree(&self, i: NodeId) -> usize {
        self.children[i - 1].len()
    }

    pub(crate) fn children_idx(&self, i: usize) -> &[usize] {
        &self.children[i]
    }

    pub(crate) fn parents_idx(&self, j: usize) -> &[usize] {
        &self.parents[j]
    }

    pub fn check_node(&self, node: NodeId) -> Result<()> {
        if node == 0 || node > self.n() {
            Err(Error::NodeOutOfRange { node, n: self.n() })
        } else {
            Ok(())
        }
    }

    /// Nodes with no outlink.
    pub fn dangling_nodes(&self) -> Vec<NodeId> {
        (1..=self.n()).filter(|&i| self.outdegree(i) == 0).collect()
    }

    /// True iff every node has at least one outlink (self-links count).
    pub fn check_no_dangling(&self) -> bool {
        self.children.iter().all(|ch| !ch.is_empty())
    }

    /// Rejects graphs with dangling nodes.
    pub fn validate(&self) -> Result<()> {
        let dangling = self.dangling_nodes();
        if dangling.is_empty() {
            Ok(())
        } else {
            Err(Error::Dangling(dangling))
        }
    }

    /// Gives every dangling node a link to every node, self included.
    pub fn patch_dangling(&self) -> WebGraph {
        let n = self.n();
        let children = self
            .children
            .iter()
            .map(|ch| {
                if ch.is_empty() {
                    (0..n).collect()
                } else {
                    ch.clone()
                }
            })
            .collect();
        WebGraph::from_children(children)
    }

    /// Copy of the graph where node `i` has exactly the given children.
    pub fn with_children(&self, i: NodeId, new_children: &NodeSet) -> Result<WebGraph> {
        self.check_node(i)?;
        new_children.check_range(self.n())?;
        let mut children = self.children.clone();
        children[i - 1] = new_children.iter().map(|j| j - 1).collect();
        Ok(WebGraph::from_children(children))
    }

    pub fn with_edge(&self, i: NodeId, j: NodeId) -> Result<WebGraph> {
        self.check_node(i)?;
        self.check_node(j)?;
        let mut children = self.children.clone();
        children[i - 1].push(j - 1);
        Ok(WebGraph::from_children(children))
    }

    pub fn without_edge(&self, i: NodeId, j: NodeId) -> Result<WebGraph> {
        if !self.has_edge(i, j) {
            return Err(Error::EdgeAbsent(i, j));
        }
        let mut children = self.children.clone();
        children[i - 1].retain(|&k| k != j - 1);
        Ok(WebGraph::from_children(children))
    }

    /// Serializes in the edge-list file format.
    pub fn to_edge_list(&self) -> String {
        let mut out = format!("{}\n", self.n());
        for (i, j) in self.edges() {
            out.push_str(&format!("{i} {j}\n"));
        }
        out
    }

    /// Splits the edge set by membership of the endpoints in `set`.
    pub fn partition_links(&self, set: &NodeSet) -> Result<LinkPartition> {
        set.check_range(self.n())?;
        let mut part = LinkPartition::default();
        for (i, j) in self.edges() {
            let bucket = match (set.contains(i), set.contains(j)) {
                (true, true) => &mut part.internal,
                (true, false) => &mut part.external_out,
                (false, true) => &mut part.external_in,
                (false, false) => &mut part.external,
            };
            bucket.push((i, j));
        }
        Ok(part)
    }

    /// Whether a path (possibly of length zero) leads from `i` into `target`.
    pub fn has_access(&self, i: NodeId, target: &NodeSet) -> Result<bool> {
        self.check_node(i)?;
        target.check_range(self.n())?;
        if target.is_empty() {
            return Err(Error::EmptySet);
        }
        let reach = self.reaches_set(&target.mask(self.n()));
        Ok(reach[i - 1])
    }

    /// For every node, whether it has access to a node flagged in `target`.
    /// Backward BFS from the target over parent lists.
    pub(crate) fn reaches_set(&self, target: &[bool]) -> Vec<bool> {
        let mut seen = target.to_vec();
        let mut queue: VecDeque<usize> = (0..self.n()).filter(|&k| target[k]).collect();
        while let Some(k) = queue.pop_front() {
            for &p in &self.parents[k] {
                if !seen[p] {
                    seen[p] = true;
                    queue.push_back(p);
                }
            }
        }
        seen
    }

    /// Nodes of `set` without access to its complement.
    pub fn nodes_without_access(&self, set: &NodeSet) -> Result<Vec<NodeId>> {
        set.check_range(self.n())?;
        if set.is_empty() {
            return Err(Error::EmptySet);
        }
        let comp = set.complement(self.n());
        if comp.is_empty() {
            return Err(Error::EmptyComplement);
        }
        let reach = self.reaches_set(&comp.mask(self.n()));
        Ok(set.iter().filter(|&i| !reach[i - 1]).collect())
    }

    /// Accessibility assumption: every node of `set` reaches the complement.
    pub fn check_accessibility(&self, set: &NodeSet) -> Result<bool> {
        Ok(self.nodes_without_access(set)?.is_empty())
    }

    /// Strongly connected components of the whole graph.
    pub fn strongly_connected_components(&self) -> Vec<NodeSet> {
        let mask = vec![true; self.n()];
        self.scc_masked(&mask)
            .into_iter()
            .map(|c| NodeSet::new(c.into_iter().map(|k| k + 1)))
            .collect::<Vec<_>>()
            .tap_sort()
    }

    /// Final classes of the subgraph `(I, E_I)`: strongly connected pieces with
    /// no internal link leaving them. A node of `I` without internal children
    /// forms a final class on its own.
    pub fn final_classes(&self, set: &NodeSet) -> Result<Vec<NodeSet>> {
        set.check_range(self.n())?;
        if set.is_empty() {
            return Err(Error::EmptySet);
        }
        let mask = set.mask(self.n());
        let comps = self.scc_masked(&mask);
        let mut comp_of = vec![usize::MAX; self.n()];
        for (c, nodes) in comps.iter().enumerate() {
            for &k in nodes {
                comp_of[k] = c;
            }
        }
        let finals = comps
            .iter()
            .enumerate()
            .filter(|(c, nodes)| {
                nodes.iter().all(|&k| {
                    self.children[k]
                        .iter()
                        .all(|&j| !mask[j] || comp_of[j] == *c)
                })
            })
            .map(|(_, nodes)| NodeSet::new(nodes.iter().map(|&k| k + 1)))
            .collect::<Vec<_>>();
        Ok(finals.tap_sort())
    }

    /// Number of links of `E_F` for a node set `F`.
    pub fn internal_link_count(&self, set: &NodeSet) -> usize {
        set.iter()
            .map(|i| self.children(i).filter(|&j| set.contains(j)).count())
            .sum()
    }

    /// Iterative Tarjan restricted to the nodes flagged in `mask`.
    fn scc_masked(&self, mask: &[bool]) -> Vec<Vec<usize>> {
        let n = self.n();
        let mut index = vec![usize::MAX; n];
        let mut low = vec![0usize; n];
        let mut on_stack = vec![false; n];
        let mut stack = Vec::new();
        let mut comps = Vec::new();
        let mut counter = 0;

        for root in 0..n {
            if !mask[root] || index[root] != usize::MAX {
                continue;
            }
            // (node, next child position)
            let mut call: Vec<(usize, usize)> = vec![(root, 0)];
            index[root] = counter;
            low[root] = counter;
            counter += 1;
            stack.push(root);
            on_stack[root] = true;

            while let Some(&mut (v, ref mut pos)) = call.last_mut() {
                let ch = &self.children[v];
                if *pos < ch.len() {
                    let w = ch[*pos];
                    *pos += 1;
                    if !mask[w] {
                        continue;
                    }
                    if index[w] == usize::MAX {
                        index[w] = counter;
                        low[w] = counter;
                        counter += 1;
                        stack.push(w);
                        on_stack[w] = true;
                        call.push((w, 0));
                    } else if on_stack[w] {
                        low[v] = low[v].min(index[w]);
                    }
                } else {
                    call.pop();
                    if let Some(&(parent, _)) = call.last() {
                        low[parent] = low[parent].min(low[v]);
                    }
                    if low[v] == index[v] {
                        let mut comp = Vec::new();
                        loop {
                            let w = stack.pop().expect("tarjan stack underflow");
                            on_stack[w] = false;
                            comp.push(w);
                            if w == v {
                                break;
                            }
                        }
                        comp.sort_unstable();
                        comps.push(comp);
                    }
                }
            }
        }
        comps
    }
}

impl FromStr for WebGraph {
    type Err = Error;

    /// Parses the edge-list format: `#` comments, first line `n`, then `i j`
    /// lines separated by a single space.
    fn from_str(text: &str) -> Result<Self> {
        let mut n: Option<usize> = None;
        let mut edges = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.strip_suffix('\r').unwrap_or(raw);
            let lineno = lineno + 1;
            if line.starts_with('#') || line.is_empty() {
                continue;
            }
            let bad = |message: String| Error::Parse {
                line: lineno,
                message,
            };
            match n {
                None => {
                    let count = line
                        .parse::<usize>()
                        .map_err(|_| bad(format!("expected node count, found {line:?}")))?;
                    if count == 0 {
                        return Err(Error::EmptyGraph);
                    }
                    n = Some(count);
                }
                Some(count) => {
                    let (a, b) = line
                        .split_once(' ')
                        .ok_or_else(|| bad(format!("expected \"i j\", found {line:?}")))?;
                    let parse = |tok: &str| {
                        tok.parse::<NodeId>()
                            .map_err(|_| bad(format!("invalid node id {tok:?}")))
                    };
                    let (i, j) = (parse(a)?, parse(b)?);
                    for node in [i, j] {
                        if node == 0 || node > count {
                            return Err(Error::NodeOutOfRange { node, n: count });
                        }
                    }
                    edges.push((i, j));
                }
            }
        }
        let n = n.ok_or(Error::MissingNodeCount)?;
        WebGraph::new(n, edges)
    }
}

trait TapSort {
    fn tap_sort(self) -> Self;
}

impl TapSort for Vec<NodeSet> {
    fn tap_sort(mut self) -> Self {
        self.sort();
        self
    }
}
