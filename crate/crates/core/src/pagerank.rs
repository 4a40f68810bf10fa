//! PageRank, the visit vector `v = (I - cP)^-1 e_I`, set PageRank and the
//! quantities derived from them.
//!
//! Graphs with at most [`DENSE_LIMIT`] nodes are solved with a dense LU
//! factorization of `I - cP`. Larger graphs fall back to power/Jacobi
//! iteration that streams over adjacency lists, stopping when successive
//! iterates differ by at most [`ITER_TOL`] in the 1-norm.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{NodeId, NodeSet, WebGraph};
use crate::linalg::{DenseMatrix, Lu};
use crate::tolerance;

pub const DENSE_LIMIT: usize = 2048;
pub const ITER_TOL: f64 = 1e-12;
pub const MAX_ITER: usize = 100_000;

/// Damping factor and personalization vector.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RankingContext {
    c: f64,
    z: Vec<f64>,
}

impl RankingContext {
    pub fn new(c: f64, z: Vec<f64>) -> Result<Self> {
        if !(c > 0.0 && c < 1.0) {
            return Err(Error::DampingFactor(c));
        }
        if z.is_empty() {
            return Err(Error::Personalization("empty vector".into()));
        }
        if let Some((i, &zi)) = z.iter().enumerate().find(|(_, &x)| x.is_nan() || x <= 0.0) {
            return Err(Error::Personalization(format!(
                "entry {} is {zi}, entries must be positive",
                i + 1
            )));
        }
        let sum: f64 = z.iter().sum();
        if (sum - 1.0).abs() > 1e-12 {
            return Err(Error::Personalization(format!(
                "entries sum to {sum}, not 1"
            )));
        }
        Ok(RankingContext { c, z })
    }

    /// Uniform personalization `z = 1/n`.
    pub fn uniform(n: usize, c: f64) -> Result<Self> {
        Self::new(c, vec![1.0 / n as f64; n])
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    pub fn z(&self) -> &[f64] {
        &self.z
    }

    pub fn is_uniform(&self) -> bool {
        let u = 1.0 / self.z.len() as f64;
        self.z.iter().all(|&x| (x - u).abs() <= 1e-15)
    }

    fn check_graph(&self, g: &WebGraph) -> Result<()> {
        if self.z.len() != g.n() {
            return Err(Error::LengthMismatch {
                expected: g.n(),
                got: self.z.len(),
            });
        }
        Ok(())
    }
}

/// Stationary distribution of the Google matrix.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PageRankVector {
    pub pi: Vec<f64>,
    /// `‖πᵀG − πᵀ‖₁` at the returned vector.
    pub residual: f64,
}

impl PageRankVector {
    pub fn get(&self, node: NodeId) -> f64 {
        self.pi[node - 1]
    }

    pub fn set_sum(&self, set: &NodeSet) -> f64 {
        set.iter().map(|i| self.pi[i - 1]).sum()
    }
}

/// Expected number of visits to `set` before the first zap, per start node.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VisitVector {
    pub v: Vec<f64>,
    pub set: NodeSet,
}

impl VisitVector {
    pub fn get(&self, node: NodeId) -> f64 {
        self.v[node - 1]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.v
    }

    /// `max_{j ∉ I} v_j`, or `None` when the complement is empty.
    pub fn max_outside(&self) -> Option<f64> {
        (1..=self.v.len())
            .filter(|&j| !self.set.contains(j))
            .map(|j| self.get(j))
            .reduce(f64::max)
    }

    /// `min_{i ∈ I} v_i`.
    pub fn min_inside(&self) -> Option<f64> {
        self.set.iter().map(|i| self.get(i)).reduce(f64::min)
    }
}

/// The set `V = argmax_{j ∉ I} v_j`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TopSet {
    pub nodes: NodeSet,
    pub max: f64,
    /// Set when `I` has no external inlinks, so `v` vanishes on the complement
    /// and every external node ties.
    pub all_zero: bool,
}

enum Solver {
    Dense(Lu),
    Iterative,
}

/// The linear system `I - cP` of a graph.
pub struct VisitSystem<'g> {
    g: &'g WebGraph,
    c: f64,
    solver: Solver,
}

impl<'g> VisitSystem<'g> {
    pub fn new(g: &'g WebGraph, c: f64) -> Result<Self> {
        Self::with_dense_limit(g, c, DENSE_LIMIT)
    }

    /// Forces the iterative path for graphs above `limit` nodes.
    pub fn with_dense_limit(g: &'g WebGraph, c: f64, limit: usize) -> Result<Self> {
        g.validate()?;
        if !(c > 0.0 && c < 1.0) {
            return Err(Error::DampingFactor(c));
        }
        let solver = if g.n() <= limit {
            Solver::Dense(Lu::factor(system_matrix(g, c))?)
        } else {
            Solver::Iterative
        };
        Ok(VisitSystem { g, c, solver })
    }

    pub fn graph(&self) -> &'g WebGraph {
        self.g
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    /// Solves `(I - cP) x = rhs`.
    pub fn solve(&self, rhs: &[f64]) -> Result<Vec<f64>> {
        match &self.solver {
            Solver::Dense(lu) => Ok(lu.solve(rhs)),
            Solver::Iterative => self.jacobi(rhs),
        }
    }

    /// Solves `xᵀ (I - cP) = rhsᵀ`.
    pub fn solve_left(&self, rhs: &[f64]) -> Result<Vec<f64>> {
        match &self.solver {
            Solver::Dense(lu) => Ok(lu.solve_transpose(rhs)),
            Solver::Iterative => self.power(rhs),
        }
    }

    /// `(P x)_i`, the mean of `x` over the children of `i`.
    pub fn p_times(&self, x: &[f64]) -> Vec<f64> {
        (0..self.g.n())
            .map(|i| {
                let ch = self.g.children_idx(i);
                ch.iter().map(|&j| x[j]).sum::<f64>() / ch.len() as f64
            })
            .collect()
    }

    /// `(xᵀ P)_j`.
    pub fn times_p(&self, x: &[f64]) -> Vec<f64> {
        (0..self.g.n())
            .map(|j| {
                self.g
                    .parents_idx(j)
                    .iter()
                    .map(|&i| x[i] / self.g.children_idx(i).len() as f64)
                    .sum()
            })
            .collect()
    }

    fn jacobi(&self, rhs: &[f64]) -> Result<Vec<f64>> {
        let mut x = rhs.to_vec();
        for _ in 0..MAX_ITER {
            let px = self.p_times(&x);
            let next: Vec<f64> = rhs.iter().zip(&px).map(|(b, p)| b + self.c * p).collect();
            let diff = l1_diff(&next, &x);
            x = next;
            if diff <= ITER_TOL {
                return Ok(x);
            }
        }
        Err(Error::NoConvergence {
            iterations: MAX_ITER,
            residual: l1_diff(&self.residual_right(&x), rhs),
        })
    }

    fn power(&self, rhs: &[f64]) -> Result<Vec<f64>> {
        let mut x = rhs.to_vec();
        for _ in 0..MAX_ITER {
            let xp = self.times_p(&x);
            let next: Vec<f64> = rhs.iter().zip(&xp).map(|(b, p)| b + self.c * p).collect();
            let diff = l1_diff(&next, &x);
            x = next;
            if diff <= ITER_TOL {
                return Ok(x);
            }
        }
        Err(Error::NoConvergence {
            iterations: MAX_ITER,
            residual: f64::NAN,
        })
    }

    fn residual_right(&self, x: &[f64]) -> Vec<f64> {
        let px = self.p_times(x);
        x.iter().zip(&px).map(|(a, p)| a - self.c * p).collect()
    }

    /// `v = (I - cP)^-1 e_I`.
    pub fn visit_vector(&self, set: &NodeSet) -> Result<VisitVector> {
        check_set(self.g, set)?;
        let v = self.solve(&indicator(set, self.g.n()))?;
        Ok(VisitVector {
            v,
            set: set.clone(),
        })
    }

    pub fn pagerank(&self, ctx: &RankingContext) -> Result<PageRankVector> {
        ctx.check_graph(self.g)?;
        let rhs: Vec<f64> = ctx.z.iter().map(|z| (1.0 - self.c) * z).collect();
        let mut pi = self.solve_left(&rhs)?;
        let total: f64 = pi.iter().sum();
        pi.iter_mut().for_each(|p| *p /= total);
        let residual = google_residual(self, ctx, &pi);
        Ok(PageRankVector { pi, residual })
    }
}

fn l1_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).sum()
}

/// `‖πᵀG − πᵀ‖₁` with `G = cP + (1 − c) 1 zᵀ`.
fn google_residual(sys: &VisitSystem<'_>, ctx: &RankingContext, pi: &[f64]) -> f64 {
    let mass: f64 = pi.iter().sum();
    let pp = sys.times_p(pi);
    pp.iter()
        .zip(&ctx.z)
        .zip(pi)
        .map(|((p, z), x)| (sys.c * p + (1.0 - sys.c) * mass * z - x).abs())
        .sum()
}

fn system_matrix(g: &WebGraph, c: f64) -> DenseMatrix {
    let n = g.n();
    let mut a = DenseMatrix::identity(n);
    for i in 0..n {
        let ch = g.children_idx(i);
        let w = c / ch.len() as f64;
        for &j in ch {
            a[(i, j)] -= w;
        }
    }
    a
}

pub(crate) fn indicator(set: &NodeSet, n: usize) -> Vec<f64> {
    let mut e = vec![0.0; n];
    for i in set.iter() {
        e[i - 1] = 1.0;
    }
    e
}

fn check_set(g: &WebGraph, set: &NodeSet) -> Result<()> {
    set.check_range(g.n())?;
    if set.is_empty() {
        return Err(Error::EmptySet);
    }
    Ok(())
}

pub fn pagerank(g: &WebGraph, ctx: &RankingContext) -> Result<PageRankVector> {
    VisitSystem::new(g, ctx.c())?.pagerank(ctx)
}

pub fn visit_vector(g: &WebGraph, set: &NodeSet, ctx: &RankingContext) -> Result<VisitVector> {
    VisitSystem::new(g, ctx.c())?.visit_vector(set)
}

/// `πᵀ e_I = (1 − c) zᵀ v`.
pub fn set_pagerank(g: &WebGraph, set: &NodeSet, ctx: &RankingContext) -> Result<f64> {
    ctx.check_graph(g)?;
    let v = visit_vector(g, set, ctx)?;
    Ok(set_pagerank_from(&v, ctx))
}

pub fn set_pagerank_from(v: &VisitVector, ctx: &RankingContext) -> f64 {
    (1.0 - ctx.c()) * v.v.iter().zip(ctx.z()).map(|(a, b)| a * b).sum::<f64>()
}

/// The external nodes giving the most visits to `set` before zapping.
pub fn v_top_set(g: &WebGraph, set: &NodeSet, ctx: &RankingContext) -> Result<TopSet> {
    let v = visit_vector(g, set, ctx)?;
    top_set_of(g, &v)
}

pub fn top_set_of(g: &WebGraph, v: &VisitVector) -> Result<TopSet> {
    let comp = v.set.complement(g.n());
    if comp.is_empty() {
        return Err(Error::EmptyComplement);
    }
    let has_inlinks = comp
        .iter()
        .any(|j| g.children(j).any(|k| v.set.contains(k)));
    if !has_inlinks {
        return Ok(TopSet {
            nodes: comp,
            max: 0.0,
            all_zero: true,
        });
    }
    let max = comp
        .iter()
        .map(|j| v.get(j))
        .fold(f64::NEG_INFINITY, f64::max);
    let nodes = comp
        .iter()
        .filter(|&j| tolerance::approx_eq(v.get(j), max))
        .collect();
    Ok(TopSet {
        nodes,
        max,
        all_zero: false,
    })
}

/// Removes the external outlinks of `set` and replaces its internal links by
/// self-links, keeping every link that starts outside `set`.
pub fn basic_absorbing(g: &WebGraph, set: &NodeSet) -> Result<WebGraph> {
    check_set(g, set)?;
    let mask = set.mask(g.n());
    let children = (0..g.n())
        .map(|i| {
            if mask[i] {
                vec![i]
            } else {
                g.children_idx(i).to_vec()
            }
        })
        .collect();
    Ok(WebGraph::from_children(children))
}

/// `‖v_Ī − c (I − cP_Ī)^-1 P_in v_I‖∞`, with the right-hand side computed
/// from the complement block alone.
pub fn visit_block_identity_residual(
    g: &WebGraph,
    set: &NodeSet,
    ctx: &RankingContext,
) -> Result<f64> {
    let v = visit_vector(g, set, ctx)?;
    let comp: Vec<usize> = set.complement(g.n()).iter().map(|j| j - 1).collect();
    if comp.is_empty() {
        return Ok(0.0);
    }
    let c = ctx.c();
    let mut pos = vec![usize::MAX; g.n()];
    for (k, &j) in comp.iter().enumerate() {
        pos[j] = k;
    }
    let m = comp.len();
    // rhs = c P_in v_I
    let rhs: Vec<f64> = comp
        .iter()
        .map(|&j| {
            let ch = g.children_idx(j);
            let s: f64 = ch
                .iter()
                .filter(|&&k| pos[k] == usize::MAX)
                .map(|&k| v.v[k])
                .sum();
            c * s / ch.len() as f64
        })
        .collect();
    let x = if m <= DENSE_LIMIT {
        let mut a = DenseMatrix::identity(m);
        for (r, &j) in comp.iter().enumerate() {
            let ch = g.children_idx(j);
            let w = c / ch.len() as f64;
            for &k in ch {
                if pos[k] != usize::MAX {
                    a[(r, pos[k])] -= w;
                }
            }
        }
        Lu::factor(a)?.solve(&rhs)
    } else {
        let mut x = rhs.clone();
        let mut converged = false;
        for _ in 0..MAX_ITER {
            let next: Vec<f64> = comp
                .iter()
                .enumerate()
                .map(|(r, &j)| {
                    let ch = g.children_idx(j);
                    let s: f64 = ch
                        .iter()
                        .filter(|&&k| pos[k] != usize::MAX)
                        .map(|&k| x[pos[k]])
                        .sum();
                    rhs[r] + c * s / ch.len() as f64
                })
                .collect();
            let diff = l1_diff(&next, &x);
            x = next;
            if diff <= ITER_TOL {
                converged = true;
                break;
            }
        }
        if !converged {
            return Err(Error::NoConvergence {
                iterations: MAX_ITER,
                residual: f64::NAN,
            });
        }
        x
    };
    Ok(comp
        .iter()
        .zip(&x)
        .map(|(&j, xj)| (v.v[j] - xj).abs())
        .fold(0.0, f64::max))
}
