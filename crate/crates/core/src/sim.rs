//! Monte Carlo random surfer.
//!
//! Trials are split into fixed blocks of [`BLOCK`] trajectories. Block `b`
//! draws from a ChaCha8 stream keyed by `(seed, b)`, and block summaries are
//! merged in block order, so estimates are bit-identical for any number of
//! worker threads.

use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{NodeId, NodeSet, WebGraph};
use crate::pagerank::RankingContext;

pub const BLOCK: u64 = 4096;
pub const DEFAULT_MAX_STEPS: u64 = 100_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SimConfig {
    pub trials: u64,
    pub seed: u64,
    pub max_steps: u64,
}

impl SimConfig {
    pub fn new(trials: u64, seed: u64) -> Self {
        SimConfig {
            trials,
            seed,
            max_steps: DEFAULT_MAX_STEPS,
        }
    }

    fn check(&self) -> Result<()> {
        if self.trials == 0 || self.max_steps == 0 {
            return Err(Error::Precondition(
                "trials and max_steps must be positive".into(),
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SimEstimate {
    pub estimate: f64,
    pub stderr: f64,
    /// Fraction of trajectories cut off at `max_steps`.
    pub truncated_mass: f64,
    /// `c^max_steps`, the probability that a surfer survives `max_steps`
    /// link steps without zapping.
    pub truncation_bound: f64,
    pub trials: u64,
}

impl SimEstimate {
    /// Number of standard errors separating the estimate from `exact`.
    pub fn z_score(&self, exact: f64) -> f64 {
        if self.stderr == 0.0 {
            if self.estimate == exact {
                0.0
            } else {
                f64::INFINITY
            }
        } else {
            (self.estimate - exact).abs() / self.stderr
        }
    }
}

#[derive(Default, Clone, Copy)]
struct Moments {
    sum: f64,
    sum_sq: f64,
    truncated: u64,
}

fn run_blocks<F>(cfg: &SimConfig, c: f64, trajectory: F) -> SimEstimate
where
    F: Fn(&mut ChaCha8Rng) -> (u64, bool) + Sync,
{
    let blocks = cfg.trials.div_ceil(BLOCK);
    let parts: Vec<Moments> = (0..blocks)
        .into_par_iter()
        .map(|b| {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
            rng.set_stream(b);
            let count = BLOCK.min(cfg.trials - b * BLOCK);
            let mut m = Moments::default();
            for _ in 0..count {
                let (x, cut) = trajectory(&mut rng);
                let x = x as f64;
                m.sum += x;
                m.sum_sq += x * x;
                m.truncated += cut as u64;
            }
            m
        })
        .collect();
    let total = parts.iter().fold(Moments::default(), |a, m| Moments {
        sum: a.sum + m.sum,
        sum_sq: a.sum_sq + m.sum_sq,
        truncated: a.truncated + m.truncated,
    });
    let n = cfg.trials as f64;
    let mean = total.sum / n;
    let var = if cfg.trials > 1 {
        ((total.sum_sq - n * mean * mean) / (n - 1.0)).max(0.0)
    } else {
        0.0
    };
    SimEstimate {
        estimate: mean,
        stderr: (var / n).sqrt(),
        truncated_mass: total.truncated as f64 / n,
        truncation_bound: c.powf(cfg.max_steps as f64),
        trials: cfg.trials,
    }
}

fn child_lists(g: &WebGraph) -> Result<Vec<Vec<usize>>> {
    g.validate()?;
    Ok((1..=g.n())
        .map(|i| g.children(i).map(|j| j - 1).collect())
        .collect())
}

/// Mean number of visits to `set` of a surfer starting at `start` who
/// follows a uniformly random outlink with probability `c` and otherwise
/// stops. Converges to `v_start`.
pub fn simulate_visits(
    g: &WebGraph,
    set: &NodeSet,
    ctx: &RankingContext,
    start: NodeId,
    cfg: &SimConfig,
) -> Result<SimEstimate> {
    cfg.check()?;
    let children = child_lists(g)?;
    g.check_node(start)?;
    set.check_range(g.n())?;
    let inside = set.mask(g.n());
    let c = ctx.c();
    Ok(run_blocks(cfg, c, |rng| {
        let mut at = start - 1;
        let mut visits = inside[at] as u64;
        for _ in 0..cfg.max_steps {
            if !rng.random_bool(c) {
                return (visits, false);
            }
            let ch = &children[at];
            at = ch[rng.random_range(0..ch.len())];
            visits += inside[at] as u64;
        }
        (visits, true)
    }))
}

/// Mean return time to `node` under the full Google chain: follow a link
/// with probability `c`, otherwise jump to a `z`-distributed node.
/// Converges to `1 / π_node`.
pub fn simulate_return_time(
    g: &WebGraph,
    ctx: &RankingContext,
    node: NodeId,
    cfg: &SimConfig,
) -> Result<SimEstimate> {
    cfg.check()?;
    let children = child_lists(g)?;
    g.check_node(node)?;
    let uniform = ctx.is_uniform();
    let zap = WeightedIndex::new(ctx.z()).map_err(|e| Error::Personalization(e.to_string()))?;
    let n = g.n();
    let c = ctx.c();
    let home = node - 1;
    Ok(run_blocks(cfg, c, |rng| {
        let mut at = home;
        for step in 1..=cfg.max_steps {
            at = if rng.random_bool(c) {
                let ch = &children[at];
                ch[rng.random_range(0..ch.len())]
            } else if uniform {
                rng.random_range(0..n)
            } else {
                zap.sample(rng)
            };
            if at == home {
                return (step, false);
            }
        }
        (cfg.max_steps, true)
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn all_nodes_give_geometric_length() {
        let g = fixtures::load("g_ex15").unwrap();
        let ctx = RankingContext::uniform(3, 0.85).unwrap();
        let est =
            simulate_visits(&g, &NodeSet::all(3), &ctx, 2, &SimConfig::new(100_000, 7)).unwrap();
        assert!(est.z_score(1.0 / 0.15) < 4.0, "{est:?}");
        assert_eq!(est.truncated_mass, 0.0);
    }

    #[test]
    fn cycle_return_time_is_length() {
        let g = fixtures::load("c3").unwrap();
        let ctx = RankingContext::uniform(3, 0.85).unwrap();
        let est = simulate_return_time(&g, &ctx, 2, &SimConfig::new(100_000, 3)).unwrap();
        assert!(est.z_score(3.0) < 4.0, "{est:?}");
    }

    #[test]
    fn deterministic_across_thread_counts() {
        let g = fixtures::load("g_fig2").unwrap();
        let ctx = RankingContext::uniform(11, 0.85).unwrap();
        let set = NodeSet::new([1]);
        let cfg = SimConfig::new(3 * BLOCK + 17, 99);
        let run = |threads| {
            rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .unwrap()
                .install(|| simulate_visits(&g, &set, &ctx, 2, &cfg).unwrap())
        };
        assert_eq!(run(1), run(3));
        assert_eq!(run(1).trials, 3 * BLOCK + 17);
    }

    #[test]
    fn truncation_is_reported() {
        let g = fixtures::load("c2").unwrap();
        let ctx = RankingContext::uniform(2, 0.99).unwrap();
        let cfg = SimConfig {
            trials: 2000,
            seed: 1,
            max_steps: 3,
        };
        let est = simulate_visits(&g, &NodeSet::new([1]), &ctx, 1, &cfg).unwrap();
        assert!(est.truncated_mass > 0.9);
        assert!((est.truncation_bound - 0.99f64.powi(3)).abs() < 1e-15);
        assert!(simulate_visits(&g, &NodeSet::new([1]), &ctx, 1, &SimConfig::new(0, 1)).is_err());
    }
}
