use std::fmt;

use linkrank::brute::{self, Configuration, Scope};
use linkrank::calculus::{self, MutationAnalyzer, OutlinkMutation};
use linkrank::pagerank::{self, RankingContext};
use linkrank::sim::{self, SimConfig};
use linkrank::structures::{self, StructureConstraints};
use linkrank::{dot, Edge, NodeSet, WebGraph};
use serde_json::{json, Value};

use crate::report::human;
use crate::{Command, GraphArgs, ShapeArgs, SimKind};

#[derive(Debug)]
pub enum CliError {
    Io(String, std::io::Error),
    Input(String),
    Lib(linkrank::Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Lib(e) if e.is_infeasible() => 2,
            _ => 1,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Lib(e) if e.is_infeasible() => "infeasible",
            _ => "input",
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Io(path, e) => write!(f, "{path}: {e}"),
            CliError::Input(msg) => f.write_str(msg),
            CliError::Lib(e) => write!(f, "{e}"),
        }
    }
}

impl From<linkrank::Error> for CliError {
    fn from(e: linkrank::Error) -> Self {
        CliError::Lib(e)
    }
}

type Result<T> = std::result::Result<T, CliError>;

pub struct Outcome {
    pub results: Value,
    pub summary: String,
    /// Raw input files, hashed into the report digest.
    pub files: Vec<Vec<u8>>,
    /// Plain text to print instead of a report.
    pub raw: Option<String>,
}

struct Inputs {
    g: WebGraph,
    ctx: RankingContext,
    files: Vec<Vec<u8>>,
}

fn read(path: &str) -> Result<Vec<u8>> {
    std::fs::read(path).map_err(|e| CliError::Io(path.to_string(), e))
}

fn parse_z(path: &str, text: &[u8]) -> Result<Vec<f64>> {
    let text = std::str::from_utf8(text).map_err(|e| CliError::Input(format!("{path}: {e}")))?;
    text.lines()
        .enumerate()
        .map(|(k, line)| (k, line.trim()))
        .filter(|(_, line)| !line.is_empty() && !line.starts_with('#'))
        .map(|(k, line)| {
            line.parse::<f64>()
                .map_err(|e| CliError::Input(format!("{path}: line {}: {e}", k + 1)))
        })
        .collect()
}

fn load(args: &GraphArgs) -> Result<Inputs> {
    let bytes = read(&args.graph)?;
    let text =
        std::str::from_utf8(&bytes).map_err(|e| CliError::Input(format!("{}: {e}", args.graph)))?;
    let parsed: WebGraph = text.parse()?;
    let g = if args.patch_dangling {
        parsed.patch_dangling()
    } else {
        parsed.validate()?;
        parsed
    };
    let mut files = vec![bytes];
    let ctx = match &args.z_file {
        Some(path) => {
            let z_bytes = read(path)?;
            let z = parse_z(path, &z_bytes)?;
            files.push(z_bytes);
            if z.len() != g.n() {
                return Err(linkrank::Error::LengthMismatch {
                    expected: g.n(),
                    got: z.len(),
                }
                .into());
            }
            RankingContext::new(args.c, z)?
        }
        None => RankingContext::uniform(g.n(), args.c)?,
    };
    Ok(Inputs { g, ctx, files })
}

fn constraints(shape: &ShapeArgs) -> Result<StructureConstraints> {
    if shape.min_outlinks == 0 {
        return Err(CliError::Input("--min-outlinks must be at least 1".into()));
    }
    Ok(StructureConstraints {
        allow_self_links: !shape.no_self_links,
        min_external_outlinks: shape.min_outlinks,
        target_set: None,
    })
}

fn edge_list(config: &Configuration) -> Vec<Edge> {
    let mut edges: Vec<Edge> = config
        .internal
        .iter()
        .chain(&config.external_out)
        .copied()
        .collect();
    edges.sort_unstable();
    edges
}

fn outcome(results: Value, summary: String, files: Vec<Vec<u8>>) -> Result<Outcome> {
    Ok(Outcome {
        results,
        summary,
        files,
        raw: None,
    })
}

fn set_block(g: &WebGraph, set: &NodeSet, ctx: &RankingContext) -> Result<(Value, f64)> {
    set.check_range(g.n())?;
    if set.is_empty() {
        return Err(linkrank::Error::EmptySet.into());
    }
    let v = pagerank::visit_vector(g, set, ctx)?;
    let value = pagerank::set_pagerank_from(&v, ctx);
    let top = pagerank::top_set_of(g, &v).ok();
    Ok((
        json!({
            "v": v.v,
            "set_pagerank": value,
            "V": top.as_ref().map(|t| t.nodes.clone()),
            "V_value": top.as_ref().map(|t| t.max),
        }),
        value,
    ))
}

pub fn run(command: &Command) -> Result<Outcome> {
    match command {
        Command::Pagerank { graph, set } => {
            let Inputs { g, ctx, files } = load(graph)?;
            let pr = pagerank::pagerank(&g, &ctx)?;
            let mut results = json!({"pi": pr.pi, "residual": pr.residual});
            let mut summary = format!("n = {}, residual {:.1e}", g.n(), pr.residual);
            if let Some(set) = set {
                let (block, value) = set_block(&g, set, &ctx)?;
                results
                    .as_object_mut()
                    .unwrap()
                    .extend(block.as_object().unwrap().clone());
                summary = format!("{summary}, set PageRank {}", human(value));
            }
            outcome(results, summary, files)
        }
        Command::Visits { graph, set } => {
            let Inputs { g, ctx, files } = load(graph)?;
            let (block, value) = set_block(&g, set, &ctx)?;
            let pr = pagerank::pagerank(&g, &ctx)?;
            let mut results = json!({"pi": pr.pi});
            results
                .as_object_mut()
                .unwrap()
                .extend(block.as_object().unwrap().clone());
            outcome(results, format!("set PageRank {}", human(value)), files)
        }
        Command::Update {
            graph,
            set,
            node,
            children,
        } => {
            let Inputs { g, ctx, files } = load(graph)?;
            g.check_node(*node)?;
            children.check_range(g.n())?;
            let m = OutlinkMutation::new(*node, children.clone())?;
            let analyzer = MutationAnalyzer::new(&g, set, &ctx)?;
            let r = analyzer.evaluate(&m)?;
            let recomputed = calculus::recomputed_set_pagerank(&g, set, &ctx, &m)?;
            let residual =
                (r.new_value - recomputed).abs() / recomputed.abs().max(f64::MIN_POSITIVE);
            let results = json!({
                "old_value": r.old_value,
                "new_value": r.new_value,
                "delta": r.new_value - r.old_value,
                "sign": r.change.as_str(),
                "at_tolerance": r.at_tolerance,
                "delta_v": r.delta_v,
                "denominator": r.denominator,
                "recomputed_value": recomputed,
                "residual": residual,
            });
            let summary = format!(
                "{} -> {} ({}), residual {:.1e}",
                human(r.old_value),
                human(r.new_value),
                r.change.as_str(),
                residual
            );
            outcome(results, summary, files)
        }
        Command::Optimal {
            graph,
            set,
            shape,
            max_perm,
        } => {
            let Inputs { g, ctx, files } = load(graph)?;
            let cons = constraints(shape)?;
            let best = structures::build_optimal_structure(&g, set, &ctx, &cons, *max_perm)?;
            let cert = structures::verify_website_opt_shape_with(&best.graph, set, &ctx, &cons)?;
            let results = json!({
                "graph": best.graph.to_edge_list(),
                "value": best.value,
                "ordering": best.ordering,
                "targets": best.targets,
                "internal": best.internal,
                "external_out": best.external_out,
                "candidates": best.candidates,
                "certificate": cert,
            });
            let summary = format!(
                "value {}, ordering {:?}, targets {:?}",
                human(best.value),
                best.ordering,
                best.targets
            );
            outcome(results, summary, files)
        }
        Command::Verify { graph, set, shape } => {
            let Inputs { g, ctx, files } = load(graph)?;
            let cons = constraints(shape)?;
            let outlink = structures::verify_outlink_structure(&g, set, &ctx)?;
            let internal = structures::verify_internal_structure(&g, set, &ctx)?;
            let website = structures::verify_website_opt_shape_with(&g, set, &ctx, &cons)?;
            let summary = format!(
                "outlink {}, internal {}, website {}",
                outlink.satisfied, internal.satisfied, website.satisfied
            );
            let results = json!({"outlink": outlink, "internal": internal, "website": website});
            outcome(results, summary, files)
        }
        Command::Brute {
            graph,
            set,
            target,
            shape,
            cap,
            scope,
        } => {
            let Inputs { g, ctx, files } = load(graph)?;
            let mut cons = constraints(shape)?;
            let scope: Scope = (*scope).into();
            let (result, shapes) = match (target, scope) {
                (Some(t), Scope::All) => {
                    let tr = brute::brute_force_target(&g, set, t, &ctx, &cons, *cap)?;
                    (tr.result, Some((tr.shape_on_set, tr.shape_on_target)))
                }
                _ => {
                    cons.target_set = target.clone();
                    (
                        brute::brute_force_scoped(&g, set, &ctx, &cons, scope, *cap)?,
                        None,
                    )
                }
            };
            let optima: Vec<Vec<Edge>> = result.optima.iter().map(edge_list).collect();
            let mut results = json!({
                "optima": optima,
                "value": result.value,
                "count_enumerated": result.count_enumerated,
                "top2_gap": result.top2_gap,
                "second_path_value": result.second_path_value,
                "argmax_tolerance": result.argmax_tolerance,
            });
            if let Some((on_set, on_target)) = shapes {
                let map = results.as_object_mut().unwrap();
                map.insert("shape_on_set".into(), json!(on_set));
                map.insert("shape_on_target".into(), json!(on_target));
            }
            let summary = format!(
                "{} optima of {} configurations, value {}",
                optima.len(),
                result.count_enumerated,
                human(result.value)
            );
            outcome(results, summary, files)
        }
        Command::Simulate {
            kind,
            graph,
            set,
            start,
            trials,
            seed,
            max_steps,
        } => {
            let Inputs { g, ctx, files } = load(graph)?;
            let cfg = SimConfig {
                trials: *trials,
                seed: *seed,
                max_steps: *max_steps,
            };
            g.check_node(*start)?;
            let (est, exact) = match kind {
                SimKind::Visits => {
                    let set = set
                        .as_ref()
                        .ok_or_else(|| CliError::Input("simulate visits needs --set".into()))?;
                    let est = sim::simulate_visits(&g, set, &ctx, *start, &cfg)?;
                    (est, pagerank::visit_vector(&g, set, &ctx)?.get(*start))
                }
                SimKind::Return => {
                    let est = sim::simulate_return_time(&g, &ctx, *start, &cfg)?;
                    (est, 1.0 / pagerank::pagerank(&g, &ctx)?.get(*start))
                }
            };
            let results = json!({
                "estimate": est.estimate,
                "stderr": est.stderr,
                "truncated_mass": est.truncated_mass,
                "truncation_bound": est.truncation_bound,
                "trials": est.trials,
                "exact": exact,
                "z_score": est.z_score(exact),
            });
            let summary = format!(
                "estimate {} ± {} (exact {})",
                human(est.estimate),
                human(est.stderr),
                human(exact)
            );
            outcome(results, summary, files)
        }
        Command::ExportDot {
            graph,
            set,
            with_v,
            raw,
        } => {
            let Inputs { g, ctx, files } = load(graph)?;
            let set = set.clone().unwrap_or_default();
            set.check_range(g.n())?;
            let v = if *with_v {
                if set.is_empty() {
                    return Err(CliError::Input("--with-v needs a nonempty --set".into()));
                }
                Some(pagerank::visit_vector(&g, &set, &ctx)?.v)
            } else {
                None
            };
            let text = dot::export_dot(&g, &set, v.as_deref());
            if *raw {
                return Ok(Outcome {
                    results: Value::Null,
                    summary: String::new(),
                    files,
                    raw: Some(text),
                });
            }
            outcome(
                json!({"dot": text}),
                format!("{} nodes, {} edges", g.n(), g.edge_count()),
                files,
            )
        }
    }
}
