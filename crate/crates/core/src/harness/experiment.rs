//! Monte Carlo experiments over a grid of `(n, p, q)` cells.
//!
//! Replicate `r` of a cell uses seed `s = base_seed + r`: the graph is drawn
//! from stream 0 of ChaCha8 seeded with `s`, a random `θ0` from stream 1, and
//! MCMC chains from their own stream (see [`ChainConfig`]). Replicates run in
//! parallel and are collected in replicate order, so every statistic column
//! is a pure function of the config.

use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::config::{EngineKind, ExperimentConfig, Task};
use crate::bounds::{bounds_report, detect_mass_bound, recovery_mass_bound};
use crate::error::{Error, Result};
use crate::graphmodel::{
    enumeration_feasible, k_distance, sample_graph, ClassAssignment, Graph, ModelParams,
};
use crate::numeric::num_assignments;
use crate::posterior::{
    exact_posterior_capped, map_from_table, mh_sampler, overlap, posterior_mass, ChainConfig,
    PosteriorTable,
};
use crate::uncertainty::{
    enlarge, minimal_diameter_credible, minimal_order_credible, Construction,
};

/// One statistic from one replicate, in long format.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultRow {
    pub task: String,
    pub n: usize,
    pub p: f64,
    pub q: f64,
    pub replicate: u64,
    pub seed: u64,
    pub statistic: String,
    pub value: f64,
    /// Theoretical value the statistic is compared against, if any.
    pub bound: Option<f64>,
    pub vacuous: Option<bool>,
    /// Seconds spent on the replicate; excluded from determinism checks.
    pub wall_time_s: f64,
}

/// Aggregate of one statistic over the replicates of a cell.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub task: String,
    pub n: usize,
    pub p: f64,
    pub q: f64,
    pub k_n: usize,
    pub level: f64,
    pub statistic: String,
    pub count: u64,
    pub mean: f64,
    /// Monte Carlo standard error of the mean.
    pub std_error: f64,
    /// 95% interval: Wilson for indicators, normal otherwise.
    pub ci_low: f64,
    pub ci_high: f64,
    pub bound: Option<f64>,
    pub vacuous: Option<bool>,
}

/// A cell that was not run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SkippedCell {
    pub n: usize,
    pub p: f64,
    pub q: f64,
    pub reason: String,
}

/// A posterior kept by the `posterior-dump` task.
#[derive(Debug, Clone, PartialEq)]
pub struct DumpedTable {
    pub n: usize,
    pub p: f64,
    pub q: f64,
    pub replicate: u64,
    pub seed: u64,
    pub table: PosteriorTable,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct ExperimentOutput {
    pub rows: Vec<ResultRow>,
    pub summaries: Vec<Summary>,
    pub skipped: Vec<SkippedCell>,
    pub tables: Vec<DumpedTable>,
}

impl ExperimentOutput {
    pub fn summary(&self, n: usize, p: f64, q: f64, statistic: &str) -> Option<&Summary> {
        self.summaries
            .iter()
            .find(|s| s.n == n && s.p == p && s.q == q && s.statistic == statistic)
    }

    /// Rows of one statistic in one cell, in replicate order.
    pub fn values(&self, n: usize, p: f64, q: f64, statistic: &str) -> Vec<f64> {
        self.rows
            .iter()
            .filter(|r| r.n == n && r.p == p && r.q == q && r.statistic == statistic)
            .map(|r| r.value)
            .collect()
    }
}

/// Runs `cfg.task`.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ExperimentOutput> {
    cfg.validate()?;
    match cfg.task {
        Task::Recovery => run_recovery_experiment(cfg),
        Task::Detection => run_detection_experiment(cfg),
        Task::Coverage => run_coverage_experiment(cfg),
        Task::BoundCheck => run_bound_check(cfg),
        Task::PosteriorDump => run_posterior_dump(cfg),
    }
}

/// Per replicate: `Π({θ0}|X)`, whether the MAP is `θ0`, the off-mass
/// `Π(Θ_n \ {θ0} | X)` against [`recovery_mass_bound`], and the MAP overlap.
pub fn run_recovery_experiment(cfg: &ExperimentConfig) -> Result<ExperimentOutput> {
    run_cells(cfg, Task::Recovery, |ctx, rep| {
        let t = &rep.table;
        let mass0 = t.weight_of(&rep.theta0);
        let off = posterior_mass(t, |a| a != &rep.theta0);
        let map = map_from_table(t).ok_or(Error::UndefinedPosterior)?;
        let bound = recovery_mass_bound(ctx.params.n(), ctx.params.p(), ctx.params.q())?;
        Ok(vec![
            ("post_mass_theta0", mass0, None),
            ("map_is_theta0", indicator(map == &rep.theta0), None),
            ("off_mass", off, Some((bound, bound >= 1.0))),
            ("overlap_map", overlap(map, &rep.theta0)?, None),
        ])
    })
}

/// Per replicate: `Π(k(θ, θ0) >= k_n | X)` against [`detect_mass_bound`]
/// (asymptotic; absent for `k_n = 0`), and the MAP overlap.
pub fn run_detection_experiment(cfg: &ExperimentConfig) -> Result<ExperimentOutput> {
    run_cells(cfg, Task::Detection, |ctx, rep| {
        let t = &rep.table;
        let k_n = ctx.k_n;
        let far = posterior_mass(t, |a| k_distance(a, &rep.theta0).expect("same n") >= k_n);
        let bound = if k_n >= 1 {
            let b = detect_mass_bound(ctx.params.n(), k_n, ctx.params.p(), ctx.params.q())?;
            Some((b.value, b.vacuous))
        } else {
            None
        };
        let map = map_from_table(t).ok_or(Error::UndefinedPosterior)?;
        Ok(vec![
            ("mass_far", far, bound),
            ("map_is_theta0", indicator(map == &rep.theta0), None),
            ("overlap_map", overlap(map, &rep.theta0)?, None),
        ])
    })
}

/// Per replicate: membership of `θ0` in the credible set of level
/// `1 - a_n` and in its `k_n`-enlargement, both against the coverage lower
/// bound, plus diameters, sizes and the achieved level.
pub fn run_coverage_experiment(cfg: &ExperimentConfig) -> Result<ExperimentOutput> {
    run_cells(cfg, Task::Coverage, |ctx, rep| {
        let credible = match ctx.construction {
            Construction::MinimalOrder => minimal_order_credible(&rep.table, ctx.level)?,
            Construction::MinimalDiameter => minimal_diameter_credible(&rep.table, ctx.level)?,
        };
        let report = enlarge(&credible, ctx.k_n)?;
        let cover = Some((report.coverage_lower_bound, report.vacuous_flag));
        Ok(vec![
            (
                "theta0_in_credible",
                indicator(credible.contains(&rep.theta0)),
                cover,
            ),
            (
                "theta0_in_confidence",
                indicator(report.contains(&rep.theta0)),
                cover,
            ),
            ("credible_diameter", credible.diameter() as f64, None),
            (
                "confidence_diameter",
                report.confidence_diameter() as f64,
                None,
            ),
            ("credible_size", credible.len() as f64, None),
            (
                "confidence_size",
                report.confidence_members.len() as f64,
                None,
            ),
            ("level_achieved", credible.level_achieved(), None),
        ])
    })
}

/// Per replicate: log-evidence (exact engine), MAP log-weight and
/// `Π({θ0}|X)`; the posterior tables are kept in the output.
pub fn run_posterior_dump(cfg: &ExperimentConfig) -> Result<ExperimentOutput> {
    let mut tables = Vec::new();
    let mut out = run_cells_inner(cfg, Task::PosteriorDump, |ctx, rep| {
        let t = &rep.table;
        let map = map_from_table(t).ok_or(Error::UndefinedPosterior)?;
        let mut stats = vec![
            ("map_log_weight", t.log_weight_of(map), None),
            ("post_mass_theta0", t.weight_of(&rep.theta0), None),
        ];
        if let Some(ev) = t.log_evidence() {
            stats.insert(0, ("log_evidence", ev, None));
        }
        let dumped = DumpedTable {
            n: ctx.params.n(),
            p: ctx.params.p(),
            q: ctx.params.q(),
            replicate: rep.replicate,
            seed: rep.seed,
            table: rep.table.clone(),
        };
        Ok((stats, Some(dumped)))
    })?;
    for (_, dump) in out.1.drain(..) {
        tables.extend(dump);
    }
    out.0.tables = tables;
    Ok(out.0)
}

/// Evaluates every bound at each cell (no simulation). Each numeric field
/// of the bounds report becomes one row with replicate 0. `k_n` is taken
/// from the rule but at least 1.
pub fn run_bound_check(cfg: &ExperimentConfig) -> Result<ExperimentOutput> {
    let mut out = ExperimentOutput::default();
    for &n in &cfg.n_grid {
        for params in cfg.params.resolve(n)? {
            let (p, q) = (params.p(), params.q());
            let k_n = cfg.k_n.k_n(n).max(1);
            let started = Instant::now();
            let report =
                match bounds_report(n, p, q, k_n, cfg.contiguity_c, cfg.delta, cfg.dyer_frieze_a) {
                    Ok(r) => r,
                    Err(e) => {
                        out.skipped.push(SkippedCell {
                            n,
                            p,
                            q,
                            reason: e.to_string(),
                        });
                        continue;
                    }
                };
            let value = serde_json::to_value(&report)?;
            let mut leaves = Vec::new();
            flatten_json("", &value, &mut leaves);
            let wall = started.elapsed().as_secs_f64();
            for (name, v) in leaves {
                out.rows.push(ResultRow {
                    task: Task::BoundCheck.name().into(),
                    n,
                    p,
                    q,
                    replicate: 0,
                    seed: cfg.base_seed,
                    statistic: name,
                    value: v,
                    bound: None,
                    vacuous: None,
                    wall_time_s: wall,
                });
            }
        }
    }
    Ok(out)
}

fn flatten_json(prefix: &str, value: &serde_json::Value, out: &mut Vec<(String, f64)>) {
    use serde_json::Value;
    let join = |key: &str| {
        if prefix.is_empty() {
            key.to_string()
        } else {
            format!("{prefix}.{key}")
        }
    };
    match value {
        Value::Object(map) => {
            for (k, v) in map {
                flatten_json(&join(k), v, out);
            }
        }
        Value::Number(x) => out.push((prefix.to_string(), x.as_f64().unwrap_or(f64::NAN))),
        Value::Bool(b) => out.push((prefix.to_string(), indicator(*b))),
        _ => {}
    }
}

fn indicator(b: bool) -> f64 {
    if b {
        1.0
    } else {
        0.0
    }
}

/// Per-cell settings shared by the replicates.
pub(crate) struct CellContext {
    pub params: ModelParams,
    pub k_n: usize,
    pub level: f64,
    pub construction: Construction,
}

pub(crate) struct Replicate {
    pub replicate: u64,
    pub seed: u64,
    pub theta0: ClassAssignment,
    pub table: PosteriorTable,
}

type Stat = (&'static str, f64, Option<(f64, bool)>);

fn run_cells(
    cfg: &ExperimentConfig,
    task: Task,
    per_replicate: impl Fn(&CellContext, &Replicate) -> Result<Vec<Stat>> + Sync,
) -> Result<ExperimentOutput> {
    run_cells_inner(cfg, task, |ctx, rep| {
        Ok((per_replicate(ctx, rep)?, None::<DumpedTable>))
    })
    .map(|(out, _)| out)
}

/// `θ0` for replicate seed `seed`.
pub fn draw_theta0(n: usize, seed: u64, fixed: bool) -> ClassAssignment {
    if fixed {
        return ClassAssignment::block(n);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(1);
    ClassAssignment::random(n, &mut rng)
}

/// Posterior of one replicate under the configured engine.
pub fn replicate_posterior(
    cfg: &ExperimentConfig,
    graph: &Graph,
    params: &ModelParams,
    seed: u64,
) -> Result<PosteriorTable> {
    match cfg.engine {
        EngineKind::Exact => exact_posterior_capped(graph, params, cfg.enumeration_cap),
        EngineKind::Mcmc => {
            let chain = ChainConfig { seed, ..cfg.chain };
            mh_sampler(graph, params, &chain)?.to_empirical_table()
        }
    }
}

#[allow(clippy::type_complexity)]
fn run_cells_inner<T: Send>(
    cfg: &ExperimentConfig,
    task: Task,
    per_replicate: impl Fn(&CellContext, &Replicate) -> Result<(Vec<Stat>, Option<T>)> + Sync,
) -> Result<(ExperimentOutput, Vec<(u64, Option<T>)>)> {
    cfg.validate()?;
    let mut out = ExperimentOutput::default();
    let mut extras = Vec::new();
    for &n in &cfg.n_grid {
        for params in cfg.params.resolve(n)? {
            let (p, q) = (params.p(), params.q());
            if cfg.engine == EngineKind::Exact && !enumeration_feasible(n, cfg.enumeration_cap) {
                let count = num_assignments(n).map_or("more than 2^128".into(), |c| c.to_string());
                out.skipped.push(SkippedCell {
                    n,
                    p,
                    q,
                    reason: format!(
                        "exact engine needs {count} assignments, above the cap of {}",
                        cfg.enumeration_cap
                    ),
                });
                continue;
            }
            let deficit = cfg.level.deficit(n);
            let ctx = CellContext {
                params,
                k_n: cfg.k_n.k_n(n),
                level: (1.0 - deficit).clamp(f64::MIN_POSITIVE, 1.0),
                construction: cfg.credible,
            };
            let results: Vec<(Vec<ResultRow>, Option<T>)> = (0..cfg.replicates)
                .into_par_iter()
                .map(|r| {
                    let started = Instant::now();
                    let seed = cfg.replicate_seed(r);
                    let theta0 = draw_theta0(n, seed, cfg.fixed_theta0);
                    let graph = sample_graph(&ctx.params, &theta0, seed)?;
                    let table = replicate_posterior(cfg, &graph, &ctx.params, seed)?;
                    let rep = Replicate {
                        replicate: r,
                        seed,
                        theta0,
                        table,
                    };
                    let (stats, extra) = per_replicate(&ctx, &rep)?;
                    let wall = started.elapsed().as_secs_f64();
                    let rows = stats
                        .into_iter()
                        .map(|(name, value, bound)| ResultRow {
                            task: task.name().into(),
                            n,
                            p,
                            q,
                            replicate: r,
                            seed,
                            statistic: name.into(),
                            value,
                            bound: bound.map(|b| b.0),
                            vacuous: bound.map(|b| b.1),
                            wall_time_s: wall,
                        })
                        .collect();
                    Ok((rows, extra))
                })
                .collect::<Result<_>>()?;
            let mut cell_rows = Vec::new();
            for (r, (rows, extra)) in results.into_iter().enumerate() {
                cell_rows.extend(rows);
                extras.push((r as u64, extra));
            }
            out.summaries.extend(summarize(task, &ctx, &cell_rows));
            out.rows.extend(cell_rows);
        }
    }
    Ok((out, extras))
}

fn is_indicator(statistic: &str) -> bool {
    statistic.starts_with("theta0_in_") || statistic == "map_is_theta0"
}

fn summarize(task: Task, ctx: &CellContext, rows: &[ResultRow]) -> Vec<Summary> {
    let (n, p, q) = (ctx.params.n(), ctx.params.p(), ctx.params.q());
    let mut names: Vec<&str> = Vec::new();
    for r in rows {
        if !names.contains(&r.statistic.as_str()) {
            names.push(&r.statistic);
        }
    }
    let base = |statistic: &str,
                count: u64,
                mean: f64,
                se: f64,
                ci: (f64, f64),
                bound: Option<(f64, bool)>| Summary {
        task: task.name().into(),
        n,
        p,
        q,
        k_n: ctx.k_n,
        level: ctx.level,
        statistic: statistic.into(),
        count,
        mean,
        std_error: se,
        ci_low: ci.0,
        ci_high: ci.1,
        bound: bound.map(|b| b.0),
        vacuous: bound.map(|b| b.1),
    };
    let mut out = Vec::new();
    for name in names {
        let selected: Vec<&ResultRow> = rows.iter().filter(|r| r.statistic == name).collect();
        let values: Vec<f64> = selected.iter().map(|r| r.value).collect();
        let (mean, se) = mean_and_se(&values);
        let ci = if is_indicator(name) {
            let successes = values.iter().filter(|&&v| v == 1.0).count() as u64;
            wilson_interval(successes, values.len() as u64)
        } else {
            (mean - 1.96 * se, mean + 1.96 * se)
        };
        let bound = selected[0].bound.zip(selected[0].vacuous);
        out.push(base(name, values.len() as u64, mean, se, ci, bound));
    }
    if task == Task::Coverage {
        let nf = n as f64;
        let count = rows.iter().map(|r| r.replicate).max().map_or(0, |m| m + 1);
        for (name, v) in [
            ("regime_n_abs_diff", nf * (p - q).abs()),
            ("regime_n_abs_sqrt_diff", nf * (p.sqrt() - q.sqrt()).abs()),
        ] {
            out.push(base(name, count, v, 0.0, (v, v), None));
        }
    }
    out
}

/// Sample mean and its standard error (`sd / √m`, with `m - 1` in the
/// variance).
pub fn mean_and_se(values: &[f64]) -> (f64, f64) {
    let m = values.len();
    if m == 0 {
        return (f64::NAN, f64::NAN);
    }
    let mean = values.iter().sum::<f64>() / m as f64;
    if m == 1 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (m - 1) as f64;
    (mean, (var / m as f64).sqrt())
}

/// 95% Wilson score interval for a binomial proportion.
pub fn wilson_interval(successes: u64, trials: u64) -> (f64, f64) {
    if trials == 0 {
        return (0.0, 1.0);
    }
    let z = 1.959_963_984_540_054_f64;
    let m = trials as f64;
    let phat = successes as f64 / m;
    let denom = 1.0 + z * z / m;
    let center = (phat + z * z / (2.0 * m)) / denom;
    let half = z * (phat * (1.0 - phat) / m + z * z / (4.0 * m * m)).sqrt() / denom;
    ((center - half).max(0.0), (center + half).min(1.0))
}
