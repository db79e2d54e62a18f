//! Reproducible Monte Carlo and exact experiments.
//!
//! Monte Carlo work is split into fixed-size batches; batch `b` always uses
//! stream index `b` of the master seed and batches are merged by commutative
//! reduction, so the worker count never affects any output byte.

use std::collections::BTreeMap;

use rayon::prelude::*;

use crate::canon::RootedTreeCode;
use crate::count;
use crate::error::{Error, Result};
use crate::laws::{self, Law};
use crate::report::Report;
use crate::sample::{sample_f_infinity_ball, ForestSampler, SeededStream};
use crate::stats::{self, EmpiricalDist};

const BATCH: u64 = 4096;

/// Configuration shared by the experiment commands. `seed` is mandatory:
/// commands never run with an implicit seed.
#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    pub n: u64,
    pub samples: u64,
    pub radius: u32,
    pub seed: u64,
    pub size_bound: usize,
    pub workers: usize,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            n: 100,
            samples: 10_000,
            radius: 2,
            seed: 0,
            size_bound: 5,
            workers: 0,
        }
    }
}

fn pool(workers: usize) -> rayon::ThreadPool {
    rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .expect("thread pool")
}

fn batches(samples: u64) -> Vec<(u64, u64)> {
    // (stream_index, batch_size)
    let mut out = Vec::new();
    let mut index = 0;
    let mut left = samples;
    while left > 0 {
        let size = left.min(BATCH);
        out.push((index, size));
        index += 1;
        left -= size;
    }
    out
}

fn common_meta(report: &mut Report, config: &ExperimentConfig) {
    report.meta("version", env!("CARGO_PKG_VERSION"));
    report.meta("seed", config.seed);
    report.meta("samples", config.samples);
}

/// Distribution of `Small` over seeded uniform forests, against `p_inf`.
pub fn run_small_dist(config: &ExperimentConfig) -> Result<Report> {
    let sampler = ForestSampler::new(config.n as u32);
    let seed = config.seed;
    let dist = pool(config.workers).install(|| {
        batches(config.samples)
            .into_par_iter()
            .map(|(index, size)| {
                let mut rng = SeededStream::new(seed, index).rng();
                let mut local = EmpiricalDist::default();
                for _ in 0..size {
                    let forest = sampler.sample(&mut rng);
                    let shape = stats::small_components(&forest)
                        .expect("forest components are trees");
                    local.record(shape.serialize());
                }
                local
            })
            .reduce(EmpiricalDist::default, EmpiricalDist::merge)
    });
    let freqs = dist.frequencies()?;
    let tv = laws::tv_distance(&freqs, Law::SmallForest, config.size_bound)?;
    let mut report = Report::new(&["key", "count", "frequency", "law"]);
    common_meta(&mut report, config);
    report.meta("n", config.n);
    report.meta("bound", config.size_bound);
    report.meta("tv_distance", format!("{tv:.6}"));
    let table = laws::law_table(Law::SmallForest, config.size_bound)?;
    let law_of: BTreeMap<&str, f64> = table
        .iter()
        .map(|(k, m)| (k.as_str(), m.value()))
        .collect();
    let mut keys: Vec<&String> = dist.counts.keys().collect();
    keys.sort_by_key(|k| (k.len(), k.as_str()));
    for key in keys {
        let count = dist.counts[key];
        let law = law_of.get(key.as_str()).copied();
        report.row(vec![
            key.clone(),
            count.to_string(),
            format!("{:.6}", count as f64 / dist.total as f64),
            law.map_or_else(|| "".into(), |v| format!("{v:.6}")),
        ]);
    }
    Ok(report)
}

/// Empirical means of `alpha(T)/n` over seeded uniform forests, against
/// `a_inf`.
pub fn run_pendant_means(config: &ExperimentConfig) -> Result<Report> {
    let sampler = ForestSampler::new(config.n as u32);
    let seed = config.seed;
    let cap = config.size_bound as u32;
    let totals = pool(config.workers).install(|| {
        batches(config.samples)
            .into_par_iter()
            .map(|(index, size)| {
                let mut rng = SeededStream::new(seed, index).rng();
                let mut local: BTreeMap<RootedTreeCode, u64> = BTreeMap::new();
                for _ in 0..size {
                    let forest = sampler.sample(&mut rng);
                    let profile = stats::pendant_profile(&forest, cap);
                    for (code, count) in profile.counts {
                        *local.entry(code).or_insert(0) += count;
                    }
                }
                local
            })
            .reduce(BTreeMap::new, |mut a, b| {
                for (k, v) in b {
                    *a.entry(k).or_insert(0) += v;
                }
                a
            })
    });
    let mut report = Report::new(&["shape", "mean_alpha_over_n", "a_inf", "abs_error"]);
    common_meta(&mut report, config);
    report.meta("n", config.n);
    report.meta("bound", config.size_bound);
    let denom = (config.samples * config.n) as f64;
    for (code, total) in &totals {
        let mean = *total as f64 / denom;
        let law = laws::a_inf(code).value();
        report.row(vec![
            code.code().to_string(),
            format!("{mean:.6}"),
            format!("{law:.6}"),
            format!("{:.6}", (mean - law).abs()),
        ]);
    }
    Ok(report)
}

/// Empirical component counts of seeded uniform forests against the exact
/// finite-n law and the 1 + Poisson(1/2) limit.
pub fn run_component_counts(config: &ExperimentConfig) -> Result<Report> {
    let sampler = ForestSampler::new(config.n as u32);
    let seed = config.seed;
    let dist = pool(config.workers).install(|| {
        batches(config.samples)
            .into_par_iter()
            .map(|(index, size)| {
                let mut rng = SeededStream::new(seed, index).rng();
                let mut local = EmpiricalDist::default();
                for _ in 0..size {
                    let forest = sampler.sample(&mut rng);
                    local.record(forest.component_count().to_string());
                }
                local
            })
            .reduce(EmpiricalDist::default, EmpiricalDist::merge)
    });
    let k_cap = 30u64;
    let exact = crate::classes::component_law_exact(config.n, k_cap);
    let freqs = dist.frequencies()?;
    // TV of the empirical distribution against the exact law
    let mut tv = 0.0;
    let mut emp_in = 0.0;
    let mut law_in = 0.0;
    for (k, p) in exact.iter().enumerate() {
        let key = (k + 1).to_string();
        let emp = freqs.get(&key).copied().unwrap_or(0.0);
        let law = count::rational_to_f64(p);
        tv += (emp - law).abs();
        emp_in += emp;
        law_in += law;
    }
    tv = 0.5 * (tv + ((1.0 - emp_in) - (1.0 - law_in)).abs());

    let mut report = Report::new(&["components", "count", "frequency", "exact", "limit"]);
    common_meta(&mut report, config);
    report.meta("n", config.n);
    report.meta("tv_exact", format!("{tv:.6}"));
    for (k, p) in exact.iter().enumerate() {
        let key = (k + 1).to_string();
        let count = dist.counts.get(&key).copied().unwrap_or(0);
        if count == 0 && count::rational_to_f64(p) < 1e-12 {
            continue;
        }
        report.row(vec![
            key.clone(),
            count.to_string(),
            format!("{:.6}", count as f64 / dist.total as f64),
            format!("{:.6}", count::rational_to_f64(p)),
            format!("{:.6}", laws::component_law(k as u64).value()),
        ]);
    }
    Ok(report)
}

/// Radius-r ball distributions of a uniform forest rooted at a uniform
/// vertex, and of the uniform infinite forest, side by side.
pub fn run_ball_dist(config: &ExperimentConfig) -> Result<Report> {
    let sampler = ForestSampler::new(config.n as u32);
    let seed = config.seed;
    let r = config.radius;
    let n = config.n;
    let (dist_fn, dist_inf) = pool(config.workers).install(|| {
        let finite = batches(config.samples)
            .into_par_iter()
            .map(|(index, size)| {
                let mut rng = SeededStream::new(seed, 2 * index).rng();
                let mut local = EmpiricalDist::default();
                for _ in 0..size {
                    let forest = sampler.sample(&mut rng);
                    let v = rand::Rng::gen_range(&mut rng, 1..=n as u32);
                    let code = stats::ball_code(&forest, v, r).expect("forest balls are trees");
                    local.record(code.code().to_string());
                }
                local
            })
            .reduce(EmpiricalDist::default, EmpiricalDist::merge);
        let infinite = batches(config.samples)
            .into_par_iter()
            .map(|(index, size)| {
                let mut rng = SeededStream::new(seed, 2 * index + 1).rng();
                let mut local = EmpiricalDist::default();
                for _ in 0..size {
                    let ball = sample_f_infinity_ball(r, &mut rng);
                    let code = stats::spine_ball_code(&ball, r).expect("radius within sample");
                    local.record(code.code().to_string());
                }
                local
            })
            .reduce(EmpiricalDist::default, EmpiricalDist::merge);
        (finite, infinite)
    });
    let f_fn = dist_fn.frequencies()?;
    let f_inf = dist_inf.frequencies()?;
    let mut keys: Vec<String> = f_fn.keys().chain(f_inf.keys()).cloned().collect();
    keys.sort_by_key(|k| (k.len(), k.clone()));
    keys.dedup();
    let tv: f64 = 0.5
        * keys
            .iter()
            .map(|k| {
                (f_fn.get(k).copied().unwrap_or(0.0) - f_inf.get(k).copied().unwrap_or(0.0)).abs()
            })
            .sum::<f64>();
    let mut report = Report::new(&["key", "freq_forest", "freq_infinite"]);
    common_meta(&mut report, config);
    report.meta("n", config.n);
    report.meta("radius", r);
    report.meta("tv_distance", format!("{tv:.6}"));
    for key in keys {
        report.row(vec![
            key.clone(),
            format!("{:.6}", f_fn.get(&key).copied().unwrap_or(0.0)),
            format!("{:.6}", f_inf.get(&key).copied().unwrap_or(0.0)),
        ]);
    }
    Ok(report)
}

/// Radius-r hull distribution of the uniform infinite forest against
/// `q_inf`. Hulls needing structure beyond the sampled radius (r + 2) count
/// as unresolved.
pub fn run_hull_dist(config: &ExperimentConfig) -> Result<Report> {
    let seed = config.seed;
    let r = config.radius;
    let sample_radius = r + 2;
    let dist = pool(config.workers).install(|| {
        batches(config.samples)
            .into_par_iter()
            .map(|(index, size)| {
                let mut rng = SeededStream::new(seed, index).rng();
                let mut local = EmpiricalDist::default();
                for _ in 0..size {
                    let ball = sample_f_infinity_ball(sample_radius, &mut rng);
                    match stats::hull_of_spine_ball(&ball, r) {
                        Some(code) => local.record(code.code().to_string()),
                        None => local.record("unresolved".into()),
                    }
                }
                local
            })
            .reduce(EmpiricalDist::default, EmpiricalDist::merge)
    });
    let mut report = Report::new(&["key", "count", "frequency", "q_inf"]);
    common_meta(&mut report, config);
    report.meta("radius", r);
    report.meta("sample_radius", sample_radius);
    report.meta(
        "unresolved",
        dist.counts.get("unresolved").copied().unwrap_or(0),
    );
    let table = laws::law_table(Law::Hull { radius: r }, config.size_bound)?;
    let law_of: BTreeMap<&str, f64> = table
        .iter()
        .map(|(k, m)| (k.as_str(), m.value()))
        .collect();
    let mut keys: Vec<&String> = dist.counts.keys().collect();
    keys.sort_by_key(|k| (k.len(), k.as_str()));
    for key in keys {
        let count = dist.counts[key];
        report.row(vec![
            key.clone(),
            count.to_string(),
            format!("{:.6}", count as f64 / dist.total as f64),
            law_of
                .get(key.as_str())
                .map_or_else(String::new, |v| format!("{v:.6}")),
        ]);
    }
    Ok(report)
}

/// Exact connectivity probabilities `u_n / f_n` along a list of sizes.
pub fn run_renyi_curve(ns: &[u64]) -> Result<Report> {
    let mut report = Report::new(&["n", "probability", "float", "gap_to_limit"]);
    report.meta("version", env!("CARGO_PKG_VERSION"));
    report.meta("law", "exp(-1/2)");
    let limit = (-0.5f64).exp();
    for &n in ns {
        let p = count::connectivity_probability_exact(n)?;
        let f = count::rational_to_f64(&p);
        report.row(vec![
            n.to_string(),
            p.to_string(),
            format!("{f:.6}"),
            format!("{:.6}", (f - limit).abs()),
        ]);
    }
    Ok(report)
}

/// Exact connectivity probabilities of the clique example class along a
/// list of sizes.
pub fn run_clique_curve(ns: &[u64]) -> Result<Report> {
    let mut report = Report::new(&[
        "n",
        "core",
        "connected",
        "total",
        "probability",
        "gap_to_limit",
    ]);
    report.meta("version", env!("CARGO_PKG_VERSION"));
    report.meta("law", "exp(-1/2)");
    let limit = (-0.5f64).exp();
    for &n in ns {
        let stats = crate::classes::clique_class_stats(n)?;
        let f = count::rational_to_f64(&stats.probability);
        report.row(vec![
            n.to_string(),
            stats.core_size.to_string(),
            stats.connected.to_string(),
            stats.total.to_string(),
            format!("{f:.6}"),
            format!("{:.6}", (f - limit).abs()),
        ]);
    }
    Ok(report)
}

/// Names accepted by `run_experiment`.
pub const EXPERIMENTS: &[&str] = &[
    "small-dist",
    "pendant-means",
    "component-counts",
    "ball-dist",
    "hull-dist",
    "renyi-curve",
    "clique-curve",
];

/// Dispatch by experiment name; curve experiments interpret `n` as the
/// largest size of the standard doubling grid `50,100,...`.
pub fn run_experiment(name: &str, config: &ExperimentConfig) -> Result<Report> {
    match name {
        "small-dist" => run_small_dist(config),
        "pendant-means" => run_pendant_means(config),
        "component-counts" => run_component_counts(config),
        "ball-dist" => run_ball_dist(config),
        "hull-dist" => run_hull_dist(config),
        "renyi-curve" => {
            let ns: Vec<u64> = doubling_grid(config.n);
            run_renyi_curve(&ns)
        }
        "clique-curve" => {
            let ns: Vec<u64> = doubling_grid(config.n);
            run_clique_curve(&ns)
        }
        other => Err(Error::Parse(format!("unknown experiment: {other}"))),
    }
}

fn doubling_grid(max: u64) -> Vec<u64> {
    let mut ns = Vec::new();
    let mut n = 50;
    while n <= max {
        ns.push(n);
        n *= 2;
    }
    if ns.is_empty() {
        ns.push(max);
    }
    ns
}
