//! forestlab CLI: exact counts, limit-law tables, seeded experiments,
//! verification suites, and finite-class checks.

use std::io::Write as _;
use std::path::PathBuf;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use num_traits::ToPrimitive;

use forestlab::classes;
use forestlab::count;
use forestlab::experiments::{self, ExperimentConfig};
use forestlab::laws::{self, Law};
use forestlab::report::Report;
use forestlab::sample::{self, SeededStream};
use forestlab::verify;
use forestlab::LabeledGraph;

#[derive(Parser)]
#[command(
    name = "forestlab",
    version,
    about = "Counting, sampling and limit-law experiments for random forests and bridge-addable classes"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Args)]
struct OutputArgs {
    /// Output format
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
    /// Output path (stdout when omitted)
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Exact counts of trees and forests
    Count {
        #[arg(value_parser = ["trees", "rooted-trees", "forests", "forests-k", "rooted-forests"])]
        kind: String,
        #[arg(long)]
        n: u64,
        /// Component count (forests-k) or root count (rooted-forests)
        #[arg(long)]
        k: Option<u64>,
    },
    /// Tables of the limit laws with exact masses
    Limits {
        #[arg(value_parser = ["a-inf", "p-inf", "q-inf", "components"])]
        law: String,
        /// Largest shape size (or largest k for components)
        #[arg(long, default_value_t = 6)]
        bound: usize,
        /// Hull radius for q-inf
        #[arg(long, default_value_t = 1)]
        radius: u32,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Seeded Monte Carlo and exact-curve experiments
    Experiment {
        #[arg(value_parser = clap::builder::PossibleValuesParser::new(experiments::EXPERIMENTS))]
        name: String,
        /// Master seed (mandatory: no implicit seeds)
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        n: u64,
        #[arg(long, default_value_t = 10_000)]
        samples: u64,
        #[arg(long, default_value_t = 2)]
        radius: u32,
        #[arg(long, default_value_t = 5)]
        bound: usize,
        /// Worker threads (0 = library default); never affects results
        #[arg(long, default_value_t = 0)]
        workers: usize,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Run invariant verification suites
    Verify {
        /// Suites to run (default: all)
        #[arg(value_parser = ["canon", "counts", "identities", "weight-dp", "class-lab", "all"])]
        suites: Vec<String>,
    },
    /// Inspect finite classes: bridge-addability, census, the easy bound
    ClassCheck {
        /// Class file ("n count" header, blank-line separated edge lists)
        #[arg(long, conflicts_with_all = ["closure_of", "builtin"])]
        input: Option<PathBuf>,
        /// Seed-class file: compute and emit its bridge-addable closure
        #[arg(long, conflicts_with = "builtin")]
        closure_of: Option<PathBuf>,
        /// Built-in class family
        #[arg(long, value_parser = ["forests", "clique", "path"])]
        builtin: Option<String>,
        #[arg(long)]
        n: Option<u64>,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Dump seeded samples in edge-list format
    Sample {
        #[arg(value_parser = ["forest", "tree", "gw", "f-infinity-ball"])]
        kind: String,
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = 10)]
        n: u64,
        #[arg(long, default_value_t = 1)]
        samples: u64,
        #[arg(long, default_value_t = 2)]
        radius: u32,
        /// Output path (stdout when omitted)
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

fn main() -> anyhow::Result<()> {
    let cli = Cli::parse();
    match cli.command {
        Command::Count { kind, n, k } => cmd_count(&kind, n, k),
        Command::Limits {
            law,
            bound,
            radius,
            out,
        } => cmd_limits(&law, bound, radius, &out),
        Command::Experiment {
            name,
            seed,
            n,
            samples,
            radius,
            bound,
            workers,
            out,
        } => {
            let config = ExperimentConfig {
                n,
                samples,
                radius,
                seed,
                size_bound: bound,
                workers,
            };
            let report = experiments::run_experiment(&name, &config)?;
            emit(&report, &out)
        }
        Command::Verify { suites } => cmd_verify(&suites),
        Command::ClassCheck {
            input,
            closure_of,
            builtin,
            n,
            out,
        } => cmd_class_check(input, closure_of, builtin, n, &out),
        Command::Sample {
            kind,
            seed,
            n,
            samples,
            radius,
            output,
        } => cmd_sample(&kind, seed, n, samples, radius, output),
    }
}

fn cmd_count(kind: &str, n: u64, k: Option<u64>) -> anyhow::Result<()> {
    let value = match kind {
        "trees" => count::count_trees(n)?,
        "rooted-trees" => count::cayley_rooted(n)?,
        "forests" => count::count_forests(n),
        "forests-k" => {
            let k = k.context("--k is required for forests-k")?;
            count::count_forests_with_components(n, k)?
        }
        "rooted-forests" => {
            let k = k.context("--k is required for rooted-forests")?;
            count::count_rooted_forests(n, k)?
        }
        _ => unreachable!("clap validates"),
    };
    println!("{value}");
    Ok(())
}

fn cmd_limits(law: &str, bound: usize, radius: u32, out: &OutputArgs) -> anyhow::Result<()> {
    let law = match law {
        "a-inf" => Law::PendantTree,
        "p-inf" => Law::SmallForest,
        "q-inf" => Law::Hull { radius },
        "components" => Law::ComponentCount,
        _ => unreachable!("clap validates"),
    };
    let table = laws::law_table(law, bound)?;
    let mut report = Report::new(&["shape", "q", "m", "h", "value"]);
    report.meta("version", env!("CARGO_PKG_VERSION"));
    report.meta("bound", bound);
    if let Law::Hull { radius } = law {
        report.meta("radius", radius);
    }
    for (key, mass) in table {
        report.row(vec![
            key,
            mass.q.to_string(),
            mass.m.to_string(),
            mass.h.to_string(),
            format!("{:.10}", mass.value()),
        ]);
    }
    emit(&report, out)
}

fn cmd_verify(suites: &[String]) -> anyhow::Result<()> {
    let run_all = suites.is_empty() || suites.iter().any(|s| s == "all");
    let selected: Vec<&str> = if run_all {
        verify::SUITES.to_vec()
    } else {
        suites.iter().map(|s| s.as_str()).collect()
    };
    let mut failures = Vec::new();
    for suite in selected {
        for result in verify::run_suite(suite)? {
            let tag = if result.pass { "PASS" } else { "FAIL" };
            let detail = if result.detail.is_empty() {
                String::new()
            } else {
                format!(" ({})", result.detail)
            };
            println!("{tag} [{suite}] {}{detail}", result.name);
            if !result.pass {
                failures.push(format!("[{suite}] {}{detail}", result.name));
            }
        }
    }
    if !failures.is_empty() {
        for f in &failures {
            eprintln!("FAILED: {f}");
        }
        bail!("{} verification check(s) failed", failures.len());
    }
    Ok(())
}

fn cmd_class_check(
    input: Option<PathBuf>,
    closure_of: Option<PathBuf>,
    builtin: Option<String>,
    n: Option<u64>,
    out: &OutputArgs,
) -> anyhow::Result<()> {
    if let Some(path) = closure_of {
        let text = std::fs::read_to_string(&path)
            .with_context(|| format!("reading {}", path.display()))?;
        let seeds = classes::FiniteClass::parse(&text)?;
        let closure = classes::bridge_addable_closure(
            seeds.n(),
            seeds.members().cloned().collect::<Vec<_>>(),
        )?;
        let text = closure.serialize();
        match &out.output {
            Some(p) => std::fs::write(p, text)?,
            None => print!("{text}"),
        }
        return Ok(());
    }

    let mut report = Report::new(&["property", "value"]);
    report.meta("version", env!("CARGO_PKG_VERSION"));
    let mut all_good = true;

    if let Some(path) = input {
        let text = std::fs::read_to_string(&path)
            .with_context(|| format!("reading {}", path.display()))?;
        let class = classes::FiniteClass::parse(&text)?;
        describe_finite_class(&class, &mut report, &mut all_good)?;
    } else {
        let family = builtin.context("one of --input, --closure-of, --builtin is required")?;
        let n = n.context("--n is required with --builtin")?;
        match family.as_str() {
            "forests" => {
                let class =
                    classes::FiniteClass::new(n as u32, count::enumerate_forests(n as u32)?)?;
                report.meta("builtin", "forests");
                describe_finite_class(&class, &mut report, &mut all_good)?;
            }
            "clique" | "path" => {
                let stats = if family == "clique" {
                    classes::clique_class_stats(n)?
                } else {
                    classes::path_class_stats(n)?
                };
                report.meta("builtin", family.as_str());
                report.row(vec!["n".into(), stats.n.to_string()]);
                report.row(vec!["core_size".into(), stats.core_size.to_string()]);
                report.row(vec!["connected".into(), stats.connected.to_string()]);
                report.row(vec!["total".into(), stats.total.to_string()]);
                report.row(vec![
                    "connectivity_probability".into(),
                    stats.probability.to_string(),
                ]);
                let p = stats.probability.to_f64().unwrap_or(f64::NAN);
                report.row(vec![
                    "gap_to_limit".into(),
                    format!("{:.6}", (p - (-0.5f64).exp()).abs()),
                ]);
            }
            _ => unreachable!("clap validates"),
        }
    }
    emit(&report, out)?;
    if !all_good {
        bail!("class checks failed");
    }
    Ok(())
}

fn describe_finite_class(
    class: &classes::FiniteClass,
    report: &mut Report,
    all_good: &mut bool,
) -> anyhow::Result<()> {
    report.row(vec!["n".into(), class.n().to_string()]);
    report.row(vec!["members".into(), class.len().to_string()]);
    let addable = class.is_bridge_addable()?;
    *all_good &= addable;
    report.row(vec!["bridge_addable".into(), addable.to_string()]);
    let census = class.component_census();
    report.row(vec![
        "census".into(),
        census
            .counts
            .iter()
            .map(|c| c.to_string())
            .collect::<Vec<_>>()
            .join(" "),
    ]);
    let easy = census.verify_easy_bound();
    *all_good &= easy;
    report.row(vec!["easy_bound".into(), easy.to_string()]);
    let p = class.connectivity_probability()?;
    report.row(vec!["connectivity_probability".into(), p.to_string()]);
    Ok(())
}

fn cmd_sample(
    kind: &str,
    seed: u64,
    n: u64,
    samples: u64,
    radius: u32,
    output: Option<PathBuf>,
) -> anyhow::Result<()> {
    let mut text = String::new();
    for index in 0..samples {
        let mut rng = SeededStream::new(seed, index).rng();
        match kind {
            "forest" => {
                let sampler = sample::ForestSampler::new(n as u32);
                text.push_str(&sampler.sample(&mut rng).to_edge_list());
            }
            "tree" => {
                let labels: Vec<u32> = (1..=n as u32).collect();
                let edges = sample::sample_uniform_tree(&labels, &mut rng)?;
                text.push_str(&LabeledGraph::from_edges(n as u32, &edges)?.to_edge_list());
            }
            "gw" => {
                let tree = sample::sample_gw_poisson1(radius, &mut rng);
                let (g, map) = tree.to_labeled_graph_with_map();
                text.push_str(&format!("root {}\n", map[0]));
                text.push_str(&g.to_edge_list());
            }
            "f-infinity-ball" => {
                let ball = sample::sample_f_infinity_ball(radius, &mut rng);
                let (g, map) = ball.tree.to_labeled_graph_with_map();
                text.push_str(&format!(
                    "root {} exit {}\n",
                    map[0],
                    map[ball.spine_exit()]
                ));
                text.push_str(&g.to_edge_list());
            }
            _ => unreachable!("clap validates"),
        }
        text.push('\n');
    }
    match output {
        Some(p) => std::fs::write(p, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn emit(report: &Report, out: &OutputArgs) -> anyhow::Result<()> {
    let text = match out.format {
        Format::Csv => report.to_csv(),
        Format::Json => report.to_json(),
    };
    match &out.output {
        Some(path) => {
            let mut f = std::fs::File::create(path)
                .with_context(|| format!("creating {}", path.display()))?;
            f.write_all(text.as_bytes())?;
        }
        None => print!("{text}"),
    }
    Ok(())
}
