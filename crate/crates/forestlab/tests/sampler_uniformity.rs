//! Exactness of the forest sampler at full oracle scale: chi-square
//! uniformity against the complete enumeration for n <= 5, and the
//! component-count law at n = 1000 against the exact distribution.

use std::collections::BTreeMap;

use rayon::prelude::*;

use forestlab::count;
use forestlab::experiments::{self, ExperimentConfig};
use forestlab::sample::{ForestSampler, SeededStream};

/// 99% chi-square quantiles for the degrees of freedom used below.
fn chi2_crit_99(df: usize) -> f64 {
    match df {
        6 => 16.812,
        37 => 59.892,
        290 => 348.948,
        _ => panic!("no frozen quantile for df {df}"),
    }
}

#[test]
fn forest_sampler_uniform_chi_square_to_5() {
    for n in 3..=5u32 {
        let forests = count::enumerate_forests(n).unwrap();
        let cells = forests.len() as u64;
        let index: BTreeMap<String, usize> = forests
            .iter()
            .enumerate()
            .map(|(i, f)| (f.to_edge_list(), i))
            .collect();
        let sampler = ForestSampler::new(n);
        let trials = 100_000 * cells;
        let batch = 100_000u64;
        let batches: Vec<u64> = (0..trials.div_ceil(batch)).collect();
        let observed = batches
            .par_iter()
            .map(|&b| {
                let mut rng = SeededStream::new(5_5_5, b).rng();
                let size = batch.min(trials - b * batch);
                let mut local = vec![0u64; cells as usize];
                for _ in 0..size {
                    let f = sampler.sample(&mut rng);
                    local[index[&f.to_edge_list()]] += 1;
                }
                local
            })
            .reduce(
                || vec![0u64; cells as usize],
                |mut a, b| {
                    for (x, y) in a.iter_mut().zip(b) {
                        *x += y;
                    }
                    a
                },
            );
        let expected = trials as f64 / cells as f64;
        let chi2: f64 = observed
            .iter()
            .map(|&o| {
                let d = o as f64 - expected;
                d * d / expected
            })
            .sum();
        let crit = chi2_crit_99(cells as usize - 1);
        assert!(chi2 <= crit, "n={n}: chi2 = {chi2:.1} > {crit}");
        println!("PASS sampler uniformity n={n}: chi2 = {chi2:.1} (99% crit {crit})");
    }
}

#[test]
fn component_count_law_at_n1000() {
    let config = ExperimentConfig {
        n: 1000,
        samples: 100_000,
        radius: 1,
        seed: 1_000_000_007,
        size_bound: 5,
        workers: 0,
    };
    let report = experiments::run_component_counts(&config).unwrap();
    let tv: f64 = report.meta_value("tv_exact").unwrap().parse().unwrap();
    assert!(tv <= 0.01, "TV = {tv}");
    println!("PASS component-count law n=1000: TV = {tv:.5}");
}
