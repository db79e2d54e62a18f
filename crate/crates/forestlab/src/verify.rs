//! Runtime invariant suites backing the `verify` command. Each check pits a
//! production implementation against an independent route (brute-force
//! permutation counts, exhaustive enumeration, closed formulas).

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::Rng;

use crate::canon::{self, ForestShape, PartCode, UnrootedTreeCode};
use crate::classes;
use crate::count;
use crate::error::Result;
use crate::graph::LabeledGraph;
use crate::laws;
use crate::oracle;
use crate::sample::{sample_uniform_tree, SeededStream};
use crate::shapes;
use crate::weight::{self, PartitionKind, WeightVector};

/// Outcome of one named check.
#[derive(Debug, Clone)]
pub struct CheckResult {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

fn check(name: &str, pass: bool, detail: String) -> CheckResult {
    CheckResult {
        name: name.to_string(),
        pass,
        detail,
    }
}

pub const SUITES: &[&str] = &["canon", "counts", "identities", "weight-dp", "class-lab"];

pub fn run_suite(name: &str) -> Result<Vec<CheckResult>> {
    match name {
        "canon" => verify_canon(),
        "counts" => verify_counts(),
        "identities" => verify_identities(),
        "weight-dp" => verify_weight_dp(),
        "class-lab" => verify_class_lab(),
        other => Err(crate::error::Error::Parse(format!(
            "unknown verify suite: {other}"
        ))),
    }
}

/// Canonization soundness and automorphism counts against permutation
/// search.
pub fn verify_canon() -> Result<Vec<CheckResult>> {
    let mut out = Vec::new();

    // codes equal iff isomorphic, all labeled trees to 5 vertices pairwise
    let mut sound = true;
    'outer: for n in 1..=5u32 {
        let trees = oracle::all_labeled_trees(n);
        for a in &trees {
            for b in &trees {
                let codes_equal =
                    canon::canon_rooted(a, 1)? == canon::canon_rooted(b, 1)?;
                if codes_equal != oracle::are_rooted_isomorphic(a, 1, b, 1) {
                    sound = false;
                    break 'outer;
                }
                let ucodes_equal =
                    canon::canon_unrooted(a, 1)? == canon::canon_unrooted(b, 1)?;
                if ucodes_equal != oracle::are_isomorphic(a, b) {
                    sound = false;
                    break 'outer;
                }
            }
        }
    }
    out.push(check(
        "canonization soundness (all labeled trees to 5, pairwise)",
        sound,
        String::new(),
    ));

    // automorphism counts against brute force to 6 vertices
    let mut auts_ok = true;
    for n in 1..=6u32 {
        for t in oracle::all_labeled_trees(n) {
            if canon::aut_rooted(&canon::canon_rooted(&t, 1)?) != oracle::brute_aut_rooted(&t, 1)
            {
                auts_ok = false;
            }
            if canon::aut_unrooted(&canon::canon_unrooted(&t, 1)?)
                != oracle::brute_aut_unrooted(&t)
            {
                auts_ok = false;
            }
        }
    }
    out.push(check(
        "rooted/unrooted automorphism counts vs permutation search (to 6)",
        auts_ok,
        String::new(),
    ));

    Ok(out)
}

/// Exact counts against exhaustive enumeration and closed formulas.
pub fn verify_counts() -> Result<Vec<CheckResult>> {
    let mut out = Vec::new();

    let mut counts_ok = true;
    let mut detail = String::new();
    for n in 0..=6u32 {
        let listed = count::enumerate_forests(n)?;
        let f = count::count_forests(n as u64);
        if BigUint::from(listed.len()) != f {
            counts_ok = false;
            detail = format!("n={n}: enumerated {} vs formula {f}", listed.len());
        }
        for k in 1..=n as usize {
            let observed = listed.iter().filter(|g| g.component_count() == k).count();
            let formula = count::count_forests_with_components(n as u64, k as u64)?;
            if BigUint::from(observed) != formula {
                counts_ok = false;
                detail = format!("n={n} k={k}: enumerated {observed} vs formula {formula}");
            }
        }
    }
    out.push(check(
        "forest counts vs exhaustive enumeration (n <= 6, all k)",
        counts_ok,
        detail,
    ));

    let mut sum_ok = true;
    for n in 1..=12u64 {
        let total: BigUint = count::forests_by_component_count(n, n).iter().sum();
        if total != count::count_forests(n) {
            sum_ok = false;
        }
    }
    out.push(check(
        "sum over k of forests-with-k-components equals f_n (n <= 12)",
        sum_ok,
        String::new(),
    ));

    let mut atil_ok = true;
    for i in 1..=10u64 {
        for k in 1..=i {
            let lhs = count::binomial(i, k) * count::count_rooted_forests(i, k)?;
            let rhs = count::binomial(i - 1, i - k) * BigUint::from(i).pow((i - k) as u32);
            if lhs != rhs {
                atil_ok = false;
            }
        }
    }
    out.push(check(
        "rooted-forest binomial identity C(i,k)a(i,k) = C(i-1,i-k)i^(i-k) (i <= 10)",
        atil_ok,
        String::new(),
    ));

    let f_series = count::series_f(12);
    let f_counts = count::forest_counts_up_to(12);
    let series_ok = (0..=12).all(|n| {
        f_series.count_at(n) == BigRational::from(BigInt::from(f_counts[n].clone()))
    });
    out.push(check(
        "n! [z^n] F equals f_n (n <= 12)",
        series_ok,
        String::new(),
    ));

    Ok(out)
}

/// The automorphism identity suite: Cayley sums, the rooting identity, and
/// the forest-automorphism recursion.
pub fn verify_identities() -> Result<Vec<CheckResult>> {
    let mut out = Vec::new();

    let rooted = shapes::rooted_shapes_by_size(9)?;
    let mut cayley_rooted_ok = true;
    for n in 1..=9usize {
        let total: BigRational = rooted[n]
            .iter()
            .map(|c| {
                BigRational::new(
                    BigInt::from(count::factorial(n as u64)),
                    BigInt::from(canon::aut_rooted(c)),
                )
            })
            .fold(BigRational::zero(), |a, b| a + b);
        if total != BigRational::from(BigInt::from(count::cayley_rooted(n as u64)?)) {
            cayley_rooted_ok = false;
        }
    }
    out.push(check(
        "sum n!/Aut_r over rooted shapes = n^(n-1) (n <= 9)",
        cayley_rooted_ok,
        String::new(),
    ));

    let unrooted = shapes::unrooted_shapes_by_size(9)?;
    let mut cayley_unrooted_ok = true;
    for n in 1..=9usize {
        let total: BigRational = unrooted[n]
            .iter()
            .map(|c| {
                BigRational::new(
                    BigInt::from(count::factorial(n as u64)),
                    BigInt::from(canon::aut_unrooted(c)),
                )
            })
            .fold(BigRational::zero(), |a, b| a + b);
        if total != BigRational::from(BigInt::from(count::count_trees(n as u64)?)) {
            cayley_unrooted_ok = false;
        }
    }
    out.push(check(
        "sum n!/Aut_u over unrooted shapes = n^(n-2) (n <= 9)",
        cayley_unrooted_ok,
        String::new(),
    ));

    // rooting identity: sum over rootings of 1/Aut_r = |U|/Aut_u
    let mut rooting_ok = true;
    for n in 1..=9usize {
        for u in &unrooted[n] {
            let lhs: BigRational = canon::rootings(u)
                .iter()
                .map(|(t, _)| {
                    BigRational::new(BigInt::one(), BigInt::from(canon::aut_rooted(t)))
                })
                .fold(BigRational::zero(), |a, b| a + b);
            let rhs = BigRational::new(
                BigInt::from(u.size()),
                BigInt::from(canon::aut_unrooted(u)),
            );
            if lhs != rhs {
                rooting_ok = false;
            }
        }
    }
    out.push(check(
        "rooting identity sum 1/Aut_r = |U|/Aut_u (all shapes to 9)",
        rooting_ok,
        String::new(),
    ));

    // forest recursion vs product form, total size <= 8
    let mut rec_ok = true;
    for shape in shapes::forest_shapes_up_to(8)? {
        if shape.is_empty() {
            continue;
        }
        if canon::aut_forest(&shape)? != aut_forest_by_recursion(&shape)? {
            rec_ok = false;
        }
    }
    out.push(check(
        "forest automorphism recursion matches product form (total <= 8)",
        rec_ok,
        String::new(),
    ));

    // dissymmetry at the extremal weights
    let z = WeightVector::extremal(4)?;
    let residual = weight::dissymmetry_residual(&z, 8)?;
    out.push(check(
        "dissymmetry residual at cutoff 8",
        residual <= 1e-9,
        format!("residual = {residual:.2e}"),
    ));

    Ok(out)
}

/// `Aut_u(U_1..U_k) = m * Aut_u(U_k) * Aut_u(U_1..U_(k-1))`, applied
/// recursively; the independent route for the forest automorphism count.
pub fn aut_forest_by_recursion(shape: &ForestShape) -> Result<BigUint> {
    let trees: Vec<UnrootedTreeCode> = shape
        .parts()
        .iter()
        .map(|p| match p {
            PartCode::Tree(t) => Ok(t.clone()),
            PartCode::Graph { .. } => Err(crate::error::Error::NonTreePart),
        })
        .collect::<Result<_>>()?;
    fn rec(parts: &[UnrootedTreeCode]) -> BigUint {
        match parts.split_last() {
            None => BigUint::one(),
            Some((last, rest)) => {
                let m = parts.iter().filter(|p| *p == last).count() as u64;
                BigUint::from(m) * canon::aut_unrooted(last) * rec(rest)
            }
        }
    }
    Ok(rec(&trees))
}

/// Structural checks of the maximum-weight machinery.
pub fn verify_weight_dp() -> Result<Vec<CheckResult>> {
    let mut out = Vec::new();
    let mut rng = SeededStream::new(0xF0E57, 0).rng();

    // supermultiplicativity residuals >= -1e-12 on random triples
    let by_size = shapes::rooted_shapes_by_size(6)?;
    let all: Vec<_> = by_size.iter().flatten().collect();
    let mut min_residual = f64::INFINITY;
    for _ in 0..200 {
        let z = random_weight_vector(3, &mut rng)?;
        let a = all[rng.gen_range(0..all.len())];
        let b = all[rng.gen_range(0..all.len())];
        if a.size() + b.size() > 12 {
            continue;
        }
        let r = weight::supermultiplicativity_check(a, b, &z)?;
        min_residual = min_residual.min(r);
    }
    out.push(check(
        "supermultiplicativity residuals on random triples",
        min_residual >= -1e-12,
        format!("min residual = {min_residual:.2e}"),
    ));

    // omega at the extremal weights
    let z = WeightVector::extremal(4)?;
    let mut extremal_ok = true;
    let unrooted = shapes::unrooted_shapes_by_size(8)?;
    for n in 1..=8usize {
        for u in &unrooted[n] {
            let val = weight::omega(&u.decode(), &z)?.value;
            let expect = (-(n as f64)).exp();
            if (val - expect).abs() > 1e-14 * expect {
                extremal_ok = false;
            }
        }
    }
    out.push(check(
        "omega at extremal weights equals e^-|t| (all shapes to 8)",
        extremal_ok,
        String::new(),
    ));

    // ordered-decomposition oracle equivalence
    let mut oracle_ok = true;
    for trial in 0..9 {
        let n = 2 + trial % 5;
        let labels: Vec<u32> = (1..=n as u32).collect();
        let edges = sample_uniform_tree(&labels, &mut rng)?;
        let t = LabeledGraph::from_edges(n as u32, &edges)?;
        let z = random_weight_vector(3, &mut rng)?;
        let fast = weight::omega(&t, &z)?.value;
        let weight_of = |host: &LabeledGraph, piece: &[u32]| -> f64 {
            let mut adj = vec![Vec::new(); host.n() as usize + 1];
            for (u, v) in host.edges() {
                if piece.contains(&u) && piece.contains(&v) {
                    adj[u as usize].push(v);
                    adj[v as usize].push(u);
                }
            }
            let code = canon::canon_unrooted_in(&adj, piece[0]).unwrap();
            z.get(code.code())
        };
        let slow = oracle::omega_by_ordered_decompositions(&t, 3, &weight_of);
        if (fast - slow).abs() > 1e-12 * fast.abs().max(1.0) {
            oracle_ok = false;
        }
    }
    out.push(check(
        "connected-partition omega equals ordered-decomposition oracle",
        oracle_ok,
        String::new(),
    ));

    // truncated Y^u at the extremal weights approaches 1/2 from below
    let yu = weight::partition_y(&z, PartitionKind::Unrooted, 9)?;
    let expected = count::series_u(9).eval_at_f64(&count::e_inv_rational());
    out.push(check(
        "truncated Y^u at extremal weights equals U(e^-1) partial sum",
        (yu - expected).abs() <= 1e-10 && yu < 0.5,
        format!("Y^u(9) = {yu:.6}"),
    ));

    Ok(out)
}

fn random_weight_vector(eps_bound: usize, rng: &mut impl Rng) -> Result<WeightVector> {
    let mut z = WeightVector::new(eps_bound);
    let by_size = shapes::unrooted_shapes_by_size(eps_bound)?;
    for shapes in by_size.iter().skip(1) {
        for s in shapes {
            z.set(s, rng.gen_range(0.0..1.5))?;
        }
    }
    Ok(z)
}

/// Bridge-addability, the easy bound, and the example classes.
pub fn verify_class_lab() -> Result<Vec<CheckResult>> {
    let mut out = Vec::new();
    let mut rng = SeededStream::new(0xC1A55, 0).rng();

    // easy bound for all-forest classes
    let mut forests_ok = true;
    for n in 2..=6u32 {
        let class = classes::FiniteClass::new(n, count::enumerate_forests(n)?)?;
        if !class.component_census().verify_easy_bound() {
            forests_ok = false;
        }
    }
    out.push(check(
        "easy bound i|G^(i+1)| <= |G^(i)| for all forests (n <= 6)",
        forests_ok,
        String::new(),
    ));

    // easy bound for random bridge-addable closures
    let mut closures_ok = true;
    for n in [4u32, 5, 6] {
        for _ in 0..34 {
            let seeds = random_seed_set(n, &mut rng);
            let closure = classes::bridge_addable_closure(n, seeds)?;
            if !closure.is_bridge_addable()? {
                closures_ok = false;
            }
            if !closure.component_census().verify_easy_bound() {
                closures_ok = false;
            }
        }
    }
    out.push(check(
        "easy bound for 100 random bridge-addable closures (n in 4..6)",
        closures_ok,
        String::new(),
    ));

    // example classes against brute-force closures
    let mut examples_ok = true;
    for n in 3..=6u64 {
        let stats = classes::clique_class_stats(n)?;
        let k = stats.core_size as u32;
        let closure = classes::bridge_addable_closure(
            n as u32,
            vec![classes::clique_seed(n as u32, k)],
        )?;
        if BigUint::from(closure.len() as u64) != stats.total {
            examples_ok = false;
        }
        let path_closure = classes::bridge_addable_closure(
            n as u32,
            vec![classes::path_seed(n as u32, k)],
        )?;
        if BigUint::from(path_closure.len() as u64) != classes::path_class_stats(n)?.total {
            examples_ok = false;
        }
    }
    out.push(check(
        "clique/path class formulas vs closure enumeration (n <= 6)",
        examples_ok,
        String::new(),
    ));

    // two-route totals
    let mut routes_ok = true;
    for n in 2..=20u64 {
        let k = classes::core_size(n);
        if classes::example_class_total(n, k)?
            != classes::example_class_total_rational_route(n, k)?
        {
            routes_ok = false;
        }
    }
    out.push(check(
        "example-class total: integer route equals rational route (n <= 20)",
        routes_ok,
        String::new(),
    ));

    // component law TV decreasing along doubling n
    let mut prev_tv = f64::INFINITY;
    let mut tv_ok = true;
    for n in [50u64, 100, 200, 400] {
        let tv = component_law_tv(n);
        if tv > prev_tv {
            tv_ok = false;
        }
        prev_tv = tv;
    }
    out.push(check(
        "TV(exact component law, 1+Poisson(1/2)) decreasing along n = 50..400",
        tv_ok,
        format!("tv(400) = {prev_tv:.5}"),
    ));

    Ok(out)
}

/// TV distance between the exact component law at size `n` (capped at 30
/// components; the easy bound leaves under 1e-30 beyond) and 1+Poisson(1/2).
pub fn component_law_tv(n: u64) -> f64 {
    let k_cap = 30u64;
    let exact = classes::component_law_exact(n, k_cap);
    let mut acc = 0.0;
    let mut exact_in = 0.0;
    let mut law_in = 0.0;
    for (i, p) in exact.iter().enumerate() {
        let e = count::rational_to_f64(p);
        let l = laws::component_law(i as u64).value();
        acc += (e - l).abs();
        exact_in += e;
        law_in += l;
    }
    0.5 * (acc + ((1.0 - exact_in) - (1.0 - law_in)).abs())
}

fn random_seed_set(n: u32, rng: &mut impl Rng) -> Vec<LabeledGraph> {
    let count = rng.gen_range(1..=3);
    (0..count)
        .map(|_| {
            let mut g = LabeledGraph::empty(n);
            for u in 1..=n {
                for v in u + 1..=n {
                    if rng.gen_bool(0.25) {
                        g = g.add_edge(u, v).unwrap();
                    }
                }
            }
            g
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_suites_pass() {
        for suite in SUITES {
            let results = run_suite(suite).unwrap();
            for r in &results {
                assert!(r.pass, "{suite}: {} failed ({})", r.name, r.detail);
            }
        }
    }
}
