//! Finite bridge-addable classes as executable objects: closure
//! construction, the easy double-counting bound, the clique and path example
//! classes, and the exact component law of uniform forests.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::Zero;

use crate::count;
use crate::error::{Error, Result};
use crate::graph::LabeledGraph;

/// Guard for exhaustive class operations (membership and closure loops scan
/// every vertex pair of every member).
pub const CLASS_EXHAUSTIVE_CAP: u32 = 7;

/// A finite class: a deduplicated set of graphs on the same vertex set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteClass {
    n: u32,
    members: BTreeSet<LabeledGraph>,
}

/// Member counts by number of connected components; entry `i-1` counts the
/// members with `i` components.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComponentCensus {
    pub counts: Vec<u64>,
}

impl FiniteClass {
    pub fn new(n: u32, members: impl IntoIterator<Item = LabeledGraph>) -> Result<Self> {
        let members: BTreeSet<LabeledGraph> = members.into_iter().collect();
        for m in &members {
            if m.n() != n {
                return Err(Error::Parse(format!(
                    "member on {} vertices in a class on {n}",
                    m.n()
                )));
            }
        }
        Ok(FiniteClass { n, members })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, g: &LabeledGraph) -> bool {
        self.members.contains(g)
    }

    pub fn members(&self) -> impl Iterator<Item = &LabeledGraph> {
        self.members.iter()
    }

    /// True iff for every member and every vertex pair in distinct
    /// components, the bridged graph is also a member.
    pub fn is_bridge_addable(&self) -> Result<bool> {
        check_cap(self.n)?;
        for g in &self.members {
            let comps = g.components();
            let mut comp_of = vec![0usize; self.n as usize + 1];
            for (i, block) in comps.blocks.iter().enumerate() {
                for &v in block {
                    comp_of[v as usize] = i;
                }
            }
            for u in 1..=self.n {
                for v in u + 1..=self.n {
                    if comp_of[u as usize] != comp_of[v as usize]
                        && !self.members.contains(&g.add_edge(u, v)?)
                    {
                        return Ok(false);
                    }
                }
            }
        }
        Ok(true)
    }

    pub fn component_census(&self) -> ComponentCensus {
        let mut counts = vec![0u64; self.n as usize];
        for g in &self.members {
            counts[g.component_count() - 1] += 1;
        }
        ComponentCensus { counts }
    }

    /// Exact `Pr(member is connected)`.
    pub fn connectivity_probability(&self) -> Result<BigRational> {
        if self.members.is_empty() {
            return Err(Error::Empty("class".into()));
        }
        let census = self.component_census();
        Ok(BigRational::new(
            BigInt::from(census.counts[0]),
            BigInt::from(self.members.len() as u64),
        ))
    }

    /// Class file format: header `n count`, then members as edge lists
    /// separated by blank lines.
    pub fn serialize(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "{} {}", self.n, self.members.len());
        for m in &self.members {
            s.push_str(&m.to_edge_list());
            s.push('\n');
        }
        s
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text.lines();
        let header = lines
            .next()
            .ok_or_else(|| Error::Parse("missing class header".into()))?;
        let mut it = header.split_whitespace();
        let n: u32 = it
            .next()
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| Error::Parse("bad class vertex count".into()))?;
        let count: usize = it
            .next()
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| Error::Parse("bad class member count".into()))?;
        let mut members = Vec::new();
        let mut block = String::new();
        for line in lines.chain(std::iter::once("")) {
            if line.trim().is_empty() {
                if !block.is_empty() {
                    members.push(LabeledGraph::parse_edge_list(&block)?);
                    block.clear();
                }
            } else {
                block.push_str(line);
                block.push('\n');
            }
        }
        if members.len() != count {
            return Err(Error::Parse(format!(
                "class header declares {count} members, found {}",
                members.len()
            )));
        }
        FiniteClass::new(n, members)
    }
}

fn check_cap(n: u32) -> Result<()> {
    if n > CLASS_EXHAUSTIVE_CAP {
        return Err(Error::TooLarge(format!(
            "exhaustive class operations capped at {CLASS_EXHAUSTIVE_CAP} vertices, got {n}"
        )));
    }
    Ok(())
}

/// Least fixed point of the seed set under adding component-connecting
/// edges: the smallest bridge-addable class containing the seeds.
pub fn bridge_addable_closure(
    n: u32,
    seeds: impl IntoIterator<Item = LabeledGraph>,
) -> Result<FiniteClass> {
    check_cap(n)?;
    let mut members: BTreeSet<LabeledGraph> = BTreeSet::new();
    let mut queue: Vec<LabeledGraph> = Vec::new();
    for s in seeds {
        if s.n() != n {
            return Err(Error::Parse(format!(
                "seed on {} vertices in a closure on {n}",
                s.n()
            )));
        }
        if members.insert(s.clone()) {
            queue.push(s);
        }
    }
    while let Some(g) = queue.pop() {
        let comps = g.components();
        let mut comp_of = vec![0usize; n as usize + 1];
        for (i, block) in comps.blocks.iter().enumerate() {
            for &v in block {
                comp_of[v as usize] = i;
            }
        }
        for u in 1..=n {
            for v in u + 1..=n {
                if comp_of[u as usize] != comp_of[v as usize] {
                    let bridged = g.add_edge(u, v)?;
                    if members.insert(bridged.clone()) {
                        queue.push(bridged);
                    }
                }
            }
        }
    }
    FiniteClass::new(n, members)
}

impl ComponentCensus {
    /// The easy bound `i * |G^(i+1)| <= |G^(i)|` for all `i >= 1`.
    pub fn verify_easy_bound(&self) -> bool {
        for i in 1..self.counts.len() {
            let lhs = i as u64 * self.counts[i];
            if lhs > self.counts[i - 1] {
                return false;
            }
        }
        true
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }
}

/// Exact statistics of one of the built-in tight example classes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassStats {
    pub n: u64,
    pub core_size: u64,
    pub connected: BigUint,
    pub total: BigUint,
    pub probability: BigRational,
}

/// Smallest `k` with `k^3 >= n^2` (the paper's `ceil(n^(2/3))`).
pub fn core_size(n: u64) -> u64 {
    let mut k = (n as f64).powf(2.0 / 3.0).round() as u64;
    while k.saturating_pow(3) < n * n {
        k += 1;
    }
    while k > 1 && (k - 1).pow(3) >= n * n {
        k -= 1;
    }
    k
}

/// The class of graphs inducing a clique on `[1..k_n]` whose contraction is
/// a forest: connected members number `a(n, k_n) = k_n n^(n-k_n-1)`, the
/// total comes from the convolution with forest counts over the size of the
/// clique component.
pub fn clique_class_stats(n: u64) -> Result<ClassStats> {
    example_class_stats(n)
}

/// The class generated by a path on `[1..k_n]` plus isolated vertices.
///
/// Deleting the path edges of a connected member leaves a forest with one
/// path vertex per component, exactly as deleting the clique edges does for
/// the clique class, so both classes share the same counts; the closure
/// enumeration at small `n` validates the reconstruction.
pub fn path_class_stats(n: u64) -> Result<ClassStats> {
    example_class_stats(n)
}

fn example_class_stats(n: u64) -> Result<ClassStats> {
    if n < 2 {
        return Err(Error::Empty("class stats need n >= 2".into()));
    }
    let k = core_size(n);
    let connected = count::count_rooted_forests(n, k)?;
    let total = example_class_total(n, k)?;
    let probability = BigRational::new(
        BigInt::from(connected.clone()),
        BigInt::from(total.clone()),
    );
    Ok(ClassStats {
        n,
        core_size: k,
        connected,
        total,
        probability,
    })
}

/// `g_n = sum_i C(n-k, i-k) a(i,k) f_(n-i)` over the size `i` of the
/// component containing the core.
pub fn example_class_total(n: u64, k: u64) -> Result<BigUint> {
    let forests = count::forest_counts_up_to(n - k);
    let mut total = BigUint::zero();
    for i in k..=n {
        let choose = count::binomial(n - k, i - k);
        let connected_core = count::count_rooted_forests(i, k)?;
        total += choose * connected_core * &forests[(n - i) as usize];
    }
    Ok(total)
}

/// The paper's rational form of the same convolution:
/// `g_n / (n-k)! = sum a(i,k)/(i-k)! * f_j/j!`. Returns the reconstructed
/// integer; must agree exactly with `example_class_total`.
pub fn example_class_total_rational_route(n: u64, k: u64) -> Result<BigUint> {
    let forests = count::forest_counts_up_to(n - k);
    let mut acc = BigRational::zero();
    for i in k..=n {
        let j = n - i;
        let a = count::count_rooted_forests(i, k)?;
        let term = BigRational::new(
            BigInt::from(a),
            BigInt::from(count::factorial(i - k)),
        ) * BigRational::new(
            BigInt::from(forests[j as usize].clone()),
            BigInt::from(count::factorial(j)),
        );
        acc += term;
    }
    let g = acc * BigRational::from(BigInt::from(count::factorial(n - k)));
    if !g.is_integer() {
        return Err(Error::Parse("convolution did not produce an integer".into()));
    }
    Ok(g.to_integer().to_biguint().expect("counts are nonnegative"))
}

/// Seed graph of the clique example class: a clique on `[1..k]`, all other
/// vertices isolated.
pub fn clique_seed(n: u32, k: u32) -> LabeledGraph {
    let mut edges = Vec::new();
    for u in 1..=k {
        for v in u + 1..=k {
            edges.push((u, v));
        }
    }
    LabeledGraph::from_edges(n, &edges).expect("valid clique seed")
}

/// Seed graph of the path example class: a path `1-2-...-k`, all other
/// vertices isolated.
pub fn path_seed(n: u32, k: u32) -> LabeledGraph {
    let edges: Vec<(u32, u32)> = (1..k).map(|i| (i, i + 1)).collect();
    LabeledGraph::from_edges(n, &edges).expect("valid path seed")
}

/// Exact distribution of the number of components of a uniform forest:
/// `Pr(k components) = w(n,k) / f_n` for `k = 1..=k_max`.
///
/// For `k > k_max` the easy bound gives `Pr(k) <= 1/(k-1)!`, so a cap of 30
/// leaves provably less than 1e-30 unaccounted mass; the full vector
/// (`k_max = n`) is exact and sums to 1.
pub fn component_law_exact(n: u64, k_max: u64) -> Vec<BigRational> {
    let by_k = count::forests_by_component_count(n, k_max.min(n));
    let f_n = BigInt::from(count::count_forests(n));
    (1..=k_max.min(n) as usize)
        .map(|k| BigRational::new(BigInt::from(by_k[k].clone()), f_n.clone()))
        .collect()
}
