//! Exact uniform samplers for labeled forests and the truncated uniform
//! infinite forest, under a deterministic seeding contract.
//!
//! Streams: `(master_seed, stream_index)` is mixed by SplitMix64 (Steele,
//! Lea & Flood's published finalizer, gamma = 0x9E3779B97F4A7C15) into the
//! seed of a ChaCha8 generator, so distinct indices give independent-quality
//! streams and every sample is reproducible bit-for-bit regardless of the
//! thread count.

use num_bigint::BigUint;
use num_traits::Zero;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::canon::RootedTree;
use crate::count;
use crate::error::{Error, Result};
use crate::graph::LabeledGraph;
use crate::prufer;

/// A deterministic random stream: `(master_seed, stream_index)` fully
/// determines the byte stream.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SeededStream {
    pub master_seed: u64,
    pub stream_index: u64,
}

const SPLITMIX_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

fn splitmix64(mut z: u64) -> u64 {
    z ^= z >> 30;
    z = z.wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z ^= z >> 27;
    z = z.wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

impl SeededStream {
    pub fn new(master_seed: u64, stream_index: u64) -> Self {
        SeededStream {
            master_seed,
            stream_index,
        }
    }

    /// The ChaCha8 generator for this stream.
    pub fn rng(&self) -> ChaCha8Rng {
        let mixed = splitmix64(
            self.master_seed
                .wrapping_add((self.stream_index.wrapping_add(1)).wrapping_mul(SPLITMIX_GAMMA)),
        );
        ChaCha8Rng::seed_from_u64(mixed)
    }
}

/// A ball of radius `r` of the uniform infinite forest around its root.
/// `spine[d]` is the spine vertex at distance `d`; `spine[r]` marks the
/// unique infinite direction (the spine exit).
#[derive(Debug, Clone)]
pub struct SpineBall {
    pub tree: RootedTree,
    pub spine: Vec<usize>,
    pub radius: u32,
}

impl SpineBall {
    pub fn spine_exit(&self) -> usize {
        *self.spine.last().unwrap()
    }
}

/// Uniform labeled tree on a label set, by decoding a uniform Prüfer
/// sequence (`m^(m-2)` outcomes).
pub fn sample_uniform_tree<R: Rng>(labels: &[u32], rng: &mut R) -> Result<Vec<(u32, u32)>> {
    let m = labels.len();
    if m == 0 {
        return Err(Error::Empty("label set".into()));
    }
    if m == 1 {
        return Ok(Vec::new());
    }
    if m == 2 {
        return Ok(vec![(labels[0].min(labels[1]), labels[0].max(labels[1]))]);
    }
    let seq: Vec<u32> = (0..m - 2)
        .map(|_| labels[rng.gen_range(0..m)])
        .collect();
    Ok(prufer::decode(labels, &seq))
}

/// Exactly uniform sampler over the `f_n` forests on `[1..n]`.
///
/// The size of the component containing the smallest remaining label is
/// drawn by exact inversion: a uniform big integer below the exact mixture
/// total is compared against exact cumulative counts
/// `C(r-1, m-1) m^(m-2) f_(r-m)`, so uniformity is exact, not approximate.
pub struct ForestSampler {
    n: u32,
    forests: Vec<BigUint>,
    trees: Vec<BigUint>,
    // cumulative component-size thresholds per remaining-set size
    cumulative: Vec<Vec<BigUint>>,
}

impl ForestSampler {
    pub fn new(n: u32) -> Self {
        let forests = count::forest_counts_up_to(n as u64);
        let trees: Vec<BigUint> = (0..=n as u64)
            .map(|m| {
                if m == 0 {
                    BigUint::zero()
                } else {
                    count::count_trees(m).unwrap()
                }
            })
            .collect();
        let mut cumulative = Vec::with_capacity(n as usize + 1);
        for r in 0..=n as usize {
            let mut acc = BigUint::zero();
            let mut row = Vec::with_capacity(r);
            let mut binom = BigUint::from(1u32);
            for m in 1..=r {
                acc += &binom * &trees[m] * &forests[r - m];
                row.push(acc.clone());
                if m < r {
                    binom = binom * BigUint::from((r - m) as u64) / BigUint::from(m as u64);
                }
            }
            debug_assert!(r == 0 || row.last() == Some(&forests[r]));
            cumulative.push(row);
        }
        ForestSampler {
            n,
            forests,
            trees,
            cumulative,
        }
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn forest_count(&self, r: usize) -> &BigUint {
        &self.forests[r]
    }

    pub fn tree_count(&self, m: usize) -> &BigUint {
        &self.trees[m]
    }

    /// Draw the size of the component containing the smallest label of a
    /// remaining set of size `r`.
    fn draw_component_size<R: Rng>(&self, r: usize, rng: &mut R) -> usize {
        let ticket = uniform_biguint_below(&self.forests[r], rng);
        // first m with cumulative > ticket
        let row = &self.cumulative[r];
        let mut lo = 0usize;
        let mut hi = row.len() - 1;
        while lo < hi {
            let mid = (lo + hi) / 2;
            if row[mid] > ticket {
                hi = mid;
            } else {
                lo = mid + 1;
            }
        }
        lo + 1
    }

    /// One exactly-uniform forest on `[1..n]`.
    pub fn sample<R: Rng>(&self, rng: &mut R) -> LabeledGraph {
        let mut remaining: Vec<u32> = (1..=self.n).collect();
        let mut edges: Vec<(u32, u32)> = Vec::new();
        while !remaining.is_empty() {
            let r = remaining.len();
            let m = self.draw_component_size(r, rng);
            // the component contains remaining[0]; draw m-1 more labels
            // uniformly from the rest by a partial Fisher-Yates shuffle
            for i in 1..m {
                let j = rng.gen_range(i..r);
                remaining.swap(i, j);
            }
            let mut comp: Vec<u32> = remaining[..m].to_vec();
            comp.sort_unstable();
            edges.extend(sample_uniform_tree(&comp, rng).expect("nonempty"));
            remaining.drain(..m);
            remaining.sort_unstable();
        }
        LabeledGraph::from_edges(self.n, &edges).expect("sampled forest is valid")
    }
}

/// Uniform big integer in `[0, bound)` by bit-rejection.
fn uniform_biguint_below<R: Rng>(bound: &BigUint, rng: &mut R) -> BigUint {
    debug_assert!(!bound.is_zero());
    let bits = bound.bits();
    let bytes = bits.div_ceil(8) as usize;
    let top_mask: u8 = if bits % 8 == 0 {
        0xFF
    } else {
        (1u8 << (bits % 8)) - 1
    };
    let mut buf = vec![0u8; bytes];
    loop {
        rng.fill_bytes(&mut buf);
        buf[bytes - 1] &= top_mask;
        let candidate = BigUint::from_bytes_le(&buf);
        if &candidate < bound {
            return candidate;
        }
    }
}

/// Poisson(1) CDF thresholds up to k = 30, converted once from exact
/// rational partial sums `e^(-1) * sum 1/j!`; the lumped tail mass beyond 30
/// is below 1e-32.
fn poisson1_cdf() -> &'static [f64; 31] {
    use std::sync::OnceLock;
    static CDF: OnceLock<[f64; 31]> = OnceLock::new();
    CDF.get_or_init(|| {
        use num_rational::BigRational;
        use num_traits::One;
        let e_inv = count::e_inv_rational();
        let mut cdf = [0.0f64; 31];
        let mut partial = BigRational::zero();
        let mut term = BigRational::one();
        for k in 0..=30u64 {
            if k > 0 {
                term = term / BigRational::from(num_bigint::BigInt::from(k));
            }
            partial += &term;
            cdf[k as usize] = count::rational_to_f64(&(&partial * &e_inv));
        }
        cdf
    })
}

/// One Poisson(1) draw by CDF inversion.
pub fn sample_poisson1<R: Rng>(rng: &mut R) -> usize {
    let u: f64 = rng.gen();
    let cdf = poisson1_cdf();
    for (k, &c) in cdf.iter().enumerate() {
        if u < c {
            return k;
        }
    }
    30
}

/// A Poisson(1) Galton-Watson tree truncated at `depth_cap`. Vertices at the
/// cap whose offspring were not sampled carry the truncation flag.
pub fn sample_gw_poisson1<R: Rng>(depth_cap: u32, rng: &mut R) -> RootedTree {
    let mut tree = RootedTree::singleton();
    if depth_cap == 0 {
        tree.truncated[0] = true;
        return tree;
    }
    tree.truncated[0] = false;
    let mut frontier = vec![(0usize, 0u32)];
    while let Some((v, depth)) = frontier.pop() {
        let offspring = sample_poisson1(rng);
        for _ in 0..offspring {
            let c = tree.children.len();
            tree.children.push(Vec::new());
            tree.truncated.push(depth + 1 == depth_cap);
            tree.children[v].push(c);
            if depth + 1 < depth_cap {
                frontier.push((c, depth + 1));
            }
        }
    }
    tree
}

/// Ball of radius `r` of the uniform infinite forest around its root: a
/// spine of length `r`, where the spine vertex at distance `d` roots an
/// independent Poisson(1) Galton-Watson tree truncated at depth `r - d`.
pub fn sample_f_infinity_ball<R: Rng>(r: u32, rng: &mut R) -> SpineBall {
    let mut tree = RootedTree {
        children: Vec::new(),
        truncated: Vec::new(),
    };
    let mut spine = Vec::with_capacity(r as usize + 1);
    for d in 0..=r {
        let gw = sample_gw_poisson1(r - d, rng);
        let offset = tree.children.len();
        for v in 0..gw.size() {
            tree.children
                .push(gw.children[v].iter().map(|&c| c + offset).collect());
            tree.truncated.push(gw.truncated[v]);
        }
        spine.push(offset);
    }
    // spine vertices are all within the ball; the exit keeps its flag set
    // because the spine continues past it
    for w in spine.windows(2) {
        tree.children[w[0]].push(w[1]);
    }
    let exit = *spine.last().unwrap();
    tree.truncated[exit] = true;
    SpineBall {
        tree,
        spine,
        radius: r,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeMap;

    #[test]
    fn streams_are_deterministic_and_distinct() {
        let a: Vec<u64> = {
            let mut rng = SeededStream::new(42, 0).rng();
            (0..4).map(|_| rng.gen()).collect()
        };
        let b: Vec<u64> = {
            let mut rng = SeededStream::new(42, 0).rng();
            (0..4).map(|_| rng.gen()).collect()
        };
        let c: Vec<u64> = {
            let mut rng = SeededStream::new(42, 1).rng();
            (0..4).map(|_| rng.gen()).collect()
        };
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn tree_sampler_small_sets() {
        let mut rng = SeededStream::new(7, 0).rng();
        assert!(sample_uniform_tree(&[], &mut rng).is_err());
        assert_eq!(sample_uniform_tree(&[5], &mut rng).unwrap(), vec![]);
        assert_eq!(
            sample_uniform_tree(&[2, 9], &mut rng).unwrap(),
            vec![(2, 9)]
        );
    }

    #[test]
    fn tree_sampler_uniform_on_3() {
        let mut rng = SeededStream::new(11, 0).rng();
        let mut counts: BTreeMap<Vec<(u32, u32)>, u64> = BTreeMap::new();
        let samples = 300_000;
        for _ in 0..samples {
            let mut edges = sample_uniform_tree(&[1, 2, 3], &mut rng).unwrap();
            edges.sort_unstable();
            *counts.entry(edges).or_insert(0) += 1;
        }
        assert_eq!(counts.len(), 3);
        for (_, c) in counts {
            let freq = c as f64 / samples as f64;
            assert!((freq - 1.0 / 3.0).abs() < 0.01, "freq = {freq}");
        }
    }

    #[test]
    fn forest_sampler_n1_and_n2() {
        let s1 = ForestSampler::new(1);
        let mut rng = SeededStream::new(3, 0).rng();
        let g = s1.sample(&mut rng);
        assert_eq!((g.n(), g.edge_count()), (1, 0));

        let s2 = ForestSampler::new(2);
        let samples = 100_000;
        let mut with_edge = 0u64;
        for _ in 0..samples {
            if s2.sample(&mut rng).edge_count() == 1 {
                with_edge += 1;
            }
        }
        let freq = with_edge as f64 / samples as f64;
        assert!((freq - 0.5).abs() < 0.005, "freq = {freq}");
    }

    #[test]
    fn forest_sampler_matches_counts() {
        let s = ForestSampler::new(6);
        assert_eq!(s.forest_count(6), &BigUint::from(2932u32));
        let mut rng = SeededStream::new(5, 0).rng();
        for _ in 0..200 {
            assert!(s.sample(&mut rng).is_forest());
        }
    }

    #[test]
    fn poisson1_mean_and_mass_at_zero() {
        let mut rng = SeededStream::new(13, 0).rng();
        let samples = 100_000;
        let mut zero = 0u64;
        let mut total = 0u64;
        for _ in 0..samples {
            let k = sample_poisson1(&mut rng);
            if k == 0 {
                zero += 1;
            }
            total += k as u64;
        }
        let p0 = zero as f64 / samples as f64;
        assert!((p0 - (-1.0f64).exp()).abs() < 0.005, "p0 = {p0}");
        let mean = total as f64 / samples as f64;
        assert!((mean - 1.0).abs() < 0.01, "mean = {mean}");
    }

    #[test]
    fn gw_depth_cap_zero() {
        let mut rng = SeededStream::new(1, 0).rng();
        let t = sample_gw_poisson1(0, &mut rng);
        assert_eq!(t.size(), 1);
        assert!(t.truncated[0]);
    }

    #[test]
    fn spine_ball_r0_and_bare_edge_probability() {
        let mut rng = SeededStream::new(17, 0).rng();
        let b = sample_f_infinity_ball(0, &mut rng);
        assert_eq!(b.tree.size(), 1);
        assert_eq!(b.spine_exit(), 0);

        // Pr(radius-1 ball is a bare edge) = Pr(root GW tree childless) = e^-1
        let samples = 100_000;
        let mut bare = 0u64;
        for _ in 0..samples {
            let b = sample_f_infinity_ball(1, &mut rng);
            if b.tree.size() == 2 {
                bare += 1;
            }
        }
        let freq = bare as f64 / samples as f64;
        assert!((freq - (-1.0f64).exp()).abs() < 0.005, "freq = {freq}");
    }

    #[test]
    fn spine_ball_depths_within_radius() {
        let mut rng = SeededStream::new(23, 4).rng();
        for _ in 0..200 {
            let b = sample_f_infinity_ball(3, &mut rng);
            let depths = b.tree.depths();
            assert!(depths.iter().all(|&d| d <= 3));
            assert_eq!(depths[b.spine_exit()], 3);
            // truncation flags exactly at the boundary
            for v in 0..b.tree.size() {
                if depths[v] == 3 {
                    assert!(b.tree.truncated[v]);
                } else {
                    assert!(!b.tree.truncated[v]);
                }
            }
        }
    }
}
