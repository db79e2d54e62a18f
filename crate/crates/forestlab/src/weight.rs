//! Maximum-weight admissible decompositions and the truncated partition
//! functions Y, Y^u, Y^e.
//!
//! A decomposition of a tree grows it piece by piece, each new piece a tree
//! of at most `eps_bound` vertices joined by a single edge; its weight is the
//! product of the piece weights. The maximum over ordered decompositions
//! equals the maximum over partitions of the vertex set into connected
//! pieces of bounded size (any such partition can be ordered root-to-leaves
//! in the quotient tree), which is what `omega` enumerates; the equivalence
//! is verified against the ordered-enumeration oracle in the test suites.

use std::collections::HashMap;
use std::sync::atomic::{AtomicBool, Ordering};

use num_bigint::BigUint;
use num_traits::ToPrimitive;

use crate::canon::{self, RootedTreeCode, UnrootedTreeCode};
use crate::error::{Error, Result};
use crate::graph::LabeledGraph;
use crate::shapes;

/// Hosts larger than this are rejected by `omega` (exhaustive enumeration of

/// connected partitions is exponential in the edge count).
pub const OMEGA_HOST_CAP: u32 = 12;

/// Weights `z^U` for unrooted tree shapes of size at most `eps_bound`.
/// Shapes missing from the map weigh 0 (they can never help a maximum with
/// nonnegative weights); the first such lookup is logged.
#[derive(Debug, Clone)]
pub struct WeightVector {
    eps_bound: usize,
    weights: HashMap<String, f64>,
}

static MISSING_SHAPE_WARNED: AtomicBool = AtomicBool::new(false);

impl WeightVector {
    pub fn new(eps_bound: usize) -> Self {
        WeightVector {
            eps_bound,
            weights: HashMap::new(),
        }
    }

    pub fn eps_bound(&self) -> usize {
        self.eps_bound
    }

    pub fn set(&mut self, shape: &UnrootedTreeCode, weight: f64) -> Result<()> {
        if shape.size() as usize > self.eps_bound {
            return Err(Error::TooLarge(format!(
                "shape of size {} exceeds eps bound {}",
                shape.size(),
                self.eps_bound
            )));
        }
        if !(weight >= 0.0 && weight.is_finite()) {
            return Err(Error::Parse(format!("weight must be finite >= 0: {weight}")));
        }
        self.weights.insert(shape.code().to_string(), weight);
        Ok(())
    }

    pub fn get(&self, code: &str) -> f64 {
        match self.weights.get(code) {
            Some(&w) => w,
            None => {
                if !MISSING_SHAPE_WARNED.swap(true, Ordering::Relaxed) {
                    eprintln!("weight vector: missing shape {code} treated as weight 0");
                }
                0.0
            }
        }
    }

    pub fn singleton_weight(&self) -> f64 {
        self.get("()")
    }

    pub fn entries(&self) -> impl Iterator<Item = (&str, f64)> {
        self.weights.iter().map(|(k, &v)| (k.as_str(), v))
    }

    /// The extremal point `z^U = e^(-|U|)` on all shapes up to the bound.
    pub fn extremal(eps_bound: usize) -> Result<Self> {
        let mut z = WeightVector::new(eps_bound);
        let by_size = shapes::unrooted_shapes_by_size(eps_bound)?;
        for (size, shapes) in by_size.iter().enumerate().skip(1) {
            let w = (-(size as f64)).exp();
            for s in shapes {
                z.set(s, w)?;
            }
        }
        Ok(z)
    }

    /// All-one weights on every shape up to the bound (the paper's `j`).
    pub fn all_ones(eps_bound: usize) -> Result<Self> {
        let mut z = WeightVector::new(eps_bound);
        let by_size = shapes::unrooted_shapes_by_size(eps_bound)?;
        for shapes in by_size.iter().skip(1) {
            for s in shapes {
                z.set(s, 1.0)?;
            }
        }
        Ok(z)
    }
}

/// The maximum weight together with one optimal partition (as vertex sets of
/// the host tree).
#[derive(Debug, Clone)]
pub struct DecompositionValue {
    pub value: f64,
    pub witness: Vec<Vec<u32>>,
}

/// Maximum weight of a labeled tree with respect to `z`: the maximum over
/// partitions of the vertex set into connected pieces of at most
/// `eps_bound` vertices of the product of piece weights.
///
/// Enumerates the `2^(n-1)` edge subsets of the host tree (a subset of kept
/// edges is exactly a partition into connected pieces).
pub fn omega(t: &LabeledGraph, z: &WeightVector) -> Result<DecompositionValue> {
    if t.n() > OMEGA_HOST_CAP {
        return Err(Error::TooLarge(format!(
            "omega host capped at {OMEGA_HOST_CAP} vertices, got {}",
            t.n()
        )));
    }
    if !t.is_forest() || t.component_count() != 1 {
        return Err(Error::NotATree);
    }
    let n = t.n() as usize;
    let edges: Vec<(u32, u32)> = t.edges().collect();
    let m = edges.len();
    let mut best = f64::NEG_INFINITY;
    let mut witness: Vec<Vec<u32>> = Vec::new();
    for mask in 0u32..(1u32 << m) {
        // pieces = components of the kept-edge subgraph
        let mut parent: Vec<u32> = (0..=n as u32).collect();
        fn find(p: &mut [u32], mut v: u32) -> u32 {
            while p[v as usize] != v {
                p[v as usize] = p[p[v as usize] as usize];
                v = p[v as usize];
            }
            v
        }
        let mut kept_adj: Vec<Vec<u32>> = vec![Vec::new(); n + 1];
        for (i, &(u, v)) in edges.iter().enumerate() {
            if mask >> i & 1 == 1 {
                let (ru, rv) = (find(&mut parent, u), find(&mut parent, v));
                parent[ru as usize] = rv;
                kept_adj[u as usize].push(v);
                kept_adj[v as usize].push(u);
            }
        }
        let mut pieces: HashMap<u32, Vec<u32>> = HashMap::new();
        for v in 1..=n as u32 {
            pieces.entry(find(&mut parent, v)).or_default().push(v);
        }
        let mut product = 1.0f64;
        let mut ok = true;
        let mut piece_list: Vec<Vec<u32>> = Vec::with_capacity(pieces.len());
        for (_, piece) in pieces {
            if piece.len() > z.eps_bound {
                ok = false;
                break;
            }
            let code = canon::canon_unrooted_in(&kept_adj, piece[0])
                .expect("kept pieces are trees");
            product *= z.get(code.code());
            piece_list.push(piece);
        }
        if ok && product > best {
            piece_list.sort();
            best = product;
            witness = piece_list;
        }
    }
    Ok(DecompositionValue {
        value: best.max(0.0),
        witness,
    })
}

/// Which partition function to truncate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PartitionKind {
    /// `Y`: vertex-rooted trees weighted by `omega / Aut_r`.
    Rooted,
    /// `Y^u`: unrooted trees weighted by `omega / Aut_u`.
    Unrooted,
    /// `Y^e`: trees rooted at an (unordered) edge. Computed over ordered
    /// pairs with the ordered-edge automorphism convention
    /// `Aut(T1 - T2 ordered) = Aut_r(T1) Aut_r(T2)` and halved.
    EdgeRooted,
}

/// Truncated partition function: all shapes of at most `cutoff` vertices, in
/// canonical order (deterministic summation order).
pub fn partition_y(z: &WeightVector, kind: PartitionKind, cutoff: usize) -> Result<f64> {
    if cutoff as u32 > OMEGA_HOST_CAP {
        return Err(Error::TooLarge(format!(
            "partition function cutoff capped at {OMEGA_HOST_CAP}, got {cutoff}"
        )));
    }
    match kind {
        PartitionKind::Rooted => {
            let by_size = shapes::rooted_shapes_by_size(cutoff)?;
            let mut acc = 0.0;
            for shapes in by_size.iter().skip(1) {
                for s in shapes {
                    let t = s.decode().to_labeled_graph();
                    let w = omega(&t, z)?.value;
                    acc += w / big_to_f64(&canon::aut_rooted(s));
                }
            }
            Ok(acc)
        }
        PartitionKind::Unrooted => {
            let by_size = shapes::unrooted_shapes_by_size(cutoff)?;
            let mut acc = 0.0;
            for shapes in by_size.iter().skip(1) {
                for s in shapes {
                    let t = s.decode();
                    let w = omega(&t, z)?.value;
                    acc += w / big_to_f64(&canon::aut_unrooted(s));
                }
            }
            Ok(acc)
        }
        PartitionKind::EdgeRooted => {
            let by_size = shapes::rooted_shapes_by_size(cutoff.saturating_sub(1))?;
            let all: Vec<&RootedTreeCode> = by_size.iter().flatten().collect();
            let mut acc = 0.0;
            for a in &all {
                for b in &all {
                    if (a.size() + b.size()) as usize > cutoff {
                        continue;
                    }
                    let joined = join_at_roots(a, b);
                    let w = omega(&joined, z)?.value;
                    acc += 0.5 * w
                        / (big_to_f64(&canon::aut_rooted(a)) * big_to_f64(&canon::aut_rooted(b)));
                }
            }
            Ok(acc)
        }
    }
}

/// `|Y - Y^u - Y^e|` at a common per-size truncation. The dissymmetry
/// identity holds termwise per unrooted shape, so the residual is float
/// slack only.
pub fn dissymmetry_residual(z: &WeightVector, cutoff: usize) -> Result<f64> {
    let y = partition_y(z, PartitionKind::Rooted, cutoff)?;
    let yu = partition_y(z, PartitionKind::Unrooted, cutoff)?;
    let ye = partition_y(z, PartitionKind::EdgeRooted, cutoff)?;
    Ok((y - yu - ye).abs())
}

/// `omega(f(T1,T2), z) - omega(T1, z) * omega(T2, z)`, which the
/// supermultiplicativity property bounds below by 0.
pub fn supermultiplicativity_check(
    t1: &RootedTreeCode,
    t2: &RootedTreeCode,
    z: &WeightVector,
) -> Result<f64> {
    let joined = join_at_roots(t1, t2);
    let whole = omega(&joined, z)?.value;
    let a = omega(&t1.decode().to_labeled_graph(), z)?.value;
    let b = omega(&t2.decode().to_labeled_graph(), z)?.value;
    Ok(whole - a * b)
}

/// The edge-rooted tree `f(T1, T2)`: an edge joining the two roots.
pub fn join_at_roots(a: &RootedTreeCode, b: &RootedTreeCode) -> LabeledGraph {
    let ga = a.decode().to_labeled_graph();
    let gb = b.decode().to_labeled_graph();
    let na = ga.n();
    let mut edges: Vec<(u32, u32)> = ga.edges().collect();
    for (u, v) in gb.edges() {
        edges.push((u + na, v + na));
    }
    edges.push((1, na + 1));
    LabeledGraph::from_edges(na + gb.n(), &edges).expect("joined tree is valid")
}

fn big_to_f64(x: &BigUint) -> f64 {
    x.to_f64().expect("automorphism counts fit f64 at desk scale")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle;
    use crate::sample::{sample_uniform_tree, SeededStream};
    use rand::Rng;

    fn random_tree(n: u32, rng: &mut impl Rng) -> LabeledGraph {
        let labels: Vec<u32> = (1..=n).collect();
        let edges = sample_uniform_tree(&labels, rng).unwrap();
        LabeledGraph::from_edges(n, &edges).unwrap()
    }

    fn random_weights(eps_bound: usize, rng: &mut impl Rng) -> WeightVector {
        let mut z = WeightVector::new(eps_bound);
        let by_size = shapes::unrooted_shapes_by_size(eps_bound).unwrap();
        for shapes in by_size.iter().skip(1) {
            for s in shapes {
                z.set(s, rng.gen_range(0.0..1.5)).unwrap();
            }
        }
        z
    }

    #[test]
    fn omega_singleton_is_z_dot() {
        let z = WeightVector::extremal(3).unwrap();
        let dot = LabeledGraph::empty(1);
        let d = omega(&dot, &z).unwrap();
        assert_eq!(d.value, z.singleton_weight());
        assert_eq!(d.witness, vec![vec![1]]);
    }

    #[test]
    fn omega_extremal_weights_collapse() {
        // z^U = e^-|U|: every admissible partition has the same product
        let z = WeightVector::extremal(4).unwrap();
        let mut rng = SeededStream::new(2, 0).rng();
        for n in 2..=8u32 {
            let t = random_tree(n, &mut rng);
            let val = omega(&t, &z).unwrap().value;
            let expect = (-(n as f64)).exp();
            assert!(
                (val - expect).abs() <= 1e-14 * expect,
                "n={n} val={val} expect={expect}"
            );
        }
    }

    #[test]
    fn omega_eps1_gives_singleton_power() {
        let mut z = WeightVector::new(1);
        z.set(&UnrootedTreeCode::single(), 0.7).unwrap();
        let mut rng = SeededStream::new(3, 0).rng();
        let t = random_tree(6, &mut rng);
        let d = omega(&t, &z).unwrap();
        let expect = 0.7f64.powi(6);
        assert!((d.value - expect).abs() <= 1e-14);
        assert_eq!(d.witness.len(), 6);
    }

    #[test]
    fn omega_witness_product_matches_value() {
        let mut rng = SeededStream::new(5, 0).rng();
        for _ in 0..20 {
            let t = random_tree(7, &mut rng);
            let z = random_weights(3, &mut rng);
            let d = omega(&t, &z).unwrap();
            // pieces partition the vertex set
            let mut all: Vec<u32> = d.witness.iter().flatten().copied().collect();
            all.sort_unstable();
            assert_eq!(all, (1..=7).collect::<Vec<_>>());
            assert!(d.witness.iter().all(|p| p.len() <= 3));
        }
    }

    #[test]
    fn omega_too_large_and_non_tree_rejected() {
        let z = WeightVector::extremal(2).unwrap();
        let mut rng = SeededStream::new(6, 0).rng();
        let big = random_tree(13, &mut rng);
        assert!(omega(&big, &z).is_err());
        let disconnected = LabeledGraph::from_edges(3, &[(1, 2)]).unwrap();
        assert!(omega(&disconnected, &z).is_err());
    }

    #[test]
    fn omega_matches_ordered_decomposition_oracle() {
        // paper-style ordered enumeration vs connected-partition formulation
        let mut rng = SeededStream::new(7, 0).rng();
        for trial in 0..12 {
            let n = 2 + trial % 6;
            let t = random_tree(n as u32, &mut rng);
            let z = random_weights(3, &mut rng);
            let fast = omega(&t, &z).unwrap().value;
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
            assert!(
                (fast - slow).abs() <= 1e-12 * fast.abs().max(1.0),
                "n={n} fast={fast} slow={slow}"
            );
        }
    }

    #[test]
    fn omega_monotone_in_weights() {
        let mut rng = SeededStream::new(8, 0).rng();
        for _ in 0..10 {
            let t = random_tree(6, &mut rng);
            let z = random_weights(3, &mut rng);
            let mut z_up = z.clone();
            let by_size = shapes::unrooted_shapes_by_size(3).unwrap();
            for shapes in by_size.iter().skip(1) {
                for s in shapes {
                    z_up.set(s, z.get(s.code()) + rng.gen_range(0.0..0.5)).unwrap();
                }
            }
            assert!(omega(&t, &z_up).unwrap().value >= omega(&t, &z).unwrap().value);
        }
    }

    #[test]
    fn omega_lower_bounds() {
        // omega(U, z) >= z^U for |U| <= eps_bound, and >= x^|t| generally
        let mut rng = SeededStream::new(9, 0).rng();
        let z = random_weights(4, &mut rng);
        let x = z.singleton_weight();
        let by_size = shapes::unrooted_shapes_by_size(4).unwrap();
        for shapes in by_size.iter().skip(1) {
            for s in shapes {
                let t = s.decode();
                let val = omega(&t, &z).unwrap().value;
                assert!(val >= z.get(s.code()) - 1e-15);
                assert!(val >= x.powi(s.size() as i32) - 1e-15);
            }
        }
    }

    #[test]
    fn supermultiplicativity_cases() {
        // extremal weights: residual vanishes
        let z = WeightVector::extremal(3).unwrap();
        let dot = RootedTreeCode::single();
        let r = supermultiplicativity_check(&dot, &dot, &z).unwrap();
        assert!(r.abs() <= 1e-15);

        // z^K2 > (z^dot)^2 makes the residual strictly positive
        let mut z2 = WeightVector::new(2);
        z2.set(&UnrootedTreeCode::single(), 0.5).unwrap();
        let k2 = UnrootedTreeCode::parse("[()()]").unwrap();
        z2.set(&k2, 0.9).unwrap();
        let r = supermultiplicativity_check(&dot, &dot, &z2).unwrap();
        assert!((r - (0.9 - 0.25)).abs() <= 1e-15);

        // random instances: always >= -1e-12
        let mut rng = SeededStream::new(10, 0).rng();
        let by_size = shapes::rooted_shapes_by_size(5).unwrap();
        let all: Vec<RootedTreeCode> = by_size.into_iter().flatten().collect();
        for _ in 0..60 {
            let z = random_weights(3, &mut rng);
            let a = &all[rng.gen_range(0..all.len())];
            let b = &all[rng.gen_range(0..all.len())];
            if (a.size() + b.size()) as u32 > OMEGA_HOST_CAP {
                continue;
            }
            let r = supermultiplicativity_check(a, b, &z).unwrap();
            assert!(r >= -1e-12, "residual {r}");
        }
    }

    #[test]
    fn dissymmetry_residual_tiny() {
        let z = WeightVector::extremal(3).unwrap();
        assert!(dissymmetry_residual(&z, 8).unwrap() <= 1e-9);
        let zero = WeightVector::new(2);
        assert!(dissymmetry_residual(&zero, 6).unwrap() == 0.0);
        let mut rng = SeededStream::new(11, 0).rng();
        let z = random_weights(3, &mut rng);
        assert!(dissymmetry_residual(&z, 7).unwrap() <= 1e-9);
    }

    #[test]
    fn partition_y_zero_weights() {
        let zero = WeightVector::new(2);
        assert_eq!(partition_y(&zero, PartitionKind::Rooted, 6).unwrap(), 0.0);
    }

    #[test]
    fn partition_y_extremal_matches_series() {
        // at the extremal weights the partition functions reduce to the EGF
        // partial sums at e^-1
        use crate::count;
        let z = WeightVector::extremal(4).unwrap();
        let e_inv = count::e_inv_rational();
        let y = partition_y(&z, PartitionKind::Rooted, 9).unwrap();
        let t_partial = count::series_t(9).eval_at_f64(&e_inv);
        assert!((y - t_partial).abs() <= 1e-10, "{y} vs {t_partial}");
        let yu = partition_y(&z, PartitionKind::Unrooted, 9).unwrap();
        let u_partial = count::series_u(9).eval_at_f64(&e_inv);
        assert!((yu - u_partial).abs() <= 1e-10, "{yu} vs {u_partial}");
    }
}
