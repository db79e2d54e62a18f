//! Brute-force reference implementations.
//!
//! Everything here is deliberately independent of the fast paths it checks:
//! automorphisms are counted by permutation search, isomorphism is decided by
//! permutation search, and maximum decomposition weights are taken over
//! explicitly enumerated ordered decompositions. The `verify` CLI suites and
//! the test suites run these against the production implementations.

use std::collections::HashSet;

use num_bigint::BigUint;
use num_traits::Zero;

use crate::graph::LabeledGraph;
use crate::prufer;

/// All labeled trees on `[1..n]` (Cayley: `n^(n-2)` of them), via Prüfer
/// sequences. Guarded to n <= 8.
pub fn all_labeled_trees(n: u32) -> Vec<LabeledGraph> {
    assert!(n >= 1 && n <= 8, "brute-force tree enumeration capped at 8");
    if n == 1 {
        return vec![LabeledGraph::empty(1)];
    }
    if n == 2 {
        return vec![LabeledGraph::from_edges(2, &[(1, 2)]).unwrap()];
    }
    let labels: Vec<u32> = (1..=n).collect();
    let mut seq = vec![1u32; n as usize - 2];
    let mut out = Vec::new();
    loop {
        let edges = prufer::decode(&labels, &seq);
        out.push(LabeledGraph::from_edges(n, &edges).unwrap());
        // odometer over [1..n]^(n-2)
        let mut i = 0;
        loop {
            if i == seq.len() {
                return out;
            }
            if seq[i] < n {
                seq[i] += 1;
                break;
            }
            seq[i] = 1;
            i += 1;
        }
    }
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut p: Vec<usize> = (0..n).collect();
    loop {
        out.push(p.clone());
        // next_permutation
        let mut i = n.saturating_sub(1);
        while i > 0 && p[i - 1] >= p[i] {
            i -= 1;
        }
        if i == 0 {
            return out;
        }
        let mut j = n - 1;
        while p[j] <= p[i - 1] {
            j -= 1;
        }
        p.swap(i - 1, j);
        p[i..].reverse();
    }
}

fn is_automorphism(g: &LabeledGraph, perm: &[usize]) -> bool {
    // perm maps vertex v (1-based) to perm[v-1] + 1
    g.edges().all(|(u, v)| {
        g.has_edge(perm[u as usize - 1] as u32 + 1, perm[v as usize - 1] as u32 + 1)
    })
}

/// Count automorphisms of `g` fixing `root`, by permutation search.
pub fn brute_aut_rooted(g: &LabeledGraph, root: u32) -> BigUint {
    let n = g.n() as usize;
    let mut count = BigUint::zero();
    for p in permutations(n) {
        if p[root as usize - 1] + 1 == root as usize && is_automorphism(g, &p) {
            count += 1u32;
        }
    }
    count
}

/// Count automorphisms of `g` (any graph, used for trees and forests).
pub fn brute_aut_unrooted(g: &LabeledGraph) -> BigUint {
    let n = g.n() as usize;
    let mut count = BigUint::zero();
    for p in permutations(n) {
        if is_automorphism(g, &p) {
            count += 1u32;
        }
    }
    count
}

/// Count automorphisms fixing both `root` and `exit`.
pub fn brute_aut_root_exit(g: &LabeledGraph, root: u32, exit: u32) -> BigUint {
    let n = g.n() as usize;
    let mut count = BigUint::zero();
    for p in permutations(n) {
        if p[root as usize - 1] + 1 == root as usize
            && p[exit as usize - 1] + 1 == exit as usize
            && is_automorphism(g, &p)
        {
            count += 1u32;
        }
    }
    count
}

/// Root-preserving isomorphism test by permutation search.
pub fn are_rooted_isomorphic(a: &LabeledGraph, ra: u32, b: &LabeledGraph, rb: u32) -> bool {
    if a.n() != b.n() || a.edge_count() != b.edge_count() {
        return false;
    }
    let n = a.n() as usize;
    permutations(n).into_iter().any(|p| {
        p[ra as usize - 1] + 1 == rb as usize
            && a.edges()
                .all(|(u, v)| b.has_edge(p[u as usize - 1] as u32 + 1, p[v as usize - 1] as u32 + 1))
    })
}

/// Unlabeled isomorphism test by permutation search.
pub fn are_isomorphic(a: &LabeledGraph, b: &LabeledGraph) -> bool {
    if a.n() != b.n() || a.edge_count() != b.edge_count() {
        return false;
    }
    let n = a.n() as usize;
    permutations(n).into_iter().any(|p| {
        a.edges()
            .all(|(u, v)| b.has_edge(p[u as usize - 1] as u32 + 1, p[v as usize - 1] as u32 + 1))
    })
}

/// Orbits of the vertex set under the automorphism group.
pub fn vertex_orbits(g: &LabeledGraph) -> Vec<Vec<u32>> {
    let n = g.n() as usize;
    let mut orbit_of: Vec<usize> = (0..n).collect();
    for p in permutations(n) {
        if is_automorphism(g, &p) {
            for v in 0..n {
                let w = p[v];
                // union by min representative
                let (a, b) = (find(&mut orbit_of, v), find(&mut orbit_of, w));
                if a != b {
                    let m = a.min(b);
                    orbit_of[a] = m;
                    orbit_of[b] = m;
                }
            }
        }
    }
    let mut groups: std::collections::BTreeMap<usize, Vec<u32>> = Default::default();
    for v in 0..n {
        let r = find(&mut orbit_of, v);
        groups.entry(r).or_default().push(v as u32 + 1);
    }
    groups.into_values().collect()
}

fn find(parent: &mut Vec<usize>, mut v: usize) -> usize {
    while parent[v] != v {
        parent[v] = parent[parent[v]];
        v = parent[v];
    }
    v
}

/// Maximum weight of a labeled tree over explicitly enumerated ordered
/// admissible decompositions: an increasing sequence of trees where each step
/// joins one new piece of size at most `eps_bound` by a single edge, starting
/// from a piece of size at most `eps_bound`. Piece weights are looked up by
/// unrooted shape; missing shapes weigh 0.
pub fn omega_by_ordered_decompositions(
    tree: &LabeledGraph,
    eps_bound: usize,
    weight_of: &dyn Fn(&LabeledGraph, &[u32]) -> f64,
) -> f64 {
    let adj = tree.adjacency();
    let n = tree.n();
    let all: HashSet<u32> = (1..=n).collect();

    // connected vertex sets of size <= eps_bound inside `avail` containing `seed`
    fn connected_sets(
        adj: &[Vec<u32>],
        avail: &HashSet<u32>,
        seed: u32,
        cap: usize,
    ) -> Vec<Vec<u32>> {
        let mut out = Vec::new();
        let mut cur = vec![seed];
        fn grow(
            adj: &[Vec<u32>],
            avail: &HashSet<u32>,
            cur: &mut Vec<u32>,
            cap: usize,
            min_new: u32,
            out: &mut Vec<Vec<u32>>,
        ) {
            out.push(cur.clone());
            if cur.len() == cap {
                return;
            }
            let mut frontier: Vec<u32> = Vec::new();
            for &v in cur.iter() {
                for &w in &adj[v as usize] {
                    if w > min_new && avail.contains(&w) && !cur.contains(&w) {
                        frontier.push(w);
                    }
                }
            }
            frontier.sort_unstable();
            frontier.dedup();
            for w in frontier {
                cur.push(w);
                grow(adj, avail, cur, cap, w, out);
                cur.pop();
            }
        }
        // enumerate connected supersets of {seed}; ordering by labels avoids duplicates
        grow(adj, avail, &mut cur, cap, 0, &mut out);
        let mut dedup: HashSet<Vec<u32>> = HashSet::new();
        out.retain(|s| {
            let mut k = s.clone();
            k.sort_unstable();
            dedup.insert(k)
        });
        out
    }

    fn rec(
        adj: &[Vec<u32>],
        tree: &LabeledGraph,
        remaining: &HashSet<u32>,
        grown: &HashSet<u32>,
        acc: f64,
        eps_bound: usize,
        weight_of: &dyn Fn(&LabeledGraph, &[u32]) -> f64,
    ) -> f64 {
        if remaining.is_empty() {
            return acc;
        }
        // candidate next pieces: connected sets in `remaining` adjacent to
        // `grown` by exactly one edge (or any first piece when grown empty)
        let mut best = f64::NEG_INFINITY;
        let seeds: Vec<u32> = if grown.is_empty() {
            remaining.iter().copied().collect()
        } else {
            // vertices of remaining adjacent to grown
            remaining
                .iter()
                .copied()
                .filter(|&v| adj[v as usize].iter().any(|w| grown.contains(w)))
                .collect()
        };
        for seed in seeds {
            for piece in connected_sets(adj, remaining, seed, eps_bound) {
                if !piece.contains(&seed) {
                    continue;
                }
                // the piece must attach to grown by exactly one edge
                if !grown.is_empty() {
                    let joins: usize = piece
                        .iter()
                        .map(|&v| adj[v as usize].iter().filter(|w| grown.contains(w)).count())
                        .sum();
                    if joins != 1 {
                        continue;
                    }
                }
                let w = weight_of(tree, &piece);
                let mut nrem = remaining.clone();
                let mut ngrown = grown.clone();
                for &v in &piece {
                    nrem.remove(&v);
                    ngrown.insert(v);
                }
                let val = rec(adj, tree, &nrem, &ngrown, acc * w, eps_bound, weight_of);
                best = best.max(val);
            }
        }
        if best == f64::NEG_INFINITY {
            // no admissible continuation
            0.0
        } else {
            best
        }
    }

    rec(
        &adj,
        tree,
        &all,
        &HashSet::new(),
        1.0,
        eps_bound,
        weight_of,
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tree_counts_match_cayley() {
        assert_eq!(all_labeled_trees(1).len(), 1);
        assert_eq!(all_labeled_trees(2).len(), 1);
        assert_eq!(all_labeled_trees(3).len(), 3);
        assert_eq!(all_labeled_trees(4).len(), 16);
        assert_eq!(all_labeled_trees(5).len(), 125);
    }

    #[test]
    fn brute_auts_on_known_shapes() {
        let star = LabeledGraph::from_edges(4, &[(1, 2), (1, 3), (1, 4)]).unwrap();
        assert_eq!(brute_aut_rooted(&star, 1), BigUint::from(6u32));
        assert_eq!(brute_aut_unrooted(&star), BigUint::from(6u32));
        let p4 = LabeledGraph::from_edges(4, &[(1, 2), (2, 3), (3, 4)]).unwrap();
        assert_eq!(brute_aut_unrooted(&p4), BigUint::from(2u32));
    }

    #[test]
    fn orbits_of_star() {
        let star = LabeledGraph::from_edges(4, &[(1, 2), (1, 3), (1, 4)]).unwrap();
        let orbits = vertex_orbits(&star);
        assert_eq!(orbits.len(), 2);
        assert_eq!(orbits[0], vec![1]);
        assert_eq!(orbits[1], vec![2, 3, 4]);
    }
}
