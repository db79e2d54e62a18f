//! Local observables: small components, pendant-tree profiles, balls, hulls
//! with exit vertices, and empirical distribution estimators.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet, VecDeque};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use crate::canon::{
    self, ForestShape, HullTreeCode, PartCode, RootedTree, RootedTreeCode,
};
use crate::error::{Error, Result};
use crate::graph::LabeledGraph;
use crate::sample::SpineBall;

/// Pendant-tree counts `alpha^G(T)` for trees up to `size_cap` vertices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PendantProfile {
    pub counts: BTreeMap<RootedTreeCode, u64>,
    pub size_cap: u32,
    pub n: u32,
}

impl PendantProfile {
    pub fn total(&self) -> u64 {
        self.counts.values().sum()
    }

    pub fn count(&self, code: &RootedTreeCode) -> u64 {
        self.counts.get(code).copied().unwrap_or(0)
    }
}

/// A hull: ball of radius `r` plus the small outside components, with the
/// attachment points of the large components marked as exits. Vertices are
/// relabeled `1..k` (ascending in the original labels).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Hull {
    pub graph: LabeledGraph,
    pub root: u32,
    pub exits: BTreeSet<u32>,
    pub radius: u32,
}

/// Multiset of the non-largest components, canonized.
///
/// Errors if a non-tree component exceeds the general-graph canonization cap.
pub fn small_components(g: &LabeledGraph) -> Result<ForestShape> {
    let parts = g.components();
    let adj = g.adjacency();
    let mut codes = Vec::new();
    for (i, block) in parts.blocks.iter().enumerate() {
        if i == parts.largest_index {
            continue;
        }
        match canon::canon_unrooted_in(&adj, block[0]) {
            Ok(tree) => codes.push(PartCode::Tree(tree)),
            Err(Error::NotATree) => {
                let code = canon::canonical_graph_code(g, block)?;
                codes.push(PartCode::Graph {
                    size: block.len() as u32,
                    code,
                });
            }
            Err(e) => return Err(e),
        }
    }
    Ok(ForestShape::from_parts(codes))
}

/// The designated cut-edge at `v` (toward the largest opposite component,
/// ties to the smallest opposite-neighbor label) and the pendant tree left
/// at `v` after removing it. `None` when `v` has no incident cut-edge or its
/// side is not a tree.
pub fn pendant_tree_at(g: &LabeledGraph, v: u32) -> Option<RootedTreeCode> {
    pendant_edge_and_tree(g, v).map(|(_, code)| code)
}

pub(crate) fn pendant_edge_and_tree(
    g: &LabeledGraph,
    v: u32,
) -> Option<((u32, u32), RootedTreeCode)> {
    let bridges = g.bridges();
    let adj = g.adjacency();
    let mut best: Option<(usize, u32)> = None; // (opposite size, neighbor)
    for &u in &adj[v as usize] {
        let e = (v.min(u), v.max(u));
        if !bridges.contains(&e) {
            continue;
        }
        let opposite = component_size_avoiding(&adj, u, (v, u));
        let better = match best {
            None => true,
            Some((sz, lbl)) => opposite > sz || (opposite == sz && u < lbl),
        };
        if better {
            best = Some((opposite, u));
        }
    }
    let (_, u) = best?;
    let code = canon::rooted_code_in(&adj, v, Some((v, u))).ok()?;
    Some(((v, u), code))
}

fn component_size_avoiding(adj: &[Vec<u32>], start: u32, skip: (u32, u32)) -> usize {
    let mut seen = HashSet::new();
    seen.insert(start);
    let mut stack = vec![start];
    while let Some(x) = stack.pop() {
        for &w in &adj[x as usize] {
            if (x == skip.0 && w == skip.1) || (x == skip.1 && w == skip.0) {
                continue;
            }
            if seen.insert(w) {
                stack.push(w);
            }
        }
    }
    seen.len()
}

/// Pendant-tree profile of the whole graph, dropping trees larger than
/// `size_cap`. Tree components take a linear-time path; general components
/// fall back to per-vertex bridge scans.
pub fn pendant_profile(g: &LabeledGraph, size_cap: u32) -> PendantProfile {
    let adj = g.adjacency();
    let parts = g.components();
    let mut counts: BTreeMap<RootedTreeCode, u64> = BTreeMap::new();
    for block in &parts.blocks {
        let s = block.len();
        if s == 1 {
            continue; // isolated vertex: no incident cut-edge
        }
        let deg_sum: usize = block.iter().map(|&v| adj[v as usize].len()).sum();
        let is_tree = deg_sum == 2 * (s - 1);
        if is_tree {
            profile_tree_component(&adj, block, size_cap, &mut counts);
        } else {
            for &v in block {
                if let Some((_, code)) = pendant_edge_and_tree(g, v) {
                    if code.size() <= size_cap {
                        *counts.entry(code).or_insert(0) += 1;
                    }
                }
            }
        }
    }
    PendantProfile {
        counts,
        size_cap,
        n: g.n(),
    }
}

fn profile_tree_component(
    adj: &[Vec<u32>],
    block: &[u32],
    size_cap: u32,
    counts: &mut BTreeMap<RootedTreeCode, u64>,
) {
    let s = block.len();
    let root = block[0];
    // iterative subtree sizes
    let mut parent: HashMap<u32, u32> = HashMap::new();
    let mut order = Vec::with_capacity(s);
    parent.insert(root, 0);
    let mut stack = vec![root];
    while let Some(v) = stack.pop() {
        order.push(v);
        for &w in &adj[v as usize] {
            if w != parent[&v] {
                parent.insert(w, v);
                stack.push(w);
            }
        }
    }
    let mut size: HashMap<u32, usize> = block.iter().map(|&v| (v, 1)).collect();
    for &v in order.iter().rev() {
        let p = parent[&v];
        if p != 0 {
            *size.get_mut(&p).unwrap() += size[&v];
        }
    }
    for &v in block {
        // every tree edge is a cut-edge; opposite side of (v,u):
        // parent side has s - size[v], child side has size[child]
        let mut best: Option<(usize, u32)> = None;
        for &u in &adj[v as usize] {
            let opposite = if u == parent[&v] {
                s - size[&v]
            } else {
                size[&u]
            };
            let better = match best {
                None => true,
                Some((sz, lbl)) => opposite > sz || (opposite == sz && u < lbl),
            };
            if better {
                best = Some((opposite, u));
            }
        }
        let (opposite, u) = best.expect("component has >= 2 vertices");
        let side = s - opposite;
        if side as u32 <= size_cap {
            let code = canon::rooted_code_in(adj, v, Some((v, u)))
                .expect("tree component side is a tree");
            *counts.entry(code).or_insert(0) += 1;
        }
    }
}

/// Distances from `v` within its component; `None` for unreachable vertices.
fn distances(adj: &[Vec<u32>], v: u32) -> HashMap<u32, u32> {
    let mut dist = HashMap::new();
    dist.insert(v, 0);
    let mut queue = VecDeque::new();
    queue.push_back(v);
    while let Some(x) = queue.pop_front() {
        let d = dist[&x];
        for &w in &adj[x as usize] {
            if !dist.contains_key(&w) {
                dist.insert(w, d + 1);
                queue.push_back(w);
            }
        }
    }
    dist
}

/// Induced subgraph on a vertex set, relabeled `1..k` ascending in original
/// labels. Returns the graph and the old-to-new label map.
fn induced(g: &LabeledGraph, verts: &BTreeSet<u32>) -> (LabeledGraph, BTreeMap<u32, u32>) {
    let relabel: BTreeMap<u32, u32> = verts
        .iter()
        .enumerate()
        .map(|(i, &v)| (v, i as u32 + 1))
        .collect();
    let edges: Vec<(u32, u32)> = g
        .edges()
        .filter(|(u, v)| verts.contains(u) && verts.contains(v))
        .map(|(u, v)| (relabel[&u], relabel[&v]))
        .collect();
    (
        LabeledGraph::from_edges(verts.len() as u32, &edges).expect("induced subgraph is valid"),
        relabel,
    )
}

/// Ball of radius `r` around `v`: induced subgraph on the distance-<=r set,
/// relabeled, with the new root label.
pub fn ball(g: &LabeledGraph, v: u32, r: u32) -> (LabeledGraph, u32) {
    let adj = g.adjacency();
    let dist = distances(&adj, v);
    let verts: BTreeSet<u32> = dist
        .iter()
        .filter(|&(_, &d)| d <= r)
        .map(|(&u, _)| u)
        .collect();
    let (sub, relabel) = induced(g, &verts);
    (sub, relabel[&v])
}

/// Canonical rooted code of a ball in a forest.
pub fn ball_code(g: &LabeledGraph, v: u32, r: u32) -> Result<RootedTreeCode> {
    let (sub, root) = ball(g, v, r);
    canon::canon_rooted(&sub, root)
}

/// Hull of radius `r` around `v`: the ball plus every connected component of
/// the complement that has fewer than n/3 vertices and attaches to the ball.
/// Exit vertices mark where the large components attach; they sit at
/// distance exactly `r`.
pub fn hull(g: &LabeledGraph, v: u32, r: u32) -> Hull {
    let adj = g.adjacency();
    let dist = distances(&adj, v);
    let ball_verts: BTreeSet<u32> = dist
        .iter()
        .filter(|&(_, &d)| d <= r)
        .map(|(&u, _)| u)
        .collect();
    let mut keep = ball_verts.clone();
    let mut exits: BTreeSet<u32> = BTreeSet::new();
    let mut seen: HashSet<u32> = HashSet::new();
    for start in 1..=g.n() {
        if ball_verts.contains(&start) || seen.contains(&start) {
            continue;
        }
        // flood one outside component
        let mut comp = vec![start];
        let mut attach: BTreeSet<u32> = BTreeSet::new();
        seen.insert(start);
        let mut stack = vec![start];
        while let Some(x) = stack.pop() {
            for &w in &adj[x as usize] {
                if ball_verts.contains(&w) {
                    attach.insert(w);
                } else if seen.insert(w) {
                    comp.push(w);
                    stack.push(w);
                }
            }
        }
        if attach.is_empty() {
            continue; // a component of g itself, never part of the hull
        }
        if 3 * comp.len() < g.n() as usize {
            keep.extend(comp);
        } else {
            exits.extend(attach);
        }
    }
    debug_assert!(exits.iter().all(|e| dist[e] == r));
    let (sub, relabel) = induced(g, &keep);
    Hull {
        graph: sub,
        root: relabel[&v],
        exits: exits.into_iter().map(|e| relabel[&e]).collect(),
        radius: r,
    }
}

impl Hull {
    /// Canonical code when the hull is a tree.
    pub fn tree_code(&self) -> Result<HullTreeCode> {
        let (tree, index_of_label) = to_rooted_tree(&self.graph, self.root)?;
        let exits: HashSet<usize> = self.exits.iter().map(|e| index_of_label[e]).collect();
        HullTreeCode::new(&tree, &exits, self.radius)
    }
}

/// Convert the tree component containing `root` into child-list form.
fn to_rooted_tree(g: &LabeledGraph, root: u32) -> Result<(RootedTree, BTreeMap<u32, usize>)> {
    let adj = g.adjacency();
    let mut tree = RootedTree {
        children: Vec::new(),
        truncated: Vec::new(),
    };
    let mut index: BTreeMap<u32, usize> = BTreeMap::new();
    let mut stack = vec![(root, 0u32)];
    index.insert(root, 0);
    tree.children.push(Vec::new());
    tree.truncated.push(false);
    while let Some((v, p)) = stack.pop() {
        let vi = index[&v];
        for &w in &adj[v as usize] {
            if w == p {
                continue;
            }
            if index.contains_key(&w) {
                return Err(Error::NotATree);
            }
            let wi = tree.children.len();
            tree.children.push(Vec::new());
            tree.truncated.push(false);
            tree.children[vi].push(wi);
            index.insert(w, wi);
            stack.push((w, v));
        }
    }
    Ok((tree, index))
}

/// Hull of radius `r` of a sampled ball of the uniform infinite forest.
///
/// The spine-exit direction is by construction the unique infinite
/// component, so the n/3 threshold is bypassed: the hull keeps the full
/// pendant subtrees below every distance-`r` vertex and marks the spine
/// vertex as the single exit. Returns `None` when the sample's truncation
/// boundary intersects the hull (the hull is then not exactly known).
pub fn hull_of_spine_ball(ball: &SpineBall, r: u32) -> Option<HullTreeCode> {
    if r > ball.radius {
        return None;
    }
    let depths = ball.tree.depths();
    let exit = ball.spine[r as usize];
    let infinite_child = if (r as usize) < ball.spine.len() - 1 {
        Some(ball.spine[r as usize + 1])
    } else {
        None
    };
    // keep: vertices at depth <= r, plus full subtrees below depth-r
    // vertices, except the infinite (spine) direction
    let n = ball.tree.size();
    let mut keep = vec![false; n];
    let mut stack: Vec<usize> = Vec::new();
    for v in 0..n {
        if depths[v] <= r {
            keep[v] = true;
            if depths[v] == r {
                stack.push(v);
            }
        }
    }
    while let Some(v) = stack.pop() {
        for &c in &ball.tree.children[v] {
            if Some(c) == infinite_child {
                continue;
            }
            if !keep[c] {
                keep[c] = true;
                stack.push(c);
            }
        }
    }
    // exactness: no kept vertex may be truncated, except the exit itself
    // when its pendant subtrees are already fully visible (they never are:
    // the exit's flag means its children are unknown), so the exit must be
    // the only flagged kept vertex candidate and only if r < radius
    for v in 0..n {
        if keep[v] && ball.tree.truncated[v] {
            return None;
        }
    }
    // rebuild as a RootedTree on the kept set
    let mut index = vec![usize::MAX; n];
    let mut tree = RootedTree {
        children: Vec::new(),
        truncated: Vec::new(),
    };
    let mut order = vec![0usize];
    index[0] = 0;
    tree.children.push(Vec::new());
    tree.truncated.push(false);
    let mut qi = 0;
    while qi < order.len() {
        let v = order[qi];
        qi += 1;
        for &c in &ball.tree.children[v] {
            if keep[c] {
                let ci = tree.children.len();
                tree.children.push(Vec::new());
                tree.truncated.push(false);
                let vi = index[v];
                tree.children[vi].push(ci);
                index[c] = ci;
                order.push(c);
            }
        }
    }
    let exits: HashSet<usize> = [index[exit]].into_iter().collect();
    Some(HullTreeCode::new(&tree, &exits, r).expect("exit at distance r"))
}

/// Canonical rooted code of the radius-`r` ball of a spine-ball sample.
pub fn spine_ball_code(ball: &SpineBall, r: u32) -> Option<RootedTreeCode> {
    if r > ball.radius {
        return None;
    }
    let depths = ball.tree.depths();
    let n = ball.tree.size();
    let mut index = vec![usize::MAX; n];
    let mut tree = RootedTree {
        children: Vec::new(),
        truncated: Vec::new(),
    };
    index[0] = 0;
    tree.children.push(Vec::new());
    tree.truncated.push(false);
    let mut order = vec![0usize];
    let mut qi = 0;
    while qi < order.len() {
        let v = order[qi];
        qi += 1;
        for &c in &ball.tree.children[v] {
            if depths[c] <= r {
                let ci = tree.children.len();
                tree.children.push(Vec::new());
                tree.truncated.push(false);
                tree.children[index[v]].push(ci);
                index[c] = ci;
                order.push(c);
            }
        }
    }
    Some(canon::rooted_tree_code(&tree))
}

/// Empirical distribution over canonical string keys.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct EmpiricalDist {
    pub counts: BTreeMap<String, u64>,
    pub total: u64,
}

impl EmpiricalDist {
    pub fn record(&mut self, key: String) {
        *self.counts.entry(key).or_insert(0) += 1;
        self.total += 1;
    }

    /// Merge two estimators; the reduction is associative and commutative so
    /// parallel merging is order-independent.
    pub fn merge(mut self, other: EmpiricalDist) -> EmpiricalDist {
        for (k, v) in other.counts {
            *self.counts.entry(k).or_insert(0) += v;
        }
        self.total += other.total;
        self
    }

    /// Frequencies summing to 1. Errors on an empty sample stream.
    pub fn frequencies(&self) -> Result<BTreeMap<String, f64>> {
        if self.total == 0 {
            return Err(Error::Empty("empirical distribution".into()));
        }
        Ok(self
            .counts
            .iter()
            .map(|(k, &c)| (k.clone(), c as f64 / self.total as f64))
            .collect())
    }
}

/// Average over class members of the fraction of pendant copies of `target`
/// attached by a removable edge (deletion stays in the class, per the
/// membership oracle). Members with no pendant copy contribute 1.
pub fn removable_pendant_fraction(
    members: &[LabeledGraph],
    membership: &dyn Fn(&LabeledGraph) -> Option<bool>,
    target: &RootedTreeCode,
) -> Result<BigRational> {
    if members.is_empty() {
        return Err(Error::Empty("class members".into()));
    }
    let mut acc = BigRational::zero();
    for g in members {
        let mut copies = 0u64;
        let mut removable = 0u64;
        for v in 1..=g.n() {
            if let Some(((a, b), code)) = pendant_edge_and_tree(g, v) {
                if &code == target {
                    copies += 1;
                    let without = g.remove_edge(a, b).expect("edge exists");
                    match membership(&without) {
                        Some(true) => removable += 1,
                        Some(false) => {}
                        None => return Err(Error::Oracle),
                    }
                }
            }
        }
        let fraction = if copies == 0 {
            BigRational::from(BigInt::from(1))
        } else {
            BigRational::new(BigInt::from(removable), BigInt::from(copies))
        };
        acc += fraction;
    }
    Ok(acc / BigRational::from(BigInt::from(members.len() as u64)))
}
