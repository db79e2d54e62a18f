//! Canonical codes and exact automorphism counts for rooted trees, unrooted
//! trees, forests and hull trees.
//!
//! Rooted codes are balanced-parenthesis strings: a vertex is `(` followed by
//! its children's codes sorted ascending lexicographically, then `)`. Two
//! rooted trees get the same code iff they are root-preserving isomorphic.
//! Unrooted codes canonize at the centroid; a bicentral tree wraps its two
//! half-codes as `[` min max `]`, which keeps unrooted codes disjoint from
//! rooted ones. Hull trees mark exit vertices with `{` `}` instead of `(` `)`.

use std::collections::{BTreeMap, HashSet};

use num_bigint::BigUint;
use num_traits::One;

use crate::error::{Error, Result};
use crate::graph::LabeledGraph;

/// Canonical identifier of a rooted unlabeled tree.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RootedTreeCode {
    size: u32,
    code: String,
}

/// Canonical identifier of an unrooted unlabeled tree.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct UnrootedTreeCode {
    size: u32,
    code: String,
    bicentral: bool,
}

/// Canonical identifier of a tree with a root and `k` marked exit vertices
/// at distance exactly `radius` from the root.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct HullTreeCode {
    size: u32,
    radius: u32,
    exits: u32,
    code: String,
}

/// One part of a [`ForestShape`]: a tree, or a small general graph.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PartCode {
    Tree(UnrootedTreeCode),
    Graph { size: u32, code: String },
}

/// Canonical identifier of an unordered multiset of components.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct ForestShape {
    parts: Vec<PartCode>,
    total_size: u64,
}

/// A rooted tree in child-list form; vertex 0 is the root. `truncated[v]`
/// marks vertices whose subtree was cut by a sampling depth cap.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootedTree {
    pub children: Vec<Vec<usize>>,
    pub truncated: Vec<bool>,
}

impl RootedTree {
    pub fn singleton() -> Self {
        RootedTree {
            children: vec![Vec::new()],
            truncated: vec![false],
        }
    }

    pub fn size(&self) -> usize {
        self.children.len()
    }

    /// Depth of every vertex, root at 0.
    pub fn depths(&self) -> Vec<u32> {
        let mut d = vec![0u32; self.children.len()];
        let mut stack = vec![0usize];
        while let Some(v) = stack.pop() {
            for &c in &self.children[v] {
                d[c] = d[v] + 1;
                stack.push(c);
            }
        }
        d
    }

    /// Relabel as a `LabeledGraph` on `[1..n]` in preorder, root = 1.
    pub fn to_labeled_graph(&self) -> LabeledGraph {
        self.to_labeled_graph_with_map().0
    }

    /// Like [`Self::to_labeled_graph`], also returning the node-index to
    /// label map.
    pub fn to_labeled_graph_with_map(&self) -> (LabeledGraph, Vec<u32>) {
        let n = self.children.len() as u32;
        let mut label = vec![0u32; self.children.len()];
        let mut next = 0u32;
        let mut stack = vec![0usize];
        let mut edges = Vec::new();
        while let Some(v) = stack.pop() {
            if label[v] == 0 {
                next += 1;
                label[v] = next;
            }
            for &c in &self.children[v] {
                next += 1;
                label[c] = next;
                edges.push((label[v], label[c]));
                stack.push(c);
            }
        }
        (
            LabeledGraph::from_edges(n, &edges).expect("tree edges are valid"),
            label,
        )
    }
}

impl RootedTreeCode {
    pub fn single() -> Self {
        RootedTreeCode {
            size: 1,
            code: "()".into(),
        }
    }

    /// Assemble a code from already-canonical children codes.
    pub fn from_children(mut children: Vec<RootedTreeCode>) -> Self {
        children.sort_by(|a, b| a.code.cmp(&b.code));
        let size = 1 + children.iter().map(|c| c.size).sum::<u32>();
        let mut code = String::with_capacity(2 * size as usize);
        code.push('(');
        for c in &children {
            code.push_str(&c.code);
        }
        code.push(')');
        RootedTreeCode { size, code }
    }

    pub fn code(&self) -> &str {
        &self.code
    }

    pub fn size(&self) -> u32 {
        self.size
    }

    /// Codes of the root's child subtrees, in canonical order.
    pub fn children(&self) -> Vec<RootedTreeCode> {
        split_children(&self.code[1..self.code.len() - 1])
            .into_iter()
            .map(|s| RootedTreeCode {
                size: (s.len() / 2) as u32,
                code: s.to_string(),
            })
            .collect()
    }

    /// Parse a code string (validated to be balanced parentheses).
    pub fn parse(code: &str) -> Result<Self> {
        if !valid_paren(code, '(', ')') {
            return Err(Error::Parse(format!("bad rooted code: {code}")));
        }
        Ok(RootedTreeCode {
            size: (code.len() / 2) as u32,
            code: code.to_string(),
        })
    }

    pub fn decode(&self) -> RootedTree {
        decode_paren(&self.code)
    }
}

impl UnrootedTreeCode {
    pub fn code(&self) -> &str {
        &self.code
    }

    pub fn size(&self) -> u32 {
        self.size
    }

    pub fn bicentral(&self) -> bool {
        self.bicentral
    }

    pub fn single() -> Self {
        UnrootedTreeCode {
            size: 1,
            code: "()".into(),
            bicentral: false,
        }
    }

    /// The two half-codes of a bicentral tree, ascending.
    pub fn halves(&self) -> Option<(RootedTreeCode, RootedTreeCode)> {
        if !self.bicentral {
            return None;
        }
        let inner = &self.code[1..self.code.len() - 1];
        let parts = split_children(inner);
        debug_assert_eq!(parts.len(), 2);
        Some((
            RootedTreeCode::parse(parts[0]).expect("half code"),
            RootedTreeCode::parse(parts[1]).expect("half code"),
        ))
    }

    /// Canonical unrooted code built from the rooted code of one half of the
    /// centroid split (unicentral: the code at the centroid).
    pub fn from_centroid_codes(a: RootedTreeCode, b: Option<RootedTreeCode>) -> Self {
        match b {
            None => UnrootedTreeCode {
                size: a.size,
                code: a.code,
                bicentral: false,
            },
            Some(b) => {
                let (lo, hi) = if a.code <= b.code { (a, b) } else { (b, a) };
                UnrootedTreeCode {
                    size: lo.size + hi.size,
                    code: format!("[{}{}]", lo.code, hi.code),
                    bicentral: true,
                }
            }
        }
    }

    pub fn parse(code: &str) -> Result<Self> {
        if code.starts_with('[') && code.ends_with(']') {
            let inner = &code[1..code.len() - 1];
            let parts = split_children(inner);
            if parts.len() != 2 || !parts.iter().all(|p| valid_paren(p, '(', ')')) {
                return Err(Error::Parse(format!("bad unrooted code: {code}")));
            }
            if parts[0] > parts[1] {
                return Err(Error::Parse(format!("unordered halves: {code}")));
            }
            Ok(UnrootedTreeCode {
                size: (inner.len() / 2) as u32,
                code: code.to_string(),
                bicentral: true,
            })
        } else {
            let r = RootedTreeCode::parse(code)?;
            Ok(UnrootedTreeCode {
                size: r.size,
                code: r.code,
                bicentral: false,
            })
        }
    }

    /// Materialize as a labeled tree (labels in preorder).
    pub fn decode(&self) -> LabeledGraph {
        match self.halves() {
            None => RootedTreeCode::parse(&self.code)
                .expect("unicentral code is rooted")
                .decode()
                .to_labeled_graph(),
            Some((a, b)) => {
                let ga = a.decode().to_labeled_graph();
                let gb = b.decode().to_labeled_graph();
                let na = ga.n();
                let mut edges: Vec<(u32, u32)> = ga.edges().collect();
                for (u, v) in gb.edges() {
                    edges.push((u + na, v + na));
                }
                // join the two half roots (each labeled 1 in its half)
                edges.push((1, na + 1));
                LabeledGraph::from_edges(na + gb.n(), &edges).expect("valid tree")
            }
        }
    }
}

impl HullTreeCode {
    pub fn code(&self) -> &str {
        &self.code
    }

    pub fn size(&self) -> u32 {
        self.size
    }

    pub fn radius(&self) -> u32 {
        self.radius
    }

    pub fn exits(&self) -> u32 {
        self.exits
    }

    /// Canonize a rooted tree with marked exit vertices. All exits must be
    /// distinct and at distance exactly `radius` from the root.
    pub fn new(tree: &RootedTree, exits: &HashSet<usize>, radius: u32) -> Result<Self> {
        let depths = tree.depths();
        for &e in exits {
            if e >= tree.size() || depths[e] != radius {
                return Err(Error::Parse(format!(
                    "exit vertex {e} not at distance {radius}"
                )));
            }
        }
        let code = colored_code(tree, 0, exits);
        Ok(HullTreeCode {
            size: tree.size() as u32,
            radius,
            exits: exits.len() as u32,
            code,
        })
    }
}

fn colored_code(tree: &RootedTree, v: usize, exits: &HashSet<usize>) -> String {
    let mut subs: Vec<String> = tree.children[v]
        .iter()
        .map(|&c| colored_code(tree, c, exits))
        .collect();
    subs.sort();
    let (open, close) = if exits.contains(&v) {
        ('{', '}')
    } else {
        ('(', ')')
    };
    let mut s = String::new();
    s.push(open);
    for sub in subs {
        s.push_str(&sub);
    }
    s.push(close);
    s
}

/// Canonical code of the tree component containing `root`, rooted there.
pub fn canon_rooted(g: &LabeledGraph, root: u32) -> Result<RootedTreeCode> {
    let adj = g.adjacency();
    rooted_code_in(&adj, root, None)
}

/// Canonical rooted code of a child-list tree.
pub fn rooted_tree_code(tree: &RootedTree) -> RootedTreeCode {
    fn rec(tree: &RootedTree, v: usize) -> RootedTreeCode {
        let children = tree.children[v].iter().map(|&c| rec(tree, c)).collect();
        RootedTreeCode::from_children(children)
    }
    rec(tree, 0)
}

/// Like [`canon_rooted`] but ignoring one edge (used for pendant trees).
pub(crate) fn rooted_code_in(
    adj: &[Vec<u32>],
    root: u32,
    skip_edge: Option<(u32, u32)>,
) -> Result<RootedTreeCode> {
    fn rec(
        adj: &[Vec<u32>],
        v: u32,
        parent: u32,
        skip: Option<(u32, u32)>,
        seen: &mut HashSet<u32>,
    ) -> Result<RootedTreeCode> {
        if !seen.insert(v) {
            return Err(Error::NotATree);
        }
        let mut children = Vec::new();
        for &w in &adj[v as usize] {
            if w == parent {
                continue;
            }
            if let Some((a, b)) = skip {
                if (v == a && w == b) || (v == b && w == a) {
                    continue;
                }
            }
            if seen.contains(&w) {
                return Err(Error::NotATree);
            }
            children.push(rec(adj, w, v, skip, seen)?);
        }
        Ok(RootedTreeCode::from_children(children))
    }
    let mut seen = HashSet::new();
    rec(adj, root, 0, skip_edge, &mut seen)
}

/// Canonical unrooted code of the tree component containing `v`.
pub fn canon_unrooted(g: &LabeledGraph, v: u32) -> Result<UnrootedTreeCode> {
    let adj = g.adjacency();
    canon_unrooted_in(&adj, v)
}

pub(crate) fn canon_unrooted_in(adj: &[Vec<u32>], v: u32) -> Result<UnrootedTreeCode> {
    let comp = component_of(adj, v);
    let (c1, c2) = centroids(adj, &comp)?;
    match c2 {
        None => Ok(UnrootedTreeCode::from_centroid_codes(
            rooted_code_in(adj, c1, None)?,
            None,
        )),
        Some(c2) => {
            let a = rooted_code_in(adj, c1, Some((c1, c2)))?;
            let b = rooted_code_in(adj, c2, Some((c1, c2)))?;
            Ok(UnrootedTreeCode::from_centroid_codes(a, Some(b)))
        }
    }
}

fn component_of(adj: &[Vec<u32>], v: u32) -> Vec<u32> {
    let mut seen = HashSet::new();
    let mut stack = vec![v];
    seen.insert(v);
    let mut out = Vec::new();
    while let Some(x) = stack.pop() {
        out.push(x);
        for &w in &adj[x as usize] {
            if seen.insert(w) {
                stack.push(w);
            }
        }
    }
    out
}

/// The one or two centroids of the tree on `comp`. Errors if `comp` is not a
/// tree (edge count mismatch).
fn centroids(adj: &[Vec<u32>], comp: &[u32]) -> Result<(u32, Option<u32>)> {
    let n = comp.len();
    let deg_sum: usize = comp.iter().map(|&v| adj[v as usize].len()).sum();
    if deg_sum != 2 * (n - 1) {
        return Err(Error::NotATree);
    }
    if n == 1 {
        return Ok((comp[0], None));
    }
    // subtree sizes from an arbitrary root
    let root = comp[0];
    let mut order = Vec::with_capacity(n);
    let mut parent: BTreeMap<u32, u32> = BTreeMap::new();
    let mut stack = vec![(root, 0u32)];
    let mut seen = HashSet::new();
    seen.insert(root);
    while let Some((v, p)) = stack.pop() {
        order.push(v);
        parent.insert(v, p);
        for &w in &adj[v as usize] {
            if w != p {
                if !seen.insert(w) {
                    return Err(Error::NotATree);
                }
                stack.push((w, v));
            }
        }
    }
    if order.len() != n {
        return Err(Error::NotATree);
    }
    let mut size: BTreeMap<u32, usize> = comp.iter().map(|&v| (v, 1)).collect();
    for &v in order.iter().rev() {
        let p = parent[&v];
        if p != 0 {
            *size.get_mut(&p).unwrap() += size[&v];
        }
    }
    // max component size after removing v
    let mut best: Vec<u32> = Vec::new();
    let mut best_val = usize::MAX;
    for &v in comp {
        let mut mx = n - size[&v];
        for &w in &adj[v as usize] {
            if w != parent[&v] {
                mx = mx.max(size[&w]);
            }
        }
        match mx.cmp(&best_val) {
            std::cmp::Ordering::Less => {
                best_val = mx;
                best = vec![v];
            }
            std::cmp::Ordering::Equal => best.push(v),
            std::cmp::Ordering::Greater => {}
        }
    }
    match best.len() {
        1 => Ok((best[0], None)),
        2 => Ok((best[0], Some(best[1]))),
        _ => unreachable!("a tree has at most two centroids"),
    }
}

/// Number of automorphisms of a rooted tree fixing its root: the product
/// over vertices of the multiset permutation counts of isomorphic children.
pub fn aut_rooted(c: &RootedTreeCode) -> BigUint {
    aut_of_paren(&c.code)
}

fn aut_of_paren(code: &str) -> BigUint {
    let inner = &code[1..code.len() - 1];
    let children = split_children(inner);
    let mut result = BigUint::one();
    let mut run = 1u64;
    for i in 0..children.len() {
        result *= aut_of_paren(children[i]);
        if i + 1 < children.len() && children[i + 1] == children[i] {
            run += 1;
            result *= BigUint::from(run);
        } else {
            run = 1;
        }
    }
    result
}

/// Number of automorphisms of an unrooted tree.
///
/// Unicentral: equals `aut_rooted` at the centroid. Bicentral with halves
/// `a`, `b`: `Aut_r(a) * Aut_r(b)` when the halves differ, `2 * Aut_r(a)^2`
/// when they coincide (the central edge may flip).
pub fn aut_unrooted(c: &UnrootedTreeCode) -> BigUint {
    match c.halves() {
        None => aut_of_paren(&c.code),
        Some((a, b)) => {
            if a.code == b.code {
                BigUint::from(2u32) * aut_rooted(&a) * aut_rooted(&b)
            } else {
                aut_rooted(&a) * aut_rooted(&b)
            }
        }
    }
}

/// Number of automorphisms of a forest of trees:
/// product over isomorphism classes of `m_j! * Aut_u(class)^(m_j)`.
pub fn aut_forest(shape: &ForestShape) -> Result<BigUint> {
    let mut result = BigUint::one();
    let mut i = 0;
    let parts = &shape.parts;
    while i < parts.len() {
        let tree = match &parts[i] {
            PartCode::Tree(t) => t,
            PartCode::Graph { .. } => return Err(Error::NonTreePart),
        };
        let mut j = i + 1;
        while j < parts.len() && parts[j] == parts[i] {
            j += 1;
        }
        let mult = (j - i) as u64;
        let a = aut_unrooted(tree);
        for _ in 0..mult {
            result *= &a;
        }
        for k in 2..=mult {
            result *= BigUint::from(k);
        }
        i = j;
    }
    Ok(result)
}

/// Distinct rooted codes obtainable by re-rooting an unrooted tree, each with
/// the number of root orbits it collapses (vertices with equal rooted codes
/// lie in one orbit, so each multiplicity is 1; they sum to the number of
/// vertex orbits).
pub fn rootings(c: &UnrootedTreeCode) -> Vec<(RootedTreeCode, u64)> {
    rootings_with_vertex_counts(c)
        .into_iter()
        .map(|(code, _)| (code, 1))
        .collect()
}

/// Distinct rooted codes with the number of vertices producing each (the
/// orbit sizes; the paper's lambda for the root class).
pub fn rootings_with_vertex_counts(c: &UnrootedTreeCode) -> Vec<(RootedTreeCode, u64)> {
    let g = c.decode();
    let mut counts: BTreeMap<RootedTreeCode, u64> = BTreeMap::new();
    for v in 1..=g.n() {
        let code = canon_rooted(&g, v).expect("decoded tree is a tree");
        *counts.entry(code).or_insert(0) += 1;
    }
    counts.into_iter().collect()
}

/// Automorphisms of a one-exit hull tree that fix the root and the exit
/// (equivalently, the whole root-exit path pointwise).
pub fn aut_path(h: &HullTreeCode) -> Result<BigUint> {
    if h.exits != 1 {
        return Err(Error::ExitCount(h.exits as usize));
    }
    Ok(aut_of_colored(&h.code))
}

fn aut_of_colored(code: &str) -> BigUint {
    let inner = &code[1..code.len() - 1];
    let children = split_children(inner);
    let mut result = BigUint::one();
    let mut run = 1u64;
    for i in 0..children.len() {
        result *= aut_of_colored(children[i]);
        if i + 1 < children.len() && children[i + 1] == children[i] {
            run += 1;
            result *= BigUint::from(run);
        } else {
            run = 1;
        }
    }
    result
}

impl ForestShape {
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn from_parts(mut parts: Vec<PartCode>) -> Self {
        parts.sort();
        let total_size = parts.iter().map(|p| p.size() as u64).sum();
        ForestShape { parts, total_size }
    }

    pub fn from_trees(trees: Vec<UnrootedTreeCode>) -> Self {
        Self::from_parts(trees.into_iter().map(PartCode::Tree).collect())
    }

    pub fn parts(&self) -> &[PartCode] {
        &self.parts
    }

    pub fn total_size(&self) -> u64 {
        self.total_size
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn all_trees(&self) -> bool {
        self.parts.iter().all(|p| matches!(p, PartCode::Tree(_)))
    }

    /// A shape with one extra tree part.
    pub fn with_tree(&self, t: UnrootedTreeCode) -> Self {
        let mut parts = self.parts.clone();
        parts.push(PartCode::Tree(t));
        Self::from_parts(parts)
    }

    /// Comma-joined sorted part codes; empty shape serializes as "".
    pub fn serialize(&self) -> String {
        self.parts
            .iter()
            .map(|p| p.code())
            .collect::<Vec<_>>()
            .join(",")
    }

    pub fn parse(s: &str) -> Result<Self> {
        if s.is_empty() {
            return Ok(Self::empty());
        }
        let mut parts = Vec::new();
        for tok in s.split(',') {
            if let Some(rest) = tok.strip_prefix('G') {
                let (sz, _) = rest
                    .split_once(':')
                    .ok_or_else(|| Error::Parse(format!("bad graph code: {tok}")))?;
                let size: u32 = sz
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad graph code: {tok}")))?;
                parts.push(PartCode::Graph {
                    size,
                    code: tok.to_string(),
                });
            } else {
                parts.push(PartCode::Tree(UnrootedTreeCode::parse(tok)?));
            }
        }
        Ok(Self::from_parts(parts))
    }
}

impl PartCode {
    pub fn size(&self) -> u32 {
        match self {
            PartCode::Tree(t) => t.size(),
            PartCode::Graph { size, .. } => *size,
        }
    }

    pub fn code(&self) -> &str {
        match self {
            PartCode::Tree(t) => t.code(),
            PartCode::Graph { code, .. } => code,
        }
    }
}

/// Canonization cap for general (non-tree) components.
pub const GRAPH_CANON_CAP: usize = 10;

/// Canonical code of the induced subgraph on `block`: the minimum
/// upper-triangle adjacency bit-string over all vertex permutations,
/// formatted `G{n}:{bits as hex}`. Brute force, capped at 10 vertices.
pub fn canonical_graph_code(g: &LabeledGraph, block: &[u32]) -> Result<String> {
    let k = block.len();
    if k > GRAPH_CANON_CAP {
        return Err(Error::TooLarge(format!(
            "general-graph canonization capped at {GRAPH_CANON_CAP} vertices, got {k}"
        )));
    }
    let mut adj = vec![vec![false; k]; k];
    for i in 0..k {
        for j in i + 1..k {
            if g.has_edge(block[i], block[j]) {
                adj[i][j] = true;
                adj[j][i] = true;
            }
        }
    }
    let mut perm: Vec<usize> = (0..k).collect();
    let mut best = u64::MAX;
    loop {
        let mut bits = 0u64;
        let mut bit = 0;
        for i in 0..k {
            for j in i + 1..k {
                if adj[perm[i]][perm[j]] {
                    bits |= 1 << bit;
                }
                bit += 1;
            }
        }
        best = best.min(bits);
        if !next_permutation(&mut perm) {
            break;
        }
    }
    Ok(format!("G{k}:{best:x}"))
}

fn next_permutation(p: &mut [usize]) -> bool {
    let n = p.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && p[i - 1] >= p[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = n - 1;
    while p[j] <= p[i - 1] {
        j -= 1;
    }
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

fn valid_paren(code: &str, open: char, close: char) -> bool {
    let mut depth = 0i64;
    if code.is_empty() {
        return false;
    }
    for (i, ch) in code.chars().enumerate() {
        if ch == open {
            depth += 1;
        } else if ch == close {
            depth -= 1;
        } else {
            return false;
        }
        if depth == 0 && i + 1 != code.len() {
            return false;
        }
        if depth < 0 {
            return false;
        }
    }
    depth == 0
}

/// Split a concatenation of balanced groups into the groups.
fn split_children(inner: &str) -> Vec<&str> {
    let bytes = inner.as_bytes();
    let mut out = Vec::new();
    let mut depth = 0usize;
    let mut start = 0usize;
    for (i, &b) in bytes.iter().enumerate() {
        match b {
            b'(' | b'{' | b'[' => depth += 1,
            b')' | b'}' | b']' => {
                depth -= 1;
                if depth == 0 {
                    out.push(&inner[start..=i]);
                    start = i + 1;
                }
            }
            _ => {}
        }
    }
    out
}

fn decode_paren(code: &str) -> RootedTree {
    fn rec(code: &str, tree: &mut RootedTree) -> usize {
        let v = tree.children.len();
        tree.children.push(Vec::new());
        tree.truncated.push(false);
        for sub in split_children(&code[1..code.len() - 1]) {
            let c = rec(sub, tree);
            tree.children[v].push(c);
        }
        v
    }
    let mut tree = RootedTree {
        children: Vec::new(),
        truncated: Vec::new(),
    };
    rec(code, &mut tree);
    tree
}
