//! Simple labeled graphs on the vertex set `[1..n]`, with the connectivity,
//! bridge and largest-component primitives every other module consumes.
//!
//! Graphs are immutable values: `add_edge`/`remove_edge` return new graphs.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use crate::error::{Error, Result};

/// A simple labeled graph. Vertices are `1..=n`; edges are stored as
/// normalized pairs `(u, v)` with `u < v`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LabeledGraph {
    n: u32,
    edges: BTreeSet<(u32, u32)>,
}

/// The connected components of a graph, with the designated largest block.
///
/// Among blocks of maximum size, the designated one is the block containing
/// the largest vertex label.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComponentPartition {
    pub blocks: Vec<Vec<u32>>,
    pub largest_index: usize,
}

impl LabeledGraph {
    /// An edgeless graph on `n` vertices. `n = 0` is allowed and denotes the
    /// empty graph.
    pub fn empty(n: u32) -> Self {
        LabeledGraph {
            n,
            edges: BTreeSet::new(),
        }
    }

    pub fn from_edges(n: u32, edges: &[(u32, u32)]) -> Result<Self> {
        let mut g = LabeledGraph::empty(n);
        for &(u, v) in edges {
            g = g.add_edge(u, v)?;
        }
        Ok(g)
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        self.edges.iter().copied()
    }

    pub fn has_edge(&self, u: u32, v: u32) -> bool {
        self.edges.contains(&normalize(u, v))
    }

    fn check_vertex(&self, v: u32) -> Result<()> {
        if v == 0 || v > self.n {
            return Err(Error::VertexOutOfRange(v, self.n));
        }
        Ok(())
    }

    /// A new graph with the edge `u-v` added.
    pub fn add_edge(&self, u: u32, v: u32) -> Result<Self> {
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        if u == v {
            return Err(Error::SelfLoop(u));
        }
        let e = normalize(u, v);
        if self.edges.contains(&e) {
            return Err(Error::DuplicateEdge(e.0, e.1));
        }
        let mut edges = self.edges.clone();
        edges.insert(e);
        Ok(LabeledGraph { n: self.n, edges })
    }

    /// A new graph with the edge `u-v` removed.
    pub fn remove_edge(&self, u: u32, v: u32) -> Result<Self> {
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        let e = normalize(u, v);
        if !self.edges.contains(&e) {
            return Err(Error::MissingEdge(e.0, e.1));
        }
        let mut edges = self.edges.clone();
        edges.remove(&e);
        Ok(LabeledGraph { n: self.n, edges })
    }

    /// Adjacency lists indexed by vertex (entry 0 unused); each list sorted
    /// ascending.
    pub fn adjacency(&self) -> Vec<Vec<u32>> {
        let mut adj = vec![Vec::new(); self.n as usize + 1];
        for &(u, v) in &self.edges {
            adj[u as usize].push(v);
            adj[v as usize].push(u);
        }
        adj
    }

    pub fn degree(&self, v: u32) -> usize {
        self.edges
            .iter()
            .filter(|&&(a, b)| a == v || b == v)
            .count()
    }

    /// Connected components with the largest-block designation.
    pub fn components(&self) -> ComponentPartition {
        let adj = self.adjacency();
        let mut seen = vec![false; self.n as usize + 1];
        let mut blocks = Vec::new();
        for start in 1..=self.n {
            if seen[start as usize] {
                continue;
            }
            let mut block = Vec::new();
            let mut stack = vec![start];
            seen[start as usize] = true;
            while let Some(v) = stack.pop() {
                block.push(v);
                for &w in &adj[v as usize] {
                    if !seen[w as usize] {
                        seen[w as usize] = true;
                        stack.push(w);
                    }
                }
            }
            block.sort_unstable();
            blocks.push(block);
        }
        // Largest block; ties go to the block containing the largest label.
        let mut largest_index = 0;
        for (i, b) in blocks.iter().enumerate() {
            let best = &blocks[largest_index];
            if b.len() > best.len()
                || (b.len() == best.len() && b.last() > best.last())
            {
                largest_index = i;
            }
        }
        ComponentPartition {
            blocks,
            largest_index,
        }
    }

    pub fn component_count(&self) -> usize {
        self.components().blocks.len()
    }

    /// All bridges (cut-edges), via one low-link DFS pass.
    pub fn bridges(&self) -> BTreeSet<(u32, u32)> {
        let adj = self.adjacency();
        let n = self.n as usize;
        let mut disc = vec![0u32; n + 1];
        let mut low = vec![0u32; n + 1];
        let mut timer = 0u32;
        let mut out = BTreeSet::new();
        // Iterative DFS; `parent_edge` disambiguates one multiplicity of the
        // parent edge (simple graphs: parent vertex suffices).
        for start in 1..=self.n {
            if disc[start as usize] != 0 {
                continue;
            }
            let mut stack: Vec<(u32, u32, usize)> = vec![(start, 0, 0)];
            while let Some(&mut (v, parent, ref mut idx)) = stack.last_mut() {
                let vi = v as usize;
                if *idx == 0 {
                    timer += 1;
                    disc[vi] = timer;
                    low[vi] = timer;
                }
                if *idx < adj[vi].len() {
                    let w = adj[vi][*idx];
                    *idx += 1;
                    if disc[w as usize] == 0 {
                        stack.push((w, v, 0));
                    } else if w != parent {
                        low[vi] = low[vi].min(disc[w as usize]);
                    }
                } else {
                    stack.pop();
                    if let Some(&mut (p, _, _)) = stack.last_mut() {
                        let pi = p as usize;
                        low[pi] = low[pi].min(low[vi]);
                        if low[vi] > disc[pi] {
                            out.insert(normalize(p, v));
                        }
                    }
                }
            }
        }
        out
    }

    /// True iff the graph is acyclic.
    pub fn is_forest(&self) -> bool {
        self.edges.len() + self.component_count() == self.n as usize
    }

    /// Replace every nontrivial 2-edge-connected block by a spanning tree
    /// chosen by `rule`. Bridges and the component partition are preserved.
    pub fn two_block_forest_projection(&self, rule: SpanningTreeRule) -> LabeledGraph {
        let bridges = self.bridges();
        // 2-blocks = connected components of the graph minus its bridges.
        let mut block_adj = vec![Vec::new(); self.n as usize + 1];
        for &(u, v) in &self.edges {
            if !bridges.contains(&(u, v)) {
                block_adj[u as usize].push(v);
                block_adj[v as usize].push(u);
            }
        }
        for l in block_adj.iter_mut() {
            l.sort_unstable();
        }
        let mut seen = vec![false; self.n as usize + 1];
        let mut edges: BTreeSet<(u32, u32)> = bridges;
        for start in 1..=self.n {
            if seen[start as usize] || block_adj[start as usize].is_empty() {
                continue;
            }
            // `start` is the smallest label in its 2-block: all smaller
            // vertices of the block would have been visited first.
            match rule {
                SpanningTreeRule::BfsFromSmallestLabel => {
                    let mut queue = std::collections::VecDeque::new();
                    seen[start as usize] = true;
                    queue.push_back(start);
                    while let Some(v) = queue.pop_front() {
                        for &w in &block_adj[v as usize] {
                            if !seen[w as usize] {
                                seen[w as usize] = true;
                                edges.insert(normalize(v, w));
                                queue.push_back(w);
                            }
                        }
                    }
                }
            }
        }
        LabeledGraph { n: self.n, edges }
    }

    /// Edge-list text format: first line `n m`, then `m` lines `u v` with
    /// `1 <= u < v <= n`.
    pub fn to_edge_list(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "{} {}", self.n, self.edges.len());
        for &(u, v) in &self.edges {
            let _ = writeln!(s, "{} {}", u, v);
        }
        s
    }

    pub fn parse_edge_list(text: &str) -> Result<Self> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let header = lines
            .next()
            .ok_or_else(|| Error::Parse("missing header line".into()))?;
        let mut it = header.split_whitespace();
        let n: u32 = it
            .next()
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| Error::Parse("bad vertex count".into()))?;
        let m: usize = it
            .next()
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| Error::Parse("bad edge count".into()))?;
        let mut g = LabeledGraph::empty(n);
        let mut count = 0;
        for line in lines {
            let mut it = line.split_whitespace();
            let u: u32 = it
                .next()
                .and_then(|t| t.parse().ok())
                .ok_or_else(|| Error::Parse(format!("bad edge line: {line}")))?;
            let v: u32 = it
                .next()
                .and_then(|t| t.parse().ok())
                .ok_or_else(|| Error::Parse(format!("bad edge line: {line}")))?;
            if u >= v {
                return Err(Error::Parse(format!("edge not normalized: {u} {v}")));
            }
            g = g.add_edge(u, v)?;
            count += 1;
        }
        if count != m {
            return Err(Error::Parse(format!(
                "header declares {m} edges, found {count}"
            )));
        }
        Ok(g)
    }
}

/// Deterministic spanning-tree rules for 2-block projection.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SpanningTreeRule {
    /// BFS from the smallest label of the block, neighbors in increasing
    /// label order.
    #[default]
    BfsFromSmallestLabel,
}

fn normalize(u: u32, v: u32) -> (u32, u32) {
    if u < v {
        (u, v)
    } else {
        (v, u)
    }
}
