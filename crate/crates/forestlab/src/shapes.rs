//! Exhaustive generation of unlabeled shapes: rooted trees, unrooted trees,
//! forests, and one-exit hull trees, in canonical order, bounded by size.

use std::collections::BTreeSet;

use crate::canon::{
    self, ForestShape, HullTreeCode, RootedTree, RootedTreeCode, UnrootedTreeCode,
};
use crate::error::{Error, Result};

/// Hard cap on exhaustive shape generation. Rooted tree shapes grow like
/// 2.956^n; 16 keeps the full lists in the hundreds of thousands.
pub const SHAPE_GEN_CAP: usize = 16;

fn check_cap(bound: usize) -> Result<()> {
    if bound > SHAPE_GEN_CAP {
        return Err(Error::TooLarge(format!(
            "shape generation capped at {SHAPE_GEN_CAP}, requested {bound}"
        )));
    }
    Ok(())
}

/// All rooted tree shapes, grouped by size: entry `s` lists every rooted
/// shape on `s` vertices in canonical (code) order. Entry 0 is empty.
pub fn rooted_shapes_by_size(max: usize) -> Result<Vec<Vec<RootedTreeCode>>> {
    check_cap(max)?;
    let mut by_size: Vec<Vec<RootedTreeCode>> = vec![Vec::new(); max + 1];
    if max == 0 {
        return Ok(by_size);
    }
    by_size[1].push(RootedTreeCode::single());
    for n in 2..=max {
        // children form a multiset of smaller shapes of total size n-1
        let pool: Vec<RootedTreeCode> = by_size[1..n]
            .iter()
            .flatten()
            .cloned()
            .collect();
        let mut out = Vec::new();
        let mut current: Vec<RootedTreeCode> = Vec::new();
        multisets(&pool, 0, n - 1, &mut current, &mut out);
        out.sort();
        by_size[n] = out;
    }
    Ok(by_size)
}

fn multisets(
    pool: &[RootedTreeCode],
    start: usize,
    remaining: usize,
    current: &mut Vec<RootedTreeCode>,
    out: &mut Vec<RootedTreeCode>,
) {
    if remaining == 0 {
        out.push(RootedTreeCode::from_children(current.clone()));
        return;
    }
    for i in start..pool.len() {
        let s = pool[i].size() as usize;
        if s <= remaining {
            current.push(pool[i].clone());
            multisets(pool, i, remaining - s, current, out);
            current.pop();
        }
    }
}

/// All unrooted tree shapes grouped by size, by canonizing every rooted
/// shape at its centroid and deduplicating.
pub fn unrooted_shapes_by_size(max: usize) -> Result<Vec<Vec<UnrootedTreeCode>>> {
    let rooted = rooted_shapes_by_size(max)?;
    let mut by_size: Vec<Vec<UnrootedTreeCode>> = vec![Vec::new(); max + 1];
    for n in 1..=max {
        let mut set: BTreeSet<UnrootedTreeCode> = BTreeSet::new();
        for r in &rooted[n] {
            let g = r.decode().to_labeled_graph();
            set.insert(canon::canon_unrooted(&g, 1).expect("decoded shape is a tree"));
        }
        by_size[n] = set.into_iter().collect();
    }
    Ok(by_size)
}

/// All forest shapes (multisets of unrooted trees) of total size <= bound,
/// including the empty shape, in canonical order.
pub fn forest_shapes_up_to(bound: usize) -> Result<Vec<ForestShape>> {
    let unrooted = unrooted_shapes_by_size(bound)?;
    let pool: Vec<UnrootedTreeCode> = unrooted.into_iter().flatten().collect();
    let mut out = Vec::new();
    let mut current: Vec<UnrootedTreeCode> = Vec::new();
    forest_multisets(&pool, 0, bound, &mut current, &mut out);
    out.sort_by(|a, b| {
        (a.total_size(), a.serialize()).cmp(&(b.total_size(), b.serialize()))
    });
    Ok(out)
}

fn forest_multisets(
    pool: &[UnrootedTreeCode],
    start: usize,
    budget: usize,
    current: &mut Vec<UnrootedTreeCode>,
    out: &mut Vec<ForestShape>,
) {
    out.push(ForestShape::from_trees(current.clone()));
    for i in start..pool.len() {
        let s = pool[i].size() as usize;
        if s <= budget {
            current.push(pool[i].clone());
            forest_multisets(pool, i, budget - s, current, out);
            current.pop();
        }
    }
}

/// All one-exit hull tree shapes of the given radius with at most
/// `max_total` vertices. A radius-r one-exit hull tree decomposes uniquely
/// into r+1 rooted trees hanging off the root-to-exit path, so tuples of
/// rooted shapes enumerate the set without duplicates.
pub fn hull_shapes_one_exit(radius: u32, max_total: usize) -> Result<Vec<HullTreeCode>> {
    check_cap(max_total)?;
    let spine = radius as usize + 1;
    if max_total < spine {
        return Ok(Vec::new());
    }
    let rooted = rooted_shapes_by_size(max_total - spine + 1)?;
    let mut out = Vec::new();
    let mut tuple: Vec<RootedTreeCode> = Vec::new();
    tuple_rec(&rooted, spine, max_total, &mut tuple, &mut out, radius);
    out.sort();
    Ok(out)
}

fn tuple_rec(
    rooted: &[Vec<RootedTreeCode>],
    positions: usize,
    budget: usize,
    tuple: &mut Vec<RootedTreeCode>,
    out: &mut Vec<HullTreeCode>,
    radius: u32,
) {
    if tuple.len() == positions {
        out.push(assemble_hull(tuple, radius));
        return;
    }
    let slots_left = positions - tuple.len();
    for size in 1..=budget.saturating_sub(slots_left - 1) {
        if size >= rooted.len() {
            break;
        }
        for shape in &rooted[size] {
            tuple.push(shape.clone());
            tuple_rec(rooted, positions, budget - size, tuple, out, radius);
            tuple.pop();
        }
    }
}

fn assemble_hull(tuple: &[RootedTreeCode], radius: u32) -> HullTreeCode {
    // Spine vertices are the roots of the decoded tuple trees, chained in
    // order; the last spine vertex is the exit.
    let mut tree = RootedTree {
        children: Vec::new(),
        truncated: Vec::new(),
    };
    let mut spine_ids = Vec::new();
    for code in tuple {
        let sub = code.decode();
        let offset = tree.children.len();
        for v in 0..sub.size() {
            tree.children
                .push(sub.children[v].iter().map(|&c| c + offset).collect());
            tree.truncated.push(false);
        }
        spine_ids.push(offset);
    }
    for w in spine_ids.windows(2) {
        tree.children[w[0]].push(w[1]);
    }
    let exits: std::collections::HashSet<usize> =
        [*spine_ids.last().unwrap()].into_iter().collect();
    HullTreeCode::new(&tree, &exits, radius).expect("exit depth is the radius by construction")
}
