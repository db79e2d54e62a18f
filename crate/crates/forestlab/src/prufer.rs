//! Prüfer sequence decoding over an arbitrary label set.

/// Decode a Prüfer sequence into tree edges. `labels` must be sorted
/// ascending and distinct; `seq` has length `labels.len() - 2` with entries
/// drawn from `labels`. The map sequence -> tree is a bijection onto the
/// `m^(m-2)` labeled trees on the set.
pub fn decode(labels: &[u32], seq: &[u32]) -> Vec<(u32, u32)> {
    let m = labels.len();
    debug_assert!(m >= 2);
    debug_assert_eq!(seq.len(), m - 2);
    let mut degree: std::collections::BTreeMap<u32, usize> =
        labels.iter().map(|&l| (l, 1)).collect();
    for &s in seq {
        *degree.get_mut(&s).expect("sequence entry must be a label") += 1;
    }
    // leaves = labels of current degree 1, kept as a min-heap
    let mut leaves: std::collections::BinaryHeap<std::cmp::Reverse<u32>> = degree
        .iter()
        .filter(|&(_, &d)| d == 1)
        .map(|(&l, _)| std::cmp::Reverse(l))
        .collect();
    let mut edges = Vec::with_capacity(m - 1);
    for &s in seq {
        let std::cmp::Reverse(leaf) = leaves.pop().expect("a leaf always exists");
        edges.push(ord(leaf, s));
        let d = degree.get_mut(&s).unwrap();
        *d -= 1;
        if *d == 1 {
            leaves.push(std::cmp::Reverse(s));
        }
        degree.remove(&leaf);
    }
    let std::cmp::Reverse(a) = leaves.pop().unwrap();
    let std::cmp::Reverse(b) = leaves.pop().unwrap();
    edges.push(ord(a, b));
    edges
}

fn ord(u: u32, v: u32) -> (u32, u32) {
    if u < v {
        (u, v)
    } else {
        (v, u)
    }
}
