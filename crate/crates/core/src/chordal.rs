//! Chordality via maximum cardinality search, and edge clique covers of
//! chordal graphs.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::graph::Graph;

/// Maximum cardinality search; returns vertices in visit order.
pub fn maximum_cardinality_search(g: &Graph) -> Vec<usize> {
    let n = g.n();
    let mut weight = vec![0usize; n];
    let mut visited = vec![false; n];
    let mut order = Vec::with_capacity(n);
    for _ in 0..n {
        let v = (0..n)
            .filter(|&v| !visited[v])
            .max_by_key(|&v| (weight[v], std::cmp::Reverse(v)))
            .unwrap();
        visited[v] = true;
        order.push(v);
        for &w in g.neighbors(v) {
            if !visited[w] {
                weight[w] += 1;
            }
        }
    }
    order
}

/// A perfect elimination ordering if `g` is chordal.
pub fn perfect_elimination_ordering(g: &Graph) -> Option<Vec<usize>> {
    let mut peo = maximum_cardinality_search(g);
    peo.reverse();
    is_perfect_elimination_ordering(g, &peo).then_some(peo)
}

pub fn is_chordal(g: &Graph) -> bool {
    perfect_elimination_ordering(g).is_some()
}

pub fn is_perfect_elimination_ordering(g: &Graph, peo: &[usize]) -> bool {
    let n = g.n();
    let mut pos = vec![0; n];
    for (i, &v) in peo.iter().enumerate() {
        pos[v] = i;
    }
    peo.iter().all(|&v| {
        let later: Vec<usize> = g.neighbors(v).iter().copied().filter(|&w| pos[w] > pos[v]).collect();
        let Some(&first) = later.iter().min_by_key(|&&w| pos[w]) else {
            return true;
        };
        later.iter().all(|&w| w == first || g.has_edge(first, w))
    })
}

/// Minimum number of cliques covering every edge of a chordal graph. Walks a
/// perfect elimination ordering and opens the clique `{v} ∪ later(v)`
/// whenever `v` still has an uncovered edge to a later neighbour.
pub fn clique_cover_chordal(g: &Graph) -> Result<usize> {
    let peo = perfect_elimination_ordering(g).ok_or(Error::NotChordal)?;
    let n = g.n();
    let mut pos = vec![0; n];
    for (i, &v) in peo.iter().enumerate() {
        pos[v] = i;
    }
    let mut covered: BTreeSet<(usize, usize)> = BTreeSet::new();
    let mut count = 0;
    for &v in &peo {
        let later: Vec<usize> = g.neighbors(v).iter().copied().filter(|&w| pos[w] > pos[v]).collect();
        if later.iter().all(|&w| covered.contains(&(v.min(w), v.max(w)))) {
            continue;
        }
        count += 1;
        let mut clique = later;
        clique.push(v);
        for (i, &a) in clique.iter().enumerate() {
            for &b in &clique[i + 1..] {
                covered.insert((a.min(b), a.max(b)));
            }
        }
    }
    Ok(count)
}
