//! Construction orderings: vertex orders starting from an induced `P3` or
//! `K3` in which every later vertex has one or two earlier neighbours.
//!
//! In a cactus, a vertex outside a connected vertex set `S` has at most two
//! neighbours in `S` (three would give two cycles through a common edge), so
//! any connected growth order from a valid start is a construction ordering.
//! The builder below grows along the block-cut structure, and for `n >= 6`
//! first searches for a start whose 4th and 5th vertices have a single
//! earlier neighbour, which makes the order a C-δ labeling as well.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::cactus::CactusProfile;
use crate::error::{Error, Result};
use crate::graph::{block_decomposition, BlockDecomposition, BlockKind, Graph};

const PREFIX_SEARCH_BUDGET: usize = 20_000;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConstructionOrdering {
    /// `order[m]` is the vertex placed at position `m`.
    pub order: Vec<usize>,
    /// Earlier positions adjacent to position `m`, ascending.
    pub prior_neighbors: Vec<Vec<usize>>,
}

impl ConstructionOrdering {
    /// Wraps a vertex order, computing prior neighbours against `g`.
    pub fn from_order(g: &Graph, order: Vec<usize>) -> Result<Self> {
        let pos = positions(g.n(), &order)?;
        let prior_neighbors = order
            .iter()
            .enumerate()
            .map(|(m, &v)| {
                let mut p: Vec<usize> =
                    g.neighbors(v).iter().map(|&w| pos[w]).filter(|&q| q < m).collect();
                p.sort_unstable();
                p
            })
            .collect();
        Ok(ConstructionOrdering { order, prior_neighbors })
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    /// Position of each vertex.
    pub fn positions(&self) -> Vec<usize> {
        let mut pos = vec![0; self.order.len()];
        for (m, &v) in self.order.iter().enumerate() {
            pos[v] = m;
        }
        pos
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.order).expect("ordering serializes")
    }

    pub fn from_json(g: &Graph, text: &str) -> Result<Self> {
        let order: Vec<usize> = serde_json::from_str(text)
            .map_err(|e| Error::MalformedOrdering(e.to_string()))?;
        Self::from_order(g, order)
    }
}

fn positions(n: usize, order: &[usize]) -> Result<Vec<usize>> {
    if order.len() != n {
        return Err(Error::MalformedOrdering(format!(
            "expected {n} vertices, got {}",
            order.len()
        )));
    }
    let mut pos = vec![usize::MAX; n];
    for (m, &v) in order.iter().enumerate() {
        if v >= n {
            return Err(Error::MalformedOrdering(format!("vertex {v} out of range")));
        }
        if pos[v] != usize::MAX {
            return Err(Error::MalformedOrdering(format!("vertex {v} repeated")));
        }
        pos[v] = m;
    }
    Ok(pos)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    /// Positions 0..3 induce neither `P3` nor `K3`.
    InvalidStart,
    TooManyPrior { position: usize, count: usize },
    NoPrior { position: usize },
    /// The stored prior-neighbour list disagrees with the graph.
    PriorNeighborMismatch { position: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrderingCheck {
    pub valid: bool,
    pub violations: Vec<Violation>,
}

pub fn validate_ordering(g: &Graph, ord: &ConstructionOrdering) -> Result<OrderingCheck> {
    let n = g.n();
    if n < 3 {
        return Err(Error::TooSmall { n, min: 3 });
    }
    let fresh = ConstructionOrdering::from_order(g, ord.order.clone())?;
    let mut violations = Vec::new();
    if !is_induced_p3_or_k3(g, [ord.order[0], ord.order[1], ord.order[2]]) {
        violations.push(Violation::InvalidStart);
    }
    for m in 0..n {
        if ord.prior_neighbors.get(m) != Some(&fresh.prior_neighbors[m]) {
            violations.push(Violation::PriorNeighborMismatch { position: m });
        }
        if m < 3 {
            continue;
        }
        match fresh.prior_neighbors[m].len() {
            0 => violations.push(Violation::NoPrior { position: m }),
            1 | 2 => {}
            count => violations.push(Violation::TooManyPrior { position: m, count }),
        }
    }
    Ok(OrderingCheck { valid: violations.is_empty(), violations })
}

fn is_induced_p3_or_k3(g: &Graph, vs: [usize; 3]) -> bool {
    let edges = [(0, 1), (1, 2), (0, 2)]
        .iter()
        .filter(|&&(i, j)| g.has_edge(vs[i], vs[j]))
        .count();
    edges >= 2
}

pub fn find_construction_ordering(g: &Graph, profile: &CactusProfile) -> Result<ConstructionOrdering> {
    let n = g.n();
    g.require_connected()?;
    if !profile.is_cactus {
        return Err(Error::NotCactus);
    }
    if n < 3 {
        return Err(Error::TooSmall { n, min: 3 });
    }
    let bd = block_decomposition(g)?;
    let starts = start_triples(g);

    let mut prefix = if n >= 6 { cdelta_prefix(g, &starts) } else { None };
    if prefix.is_none() {
        prefix = Some(starts[0].to_vec());
    }
    let order = grow(g, &bd, prefix.unwrap());
    ConstructionOrdering::from_order(g, order)
}

/// Start triples `(u, v, w)` with middle vertex `v`, most central `v` first,
/// ties broken by index.
fn start_triples(g: &Graph) -> Vec<[usize; 3]> {
    let n = g.n();
    let mut centres: Vec<(usize, usize)> = (0..n)
        .filter(|&v| g.degree(v) >= 2)
        .map(|v| (g.distances_from(v).into_iter().max().unwrap_or(0), v))
        .collect();
    centres.sort_unstable();
    let mut out = Vec::new();
    for (_, v) in centres {
        let nb: Vec<usize> = g.neighbors(v).iter().copied().collect();
        for (i, &u) in nb.iter().enumerate() {
            for &w in &nb[i + 1..] {
                out.push([u, v, w]);
            }
        }
    }
    out
}

/// Depth-first search for a five-vertex prefix whose 4th and 5th vertices
/// each have exactly one earlier neighbour.
fn cdelta_prefix(g: &Graph, starts: &[[usize; 3]]) -> Option<Vec<usize>> {
    let mut budget = PREFIX_SEARCH_BUDGET;
    for start in starts {
        let mut prefix = start.to_vec();
        if extend_prefix(g, &mut prefix, &mut budget) {
            return Some(prefix);
        }
        if budget == 0 {
            break;
        }
    }
    None
}

fn extend_prefix(g: &Graph, prefix: &mut Vec<usize>, budget: &mut usize) -> bool {
    if prefix.len() == 5 {
        return true;
    }
    if *budget == 0 {
        return false;
    }
    *budget -= 1;
    let placed: BTreeSet<usize> = prefix.iter().copied().collect();
    let candidates: BTreeSet<usize> = prefix
        .iter()
        .flat_map(|&p| g.neighbors(p).iter().copied())
        .filter(|w| !placed.contains(w))
        .collect();
    for c in candidates {
        let priors = g.neighbors(c).iter().filter(|w| placed.contains(w)).count();
        if priors != 1 {
            continue;
        }
        prefix.push(c);
        if extend_prefix(g, prefix, budget) {
            return true;
        }
        prefix.pop();
    }
    false
}

/// Completes a connected prefix by walking the block-cut structure: every
/// block touching a placed vertex is laid out from the placed part outwards,
/// cycles as a path whose last vertex closes the cycle.
fn grow(g: &Graph, bd: &BlockDecomposition, prefix: Vec<usize>) -> Vec<usize> {
    let n = g.n();
    let blocks_of = bd.blocks_of_vertex(n);
    let mut placed = vec![false; n];
    let mut order = Vec::with_capacity(n);
    for &v in &prefix {
        placed[v] = true;
        order.push(v);
    }
    let mut stack: Vec<usize> = prefix.iter().rev().copied().collect();
    while let Some(x) = stack.pop() {
        for &b in &blocks_of[x] {
            let block = &bd.blocks[b];
            let fresh = match block.kind {
                BlockKind::Edge => block
                    .vertices
                    .iter()
                    .copied()
                    .filter(|&v| !placed[v])
                    .collect(),
                BlockKind::Cycle => cycle_completion(block_cycle_order(g, &block.vertices), &placed),
                BlockKind::Dense => unreachable!("cactus blocks are edges or cycles"),
            };
            for &v in &fresh {
                placed[v] = true;
                order.push(v);
            }
            stack.extend(fresh.iter().rev());
        }
    }
    debug_assert_eq!(order.len(), n);
    order
}

/// Vertices of a cycle block in cyclic order, starting at the smallest.
fn block_cycle_order(g: &Graph, vertices: &[usize]) -> Vec<usize> {
    let members: BTreeSet<usize> = vertices.iter().copied().collect();
    let start = vertices[0];
    let mut cyc = vec![start];
    let mut prev = usize::MAX;
    let mut cur = start;
    loop {
        let next = g
            .neighbors(cur)
            .iter()
            .copied()
            .find(|&w| members.contains(&w) && w != prev && (cyc.len() > 1 || w != start))
            .expect("cycle block vertices have two block neighbours");
        if next == start {
            break;
        }
        cyc.push(next);
        prev = cur;
        cur = next;
        if cyc.len() == vertices.len() {
            break;
        }
    }
    cyc
}

/// Unplaced cycle vertices in the order that extends the placed arc from one
/// end until the walk reaches the other end.
fn cycle_completion(cyc: Vec<usize>, placed: &[bool]) -> Vec<usize> {
    let k = cyc.len();
    let Some(end) = (0..k).find(|&i| placed[cyc[i]] && !placed[cyc[(i + 1) % k]]) else {
        return Vec::new();
    };
    (1..k)
        .map(|s| cyc[(end + s) % k])
        .take_while(|&v| !placed[v])
        .collect()
}

/// δ-graph labeling check: the first three vertices induce `3K1` or
/// `K2 ⊔ K1`, and each later vertex at 1-based position `m` is non-adjacent
/// to at most `floor(m/2) - 1` earlier vertices.
pub fn validate_delta_graph(g: &Graph, order: &[usize]) -> Result<bool> {
    delta_preconditions(g)?;
    positions(g.n(), order)?;
    let first = [order[0], order[1], order[2]];
    if is_induced_p3_or_k3(g, first) {
        return Ok(false);
    }
    for m in 3..order.len() {
        let v = order[m];
        let misses = order[..m].iter().filter(|&&u| !g.has_edge(u, v)).count();
        // 1-based position m + 1 allows floor((m + 1) / 2) - 1 misses
        if misses > m.div_ceil(2) - 1 {
            return Ok(false);
        }
    }
    Ok(true)
}

/// C-δ labeling check: the order is a δ-graph labeling of the complement.
pub fn validate_cdelta_graph(g: &Graph, order: &[usize]) -> Result<bool> {
    delta_preconditions(g)?;
    validate_delta_graph(&g.complement(), order)
}

fn delta_preconditions(g: &Graph) -> Result<()> {
    let n = g.n();
    if n < 4 {
        return Err(Error::Precondition(format!("need at least 4 vertices, got {n}")));
    }
    if !g.is_connected() {
        return Err(Error::Precondition("graph is disconnected".into()));
    }
    if !g.complement().is_connected() {
        return Err(Error::Precondition("complement is disconnected".into()));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cactus::{generate_cactus, recognize_cactus};

    fn bowtie() -> Graph {
        Graph::from_edges(5, [(0, 1), (1, 2), (0, 2), (2, 3), (3, 4), (2, 4)]).unwrap()
    }

    fn order_of(g: &Graph) -> ConstructionOrdering {
        find_construction_ordering(g, &recognize_cactus(g).unwrap()).unwrap()
    }

    fn counts(o: &ConstructionOrdering) -> Vec<usize> {
        o.prior_neighbors.iter().map(Vec::len).collect()
    }

    #[test]
    fn c6_cyclic_labelling() {
        let c6 = Graph::cycle(6);
        let o = ConstructionOrdering::from_order(&c6, (0..6).collect()).unwrap();
        assert_eq!(&counts(&o)[3..], &[1, 1, 2]);
        assert!(validate_ordering(&c6, &o).unwrap().valid);
        let found = order_of(&c6);
        assert_eq!(&counts(&found)[3..], &[1, 1, 2]);
        assert!(validate_ordering(&c6, &found).unwrap().valid);
    }

    #[test]
    fn tree_orders_have_single_priors() {
        let t = Graph::from_edges(8, [(0, 1), (1, 2), (1, 3), (3, 4), (4, 5), (4, 6), (0, 7)]).unwrap();
        let o = order_of(&t);
        assert!(counts(&o)[3..].iter().all(|&c| c == 1));
        assert!(validate_ordering(&t, &o).unwrap().valid);
    }

    #[test]
    fn bowtie_ordering() {
        let g = bowtie();
        let o = order_of(&g);
        assert!(validate_ordering(&g, &o).unwrap().valid);
        assert_eq!(counts(&o)[3..].iter().filter(|&&c| c == 2).count(), 1);
        // the first triangle is the K3 start, so only the second closes later
        assert!(is_induced_p3_or_k3(&g, [o.order[0], o.order[1], o.order[2]]));
    }

    #[test]
    fn k4_rejected_by_validation() {
        let k4 = Graph::complete(4);
        let o = ConstructionOrdering::from_order(&k4, vec![0, 1, 2, 3]).unwrap();
        let check = validate_ordering(&k4, &o).unwrap();
        assert!(!check.valid);
        assert_eq!(check.violations, vec![Violation::TooManyPrior { position: 3, count: 3 }]);
    }

    #[test]
    fn malformed_orderings() {
        let g = Graph::cycle(4);
        assert!(matches!(
            ConstructionOrdering::from_order(&g, vec![0, 1, 1, 2]),
            Err(Error::MalformedOrdering(_))
        ));
        assert!(matches!(
            ConstructionOrdering::from_order(&g, vec![0, 1, 2]),
            Err(Error::MalformedOrdering(_))
        ));
        let c5 = Graph::cycle(5);
        let bad_start = ConstructionOrdering::from_order(&c5, vec![0, 2, 4, 1, 3]).unwrap();
        assert!(validate_ordering(&c5, &bad_start).unwrap().violations.contains(&Violation::InvalidStart));
        let mut tampered = ConstructionOrdering::from_order(&g, vec![0, 1, 2, 3]).unwrap();
        tampered.prior_neighbors[3] = vec![2];
        assert_eq!(
            validate_ordering(&g, &tampered).unwrap().violations,
            vec![Violation::PriorNeighborMismatch { position: 3 }]
        );
    }

    #[test]
    fn find_rejects_bad_input() {
        let k4 = Graph::complete(4);
        assert_eq!(
            find_construction_ordering(&k4, &recognize_cactus(&k4).unwrap()),
            Err(Error::NotCactus)
        );
        let p2 = Graph::path(2);
        assert_eq!(
            find_construction_ordering(&p2, &recognize_cactus(&p2).unwrap()),
            Err(Error::TooSmall { n: 2, min: 3 })
        );
    }

    #[test]
    fn json_round_trip() {
        let g = bowtie();
        let o = order_of(&g);
        assert_eq!(ConstructionOrdering::from_json(&g, &o.to_json()).unwrap(), o);
    }

    #[test]
    fn delta_examples() {
        let c6 = Graph::cycle(6);
        let prism = c6.complement();
        let cyclic: Vec<usize> = (0..6).collect();
        assert!(validate_delta_graph(&prism, &cyclic).unwrap());
        assert!(validate_cdelta_graph(&c6, &cyclic).unwrap());

        // a prism triangle as the first three vertices is never a δ-graph start
        assert!(!validate_delta_graph(&prism, &[0, 2, 4, 1, 3, 5]).unwrap());
    }

    #[test]
    fn c6_is_not_a_delta_graph() {
        let c6 = Graph::cycle(6);
        let mut perm: Vec<usize> = (0..6).collect();
        let mut any = false;
        permutations(&mut perm, 0, &mut |p| any |= validate_delta_graph(&c6, p).unwrap());
        assert!(!any);
    }

    fn permutations(p: &mut Vec<usize>, k: usize, f: &mut dyn FnMut(&[usize])) {
        if k == p.len() {
            f(p);
            return;
        }
        for i in k..p.len() {
            p.swap(k, i);
            permutations(p, k + 1, f);
            p.swap(k, i);
        }
    }

    #[test]
    fn delta_preconditions_are_distinct_errors() {
        assert!(matches!(validate_delta_graph(&Graph::path(3), &[0, 1, 2]), Err(Error::Precondition(_))));
        // a star's complement isolates the centre
        assert!(matches!(
            validate_cdelta_graph(&Graph::star(4), &[0, 1, 2, 3, 4]),
            Err(Error::Precondition(_))
        ));
        assert!(matches!(
            validate_delta_graph(&Graph::path(4), &[0, 1, 2]),
            Err(Error::MalformedOrdering(_))
        ));
    }

    fn cdelta_direct(g: &Graph, order: &[usize]) -> bool {
        if !is_induced_p3_or_k3(g, [order[0], order[1], order[2]]) {
            return false;
        }
        (3..order.len()).all(|m| {
            let hits = order[..m].iter().filter(|&&u| g.has_edge(u, order[m])).count();
            // hits <= floor((m + 1) / 2) - 1, written without division
            2 * (hits + 1) <= m + 1
        })
    }

    #[test]
    fn cdelta_duality_and_cactus_orders() {
        for seed in 0..200 {
            let n = 6 + (seed as usize % 12);
            let cycles = seed as usize % ((n - 1) / 2 + 1);
            let g = generate_cactus(n, cycles, seed).unwrap();
            if !g.complement().is_connected() {
                continue;
            }
            let o = order_of(&g);
            let direct = cdelta_direct(&g, &o.order);
            assert_eq!(validate_cdelta_graph(&g, &o.order).unwrap(), direct);
            assert_eq!(validate_delta_graph(&g.complement(), &o.order).unwrap(), direct);
            assert!(direct, "seed {seed}: {:?} on {:?}", o.order, crate::format::to_json(&g));
        }
    }
}
