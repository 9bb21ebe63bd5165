//! Cactus recognition, random cactus generation and tree cover numbers.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{block_decomposition, BlockKind, Graph};

pub const CYCLE_ORACLE_LIMIT: usize = 12;
pub const TREE_COVER_ORACLE_LIMIT: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CactusClass {
    Tree,
    Unicyclic,
    Multicyclic,
}

impl CactusClass {
    pub fn from_cycle_count(c: usize) -> Self {
        match c {
            0 => CactusClass::Tree,
            1 => CactusClass::Unicyclic,
            _ => CactusClass::Multicyclic,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CactusProfile {
    pub is_cactus: bool,
    pub cycle_count: usize,
    pub class: CactusClass,
}

/// A connected graph is a cactus iff each of its blocks is a bridge or a
/// chordless cycle.
pub fn recognize_cactus(g: &Graph) -> Result<CactusProfile> {
    let bd = block_decomposition(g)?;
    let is_cactus = bd.blocks.iter().all(|b| b.kind != BlockKind::Dense);
    let cycle_count = bd.blocks.iter().filter(|b| b.kind == BlockKind::Cycle).count();
    Ok(CactusProfile {
        is_cactus,
        cycle_count,
        class: CactusClass::from_cycle_count(cycle_count),
    })
}

/// Exhaustive check of the defining property: every edge lies on at most
/// one simple cycle. Enumerates simple cycles explicitly and stops at the
/// first edge seen twice.
pub fn cactus_oracle(g: &Graph) -> Result<bool> {
    let n = g.n();
    if n > CYCLE_ORACLE_LIMIT {
        return Err(Error::SizeLimit { what: "cycle oracle", limit: CYCLE_ORACLE_LIMIT, n });
    }
    g.require_connected()?;
    let mut uses = vec![vec![0u8; n]; n];
    let mut path = Vec::with_capacity(n);
    let mut on_path = vec![false; n];
    for s in 0..n {
        path.clear();
        path.push(s);
        on_path[s] = true;
        let ok = extend_cycles(g, s, &mut path, &mut on_path, &mut uses);
        on_path[s] = false;
        if !ok {
            return Ok(false);
        }
    }
    Ok(true)
}

// Cycles are rooted at their smallest vertex `s` and oriented so the second
// vertex is smaller than the last, so each is visited once.
fn extend_cycles(
    g: &Graph,
    s: usize,
    path: &mut Vec<usize>,
    on_path: &mut [bool],
    uses: &mut [Vec<u8>],
) -> bool {
    let u = *path.last().unwrap();
    for &w in g.neighbors(u) {
        if w == s && path.len() >= 3 && path[1] < u {
            for i in 0..path.len() {
                let (a, b) = (path[i], path[(i + 1) % path.len()]);
                uses[a][b] += 1;
                uses[b][a] += 1;
                if uses[a][b] > 1 {
                    return false;
                }
            }
        } else if w > s && !on_path[w] {
            on_path[w] = true;
            path.push(w);
            let ok = extend_cycles(g, s, path, on_path, uses);
            path.pop();
            on_path[w] = false;
            if !ok {
                return false;
            }
        }
    }
    true
}

/// Random connected cactus on `n` vertices with exactly `cycles` cycles,
/// built by gluing bridges and cycles onto random existing vertices and then
/// relabelling at random.
pub fn generate_cactus(n: usize, cycles: usize, seed: u64) -> Result<Graph> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    generate_cactus_with(n, cycles, &mut rng)
}

pub fn generate_cactus_with<R: Rng>(n: usize, cycles: usize, rng: &mut R) -> Result<Graph> {
    if n == 0 {
        return Err(Error::Infeasible("a cactus needs at least one vertex".into()));
    }
    let max_cycles = (n - 1) / 2;
    if cycles > max_cycles {
        return Err(Error::Infeasible(format!(
            "a cactus on {n} vertices has at most {max_cycles} cycles, {cycles} requested"
        )));
    }
    // Each cycle contributes (length - 1) >= 2 new vertices, each bridge one.
    let spare = n - 1 - 2 * cycles;
    let bridges = if cycles == 0 { spare } else { rng.gen_range(0..=spare) };
    let mut lengths = vec![3usize; cycles];
    for _ in 0..spare - bridges {
        let i = rng.gen_range(0..cycles);
        lengths[i] += 1;
    }
    let mut pieces: Vec<usize> = lengths;
    pieces.extend(std::iter::repeat_n(2, bridges));
    pieces.shuffle(rng);

    let mut edges = Vec::with_capacity(n - 1 + cycles);
    let mut placed = 1;
    for len in pieces {
        let anchor = rng.gen_range(0..placed);
        let mut prev = anchor;
        for _ in 1..len {
            edges.push((prev, placed));
            prev = placed;
            placed += 1;
        }
        if len >= 3 {
            edges.push((prev, anchor));
        }
    }
    debug_assert_eq!(placed, n);

    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(rng);
    Graph::from_edges(n, edges.into_iter().map(|(u, v)| (perm[u], perm[v])))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TreeCoverBounds {
    pub lower: usize,
    pub upper: usize,
    pub exact: Option<usize>,
}

/// Bounds on the tree cover number from the cactus class alone. Removing one
/// vertex from every cycle leaves a forest, and the removed singletons plus
/// the forest components form an induced tree cover, so for cacti the
/// upper bound is `cycle_count + 1`.
pub fn tree_cover_bounds(profile: &CactusProfile) -> Result<TreeCoverBounds> {
    if !profile.is_cactus {
        return Err(Error::NotCactus);
    }
    Ok(match profile.class {
        CactusClass::Tree => TreeCoverBounds { lower: 1, upper: 1, exact: Some(1) },
        CactusClass::Unicyclic => TreeCoverBounds { lower: 2, upper: 2, exact: Some(2) },
        CactusClass::Multicyclic => TreeCoverBounds {
            lower: 3,
            upper: profile.cycle_count + 1,
            exact: None,
        },
    })
}

impl TreeCoverBounds {
    pub fn with_oracle(mut self, cover: &TreeCover) -> Self {
        self.exact = Some(cover.value);
        self
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TreeCover {
    pub parts: Vec<Vec<usize>>,
    pub value: usize,
}

/// Minimum partition of the vertices into sets each inducing a tree,
/// by exhaustive search over set partitions with an increasing part count.
pub fn tree_cover_oracle(g: &Graph) -> Result<TreeCover> {
    let n = g.n();
    if n > TREE_COVER_ORACLE_LIMIT {
        return Err(Error::SizeLimit {
            what: "tree cover oracle",
            limit: TREE_COVER_ORACLE_LIMIT,
            n,
        });
    }
    if n == 0 {
        return Ok(TreeCover { parts: vec![], value: 0 });
    }
    let adj: Vec<u32> = (0..n)
        .map(|v| g.neighbors(v).iter().fold(0u32, |m, &w| m | (1 << w)))
        .collect();
    for k in 1..=n {
        let mut parts = Vec::with_capacity(k);
        if search_partition(&adj, 0, k, &mut parts) {
            let parts: Vec<Vec<usize>> = parts
                .iter()
                .map(|&m: &u32| (0..n).filter(|&v| m & (1 << v) != 0).collect())
                .collect();
            return Ok(TreeCover { value: parts.len(), parts });
        }
    }
    unreachable!("singletons always form a tree cover")
}

fn search_partition(adj: &[u32], v: usize, k: usize, parts: &mut Vec<u32>) -> bool {
    let n = adj.len();
    if v == n {
        return parts.iter().all(|&m| induces_tree(adj, m));
    }
    for i in 0..parts.len() {
        let grown = parts[i] | (1 << v);
        if induces_forest(adj, grown) {
            parts[i] = grown;
            if search_partition(adj, v + 1, k, parts) {
                return true;
            }
            parts[i] &= !(1 << v);
        }
    }
    if parts.len() < k {
        parts.push(1 << v);
        if search_partition(adj, v + 1, k, parts) {
            return true;
        }
        parts.pop();
    }
    false
}

fn mask_components(adj: &[u32], mask: u32) -> (u32, u32) {
    let mut seen = 0u32;
    let mut comps = 0;
    let mut edges2 = 0;
    let mut rest = mask;
    while rest != 0 {
        let s = rest.trailing_zeros();
        let mut frontier = 1u32 << s;
        seen |= frontier;
        while frontier != 0 {
            let v = frontier.trailing_zeros() as usize;
            frontier &= frontier - 1;
            let nb = adj[v] & mask;
            edges2 += nb.count_ones();
            let new = nb & !seen;
            seen |= new;
            frontier |= new;
        }
        comps += 1;
        rest = mask & !seen;
    }
    (comps, edges2 / 2)
}

fn induces_forest(adj: &[u32], mask: u32) -> bool {
    let (comps, edges) = mask_components(adj, mask);
    edges + comps == mask.count_ones()
}

fn induces_tree(adj: &[u32], mask: u32) -> bool {
    let (comps, edges) = mask_components(adj, mask);
    comps == 1 && edges + 1 == mask.count_ones()
}

/// True when every part is nonempty, the parts partition the vertex set and
/// each induces a tree.
pub fn is_tree_cover(g: &Graph, cover: &TreeCover) -> bool {
    let n = g.n();
    let mut seen = vec![false; n];
    for part in &cover.parts {
        if part.is_empty() {
            return false;
        }
        for &v in part {
            if v >= n || seen[v] {
                return false;
            }
            seen[v] = true;
        }
        match g.induced_subgraph(part) {
            Ok(h) if h.is_tree() => {}
            _ => return false,
        }
    }
    seen.iter().all(|&s| s) && cover.value == cover.parts.len()
}
