//! Exact orthogonal representations of the complement of a graph.
//!
//! Vertices are processed along a [`ConstructionOrdering`]. The vector of the
//! vertex at position `m` must be orthogonal to the vectors of its earlier
//! neighbours in `G` (non-edges of the complement) and have a nonzero inner
//! product with every other earlier vector (edges of the complement). With at
//! most two orthogonality constraints the admissible vectors form a subspace
//! of dimension at least `d - 2`, and the nonzero and independence conditions
//! only exclude finitely many proper subspaces of it. A random integer
//! combination of an exact nullspace basis is therefore admissible with
//! probability one; each candidate is checked exactly and redrawn on failure.

use log::warn;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::cactus::{recognize_cactus, CactusClass};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::linalg::Vector;
use crate::ordering::{find_construction_ordering, ConstructionOrdering};
use crate::scalar::{rational_from_str, rational_to_string, ExactScalar, Scalar};
use crate::Rational;

pub const MAX_DIM: usize = 16;
pub const MAX_ATTEMPTS: usize = 64;
const INITIAL_RANGE: i64 = 8;
const MAX_RANGE: i64 = 1 << 40;
// Draws spent trying to get every coordinate nonzero before settling for
// any admissible vector.
const NONZERO_COORD_ATTEMPTS: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DimPolicy {
    /// 3 for trees, 4 for unicyclic graphs, 5 otherwise; falls back to 5.
    Auto,
    Fixed(usize),
}

impl DimPolicy {
    pub fn auto_dim(class: CactusClass) -> usize {
        match class {
            CactusClass::Tree => 3,
            CactusClass::Unicyclic => 4,
            CactusClass::Multicyclic => 5,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OrthoRepresentation<T> {
    /// Graph whose edges are exactly the nonzero inner products.
    pub target: Graph,
    pub dim: usize,
    /// One vector per vertex, indexed by vertex.
    pub vectors: Vec<Vector<T>>,
    pub ordering: Vec<usize>,
    /// Dimension first attempted when the build fell back to a larger one.
    pub fallback_from: Option<usize>,
}

impl<T: Scalar> OrthoRepresentation<T> {
    /// Vectors in construction order.
    pub fn ordered_vectors(&self) -> Vec<Vector<T>> {
        self.ordering.iter().map(|&v| self.vectors[v].clone()).collect()
    }

    pub fn to_f64(&self) -> OrthoRepresentation<f64> {
        OrthoRepresentation {
            target: self.target.clone(),
            dim: self.dim,
            vectors: self.vectors.iter().map(|v| v.map(Scalar::to_f64_lossy)).collect(),
            ordering: self.ordering.clone(),
            fallback_from: self.fallback_from,
        }
    }
}

/// Incremental builder; position `m` may be filled once positions `< m` are.
pub struct RepresentationBuilder<'g, T, R> {
    g: &'g Graph,
    ordering: ConstructionOrdering,
    dim: usize,
    rng: R,
    placed: Vec<Vector<T>>,
}

impl<'g, T: ExactScalar, R: Rng> RepresentationBuilder<'g, T, R> {
    pub fn new(g: &'g Graph, ordering: ConstructionOrdering, dim: usize, rng: R) -> Result<Self> {
        if dim == 0 || dim > MAX_DIM {
            return Err(Error::UnsupportedDimension(dim));
        }
        if ordering.len() != g.n() {
            return Err(Error::MalformedOrdering(format!(
                "ordering covers {} of {} vertices",
                ordering.len(),
                g.n()
            )));
        }
        Ok(RepresentationBuilder { g, ordering, dim, rng, placed: Vec::with_capacity(g.n()) })
    }

    /// Vectors assigned so far, in construction order.
    pub fn placed(&self) -> &[Vector<T>] {
        &self.placed
    }

    pub fn ordering(&self) -> &ConstructionOrdering {
        &self.ordering
    }

    /// Assigns the first three positions.
    pub fn base_vectors(&mut self) -> Result<[Vector<T>; 3]> {
        if self.g.n() < 3 || !self.placed.is_empty() {
            return Err(Error::Precondition(
                "base vectors need three unassigned positions".into(),
            ));
        }
        let o = &self.ordering.order;
        let edges = [(0, 1), (1, 2), (0, 2)]
            .iter()
            .filter(|&&(i, j)| self.g.has_edge(o[i], o[j]))
            .count();
        if edges < 2 {
            return Err(Error::InvalidStart);
        }
        if self.dim < 3 {
            return Err(Error::UnsupportedDimension(self.dim));
        }
        let a = self.step()?;
        let b = self.step()?;
        let c = self.step()?;
        Ok([a, b, c])
    }

    /// Assigns the next position and returns its vector.
    pub fn step(&mut self) -> Result<Vector<T>> {
        let m = self.placed.len();
        if m >= self.g.n() {
            return Err(Error::Precondition("every position is already assigned".into()));
        }
        let neighbors = &self.ordering.prior_neighbors[m];
        let w = extend_vector(&self.placed, neighbors, self.dim, m, &mut self.rng)?;
        self.placed.push(w.clone());
        Ok(w)
    }

    pub fn finish(mut self) -> Result<OrthoRepresentation<T>> {
        while self.placed.len() < self.g.n() {
            self.step()?;
        }
        let n = self.g.n();
        let mut vectors = vec![Vector::zeros(self.dim); n];
        for (m, v) in self.placed.into_iter().enumerate() {
            vectors[self.ordering.order[m]] = v;
        }
        Ok(OrthoRepresentation {
            target: self.g.complement(),
            dim: self.dim,
            vectors,
            ordering: self.ordering.order,
            fallback_from: None,
        })
    }
}

/// Draws a vector for `position` orthogonal to `placed[p]` for every `p` in
/// `neighbors`, with a nonzero inner product against every other placed
/// vector, and parallel to none of them.
pub fn extend_vector<T: ExactScalar, R: Rng>(
    placed: &[Vector<T>],
    neighbors: &[usize],
    dim: usize,
    position: usize,
    rng: &mut R,
) -> Result<Vector<T>> {
    let constraints: Vec<Vector<T>> = neighbors.iter().map(|&p| placed[p].clone()).collect();
    let basis = T::kernel_basis(&constraints, dim);
    let exhausted = || Error::RetryExhausted {
        position,
        attempts: MAX_ATTEMPTS,
        constraints: neighbors.len(),
        dim,
    };
    if basis.is_empty() {
        return Err(exhausted());
    }
    let mut is_neighbor = vec![false; placed.len()];
    for &p in neighbors {
        is_neighbor[p] = true;
    }

    let mut range = INITIAL_RANGE;
    let mut fallback = None;
    for attempt in 0..MAX_ATTEMPTS {
        let w = basis.iter().fold(Vector::zeros(dim), |acc, b| {
            let c = T::from_int(rng.gen_range(-range..=range));
            acc.add(&b.scale(&c))
        });
        let w = T::normalize(w);
        if admissible(&w, placed, &is_neighbor) {
            if w.all_coords_nonzero() {
                return Ok(w);
            }
            fallback.get_or_insert(w);
            if attempt + 1 >= NONZERO_COORD_ATTEMPTS {
                return Ok(fallback.unwrap());
            }
        }
        range = (range * 2).min(MAX_RANGE);
    }
    fallback.ok_or_else(exhausted)
}

fn admissible<T: Scalar>(w: &Vector<T>, placed: &[Vector<T>], is_neighbor: &[bool]) -> bool {
    if w.is_zero() {
        return false;
    }
    placed.iter().zip(is_neighbor).all(|(q, &nb)| {
        let ip = w.dot(q);
        if nb {
            ip.is_negligible()
        } else {
            !ip.is_negligible() && !w.is_parallel(q)
        }
    })
}

/// Builds a representation of `complement(g)` along `ordering` in exactly
/// `dim` dimensions.
pub fn build_with_ordering<T: ExactScalar>(
    g: &Graph,
    ordering: ConstructionOrdering,
    dim: usize,
    seed: u64,
) -> Result<OrthoRepresentation<T>> {
    let rng = ChaCha8Rng::seed_from_u64(seed);
    RepresentationBuilder::new(g, ordering, dim, rng)?.finish()
}

/// Ordering used by the builder: a construction ordering when `n >= 3`, the
/// identity otherwise.
pub fn default_ordering(g: &Graph) -> Result<ConstructionOrdering> {
    if g.n() < 3 {
        g.require_connected()?;
        return ConstructionOrdering::from_order(g, (0..g.n()).collect());
    }
    let profile = recognize_cactus(g)?;
    find_construction_ordering(g, &profile)
}

/// Orthogonal representation of the complement of a connected cactus.
///
/// Under [`DimPolicy::Auto`] a failed low-dimensional build is retried in
/// dimension 5 and the result records `fallback_from`.
pub fn build_representation(g: &Graph, policy: DimPolicy, seed: u64) -> Result<OrthoRepresentation<Rational>> {
    let ordering = default_ordering(g)?;
    match policy {
        DimPolicy::Fixed(d) => build_with_ordering(g, ordering, d, seed),
        DimPolicy::Auto => {
            let class = recognize_cactus(g)?.class;
            let d = DimPolicy::auto_dim(class);
            match build_with_ordering(g, ordering.clone(), d, seed) {
                Ok(rep) => Ok(rep),
                Err(e @ Error::RetryExhausted { .. }) if d < 5 => {
                    warn!("dimension {d} build failed ({e}); falling back to dimension 5");
                    let mut rep = build_with_ordering(g, ordering, 5, seed)?;
                    rep.fallback_from = Some(d);
                    Ok(rep)
                }
                Err(e) => Err(e),
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RepresentationJson {
    pub dim: usize,
    pub vectors: Vec<Vec<String>>,
    pub ordering: Vec<usize>,
}

impl From<&OrthoRepresentation<Rational>> for RepresentationJson {
    fn from(rep: &OrthoRepresentation<Rational>) -> Self {
        RepresentationJson {
            dim: rep.dim,
            vectors: rep
                .vectors
                .iter()
                .map(|v| v.coords().iter().map(rational_to_string).collect())
                .collect(),
            ordering: rep.ordering.clone(),
        }
    }
}

impl RepresentationJson {
    /// Rebuilds a representation of `complement(g)`.
    pub fn into_representation(self, g: &Graph) -> Result<OrthoRepresentation<Rational>> {
        if self.vectors.len() != g.n() {
            return Err(Error::DimensionMismatch { expected: g.n(), got: self.vectors.len() });
        }
        let mut vectors = Vec::with_capacity(self.vectors.len());
        for coords in &self.vectors {
            if coords.len() != self.dim {
                return Err(Error::DimensionMismatch { expected: self.dim, got: coords.len() });
            }
            let v = coords
                .iter()
                .map(|s| {
                    rational_from_str(s)
                        .ok_or_else(|| Error::InvalidRepresentation(format!("bad rational {s:?}")))
                })
                .collect::<Result<Vec<_>>>()?;
            vectors.push(Vector(v));
        }
        ConstructionOrdering::from_order(g, self.ordering.clone())?;
        Ok(OrthoRepresentation {
            target: g.complement(),
            dim: self.dim,
            vectors,
            ordering: self.ordering,
            fallback_from: None,
        })
    }
}

pub fn representation_to_json(rep: &OrthoRepresentation<Rational>) -> String {
    serde_json::to_string(&RepresentationJson::from(rep)).expect("representation serializes")
}

pub fn representation_from_json(g: &Graph, text: &str) -> Result<OrthoRepresentation<Rational>> {
    let j: RepresentationJson = serde_json::from_str(text)
        .map_err(|e| Error::InvalidRepresentation(e.to_string()))?;
    j.into_representation(g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::Ratio;
    use num_traits::Zero;

    fn bowtie() -> Graph {
        Graph::from_edges(5, [(0, 1), (1, 2), (0, 2), (2, 3), (3, 4), (2, 4)]).unwrap()
    }

    // Inner-product pattern checked directly, independent of cert_engine.
    fn pattern_holds<T: Scalar>(rep: &OrthoRepresentation<T>) -> bool {
        let n = rep.vectors.len();
        (0..n).all(|i| {
            (i + 1..n).all(|j| {
                let nz = !rep.vectors[i].dot(&rep.vectors[j]).is_negligible();
                nz == rep.target.has_edge(i, j) && !rep.vectors[i].is_parallel(&rep.vectors[j])
            })
        })
    }

    #[test]
    fn k3_start_is_mutually_orthogonal() {
        let g = Graph::complete(3);
        let ord = ConstructionOrdering::from_order(&g, vec![0, 1, 2]).unwrap();
        let mut b = RepresentationBuilder::<Rational, _>::new(&g, ord, 3, ChaCha8Rng::seed_from_u64(1)).unwrap();
        let [x, y, z] = b.base_vectors().unwrap();
        assert!(x.dot(&y).is_zero() && y.dot(&z).is_zero() && x.dot(&z).is_zero());
        assert!(x.all_coords_nonzero() && y.all_coords_nonzero());
    }

    #[test]
    fn p3_start_has_one_nonzero_product() {
        let g = Graph::path(3);
        let ord = ConstructionOrdering::from_order(&g, vec![0, 1, 2]).unwrap();
        let mut b = RepresentationBuilder::<Rational, _>::new(&g, ord, 5, ChaCha8Rng::seed_from_u64(2)).unwrap();
        let [x, y, z] = b.base_vectors().unwrap();
        let nonzero = [x.dot(&y), y.dot(&z), x.dot(&z)].iter().filter(|p| !p.is_zero()).count();
        assert_eq!(nonzero, 1);
        assert!(!x.dot(&z).is_zero());
        for v in [&x, &y, &z] {
            assert!(v.all_coords_nonzero());
        }
    }

    #[test]
    fn invalid_start_rejected() {
        let g = Graph::cycle(5);
        let ord = ConstructionOrdering::from_order(&g, vec![0, 2, 4, 1, 3]).unwrap();
        let mut b = RepresentationBuilder::<Rational, _>::new(&g, ord, 5, ChaCha8Rng::seed_from_u64(0)).unwrap();
        assert_eq!(b.base_vectors().unwrap_err(), Error::InvalidStart);
    }

    #[test]
    fn unconstrained_extension_is_generic() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let placed: Vec<Vector<Rational>> = (0..4)
            .map(|_| extend_vector(&[], &[], 5, 0, &mut rng).unwrap())
            .collect();
        let w = extend_vector(&placed, &[], 5, 4, &mut rng).unwrap();
        assert!(placed.iter().all(|p| !w.dot(p).is_zero()));
    }

    #[test]
    fn two_constraint_extension() {
        let g = Graph::cycle(6);
        let ord = ConstructionOrdering::from_order(&g, (0..6).collect()).unwrap();
        let mut b = RepresentationBuilder::<Rational, _>::new(&g, ord, 5, ChaCha8Rng::seed_from_u64(9)).unwrap();
        for _ in 0..5 {
            b.step().unwrap();
        }
        let w = b.step().unwrap();
        let p = b.placed();
        assert!(w.dot(&p[0]).is_zero() && w.dot(&p[4]).is_zero());
        assert!((1..4).all(|i| !w.dot(&p[i]).is_zero()));
    }

    #[test]
    fn c6_gives_prism_pattern() {
        let rep = build_representation(&Graph::cycle(6), DimPolicy::Fixed(5), 1).unwrap();
        assert!(pattern_holds(&rep));
        assert_eq!(rep.target.edge_count(), 9);
    }

    #[test]
    fn path_in_three_dimensions() {
        let rep = build_representation(&Graph::path(4), DimPolicy::Fixed(3), 4).unwrap();
        assert!(pattern_holds(&rep));
        assert_eq!(rep.dim, 3);
    }

    #[test]
    fn auto_dimension_by_class() {
        let t = Graph::star(6);
        assert_eq!(build_representation(&t, DimPolicy::Auto, 0).unwrap().dim, 3);
        let u = Graph::cycle(7);
        assert_eq!(build_representation(&u, DimPolicy::Auto, 0).unwrap().dim, 4);
        let rep = build_representation(&bowtie(), DimPolicy::Auto, 0).unwrap();
        assert_eq!(rep.dim, 5);
        assert!(pattern_holds(&rep));
    }

    #[test]
    fn tiny_graphs() {
        let rep = build_representation(&Graph::empty(1), DimPolicy::Auto, 0).unwrap();
        assert!(!rep.vectors[0].is_zero());
        let rep = build_representation(&Graph::path(2), DimPolicy::Fixed(2), 0).unwrap();
        assert!(rep.vectors[0].dot(&rep.vectors[1]).is_zero());
        assert!(matches!(
            build_representation(&Graph::path(2), DimPolicy::Fixed(1), 0),
            Err(Error::RetryExhausted { position: 1, .. })
        ));
    }

    #[test]
    fn unsupported_dimension() {
        assert_eq!(
            build_representation(&Graph::path(4), DimPolicy::Fixed(17), 0).unwrap_err(),
            Error::UnsupportedDimension(17)
        );
    }

    #[test]
    fn seeded_builds_are_deterministic() {
        let g = bowtie();
        assert_eq!(
            build_representation(&g, DimPolicy::Fixed(5), 42).unwrap(),
            build_representation(&g, DimPolicy::Fixed(5), 42).unwrap()
        );
    }

    #[test]
    fn small_exact_field_also_works() {
        let g = Graph::cycle(5);
        let ord = default_ordering(&g).unwrap();
        let rep = build_with_ordering::<Ratio<i128>>(&g, ord, 5, 3).unwrap();
        assert!(pattern_holds(&rep));
    }

    #[test]
    fn json_round_trip() {
        let g = bowtie();
        let rep = build_representation(&g, DimPolicy::Fixed(5), 3).unwrap();
        let back = representation_from_json(&g, &representation_to_json(&rep)).unwrap();
        assert_eq!(back, rep);
        assert!(matches!(
            representation_from_json(&Graph::path(3), &representation_to_json(&rep)),
            Err(Error::DimensionMismatch { .. })
        ));
    }
}
