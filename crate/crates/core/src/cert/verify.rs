//! Independent check of an orthogonal representation against a graph.
//!
//! Nothing here trusts the builder: inner products, rank and pairwise
//! independence are recomputed from the vectors alone.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::linalg::{determinant, gram_matrix, rank, Vector};
use crate::ortho::OrthoRepresentation;
use crate::scalar::Scalar;

/// Principal minors up to this order are checked when `n` is small.
pub const PSD_MINOR_ORDER: usize = 4;
const PSD_FULL_CHECK_MAX_N: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PsdWitness {
    /// The Gram matrix is `MᵀM` for the vector matrix `M`, so it is psd by
    /// construction; the minors below are a redundant numeric check.
    pub construction: String,
    pub max_minor_order: usize,
    pub minors_checked: usize,
    pub minors_nonnegative: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GramCertificate {
    pub pattern_ok: bool,
    /// Rank of the vector matrix, equal to the rank of the Gram matrix.
    pub rank: usize,
    pub dim: usize,
    pub psd_witness: PsdWitness,
    /// Vertex pairs whose inner product disagrees with the expected graph.
    pub mismatches: Vec<(usize, usize)>,
    pub pairwise_independent: bool,
}

/// Checks that `rep.vectors[i]·rep.vectors[j] != 0` exactly when `ij` is an
/// edge of `expected`.
pub fn verify_representation<T: Scalar + PartialOrd>(
    rep: &OrthoRepresentation<T>,
    expected: &Graph,
) -> Result<GramCertificate> {
    verify_vectors(&rep.vectors, rep.dim, expected)
}

pub fn verify_vectors<T: Scalar + PartialOrd>(
    vectors: &[Vector<T>],
    dim: usize,
    expected: &Graph,
) -> Result<GramCertificate> {
    let n = expected.n();
    if vectors.len() != n {
        return Err(Error::DimensionMismatch { expected: n, got: vectors.len() });
    }
    if let Some(v) = vectors.iter().find(|v| v.dim() != dim) {
        return Err(Error::DimensionMismatch { expected: dim, got: v.dim() });
    }
    let gram = gram_matrix(vectors);
    let directions: Vec<Option<Vector<T>>> = vectors.iter().map(Vector::direction).collect();
    let parallel = |i: usize, j: usize| match (&directions[i], &directions[j]) {
        (Some(a), Some(b)) => a.coords().iter().zip(b.coords()).all(|(x, y)| (x.clone() - y.clone()).is_negligible()),
        _ => true,
    };
    let mut mismatches = Vec::new();
    let mut pairwise_independent = true;
    for i in 0..n {
        for j in i + 1..n {
            if gram[i][j].is_negligible() == expected.has_edge(i, j) {
                mismatches.push((i, j));
            }
            if parallel(i, j) {
                pairwise_independent = false;
            }
        }
    }
    let order = if n <= PSD_FULL_CHECK_MAX_N { PSD_MINOR_ORDER } else { 2 };
    let (checked, nonneg) = principal_minors_nonnegative(&gram, order);
    Ok(GramCertificate {
        pattern_ok: mismatches.is_empty(),
        rank: rank(vectors),
        dim,
        psd_witness: PsdWitness {
            construction: "gram matrix of the representation vectors".into(),
            max_minor_order: order.min(n),
            minors_checked: checked,
            minors_nonnegative: nonneg,
        },
        mismatches,
        pairwise_independent,
    })
}

/// Evaluates every principal minor of order at most `max_order`; returns how
/// many were evaluated and whether all were nonnegative.
pub fn principal_minors_nonnegative<T: Scalar + PartialOrd>(m: &[Vec<T>], max_order: usize) -> (usize, bool) {
    let n = m.len();
    let mut checked = 0;
    let mut ok = true;
    let mut subset = Vec::with_capacity(max_order);
    fn rec<T: Scalar + PartialOrd>(
        m: &[Vec<T>],
        start: usize,
        max_order: usize,
        subset: &mut Vec<usize>,
        checked: &mut usize,
        ok: &mut bool,
    ) {
        for i in start..m.len() {
            subset.push(i);
            let d = match subset[..] {
                [a] => m[a][a].clone(),
                [a, b] => m[a][a].clone() * m[b][b].clone() - m[a][b].clone() * m[b][a].clone(),
                _ => {
                    let minor: Vec<Vec<T>> = subset
                        .iter()
                        .map(|&r| subset.iter().map(|&c| m[r][c].clone()).collect())
                        .collect();
                    determinant(&minor)
                }
            };
            *checked += 1;
            if !(d.is_negligible() || d > T::zero()) {
                *ok = false;
            }
            if subset.len() < max_order {
                rec(m, i + 1, max_order, subset, checked, ok);
            }
            subset.pop();
        }
    }
    if n > 0 && max_order > 0 {
        rec(m, 0, max_order, &mut subset, &mut checked, &mut ok);
    }
    (checked, ok)
}
