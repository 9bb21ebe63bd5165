//! Dense linear algebra over a generic [`Scalar`]: inner products, rank,
//! nullspaces and determinants by Gaussian elimination.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Vector<T>(pub Vec<T>);

impl<T: Scalar> Vector<T> {
    pub fn zeros(dim: usize) -> Self {
        Vector(vec![T::zero(); dim])
    }

    pub fn basis(dim: usize, k: usize) -> Self {
        let mut v = Self::zeros(dim);
        v.0[k] = T::one();
        v
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[T] {
        &self.0
    }

    pub fn dot(&self, other: &Self) -> T {
        debug_assert_eq!(self.dim(), other.dim());
        self.0
            .iter()
            .zip(&other.0)
            .fold(T::zero(), |acc, (a, b)| acc + a.clone() * b.clone())
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Scalar::is_negligible)
    }

    pub fn all_coords_nonzero(&self) -> bool {
        self.0.iter().all(|c| !c.is_negligible())
    }

    pub fn scale(&self, k: &T) -> Self {
        Vector(self.0.iter().map(|c| c.clone() * k.clone()).collect())
    }

    pub fn add(&self, other: &Self) -> Self {
        Vector(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| a.clone() + b.clone())
                .collect(),
        )
    }

    /// True when one vector is a scalar multiple of the other (including the
    /// case where either is zero).
    pub fn is_parallel(&self, other: &Self) -> bool {
        let d = self.dim();
        for i in 0..d {
            for j in i + 1..d {
                let minor = self.0[i].clone() * other.0[j].clone()
                    - self.0[j].clone() * other.0[i].clone();
                if !minor.is_negligible() {
                    return false;
                }
            }
        }
        true
    }

    /// Scaled so the first non-negligible coordinate is 1; `None` for the
    /// zero vector. Two nonzero vectors are parallel iff their directions
    /// agree.
    pub fn direction(&self) -> Option<Self> {
        let lead = self.0.iter().find(|x| !x.is_negligible())?;
        let inv = T::one() / lead.clone();
        Some(self.scale(&inv))
    }

    pub fn map<U, F: Fn(&T) -> U>(&self, f: F) -> Vector<U> {
        Vector(self.0.iter().map(f).collect())
    }
}

impl Vector<BigRational> {
    /// Rescales to a primitive integer vector (coprime integer coordinates,
    /// first nonzero coordinate positive). Zero patterns of inner products
    /// are unchanged.
    pub fn to_primitive_integer(&self) -> Self {
        let lcm = self
            .0
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let ints: Vec<BigInt> = self
            .0
            .iter()
            .map(|c| (c * BigRational::from_integer(lcm.clone())).to_integer())
            .collect();
        let gcd = ints.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
        if gcd.is_zero() {
            return self.clone();
        }
        let sign = match ints.iter().find(|c| !c.is_zero()) {
            Some(c) if c.is_negative() => -BigInt::one(),
            _ => BigInt::one(),
        };
        Vector(
            ints.into_iter()
                .map(|c| BigRational::from_integer(c / &gcd * &sign))
                .collect(),
        )
    }

    pub fn max_bits(&self) -> u64 {
        self.0.iter().map(crate::scalar::abs_bits).max().unwrap_or(0)
    }
}

/// Row-reduces `rows` (each of length `cols`) in place to reduced row echelon
/// form and returns the pivot columns.
pub fn row_reduce<T: Scalar>(rows: &mut [Vec<T>], cols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows.len() {
            break;
        }
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_negligible()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = T::one() / rows[r][c].clone();
        for x in rows[r].iter_mut() {
            *x = x.clone() * inv.clone();
        }
        for i in 0..rows.len() {
            if i == r || rows[i][c].is_negligible() {
                continue;
            }
            let factor = rows[i][c].clone();
            for j in 0..cols {
                let delta = factor.clone() * rows[r][j].clone();
                rows[i][j] = rows[i][j].clone() - delta;
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// Rank of the matrix whose rows are `vectors`.
pub fn rank<T: Scalar>(vectors: &[Vector<T>]) -> usize {
    let Some(first) = vectors.first() else {
        return 0;
    };
    let cols = first.dim();
    let mut rows: Vec<Vec<T>> = vectors.iter().map(|v| v.0.clone()).collect();
    row_reduce(&mut rows, cols).len()
}

/// Basis of `{ x : <c, x> = 0 for every c in constraints }` in dimension `dim`.
pub fn nullspace<T: Scalar>(constraints: &[Vector<T>], dim: usize) -> Vec<Vector<T>> {
    let mut rows: Vec<Vec<T>> = constraints.iter().map(|v| v.0.clone()).collect();
    let pivots = row_reduce(&mut rows, dim);
    let free: Vec<usize> = (0..dim).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut x = vec![T::zero(); dim];
            x[f] = T::one();
            for (row, &p) in pivots.iter().enumerate() {
                x[p] = -rows[row][f].clone();
            }
            Vector(x)
        })
        .collect()
}

/// Determinant by elimination; `m` must be square.
pub fn determinant<T: Scalar>(m: &[Vec<T>]) -> T {
    let n = m.len();
    let mut a: Vec<Vec<T>> = m.to_vec();
    let mut det = T::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !a[i][c].is_negligible()) else {
            return T::zero();
        };
        if p != c {
            a.swap(p, c);
            det = -det;
        }
        let pivot = a[c][c].clone();
        det = det * pivot.clone();
        for i in c + 1..n {
            if a[i][c].is_negligible() {
                continue;
            }
            let factor = a[i][c].clone() / pivot.clone();
            for j in c..n {
                let delta = factor.clone() * a[c][j].clone();
                a[i][j] = a[i][j].clone() - delta;
            }
        }
    }
    det
}

/// Gram matrix `[<v_i, v_j>]`.
pub fn gram_matrix<T: Scalar>(vectors: &[Vector<T>]) -> Vec<Vec<T>> {
    let n = vectors.len();
    let mut g = vec![vec![T::zero(); n]; n];
    for i in 0..n {
        for j in i..n {
            let ip = vectors[i].dot(&vectors[j]);
            g[j][i] = ip.clone();
            g[i][j] = ip;
        }
    }
    g
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Rational;

    fn q(v: i64) -> Rational {
        Rational::from_integer(v.into())
    }

    fn qv(v: &[i64]) -> Vector<Rational> {
        Vector(v.iter().map(|&x| q(x)).collect())
    }

    #[test]
    fn nullspace_of_two_constraints_in_five_dims() {
        let c = [qv(&[1, 2, 0, -1, 3]), qv(&[0, 1, 1, 1, 1])];
        let basis = nullspace(&c, 5);
        assert_eq!(basis.len(), 3);
        for b in &basis {
            for r in &c {
                assert!(b.dot(r).is_zero());
            }
        }
        assert_eq!(rank(&basis), 3);
    }

    #[test]
    fn nullspace_of_dependent_constraints() {
        let c = [qv(&[1, 1, 0]), qv(&[2, 2, 0])];
        assert_eq!(nullspace(&c, 3).len(), 2);
        assert_eq!(nullspace::<Rational>(&[], 4).len(), 4);
    }

    #[test]
    fn rank_and_determinant() {
        let m = [qv(&[1, 2, 3]), qv(&[4, 5, 6]), qv(&[7, 8, 9])];
        assert_eq!(rank(&m), 2);
        let rows: Vec<Vec<Rational>> = m.iter().map(|v| v.0.clone()).collect();
        assert_eq!(determinant(&rows), q(0));
        let rows = vec![vec![q(2), q(1)], vec![q(1), q(3)]];
        assert_eq!(determinant(&rows), q(5));
        let rows = vec![vec![q(0), q(1)], vec![q(1), q(0)]];
        assert_eq!(determinant(&rows), q(-1));
    }

    #[test]
    fn parallel_check() {
        assert!(qv(&[1, -2, 3]).is_parallel(&qv(&[-2, 4, -6])));
        assert!(!qv(&[1, -2, 3]).is_parallel(&qv(&[1, -2, 4])));
    }

    #[test]
    fn primitive_integer_rescaling() {
        let v = Vector(vec![
            Rational::new((-2).into(), 3.into()),
            Rational::new(4.into(), 9.into()),
            q(0),
        ]);
        assert_eq!(v.to_primitive_integer(), qv(&[3, -2, 0]));
    }

    #[test]
    fn float_rank_uses_tolerance() {
        let m = [
            Vector(vec![1.0f64, 2.0]),
            Vector(vec![0.5, 1.0 + 1e-12]),
        ];
        assert_eq!(rank(&m), 1);
    }
}
