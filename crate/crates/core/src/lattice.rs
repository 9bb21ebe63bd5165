//! Short integer kernel bases via LLL.
//!
//! Vectors built from a plain echelon-form nullspace roughly double in bit
//! length whenever a vertex is constrained by two large vectors, which
//! compounds along chains of cycles. Drawing from an LLL-reduced basis of
//! the integer kernel lattice keeps the entries short instead.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

const DELTA_NUM: i64 = 3;
const DELTA_DEN: i64 = 4;

/// In-place LLL reduction (δ = 3/4) of linearly independent integer rows.
pub fn lll_reduce(b: &mut [Vec<BigInt>]) {
    let n = b.len();
    if n < 2 {
        return;
    }
    let delta = BigRational::new(DELTA_NUM.into(), DELTA_DEN.into());
    let (mut mu, mut norms) = gram_schmidt(b);
    debug_assert!(norms.iter().all(|x| !x.is_zero()), "rows must be independent");
    let mut k = 1;
    while k < n {
        for j in (0..k).rev() {
            let q = round(&mu[k][j]);
            if q.is_zero() {
                continue;
            }
            let (head, tail) = b.split_at_mut(k);
            for (x, y) in tail[0].iter_mut().zip(&head[j]) {
                *x -= &q * y;
            }
            let qr = BigRational::from_integer(q);
            for i in 0..j {
                let d = &qr * &mu[j][i];
                mu[k][i] -= d;
            }
            mu[k][j] -= &qr;
        }
        let lovasz = (&delta - &mu[k][k - 1] * &mu[k][k - 1]) * &norms[k - 1];
        if norms[k] >= lovasz {
            k += 1;
        } else {
            swap_rows(b, &mut mu, &mut norms, k);
            k = (k - 1).max(1);
        }
    }
}

// Exchanges rows k-1 and k, updating the Gram-Schmidt data in place.
fn swap_rows(b: &mut [Vec<BigInt>], mu: &mut [Vec<BigRational>], norms: &mut [BigRational], k: usize) {
    let n = b.len();
    b.swap(k, k - 1);
    let m = mu[k][k - 1].clone();
    let big = &norms[k] + &m * &m * &norms[k - 1];
    if big.is_zero() {
        let (mu2, norms2) = gram_schmidt(b);
        mu.clone_from_slice(&mu2);
        norms.clone_from_slice(&norms2);
        return;
    }
    mu[k][k - 1] = &m * &norms[k - 1] / &big;
    norms[k] = &norms[k - 1] * &norms[k] / &big;
    norms[k - 1] = big;
    for j in 0..k - 1 {
        let t = mu[k - 1][j].clone();
        mu[k - 1][j] = mu[k][j].clone();
        mu[k][j] = t;
    }
    for i in k + 1..n {
        let t = mu[i][k].clone();
        mu[i][k] = &mu[i][k - 1] - &m * &t;
        mu[i][k - 1] = t + &mu[k][k - 1] * &mu[i][k];
    }
}

fn round(x: &BigRational) -> BigInt {
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    (x + half).floor().to_integer()
}

fn gram_schmidt(b: &[Vec<BigInt>]) -> (Vec<Vec<BigRational>>, Vec<BigRational>) {
    let n = b.len();
    let rows: Vec<Vec<BigRational>> = b
        .iter()
        .map(|r| r.iter().map(|x| BigRational::from_integer(x.clone())).collect())
        .collect();
    let dot = |x: &[BigRational], y: &[BigRational]| -> BigRational {
        x.iter().zip(y).fold(BigRational::zero(), |acc, (a, c)| acc + a * c)
    };
    let mut star: Vec<Vec<BigRational>> = Vec::with_capacity(n);
    let mut norms: Vec<BigRational> = Vec::with_capacity(n);
    let mut mu = vec![vec![BigRational::zero(); n]; n];
    for i in 0..n {
        let mut v = rows[i].clone();
        for j in 0..i {
            if norms[j].is_zero() {
                continue;
            }
            mu[i][j] = dot(&rows[i], &star[j]) / &norms[j];
            for (x, s) in v.iter_mut().zip(&star[j]) {
                *x -= &mu[i][j] * s;
            }
        }
        norms.push(dot(&v, &v));
        star.push(v);
    }
    (mu, norms)
}

/// Reduced basis of `{ x in Z^dim : <c, x> = 0 for all constraints c }`,
/// found by reducing the rows `(e_i, K c_1[i], ..., K c_r[i])`. Returns `None`
/// when the constraints are not integral or the reduction does not separate
/// the kernel.
pub fn reduced_integer_kernel(constraints: &[Vec<BigRational>], dim: usize) -> Option<Vec<Vec<BigInt>>> {
    let ints: Vec<Vec<BigInt>> = constraints
        .iter()
        .map(|c| {
            c.iter()
                .map(|x| x.is_integer().then(|| x.to_integer()))
                .collect::<Option<Vec<_>>>()
        })
        .collect::<Option<_>>()?;
    let ints: Vec<Vec<BigInt>> = ints.into_iter().filter(|c| c.iter().any(|x| !x.is_zero())).collect();
    if ints.is_empty() {
        return Some(
            (0..dim)
                .map(|i| (0..dim).map(|j| BigInt::from((i == j) as i32)).collect())
                .collect(),
        );
    }
    let rank = {
        let rows: Vec<crate::linalg::Vector<BigRational>> = ints
            .iter()
            .map(|c| crate::linalg::Vector(c.iter().map(|x| BigRational::from_integer(x.clone())).collect()))
            .collect();
        crate::linalg::rank(&rows)
    };
    let nullity = dim - rank;
    let max_bits = ints.iter().flatten().map(|x| x.abs().bits()).max().unwrap_or(1);
    let mut shift = max_bits + dim as u64 + 8;
    for _ in 0..4 {
        let scale = BigInt::one() << shift;
        let mut rows: Vec<Vec<BigInt>> = (0..dim)
            .map(|i| {
                let mut r: Vec<BigInt> = (0..dim).map(|j| BigInt::from((i == j) as i32)).collect();
                r.extend(ints.iter().map(|c| &c[i] * &scale));
                r
            })
            .collect();
        lll_reduce(&mut rows);
        let kernel: Vec<Vec<BigInt>> = rows
            .into_iter()
            .filter(|r| r[dim..].iter().all(Zero::is_zero))
            .map(|mut r| {
                r.truncate(dim);
                primitive(r)
            })
            .collect();
        if kernel.len() == nullity {
            return Some(kernel);
        }
        shift *= 2;
    }
    None
}

fn primitive(r: Vec<BigInt>) -> Vec<BigInt> {
    let g = r.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if g.is_zero() || g.is_one() {
        return r;
    }
    r.into_iter().map(|x| x / &g).collect()
}
