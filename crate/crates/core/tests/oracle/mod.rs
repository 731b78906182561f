//! Brute-force reference computations shared by the integration tests.
//!
//! Nothing here calls into the library's linear algebra: eigenvalues come
//! from cyclic Jacobi rotations on the real symmetric embedding
//! `[[A, -B], [B, A]]` of `H = A + iB`, and partial traces/transposes are
//! written out with explicit two-party index formulas.

#![allow(dead_code, clippy::needless_range_loop)]

use separability::{Complex64, ComplexMatrix};

pub type Dense = Vec<Vec<Complex64>>;

pub fn to_dense(m: &ComplexMatrix) -> Dense {
    (0..m.nrows())
        .map(|r| (0..m.ncols()).map(|c| m[(r, c)]).collect())
        .collect()
}

/// Eigenvalues of a real symmetric matrix, descending.
pub fn jacobi_symmetric(mut a: Vec<Vec<f64>>) -> Vec<f64> {
    let n = a.len();
    for _sweep in 0..100 {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[i][j] * a[i][j])
            .sum();
        if off < 1e-30 {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                if a[p][q].abs() < 1e-300 {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let (akp, akq) = (a[k][p], a[k][q]);
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let (apk, aqk) = (a[p][k], a[q][k]);
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
            }
        }
    }
    let mut eig: Vec<f64> = (0..n).map(|i| a[i][i]).collect();
    eig.sort_by(|x, y| y.total_cmp(x));
    eig
}

/// Eigenvalues of a Hermitian matrix, descending.
pub fn hermitian_eigenvalues(h: &Dense) -> Vec<f64> {
    let n = h.len();
    let mut big = vec![vec![0.0; 2 * n]; 2 * n];
    for r in 0..n {
        for c in 0..n {
            let z = (h[r][c] + h[c][r].conj()) * 0.5;
            big[r][c] = z.re;
            big[r + n][c + n] = z.re;
            big[r][c + n] = -z.im;
            big[r + n][c] = z.im;
        }
    }
    // Every eigenvalue appears twice in the embedding.
    jacobi_symmetric(big).into_iter().step_by(2).collect()
}

pub fn min_eigenvalue(h: &Dense) -> f64 {
    *hermitian_eigenvalues(h).last().unwrap()
}

pub fn rank(h: &Dense, tol: f64) -> usize {
    hermitian_eigenvalues(h)
        .iter()
        .filter(|&&l| l > tol)
        .count()
}

/// `rho^{T_party}` for two parties of dimensions `d1 x d2`.
pub fn partial_transpose_2(rho: &Dense, d1: usize, d2: usize, party: usize) -> Dense {
    let n = d1 * d2;
    let mut out = vec![vec![Complex64::new(0.0, 0.0); n]; n];
    for i in 0..d1 {
        for j in 0..d2 {
            for k in 0..d1 {
                for l in 0..d2 {
                    let (src_r, src_c) = if party == 0 {
                        (k * d2 + j, i * d2 + l)
                    } else {
                        (i * d2 + l, k * d2 + j)
                    };
                    out[i * d2 + j][k * d2 + l] = rho[src_r][src_c];
                }
            }
        }
    }
    out
}

/// Reduced matrix of party `keep` for two parties of dimensions `d1 x d2`.
pub fn partial_trace_2(rho: &Dense, d1: usize, d2: usize, keep: usize) -> Dense {
    let d = if keep == 0 { d1 } else { d2 };
    let mut out = vec![vec![Complex64::new(0.0, 0.0); d]; d];
    for a in 0..d {
        for b in 0..d {
            let other = if keep == 0 { d2 } else { d1 };
            for t in 0..other {
                let (r, c) = if keep == 0 {
                    (a * d2 + t, b * d2 + t)
                } else {
                    (t * d2 + a, t * d2 + b)
                };
                out[a][b] += rho[r][c];
            }
        }
    }
    out
}

pub fn outer(v: &[Complex64]) -> Dense {
    v.iter()
        .map(|a| v.iter().map(|b| a * b.conj()).collect())
        .collect()
}

pub fn trace_of_square(m: &Dense) -> f64 {
    let n = m.len();
    (0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .map(|(i, j)| (m[i][j] * m[j][i]).re)
        .sum()
}

pub fn max_diff(a: &Dense, b: &Dense) -> f64 {
    a.iter()
        .zip(b)
        .flat_map(|(ra, rb)| ra.iter().zip(rb).map(|(x, y)| (x - y).norm()))
        .fold(0.0, f64::max)
}

/// `A (x) I_d2 - rho` for two parties.
pub fn reduction_operator_2(rho: &Dense, d1: usize, d2: usize, side: usize) -> Dense {
    let red = partial_trace_2(rho, d1, d2, side);
    let n = d1 * d2;
    let mut out = vec![vec![Complex64::new(0.0, 0.0); n]; n];
    for r in 0..n {
        for c in 0..n {
            let (ra, rb, ca, cb) = (r / d2, r % d2, c / d2, c % d2);
            let v = if side == 0 {
                if rb == cb {
                    red[ra][ca]
                } else {
                    Complex64::new(0.0, 0.0)
                }
            } else if ra == ca {
                red[rb][cb]
            } else {
                Complex64::new(0.0, 0.0)
            };
            out[r][c] = v - rho[r][c];
        }
    }
    out
}
