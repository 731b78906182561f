//! Lawson-Hanson active-set nonnegative least squares.

use nalgebra::{DMatrix, DVector, SymmetricEigen};

/// Solves `min |A x - b|` subject to `x >= 0`.
pub(crate) fn nnls(a: &DMatrix<f64>, b: &DVector<f64>) -> DVector<f64> {
    let n = a.ncols();
    let mut x = DVector::zeros(n);
    if n == 0 {
        return x;
    }
    let mut passive = vec![false; n];
    let scale = a.norm().max(1.0) * b.norm().max(1.0);
    let dual_tol = 1e-13 * scale;
    // A column whose unconstrained solve goes nonpositive right after entry
    // is numerically dependent; skip it until the iterate moves.
    let mut blocked = vec![false; n];

    for _ in 0..3 * n + 10 {
        let w = a.transpose() * (b - a * &x);
        let entering = (0..n)
            .filter(|&j| !passive[j] && !blocked[j])
            .max_by(|&i, &j| w[i].total_cmp(&w[j]))
            .filter(|&j| w[j] > dual_tol);
        let Some(j) = entering else {
            break;
        };
        passive[j] = true;

        for inner in 0..3 * n + 10 {
            let idx: Vec<usize> = (0..n).filter(|&i| passive[i]).collect();
            let z = least_squares(&a.select_columns(&idx), b);
            if z.iter().all(|&v| v > 0.0) {
                for (t, &i) in idx.iter().enumerate() {
                    x[i] = z[t];
                }
                blocked.iter_mut().for_each(|f| *f = false);
                break;
            }
            if inner == 0 && z[idx.iter().position(|&i| i == j).unwrap()] <= 0.0 && x[j] == 0.0 {
                passive[j] = false;
                blocked[j] = true;
                break;
            }
            let mut alpha = f64::INFINITY;
            for (t, &i) in idx.iter().enumerate() {
                if z[t] <= 0.0 {
                    alpha = alpha.min(x[i] / (x[i] - z[t]));
                }
            }
            for (t, &i) in idx.iter().enumerate() {
                x[i] += alpha * (z[t] - x[i]);
                if x[i] <= 1e-15 * scale {
                    x[i] = 0.0;
                    passive[i] = false;
                }
            }
            if !passive.iter().any(|&p| p) {
                break;
            }
        }
    }
    x
}

fn least_squares(a: &DMatrix<f64>, b: &DVector<f64>) -> DVector<f64> {
    let svd = a.clone().svd(true, true);
    let eps = 1e-14 * svd.singular_values.max().max(1.0);
    svd.solve(b, eps)
        .unwrap_or_else(|_| DVector::zeros(a.ncols()))
}

/// Moves `x` along null directions of `A` restricted to its support until
/// at most `max_support` entries remain positive. `A x` is unchanged up to
/// rounding.
pub(crate) fn reduce_support(a: &DMatrix<f64>, x: &mut DVector<f64>, max_support: usize) {
    loop {
        let support: Vec<usize> = (0..x.len()).filter(|&i| x[i] > 0.0).collect();
        if support.len() <= max_support {
            return;
        }
        let sub = a.select_columns(&support);
        let gram = sub.transpose() * &sub;
        let eig = SymmetricEigen::new(gram);
        let smallest = eig.eigenvalues.imin();
        let mut v = eig.eigenvectors.column(smallest).into_owned();
        if v.iter().all(|&c| c <= 0.0) {
            v = -v;
        }
        let (mut t, mut hit) = (f64::INFINITY, None);
        for (pos, &i) in support.iter().enumerate() {
            if v[pos] > 0.0 && x[i] / v[pos] < t {
                t = x[i] / v[pos];
                hit = Some(i);
            }
        }
        let Some(hit) = hit else {
            return;
        };
        for (pos, &i) in support.iter().enumerate() {
            x[i] = (x[i] - t * v[pos]).max(0.0);
        }
        x[hit] = 0.0;
    }
}
