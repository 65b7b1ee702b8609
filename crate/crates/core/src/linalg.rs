//! Small dense linear-algebra helpers on top of nalgebra.

use itertools::Itertools;
use nalgebra::{DMatrix, DVector};

/// Row-major nested vectors to a matrix.
pub fn from_rows(rows: &[Vec<f64>]) -> DMatrix<f64> {
    let n = rows.len();
    let m = rows.first().map_or(0, |r| r.len());
    DMatrix::from_fn(n, m, |i, j| rows[i][j])
}

pub fn to_rows(m: &DMatrix<f64>) -> Vec<Vec<f64>> {
    (0..m.nrows()).map(|i| m.row(i).iter().copied().collect()).collect()
}

pub fn mat_vec(m: &DMatrix<f64>, x: &[f64]) -> Vec<f64> {
    (m * DVector::from_column_slice(x)).iter().copied().collect()
}

pub fn mat_t_vec(m: &DMatrix<f64>, y: &[f64]) -> Vec<f64> {
    m.tr_mul(&DVector::from_column_slice(y)).iter().copied().collect()
}

/// Largest singular value.
pub fn spectral_norm(m: &DMatrix<f64>) -> f64 {
    if m.is_empty() {
        return 0.0;
    }
    m.clone().singular_values().max()
}

/// Top right singular vector and value.
pub fn top_singular(m: &DMatrix<f64>) -> (f64, Vec<f64>) {
    let svd = m.clone().svd(false, true);
    let vt = svd.v_t.expect("requested v_t");
    let (i, s) = svd.singular_values.argmax();
    (s, vt.row(i).iter().copied().collect())
}

/// Largest `λ` with `A v = λ B v` for symmetric `A` and positive definite
/// `B`, with its eigenvector. `None` when `B` is not positive definite.
pub fn max_generalized_eigen(a: &DMatrix<f64>, b: &DMatrix<f64>) -> Option<(f64, Vec<f64>)> {
    let chol = b.clone().cholesky()?;
    let l = chol.l();
    let linv = l.clone().try_inverse()?;
    let c = &linv * a * linv.transpose();
    let c = (&c + c.transpose()) * 0.5;
    let eig = c.symmetric_eigen();
    let (i, lambda) = eig.eigenvalues.argmax();
    let w = eig.eigenvectors.column(i).into_owned();
    // v = L^{-T} w
    let v = linv.transpose() * w;
    Some((lambda, v.iter().copied().collect()))
}

/// Solves `A x = b` for square `A`; `None` when singular.
pub fn solve(a: &DMatrix<f64>, b: &[f64]) -> Option<Vec<f64>> {
    let lu = a.clone().lu();
    let x = lu.solve(&DVector::from_column_slice(b))?;
    x.iter().all(|v| v.is_finite()).then(|| x.iter().copied().collect())
}

/// Number of `k`-subsets of `n` items, saturating.
pub fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.saturating_mul((n - i) as u128) / (i as u128 + 1);
    }
    acc
}

/// Vertices of the bounded polytope `{c ∈ R^k : ⟨a_j, c⟩ ≤ 1 ∀ j}` by
/// basis enumeration: every nonsingular `k`-subset of constraints made
/// tight gives a candidate, kept when feasible.
pub fn polytope_vertices(rows: &[Vec<f64>], k: usize) -> Vec<Vec<f64>> {
    const TOL: f64 = 1e-9;
    let scale = rows.iter().flatten().fold(0.0_f64, |m, v| m.max(v.abs())).max(1.0);
    let mut out: Vec<Vec<f64>> = Vec::new();
    for subset in (0..rows.len()).combinations(k) {
        let a = DMatrix::from_fn(k, k, |i, j| rows[subset[i]][j]);
        let Some(c) = solve(&a, &vec![1.0; k]) else { continue };
        let feasible = rows.iter().all(|r| crate::norm::dot(r, &c) <= 1.0 + TOL);
        if !feasible {
            continue;
        }
        let c_scale = c.iter().fold(0.0_f64, |m, v| m.max(v.abs())).max(1.0);
        let dup = out
            .iter()
            .any(|v| v.iter().zip(&c).all(|(x, y)| (x - y).abs() <= TOL * scale * c_scale));
        if !dup {
            out.push(c);
        }
    }
    out
}

/// Orthonormal basis of the column space, via SVD with a relative rank
/// threshold.
pub fn column_space(m: &DMatrix<f64>) -> DMatrix<f64> {
    let svd = m.clone().svd(true, false);
    let u = svd.u.expect("requested u");
    let smax = svd.singular_values.max();
    let keep: Vec<usize> =
        (0..svd.singular_values.len()).filter(|&i| svd.singular_values[i] > 1e-10 * smax.max(1e-300)).collect();
    DMatrix::from_fn(m.nrows(), keep.len(), |i, j| u[(i, keep[j])])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn square_vertices() {
        // |c_1| ≤ 1, |c_2| ≤ 1
        let rows = vec![vec![1.0, 0.0], vec![-1.0, 0.0], vec![0.0, 1.0], vec![0.0, -1.0]];
        let v = polytope_vertices(&rows, 2);
        assert_eq!(v.len(), 4);
        assert!(v.iter().all(|c| c[0].abs() == 1.0 && c[1].abs() == 1.0));
    }

    #[test]
    fn generalized_eigen_of_diagonal_pair() {
        let a = DMatrix::from_diagonal(&DVector::from_vec(vec![2.0, 9.0]));
        let b = DMatrix::from_diagonal(&DVector::from_vec(vec![1.0, 3.0]));
        let (l, v) = max_generalized_eigen(&a, &b).unwrap();
        assert!((l - 3.0).abs() < 1e-12);
        assert!(v[0].abs() < 1e-12);
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(5, 2), 10);
        assert_eq!(binomial(40, 20), 137_846_528_820);
        assert_eq!(binomial(3, 4), 0);
    }

    #[test]
    fn column_space_drops_null_directions() {
        let m = DMatrix::from_row_slice(3, 2, &[1.0, 2.0, 2.0, 4.0, 0.0, 0.0]);
        assert_eq!(column_space(&m).ncols(), 1);
    }
}
