//! Small dense linear-algebra helpers on top of `nalgebra`.
//!
//! Rank decisions treat singular values below `rel_tol * sigma_max` as zero.

use nalgebra::{SymmetricEigen, SVD};

use crate::{Matrix, Vector};

/// Singular values and right singular vectors of `a`, padding with zero rows
/// so that `V` is always square (nalgebra returns a thin `V^T` for wide input).
fn full_svd(a: &Matrix) -> (Vec<f64>, Matrix) {
    let (m, n) = a.shape();
    let padded;
    let a = if m < n {
        padded = a.clone().resize(n, n, 0.0);
        &padded
    } else {
        a
    };
    let svd = SVD::new(a.clone(), false, true);
    let v_t = svd.v_t.expect("requested V^T");
    (svd.singular_values.iter().copied().collect(), v_t)
}

/// Orthonormal basis (as columns) of the nullspace of `a`.
pub fn nullspace(a: &Matrix, rel_tol: f64) -> Matrix {
    let n = a.ncols();
    if n == 0 {
        return Matrix::zeros(0, 0);
    }
    if a.nrows() == 0 {
        return Matrix::identity(n, n);
    }
    let (sv, v_t) = full_svd(a);
    let smax = sv.iter().copied().fold(0.0, f64::max);
    let cut = rel_tol * smax;
    let null_rows: Vec<usize> = (0..n)
        .filter(|&r| smax == 0.0 || sv.get(r).is_none_or(|&s| s <= cut))
        .collect();
    let mut basis = Matrix::zeros(n, null_rows.len());
    for (c, &r) in null_rows.iter().enumerate() {
        let mut col = v_t.row(r).transpose();
        canonical_sign(&mut col);
        basis.set_column(c, &col);
    }
    basis
}

/// Orthonormal basis (as columns) of the column space of `a`.
pub fn column_space(a: &Matrix, rel_tol: f64) -> Matrix {
    let smax = if a.ncols() == 0 || a.nrows() == 0 {
        0.0
    } else {
        SVD::new(a.clone(), false, false)
            .singular_values
            .iter()
            .copied()
            .fold(0.0, f64::max)
    };
    if smax == 0.0 {
        return Matrix::zeros(a.nrows(), 0);
    }
    column_space_above(a, rel_tol * smax)
}

/// Orthonormal basis of the span of singular directions above an absolute cutoff.
pub fn column_space_above(a: &Matrix, cutoff: f64) -> Matrix {
    let m = a.nrows();
    if a.ncols() == 0 || m == 0 {
        return Matrix::zeros(m, 0);
    }
    let svd = SVD::new(a.clone(), true, false);
    let u = svd.u.expect("requested U");
    let keep: Vec<usize> = (0..svd.singular_values.len())
        .filter(|&i| svd.singular_values[i] > cutoff)
        .collect();
    let mut basis = Matrix::zeros(m, keep.len());
    for (c, &i) in keep.iter().enumerate() {
        basis.set_column(c, &u.column(i));
    }
    basis
}

pub fn rank(a: &Matrix, rel_tol: f64) -> usize {
    column_space(a, rel_tol).ncols()
}

/// Minimum-norm least-squares solution of `a x = b` with a relative singular-value cutoff.
pub fn lstsq(a: &Matrix, b: &Vector, rel_tol: f64) -> Vector {
    if a.ncols() == 0 {
        return Vector::zeros(0);
    }
    let svd = SVD::new(a.clone(), true, true);
    let smax = svd.singular_values.iter().copied().fold(0.0, f64::max);
    if smax == 0.0 {
        return Vector::zeros(a.ncols());
    }
    svd.solve(b, rel_tol * smax).expect("U and V^T computed")
}

/// Largest entry of `|a - a^T|`.
pub fn asymmetry(a: &Matrix) -> f64 {
    (a - a.transpose()).amax()
}

pub fn symmetrize(a: &Matrix) -> Matrix {
    (a + a.transpose()) * 0.5
}

/// Eigenvalues of a symmetric matrix in ascending order.
pub fn sym_eigenvalues(a: &Matrix) -> Vec<f64> {
    let mut ev: Vec<f64> = SymmetricEigen::new(symmetrize(a)).eigenvalues.iter().copied().collect();
    ev.sort_by(f64::total_cmp);
    ev
}

/// `a^p` for symmetric positive-definite `a`, computed spectrally.
pub fn spd_power(a: &Matrix, p: f64) -> Matrix {
    let eig = SymmetricEigen::new(symmetrize(a));
    let d = Matrix::from_diagonal(&eig.eigenvalues.map(|l| l.powf(p)));
    &eig.eigenvectors * d * eig.eigenvectors.transpose()
}

pub fn min_singular_value(a: &Matrix) -> f64 {
    if a.is_empty() {
        return 0.0;
    }
    a.clone()
        .singular_values()
        .iter()
        .copied()
        .fold(f64::INFINITY, f64::min)
}

/// Flip `v` so that its first entry of significant magnitude is positive.
pub fn canonical_sign(v: &mut Vector) {
    let scale = v.amax();
    if scale == 0.0 {
        return;
    }
    if let Some(x) = v.iter().find(|x| x.abs() > 1e-12 * scale.max(1.0)) {
        if *x < 0.0 {
            v.neg_mut();
        }
    }
}

/// Eigenvalues of a general square matrix that are known to be real
/// (e.g. a `g`-self-adjoint endomorphism), ascending.
pub fn real_eigenvalues_self_adjoint(endo: &Matrix, g: &Matrix) -> Vec<f64> {
    // g^{1/2} A g^{-1/2} is symmetric when A is g-self-adjoint.
    let half = spd_power(g, 0.5);
    let inv_half = spd_power(g, -0.5);
    sym_eigenvalues(&(&half * endo * inv_half))
}
