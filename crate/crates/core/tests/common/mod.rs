//! Test-only oracles, written without the library's linear-algebra paths.
#![allow(dead_code, clippy::needless_range_loop)]

use liesoliton::{LieAlgebra, Matrix, MetricLieAlgebra};

/// Ricci eigenvalues of a 3D unimodular algebra in an orthonormal Milnor frame
/// `[e2,e3] = l1 e1, [e3,e1] = l2 e2, [e1,e2] = l3 e3`.
pub fn milnor_unimodular_ricci(l1: f64, l2: f64, l3: f64) -> [f64; 3] {
    let half = 0.5 * (l1 + l2 + l3);
    let (m1, m2, m3) = (half - l1, half - l2, half - l3);
    [2.0 * m2 * m3, 2.0 * m1 * m3, 2.0 * m1 * m2]
}

pub fn milnor_unimodular_algebra(l1: f64, l2: f64, l3: f64) -> LieAlgebra {
    LieAlgebra::from_brackets(3, &[(1, 2, 0, l1), (2, 0, 1, l2), (0, 1, 2, l3)]).unwrap()
}

/// Diagonal Ricci entries of the nonunimodular Milnor family with `β = γ = 0`:
/// `Ric(e1) = -(α² + δ²)`, `Ric(e2) = -α(α+δ)`, `Ric(e3) = -δ(α+δ)`.
pub fn milnor_nonunimodular_ricci(alpha: f64, delta: f64) -> [f64; 3] {
    [
        -(alpha * alpha + delta * delta),
        -alpha * (alpha + delta),
        -delta * (alpha + delta),
    ]
}

/// Nullspace basis by Gauss-Jordan elimination with partial pivoting.
pub fn rref_nullspace(rows: &[Vec<f64>], ncols: usize, tol: f64) -> Vec<Vec<f64>> {
    let mut a: Vec<Vec<f64>> = rows.to_vec();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == a.len() {
            break;
        }
        let (best, val) = (r..a.len())
            .map(|i| (i, a[i][c].abs()))
            .fold((r, -1.0), |acc, x| if x.1 > acc.1 { x } else { acc });
        if val <= tol {
            continue;
        }
        a.swap(r, best);
        let p = a[r][c];
        for x in a[r].iter_mut() {
            *x /= p;
        }
        for i in 0..a.len() {
            if i != r {
                let f = a[i][c];
                if f != 0.0 {
                    for k in 0..ncols {
                        a[i][k] -= f * a[r][k];
                    }
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![0.0; ncols];
            v[f] = 1.0;
            for (row, &pc) in pivots.iter().enumerate() {
                v[pc] = -a[row][f];
            }
            v
        })
        .collect()
}

/// Derivations of `alg` from first principles: unknown `D[k][l]`, one linear
/// equation per `(i, j, k)` with `i < j`, solved by elimination.
pub fn derivations_by_elimination(alg: &LieAlgebra) -> Vec<Matrix> {
    let n = alg.dim();
    let c = |i: usize, j: usize, k: usize| alg.structure(i, j, k);
    let mut rows = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            for k in 0..n {
                // sum_m D[k][m] c[i][j][m] - D[m][i] c[m][j][k] - D[m][j] c[i][m][k] = 0
                let mut row = vec![0.0; n * n];
                for m in 0..n {
                    row[k * n + m] += c(i, j, m);
                    row[m * n + i] -= c(m, j, k);
                    row[m * n + j] -= c(i, m, k);
                }
                rows.push(row);
            }
        }
    }
    rref_nullspace(&rows, n * n, 1e-10)
        .into_iter()
        .map(|v| Matrix::from_row_slice(n, n, &v))
        .collect()
}

/// Distance from `ric` to `span{I} + Der`, by twice-iterated modified Gram-Schmidt projection.
pub fn nilsoliton_residual_oracle(alg: &LieAlgebra, ric: &Matrix) -> f64 {
    let n = alg.dim();
    let mut spanning: Vec<Vec<f64>> = vec![Matrix::identity(n, n).as_slice().to_vec()];
    spanning.extend(derivations_by_elimination(alg).iter().map(|d| d.as_slice().to_vec()));
    let dot = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(x, y)| x * y).sum::<f64>();
    let mut ortho: Vec<Vec<f64>> = Vec::new();
    for mut v in spanning {
        for _ in 0..2 {
            for q in &ortho {
                let p = dot(&v, q);
                for (x, y) in v.iter_mut().zip(q) {
                    *x -= p * y;
                }
            }
        }
        let norm = dot(&v, &v).sqrt();
        if norm > 1e-9 {
            ortho.push(v.iter().map(|x| x / norm).collect());
        }
    }
    let mut r = ric.as_slice().to_vec();
    for _ in 0..2 {
        for q in &ortho {
            let p = dot(&r, q);
            for (x, y) in r.iter_mut().zip(q) {
                *x -= p * y;
            }
        }
    }
    dot(&r, &r).sqrt()
}

pub fn diag(v: &[f64]) -> Matrix {
    Matrix::from_fn(v.len(), v.len(), |i, j| if i == j { v[i] } else { 0.0 })
}

pub fn unit(n: usize, i: usize) -> liesoliton::Vector {
    liesoliton::Vector::from_fn(n, |k, _| if k == i { 1.0 } else { 0.0 })
}

/// A non-soliton metric on nil4 used to give the residual oracle something nonzero to match.
pub fn nil4_skewed() -> MetricLieAlgebra {
    let g = Matrix::from_row_slice(
        4,
        4,
        &[
            2.0, 0.3, 0.0, 0.1, 0.3, 1.0, 0.2, 0.0, 0.0, 0.2, 1.5, 0.4, 0.1, 0.0, 0.4, 3.0,
        ],
    );
    liesoliton::catalog::nil4().with_metric(g).unwrap()
}
