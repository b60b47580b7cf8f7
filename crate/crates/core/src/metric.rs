//! Left-invariant Riemannian geometry of a metric Lie algebra.
//!
//! Frame inner products are constant, so the Koszul formula reduces to
//! `2<∇_x y, z> = <[x,y],z> - <[y,z],x> + <[z,x],y>` on basis vectors.
//! Curvature is evaluated in the `g`-orthonormal frame `f = e · g^{-1/2}`
//! and pulled back to the input basis.

use crate::algebra::LieAlgebra;
use crate::error::{Error, Result};
use crate::linalg;
use crate::tol::Tolerances;
use crate::{Matrix, Vector};

#[derive(Debug, Clone, PartialEq)]
pub struct MetricLieAlgebra {
    alg: LieAlgebra,
    metric: Matrix,
}

/// Connection coefficients `∇_{e_i} e_j = sum_k gamma[i][j][k] e_k` in the input basis.
#[derive(Debug, Clone)]
pub struct Connection {
    dim: usize,
    gamma: Vec<f64>,
}

impl Connection {
    #[inline]
    pub fn get(&self, i: usize, j: usize, k: usize) -> f64 {
        self.gamma[(i * self.dim + j) * self.dim + k]
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// `∇_x y` for coordinate vectors.
    pub fn covariant(&self, x: &Vector, y: &Vector) -> Vector {
        let n = self.dim;
        Vector::from_fn(n, |k, _| {
            let mut s = 0.0;
            for i in 0..n {
                for j in 0..n {
                    s += x[i] * y[j] * self.get(i, j, k);
                }
            }
            s
        })
    }

    /// Matrix of `z ↦ ∇_{e_i} z`.
    pub fn along(&self, i: usize) -> Matrix {
        let n = self.dim;
        Matrix::from_fn(n, n, |k, m| self.get(i, m, k))
    }
}

#[derive(Debug, Clone)]
pub struct CurvaturePackage {
    pub connection: Connection,
    /// `Ric(e_i, e_j)`.
    pub ricci_form: Matrix,
    /// `g^{-1} Ric`, acting on coordinate columns.
    pub ricci_endo: Matrix,
    pub scalar: f64,
    /// `|Ric|^2` with indices raised by `g`.
    pub ricci_norm_sq: f64,
    /// Ricci eigenvalues, ascending.
    pub ricci_spectrum: Vec<f64>,
    /// Squared norm of the full curvature tensor in the orthonormal frame.
    pub riemann_norm_sq: f64,
}

impl CurvaturePackage {
    /// `|Ric - (R/n) g|^2`.
    pub fn traceless_ricci_norm_sq(&self) -> f64 {
        let n = self.ricci_form.nrows() as f64;
        (self.ricci_norm_sq - self.scalar * self.scalar / n).max(0.0)
    }

    pub fn is_flat(&self, tol: &Tolerances) -> bool {
        self.riemann_norm_sq.sqrt() <= tol.alg
    }
}

impl MetricLieAlgebra {
    pub fn new(alg: LieAlgebra, metric: Matrix) -> Result<Self> {
        let n = alg.dim();
        if metric.shape() != (n, n) {
            return Err(Error::Dimension(format!(
                "metric is {}x{}, algebra has dimension {n}",
                metric.nrows(),
                metric.ncols()
            )));
        }
        let tol = Tolerances::default();
        let asym = linalg::asymmetry(&metric);
        if asym > tol.alg {
            return Err(Error::NotPositiveDefinite(format!("asymmetry {asym:e}")));
        }
        let metric = linalg::symmetrize(&metric);
        let min_ev = linalg::sym_eigenvalues(&metric)[0];
        if min_ev.is_nan() || min_ev <= 0.0 {
            return Err(Error::NotPositiveDefinite(format!("smallest eigenvalue {min_ev:e}")));
        }
        Ok(Self { alg, metric })
    }

    pub fn with_identity(alg: LieAlgebra) -> Self {
        let n = alg.dim();
        Self {
            alg,
            metric: Matrix::identity(n, n),
        }
    }

    pub fn alg(&self) -> &LieAlgebra {
        &self.alg
    }

    pub fn metric(&self) -> &Matrix {
        &self.metric
    }

    pub fn dim(&self) -> usize {
        self.alg.dim()
    }

    pub fn with_metric(&self, metric: Matrix) -> Result<Self> {
        Self::new(self.alg.clone(), metric)
    }

    /// The metric `factor * g`.
    pub fn scaled(&self, factor: f64) -> Result<Self> {
        if factor.is_nan() || factor <= 0.0 {
            return Err(Error::InvalidArgument(format!(
                "scale factor {factor} must be positive"
            )));
        }
        self.with_metric(&self.metric * factor)
    }

    pub fn inner(&self, x: &Vector, y: &Vector) -> f64 {
        (x.transpose() * &self.metric * y)[0]
    }

    /// Orthogonal direct sum with the product metric.
    pub fn direct_sum(&self, other: &MetricLieAlgebra) -> Self {
        let (n1, n2) = (self.dim(), other.dim());
        let mut g = Matrix::zeros(n1 + n2, n1 + n2);
        g.view_mut((0, 0), (n1, n1)).copy_from(&self.metric);
        g.view_mut((n1, n1), (n2, n2)).copy_from(&other.metric);
        Self {
            alg: self.alg.direct_sum(&other.alg),
            metric: g,
        }
    }

    /// Levi-Civita connection in the input basis via the Koszul formula.
    pub fn levi_civita(&self) -> Connection {
        let n = self.dim();
        let g = &self.metric;
        let g_inv = g.clone().try_inverse().expect("metric is positive definite");
        // lowered[a][b][l] = <[e_a, e_b], e_l>
        let mut lowered = vec![0.0; n * n * n];
        for a in 0..n {
            for b in 0..n {
                for l in 0..n {
                    let mut s = 0.0;
                    for m in 0..n {
                        s += self.alg.structure(a, b, m) * g[(m, l)];
                    }
                    lowered[(a * n + b) * n + l] = s;
                }
            }
        }
        let low = |a: usize, b: usize, l: usize| lowered[(a * n + b) * n + l];
        let mut gamma = vec![0.0; n * n * n];
        for i in 0..n {
            for j in 0..n {
                let koszul = Vector::from_fn(n, |l, _| 0.5 * (low(i, j, l) - low(j, l, i) + low(l, i, j)));
                let coords = &g_inv * koszul;
                for k in 0..n {
                    gamma[(i * n + j) * n + k] = coords[k];
                }
            }
        }
        Connection { dim: n, gamma }
    }

    pub fn curvature(&self) -> CurvaturePackage {
        let n = self.dim();
        let to_frame = linalg::spd_power(&self.metric, -0.5);
        let from_frame = linalg::spd_power(&self.metric, 0.5);
        let frame_alg = self.alg.change_basis(&to_frame).expect("g^{-1/2} is invertible");
        let c = |a: usize, b: usize, k: usize| frame_alg.structure(a, b, k);

        // nabla[a][k][b] = <∇_{f_a} f_b, f_k>
        let nabla: Vec<Matrix> = (0..n)
            .map(|a| Matrix::from_fn(n, n, |k, b| 0.5 * (c(a, b, k) - c(b, k, a) + c(k, a, b))))
            .collect();

        let mut ricci = Matrix::zeros(n, n);
        let mut riemann_norm_sq = 0.0;
        for a in 0..n {
            for b in 0..n {
                let mut r = &nabla[a] * &nabla[b] - &nabla[b] * &nabla[a];
                for (e, ne) in nabla.iter().enumerate() {
                    let w = c(a, b, e);
                    if w != 0.0 {
                        r -= ne * w;
                    }
                }
                riemann_norm_sq += r.norm_squared();
                // Ric(f_b, f_d) += <R(f_a, f_b) f_d, f_a>
                for d in 0..n {
                    ricci[(b, d)] += r[(a, d)];
                }
            }
        }
        let ricci = linalg::symmetrize(&ricci);
        let ricci_form = from_frame.transpose() * &ricci * &from_frame;
        let ricci_form = linalg::symmetrize(&ricci_form);
        let g_inv = self.metric.clone().try_inverse().expect("metric is positive definite");
        let ricci_endo = &g_inv * &ricci_form;
        CurvaturePackage {
            connection: self.levi_civita(),
            scalar: ricci.trace(),
            ricci_norm_sq: ricci.norm_squared(),
            ricci_spectrum: linalg::sym_eigenvalues(&ricci),
            riemann_norm_sq,
            ricci_form,
            ricci_endo,
        }
    }

    /// Constant divergence of the left-invariant field `x`, `sum g(∇_{e_i} X, e^i)`.
    pub fn divergence_left_invariant(&self, x: &Vector) -> f64 {
        let m = self.nabla_x_form(&self.levi_civita(), x);
        let g_inv = self.metric.clone().try_inverse().expect("metric is positive definite");
        (g_inv * m).trace()
    }

    /// `m[i][j] = g(∇_{e_i} X, e_j)`.
    fn nabla_x_form(&self, conn: &Connection, x: &Vector) -> Matrix {
        let n = self.dim();
        let cols: Vec<Vector> = (0..n).map(|i| conn.along(i) * x).collect();
        let nab = Matrix::from_columns(&cols);
        nab.transpose() * &self.metric
    }

    /// `(L_X g)(e_i, e_j) = -g([X,e_i], e_j) - g(e_i, [X,e_j])`.
    pub fn lie_derivative_metric(&self, x: &Vector) -> Matrix {
        let a = self.alg.ad(x);
        -(a.transpose() * &self.metric + &self.metric * a)
    }

    /// `(L_X g)(e_i, e_j) = g(∇_{e_i} X, e_j) + g(e_i, ∇_{e_j} X)`.
    pub fn lie_derivative_metric_via_connection(&self, x: &Vector) -> Matrix {
        let m = self.nabla_x_form(&self.levi_civita(), x);
        &m + m.transpose()
    }

    /// Basis (columns) of the left-invariant parallel fields: the
    /// left-invariant flat factor.
    pub fn euclidean_factor(&self, tol: &Tolerances) -> Matrix {
        let n = self.dim();
        let conn = self.levi_civita();
        let mut stacked = Matrix::zeros(n * n, n);
        for i in 0..n {
            stacked.view_mut((i * n, 0), (n, n)).copy_from(&conn.along(i));
        }
        linalg::nullspace(&stacked, tol.rank)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn heis3() -> MetricLieAlgebra {
        MetricLieAlgebra::with_identity(LieAlgebra::from_brackets(3, &[(0, 1, 2, 1.0)]).unwrap())
    }

    fn sol3() -> MetricLieAlgebra {
        MetricLieAlgebra::with_identity(LieAlgebra::from_brackets(3, &[(2, 0, 0, 1.0), (2, 1, 1, -1.0)]).unwrap())
    }

    fn milnor(a: f64, b: f64, c: f64, d: f64) -> MetricLieAlgebra {
        MetricLieAlgebra::with_identity(
            LieAlgebra::from_brackets(3, &[(0, 1, 1, a), (0, 1, 2, b), (0, 2, 1, c), (0, 2, 2, d)]).unwrap(),
        )
    }

    fn e(n: usize, i: usize) -> Vector {
        Vector::from_fn(n, |k, _| if k == i { 1.0 } else { 0.0 })
    }

    #[test]
    fn rejects_indefinite_metric() {
        let g = Matrix::from_diagonal(&Vector::from_vec(vec![1.0, -1.0, 1.0]));
        let err = MetricLieAlgebra::new(LieAlgebra::abelian(3), g).unwrap_err();
        assert!(matches!(err, Error::NotPositiveDefinite(_)));
    }

    #[test]
    fn heis3_connection() {
        let conn = heis3().levi_civita();
        assert!((conn.get(0, 1, 2) - 0.5).abs() < 1e-15);
        assert!((conn.get(0, 2, 1) + 0.5).abs() < 1e-15);
        assert!((conn.get(2, 0, 1) + 0.5).abs() < 1e-15);
        assert!(conn.get(0, 0, 0).abs() < 1e-15);
    }

    #[test]
    fn sol3_connection() {
        let conn = sol3().levi_civita();
        for (i, j, k, v) in [(0, 0, 2, 1.0), (1, 1, 2, -1.0)] {
            assert!((conn.get(i, j, k) - v).abs() < 1e-15);
        }
        for j in 0..3 {
            for k in 0..3 {
                assert_eq!(conn.get(2, j, k), 0.0);
            }
        }
    }

    #[test]
    fn sol3_ricci() {
        let curv = sol3().curvature();
        let expected = Matrix::from_diagonal(&Vector::from_vec(vec![0.0, 0.0, -2.0]));
        assert!((&curv.ricci_endo - expected).amax() < 1e-12);
        assert!((curv.scalar + 2.0).abs() < 1e-12);
    }

    #[test]
    fn abelian_is_flat() {
        let m = MetricLieAlgebra::with_identity(LieAlgebra::abelian(4));
        let curv = m.curvature();
        assert_eq!(curv.scalar, 0.0);
        assert!(curv.is_flat(&Tolerances::default()));
        assert_eq!(m.euclidean_factor(&Tolerances::default()).ncols(), 4);
    }

    #[test]
    fn milnor_divergence() {
        let m = milnor(1.0, 0.0, 0.0, 1.0);
        assert!((m.divergence_left_invariant(&e(3, 0)) + 2.0).abs() < 1e-12);
        assert!(m.divergence_left_invariant(&e(3, 1)).abs() < 1e-12);
        assert!(m.divergence_left_invariant(&e(3, 2)).abs() < 1e-12);
    }

    #[test]
    fn milnor_lie_derivative_blocks() {
        let (al, be, ga, de, a) = (0.7, 0.3, -1.1, 2.0, 1.5);
        let m = milnor(al, be, ga, de);
        let x = e(3, 0) * a;
        let l = m.lie_derivative_metric(&x);
        assert!((l[(1, 1)] + 2.0 * a * al).abs() < 1e-12);
        assert!((l[(2, 2)] + 2.0 * a * de).abs() < 1e-12);
        assert!((l[(1, 2)] + a * (ga + be)).abs() < 1e-12);
        assert!((l.trace() - 2.0 * m.divergence_left_invariant(&x)).abs() < 1e-12);
        let via = m.lie_derivative_metric_via_connection(&x);
        assert!((l - via).amax() < 1e-12);
    }

    #[test]
    fn heis3_flat_factor() {
        let tol = Tolerances::default();
        assert_eq!(heis3().euclidean_factor(&tol).ncols(), 0);
        let prod = heis3().direct_sum(&MetricLieAlgebra::with_identity(LieAlgebra::abelian(1)));
        let ef = prod.euclidean_factor(&tol);
        assert_eq!(ef.ncols(), 1);
        assert!((ef[(3, 0)].abs() - 1.0).abs() < 1e-12);
    }
}
