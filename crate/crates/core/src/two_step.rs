//! 2-step nilpotent metric Lie algebras through the maps `j(z): v → v`,
//! `<j(z)x, y> = <z, [x, y]>`, where `v` is the orthogonal complement of the
//! center `z`; and rank-one solvable extensions `s = RH ⊕ n`.
//!
//! The Ricci kernel of a 2-step algebra is `{z ∈ z | j(z) = 0}`; the map is
//! defined on the center, and that is where the kernel is computed.

use nalgebra::SymmetricEigen;

use crate::algebra::{LieAlgebra, NilpotencyClass};
use crate::error::{Error, Result};
use crate::linalg;
use crate::metric::MetricLieAlgebra;
use crate::par;
use crate::tol::Tolerances;
use crate::{Matrix, Vector};

/// Number of deterministic sphere samples used by [`is_nonsingular`].
pub const SPHERE_SAMPLES: usize = 1000;

#[derive(Debug, Clone)]
pub struct TwoStepDecomposition {
    /// `g`-orthonormal basis of the center, as columns in algebra coordinates.
    pub z_basis: Matrix,
    /// `g`-orthonormal basis of `v = z^⊥`.
    pub v_basis: Matrix,
    /// `j(z_a)` in the `v_basis` coordinates, one per column of `z_basis`.
    pub j_maps: Vec<Matrix>,
}

impl TwoStepDecomposition {
    pub fn center_dim(&self) -> usize {
        self.z_basis.ncols()
    }

    /// `j(z)` for `z` given in `z_basis` coordinates.
    pub fn j_of(&self, z: &[f64]) -> Matrix {
        let p = self.v_basis.ncols();
        self.j_maps
            .iter()
            .zip(z)
            .fold(Matrix::zeros(p, p), |acc, (j, &w)| acc + j * w)
    }

    /// `[v_b, v_c]` rebuilt from the `j` maps, in algebra coordinates.
    pub fn bracket_from_j(&self, b: usize, c: usize) -> Vector {
        let n = self.z_basis.nrows();
        self.j_maps
            .iter()
            .enumerate()
            .fold(Vector::zeros(n), |acc, (a, j)| acc + self.z_basis.column(a) * j[(c, b)])
    }
}

/// `g`-Gram-Schmidt of `vectors`, dropping those that are dependent on earlier ones.
fn gram_schmidt(vectors: impl IntoIterator<Item = Vector>, g: &Matrix, limit: usize) -> Vec<Vector> {
    let inner = |x: &Vector, y: &Vector| (x.transpose() * g * y)[0];
    let mut out: Vec<Vector> = Vec::new();
    for mut v in vectors {
        if out.len() == limit {
            break;
        }
        for w in &out {
            v -= w * inner(&v, w);
        }
        // Second pass for round-off.
        for w in &out {
            v -= w * inner(&v, w);
        }
        let norm = inner(&v, &v).max(0.0).sqrt();
        if norm > 1e-6 {
            out.push(v / norm);
        }
    }
    out
}

fn unit(n: usize, i: usize) -> Vector {
    Vector::from_fn(n, |k, _| if k == i { 1.0 } else { 0.0 })
}

pub fn decompose_two_step(mla: &MetricLieAlgebra, tol: &Tolerances) -> Result<TwoStepDecomposition> {
    let class = mla.alg().nilpotency_class(tol);
    if class != NilpotencyClass::Nilpotent(2) {
        return Err(Error::NotTwoStep(class.to_string()));
    }
    let n = mla.dim();
    let g = mla.metric();
    let center = mla.alg().center(tol);
    let m = center.ncols();
    let proj = &center * center.transpose();
    let z = gram_schmidt((0..n).map(|i| &proj * unit(n, i)), g, m);

    // v = z^⊥: project the input basis away from z.
    let inner = |x: &Vector, y: &Vector| (x.transpose() * g * y)[0];
    let complement = (0..n).map(|i| {
        let mut e = unit(n, i);
        for w in &z {
            e -= w * inner(&e, w);
        }
        e
    });
    let v = gram_schmidt(complement, g, n - m);
    if z.len() != m || v.len() != n - m {
        return Err(Error::Inconsistent(
            "center / complement bases have wrong dimension".into(),
        ));
    }
    let z_basis = Matrix::from_columns(&z);
    let v_basis = Matrix::from_columns(&v);
    let p = v.len();
    let j_maps = z
        .iter()
        .map(|za| {
            Matrix::from_fn(p, p, |c, b| {
                let br = mla.alg().bracket(&v[b], &v[c]);
                inner(za, &br)
            })
        })
        .collect();
    Ok(TwoStepDecomposition {
        z_basis,
        v_basis,
        j_maps,
    })
}

/// Van der Corput radical inverse in `base`.
fn radical_inverse(mut i: usize, base: usize) -> f64 {
    let mut f = 1.0;
    let mut r = 0.0;
    while i > 0 {
        f /= base as f64;
        r += f * (i % base) as f64;
        i /= base;
    }
    r
}

const PRIMES: [usize; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

/// Deterministic low-discrepancy points on the unit sphere of `R^m`.
pub fn sphere_points(m: usize, count: usize) -> Vec<Vec<f64>> {
    match m {
        0 => Vec::new(),
        1 => vec![vec![1.0], vec![-1.0]],
        2 => (0..count)
            .map(|k| {
                let t = std::f64::consts::TAU * (k as f64 + 0.5) / count as f64;
                vec![t.cos(), t.sin()]
            })
            .collect(),
        3 => {
            // Fibonacci lattice.
            let golden = std::f64::consts::PI * (3.0 - 5f64.sqrt());
            (0..count)
                .map(|k| {
                    let y = 1.0 - 2.0 * (k as f64 + 0.5) / count as f64;
                    let r = (1.0 - y * y).sqrt();
                    let t = golden * k as f64;
                    vec![r * t.cos(), y, r * t.sin()]
                })
                .collect()
        }
        _ => (1..)
            .map(|k| {
                (0..m)
                    .map(|d| 2.0 * radical_inverse(k, PRIMES[d % PRIMES.len()]) - 1.0)
                    .collect::<Vec<f64>>()
            })
            .filter_map(|p| {
                let norm = p.iter().map(|x| x * x).sum::<f64>().sqrt();
                (norm > 1e-3 && norm <= 1.0).then(|| p.iter().map(|x| x / norm).collect())
            })
            .take(count)
            .collect(),
    }
}

/// Every `j(z)`, `z ≠ 0`, is invertible: checked on the basis and on
/// [`SPHERE_SAMPLES`] deterministic points of the unit sphere in `z`.
pub fn is_nonsingular(dec: &TwoStepDecomposition, tol: &Tolerances) -> bool {
    if dec.v_basis.ncols() == 0 || dec.center_dim() == 0 {
        return false;
    }
    let ok = |j: &Matrix| linalg::min_singular_value(j) > tol.rank;
    if !dec.j_maps.iter().all(ok) {
        return false;
    }
    let points = sphere_points(dec.center_dim(), SPHERE_SAMPLES);
    par::all(&points, |z| ok(&dec.j_of(z)))
}

/// H-type test in polarized form: `j_a j_b + j_b j_a = -2 δ_ab I` for all basis pairs.
pub fn is_htype(dec: &TwoStepDecomposition, tol: &Tolerances) -> bool {
    let p = dec.v_basis.ncols();
    let m = dec.center_dim();
    if p == 0 {
        return false;
    }
    let id = Matrix::identity(p, p);
    (0..m).all(|a| {
        (a..m).all(|b| {
            let mut s = &dec.j_maps[a] * &dec.j_maps[b] + &dec.j_maps[b] * &dec.j_maps[a];
            if a == b {
                s += &id * 2.0;
            }
            s.norm() <= tol.alg
        })
    })
}

/// `{z ∈ z | j(z) = 0}` as columns in algebra coordinates.
pub fn ricci_kernel_two_step(dec: &TwoStepDecomposition, tol: &Tolerances) -> Matrix {
    let n = dec.z_basis.nrows();
    let cols: Vec<Vector> = dec
        .j_maps
        .iter()
        .map(|j| Vector::from_column_slice(j.as_slice()))
        .collect();
    if cols.is_empty() {
        return Matrix::zeros(n, 0);
    }
    let op = Matrix::from_columns(&cols);
    let null = linalg::nullspace(&op, tol.rank);
    if null.ncols() == 0 {
        return Matrix::zeros(n, 0);
    }
    &dec.z_basis * null
}

/// [`ricci_kernel_two_step`], cross-checked against the kernel of the Ricci endomorphism.
pub fn ricci_kernel_checked(mla: &MetricLieAlgebra, dec: &TwoStepDecomposition, tol: &Tolerances) -> Result<Matrix> {
    let kernel = ricci_kernel_two_step(dec, tol);
    let curv = mla.curvature();
    let ric_kernel = linalg::nullspace(&curv.ricci_endo, tol.rank);
    if ric_kernel.ncols() != kernel.ncols() {
        return Err(Error::Inconsistent(format!(
            "j-map kernel has dimension {}, Ricci kernel {}",
            kernel.ncols(),
            ric_kernel.ncols()
        )));
    }
    if kernel.ncols() > 0 {
        let image = &curv.ricci_endo * &kernel;
        let scale = curv.ricci_endo.amax().max(1.0);
        if image.amax() > tol.rank * scale {
            return Err(Error::Inconsistent(format!(
                "j-map kernel is not annihilated by Ric (residual {:e})",
                image.amax()
            )));
        }
    }
    Ok(kernel)
}

#[derive(Debug, Clone)]
pub struct SolvableExtension {
    pub base: MetricLieAlgebra,
    pub derivation: Matrix,
    pub scale: f64,
    /// `RH ⊕ n` with `H` the last basis vector, unit length and orthogonal to `n`.
    pub extended: MetricLieAlgebra,
}

/// Rank-one extension with `[H, x] = scale · D x`.
pub fn solvable_extension(
    base: &MetricLieAlgebra,
    d: &Matrix,
    scale: f64,
    tol: &Tolerances,
) -> Result<SolvableExtension> {
    let n = base.dim();
    if d.shape() != (n, n) {
        return Err(Error::Dimension(format!("derivation must be {n}x{n}")));
    }
    if scale.is_nan() || scale <= 0.0 {
        return Err(Error::InvalidArgument(format!(
            "extension scale {scale} must be positive"
        )));
    }
    if !base.alg().is_nilpotent(tol) {
        return Err(Error::NotNilpotent);
    }
    let residual = base.alg().derivation_residual(d);
    if residual > tol.alg * d.amax().max(1.0) {
        return Err(Error::NotDerivation(residual));
    }
    let dim = n + 1;
    let mut entries = base.alg().nonzero_brackets();
    for j in 0..n {
        for k in 0..n {
            let v = scale * d[(k, j)];
            if v != 0.0 {
                entries.push((n, j, k, v));
            }
        }
    }
    let alg = LieAlgebra::from_brackets(dim, &entries)?;
    alg.validate(tol)?;
    let mut g = Matrix::identity(dim, dim);
    g.view_mut((0, 0), (n, n)).copy_from(base.metric());
    Ok(SolvableExtension {
        base: base.clone(),
        derivation: d.clone(),
        scale,
        extended: MetricLieAlgebra::new(alg, g)?,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EinsteinCheck {
    pub einstein: bool,
    /// `R / dim`, the Einstein constant when `Ric = lambda_einstein g`.
    pub lambda_einstein: f64,
    /// `|Ric - (R/dim) g|_F`.
    pub residual: f64,
}

pub fn is_einstein(mla: &MetricLieAlgebra, tol: &Tolerances) -> EinsteinCheck {
    let curv = mla.curvature();
    let lambda_einstein = curv.scalar / mla.dim() as f64;
    let residual = (&curv.ricci_form - mla.metric() * lambda_einstein).norm();
    EinsteinCheck {
        einstein: residual <= tol.sol,
        lambda_einstein,
        residual,
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EinsteinScale {
    pub scale: f64,
    pub residual: f64,
    pub found: bool,
}

/// Upper end of the scale search interval.
pub const MAX_EXTENSION_SCALE: f64 = 1e3;
const MIN_EXTENSION_SCALE: f64 = 1e-3;
const GRID_POINTS: usize = 121;

/// Minimises the Einstein residual of [`solvable_extension`] over the scale.
///
/// `s = 1` is preferred when it already gives an Einstein metric; otherwise a
/// logarithmic grid on `[1e-3, 1e3]` is refined by golden-section search.
pub fn find_einstein_scale(base: &MetricLieAlgebra, d: &Matrix, tol: &Tolerances) -> Result<EinsteinScale> {
    let residual_at =
        |s: f64| -> Result<f64> { Ok(is_einstein(&solvable_extension(base, d, s, tol)?.extended, tol).residual) };
    let at_one = residual_at(1.0)?;
    if at_one <= tol.sol {
        return Ok(EinsteinScale {
            scale: 1.0,
            residual: at_one,
            found: true,
        });
    }
    let (lo, hi) = (MIN_EXTENSION_SCALE.ln(), MAX_EXTENSION_SCALE.ln());
    let grid: Vec<f64> = (0..GRID_POINTS)
        .map(|i| (lo + (hi - lo) * i as f64 / (GRID_POINTS - 1) as f64).exp())
        .collect();
    let values = par::map(&grid, |&s| residual_at(s));
    let values: Vec<f64> = values.into_iter().collect::<Result<_>>()?;
    let best = (0..GRID_POINTS)
        .min_by(|&a, &b| values[a].total_cmp(&values[b]))
        .expect("non-empty grid");
    let mut a = grid[best.saturating_sub(1)];
    let mut b = grid[(best + 1).min(GRID_POINTS - 1)];

    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = b - inv_phi * (b - a);
    let mut x2 = a + inv_phi * (b - a);
    let mut f1 = residual_at(x1)?;
    let mut f2 = residual_at(x2)?;
    for _ in 0..200 {
        if (b - a) <= 1e-14 * b {
            break;
        }
        if f1 < f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - inv_phi * (b - a);
            f1 = residual_at(x1)?;
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + inv_phi * (b - a);
            f2 = residual_at(x2)?;
        }
    }
    let (mut scale, mut residual) = if f1 < f2 { (x1, f1) } else { (x2, f2) };
    if values[best] < residual {
        scale = grid[best];
        residual = values[best];
    }
    Ok(EinsteinScale {
        scale,
        residual,
        found: residual <= tol.sol,
    })
}

/// The `g`-self-adjoint part `(D + g^{-1} D^T g) / 2`.
pub fn metric_symmetric_part(d: &Matrix, g: &Matrix) -> Matrix {
    let g_inv = g.clone().try_inverse().expect("metric is positive definite");
    (d + g_inv * d.transpose() * g) * 0.5
}

/// Eigenvalues of a `g`-self-adjoint endomorphism.
pub fn self_adjoint_spectrum(d: &Matrix, g: &Matrix) -> Vec<f64> {
    let half = linalg::spd_power(g, 0.5);
    let inv = linalg::spd_power(g, -0.5);
    let mut ev: Vec<f64> = SymmetricEigen::new(linalg::symmetrize(&(&half * d * inv)))
        .eigenvalues
        .iter()
        .copied()
        .collect();
    ev.sort_by(f64::total_cmp);
    ev
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    fn heis3() -> MetricLieAlgebra {
        MetricLieAlgebra::with_identity(LieAlgebra::from_brackets(3, &[(0, 1, 2, 1.0)]).unwrap())
    }

    fn diag(v: &[f64]) -> Matrix {
        Matrix::from_diagonal(&Vector::from_column_slice(v))
    }

    #[test]
    fn heis3_j_map() {
        let dec = decompose_two_step(&heis3(), &tol()).unwrap();
        assert_eq!(dec.center_dim(), 1);
        let expected = Matrix::from_row_slice(2, 2, &[0.0, -1.0, 1.0, 0.0]);
        assert!((&dec.j_maps[0] - expected).amax() < 1e-12);
        assert!(is_nonsingular(&dec, &tol()));
        assert!(is_htype(&dec, &tol()));
        assert_eq!(ricci_kernel_two_step(&dec, &tol()).ncols(), 0);
    }

    #[test]
    fn abelian_is_not_two_step() {
        let m = MetricLieAlgebra::with_identity(LieAlgebra::abelian(3));
        assert!(matches!(decompose_two_step(&m, &tol()), Err(Error::NotTwoStep(_))));
    }

    #[test]
    fn rescaled_center_breaks_htype() {
        let m = heis3().with_metric(diag(&[1.0, 1.0, 4.0])).unwrap();
        let dec = decompose_two_step(&m, &tol()).unwrap();
        assert!(!is_htype(&dec, &tol()));
        assert!(is_nonsingular(&dec, &tol()));
    }

    #[test]
    fn central_line_is_singular() {
        let m = heis3().direct_sum(&MetricLieAlgebra::with_identity(LieAlgebra::abelian(1)));
        let dec = decompose_two_step(&m, &tol()).unwrap();
        assert_eq!(dec.center_dim(), 2);
        assert!(!is_nonsingular(&dec, &tol()));
        let k = ricci_kernel_checked(&m, &dec, &tol()).unwrap();
        assert_eq!(k.ncols(), 1);
        assert!((k[(3, 0)].abs() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn sphere_points_are_unit() {
        for m in 1..=5 {
            let pts = sphere_points(m, 200);
            assert!(!pts.is_empty());
            for p in pts {
                let n: f64 = p.iter().map(|x| x * x).sum();
                assert!((n - 1.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn hyperbolic_plane_extension() {
        let base = MetricLieAlgebra::with_identity(LieAlgebra::abelian(1));
        let ext = solvable_extension(&base, &diag(&[1.0]), 1.0, &tol()).unwrap();
        let check = is_einstein(&ext.extended, &tol());
        assert!(check.einstein);
        assert!((check.lambda_einstein + 1.0).abs() < 1e-12);
    }

    #[test]
    fn extension_rejects_non_derivation() {
        let d = diag(&[1.0, 1.0, 1.0]);
        assert!(matches!(
            solvable_extension(&heis3(), &d, 1.0, &tol()),
            Err(Error::NotDerivation(_))
        ));
    }

    #[test]
    fn heis3_einstein_scale() {
        let found = find_einstein_scale(&heis3(), &diag(&[1.0, 1.0, 2.0]), &tol()).unwrap();
        assert!(found.found, "{found:?}");
        assert!((found.scale - 0.5).abs() < 1e-6);
        let none = find_einstein_scale(&heis3(), &Matrix::zeros(3, 3), &tol()).unwrap();
        assert!(!none.found);
    }
}
