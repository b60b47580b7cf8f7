//! Algebraic soliton structure of left-invariant metrics.
//!
//! Two feasibility problems are solved by linear least squares:
//!
//! * the nilsoliton equation `Ric = cI + D` with `D ∈ Der(n)`, and
//! * the soliton equation `-2 Ric = 2 lambda g + L_X g` restricted to
//!   left-invariant `X`.
//!
//! A nilsoliton `(c, D)` corresponds to the soliton constant `lambda = -c`:
//! the field generated by the automorphisms `exp(-tD)` (with `D` symmetric)
//! has `L_X g = -2 g D`, and substituting gives `-2(cI + D) = 2 lambda I - 2 D`.

use std::fmt;

use crate::error::{Error, Result};
use crate::linalg;
use crate::metric::{CurvaturePackage, MetricLieAlgebra};
use crate::tol::Tolerances;
use crate::{Matrix, Vector};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Nilsoliton,
    LeftInvariantField,
    Einstein,
    /// Residual between `tol.sol` and `10 tol.sol`; no decision is made.
    Ambiguous,
    Infeasible,
}

impl Verdict {
    pub fn is_feasible(self) -> bool {
        matches!(self, Self::Nilsoliton | Self::LeftInvariantField | Self::Einstein)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Self::Nilsoliton => "nilsoliton",
            Self::LeftInvariantField => "left-invariant-field",
            Self::Einstein => "einstein",
            Self::Ambiguous => "ambiguous",
            Self::Infeasible => "infeasible",
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolitonType {
    Expanding,
    Steady,
    Shrinking,
    /// Flat metric; the soliton structure is the trivial one.
    Trivial,
}

impl SolitonType {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::Expanding => "expanding",
            Self::Steady => "steady",
            Self::Shrinking => "shrinking",
            Self::Trivial => "trivial",
        }
    }
}

impl fmt::Display for SolitonType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone)]
pub struct SolitonCertificate {
    pub verdict: Verdict,
    /// Nilsoliton constant `c`.
    pub c: Option<f64>,
    /// The derivation `D` of a nilsoliton, in the input basis.
    pub derivation: Option<Matrix>,
    /// Left-invariant field `X` (coordinates) for the soliton-equation solve.
    pub field: Option<Vector>,
    pub lambda: Option<f64>,
    /// Optimal Frobenius residual of the feasibility problem.
    pub residual: f64,
    pub soliton_type: Option<SolitonType>,
    pub scalar: f64,
    /// Whether `sign(R) = -sign(lambda)` holds for a feasible certificate.
    pub sign_consistent: bool,
}

/// Type of a soliton with constant `lambda`, and whether the scalar curvature
/// sign agrees with it (`sign(R0) = -sign(lambda)`).
pub fn classify_soliton_type(r0: f64, lambda: f64, tol: &Tolerances) -> (SolitonType, bool) {
    let sign = |x: f64| {
        if x > tol.rank {
            1
        } else if x < -tol.rank {
            -1
        } else {
            0
        }
    };
    let kind = match sign(lambda) {
        1 => SolitonType::Expanding,
        -1 => SolitonType::Shrinking,
        _ => SolitonType::Steady,
    };
    (kind, sign(r0) == -sign(lambda))
}

fn decide(residual: f64, tol: &Tolerances, feasible: Verdict) -> Verdict {
    if residual <= tol.sol {
        feasible
    } else if residual > tol.infeasible_margin() {
        Verdict::Infeasible
    } else {
        Verdict::Ambiguous
    }
}

fn trivial_einstein(curv: &CurvaturePackage, n: usize, residual: f64) -> SolitonCertificate {
    SolitonCertificate {
        verdict: Verdict::Einstein,
        c: Some(0.0),
        derivation: Some(Matrix::zeros(n, n)),
        field: Some(Vector::zeros(n)),
        lambda: Some(0.0),
        residual,
        soliton_type: Some(SolitonType::Trivial),
        scalar: curv.scalar,
        sign_consistent: true,
    }
}

/// Solves `Ric = cI + D`, `D ∈ Der(n)`, for a nilpotent metric Lie algebra.
pub fn solve_nilsoliton(mla: &MetricLieAlgebra, tol: &Tolerances) -> Result<SolitonCertificate> {
    solve_nilsoliton_with(mla, &mla.curvature(), tol)
}

/// [`solve_nilsoliton`] with a precomputed curvature package.
pub fn solve_nilsoliton_with(
    mla: &MetricLieAlgebra,
    curv: &CurvaturePackage,
    tol: &Tolerances,
) -> Result<SolitonCertificate> {
    if !mla.alg().is_nilpotent(tol) {
        return Err(Error::NotNilpotent);
    }
    let n = mla.dim();
    let ric = &curv.ricci_endo;
    let ric_norm = ric.norm();
    if ric_norm <= tol.sol {
        return Ok(trivial_einstein(curv, n, ric_norm));
    }
    let (c, d, residual) = nilsoliton_least_squares(mla, ric, tol);
    let verdict = decide(residual, tol, Verdict::Nilsoliton);
    let lambda = -c;
    let (kind, consistent) = classify_soliton_type(curv.scalar, lambda, tol);
    let feasible = verdict.is_feasible();
    Ok(SolitonCertificate {
        verdict,
        c: Some(c),
        derivation: Some(d),
        field: None,
        lambda: Some(lambda),
        residual,
        soliton_type: feasible.then_some(kind),
        scalar: curv.scalar,
        sign_consistent: consistent,
    })
}

/// `min over (c, D ∈ Der) of |ric - cI - D|_F`, returning the minimiser and residual.
fn nilsoliton_least_squares(mla: &MetricLieAlgebra, ric: &Matrix, tol: &Tolerances) -> (f64, Matrix, f64) {
    let n = mla.dim();
    let der = mla.alg().derivation_algebra(tol);
    let mut cols: Vec<Vector> = Vec::with_capacity(der.dimension() + 1);
    cols.push(Vector::from_column_slice(Matrix::identity(n, n).as_slice()));
    cols.extend(der.basis.iter().map(|b| Vector::from_column_slice(b.as_slice())));
    let design = Matrix::from_columns(&cols);
    let target = Vector::from_column_slice(ric.as_slice());
    let coef = linalg::lstsq(&design, &target, tol.rank);
    let c = coef[0];
    let mut d = Matrix::zeros(n, n);
    for (m, b) in der.basis.iter().enumerate() {
        d += b * coef[m + 1];
    }
    let residual = (ric - Matrix::identity(n, n) * c - &d).norm();
    (c, d, residual)
}

/// `|-2 Ric - 2 lambda g + 2 g D_sym|_F` for a nilsoliton certificate, where
/// `D_sym` is the `g`-self-adjoint part of `D`. Vanishes when `(c, D)` induces
/// a soliton with `lambda = -c`.
pub fn automorphism_bridge_residual(
    mla: &MetricLieAlgebra,
    curv: &CurvaturePackage,
    cert: &SolitonCertificate,
) -> Option<f64> {
    let (lambda, d) = (cert.lambda?, cert.derivation.as_ref()?);
    let g = mla.metric();
    let g_inv = g.clone().try_inverse()?;
    let d_sym = (d + &g_inv * d.transpose() * g) * 0.5;
    Some((&curv.ricci_form * -2.0 - g * (2.0 * lambda) + g * d_sym * 2.0).norm())
}

/// Solves `-2 Ric = 2 lambda g + L_X g` over left-invariant `X`.
pub fn solve_left_invariant_field(mla: &MetricLieAlgebra, tol: &Tolerances) -> SolitonCertificate {
    solve_left_invariant_field_with(mla, &mla.curvature(), tol)
}

pub fn solve_left_invariant_field_with(
    mla: &MetricLieAlgebra,
    curv: &CurvaturePackage,
    tol: &Tolerances,
) -> SolitonCertificate {
    let n = mla.dim();
    let g = mla.metric();
    let target = &curv.ricci_form * -2.0;

    let lambda_e = -curv.scalar / n as f64;
    let einstein_residual = (&target - g * (2.0 * lambda_e)).norm();
    if einstein_residual <= tol.sol {
        let (kind, consistent) = classify_soliton_type(curv.scalar, lambda_e, tol);
        let kind = if curv.is_flat(tol) { SolitonType::Trivial } else { kind };
        return SolitonCertificate {
            verdict: Verdict::Einstein,
            c: None,
            derivation: None,
            field: Some(Vector::zeros(n)),
            lambda: Some(lambda_e),
            residual: einstein_residual,
            soliton_type: Some(kind),
            scalar: curv.scalar,
            sign_consistent: consistent,
        };
    }

    let mut cols = Vec::with_capacity(n + 1);
    cols.push(Vector::from_column_slice((g * 2.0).as_slice()));
    for m in 0..n {
        let e = Vector::from_fn(n, |k, _| if k == m { 1.0 } else { 0.0 });
        cols.push(Vector::from_column_slice(mla.lie_derivative_metric(&e).as_slice()));
    }
    let design = Matrix::from_columns(&cols);
    let rhs = Vector::from_column_slice(target.as_slice());
    let u = linalg::lstsq(&design, &rhs, tol.rank);
    let residual = (&design * &u - &rhs).norm();
    let lambda = u[0];
    let x = u.rows(1, n).into_owned();
    let lx = mla.lie_derivative_metric(&x);

    let nontrivial = x.norm() > tol.rank && lx.norm() > tol.rank;
    let mut verdict = decide(residual, tol, Verdict::LeftInvariantField);
    if verdict == Verdict::LeftInvariantField && !nontrivial {
        // Killing part only: the metric would have to be Einstein, which was excluded above.
        verdict = Verdict::Ambiguous;
    }
    let (kind, consistent) = classify_soliton_type(curv.scalar, lambda, tol);
    SolitonCertificate {
        verdict,
        c: None,
        derivation: None,
        field: Some(x),
        lambda: Some(lambda),
        residual,
        soliton_type: verdict.is_feasible().then_some(kind),
        scalar: curv.scalar,
        sign_consistent: consistent,
    }
}

/// Orthonormal frame of a 3-dimensional nonunimodular metric Lie algebra in
/// which `[e1,e2] = αe2 + βe3`, `[e1,e3] = γe2 + δe3`, `[e2,e3] = 0`.
#[derive(Debug, Clone)]
pub struct MilnorFrame {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    pub delta: f64,
    /// Columns are the frame vectors in input coordinates.
    pub frame: Matrix,
}

impl MilnorFrame {
    /// The constraint `αγ + βδ`, zero for a valid frame.
    pub fn orthogonality_defect(&self) -> f64 {
        self.alpha * self.gamma + self.beta * self.delta
    }
}

pub fn milnor_frame(mla: &MetricLieAlgebra, tol: &Tolerances) -> Result<MilnorFrame> {
    if mla.dim() != 3 {
        return Err(Error::Dimension(format!(
            "Milnor frames need a 3-dimensional algebra, got {}",
            mla.dim()
        )));
    }
    if mla.alg().is_unimodular(tol) {
        return Err(Error::Unimodular);
    }
    let g = mla.metric();
    let g_inv = g.clone().try_inverse().expect("metric is positive definite");
    let u = &g_inv * mla.alg().trace_form();
    let e1 = &u / mla.inner(&u, &u).sqrt();

    // g-orthonormal basis of the unimodular kernel, Gram-Schmidt over the projected input basis.
    let mut kernel: Vec<Vector> = Vec::with_capacity(2);
    for k in 0..3 {
        let mut p = Vector::from_fn(3, |i, _| if i == k { 1.0 } else { 0.0 });
        p -= &e1 * mla.inner(&p, &e1);
        for w in &kernel {
            p -= w * mla.inner(&p, w);
        }
        let norm = mla.inner(&p, &p).sqrt();
        if norm > 1e-6 {
            kernel.push(p / norm);
        }
        if kernel.len() == 2 {
            break;
        }
    }
    let mut frame = Matrix::from_columns(&[e1, kernel[0].clone(), kernel[1].clone()]);

    let in_frame = mla.alg().change_basis(&frame)?;
    let a = Matrix::from_row_slice(
        2,
        2,
        &[
            in_frame.structure(0, 1, 1),
            in_frame.structure(0, 2, 1),
            in_frame.structure(0, 1, 2),
            in_frame.structure(0, 2, 2),
        ],
    );
    let ata = a.transpose() * &a;
    let eig = nalgebra::SymmetricEigen::new(ata.clone());
    let (l0, l1) = (eig.eigenvalues[0], eig.eigenvalues[1]);
    let scale = ata.amax().max(1.0);
    if (l0 - l1).abs() > tol.rank * scale {
        // Right singular vectors of ad(e1) on the kernel make αγ + βδ vanish.
        let mut order = [0usize, 1];
        order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
        let mut rot = Matrix::zeros(2, 2);
        for (c, &i) in order.iter().enumerate() {
            let mut v = eig.eigenvectors.column(i).into_owned();
            linalg::canonical_sign(&mut v);
            rot.set_column(c, &v);
        }
        if rot.determinant() < 0.0 {
            let flipped = -rot.column(1);
            rot.set_column(1, &flipped);
        }
        let k0 = frame.column(1).into_owned();
        let k1 = frame.column(2).into_owned();
        frame.set_column(1, &(&k0 * rot[(0, 0)] + &k1 * rot[(1, 0)]));
        frame.set_column(2, &(&k0 * rot[(0, 1)] + &k1 * rot[(1, 1)]));
    }

    let alg = mla.alg().change_basis(&frame)?;
    let defect = (0..3)
        .map(|k| alg.structure(1, 2, k).abs())
        .chain((0..3).map(|j| alg.structure(0, j, 0).abs()))
        .fold(0.0, f64::max);
    if defect > tol.alg.max(1e-9 * scale) {
        return Err(Error::Inconsistent(format!(
            "unimodular kernel is not an abelian ideal (defect {defect:e})"
        )));
    }
    let mf = MilnorFrame {
        alpha: alg.structure(0, 1, 1),
        beta: alg.structure(0, 1, 2),
        gamma: alg.structure(0, 2, 1),
        delta: alg.structure(0, 2, 2),
        frame,
    };
    if mf.orthogonality_defect().abs() > tol.alg.max(1e-9 * scale) {
        return Err(Error::Inconsistent(format!(
            "Milnor frame constraint αγ+βδ = {:e}",
            mf.orthogonality_defect()
        )));
    }
    Ok(mf)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GradientVerdict {
    NotGradient,
    Inconclusive,
}

impl GradientVerdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::NotGradient => "not-gradient",
            Self::Inconclusive => "inconclusive",
        }
    }
}

impl fmt::Display for GradientVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone)]
pub struct GradientReport {
    pub ricci_nondegenerate: bool,
    pub min_abs_ricci_eigenvalue: f64,
    /// Dimension of the left-invariant flat factor.
    pub flat_factor_dim: usize,
    pub verdict: GradientVerdict,
}

/// Obstructions to a left-invariant gradient soliton: a nondegenerate Ricci
/// tensor, or no left-invariant flat factor.
pub fn gradient_obstruction(mla: &MetricLieAlgebra, tol: &Tolerances) -> GradientReport {
    gradient_obstruction_with(mla, &mla.curvature(), tol)
}

pub fn gradient_obstruction_with(mla: &MetricLieAlgebra, curv: &CurvaturePackage, tol: &Tolerances) -> GradientReport {
    let min_abs = curv
        .ricci_spectrum
        .iter()
        .map(|x| x.abs())
        .fold(f64::INFINITY, f64::min);
    let ricci_nondegenerate = min_abs > tol.rank;
    let flat_factor_dim = mla.euclidean_factor(tol).ncols();
    let verdict = if ricci_nondegenerate || flat_factor_dim == 0 {
        GradientVerdict::NotGradient
    } else {
        GradientVerdict::Inconclusive
    };
    GradientReport {
        ricci_nondegenerate,
        min_abs_ricci_eigenvalue: min_abs,
        flat_factor_dim,
        verdict,
    }
}
