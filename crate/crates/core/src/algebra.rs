//! Lie algebras given by structure constants `[e_i, e_j] = sum_k c[i][j][k] e_k`.

use std::fmt;

use crate::error::{Error, Result};
use crate::linalg;
use crate::tol::Tolerances;
use crate::{Matrix, Vector};

#[derive(Debug, Clone, PartialEq)]
pub struct LieAlgebra {
    dim: usize,
    /// Flattened `c[i][j][k]` at `(i * dim + j) * dim + k`.
    c: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NilpotencyClass {
    Nilpotent(usize),
    NotNilpotent,
}

impl NilpotencyClass {
    pub fn step(self) -> Option<usize> {
        match self {
            Self::Nilpotent(s) => Some(s),
            Self::NotNilpotent => None,
        }
    }
}

impl fmt::Display for NilpotencyClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Nilpotent(s) => write!(f, "{s}"),
            Self::NotNilpotent => f.write_str("not nilpotent"),
        }
    }
}

/// A basis of `Der(g)`, each element a `dim x dim` matrix acting on coordinate columns.
#[derive(Debug, Clone)]
pub struct DerivationSpace {
    pub basis: Vec<Matrix>,
}

impl DerivationSpace {
    pub fn dimension(&self) -> usize {
        self.basis.len()
    }
}

impl LieAlgebra {
    /// Builds an algebra from a dense tensor, checking antisymmetry to `tol.alg`.
    /// The Jacobi identity is checked separately by [`LieAlgebra::validate`].
    pub fn from_tensor(dim: usize, c: Vec<f64>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::Dimension("algebra dimension must be positive".into()));
        }
        if c.len() != dim * dim * dim {
            return Err(Error::Dimension(format!(
                "structure tensor has {} entries, expected {}",
                c.len(),
                dim * dim * dim
            )));
        }
        let tol = Tolerances::default().alg;
        for i in 0..dim {
            for j in i..dim {
                for k in 0..dim {
                    let a = c[(i * dim + j) * dim + k];
                    let b = c[(j * dim + i) * dim + k];
                    if (a + b).abs() > tol {
                        return Err(Error::Antisymmetry { i, j, k, a, b });
                    }
                }
            }
        }
        Ok(Self { dim, c })
    }

    /// Builds an algebra from bracket entries `(i, j, k, value)` meaning
    /// `c[i][j][k] = value`, completed antisymmetrically. Indices are 0-based.
    pub fn from_brackets(dim: usize, entries: &[(usize, usize, usize, f64)]) -> Result<Self> {
        if dim == 0 {
            return Err(Error::Dimension("algebra dimension must be positive".into()));
        }
        let mut c = vec![0.0; dim * dim * dim];
        for &(i, j, k, v) in entries {
            if i >= dim || j >= dim || k >= dim {
                return Err(Error::Dimension(format!(
                    "bracket index ({i}, {j}, {k}) out of range for dimension {dim}"
                )));
            }
            if i == j {
                if v != 0.0 {
                    return Err(Error::Antisymmetry { i, j, k, a: v, b: v });
                }
                continue;
            }
            c[(i * dim + j) * dim + k] += v;
            c[(j * dim + i) * dim + k] -= v;
        }
        Ok(Self { dim, c })
    }

    pub fn abelian(dim: usize) -> Self {
        Self {
            dim: dim.max(1),
            c: vec![0.0; dim.max(1).pow(3)],
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn structure(&self, i: usize, j: usize, k: usize) -> f64 {
        self.c[(i * self.dim + j) * self.dim + k]
    }

    pub fn tensor(&self) -> &[f64] {
        &self.c
    }

    pub fn is_abelian(&self) -> bool {
        self.c.iter().all(|&x| x == 0.0)
    }

    /// Nonzero entries `(i, j, k, c[i][j][k])` with `i < j`.
    pub fn nonzero_brackets(&self) -> Vec<(usize, usize, usize, f64)> {
        let n = self.dim;
        let mut out = Vec::new();
        for i in 0..n {
            for j in (i + 1)..n {
                for k in 0..n {
                    let v = self.structure(i, j, k);
                    if v != 0.0 {
                        out.push((i, j, k, v));
                    }
                }
            }
        }
        out
    }

    /// `[e_i, e_j]` as a coordinate vector.
    pub fn bracket_basis(&self, i: usize, j: usize) -> Vector {
        let n = self.dim;
        Vector::from_fn(n, |k, _| self.structure(i, j, k))
    }

    pub fn bracket(&self, x: &Vector, y: &Vector) -> Vector {
        let n = self.dim;
        let mut out = Vector::zeros(n);
        for i in 0..n {
            if x[i] == 0.0 {
                continue;
            }
            for j in 0..n {
                let w = x[i] * y[j];
                if w == 0.0 {
                    continue;
                }
                for k in 0..n {
                    out[k] += w * self.structure(i, j, k);
                }
            }
        }
        out
    }

    /// Matrix of `ad e_i`, column `j` holding `[e_i, e_j]`.
    pub fn ad_basis(&self, i: usize) -> Matrix {
        let n = self.dim;
        Matrix::from_fn(n, n, |k, j| self.structure(i, j, k))
    }

    pub fn ad(&self, x: &Vector) -> Matrix {
        let n = self.dim;
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            if x[i] != 0.0 {
                m += self.ad_basis(i) * x[i];
            }
        }
        m
    }

    /// Largest Jacobi residual over basis triples, with the offending triple.
    pub fn jacobi_worst(&self) -> (f64, (usize, usize, usize)) {
        let n = self.dim;
        let mut worst = (0.0, (0, 0, 0));
        for i in 0..n {
            for j in (i + 1)..n {
                for k in (j + 1)..n {
                    let r = self.jacobi_triple(i, j, k);
                    if r > worst.0 {
                        worst = (r, (i, j, k));
                    }
                }
            }
        }
        worst
    }

    fn jacobi_triple(&self, i: usize, j: usize, k: usize) -> f64 {
        let n = self.dim;
        let mut acc = 0.0;
        for l in 0..n {
            let mut s = 0.0;
            for m in 0..n {
                s += self.structure(i, j, m) * self.structure(m, k, l)
                    + self.structure(j, k, m) * self.structure(m, i, l)
                    + self.structure(k, i, m) * self.structure(m, j, l);
            }
            acc += s * s;
        }
        acc.sqrt()
    }

    /// Maximum norm of `[[x,y],z] + [[y,z],x] + [[z,x],y]` over basis triples.
    ///
    /// Triples with a repeated index vanish by antisymmetry, so only `i < j < k` are visited.
    pub fn check_jacobi(&self) -> f64 {
        self.jacobi_worst().0
    }

    /// Rejects the algebra when the Jacobi residual exceeds `tol.alg`.
    pub fn validate(&self, tol: &Tolerances) -> Result<()> {
        let (residual, (i, j, k)) = self.jacobi_worst();
        if residual > tol.alg {
            return Err(Error::Jacobi { i, j, k, residual });
        }
        Ok(())
    }

    /// `tr(ad e_i)` for each basis vector.
    pub fn trace_form(&self) -> Vector {
        Vector::from_fn(self.dim, |i, _| self.ad_basis(i).trace())
    }

    pub fn is_unimodular(&self, tol: &Tolerances) -> bool {
        self.trace_form().iter().all(|t| t.abs() <= tol.alg)
    }

    /// Orthonormal basis of `[g, W]` for a subspace `W` given by columns.
    /// Rank cutoff for bracket spans; relative to the structure constants so that
    /// roundoff in an orthonormalized subspace does not survive another bracket.
    fn span_cutoff(&self, rel_tol: f64) -> f64 {
        let scale = self.c.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
        rel_tol * scale.max(1.0)
    }

    fn bracket_with_algebra(&self, w: &Matrix, rel_tol: f64) -> Matrix {
        let n = self.dim;
        let mut cols = Vec::with_capacity(n * w.ncols());
        for i in 0..n {
            let ad = self.ad_basis(i);
            for c in 0..w.ncols() {
                cols.push(&ad * w.column(c));
            }
        }
        if cols.is_empty() {
            return Matrix::zeros(n, 0);
        }
        linalg::column_space_above(&Matrix::from_columns(&cols), self.span_cutoff(rel_tol))
    }

    /// Dimensions of `g ⊇ [g,g] ⊇ [g,[g,g]] ⊇ ...` and the nilpotency class.
    ///
    /// The list ends at the first zero (nilpotent) or at the stable dimension.
    pub fn lower_central_series(&self, tol: &Tolerances) -> (Vec<usize>, NilpotencyClass) {
        let n = self.dim;
        let mut current = Matrix::identity(n, n);
        let mut dims = vec![n];
        loop {
            let next = self.bracket_with_algebra(&current, tol.rank);
            let d = next.ncols();
            if d == 0 {
                dims.push(0);
                let class = dims.len() - 1;
                return (dims, NilpotencyClass::Nilpotent(class));
            }
            if d == current.ncols() {
                return (dims, NilpotencyClass::NotNilpotent);
            }
            dims.push(d);
            current = next;
        }
    }

    pub fn nilpotency_class(&self, tol: &Tolerances) -> NilpotencyClass {
        self.lower_central_series(tol).1
    }

    pub fn is_nilpotent(&self, tol: &Tolerances) -> bool {
        matches!(self.nilpotency_class(tol), NilpotencyClass::Nilpotent(_))
    }

    /// Dimensions of the derived series `g ⊇ [g,g] ⊇ [[g,g],[g,g]] ⊇ ...`.
    pub fn derived_series(&self, tol: &Tolerances) -> Vec<usize> {
        let n = self.dim;
        let mut current = Matrix::identity(n, n);
        let mut dims = vec![n];
        loop {
            let mut cols = Vec::new();
            for a in 0..current.ncols() {
                for b in (a + 1)..current.ncols() {
                    cols.push(self.bracket(&current.column(a).into(), &current.column(b).into()));
                }
            }
            let next = if cols.is_empty() {
                Matrix::zeros(n, 0)
            } else {
                linalg::column_space_above(&Matrix::from_columns(&cols), self.span_cutoff(tol.rank))
            };
            let d = next.ncols();
            if d == 0 {
                dims.push(0);
                return dims;
            }
            if d == current.ncols() {
                return dims;
            }
            dims.push(d);
            current = next;
        }
    }

    pub fn is_solvable(&self, tol: &Tolerances) -> bool {
        self.derived_series(tol).last() == Some(&0)
    }

    /// Orthonormal (standard coordinates) basis of the center, as columns.
    pub fn center(&self, tol: &Tolerances) -> Matrix {
        let n = self.dim;
        let mut stacked = Matrix::zeros(n * n, n);
        for i in 0..n {
            stacked.view_mut((i * n, 0), (n, n)).copy_from(&self.ad_basis(i));
        }
        linalg::nullspace(&stacked, tol.rank)
    }

    /// Matrix of the linear map `D ↦ (D[e_i,e_j] - [De_i,e_j] - [e_i,De_j])_{i<j}`
    /// acting on `D` flattened row-major (`D[k][l]` at `k * dim + l`).
    pub fn derivation_operator(&self) -> Matrix {
        let n = self.dim;
        let pairs = n * n.saturating_sub(1) / 2;
        let mut op = Matrix::zeros(pairs * n, n * n);
        let mut row = 0;
        for i in 0..n {
            for j in (i + 1)..n {
                for k in 0..n {
                    for m in 0..n {
                        op[(row, k * n + m)] += self.structure(i, j, m);
                        op[(row, m * n + i)] -= self.structure(m, j, k);
                        op[(row, m * n + j)] -= self.structure(i, m, k);
                    }
                    row += 1;
                }
            }
        }
        op
    }

    /// Largest coordinate of `D[e_i,e_j] - [De_i,e_j] - [e_i,De_j]` over basis pairs.
    pub fn derivation_residual(&self, d: &Matrix) -> f64 {
        let n = self.dim;
        let mut worst: f64 = 0.0;
        for i in 0..n {
            for j in (i + 1)..n {
                let lhs = d * self.bracket_basis(i, j);
                let a = self.bracket(&d.column(i).into(), &Vector::from_fn(n, |k, _| (k == j) as u8 as f64));
                let b = self.bracket(&Vector::from_fn(n, |k, _| (k == i) as u8 as f64), &d.column(j).into());
                worst = worst.max((lhs - a - b).amax());
            }
        }
        worst
    }

    pub fn derivation_algebra(&self, tol: &Tolerances) -> DerivationSpace {
        let n = self.dim;
        let null = linalg::nullspace(&self.derivation_operator(), tol.rank);
        let basis = (0..null.ncols())
            .map(|c| Matrix::from_row_slice(n, n, null.column(c).as_slice()))
            .collect();
        DerivationSpace { basis }
    }

    /// The same algebra written in the basis `f_a = sum_i p[i][a] e_i`.
    pub fn change_basis(&self, p: &Matrix) -> Result<Self> {
        let n = self.dim;
        if p.shape() != (n, n) {
            return Err(Error::Dimension(format!("change of basis must be {n}x{n}")));
        }
        let p_inv = p
            .clone()
            .try_inverse()
            .ok_or_else(|| Error::InvalidArgument("change of basis is singular".into()))?;
        let mut c = vec![0.0; n * n * n];
        for a in 0..n {
            for b in 0..n {
                let br = self.bracket(&p.column(a).into(), &p.column(b).into());
                let coords = &p_inv * br;
                for k in 0..n {
                    c[(a * n + b) * n + k] = coords[k];
                }
            }
        }
        // Exact antisymmetry; round-off may break it at the last bit.
        for a in 0..n {
            for b in a..n {
                for k in 0..n {
                    let v = 0.5 * (c[(a * n + b) * n + k] - c[(b * n + a) * n + k]);
                    c[(a * n + b) * n + k] = v;
                    c[(b * n + a) * n + k] = -v;
                }
            }
        }
        Ok(Self { dim: n, c })
    }

    /// Direct sum `self ⊕ other`, with `other`'s basis appended after `self`'s.
    pub fn direct_sum(&self, other: &LieAlgebra) -> Self {
        let (n1, n2) = (self.dim, other.dim);
        let n = n1 + n2;
        let mut c = vec![0.0; n * n * n];
        for i in 0..n1 {
            for j in 0..n1 {
                for k in 0..n1 {
                    c[(i * n + j) * n + k] = self.structure(i, j, k);
                }
            }
        }
        for i in 0..n2 {
            for j in 0..n2 {
                for k in 0..n2 {
                    c[((i + n1) * n + j + n1) * n + k + n1] = other.structure(i, j, k);
                }
            }
        }
        Self { dim: n, c }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn heis3() -> LieAlgebra {
        LieAlgebra::from_brackets(3, &[(0, 1, 2, 1.0)]).unwrap()
    }

    fn sol3() -> LieAlgebra {
        LieAlgebra::from_brackets(3, &[(2, 0, 0, 1.0), (2, 1, 1, -1.0)]).unwrap()
    }

    fn sl2r() -> LieAlgebra {
        LieAlgebra::from_brackets(3, &[(0, 1, 1, 2.0), (0, 2, 2, -2.0), (1, 2, 0, 1.0)]).unwrap()
    }

    #[test]
    fn jacobi_residuals() {
        assert_eq!(LieAlgebra::abelian(3).check_jacobi(), 0.0);
        assert_eq!(heis3().check_jacobi(), 0.0);
        // [e1,e3] = e2 on top of heis3 is still a Lie algebra (R acting on R^2)...
        let semidirect = LieAlgebra::from_brackets(3, &[(0, 1, 2, 1.0), (0, 2, 1, 1.0)]).unwrap();
        assert_eq!(semidirect.check_jacobi(), 0.0);
        // ...while [e1,e3] = e1 leaves [[e3,e1],e2] = -e3 uncancelled.
        let broken = LieAlgebra::from_brackets(3, &[(0, 1, 2, 1.0), (0, 2, 0, 1.0)]).unwrap();
        assert!(broken.check_jacobi() >= 1.0);
        assert!(matches!(
            broken.validate(&Tolerances::default()),
            Err(Error::Jacobi { i: 0, j: 1, k: 2, .. })
        ));
    }

    #[test]
    fn antisymmetry_violation_names_entry() {
        let mut c = vec![0.0; 8];
        c[1] = 1.0; // c[0][0][1]
        let err = LieAlgebra::from_tensor(2, c).unwrap_err();
        assert!(matches!(err, Error::Antisymmetry { i: 0, j: 0, k: 1, .. }));
    }

    #[test]
    fn unimodularity() {
        let tol = Tolerances::default();
        assert!(heis3().is_unimodular(&tol));
        assert!(LieAlgebra::abelian(5).is_unimodular(&tol));
        let milnor = LieAlgebra::from_brackets(3, &[(0, 1, 1, 1.0), (0, 2, 2, 1.0)]).unwrap();
        assert!(!milnor.is_unimodular(&tol));
    }

    #[test]
    fn series() {
        let tol = Tolerances::default();
        assert_eq!(
            heis3().lower_central_series(&tol),
            (vec![3, 1, 0], NilpotencyClass::Nilpotent(2))
        );
        assert_eq!(
            LieAlgebra::abelian(4).lower_central_series(&tol),
            (vec![4, 0], NilpotencyClass::Nilpotent(1))
        );
        let (dims, class) = sol3().lower_central_series(&tol);
        assert_eq!(dims, vec![3, 2]);
        assert_eq!(class, NilpotencyClass::NotNilpotent);
        assert!(sol3().is_solvable(&tol));
        assert!(!sl2r().is_solvable(&tol));
    }

    #[test]
    fn centers() {
        let tol = Tolerances::default();
        let z = heis3().center(&tol);
        assert_eq!(z.ncols(), 1);
        assert!((z[(2, 0)].abs() - 1.0).abs() < 1e-12);
        assert_eq!(LieAlgebra::abelian(4).center(&tol).ncols(), 4);
        assert_eq!(sl2r().center(&tol).ncols(), 0);
    }

    #[test]
    fn derivation_dimensions() {
        let tol = Tolerances::default();
        assert_eq!(heis3().derivation_algebra(&tol).dimension(), 6);
        assert_eq!(LieAlgebra::abelian(3).derivation_algebra(&tol).dimension(), 9);
        assert_eq!(sl2r().derivation_algebra(&tol).dimension(), 3);
        let der = heis3().derivation_algebra(&tol);
        for d in &der.basis {
            assert!(heis3().derivation_residual(d) < 1e-12);
            // D e3 = (a + d) e3
            assert!((d[(2, 2)] - d[(0, 0)] - d[(1, 1)]).abs() < 1e-12);
        }
    }

    #[test]
    fn change_basis_permutation_preserves_jacobi() {
        let alg = sl2r();
        let p = Matrix::from_row_slice(3, 3, &[0.0, 1.0, 0.0, 0.0, 0.0, 1.0, 1.0, 0.0, 0.0]);
        let q = alg.change_basis(&p).unwrap();
        assert!(q.check_jacobi() < 1e-12);
        assert_eq!(q.derivation_algebra(&Tolerances::default()).dimension(), 3);
    }
}
